"""
Sequent calculi for the causal I/O logics: proof search, an independent
checker, and translation of sequent derivations into native I/O derivations.

Pair elimination removes one premise (A, X) from G |- B / Y:
  family 2: G |- B & !A / Y     and  G |- B / Y | !X
  family 4: G |- B & !A / Y     and  G |- B & X / Y | !X
  family 1: B => A              and  G |- B / Y | !X
  family 3: B => A              and  G |- B & X / Y | !X
IN closes a sequent when B => holds, OUT when => Y holds.
"""

from __future__ import annotations

from dataclasses import dataclass
import logging

from config import Settings, current_settings
from errors import CapExceededError
from formula import BOT, And, Formula, Not, Or
from io_theory import (
    CheckResult,
    IOPair,
    IOSequent,
    NativeNode,
    PASSED,
    and_,
    bot_axiom,
    cut_through,
    failed,
    or_,
    premise,
    strengthen_input,
    top_axiom,
    weaken_output,
)
from sat_engine import LKSequent, entails, is_valid

logger = logging.getLogger(__name__)

IN, OUT = "IN", "OUT"


def pair_elim_rule(family: int) -> str:
    return f"PairElim{family}"


# ----------------------------
# Derivation trees
# ----------------------------
@dataclass(frozen=True)
class ClassicalLeaf:
    """An LK sequent whose derivability was decided by the SAT backend."""

    sequent: LKSequent
    verdict: bool = True


@dataclass(frozen=True)
class IONode:
    sequent: IOSequent
    rule: str
    children: tuple[IONode | ClassicalLeaf, ...] = ()
    eliminated: int | None = None

    def leaves(self) -> list[IONode]:
        """The IN/OUT nodes, left to right."""
        if self.rule in (IN, OUT):
            return [self]
        return [leaf for c in self.children if isinstance(c, IONode) for leaf in c.leaves()]


@dataclass(frozen=True)
class OriginalProof:
    """A causal proof together with the classical condition X_1, ..., X_n |= Y."""

    derivation: IONode
    witness: ClassicalLeaf


def _eliminate(s: IOSequent, index: int) -> tuple[IOPair, tuple[IOPair, ...]]:
    rest = s.premises[:index] + s.premises[index + 1 :]
    return s.premises[index], rest


def _child_goals(s: IOSequent, pair: IOPair) -> tuple[IOPair | None, IOPair]:
    """Goals of the I/O premises of a pair elimination; the first is None when it is an LK sequent."""
    b, y = s.goal.input, s.goal.output
    a, x = pair.input, pair.output
    first = IOPair(And(b, Not(a)), y) if s.logic.single_input else None
    second_input = And(b, x) if s.logic.reusable else b
    return first, IOPair(second_input, Or(y, Not(x)))


def _in_leaf(s: IOSequent) -> IONode:
    return IONode(s, IN, (ClassicalLeaf(LKSequent((s.goal.input,), ())),))


def _out_leaf(s: IOSequent) -> IONode:
    return IONode(s, OUT, (ClassicalLeaf(LKSequent((), (s.goal.output,))),))


# ----------------------------
# Proof search
# ----------------------------
def prove(s: IOSequent, settings: Settings | None = None) -> IONode | None:
    """A derivation of s in the calculus of its (causal) logic, or None."""
    if not s.logic.causal:
        raise ValueError(f"prove expects a causal logic, got {s.logic}")
    settings = settings or current_settings()
    if s.logic.single_input:
        if len(s.premises) > settings.proof_cap:
            raise CapExceededError("proof search", len(s.premises), settings.proof_cap)
        return _prove_normal_form(s, settings)
    return _prove_greedy(s, settings, allow_in=True)


def prove_without_in(s: IOSequent, settings: Settings | None = None) -> IONode | None:
    """Families 1 and 3 with IN removed: a calculus for the original logic, BOT never needed."""
    if s.logic.single_input:
        raise ValueError(f"dropping IN is complete only for families 1 and 3, got {s.logic}")
    return _prove_greedy(s.with_logic(s.logic.with_causal(False)), settings or current_settings(), allow_in=False)


def _prove_normal_form(s: IOSequent, settings: Settings) -> IONode | None:
    """Eliminate every pair in insertion order, then close each leaf with IN or OUT."""
    if not s.premises:
        if entails([s.goal.input], BOT, settings):
            return _in_leaf(s)
        if is_valid(s.goal.output, settings):
            return _out_leaf(s)
        logger.debug("leaf %s closes under neither IN nor OUT", s)
        return None
    pair, rest = _eliminate(s, 0)
    first_goal, second_goal = _child_goals(s, pair)
    first = _prove_normal_form(IOSequent(rest, first_goal, s.logic), settings)
    if first is None:
        return None
    second = _prove_normal_form(IOSequent(rest, second_goal, s.logic), settings)
    if second is None:
        return None
    return IONode(s, pair_elim_rule(s.logic.family), (first, second), eliminated=0)


def _prove_greedy(s: IOSequent, settings: Settings, allow_in: bool) -> IONode | None:
    """Close if possible, else eliminate the lowest-index pair whose LK premise holds."""
    # built iteratively and assembled bottom-up, the chain can be |G| long
    steps: list[tuple[IOSequent, int, ClassicalLeaf]] = []
    current = s
    closing: IONode | None = None
    while closing is None:
        b = current.goal.input
        if allow_in and entails([b], BOT, settings):
            closing = _in_leaf(current)
            break
        if is_valid(current.goal.output, settings):
            closing = _out_leaf(current)
            break
        for i, p in enumerate(current.premises):
            if entails([b], p.input, settings):
                _, rest = _eliminate(current, i)
                _, next_goal = _child_goals(current, p)
                steps.append((current, i, ClassicalLeaf(LKSequent((b,), (p.input,)))))
                current = IOSequent(rest, next_goal, current.logic)
                break
        else:
            logger.debug("stuck at %s", current)
            return None
    node = closing
    for seq, i, side in reversed(steps):
        node = IONode(seq, pair_elim_rule(seq.logic.family), (side, node), eliminated=i)
    return node


# ----------------------------
# Checking
# ----------------------------
def check_sequent(d: IONode, s: IOSequent, settings: Settings | None = None) -> CheckResult:
    """Re-verify the root, every rule shape and every classical leaf."""
    if not isinstance(d, IONode):
        return failed((), "root", "root is not an I/O sequent node")
    if not _same_sequent(d.sequent, s):
        return failed((), "root", f"root sequent {d.sequent} does not match the query {s}")
    stack: list[tuple[IONode, tuple[int, ...]]] = [(d, ())]
    while stack:
        node, path = stack.pop()
        result = _check_io_node(node, path, s, settings)
        if not result:
            logger.debug("sequent check failed: %s", result)
            return result
        for i in reversed(range(len(node.children))):
            child = node.children[i]
            if isinstance(child, IONode):
                stack.append((child, path + (i,)))
    return PASSED


def _same_sequent(a: IOSequent, b: IOSequent) -> bool:
    return a.logic == b.logic and a.goal == b.goal and a.same_premises(b.premises)


def _check_leaf(leaf, expected: LKSequent, path, settings) -> CheckResult:
    if not isinstance(leaf, ClassicalLeaf):
        return failed(path, "shape", "expected a classical leaf")
    if leaf.sequent != expected:
        return failed(path, "shape", f"classical leaf {leaf.sequent} should be {expected}")
    if not leaf.verdict or not leaf.sequent.derivable(settings):
        return failed(path, "classical", f"LK sequent {leaf.sequent} is not derivable")
    return PASSED


def _check_io_node(node: IONode, path: tuple[int, ...], root: IOSequent, settings) -> CheckResult:
    s = node.sequent
    if s.logic != root.logic:
        return failed(path, "logic", f"node logic {s.logic.code} differs from {root.logic.code}")
    if node.rule == IN:
        if not s.logic.causal:
            return failed(path, "rule", "IN is not available without BOT")
        if len(node.children) != 1:
            return failed(path, "shape", "IN has exactly one classical premise")
        return _check_leaf(node.children[0], LKSequent((s.goal.input,), ()), path + (0,), settings)
    if node.rule == OUT:
        if len(node.children) != 1:
            return failed(path, "shape", "OUT has exactly one classical premise")
        return _check_leaf(node.children[0], LKSequent((), (s.goal.output,)), path + (0,), settings)
    if node.rule != pair_elim_rule(s.logic.family):
        return failed(path, "rule", f"rule {node.rule} does not belong to the calculus of {s.logic}")
    if node.eliminated is None or not 0 <= node.eliminated < len(s.premises):
        return failed(path, "shape", f"eliminated index {node.eliminated} out of range")
    if len(node.children) != 2:
        return failed(path, "shape", f"{node.rule} has two premises")
    pair, rest = _eliminate(s, node.eliminated)
    first_goal, second_goal = _child_goals(s, pair)
    first, second = node.children
    if first_goal is None:
        result = _check_leaf(first, LKSequent((s.goal.input,), (pair.input,)), path + (0,), settings)
        if not result:
            return result
    elif not _is_child(first, rest, first_goal, s):
        return failed(path + (0,), "shape", f"first premise should be {IOSequent(rest, first_goal, s.logic)}")
    if not _is_child(second, rest, second_goal, s):
        return failed(path + (1,), "shape", f"second premise should be {IOSequent(rest, second_goal, s.logic)}")
    return PASSED


def _is_child(child, rest: tuple[IOPair, ...], goal: IOPair, parent: IOSequent) -> bool:
    return (
        isinstance(child, IONode)
        and child.sequent.goal == goal
        and child.sequent.logic == parent.logic
        and child.sequent.same_premises(rest)
    )


# ----------------------------
# Translation into native I/O derivations
# ----------------------------
def to_native(d: IONode, bot_free: bool = False) -> NativeNode:
    """Expand every rule instance into its I/O-rule template.

    With bot_free, IN leaves are replaced by the derivation from the premises'
    outputs (SI, AND chain, WO, SI); this needs X_1, ..., X_n |= Y.
    """
    return _Translator(d.sequent.premises, bot_free).native(d)


class _Translator:
    def __init__(self, premises: tuple[IOPair, ...], bot_free: bool):
        self.premises = premises
        self.bot_free = bot_free

    def native(self, node: IONode) -> NativeNode:
        b, y = node.sequent.goal.input, node.sequent.goal.output
        if node.rule == IN:
            return self._in(b, y)
        if node.rule == OUT:
            return _out_template(b, y)
        pair = node.sequent.premises[node.eliminated]
        first, second = node.children
        second_native = self.native(second)
        family = node.sequent.logic.family
        if node.sequent.logic.reusable:
            b_and_a = _pair_elim_ct_part(pair, b, y, second_native)
        else:
            b_and_a = _pair_elim_si_part(pair, b, y, second_native)
        if family in (1, 3):
            # B => A makes B and B & A equivalent
            return strengthen_input(b_and_a, b)
        merged = or_(b_and_a, self.native(first))
        a = pair.input
        return strengthen_input(strengthen_input(merged, And(b, Or(a, Not(a)))), b)

    def _in(self, b: Formula, y: Formula) -> NativeNode:
        if not self.bot_free:
            return weaken_output(strengthen_input(bot_axiom(), b), y)
        if not self.premises:
            return _out_template(b, y)
        parts = [strengthen_input(premise(p), BOT) for p in self.premises]
        node = parts[0]
        for part in parts[1:]:
            node = and_(node, part)
        return strengthen_input(weaken_output(node, y), b)


def _out_template(b: Formula, y: Formula) -> NativeNode:
    return strengthen_input(weaken_output(top_axiom(), y), b)


def _pair_elim_si_part(pair: IOPair, b: Formula, y: Formula, second: NativeNode) -> NativeNode:
    """(B & A, Y) from (A, X) and (B, Y | !X)."""
    return _finish_and(pair, b, y, strengthen_input(second, And(b, pair.input)))


def _pair_elim_ct_part(pair: IOPair, b: Formula, y: Formula, second: NativeNode) -> NativeNode:
    """(B & A, Y) from (A, X) and (B & X, Y | !X), cutting X back in."""
    b_and_a = And(b, pair.input)
    left = strengthen_input(premise(pair), b_and_a)
    right = strengthen_input(second, And(b_and_a, pair.output))
    return _finish_and(pair, b, y, cut_through(left, right))


def _finish_and(pair: IOPair, b: Formula, y: Formula, y_or_not_x: NativeNode) -> NativeNode:
    a, x = pair.input, pair.output
    left = strengthen_input(weaken_output(premise(pair), Or(y, x)), And(b, a))
    joined = and_(left, y_or_not_x)
    return weaken_output(weaken_output(joined, Or(y, And(x, Not(x)))), y)


# ----------------------------
# Original logics
# ----------------------------
def decide_original_via_proof(s: IOSequent, settings: Settings | None = None) -> OriginalProof | None:
    """Causal proof plus the classical side condition on the premise outputs."""
    if s.logic.causal:
        raise ValueError(f"decide_original_via_proof expects a non-causal logic, got {s.logic}")
    d = prove(s.causal(), settings)
    if d is None:
        return None
    witness = LKSequent(tuple(s.outputs), (s.goal.output,))
    if not witness.derivable(settings):
        logger.debug("causal proof found but %s fails", witness)
        return None
    return OriginalProof(d, ClassicalLeaf(witness))


def check_original_proof(p: OriginalProof, s: IOSequent, settings: Settings | None = None) -> CheckResult:
    result = check_sequent(p.derivation, s.causal(), settings)
    if not result:
        return result
    expected = LKSequent(tuple(s.outputs), (s.goal.output,))
    w = p.witness.sequent
    if set(w.antecedent) != set(expected.antecedent) or w.succedent != expected.succedent:
        return failed((), "witness", f"witness {w} should be {expected}")
    if not p.witness.verdict or not w.derivable(settings):
        return failed((), "witness", f"witness {p.witness.sequent} is not a derivable {expected}")
    return PASSED
