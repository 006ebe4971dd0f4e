"""
The eight I/O logics, I/O pairs and sequents, and native I/O derivations
(trees of TOP/BOT/WO/SI/AND/OR/CT steps over premise leaves) with a checker.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field, replace
import logging

from config import Settings
from errors import UnknownLogicError
from formula import BOT, TOP, And, Formula, Or, to_text
from sat_engine import LKSequent, entails
from utils import compute_stable_id

logger = logging.getLogger(__name__)

RULES = ("TOP", "BOT", "WO", "SI", "AND", "OR", "CT")
LEAF = "LEAF-G"


# ----------------------------
# Logics
# ----------------------------
@dataclass(frozen=True, order=True)
class LogicId:
    family: int
    causal: bool = False

    def __post_init__(self):
        if self.family not in (1, 2, 3, 4):
            raise UnknownLogicError(f"no I/O logic family {self.family}")

    @property
    def code(self) -> str:
        return f"out{self.family}{'c' if self.causal else ''}"

    @property
    def name(self) -> str:
        return f"OUT{self.family}{'⊥' if self.causal else ''}"

    @property
    def reusable(self) -> bool:
        """Families 3,4 (CT, 3-4-validity)."""
        return self.family in (3, 4)

    @property
    def single_input(self) -> bool:
        """Families 2,4 (OR, at most one input world)."""
        return self.family in (2, 4)

    def with_causal(self, causal: bool = True) -> LogicId:
        return LogicId(self.family, causal)

    def __str__(self) -> str:
        return self.name


ALL_LOGICS = tuple(LogicId(k, c) for c in (False, True) for k in (1, 2, 3, 4))


def parse_logic(code: str) -> LogicId:
    """'out1'..'out4' and 'out1c'..'out4c' (c = causal)."""
    text = code.strip().lower()
    causal = text.endswith("c")
    digits = text[3:-1] if causal else text[3:]
    if not text.startswith("out") or digits not in ("1", "2", "3", "4"):
        raise UnknownLogicError(f"unknown logic code {code!r} (expected out1..out4 or out1c..out4c)")
    return LogicId(int(digits), causal)


def rule_set(logic: LogicId) -> frozenset[str]:
    rules = {"TOP", "WO", "SI", "AND"}
    if logic.causal:
        rules.add("BOT")
    if logic.single_input:
        rules.add("OR")
    if logic.reusable:
        rules.add("CT")
    return frozenset(rules)


def stronger_than(l1: LogicId, l2: LogicId) -> bool:
    return rule_set(l1) >= rule_set(l2)


# ----------------------------
# Pairs and sequents
# ----------------------------
@dataclass(frozen=True)
class IOPair:
    input: Formula
    output: Formula

    def __str__(self) -> str:
        return f"({to_text(self.input)}, {to_text(self.output)})"

    def to_line(self) -> str:
        return f"{to_text(self.input)} => {to_text(self.output)}"


@dataclass(frozen=True)
class IOSequent:
    premises: tuple[IOPair, ...]
    goal: IOPair
    logic: LogicId = field(default_factory=lambda: LogicId(1))

    def __post_init__(self):
        # set semantics, insertion order kept for deterministic iteration
        object.__setattr__(self, "premises", tuple(dict.fromkeys(self.premises)))

    @property
    def outputs(self) -> list[Formula]:
        return [p.output for p in self.premises]

    def with_logic(self, logic: LogicId) -> IOSequent:
        return replace(self, logic=logic)

    def causal(self) -> IOSequent:
        return self.with_logic(self.logic.with_causal(True))

    def same_premises(self, other: Iterable[IOPair]) -> bool:
        return set(self.premises) == set(other)

    def query_id(self) -> str:
        pairs = sorted(p.to_line() for p in self.premises)
        return compute_stable_id(*pairs, "goal " + self.goal.to_line(), self.logic.code)

    def __str__(self) -> str:
        prem = ", ".join(str(p) for p in self.premises)
        return f"{prem} |- {self.goal} [{self.logic.code}]".strip()


# ----------------------------
# Check results
# ----------------------------
@dataclass(frozen=True)
class CheckResult:
    """Verdict of a certificate checker; falsy results name the first failing node."""

    ok: bool
    path: tuple[int, ...] = ()
    clause: str = ""
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        where = "/".join(str(i) for i in self.path) or "root"
        return f"node {where}: ({self.clause}) {self.reason}"


PASSED = CheckResult(True)


def failed(path: tuple[int, ...], clause: str, reason: str) -> CheckResult:
    return CheckResult(False, path, clause, reason)


# ----------------------------
# Native derivations
# ----------------------------
_ARITY = {LEAF: 0, "TOP": 0, "BOT": 0, "WO": 1, "SI": 1, "AND": 2, "OR": 2, "CT": 2}


@dataclass(frozen=True)
class NativeNode:
    pair: IOPair
    rule: str
    children: tuple[NativeNode, ...] = ()
    side: LKSequent | None = None

    def walk(self) -> Iterator[NativeNode]:
        yield self
        for child in self.children:
            yield from child.walk()

    def rules_used(self) -> set[str]:
        return {node.rule for node in self.walk()}


def premise(pair: IOPair) -> NativeNode:
    return NativeNode(pair, LEAF)


def top_axiom() -> NativeNode:
    return NativeNode(IOPair(TOP, TOP), "TOP")


def bot_axiom() -> NativeNode:
    return NativeNode(IOPair(BOT, BOT), "BOT")


def weaken_output(child: NativeNode, output: Formula) -> NativeNode:
    """WO: (A,X) gives (A,Y) when X |= Y."""
    x = child.pair.output
    return NativeNode(IOPair(child.pair.input, output), "WO", (child,), LKSequent((x,), (output,)))


def strengthen_input(child: NativeNode, input: Formula) -> NativeNode:
    """SI: (A,X) gives (B,X) when B |= A."""
    a = child.pair.input
    return NativeNode(IOPair(input, child.pair.output), "SI", (child,), LKSequent((input,), (a,)))


def and_(left: NativeNode, right: NativeNode) -> NativeNode:
    pair = IOPair(left.pair.input, And(left.pair.output, right.pair.output))
    return NativeNode(pair, "AND", (left, right))


def or_(left: NativeNode, right: NativeNode) -> NativeNode:
    pair = IOPair(Or(left.pair.input, right.pair.input), left.pair.output)
    return NativeNode(pair, "OR", (left, right))


def cut_through(left: NativeNode, right: NativeNode) -> NativeNode:
    """CT: (A,X) and (A & X, Y) give (A,Y)."""
    return NativeNode(IOPair(left.pair.input, right.pair.output), "CT", (left, right))


def check_native(d: NativeNode, s: IOSequent, settings: Settings | None = None) -> CheckResult:
    """Clauses: (i) root is the goal, (ii) leaves are premises, (iii) rules belong to the logic, (iv) steps are sound."""
    if d.pair != s.goal:
        return failed((), "i", f"root pair {d.pair} differs from goal {s.goal}")
    premises = set(s.premises)
    allowed = rule_set(s.logic)
    stack: list[tuple[NativeNode, tuple[int, ...]]] = [(d, ())]
    while stack:
        node, path = stack.pop()
        result = _check_native_node(node, path, premises, allowed, settings)
        if not result:
            logger.debug("native check failed: %s", result)
            return result
        for i in reversed(range(len(node.children))):
            stack.append((node.children[i], path + (i,)))
    return PASSED


def _check_native_node(
    node: NativeNode,
    path: tuple[int, ...],
    premises: set[IOPair],
    allowed: frozenset[str],
    settings: Settings | None,
) -> CheckResult:
    rule = node.rule
    if rule not in _ARITY:
        return failed(path, "iii", f"unknown rule tag {rule!r}")
    if rule != LEAF and rule not in allowed:
        return failed(path, "iii", f"rule {rule} is not in the rule set of the logic")
    if len(node.children) != _ARITY[rule]:
        return failed(path, "iv", f"{rule} expects {_ARITY[rule]} parents, got {len(node.children)}")
    pair = node.pair
    kids = [c.pair for c in node.children]
    match rule:
        case "LEAF-G":
            if pair not in premises:
                return failed(path, "ii", f"leaf {pair} is not a premise")
        case "TOP":
            if pair != IOPair(TOP, TOP):
                return failed(path, "iv", f"TOP node carries {pair}")
        case "BOT":
            if pair != IOPair(BOT, BOT):
                return failed(path, "iv", f"BOT node carries {pair}")
        case "WO":
            (child,) = kids
            if child.input != pair.input:
                return failed(path, "iv", "WO changed the input")
            side = LKSequent((child.output,), (pair.output,))
            if node.side is not None and node.side != side:
                return failed(path, "iv", f"WO side condition {node.side} does not match the step")
            if not entails([child.output], pair.output, settings):
                return failed(path, "iv", f"WO side condition {side} does not hold")
        case "SI":
            (child,) = kids
            if child.output != pair.output:
                return failed(path, "iv", "SI changed the output")
            side = LKSequent((pair.input,), (child.input,))
            if node.side is not None and node.side != side:
                return failed(path, "iv", f"SI side condition {node.side} does not match the step")
            if not entails([pair.input], child.input, settings):
                return failed(path, "iv", f"SI side condition {side} does not hold")
        case "AND":
            left, right = kids
            if left.input != right.input:
                return failed(path, "iv", "AND parents have different inputs")
            if pair != IOPair(left.input, And(left.output, right.output)):
                return failed(path, "iv", f"AND conclusion {pair} does not match its parents")
        case "OR":
            left, right = kids
            if left.output != right.output:
                return failed(path, "iv", "OR parents have different outputs")
            if pair != IOPair(Or(left.input, right.input), left.output):
                return failed(path, "iv", f"OR conclusion {pair} does not match its parents")
        case "CT":
            left, right = kids
            if right.input != And(left.input, left.output):
                return failed(path, "iv", f"CT second parent input must be {to_text(And(left.input, left.output))}")
            if pair != IOPair(left.input, right.output):
                return failed(path, "iv", f"CT conclusion {pair} does not match its parents")
    return PASSED
