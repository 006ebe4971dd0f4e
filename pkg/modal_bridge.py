"""
Shallow modal embeddings of I/O sequents, the Kripke lift of an I/O model,
and evaluation of depth-1 modal formulas on such lifts.

The lift puts the output world first: it sees every input world, and every
input world sees only itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
import logging

from errors import NestedModalityError
from formula import And, Atom, Bot, Formula, Implies, Not, Or, Top, Valuation, evaluate, fold, precedence, to_text
from io_semantics import IOModel
from io_theory import IOSequent, LogicId

logger = logging.getLogger(__name__)


# ----------------------------
# Shallow modal formulas
# ----------------------------
class ModalFormula:
    __slots__ = ()

    def __str__(self) -> str:
        return modal_text(self)


@dataclass(frozen=True)
class Prop(ModalFormula):
    formula: Formula


@dataclass(frozen=True)
class Box(ModalFormula):
    arg: ModalFormula


@dataclass(frozen=True)
class MNot(ModalFormula):
    arg: ModalFormula


@dataclass(frozen=True)
class MAnd(ModalFormula):
    left: ModalFormula
    right: ModalFormula


@dataclass(frozen=True)
class MOr(ModalFormula):
    left: ModalFormula
    right: ModalFormula


@dataclass(frozen=True)
class MImplies(ModalFormula):
    left: ModalFormula
    right: ModalFormula


def box(f: Formula) -> Box:
    return Box(Prop(f))


def modal_depth(f: ModalFormula) -> int:
    match f:
        case Prop():
            return 0
        case Box(arg):
            return 1 + modal_depth(arg)
        case MNot(arg):
            return modal_depth(arg)
        case MAnd(l, r) | MOr(l, r) | MImplies(l, r):
            return max(modal_depth(l), modal_depth(r))
    raise TypeError(f"not a modal formula: {f!r}")


# ----------------------------
# Target logics and embeddings
# ----------------------------
class TargetLogic(str, Enum):
    K = "K"
    KD = "KD"
    KF = "K+F"
    KDF = "KD+F"

    @property
    def serial(self) -> bool:
        return self in (TargetLogic.KD, TargetLogic.KDF)

    @property
    def functional(self) -> bool:
        return self in (TargetLogic.KF, TargetLogic.KDF)


def target_logic(logic: LogicId) -> TargetLogic:
    if logic.single_input:
        return TargetLogic.KDF if logic.causal else TargetLogic.KF
    return TargetLogic.KD if logic.causal else TargetLogic.K


@dataclass(frozen=True)
class Embedding:
    hypotheses: tuple[ModalFormula, ...]
    goal: ModalFormula
    target: TargetLogic


def embed_pair(a: Formula, x: Formula, reusable: bool) -> ModalFormula:
    """[]A -> X, or []A -> X & []X for the reusable families."""
    consequent = MAnd(Prop(x), box(x)) if reusable else Prop(x)
    return MImplies(box(a), consequent)


def embed(s: IOSequent) -> Embedding:
    reusable = s.logic.reusable
    hyps = tuple(embed_pair(p.input, p.output, reusable) for p in s.premises)
    goal = embed_pair(s.goal.input, s.goal.output, reusable)
    return Embedding(hyps, goal, target_logic(s.logic))


def embed_classic(s: IOSequent) -> Embedding:
    """The older A -> []X translation; its verdicts do not depend on D or F."""
    hyps = tuple(MImplies(Prop(p.input), box(p.output)) for p in s.premises)
    return Embedding(hyps, MImplies(Prop(s.goal.input), box(s.goal.output)), TargetLogic.K)


# ----------------------------
# Kripke models
# ----------------------------
@dataclass(frozen=True)
class KripkeModel:
    worlds: tuple[Valuation, ...]
    edges: frozenset[tuple[int, int]]
    root: int = 0

    def successors(self, w: int) -> list[int]:
        return sorted(v for (u, v) in self.edges if u == w)


def kripke_from_io(m: IOModel) -> KripkeModel:
    """World 0 is out; worlds 1..k are the input worlds in sorted order."""
    inputs = m.sorted_inputs()
    worlds = (m.output, *inputs)
    edges = {(0, i) for i in range(1, len(worlds))}
    edges |= {(i, i) for i in range(1, len(worlds))}
    return KripkeModel(worlds, frozenset(edges), 0)


def eval_shallow(f: ModalFormula, k: KripkeModel, at: int) -> bool:
    match f:
        case Prop(g):
            return evaluate(g, k.worlds[at])
        case Box(arg):
            if modal_depth(arg) > 0:
                raise NestedModalityError(f"nested box in {modal_text(f)}")
            return all(eval_shallow(arg, k, w) for w in k.successors(at))
        case MNot(arg):
            return not eval_shallow(arg, k, at)
        case MAnd(l, r):
            return eval_shallow(l, k, at) and eval_shallow(r, k, at)
        case MOr(l, r):
            return eval_shallow(l, k, at) or eval_shallow(r, k, at)
        case MImplies(l, r):
            return (not eval_shallow(l, k, at)) or eval_shallow(r, k, at)
    raise TypeError(f"not a modal formula: {f!r}")


def frame_check(k: KripkeModel, t: TargetLogic) -> bool:
    for w in range(len(k.worlds)):
        n = len(k.successors(w))
        if t.serial and n < 1:
            return False
        if t.functional and n > 1:
            return False
    return True


def refutes(e: Embedding, k: KripkeModel) -> bool:
    """The frame fits the target, the root satisfies every hypothesis and refutes the goal."""
    if not frame_check(k, e.target):
        return False
    if not all(eval_shallow(h, k, k.root) for h in e.hypotheses):
        return False
    return not eval_shallow(e.goal, k, k.root)


# ----------------------------
# Rendering
# ----------------------------
_MIMP, _MOR, _MAND, _MNOT, _MATOM = 1, 2, 3, 4, 5


def _modal_precedence(f: ModalFormula) -> int:
    match f:
        case Prop(g):
            return precedence(g)
        case MImplies():
            return _MIMP
        case MOr():
            return _MOR
        case MAnd():
            return _MAND
        case MNot():
            return _MNOT
    return _MATOM


def _wrap(f: ModalFormula, parens: bool) -> str:
    text = modal_text(f)
    return f"({text})" if parens else text


def modal_text(f: ModalFormula) -> str:
    """The formula grammar extended with box(.)."""
    match f:
        case Prop(g):
            return to_text(g)
        case Box(arg):
            return f"box({modal_text(arg)})"
        case MNot(arg):
            return "!" + _wrap(arg, _modal_precedence(arg) < _MNOT)
        case MAnd(l, r):
            return f"{_wrap(l, _modal_precedence(l) < _MAND)} & {_wrap(r, _modal_precedence(r) <= _MAND)}"
        case MOr(l, r):
            return f"{_wrap(l, _modal_precedence(l) < _MOR)} | {_wrap(r, _modal_precedence(r) <= _MOR)}"
        case MImplies(l, r):
            return f"{_wrap(l, _modal_precedence(l) <= _MIMP)} -> {_wrap(r, _modal_precedence(r) < _MIMP)}"
    raise TypeError(f"not a modal formula: {f!r}")


def render_exchange(e: Embedding) -> str:
    lines = [f"hyp: {modal_text(h)}" for h in e.hypotheses]
    lines.append(f"goal: {modal_text(e.goal)}")
    lines.append(f"logic: {e.target.value}")
    return "\n".join(lines) + "\n"


def _tptp_prop(f: Formula) -> str:
    def step(node: Formula, args: list[str]) -> str:
        match node:
            case Top():
                return "$true"
            case Bot():
                return "$false"
            case Atom(name):
                # TPTP atoms start lower-case
                return name if name[0].islower() else f"p_{name}"
            case Not():
                return f"~ ({args[0]})"
            case And():
                return f"({args[0]} & {args[1]})"
            case Or():
                return f"({args[0]} | {args[1]})"
            case Implies():
                return f"({args[0]} => {args[1]})"
        raise TypeError(f"not a formula: {type(node).__name__}")

    return fold(f, step)


def _tptp(f: ModalFormula) -> str:
    match f:
        case Prop(g):
            return _tptp_prop(g)
        case Box(arg):
            return f"(#box:({_tptp(arg)}))"
        case MNot(arg):
            return f"~ ({_tptp(arg)})"
        case MAnd(l, r):
            return f"({_tptp(l)} & {_tptp(r)})"
        case MOr(l, r):
            return f"({_tptp(l)} | {_tptp(r)})"
        case MImplies(l, r):
            return f"({_tptp(l)} => {_tptp(r)})"
    raise TypeError(f"not a modal formula: {f!r}")


def render_qmltp(e: Embedding) -> str:
    """QMLTP-style problem: one axiom per hypothesis and the goal as conjecture."""
    lines = [f"% logic: {e.target.value}"]
    lines.extend(f"qmf(hyp{i}, axiom, {_tptp(h)})." for i, h in enumerate(e.hypotheses, start=1))
    lines.append(f"qmf(goal, conjecture, {_tptp(e.goal)}).")
    return "\n".join(lines) + "\n"
