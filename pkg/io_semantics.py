"""
Possible-worlds I/O models: a set of input worlds plus one output world.

1-2-validity of (A,X): if every input world satisfies A, the output world satisfies X.
3-4-validity additionally requires X at every input world.
Frame conditions bound the number of input worlds per logic.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from itertools import combinations, product
import logging
from typing import Literal

from errors import UndeclaredAtomError
from formula import Valuation, atoms, evaluate
from io_theory import IOPair, IOSequent, LogicId

logger = logging.getLogger(__name__)

Notion = Literal[12, 34]


@dataclass(frozen=True)
class IOModel:
    inputs: frozenset[Valuation]
    output: Valuation
    universe: frozenset[str] = field(default=frozenset())

    def __post_init__(self):
        object.__setattr__(self, "inputs", frozenset(self.inputs))
        universe = frozenset(self.universe) or frozenset(self.output)
        object.__setattr__(self, "universe", universe)
        for w in (self.output, *self.inputs):
            if frozenset(w) != universe:
                missing = sorted(universe - frozenset(w)) or sorted(frozenset(w) - universe)
                raise UndeclaredAtomError(missing[0])

    def sorted_inputs(self) -> list[Valuation]:
        return sorted(self.inputs, key=Valuation.sort_key)

    def to_json(self) -> dict:
        return {
            "inputs": [w.to_dict() for w in self.sorted_inputs()],
            "output": self.output.to_dict(),
        }


def universe_of(s: IOSequent) -> tuple[str, ...]:
    """The atoms occurring in G or the goal, sorted."""
    names: set[str] = set()
    for p in (*s.premises, s.goal):
        names |= atoms(p.input) | atoms(p.output)
    return tuple(sorted(names))


# ----------------------------
# Frame conditions
# ----------------------------
@dataclass(frozen=True)
class FrameCondition:
    min_inputs: int = 0
    max_inputs: int | None = None

    def admits(self, count: int) -> bool:
        if count < self.min_inputs:
            return False
        return self.max_inputs is None or count <= self.max_inputs

    def __str__(self) -> str:
        if self.max_inputs is None:
            return f"|In| >= {self.min_inputs}" if self.min_inputs else "none"
        if self.min_inputs == self.max_inputs:
            return f"|In| = {self.max_inputs}"
        return f"|In| <= {self.max_inputs}"


def frame_condition(logic: LogicId) -> FrameCondition:
    return FrameCondition(
        min_inputs=1 if logic.causal else 0,
        max_inputs=1 if logic.single_input else None,
    )


def notion_of(logic: LogicId) -> Notion:
    return 34 if logic.reusable else 12


# ----------------------------
# Validity
# ----------------------------
def pair_valid(p: IOPair, m: IOModel, notion: Notion) -> bool:
    undeclared = (atoms(p.input) | atoms(p.output)) - m.universe
    if undeclared:
        raise UndeclaredAtomError(sorted(undeclared)[0])
    if not all(evaluate(p.input, w) for w in m.inputs):
        return True
    if not evaluate(p.output, m.output):
        return False
    if notion == 34:
        return all(evaluate(p.output, w) for w in m.inputs)
    return True


def check_countermodel(m: IOModel, s: IOSequent) -> bool:
    """m meets the frame of s.logic, validates every premise and refutes the goal."""
    frame = frame_condition(s.logic)
    if not frame.admits(len(m.inputs)):
        logger.debug("countermodel rejected: %d input worlds violates %s", len(m.inputs), frame)
        return False
    notion = notion_of(s.logic)
    for p in s.premises:
        if not pair_valid(p, m, notion):
            logger.debug("countermodel rejected: premise %s not valid", p)
            return False
    return not pair_valid(s.goal, m, notion)


# ----------------------------
# Exhaustive model search
# ----------------------------
def all_valuations(universe: Iterable[str]) -> list[Valuation]:
    names = sorted(universe)
    return [Valuation(zip(names, bits)) for bits in product((False, True), repeat=len(names))]


def candidate_models(s: IOSequent) -> Iterator[IOModel]:
    """Every model over the instance atoms within the frame, |In| capped at |G|+1 for families 1 and 3."""
    universe = frozenset(universe_of(s))
    worlds = all_valuations(universe)
    frame = frame_condition(s.logic)
    largest = 1 if s.logic.single_input else len(s.premises) + 1
    largest = min(largest, len(worlds))
    for out in worlds:
        for k in range(frame.min_inputs, largest + 1):
            for inputs in combinations(worlds, k):
                yield IOModel(frozenset(inputs), out, universe)


def search_countermodel(s: IOSequent) -> IOModel | None:
    for m in candidate_models(s):
        if check_countermodel(m, s):
            return m
    return None
