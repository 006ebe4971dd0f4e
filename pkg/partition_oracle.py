"""
Reference decision procedure: enumerate every partition (I, J) of the premise
indices and check the per-family classical conditions with the SAT backend.

Exponential in |G| by construction; every other procedure is tested against it.
"""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass
import logging

from config import Settings, current_settings
from errors import CapExceededError
from formula import BOT, Formula, Not, disjoin
from io_semantics import IOModel, universe_of
from io_theory import IOSequent
from sat_engine import entails, satisfying_valuation

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Partition:
    """I: pairs left on the input side, J: pairs whose outputs are used. Indices are 0-based."""

    I: tuple[int, ...]
    J: tuple[int, ...]

    def to_json(self) -> dict:
        return {"I": list(self.I), "J": list(self.J)}


def iter_partitions(n: int) -> Iterator[Partition]:
    """Binary counting: bit i set puts index i in J. The first partition is (all, none)."""
    for mask in range(1 << n):
        I = tuple(i for i in range(n) if not mask >> i & 1)
        J = tuple(i for i in range(n) if mask >> i & 1)
        yield Partition(I, J)


@dataclass(frozen=True)
class OracleVerdict:
    derivable: bool
    failing_partition: Partition | None = None
    # original logics only: the causal part holds but X_1..X_n do not entail Y
    output_condition_failed: bool = False

    def __bool__(self) -> bool:
        return self.derivable


DERIVABLE = OracleVerdict(True)


def partition_passes(s: IOSequent, part: Partition, settings: Settings | None = None) -> bool:
    """The family's disjunction of classical checks for one partition."""
    pairs = s.premises
    b, y = s.goal.input, s.goal.output
    xs_j = [pairs[j].output for j in part.J]
    a_i = [pairs[i].input for i in part.I]
    family = s.logic.family
    if entails(xs_j, y, settings):
        return True
    if family == 2:
        return entails([b], disjoin(a_i), settings)
    if family == 4:
        return entails([b, *xs_j], disjoin(a_i), settings)
    hyps = [b] if family == 1 else [b, *xs_j]
    if entails(hyps, BOT, settings):
        return True
    return any(entails(hyps, a, settings) for a in a_i)


def _check_cap(s: IOSequent, settings: Settings) -> None:
    n = len(s.premises)
    if n > settings.oracle_cap:
        raise CapExceededError("partition oracle", n, settings.oracle_cap)


def decide_causal(s: IOSequent, settings: Settings | None = None) -> OracleVerdict:
    if not s.logic.causal:
        raise ValueError(f"decide_causal expects a causal logic, got {s.logic}")
    settings = settings or current_settings()
    _check_cap(s, settings)
    for part in iter_partitions(len(s.premises)):
        if not partition_passes(s, part, settings):
            logger.debug("partition %s fails for %s", part, s)
            return OracleVerdict(False, part)
    return DERIVABLE


def decide_original(s: IOSequent, settings: Settings | None = None) -> OracleVerdict:
    """Causal verdict plus X_1, ..., X_n |= Y."""
    if s.logic.causal:
        raise ValueError(f"decide_original expects a non-causal logic, got {s.logic}")
    verdict = decide_causal(s.causal(), settings)
    if not verdict:
        return verdict
    if not entails(s.outputs, s.goal.output, settings):
        return OracleVerdict(False, output_condition_failed=True)
    return DERIVABLE


def decide(s: IOSequent, settings: Settings | None = None) -> OracleVerdict:
    if s.logic.causal:
        return decide_causal(s, settings)
    return decide_original(s, settings)


# ----------------------------
# Countermodels from failing partitions
# ----------------------------
def _world(constraints: list[Formula], universe: tuple[str, ...], settings: Settings | None):
    w = satisfying_valuation(constraints, universe, settings)
    if w is None:
        raise AssertionError(f"unsatisfiable world constraints {[str(c) for c in constraints]}")
    return w


def countermodel(s: IOSequent, verdict: OracleVerdict, settings: Settings | None = None) -> IOModel | None:
    """The I/O model read off a false verdict; None for a true one."""
    if verdict.derivable:
        return None
    universe = universe_of(s)
    b, y = s.goal.input, s.goal.output
    if verdict.output_condition_failed:
        out = _world([*s.outputs, Not(y)], universe, settings)
        return IOModel(frozenset(), out, frozenset(universe))

    part = verdict.failing_partition
    pairs = s.premises
    xs_j = [pairs[j].output for j in part.J]
    out = _world([*xs_j, Not(y)], universe, settings)
    base = [b, *xs_j] if s.logic.reusable else [b]
    if s.logic.single_input:
        inputs = {_world([*base, Not(disjoin(pairs[i].input for i in part.I))], universe, settings)}
    else:
        inputs = {_world(base, universe, settings)}
        for i in part.I:
            inputs.add(_world([*base, Not(pairs[i].input)], universe, settings))
    return IOModel(frozenset(inputs), out, frozenset(universe))
