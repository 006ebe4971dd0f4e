"""
Polynomial-size propositional encoding of the entailment problem.

World 0 is the output world, worlds 1..N are input worlds; every atom x is
copied once per world as x@l. Satisfying assignments decode to I/O countermodels.
"""

from __future__ import annotations

from dataclasses import dataclass
import logging

from config import Settings
from formula import And, Formula, Implies, Not, Or, Valuation, conjoin, label, split_label
from io_semantics import IOModel, universe_of
from io_theory import IOPair, IOSequent, LogicId
from sat_engine import CnfInstance, SatResult, solve, tseitin

logger = logging.getLogger(__name__)

OUTPUT_WORLD = 0


@dataclass(frozen=True)
class EncodingSpec:
    logic: LogicId
    n_inputs: int
    universe: tuple[str, ...]

    @property
    def worlds(self) -> range:
        return range(self.n_inputs + 1)

    @property
    def input_worlds(self) -> range:
        return range(1, self.n_inputs + 1)


def make_spec(s: IOSequent) -> EncodingSpec:
    """N = 1 for families 2 and 4, |G| + 1 for families 1 and 3."""
    n = 1 if s.logic.single_input else len(s.premises) + 1
    return EncodingSpec(s.logic, n, universe_of(s))


def _conjoin_distinct(parts: list[Formula]) -> Formula:
    return conjoin(dict.fromkeys(parts))


def encode_pair(p: IOPair, spec: EncodingSpec) -> Formula:
    antecedent = _conjoin_distinct([label(p.input, l) for l in spec.input_worlds])
    if spec.logic.reusable:
        consequent = _conjoin_distinct([label(p.output, l) for l in spec.worlds])
    else:
        consequent = label(p.output, OUTPUT_WORLD)
    return Implies(antecedent, consequent)


def causal_formula(s: IOSequent, spec: EncodingSpec | None = None) -> Formula:
    """Phi: the goal encoding fails while every premise encoding holds."""
    spec = spec or make_spec(s)
    return And(Not(encode_pair(s.goal, spec)), conjoin(encode_pair(p, spec) for p in s.premises))


def output_formula(s: IOSequent) -> Formula:
    """!Y@0 & X_1@0 & ... & X_n@0, the zero-input-world branch of the original logics."""
    outputs = [label(x, OUTPUT_WORLD) for x in s.outputs]
    return conjoin([Not(label(s.goal.output, OUTPUT_WORLD)), *outputs])


def build_formula(s: IOSequent) -> Formula:
    """The single formula whose unsatisfiability is equivalent to derivability."""
    phi = causal_formula(s)
    if s.logic.causal:
        return phi
    return Or(phi, output_formula(s))


def encode_query(s: IOSequent) -> CnfInstance:
    return tseitin(build_formula(s))


# ----------------------------
# Decoding
# ----------------------------
def decode_model(result: SatResult, spec: EncodingSpec, zero_inputs: bool = False) -> IOModel:
    """Read world l off the labeled atoms x@l; atoms the solver left unconstrained are false."""
    worlds = {l: dict.fromkeys(spec.universe, False) for l in spec.worlds}
    for name, value in result.model.items():
        parts = split_label(name)
        if parts is None:
            continue
        x, l = parts
        if l in worlds and x in worlds[l]:
            worlds[l][x] = value
    out = Valuation(worlds[OUTPUT_WORLD])
    inputs = frozenset() if zero_inputs else frozenset(Valuation(worlds[l]) for l in spec.input_worlds)
    return IOModel(inputs, out, frozenset(spec.universe))


def decide_causal_sat(s: IOSequent, settings: Settings | None = None) -> tuple[bool, IOModel | None]:
    if not s.logic.causal:
        raise ValueError(f"decide_causal_sat expects a causal logic, got {s.logic}")
    spec = make_spec(s)
    result = solve(tseitin(causal_formula(s, spec)), settings)
    logger.debug("causal encoding of %s with N=%d: %s", s.logic, spec.n_inputs, "SAT" if result else "UNSAT")
    if not result:
        return True, None
    return False, decode_model(result, spec)


def decide_original_sat(s: IOSequent, settings: Settings | None = None) -> tuple[bool, IOModel | None]:
    """Two solver calls: Phi first, then the zero-input-world branch."""
    if s.logic.causal:
        raise ValueError(f"decide_original_sat expects a non-causal logic, got {s.logic}")
    spec = make_spec(s)
    result = solve(tseitin(causal_formula(s, spec)), settings)
    if result:
        return False, decode_model(result, spec)
    result = solve(tseitin(output_formula(s)), settings)
    if result:
        logger.debug("output branch satisfiable for %s", s)
        return False, decode_model(result, spec, zero_inputs=True)
    return True, None


def decide_sat(s: IOSequent, settings: Settings | None = None) -> tuple[bool, IOModel | None]:
    if s.logic.causal:
        return decide_causal_sat(s, settings)
    return decide_original_sat(s, settings)
