"""
Cross-procedure agreement suite: partition oracle vs SAT reduction vs proof
search, with every certificate re-verified by its own checker.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import logging

from battery import default_battery, instance_size, random_instances
from config import Settings, current_settings
from io_semantics import check_countermodel
from io_theory import IOSequent, check_native
from modal_bridge import embed, kripke_from_io, refutes
from partition_oracle import decide
from sat_engine import entails
from sat_reduction import decide_sat
from sequent_calculus import (
    check_original_proof,
    check_sequent,
    decide_original_via_proof,
    prove,
    prove_without_in,
    to_native,
)

logger = logging.getLogger(__name__)

Oracle = Callable[[IOSequent, Settings], bool]


def reference_oracle(s: IOSequent, settings: Settings) -> bool:
    return decide(s, settings).derivable


@dataclass
class InstanceReport:
    sequent: IOSequent
    verdicts: dict[str, bool] = field(default_factory=dict)
    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems


@dataclass
class SelfcheckReport:
    total: int
    failures: list[InstanceReport]

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def minimal_failure(self) -> InstanceReport | None:
        if not self.failures:
            return None
        return min(self.failures, key=lambda r: instance_size(r.sequent))


def check_instance(s: IOSequent, settings: Settings, oracle: Oracle = reference_oracle) -> InstanceReport:
    report = InstanceReport(s)
    problems = report.problems
    verdicts = report.verdicts

    verdicts["oracle"] = oracle(s, settings)

    sat_verdict, model = decide_sat(s, settings)
    verdicts["sat"] = sat_verdict
    if model is not None:
        if not check_countermodel(model, s):
            problems.append("SAT countermodel rejected by the model checker")
        elif not refutes(embed(s), kripke_from_io(model)):
            problems.append("Kripke lift of the SAT countermodel does not refute the embedding")

    if not s.logic.causal:
        causal = oracle(s.causal(), settings)
        outputs = entails(s.outputs, s.goal.output, settings)
        if verdicts["oracle"] != (causal and outputs):
            problems.append("original verdict differs from causal verdict plus output entailment")

    if s.logic.single_input and len(s.premises) > settings.proof_cap:
        logger.debug("proof mode skipped, %d pairs over the cap", len(s.premises))
    elif s.logic.causal:
        d = prove(s, settings)
        verdicts["proof"] = d is not None
        if d is not None:
            checked = check_sequent(d, s, settings)
            if not checked:
                problems.append(f"sequent derivation rejected: {checked}")
            checked = check_native(to_native(d), s, settings)
            if not checked:
                problems.append(f"native expansion rejected: {checked}")
    else:
        p = decide_original_via_proof(s, settings)
        verdicts["proof"] = p is not None
        if p is not None:
            if not check_original_proof(p, s, settings):
                problems.append("original proof rejected")
            native = to_native(p.derivation, bot_free=True)
            if "BOT" in native.rules_used():
                problems.append("BOT-free expansion still uses BOT")
            checked = check_native(native, s, settings)
            if not checked:
                problems.append(f"BOT-free expansion rejected: {checked}")
        if not s.logic.single_input:
            verdicts["proof-without-in"] = prove_without_in(s, settings) is not None

    if len(set(verdicts.values())) > 1:
        problems.append("verdicts disagree: " + ", ".join(f"{k}={v}" for k, v in verdicts.items()))
    return report


def run_selfcheck(
    settings: Settings | None = None,
    instances: Sequence[IOSequent] | None = None,
    oracle: Oracle = reference_oracle,
) -> SelfcheckReport:
    """Check every instance on a thread pool; failures are reported in battery order."""
    settings = settings or current_settings()
    if instances is None:
        instances = default_battery() + random_instances(settings.seed, settings.selfcheck_random)
    with ThreadPoolExecutor(max_workers=max(1, settings.selfcheck_workers)) as pool:
        reports = list(pool.map(lambda s: check_instance(s, settings, oracle), instances))
    failures = [r for r in reports if not r.ok]
    for r in failures:
        logger.warning("✗ %s: %s", r.sequent, "; ".join(r.problems))
    logger.info("selfcheck: %d instances, %d failures", len(reports), len(failures))
    return SelfcheckReport(len(reports), failures)
