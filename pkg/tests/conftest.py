import os
import sys

import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from battery import BATTERY_GOALS, BATTERY_PAIRS, exhaustive_instances, random_formula  # noqa: E402
from config import Settings, current_settings  # noqa: E402
from formula import BOT, TOP, And, Or  # noqa: E402
from io_theory import ALL_LOGICS, IOPair, IOSequent, parse_logic  # noqa: E402
from theory_files import parse_pair  # noqa: E402


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for key in ("IOLOG_EXTERNAL_SOLVER", "IOLOG_SAT_LEARNING", "IOLOG_ORACLE_CAP", "IOLOG_PROOF_CAP"):
        monkeypatch.delenv(key, raising=False)
    current_settings.cache_clear()
    yield
    current_settings.cache_clear()


@pytest.fixture
def settings():
    return Settings(external_solver="", sat_learning=False, oracle_cap=24, proof_cap=20, selfcheck_workers=2)


@pytest.fixture
def make_sequent():
    """make_sequent(["a => x", "b => x"], "a | b => x", "out2")"""

    def build(pairs, goal, logic):
        return IOSequent(tuple(parse_pair(p) for p in pairs), parse_pair(goal), parse_logic(logic))

    return build


@pytest.fixture(scope="session")
def small_battery():
    """At most two pairs over four premise pairs, five goals, all eight logics."""
    return list(exhaustive_instances(BATTERY_PAIRS[:4], BATTERY_GOALS[:5], max_pairs=2))


@pytest.fixture(scope="session")
def rule_instances():
    """
    rule_instances(rng, count, atom_names) yields (rule, logics owning it,
    premises, conclusion): one instance of every rule per round, with random
    A, B, X, Y. TOP and BOT are applied next to an unrelated random premise.
    """

    def generate(rng, count, atom_names=("a", "b", "x")):
        causal = [l for l in ALL_LOGICS if l.causal]
        single_input = [l for l in ALL_LOGICS if l.single_input]
        reusable = [l for l in ALL_LOGICS if l.reusable]
        for _ in range(count):
            A, B, X, Y = (random_formula(rng, atom_names, 2) for _ in range(4))
            yield "TOP", ALL_LOGICS, [IOPair(B, Y)], IOPair(TOP, TOP)
            yield "BOT", causal, [IOPair(B, Y)], IOPair(BOT, BOT)
            yield "WO", ALL_LOGICS, [IOPair(A, X)], IOPair(A, Or(X, Y))
            yield "SI", ALL_LOGICS, [IOPair(A, X)], IOPair(And(A, B), X)
            yield "AND", ALL_LOGICS, [IOPair(A, X), IOPair(A, Y)], IOPair(A, And(X, Y))
            yield "OR", single_input, [IOPair(A, X), IOPair(B, X)], IOPair(Or(A, B), X)
            yield "CT", reusable, [IOPair(A, X), IOPair(And(A, X), Y)], IOPair(A, Y)

    return generate
