import itertools
import random

import pytest

from battery import random_pair
from errors import UndeclaredAtomError
from formula import Atom, Valuation, parse
from io_semantics import (
    FrameCondition,
    IOModel,
    all_valuations,
    check_countermodel,
    frame_condition,
    notion_of,
    pair_valid,
    search_countermodel,
    universe_of,
)
from io_theory import ALL_LOGICS, IOPair, IOSequent, parse_logic
from partition_oracle import decide

NAMES = ("a", "x")


def world(**values):
    return Valuation(values)


def test_pair_validity():
    m = IOModel(frozenset({world(a=True, x=False)}), world(a=False, x=False))
    ax = IOPair(Atom("a"), Atom("x"))
    assert not pair_valid(ax, m, 12)
    assert not pair_valid(ax, m, 34)
    assert pair_valid(IOPair(Atom("x"), Atom("a")), m, 12)

    m = IOModel(frozenset({world(a=True, x=False)}), world(a=False, x=True))
    assert pair_valid(ax, m, 12)
    assert not pair_valid(ax, m, 34)


def test_no_input_worlds_means_the_output_world_decides():
    m = IOModel(frozenset(), world(a=True, x=False))
    assert pair_valid(IOPair(parse("F"), Atom("a")), m, 12)
    assert not pair_valid(IOPair(parse("F"), Atom("x")), m, 34)


def test_undeclared_atoms():
    m = IOModel(frozenset(), world(a=True))
    with pytest.raises(UndeclaredAtomError):
        pair_valid(IOPair(Atom("z"), Atom("a")), m, 12)
    with pytest.raises(UndeclaredAtomError):
        IOModel(frozenset({world(x=True)}), world(a=True))


@pytest.mark.parametrize(
    "code,frame",
    [
        ("out1", FrameCondition(0, None)),
        ("out2", FrameCondition(0, 1)),
        ("out3", FrameCondition(0, None)),
        ("out4", FrameCondition(0, 1)),
        ("out1c", FrameCondition(1, None)),
        ("out2c", FrameCondition(1, 1)),
        ("out3c", FrameCondition(1, None)),
        ("out4c", FrameCondition(1, 1)),
    ],
)
def test_frame_conditions(code, frame):
    assert frame_condition(parse_logic(code)) == frame


def test_notions():
    assert [notion_of(l) for l in ALL_LOGICS[:4]] == [12, 12, 34, 34]
    assert str(FrameCondition(1, 1)) == "|In| = 1"
    assert str(FrameCondition(0, None)) == "none"


def test_or_countermodel(make_sequent):
    s = make_sequent(["a => x", "b => x"], "a | b => x", "out1c")
    m = IOModel(
        frozenset({world(a=True, b=False, x=False), world(a=False, b=True, x=False)}),
        world(a=False, b=False, x=False),
    )
    assert check_countermodel(m, s)
    assert not check_countermodel(m, s.with_logic(parse_logic("out2c")))


def test_zero_input_countermodel(make_sequent):
    s = make_sequent([], "F => p", "out1")
    m = IOModel(frozenset(), Valuation({"p": False}))
    assert check_countermodel(m, s)
    assert not check_countermodel(m, s.causal())


def test_reusable_validity_implies_plain_validity():
    rng = random.Random(17)
    worlds = all_valuations(NAMES)
    for _ in range(300):
        inputs = frozenset(rng.sample(worlds, rng.randint(0, 3)))
        m = IOModel(inputs, rng.choice(worlds), frozenset(NAMES))
        p = random_pair(rng, NAMES, 2)
        if pair_valid(p, m, 34):
            assert pair_valid(p, m, 12)


def test_universe_and_model_json(make_sequent):
    s = make_sequent(["b => x"], "a => y", "out1")
    assert universe_of(s) == ("a", "b", "x", "y")
    m = IOModel(frozenset({world(a=True), world(a=False)}), world(a=True))
    assert m.to_json() == {"inputs": [{"a": False}, {"a": True}], "output": {"a": True}}


def _two_atom_instances():
    pool = [IOPair(parse(i), parse(o)) for i, o in [("a", "x"), ("x", "a"), ("T", "x"), ("a", "F"), ("!a", "x")]]
    goals = [IOPair(parse(i), parse(o)) for i, o in [("a", "x"), ("T", "x"), ("F", "x"), ("a | x", "x"), ("a", "x | a")]]
    for k in range(3):
        for premises in itertools.combinations(pool, k):
            for goal in goals:
                for logic in ALL_LOGICS:
                    yield IOSequent(premises, goal, logic)


def test_model_search_agrees_with_oracle(settings):
    for s in _two_atom_instances():
        m = search_countermodel(s)
        assert (m is None) == decide(s, settings).derivable, s
        if m is not None:
            assert check_countermodel(m, s)

