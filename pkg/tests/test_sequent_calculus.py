import pytest

from config import Settings
from errors import CapExceededError
from formula import TOP, And, Atom, Not, Or, parse
from io_theory import IOPair, IOSequent, check_native, parse_logic
from partition_oracle import decide
from sat_engine import LKSequent
from sequent_calculus import (
    IN,
    OUT,
    ClassicalLeaf,
    IONode,
    OriginalProof,
    check_original_proof,
    check_sequent,
    decide_original_via_proof,
    prove,
    prove_without_in,
    to_native,
)

a, b, x, y = Atom("a"), Atom("b"), Atom("x"), Atom("y")


def retag(node, logic):
    if isinstance(node, ClassicalLeaf):
        return node
    return IONode(node.sequent.with_logic(logic), node.rule, tuple(retag(c, logic) for c in node.children), node.eliminated)


def test_cut_example_in_family_3(make_sequent, settings):
    s = make_sequent(["a => x", "a & x => y"], "a => y", "out3c")
    d = prove(s, settings)
    assert d.rule == "PairElim3"
    assert d.eliminated == 0
    assert d.children[0] == ClassicalLeaf(LKSequent((a,), (a,)))
    inner = d.children[1]
    assert inner.sequent.goal == IOPair(And(a, x), Or(y, Not(x)))
    assert inner.sequent.premises == (IOPair(And(a, x), y),)
    assert inner.children[0] == ClassicalLeaf(LKSequent((And(a, x),), (And(a, x),)))
    leaf = inner.children[1]
    assert leaf.rule == OUT
    assert leaf.sequent.goal.output == Or(Or(y, Not(x)), Not(y))
    assert check_sequent(d, s, settings)
    native = to_native(d)
    assert "CT" in native.rules_used()
    assert check_native(native, s, settings)


def test_trivial_goal_closes_with_out(make_sequent, settings):
    s = make_sequent([], "T => T", "out2c")
    d = prove(s, settings)
    assert d == IONode(s, OUT, (ClassicalLeaf(LKSequent((), (TOP,))),))


def test_family_1_cannot_split_disjunctive_input(make_sequent, settings):
    assert prove(make_sequent(["a => x", "b => x"], "a | b => x", "out1c"), settings) is None


def test_family_2_normal_form(make_sequent, settings):
    s = make_sequent(["a => x", "b => x"], "a | b => x", "out2c")
    d = prove(s, settings)
    assert [leaf.rule for leaf in d.leaves()] == [IN, OUT, OUT, OUT]
    assert check_sequent(d, s, settings)
    assert check_native(to_native(d), s, settings)


def test_in_and_out_expansions(make_sequent, settings):
    s = make_sequent([], "F & p => q", "out2c")
    d = prove(s, settings)
    assert d.rule == IN
    native = to_native(d)
    assert [n.rule for n in native.walk()] == ["WO", "SI", "BOT"]
    assert check_native(native, s, settings)

    s = make_sequent([], "a => x | !x", "out2c")
    native = to_native(prove(s, settings))
    assert [n.rule for n in native.walk()] == ["SI", "WO", "TOP"]
    assert check_native(native, s, settings)


def test_single_pair_in_family_2(make_sequent, settings):
    s = make_sequent(["a => x"], "a => x", "out2c")
    d = prove(s, settings)
    assert check_native(to_native(d), s, settings)


def test_rejects_foreign_rule(make_sequent, settings):
    s2 = make_sequent(["a => x"], "a => x", "out2c")
    s4 = s2.with_logic(parse_logic("out4c"))
    result = check_sequent(retag(prove(s2, settings), s4.logic), s4, settings)
    assert not result
    assert result.clause == "rule"


def test_rejects_tampered_leaves(make_sequent, settings):
    s = make_sequent([], "T => T", "out2c")
    tampered = IONode(s, OUT, (ClassicalLeaf(LKSequent((), (x,))),))
    assert check_sequent(tampered, s, settings).clause == "shape"

    s = make_sequent([], "T => x", "out2c")
    unproved = IONode(s, OUT, (ClassicalLeaf(LKSequent((), (x,))),))
    assert check_sequent(unproved, s, settings).clause == "classical"

    s = make_sequent([], "F => x", "out1")
    no_in = IONode(s, IN, (ClassicalLeaf(LKSequent((parse("F"),), ())),))
    assert check_sequent(no_in, s, settings).clause == "rule"


def test_rejects_wrong_root(make_sequent, settings):
    s = make_sequent(["a => x"], "a => x", "out2c")
    d = prove(s, settings)
    assert check_sequent(d, make_sequent(["a => x"], "a => x | y", "out2c"), settings).clause == "root"


def test_agrees_with_oracle(small_battery, settings):
    for s in small_battery:
        expected = decide(s, settings).derivable
        if s.logic.causal:
            d = prove(s, settings)
            assert (d is not None) == expected, s
            if d is not None:
                assert check_sequent(d, s, settings)
                assert check_native(to_native(d), s, settings)
        else:
            p = decide_original_via_proof(s, settings)
            assert (p is not None) == expected, s
            if p is not None:
                assert check_original_proof(p, s, settings)


def test_dropping_in_decides_original_families_1_and_3(small_battery, settings):
    for s in small_battery:
        if s.logic.causal or s.logic.single_input:
            continue
        d = prove_without_in(s, settings)
        assert (d is not None) == decide(s, settings).derivable, s
        if d is not None:
            assert IN not in {leaf.rule for leaf in d.leaves()}
            assert check_sequent(d, s, settings)


def test_normal_form_has_one_leaf_per_subset(small_battery, settings):
    for s in small_battery:
        if s.logic.causal and s.logic.single_input:
            d = prove(s, settings)
            if d is not None:
                assert len(d.leaves()) == 2 ** len(s.premises)


def test_family_3_right_premise_is_invertible(small_battery, settings):
    for s in small_battery:
        if s.logic != parse_logic("out3c") or not s.premises or prove(s, settings) is None:
            continue
        first, rest = s.premises[0], s.premises[1:]
        goal = IOPair(And(s.goal.input, first.output), Or(s.goal.output, Not(first.output)))
        assert prove(IOSequent(rest, goal, s.logic), settings) is not None, s


def test_original_logic_proof(make_sequent, settings):
    s = make_sequent(["a => x", "b => x"], "a | b => x", "out2")
    p = decide_original_via_proof(s, settings)
    assert p.witness.sequent == LKSequent((x, x), (x,))
    assert check_original_proof(p, s, settings)
    assert decide_original_via_proof(make_sequent([], "F => p", "out1"), settings) is None

    forged = OriginalProof(p.derivation, ClassicalLeaf(LKSequent((x,), (y,))))
    assert check_original_proof(forged, s, settings).clause == "witness"


def test_bot_free_expansion(make_sequent, settings):
    s = make_sequent(["a => x", "b => x"], "F & a => x | q", "out2")
    p = decide_original_via_proof(s, settings)
    native = to_native(p.derivation, bot_free=True)
    assert "BOT" not in native.rules_used()
    assert "AND" in native.rules_used()
    assert check_native(native, s, settings)


def test_bot_free_expansion_without_premises(make_sequent, settings):
    s = make_sequent([], "F => T", "out1")
    p = decide_original_via_proof(s, settings)
    native = to_native(p.derivation, bot_free=True)
    assert check_native(native, s, settings)


def test_wrong_logic_kind(make_sequent, settings):
    with pytest.raises(ValueError):
        prove(make_sequent([], "T => T", "out1"), settings)
    with pytest.raises(ValueError):
        prove_without_in(make_sequent([], "T => T", "out2"), settings)
    with pytest.raises(ValueError):
        decide_original_via_proof(make_sequent([], "T => T", "out2c"), settings)


def test_proof_cap(make_sequent):
    s = make_sequent(["a => x", "b => x"], "a | b => x", "out2c")
    with pytest.raises(CapExceededError):
        prove(s, Settings(external_solver="", proof_cap=1))
