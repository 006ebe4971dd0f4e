from collections import defaultdict
import itertools
import random

import pytest

from battery import random_formula
from config import Settings
from formula import BOT, TOP, And, Atom, Implies, Not, Or, Valuation, atoms, evaluate, parse
from sat_engine import (
    CnfInstance,
    LKSequent,
    Solver,
    check_model,
    entails,
    is_satisfiable,
    is_valid,
    satisfying_valuation,
    solve,
    tseitin,
)

NAMES = ("a", "b", "x", "y")


def brute_force_sat(c: CnfInstance) -> bool:
    for bits in itertools.product((False, True), repeat=c.num_vars):
        assignment = (False, *bits)
        if check_model(c, assignment):
            return True
    return False


def enumerate_sat(c: CnfInstance) -> bool:
    """Exhaustive search over assignments in variable order, cut only where a clause is already false."""
    by_last = defaultdict(list)
    for clause in c.clauses:
        by_last[max(abs(l) for l in clause)].append(clause)
    values = [False] * (c.num_vars + 1)

    def extend(v: int) -> bool:
        if v > c.num_vars:
            return True
        for value in (False, True):
            values[v] = value
            if all(any(values[abs(l)] == (l > 0) for l in cl) for cl in by_last[v]) and extend(v + 1):
                return True
        return False

    return extend(1)


def truth_table_sat(f) -> bool:
    names = sorted(atoms(f))
    return any(
        evaluate(f, Valuation(zip(names, bits))) for bits in itertools.product((False, True), repeat=len(names))
    )


def random_cnf(rng: random.Random, max_vars: int) -> CnfInstance:
    n = rng.randint(1, max_vars)
    clauses = []
    for _ in range(rng.randint(1, 4 * n)):
        width = rng.randint(1, 3)
        clauses.append(tuple(rng.choice((-1, 1)) * rng.randint(1, n) for _ in range(width)))
    return CnfInstance(n, tuple(clauses))


def pigeonhole(pigeons: int, holes: int) -> CnfInstance:
    def var(i, j):
        return i * holes + j + 1

    clauses = [tuple(var(i, j) for j in range(holes)) for i in range(pigeons)]
    for j in range(holes):
        for i, k in itertools.combinations(range(pigeons), 2):
            clauses.append((-var(i, j), -var(k, j)))
    return CnfInstance(pigeons * holes, tuple(clauses))


@pytest.fixture(params=[False, True], ids=["dpll", "learning"])
def learn(request):
    return request.param


def test_cnf_instance_normalizes():
    c = CnfInstance(2, ((1, 1, -2), (1, -1), (2,)))
    assert c.clauses == ((1, -2), (2,))
    with pytest.raises(ValueError):
        CnfInstance(1, ((),))
    with pytest.raises(ValueError):
        CnfInstance(1, ((2,),))


def test_tseitin_of_an_atom():
    c = tseitin(Atom("a"))
    assert c.num_vars == 1
    assert c.clauses == ((1,),)
    assert c.atom_map == {"a": 1}


def test_trivial_instances(learn):
    assert Solver(CnfInstance(0, ()), learn).solve().is_sat
    assert not Solver(CnfInstance(1, ((1,), (-1,))), learn).solve().is_sat
    assert not Solver(tseitin(parse("a & !a")), learn).solve().is_sat


def test_pigeonhole_4_3_is_unsat(learn):
    assert not Solver(pigeonhole(4, 3), learn).solve()
    assert Solver(pigeonhole(3, 3), learn).solve()


def test_solver_agrees_with_brute_force(learn):
    rng = random.Random(1)
    for _ in range(200):
        c = random_cnf(rng, 8)
        result = Solver(c, learn).solve()
        assert result.is_sat == brute_force_sat(c)
        assert enumerate_sat(c) == result.is_sat
        if result:
            assert check_model(c, result.assignment)


@pytest.mark.slow
def test_solver_agrees_with_enumeration_on_ten_thousand_instances(learn):
    rng = random.Random(2)
    outcomes = set()
    for _ in range(10_000):
        c = random_cnf(rng, 20)
        result = Solver(c, learn).solve()
        assert result.is_sat == enumerate_sat(c), c
        if result:
            assert check_model(c, result.assignment)
        outcomes.add(result.is_sat)
    assert outcomes == {True, False}


def test_tseitin_is_equisatisfiable():
    rng = random.Random(3)
    for _ in range(200):
        f = random_formula(rng, NAMES, 4)
        result = solve(tseitin(f), Settings(external_solver=""))
        assert result.is_sat == truth_table_sat(f)
        if result:
            assert evaluate(f, Valuation({n: result.model[n] for n in atoms(f)}))


def test_solve_is_deterministic():
    c = tseitin(parse("(a | b) & (x -> !a)"))
    assert solve(c, Settings(external_solver="")) == solve(c, Settings(external_solver=""))


def test_validity_and_entailment(settings):
    assert is_valid(parse("a | !a"), settings)
    assert is_valid(TOP, settings)
    assert not is_valid(Atom("a"), settings)
    assert not is_satisfiable(BOT, settings)
    assert entails([parse("a"), parse("a -> x")], parse("x"), settings)
    assert entails([BOT], Atom("q"), settings)
    assert entails([], TOP, settings)
    assert not entails([parse("a | b")], parse("a"), settings)
    assert entails([Atom("x"), Atom("x")], Atom("x"), settings)


def test_entailment_properties(settings):
    rng = random.Random(5)
    for _ in range(60):
        h = [random_formula(rng, NAMES, 2) for _ in range(rng.randint(0, 2))]
        extra = random_formula(rng, NAMES, 2)
        c = random_formula(rng, NAMES, 2)
        d = random_formula(rng, NAMES, 2)
        for f in h:
            assert entails(h, f, settings)
        if entails(h, c, settings):
            assert entails([*h, extra], c, settings)
            if entails([*h, c], d, settings):
                assert entails(h, d, settings)


def test_lk_sequents(settings):
    assert LKSequent((), (parse("a -> a"),)).derivable(settings)
    assert LKSequent((BOT,), ()).derivable(settings)
    assert not LKSequent((Atom("a"),), ()).derivable(settings)
    assert LKSequent((Atom("a"),), (Atom("b"), Atom("a"))).derivable(settings)
    assert str(LKSequent((Atom("a"),), (Atom("a"),))) == "a => a"


def test_satisfying_valuation_is_total(settings):
    w = satisfying_valuation([Or(Atom("a"), Atom("b")), Not(Atom("a"))], ("a", "b", "z"), settings)
    assert w == Valuation({"a": False, "b": True, "z": False})
    assert satisfying_valuation([And(Atom("a"), Not(Atom("a")))], ("a",), settings) is None
    assert satisfying_valuation([Implies(TOP, TOP)], (), settings) == Valuation()


def test_tseitin_flattens_conjunction_chains():
    c = tseitin(parse("a & b & c"))
    assert c.num_vars == 4
    assert c.clauses == ((-4, 1), (-4, 2), (-4, 3), (4, -1, -2, -3), (4,))
    d = tseitin(parse("a | b | c"))
    assert d.clauses == ((-4, 1, 2, 3), (4, -1), (4, -2), (4, -3), (4,))


def test_two_thousand_atom_chain(learn):
    names = [f"p{i}" for i in range(2000)]
    chain = parse(" & ".join(names))
    settings = Settings(external_solver="", sat_learning=learn)
    assert is_valid(Implies(chain, Atom("p1999")), settings)
    assert not is_valid(chain, settings)
    assert entails([chain], Atom("p0"), settings)
    assert not entails([chain], Atom("q"), settings)
    c = tseitin(chain)
    assert len(c.clauses) == 2002
