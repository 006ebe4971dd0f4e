"""Instance generators: small formula pools, the built-in exhaustive battery, random instances."""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Sequence
from itertools import combinations
import random

from formula import BOT, TOP, And, Atom, Formula, Implies, Not, Or, parse, size
from io_theory import ALL_LOGICS, IOPair, IOSequent, LogicId


def small_formulas(atom_names: Sequence[str], depth: int) -> list[Formula]:
    """Every formula over atom_names with nesting depth <= depth, without duplicates."""
    seen: dict[Formula, None] = dict.fromkeys([TOP, BOT, *(Atom(a) for a in atom_names)])
    for _ in range(depth):
        previous = list(seen)
        for f in previous:
            seen.setdefault(Not(f))
        for f in previous:
            for g in previous:
                for ctor in (And, Or, Implies):
                    seen.setdefault(ctor(f, g))
    return list(seen)


def random_formula(rng: random.Random, atom_names: Sequence[str], depth: int) -> Formula:
    if depth == 0 or rng.random() < 0.3:
        roll = rng.random()
        if roll < 0.05:
            return TOP
        if roll < 0.1:
            return BOT
        return Atom(rng.choice(atom_names))
    match rng.randrange(4):
        case 0:
            return Not(random_formula(rng, atom_names, depth - 1))
        case 1:
            return And(random_formula(rng, atom_names, depth - 1), random_formula(rng, atom_names, depth - 1))
        case 2:
            return Or(random_formula(rng, atom_names, depth - 1), random_formula(rng, atom_names, depth - 1))
    return Implies(random_formula(rng, atom_names, depth - 1), random_formula(rng, atom_names, depth - 1))


def random_pair(rng: random.Random, atom_names: Sequence[str], depth: int) -> IOPair:
    return IOPair(random_formula(rng, atom_names, depth), random_formula(rng, atom_names, depth))


def random_instance(
    rng: random.Random, logic: LogicId, n_pairs: int, atom_names: Sequence[str], depth: int = 2
) -> IOSequent:
    pairs = tuple(random_pair(rng, atom_names, depth) for _ in range(n_pairs))
    return IOSequent(pairs, random_pair(rng, atom_names, depth), logic)


def random_instances(
    seed: int,
    count: int,
    logics: Iterable[LogicId] = ALL_LOGICS,
    max_pairs: int = 4,
    atom_names: Sequence[str] = ("a", "b", "x", "y"),
    depth: int = 2,
) -> list[IOSequent]:
    """count instances per logic, reproducible from seed."""
    rng = random.Random(seed)
    out = []
    for logic in logics:
        for _ in range(count):
            out.append(random_instance(rng, logic, rng.randint(0, max_pairs), atom_names, depth))
    return out


def exhaustive_instances(
    pairs: Sequence[IOPair],
    goals: Sequence[IOPair],
    max_pairs: int = 3,
    logics: Iterable[LogicId] = ALL_LOGICS,
) -> Iterator[IOSequent]:
    """Every premise set of at most max_pairs pairs, against every goal, in every logic."""
    logics = tuple(logics)
    for k in range(max_pairs + 1):
        for premises in combinations(pairs, k):
            for goal in goals:
                for logic in logics:
                    yield IOSequent(premises, goal, logic)


def _pairs(*lines: str) -> tuple[IOPair, ...]:
    out = []
    for line in lines:
        a, x = line.split("=>")
        out.append(IOPair(parse(a), parse(x)))
    return tuple(out)


# rules OR, CT and BOT each separate some logics on these
BATTERY_PAIRS = _pairs("a => x", "b => x", "a & x => y", "!a => x", "T => a | y", "F => b")
BATTERY_GOALS = _pairs(
    "a | b => x",
    "a => y",
    "a => x & y",
    "F => x",
    "T => T",
    "a & b => x",
    "a => x | y",
    "b & !a => x",
)


def default_battery() -> list[IOSequent]:
    return list(exhaustive_instances(BATTERY_PAIRS, BATTERY_GOALS, max_pairs=3))


def instance_size(s: IOSequent) -> tuple[int, int]:
    """Ordering key for 'minimal' instances: fewest pairs, then fewest symbols."""
    symbols = sum(size(p.input) + size(p.output) for p in (*s.premises, s.goal))
    return len(s.premises), symbols
