"""
Classical backend: Tseitin CNF, a watched-literal DPLL solver, and the
validity / entailment checks every other module decides LK sequents with.

Branching takes the lowest unassigned variable, positive polarity first, so
models (and the countermodels decoded from them) are reproducible.
"""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
import logging

from config import Settings, current_settings
from formula import (
    And,
    Atom,
    Bot,
    Formula,
    Implies,
    Not,
    Or,
    Top,
    Valuation,
    atoms,
    conjoin,
    disjoin,
)

logger = logging.getLogger(__name__)


# ----------------------------
# CNF instances
# ----------------------------
@dataclass(frozen=True)
class CnfInstance:
    num_vars: int
    clauses: tuple[tuple[int, ...], ...]
    atom_map: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        normalized = []
        for clause in self.clauses:
            lits = tuple(dict.fromkeys(int(l) for l in clause))
            if not lits:
                raise ValueError("empty clause")
            for l in lits:
                if l == 0 or abs(l) > self.num_vars:
                    raise ValueError(f"literal {l} out of range 1..{self.num_vars}")
            if any(-l in lits for l in lits):
                continue
            normalized.append(lits)
        object.__setattr__(self, "clauses", tuple(normalized))
        object.__setattr__(self, "atom_map", dict(self.atom_map))
        if len(set(self.atom_map.values())) != len(self.atom_map):
            raise ValueError("atom_map is not a bijection")

    def __hash__(self) -> int:
        return hash((self.num_vars, self.clauses, tuple(sorted(self.atom_map.items()))))


@dataclass(frozen=True)
class SatResult:
    is_sat: bool
    model: Valuation | None = None
    assignment: tuple[bool, ...] | None = None  # index v -> value of variable v (index 0 unused)

    def __bool__(self) -> bool:
        return self.is_sat


UNSAT = SatResult(False)


def check_model(instance: CnfInstance, assignment: Sequence[bool]) -> bool:
    """Clause-by-clause check of a full assignment (index 0 unused)."""
    for clause in instance.clauses:
        if not any(assignment[abs(l)] == (l > 0) for l in clause):
            return False
    return True


# ----------------------------
# Tseitin transformation
# ----------------------------
class _TseitinBuilder:
    def __init__(self, names: Iterable[str]):
        self.atom_map: dict[str, int] = {}
        self.num_vars = 0
        self.clauses: list[tuple[int, ...]] = []
        self._memo: dict[int, int] = {}
        self._keep: list[Formula] = []
        self._true: int | None = None
        for name in sorted(names):
            self.atom_map[name] = self._fresh()

    def _fresh(self) -> int:
        self.num_vars += 1
        return self.num_vars

    def _constant_true(self) -> int:
        if self._true is None:
            self._true = self._fresh()
            self.clauses.append((self._true,))
        return self._true

    @staticmethod
    def _operands(f: Formula) -> tuple[Formula, ...]:
        """Direct arguments; a chain of & (or of |) is flattened into one gate."""
        match f:
            case Not(arg):
                return (arg,)
            case Implies(l, r):
                return (l, r)
            case And() | Or():
                kind = type(f)
                out: list[Formula] = []
                stack = [f]
                while stack:
                    node = stack.pop()
                    if type(node) is kind:
                        stack.append(node.right)
                        stack.append(node.left)
                    else:
                        out.append(node)
                return tuple(out)
        return ()

    def _define(self, f: Formula, args: list[int]) -> int:
        match f:
            case Atom(name):
                return self.atom_map[name]
            case Top():
                return self._constant_true()
            case Bot():
                return -self._constant_true()
            case Not():
                return -args[0]
            case And():
                g = self._fresh()
                self.clauses += [(-g, a) for a in args]
                self.clauses.append((g, *(-a for a in args)))
                return g
            case Or():
                g = self._fresh()
                self.clauses.append((-g, *args))
                self.clauses += [(g, -a) for a in args]
                return g
            case Implies():
                a, b = args
                g = self._fresh()
                self.clauses += [(-g, -a, b), (g, a), (g, -b)]
                return g
        raise TypeError(f"not a formula: {type(f).__name__}")

    def literal(self, f: Formula) -> int:
        stack: list[tuple[Formula, tuple[Formula, ...] | None]] = [(f, None)]
        while stack:
            node, args = stack.pop()
            if id(node) in self._memo:
                continue
            if args is None:
                args = self._operands(node)
                pending = [a for a in args if id(a) not in self._memo]
                if pending:
                    stack.append((node, args))
                    stack.extend((a, None) for a in reversed(pending))
                    continue
            self._keep.append(node)
            self._memo[id(node)] = self._define(node, [self._memo[id(a)] for a in args])
        return self._memo[id(f)]


def tseitin(f: Formula) -> CnfInstance:
    """Equisatisfiable CNF; atoms keep their names in atom_map, the root literal is asserted."""
    builder = _TseitinBuilder(atoms(f))
    root = builder.literal(f)
    builder.clauses.append((root,))
    return CnfInstance(builder.num_vars, tuple(builder.clauses), builder.atom_map)


# ----------------------------
# Solver
# ----------------------------
class Solver:
    """
    DPLL over two watched literals with chronological backtracking.
    With learn=True conflicts are analysed to the first UIP, the learned
    clause is added and the search backjumps.
    """

    def __init__(self, instance: CnfInstance, learn: bool = False):
        self.instance = instance
        self.n = instance.num_vars
        self.learn = learn
        self.clauses: list[list[int]] = []
        self.watches: dict[int, list[int]] = defaultdict(list)
        self.value = [0] * (self.n + 1)
        self.level = [0] * (self.n + 1)
        self.reason: list[int | None] = [None] * (self.n + 1)
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.flipped: list[bool] = []
        self.qhead = 0
        self.next_var = 1
        self.ok = True
        self.conflicts = 0
        self.decisions = 0
        for clause in instance.clauses:
            self._add_input(list(clause))

    def _lit_value(self, lit: int) -> int:
        v = self.value[abs(lit)]
        return v if lit > 0 else -v

    def _add_input(self, clause: list[int]) -> None:
        if len(clause) == 1:
            lit = clause[0]
            val = self._lit_value(lit)
            if val < 0:
                self.ok = False
            elif val == 0:
                self._enqueue(lit, None)
            return
        ci = len(self.clauses)
        self.clauses.append(clause)
        self.watches[clause[0]].append(ci)
        self.watches[clause[1]].append(ci)

    def _enqueue(self, lit: int, reason: int | None) -> None:
        v = abs(lit)
        self.value[v] = 1 if lit > 0 else -1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)

    def _propagate(self) -> int | None:
        while self.qhead < len(self.trail):
            false_lit = -self.trail[self.qhead]
            self.qhead += 1
            ws = self.watches[false_lit]
            i = j = 0
            while i < len(ws):
                ci = ws[i]
                i += 1
                c = self.clauses[ci]
                if c[0] == false_lit:
                    c[0], c[1] = c[1], c[0]
                first = c[0]
                if self._lit_value(first) > 0:
                    ws[j] = ci
                    j += 1
                    continue
                for k in range(2, len(c)):
                    if self._lit_value(c[k]) >= 0:
                        c[1], c[k] = c[k], c[1]
                        self.watches[c[1]].append(ci)
                        break
                else:
                    ws[j] = ci
                    j += 1
                    if self._lit_value(first) < 0:
                        while i < len(ws):
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                        del ws[j:]
                        return ci
                    self._enqueue(first, ci)
            del ws[j:]
        return None

    def _cancel_until(self, lvl: int) -> None:
        while len(self.trail_lim) > lvl:
            start = self.trail_lim.pop()
            self.flipped.pop()
            for lit in self.trail[start:]:
                v = abs(lit)
                self.value[v] = 0
                self.reason[v] = None
                if v < self.next_var:
                    self.next_var = v
            del self.trail[start:]
        self.qhead = len(self.trail)

    def _pick_branch(self) -> int | None:
        while self.next_var <= self.n and self.value[self.next_var] != 0:
            self.next_var += 1
        return self.next_var if self.next_var <= self.n else None

    def _flip(self) -> bool:
        while self.trail_lim and self.flipped[-1]:
            self._cancel_until(len(self.trail_lim) - 1)
        if not self.trail_lim:
            return False
        decision = self.trail[self.trail_lim[-1]]
        self._cancel_until(len(self.trail_lim) - 1)
        self.trail_lim.append(len(self.trail))
        self.flipped.append(True)
        self._enqueue(-decision, None)
        return True

    def _analyze(self, confl: int) -> list[int]:
        current = len(self.trail_lim)
        seen = [False] * (self.n + 1)
        learnt: list[int] = []
        counter = 0
        p = 0
        ti = len(self.trail) - 1
        lits = self.clauses[confl]
        while True:
            for q in lits:
                if q == p:
                    continue
                v = abs(q)
                if not seen[v] and self.level[v] > 0:
                    seen[v] = True
                    if self.level[v] == current:
                        counter += 1
                    else:
                        learnt.append(q)
            while not seen[abs(self.trail[ti])]:
                ti -= 1
            p = self.trail[ti]
            ti -= 1
            seen[abs(p)] = False
            counter -= 1
            if counter == 0:
                break
            lits = self.clauses[self.reason[abs(p)]]
        return [-p] + learnt

    def _learn(self, confl: int) -> None:
        learnt = self._analyze(confl)
        backjump = 0
        if len(learnt) > 1:
            best = max(range(1, len(learnt)), key=lambda k: self.level[abs(learnt[k])])
            learnt[1], learnt[best] = learnt[best], learnt[1]
            backjump = self.level[abs(learnt[1])]
        self._cancel_until(backjump)
        if len(learnt) == 1:
            self._enqueue(learnt[0], None)
            return
        ci = len(self.clauses)
        self.clauses.append(learnt)
        self.watches[learnt[0]].append(ci)
        self.watches[learnt[1]].append(ci)
        self._enqueue(learnt[0], ci)

    def solve(self) -> SatResult:
        if not self.ok:
            return UNSAT
        while True:
            confl = self._propagate()
            if confl is not None:
                self.conflicts += 1
                if not self.trail_lim:
                    return UNSAT
                if self.learn:
                    self._learn(confl)
                elif not self._flip():
                    return UNSAT
                continue
            var = self._pick_branch()
            if var is None:
                return self._result()
            self.decisions += 1
            self.trail_lim.append(len(self.trail))
            self.flipped.append(False)
            self._enqueue(var, None)

    def _result(self) -> SatResult:
        assignment = (False,) + tuple(self.value[v] > 0 for v in range(1, self.n + 1))
        model = Valuation({name: assignment[i] for name, i in self.instance.atom_map.items()})
        return SatResult(True, model, assignment)


def solve(c: CnfInstance, settings: Settings | None = None) -> SatResult:
    settings = settings or current_settings()
    if settings.external_solver:
        from dimacs import solve_external

        return solve_external(c, settings.external_solver, timeout=settings.external_timeout)
    solver = Solver(c, learn=settings.sat_learning)
    result = solver.solve()
    logger.debug(
        "solve: %d vars, %d clauses -> %s (%d decisions, %d conflicts)",
        c.num_vars, len(c.clauses), "SAT" if result else "UNSAT", solver.decisions, solver.conflicts,
    )
    return result


# ----------------------------
# Classical checks
# ----------------------------
def is_satisfiable(f: Formula, settings: Settings | None = None) -> bool:
    return solve(tseitin(f), settings).is_sat


def is_valid(f: Formula, settings: Settings | None = None) -> bool:
    return not is_satisfiable(Not(f), settings)


def entails(hyps: Iterable[Formula], concl: Formula, settings: Settings | None = None) -> bool:
    """hyps |= concl, i.e. the conjunction of hyps with !concl is unsatisfiable."""
    return not is_satisfiable(And(conjoin(hyps), Not(concl)), settings)


def lk_derivable(
    antecedent: Iterable[Formula], succedent: Iterable[Formula], settings: Settings | None = None
) -> bool:
    """Gamma => Delta, decided as entails(Gamma, OR Delta); an empty Delta reads as F."""
    return entails(antecedent, disjoin(succedent), settings)


def satisfying_valuation(
    formulas: Iterable[Formula], universe: Iterable[str], settings: Settings | None = None
) -> Valuation | None:
    """A model of all formulas, total on universe (unconstrained atoms false), or None."""
    result = solve(tseitin(conjoin(formulas)), settings)
    if not result:
        return None
    return Valuation({x: result.model.get(x, False) for x in universe})


@dataclass(frozen=True)
class LKSequent:
    """Classical sequent Gamma => Delta, certified by a SAT verdict rather than an LK tree."""

    antecedent: tuple[Formula, ...] = ()
    succedent: tuple[Formula, ...] = ()

    def derivable(self, settings: Settings | None = None) -> bool:
        return lk_derivable(self.antecedent, self.succedent, settings)

    def __str__(self) -> str:
        left = ", ".join(str(f) for f in self.antecedent)
        right = ", ".join(str(f) for f in self.succedent)
        return f"{left} => {right}".strip()
