"""DIMACS CNF reading/writing and the external-solver escape hatch."""

import logging
import os
import re
import subprocess
import tempfile

from errors import DimacsFormatError, ExternalSolverError
from formula import Valuation
from sat_engine import CnfInstance, SatResult, UNSAT, check_model

logger = logging.getLogger(__name__)

_HEADER_RE = re.compile(r"p\s+cnf\s+(\d+)\s+(\d+)\s*$")
_MAP_RE = re.compile(r"c\s+map\s+(\S+)\s+(\d+)\s*$")


def export_dimacs(c: CnfInstance) -> str:
    """Map comments, header, one clause per line."""
    lines = [f"c map {name} {index}" for name, index in sorted(c.atom_map.items(), key=lambda kv: kv[1])]
    lines.append(f"p cnf {c.num_vars} {len(c.clauses)}")
    lines.extend(" ".join(str(l) for l in clause) + " 0" for clause in c.clauses)
    return "\n".join(lines) + "\n"


def import_dimacs(text: str) -> CnfInstance:
    header = None
    atom_map: dict[str, int] = {}
    clauses: list[tuple[int, ...]] = []
    carryover: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        if line.startswith("c"):
            m = _MAP_RE.match(line)
            if m:
                atom_map[m.group(1)] = int(m.group(2))
            continue
        if line.startswith("p"):
            if header is not None:
                raise DimacsFormatError("duplicate header", lineno)
            m = _HEADER_RE.match(line)
            if m is None:
                raise DimacsFormatError(f"malformed header: {line!r}", lineno)
            header = (int(m.group(1)), int(m.group(2)))
            continue
        if header is None:
            raise DimacsFormatError("clause before 'p cnf' header", lineno)
        try:
            lits = [int(tok) for tok in line.split()]
        except ValueError:
            raise DimacsFormatError(f"non-integer literal in {line!r}", lineno) from None
        for lit in lits:
            if lit == 0:
                if not carryover:
                    raise DimacsFormatError("empty clause", lineno)
                clauses.append(tuple(carryover))
                carryover = []
                continue
            if abs(lit) > header[0]:
                raise DimacsFormatError(f"literal {lit} out of range 1..{header[0]}", lineno)
            carryover.append(lit)
    if header is None:
        raise DimacsFormatError("missing 'p cnf' header")
    if carryover:
        raise DimacsFormatError("last clause is not terminated by 0")
    num_vars, num_clauses = header
    if len(clauses) != num_clauses:
        raise DimacsFormatError(f"header announces {num_clauses} clauses, found {len(clauses)}")
    for name, index in atom_map.items():
        if not 1 <= index <= num_vars:
            raise DimacsFormatError(f"map entry {name} -> {index} out of range")
    return CnfInstance(num_vars, tuple(clauses), atom_map)


def parse_solver_output(text: str, c: CnfInstance) -> SatResult:
    """Read the 's SATISFIABLE' / 'v ...' competition output format."""
    status = None
    values: dict[int, bool] = {}
    for line in text.splitlines():
        line = line.strip()
        if line.startswith("s "):
            status = line[2:].strip()
        elif line.startswith("v "):
            for tok in line[2:].split():
                try:
                    lit = int(tok)
                except ValueError:
                    raise ExternalSolverError(f"malformed value line in solver output: {line!r}") from None
                if lit != 0:
                    values[abs(lit)] = lit > 0
    if status == "UNSATISFIABLE":
        return UNSAT
    if status != "SATISFIABLE":
        raise ExternalSolverError(f"no solution line in solver output (status {status!r})")
    assignment = (False,) + tuple(values.get(v, False) for v in range(1, c.num_vars + 1))
    if not check_model(c, assignment):
        raise ExternalSolverError("external solver model does not satisfy the instance")
    model = Valuation({name: assignment[i] for name, i in c.atom_map.items()})
    return SatResult(True, model, assignment)


def solve_external(c: CnfInstance, executable: str, timeout: int = 60) -> SatResult:
    """Run an external DIMACS solver on a temporary file and parse its answer."""
    fd, path = tempfile.mkstemp(suffix=".cnf")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(export_dimacs(c))
        try:
            proc = subprocess.run(
                [executable, path], capture_output=True, text=True, timeout=timeout, check=False
            )
        except (OSError, subprocess.TimeoutExpired) as e:
            raise ExternalSolverError(f"external solver {executable!r} failed: {e}") from e
        logger.debug("external solver %s exited with %d", executable, proc.returncode)
        return parse_solver_output(proc.stdout, c)
    finally:
        os.unlink(path)
