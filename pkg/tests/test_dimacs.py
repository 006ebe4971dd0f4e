import re
import stat

import pytest

from config import Settings
from dimacs import export_dimacs, import_dimacs, parse_solver_output, solve_external
from errors import DimacsFormatError, ExternalSolverError
from formula import parse
from sat_engine import CnfInstance, solve, tseitin


def test_export_plain_instance():
    assert export_dimacs(CnfInstance(2, ((1, -2),))) == "p cnf 2 1\n1 -2 0\n"


def test_export_tseitin_instance_has_map_and_well_formed_clauses():
    text = export_dimacs(tseitin(parse("(a -> b) & !x")))
    lines = text.splitlines()
    assert lines[:3] == ["c map a 1", "c map b 2", "c map x 3"]
    assert re.fullmatch(r"p cnf \d+ \d+", lines[3])
    for line in lines[4:]:
        assert re.fullmatch(r"(-?[1-9]\d*\s+)*0", line)


@pytest.mark.parametrize("formula", ["a & !a", "(a | b) -> x", "T", "F | a"])
def test_import_inverts_export(formula):
    c = tseitin(parse(formula))
    assert import_dimacs(export_dimacs(c)) == c


def test_import_accepts_clauses_split_over_lines():
    c = import_dimacs("c a comment\np cnf 3 2\n1 -2\n3 0 -1 0\n")
    assert c.clauses == ((1, -2, 3), (-1,))


@pytest.mark.parametrize(
    "text,line",
    [
        ("p cnf x 1\n", 1),
        ("1 0\np cnf 1 1\n", 1),
        ("p cnf 1 1\n2 0\n", 2),
        ("p cnf 1 1\np cnf 1 1\n", 2),
        ("p cnf 1 1\n1 a 0\n", 2),
        ("p cnf 1 2\n1 0\n", None),
        ("p cnf 2 1\n1 -2\n", None),
        ("", None),
    ],
)
def test_import_errors(text, line):
    with pytest.raises(DimacsFormatError) as e:
        import_dimacs(text)
    assert e.value.line == line


def test_parse_solver_output():
    c = CnfInstance(2, ((1, -2),), {"a": 1, "b": 2})
    assert not parse_solver_output("c hello\ns UNSATISFIABLE\n", c)
    result = parse_solver_output("s SATISFIABLE\nv 1 -2 0\n", c)
    assert result.model == {"a": True, "b": False}
    with pytest.raises(ExternalSolverError):
        parse_solver_output("s SATISFIABLE\nv -1 2 0\n", c)
    with pytest.raises(ExternalSolverError):
        parse_solver_output("s UNKNOWN\n", c)
    with pytest.raises(ExternalSolverError, match="malformed value line"):
        parse_solver_output("s SATISFIABLE\nv 1 two 0\n", c)


def _fake_solver(tmp_path, body: str) -> str:
    script = tmp_path / "solver.sh"
    script.write_text("#!/bin/sh\n" + body, encoding="utf-8")
    script.chmod(script.stat().st_mode | stat.S_IEXEC)
    return str(script)


def test_external_solver_is_used_when_configured(tmp_path):
    exe = _fake_solver(tmp_path, 'echo "s SATISFIABLE"\necho "v 1 -2 0"\n')
    c = CnfInstance(2, ((1, -2),), {"a": 1, "b": 2})
    result = solve(c, Settings(external_solver=exe))
    assert result.model == {"a": True, "b": False}
    assert not solve_external(c, _fake_solver(tmp_path, 'echo "s UNSATISFIABLE"\n'))


def test_external_solver_missing_executable(tmp_path):
    with pytest.raises(ExternalSolverError):
        solve_external(CnfInstance(1, ((1,),)), str(tmp_path / "no-such-solver"))
