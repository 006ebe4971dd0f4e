"""Theory files: convert line-format (.io) and JSON theories into premise pairs, goal and logic."""

from __future__ import annotations

from dataclasses import dataclass
import json
import os
from typing import Any

from errors import FormulaSyntaxError, TheoryFormatError, UnknownLogicError
from formula import parse
from io_theory import IOPair, IOSequent, LogicId, parse_logic
from utils import decode_error_line, read_utf8

PAIR_ARROW = "=>"


@dataclass(frozen=True)
class Theory:
    pairs: tuple[IOPair, ...]
    goal: IOPair | None = None
    logic: LogicId | None = None

    def sequent(self, goal: IOPair | None = None, logic: LogicId | None = None) -> IOSequent:
        """Combine with command-line overrides; the overrides win."""
        goal = goal or self.goal
        logic = logic or self.logic
        if goal is None:
            raise TheoryFormatError("no goal pair given (use --goal or a 'goal' entry)")
        if logic is None:
            raise TheoryFormatError("no logic given (use --logic or a 'logic' entry)")
        return IOSequent(self.pairs, goal, logic)


def detect_file_type(filepath: str) -> str:
    """Detect file type from extension."""
    ext = os.path.splitext(filepath)[1].lower()
    if ext == ".json":
        return "json"
    return "io"


def parse_pair(text: str, line: int | None = None) -> IOPair:
    """'A => X' with both sides in the formula grammar."""
    parts = text.split(PAIR_ARROW)
    if len(parts) != 2:
        raise TheoryFormatError(f"expected exactly one '{PAIR_ARROW}' in {text.strip()!r}", line)
    try:
        return IOPair(parse(parts[0]), parse(parts[1]))
    except FormulaSyntaxError as e:
        raise TheoryFormatError(str(e), line) from None


def parse_theory_text(text: str) -> Theory:
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        pairs.append(parse_pair(line, lineno))
    return Theory(tuple(pairs))


def _json_pair(obj: Any, where: str) -> IOPair:
    if not isinstance(obj, dict) or "in" not in obj or "out" not in obj:
        raise TheoryFormatError(f"{where}: expected an object with 'in' and 'out'")
    try:
        return IOPair(parse(str(obj["in"])), parse(str(obj["out"])))
    except FormulaSyntaxError as e:
        raise TheoryFormatError(f"{where}: {e}") from None


def parse_theory_json(text: str) -> Theory:
    """{"pairs": [{"in": ..., "out": ...}], "goal": {...}, "logic": "out3c"}"""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise TheoryFormatError(f"invalid JSON: {e.msg}", e.lineno) from None
    if not isinstance(obj, dict):
        raise TheoryFormatError("JSON theory must be an object")
    raw_pairs = obj.get("pairs", [])
    if not isinstance(raw_pairs, list):
        raise TheoryFormatError("'pairs' must be a list")
    pairs = tuple(_json_pair(p, f"pairs[{i}]") for i, p in enumerate(raw_pairs))
    goal = _json_pair(obj["goal"], "goal") if obj.get("goal") is not None else None
    logic = None
    if obj.get("logic") is not None:
        try:
            logic = parse_logic(str(obj["logic"]))
        except UnknownLogicError as e:
            raise TheoryFormatError(str(e)) from None
    return Theory(pairs, goal, logic)


def load_theory(filepath: str) -> Theory:
    """Load a theory based on file type."""
    try:
        text = read_utf8(filepath)
    except UnicodeDecodeError as e:
        raise TheoryFormatError(f"invalid UTF-8 at byte {e.start}", decode_error_line(e)) from None
    if detect_file_type(filepath) == "json":
        return parse_theory_json(text)
    return parse_theory_text(text)
