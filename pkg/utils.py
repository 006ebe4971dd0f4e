"""Shared utilities: stable JSON, hashing, file reading."""

import hashlib
import json
from pathlib import Path
from typing import Any


def stable_json_text(obj: Any) -> str:
    """Stable deterministic JSON on one line (line-oriented stdout)."""
    return json.dumps(obj, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def pretty_json_text(obj: Any) -> str:
    return json.dumps(obj, ensure_ascii=False, sort_keys=True, indent=2)


def sha256_text(s: str) -> str:
    """Compute SHA256 hash of text."""
    return hashlib.sha256(s.encode("utf-8")).hexdigest()


def compute_stable_id(*parts: str) -> str:
    """Stable id for a query: premises, goal and logic joined with '::'."""
    return sha256_text("::".join(parts))


def read_utf8(path: Path | str) -> str:
    """Strict UTF-8; a UnicodeDecodeError carries the byte offset into the whole file."""
    return Path(path).read_bytes().decode("utf-8")


def decode_error_line(e: UnicodeDecodeError) -> int:
    """1-based line of the first undecodable byte."""
    return e.object[: e.start].count(b"\n") + 1
