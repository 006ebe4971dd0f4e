"""JSON certificates for verdicts: sequent derivations, native derivations and I/O countermodels."""

from __future__ import annotations

from dataclasses import dataclass
import json
import logging
from typing import Any, Union

from config import Settings
from errors import CertificateFormatError, FormulaSyntaxError, UnknownLogicError
from formula import Formula, Valuation, parse
from io_semantics import IOModel, check_countermodel
from io_theory import CheckResult, IOPair, IOSequent, LogicId, NativeNode, check_native, failed, parse_logic
from sat_engine import LKSequent
from sequent_calculus import ClassicalLeaf, IONode, OriginalProof, check_original_proof, check_sequent
from utils import decode_error_line, pretty_json_text, read_utf8, stable_json_text

logger = logging.getLogger(__name__)

SEQUENT_KIND = "sequent-derivation"
NATIVE_KIND = "native-derivation"
MODEL_KIND = "io-model"

Payload = Union[IONode, OriginalProof, NativeNode, IOModel]


@dataclass(frozen=True)
class Certificate:
    kind: str
    logic: LogicId
    query_id: str
    payload: Payload


# ----------------------------
# Encoding
# ----------------------------
def _pair_json(p: IOPair) -> dict:
    return {"in": str(p.input), "out": str(p.output)}


def _lk_json(s: LKSequent) -> dict:
    return {"antecedent": [str(f) for f in s.antecedent], "succedent": [str(f) for f in s.succedent]}


def _leaf_json(leaf: ClassicalLeaf) -> dict:
    return {"rule": "LK", "sequent": _lk_json(leaf.sequent), "verdict": leaf.verdict}


def _io_node_json(node: IONode) -> dict:
    obj: dict[str, Any] = {
        "rule": node.rule,
        "sequent": {
            "pairs": [_pair_json(p) for p in node.sequent.premises],
            "goal": _pair_json(node.sequent.goal),
        },
        "children": [
            _io_node_json(c) if isinstance(c, IONode) else _leaf_json(c) for c in node.children
        ],
    }
    if node.eliminated is not None:
        obj["eliminated"] = node.eliminated
    return obj


def sequent_certificate(d: IONode | OriginalProof, s: IOSequent) -> dict:
    derivation = d.derivation if isinstance(d, OriginalProof) else d
    obj = {
        "kind": SEQUENT_KIND,
        "logic": s.logic.code,
        "calculus": derivation.sequent.logic.code,
        "query_id": s.query_id(),
        "root": _io_node_json(derivation),
    }
    if isinstance(d, OriginalProof):
        obj["witness"] = _leaf_json(d.witness)
    return obj


def _native_json(node: NativeNode) -> dict:
    obj: dict[str, Any] = {
        "rule": node.rule,
        "pair": _pair_json(node.pair),
        "children": [_native_json(c) for c in node.children],
    }
    if node.side is not None:
        obj["side"] = _lk_json(node.side)
    return obj


def native_certificate(d: NativeNode, s: IOSequent) -> dict:
    return {"kind": NATIVE_KIND, "logic": s.logic.code, "query_id": s.query_id(), "root": _native_json(d)}


def model_certificate(m: IOModel, s: IOSequent) -> dict:
    return {"kind": MODEL_KIND, "logic": s.logic.code, "query_id": s.query_id(), **m.to_json()}


def dump_certificate(obj: dict, pretty: bool = False) -> str:
    return pretty_json_text(obj) if pretty else stable_json_text(obj)


# ----------------------------
# Decoding
# ----------------------------
def _formula(text: Any) -> Formula:
    if not isinstance(text, str):
        raise CertificateFormatError(f"expected a formula string, got {text!r}")
    try:
        return parse(text)
    except FormulaSyntaxError as e:
        raise CertificateFormatError(f"bad formula {text!r}: {e}") from None


def _field(obj: Any, key: str) -> Any:
    if not isinstance(obj, dict) or key not in obj:
        raise CertificateFormatError(f"missing '{key}' in {obj!r:.80}")
    return obj[key]


def _pair(obj: Any) -> IOPair:
    return IOPair(_formula(_field(obj, "in")), _formula(_field(obj, "out")))


def _lk(obj: Any) -> LKSequent:
    return LKSequent(
        tuple(_formula(f) for f in _field(obj, "antecedent")),
        tuple(_formula(f) for f in _field(obj, "succedent")),
    )


def _leaf(obj: Any) -> ClassicalLeaf:
    return ClassicalLeaf(_lk(_field(obj, "sequent")), bool(_field(obj, "verdict")))


def _io_node(obj: Any, calculus: LogicId) -> IONode:
    seq = _field(obj, "sequent")
    sequent = IOSequent(tuple(_pair(p) for p in _field(seq, "pairs")), _pair(_field(seq, "goal")), calculus)
    children = tuple(
        _leaf(c) if _field(c, "rule") == "LK" else _io_node(c, calculus) for c in _field(obj, "children")
    )
    eliminated = obj.get("eliminated")
    if eliminated is not None and not isinstance(eliminated, int):
        raise CertificateFormatError(f"eliminated index must be an integer, got {eliminated!r}")
    return IONode(sequent, str(_field(obj, "rule")), children, eliminated)


def _native(obj: Any) -> NativeNode:
    side = _lk(obj["side"]) if isinstance(obj, dict) and obj.get("side") is not None else None
    children = tuple(_native(c) for c in _field(obj, "children"))
    return NativeNode(_pair(_field(obj, "pair")), str(_field(obj, "rule")), children, side)


def _valuation(obj: Any) -> Valuation:
    if not isinstance(obj, dict) or not all(isinstance(v, bool) for v in obj.values()):
        raise CertificateFormatError(f"a world must map atoms to booleans, got {obj!r:.80}")
    return Valuation(obj)


def _logic(code: Any) -> LogicId:
    try:
        return parse_logic(str(code))
    except UnknownLogicError as e:
        raise CertificateFormatError(str(e)) from None


def read_certificate(path: str) -> Certificate:
    try:
        text = read_utf8(path)
    except UnicodeDecodeError as e:
        raise CertificateFormatError(f"line {decode_error_line(e)}: invalid UTF-8 at byte {e.start}") from None
    return load_certificate(text)


def load_certificate(text: str) -> Certificate:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise CertificateFormatError(f"invalid JSON at line {e.lineno}: {e.msg}") from None
    kind = _field(obj, "kind")
    logic = _logic(_field(obj, "logic"))
    query_id = str(_field(obj, "query_id"))
    if kind == SEQUENT_KIND:
        calculus = _logic(obj.get("calculus", logic.code))
        root = _io_node(_field(obj, "root"), calculus)
        payload: Payload = root
        if obj.get("witness") is not None:
            payload = OriginalProof(root, _leaf(obj["witness"]))
    elif kind == NATIVE_KIND:
        payload = _native(_field(obj, "root"))
    elif kind == MODEL_KIND:
        inputs = frozenset(_valuation(w) for w in _field(obj, "inputs"))
        output = _valuation(_field(obj, "output"))
        try:
            payload = IOModel(inputs, output, frozenset(output))
        except KeyError as e:
            raise CertificateFormatError(f"worlds disagree on the atom universe: {e}") from None
    else:
        raise CertificateFormatError(f"unknown certificate kind {kind!r}")
    return Certificate(kind, logic, query_id, payload)


# ----------------------------
# Checking
# ----------------------------
def check_certificate(cert: Certificate, s: IOSequent, settings: Settings | None = None) -> CheckResult:
    """Re-verify a loaded certificate against the query it claims to answer."""
    if cert.query_id != s.query_id() or cert.logic != s.logic:
        return failed((), "query", "certificate was issued for a different query")
    payload = cert.payload
    if isinstance(payload, OriginalProof):
        return check_original_proof(payload, s, settings)
    if isinstance(payload, IONode):
        return check_sequent(payload, s, settings)
    if isinstance(payload, NativeNode):
        return check_native(payload, s, settings)
    if not check_countermodel(payload, s):
        return failed((), "model", "model does not refute the query within its frame")
    return CheckResult(True)


# ----------------------------
# Pretty printing
# ----------------------------
def _sequent_text(s: IOSequent) -> str:
    pairs = ", ".join(str(p) for p in s.premises)
    return f"{pairs} |- {s.goal}".strip()


def render_tree(d: IONode | OriginalProof | NativeNode) -> str:
    """One sequent (or pair) per line, children indented by two spaces."""
    lines: list[str] = []

    def visit(node: Any, depth: int) -> None:
        pad = "  " * depth
        if isinstance(node, ClassicalLeaf):
            lines.append(f"{pad}LK: {node.sequent}  [sat: {'valid' if node.verdict else 'invalid'}]")
            return
        if isinstance(node, IONode):
            extra = f" #{node.eliminated}" if node.eliminated is not None else ""
            lines.append(f"{pad}{node.rule}{extra}: {_sequent_text(node.sequent)}")
        else:
            lines.append(f"{pad}{node.rule}: {node.pair}")
        for child in node.children:
            visit(child, depth + 1)

    if isinstance(d, OriginalProof):
        visit(d.derivation, 0)
        visit(d.witness, 0)
    else:
        visit(d, 0)
    return "\n".join(lines) + "\n"
