"""CLI and env setup: parse argv, write flag values to ENV, answer one query per invocation."""

from __future__ import annotations

import argparse
import logging
import os
import sys
from typing import Any

from dotenv import load_dotenv

from certificates import (
    check_certificate,
    dump_certificate,
    model_certificate,
    native_certificate,
    read_certificate,
    render_tree,
    sequent_certificate,
)
from config import LOGIC_CODES, Settings, reload_settings
from dimacs import export_dimacs
from errors import CapExceededError, IologError
from io_semantics import IOModel, check_countermodel
from io_theory import IOSequent, parse_logic
from modal_bridge import embed, embed_classic, render_exchange, render_qmltp
from partition_oracle import countermodel, decide
from sat_reduction import decide_sat, encode_query
from sequent_calculus import decide_original_via_proof, prove, to_native
from selfcheck import run_selfcheck
from theory_files import Theory, load_theory, parse_pair
from utils import stable_json_text

logger = logging.getLogger(__name__)

EXIT_DERIVABLE, EXIT_NOT_DERIVABLE, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3

MODES = ("sat", "oracle", "proof")
EMITS = ("verdict", "proof-json", "model-json", "dimacs", "modal")


# ----------------------------
# Argument parsing
# ----------------------------
def _add_query_args(p: argparse.ArgumentParser, emit_default: str = "verdict") -> None:
    p.add_argument("theory", help="theory file: 'A => X' lines, or JSON")
    p.add_argument("--logic", choices=LOGIC_CODES, help="logic code (default: from the theory file)")
    p.add_argument("--goal", help="goal pair 'B => Y' (default: from the theory file)")
    p.add_argument("--mode", choices=MODES, default="sat")
    p.add_argument("--emit", choices=EMITS, default=emit_default)
    p.add_argument("--check", metavar="CERT", help="re-verify a certificate JSON file against the query")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="random seed (IOLOG_SEED)")
    common.add_argument("--external-solver", metavar="PATH", help="DIMACS solver executable (IOLOG_EXTERNAL_SOLVER)")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")

    parser = argparse.ArgumentParser(prog="iolog", description="Entailment in input/output logics")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, emit in (("decide", "verdict"), ("prove", "proof-json"), ("countermodel", "model-json")):
        _add_query_args(sub.add_parser(name, parents=[common]), emit)
    encode = sub.add_parser("encode", parents=[common])
    _add_query_args(encode, "dimacs")
    emb = sub.add_parser("embed", parents=[common])
    _add_query_args(emb, "modal")
    emb.add_argument("--format", choices=("exchange", "qmltp"), default="exchange")
    emb.add_argument("--classic", action="store_true", help="use the A -> box(X) translation")
    check = sub.add_parser("check", parents=[common])
    _add_query_args(check)
    tree = sub.add_parser("tree", parents=[common], help="pretty-print a certificate")
    tree.add_argument("certificate")
    sc = sub.add_parser("selfcheck", parents=[common])
    sc.add_argument("--random", type=int, help="random instances per logic (IOLOG_SELFCHECK_RANDOM)")
    sc.add_argument("--workers", type=int, help="worker threads (IOLOG_SELFCHECK_WORKERS)")
    return parser


def setup_cli_env(args: argparse.Namespace) -> Settings:
    """Load dotenv, write flag values to ENV, return fresh Settings."""
    load_dotenv()
    if args.seed is not None:
        os.environ["IOLOG_SEED"] = str(args.seed)
    if args.external_solver:
        os.environ["IOLOG_EXTERNAL_SOLVER"] = args.external_solver
    if getattr(args, "random", None) is not None:
        os.environ["IOLOG_SELFCHECK_RANDOM"] = str(args.random)
    if getattr(args, "workers", None) is not None:
        os.environ["IOLOG_SELFCHECK_WORKERS"] = str(args.workers)
    if args.verbose:
        os.environ["IOLOG_LOG_LEVEL"] = "DEBUG"
    settings = reload_settings()
    logging.basicConfig(
        level=settings.log_level.upper(), stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s", force=True
    )
    return settings


def _emit(obj: Any) -> None:
    print(stable_json_text(obj) if not isinstance(obj, str) else obj.rstrip("\n"))


def _query(args: argparse.Namespace) -> IOSequent:
    theory: Theory = load_theory(args.theory)
    goal = parse_pair(args.goal) if args.goal else None
    logic = parse_logic(args.logic) if args.logic else None
    return theory.sequent(goal, logic)


# ----------------------------
# Commands
# ----------------------------
def _decide(s: IOSequent, mode: str, settings: Settings) -> tuple[bool, IOModel | None, Any]:
    """Verdict, countermodel (false verdicts) and proof (mode=proof, true verdicts)."""
    if mode == "oracle":
        verdict = decide(s, settings)
        return verdict.derivable, countermodel(s, verdict, settings), None
    if mode == "proof":
        proof = prove(s, settings) if s.logic.causal else decide_original_via_proof(s, settings)
        if proof is not None:
            return True, None, proof
        _, model = decide_sat(s, settings)
        return False, model, None
    derivable, model = decide_sat(s, settings)
    return derivable, model, None


def _proof_certificates(s: IOSequent, proof: Any) -> list[dict]:
    if s.logic.causal:
        native = to_native(proof)
    else:
        native = to_native(proof.derivation, bot_free=True)
    return [sequent_certificate(proof, s), native_certificate(native, s)]


def cmd_query(args: argparse.Namespace, settings: Settings) -> int:
    s = _query(args)
    if args.check:
        return _check(s, args.check, settings)
    if args.emit == "dimacs":
        _emit(export_dimacs(encode_query(s)))
        return EXIT_DERIVABLE
    if args.emit == "modal":
        e = embed_classic(s) if getattr(args, "classic", False) else embed(s)
        _emit(render_qmltp(e) if getattr(args, "format", "exchange") == "qmltp" else render_exchange(e))
        return EXIT_DERIVABLE

    mode = "proof" if args.command == "prove" else args.mode
    derivable, model, proof = _decide(s, mode, settings)
    if derivable and proof is None and args.emit == "proof-json":
        # proof search may hit its cap; nothing has been printed yet
        proof = prove(s, settings) if s.logic.causal else decide_original_via_proof(s, settings)
    verdict = {"derivable": derivable, "logic": s.logic.code, "mode": mode, "query_id": s.query_id()}
    _emit(verdict)
    if derivable:
        if proof is not None and (mode == "proof" or args.emit == "proof-json"):
            for cert in _proof_certificates(s, proof):
                _emit(cert)
        print(f"✅ {s.logic.name}: derivable", file=sys.stderr)
        return EXIT_DERIVABLE
    if model is not None and args.emit in ("verdict", "model-json"):
        if not check_countermodel(model, s):
            raise AssertionError("countermodel failed its own certification")
        _emit(model_certificate(model, s))
    print(f"⚠️ {s.logic.name}: not derivable", file=sys.stderr)
    return EXIT_NOT_DERIVABLE


def _check(s: IOSequent, path: str, settings: Settings) -> int:
    cert = read_certificate(path)
    result = check_certificate(cert, s, settings)
    _emit({"certificate": cert.kind, "ok": result.ok, "reason": "" if result.ok else str(result)})
    return EXIT_DERIVABLE if result.ok else EXIT_NOT_DERIVABLE


def cmd_check(args: argparse.Namespace, settings: Settings) -> int:
    if not args.check:
        raise IologError("check needs --check <certificate.json>")
    return _check(_query(args), args.check, settings)


def cmd_tree(args: argparse.Namespace, settings: Settings) -> int:
    cert = read_certificate(args.certificate)
    if isinstance(cert.payload, IOModel):
        _emit(dump_certificate(cert.payload.to_json(), pretty=True))
    else:
        _emit(render_tree(cert.payload))
    return EXIT_DERIVABLE


def cmd_selfcheck(args: argparse.Namespace, settings: Settings) -> int:
    report = run_selfcheck(settings)
    summary: dict[str, Any] = {"instances": report.total, "failures": len(report.failures), "ok": report.ok}
    if not report.ok:
        worst = report.minimal_failure
        summary["minimal_failure"] = {"sequent": str(worst.sequent), "problems": worst.problems}
        print(f"✗ selfcheck: {len(report.failures)} of {report.total} instances failed", file=sys.stderr)
    else:
        print(f"✅ selfcheck: {report.total} instances agree", file=sys.stderr)
    _emit(summary)
    return EXIT_DERIVABLE if report.ok else EXIT_NOT_DERIVABLE


COMMANDS = {
    "decide": cmd_query,
    "prove": cmd_query,
    "countermodel": cmd_query,
    "encode": cmd_query,
    "embed": cmd_query,
    "check": cmd_check,
    "tree": cmd_tree,
    "selfcheck": cmd_selfcheck,
}


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_DERIVABLE
    settings = setup_cli_env(args)
    try:
        return COMMANDS[args.command](args, settings)
    except CapExceededError as e:
        print(f"✗ {e}", file=sys.stderr)
        return EXIT_CAP
    except (IologError, OSError) as e:
        print(f"✗ {e}", file=sys.stderr)
        return EXIT_USAGE
