"""
Command-line interface.

    verify <name|all|file.lie>   recompute the checks of catalog entries
    nik <name>                   Nikolayevsky derivation as scale * diag(...)
    series <name>                LCS and UCS dimensions
    free <m> <s>                 free nilpotent n_{m,s}: layers, lambda, niceness
    cotangent <name>             T*g for a catalog entry or n_m,s
    family <k>                   g_k as a document plus its quotient certificate
    replay <script>              replay a proof script
    report                       every acceptance number with PASS/FAIL

Results go to stdout, logs to stderr. Exit codes are listed in ExitCode.
"""

import argparse
import json
import logging
import re
import sys
from enum import IntEnum
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

from src.config import Config
from src.core.derivations import nikolayevsky
from src.core.errors import AlgebraSyntaxError, ScriptStepError, UnknownAlgebraError, WorkbenchError
from src.services import free_nilpotent as fn
from src.services.catalog import CatalogEntry, EntryVerification, get_catalog, load_file, series_dims, verify_entry
from src.services.constructions import cotangent
from src.services.family import family, verify_certificate
from src.services.nice_analysis import graded_irreducibility
from src.services.notation import emit_from_algebra, format_scaled_diagonal, format_vector
from src.services.proof_script import Outcome, replay
from src.services.report import build_report

logger = logging.getLogger(__name__)

FREE_NAME = re.compile(r"^n_\{?(\d+)\}?,\{?(\d+)\}?$")


class ExitCode(IntEnum):
    OK = 0
    FAILED = 1
    USAGE = 2
    UNKNOWN_NAME = 3
    PARSE_ERROR = 4
    STEP_FAILURE = 5
    INCONCLUSIVE = 6
    PRECONDITION = 7


def _emit(args: argparse.Namespace, text: str, payload: object) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, default=str))
    else:
        print(text)


def _resolve(name: str, check_jacobi: bool = True) -> CatalogEntry:
    """A catalog entry by name, or a structure-constant file by path."""
    path = Path(name)
    if path.suffix == ".lie" and path.exists():
        return load_file(path, check_jacobi=check_jacobi)
    return get_catalog().get(name)


# =============================================================================
# COMMANDS
# =============================================================================

def cmd_verify(args: argparse.Namespace) -> ExitCode:
    if args.name == "all":
        results: List[EntryVerification] = get_catalog().verify_all()
    else:
        results = [verify_entry(_resolve(args.name, check_jacobi=not args.no_jacobi))]
    lines = []
    for result in results:
        lines.append(f"{result.name}: {'PASS' if result.passed else 'FAIL'}")
        for key, check in result.checks.items():
            if not check:
                lines.append(f"  {key}: {check.message} {check.witness}")
    _emit(args, "\n".join(lines), [r.to_dict() for r in results])
    return ExitCode.OK if all(r.passed for r in results) else ExitCode.FAILED


def cmd_nik(args: argparse.Namespace) -> ExitCode:
    g = _resolve(args.name).algebra
    result = nikolayevsky(g)
    text = format_scaled_diagonal(result.diagonal)
    _emit(args, text, {
        "name": g.name,
        "nikolayevsky": text,
        "eigenvalues": [{"value": str(v), "multiplicity": m} for v, m in result.eigenvalues],
        "method": result.method,
    })
    return ExitCode.OK


def cmd_series(args: argparse.Namespace) -> ExitCode:
    g = _resolve(args.name).algebra
    lcs_dims, ucs_dims = series_dims(g)
    text = f"LCS {','.join(map(str, lcs_dims))} / UCS {','.join(map(str, ucs_dims))}"
    _emit(args, text, {"name": g.name, "lcs": lcs_dims, "ucs": ucs_dims})
    return ExitCode.OK


def cmd_free(args: argparse.Namespace) -> ExitCode:
    free = fn.build(args.m, args.s)
    verdict = fn.niceness_verdict(args.m, args.s)
    lam = fn.free_lambda(args.m, args.s)
    text = "\n".join([
        f"n_{args.m},{args.s}: dimension {free.dim}",
        f"layers {','.join(map(str, free.layer_dims))}",
        f"nikolayevsky = {lam} * (k on W_k)",
        f"{'nice' if verdict.nice else 'nonnice'} ({verdict.reason}): {verdict.detail}",
    ])
    _emit(args, text, {
        "m": args.m,
        "s": args.s,
        "dim": free.dim,
        "layer_dims": list(free.layer_dims),
        "lambda": str(lam),
        "niceness": verdict.to_dict(),
    })
    return ExitCode.OK


def _free_cotangent(m: int, s: int) -> Tuple[str, Dict[str, object], bool]:
    ct = fn.cotangent_free(m, s)
    checks = {
        "step": fn.cotangent_step_check(m, s),
        "center": fn.cotangent_center_check(m, s),
        "derived": fn.cotangent_derived_check(m, s),
    }
    irreducibility = graded_irreducibility(ct.graded, fn.cotangent_generic_condition(m, s))
    scale = fn.cotangent_nikolayevsky_scale(m, s)
    document = emit_from_algebra(ct.algebra, ct.metric.metric)
    summary = [f"# {key}: {'PASS' if check else 'FAIL'} {check.message}" for key, check in checks.items()]
    summary.append(f"# graded irreducibility: {irreducibility.verdict}")
    summary.append(f"# nikolayevsky = {scale} * (N - N* + 2P)")
    payload = {
        "name": ct.algebra.name,
        "dim": ct.algebra.dim,
        "document": document,
        "checks": {key: check.to_dict() for key, check in checks.items()},
        "irreducibility": irreducibility.to_dict(),
        "scale": str(scale),
    }
    ok = all(checks.values()) and irreducibility.irreducible
    return document + "\n".join(summary), payload, ok


def cmd_cotangent(args: argparse.Namespace) -> ExitCode:
    match = FREE_NAME.match(args.name)
    if match:
        text, payload, ok = _free_cotangent(int(match.group(1)), int(match.group(2)))
        _emit(args, text, payload)
        return ExitCode.OK if ok else ExitCode.FAILED
    entry = _resolve(args.name)
    ct = cotangent(entry.algebra, name=f"T*{entry.name}")
    document = emit_from_algebra(ct.algebra, ct.metric)
    _emit(args, document.rstrip("\n"), {"name": ct.name, "dim": ct.dim, "document": document})
    return ExitCode.OK


def cmd_family(args: argparse.Namespace) -> ExitCode:
    member = family(args.k)
    check = verify_certificate(member)
    document = emit_from_algebra(member.algebra, member.metric.metric)
    cert = member.certificate
    lines = [
        f"# {member.recipe}",
        f"# certificate: g{member.k}/z(g{member.k}) = {cert.target} + R^{cert.abelian_dim}",
    ]
    lines += [f"#   {format_vector(row)}" for row in cert.rows]
    lines.append(f"# {'PASS' if check else 'FAIL'}: {check.message}")
    _emit(args, document + "\n".join(lines), {
        "k": member.k,
        "recipe": member.recipe,
        "document": document,
        "certificate": {
            "target": cert.target,
            "abelian_dim": cert.abelian_dim,
            "rows": [[str(c) for c in row] for row in cert.rows],
            "check": check.to_dict(),
        },
    })
    return ExitCode.OK if check else ExitCode.FAILED


def cmd_replay(args: argparse.Namespace) -> ExitCode:
    transcript = replay(args.script)
    _emit(args, "\n".join(transcript.lines()), transcript.to_dict())
    if transcript.outcome == Outcome.INCONCLUSIVE:
        return ExitCode.INCONCLUSIVE
    return ExitCode.OK


def cmd_report(args: argparse.Namespace) -> ExitCode:
    report = build_report(family_max_k=args.max_k)
    if args.json:
        print(report.model_dump_json(indent=2))
    else:
        print(report.to_text())
    return ExitCode.OK if report.passed else ExitCode.FAILED


# =============================================================================
# ENTRY POINT
# =============================================================================

def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="Machine-readable output")
    common.add_argument("--no-jacobi", action="store_true",
                        help="Build file algebras without the Jacobi check (verify then reports the witness)")

    parser = argparse.ArgumentParser(
        prog="nilmetric",
        description="Exact workbench for nilpotent Lie algebras with ad-invariant metrics",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True)
    commands: Dict[str, Tuple[Callable, str]] = {
        "verify": (cmd_verify, "Verify a catalog entry, all entries, or a .lie file"),
        "nik": (cmd_nik, "Nikolayevsky derivation"),
        "series": (cmd_series, "LCS and UCS dimensions"),
        "free": (cmd_free, "Free nilpotent algebra n_{m,s}"),
        "cotangent": (cmd_cotangent, "Cotangent T*g"),
        "family": (cmd_family, "Member g_k of the nonnice family"),
        "replay": (cmd_replay, "Replay a proof script"),
        "report": (cmd_report, "Acceptance report"),
    }
    parsers = {}
    for name, (handler, help_text) in commands.items():
        p = sub.add_parser(name, help=help_text, parents=[common])
        p.set_defaults(handler=handler)
        parsers[name] = p

    for name in ("verify", "nik", "series", "cotangent"):
        parsers[name].add_argument("name")
    parsers["free"].add_argument("m", type=int)
    parsers["free"].add_argument("s", type=int)
    parsers["family"].add_argument("k", type=int)
    parsers["replay"].add_argument("script", help="Path, or a name under the proof directory")
    parsers["report"].add_argument("--max-k", type=int, default=None, help="Last family member covered")
    return parser


def _parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "free" and (args.m < 2 or args.s < 1):
        parser.error("free needs m >= 2 and s >= 1")
    if args.command == "family" and args.k < Config.FAMILY_MIN_K:
        parser.error(f"family needs k >= {Config.FAMILY_MIN_K}")
    return args


def main(argv: Optional[List[str]] = None) -> int:
    """Run one command and return its exit code."""
    try:
        args = _parse_args(argv)
    except SystemExit as exc:
        # --help exits with 0
        return ExitCode.OK if not exc.code else ExitCode.USAGE

    logging.basicConfig(
        level=Config.log_level(),
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        return int(args.handler(args))
    except UnknownAlgebraError as exc:
        logger.error(f"unknown algebra: {exc}")
        return ExitCode.UNKNOWN_NAME
    except FileNotFoundError as exc:
        logger.error(f"not found: {exc.filename}")
        return ExitCode.UNKNOWN_NAME
    except AlgebraSyntaxError as exc:
        logger.error(f"parse error: {exc}")
        return ExitCode.PARSE_ERROR
    except ScriptStepError as exc:
        logger.error(f"proof step failed: {exc}")
        return ExitCode.STEP_FAILURE
    except WorkbenchError as exc:
        logger.error(f"{type(exc).__name__}: {exc}")
        return ExitCode.PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
