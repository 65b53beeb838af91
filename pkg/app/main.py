"""
CM Dihedral - Interface en ligne de commande
Point d'entrée du banc de vérification.
"""

import argparse
import json
import logging
import sys
from pathlib import Path

from pydantic import ValidationError

from app.config import settings
from app.core.cherednik import HElement, get_algebra
from app.core.psi import psi, psi_coefficients
from app.core.scalar import format_rational
from app.core.errors import EngineError
from app.models import (
    SUITE_NAMES,
    SYMBOLIC,
    LieTableOut,
    RunConfig,
    RunReport,
    UsageError,
    canonical_json,
    parse_rational,
)
from app.report import run_report
from app.services import cuspidal_analyzer, sl2_layer, tau_analyzer
from app.services.sl2 import Sl2Generator, act_on_symbol

# ═══════════════════════════════════════════════════════════════════════════════
# Logging
# ═══════════════════════════════════════════════════════════════════════════════

logging.basicConfig(
    level=getattr(logging, settings.LOG_LEVEL),
    format=settings.LOG_FORMAT,
    stream=sys.stderr,
)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


# ═══════════════════════════════════════════════════════════════════════════════
# Parser
# ═══════════════════════════════════════════════════════════════════════════════


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--d", type=int, required=True, help="ordre du groupe diédral : |W| = 2d")
    parser.add_argument("--a", default=settings.DEFAULT_A_VALUE, help=f"paramètre : entier, p/q ou {SYMBOLIC}")
    parser.add_argument("--out", default=None, help="fichier de sortie JSON (stdout sinon)")
    parser.add_argument("--max-terms", type=int, default=settings.WITNESS_MAX_TERMS, help="troncature des témoins")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cm-verify",
        description="Exact verification harness for the rational Cherednik algebra of a dihedral group",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="exécute des suites de vérification")
    _add_common(verify)
    verify.add_argument("--suite", default="all", choices=["all", *SUITE_NAMES])
    verify.add_argument("--t-order", type=int, default=settings.DEFAULT_T_ORDER)
    verify.add_argument("--jobs", type=int, default=settings.DEFAULT_JOBS)
    verify.add_argument("--timings", action="store_true", default=settings.REPORT_INCLUDE_TIMINGS)

    psi_parser = sub.add_parser("psi", help="affiche Ψ_i")
    psi_parser.add_argument("--i", type=int, required=True)

    bracket = sub.add_parser("bracket", help="crochet de Poisson de deux générateurs de Z_c")
    bracket.add_argument("--d", type=int, required=True)
    bracket.add_argument("left", help="q, Q, eu ou a<j>")
    bracket.add_argument("right", help="q, Q, eu ou a<j>")
    bracket.add_argument("--max-terms", type=int, default=settings.WITNESS_MAX_TERMS)

    lie = sub.add_parser("lie", help="algèbre de Lie au point cuspidal")
    _add_common(lie)

    fixed = sub.add_parser("fixed", help="lieu fixe de τ")
    _add_common(fixed)

    sl2 = sub.add_parser("sl2", help="action de sl2 et vérifications associées")
    _add_common(sl2)

    report = sub.add_parser("report", help="résume un rapport JSON existant")
    report.add_argument("path", help="rapport produit par verify --out")
    return parser


# ═══════════════════════════════════════════════════════════════════════════════
# Commandes
# ═══════════════════════════════════════════════════════════════════════════════


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
        logger.info(f"Report written to {out}")
    else:
        sys.stdout.write(text)


def _named_central(d: int, name: str) -> HElement:
    algebra = get_algebra(d, 1)
    if name == "q":
        return algebra.q()
    if name == "Q":
        return algebra.Q()
    if name == "eu":
        return algebra.euler()
    if name.startswith("a") and name[1:].isdigit() and int(name[1:]) <= d:
        return algebra.central_a(int(name[1:]))
    raise UsageError(f"unknown generator {name!r} (expected q, Q, eu or a<j> with j <= {d})")


def _rational_a(text: str) -> str:
    """Paramètre rationnel non nul pour lie et fixed (formel ↦ 1)."""
    try:
        value = parse_rational(settings.DEFAULT_A_VALUE if text == SYMBOLIC else text)
    except ValueError as exc:
        raise UsageError(str(exc))
    if value == 0:
        raise UsageError("this command needs a nonzero parameter a")
    return format_rational(value)


def cmd_verify(args: argparse.Namespace) -> int:
    config = RunConfig(
        d=args.d,
        a=args.a,
        t_order=args.t_order,
        suite=args.suite,
        out=args.out,
        jobs=args.jobs,
        max_terms=args.max_terms,
        timings=args.timings,
    )
    report = run_report(config)
    _emit(canonical_json(report), config.out)
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_psi(args: argparse.Namespace) -> int:
    if args.i < 0:
        raise UsageError("psi index must be nonnegative")
    coefficients = {str(j): format_rational(m) for j, m in psi_coefficients(args.i).items()}
    _emit(canonical_json({"i": args.i, "psi": psi(args.i).render(), "coefficients": coefficients}), None)
    return EXIT_OK


def cmd_bracket(args: argparse.Namespace) -> int:
    RunConfig(d=args.d)
    algebra = get_algebra(args.d, 1)
    value = algebra.poisson(_named_central(args.d, args.left), _named_central(args.d, args.right))
    payload = {"d": args.d, "left": args.left, "right": args.right, "bracket": value.render(args.max_terms)}
    _emit(canonical_json(payload), None)
    return EXIT_OK


def cmd_lie(args: argparse.Namespace) -> int:
    RunConfig(d=args.d, a=args.a)
    if args.d < 4:
        raise UsageError(f"the cuspidal Lie algebra needs d >= 4, got d={args.d}")
    a_text = _rational_a(args.a)
    table = cuspidal_analyzer.lie_algebra_at_origin(args.d, parse_rational(a_text))
    classification = cuspidal_analyzer.classify_lie(table)
    data = table.to_dict()
    out = LieTableOut(
        d=args.d,
        a=a_text,
        dim=data["dim"],
        labels=data["labels"],
        constants=data["constants"],
        classification=classification.label,
        description=classification.description,
        killing_rank=classification.killing_rank,
    )
    _emit(canonical_json(out), args.out)
    return EXIT_OK if classification.checks.passed else EXIT_FAILED


def cmd_fixed(args: argparse.Namespace) -> int:
    RunConfig(d=args.d, a=args.a)
    if args.d < 3:
        raise UsageError(f"the fixed locus analysis needs d >= 3, got d={args.d}")
    result = tau_analyzer.fixed_locus_analysis(args.d, parse_rational(_rational_a(args.a)))
    _emit(canonical_json(result.to_dict(args.max_terms)), args.out)
    return EXIT_OK if result.report.passed else EXIT_FAILED


def cmd_sl2(args: argparse.Namespace) -> int:
    RunConfig(d=args.d, a=args.a)
    d = args.d
    symbols = sl2_layer.generator_symbols(d)
    actions = {
        xi.value: {symbol: act_on_symbol(xi, symbol, d).render() for symbol in symbols} for xi in Sl2Generator
    }
    reports = sl2_layer.verify_sl2_suite(d, oracle=d <= 5)
    payload = {
        "d": d,
        "actions": actions,
        "checks": [r.to_dict(args.max_terms) for r in reports],
    }
    _emit(canonical_json(payload), args.out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED


def cmd_report(args: argparse.Namespace) -> int:
    try:
        report = RunReport.model_validate(json.loads(Path(args.path).read_text(encoding="utf-8")))
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read report {args.path}: {exc}")
    for suite in report.suites:
        failed = [c.id for c in suite.checks if c.status == "fail"]
        detail = suite.skipped or (f"failed: {', '.join(failed)}" if failed else f"{len(suite.checks)} checks")
        sys.stdout.write(f"{suite.name:<8} {suite.status:<7} {detail}\n")
    sys.stdout.write(f"d={report.d} a={report.a} status={report.status}\n")
    return EXIT_OK if report.passed else EXIT_FAILED


COMMANDS = {
    "verify": cmd_verify,
    "psi": cmd_psi,
    "bracket": cmd_bracket,
    "lie": cmd_lie,
    "fixed": cmd_fixed,
    "sl2": cmd_sl2,
    "report": cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    """
    Exécute une commande.

    Returns:
        0 si tout passe, 1 si une vérification échoue ou si le moteur lève une erreur,
        2 pour une erreur d'usage (arguments, configuration, fichiers).
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logger.debug(f"Starting {settings.APP_NAME} v{settings.APP_VERSION} ({args.command}, {settings.ENVIRONMENT})")
    try:
        return COMMANDS[args.command](args)
    except ValidationError as exc:
        sys.stderr.write(f"invalid configuration: {exc}\n")
        return EXIT_USAGE
    except (UsageError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except EngineError as exc:
        logger.error(f"Engine error during {args.command}: {type(exc).__name__}: {exc}")
        return EXIT_FAILED
    except (ArithmeticError, ValueError, RuntimeError) as exc:
        logger.exception(f"Computation failed during {args.command}: {exc}")
        return EXIT_FAILED


def run() -> None:
    """Point d'entrée console."""
    sys.exit(main())


if __name__ == "__main__":
    run()
