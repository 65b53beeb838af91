"""
Registre des suites de vérification et agrégation du rapport.
Les suites indépendantes peuvent tourner dans un pool de processus ; l'ordre du rapport reste canonique.
"""

import logging
import time
from collections.abc import Callable
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from app.config import settings
from app.core.errors import EngineError
from app.models import CheckOut, RunConfig, RunReport, SuiteOut, UsageError, WitnessOut
from app.services import cuspidal_analyzer, sl2_layer, tau_analyzer, verifier
from app.services.verifier import CheckReport

logger = logging.getLogger(__name__)

SuiteRunner = Callable[[int, Fraction, int], list[CheckReport]]


# ═══════════════════════════════════════════════════════════════════════════════
# Suites
# ═══════════════════════════════════════════════════════════════════════════════


def _z0(d: int, a_value: Fraction, t_order: int) -> list[CheckReport]:
    return [verifier.verify_z0_presentation(d), verifier.verify_poisson_z0(d)]


def _zc(d: int, a_value: Fraction, t_order: int) -> list[CheckReport]:
    return [
        verifier.verify_engine(d, t_order=t_order),
        verifier.verify_central_elements(d),
        verifier.verify_zc_relations(d),
    ]


def _horreur(d: int, a_value: Fraction, t_order: int) -> list[CheckReport]:
    return verifier.verify_horreur_all(d)


def _poisson(d: int, a_value: Fraction, t_order: int) -> list[CheckReport]:
    return [verifier.verify_poisson_zc(d)]


def _phi(d: int, a_value: Fraction, t_order: int) -> list[CheckReport]:
    return verifier.verify_phi(d)


def _lie(d: int, a_value: Fraction, t_order: int) -> list[CheckReport]:
    return cuspidal_analyzer.verify_cuspidal(d, a_value)


def _sl2(d: int, a_value: Fraction, t_order: int) -> list[CheckReport]:
    return sl2_layer.verify_sl2_suite(d, oracle=d <= 5)


def _tau(d: int, a_value: Fraction, t_order: int) -> list[CheckReport]:
    return tau_analyzer.verify_tau_suite(d, a_value)


def _psi(d: int, a_value: Fraction, t_order: int) -> list[CheckReport]:
    return verifier.verify_psi_suite(d)


@dataclass(frozen=True)
class SuiteEntry:
    """Suite nommée, d minimal et fonction d'exécution."""

    name: str
    minimum_d: int
    runner: SuiteRunner


SUITES: dict[str, SuiteEntry] = {
    entry.name: entry
    for entry in (
        SuiteEntry("z0", 2, _z0),
        SuiteEntry("zc", 2, _zc),
        SuiteEntry("horreur", 2, _horreur),
        SuiteEntry("poisson", 2, _poisson),
        SuiteEntry("phi", 3, _phi),
        SuiteEntry("lie", 4, _lie),
        SuiteEntry("sl2", 2, _sl2),
        SuiteEntry("tau", 3, _tau),
        SuiteEntry("psi", 2, _psi),
    )
}


# ═══════════════════════════════════════════════════════════════════════════════
# Exécution
# ═══════════════════════════════════════════════════════════════════════════════


@dataclass(frozen=True)
class SuiteTask:
    """Unité de travail transmise aux processus (sérialisable)."""

    name: str
    d: int
    a_value: Fraction
    t_order: int
    max_terms: int
    timings: bool


def _aborted(task: SuiteTask, exc: Exception) -> SuiteOut:
    """Suite interrompue par une erreur du moteur : rapportée comme un échec."""
    witness = WitnessOut(relation="engine", detail=f"{type(exc).__name__}: {exc}")
    check = CheckOut(id=f"{task.name}_aborted", d=task.d, status="fail", checked=0, witnesses=[witness])
    return SuiteOut(name=task.name, status="fail", checks=[check])


def run_suite(task: SuiteTask) -> SuiteOut:
    """Exécute une suite et convertit ses rapports avant de quitter le processus."""
    entry = SUITES[task.name]
    if task.d < entry.minimum_d:
        return SuiteOut(name=task.name, status="skipped", skipped=f"requires d >= {entry.minimum_d}")
    logger.info(f"Suite {task.name} started (d={task.d})")
    started = time.perf_counter()
    try:
        reports = entry.runner(task.d, task.a_value, task.t_order)
    except (EngineError, ArithmeticError, ValueError, RuntimeError) as exc:
        logger.exception(f"Suite {task.name} aborted (d={task.d}): {exc}")
        return _aborted(task, exc)
    elapsed = round((time.perf_counter() - started) * 1000, 3)
    checks = [CheckOut(**r.to_dict(task.max_terms, task.timings)) for r in reports]
    passed = sum(r.passed for r in reports)
    logger.info(f"Suite {task.name} finished: {passed}/{len(reports)} passed (d={task.d})")
    return SuiteOut(
        name=task.name,
        status="pass" if passed == len(reports) else "fail",
        checks=checks,
        elapsed_ms=elapsed if task.timings else None,
    )


def build_tasks(config: RunConfig) -> list[SuiteTask]:
    """
    Tâches dans l'ordre canonique des suites.

    Raises:
        UsageError: si une suite demandée explicitement exige un d plus grand.
    """
    if config.suite != "all":
        entry = SUITES[config.suite]
        if config.d < entry.minimum_d:
            raise UsageError(f"suite {entry.name} requires d >= {entry.minimum_d}, got d={config.d}")
    a_value = config.a_value if config.a_value is not None else Fraction(1)
    return [
        SuiteTask(name, config.d, a_value, config.t_order, config.max_terms, config.timings)
        for name in config.selected_suites
    ]


def run_report(config: RunConfig) -> RunReport:
    """Exécute les suites sélectionnées et agrège le rapport."""
    if config.d > settings.WARN_D:
        logger.warning(f"d={config.d} is above {settings.WARN_D}: expect long computations")
    tasks = build_tasks(config)
    if config.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            suites = list(pool.map(run_suite, tasks))
    else:
        suites = [run_suite(task) for task in tasks]
    failed = [s.name for s in suites if s.status == "fail"]
    if failed:
        logger.warning(f"Failed suites: {', '.join(failed)}")
    return RunReport(
        d=config.d,
        a=config.a,
        t_order=config.t_order,
        status="fail" if failed else "pass",
        suites=suites,
    )
