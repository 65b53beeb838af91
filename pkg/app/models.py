"""
Schémas pydantic du rapport JSON et de la configuration d'exécution.
"""

import json
import re
from fractions import Fraction
from typing import Any

from pydantic import BaseModel, Field, field_validator

from app.config import settings

SUITE_NAMES = ("z0", "zc", "horreur", "poisson", "phi", "lie", "sl2", "tau", "psi")
SYMBOLIC = "symbolic"
_RATIONAL = re.compile(r"^-?\d+(/\d+)?$")


class UsageError(ValueError):
    """Paramètres incompatibles avec l'opération demandée (code de sortie 2)."""


def parse_rational(text: str) -> Fraction:
    """
    Lit un rationnel exact "p" ou "p/q".

    Raises:
        ValueError: pour tout autre format (en particulier les flottants).
    """
    value = text.strip()
    if not _RATIONAL.match(value):
        raise ValueError(f"expected an integer or p/q, got {text!r}")
    numerator, _, denominator = value.partition("/")
    if denominator and int(denominator) == 0:
        raise ValueError("zero denominator")
    return Fraction(int(numerator), int(denominator or 1))


# ═══════════════════════════════════════════════════════════════════════════════
# Configuration d'exécution
# ═══════════════════════════════════════════════════════════════════════════════


class RunConfig(BaseModel):
    """Paramètres d'une exécution du banc."""

    d: int = Field(ge=2)
    a: str = settings.DEFAULT_A_VALUE
    t_order: int = Field(default=settings.DEFAULT_T_ORDER, ge=1)
    suite: str = "all"
    out: str | None = None
    jobs: int = Field(default=settings.DEFAULT_JOBS, ge=1)
    max_terms: int = Field(default=settings.WITNESS_MAX_TERMS, ge=1)
    timings: bool = settings.REPORT_INCLUDE_TIMINGS

    @field_validator("d")
    @classmethod
    def check_ceiling(cls, v: int) -> int:
        if v > settings.MAX_D:
            raise ValueError(f"d={v} exceeds MAX_D={settings.MAX_D}")
        return v

    @field_validator("a")
    @classmethod
    def check_a(cls, v: str) -> str:
        if v == SYMBOLIC:
            return v
        parse_rational(v)
        return v

    @field_validator("suite")
    @classmethod
    def check_suite(cls, v: str) -> str:
        if v != "all" and v not in SUITE_NAMES:
            raise ValueError(f"unknown suite {v!r}")
        return v

    @property
    def a_value(self) -> Fraction | None:
        """Valeur rationnelle de a, None si a reste formel."""
        return None if self.a == SYMBOLIC else parse_rational(self.a)

    @property
    def selected_suites(self) -> list[str]:
        return list(SUITE_NAMES) if self.suite == "all" else [self.suite]


# ═══════════════════════════════════════════════════════════════════════════════
# Rapport
# ═══════════════════════════════════════════════════════════════════════════════


class WitnessOut(BaseModel):
    """Témoin d'échec."""

    relation: str
    lhs: str | None = None
    rhs: str | None = None
    difference: str | None = None
    detail: str | None = None


class CheckOut(BaseModel):
    """Une vérification."""

    id: str
    d: int
    status: str
    checked: int
    witnesses: list[WitnessOut] = []
    notes: list[str] = []
    elapsed_ms: float | None = None


class SuiteOut(BaseModel):
    """Une suite et ses vérifications, dans l'ordre canonique."""

    name: str
    status: str
    skipped: str | None = None
    checks: list[CheckOut] = []
    elapsed_ms: float | None = None


class RunReport(BaseModel):
    """Rapport complet, schéma versionné."""

    version: str = settings.REPORT_SCHEMA
    tool: str = f"{settings.APP_NAME} {settings.APP_VERSION}"
    d: int
    a: str
    t_order: int
    status: str
    suites: list[SuiteOut] = []

    @property
    def passed(self) -> bool:
        return self.status == "pass"


class LieTableOut(BaseModel):
    """Table de Lie_0(Z_c) et type identifié."""

    d: int
    a: str
    dim: int
    labels: list[str]
    constants: list[list[str]]
    classification: str
    description: str
    killing_rank: int


def canonical_json(model: BaseModel | dict[str, Any]) -> str:
    """JSON déterministe : clés triées, indentation fixe."""
    data = model.model_dump(mode="json") if isinstance(model, BaseModel) else model
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
