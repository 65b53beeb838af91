"""
Service d'analyse du point cuspidal de la variété Z_c ⊂ C^{d+4}.
Équations, espace tangent à l'origine et algèbre de Lie sur m_0/m_0².
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from app.core import linalg
from app.core.cherednik import HElement, get_algebra
from app.core.errors import LinearizationError
from app.core.multipoly import MultiPoly
from app.core.polyring import InvariantName, invariant_generator, solve_in_span
from app.core.psi import psi
from app.core.scalar import Rational, format_rational
from app.services.verifier import CheckReport, require_d, verifier

logger = logging.getLogger(__name__)


def variety_variables(d: int) -> tuple[str, ...]:
    """Coordonnées (q, Q, e, a_0, …, a_d)."""
    return ("q", "Q", "e", *(f"a{i}" for i in range(d + 1)))


def lie_labels(d: int) -> list[str]:
    return ["dq", "dQ", "de", *(f"da{i}" for i in range(d + 1))]


@dataclass(frozen=True)
class VarietyPoint:
    """Point exact (q, Q, e, a_0, …, a_d) pour une valeur rationnelle de a."""

    coords: tuple[Fraction, ...]
    a_value: Fraction = Fraction(1)

    @property
    def d(self) -> int:
        return len(self.coords) - 4

    @classmethod
    def from_values(cls, values: Sequence[Rational], a_value: Rational = 1) -> "VarietyPoint":
        return cls(tuple(Fraction(v) for v in values), Fraction(a_value))

    @classmethod
    def on_fixed_plane(cls, d: int, q: Rational, Q: Rational, e: Rational, a_value: Rational = 1) -> "VarietyPoint":  # noqa: N803
        """Point de coordonnées a_i nulles."""
        return cls.from_values([q, Q, e] + [0] * (d + 1), a_value)

    def to_dict(self) -> dict:
        """Convertit en dictionnaire."""
        return {
            "coords": [format_rational(c) for c in self.coords],
            "a": format_rational(self.a_value),
        }


@dataclass
class Relation:
    """Équation nommée de la variété."""

    name: str
    poly: MultiPoly

    def to_dict(self) -> dict:
        return {"name": self.name, "poly": self.poly.render()}


def cm_polynomial(d: int, a_value: Rational) -> list[Fraction]:
    """P(T) = T - d²a² (coefficients croissants) : le cas Calogero-Moser."""
    return [-Fraction(d * d) * Fraction(a_value) ** 2, Fraction(1)]


def relation_system(d: int, p_coeffs: Sequence[Rational]) -> list[Relation]:
    """
    Équations e a_i = q a_{i+1} + Q a_{i-1} et
    a_{i-1}a_{j+1} - a_i a_j = P(e² - 4qQ) q^{d-j-1} Q^{i-1} Ψ_{j-i}(e, q, Q).
    """
    require_d(d, 2)
    names = variety_variables(d)
    q, Q, e = (MultiPoly.generator(names, k) for k in range(3))  # noqa: N806
    a = [MultiPoly.generator(names, 3 + k) for k in range(d + 1)]
    discriminant = e * e - q * Q * 4
    p_value = MultiPoly.constant(names, 0)
    for coeff in reversed(list(p_coeffs)):
        p_value = p_value * discriminant + Fraction(coeff)
    relations = [Relation(f"Z_{i}", e * a[i] - q * a[i + 1] - Q * a[i - 1]) for i in range(1, d)]
    for i in range(1, d):
        for j in range(i, d):
            psi_value = psi(j - i).evaluate([e, q, Q], MultiPoly.constant(names, 1))
            rhs = p_value * q ** (d - j - 1) * Q ** (i - 1) * psi_value
            relations.append(Relation(f"Z_{i},{j}", a[i - 1] * a[j + 1] - a[i] * a[j] - rhs))
    return relations


def evaluate_point(point: VarietyPoint, system: Sequence[Relation]) -> list[Fraction]:
    """Résidus exacts ; le point est sur la variété ssi tous sont nuls."""
    return [relation.poly.evaluate_at(point.coords) for relation in system]


def tangent_dim_origin(d: int, a_value: Rational = 1) -> int:
    """d + 4 - rang de la jacobienne des équations en 0."""
    require_d(d, 2)
    system = relation_system(d, cm_polynomial(d, a_value))
    n = d + 4
    rows = []
    for relation in system:
        if relation.poly.coefficient((0,) * n):
            raise ValueError(f"relation {relation.name} does not vanish at the origin")
        linear = relation.poly.homogeneous_component(1)
        rows.append([linear.coefficient(tuple(1 if k == v else 0 for k in range(n))) for v in range(n)])
    return linalg.nullity(rows, n)


# ═══════════════════════════════════════════════════════════════════════════════
# Algèbre de Lie au point cuspidal
# ═══════════════════════════════════════════════════════════════════════════════


@dataclass
class LieTable:
    """Constantes de structure [b_i, b_j] = Σ_k c_{ijk} b_k sur m_0/m_0²."""

    d: int
    a_value: Fraction
    labels: list[str]
    constants: dict[tuple[int, int, int], Fraction] = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return len(self.labels)

    def set_bracket(self, i: int, j: int, vector: Sequence[Fraction]) -> None:
        """Fixe [b_i, b_j] et, par antisymétrie, [b_j, b_i]."""
        for k, value in enumerate(vector):
            if value:
                self.constants[(i, j, k)] = Fraction(value)
                self.constants[(j, i, k)] = -Fraction(value)

    def bracket_basis(self, i: int, j: int) -> list[Fraction]:
        return [self.constants.get((i, j, k), Fraction(0)) for k in range(self.dim)]

    def bracket(self, u: Sequence[Fraction], v: Sequence[Fraction]) -> list[Fraction]:
        result = [Fraction(0)] * self.dim
        for (i, j, k), value in self.constants.items():
            if u[i] and v[j]:
                result[k] += u[i] * v[j] * value
        return result

    def ad(self, i: int) -> list[list[Fraction]]:
        """Matrice de ad(b_i) (colonnes = images des vecteurs de base)."""
        return [[self.constants.get((i, j, k), Fraction(0)) for j in range(self.dim)] for k in range(self.dim)]

    def unit(self, i: int) -> list[Fraction]:
        return [Fraction(1 if k == i else 0) for k in range(self.dim)]

    def is_antisymmetric(self) -> bool:
        return all(
            self.constants.get((j, i, k), Fraction(0)) == -value for (i, j, k), value in self.constants.items()
        ) and all(self.constants.get((i, i, k), 0) == 0 for i in range(self.dim) for k in range(self.dim))

    def satisfies_jacobi(self) -> bool:
        n = self.dim
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    u, v, w = self.unit(i), self.unit(j), self.unit(k)
                    total = [
                        x + y + z
                        for x, y, z in zip(
                            self.bracket(self.bracket(u, v), w),
                            self.bracket(self.bracket(v, w), u),
                            self.bracket(self.bracket(w, u), v),
                        )
                    ]
                    if any(total):
                        return False
        return True

    def killing_form(self) -> list[list[Fraction]]:
        """K_{ij} = tr(ad b_i ∘ ad b_j) = Σ_{k,p} c_{ipk} c_{jkp}."""
        n = self.dim
        ads = [self.ad(i) for i in range(n)]
        return [
            [sum((ads[i][k][p] * ads[j][p][k] for k in range(n) for p in range(n)), Fraction(0)) for j in range(n)]
            for i in range(n)
        ]

    def to_dict(self) -> dict:
        """Convertit en dictionnaire (triplets non nuls, i < j)."""
        return {
            "d": self.d,
            "a": format_rational(self.a_value),
            "dim": self.dim,
            "labels": list(self.labels),
            "constants": [
                [self.labels[i], self.labels[j], self.labels[k], format_rational(value)]
                for (i, j, k), value in sorted(self.constants.items())
                if i < j
            ],
        }


@dataclass
class LieClassification:
    """Type d'isomorphisme identifié et preuves associées."""

    label: str
    description: str
    killing_rank: int
    checks: CheckReport

    def to_dict(self) -> dict:
        return {
            "classification": self.label,
            "description": self.description,
            "killing_rank": self.killing_rank,
            "checks": self.checks.to_dict(),
        }


class CuspidalAnalyzer:
    """Calcule Lie_0(Z_c) et identifie son type."""

    def _linear_class(self, d: int, element: HElement, a_value: Fraction) -> list[Fraction]:
        """Classe dans m_0/m_0² d'un crochet exactement linéaire en les générateurs."""
        algebra = get_algebra(d, 1)
        session = algebra.session
        target = algebra.trunc(element).specialize_a(a_value)
        family = [
            invariant_generator(InvariantName.Q_LOWER, session),
            invariant_generator(InvariantName.Q_UPPER, session),
            invariant_generator(InvariantName.EU0, session),
            *(invariant_generator(InvariantName.A0, session, i) for i in range(d + 1)),
        ]
        solution = solve_in_span(target, family)
        if solution is None:
            raise LinearizationError(f"bracket is not linear in the generators (d={d})")
        return solution

    def _phi_linear_part(self, d: int, i: int, j: int, a_value: Fraction) -> list[Fraction]:
        """Partie de degré 1 de Π_{i,j} + a²Φ_{i,j} : T ↦ ė, T' ↦ q̇, T'' ↦ Q̇."""
        vector = [Fraction(0)] * (d + 4)
        # Π est de degré d - 1 ≥ 3 et Φ de degré d - 3 : seul d = 4 a une partie linéaire
        if d != 4:
            return vector
        decomposition = verifier.phi_decomposition(d, i, j)
        if not decomposition.report.passed:
            raise LinearizationError(f"decomposition of {{a{i},a{j}}} failed (d={d})")
        linear = decomposition.phi.homogeneous_component(1) * (a_value**2)
        vector[2] = linear.coefficient((1, 0, 0))
        vector[0] = linear.coefficient((0, 1, 0))
        vector[1] = linear.coefficient((0, 0, 1))
        return vector

    def lie_algebra_at_origin(self, d: int, a_value: Rational = 1) -> LieTable:
        """
        Constantes de structure de Lie_0(Z_c).

        Raises:
            ValueError: si d < 4 ou a = 0.
        """
        require_d(d, 4)
        a_value = Fraction(a_value)
        if a_value == 0:
            raise ValueError("the cuspidal Lie algebra needs a nonzero parameter")
        algebra = get_algebra(d, 1)
        generators = [algebra.q(), algebra.Q(), algebra.euler()] + [algebra.central_a(j) for j in range(d + 1)]
        table = LieTable(d, a_value, lie_labels(d))
        n = d + 4
        for i in range(3):
            for j in range(i + 1, n):
                bracket = algebra.poisson(generators[i], generators[j])
                table.set_bracket(i, j, self._linear_class(d, bracket, a_value))
        for i in range(3, n):
            for j in range(i + 1, n):
                table.set_bracket(i, j, self._phi_linear_part(d, i - 3, j - 3, a_value))
        logger.info(f"Lie algebra at the origin computed (d={d}, {len(table.constants) // 2} constants)")
        return table

    def classify_lie(self, table: LieTable) -> LieClassification:
        """Identifie sl3 (d = 4) ou sl2 ⊕ S_d avec S_d abélien irréductible (d ≥ 5)."""
        d = table.d
        report = CheckReport("lie_classification", d)
        report.expect("antisymmetry", table.is_antisymmetric())
        report.expect("jacobi", table.satisfies_jacobi())
        killing_rank = linalg.rank(table.killing_form())

        e, h, f = table.unit(1), table.unit(2), [-c for c in table.unit(0)]
        report.compare("[h,e]=2e", _vec(table.bracket(h, e)), _vec([2 * c for c in e]))
        report.compare("[h,f]=-2f", _vec(table.bracket(h, f)), _vec([-2 * c for c in f]))
        report.compare("[e,f]=h", _vec(table.bracket(e, f)), _vec(h))

        if d == 4:
            report.expect("killing nondegenerate", killing_rank == table.dim == 8, f"rank {killing_rank}")
            if report.passed:
                return LieClassification("sl3", "simple, dim 8, Killing rank 8 => sl3", killing_rank, report.finish())
            return LieClassification("unidentified", "d=4 table failed the sl3 criteria", killing_rank, report.finish())

        s_range = range(3, table.dim)
        for i in s_range:
            for j in s_range:
                report.expect(f"[{table.labels[i]},{table.labels[j]}]=0", not any(table.bracket_basis(i, j)))
            for k in range(3):
                image = table.bracket_basis(k, i)
                report.expect(
                    f"[{table.labels[k]},{table.labels[i]}] in S", not any(image[:3]), str(image[:3])
                )
        weights = []
        for i in s_range:
            image = table.bracket(h, table.unit(i))
            weight = image[i]
            report.expect(f"{table.labels[i]} weight vector", image == [weight * c for c in table.unit(i)])
            weights.append(weight)
        report.expect("weights", sorted(weights) == [Fraction(w) for w in range(-d, d + 1, 2)], str(weights))
        for i in s_range:
            if table.labels[i] != f"da{d}":
                report.expect(f"ad(e) injective on {table.labels[i]}", any(table.bracket(e, table.unit(i))))
        if report.passed:
            label = f"sl2 ⊕ irreducible abelian S_{d} (dim {d + 1})"
            return LieClassification(label, label, killing_rank, report.finish())
        return LieClassification("unidentified", "table failed the sl2 ⊕ S_d criteria", killing_rank, report.finish())

    def verify_cuspidal(self, d: int, a_value: Rational = 1) -> list[CheckReport]:
        """Dimension tangente, table de Lie et robustesse au changement d'échelle de a."""
        require_d(d, 4)
        tangent = CheckReport("tangent_dimension", d)
        tangent.expect("dim T_0 Z_c = d+4", tangent_dim_origin(d, a_value) == d + 4)
        zero_dim = tangent_dim_origin(d, 0)
        tangent.note(f"tangent dimension at the origin for a=0: {zero_dim}")
        classification = self.classify_lie(self.lie_algebra_at_origin(d, a_value))
        scaling = CheckReport("lie_scaling", d)
        for factor in (2, 3):
            scaled = self.classify_lie(self.lie_algebra_at_origin(d, Fraction(a_value) * factor))
            scaling.expect(f"a*{factor}", scaled.label == classification.label, scaled.label)
        classification.checks.note(f"classification: {classification.label}")
        return [tangent.finish(), classification.checks, scaling.finish()]


def _vec(values: Sequence[Fraction]) -> MultiPoly:
    """Vecteur vu comme forme linéaire, pour les témoins."""
    names = tuple(f"b{k}" for k in range(len(values)))
    result = MultiPoly.constant(names, 0)
    for k, value in enumerate(values):
        if value:
            result = result + MultiPoly.generator(names, k) * value
    return result


# Instance singleton
cuspidal_analyzer = CuspidalAnalyzer()
