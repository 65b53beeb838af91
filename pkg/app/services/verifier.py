"""
Service de vérification des présentations de Z_0 et Z_c.
Relations, troncature des produits a_i a_j, décomposition Π + a²Φ, tables de Poisson et famille Ψ.
"""

import logging
import math
import random
import time
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any

from app.config import settings
from app.core.cherednik import CherednikAlgebra, HElement, get_algebra
from app.core.dihedral import elements
from app.core.polyring import CommPoly, InvariantName, Var, invariant_generator, poisson_vv
from app.core.psi import (
    T,
    T1,
    T2,
    PsiPoly,
    basis_coordinates,
    basis_family,
    bracket_with_Q,
    express_in_invariants,
    psi,
    psi_coefficients,
    reconstruct,
    substitute_invariants,
    substitution_injective,
    verify_basis,
    verify_bracket_with_Q,
    verify_psi_closed_form,
    verify_psi_derivatives,
)
from app.core.scalar import Scalar
from app.core.session import Session, get_session

logger = logging.getLogger(__name__)


class CheckStatus(str, Enum):
    """Issue d'une vérification."""

    PASS = "pass"
    FAIL = "fail"


def render_value(value: Any, max_terms: int | None = None) -> str | None:
    """Rendu texte tronqué d'une valeur de témoin."""
    if value is None:
        return None
    if isinstance(value, Scalar):
        return value.render()
    if hasattr(value, "render"):
        return str(value.render(max_terms))
    return str(value)


def _is_zero(value: Any) -> bool:
    checker = getattr(value, "is_zero", None)
    return bool(checker()) if checker is not None else value == 0


@dataclass
class Witness:
    """Témoin d'échec : relation, membres et différence."""

    relation: str
    lhs: Any = None
    rhs: Any = None
    difference: Any = None
    detail: str = ""

    def to_dict(self, max_terms: int | None = None) -> dict:
        """Convertit en dictionnaire."""
        limit = max_terms or settings.WITNESS_MAX_TERMS
        return {
            "relation": self.relation,
            "lhs": render_value(self.lhs, limit),
            "rhs": render_value(self.rhs, limit),
            "difference": render_value(self.difference, limit),
            "detail": self.detail or None,
        }


@dataclass
class CheckReport:
    """Résultat d'une vérification ; pass ssi toutes les différences sont nulles."""

    name: str
    d: int
    status: CheckStatus = CheckStatus.PASS
    checked: int = 0
    witnesses: list[Witness] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    elapsed_ms: float | None = None
    _started: float = field(default_factory=time.perf_counter, repr=False)

    @property
    def passed(self) -> bool:
        return self.status is CheckStatus.PASS

    def compare(self, relation: str, lhs: Any, rhs: Any) -> bool:
        """Enregistre lhs = rhs ; un témoin est conservé en cas d'écart."""
        self.checked += 1
        difference = lhs - rhs
        if _is_zero(difference):
            return True
        logger.debug(f"{self.name}: relation {relation} fails (d={self.d})")
        self.witnesses.append(Witness(relation, lhs, rhs, difference))
        self.status = CheckStatus.FAIL
        return False

    def expect(self, relation: str, condition: bool, detail: str = "") -> bool:
        """Enregistre une condition booléenne."""
        self.checked += 1
        if condition:
            return True
        logger.debug(f"{self.name}: condition {relation} fails (d={self.d})")
        self.witnesses.append(Witness(relation, detail=detail))
        self.status = CheckStatus.FAIL
        return False

    def note(self, message: str) -> None:
        self.notes.append(message)

    def finish(self) -> "CheckReport":
        self.elapsed_ms = round((time.perf_counter() - self._started) * 1000, 3)
        return self

    def to_dict(self, max_terms: int | None = None, include_timings: bool = False) -> dict:
        """Convertit en dictionnaire (sans horodatage par défaut)."""
        return {
            "id": self.name,
            "d": self.d,
            "status": self.status.value,
            "checked": self.checked,
            "witnesses": [w.to_dict(max_terms) for w in self.witnesses],
            "notes": list(self.notes),
            "elapsed_ms": self.elapsed_ms if include_timings else None,
        }


@dataclass
class PhiDecomposition:
    """{a_i, a_j} = Π_{i,j}(eu, q, Q) + a² Φ_{i,j}(eu, q, Q)."""

    i: int
    j: int
    pi: PsiPoly
    phi: PsiPoly
    report: CheckReport

    def to_dict(self, max_terms: int | None = None) -> dict:
        """Convertit en dictionnaire."""
        return {
            "i": self.i,
            "j": self.j,
            "pi": self.pi.render(),
            "phi": self.phi.render(),
            "report": self.report.to_dict(max_terms),
        }


def require_d(d: int, minimum: int) -> None:
    """Refuse les valeurs de d hors du domaine d'une opération."""
    if d < minimum:
        raise ValueError(f"this operation needs d >= {minimum}, got d={d}")
    if d > settings.MAX_D:
        raise ValueError(f"d={d} exceeds the configured ceiling MAX_D={settings.MAX_D}")


# ═══════════════════════════════════════════════════════════════════════════════
# Service
# ═══════════════════════════════════════════════════════════════════════════════


class PresentationVerifier:
    """Vérifie les présentations, les crochets et les identités de la famille Ψ."""

    @staticmethod
    def _invariants(session: Session) -> tuple[CommPoly, CommPoly, CommPoly, list[CommPoly]]:
        q = invariant_generator(InvariantName.Q_LOWER, session)
        Q = invariant_generator(InvariantName.Q_UPPER, session)  # noqa: N806
        eu0 = invariant_generator(InvariantName.EU0, session)
        a0 = [invariant_generator(InvariantName.A0, session, i) for i in range(session.d + 1)]
        return q, Q, eu0, a0

    # ─────────────────────────────────────────────────────────────────────────
    # Présentation de Z_0
    # ─────────────────────────────────────────────────────────────────────────

    def verify_z0_presentation(self, d: int, mutate: bool = False) -> CheckReport:
        """Relations (Z⁰_i) et (Z⁰_{i,j}) dans C[V × V*] ; mutate remplace 4 par 3."""
        require_d(d, 2)
        session = get_session(d, 1)
        report = CheckReport("z0_presentation", d)
        q, Q, eu0, a0 = self._invariants(session)  # noqa: N806
        four = 3 if mutate else 4
        for i in range(1, d):
            report.compare(f"Z0_{i}", eu0 * a0[i], q * a0[i + 1] + Q * a0[i - 1])
        discriminant = eu0 * eu0 - q * Q * four
        for i in range(1, d):
            for j in range(i, d):
                lhs = a0[i - 1] * a0[j + 1] - a0[i] * a0[j]
                rhs = discriminant * q ** (d - j - 1) * Q ** (i - 1) * substitute_invariants(psi(j - i), session)
                report.compare(f"Z0_{i},{j}", lhs, rhs)
        return report.finish()

    def verify_poisson_z0(self, d: int, mutate: bool = False) -> CheckReport:
        """Les sept crochets entre générateurs de C[V × V*]^W ; mutate décale (2i - d)."""
        require_d(d, 2)
        session = get_session(d, 1)
        report = CheckReport("poisson_z0", d)
        q, Q, eu0, a0 = self._invariants(session)  # noqa: N806
        zero = CommPoly.zero(session)

        def a(k: int) -> CommPoly:
            return a0[k] if 0 <= k <= d else zero

        def eu_round(k: int) -> CommPoly:
            return invariant_generator(InvariantName.EU0_ROUND, session, k)

        shift = 1 if mutate else 0
        report.compare("{q,Q}", poisson_vv(q, Q), eu0)
        report.compare("{eu0,q}", poisson_vv(eu0, q), q * -2)
        report.compare("{eu0,Q}", poisson_vv(eu0, Q), Q * 2)
        for i in range(d + 1):
            report.compare(f"{{eu0,a{i}}}", poisson_vv(eu0, a0[i]), a0[i] * (2 * i - d + shift))
            report.compare(f"{{q,a{i}}}", poisson_vv(q, a0[i]), a(i - 1) * i)
            report.compare(f"{{Q,a{i}}}", poisson_vv(Q, a0[i]), a(i + 1) * (i - d))
        for i in range(d + 1):
            for j in range(i + 1, d + 1):
                expected = q ** (d - j) * Q**i * eu_round(j - i - 1) * (j * (d - i))
                # coefficient i(d - j) nul pour i = 0 ou j = d
                if i and j < d:
                    expected = expected - q ** (d - j - 1) * Q ** (i - 1) * eu_round(j - i + 1) * (i * (d - j))
                report.compare(f"{{a{i},a{j}}}", poisson_vv(a0[i], a0[j]), expected)
        discriminant = eu0 * eu0 - q * Q * 4
        for name, generator in (("q", q), ("Q", Q), ("eu0", eu0)):
            report.compare(f"{{{name},eu0^2-4qQ}}", poisson_vv(generator, discriminant), zero)
        return report.finish()

    # ─────────────────────────────────────────────────────────────────────────
    # Éléments centraux et présentation de Z_c
    # ─────────────────────────────────────────────────────────────────────────

    def verify_central_elements(self, d: int) -> CheckReport:
        """Centralité de eu et des a_j, troncatures et écritures alternatives."""
        require_d(d, 2)
        algebra = get_algebra(d, 1)
        session = algebra.session
        report = CheckReport("central_elements", d)
        q, Q, eu0, a0 = self._invariants(session)  # noqa: N806
        eu = algebra.euler()
        report.expect("eu central", algebra.is_central(eu))
        report.compare("Trunc(eu)", algebra.trunc(eu), eu0)
        square = (
            CommPoly.monomial(session, (2, 0, 2, 0))
            + CommPoly.monomial(session, (0, 2, 0, 2))
            + q * Q * 2
            + CommPoly.constant(session, Scalar.a(session) ** 2 * d)
        )
        report.compare("Trunc(eu^2)", algebra.trunc(algebra.multiply(eu, eu)), square)
        for j in range(d + 1):
            element = algebra.central_a(j)
            report.expect(f"a{j} central", algebra.is_central(element))
            report.compare(f"Trunc(a{j})", algebra.trunc(element), a0[j])
            report.compare(f"a{j} orderings", element, algebra.central_a_alternative(j))
        report.expect("x not central", not algebra.is_central(algebra.x), "x commutes with every generator")
        return report.finish()

    def verify_zc_relations(self, d: int, mutate: bool = False) -> CheckReport:
        """(Z_i) et (Z_{i,j}) dans H_c avec a formel ; mutate remplace d² par d² + 1."""
        require_d(d, 2)
        algebra = get_algebra(d, 1)
        session = algebra.session
        report = CheckReport("zc_presentation", d)
        eu, q, Q = algebra.euler(), algebra.q(), algebra.Q()  # noqa: N806
        a = [algebra.central_a(j) for j in range(d + 1)]
        for i in range(1, d):
            report.compare(f"Z_{i}", eu * a[i], q * a[i + 1] + Q * a[i - 1])
        square = d * d + (1 if mutate else 0)
        a_square = Scalar.a(session) ** 2 * square
        discriminant = PsiPoly.var(T) ** 2 - PsiPoly.var(T1) * PsiPoly.var(T2) * 4
        for i in range(1, d):
            for j in range(i, d):
                factor = PsiPoly.monomial(0, d - j - 1, i - 1) * psi(j - i)
                rhs = algebra.evaluate_invariant(discriminant * factor) - algebra.evaluate_invariant(
                    factor
                ).scale(a_square)
                report.compare(f"Z_{i},{j}", a[i - 1] * a[j + 1] - a[i] * a[j], rhs)
                logger.debug(f"checked Z_{i},{j} (d={d})")
        return report.finish()

    def horreur_display(self, d: int, i: int, j: int, mutate: bool = False) -> CommPoly:
        """Forme close de Trunc(a_{i-1} a_{j+1} - a_i a_j)."""
        session = get_session(d, 1)
        q, Q, _, _ = self._invariants(session)  # noqa: N806
        k = j - i

        def diagonal(n: int) -> CommPoly:
            return CommPoly.monomial(session, (n, 0, n, 0)) + CommPoly.monomial(session, (0, n, 0, n))

        result = q ** (d - j - 1) * Q ** (i - 1) * diagonal(k + 2) - q ** (d - j) * Q**i * diagonal(k)
        coefficient = d * (1 + j - i - d) + (1 if mutate else 0)
        a_part = Scalar.a(session) ** 2 * coefficient
        for big_m in range(i - 1, j):
            exps = (big_m + d - i - j, d - 2 - big_m, big_m, i + j - 2 - big_m)
            result = result + CommPoly.monomial(session, exps, a_part)
        return result

    def verify_horreur(self, d: int, i: int, j: int, mutate: bool = False) -> CheckReport:
        """Compare la troncature du produit à sa forme close ; mutate décale d(1+j-i-d)."""
        require_d(d, 2)
        if not 1 <= i <= j <= d - 1:
            raise ValueError(f"need 1 <= i <= j <= d-1, got i={i}, j={j}, d={d}")
        algebra = get_algebra(d, 1)
        report = CheckReport(f"horreur_{i}_{j}", d)
        product = algebra.central_a(i - 1) * algebra.central_a(j + 1) - algebra.central_a(i) * algebra.central_a(j)
        report.compare(f"Trunc_{i},{j}", algebra.trunc(product), self.horreur_display(d, i, j, mutate))
        return report.finish()

    def verify_horreur_all(self, d: int) -> list[CheckReport]:
        require_d(d, 2)
        return [self.verify_horreur(d, i, j) for i in range(1, d) for j in range(i, d)]

    # ─────────────────────────────────────────────────────────────────────────
    # Crochets de Z_c
    # ─────────────────────────────────────────────────────────────────────────

    def verify_poisson_zc(self, d: int, mutate: bool = False) -> CheckReport:
        """Table des crochets de Z_c par déformation ; mutate décale (2j - d)."""
        require_d(d, 2)
        algebra = get_algebra(d, 1)
        session = algebra.session
        report = CheckReport("poisson_zc", d)
        eu, q, Q = algebra.euler(), algebra.q(), algebra.Q()  # noqa: N806
        a = [algebra.central_a(j) for j in range(d + 1)]
        zero = HElement.zero(session)

        def a_at(k: int) -> HElement:
            return a[k] if 0 <= k <= d else zero

        shift = 1 if mutate else 0
        report.compare("{q,Q}", algebra.poisson(q, Q), eu)
        report.compare("{eu,q}", algebra.poisson(eu, q), q * -2)
        report.compare("{eu,Q}", algebra.poisson(eu, Q), Q * 2)
        for j in range(d + 1):
            report.compare(f"{{q,a{j}}}", algebra.poisson(q, a[j]), a_at(j - 1) * j)
            report.compare(f"{{eu,a{j}}}", algebra.poisson(eu, a[j]), a[j] * (2 * j - d + shift))
            report.compare(f"{{Q,a{j}}}", algebra.poisson(Q, a[j]), a_at(j + 1) * (j - d))
        report.compare(
            "{a0,a1}",
            algebra.poisson(a[0], a[1]),
            algebra.evaluate_invariant(PsiPoly.monomial(0, d - 1, 0, 2 * d)),
        )
        report.compare(
            "{a0,a2}",
            algebra.poisson(a[0], a[2]),
            algebra.evaluate_invariant(PsiPoly.monomial(1, d - 2, 0, 2 * d)),
        )
        discriminant = algebra.evaluate_invariant(PsiPoly.var(T) ** 2 - PsiPoly.var(T1) * PsiPoly.var(T2) * 4)
        for name, generator in (("q", q), ("Q", Q), ("eu", eu)):
            report.compare(f"{{{name},eu^2-4qQ}}", algebra.poisson(generator, discriminant), zero)

        report.compare("antisymmetry {q,a0}", algebra.poisson(q, a[0]), -algebra.poisson(a[0], q))
        jacobi = (
            algebra.poisson(q, algebra.poisson(Q, a[0]))
            + algebra.poisson(Q, algebra.poisson(a[0], q))
            + algebra.poisson(a[0], algebra.poisson(q, Q))
        )
        report.compare("Jacobi (q,Q,a0)", jacobi, zero)
        for name, element in (("eu", eu), ("a0", a[0]), ("a1", a[1])):
            for var in (Var.x, Var.y):
                report.compare(
                    f"{{{var.name},{name}}}",
                    algebra.variable_bracket(var, element),
                    algebra.variable_bracket_formula(var, element),
                )
        return report.finish()

    def phi_decomposition(self, d: int, i: int, j: int, mutate: bool = False) -> PhiDecomposition:
        """
        Décompose {a_i, a_j} en Π_{i,j}(eu, q, Q) + a² Φ_{i,j}(eu, q, Q).

        Π est lu sur la spécialisation a = 0 de la troncature, Φ sur le coefficient de a²
        de la troncature du reste ; mutate perturbe Π avant le contrôle du résidu.
        """
        require_d(d, 3)
        if not 0 <= i < j <= d:
            raise ValueError(f"need 0 <= i < j <= d, got i={i}, j={j}, d={d}")
        algebra = get_algebra(d, 1)
        session = algebra.session
        report = CheckReport(f"phi_{i}_{j}", d)
        bracket = algebra.poisson(algebra.central_a(i), algebra.central_a(j))

        pi = express_in_invariants(algebra.trunc(bracket).specialize_a(0), d - 1)
        if pi is None:
            report.expect("Pi exists", False, f"a=0 part of {{a{i},a{j}}} is not a degree-{d - 1} invariant")
            return PhiDecomposition(i, j, PsiPoly(), PsiPoly(), report.finish())
        if mutate:
            pi = pi + PsiPoly.monomial(0, d - 1, 0)
        remainder = bracket - algebra.evaluate_invariant(pi)
        phi = express_in_invariants(algebra.trunc(remainder).a_coefficient(2), d - 3)
        if phi is None:
            report.expect("Phi exists", False, f"a^2 part of the remainder is not a degree-{d - 3} invariant")
            return PhiDecomposition(i, j, pi, PsiPoly(), report.finish())

        a_square = Scalar.a(session) ** 2
        report.compare("residual", remainder, algebra.evaluate_invariant(phi).scale(a_square))
        report.expect("Pi homogeneous", pi.is_homogeneous(d - 1), pi.render())
        report.expect("Phi homogeneous", phi.is_homogeneous(d - 3), phi.render())
        if i == 0:
            report.expect("q^(d-j) | Pi", pi.is_zero() or pi.monomial_gcd()[T1] >= d - j, pi.render())
            report.expect("q^(d-j) | Phi", phi.is_zero() or phi.monomial_gcd()[T1] >= d - j, phi.render())

        _, _, _, a0 = self._invariants(session)
        table = poisson_vv(a0[i], a0[j])
        report.compare("Pi vs Z0 table", substitute_invariants(pi, session), table)
        return PhiDecomposition(i, j, pi, phi, report.finish())

    def verify_phi(self, d: int) -> list[CheckReport]:
        require_d(d, 3)
        return [
            self.phi_decomposition(d, i, j).report for i in range(d + 1) for j in range(i + 1, d + 1)
        ]

    # ─────────────────────────────────────────────────────────────────────────
    # Famille Ψ
    # ─────────────────────────────────────────────────────────────────────────

    def verify_psi_suite(self, d: int, max_index: int = 8, shift: int = 0) -> list[CheckReport]:
        """Identités de Ψ ; shift perturbe les identités différentielles."""
        session = get_session(d, 1)
        closed = CheckReport("psi_closed_form", d)
        for i in range(max_index + 1):
            closed.expect(f"Psi_{i}", verify_psi_closed_form(i, session))
        q, Q, eu0, _ = self._invariants(session)  # noqa: N806
        for i in range(2, max_index + 1):
            closed.compare(
                f"eu0^({i})",
                invariant_generator(InvariantName.EU0_ROUND, session, i),
                eu0 * invariant_generator(InvariantName.EU0_ROUND, session, i - 1)
                - q * Q * invariant_generator(InvariantName.EU0_ROUND, session, i - 2),
            )

        derivatives = CheckReport("psi_derivatives", d)
        for i in range(1, max_index + 1):
            derivatives.expect(f"Psi_{i}'", verify_psi_derivatives(i, shift))

        restriction = CheckReport("psi_restriction", d)
        for k in range(11):
            restriction.compare(f"Psi_{k}(T,0,0)", psi(k).substitute({T1: 0, T2: 0}), PsiPoly.var(T) ** k)

        coefficients = CheckReport("psi_coefficients", d)
        for i in range(max_index + 1):
            expected = {
                j: Fraction((-1) ** j * math.comb(i - j, j)) for j in range(i // 2 + 1) if math.comb(i - j, j)
            }
            coefficients.expect(f"m_{i}", psi_coefficients(i) == expected, str(psi_coefficients(i)))
            coefficients.expect(f"m_{i},0", psi_coefficients(i).get(0) == 1)

        basis = CheckReport("psi_basis", d)
        for k in range(max_index + 1):
            basis.expect(f"rank_{k}", verify_basis(k))
            sample = psi(k) + PsiPoly.monomial(0, k, 0) * 3 - PsiPoly.monomial(0, 0, k)
            basis.compare(f"coordinates_{k}", reconstruct(basis_coordinates(sample), k), sample)
            basis.expect(f"size_{k}", len(basis_family(k)) == (k + 1) * (k + 2) // 2)
        for k in range(d + 1):
            basis.expect(f"injective_{k}", substitution_injective(k, session))

        bracket = CheckReport("psi_bracket_with_Q", d)
        for i in range(max_index + 1):
            bracket.expect(f"{{Q,Psi_{i}}}", verify_bracket_with_Q(i, session), bracket_with_Q(psi(i)).render())
        return [r.finish() for r in (closed, derivatives, restriction, coefficients, basis, bracket)]

    # ─────────────────────────────────────────────────────────────────────────
    # Cohérence du moteur
    # ─────────────────────────────────────────────────────────────────────────

    @staticmethod
    def random_element(algebra: CherednikAlgebra, rng: random.Random, max_degree: int = 2) -> HElement:
        """Élément aléatoire de bas degré, coefficients entiers en a."""
        session = algebra.session
        group = elements(algebra.d)
        terms = {}
        for _ in range(rng.randint(1, 3)):
            exps = [0, 0, 0, 0]
            for _ in range(rng.randint(0, max_degree)):
                exps[rng.randrange(4)] += 1
            coeff = Scalar.from_rational(session, rng.randint(-3, 3)) + Scalar.a(session) * rng.randint(0, 2)
            terms[(rng.choice(group), (exps[0], exps[1], exps[2], exps[3]))] = coeff
        return HElement(session, terms)

    @staticmethod
    def smash_product(h1: HElement, h2: HElement) -> HElement:
        """Produit de C[V × V*] ⋊ W : f1 w1(f2) · w1w2 · w2^{-1}(F1) F2."""
        session = h1.session
        acc = HElement.zero(session)
        for (w1, e1), c1 in h1.terms.items():
            left1 = CommPoly.monomial(session, (e1[0], e1[1], 0, 0), c1)
            right1 = CommPoly.monomial(session, (0, 0, e1[2], e1[3]))
            for (w2, e2), c2 in h2.terms.items():
                left2 = CommPoly.monomial(session, (e2[0], e2[1], 0, 0), c2)
                right2 = CommPoly.monomial(session, (0, 0, e2[2], e2[3]))
                left = left1 * left2.act(w1)
                right = right1.act(w2.inverse()) * right2
                acc = acc + HElement.from_parts(left, w1 * w2, right)
        return acc

    def verify_engine(self, d: int, samples: int = 6, t_order: int = 1) -> CheckReport:
        """Associativité sur des triplets aléatoires et filtration PBW (a = t = 0)."""
        require_d(d, 2)
        algebra = get_algebra(d, t_order)
        base = get_session(d, 1)
        rng = random.Random(settings.RANDOM_SEED + d)
        report = CheckReport("engine_consistency", d)
        for k in range(samples):
            u, v, w = (self.random_element(algebra, rng) for _ in range(3))
            report.compare(f"associativity_{k}", (u * v) * w, u * (v * w))
            u0, v0 = (h.specialize_a(0).t_coefficient(0, base) for h in (u, v))
            product = (u * v).specialize_a(0).t_coefficient(0, base)
            report.compare(f"smash_{k}", product, self.smash_product(u0, v0))
        return report.finish()


# Instance singleton
verifier = PresentationVerifier()
