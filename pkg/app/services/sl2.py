"""
Service sl₂ : action sur les générateurs de Z_c, modèle Sym(E) et évaluations ε_{m,n}.
Correspondance ρ_d, équivariance et application moment.
"""

import logging
import math
from collections.abc import Iterable, Mapping
from enum import Enum
from fractions import Fraction

from app.core import linalg
from app.core.cherednik import HElement, element_sum, get_algebra
from app.core.errors import DegreeError, OutsideKernelError
from app.core.multipoly import MultiPoly, monomials_of_degree
from app.core.psi import psi
from app.core.scalar import Rational, format_rational
from app.services.cuspidal import VarietyPoint, cm_polynomial, evaluate_point, relation_system
from app.services.verifier import CheckReport, require_d

logger = logging.getLogger(__name__)

V2_VARIABLES = ("t", "u")
SHARP_SYMBOLS = ("q", "Q", "eu")

StarMonomial = tuple[str, ...]


class Sl2Generator(str, Enum):
    """Base (e, h, f) de sl₂ : e • φ = {Q, φ}, h • φ = {eu, φ}, f • φ = {-q, φ}."""

    E = "e"
    H = "h"
    F = "f"


def symbol_rank(symbol: str) -> int:
    """Ordre canonique q < Q < eu < a_0 < … < a_d."""
    if symbol in SHARP_SYMBOLS:
        return SHARP_SYMBOLS.index(symbol)
    if symbol.startswith("a") and symbol[1:].isdigit():
        return 3 + int(symbol[1:])
    raise ValueError(f"unknown generator symbol {symbol!r}")


def a_symbol(j: int) -> str:
    return f"a{j}"


# ═══════════════════════════════════════════════════════════════════════════════
# Sym(E)
# ═══════════════════════════════════════════════════════════════════════════════


class SymElement:
    """
    Élément de Sym(E) : combinaison de ⋆-monômes non évalués.

    Un ⋆-monôme est un multiensemble de symboles, stocké trié.
    """

    __slots__ = ("d", "terms")

    def __init__(self, d: int, terms: Mapping[StarMonomial, Rational] | None = None):
        self.d = d
        out: dict[StarMonomial, Fraction] = {}
        for monomial, coeff in (terms or {}).items():
            key = tuple(sorted(monomial, key=symbol_rank))
            value = out.get(key, Fraction(0)) + Fraction(coeff)
            if value:
                out[key] = value
            else:
                out.pop(key, None)
        self.terms = out

    @classmethod
    def symbol(cls, d: int, name: str, coeff: Rational = 1) -> "SymElement":
        symbol_rank(name)
        return cls(d, {(name,): coeff})

    @classmethod
    def one(cls, d: int) -> "SymElement":
        return cls(d, {(): 1})

    # ─────────────────────────────────────────────────────────────────────────
    # Arithmétique
    # ─────────────────────────────────────────────────────────────────────────

    def __add__(self, other: object) -> "SymElement":
        if isinstance(other, (int, Fraction)):
            other = SymElement(self.d, {(): other})
        if not isinstance(other, SymElement):
            return NotImplemented
        merged: dict[StarMonomial, Fraction] = dict(self.terms)
        for monomial, coeff in other.terms.items():
            merged[monomial] = merged.get(monomial, Fraction(0)) + coeff
        return SymElement(self.d, merged)

    def __neg__(self) -> "SymElement":
        return SymElement(self.d, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: object) -> "SymElement":
        if isinstance(other, (int, Fraction)):
            other = SymElement(self.d, {(): other})
        if not isinstance(other, SymElement):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other: object) -> "SymElement":
        """Produit ⋆ (ou multiplication par un rationnel)."""
        if isinstance(other, (int, Fraction)):
            return SymElement(self.d, {m: c * other for m, c in self.terms.items()})
        if not isinstance(other, SymElement):
            return NotImplemented
        out: dict[StarMonomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                key = m1 + m2
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return SymElement(self.d, out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "SymElement":
        result = SymElement.one(self.d)
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return self == SymElement(self.d, {(): other})
        if not isinstance(other, SymElement):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def is_zero(self) -> bool:
        return not self.terms

    def star_degrees(self) -> set[int]:
        return {len(m) for m in self.terms}

    def coefficient(self, monomial: Iterable[str]) -> Fraction:
        return self.terms.get(tuple(sorted(monomial, key=symbol_rank)), Fraction(0))

    # ─────────────────────────────────────────────────────────────────────────
    # Rendu
    # ─────────────────────────────────────────────────────────────────────────

    def sorted_terms(self) -> list[tuple[StarMonomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda item: [symbol_rank(s) for s in item[0]])

    def render(self, max_terms: int | None = None) -> str:
        if not self.terms:
            return "0"
        ordered = self.sorted_terms()
        pieces = []
        for monomial, coeff in ordered[: max_terms or len(ordered)]:
            body = "⋆".join(monomial) or "1"
            pieces.append(f"({format_rational(coeff)}) {body}")
        if max_terms and len(ordered) > max_terms:
            pieces.append(f"... ({len(ordered) - max_terms} more terms)")
        return " + ".join(pieces)

    def to_dict(self) -> dict[str, str]:
        return {"⋆".join(m) or "1": format_rational(c) for m, c in self.sorted_terms()}

    def __repr__(self) -> str:
        return f"SymElement({self.render()})"


def sym(d: int, name: str) -> SymElement:
    return SymElement.symbol(d, name)


# ═══════════════════════════════════════════════════════════════════════════════
# Action de sl₂
# ═══════════════════════════════════════════════════════════════════════════════


def act_on_symbol(xi: Sl2Generator | str, symbol: str, d: int) -> SymElement:
    """Valeurs de e, h, f sur les générateurs (table de Poisson de Z_c)."""
    xi = Sl2Generator(xi)
    if symbol in SHARP_SYMBOLS:
        table: dict[Sl2Generator, dict[str, tuple[Rational, str | None]]] = {
            Sl2Generator.E: {"q": (-1, "eu"), "Q": (0, None), "eu": (-2, "Q")},
            Sl2Generator.H: {"q": (-2, "q"), "Q": (2, "Q"), "eu": (0, None)},
            Sl2Generator.F: {"q": (0, None), "Q": (-1, "eu"), "eu": (-2, "q")},
        }
        coeff, target = table[xi][symbol]
        if target is None or coeff == 0:
            return SymElement(d)
        return SymElement.symbol(d, target, coeff)
    j = symbol_rank(symbol) - 3
    if xi is Sl2Generator.H:
        return SymElement.symbol(d, symbol, 2 * j - d)
    if xi is Sl2Generator.E:
        return SymElement.symbol(d, a_symbol(j + 1), j - d) if j < d else SymElement(d)
    return SymElement.symbol(d, a_symbol(j - 1), -j) if j > 0 else SymElement(d)


def sl2_act(xi: Sl2Generator | str, z: SymElement) -> SymElement:
    """Action de ξ ∈ {e, h, f}, étendue en dérivation du produit ⋆."""
    out: dict[StarMonomial, Fraction] = {}
    for monomial, coeff in z.terms.items():
        for position, symbol in enumerate(monomial):
            rest = monomial[:position] + monomial[position + 1 :]
            for image, c in act_on_symbol(xi, symbol, z.d).terms.items():
                key = tuple(sorted(rest + image, key=symbol_rank))
                out[key] = out.get(key, Fraction(0)) + coeff * c
    return SymElement(z.d, out)


# ═══════════════════════════════════════════════════════════════════════════════
# Évaluations dans Sym(V_2)
# ═══════════════════════════════════════════════════════════════════════════════


def symbol_degree(symbol: str, d: int) -> int:
    return 2 if symbol in SHARP_SYMBOLS else d


def symbol_to_v2(symbol: str, d: int) -> MultiPoly:
    """σ^♯ et σ_d inversés : q ↦ t²/2, eu ↦ tu, Q ↦ u²/2, a_i ↦ t^{d-i}u^i."""
    t = MultiPoly.generator(V2_VARIABLES, 0)
    u = MultiPoly.generator(V2_VARIABLES, 1)
    if symbol == "q":
        return t * t * Fraction(1, 2)
    if symbol == "Q":
        return u * u * Fraction(1, 2)
    if symbol == "eu":
        return t * u
    i = symbol_rank(symbol) - 3
    return t ** (d - i) * u**i


def multiply_out(z: SymElement) -> MultiPoly:
    """Remplace ⋆ par le produit de Sym(V_2)."""
    result = MultiPoly.constant(V2_VARIABLES, 0)
    for monomial, coeff in z.terms.items():
        term = MultiPoly.constant(V2_VARIABLES, coeff)
        for symbol in monomial:
            term = term * symbol_to_v2(symbol, z.d)
        result = result + term
    return result


def epsilon(m: int, n: int, z: SymElement) -> MultiPoly:
    """
    ε_{m,n} : Sym^m(Sym^n V_2) → Sym^{mn}(V_2).

    Raises:
        DegreeError: si un ⋆-monôme n'est pas de ⋆-degré m sur des symboles de degré n.
    """
    for monomial in z.terms:
        if len(monomial) != m or any(symbol_degree(s, z.d) != n for s in monomial):
            raise DegreeError(f"{'⋆'.join(monomial) or '1'} is not in Sym^{m}(Sym^{n} V_2)")
    return multiply_out(z)


def kernel_basis_2d(d: int) -> list[tuple[tuple[int, int], SymElement]]:
    """a_{i-1}⋆a_{j+1} - a_i⋆a_j pour 1 ≤ i ≤ j ≤ d-1."""
    basis = []
    for i in range(1, d):
        for j in range(i, d):
            element = sym(d, a_symbol(i - 1)) * sym(d, a_symbol(j + 1)) - sym(d, a_symbol(i)) * sym(d, a_symbol(j))
            basis.append(((i, j), element))
    return basis


def sym2_monomials(symbols: list[str]) -> list[StarMonomial]:
    return [(symbols[i], symbols[j]) for i in range(len(symbols)) for j in range(i, len(symbols))]


def _coordinates(z: SymElement, monomials: list[StarMonomial]) -> list[Fraction] | None:
    index = {m: k for k, m in enumerate(monomials)}
    vector = [Fraction(0)] * len(monomials)
    for monomial, coeff in z.terms.items():
        if monomial not in index:
            return None
        vector[index[monomial]] = coeff
    return vector


def _rho_image(d: int, i: int, j: int) -> SymElement:
    q, big_q, eu = sym(d, "q"), sym(d, "Q"), sym(d, "eu")
    psi_star = psi(j - i).evaluate([eu, q, big_q], SymElement.one(d))
    return q ** (d - j - 1) * big_q ** (i - 1) * psi_star


def rho(d: int, z: SymElement, images: Mapping[tuple[int, int], SymElement] | None = None) -> SymElement:
    """
    ρ_d : Ker(ε_{2,d}) → Sym^{d-2}(E^♯), prolongée par linéarité depuis la base de kernel_basis_2d.

    Raises:
        OutsideKernelError: si z n'est pas dans l'espace engendré par la base.
    """
    basis = kernel_basis_2d(d)
    monomials = sym2_monomials([a_symbol(k) for k in range(d + 1)])
    rhs = _coordinates(z, monomials)
    if rhs is None:
        raise OutsideKernelError(f"{z.render()} is not a quadratic form in a_0, ..., a_{d}")
    matrix = [[element.coefficient(m) for _, element in basis] for m in monomials]
    solution = linalg.solve(matrix, rhs)
    if solution is None:
        raise OutsideKernelError(f"{z.render()} is outside Ker(epsilon_2,{d})")
    result = SymElement(d)
    for ((i, j), _), coeff in zip(basis, solution):
        if coeff:
            image = images[(i, j)] if images is not None else _rho_image(d, i, j)
            result = result + image * coeff
    return result


def zi_elements(d: int, q_coefficient: Rational = 1) -> list[SymElement]:
    """Q⋆a_{i-1} - eu⋆a_i + q⋆a_{i+1} pour 1 ≤ i ≤ d-1."""
    return [
        sym(d, "Q") * sym(d, a_symbol(i - 1))
        - sym(d, "eu") * sym(d, a_symbol(i))
        + sym(d, "q") * sym(d, a_symbol(i + 1)) * Fraction(q_coefficient)
        for i in range(1, d)
    ]


def derivation_pairing(z: SymElement, index: int) -> MultiPoly:
    """D^{(2)}(φ ⋆ ψ) = D(φ)ψ pour D = ∂/∂t ou ∂/∂u, φ ∈ E^♯ et ψ ∈ E_d."""
    result = MultiPoly.constant(V2_VARIABLES, 0)
    for monomial, coeff in z.terms.items():
        sharp = [s for s in monomial if s in SHARP_SYMBOLS]
        rest = [s for s in monomial if s not in SHARP_SYMBOLS]
        if len(sharp) != 1 or len(rest) != 1:
            raise DegreeError(f"{'⋆'.join(monomial)} is not in E^# ⋆ E_d")
        term = symbol_to_v2(sharp[0], z.d).derivative(index) * symbol_to_v2(rest[0], z.d)
        result = result + term * coeff
    return result


def moment(point: VarietyPoint) -> list[list[Fraction]]:
    """μ(q, Q, e, a) = [[e, Q], [-q, -e]]."""
    q, big_q, e = point.coords[0], point.coords[1], point.coords[2]
    return [[e, big_q], [-q, -e]]


def moment_points(d: int, a_value: Rational = 1) -> list[VarietyPoint]:
    """
    Points de Z_c sur a_i = 0 : (0, 0, ±da), deux points de la quadrique e² - 4qQ = d²a²
    et l'origine, qui n'appartient à Z_c que pour d ≥ 3.
    """
    da = d * Fraction(a_value)
    values = (0, da, -da) if d >= 3 else (da, -da)
    points = [VarietyPoint.on_fixed_plane(d, 0, 0, value, a_value) for value in values]
    for q, e in ((Fraction(1), da + 2), (Fraction(-2), da + 1)):
        points.append(VarietyPoint.on_fixed_plane(d, q, (e * e - da * da) / (4 * q), e, a_value))
    return points


def hermite_dimensions(max_m: int = 6, max_n: int = 6) -> dict[tuple[int, int], int]:
    """dim Sym^m(Sym^n V_2), comptée sur les monômes de degré m en n + 1 variables."""
    return {(m, n): len(monomials_of_degree(n + 1, m)) for m in range(max_m + 1) for n in range(max_n + 1)}


# ═══════════════════════════════════════════════════════════════════════════════
# Vérifications
# ═══════════════════════════════════════════════════════════════════════════════


def _v2_vector(poly: MultiPoly, degree: int) -> list[Fraction]:
    return [poly.coefficient((degree - k, k)) for k in range(degree + 1)]


class Sl2Layer:
    """Vérifications de la couche sl₂ pour un d donné."""

    def generator_symbols(self, d: int) -> list[str]:
        return list(SHARP_SYMBOLS) + [a_symbol(j) for j in range(d + 1)]

    def verify_kernel_basis(self, d: int) -> CheckReport:
        """Chaque élément s'annule par ε_{2,d} ; rang d(d-1)/2 ; dim Ker = d(d-1)/2."""
        require_d(d, 2)
        report = CheckReport("sl2_kernel_basis", d)
        basis = kernel_basis_2d(d)
        for (i, j), element in basis:
            report.compare(f"eps(b[{i},{j}])", epsilon(2, d, element), MultiPoly.constant(V2_VARIABLES, 0))
        monomials = sym2_monomials([a_symbol(k) for k in range(d + 1)])
        matrix = [[element.coefficient(m) for m in monomials] for _, element in basis]
        expected = d * (d - 1) // 2
        report.expect("basis rank", linalg.rank(matrix) == expected, f"expected {expected}")
        images = [
            _v2_vector(epsilon(2, d, SymElement(d, {m: 1})), 2 * d) for m in monomials
        ]
        kernel_dim = len(monomials) - linalg.rank(images)
        report.expect("dim Ker(eps)", kernel_dim == expected, f"got {kernel_dim}")
        return report.finish()

    def verify_rho_equivariance(self, d: int, mutate: bool = False) -> CheckReport:
        """ρ_d(ξ • b) = ξ • ρ_d(b) sur la base du noyau ; ρ_d bijective."""
        require_d(d, 2)
        report = CheckReport("sl2_rho_equivariance", d)
        basis = kernel_basis_2d(d)
        images = {key: _rho_image(d, *key) for key, _ in basis}
        if mutate:
            images[(1, 1)] = images[(1, 1)] * 2
        for (i, j), element in basis:
            for xi in Sl2Generator:
                lhs = rho(d, sl2_act(xi, element), images)
                rhs = sl2_act(xi, images[(i, j)])
                report.compare(f"rho({xi.value}.b[{i},{j}])", lhs, rhs)
        sharp_monomials = sorted(
            {m for image in images.values() for m in image.terms}, key=lambda m: [symbol_rank(s) for s in m]
        )
        matrix = [[image.coefficient(m) for m in sharp_monomials] for image in images.values()]
        expected = d * (d - 1) // 2
        sym_dim = math.comb(d, 2)
        report.expect("rho injective", linalg.rank(matrix) == expected)
        report.expect("dim Sym^(d-2)(E#)", sym_dim == expected, f"got {sym_dim}")
        report.note("relations (Z_i,j) themselves are checked by the zc suite")
        return report.finish()

    def verify_zi_intrinsic(self, d: int, mutate: bool = False) -> CheckReport:
        """Ker(μ_{2,d}) ∩ Ker(D^{(2)}) est engendré par les relations (Z_i)."""
        require_d(d, 2)
        report = CheckReport("sl2_zi_intrinsic", d)
        zero = MultiPoly.constant(V2_VARIABLES, 0)
        elements = zi_elements(d, 2 if mutate else 1)
        for i, element in enumerate(elements, start=1):
            report.compare(f"mu(Z_{i})", multiply_out(element), zero)
            report.compare(f"Dt(Z_{i})", derivation_pairing(element, 0), zero)
            report.compare(f"Du(Z_{i})", derivation_pairing(element, 1), zero)

        columns = [(s, a_symbol(k)) for s in SHARP_SYMBOLS for k in range(d + 1)]
        rows: list[list[Fraction]] = []
        mu_images = [_v2_vector(multiply_out(SymElement(d, {c: 1})), d + 2) for c in columns]
        rows.extend([list(r) for r in zip(*mu_images)])
        for index in (0, 1):
            images = [_v2_vector(derivation_pairing(SymElement(d, {c: 1}), index), d + 1) for c in columns]
            rows.extend([list(r) for r in zip(*images)])
        intersection = len(columns) - linalg.rank(rows)
        report.expect("dim intersection = d-1", intersection == d - 1, f"got {intersection}")
        span = [[element.coefficient(c) for c in columns] for element in elements]
        report.expect("relations independent", linalg.rank(span) == d - 1)

        for element in elements:
            for xi in Sl2Generator:
                image = _coordinates(sl2_act(xi, element), columns)
                stable = image is not None and linalg.rank(span + [image]) == linalg.rank(span)
                report.expect(f"{xi.value}-stable span", stable)
        return report.finish()

    def verify_operator_relations(self, d: int) -> CheckReport:
        """[h,e] = 2e, [h,f] = -2f, [e,f] = h comme opérateurs sur les générateurs."""
        require_d(d, 2)
        report = CheckReport("sl2_operator_relations", d)
        e, h, f = Sl2Generator.E, Sl2Generator.H, Sl2Generator.F
        for symbol in self.generator_symbols(d):
            g = sym(d, symbol)
            report.compare(f"[h,e].{symbol}", sl2_act(h, sl2_act(e, g)) - sl2_act(e, sl2_act(h, g)), sl2_act(e, g) * 2)
            report.compare(f"[h,f].{symbol}", sl2_act(h, sl2_act(f, g)) - sl2_act(f, sl2_act(h, g)), sl2_act(f, g) * -2)
            report.compare(f"[e,f].{symbol}", sl2_act(e, sl2_act(f, g)) - sl2_act(f, sl2_act(e, g)), sl2_act(h, g))
        return report.finish()

    def verify_against_poisson(self, d: int) -> CheckReport:
        """Valeurs de e, h, f comparées aux crochets de Poisson calculés dans H_c."""
        require_d(d, 2)
        report = CheckReport("sl2_poisson_oracle", d)
        algebra = get_algebra(d, 1)
        central = {"q": algebra.q(), "Q": algebra.Q(), "eu": algebra.euler()}
        for j in range(d + 1):
            central[a_symbol(j)] = algebra.central_a(j)
        acting = {
            Sl2Generator.E: central["Q"],
            Sl2Generator.H: central["eu"],
            Sl2Generator.F: central["q"] * -1,
        }

        def lift(z: SymElement) -> HElement:
            return element_sum(
                algebra.session, [central[m[0]] * coeff for m, coeff in z.terms.items()]
            )

        for xi, z in acting.items():
            for symbol in self.generator_symbols(d):
                expected = algebra.poisson(z, central[symbol])
                report.compare(f"{xi.value}.{symbol}", lift(act_on_symbol(xi, symbol, d)), expected)
        return report.finish()

    def verify_moment(self, d: int, points: Iterable[VarietyPoint] = ()) -> CheckReport:
        """Points sur Z_c, trace nulle, det = qQ - e², Casimir e² - 4qQ annulé par sl₂."""
        report = CheckReport("sl2_moment", d)
        for k, point in enumerate(points):
            system = relation_system(d, cm_polynomial(d, point.a_value))
            report.expect(f"point #{k} on Z_c", not any(evaluate_point(point, system)), str(point.to_dict()))
            matrix = moment(point)
            q, big_q, e = point.coords[:3]
            report.expect("trace", matrix[0][0] + matrix[1][1] == 0)
            det = matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]
            report.expect("det", det == q * big_q - e * e, format_rational(det))
        eu, q, big_q = sym(d, "eu"), sym(d, "q"), sym(d, "Q")
        casimir = eu * eu - q * big_q * 4
        for xi in Sl2Generator:
            report.compare(f"{xi.value}.casimir", sl2_act(xi, casimir), SymElement(d))
        return report.finish()

    def verify_hermite(self, max_m: int = 6, max_n: int = 6) -> CheckReport:
        """Réciprocité de Hermite sur les dimensions comptées, et dim = C(m + n, m)."""
        report = CheckReport("sl2_hermite", max(max_m, max_n))
        dims = hermite_dimensions(max_m, max_n)
        for (m, n), dim in dims.items():
            report.expect(f"dim Sym^{m}(Sym^{n}) = C({m + n},{m})", dim == math.comb(m + n, m), str(dim))
            if (n, m) in dims:
                report.expect(f"Sym^{m}(Sym^{n}) ~ Sym^{n}(Sym^{m})", dim == dims[(n, m)])
        return report.finish()

    def verify_sl2_suite(self, d: int, oracle: bool = True) -> list[CheckReport]:
        """Suite complète de la couche sl₂."""
        require_d(d, 2)
        reports = [
            self.verify_kernel_basis(d),
            self.verify_rho_equivariance(d),
            self.verify_zi_intrinsic(d),
            self.verify_operator_relations(d),
            self.verify_moment(d, moment_points(d)),
            self.verify_hermite(),
        ]
        if oracle:
            reports.append(self.verify_against_poisson(d))
        logger.info(f"sl2 suite: {sum(r.passed for r in reports)}/{len(reports)} checks passed (d={d})")
        return reports


# Instance singleton
sl2_layer = Sl2Layer()
