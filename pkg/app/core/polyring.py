"""
Anneau commutatif C[V × V*] = polynômes en x, y, X, Y sur les scalaires de session.
Crochet de Poisson canonique, division exacte et invariants nommés de Z_0.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from enum import Enum, IntEnum
from fractions import Fraction

from app.core import linalg
from app.core.dihedral import GroupElement, MonomialMap, apply_monomial_map
from app.core.errors import NonExactDivisionError
from app.core.scalar import Rational, Scalar
from app.core.session import Session

Monomial = tuple[int, int, int, int]


class Var(IntEnum):
    """Indices des variables (x, y) de V* et (X, Y) de V."""

    x = 0
    y = 1
    X = 2
    Y = 3


VARIABLE_NAMES = ("x", "y", "X", "Y")


def _shift(exps: Monomial, var: int, amount: int) -> Monomial:
    out = list(exps)
    out[var] += amount
    return (out[0], out[1], out[2], out[3])


class CommPoly:
    """Polynôme creux en x, y, X, Y à coefficients Scalar."""

    __slots__ = ("session", "terms")

    session: Session
    terms: dict[Monomial, Scalar]

    def __init__(self, session: Session, terms: Mapping[Monomial, Scalar] | None = None):
        self.session = session
        self.terms = {}
        for exps, coeff in (terms or {}).items():
            session.check(coeff.session)
            if min(exps) < 0:
                raise ValueError(f"negative exponent {exps}")
            if not coeff.is_zero():
                self.terms[tuple(exps)] = coeff  # type: ignore[index]

    @classmethod
    def _make(cls, session: Session, terms: dict[Monomial, Scalar]) -> CommPoly:
        obj = object.__new__(cls)
        obj.session = session
        obj.terms = terms
        return obj

    # ─────────────────────────────────────────────────────────────────────────
    # Constructeurs
    # ─────────────────────────────────────────────────────────────────────────

    @classmethod
    def zero(cls, session: Session) -> CommPoly:
        return cls._make(session, {})

    @classmethod
    def constant(cls, session: Session, value: Rational | Scalar) -> CommPoly:
        coeff = value if isinstance(value, Scalar) else Scalar.from_rational(session, value)
        return cls(session, {(0, 0, 0, 0): coeff})

    @classmethod
    def one(cls, session: Session) -> CommPoly:
        return cls.constant(session, 1)

    @classmethod
    def variable(cls, session: Session, var: Var | int) -> CommPoly:
        return cls.monomial(session, _shift((0, 0, 0, 0), int(var), 1))

    @classmethod
    def monomial(cls, session: Session, exps: Sequence[int], coeff: Scalar | Rational = 1) -> CommPoly:
        value = coeff if isinstance(coeff, Scalar) else Scalar.from_rational(session, coeff)
        return cls(session, {tuple(exps): value})  # type: ignore[dict-item]

    # ─────────────────────────────────────────────────────────────────────────
    # Arithmétique
    # ─────────────────────────────────────────────────────────────────────────

    def _coerce(self, other: object) -> CommPoly | None:
        if isinstance(other, CommPoly):
            self.session.check(other.session)
            return other
        if isinstance(other, (int, Fraction, Scalar)):
            return CommPoly.constant(self.session, other)
        return None

    def __add__(self, other: object) -> CommPoly:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        out = dict(self.terms)
        for exps, coeff in rhs.terms.items():
            prev = out.get(exps)
            if prev is None:
                out[exps] = coeff
            else:
                total = prev + coeff
                if total.is_zero():
                    del out[exps]
                else:
                    out[exps] = total
        return CommPoly._make(self.session, out)

    __radd__ = __add__

    def __neg__(self) -> CommPoly:
        return CommPoly._make(self.session, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: object) -> CommPoly:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other: object) -> CommPoly:
        return (-self) + other

    def __mul__(self, other: object) -> CommPoly:
        if isinstance(other, (int, Fraction, Scalar)):
            factor = other
            out = {e: c * factor for e, c in self.terms.items()}
            return CommPoly._make(self.session, {e: c for e, c in out.items() if not c.is_zero()})
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        acc: dict[Monomial, Scalar] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in rhs.terms.items():
                key = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3])
                prod = c1 * c2
                prev = acc.get(key)
                acc[key] = prod if prev is None else prev + prod
        return CommPoly._make(self.session, {e: c for e, c in acc.items() if not c.is_zero()})

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> CommPoly:
        if exponent < 0:
            raise ValueError("negative power of a polynomial")
        result = CommPoly.one(self.session)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = CommPoly.constant(self.session, other)
        if not isinstance(other, CommPoly):
            return NotImplemented
        return self.session == other.session and self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    # ─────────────────────────────────────────────────────────────────────────
    # Structure
    # ─────────────────────────────────────────────────────────────────────────

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, exps: Monomial) -> Scalar:
        return self.terms.get(exps, Scalar.zero(self.session))

    def bidegrees(self) -> set[tuple[int, int]]:
        """Bidegrés ((x,y)-degré, (X,Y)-degré) des termes."""
        return {(e[0] + e[1], e[2] + e[3]) for e in self.terms}

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_left_only(self) -> bool:
        """Vrai si le polynôme ne dépend que de x, y."""
        return all(e[2] == 0 and e[3] == 0 for e in self.terms)

    def is_right_only(self) -> bool:
        """Vrai si le polynôme ne dépend que de X, Y."""
        return all(e[0] == 0 and e[1] == 0 for e in self.terms)

    def derivative(self, var: Var | int) -> CommPoly:
        index = int(var)
        out: dict[Monomial, Scalar] = {}
        for exps, coeff in self.terms.items():
            if exps[index]:
                out[_shift(exps, index, -1)] = coeff * exps[index]
        return CommPoly._make(self.session, out)

    def substitute_monomials(self, mapping: MonomialMap) -> CommPoly:
        """Substitution monomiale v ↦ z^k·v' (action de W ou de τ)."""
        acc: dict[Monomial, Scalar] = {}
        for exps, coeff in self.terms.items():
            key, shift = apply_monomial_map(mapping, exps)
            value = coeff.times_root(shift)
            prev = acc.get(key)
            acc[key] = value if prev is None else prev + value
        return CommPoly._make(self.session, {e: c for e, c in acc.items() if not c.is_zero()})

    def act(self, g: GroupElement) -> CommPoly:
        """Action de g ∈ W."""
        if g.d != self.session.d:
            raise ValueError(f"group element of {g.d} acting on a session with d={self.session.d}")
        return self.substitute_monomials(g.monomial_map())

    def specialize_a(self, value: Rational) -> CommPoly:
        out = {e: c.specialize_a(value) for e, c in self.terms.items()}
        return CommPoly._make(self.session, {e: c for e, c in out.items() if not c.is_zero()})

    def a_coefficient(self, k: int) -> CommPoly:
        """Coefficient de a^k (polynôme sans a)."""
        out = {e: c.a_coefficient(k) for e, c in self.terms.items()}
        return CommPoly._make(self.session, {e: c for e, c in out.items() if not c.is_zero()})

    def a_degrees(self) -> set[int]:
        return {k for c in self.terms.values() for k in c.a_degrees()}

    def t_coefficient(self, k: int, session: Session | None = None) -> CommPoly:
        target = session or self.session
        out = {e: c.t_coefficient(k, target) for e, c in self.terms.items()}
        return CommPoly._make(target, {e: c for e, c in out.items() if not c.is_zero()})

    def with_session(self, session: Session) -> CommPoly:
        out = {e: c.with_session(session) for e, c in self.terms.items()}
        return CommPoly._make(session, {e: c for e, c in out.items() if not c.is_zero()})

    # ─────────────────────────────────────────────────────────────────────────
    # Division exacte
    # ─────────────────────────────────────────────────────────────────────────

    def divide_exact(self, divisor: CommPoly) -> CommPoly:
        """
        Division longue multivariée, ordre lexicographique sur (α, β, γ, δ).

        Raises:
            ZeroDivisionError: si le diviseur est nul.
            NonExactDivisionError: si la division n'est pas exacte.
        """
        self.session.check(divisor.session)
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        lead_exps = max(divisor.terms)
        lead_inverse = divisor.terms[lead_exps].inverse()
        remainder = dict(self.terms)
        quotient: dict[Monomial, Scalar] = {}
        while remainder:
            top = max(remainder)
            shift = (
                top[0] - lead_exps[0],
                top[1] - lead_exps[1],
                top[2] - lead_exps[2],
                top[3] - lead_exps[3],
            )
            if min(shift) < 0:
                raise NonExactDivisionError(
                    f"{self.render(8)} is not divisible by {divisor.render(8)}"
                )
            factor = remainder[top] * lead_inverse
            quotient[shift] = factor
            for exps, coeff in divisor.terms.items():
                key = (
                    exps[0] + shift[0],
                    exps[1] + shift[1],
                    exps[2] + shift[2],
                    exps[3] + shift[3],
                )
                prev = remainder.get(key)
                value = -(factor * coeff) if prev is None else prev - factor * coeff
                if value.is_zero():
                    remainder.pop(key, None)
                else:
                    remainder[key] = value
        return CommPoly._make(self.session, quotient)

    # ─────────────────────────────────────────────────────────────────────────
    # Rendu
    # ─────────────────────────────────────────────────────────────────────────

    def sorted_terms(self) -> list[tuple[Monomial, Scalar]]:
        return sorted(self.terms.items(), key=lambda item: item[0], reverse=True)

    def render(self, max_terms: int | None = None) -> str:
        """Rendu "coeff*x^a y^b X^c Y^d", ordre lexicographique décroissant."""
        if not self.terms:
            return "0"
        ordered = self.sorted_terms()
        pieces = []
        for exps, coeff in ordered[: max_terms or len(ordered)]:
            pieces.append(_render_term(render_monomial(exps), coeff))
        if max_terms and len(ordered) > max_terms:
            pieces.append(f"... ({len(ordered) - max_terms} more terms)")
        return " + ".join(pieces)

    def __repr__(self) -> str:
        return f"CommPoly({self.render(12)})"


def render_monomial(exps: Sequence[int]) -> str:
    parts = [
        name if e == 1 else f"{name}^{e}"
        for name, e in zip(VARIABLE_NAMES, exps)
        if e
    ]
    return " ".join(parts)


def _render_term(monomial: str, coeff: Scalar) -> str:
    if not monomial:
        return coeff.render()
    if coeff == 1:
        return monomial
    return f"({coeff.render()})*{monomial}"


# ═══════════════════════════════════════════════════════════════════════════════
# Crochet de Poisson et invariants
# ═══════════════════════════════════════════════════════════════════════════════


def poisson_vv(f: CommPoly, g: CommPoly) -> CommPoly:
    """{f, g} avec {x, X} = {y, Y} = 1 et les autres crochets de variables nuls."""
    return (
        f.derivative(Var.x) * g.derivative(Var.X)
        - f.derivative(Var.X) * g.derivative(Var.x)
        + f.derivative(Var.y) * g.derivative(Var.Y)
        - f.derivative(Var.Y) * g.derivative(Var.y)
    )


class InvariantName(str, Enum):
    """Invariants nommés de C[V × V*]^W."""

    Q_LOWER = "q"
    Q_UPPER = "Q"
    EU0 = "eu0"
    A0 = "a0"
    EU0_ROUND = "eu0_round"
    EU0_SQUARE = "eu0_square"


def invariant_generator(
    name: InvariantName | str, session: Session, index: int | None = None
) -> CommPoly:
    """
    Invariant nommé : q = xy, Q = XY, eu_0 = xX + yY, a_{i,0} = x^{d-i}Y^i + y^{d-i}X^i,
    eu_0^{(i)} = (xX)^i + (yY)^i et eu_0^{[i]} = ((xX)^{i+1} - (yY)^{i+1}) / (xX - yY).

    Raises:
        ValueError: indice manquant ou hors bornes.
    """
    name = InvariantName(name)
    d = session.d
    if name is InvariantName.Q_LOWER:
        return CommPoly.monomial(session, (1, 1, 0, 0))
    if name is InvariantName.Q_UPPER:
        return CommPoly.monomial(session, (0, 0, 1, 1))
    if name is InvariantName.EU0:
        return CommPoly.monomial(session, (1, 0, 1, 0)) + CommPoly.monomial(session, (0, 1, 0, 1))
    if index is None or index < 0:
        raise ValueError(f"invariant {name.value} needs a nonnegative index, got {index}")
    if name is InvariantName.A0:
        if index > d:
            raise ValueError(f"a0({index}) is out of range for d={d}")
        return CommPoly.monomial(session, (d - index, 0, 0, index)) + CommPoly.monomial(
            session, (0, d - index, index, 0)
        )
    if name is InvariantName.EU0_ROUND:
        return CommPoly.monomial(session, (index, 0, index, 0)) + CommPoly.monomial(
            session, (0, index, 0, index)
        )
    numerator = CommPoly.monomial(session, (index + 1, 0, index + 1, 0)) - CommPoly.monomial(
        session, (0, index + 1, 0, index + 1)
    )
    divisor = CommPoly.monomial(session, (1, 0, 1, 0)) - CommPoly.monomial(session, (0, 1, 0, 1))
    return numerator.divide_exact(divisor)


def is_w_invariant(f: CommPoly) -> bool:
    """Invariance sous s_0 et s_1 (générateurs de W)."""
    d = f.session.d
    return all(f.act(GroupElement.reflection(i, d)) == f for i in (0, 1))


# ═══════════════════════════════════════════════════════════════════════════════
# Coordonnées rationnelles
# ═══════════════════════════════════════════════════════════════════════════════

ComponentKey = tuple[Monomial, tuple[int, int, int]]


def _component_column(poly: CommPoly, rows_index: dict[ComponentKey, int]) -> dict[int, Fraction]:
    """Éclate chaque coefficient Scalar en composantes rationnelles (a, t, puissance de z)."""
    column: dict[int, Fraction] = {}
    for exps, coeff in poly.terms.items():
        for comp, value in coeff.components().items():
            column[rows_index.setdefault((exps, comp), len(rows_index))] = value
    return column


def span_rank(family: Sequence[CommPoly]) -> int:
    """Rang sur Q d'une famille de polynômes."""
    rows_index: dict[ComponentKey, int] = {}
    columns = [_component_column(poly, rows_index) for poly in family]
    if not rows_index:
        return 0
    matrix = [[col.get(r, Fraction(0)) for col in columns] for r in range(len(rows_index))]
    return linalg.rank(matrix)


def solve_in_span(target: CommPoly, family: Sequence[CommPoly]) -> list[Fraction] | None:
    """Coefficients rationnels c_k tels que target = Σ c_k family[k], ou None."""
    rows_index: dict[ComponentKey, int] = {}
    columns = [_component_column(poly, rows_index) for poly in family]
    rhs_map = _component_column(target, rows_index)
    n_rows = len(rows_index)
    if n_rows == 0:
        return [Fraction(0)] * len(family)
    if not family:
        return None
    matrix = [[col.get(r, Fraction(0)) for col in columns] for r in range(n_rows)]
    rhs = [rhs_map.get(r, Fraction(0)) for r in range(n_rows)]
    return linalg.solve(matrix, rhs)
