"""
Polynômes creux multivariés à coefficients rationnels exacts.
Socle commun de C[T,T',T''], de Sym(E), de Sym(V_2) et des équations de variétés.
"""

from __future__ import annotations

from collections.abc import Callable, Mapping, Sequence
from fractions import Fraction
from typing import Any, TypeVar

from app.core import linalg
from app.core.errors import SessionMismatchError
from app.core.scalar import format_rational

Exponents = tuple[int, ...]
R = TypeVar("R")
P = TypeVar("P", bound="MultiPoly")


class MultiPoly:
    """Polynôme creux en un jeu nommé de variables commutatives."""

    __slots__ = ("variables", "terms")

    variables: tuple[str, ...]
    terms: dict[Exponents, Fraction]

    def __init__(
        self,
        variables: Sequence[str],
        terms: Mapping[Exponents, int | Fraction] | None = None,
    ):
        self.variables = tuple(variables)
        self.terms = {}
        for exps, coeff in (terms or {}).items():
            if len(exps) != len(self.variables):
                raise ValueError(f"monomial {exps} does not match variables {self.variables}")
            if coeff != 0:
                self.terms[tuple(exps)] = Fraction(coeff)

    @classmethod
    def _build(cls: type[P], variables: tuple[str, ...], terms: dict[Exponents, Fraction]) -> P:
        obj = object.__new__(cls)
        obj.variables = variables
        obj.terms = terms
        return obj

    def _new(self: P, terms: dict[Exponents, Fraction]) -> P:
        return type(self)._build(self.variables, terms)

    # ─────────────────────────────────────────────────────────────────────────
    # Constructeurs
    # ─────────────────────────────────────────────────────────────────────────

    @classmethod
    def constant(cls: type[P], variables: Sequence[str], value: int | Fraction) -> P:
        names = tuple(variables)
        if value == 0:
            return cls._build(names, {})
        return cls._build(names, {(0,) * len(names): Fraction(value)})

    @classmethod
    def generator(cls: type[P], variables: Sequence[str], name: str | int) -> P:
        names = tuple(variables)
        index = name if isinstance(name, int) else names.index(name)
        exps = [0] * len(names)
        exps[index] = 1
        return cls._build(names, {tuple(exps): Fraction(1)})

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def zero(self: P) -> P:
        return self._new({})

    def one(self: P) -> P:
        return self._new({(0,) * self.nvars: Fraction(1)})

    # ─────────────────────────────────────────────────────────────────────────
    # Arithmétique
    # ─────────────────────────────────────────────────────────────────────────

    def _coerce(self: P, other: object) -> P | None:
        if isinstance(other, MultiPoly):
            if other.variables != self.variables:
                raise SessionMismatchError(
                    f"variables differ: {self.variables} vs {other.variables}"
                )
            return other  # type: ignore[return-value]
        if isinstance(other, (int, Fraction)):
            return type(self).constant(self.variables, other)
        return None

    def __add__(self: P, other: object) -> P:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        out = dict(self.terms)
        for exps, coeff in rhs.terms.items():
            total = out.get(exps, 0) + coeff
            if total:
                out[exps] = total
            else:
                out.pop(exps, None)
        return self._new(out)

    __radd__ = __add__

    def __neg__(self: P) -> P:
        return self._new({e: -c for e, c in self.terms.items()})

    def __sub__(self: P, other: object) -> P:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self: P, other: object) -> P:
        return (-self) + other

    def __mul__(self: P, other: object) -> P:
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return self.zero()
            return self._new({e: c * other for e, c in self.terms.items()})
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        out: dict[Exponents, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in rhs.terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                out[key] = out.get(key, 0) + c1 * c2
        return self._new({e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self: P, exponent: int) -> P:
        if exponent < 0:
            raise ValueError("negative power of a polynomial")
        result = self.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = type(self).constant(self.variables, other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.variables, frozenset(self.terms.items())))

    # ─────────────────────────────────────────────────────────────────────────
    # Structure
    # ─────────────────────────────────────────────────────────────────────────

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, exps: Exponents) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def degree(self) -> int:
        """Degré total (-1 pour le polynôme nul)."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, index: int) -> int:
        return max((e[index] for e in self.terms), default=-1)

    def is_homogeneous(self, degree: int | None = None) -> bool:
        degrees = {sum(e) for e in self.terms}
        if not degrees:
            return True
        if degree is None:
            return len(degrees) == 1
        return degrees == {degree}

    def homogeneous_component(self: P, degree: int) -> P:
        return self._new({e: c for e, c in self.terms.items() if sum(e) == degree})

    def derivative(self: P, index: int) -> P:
        out: dict[Exponents, Fraction] = {}
        for exps, coeff in self.terms.items():
            if exps[index]:
                key = exps[:index] + (exps[index] - 1,) + exps[index + 1 :]
                out[key] = coeff * exps[index]
        return self._new(out)

    def monomial_gcd(self) -> Exponents:
        """Plus grand monôme divisant tous les termes."""
        if not self.terms:
            return (0,) * self.nvars
        return tuple(min(e[k] for e in self.terms) for k in range(self.nvars))

    def divide_monomial(self: P, exps: Exponents) -> P:
        out: dict[Exponents, Fraction] = {}
        for e, c in self.terms.items():
            key = tuple(a - b for a, b in zip(e, exps))
            if min(key) < 0:
                raise ValueError(f"monomial {exps} does not divide the polynomial")
            out[key] = c
        return self._new(out)

    def scale_variables(self: P, factors: Sequence[int | Fraction]) -> P:
        """Substitution v_k ↦ factors[k]·v_k."""
        out: dict[Exponents, Fraction] = {}
        for exps, coeff in self.terms.items():
            value = coeff
            for factor, e in zip(factors, exps):
                if e:
                    value *= Fraction(factor) ** e
            if value:
                out[exps] = value
        return self._new(out)

    def substitute(self: P, values: Mapping[int, int | Fraction]) -> P:
        """Évaluation partielle de certaines variables en des rationnels."""
        out: dict[Exponents, Fraction] = {}
        for exps, coeff in self.terms.items():
            value = coeff
            key = list(exps)
            for index, target in values.items():
                if key[index]:
                    value *= Fraction(target) ** key[index]
                    key[index] = 0
            if value:
                k = tuple(key)
                total = out.get(k, 0) + value
                if total:
                    out[k] = total
                else:
                    out.pop(k, None)
        return self._new(out)

    def evaluate_at(self, point: Sequence[int | Fraction]) -> Fraction:
        """Évaluation exacte en un point rationnel."""
        if len(point) != self.nvars:
            raise ValueError(f"expected {self.nvars} coordinates, got {len(point)}")
        total = Fraction(0)
        for exps, coeff in self.terms.items():
            value = coeff
            for coord, e in zip(point, exps):
                if e:
                    value *= Fraction(coord) ** e
            total += value
        return total

    def evaluate(self, values: Sequence[R], one: R) -> R:
        """
        Évaluation dans un anneau quelconque.

        Les éléments de l'anneau doivent supporter +, * entre eux et * par un Fraction.
        """
        if len(values) != self.nvars:
            raise ValueError(f"expected {self.nvars} values, got {len(values)}")
        powers: list[list[R]] = [[one] for _ in values]

        def power(index: int, e: int) -> R:
            table = powers[index]
            while len(table) <= e:
                table.append(table[-1] * values[index])  # type: ignore[operator]
            return table[e]

        result: Any = one * 0  # type: ignore[operator]
        for exps in sorted(self.terms):
            term: Any = one
            for index, e in enumerate(exps):
                if e:
                    term = term * power(index, e)
            result = result + term * self.terms[exps]
        return result  # type: ignore[no-any-return]

    def map_coefficients(self: P, function: Callable[[Fraction], Fraction]) -> P:
        mapped = {e: function(c) for e, c in self.terms.items()}
        return self._new({e: c for e, c in mapped.items() if c})

    # ─────────────────────────────────────────────────────────────────────────
    # Rendu
    # ─────────────────────────────────────────────────────────────────────────

    def render(self, max_terms: int | None = None) -> str:
        """Rendu canonique, ordre lexicographique décroissant sur les exposants."""
        if not self.terms:
            return "0"
        ordered = sorted(self.terms, reverse=True)
        pieces: list[str] = []
        for exps in ordered[: max_terms or len(ordered)]:
            coeff = self.terms[exps]
            monomial = "*".join(
                name if e == 1 else f"{name}^{e}"
                for name, e in zip(self.variables, exps)
                if e
            )
            magnitude = abs(coeff)
            if not monomial:
                body = format_rational(magnitude)
            elif magnitude == 1:
                body = monomial
            else:
                body = f"{format_rational(magnitude)}*{monomial}"
            if not pieces:
                pieces.append(f"-{body}" if coeff < 0 else body)
            else:
                pieces.append(f"- {body}" if coeff < 0 else f"+ {body}")
        if max_terms and len(ordered) > max_terms:
            pieces.append(f"+ ... ({len(ordered) - max_terms} more terms)")
        return " ".join(pieces)

    def to_dict(self) -> dict[str, str]:
        """Convertit en dictionnaire monôme → coefficient."""
        return {
            "*".join(f"{n}^{e}" for n, e in zip(self.variables, exps) if e) or "1": format_rational(c)
            for exps, c in sorted(self.terms.items(), reverse=True)
        }

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.render()})"


# ═══════════════════════════════════════════════════════════════════════════════
# Coordonnées dans une famille
# ═══════════════════════════════════════════════════════════════════════════════


def monomials_of_degree(nvars: int, degree: int) -> list[Exponents]:
    """Monômes de degré donné, ordre lexicographique décroissant."""
    if nvars == 1:
        return [(degree,)]
    out: list[Exponents] = []
    for first in range(degree, -1, -1):
        out.extend((first, *rest) for rest in monomials_of_degree(nvars - 1, degree - first))
    return out


def coordinate_matrix(family: Sequence[MultiPoly]) -> tuple[list[Exponents], list[list[Fraction]]]:
    """Matrice (monômes × éléments) des coefficients d'une famille."""
    support = sorted({e for p in family for e in p.terms})
    rows = [[p.coefficient(e) for p in family] for e in support]
    return support, rows


def family_rank(family: Sequence[MultiPoly]) -> int:
    if not family:
        return 0
    _, rows = coordinate_matrix(family)
    return linalg.rank(rows) if rows else 0


def coordinates(target: MultiPoly, family: Sequence[MultiPoly]) -> list[Fraction] | None:
    """Coordonnées exactes de target dans la famille, ou None hors de son span."""
    if not family:
        return [] if target.is_zero() else None
    support = sorted({e for p in family for e in p.terms} | set(target.terms))
    rows = [[p.coefficient(e) for p in family] for e in support]
    rhs = [target.coefficient(e) for e in support]
    if not rows:
        return [Fraction(0)] * len(family)
    return linalg.solve(rows, rhs)
