"""
Arithmétique exacte dans l'anneau des coefficients Q(ζ_m)[a][t]/(t^N).
Les éléments cyclotomiques sont des résidus réduits modulo Φ_m, sous forme canonique.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from sympy import QQ, Poly, Symbol, cyclotomic_poly, totient

from app.core.errors import CyclotomicZeroDivisionError, NonExactDivisionError, SessionMismatchError
from app.core.session import Session

_Z = Symbol("z")

Rational = int | Fraction


# ═══════════════════════════════════════════════════════════════════════════════
# Corps cyclotomique
# ═══════════════════════════════════════════════════════════════════════════════


@dataclass(frozen=True)
class CyclotomicField:
    """Tables de réduction modulo le m-ième polynôme cyclotomique."""

    order: int
    degree: int
    modulus: tuple[int, ...]  # coefficients de Φ_m, degrés croissants
    powers: tuple[tuple[int, ...], ...]  # z^k réduit, pour 0 ≤ k < len(powers)


@lru_cache(maxsize=None)
def cyclotomic_field(m: int) -> CyclotomicField:
    """Construit (une fois par ordre) les tables du corps Q(ζ_m)."""
    if m < 1:
        raise ValueError(f"cyclotomic order must be positive, got {m}")
    phi = Poly(cyclotomic_poly(m, _Z), _Z)
    modulus = tuple(int(c) for c in reversed(phi.all_coeffs()))
    degree = int(totient(m))
    if len(modulus) != degree + 1:
        raise ArithmeticError(f"unexpected degree for cyclotomic polynomial of order {m}")

    powers: list[tuple[int, ...]] = []
    current = [1] + [0] * (degree - 1)
    for _ in range(max(m, 2 * degree - 1)):
        powers.append(tuple(current))
        top = current[-1]
        current = [0, *current[:-1]]
        if top:
            for k in range(degree):
                current[k] -= top * modulus[k]
    return CyclotomicField(order=m, degree=degree, modulus=modulus, powers=tuple(powers))


def _normalize(num: list[int], den: int) -> tuple[tuple[int, ...], int]:
    if den < 0:
        num = [-c for c in num]
        den = -den
    g = den
    for c in num:
        if c:
            g = math.gcd(g, c)
            if g == 1:
                break
    if not any(num):
        return tuple(num), 1
    if g > 1:
        num = [c // g for c in num]
        den //= g
    return tuple(num), den


def format_rational(value: Rational) -> str:
    """Rendu "p/q" d'un rationnel exact."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class Cyclotomic:
    """Élément de Q(ζ_m) : numérateurs entiers sur un dénominateur commun positif."""

    __slots__ = ("order", "num", "den")

    order: int
    num: tuple[int, ...]
    den: int

    def __init__(self, order: int, num: Sequence[int], den: int = 1):
        field = cyclotomic_field(order)
        if len(num) != field.degree:
            raise ValueError(f"expected {field.degree} coefficients, got {len(num)}")
        if den == 0:
            raise CyclotomicZeroDivisionError("zero denominator")
        self.order = order
        self.num, self.den = _normalize(list(num), den)

    @classmethod
    def _make(cls, order: int, num: list[int], den: int) -> Cyclotomic:
        obj = object.__new__(cls)
        obj.order = order
        obj.num, obj.den = _normalize(num, den)
        return obj

    # ─────────────────────────────────────────────────────────────────────────
    # Constructeurs
    # ─────────────────────────────────────────────────────────────────────────

    @classmethod
    def zero(cls, order: int) -> Cyclotomic:
        return cls._make(order, [0] * cyclotomic_field(order).degree, 1)

    @classmethod
    def one(cls, order: int) -> Cyclotomic:
        return cls.from_rational(order, 1)

    @classmethod
    def from_rational(cls, order: int, value: Rational) -> Cyclotomic:
        value = Fraction(value)
        num = [0] * cyclotomic_field(order).degree
        num[0] = value.numerator
        return cls._make(order, num, value.denominator)

    @classmethod
    def from_fractions(cls, order: int, coeffs: Sequence[Rational]) -> Cyclotomic:
        """Construit un résidu à partir de coefficients rationnels de degré < φ(m)."""
        values = [Fraction(c) for c in coeffs]
        den = 1
        for v in values:
            den = den * v.denominator // math.gcd(den, v.denominator)
        return cls(order, [int(v * den) for v in values], den)

    # ─────────────────────────────────────────────────────────────────────────
    # Accès
    # ─────────────────────────────────────────────────────────────────────────

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.num)

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self.render()} is not rational")
        return Fraction(self.num[0], self.den)

    # ─────────────────────────────────────────────────────────────────────────
    # Arithmétique
    # ─────────────────────────────────────────────────────────────────────────

    def _check(self, other: Cyclotomic) -> None:
        if other.order != self.order:
            raise SessionMismatchError(
                f"cyclotomic orders differ: {self.order} vs {other.order}"
            )

    def __add__(self, other: object) -> Cyclotomic:
        if isinstance(other, (int, Fraction)):
            other = Cyclotomic.from_rational(self.order, other)
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        self._check(other)
        if self.den == other.den:
            return Cyclotomic._make(
                self.order, [a + b for a, b in zip(self.num, other.num)], self.den
            )
        return Cyclotomic._make(
            self.order,
            [a * other.den + b * self.den for a, b in zip(self.num, other.num)],
            self.den * other.den,
        )

    __radd__ = __add__

    def __neg__(self) -> Cyclotomic:
        obj = object.__new__(Cyclotomic)
        obj.order = self.order
        obj.num = tuple(-c for c in self.num)
        obj.den = self.den
        return obj

    def __sub__(self, other: object) -> Cyclotomic:
        if isinstance(other, (int, Fraction)):
            other = Cyclotomic.from_rational(self.order, other)
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: object) -> Cyclotomic:
        return (-self) + other

    def __mul__(self, other: object) -> Cyclotomic:
        if isinstance(other, int):
            return Cyclotomic._make(self.order, [c * other for c in self.num], self.den)
        if isinstance(other, Fraction):
            return Cyclotomic._make(
                self.order, [c * other.numerator for c in self.num], self.den * other.denominator
            )
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        self._check(other)
        field = cyclotomic_field(self.order)
        n = field.degree
        prod = [0] * (2 * n - 1)
        for i, ai in enumerate(self.num):
            if ai:
                for j, bj in enumerate(other.num):
                    if bj:
                        prod[i + j] += ai * bj
        result = prod[:n]
        for k in range(n, 2 * n - 1):
            c = prod[k]
            if c:
                row = field.powers[k]
                for r in range(n):
                    result[r] += c * row[r]
        return Cyclotomic._make(self.order, result, self.den * other.den)

    __rmul__ = __mul__

    def times_root(self, k: int) -> Cyclotomic:
        """Multiplie par z^k."""
        if k % self.order == 0:
            return self
        return self * _root(self.order, k % self.order)

    def inverse(self) -> Cyclotomic:
        """Inverse exact, par l'algorithme d'Euclide étendu contre Φ_m."""
        if self.is_zero():
            raise CyclotomicZeroDivisionError("inverse of zero in a cyclotomic field")
        if self.is_rational():
            return Cyclotomic.from_rational(self.order, 1 / self.to_fraction())
        field = cyclotomic_field(self.order)
        value = Poly(list(reversed(self.num)), _Z, domain=QQ)
        modulus = Poly(list(reversed(field.modulus)), _Z, domain=QQ)
        inverse = value.invert(modulus)
        coeffs = [Fraction(int(c.p), int(c.q)) * self.den for c in reversed(inverse.all_coeffs())]
        coeffs += [Fraction(0)] * (field.degree - len(coeffs))
        return Cyclotomic.from_fractions(self.order, coeffs)

    def __truediv__(self, other: object) -> Cyclotomic:
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise CyclotomicZeroDivisionError("division by zero")
            return self * (1 / Fraction(other))
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, exponent: int) -> Cyclotomic:
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = Cyclotomic.one(self.order)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self.num[0], self.den) == other
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        return self.order == other.order and self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.order, self.num, self.den))

    # ─────────────────────────────────────────────────────────────────────────
    # Rendu
    # ─────────────────────────────────────────────────────────────────────────

    def render(self) -> str:
        """Polynôme en z (= ζ_{2d}), exposants croissants."""
        pieces: list[str] = []
        for k, c in enumerate(self.num):
            if c == 0:
                continue
            value = Fraction(c, self.den)
            magnitude = abs(value)
            if k == 0:
                body = format_rational(magnitude)
            else:
                power = "z" if k == 1 else f"z^{k}"
                body = power if magnitude == 1 else f"{format_rational(magnitude)}*{power}"
            if not pieces:
                pieces.append(f"-{body}" if value < 0 else body)
            else:
                pieces.append(f"- {body}" if value < 0 else f"+ {body}")
        return " ".join(pieces) if pieces else "0"

    def __repr__(self) -> str:
        return f"Cyclotomic({self.order}: {self.render()})"


@lru_cache(maxsize=None)
def _root(order: int, k: int) -> Cyclotomic:
    field = cyclotomic_field(order)
    return Cyclotomic._make(order, list(field.powers[k % order]), 1)


def root_power(order: int, k: int, half: bool = False) -> Cyclotomic:
    """
    Racine de l'unité du corps Q(ζ_m), m = 2d.

    Retourne ζ^k = ζ_{2d}^{2k} ; avec half=True retourne ζ_{2d}^k (puissances de √ζ).
    """
    exponent = k if half else 2 * k
    return _root(order, exponent % order)


# ═══════════════════════════════════════════════════════════════════════════════
# Scalaires Q(ζ_m)[a][t]/(t^N)
# ═══════════════════════════════════════════════════════════════════════════════

ScalarKey = tuple[int, int]  # (exposant de a, exposant de t)


class Scalar:
    """Polynôme creux en a et t à coefficients cyclotomiques, tronqué en t^N."""

    __slots__ = ("session", "terms")

    session: Session
    terms: dict[ScalarKey, Cyclotomic]

    def __init__(self, session: Session, terms: Mapping[ScalarKey, Cyclotomic] | None = None):
        self.session = session
        self.terms = {}
        for (a_exp, t_exp), coeff in (terms or {}).items():
            if a_exp < 0 or t_exp < 0:
                raise ValueError("negative exponent in scalar")
            if coeff.order != session.m:
                raise SessionMismatchError(f"coefficient of order {coeff.order} in {session}")
            if t_exp < session.t_order and not coeff.is_zero():
                self.terms[(a_exp, t_exp)] = coeff

    @classmethod
    def _make(cls, session: Session, terms: dict[ScalarKey, Cyclotomic]) -> Scalar:
        obj = object.__new__(cls)
        obj.session = session
        obj.terms = terms
        return obj

    # ─────────────────────────────────────────────────────────────────────────
    # Constructeurs
    # ─────────────────────────────────────────────────────────────────────────

    @classmethod
    def zero(cls, session: Session) -> Scalar:
        return cls._make(session, {})

    @classmethod
    def one(cls, session: Session) -> Scalar:
        return cls.from_rational(session, 1)

    @classmethod
    def from_rational(cls, session: Session, value: Rational) -> Scalar:
        if value == 0:
            return cls.zero(session)
        return cls._make(session, {(0, 0): Cyclotomic.from_rational(session.m, value)})

    @classmethod
    def from_cyclotomic(cls, session: Session, value: Cyclotomic) -> Scalar:
        return cls(session, {(0, 0): value})

    @classmethod
    def a(cls, session: Session) -> Scalar:
        """Le paramètre formel a."""
        return cls._make(session, {(1, 0): Cyclotomic.one(session.m)})

    @classmethod
    def t(cls, session: Session) -> Scalar:
        """Le paramètre de déformation t (nul si t_order = 1)."""
        return cls(session, {(0, 1): Cyclotomic.one(session.m)})

    @classmethod
    def root(cls, session: Session, k: int, half: bool = False) -> Scalar:
        return cls._make(session, {(0, 0): root_power(session.m, k, half=half)})

    # ─────────────────────────────────────────────────────────────────────────
    # Arithmétique
    # ─────────────────────────────────────────────────────────────────────────

    def _coerce(self, other: object) -> Scalar | None:
        if isinstance(other, Scalar):
            self.session.check(other.session)
            return other
        if isinstance(other, (int, Fraction)):
            return Scalar.from_rational(self.session, other)
        if isinstance(other, Cyclotomic):
            return Scalar.from_cyclotomic(self.session, other)
        return None

    def __add__(self, other: object) -> Scalar:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        if not rhs.terms:
            return self
        if not self.terms:
            return rhs
        out = dict(self.terms)
        for key, coeff in rhs.terms.items():
            prev = out.get(key)
            if prev is None:
                out[key] = coeff
            else:
                total = prev + coeff
                if total.is_zero():
                    del out[key]
                else:
                    out[key] = total
        return Scalar._make(self.session, out)

    __radd__ = __add__

    def __neg__(self) -> Scalar:
        return Scalar._make(self.session, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: object) -> Scalar:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other: object) -> Scalar:
        return (-self) + other

    def __mul__(self, other: object) -> Scalar:
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return Scalar.zero(self.session)
            return Scalar._make(self.session, {k: c * other for k, c in self.terms.items()})
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        n = self.session.t_order
        out: dict[ScalarKey, Cyclotomic] = {}
        for (a1, t1), c1 in self.terms.items():
            for (a2, t2), c2 in rhs.terms.items():
                t_exp = t1 + t2
                if t_exp >= n:
                    continue
                key = (a1 + a2, t_exp)
                prod = c1 * c2
                prev = out.get(key)
                out[key] = prod if prev is None else prev + prod
        return Scalar._make(self.session, {k: c for k, c in out.items() if not c.is_zero()})

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> Scalar:
        if exponent < 0:
            raise ValueError("negative power of a scalar")
        result = Scalar.one(self.session)
        for _ in range(exponent):
            result = result * self
        return result

    def times_root(self, k: int) -> Scalar:
        """Multiplie par z^k (z = ζ_{2d})."""
        if k % self.session.m == 0:
            return self
        return Scalar._make(self.session, {key: c.times_root(k) for key, c in self.terms.items()})

    def inverse(self) -> Scalar:
        """Inverse d'une constante cyclotomique non nulle."""
        if not self.is_constant() or self.is_zero():
            raise NonExactDivisionError(f"{self.render()} is not a unit")
        return Scalar._make(self.session, {(0, 0): self.terms[(0, 0)].inverse()})

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return self == Scalar.from_rational(self.session, other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.session == other.session and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.session, frozenset(self.terms.items())))

    # ─────────────────────────────────────────────────────────────────────────
    # Spécialisations et extractions
    # ─────────────────────────────────────────────────────────────────────────

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(key == (0, 0) for key in self.terms)

    def constant(self) -> Cyclotomic:
        if not self.is_constant():
            raise ValueError(f"{self.render()} depends on a or t")
        return self.terms.get((0, 0), Cyclotomic.zero(self.session.m))

    def to_fraction(self) -> Fraction:
        return self.constant().to_fraction()

    def specialize_a(self, value: Rational) -> Scalar:
        """Spécialise a en une valeur rationnelle exacte."""
        value = Fraction(value)
        out: dict[ScalarKey, Cyclotomic] = {}
        for (a_exp, t_exp), coeff in self.terms.items():
            term = coeff * (value**a_exp)
            prev = out.get((0, t_exp))
            out[(0, t_exp)] = term if prev is None else prev + term
        return Scalar._make(self.session, {k: c for k, c in out.items() if not c.is_zero()})

    def a_coefficient(self, k: int) -> Scalar:
        """Coefficient de a^k."""
        return Scalar._make(
            self.session, {(0, t_exp): c for (a_exp, t_exp), c in self.terms.items() if a_exp == k}
        )

    def t_coefficient(self, k: int, session: Session | None = None) -> Scalar:
        """Coefficient de t^k, éventuellement transporté dans une autre session."""
        target = session or self.session
        if target.d != self.session.d:
            raise SessionMismatchError(f"cannot move {self.session} to {target}")
        return Scalar(
            target, {(a_exp, 0): c for (a_exp, t_exp), c in self.terms.items() if t_exp == k}
        )

    def with_session(self, session: Session) -> Scalar:
        """Relève ou tronque l'ordre en t (même d)."""
        if session.d != self.session.d:
            raise SessionMismatchError(f"cannot move {self.session} to {session}")
        return Scalar(session, self.terms)

    def a_degrees(self) -> set[int]:
        return {a_exp for a_exp, _ in self.terms}

    def components(self) -> dict[tuple[int, int, int], Fraction]:
        """Composantes rationnelles indexées par (exposant de a, exposant de t, puissance de z)."""
        out: dict[tuple[int, int, int], Fraction] = {}
        for (a_exp, t_exp), coeff in self.terms.items():
            for k, c in enumerate(coeff.num):
                if c:
                    out[(a_exp, t_exp, k)] = Fraction(c, coeff.den)
        return out

    # ─────────────────────────────────────────────────────────────────────────
    # Rendu
    # ─────────────────────────────────────────────────────────────────────────

    def render(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for a_exp, t_exp in sorted(self.terms):
            coeff = self.terms[(a_exp, t_exp)]
            factors = []
            if a_exp:
                factors.append("a" if a_exp == 1 else f"a^{a_exp}")
            if t_exp:
                factors.append("t" if t_exp == 1 else f"t^{t_exp}")
            text = coeff.render()
            if not factors:
                pieces.append(text)
            elif coeff == 1:
                pieces.append("*".join(factors))
            else:
                pieces.append(f"({text})*" + "*".join(factors))
        return " + ".join(pieces)

    def __repr__(self) -> str:
        return f"Scalar({self.render()})"


def scalar_sum(session: Session, values: Iterable[Scalar]) -> Scalar:
    """Somme d'une famille de scalaires."""
    total = Scalar.zero(session)
    for value in values:
        total = total + value
    return total
