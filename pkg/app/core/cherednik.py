"""
Algèbre de Cherednik rationnelle H_{t,c} du groupe diédral (paramètres égaux a).
Forme normale PBW  f(x,y) · w · F(X,Y), produit, commutateurs, éléments centraux et crochet de Z_c.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping
from fractions import Fraction
from functools import lru_cache
from typing import Any

from app.config import settings
from app.core.dihedral import (
    GroupElement,
    apply_monomial_map,
    check_action_law,
    check_group_law,
    check_monomial_maps,
    reflections,
)
from app.core.errors import ConventionError, DeformationError, NotCentralError
from app.core.multipoly import MultiPoly
from app.core.polyring import CommPoly, Monomial, Var, render_monomial
from app.core.scalar import Rational, Scalar
from app.core.session import Session, get_session

logger = logging.getLogger(__name__)

TermKey = tuple[GroupElement, Monomial]
Pair = tuple[int, int]
# (élément du groupe, monôme gauche en x,y, monôme droit en X,Y) ↦ coefficient
Reordered = dict[tuple[GroupElement, Pair, Pair], Scalar]


def _accumulate(acc: dict[Any, Scalar], key: Any, value: Scalar) -> None:
    prev = acc.get(key)
    acc[key] = value if prev is None else prev + value


def _pruned(acc: Mapping[Any, Scalar]) -> dict[Any, Scalar]:
    return {k: v for k, v in acc.items() if not v.is_zero()}


# ═══════════════════════════════════════════════════════════════════════════════
# Éléments de H_{t,c}
# ═══════════════════════════════════════════════════════════════════════════════


class HElement:
    """Somme Σ c · x^α y^β · w · X^γ Y^δ, stockée sous forme PBW développée."""

    __slots__ = ("session", "terms")

    session: Session
    terms: dict[TermKey, Scalar]

    def __init__(self, session: Session, terms: Mapping[TermKey, Scalar] | None = None):
        self.session = session
        self.terms = {}
        for (w, exps), coeff in (terms or {}).items():
            session.check(coeff.session)
            if w.d != session.d:
                raise ValueError(f"group element {w.render()} does not belong to W for d={session.d}")
            if len(exps) != 4 or min(exps) < 0:
                raise ValueError(f"invalid PBW exponents {exps}")
            if not coeff.is_zero():
                self.terms[(w, tuple(exps))] = coeff  # type: ignore[index]

    @classmethod
    def _make(cls, session: Session, terms: dict[TermKey, Scalar]) -> HElement:
        obj = object.__new__(cls)
        obj.session = session
        obj.terms = terms
        return obj

    # ─────────────────────────────────────────────────────────────────────────
    # Constructeurs
    # ─────────────────────────────────────────────────────────────────────────

    @classmethod
    def zero(cls, session: Session) -> HElement:
        return cls._make(session, {})

    @classmethod
    def scalar(cls, session: Session, value: Rational | Scalar) -> HElement:
        coeff = value if isinstance(value, Scalar) else Scalar.from_rational(session, value)
        return cls(session, {(GroupElement.identity(session.d), (0, 0, 0, 0)): coeff})

    @classmethod
    def one(cls, session: Session) -> HElement:
        return cls.scalar(session, 1)

    @classmethod
    def group(cls, session: Session, w: GroupElement, coeff: Scalar | Rational = 1) -> HElement:
        value = coeff if isinstance(coeff, Scalar) else Scalar.from_rational(session, coeff)
        return cls(session, {(w, (0, 0, 0, 0)): value})

    @classmethod
    def from_poly(cls, poly: CommPoly) -> HElement:
        """Relevé PBW f ↦ f·1 (variables de V* à gauche, de V à droite)."""
        identity = GroupElement.identity(poly.session.d)
        return cls._make(poly.session, {(identity, exps): c for exps, c in poly.terms.items()})

    @classmethod
    def from_parts(cls, left: CommPoly, w: GroupElement, right: CommPoly) -> HElement:
        """
        Produit left · w · right déjà ordonné.

        Raises:
            ValueError: si left dépend de X, Y ou right de x, y.
        """
        left.session.check(right.session)
        if not left.is_left_only() or not right.is_right_only():
            raise ValueError("left factor must be in C[x,y] and right factor in C[X,Y]")
        acc: dict[TermKey, Scalar] = {}
        for e1, c1 in left.terms.items():
            for e2, c2 in right.terms.items():
                _accumulate(acc, (w, (e1[0], e1[1], e2[2], e2[3])), c1 * c2)
        return cls._make(left.session, _pruned(acc))

    # ─────────────────────────────────────────────────────────────────────────
    # Arithmétique
    # ─────────────────────────────────────────────────────────────────────────

    def _coerce(self, other: object) -> HElement | None:
        if isinstance(other, HElement):
            self.session.check(other.session)
            return other
        if isinstance(other, (int, Fraction, Scalar)):
            return HElement.scalar(self.session, other)
        return None

    def __add__(self, other: object) -> HElement:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        out = dict(self.terms)
        for key, coeff in rhs.terms.items():
            _accumulate(out, key, coeff)
        return HElement._make(self.session, _pruned(out))

    __radd__ = __add__

    def __neg__(self) -> HElement:
        return HElement._make(self.session, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: object) -> HElement:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other: object) -> HElement:
        return (-self) + other

    def scale(self, factor: Rational | Scalar) -> HElement:
        return HElement._make(self.session, _pruned({k: c * factor for k, c in self.terms.items()}))

    def __mul__(self, other: object) -> HElement:
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        if isinstance(other, HElement):
            return get_algebra(self.session.d, self.session.t_order).multiply(self, other)
        return NotImplemented

    def __rmul__(self, other: object) -> HElement:
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, exponent: int) -> HElement:
        if exponent < 0:
            raise ValueError("negative power in H")
        result = HElement.one(self.session)
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = HElement.scalar(self.session, other)
        if not isinstance(other, HElement):
            return NotImplemented
        return self.session == other.session and self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    # ─────────────────────────────────────────────────────────────────────────
    # Structure
    # ─────────────────────────────────────────────────────────────────────────

    def is_zero(self) -> bool:
        return not self.terms

    def group_support(self) -> set[GroupElement]:
        return {w for w, _ in self.terms}

    def component(self, w: GroupElement) -> CommPoly:
        """Polynôme f_w F_w du coefficient de w (lu dans C[V × V*])."""
        return CommPoly._make(
            self.session, {exps: c for (g, exps), c in self.terms.items() if g == w}
        )

    def degree(self) -> int:
        return max((sum(exps) for _, exps in self.terms), default=-1)

    def specialize_a(self, value: Rational) -> HElement:
        return HElement._make(
            self.session, _pruned({k: c.specialize_a(value) for k, c in self.terms.items()})
        )

    def a_coefficient(self, k: int) -> HElement:
        return HElement._make(
            self.session, _pruned({key: c.a_coefficient(k) for key, c in self.terms.items()})
        )

    def t_coefficient(self, k: int, session: Session | None = None) -> HElement:
        """Coefficient de t^k, transporté dans la session cible (même d)."""
        target = session or self.session
        return HElement._make(
            target, _pruned({key: c.t_coefficient(k, target) for key, c in self.terms.items()})
        )

    def with_session(self, session: Session) -> HElement:
        return HElement._make(
            session, _pruned({key: c.with_session(session) for key, c in self.terms.items()})
        )

    # ─────────────────────────────────────────────────────────────────────────
    # Rendu
    # ─────────────────────────────────────────────────────────────────────────

    def sorted_terms(self) -> list[tuple[TermKey, Scalar]]:
        def order(item: tuple[TermKey, Scalar]) -> tuple[tuple[int, int], tuple[int, ...]]:
            (w, exps), _ = item
            return w.sort_key(), tuple(-e for e in exps)

        return sorted(self.terms.items(), key=order)

    def render(self, max_terms: int | None = None) -> str:
        """Rendu "coeff * f * w * F", groupe puis ordre lexicographique décroissant."""
        if not self.terms:
            return "0"
        ordered = self.sorted_terms()
        pieces = []
        for (w, exps), coeff in ordered[: max_terms or len(ordered)]:
            factors = [f"({coeff.render()})"]
            left = render_monomial((exps[0], exps[1], 0, 0))
            right = render_monomial((0, 0, exps[2], exps[3]))
            if left:
                factors.append(left)
            if not w.is_identity:
                factors.append(w.render())
            if right:
                factors.append(right)
            pieces.append(" * ".join(factors))
        if max_terms and len(ordered) > max_terms:
            pieces.append(f"... ({len(ordered) - max_terms} more terms)")
        return " + ".join(pieces)

    def to_dict(self) -> dict[str, Any]:
        """Sérialisation JSON canonique."""
        return {
            "d": self.session.d,
            "t_order": self.session.t_order,
            "terms": [
                {
                    "group": w.render(),
                    "left": render_monomial((exps[0], exps[1], 0, 0)) or "1",
                    "right": render_monomial((0, 0, exps[2], exps[3])) or "1",
                    "coeff": coeff.render(),
                }
                for (w, exps), coeff in self.sorted_terms()
            ],
        }

    def __repr__(self) -> str:
        return f"HElement({self.render(8)})"


# ═══════════════════════════════════════════════════════════════════════════════
# Moteur de réécriture
# ═══════════════════════════════════════════════════════════════════════════════


class CherednikAlgebra:
    """
    Moteur de multiplication d'une session (d, t_order).

    Règles : w·f = act(w,f)·w, P·x = xP - t∂P/∂X + aΣ Δ_i(P) s_i,
    P·y = yP - t∂P/∂Y - aΣ ζ^i Δ_i(P) s_i avec Δ_i(P) = (P - s_i P)/(X - ζ^i Y).
    """

    def __init__(self, session: Session):
        self.session = session
        self.d = session.d
        self._identity = GroupElement.identity(self.d)
        self._reflections = reflections(self.d)
        self._one = Scalar.one(session)
        self._a = Scalar.a(session)
        self._t = Scalar.t(session)
        self._demazure_cache: dict[tuple[int, int, int], list[tuple[Pair, Scalar]]] = {}
        self._swap_cache: dict[tuple[int, int, Var], list[tuple[GroupElement, Pair, Pair, Scalar]]] = {}
        self._reorder_cache: dict[tuple[int, int, int, int], Reordered] = {}
        self._eu_powers: list[HElement] = []
        self._invariant_cache: dict[tuple[int, int, int], HElement] = {}
        self._central_cache: dict[int, HElement] = {}

    # ─────────────────────────────────────────────────────────────────────────
    # Générateurs
    # ─────────────────────────────────────────────────────────────────────────

    def variable(self, var: Var) -> HElement:
        return HElement.from_poly(CommPoly.variable(self.session, var))

    @property
    def x(self) -> HElement:
        return self.variable(Var.x)

    @property
    def y(self) -> HElement:
        return self.variable(Var.y)

    @property
    def X(self) -> HElement:  # noqa: N802
        return self.variable(Var.X)

    @property
    def Y(self) -> HElement:  # noqa: N802
        return self.variable(Var.Y)

    def s(self, i: int) -> HElement:
        return HElement.group(self.session, GroupElement.reflection(i, self.d))

    def one(self) -> HElement:
        return HElement.one(self.session)

    def lift(self, poly: CommPoly) -> HElement:
        return HElement.from_poly(poly)

    def generators(self) -> list[tuple[str, HElement]]:
        """Les six générateurs testés pour la centralité."""
        return [
            ("x", self.x),
            ("y", self.y),
            ("X", self.X),
            ("Y", self.Y),
            ("s[0]", self.s(0)),
            ("s[1]", self.s(1)),
        ]

    # ─────────────────────────────────────────────────────────────────────────
    # Opérateurs de Demazure et échanges élémentaires
    # ─────────────────────────────────────────────────────────────────────────

    def demazure(self, i: int, c: int, e: int) -> list[tuple[Pair, Scalar]]:
        """Δ_i(X^c Y^e) comme liste ((γ, δ), coefficient)."""
        key = (i % self.d, c, e)
        cached = self._demazure_cache.get(key)
        if cached is not None:
            return cached
        session = self.session
        s_i = GroupElement.reflection(i, self.d)
        monomial = CommPoly.monomial(session, (0, 0, c, e))
        numerator = monomial - monomial.act(s_i)
        divisor = CommPoly.variable(session, Var.X) - CommPoly.variable(session, Var.Y) * Scalar.root(session, i)
        quotient = numerator.divide_exact(divisor)
        result = [((exps[2], exps[3]), coeff) for exps, coeff in quotient.sorted_terms()]
        self._demazure_cache[key] = result
        return result

    def _swap(self, c: int, e: int, var: Var) -> list[tuple[GroupElement, Pair, Pair, Scalar]]:
        """Réécrit X^c Y^e · v (v ∈ {x, y}) en forme normale."""
        key = (c, e, var)
        cached = self._swap_cache.get(key)
        if cached is not None:
            return cached
        out: list[tuple[GroupElement, Pair, Pair, Scalar]] = []
        t_active = not self._t.is_zero()
        if var is Var.x:
            out.append((self._identity, (1, 0), (c, e), self._one))
            if c and t_active:
                out.append((self._identity, (0, 0), (c - 1, e), self._t * (-c)))
            for s_i in self._reflections:
                for right, coeff in self.demazure(s_i.index, c, e):
                    out.append((s_i, (0, 0), right, self._a * coeff))
        else:
            out.append((self._identity, (0, 1), (c, e), self._one))
            if e and t_active:
                out.append((self._identity, (0, 0), (c, e - 1), self._t * (-e)))
            for s_i in self._reflections:
                for right, coeff in self.demazure(s_i.index, c, e):
                    out.append((s_i, (0, 0), right, -(self._a * coeff).times_root(2 * s_i.index)))
        self._swap_cache[key] = out
        return out

    def _reorder(self, c: int, e: int, a: int, b: int) -> Reordered:
        """Forme normale de X^c Y^e · x^a y^b, en retirant la dernière variable de droite."""
        key = (c, e, a, b)
        cached = self._reorder_cache.get(key)
        if cached is not None:
            return cached
        if a == 0 and b == 0:
            result: Reordered = {(self._identity, (0, 0), (c, e)): self._one}
        elif not c and not e:
            result = {(self._identity, (a, b), (0, 0)): self._one}
        else:
            if b:
                previous, var = self._reorder(c, e, a, b - 1), Var.y
            else:
                previous, var = self._reorder(c, e, a - 1, 0), Var.x
            acc: dict[tuple[GroupElement, Pair, Pair], Scalar] = {}
            for (u, left, right), coeff in previous.items():
                mapping = u.monomial_map()
                for w, l2, r2, c2 in self._swap(right[0], right[1], var):
                    moved, shift = apply_monomial_map(mapping, (l2[0], l2[1], 0, 0))
                    new_key = (u * w, (left[0] + moved[0], left[1] + moved[1]), r2)
                    _accumulate(acc, new_key, (coeff * c2).times_root(shift))
            result = _pruned(acc)
        self._reorder_cache[key] = result
        return result

    # ─────────────────────────────────────────────────────────────────────────
    # Produit
    # ─────────────────────────────────────────────────────────────────────────

    def multiply(self, h1: HElement, h2: HElement) -> HElement:
        """Produit (f1 w1 F1)(f2 w2 F2) = f1 · w1(g) · (w1 u w2) · w2^{-1}(G) · F2."""
        self.session.check(h1.session)
        self.session.check(h2.session)
        acc: dict[TermKey, Scalar] = {}
        for (w1, e1), c1 in h1.terms.items():
            left_map = w1.monomial_map()
            for (w2, e2), c2 in h2.terms.items():
                c12 = c1 * c2
                if c12.is_zero():
                    continue
                right_map = w2.inverse().monomial_map()
                for (u, g, big_g), c in self._reorder(e1[2], e1[3], e2[0], e2[1]).items():
                    left, s1 = apply_monomial_map(left_map, (g[0], g[1], 0, 0))
                    right, s2 = apply_monomial_map(right_map, (0, 0, big_g[0], big_g[1]))
                    key = (
                        w1 * u * w2,
                        (e1[0] + left[0], e1[1] + left[1], right[2] + e2[2], right[3] + e2[3]),
                    )
                    _accumulate(acc, key, (c12 * c).times_root(s1 + s2))
        return HElement._make(self.session, _pruned(acc))

    def commutator(self, h1: HElement, h2: HElement) -> HElement:
        return self.multiply(h1, h2) - self.multiply(h2, h1)

    def trunc(self, h: HElement) -> CommPoly:
        """Trunc_c : composante de l'identité, t mis à zéro."""
        identity = self._identity
        out = {
            exps: c.t_coefficient(0)
            for (w, exps), c in h.terms.items()
            if w == identity
        }
        return CommPoly._make(self.session, {e: c for e, c in out.items() if not c.is_zero()})

    def is_central(self, h: HElement) -> bool:
        """Commute avec x, y, X, Y, s_0, s_1 (évalué à t = 0)."""
        base = self if self.session.t_order == 1 else get_algebra(self.d, 1)
        element = h.t_coefficient(0, base.session)
        for name, generator in base.generators():
            if not base.commutator(generator, element).is_zero():
                logger.debug(f"element does not commute with {name} (d={self.d})")
                return False
        return True

    # ─────────────────────────────────────────────────────────────────────────
    # Éléments centraux
    # ─────────────────────────────────────────────────────────────────────────

    def euler(self) -> HElement:
        """eu = xX + yY + a Σ s_i."""
        session = self.session
        terms: dict[TermKey, Scalar] = {
            (self._identity, (1, 0, 1, 0)): self._one,
            (self._identity, (0, 1, 0, 1)): self._one,
        }
        for s_i in self._reflections:
            terms[(s_i, (0, 0, 0, 0))] = self._a
        return HElement(session, terms)

    def q(self) -> HElement:
        return HElement.from_poly(CommPoly.monomial(self.session, (1, 1, 0, 0)))

    def Q(self) -> HElement:  # noqa: N802
        return HElement.from_poly(CommPoly.monomial(self.session, (0, 0, 1, 1)))

    def gamma(self, i: int, j: int) -> CommPoly:
        """γ_{i,j} = (x^{d-j} - ζ^{ij} y^{d-j}) / (x - ζ^{-i} y)."""
        session, d = self.session, self.d
        numerator = CommPoly.monomial(session, (d - j, 0, 0, 0)) - CommPoly.monomial(
            session, (0, d - j, 0, 0), Scalar.root(session, i * j)
        )
        divisor = CommPoly.variable(session, Var.x) - CommPoly.monomial(
            session, (0, 1, 0, 0), Scalar.root(session, -i)
        )
        return numerator.divide_exact(divisor)

    def big_gamma(self, i: int, j: int) -> CommPoly:
        """Γ_{i,j} = (X^j - ζ^{ij} Y^j) / (X - ζ^i Y)."""
        session = self.session
        numerator = CommPoly.monomial(session, (0, 0, j, 0)) - CommPoly.monomial(
            session, (0, 0, 0, j), Scalar.root(session, i * j)
        )
        divisor = CommPoly.variable(session, Var.X) - CommPoly.monomial(
            session, (0, 0, 0, 1), Scalar.root(session, i)
        )
        return numerator.divide_exact(divisor)

    def central_a(self, j: int) -> HElement:
        """a_j = x^{d-j}Y^j + y^{d-j}X^j - a Σ_i ζ^{-ij} γ_{i,j} s_i Γ_{i,j}."""
        d = self.d
        if not 0 <= j <= d:
            raise ValueError(f"central_a index must lie in [0, {d}], got {j}")
        cached = self._central_cache.get(j)
        if cached is not None:
            return cached
        session = self.session
        result = HElement.from_poly(
            CommPoly.monomial(session, (d - j, 0, 0, j)) + CommPoly.monomial(session, (0, d - j, j, 0))
        )
        if 0 < j < d:
            for s_i in self._reflections:
                i = s_i.index
                factor = -(self._a * Scalar.root(session, -i * j))
                part = HElement.from_parts(self.gamma(i, j), s_i, self.big_gamma(i, j))
                result = result + part.scale(factor)
        self._central_cache[j] = result
        return result

    def central_a_alternative(self, j: int) -> HElement:
        """Même élément écrit avec s_i placé après le produit γ_{i,j} Γ_{i,j}."""
        d = self.d
        if not 0 <= j <= d:
            raise ValueError(f"central_a index must lie in [0, {d}], got {j}")
        session = self.session
        result = HElement.from_poly(
            CommPoly.monomial(session, (d - j, 0, 0, j)) + CommPoly.monomial(session, (0, d - j, j, 0))
        )
        if j in (0, d):
            return result
        for s_i in self._reflections:
            i = s_i.index
            product = HElement.from_poly(self.gamma(i, j) * self.big_gamma(i, j))
            term = self.multiply(product, HElement.group(session, s_i))
            result = result + term.scale(-(self._a * Scalar.root(session, -i * j)))
        return result

    def eu_power(self, k: int) -> HElement:
        """eu^k (mémoïsé)."""
        if k < 0:
            raise ValueError("negative power of eu")
        if not self._eu_powers:
            self._eu_powers.append(self.one())
        while len(self._eu_powers) <= k:
            self._eu_powers.append(self.multiply(self._eu_powers[-1], self.euler()))
        return self._eu_powers[k]

    def invariant_monomial(self, i: int, j: int, k: int) -> HElement:
        """eu^i q^j Q^k."""
        key = (i, j, k)
        cached = self._invariant_cache.get(key)
        if cached is None:
            left = HElement.from_poly(CommPoly.monomial(self.session, (j, j, 0, 0)))
            right = HElement.from_poly(CommPoly.monomial(self.session, (0, 0, k, k)))
            cached = self.multiply(self.multiply(left, self.eu_power(i)), right)
            self._invariant_cache[key] = cached
        return cached

    def evaluate_invariant(self, p: MultiPoly) -> HElement:
        """p(eu, q, Q) pour p en (T, T', T'')."""
        if p.nvars != 3:
            raise ValueError(f"expected a polynomial in three variables, got {p.variables}")
        result = HElement.zero(self.session)
        for (i, j, k), coeff in p.terms.items():
            result = result + self.invariant_monomial(i, j, k).scale(coeff)
        return result

    # ─────────────────────────────────────────────────────────────────────────
    # Crochet de Poisson de Z_c
    # ─────────────────────────────────────────────────────────────────────────

    def poisson(self, z1: HElement, z2: HElement, check: bool = True) -> HElement:
        """
        {z1, z2} = coefficient de t dans [z1, z2] relevés à l'ordre 2.

        Raises:
            NotCentralError: si une entrée n'est pas centrale à t = 0.
            DeformationError: si la partie t⁰ du commutateur relevé est non nulle.
        """
        base = get_algebra(self.d, 1)
        lifted = get_algebra(self.d, 2)
        u1 = z1.t_coefficient(0, base.session)
        u2 = z2.t_coefficient(0, base.session)
        if check:
            for label, z in (("first", u1), ("second", u2)):
                if not base.is_central(z):
                    raise NotCentralError(f"{label} argument of the bracket is not central: {z.render(6)}")
        bracket = lifted.commutator(u1.with_session(lifted.session), u2.with_session(lifted.session))
        residual = bracket.t_coefficient(0, base.session)
        if not residual.is_zero():
            raise DeformationError(f"t^0 part of the lifted commutator is nonzero: {residual.render(6)}")
        return bracket.t_coefficient(1, base.session)

    def variable_bracket(self, var: Var, z: HElement) -> HElement:
        """Coefficient de t dans [v, z] pour v ∈ {x, y} (z central à t = 0)."""
        if var not in (Var.x, Var.y):
            raise ValueError(f"bracket formula only covers x and y, got {var.name}")
        base = get_algebra(self.d, 1)
        lifted = get_algebra(self.d, 2)
        element = z.t_coefficient(0, base.session).with_session(lifted.session)
        return lifted.commutator(lifted.variable(var), element).t_coefficient(1, base.session)

    def variable_bracket_formula(self, var: Var, z: HElement) -> HElement:
        """Σ_w f_w · w · ∂F_w/∂X (v = x) ou ∂F_w/∂Y (v = y), lu terme à terme."""
        target = get_session(self.d, 1)
        index = 2 if var is Var.x else 3
        acc: dict[TermKey, Scalar] = {}
        for (w, exps), coeff in z.terms.items():
            if exps[index]:
                value = coeff.t_coefficient(0, target) * exps[index]
                lowered = list(exps)
                lowered[index] -= 1
                _accumulate(acc, (w, (lowered[0], lowered[1], lowered[2], lowered[3])), value)
        return HElement._make(target, _pruned(acc))

    # ─────────────────────────────────────────────────────────────────────────
    # Auto-test de démarrage
    # ─────────────────────────────────────────────────────────────────────────

    def _reflection_sum(self, twist: int = 0) -> HElement:
        """a Σ_i ζ^{twist·i} s_i."""
        return HElement(
            self.session,
            {(s_i, (0, 0, 0, 0)): self._a.times_root(2 * twist * s_i.index) for s_i in self._reflections},
        )

    def _oracle_product(self, exps: Monomial, var: Var) -> HElement:
        """P · v en ne déplaçant qu'une variable de P à la fois."""
        result = self.variable(var)
        factors = [Var.X] * exps[2] + [Var.Y] * exps[3]
        for factor in reversed(factors):
            result = self.multiply(self.variable(factor), result)
        return result

    def self_test(self) -> list[str]:
        """Contrôle les conventions ; retourne la liste des écarts."""
        d = self.d
        failures = [f"group law: {f}" for f in check_group_law(d)]
        failures += [f"monomial map: {f}" for f in check_monomial_maps(d)]
        failures += [f"action law: {f}" for f in check_action_law(d)]

        t_part = HElement.scalar(self.session, self._t)
        base_relations = [
            ("[x,X]", self.commutator(self.x, self.X), t_part - self._reflection_sum()),
            ("[y,Y]", self.commutator(self.y, self.Y), t_part - self._reflection_sum()),
            ("[x,Y]", self.commutator(self.x, self.Y), self._reflection_sum(-1)),
            ("[y,X]", self.commutator(self.y, self.X), self._reflection_sum(1)),
            ("[x,y]", self.commutator(self.x, self.y), HElement.zero(self.session)),
            ("[X,Y]", self.commutator(self.X, self.Y), HElement.zero(self.session)),
        ]
        for i in (0, 1):
            s_i = GroupElement.reflection(i, d)
            for var in Var:
                moved = HElement.from_poly(CommPoly.variable(self.session, var).act(s_i))
                expected = self.multiply(moved, self.s(i))
                base_relations.append((f"s[{i}]*{var.name}", self.multiply(self.s(i), self.variable(var)), expected))
        failures += [name for name, got, expected in base_relations if got != expected]

        for exps in ((0, 0, 2, 0), (0, 0, 1, 1), (0, 0, 0, 2), (0, 0, 3, 0)):
            poly = HElement.from_poly(CommPoly.monomial(self.session, exps))
            for var in (Var.x, Var.y):
                if self.multiply(poly, self.variable(var)) != self._oracle_product(exps, var):
                    failures.append(f"swap {render_monomial(exps)}*{var.name}")

        if self.session.t_order >= 2:
            pin = self.commutator(self.q(), self.Q()).t_coefficient(1, get_session(d, 1))
            if pin != self.euler().t_coefficient(0, get_session(d, 1)):
                failures.append("{q,Q} != +eu")
        return failures


@lru_cache(maxsize=None)
def get_algebra(d: int, t_order: int = 2) -> CherednikAlgebra:
    """
    Moteur partagé par session, auto-testé à la création.

    Raises:
        ConventionError: si l'auto-test détecte une dérive de convention.
    """
    algebra = CherednikAlgebra(get_session(d, t_order))
    if settings.SELF_TEST_ON_STARTUP:
        failures = algebra.self_test()
        if failures:
            raise ConventionError(f"convention self-test failed for d={d}: {', '.join(failures)}")
        logger.info(f"✅ Convention self-test passed (d={d}, t_order={t_order})")
    return algebra


def element_sum(session: Session, values: Iterable[HElement]) -> HElement:
    total = HElement.zero(session)
    for value in values:
        total = total + value
    return total
