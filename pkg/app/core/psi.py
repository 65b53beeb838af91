"""
Famille Ψ_i de C[T, T', T''] : Ψ_0 = 1, Ψ_1 = T, Ψ_{i+1} = TΨ_i - T'T''Ψ_{i-1}.
Identités, base de degré k et extraction de coordonnées.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping
from fractions import Fraction
from functools import lru_cache

from app.core.errors import DegreeError
from app.core.multipoly import Exponents, MultiPoly, coordinates, family_rank, monomials_of_degree
from app.core.polyring import (
    CommPoly,
    InvariantName,
    invariant_generator,
    poisson_vv,
    solve_in_span,
    span_rank,
)
from app.core.session import Session

logger = logging.getLogger(__name__)

PSI_VARIABLES = ("T", "T1", "T2")
T, T1, T2 = 0, 1, 2


class PsiPoly(MultiPoly):
    """Polynôme en T, T' (rendu T1) et T'' (rendu T2)."""

    __slots__ = ()

    def __init__(self, terms: Mapping[Exponents, int | Fraction] | None = None):
        super().__init__(PSI_VARIABLES, terms)

    @classmethod
    def var(cls, index: int) -> PsiPoly:
        return cls.generator(PSI_VARIABLES, index)

    @classmethod
    def const(cls, value: int | Fraction) -> PsiPoly:
        return cls.constant(PSI_VARIABLES, value)

    @classmethod
    def monomial(cls, t: int, t1: int, t2: int, coeff: int | Fraction = 1) -> PsiPoly:
        return cls({(t, t1, t2): coeff})


# ═══════════════════════════════════════════════════════════════════════════════
# Récurrence
# ═══════════════════════════════════════════════════════════════════════════════


@lru_cache(maxsize=None)
def psi(i: int) -> PsiPoly:
    """Ψ_i par la récurrence (mémoïsée)."""
    if i < 0:
        raise ValueError(f"psi index must be nonnegative, got {i}")
    if i == 0:
        return PsiPoly.const(1)
    if i == 1:
        return PsiPoly.var(T)
    return PsiPoly.var(T) * psi(i - 1) - PsiPoly.var(T1) * PsiPoly.var(T2) * psi(i - 2)


def psi_coefficients(i: int) -> dict[int, Fraction]:
    """Entiers m_{i,j} : coefficient de (T'T'')^j T^{i-2j} dans Ψ_i."""
    poly = psi(i)
    out = {}
    for j in range(i // 2 + 1):
        coeff = poly.coefficient((i - 2 * j, j, j))
        if coeff:
            out[j] = coeff
    return out


def substitute_invariants(p: MultiPoly, session: Session) -> CommPoly:
    """p(eu_0, q, Q) dans C[V × V*]."""
    values = [
        invariant_generator(InvariantName.EU0, session),
        invariant_generator(InvariantName.Q_LOWER, session),
        invariant_generator(InvariantName.Q_UPPER, session),
    ]
    return p.evaluate(values, CommPoly.one(session))


# ═══════════════════════════════════════════════════════════════════════════════
# Identités
# ═══════════════════════════════════════════════════════════════════════════════


def verify_psi_closed_form(i: int, session: Session) -> bool:
    """Ψ_i(eu_0, q, Q) = ((xX)^{i+1} - (yY)^{i+1}) / (xX - yY)."""
    lhs = substitute_invariants(psi(i), session)
    rhs = invariant_generator(InvariantName.EU0_SQUARE, session, i)
    return lhs == rhs


def verify_psi_derivatives(i: int, shift: int = 0) -> bool:
    """
    2T' ∂Ψ_i/∂T + T ∂Ψ_i/∂T'' = (i+1) T' Ψ_{i-1} et l'identité symétrique en T', T''.

    shift perturbe le coefficient (i+1) (contrôle négatif).
    """
    if i < 1:
        raise ValueError(f"derivative identities need i >= 1, got {i}")
    p = psi(i)
    factor = i + 1 + shift
    t, t1, t2 = PsiPoly.var(T), PsiPoly.var(T1), PsiPoly.var(T2)
    first = 2 * t1 * p.derivative(T) + t * p.derivative(T2) == factor * t1 * psi(i - 1)
    second = 2 * t2 * p.derivative(T) + t * p.derivative(T1) == factor * t2 * psi(i - 1)
    return first and second


def bracket_with_Q(theta: MultiPoly) -> PsiPoly:  # noqa: N802
    """Polynôme Θ' tel que {Q, Θ(eu_0, q, Q)} = Θ'(eu_0, q, Q)."""
    result = -2 * PsiPoly.var(T2) * theta.derivative(T) - PsiPoly.var(T) * theta.derivative(T1)
    return PsiPoly(result.terms)


def verify_bracket_with_Q(i: int, session: Session) -> bool:  # noqa: N802
    """Compare la règle de dérivation en (eu_0, q, Q) au crochet canonique."""
    Q = invariant_generator(InvariantName.Q_UPPER, session)  # noqa: N806
    lhs = poisson_vv(Q, substitute_invariants(psi(i), session))
    rhs = substitute_invariants(bracket_with_Q(psi(i)), session)
    return lhs == rhs


# ═══════════════════════════════════════════════════════════════════════════════
# Base de degré k
# ═══════════════════════════════════════════════════════════════════════════════


def basis_family(k: int) -> list[tuple[tuple[int, int], PsiPoly]]:
    """Famille (T'^{k-j} T''^i Ψ_{j-i})_{0 ≤ i ≤ j ≤ k}."""
    family = []
    for i in range(k + 1):
        for j in range(i, k + 1):
            element = PsiPoly.monomial(0, k - j, i) * psi(j - i)
            family.append(((i, j), element))
    return family


def verify_basis(k: int) -> bool:
    """Vrai si la famille est de rang plein (k+1)(k+2)/2."""
    family = [p for _, p in basis_family(k)]
    return family_rank(family) == (k + 1) * (k + 2) // 2


def basis_coordinates(p: MultiPoly) -> dict[tuple[int, int], Fraction]:
    """
    Coordonnées de p (homogène de degré k) dans la famille de base.

    Raises:
        DegreeError: si p n'est pas homogène.
    """
    if not p.is_homogeneous():
        raise DegreeError(f"{p.render()} is not homogeneous")
    k = max(p.degree(), 0)
    family = basis_family(k)
    solution = coordinates(p, [element for _, element in family])
    if solution is None:
        raise DegreeError(f"{p.render()} is outside the degree-{k} span")
    return {index: value for (index, _), value in zip(family, solution) if value}


def reconstruct(coords: Mapping[tuple[int, int], Fraction], k: int) -> PsiPoly:
    """Recompose un polynôme à partir de ses coordonnées."""
    total = PsiPoly()
    for (i, j), element in basis_family(k):
        value = coords.get((i, j), 0)
        if value:
            total = total + element * value
    return total


# ═══════════════════════════════════════════════════════════════════════════════
# Substitution (eu_0, q, Q)
# ═══════════════════════════════════════════════════════════════════════════════


def substitution_injective(k: int, session: Session) -> bool:
    """La substitution T ↦ eu_0, T' ↦ q, T'' ↦ Q est injective en degré k."""
    monomials = monomials_of_degree(3, k)
    images = [substitute_invariants(PsiPoly({e: 1}), session) for e in monomials]
    return span_rank(images) == len(monomials)


def express_in_invariants(f: CommPoly, degree: int) -> PsiPoly | None:
    """
    Unique p homogène de degré donné avec p(eu_0, q, Q) = f, ou None.

    Les coefficients de f ne doivent dépendre ni de a ni de t.
    """
    if degree < 0:
        return PsiPoly() if f.is_zero() else None
    monomials = monomials_of_degree(3, degree)
    images = [substitute_invariants(PsiPoly({e: 1}), f.session) for e in monomials]
    solution = solve_in_span(f, images)
    if solution is None:
        return None
    logger.debug(f"expressed a degree-{degree} invariant with {sum(1 for c in solution if c)} terms")
    return PsiPoly({e: c for e, c in zip(monomials, solution) if c})
