"""
Groupe diédral W d'ordre 2d, son action monomiale sur x, y, X, Y et l'automorphisme τ.
Les éléments sont stockés abstraitement (type + indice) ; les matrices ne servent qu'aux auto-tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from app.core.scalar import Cyclotomic, root_power

# Pour chaque variable source (x, y, X, Y) : (variable cible, exposant de z = ζ_{2d}).
MonomialMap = tuple[tuple[int, int], tuple[int, int], tuple[int, int], tuple[int, int]]
Matrix2 = tuple[tuple[Cyclotomic, Cyclotomic], tuple[Cyclotomic, Cyclotomic]]


class GroupKind(str, Enum):
    """Nature d'un élément du groupe diédral."""

    ROTATION = "rotation"
    REFLECTION = "reflection"


@dataclass(frozen=True, slots=True)
class GroupElement:
    """Rotation c^k ou réflexion s_k, indice réduit modulo d."""

    kind: GroupKind
    index: int
    d: int

    def __post_init__(self) -> None:
        if self.d < 1:
            raise ValueError(f"dihedral order parameter must be positive, got {self.d}")
        object.__setattr__(self, "kind", GroupKind(self.kind))
        object.__setattr__(self, "index", self.index % self.d)

    # ─────────────────────────────────────────────────────────────────────────
    # Constructeurs
    # ─────────────────────────────────────────────────────────────────────────

    @classmethod
    def identity(cls, d: int) -> GroupElement:
        return cls(GroupKind.ROTATION, 0, d)

    @classmethod
    def rotation(cls, k: int, d: int) -> GroupElement:
        return cls(GroupKind.ROTATION, k, d)

    @classmethod
    def reflection(cls, i: int, d: int) -> GroupElement:
        return cls(GroupKind.REFLECTION, i, d)

    @property
    def is_identity(self) -> bool:
        return self.kind is GroupKind.ROTATION and self.index == 0

    @property
    def is_reflection(self) -> bool:
        return self.kind is GroupKind.REFLECTION

    # ─────────────────────────────────────────────────────────────────────────
    # Loi de groupe
    # ─────────────────────────────────────────────────────────────────────────

    def __mul__(self, other: GroupElement) -> GroupElement:
        return compose(self, other)

    def inverse(self) -> GroupElement:
        if self.is_reflection:
            return self
        return GroupElement.rotation(-self.index, self.d)

    def matrix(self) -> Matrix2:
        """Matrice 2×2 sur Q(ζ_{2d}) ; s_i = (0 ζ^i / ζ^{-i} 0), c^k = diag(ζ^k, ζ^{-k})."""
        m = 2 * self.d
        zero = Cyclotomic.zero(m)
        i = self.index
        if self.is_reflection:
            return ((zero, root_power(m, i)), (root_power(m, -i), zero))
        return ((root_power(m, i), zero), (zero, root_power(m, -i)))

    def monomial_map(self) -> MonomialMap:
        """Action sur les variables (convention colonne) : s_i x = ζ^{-i} y, s_i X = ζ^i Y."""
        return _monomial_map(self)

    def sort_key(self) -> tuple[int, int]:
        return (1 if self.is_reflection else 0, self.index)

    def render(self) -> str:
        if self.is_identity:
            return "1"
        if self.is_reflection:
            return f"s[{self.index}]"
        return f"c[{self.index}]"

    def __str__(self) -> str:
        return self.render()


@lru_cache(maxsize=None)
def compose(g: GroupElement, h: GroupElement) -> GroupElement:
    """Produit gh : s_i s_j = c^{i-j}, c^k s_j = s_{j+k}, s_j c^k = s_{j-k}, c^k c^l = c^{k+l}."""
    if g.d != h.d:
        raise ValueError(f"cannot compose elements of orders {2 * g.d} and {2 * h.d}")
    d = g.d
    if g.is_reflection and h.is_reflection:
        return GroupElement.rotation(g.index - h.index, d)
    if g.is_reflection:
        return GroupElement.reflection(g.index - h.index, d)
    if h.is_reflection:
        return GroupElement.reflection(h.index + g.index, d)
    return GroupElement.rotation(g.index + h.index, d)


@lru_cache(maxsize=None)
def _monomial_map(g: GroupElement) -> MonomialMap:
    i = g.index
    if g.is_reflection:
        return ((1, -2 * i), (0, 2 * i), (3, 2 * i), (2, -2 * i))
    return ((0, 2 * i), (1, -2 * i), (2, -2 * i), (3, 2 * i))


def apply_monomial_map(
    mapping: MonomialMap, exps: tuple[int, int, int, int]
) -> tuple[tuple[int, int, int, int], int]:
    """Image d'un monôme : nouveaux exposants et puissance de z en facteur."""
    new = [0, 0, 0, 0]
    shift = 0
    for var, e in enumerate(exps):
        if e:
            target, power = mapping[var]
            new[target] += e
            shift += e * power
    return (new[0], new[1], new[2], new[3]), shift


def elements(d: int) -> list[GroupElement]:
    """Les 2d éléments, rotations puis réflexions."""
    return [GroupElement.rotation(k, d) for k in range(d)] + [
        GroupElement.reflection(i, d) for i in range(d)
    ]


def reflections(d: int) -> list[GroupElement]:
    return [GroupElement.reflection(i, d) for i in range(d)]


def longest_element(d: int) -> GroupElement:
    """w_0 = t(st)^{(d-1)/2} si d impair, (st)^{d/2} si d pair, avec s = s_0 et t = s_1."""
    if d < 1:
        raise ValueError(f"d must be positive, got {d}")
    s = GroupElement.reflection(0, d)
    t = GroupElement.reflection(1, d)
    st = s * t
    result = t if d % 2 else GroupElement.identity(d)
    for _ in range(d // 2):
        result = result * st
    return result


# ═══════════════════════════════════════════════════════════════════════════════
# Automorphisme de diagramme τ
# ═══════════════════════════════════════════════════════════════════════════════


def tau_conjugate(g: GroupElement) -> GroupElement:
    """τ g τ^{-1} : s_i ↦ s_{1-i}, c^k ↦ c^{-k}."""
    if g.is_reflection:
        return GroupElement.reflection(1 - g.index, g.d)
    return GroupElement.rotation(-g.index, g.d)


def tau_matrix(d: int) -> Matrix2:
    """τ = (0 √ζ / √ζ^{-1} 0) avec √ζ = ζ_{2d}."""
    m = 2 * d
    zero = Cyclotomic.zero(m)
    return ((zero, root_power(m, 1, half=True)), (root_power(m, -1, half=True), zero))


# x ↦ √ζ^{-1} y, y ↦ √ζ x, X ↦ √ζ Y, Y ↦ √ζ^{-1} X
TAU_MONOMIAL_MAP: MonomialMap = ((1, -1), (0, 1), (3, 1), (2, -1))


def tau_fixed_subgroup(d: int) -> list[GroupElement]:
    """Éléments de W fixés par la conjugaison par τ."""
    return [g for g in elements(d) if tau_conjugate(g) == g]


# ═══════════════════════════════════════════════════════════════════════════════
# Auto-tests de convention
# ═══════════════════════════════════════════════════════════════════════════════


def matmul(left: Matrix2, right: Matrix2) -> Matrix2:
    return (
        (
            left[0][0] * right[0][0] + left[0][1] * right[1][0],
            left[0][0] * right[0][1] + left[0][1] * right[1][1],
        ),
        (
            left[1][0] * right[0][0] + left[1][1] * right[1][0],
            left[1][0] * right[0][1] + left[1][1] * right[1][1],
        ),
    )


def check_group_law(d: int) -> list[str]:
    """Compare compose au produit matriciel sur les (2d)² couples ; retourne les écarts."""
    failures = []
    group = elements(d)
    for g in group:
        for h in group:
            if (g * h).matrix() != matmul(g.matrix(), h.matrix()):
                failures.append(f"{g.render()}*{h.render()}")
    return failures


def check_monomial_maps(d: int) -> list[str]:
    """Vérifie que les substitutions monomiales sont lues sur les matrices (convention colonne)."""
    failures = []
    m = 2 * d
    for g in elements(d):
        matrix = g.matrix()
        inverse = g.inverse().matrix()
        mapping = g.monomial_map()
        for var in range(4):
            target, power = mapping[var]
            image = [Cyclotomic.zero(m)] * 4
            image[target] = root_power(m, power, half=True)
            if var < 2:
                expected = [matrix[0][var], matrix[1][var]]
                got = image[:2]
            else:
                expected = [inverse[var - 2][0], inverse[var - 2][1]]
                got = image[2:]
            if expected != got:
                failures.append(f"{g.render()} on variable {var}")
    return failures


def check_action_law(d: int) -> list[str]:
    """act(g, act(h, v)) = act(gh, v) sur les quatre variables."""
    failures = []
    m = 2 * d
    group = elements(d)
    basis = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]
    for g in group:
        for h in group:
            for exps in basis:
                inner, s1 = apply_monomial_map(h.monomial_map(), exps)
                outer, s2 = apply_monomial_map(g.monomial_map(), inner)
                direct, s3 = apply_monomial_map((g * h).monomial_map(), exps)
                if outer != direct or (s1 + s2 - s3) % m:
                    failures.append(f"{g.render()},{h.render()} on {exps}")
    return failures
