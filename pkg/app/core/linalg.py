"""
Algèbre linéaire rationnelle exacte.
Élimination de Gauss sans fractions (Bareiss) sur des lignes mises à l'échelle entière.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from fractions import Fraction

Number = int | Fraction


def _integer_row(row: Sequence[Number]) -> list[int]:
    """Multiplie une ligne par le ppcm de ses dénominateurs."""
    lcm = 1
    for value in row:
        den = Fraction(value).denominator
        lcm = lcm * den // math.gcd(lcm, den)
    return [int(Fraction(value) * lcm) for value in row]


def echelon_form(rows: Sequence[Sequence[Number]]) -> tuple[list[list[int]], list[int]]:
    """
    Forme échelonnée entière par élimination sans fractions.

    Returns:
        La matrice échelonnée et la liste des colonnes pivots.
    """
    matrix = [_integer_row(row) for row in rows]
    if not matrix:
        return [], []
    n_rows = len(matrix)
    n_cols = len(matrix[0])
    pivots: list[int] = []
    previous = 1
    piv_r = 0
    for piv_c in range(n_cols):
        if piv_r == n_rows:
            break
        for i_row in range(piv_r, n_rows):
            if matrix[i_row][piv_c] != 0:
                break
        else:
            continue
        if i_row != piv_r:
            matrix[piv_r], matrix[i_row] = matrix[i_row], matrix[piv_r]
        pivot_row = matrix[piv_r]
        fp = pivot_row[piv_c]
        for r in range(piv_r + 1, n_rows):
            row = matrix[r]
            fr = row[piv_c]
            for c in range(piv_c + 1, n_cols):
                row[c] = (fp * row[c] - fr * pivot_row[c]) // previous
            row[piv_c] = 0
        # division exacte : les entrées restantes sont des mineurs de la matrice initiale
        previous = fp
        pivots.append(piv_c)
        piv_r += 1
    return matrix, pivots


def rank(rows: Sequence[Sequence[Number]]) -> int:
    """Rang exact d'une matrice rationnelle."""
    if not rows or not rows[0]:
        return 0
    return len(echelon_form(rows)[1])


def solve(matrix: Sequence[Sequence[Number]], rhs: Sequence[Number]) -> list[Fraction] | None:
    """
    Résout matrix · sol = rhs exactement.

    Les variables libres sont fixées à zéro ; retourne None si le système est incompatible.
    """
    n_rows = len(matrix)
    if n_rows != len(rhs):
        raise ValueError("right-hand side length does not match the matrix")
    n_cols = len(matrix[0]) if n_rows else 0
    if n_rows == 0:
        return [Fraction(0)] * n_cols
    augmented = [list(row) + [value] for row, value in zip(matrix, rhs)]
    echelon, pivots = echelon_form(augmented)
    if pivots and pivots[-1] == n_cols:
        return None
    sol = [Fraction(0)] * n_cols
    for r in range(len(pivots) - 1, -1, -1):
        piv_c = pivots[r]
        row = echelon[r]
        s = Fraction(-row[n_cols])
        for c in range(piv_c + 1, n_cols):
            if row[c]:
                s += row[c] * sol[c]
        sol[piv_c] = -s / row[piv_c]
    return sol


def nullity(rows: Sequence[Sequence[Number]], n_cols: int) -> int:
    """Dimension du noyau (à droite)."""
    if not rows:
        return n_cols
    return n_cols - rank(rows)
