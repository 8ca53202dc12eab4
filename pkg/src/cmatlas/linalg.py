"""Small exact matrix kernels used by the algebra layer.

* fraction-free (Bareiss) determinants of polynomial matrices;
* Gauss-Jordan inversion over Laurent rings, where pivots must be units.
"""

from __future__ import annotations

from typing import Optional, Sequence

from .polyring import Polynomial, PolyRing, divide_exact


class SingularMatrix(Exception):
    pass


def det_bareiss(matrix: Sequence[Sequence[Polynomial]], ring: PolyRing) -> Polynomial:
    """Exact determinant by fraction-free elimination.

    All intermediate divisions are exact in the polynomial ring (Bareiss
    invariant), so the result stays in the ring with no fraction field.
    """
    n = len(matrix)
    if n == 0:
        return ring.one()
    m = [list(row) for row in matrix]
    sign = 1
    prev = ring.one()
    for k in range(n - 1):
        if m[k][k].is_zero():
            for swap in range(k + 1, n):
                if not m[swap][k].is_zero():
                    m[k], m[swap] = m[swap], m[k]
                    sign = -sign
                    break
            else:
                return ring.zero()
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                value = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                quotient = divide_exact(value, prev)
                if quotient is None:  # pragma: no cover - Bareiss guarantees exactness
                    raise ArithmeticError("Bareiss division failed")
                m[i][j] = quotient
        prev = m[k][k]
    result = m[n - 1][n - 1]
    return result if sign == 1 else -result


def invert_unit_pivot(matrix: Sequence[Sequence[Polynomial]],
                      ring: PolyRing) -> Optional[list[list[Polynomial]]]:
    """Invert a matrix over a (Laurent) polynomial ring by Gauss-Jordan,
    requiring every pivot to be a unit of the ring.  Returns None when no
    unit pivot is available in some column (the matrix may still be
    invertible over the fraction field, but not constructively here)."""
    n = len(matrix)
    aug = [list(row) + [ring.one() if i == j else ring.zero()
                        for j in range(n)]
           for i, row in enumerate(matrix)]
    for col in range(n):
        pivot_row = None
        for row in range(col, n):
            if aug[row][col].is_unit():
                pivot_row = row
                break
        if pivot_row is None:
            return None
        aug[col], aug[pivot_row] = aug[pivot_row], aug[col]
        inv = aug[col][col].unit_inverse()
        aug[col] = [entry * inv for entry in aug[col]]
        for row in range(n):
            if row != col and not aug[row][col].is_zero():
                factor = aug[row][col]
                aug[row] = [a - factor * b for a, b in zip(aug[row], aug[col])]
    return [row[n:] for row in aug]


def mat_mul(a, b, ring: PolyRing):
    rows, inner, cols = len(a), len(b), len(b[0])
    out = [[ring.zero() for _ in range(cols)] for _ in range(rows)]
    for i in range(rows):
        for k in range(inner):
            if a[i][k].is_zero():
                continue
            for j in range(cols):
                if not b[k][j].is_zero():
                    out[i][j] = out[i][j] + a[i][k] * b[k][j]
    return out
