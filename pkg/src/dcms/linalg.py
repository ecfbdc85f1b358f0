"""Exact linear algebra over a Scalar field.

Matrices are lists of lists of Scalars.  Elimination is plain Gaussian
elimination over the fraction field; every pivot decision is an exact
zero test, so rank and nullity are exact for symbolic parameters (which
is what makes "generic parameter" statements checkable).
"""

from __future__ import annotations

from .exact import ParamField, Scalar


def _copy(mat):
    return [list(row) for row in mat]


def row_echelon(mat: list[list[Scalar]], field: ParamField):
    """Return (echelon form, pivot column list)."""
    m = _copy(mat)
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        pr = next((i for i in range(r, rows) if not m[i][c].is_zero()), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = field.one / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and not m[i][c].is_zero():
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(mat, field: ParamField) -> int:
    if not mat or not mat[0]:
        return 0
    return len(row_echelon(mat, field)[1])


def nullspace_dim(mat, field: ParamField) -> int:
    """Dimension of the right kernel."""
    if not mat:
        return 0
    return len(mat[0]) - rank(mat, field)


def nullspace_basis(mat, field: ParamField):
    """Basis of the right kernel as coordinate vectors."""
    if not mat:
        return []
    cols = len(mat[0])
    ech, pivots = row_echelon(mat, field)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [field.zero] * cols
        vec[fc] = field.one
        for r, pc in enumerate(pivots):
            vec[pc] = -ech[r][fc]
        basis.append(vec)
    return basis


def solve(mat, rhs, field: ParamField):
    """One solution of mat * x = rhs, or None when inconsistent."""
    if not mat:
        return [] if all(b.is_zero() for b in rhs) else None
    cols = len(mat[0])
    aug = [list(row) + [b] for row, b in zip(mat, rhs)]
    ech, pivots = row_echelon(aug, field)
    if cols in pivots:
        return None
    x = [field.zero] * cols
    for r, pc in enumerate(pivots):
        x[pc] = ech[r][cols]
    return x


def det(mat, field: ParamField) -> Scalar:
    n = len(mat)
    m = _copy(mat)
    sign = field.one
    result = field.one
    for c in range(n):
        pr = next((i for i in range(c, n) if not m[i][c].is_zero()), None)
        if pr is None:
            return field.zero
        if pr != c:
            m[c], m[pr] = m[pr], m[c]
            sign = -sign
        piv = m[c][c]
        result = result * piv
        inv = field.one / piv
        for i in range(c + 1, n):
            if not m[i][c].is_zero():
                f = m[i][c] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return result * sign
