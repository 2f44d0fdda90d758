"""Dense exact linear algebra over the rationals (Fraction entries).

Small and deterministic: row-reduce with the first usable pivot, so the
same input always yields the same echelon form and kernel basis.
"""

from __future__ import annotations

from fractions import Fraction


def rref(rows, ncols: int):
    """Reduced row echelon form.  Returns (echelon rows, pivot columns)."""
    m = [[Fraction(x) for x in row] for row in rows]
    for row in m:
        if len(row) != ncols:
            raise ValueError("ragged matrix")
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows, ncols: int) -> int:
    return len(rref(rows, ncols)[1])


def kernel_basis(rows, ncols: int) -> list[tuple[Fraction, ...]]:
    """Basis of the right kernel {x : rows @ x = 0}, one vector per free
    column, in increasing column order."""
    m, pivots = rref(rows, ncols)
    pivset = set(pivots)
    basis = []
    for fc in range(ncols):
        if fc in pivset:
            continue
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -m[r][fc]
        basis.append(tuple(v))
    return basis


def independent_subset(rows, ncols: int) -> list[int]:
    """Indices of a maximal linearly independent subset of the rows
    (greedy: the earliest rows win)."""
    echelon: list[tuple[int, list[Fraction]]] = []
    kept = []
    for i, row in enumerate(rows):
        r = [Fraction(x) for x in row]
        if len(r) != ncols:
            raise ValueError("ragged matrix")
        for pc, prow in echelon:
            if r[pc] != 0:
                f = r[pc]
                r = [a - f * b for a, b in zip(r, prow)]
        pc = next((j for j, x in enumerate(r) if x != 0), None)
        if pc is not None:
            pv = r[pc]
            echelon.append((pc, [x / pv for x in r]))
            kept.append(i)
    return kept


def dot(a, b) -> Fraction:
    return sum((Fraction(x) * Fraction(y) for x, y in zip(a, b)), Fraction(0))


def vec_add(a, b):
    return tuple(Fraction(x) + Fraction(y) for x, y in zip(a, b))


def vec_sub(a, b):
    return tuple(Fraction(x) - Fraction(y) for x, y in zip(a, b))


def vec_scale(c, a):
    c = Fraction(c)
    return tuple(c * Fraction(x) for x in a)


def is_zero_vec(a) -> bool:
    return all(x == 0 for x in a)
