"""Exact integer-matrix algebra: Smith/Hermite normal forms, subgroup
membership with witnesses, and invariant factors of quotients Z^n / L.

All arithmetic is arbitrary-precision Python int; subgroups are given by
generator matrices whose *rows* span the subgroup.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative dimensions")
        if len(self.entries) != self.rows:
            raise ValueError("row count does not match entries")
        ents = tuple(tuple(int(x) for x in row) for row in self.entries)
        for row in ents:
            if len(row) != self.cols:
                raise ValueError("ragged rows")
        object.__setattr__(self, "entries", ents)

    @classmethod
    def from_rows(cls, rows, cols: int | None = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise ValueError("cannot infer column count of an empty matrix")
            cols = len(rows[0])
        return cls(len(rows), cols, tuple(tuple(r) for r in rows))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch in matrix product")
        ot = other.transpose().entries
        prod = tuple(
            tuple(sum(a * b for a, b in zip(row, col)) for col in ot) for row in self.entries
        )
        return IntMatrix(self.rows, other.cols, prod)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            self.cols, self.rows,
            tuple(tuple(row[j] for row in self.entries) for j in range(self.cols)),
        )

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)


def determinant(M: IntMatrix) -> int:
    """Exact determinant via fraction-free Gaussian elimination (Bareiss)."""
    if M.rows != M.cols:
        raise ValueError("determinant needs a square matrix")
    n = M.rows
    if n == 0:
        return 1
    a = [list(r) for r in M.entries]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def is_unimodular(M: IntMatrix) -> bool:
    return M.rows == M.cols and determinant(M) in (1, -1)


def inverse_unimodular(M: IntMatrix) -> IntMatrix:
    """Inverse of a square integer matrix with det +-1 (again integral)."""
    if M.rows != M.cols:
        raise ValueError("inverse needs a square matrix")
    n = M.rows
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(M.entries)]
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            raise ValueError("matrix is singular")
        a[c], a[p] = a[p], a[c]
        pv = a[c][c]
        a[c] = [x / pv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    inv = [row[n:] for row in a]
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("matrix is not unimodular")
    return IntMatrix.from_rows([[int(x) for x in row] for row in inv], n)


# --- Smith normal form -----------------------------------------------------

def _swap_rows(a, u, i, j):
    a[i], a[j] = a[j], a[i]
    u[i], u[j] = u[j], u[i]


def _swap_cols(a, v, i, j):
    for row in a:
        row[i], row[j] = row[j], row[i]
    for row in v:
        row[i], row[j] = row[j], row[i]


def _row_sub(a, u, i, j, q):
    # row_i -= q * row_j
    a[i] = [x - q * y for x, y in zip(a[i], a[j])]
    u[i] = [x - q * y for x, y in zip(u[i], u[j])]


def _col_sub(a, v, i, j, q):
    # col_i -= q * col_j
    for row in a:
        row[i] -= q * row[j]
    for row in v:
        row[i] -= q * row[j]


def _negate_row(a, u, i):
    a[i] = [-x for x in a[i]]
    u[i] = [-x for x in u[i]]


def smith_normal_form(M: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (U, D, V) with U*M*V = D, U and V unimodular, D diagonal with
    d_1 | d_2 | ... and nonzero diagonal entries positive."""
    m, n = M.rows, M.cols
    a = [list(row) for row in M.entries]
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    v = [[int(i == j) for j in range(n)] for i in range(n)]

    t = 0
    while t < min(m, n):
        # bring a smallest-magnitude nonzero entry of the block to (t, t)
        piv = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] != 0 and (piv is None or abs(a[i][j]) < abs(a[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        _swap_rows(a, u, t, piv[0])
        _swap_cols(a, v, t, piv[1])
        while True:
            if a[t][t] < 0:
                _negate_row(a, u, t)
            # clear column t by row operations; smaller remainders become pivot
            restart = False
            for i in range(t + 1, m):
                if a[i][t] != 0:
                    q = a[i][t] // a[t][t]
                    _row_sub(a, u, i, t, q)
                    if a[i][t] != 0:
                        _swap_rows(a, u, t, i)
                        restart = True
                        break
            if restart:
                continue
            # clear row t by column operations
            for j in range(t + 1, n):
                if a[t][j] != 0:
                    q = a[t][j] // a[t][t]
                    _col_sub(a, v, j, t, q)
                    if a[t][j] != 0:
                        _swap_cols(a, v, t, j)
                        restart = True
                        break
            if restart:
                continue
            # enforce divisibility: pivot must divide every remaining entry
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a[i][j] % a[t][t] != 0:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            _row_sub(a, u, t, bad, -1)  # row_t += row_bad, then re-clear
        t += 1

    D = IntMatrix.from_rows(a, n)
    return IntMatrix.from_rows(u, m), D, IntMatrix.from_rows(v, n)


def invariant_factors(M: IntMatrix) -> list[int]:
    """Nonzero diagonal entries of the Smith form, in divisibility order."""
    _, d, _ = smith_normal_form(M)
    return [d.entries[i][i] for i in range(min(M.rows, M.cols)) if d.entries[i][i] != 0]


# --- Hermite form (row style) ---------------------------------------------

def hermite_normal_form(M: IntMatrix) -> IntMatrix:
    """Row-echelon Hermite form of the row span: pivots positive, entries
    above a pivot reduced into [0, pivot); zero rows dropped."""
    a = [list(row) for row in M.entries]
    m, n = M.rows, M.cols
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, m):
            if a[i][c] != 0 and (piv is None or abs(a[i][c]) < abs(a[piv][c])):
                piv = i
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        while True:
            done = True
            for i in range(r + 1, m):
                if a[i][c] != 0:
                    q = a[i][c] // a[r][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    if a[i][c] != 0:
                        a[r], a[i] = a[i], a[r]
                        done = False
                        break
            if done:
                break
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
        for i in range(r):
            q = a[i][c] // a[r][c]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == m:
            break
    rows = [row for row in a[:r]]
    return IntMatrix.from_rows(rows, n) if rows else IntMatrix.zeros(0, n)


def row_rank(M: IntMatrix) -> int:
    return hermite_normal_form(M).rows


# --- quotient structure and membership -------------------------------------

def quotient_structure(ambient_rank: int, generators: IntMatrix) -> tuple[int, list[int]]:
    """Invariant-factor shape of Z^ambient_rank / rowspan(generators):
    (free_rank, torsion_orders) with each order >= 2 and orders forming a
    divisibility chain."""
    if generators.cols != ambient_rank:
        raise ValueError(
            f"generators have {generators.cols} columns, ambient rank is {ambient_rank}")
    facs = invariant_factors(generators)
    torsion = [d for d in facs if d > 1]
    return ambient_rank - len(facs), torsion


def membership(generators: IntMatrix, x) -> tuple[bool, tuple[int, ...] | None]:
    """Is the integer vector x in the row span of `generators`?

    Returns (True, coefficients) with coefficients @ generators == x, or
    (False, None).
    """
    x = tuple(int(c) for c in x)
    if len(x) != generators.cols:
        raise ValueError("vector length does not match generator columns")
    m, n = generators.rows, generators.cols
    if m == 0:
        return (all(c == 0 for c in x), () if all(c == 0 for c in x) else None)
    u, d, v = smith_normal_form(generators)
    # solve b @ D = x @ V, then coefficients = b @ U
    xv = [sum(x[i] * v.entries[i][j] for i in range(n)) for j in range(n)]
    b = [0] * m
    for j in range(n):
        dj = d.entries[j][j] if j < m else 0
        if dj == 0:
            if xv[j] != 0:
                return False, None
        else:
            if xv[j] % dj != 0:
                return False, None
            b[j] = xv[j] // dj
    coeffs = tuple(sum(b[i] * u.entries[i][j] for i in range(m)) for j in range(m))
    return True, coeffs


def mod2_rank(M: IntMatrix) -> int:
    """Rank of M over GF(2)."""
    pivots: dict[int, int] = {}  # lowest set bit -> reduced row
    for row in M.entries:
        bits = sum(1 << j for j, x in enumerate(row) if x & 1)
        while bits:
            low = bits & -bits
            if low in pivots:
                bits ^= pivots[low]
            else:
                pivots[low] = bits
                break
    return len(pivots)
