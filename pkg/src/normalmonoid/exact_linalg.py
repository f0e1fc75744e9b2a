"""Exact integer matrix algebra.

Matrices are plain lists of row lists holding Python ints, so every
computation is exact and intermediate growth is never an issue.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = list[list[int]]


def zeros(rows: int, cols: int) -> Matrix:
    return [[0] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = 1
    return m


def copy(a: Sequence[Sequence[int]]) -> Matrix:
    return [list(map(int, row)) for row in a]


def shape(a: Sequence[Sequence[int]], cols: int | None = None) -> tuple[int, int]:
    """Return (rows, cols). ``cols`` disambiguates matrices with no rows."""
    if not a:
        return 0, cols or 0
    return len(a), len(a[0])


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    assert all(len(row) == inner for row in a), "shape mismatch"
    return [[sum(row[k] * b[k][j] for k in range(inner)) for j in range(cols)]
            for row in a]


def transpose(a: Sequence[Sequence[int]], cols: int | None = None) -> Matrix:
    _, c = shape(a, cols)
    return [[row[j] for row in a] for j in range(c)]


def det(a: Sequence[Sequence[int]]) -> int:
    """Determinant by fraction-free Bareiss elimination."""
    m = copy(a)
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def rank(a: Sequence[Sequence[int]]) -> int:
    """Rank over the rationals."""
    m = [[Fraction(x) for x in row] for row in a]
    r = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def content(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def primitive(v: Sequence[int]) -> list[int]:
    g = content(v)
    return [x // g for x in v] if g > 1 else list(v)


@dataclass(frozen=True)
class AbelianGroupInvariants:
    """Z^free_rank x Z/t1 x Z/t2 x ... with t1 | t2 | ..., all ti >= 2."""

    free_rank: int = 0
    torsion: tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        t = tuple(int(x) for x in self.torsion)
        for i, x in enumerate(t):
            if x < 2:
                raise ValueError(f"torsion factor {x} < 2")
            if i and x % t[i - 1]:
                raise ValueError(f"torsion {t} violates divisibility")
        object.__setattr__(self, "torsion", t)

    @classmethod
    def from_cyclic(cls, free_rank: int, moduli: Sequence[int]) -> "AbelianGroupInvariants":
        """Canonicalize Z^free_rank x (Z/m1) x ... x (Z/mk), any moduli >= 0.

        A modulus 0 is an extra Z summand and 1 is dropped.
        """
        moduli = [abs(int(m)) for m in moduli]
        extra_free = sum(1 for m in moduli if m == 0)
        nz = [m for m in moduli if m]
        diag = [[m if i == j else 0 for j in range(len(nz))] for i, m in enumerate(nz)]
        factors = invariant_factors(diag) if nz else []
        return cls(free_rank + extra_free, tuple(f for f in factors if f > 1))

    def __mul__(self, other: "AbelianGroupInvariants") -> "AbelianGroupInvariants":
        return AbelianGroupInvariants.from_cyclic(
            self.free_rank + other.free_rank, self.torsion + other.torsion)

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " x ".join(parts) if parts else "0"

    def to_dict(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    @classmethod
    def from_dict(cls, d: dict) -> "AbelianGroupInvariants":
        return cls(d["free_rank"], tuple(d["torsion"]))


def smith_normal_form(a: Sequence[Sequence[int]], cols: int | None = None
                      ) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form of an integer matrix.

    Returns (U, D, V) with U @ A @ V == D, U and V unimodular and D diagonal
    with nonnegative entries d1 | d2 | ... (zeros last).

    Pivots are chosen as the nonzero entry of least absolute value in the
    remaining block, ties going to the smallest (row, col), so the output is
    deterministic.
    """
    m, n = shape(a, cols)
    d = copy(a)
    u = identity(m)
    v = identity(n)

    def swap_rows(i, j):
        if i != j:
            d[i], d[j] = d[j], d[i]
            u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        if i != j:
            for row in d:
                row[i], row[j] = row[j], row[i]
            for row in v:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row[dst] += q * row[src]
        d[dst] = [x + q * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):
        for row in d:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = d[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = d[t][t]
            dirty = False
            for i in range(t + 1, m):
                if d[i][t]:
                    add_row(i, t, -(d[i][t] // p))
                    if d[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if d[t][j]:
                    add_col(j, t, -(d[t][j] // p))
                    if d[t][j]:
                        dirty = True
            if not dirty:
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                            if d[i][j] % p), None)
                if bad is None:
                    break
                add_row(t, bad[0], 1)
                continue
            best = None
            for i in range(t, m):
                x = d[i][t]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, "r")
            for j in range(t, n):
                x = d[t][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), j, "c")
            if best[2] == "r":
                swap_rows(t, best[1])
            else:
                swap_cols(t, best[1])
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return u, d, v


def invariant_factors(a: Sequence[Sequence[int]], cols: int | None = None) -> list[int]:
    """Nonzero diagonal of the Smith normal form, in divisibility order."""
    _, d, _ = smith_normal_form(a, cols)
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0)) if d[i][i]]


def cokernel_invariants(a: Sequence[Sequence[int]], cols: int | None = None
                        ) -> AbelianGroupInvariants:
    """Invariants of Z^rows / (column lattice of A)."""
    rows, _ = shape(a, cols)
    factors = invariant_factors(a, cols)
    return AbelianGroupInvariants(rows - len(factors), tuple(f for f in factors if f > 1))


def kernel_basis(a: Sequence[Sequence[int]], cols: int | None = None) -> Matrix:
    """Lattice basis of {x in Z^cols : A x = 0}, returned as matrix columns.

    The result has ``cols`` rows and one column per basis vector.
    """
    _, n = shape(a, cols)
    if not a:
        return identity(n)
    _, d, v = smith_normal_form(a)
    r = sum(1 for i in range(min(len(d), n)) if d[i][i])
    basis = [[v[i][j] for j in range(r, n)] for i in range(n)]
    # Hermite-reduce so the basis is canonical.
    return hermite_form(basis, n - r) if n - r else [[] for _ in range(n)]


def hermite_form(a: Sequence[Sequence[int]], cols: int | None = None) -> Matrix:
    """Column-style Hermite normal form H = A @ V with V unimodular.

    H is in column echelon form: the pivot of each nonzero column sits strictly
    below the pivot of the previous one, pivots are positive and entries to the
    left of a pivot are reduced into [0, pivot). Zero columns come last.
    """
    m, n = shape(a, cols)
    h = copy(a)
    col = 0
    for i in range(m):
        if col >= n:
            break
        # gcd-combine columns col..n-1 on row i
        while True:
            nz = [j for j in range(col, n) if h[i][j]]
            if not nz:
                break
            j0 = min(nz, key=lambda j: (abs(h[i][j]), j))
            if j0 != col:
                for row in h:
                    row[col], row[j0] = row[j0], row[col]
            done = True
            for j in range(col + 1, n):
                if h[i][j]:
                    q = h[i][j] // h[i][col]
                    for row in h:
                        row[j] -= q * row[col]
                    if h[i][j]:
                        done = False
            if done:
                break
        if col < n and h[i][col]:
            if h[i][col] < 0:
                for row in h:
                    row[col] = -row[col]
            p = h[i][col]
            for j in range(col):
                q = h[i][j] // p
                if q:
                    for row in h:
                        row[j] -= q * row[col]
            col += 1
    return h


def solve_rational(a: Sequence[Sequence[int]], b: Sequence[int]) -> list[Fraction] | None:
    """Some solution x of A x = b over Q, or None if inconsistent."""
    m = len(a)
    n = len(a[0]) if a else 0
    aug = [[Fraction(x) for x in row] + [Fraction(bb)] for row, bb in zip(a, b)]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        pv = aug[r][c]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    if any(aug[i][n] != 0 for i in range(r, m)):
        return None
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = aug[i][n]
    return x
