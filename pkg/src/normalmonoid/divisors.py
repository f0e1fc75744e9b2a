"""Minimal primes and divisorial decompositions of principal ideals.

Everything here works in canonical 1-based generator indices. A prime is
named by the generators it is generated by: pairs (y, z) and, for two
relations, triples (t, v, x). Ranges over empty blocks simply produce
nothing, so primes and factors indexed by a missing generator never appear.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import exact_linalg as linalg
from .criteria import CanonicalOneRelator, CanonicalTwoRelator


class FreeGenerator(ValueError):
    pass


@dataclass(frozen=True, order=True)
class MinimalPrime:
    label: tuple[int, ...]

    @property
    def generator_set(self) -> frozenset[int]:
        return frozenset(self.label)

    @property
    def is_triple(self) -> bool:
        return len(self.label) == 3

    def __str__(self) -> str:
        return "P_" + ",".join(map(str, self.label))


DivisorDecomposition = dict  # MinimalPrime -> multiplicity >= 1


@dataclass(frozen=True)
class DivisorData:
    primes: tuple[MinimalPrime, ...]
    matrix: linalg.Matrix  # rows = primes, columns = canonical generators
    ncols: int

    def row(self, prime: MinimalPrime) -> list[int]:
        return self.matrix[self.primes.index(prime)]

    def to_dict(self) -> dict:
        return {"primes": [list(p.label) for p in self.primes], "matrix": self.matrix}


def _rng(lo: int, hi: int) -> range:
    """1-based inclusive range lo..hi (empty when hi < lo)."""
    return range(lo, hi + 1)


def _add(dec: dict, label: tuple[int, ...], mult: int) -> None:
    p = MinimalPrime(label)
    dec[p] = dec.get(p, 0) + mult


# ---------------------------------------------------------------------------
# one relation

def minimal_primes_one_relator(c: CanonicalOneRelator) -> list[MinimalPrime]:
    return [MinimalPrime((y, z)) for y in _rng(1, c.k) for z in _rng(c.k + 1, c.n)]


def principal_decomposition_one_relator(c: CanonicalOneRelator, w: int) -> DivisorDecomposition:
    if not 1 <= w <= c.n:
        raise FreeGenerator(f"generator {w} is not in the relation")
    dec: dict = {}
    if w > c.k:
        for y in _rng(1, c.k):
            _add(dec, (y, w), 1)
    else:
        for z in _rng(c.k + 1, c.n):
            _add(dec, (w, z), c.exponent(z))
    return dec


# ---------------------------------------------------------------------------
# two relations

def minimal_primes_two_relator(c: CanonicalTwoRelator) -> list[MinimalPrime]:
    """Triples first (lexicographic), then pairs (lexicographic)."""
    k1, k2, k3, k4, k5 = c.k
    n = c.n
    triples = set()
    for t in _rng(1, k1):
        for v in list(_rng(k1 + 1, k2)) + list(_rng(k3 + 1, k4)):
            for x in _rng(k5 + 1, n):
                triples.add((t, v, x))
    for t in _rng(k2 + 1, k3):
        for v in _rng(k1 + 1, k2):
            for x in _rng(k5 + 1, n):
                triples.add((t, v, x))
    pairs = {(y, z) for y in _rng(k2 + 1, k3) for z in _rng(k3 + 1, k4)}
    pairs |= {(y, z) for y in _rng(k4 + 1, k5) for z in _rng(k5 + 1, n)}
    return [MinimalPrime(t) for t in sorted(triples)] + [MinimalPrime(p) for p in sorted(pairs)]


def principal_decomposition_two_relator(c: CanonicalTwoRelator, w: int) -> DivisorDecomposition:
    """Decomposition of S u_w, by the block w lies in."""
    k1, k2, k3, k4, k5 = c.k
    n = c.n
    a, b = c.av, c.bv
    dec: dict = {}
    if not 1 <= w <= n:
        raise FreeGenerator(f"generator {w} is not in the relations")
    if k1 < w <= k2:
        for l in _rng(k5 + 1, n):
            for m in list(_rng(1, k1)) + list(_rng(k2 + 1, k3)):
                _add(dec, (m, w, l), 1)
    elif k3 < w <= k4:
        for l in _rng(k5 + 1, n):
            for m in _rng(1, k1):
                _add(dec, (m, w, l), 1)
        for m in _rng(k2 + 1, k3):
            _add(dec, (m, w), 1)
    elif k4 < w <= k5:
        for l in _rng(k5 + 1, n):
            _add(dec, (w, l), 1)
    elif w <= k1:
        for l in _rng(k5 + 1, n):
            for m in list(_rng(k1 + 1, k2)) + list(_rng(k3 + 1, k4)):
                _add(dec, (w, m, l), a(m))
    elif k2 < w <= k3:
        for l in _rng(k5 + 1, n):
            for m in _rng(k1 + 1, k2):
                _add(dec, (w, m, l), a(m))
        for m in _rng(k3 + 1, k4):
            _add(dec, (w, m), a(m))
    else:  # k5 < w <= n
        for l in _rng(1, k1):
            for m in list(_rng(k1 + 1, k2)) + list(_rng(k3 + 1, k4)):
                _add(dec, (l, m, w), a(m) * a(l))
        for m in _rng(k1 + 1, k2):
            for l in list(_rng(1, k1)) + list(_rng(k2 + 1, k3)):
                _add(dec, (l, m, w), b(m))
        for l in _rng(k4 + 1, k5):
            _add(dec, (l, w), a(l))
    return dec


def divisor_matrix(primes: Sequence[MinimalPrime], decompositions: Sequence[DivisorDecomposition]
                   ) -> DivisorData:
    """Rows follow ``primes``; column j is the decomposition of generator j+1."""
    index = {p: i for i, p in enumerate(primes)}
    m = linalg.zeros(len(primes), len(decompositions))
    for j, dec in enumerate(decompositions):
        for p, mult in dec.items():
            if p not in index:
                raise ValueError(f"{p} is not among the listed minimal primes")
            m[index[p]][j] = mult
    return DivisorData(tuple(primes), m, len(decompositions))


def divisor_data_one_relator(c: CanonicalOneRelator) -> DivisorData:
    primes = minimal_primes_one_relator(c)
    decs = [principal_decomposition_one_relator(c, w) for w in _rng(1, c.n)]
    return divisor_matrix(primes, decs)


def divisor_data_two_relator(c: CanonicalTwoRelator) -> DivisorData:
    primes = minimal_primes_two_relator(c)
    decs = [principal_decomposition_two_relator(c, w) for w in _rng(1, c.n)]
    return divisor_matrix(primes, decs)


def prime_count_two_relator(c: CanonicalTwoRelator) -> int:
    """Closed-form number of minimal primes."""
    k1, k2, k3, k4, k5 = c.k
    n = c.n
    return ((k3 - k2) * (k4 - k3) + (k5 - k4) * (n - k5)
            + k1 * (k4 - k3 + k2 - k1) * (n - k5) + (k3 - k2) * (k2 - k1) * (n - k5))
