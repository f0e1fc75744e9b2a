"""Brute-force cross-checks that do not use the combinatorial criteria.

* bounded congruence enumeration of a presentation (word problem up to a
  degree bound) and a search for cancellation failures;
* the rational cone of an embedding: facets by double description, Hilbert
  basis from fundamental parallelepipeds, membership by bounded search;
* the class group from primitive facet functionals.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Sequence

from . import exact_linalg as linalg
from .embedding import Embedding, TorsionPresent, embed_via_fractions
from .exact_linalg import AbelianGroupInvariants
from .presentation import NotSupported, Presentation, Word, normalize

DEFAULT_DEGREE_BOUND = 8
MAX_RANK = 6


class ResourceLimit(Exception):
    pass


class DimensionTooLarge(ResourceLimit):
    pass


class MembershipSolveBound(ResourceLimit):
    pass


# ---------------------------------------------------------------------------
# congruence classes

@functools.lru_cache(maxsize=64)
def _words_up_to(n: int, d: int) -> tuple:
    """All exponent vectors of total degree <= d, increasing in ``_word_key``."""
    out = []
    for deg in range(d + 1):
        for combo in itertools.combinations_with_replacement(range(n), deg):
            v = [0] * n
            for i in combo:
                v[i] += 1
            out.append(tuple(v))
    return tuple(out)


@functools.lru_cache(maxsize=64)
def _codes_up_to(n: int, d: int, base: int) -> tuple:
    return tuple(_encode(v, base) for v in _words_up_to(n, d))


def _encode(v: Sequence[int], base: int) -> int:
    """Mixed-radix code; exact while every exponent stays below ``base``."""
    c = 0
    for x in reversed(v):
        c = c * base + x
    return c


def _word_key(v: Sequence[int]):
    # lower degree first, then more of the earlier generators first
    return sum(v), tuple(-x for x in v)


@dataclass
class CongruenceClasses:
    """Classes of words of degree <= bound, keyed by mixed-radix codes."""

    degree_bound: int
    ngens: int
    base: int
    codes: dict  # word code -> class id
    representatives: list  # class id -> least word vector (by _word_key)

    @property
    def count(self) -> int:
        return len(self.representatives)

    def encode(self, v: Sequence[int]) -> int:
        return _encode(v, self.base)

    def class_id(self, v: Sequence[int]) -> int:
        if sum(v) > self.degree_bound:
            raise KeyError(f"word {tuple(v)} is above the degree bound")
        return self.codes[self.encode(v)]

    def members(self, cid: int) -> list:
        return [w for w in _words_up_to(self.ngens, self.degree_bound)
                if self.codes[self.encode(w)] == cid]

    def same(self, x, y) -> bool:
        return self.class_id(x) == self.class_id(y)


def congruence_classes(p: Presentation, degree_bound: int = DEFAULT_DEGREE_BOUND,
                       max_words: int = 2_000_000) -> CongruenceClasses:
    """Partition words of degree <= D into classes of the relation congruence.

    Rewrites may pass through words of degree up to D plus the largest
    relation side degree.
    """
    n = p.ngens
    slack = max((max(r.lhs.degree(), r.rhs.degree()) for r in p.relations), default=0)
    ceiling = degree_bound + slack
    base = ceiling + 1
    moves = []
    for r in p.relations:
        for src, dst in ((r.lhs, r.rhs), (r.rhs, r.lhs)):
            sv, dv = src.vector(n), dst.vector(n)
            moves.append((src.items, _encode(dv, base) - _encode(sv, base),
                          tuple(b - a for a, b in zip(sv, dv)), dst.degree() - src.degree()))
    # words divisible by no relation side are classes of their own
    movable = set()
    for src, _, _, _ in moves:
        sv = [0] * n
        for i, e in src:
            sv[i] = e
        sc = _encode(sv, base)
        movable.update(sc + c for c in _codes_up_to(n, degree_bound - sum(sv), base))
    codes: dict = {}
    reps: list = []
    seen: set = set()
    visited = 0
    for w, wc in zip(_words_up_to(n, degree_bound), _codes_up_to(n, degree_bound, base)):
        if wc in codes:
            continue
        cid = len(reps)
        # every smaller word was already placed, so w is least in its class
        reps.append(w)
        if wc not in movable:
            codes[wc] = cid
            continue
        stack = [(w, wc, sum(w))]
        seen.add(wc)
        while stack:
            x, xc, dx = stack.pop()
            visited += 1
            if dx <= degree_bound:
                codes[xc] = cid
            for src, dcode, delta, ddeg in moves:
                dy = dx + ddeg
                if dy > ceiling:
                    continue
                for i, e in src:
                    if x[i] < e:
                        break
                else:
                    yc = xc + dcode
                    if yc not in seen:
                        seen.add(yc)
                        stack.append((tuple(map(int.__add__, x, delta)), yc, dy))
        if visited > max_words:
            raise ResourceLimit(f"more than {max_words} words visited")
    return CongruenceClasses(degree_bound, n, base, codes, reps)


@dataclass(frozen=True)
class CancellationWitness:
    """``g * x ~ g * y`` although ``x`` and ``y`` are not congruent."""

    g: Word
    x: Word
    y: Word

    def render(self, names) -> str:
        r = lambda w: w.render(names) or "1"  # noqa: E731
        return f"{r(self.g)}*{r(self.x)} = {r(self.g)}*{r(self.y)} but {r(self.x)} != {r(self.y)}"


def cancellativity_witness(p: Presentation, degree_bound: int = DEFAULT_DEGREE_BOUND,
                           classes: CongruenceClasses | None = None
                           ) -> CancellationWitness | None:
    """Search for a failure of cancellation among words of degree <= D.

    Cancelling products is reduced to cancelling single generators. ``None``
    means nothing was found up to the bound, not that S is cancellative.
    """
    cc = classes or congruence_classes(p, degree_bound)
    n = p.ngens
    codes = cc.codes
    words = _words_up_to(n, degree_bound - 1)
    wcodes = _codes_up_to(n, degree_bound - 1, cc.base)
    for g in range(n):
        first: dict = {}
        unit = cc.base ** g
        for j, xc in enumerate(wcodes):
            target = codes[xc + unit]
            if target in first:
                i = first[target]
                if codes[wcodes[i]] != codes[xc]:
                    return CancellationWitness(Word(((g, 1),)), Word.from_vector(words[i]),
                                               Word.from_vector(words[j]))
            else:
                first[target] = j
    return None


def check_injective(cc: CongruenceClasses, e: Embedding) -> tuple | None:
    """Two distinct classes with the same image, or None."""
    seen: dict = {}
    for cid, rep in enumerate(cc.representatives):
        img = e.image(rep)
        if img in seen:
            return cc.representatives[seen[img]], rep
        seen[img] = cid
    return None


# ---------------------------------------------------------------------------
# cones

def _dot(u, v) -> int:
    return sum(a * b for a, b in zip(u, v))


@dataclass
class ConeData:
    rank: int
    generators_images: list  # lattice points, presentation order
    facets: list  # primitive inner normals, sorted
    hilbert_basis: list = field(default_factory=list)

    def contains(self, v) -> bool:
        return all(_dot(f, v) >= 0 for f in self.facets)


def facets(points: Sequence[Sequence[int]], rank: int) -> list[list[int]]:
    """Primitive inner facet normals of cone(points) in Q^rank.

    Double description on the dual cone {y : <p, y> >= 0}. The cone must be
    full-dimensional; if it is not pointed the result spans less than
    ``rank`` dimensions (callers check).
    """
    pts = [list(p) for p in points if any(p)]
    basis = []
    for p in pts:
        if linalg.rank(basis + [p]) > len(basis):
            basis.append(p)
    if len(basis) < rank:
        raise ValueError("generator images do not span the ambient space")
    # initial rays: columns of basis^{-1}, scaled to primitive integers
    rays = []
    for j in range(rank):
        e = [1 if i == j else 0 for i in range(rank)]
        col = linalg.solve_rational(basis, e)
        den = 1
        for x in col:
            den = den * x.denominator // _gcd_int(den, x.denominator)
        rays.append(linalg.primitive([int(x * den) for x in col]))
    constraints = list(basis)
    for p in pts:
        if p in basis:
            continue
        vals = [_dot(p, r) for r in rays]
        pos = [r for r, v in zip(rays, vals) if v > 0]
        zero = [r for r, v in zip(rays, vals) if v == 0]
        neg = [(r, v) for r, v in zip(rays, vals) if v < 0]
        new = pos + zero
        if neg:
            pos_vals = [(r, v) for r, v in zip(rays, vals) if v > 0]
            zsets = {id(r): frozenset(i for i, c in enumerate(constraints) if _dot(c, r) == 0)
                     for r in rays}
            for rp, vp in pos_vals:
                for rn, vn in neg:
                    common = zsets[id(rp)] & zsets[id(rn)]
                    if len(common) < rank - 2:
                        continue
                    if linalg.rank([constraints[i] for i in common]) != rank - 2:
                        continue
                    comb = [vp * b - vn * a for a, b in zip(rp, rn)]
                    comb = linalg.primitive(comb)
                    if comb not in new:
                        new.append(comb)
        rays = new
        constraints.append(p)
    return sorted(rays)


def _gcd_int(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def _parallelepiped_points(cols: Sequence[Sequence[int]], rank: int) -> list[tuple[int, ...]]:
    """Lattice points sum(l_i b_i) with 0 <= l_i < 1 for the basis vectors cols."""
    bmat = linalg.transpose([list(c) for c in cols], rank)  # columns are b_i
    u, d, _ = linalg.smith_normal_form(bmat)
    diag = [d[i][i] for i in range(rank)]
    # coset representatives x = U^{-1} c
    uinv_cols = [linalg.solve_rational(u, [1 if i == j else 0 for i in range(rank)])
                 for j in range(rank)]
    binv_cols = [linalg.solve_rational(bmat, [1 if i == j else 0 for i in range(rank)])
                 for j in range(rank)]
    out = []
    for c in itertools.product(*(range(x) for x in diag)):
        x = [sum(int(uinv_cols[j][i]) * c[j] for j in range(rank)) for i in range(rank)]
        lam = [sum(binv_cols[j][i] * x[j] for j in range(rank)) for i in range(rank)]
        frac = [l_ - (l_.numerator // l_.denominator) for l_ in lam]
        pt = [sum(frac[i] * bmat[r][i] for i in range(rank)) for r in range(rank)]
        assert all(isinstance(v, int) or v.denominator == 1 for v in pt)
        out.append(tuple(int(v) for v in pt))
    return out


def hilbert_basis(points: Sequence[Sequence[int]], rank: int,
                  facet_list: Sequence[Sequence[int]] | None = None) -> list[tuple[int, ...]]:
    """Hilbert basis of cone(points) intersected with Z^rank (pointed cone)."""
    fs = facet_list if facet_list is not None else facets(points, rank)
    pts = [tuple(p) for p in points if any(p)]
    cands = set(pts)
    for sub in itertools.combinations(sorted(set(pts)), rank):
        if linalg.det([list(s) for s in sub]) == 0:
            continue
        for q in _parallelepiped_points(sub, rank):
            if any(q):
                cands.add(q)
    cands = sorted(cands)
    out = []
    for x in cands:
        reducible = False
        for c in cands:
            if c == x:
                continue
            diff = [a - b for a, b in zip(x, c)]
            if all(_dot(f, diff) >= 0 for f in fs):
                reducible = True
                break
        if not reducible:
            out.append(x)
    return out


def in_monoid(x: Sequence[int], gens: Sequence[Sequence[int]], grading: Sequence[int],
              max_nodes: int = 200_000) -> bool:
    """Is x a nonnegative integer combination of gens? Exhaustive search.

    ``grading`` must be strictly positive on every generator; it bounds the
    search depth by deg(x) / min deg(g).
    """
    gens = [tuple(g) for g in gens if any(g)]
    degs = [_dot(grading, g) for g in gens]
    if any(d <= 0 for d in degs):
        raise ValueError("grading is not positive on the generators")
    memo: dict = {}
    count = 0

    def rec(v) -> bool:
        nonlocal count
        if not any(v):
            return True
        if v in memo:
            return memo[v]
        count += 1
        if count > max_nodes:
            raise MembershipSolveBound(f"membership search exceeded {max_nodes} nodes")
        dv = _dot(grading, v)
        ok = False
        for g, dg in zip(gens, degs):
            if dg <= dv:
                w = tuple(a - b for a, b in zip(v, g))
                if rec(w):
                    ok = True
                    break
        memo[v] = ok
        return ok

    return rec(tuple(x))


@dataclass
class NormalityCertificate:
    normal: bool
    hilbert_basis: list
    outside: tuple | None = None  # element of (cone ∩ group) \ S when not normal
    reason: str | None = None

    def to_dict(self) -> dict:
        return {"normal": self.normal, "hilbert_basis": [list(h) for h in self.hilbert_basis],
                "outside": list(self.outside) if self.outside is not None else None,
                "reason": self.reason}


def cone_data(e: Embedding) -> ConeData:
    if e.ambient_rank > MAX_RANK:
        raise DimensionTooLarge(f"rank {e.ambient_rank} exceeds {MAX_RANK}")
    pts = [list(v) for v in e.images]
    fs = facets(pts, e.ambient_rank) if e.ambient_rank else []
    return ConeData(e.ambient_rank, pts, fs)


def hilbert_basis_normality(e: Embedding, p: Presentation | None = None) -> NormalityCertificate:
    """Is the monoid generated by the images equal to cone ∩ lattice?

    The lattice is Z^rank, which is the group generated by the images when
    ``e`` comes from embed_via_fractions.
    """
    if e.ambient_rank == 0:
        return NormalityCertificate(True, [])
    if any(not any(v) for v in e.images):
        return NormalityCertificate(False, [], None, "a generator maps to the identity")
    cd = cone_data(e)
    if linalg.rank(cd.facets) < e.ambient_rank:
        return NormalityCertificate(False, [], None, "cone is not pointed (nontrivial units)")
    hb = hilbert_basis(cd.generators_images, cd.rank, cd.facets)
    grading = [sum(col) for col in zip(*cd.facets)]
    for h in hb:
        if not in_monoid(h, cd.generators_images, grading):
            return NormalityCertificate(False, hb, h, "Hilbert basis element outside S")
    return NormalityCertificate(True, hb)


def facet_valuation_class_group(e: Embedding
                                ) -> tuple[AbelianGroupInvariants, linalg.Matrix, list]:
    """Class group from the primitive facet functionals.

    Returns (class group, valuation matrix rows=facets cols=generators, facets).
    """
    cd = cone_data(e)
    val = [[_dot(f, g) for g in cd.generators_images] for f in cd.facets]
    group = linalg.cokernel_invariants(cd.facets, cd.rank) if cd.facets else \
        AbelianGroupInvariants()
    return group, val, cd.facets


# ---------------------------------------------------------------------------
# combined checks

@dataclass
class OracleVerdict:
    normal_positive: bool
    reason: str
    certificate: NormalityCertificate | None = None
    embedding: Embedding | None = None


def oracle_normality(p: Presentation) -> OracleVerdict:
    """Decide normal positivity of the cancellative quotient by cone geometry."""
    try:
        q = p if p.normalized else normalize(p)
    except NotSupported as exc:
        return OracleVerdict(False, str(exc))
    try:
        e = embed_via_fractions(q)
    except TorsionPresent as exc:
        return OracleVerdict(False, str(exc))
    cert = hilbert_basis_normality(e, q)
    return OracleVerdict(cert.normal, cert.reason or "cone ∩ group is generated by S",
                         cert, e)


@dataclass
class MatrixMatch:
    ok: bool
    row_map: list  # divisor row i -> valuation row
    message: str = ""


def match_divisor_matrix(primes: Sequence, div_matrix: Sequence[Sequence[int]],
                         column_order: Sequence[int], valuation: Sequence[Sequence[int]]
                         ) -> MatrixMatch:
    """Match primes to facets by zero pattern and compare entries.

    ``column_order[j]`` is the valuation-matrix column of divisor column j.
    Facets positive only on columns outside ``column_order`` (free
    generators) are ignored; every other facet must be matched exactly once.
    """
    cols = list(column_order)
    relevant = [i for i, row in enumerate(valuation) if any(row[c] for c in cols)]
    row_map = []
    used = set()
    for pi, prime in enumerate(primes):
        pattern = {cols[j] for j, x in enumerate(div_matrix[pi]) if x}
        hits = [i for i in relevant
                if {c for c, x in enumerate(valuation[i]) if x} == pattern]
        if len(hits) != 1:
            return MatrixMatch(False, row_map,
                               f"{prime}: {len(hits)} facets share its zero pattern")
        i = hits[0]
        if i in used:
            return MatrixMatch(False, row_map, f"{prime}: facet {i} matched twice")
        used.add(i)
        got = [valuation[i][c] for c in cols]
        if got != list(div_matrix[pi]):
            return MatrixMatch(False, row_map,
                               f"{prime}: divisor row {list(div_matrix[pi])} != valuations {got}")
        row_map.append(i)
    if len(used) != len(relevant):
        return MatrixMatch(False, row_map,
                           f"{len(relevant)} facets but {len(primes)} minimal primes")
    return MatrixMatch(True, row_map)
