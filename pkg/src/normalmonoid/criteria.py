"""Combinatorial normality criteria and canonical block forms.

One relation ``w1 = w2`` (disjoint supports) gives a normal positive monoid
exactly when one side is squarefree. For two independent relations
``w1 = w2``, ``w3 = w4`` the test is the list of support/Hsupp conditions
(3a)-(3d); all side and relation labelings are tried, so the verdict does not
depend on how the user wrote the relations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .presentation import NotSupported, Presentation, Relation, Word, normalize


class CanonicalizationFailed(Exception):
    pass


NORMAL_POSITIVE = "NormalPositive"
NOT_NORMAL = "NotNormal"
NOT_CANCELLATIVE = "NotCancellative"
NOT_APPLICABLE = "NotApplicable"

STATUSES = (NORMAL_POSITIVE, NOT_NORMAL, NOT_CANCELLATIVE, NOT_APPLICABLE)
CONDITIONS = ("3a", "3b", "3c", "3d")


@dataclass(frozen=True)
class NormalityVerdict:
    status: str
    failed_condition: str | None = None
    witness: str | None = None

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status}")
        if (self.failed_condition is not None) != (self.status == NOT_NORMAL):
            raise ValueError("failed_condition must be set exactly for NotNormal")
        if self.failed_condition is not None and self.failed_condition not in CONDITIONS:
            raise ValueError(f"unknown condition {self.failed_condition}")

    @property
    def normal(self) -> bool:
        return self.status == NORMAL_POSITIVE

    def to_dict(self) -> dict:
        return {"status": self.status, "failed_condition": self.failed_condition,
                "witness": self.witness}

    @classmethod
    def from_dict(cls, d: dict) -> "NormalityVerdict":
        return cls(d["status"], d.get("failed_condition"), d.get("witness"))


def _names(p: Presentation | None, idx) -> str:
    if p is None:
        return "{" + ", ".join(f"u{i + 1}" for i in sorted(idx)) + "}"
    return "{" + ", ".join(p.generators[i] for i in sorted(idx)) + "}"


def is_normal_one_relator(r: Relation, p: Presentation | None = None) -> NormalityVerdict:
    """Normal positive iff one side of the (disjoint) relation is squarefree."""
    h1, h2 = r.lhs.hsupp(), r.rhs.hsupp()
    if not h1 or not h2:
        return NormalityVerdict(NORMAL_POSITIVE)
    return NormalityVerdict(
        NOT_NORMAL, "3b",
        f"both sides have repeated generators: {_names(p, h1)} and {_names(p, h2)}")


# ---------------------------------------------------------------------------
# two relations

def labelings(r1: Relation, r2: Relation):
    """All 8 assignments (w1, w2, w3, w4) up to relation order and side swaps."""
    for first, second in ((r1, r2), (r2, r1)):
        for a in (first, first.flipped()):
            for b in (second, second.flipped()):
                yield a.lhs, a.rhs, b.lhs, b.rhs


def _failed_condition(w: Sequence[Word]) -> str | None:
    """First of 3a..3d violated by the labeled words, or None."""
    s = [x.support() for x in w]
    h = [x.hsupp() for x in w]
    if s[0] & s[1] or s[2] & s[3]:
        return "3a"
    if h[0] and h[1]:
        return "3b"
    if h[2] and h[3]:
        return "3c"
    cross = {(i, j) for i in (0, 1) for j in (2, 3) if s[i] & s[j]}
    if not cross:
        return None
    if (0, 2) not in cross:
        return "3d"
    if cross == {(0, 2)} and (not h[1] or not h[3]):
        return None
    # second alternative: w2 meets w3 and w4 is isolated and squarefree
    if (1, 2) in cross and not (s[3] & (s[0] | s[1] | s[2])) and not h[3]:
        return None
    return "3d"


def check_two_relator_conditions(p: Presentation) -> NormalityVerdict:
    if len(p.relations) != 2:
        return NormalityVerdict(
            NOT_APPLICABLE, witness=f"{len(p.relations)} relations, expected 2")
    r1, r2 = p.relations
    for w in labelings(r1, r2):
        if _failed_condition(w) is None:
            return NormalityVerdict(NORMAL_POSITIVE)
    ident = (r1.lhs, r1.rhs, r2.lhs, r2.rhs)
    failed = _failed_condition(ident)
    # a, b, c fail under every labeling; otherwise it is the overlap pattern
    return NormalityVerdict(NOT_NORMAL, failed, _explain(failed, ident, p))


def _explain(cond: str, w, p: Presentation) -> str:
    if cond == "3a":
        return "a relation has a generator on both sides"
    if cond in ("3b", "3c"):
        a, b = (w[0], w[1]) if cond == "3b" else (w[2], w[3])
        return (f"both sides of relation {1 if cond == '3b' else 2} repeat generators: "
                f"{_names(p, a.hsupp())} and {_names(p, b.hsupp())}")
    overlaps = []
    for i in (0, 1):
        for j in (2, 3):
            common = w[i].support() & w[j].support()
            if common:
                overlaps.append(f"w{i + 1}/w{j + 1} share {_names(p, common)}")
    return "no labeling satisfies the overlap condition (" + "; ".join(overlaps) + ")"


def is_normal(p: Presentation) -> NormalityVerdict:
    """Dispatch on the number of relations left after normalization."""
    try:
        q = p if p.normalized else normalize(p)
    except NotSupported as exc:
        return NormalityVerdict(NOT_APPLICABLE, witness=str(exc))
    if not q.relations:
        return NormalityVerdict(NORMAL_POSITIVE, witness=_conditional_note(q))
    if len(q.relations) == 1:
        v = is_normal_one_relator(q.relations[0], q)
    else:
        v = check_two_relator_conditions(q)
    if v.normal and q.conditional:
        return NormalityVerdict(NORMAL_POSITIVE, witness=_conditional_note(q))
    return v


def _conditional_note(q: Presentation) -> str | None:
    if q.conditional:
        return ("input relations share generators; verdict holds for the "
                "cancellative quotient (check with the cancellativity oracle)")
    return None


# ---------------------------------------------------------------------------
# canonical forms

@dataclass(frozen=True)
class CanonicalOneRelator:
    """``u1 ... uk = u_{k+1}^{a_{k+1}} ... u_n^{a_n}`` plus a free tail.

    ``a`` holds a_{k+1}..a_n; ``relabel[i]`` is the user name of canonical
    generator i+1 (relation part first, then the free tail).
    """

    n: int
    k: int
    a: tuple[int, ...]
    free_tail: int = 0
    relabel: tuple[str, ...] = ()

    def __post_init__(self):
        if not 1 <= self.k < self.n:
            raise ValueError("need 1 <= k < n")
        if len(self.a) != self.n - self.k or any(x < 1 for x in self.a):
            raise ValueError("need n-k exponents, all >= 1")
        if not self.relabel:
            object.__setattr__(self, "relabel", tuple(
                f"u{i + 1}" for i in range(self.n + self.free_tail)))
        if len(self.relabel) != self.n + self.free_tail:
            raise ValueError("relabel length mismatch")

    def exponent(self, i: int) -> int:
        """a_i for canonical 1-based index i > k."""
        return self.a[i - self.k - 1]

    def relation(self) -> Relation:
        lhs = Word(tuple((i, 1) for i in range(self.k)))
        rhs = Word(tuple((i, e) for i, e in zip(range(self.k, self.n), self.a)))
        return Relation(lhs, rhs)

    def presentation(self) -> Presentation:
        return Presentation(self.relabel, (self.relation(),))

    def to_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "a": list(self.a),
                "free_tail": self.free_tail, "relabel": list(self.relabel)}


@dataclass(frozen=True)
class CanonicalTwoRelator:
    """Block form with boundaries k1 <= k2 <= k3 <= k4 <= k5 < n::

        u_1..u_k1 u_{k2+1}..u_k3 = u_{k1+1}^a..u_k2^a u_{k3+1}^a..u_k4^a
        u_1^a..u_k1^a u_{k1+1}^b..u_k2^b u_{k4+1}^a..u_k5^a = u_{k5+1}..u_n

    ``a`` has k5 entries (a_1..a_k5); positions k2+1..k3 carry no exponent in
    the relations and are fixed at 1. ``b`` holds b_{k1+1}..b_k2.
    k1 = 0 (no generator on both squarefree-left sides) is accepted as an
    extension of the block shape; it needs k2 > 0.
    """

    k: tuple[int, int, int, int, int]
    n: int
    a: tuple[int, ...]
    b: tuple[int, ...]
    free_tail: int = 0
    relabel: tuple[str, ...] = ()

    def __post_init__(self):
        k1, k2, k3, k4, k5 = self.k
        if not (0 <= k1 <= k2 <= k3 <= k4 <= k5 < self.n):
            raise ValueError("block boundaries out of order")
        if k2 == 0:
            raise ValueError("relations share no generator")
        if self.n - k5 < 2:
            raise ValueError("need n - k5 >= 2")
        if k1 + k3 - k2 == 0 or (k2 - k1) + (k4 - k3) == 0:
            raise ValueError("first relation has an empty side")
        if len(self.a) != k5 or len(self.b) != k2 - k1:
            raise ValueError("exponent vector length mismatch")
        if any(x < 1 for x in self.a + self.b):
            raise ValueError("exponents must be >= 1")
        if any(self.a[i] != 1 for i in range(k2, k3)):
            raise ValueError("a_i for k2 < i <= k3 must be 1 (unused)")
        if not self.relabel:
            object.__setattr__(self, "relabel", tuple(
                f"u{i + 1}" for i in range(self.n + self.free_tail)))
        if len(self.relabel) != self.n + self.free_tail:
            raise ValueError("relabel length mismatch")

    @property
    def k1(self):
        return self.k[0]

    @property
    def k2(self):
        return self.k[1]

    @property
    def k3(self):
        return self.k[2]

    @property
    def k4(self):
        return self.k[3]

    @property
    def k5(self):
        return self.k[4]

    def av(self, i: int) -> int:
        """a_i, 1-based."""
        return self.a[i - 1]

    def bv(self, i: int) -> int:
        """b_i, 1-based, k1 < i <= k2."""
        return self.b[i - self.k1 - 1]

    def relations(self) -> tuple[Relation, Relation]:
        k1, k2, k3, k4, k5 = self.k
        r = lambda lo, hi: range(lo, hi + 1)  # noqa: E731  (1-based inclusive)
        l1 = {i - 1: 1 for i in list(r(1, k1)) + list(r(k2 + 1, k3))}
        r1 = {i - 1: self.av(i) for i in list(r(k1 + 1, k2)) + list(r(k3 + 1, k4))}
        l2 = {i - 1: self.av(i) for i in r(1, k1)}
        l2.update({i - 1: self.bv(i) for i in r(k1 + 1, k2)})
        l2.update({i - 1: self.av(i) for i in r(k4 + 1, k5)})
        r2 = {i - 1: 1 for i in r(k5 + 1, self.n)}
        return (Relation(Word.from_dict(l1), Word.from_dict(r1)),
                Relation(Word.from_dict(l2), Word.from_dict(r2)))

    def presentation(self) -> Presentation:
        return Presentation(self.relabel, self.relations())

    def to_dict(self) -> dict:
        return {"k": list(self.k), "n": self.n, "a": list(self.a), "b": list(self.b),
                "free_tail": self.free_tail, "relabel": list(self.relabel)}


def to_user(relations, order: Sequence[int]) -> tuple[Relation, ...]:
    """Map relations over canonical positions back to user generator indices."""
    back = dict(enumerate(order))
    return tuple(Relation(r.lhs.remap(back), r.rhs.remap(back)) for r in relations)


def canonicalize_one_relator(p: Presentation) -> CanonicalOneRelator:
    """Block form of a normalized one-relator presentation with a squarefree side.

    Among the admissible orientations the one with the smallest (k, a) wins;
    generators inside a block keep their user order.
    """
    if len(p.relations) != 1:
        raise CanonicalizationFailed("expected exactly one relation")
    r = p.relations[0]
    best = None
    for rel in (r, r.flipped()):
        if not rel.lhs.squarefree or not rel.lhs or not rel.rhs:
            continue
        left = sorted(rel.lhs.support())
        right = sorted(rel.rhs.support())
        a = tuple(rel.rhs[i] for i in right)
        key = (len(left), a)
        if best is None or key < best[0]:
            best = (key, left, right, a)
    if best is None:
        raise CanonicalizationFailed("no side of the relation is squarefree")
    _, left, right, a = best
    free = list(p.free_generators())
    order = left + right + free
    c = CanonicalOneRelator(len(left) + len(right), len(left), a, len(free),
                            tuple(p.generators[i] for i in order))
    if to_user((c.relation(),), order)[0] not in (r, r.flipped()):
        raise CanonicalizationFailed("re-expansion does not reproduce the relation")
    return c


def _two_relator_candidates(p: Presentation):
    r1, r2 = p.relations
    for first, second in ((r1, r2), (r2, r1)):
        for rel1 in (first, first.flipped()):
            for rel2 in (second, second.flipped()):
                L1, R1, L2, R2 = rel1.lhs, rel1.rhs, rel2.lhs, rel2.rhs
                if not L1.squarefree or not R2.squarefree:
                    continue
                s1 = rel1.support()
                sL2, sR2 = L2.support(), R2.support()
                if sR2 & s1:
                    continue
                sL1, sR1 = L1.support(), R1.support()
                blocks = [sorted(sL1 & sL2), sorted(sR1 & sL2), sorted(sL1 - sL2),
                          sorted(sR1 - sL2), sorted(sL2 - s1), sorted(sR2)]
                if not blocks[0] and not blocks[1]:
                    continue
                bounds = list(itertools.accumulate(len(b) for b in blocks))
                k = tuple(bounds[:5])
                n = bounds[5]
                if n - k[4] < 2:
                    continue
                a = tuple([L2[i] for i in blocks[0]] + [R1[i] for i in blocks[1]]
                          + [1] * len(blocks[2]) + [R1[i] for i in blocks[3]]
                          + [L2[i] for i in blocks[4]])
                b = tuple(L2[i] for i in blocks[1])
                order = [g for blk in blocks for g in blk]
                yield (k[0] == 0, k, n, a, b), order


def canonicalize_two_relator(p: Presentation) -> CanonicalTwoRelator:
    """Block form of a normalized two-relator presentation.

    Tries every relation order and side orientation; the lexicographically
    smallest (k1..k5, a, b) wins, preferring k1 > 0.
    """
    if len(p.relations) != 2:
        raise CanonicalizationFailed("expected exactly two relations")
    best = None
    for key, order in _two_relator_candidates(p):
        if best is None or key < best[0]:
            best = (key, order)
    if best is None:
        raise CanonicalizationFailed("no labeling fits the two-relation block shape")
    (_, k, n, a, b), order = best
    free = list(p.free_generators())
    c = CanonicalTwoRelator(k, n, a, b, len(free),
                            tuple(p.generators[i] for i in order + free))
    got = set(to_user(c.relations(), order))
    want = {r if r in got else r.flipped() for r in p.relations}
    if got != want:
        raise CanonicalizationFailed("re-expansion does not reproduce the relations")
    return c


def relations_share_generators(p: Presentation) -> bool:
    return len(p.relations) == 2 and bool(
        p.relations[0].support() & p.relations[1].support())
