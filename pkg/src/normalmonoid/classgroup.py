"""Divisor class groups: closed formulas and Smith-form reduction."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from functools import reduce

from . import exact_linalg as linalg
from .criteria import (CanonicalOneRelator, CanonicalTwoRelator, canonicalize_one_relator,
                       canonicalize_two_relator, is_normal)
from .divisors import (DivisorData, divisor_data_one_relator, divisor_data_two_relator,
                       prime_count_two_relator)
from .exact_linalg import AbelianGroupInvariants
from .presentation import Presentation, Relation, normalize


class NotNormalInput(Exception):
    pass


def _gcd(values) -> int:
    values = list(values)
    assert values, "gcd over an empty list"
    return reduce(gcd, values)


def class_group_formula_one(c: CanonicalOneRelator) -> AbelianGroupInvariants:
    """Z^{k(n-k)-(n-1)} x (Z/d)^{k-1} with d = gcd(a_{k+1}, ..., a_n)."""
    k, n = c.k, c.n
    d = _gcd(c.a)
    return AbelianGroupInvariants.from_cyclic(k * (n - k) - (n - 1), [d] * (k - 1))


@dataclass(frozen=True)
class TwoRelatorParameters:
    f: int
    d1: int
    d1_copies: int
    d2: int
    d2_copies: int

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def two_relator_parameters(c: CanonicalTwoRelator) -> TwoRelatorParameters:
    k1, k2, k3, k4, k5 = c.k
    n = c.n
    a, b = c.av, c.bv
    f = prime_count_two_relator(c) - (n - 2)
    d1_terms = [a(i) for i in range(k1 + 1, k2 + 1)] + [a(i) for i in range(k3 + 1, k4 + 1)]
    d1 = _gcd(d1_terms)
    if k2 < k3:
        d2_terms = ([a(t) * d1 for t in range(1, k1 + 1)]
                    + [b(v) for v in range(k1 + 1, k2 + 1)]
                    + [a(y) for y in range(k4 + 1, k5 + 1)])
    else:
        d2_terms = ([a(t) * a(v) + b(v) for t in range(1, k1 + 1) for v in range(k1 + 1, k2 + 1)]
                    + [a(t) * a(v) for t in range(1, k1 + 1) for v in range(k3 + 1, k4 + 1)]
                    + [a(y) for y in range(k4 + 1, k5 + 1)])
    d2 = _gcd(d2_terms)
    return TwoRelatorParameters(f, d1, k1 + k3 - k2 - 1, d2, n - k5 - 1)


def class_group_formula_two(c: CanonicalTwoRelator) -> AbelianGroupInvariants:
    """Z^f x (Z/d1)^{k1+k3-k2-1} x (Z/d2)^{n-k5-1}."""
    q = two_relator_parameters(c)
    if q.f < 0 or q.d1_copies < 0:
        raise ValueError(f"formula parameters out of range: {q}")
    return AbelianGroupInvariants.from_cyclic(
        q.f, [q.d1] * q.d1_copies + [q.d2] * q.d2_copies)


def class_group_from_matrix(d: DivisorData, gof_rank: int | None = None) -> AbelianGroupInvariants:
    """Cokernel of the divisor matrix (primes x principal generators).

    ``gof_rank``, when given, is checked against the rank of the principal
    divisor lattice.
    """
    if gof_rank is not None and d.matrix:
        r = linalg.rank(d.matrix)
        if r != gof_rank:
            raise ValueError(f"principal divisors span rank {r}, expected {gof_rank}")
    return linalg.cokernel_invariants(d.matrix, d.ncols)


@dataclass(frozen=True)
class ClassGroupReport:
    formula: AbelianGroupInvariants
    matrix_route: AbelianGroupInvariants
    kind: str  # free | one | disjoint | two
    parameters: dict = field(default_factory=dict)
    canonical: tuple = ()  # canonical forms used (one or two)
    divisors: tuple = ()  # DivisorData per canonical form

    @property
    def agree(self) -> bool:
        return self.formula == self.matrix_route

    def to_dict(self) -> dict:
        return {"formula": self.formula.to_dict(), "matrix_route": self.matrix_route.to_dict(),
                "agree": self.agree, "kind": self.kind, "parameters": self.parameters,
                "text": str(self.formula)}


def one_relator_report(c: CanonicalOneRelator) -> tuple[AbelianGroupInvariants,
                                                         AbelianGroupInvariants, DivisorData]:
    dd = divisor_data_one_relator(c)
    return class_group_formula_one(c), class_group_from_matrix(dd, c.n - 1), dd


def two_relator_report(c: CanonicalTwoRelator) -> tuple[AbelianGroupInvariants,
                                                         AbelianGroupInvariants, DivisorData]:
    dd = divisor_data_two_relator(c)
    return class_group_formula_two(c), class_group_from_matrix(dd, c.n - 2), dd


def _one_params(c: CanonicalOneRelator) -> dict:
    return {"k": c.k, "n": c.n, "d": _gcd(c.a), "d_copies": c.k - 1,
            "primes": c.k * (c.n - c.k)}


def class_group(p: Presentation) -> ClassGroupReport:
    """Class group of a normal positive monoid by formula and by matrix."""
    v = is_normal(p)
    if not v.normal:
        raise NotNormalInput(f"verdict is {v.status}")
    q = p if p.normalized else normalize(p)
    trivial = AbelianGroupInvariants()
    if not q.relations:
        return ClassGroupReport(trivial, trivial, "free")
    if len(q.relations) == 1:
        c = canonicalize_one_relator(q)
        f, m, dd = one_relator_report(c)
        return ClassGroupReport(f, m, "one", _one_params(c), (c,), (dd,))
    r1, r2 = q.relations
    if not (r1.support() & r2.support()):
        parts = []
        for r in (r1, r2):
            sub = _restrict(q, r)
            c = canonicalize_one_relator(sub)
            parts.append((c, *one_relator_report(c)))
        formula = parts[0][1] * parts[1][1]
        # block-diagonal divisor matrix of the product
        m1, m2 = parts[0][3], parts[1][3]
        block = [row + [0] * m2.ncols for row in m1.matrix] + \
                [[0] * m1.ncols + row for row in m2.matrix]
        matrix = linalg.cokernel_invariants(block, m1.ncols + m2.ncols)
        params = {"factors": [_one_params(pc[0]) for pc in parts]}
        return ClassGroupReport(formula, matrix, "disjoint", params,
                                tuple(pc[0] for pc in parts), tuple(pc[3] for pc in parts))
    c = canonicalize_two_relator(q)
    f, m, dd = two_relator_report(c)
    params = two_relator_parameters(c).to_dict()
    params["primes"] = len(dd.primes)
    return ClassGroupReport(f, m, "two", params, (c,), (dd,))


def _restrict(q: Presentation, r: Relation) -> Presentation:
    """The one-relator factor on the support of ``r``."""
    used = sorted(r.support())
    pos = {g: i for i, g in enumerate(used)}
    return Presentation(tuple(q.generators[g] for g in used),
                        (Relation(r.lhs.remap(pos), r.rhs.remap(pos)),), True)
