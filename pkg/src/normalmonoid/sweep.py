"""Exhaustive families of canonical presentations and per-instance checks."""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field

from . import oracle
from .classgroup import class_group, one_relator_report, two_relator_report
from .criteria import CanonicalOneRelator, CanonicalTwoRelator, is_normal
from .embedding import embed_via_fractions
from .presentation import Presentation, Relation, Word

CSV_SCHEMA_VERSION = 1


def one_relator_family(max_n: int, max_exp: int, min_n: int = 2):
    """Canonical ``u1..uk = u_{k+1}^a..u_n^a``, 1 <= k < n, exponents 1..max_exp."""
    for n in range(max(min_n, 2), max_n + 1):
        for k in range(1, n):
            for a in itertools.product(range(1, max_exp + 1), repeat=n - k):
                yield CanonicalOneRelator(n, k, a)


def general_one_relator_family(max_n: int, max_exp: int, min_n: int = 2):
    """``u1^c..uk^c = u_{k+1}^a..u_n^a`` with every exponent in 1..max_exp."""
    for n in range(max(min_n, 2), max_n + 1):
        names = tuple(f"u{i + 1}" for i in range(n))
        for k in range(1, n):
            for exps in itertools.product(range(1, max_exp + 1), repeat=n):
                lhs = Word(tuple((i, exps[i]) for i in range(k)))
                rhs = Word(tuple((i, exps[i]) for i in range(k, n)))
                yield Presentation(names, (Relation(lhs, rhs),))


def two_relator_shapes(max_n: int, allow_k1_zero: bool = False):
    for n in range(2, max_n + 1):
        for k in itertools.combinations_with_replacement(range(0, n), 5):
            k1, k2, k3, k4, k5 = k
            if (k1 < 1 and not allow_k1_zero) or k2 == 0 or n - k5 < 2:
                continue
            if k1 + k3 - k2 == 0 or (k2 - k1) + (k4 - k3) == 0:
                continue
            yield k, n


def two_relator_family(max_n: int, max_exp: int, allow_k1_zero: bool = False):
    """All block-shaped two-relator presentations with exponents in 1..max_exp.

    Instances where some relation side is a single generator with exponent
    one are skipped: those admit a presentation with one relation.
    """
    for k, n in two_relator_shapes(max_n, allow_k1_zero):
        k1, k2, k3, k4, k5 = k
        free_a = [i for i in range(1, k5 + 1) if not k2 < i <= k3]
        for exps in itertools.product(range(1, max_exp + 1), repeat=len(free_a) + k2 - k1):
            a = [1] * k5
            for i, e in zip(free_a, exps):
                a[i - 1] = e
            b = tuple(exps[len(free_a):])
            c = CanonicalTwoRelator(k, n, tuple(a), b)
            if any(len(w) == 1 and w.items[0][1] == 1 for r in c.relations()
                   for w in (r.lhs, r.rhs)):
                continue
            yield c


@dataclass
class SweepRow:
    family: str
    params: str
    presentation: str
    verdict: str
    oracle_normal: bool | None = None
    formula: str = ""
    matrix: str = ""
    facets: str = ""
    pipeline: str = ""
    primes: int = 0
    facet_count: int = 0
    free_rank_ok: bool = True
    matrix_match: bool = True
    cancel_witness: str = ""
    notes: list = field(default_factory=list)

    @property
    def agree(self) -> bool:
        return not self.notes

    def fields(self) -> list:
        return [self.family, self.params, self.presentation, self.verdict,
                "" if self.oracle_normal is None else str(self.oracle_normal).lower(),
                self.formula, self.matrix, self.facets, self.pipeline, self.primes,
                self.facet_count, str(self.free_rank_ok).lower(),
                str(self.matrix_match).lower(), self.cancel_witness,
                str(self.agree).lower(), "; ".join(self.notes)]


CSV_COLUMNS = ["family", "params", "presentation", "verdict", "oracle_normal", "formula",
               "matrix", "facets", "pipeline", "primes", "facet_count", "free_rank_ok",
               "matrix_match", "cancel_witness", "agree", "notes"]


def _params(c) -> str:
    if isinstance(c, CanonicalOneRelator):
        return f"n={c.n} k={c.k} a={','.join(map(str, c.a))}"
    return (f"n={c.n} k={','.join(map(str, c.k))} a={','.join(map(str, c.a))} "
            f"b={','.join(map(str, c.b))}")


def check_canonical(c, cancel_bound: int | None = None) -> SweepRow:
    """Run every route on a canonical form and record disagreements."""
    one = isinstance(c, CanonicalOneRelator)
    p = c.presentation()
    row = SweepRow("one" if one else "two", _params(c), p.render_inline(), "")
    v = is_normal(p)
    row.verdict = v.status
    ov = oracle.oracle_normality(p)
    row.oracle_normal = ov.normal_positive
    if v.normal != ov.normal_positive:
        row.notes.append(f"verdict {v.status} but oracle says {ov.reason}")
    if one:
        formula, matrix, dd = one_relator_report(c)
        pgrank = c.n - 1
    else:
        formula, matrix, dd = two_relator_report(c)
        pgrank = c.n - 2
    row.formula, row.matrix = str(formula), str(matrix)
    row.primes = len(dd.primes)
    if formula != matrix:
        row.notes.append(f"formula {formula} != matrix {matrix}")
    row.free_rank_ok = formula.free_rank == len(dd.primes) - pgrank
    if not row.free_rank_ok:
        row.notes.append(f"free rank {formula.free_rank} != primes {len(dd.primes)} - {pgrank}")
    e = embed_via_fractions(p)
    fgroup, val, fs = oracle.facet_valuation_class_group(e)
    row.facets = str(fgroup)
    row.facet_count = len(fs)
    if fgroup != formula:
        row.notes.append(f"facet class group {fgroup} != formula {formula}")
    m = oracle.match_divisor_matrix(dd.primes, dd.matrix, list(range(c.n)), val)
    row.matrix_match = m.ok
    if not m.ok:
        row.notes.append("divisor/valuation mismatch: " + m.message)
    if v.normal:
        rep = class_group(p)
        row.pipeline = str(rep.formula)
        if rep.formula != formula or not rep.agree:
            row.notes.append(f"pipeline class group {rep.formula}/{rep.matrix_route}")
    if cancel_bound is not None and v.normal:
        w = oracle.cancellativity_witness(p, cancel_bound)
        if w is not None:
            row.cancel_witness = w.render(p.generators)
            row.notes.append("cancellation witness " + row.cancel_witness)
    return row


def check_verdict(p: Presentation) -> SweepRow:
    """Criterion verdict against the Hilbert-basis oracle only."""
    row = SweepRow("one-general" if len(p.relations) == 1 else "two-general", "",
                   p.render_inline(), "")
    v = is_normal(p)
    row.verdict = v.status
    ov = oracle.oracle_normality(p)
    row.oracle_normal = ov.normal_positive
    if v.normal != ov.normal_positive:
        row.notes.append(f"verdict {v.status} but oracle: {ov.reason}")
    return row


def run_sweep(family: str, max_n: int, max_exp: int, cancel_bound: int | None = None,
              min_n: int = 2) -> list[SweepRow]:
    if family == "one":
        items = one_relator_family(max_n, max_exp, min_n)
    elif family == "two":
        items = (c for c in two_relator_family(max_n, max_exp) if c.n >= min_n)
    else:
        raise ValueError(f"unknown family {family!r}")
    return [check_canonical(c, cancel_bound) for c in items]


def rows_to_csv(rows, family: str, max_n: int, max_exp: int) -> str:
    buf = io.StringIO()
    buf.write(f"# normalmonoid sweep schema v{CSV_SCHEMA_VERSION} family={family} "
              f"max_n={max_n} max_exp={max_exp}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow(r.fields())
    return buf.getvalue()
