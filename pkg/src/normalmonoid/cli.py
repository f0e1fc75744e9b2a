"""Command-line front end: analyze, verify, sweep."""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, field

from . import oracle
from .classgroup import ClassGroupReport, class_group
from .criteria import CanonicalOneRelator, NormalityVerdict, is_normal
from .divisors import (principal_decomposition_one_relator,
                       principal_decomposition_two_relator)
from .embedding import TorsionPresent, embed_one_relator, embed_via_fractions
from .presentation import (NotSupported, ParseError, Presentation, PresentationError,
                           normalize, parse_presentation)
from .sweep import rows_to_csv, run_sweep

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DISAGREE = 3
EXIT_RESOURCE = 4

REPORT_SCHEMA = 1
MAX_SWEEP_N = 8
MAX_SWEEP_EXP = 5


@dataclass
class AnalysisReport:
    """Everything ``analyze`` and ``verify`` know about one input.

    All fields hold JSON-native values so that a report survives a JSON
    round trip unchanged.
    """

    input: str
    generators: list
    normalized: str = ""
    trail: list = field(default_factory=list)
    verdict: dict = field(default_factory=dict)
    canonical: list = field(default_factory=list)
    embedding: dict | None = None
    minimal_primes: list = field(default_factory=list)
    decompositions: list = field(default_factory=list)
    class_group: dict | None = None
    oracle: dict | None = None
    disagreements: list = field(default_factory=list)
    schema: int = REPORT_SCHEMA

    def to_dict(self) -> dict:
        return json.loads(json.dumps(asdict(self)))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False)

    @classmethod
    def from_dict(cls, d: dict) -> "AnalysisReport":
        return cls(**d)

    @classmethod
    def from_json(cls, text: str) -> "AnalysisReport":
        return cls.from_dict(json.loads(text))

    @property
    def verdict_obj(self) -> NormalityVerdict:
        return NormalityVerdict.from_dict(self.verdict)

    def render_text(self) -> str:
        lines = [f"input: {self.input}"]
        if self.normalized:
            lines.append(f"normalized: {self.normalized}")
        for ev in self.trail:
            lines.append(f"  {ev['kind']}: {ev['detail']}")
        v = self.verdict
        line = f"verdict: {v.get('status')}"
        if v.get("failed_condition"):
            line += f" (failed condition {v['failed_condition']})"
        lines.append(line)
        if v.get("witness"):
            lines.append(f"  {v['witness']}")
        for c in self.canonical:
            lines.append("canonical: " + c["text"])
        if self.minimal_primes:
            lines.append(f"minimal primes: {len(self.minimal_primes)}")
        if self.class_group:
            lines.append(f"class group: {self.class_group['text']}")
        if self.oracle:
            for name, res in self.oracle.items():
                lines.append(f"oracle {name}: {res.get('summary', '')}")
        for d in self.disagreements:
            lines.append(f"DISAGREEMENT: {d}")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# building reports

def read_input(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    if os.path.exists(arg):
        with open(arg, encoding="utf-8") as fh:
            return fh.read()
    if "|" in arg or "\n" in arg:
        return arg
    raise ParseError(f"cannot read {arg!r}: no such file and not an inline presentation")


def _prime_names(label, names) -> list:
    return [names[i - 1] for i in label]


def _canonical_entry(c) -> dict:
    d = c.to_dict()
    d["kind"] = "one" if isinstance(c, CanonicalOneRelator) else "two"
    d["text"] = c.presentation().render_inline()
    return d


def analyze(text: str) -> tuple[AnalysisReport, Presentation, Presentation | None,
                                 ClassGroupReport | None]:
    """Run the combinatorial pipeline; raises ParseError on bad input."""
    p = parse_presentation(text)
    rep = AnalysisReport(input=p.render_inline(), generators=list(p.generators))
    try:
        q = normalize(p)
    except NotSupported:
        q = None
    if q is not None:
        rep.normalized = q.render_inline()
        rep.trail = [e.to_dict() for e in q.trail]
    v = is_normal(p)
    rep.verdict = v.to_dict()
    if not v.normal:
        return rep, p, q, None
    cg = class_group(q)
    rep.class_group = cg.to_dict()
    rep.canonical = [_canonical_entry(c) for c in cg.canonical]
    if not cg.agree:
        rep.disagreements.append(
            f"class group formula {cg.formula} != divisor matrix {cg.matrix_route}")
    if cg.kind == "one":
        rep.embedding = dict(embed_one_relator(cg.canonical[0]).to_dict(),
                             generators=list(cg.canonical[0].relabel), method="one-relator")
    else:
        try:
            rep.embedding = dict(embed_via_fractions(q).to_dict(),
                                 generators=list(q.generators), method="group-of-fractions")
        except TorsionPresent:
            rep.disagreements.append("NormalPositive verdict but the group has torsion")
    for c, dd in zip(cg.canonical, cg.divisors):
        names = c.relabel
        decomp = (principal_decomposition_one_relator if isinstance(c, CanonicalOneRelator)
                  else principal_decomposition_two_relator)
        for prime in dd.primes:
            rep.minimal_primes.append({"label": list(prime.label),
                                       "generators": _prime_names(prime.label, names)})
        for w in range(1, c.n + 1):
            dec = decomp(c, w)
            rep.decompositions.append({
                "generator": names[w - 1],
                "divisor": [{"prime": _prime_names(pr.label, names), "multiplicity": m}
                            for pr, m in sorted(dec.items())]})
    return rep, p, q, cg


def _oracle_cancel(rep, p, v, degree_bound):
    w = oracle.cancellativity_witness(p, degree_bound)
    out = {"degree_bound": degree_bound, "witness": None,
           "summary": f"no witness up to degree {degree_bound}"}
    if w is not None:
        out["witness"] = w.render(p.generators)
        out["summary"] = "witness " + out["witness"]
        out["combinatorial_verdict"] = v.to_dict()
        if v.normal and not _cancelled(p):
            rep.disagreements.append("cancellation witness for a NormalPositive verdict")
        # only the oracle can certify this status
        rep.verdict = NormalityVerdict("NotCancellative", None, out["witness"]).to_dict()
    return out


def _cancelled(p: Presentation) -> bool:
    try:
        return normalize(p).conditional
    except NotSupported:
        return False


def _oracle_normal(rep, q, v, degree_bound):
    if v.status == "NotApplicable" or q is None:
        return {"summary": "skipped: no criterion applies"}
    ov = oracle.oracle_normality(q)
    out = {"normal_positive": ov.normal_positive, "reason": ov.reason,
           "certificate": ov.certificate.to_dict() if ov.certificate else None,
           "summary": "normal positive" if ov.normal_positive else f"not normal ({ov.reason})"}
    if ov.normal_positive != v.normal:
        rep.disagreements.append(f"verdict {v.status} but Hilbert-basis oracle: {ov.reason}")
    if ov.normal_positive and ov.embedding is not None:
        cc = oracle.congruence_classes(q, degree_bound)
        clash = oracle.check_injective(cc, ov.embedding)
        out["injective_up_to"] = degree_bound
        if clash is not None:
            out["injective_up_to"] = None
            rep.disagreements.append(f"congruence classes {clash} share an image")
    return out


def _oracle_class(rep, q, cg):
    if cg is None:
        return {"summary": "skipped: not normal positive"}
    e = embed_via_fractions(q)
    group, val, fs = oracle.facet_valuation_class_group(e)
    out = {"class_group": group.to_dict(), "valuation_matrix": val,
           "facets": fs, "summary": str(group), "matches": []}
    if group != cg.formula:
        rep.disagreements.append(f"facet class group {group} != formula {cg.formula}")
    for c, dd in zip(cg.canonical, cg.divisors):
        cols = [q.index(c.relabel[j]) for j in range(c.n)]
        m = oracle.match_divisor_matrix(dd.primes, dd.matrix, cols, val)
        out["matches"].append({"ok": m.ok, "row_map": m.row_map, "message": m.message})
        if not m.ok:
            rep.disagreements.append("divisor matrix vs valuations: " + m.message)
    out["summary"] += f" ({len(fs)} facets)"
    return out


def verify(text: str, which: set, degree_bound: int) -> AnalysisReport:
    """Analyze, then run the requested oracles; ResourceLimit propagates with
    the partial report attached as ``exc.report``."""
    rep, p, q, cg = analyze(text)
    v = rep.verdict_obj
    rep.oracle = {}
    try:
        if "cancel" in which:
            rep.oracle["cancel"] = _oracle_cancel(rep, p, v, degree_bound)
        if "normal" in which:
            rep.oracle["normal"] = _oracle_normal(rep, q, v, degree_bound)
        if "class" in which:
            rep.oracle["class"] = _oracle_class(rep, q, cg)
    except oracle.ResourceLimit as exc:
        exc.report = rep
        raise
    return rep


# ---------------------------------------------------------------------------
# commands

def _emit(rep: AnalysisReport, as_json: bool, out) -> None:
    out.write(rep.to_json() + "\n" if as_json else rep.render_text())


def cmd_analyze(args, out=None, err=None) -> int:
    out, err = out or sys.stdout, err or sys.stderr
    try:
        rep, *_ = analyze(read_input(args.input))
    except (ParseError, PresentationError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_PARSE
    _emit(rep, args.json, out)
    return EXIT_DISAGREE if rep.disagreements else EXIT_OK


def cmd_verify(args, out=None, err=None) -> int:
    out, err = out or sys.stdout, err or sys.stderr
    which = {"cancel", "normal", "class"} if args.oracle == "all" else {args.oracle}
    try:
        rep = verify(read_input(args.input), which, args.degree_bound)
    except (ParseError, PresentationError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_PARSE
    except oracle.ResourceLimit as exc:
        rep = exc.report
        rep.oracle["error"] = {"kind": type(exc).__name__, "message": str(exc),
                               "summary": f"{type(exc).__name__}: {exc}"}
        _emit(rep, args.json, out)
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_RESOURCE
    _emit(rep, args.json, out)
    return EXIT_DISAGREE if rep.disagreements else EXIT_OK


def cmd_sweep(args, out=None, err=None) -> int:
    out, err = out or sys.stdout, err or sys.stderr
    bound = args.degree_bound if args.cancel else None
    rows = run_sweep(args.family, args.max_n, args.max_exp, cancel_bound=bound)
    text = rows_to_csv(rows, args.family, args.max_n, args.max_exp)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    bad = [r for r in rows if not r.agree]
    err.write(f"{len(rows)} instances, {len(bad)} disagreeing\n")
    for r in bad:
        err.write(f"  {r.params}: {'; '.join(r.notes)}\n")
    return EXIT_DISAGREE if bad else EXIT_OK


def _bounded(lo: int, hi: int):
    def conv(s: str) -> int:
        v = int(s)
        if not lo <= v <= hi:
            raise argparse.ArgumentTypeError(f"must be in {lo}..{hi}")
        return v
    return conv


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="normalmonoid",
        description="Normality and divisor class groups of monomial presentations.")
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="verdict, canonical form and class group")
    a.add_argument("input", help='file path, "-" for stdin, or an inline "gens | rels" string')
    a.add_argument("--json", action="store_true")
    a.set_defaults(func=cmd_analyze)

    v = sub.add_parser("verify", help="cross-check with brute-force oracles")
    v.add_argument("input")
    v.add_argument("--json", action="store_true")
    v.add_argument("--degree-bound", type=_bounded(1, 20), default=oracle.DEFAULT_DEGREE_BOUND)
    v.add_argument("--oracle", choices=["cancel", "normal", "class", "all"], default="all")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sweep", help="exhaustive check over a family of canonical forms")
    s.add_argument("--family", choices=["one", "two"], required=True)
    s.add_argument("--max-n", type=_bounded(2, MAX_SWEEP_N), required=True)
    s.add_argument("--max-exp", type=_bounded(1, MAX_SWEEP_EXP), default=2)
    s.add_argument("--out")
    s.add_argument("--cancel", action="store_true",
                   help="also search for cancellation failures on normal instances")
    s.add_argument("--degree-bound", type=_bounded(1, 20), default=oracle.DEFAULT_DEGREE_BOUND)
    s.set_defaults(func=cmd_sweep)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
