"""Monomial presentations of commutative monoids.

A presentation is a list of named generators together with relations
``word = word`` between monomials in those generators. Generators are
identified by name in the input and by index everywhere else.

Text format::

    gens: u1 u2 u3
    rel: u1 u2 = u3^2

or the one-line form ``"u1 u2 u3 | u1 u2 = u3^2 ; ..."``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Sequence

from . import exact_linalg as linalg

INT64_MAX = 2**63 - 1

NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


class PresentationError(Exception):
    pass


class ParseError(PresentationError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class NotSupported(PresentationError):
    pass


class ExponentOverflow(PresentationError):
    pass


def _check_exp(e: int) -> int:
    if e > INT64_MAX:
        raise ExponentOverflow(f"exponent {e} exceeds 64-bit range")
    return e


@dataclass(frozen=True, order=True)
class Word:
    """A monomial: sorted (generator index, exponent) pairs, exponents >= 1."""

    items: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        items = tuple(sorted((int(i), int(e)) for i, e in self.items if e))
        if any(e < 0 for _, e in items):
            raise ValueError("negative exponent")
        if len({i for i, _ in items}) != len(items):
            raise ValueError("repeated generator in word")
        for _, e in items:
            _check_exp(e)
        object.__setattr__(self, "items", items)

    @classmethod
    def from_dict(cls, exps: Mapping[int, int]) -> "Word":
        return cls(tuple(exps.items()))

    @classmethod
    def from_vector(cls, vec: Sequence[int]) -> "Word":
        return cls(tuple((i, e) for i, e in enumerate(vec) if e))

    @property
    def exponents(self) -> dict[int, int]:
        return dict(self.items)

    def __getitem__(self, i: int) -> int:
        for j, e in self.items:
            if j == i:
                return e
        return 0

    def __bool__(self) -> bool:
        return bool(self.items)

    def __len__(self) -> int:
        return len(self.items)

    def support(self) -> frozenset[int]:
        return frozenset(i for i, _ in self.items)

    def hsupp(self) -> frozenset[int]:
        return frozenset(i for i, e in self.items if e > 1)

    @property
    def squarefree(self) -> bool:
        return all(e == 1 for _, e in self.items)

    def radical(self) -> "Word":
        """The squarefree word with the same support."""
        return Word(tuple((i, 1) for i, _ in self.items))

    def degree(self) -> int:
        return sum(e for _, e in self.items)

    def vector(self, n: int) -> list[int]:
        v = [0] * n
        for i, e in self.items:
            v[i] = e
        return v

    def __mul__(self, other: "Word") -> "Word":
        d = self.exponents
        for i, e in other.items:
            d[i] = _check_exp(d.get(i, 0) + e)
        return Word.from_dict(d)

    def __pow__(self, k: int) -> "Word":
        return Word(tuple((i, _check_exp(e * k)) for i, e in self.items))

    def divides(self, other: "Word") -> bool:
        return all(other[i] >= e for i, e in self.items)

    def without(self, i: int) -> "Word":
        return Word(tuple(p for p in self.items if p[0] != i))

    def remap(self, mapping: Mapping[int, int]) -> "Word":
        return Word(tuple((mapping[i], e) for i, e in self.items))

    def render(self, names: Sequence[str]) -> str:
        return " ".join(names[i] if e == 1 else f"{names[i]}^{e}" for i, e in self.items)


def support(w: Word) -> frozenset[int]:
    return w.support()


def hsupp(w: Word) -> frozenset[int]:
    return w.hsupp()


@dataclass(frozen=True)
class Relation:
    lhs: Word
    rhs: Word

    def support(self) -> frozenset[int]:
        return self.lhs.support() | self.rhs.support()

    def flipped(self) -> "Relation":
        return Relation(self.rhs, self.lhs)

    def difference(self, n: int) -> list[int]:
        return [a - b for a, b in zip(self.lhs.vector(n), self.rhs.vector(n))]

    def render(self, names: Sequence[str]) -> str:
        return f"{self.lhs.render(names)} = {self.rhs.render(names)}"


@dataclass(frozen=True)
class TrailEvent:
    """One step of normalization, phrased in generator names."""

    kind: str  # cancel | drop | eliminate | dependent | free | units
    detail: str

    def to_dict(self) -> dict:
        return {"kind": self.kind, "detail": self.detail}


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relations: tuple[Relation, ...] = ()
    normalized: bool = False
    trail: tuple[TrailEvent, ...] = ()
    # name -> word over the *current* generators, for eliminated generators
    substitutions: tuple[tuple[str, Word], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relations", tuple(self.relations))
        if len(set(self.generators)) != len(self.generators):
            raise PresentationError("duplicate generator name")
        n = len(self.generators)
        for r in self.relations:
            for w in (r.lhs, r.rhs):
                if any(i >= n for i, _ in w.items):
                    raise PresentationError("relation uses unknown generator index")

    @property
    def ngens(self) -> int:
        return len(self.generators)

    @property
    def conditional(self) -> bool:
        """True when normalization cancelled common factors.

        Cancelling is only valid in a cancellative monoid, so every verdict on
        such an input holds for the cancellative quotient.
        """
        return any(e.kind == "cancel" for e in self.trail)

    def index(self, name: str) -> int:
        return self.generators.index(name)

    def relation_support(self) -> frozenset[int]:
        s = frozenset()
        for r in self.relations:
            s |= r.support()
        return s

    def free_generators(self) -> tuple[int, ...]:
        used = self.relation_support()
        return tuple(i for i in range(self.ngens) if i not in used)

    def relation_matrix(self) -> linalg.Matrix:
        return [r.difference(self.ngens) for r in self.relations]

    def render(self) -> str:
        lines = ["gens: " + " ".join(self.generators)]
        lines += ["rel: " + r.render(self.generators) for r in self.relations]
        return "\n".join(lines) + "\n"

    def render_inline(self) -> str:
        rels = " ; ".join(r.render(self.generators) for r in self.relations)
        return " ".join(self.generators) + " | " + rels

    def structure(self) -> tuple:
        """Generators and relations only, for equality ignoring provenance."""
        return self.generators, self.relations


# ---------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(r"\S+")


def _parse_term(tok: str, line: int, col: int) -> tuple[str, int]:
    name, _, exp = tok.partition("^")
    if not NAME_RE.match(name):
        raise ParseError(f"bad generator name {name!r}", line, col)
    if not _:
        return name, 1
    if not exp.isdigit():
        raise ParseError(f"bad exponent {exp!r}", line, col + len(name) + 1)
    e = int(exp)
    if e == 0:
        raise ParseError("zero exponent", line, col + len(name) + 1)
    if e > INT64_MAX:
        raise ParseError("exponent exceeds 64-bit range", line, col + len(name) + 1)
    return name, e


def _tokens(text: str, offset: int) -> list[tuple[str, int]]:
    out = []
    for m in _TOKEN_RE.finditer(text):
        tok = m.group()
        # split "a=b" style tokens around '='
        pos = m.start()
        for piece in re.split(r"(=)", tok):
            if piece:
                out.append((piece, offset + pos + 1))
            pos += len(piece)
    return out


def _parse_relation(body: str, offset: int, line: int, index: Mapping[str, int]) -> Relation:
    toks = _tokens(body, offset)
    eqs = [k for k, (t, _) in enumerate(toks) if t == "="]
    if len(eqs) != 1:
        col = toks[eqs[1]][1] if len(eqs) > 1 else offset + 1
        raise ParseError("relation needs exactly one '='", line, col)
    k = eqs[0]
    sides = []
    for part, col in ((toks[:k], offset + 1), (toks[k + 1:], toks[k][1] + 1)):
        if not part:
            raise ParseError("empty relation side", line, col)
        exps: dict[int, int] = {}
        for tok, c in part:
            name, e = _parse_term(tok, line, c)
            if name not in index:
                raise ParseError(f"unknown generator {name!r}", line, c)
            i = index[name]
            exps[i] = _check_exp(exps.get(i, 0) + e)
        sides.append(Word.from_dict(exps))
    return Relation(*sides)


def _parse_gens(body: str, offset: int, line: int) -> tuple[str, ...]:
    names = []
    for tok, col in _tokens(body, offset):
        if not NAME_RE.match(tok):
            raise ParseError(f"bad generator name {tok!r}", line, col)
        if tok in names:
            raise ParseError(f"duplicate generator {tok!r}", line, col)
        names.append(tok)
    if not names:
        raise ParseError("no generators declared", line, offset + 1)
    return tuple(names)


def parse_presentation(text: str) -> Presentation:
    """Parse the line-oriented format (``gens:`` then ``rel:`` lines).

    Blank lines and ``#`` comments are ignored. Falls back to the one-line
    ``gens | rel ; rel`` form when the text has no ``gens:`` header.
    """
    # a '#' starts a comment; cutting it off keeps column numbers intact
    lines = [ln.split("#", 1)[0] for ln in text.splitlines()]
    content = [(no, ln) for no, ln in enumerate(lines, 1) if ln.strip()]
    if content and not content[0][1].lstrip().startswith("gens:") and "|" in text:
        return parse_inline(" ".join(ln for _, ln in content))
    gens = None
    index: dict[str, int] = {}
    rels = []
    for no, ln in content:
        stripped = ln.lstrip()
        lead = len(ln) - len(stripped)
        head, sep, body = stripped.partition(":")
        offset = lead + len(head) + len(sep)
        if not sep or head not in ("gens", "rel"):
            raise ParseError("expected 'gens:' or 'rel:'", no, lead + 1)
        if head == "gens":
            if gens is not None:
                raise ParseError("second 'gens:' line", no, lead + 1)
            gens = _parse_gens(body, offset, no)
            index = {g: i for i, g in enumerate(gens)}
        else:
            if gens is None:
                raise ParseError("'rel:' before 'gens:'", no, lead + 1)
            rels.append(_parse_relation(body, offset, no, index))
    if gens is None:
        raise ParseError("missing 'gens:' line", 1, 1)
    return Presentation(gens, tuple(rels))


def parse_inline(text: str) -> Presentation:
    """Parse ``"a b c | a b = c^2 ; ..."``."""
    text = text.strip()
    head, sep, body = text.partition("|")
    if not sep:
        raise ParseError("expected '|' after generator list", 1, len(text) + 1)
    gens = _parse_gens(head, 0, 1)
    index = {g: i for i, g in enumerate(gens)}
    rels = []
    offset = len(head) + 1
    for chunk in body.split(";"):
        if chunk.strip():
            rels.append(_parse_relation(chunk, offset, 1, index))
        offset += len(chunk) + 1
    return Presentation(gens, tuple(rels))


# ---------------------------------------------------------------------------
# normalization

def _cancel(r: Relation) -> tuple[Relation, Word]:
    lhs, rhs = r.lhs.exponents, r.rhs.exponents
    common = {}
    for i in set(lhs) & set(rhs):
        m = min(lhs[i], rhs[i])
        common[i] = m
        lhs[i] -= m
        rhs[i] -= m
    return Relation(Word.from_dict(lhs), Word.from_dict(rhs)), Word.from_dict(common)


def _substitute(w: Word, i: int, by: Word) -> Word:
    e = w[i]
    if not e:
        return w
    return w.without(i) * (by ** e)


def _lattice_basis_relations(rels: Sequence[Relation], n: int) -> list[Relation]:
    """Relations whose difference vectors form a basis of the relation lattice."""
    rows = [r.difference(n) for r in rels]
    h = linalg.transpose(linalg.hermite_form(linalg.transpose(rows, n), len(rows)), n)
    out = []
    for row in h:
        if any(row):
            pos = Word.from_vector([max(x, 0) for x in row])
            neg = Word.from_vector([max(-x, 0) for x in row])
            out.append(Relation(pos, neg))
    return out


def normalize(p: Presentation) -> Presentation:
    """Reduce a presentation to disjoint-support form.

    Steps, repeated until nothing changes: cancel common factors between the
    two sides of each relation; drop trivial relations; eliminate a generator
    that forms a whole relation side by itself (exponent 1); replace linearly
    dependent relations by a basis of their lattice. Generators outside every
    relation are recorded as free factors. Every step is logged in ``trail``.

    Raises NotSupported when more than two relations survive, or when a
    relation side cancels completely against a nonempty other side (that
    forces nontrivial units).
    """
    names = list(p.generators)
    rels = list(p.relations)
    trail = list(p.trail)
    subs = dict(p.substitutions)
    changed = True
    while changed:
        changed = False
        new = []
        for r in rels:
            r2, common = _cancel(r)
            if common:
                trail.append(TrailEvent(
                    "cancel", f"{r.render(names)}: cancelled {common.render(names)}"))
                changed = True
            if r2.lhs == r2.rhs:
                trail.append(TrailEvent("drop", f"{r.render(names)}: trivial"))
                changed = True
                continue
            if not r2.lhs or not r2.rhs:
                trail.append(TrailEvent("units", f"{r.render(names)}: one side cancels away"))
                raise NotSupported(
                    f"relation {r.render(names)} forces units after cancellation")
            new.append(r2)
        rels = new
        if changed:
            continue
        # single-generator side with exponent 1
        for k, r in enumerate(rels):
            side = None
            for s, other in ((r.lhs, r.rhs), (r.rhs, r.lhs)):
                if len(s) == 1 and s.items[0][1] == 1:
                    side = (s.items[0][0], other)
                    break
            if side is None:
                continue
            g, by = side
            gname = names[g]
            trail.append(TrailEvent("eliminate", f"{gname} = {by.render(names)}"))
            rest = [Relation(_substitute(o.lhs, g, by), _substitute(o.rhs, g, by))
                    for j, o in enumerate(rels) if j != k]
            subs = {h: _substitute(w, g, by) for h, w in subs.items()}
            subs[gname] = by
            keep = [i for i in range(len(names)) if i != g]
            remap = {old: new_i for new_i, old in enumerate(keep)}
            rels = [Relation(o.lhs.remap(remap), o.rhs.remap(remap)) for o in rest]
            subs = {h: w.remap(remap) for h, w in subs.items()}
            names = [names[i] for i in keep]
            changed = True
            break
        if changed:
            continue
        if len(rels) > 1:
            rows = [r.difference(len(names)) for r in rels]
            if linalg.rank(rows) < len(rels):
                basis = _lattice_basis_relations(rels, len(names))
                trail.append(TrailEvent(
                    "dependent",
                    "relations " + "; ".join(r.render(names) for r in rels)
                    + " are dependent, replaced by "
                    + "; ".join(r.render(names) for r in basis)))
                rels = basis
                changed = True
    if len(rels) > 2:
        raise NotSupported(f"{len(rels)} independent relations; at most 2 are supported")
    out = Presentation(tuple(names), tuple(rels), True, tuple(trail),
                       tuple(sorted(subs.items())))
    free = [names[i] for i in out.free_generators()]
    event = TrailEvent("free", " ".join(free))
    if free and event not in trail:
        out = replace(out, trail=out.trail + (event,))
    return out


def presentation_from_words(names: Iterable[str], relations: Iterable[tuple[dict, dict]]
                            ) -> Presentation:
    """Build a presentation from ``({index: exp}, {index: exp})`` pairs."""
    return Presentation(tuple(names), tuple(
        Relation(Word.from_dict(a), Word.from_dict(b)) for a, b in relations))
