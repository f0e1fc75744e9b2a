"""Explicit embeddings into free abelian monoids and groups of fractions."""

from __future__ import annotations

from dataclasses import dataclass

from . import exact_linalg as linalg
from .criteria import CanonicalOneRelator
from .presentation import Presentation


class TorsionPresent(Exception):
    pass


@dataclass(frozen=True)
class Embedding:
    """Images of the generators (in presentation order) in Z^ambient_rank."""

    ambient_rank: int
    images: tuple[tuple[int, ...], ...]

    def image(self, word_vector) -> tuple[int, ...]:
        out = [0] * self.ambient_rank
        for e, img in zip(word_vector, self.images):
            if e:
                for j, x in enumerate(img):
                    out[j] += e * x
        return tuple(out)

    def satisfies(self, p: Presentation) -> bool:
        n = p.ngens
        return all(self.image(r.lhs.vector(n)) == self.image(r.rhs.vector(n))
                   for r in p.relations)

    def to_dict(self) -> dict:
        return {"ambient_rank": self.ambient_rank, "images": [list(v) for v in self.images]}


@dataclass(frozen=True)
class GroupOfFractions:
    rank: int
    torsion: tuple[int, ...]
    # coordinates of each generator in the chosen basis; the first
    # len(torsion) entries are residues modulo the torsion factors
    basis_map: tuple[tuple[int, ...], ...]

    @property
    def torsion_free(self) -> bool:
        return not self.torsion


def embed_one_relator(c: CanonicalOneRelator) -> Embedding:
    """Monomial embedding of ``u1..uk = u_{k+1}^a..u_n^a`` into Z^{k(n-k)}.

    Coordinate (j, i) with 1 <= j <= k, 1 <= i <= n-k sits at position
    (j-1)(n-k) + (i-1). Generator j <= k maps to sum_i a_{k+i} e_{j,i},
    generator k+i maps to sum_j e_{j,i}. Free-tail generators get fresh unit
    coordinates after the k(n-k) block.
    """
    k, m = c.k, c.n - c.k
    rank = k * m + c.free_tail
    images = []
    for j in range(k):
        v = [0] * rank
        for i in range(m):
            v[j * m + i] = c.a[i]
        images.append(tuple(v))
    for i in range(m):
        v = [0] * rank
        for j in range(k):
            v[j * m + i] = 1
        images.append(tuple(v))
    for t in range(c.free_tail):
        v = [0] * rank
        v[k * m + t] = 1
        images.append(tuple(v))
    return Embedding(rank, tuple(images))


def group_of_fractions(p: Presentation) -> GroupOfFractions:
    """Z^gens modulo the lattice of relation differences, via SNF.

    Generators outside every relation contribute fresh free coordinates,
    appended after the ones coming from the relation part.
    """
    used = sorted(p.relation_support())
    free = [i for i in range(p.ngens) if i not in set(used)]
    rows = [[r.difference(p.ngens)[i] for i in used] for r in p.relations]
    coords: dict[int, list[int]] = {}
    if used:
        m = len(used)
        if rows:
            _, d, v = linalg.smith_normal_form(rows, m)
            diag = [d[i][i] if i < len(d) else 0 for i in range(m)]
        else:
            v = linalg.identity(m)
            diag = [0] * m
        keep = [j for j in range(m) if diag[j] != 1]
        torsion = tuple(diag[j] for j in keep if diag[j] > 1)
        # x -> x @ V maps the relation lattice onto the diagonal lattice of D,
        # so generator e_i has coordinates row i of V.
        for pos, g in enumerate(used):
            row = [v[pos][j] for j in keep]
            tors = [row[t] % diag[keep[t]] for t in range(len(torsion))]
            coords[g] = tors + row[len(torsion):]
        rank = sum(1 for j in keep if diag[j] == 0)
    else:
        torsion = ()
        rank = 0
    total = rank + len(free)
    out = []
    for g in range(p.ngens):
        if g in coords:
            out.append(tuple(coords[g]) + (0,) * len(free))
        else:
            vec = [0] * (len(torsion) + total)
            vec[len(torsion) + rank + free.index(g)] = 1
            out.append(tuple(vec))
    return GroupOfFractions(total, torsion, tuple(out))


def embed_via_fractions(p: Presentation) -> Embedding:
    """Generator images in a basis of the (torsion-free) group of fractions."""
    g = group_of_fractions(p)
    if g.torsion:
        raise TorsionPresent(f"group of fractions has torsion {list(g.torsion)}")
    return Embedding(g.rank, g.basis_map)
