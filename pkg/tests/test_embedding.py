from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from normalmonoid import exact_linalg as linalg
from normalmonoid import oracle
from normalmonoid.criteria import CanonicalOneRelator, is_normal
from normalmonoid.embedding import (TorsionPresent, embed_one_relator, embed_via_fractions,
                                    group_of_fractions)
from normalmonoid.presentation import Presentation, normalize, parse_inline
from normalmonoid.sweep import one_relator_family, two_relator_family

one_relator_forms = st.integers(2, 5).flatmap(lambda n: st.integers(1, n - 1).flatmap(
    lambda k: st.tuples(st.just(n), st.just(k),
                        st.lists(st.integers(1, 4), min_size=n - k, max_size=n - k),
                        st.integers(0, 2))))


def test_embed_one_relator_quadric():
    e = embed_one_relator(CanonicalOneRelator(3, 2, (2,)))
    assert e.ambient_rank == 2
    assert e.images == ((2, 0), (0, 2), (1, 1))


def test_embed_one_relator_k1():
    e = embed_one_relator(CanonicalOneRelator(4, 1, (2, 3, 1)))
    assert e.ambient_rank == 3
    assert e.images[0] == (2, 3, 1)
    assert e.images[1:] == ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def test_embed_one_relator_rank_four():
    c = CanonicalOneRelator(4, 2, (1, 2))
    e = embed_one_relator(c)
    assert e.ambient_rank == 4
    assert e.images == ((1, 2, 0, 0), (0, 0, 1, 2), (1, 0, 1, 0), (0, 1, 0, 1))
    assert e.satisfies(c.presentation())


@given(one_relator_forms)
def test_embed_one_relator_satisfies_relation(params):
    n, k, a, tail = params
    c = CanonicalOneRelator(n, k, tuple(a), tail)
    e = embed_one_relator(c)
    assert e.ambient_rank == k * (n - k) + tail
    assert len(e.images) == n + tail
    p = Presentation(c.relabel, (c.relation(),))
    assert e.satisfies(p)
    # images live in the free monoid
    assert all(x >= 0 for img in e.images for x in img)


def test_group_of_fractions_examples():
    g = group_of_fractions(parse_inline("u1 u2 u3 | u1 u2 = u3^2"))
    assert (g.rank, g.torsion) == (2, ())
    g = group_of_fractions(parse_inline("a b | a^2 = b^2"))
    assert (g.rank, g.torsion) == (1, (2,))
    g = group_of_fractions(Presentation(("a", "b", "c")))
    assert (g.rank, g.torsion) == (3, ())
    assert g.basis_map == ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def test_embed_via_fractions_examples():
    p = parse_inline("u1 u2 u3 | u1 u2 = u3^2")
    e = embed_via_fractions(p)
    assert e.ambient_rank == 2 and e.satisfies(p)
    # lattice-equivalent to (2,0), (0,2), (1,1): the images generate Z^2
    assert linalg.cokernel_invariants(linalg.transpose([list(v) for v in e.images], 2),
                                      3).is_trivial
    q = parse_inline("u1 u2 u3 u4 u5 | u1 u2 = u3^2 ; u1 u3 = u4 u5")
    e = embed_via_fractions(q)
    assert e.ambient_rank == 3 and len(e.images) == 5 and e.satisfies(q)
    with pytest.raises(TorsionPresent):
        embed_via_fractions(parse_inline("a b | a^2 = b^2"))


def test_free_tail_gets_fresh_coordinates():
    p = parse_inline("a b c d | a b = c^2")
    e = embed_via_fractions(p)
    assert e.ambient_rank == 3
    assert e.images[3] == (0, 0, 1)
    assert all(v[2] == 0 for v in e.images[:3])


def _lattice_map(src, dst):
    """Rational matrix T with src_i T = dst_i for all i (rows)."""
    r = len(src[0])
    cols = []
    for j in range(len(dst[0])):
        t = linalg.solve_rational([list(v) for v in src], [v[j] for v in dst])
        assert t is not None
        cols.append(t)
    return [[cols[j][i] for j in range(len(cols))] for i in range(r)]


@settings(max_examples=40, deadline=None)
@given(one_relator_forms)
def test_one_relator_embeddings_are_lattice_isomorphic(params):
    n, k, a, tail = params
    c = CanonicalOneRelator(n, k, tuple(a), tail)
    p = c.presentation()
    frac = embed_via_fractions(p)
    single = embed_one_relator(c)
    t = _lattice_map(frac.images, single.images)
    assert all(Fraction(x).denominator == 1 for row in t for x in row)
    t = [[int(x) for x in row] for row in t]
    assert linalg.rank(t) == frac.ambient_rank
    if frac.ambient_rank > oracle.MAX_RANK:
        return
    # the Hilbert basis maps into the generator images of the other embedding
    hb = oracle.hilbert_basis(list(frac.images), frac.ambient_rank)
    mapped = {tuple(sum(h[i] * t[i][j] for i in range(len(h))) for j in range(len(t[0])))
              for h in hb}
    assert mapped <= set(single.images)


@given(one_relator_forms)
def test_one_relator_group_rank(params):
    n, k, a, tail = params
    c = CanonicalOneRelator(n, k, tuple(a), tail)
    g = group_of_fractions(c.presentation())
    assert g.rank == n + tail - 1


def test_two_relator_group_rank_and_torsion():
    for c in two_relator_family(6, 2):
        p = c.presentation()
        if not is_normal(p).normal:
            continue
        g = group_of_fractions(normalize(p))
        assert g.torsion == ()
        assert g.rank == c.n - 2


def test_congruence_classes_inject_over_sweeps():
    """Degree-6 word classes have distinct images on every sweep instance."""
    forms = list(one_relator_family(5, 3, 3)) + list(two_relator_family(7, 2))
    checked = 0
    for c in forms:
        p = c.presentation()
        if group_of_fractions(p).torsion:
            continue
        cc = oracle.congruence_classes(p, 6)
        assert oracle.check_injective(cc, embed_via_fractions(p)) is None, p.render_inline()
        checked += 1
    assert checked > 2000
