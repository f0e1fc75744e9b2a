import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from normalmonoid.criteria import (CanonicalOneRelator, CanonicalTwoRelator, NormalityVerdict,
                                   canonicalize_one_relator, canonicalize_two_relator,
                                   check_two_relator_conditions, is_normal,
                                   is_normal_one_relator, labelings, to_user)
from normalmonoid.presentation import Presentation, Relation, Word, normalize, parse_inline

NORMAL = "u1 u2 u3 u4 u5 | u1 u2 = u3^2 ; u1 u3 = u4 u5"
NOT_NORMAL = "u1 u2 u3 u4 | u1 u2 = u3^2 ; u1 u3 = u4^2"


def rel(text, names):
    return parse_inline(" ".join(names) + " | " + text).relations[0]


@pytest.mark.parametrize("text, status", [
    ("u1 u2 = u3^2", "NormalPositive"),
    ("u1^2 = u2^2", "NotNormal"),
    ("u1 = u2^3", "NormalPositive"),
    ("u1^2 u2 = u3^3", "NotNormal"),
    ("u1^2 u2^3 = u3 u4", "NormalPositive"),
])
def test_one_relator_criterion(text, status):
    v = is_normal_one_relator(rel(text, ["u1", "u2", "u3", "u4"]))
    assert v.status == status
    if status == "NotNormal":
        assert v.failed_condition == "3b"
        assert v.witness


def test_golden_two_relator_verdicts():
    assert check_two_relator_conditions(normalize(parse_inline(NORMAL))).status == "NormalPositive"
    v = check_two_relator_conditions(normalize(parse_inline(NOT_NORMAL)))
    assert v.status == "NotNormal"
    assert v.failed_condition == "3d"


def test_disjoint_relations():
    v = is_normal(parse_inline("a b c d | a = b^2 ; c = d^2"))
    assert v.status == "NormalPositive"
    v = is_normal(parse_inline("a b c d e f | a b = c^2 ; d^2 = e^2 f"))
    assert v.status == "NotNormal"


def test_is_normal_dispatch():
    assert is_normal(Presentation(("a", "b", "c", "d"))).status == "NormalPositive"
    assert is_normal(parse_inline(NORMAL)).status == "NormalPositive"
    v = is_normal(parse_inline(NOT_NORMAL))
    assert (v.status, v.failed_condition) == ("NotNormal", "3d")
    v = is_normal(parse_inline("a b c d e f | a b = c^2 ; c d = e^2 ; e f = a^2"))
    assert v.status == "NotApplicable"


def test_non_cancellative_input_is_conditional():
    v = is_normal(parse_inline("a b | a^2 = a b"))
    assert v.status == "NormalPositive"
    assert "cancellative" in v.witness


def test_verdict_invariant():
    with pytest.raises(ValueError):
        NormalityVerdict("NotNormal")
    with pytest.raises(ValueError):
        NormalityVerdict("NormalPositive", "3a")
    with pytest.raises(ValueError):
        NormalityVerdict("Maybe")
    v = NormalityVerdict("NotNormal", "3c", "x")
    assert NormalityVerdict.from_dict(v.to_dict()) == v


def test_eight_labelings():
    r1 = Relation(Word(((0, 1),)), Word(((1, 2),)))
    r2 = Relation(Word(((2, 1),)), Word(((3, 2),)))
    assert len(list(labelings(r1, r2))) == 8


# ---------------------------------------------------------------------------
# invariance under relabeling

two_relator_inputs = st.lists(
    st.tuples(st.dictionaries(st.integers(0, 5), st.integers(1, 3), min_size=1, max_size=3),
              st.dictionaries(st.integers(0, 5), st.integers(1, 3), min_size=1, max_size=3)),
    min_size=2, max_size=2)


def _pres(rels, names=tuple(f"x{i}" for i in range(6))):
    return Presentation(names, tuple(Relation(Word.from_dict(a), Word.from_dict(b))
                                     for a, b in rels))


@settings(max_examples=200, deadline=None)
@given(two_relator_inputs, st.permutations(range(6)), st.booleans(), st.booleans(),
       st.booleans())
def test_verdict_invariant_under_symmetries(rels, perm, swap_rels, flip1, flip2):
    base = is_normal(_pres(rels)).status
    moved = [({perm[i]: e for i, e in a.items()}, {perm[i]: e for i, e in b.items()})
             for a, b in rels]
    if flip1:
        moved[0] = moved[0][::-1]
    if flip2:
        moved[1] = moved[1][::-1]
    if swap_rels:
        moved.reverse()
    assert is_normal(_pres(moved)).status == base


# ---------------------------------------------------------------------------
# canonical forms

def test_canonical_one_relator_examples():
    c = canonicalize_one_relator(normalize(parse_inline("u1 u2 u3 | u1 u2 = u3^2")))
    assert (c.k, c.n, c.a) == (2, 3, (2,))
    c = canonicalize_one_relator(normalize(parse_inline("x y z | x^2 = y z")))
    assert (c.k, c.n, c.a) == (2, 3, (2,))
    assert c.relabel == ("y", "z", "x")
    c = canonicalize_one_relator(normalize(parse_inline("x y z w | x^2 y^3 = z w")))
    assert c.k == 2 and c.relation().lhs.squarefree
    assert c.relabel[:2] == ("z", "w")


def test_canonical_two_relator_golden():
    c = canonicalize_two_relator(normalize(parse_inline(NORMAL)))
    assert c.k == (1, 2, 3, 3, 3)
    assert c.n == 5
    assert c.a == (1, 2, 1)
    assert c.b == (1,)
    assert c.relabel == ("u1", "u3", "u2", "u4", "u5")


def _round_trip(q, c):
    order = [q.index(name) for name in c.relabel]
    back = to_user(c.relations() if isinstance(c, CanonicalTwoRelator) else (c.relation(),),
                   order)
    # same relations, up to relation order and side orientation
    assert len(back) == len(q.relations)
    assert {frozenset((r.lhs, r.rhs)) for r in back} == \
        {frozenset((r.lhs, r.rhs)) for r in q.relations}


@settings(max_examples=300, deadline=None)
@given(two_relator_inputs)
def test_normal_positive_always_canonicalizes(rels):
    p = _pres(rels)
    v = is_normal(p)
    if not v.normal:
        return
    q = normalize(p)
    if len(q.relations) == 2 and q.relations[0].support() & q.relations[1].support():
        c = canonicalize_two_relator(q)
        _round_trip(q, c)
    elif len(q.relations) == 1:
        c = canonicalize_one_relator(q)
        _round_trip(q, c)


def test_k1_zero_extension():
    # no generator sits on both squarefree sides
    q = normalize(parse_inline("x y z p q r s | x^2 y = p q ; x z^2 = r s"))
    assert is_normal(q).status == "NormalPositive"
    c = canonicalize_two_relator(q)
    assert c.k1 == 0
    _round_trip(q, c)


def test_canonical_validation():
    with pytest.raises(ValueError):
        CanonicalOneRelator(3, 3, ())
    with pytest.raises(ValueError):
        CanonicalTwoRelator((1, 2, 3, 3, 4), 5, (1, 1, 1, 1), (1,))  # n - k5 < 2
    with pytest.raises(ValueError):
        CanonicalTwoRelator((1, 2, 3, 3, 3), 5, (1, 2, 2), (1,))  # a_3 must be 1


def test_block_forms_round_trip():
    for k, n in [((1, 2, 3, 3, 3), 5), ((1, 1, 2, 3, 3), 5), ((2, 3, 3, 4, 4), 6)]:
        k1, k2, k3, k4, k5 = k
        for exps in itertools.product((1, 2), repeat=k5 + k2 - k1):
            a = list(exps[:k5])
            for i in range(k2, k3):
                a[i] = 1
            c = CanonicalTwoRelator(k, n, tuple(a), tuple(exps[k5:]))
            p = c.presentation()
            if is_normal(p).normal and len(normalize(p).relations) == 2:
                c2 = canonicalize_two_relator(normalize(p))
                _round_trip(normalize(p), c2)
