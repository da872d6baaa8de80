import itertools

import pytest
from hypothesis import given, settings, strategies as st

from bertinilab import gf
from bertinilab.gf import (field_new, ext_field, closed_point_count,
                           SpaceKind, GFError, CapExceeded)

SMALL_FIELDS = [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (2, 3), (3, 2)]


def test_field_new_examples():
    assert field_new(2, 1).q == 2
    F4 = field_new(2, 2)
    assert F4.q == 4
    assert F4.modulus == (1, 1, 1)  # x^2 + x + 1, the unique monic irreducible
    with pytest.raises(GFError):
        field_new(4, 1)


def test_field_new_validation():
    with pytest.raises(GFError):
        field_new(2, 0)
    with pytest.raises(CapExceeded):
        field_new(2, 40)


def test_ext_field_examples():
    F2 = field_new(2, 1)
    assert ext_field(F2, 1) is F2
    F4 = ext_field(F2, 2)
    assert F4.q == 4
    # embedded F_2 = fixed points of the Frobenius a -> a^2
    fixed = {a for a in F4.elements() if F4.frobenius(a) == a}
    assert fixed == {F4.embed(a) for a in F2.elements()}
    assert ext_field(field_new(3, 1), 2).q == 9
    with pytest.raises(GFError):
        ext_field(F2, 0)


@pytest.mark.parametrize("p,k", SMALL_FIELDS)
def test_field_axioms_exhaustive(p, k):
    """Associativity / commutativity / distributivity / inverses for q <= 9."""
    K = field_new(p, k)
    els = list(K.elements())
    for a, b in itertools.product(els, repeat=2):
        assert K.add(a, b) == K.add(b, a)
        assert K.mul(a, b) == K.mul(b, a)
        if not K.is_zero(b):
            assert K.mul(K.div(a, b), b) == a
    for a, b, c in itertools.product(els[: min(9, len(els))], repeat=3):
        assert K.add(K.add(a, b), c) == K.add(a, K.add(b, c))
        assert K.mul(K.mul(a, b), c) == K.mul(a, K.mul(b, c))
        assert K.mul(a, K.add(b, c)) == K.add(K.mul(a, b), K.mul(a, c))
    for a in els:
        if not K.is_zero(a):
            assert K.mul(a, K.inv(a)) == K.one


@pytest.mark.parametrize("p,k", SMALL_FIELDS)
def test_frobenius_is_homomorphism(p, k):
    K = field_new(p, k)
    for a, b in itertools.product(K.elements(), repeat=2):
        assert K.frobenius(K.add(a, b)) == K.add(K.frobenius(a), K.frobenius(b))
        assert K.frobenius(K.mul(a, b)) == K.mul(K.frobenius(a), K.frobenius(b))


@pytest.mark.parametrize("q,p,k,e", [(2, 2, 1, 2), (2, 2, 1, 3), (2, 2, 1, 4),
                                     (2, 2, 1, 6), (3, 3, 1, 2), (3, 3, 1, 4),
                                     (4, 2, 2, 2), (5, 5, 1, 2), (9, 3, 2, 2)])
def test_frobenius_fixed_field(q, p, k, e):
    """a -> a^q on F_{q^e} fixes exactly the embedded F_q (q^e <= 81)."""
    K = field_new(p, k)
    E = ext_field(K, e)
    assert E.q == q**e and E.q <= 81
    fixed = {a for a in E.elements() if E.pow(a, q) == a}
    assert fixed == {E.embed(a) for a in K.elements()}


def test_embedding_commutes_with_arithmetic():
    for (p, k, e) in ((2, 1, 3), (3, 1, 2), (2, 2, 2)):
        K = field_new(p, k)
        E = ext_field(K, e)
        for a, b in itertools.product(K.elements(), repeat=2):
            assert E.embed(K.add(a, b)) == E.add(E.embed(a), E.embed(b))
            assert E.embed(K.mul(a, b)) == E.mul(E.embed(a), E.embed(b))


@given(st.integers(0, 8), st.integers(0, 8))
@settings(max_examples=60, deadline=None)
def test_coords_roundtrip(i, j):
    E = ext_field(field_new(3, 1), 2)
    a = E.decode_int((i * 9 + j) % 9)
    assert E.from_coords(E.coords(a)) == a


def test_closed_point_count_examples():
    PL = SpaceKind.proj_line()
    assert closed_point_count(PL, 2, 1) == 3
    assert closed_point_count(PL, 2, 2) == 1
    assert closed_point_count(SpaceKind.product_of_lines(), 2, 1) == 9


def test_closed_points_partition_rational_points():
    """sum_{f | e} f * N_f = #P^1(F_{q^e}) for q <= 9, e <= 4."""
    PL = SpaceKind.proj_line()
    for q in (2, 3, 4, 5, 7, 8, 9):
        for e in range(1, 5):
            total = sum(f * closed_point_count(PL, q, f)
                        for f in gf.divisors(e))
            assert total == q**e + 1
        assert closed_point_count(PL, q, 1) == PL.point_count(q, 1)


def test_hirzebruch_point_counts():
    for a in (0, 1, 2, 5):
        H = SpaceKind.hirzebruch(a)
        for q in (2, 3, 4):
            for e in (1, 2, 3):
                assert H.point_count(q, e) == (q**e + 1) ** 2


def test_enumeration_cap():
    with pytest.raises(CapExceeded):
        list(gf.residue_field(field_new(2, 1),
                              tuple([1, 1] + [0] * 27 + [1])).elements())


def test_zeta_inverse_values():
    PoL = SpaceKind.product_of_lines()
    from fractions import Fraction
    assert PoL.zeta_inverse(2, 3) == Fraction(63, 256)
    with pytest.raises(GFError):
        PoL.zeta_inverse(2, 2)  # s must exceed the dimension
