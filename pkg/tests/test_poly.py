import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from bertinilab.gf import field_new, ext_field, divisors, GFError
from bertinilab.poly import (UniPoly, BinaryForm, resultant, factor,
                             multiple_root_locus, irreducible_count,
                             form_gcd, form_factor, roots, is_irreducible)
from conftest import scale


def P(K, *coeffs):
    return UniPoly(K, coeffs)


def test_resultant_examples(F2):
    f = P(F2, 1, 1, 1)  # x^2 + x + 1
    assert resultant(f, f) == F2.zero
    assert resultant(f, UniPoly.x(F2)) == F2.one
    # x^2 + 1 = (x+1)^2 shares the root 1 with x + 1 in characteristic 2
    assert resultant(P(F2, 1, 0, 1), P(F2, 1, 1)) == F2.zero


def test_resultant_degenerate_conventions(F2):
    with pytest.raises(GFError):
        resultant(UniPoly.zero(F2), UniPoly.zero(F2))
    assert resultant(UniPoly.zero(F2), P(F2, 1, 1)) == F2.zero
    assert resultant(P(F2, 1, 1), UniPoly.one(F2)) == F2.one


def test_resultant_multiplicative(F3):
    # res(fg, h) = res(f, h) res(g, h) on a few fixed cases
    f, g, h = P(F3, 1, 1), P(F3, 2, 0, 1), P(F3, 1, 2, 1)
    assert resultant(f * g, h) == F3.mul(resultant(f, h), resultant(g, h))


def test_factor_examples(F2):
    assert factor(P(F2, 0, 1, 1)) == [(P(F2, 0, 1), 1), (P(F2, 1, 1), 1)]
    assert factor(P(F2, 1, 1, 1)) == [(P(F2, 1, 1, 1), 1)]
    assert factor(P(F2, 0, 1, 0, 0, 1)) == [
        (P(F2, 0, 1), 1), (P(F2, 1, 1), 1), (P(F2, 1, 1, 1), 1)]


def test_factor_roundtrip_random():
    rng = random.Random(20240811)
    cases = {2: scale(800, 25000), 3: scale(400, 25000),
             4: scale(300, 25000), 5: scale(300, 25000)}
    for q, count in cases.items():
        K = field_new(2, 2) if q == 4 else field_new(q, 1)
        for _ in range(count):
            deg = rng.randrange(1, 13)
            cs = [K.decode_int(rng.randrange(q)) for _ in range(deg + 1)]
            f = UniPoly(K, cs)
            if f.is_zero():
                continue
            prod = UniPoly.constant(K, f.lc())
            for g, m in factor(f):
                assert g.lc() == K.one and is_irreducible(g)
                prod = prod * g**m
            assert prod == f


def test_factor_deterministic_order(F3):
    f = P(F3, 0, 2, 0, 1, 1, 0, 2)
    assert factor(f) == factor(f)


def test_multiple_root_locus_examples(F2, F3):
    u = BinaryForm(F3, 1, [F3.zero, F3.one])
    v = BinaryForm(F3, 1, [F3.one])
    assert multiple_root_locus(u * v * (u + v)).n == 0  # squarefree
    D = multiple_root_locus(BinaryForm(F3, 3, [0, 0, 1]))  # u^2 v
    assert D.n == 1 and D.coeffs == (F3.zero, F3.one)  # ~ u
    # u^2 + v^2 = (u + v)^2 over F_2: every root is multiple, D ~ F
    F = BinaryForm(F2, 2, [1, 0, 1])
    assert multiple_root_locus(F) == F


def _root_multiplicity(F, x, y):
    """Multiplicity of the projective root (x : y) by repeated division by
    the linear form y*u - x*v."""
    K = F.ctx
    lin = BinaryForm(K, 1, [K.neg(x), y])
    m = 0
    while not F.is_zero() and K.is_zero(F.eval(x, y)):
        F = F.divexact(lin)
        m += 1
    return m


@pytest.mark.parametrize("q,maxdeg", [(2, 5), (3, 4), (4, 4)])
def test_multiple_root_locus_vs_enumeration(q, maxdeg):
    """D constant iff squarefree; roots of D = multiple roots, exhaustively
    cross-checked against root multiplicities over extensions."""
    K = field_new(2, 2) if q == 4 else field_new(q, 1)
    for n in range(1, maxdeg + 1):
        for vec in itertools.product(range(q), repeat=n + 1):
            F = BinaryForm(K, n, [K.decode_int(c) for c in vec])
            if F.is_zero():
                continue
            D = multiple_root_locus(F)
            sq_by_factor = all(m == 1 for _g, m in form_factor(F))
            assert (D.n == 0) == sq_by_factor
            for e in range(1, n + 1):
                E = ext_field(K, e)
                FE = BinaryForm(E, n, [E.embed(c) for c in F.coeffs])
                DE = BinaryForm(E, D.n, [E.embed(c) for c in D.coeffs])
                pts = [(x, E.one) for x in E.elements()] + [(E.one, E.zero)]
                for (x, y) in pts:
                    mult = _root_multiplicity(FE, x, y)
                    is_D_root = (DE.n > 0 and E.is_zero(DE.eval(x, y)))
                    assert (mult >= 2) == is_D_root


def test_resultant_vs_gcd_property():
    rng = random.Random(7)
    n = scale(1500, 10000)
    for _ in range(n):
        q = rng.choice((2, 3, 4))
        K = field_new(2, 2) if q == 4 else field_new(q, 1)
        def rand_poly():
            deg = rng.randrange(1, 8)
            cs = [K.decode_int(rng.randrange(q)) for _ in range(deg)]
            cs.append(K.decode_int(rng.randrange(1, q)))  # nonzero lc
            return UniPoly(K, cs)
        f, g = rand_poly(), rand_poly()
        assert (resultant(f, g) == K.zero) == (f.gcd(g).degree >= 1)


def test_irreducible_count_examples():
    assert irreducible_count(2, 2) == 1
    assert irreducible_count(2, 3) == 2
    assert irreducible_count(3, 1) == 3


def test_irreducible_count_partitions_field_elements():
    """sum over e | E of e * N_e(q, e) = q^E (minimal polynomial degrees)."""
    for q in (2, 3, 4, 5):
        for E in range(1, 9):
            assert sum(f * irreducible_count(q, f) for f in divisors(E)) == q**E


def test_form_gcd_conventions(F2):
    F = BinaryForm(F2, 2, [1, 1, 1])
    Z = BinaryForm.zero(F2, 2)
    assert form_gcd(F, Z) == F  # gcd(f, 0) = monic f
    with pytest.raises(GFError):
        form_gcd(Z, Z)


def test_form_factor_includes_infinity(F2):
    # u^3 v + u v^3 = u v (u + v)^2 over F_2
    F = BinaryForm(F2, 4, [0, 1, 0, 1])
    fac = form_factor(F)
    degs = sorted((g.n, m) for g, m in fac)
    assert degs == [(1, 1), (1, 1), (1, 2)]
    prod = BinaryForm(F2, 0, [F2.one])
    for g, m in fac:
        for _ in range(m):
            prod = prod * g
    assert prod == F


def test_roots_over_extension():
    F8 = field_new(2, 3)
    a = F8.decode_int(5)
    f = UniPoly(F8, [a, F8.one])
    assert roots(f) == [a]


@given(st.lists(st.integers(0, 2), min_size=2, max_size=10))
@settings(max_examples=200, deadline=None)
def test_gcd_divides_both(cs):
    F3 = field_new(3, 1)
    f = UniPoly(F3, cs)
    g = UniPoly(F3, cs[::-1] + [1])
    if f.is_zero():
        return
    h = f.gcd(g)
    if h.degree >= 0 and not h.is_zero():
        assert (f % h).is_zero() and (g % h).is_zero()
