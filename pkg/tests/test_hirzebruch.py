import itertools
import math

import pytest

from bertinilab.gf import field_new, ext_field, GFError, CapExceeded
from bertinilab.hirzebruch import (Surface, Bidegree, Section, Monomial,
                                   ClosedFiber, section_basis,
                                   section_space_dim, restrict_to_fiber_jet,
                                   rational_points, random_section,
                                   fibers_of_degree, canonical_fiber,
                                   proj_line_points)
from bertinilab.poly import UniPoly
from bertinilab.smoothcheck import is_good_pair
from conftest import make_section, scale


def test_section_basis_examples(F2):
    S0 = Surface(0, F2)
    for n, d in ((1, 1), (2, 3), (3, 0)):
        assert len(section_basis(S0, Bidegree(n, d))) == (n + 1) * (d + 1)
    S1 = Surface(1, F2)
    b = section_basis(S1, Bidegree(1, 0))
    assert b == [Monomial(1, 0, 0, 0), Monomial(0, 1, 0, 1), Monomial(0, 1, 1, 0)]
    S2 = Surface(2, F2)
    assert section_basis(S2, Bidegree(1, -1)) == [
        Monomial(0, 1, 0, 1), Monomial(0, 1, 1, 0)]


def test_dimension_formula_vs_bruteforce(F2):
    for a in range(4):
        S = Surface(a, F2)
        for i in range(6):
            for j in range(-8, 9):
                brute = 0
                for beta in range(max(i + 1, 0)):
                    for gamma in range(0, 60):
                        if j + a * beta - gamma >= 0:
                            brute += 1
                assert section_space_dim(S, Bidegree(i, j)) == brute


def test_fiber_canonical_forms(F2, F3):
    for K, q in ((F2, 2), (F3, 3)):
        f1 = list(fibers_of_degree(K, 1))
        assert len(f1) == q + 1
        assert f1[-1].chart == "s"  # the fiber r = t
        assert canonical_fiber(K, 1).label() == "s"
        f2 = list(fibers_of_degree(K, 2))
        from bertinilab.poly import irreducible_count
        assert len(f2) == irreducible_count(q, 2)


def test_fiber_validation(F2):
    with pytest.raises(GFError):
        ClosedFiber.from_unipoly(UniPoly(F2, [0, 1, 1]))  # x^2 + x reducible
    fib = ClosedFiber.from_unipoly(UniPoly(F2, [1, 1, 1]))
    assert fib.degree == 2 and fib.residue_field().q == 4


def test_restrict_jet_examples(F2):
    S0 = Surface(0, F2)
    fib_s = canonical_fiber(F2, 1)
    # f = x s at the fiber r = s: (F1, F2) = (0, x)
    jet = restrict_to_fiber_jet(
        make_section(S0, Bidegree(1, 1), {(1, 0, 1, 0): 1}), fib_s)
    assert jet.F1.is_zero() and jet.F2.coeffs == (0, 1)
    # f = x t + y s: (F1, F2) = (x, y)
    jet = restrict_to_fiber_jet(
        make_section(S0, Bidegree(1, 1), {(1, 0, 0, 1): 1, (0, 1, 1, 0): 1}),
        fib_s)
    assert jet.F1.coeffs == (0, 1) and jet.F2.coeffs == (1, 0)
    # base-independent section: F2 = 0 at every fiber
    fx = make_section(S0, Bidegree(1, 0), {(1, 0, 0, 0): 1})
    for fib in fibers_of_degree(F2, 1):
        jet = restrict_to_fiber_jet(fx, fib)
        assert not jet.F1.is_zero() and jet.F2.is_zero()


@pytest.mark.parametrize("q,e,i", [(2, 1, 1), (2, 1, 3), (2, 2, 1), (2, 2, 2),
                                   (3, 1, 1), (3, 1, 2), (2, 3, 1)])
def test_jet_bijection_exhaustive(q, e, i):
    """Sections of bidegree (i, 2e-1) biject with jets: q^(2e(i+1)) values."""
    K = field_new(q, 1)
    S = Surface(0, K)
    bid = Bidegree(i, 2 * e - 1)
    dim = section_space_dim(S, bid)
    assert q**dim == q ** (2 * e * (i + 1)) <= 1 << 20
    fib = canonical_fiber(K, e)
    seen = set()
    for v in range(q**dim):
        cs = []
        w = v
        for _ in range(dim):
            cs.append(K.decode_int(w % q))
            w //= q
        jet = restrict_to_fiber_jet(Section(S, bid, tuple(cs)), fib)
        seen.add((jet.F1.coeffs, jet.F2.coeffs))
    assert len(seen) == q**dim


def test_chart_independence(F2, F3):
    """Goodness of the jet does not depend on the trivialization chart for
    fibers avoiding both chart loci."""
    for K in (F2, F3):
        S = Surface(0, K)
        for e in (2, 3):
            for fib in fibers_of_degree(K, e):
                if fib.chart_poly_degenerate("s"):
                    continue
                mir = fib.mirrored()
                for seed in range(8):
                    sec = random_section(S, Bidegree(2, 5), seed)
                    if sec.is_zero():
                        continue
                    j1 = restrict_to_fiber_jet(sec, fib)
                    j2 = restrict_to_fiber_jet(sec, mir)
                    assert is_good_pair(j1) == is_good_pair(j2)


def test_rational_points_counts(F2):
    for a in (0, 1):
        S = Surface(a, F2)
        assert len(rational_points(S, 1)) == 9
    assert len(rational_points(Surface(0, F2), 2)) == 25
    with pytest.raises(CapExceeded):
        rational_points(Surface(0, F2), 25)


def test_random_section_deterministic(S0):
    a = random_section(S0, Bidegree(1, 1), 42)
    b = random_section(S0, Bidegree(1, 1), 42)
    assert a == b
    c = random_section(S0, Bidegree(1, 1), 43)
    assert a != c  # overwhelmingly likely; fixed seeds
    with pytest.raises(GFError):
        random_section(Surface(2, S0.field), Bidegree(0, -1), 1)


def test_random_section_uniformity_chi2(S0):
    """Chi-squared over the 16 outcomes of bidegree (1,1) over F_2 must not
    reject uniformity at the 1e-3 level."""
    n = scale(20000, 100000)
    counts = [0] * 16
    for idx in range(n):
        sec = random_section(S0, Bidegree(1, 1), 2026, index=idx)
        v = sum(c << k for k, c in enumerate(sec.coeffs))
        counts[v] += 1
    expected = n / 16
    chi2 = sum((c - expected) ** 2 / expected for c in counts)
    # chi-square(15) upper 1e-3 quantile
    assert chi2 < 37.697


def test_zero_section_frequency(S0):
    # zero section appears with probability q^-dim: sanity on a small space
    n = scale(4000, 50000)
    dim = section_space_dim(S0, Bidegree(0, 1))
    zeros = sum(1 for i in range(n)
                if random_section(S0, Bidegree(0, 1), 7, index=i).is_zero())
    p = 2.0**-dim
    assert abs(zeros / n - p) < 5 * math.sqrt(p * (1 - p) / n)


def test_section_json_roundtrip(S0):
    sec = random_section(S0, Bidegree(2, 3), 9)
    assert Section.from_json(sec.to_json()) == sec
    S2 = Surface(2, field_new(3, 1))
    sec = random_section(S2, Bidegree(2, 1), 9)
    assert Section.from_json(sec.to_json()) == sec


def test_proj_line_points_count():
    E = ext_field(field_new(2, 1), 3)
    assert len(proj_line_points(E)) == 9
