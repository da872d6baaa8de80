from fractions import Fraction

import pytest

from bertinilab.gf import field_new, GFError, CapExceeded
from bertinilab.hirzebruch import (Surface, Bidegree, Section, Monomial,
                                   section_basis, section_space_dim,
                                   canonical_fiber)
from bertinilab.poly import BinaryForm
from bertinilab import census as census_mod
from bertinilab.census import (exhaustive_census, mc_census, convergence_table,
                               doubled_fiber_probability, wilson_interval,
                               CensusResult, _decode_section, _surface, _classify)
from conftest import scale


def test_wilson_interval():
    c, r = wilson_interval(50, 100)
    assert abs(c - 0.5) < 0.01 and 0.10 < r < 0.15
    c, r = wilson_interval(0, 10)
    assert c > 0 and r > 0  # robust at zero counts


def test_census_n0_degenerate():
    r = exhaustive_census(0, 0, 1, 2)
    assert r.smooth_fraction() == 1
    assert r.zero_count == 1 and r.total == 4
    # each curve is a single fiber: q + 1 rational points
    assert set(r.point_counts) == {3}


def test_census_empty_locus_is_smooth():
    # bidegree (0,0): nonzero constants cut out the empty curve
    r = exhaustive_census(0, 0, 0, 2)
    assert r.smooth_fraction() == 1
    assert r.point_counts == {0: 1}


def test_census_dual_count_examples():
    r = exhaustive_census(0, 1, 1, 2)
    # every smooth bidegree-(1,1) curve is isomorphic to P^1: 3 points
    assert set(r.point_counts) == {3}
    from bertinilab.smoothcheck import brute_force_is_smooth
    S = _surface(0, 2)
    bid = Bidegree(1, 1)
    brute_smooth = 0
    for v in range(1, 2**4):
        sec = _decode_section(S, bid, 4, v)
        if brute_force_is_smooth(sec, 2):
            brute_smooth += 1
    assert brute_smooth == r.smooth_count


def test_bulk_vs_generic_census():
    """The vectorized (2, d) path agrees with the per-section walk exactly,
    verdicts and point counts both."""
    S = _surface(0, 2)
    for d in (1, 2, 3):
        bid = Bidegree(2, d)
        dim = section_space_dim(S, bid)
        smooth = 0
        bins: dict = {}
        for v in range(1, 2**dim):
            ok, pts = _classify(_decode_section(S, bid, dim, v))
            if ok:
                smooth += 1
                bins[pts] = bins.get(pts, 0) + 1
        rb = exhaustive_census(0, 2, d, 2)
        assert rb.smooth_count == smooth
        assert rb.point_counts == bins


def test_census_cap():
    with pytest.raises(CapExceeded):
        exhaustive_census(0, 3, 10, 3)


def test_mc_census_deterministic_and_seeded():
    r1 = mc_census(0, 2, 12, 2, 800, seed=3)
    r2 = mc_census(0, 2, 12, 2, 800, seed=3)
    assert r1.to_payload() == r2.to_payload()
    r3 = mc_census(0, 2, 12, 2, 800, seed=4)
    assert r1.to_payload() != r3.to_payload()
    c, rad = r1.smooth_ci()
    assert abs(c - float(r1.smooth_fraction())) < rad


def test_mc_census_parallel_matches_serial():
    r1 = mc_census(0, 2, 8, 2, 400, seed=11, threads=1)
    r2 = mc_census(0, 2, 8, 2, 400, seed=11, threads=2)
    assert r1.to_payload() == r2.to_payload()


def test_convergence_table_shapes():
    rows = convergence_table(0, 2, 2, [4, 3], "exhaustive")
    assert [r["d"] for r in rows] == [3, 4]
    assert all(r["error"] == 0.0 for r in rows)
    assert convergence_table(0, 2, 2, [], "exhaustive") == []
    rows = convergence_table(0, 2, 2, [6], "montecarlo", samples=300, seed=1)
    assert rows[0]["error"] > 0


def test_doubled_fiber_examples():
    for d in (2, 5):
        assert doubled_fiber_probability(0, 1, d, 2) == Fraction(1, 16)
        assert doubled_fiber_probability(0, 2, d, 3) == Fraction(1, 3**6)
    assert doubled_fiber_probability(0, 3, 1, 5) == 0
    # degree-2 fiber: q^(-2e(n+1))
    K = field_new(2, 1)
    fib2 = canonical_fiber(K, 2)
    assert doubled_fiber_probability(0, 1, 6, 2, fib2) == Fraction(1, 2**8)


def test_doubled_fiber_matches_direct_count():
    """Exact linear-algebra value equals literal divisibility counting."""
    from bertinilab.poly import UniPoly
    K = field_new(2, 1)
    S = Surface(0, K)
    bid = Bidegree(1, 2)
    dim = section_space_dim(S, bid)
    r2 = UniPoly(K, [0, 0, 1])  # s^2 on the t = 1 chart
    divisible = 0
    for v in range(2**dim):
        sec = _decode_section(S, bid, dim, v)
        # check each coefficient form divisible by s^2
        ok = True
        for beta in range(2):
            c = sec.coefficient_form(beta)
            if not (K.is_zero(c.coeffs[0]) and K.is_zero(c.coeffs[1])):
                ok = False
                break
        if ok:
            divisible += 1
    assert Fraction(divisible, 2**dim) == doubled_fiber_probability(0, 1, 2, 2)


def test_moebius_substitution_invariance():
    """Smooth counts are invariant under base-P^1 substitutions."""
    from bertinilab.smoothcheck import singular_fibers
    S = _surface(0, 2)
    bid = Bidegree(2, 3)
    dim = section_space_dim(S, bid)
    subs = [((0, 1), (1, 0)),   # swap s, t
            ((1, 1), (0, 1)),   # s -> s + t
            ((1, 0), (1, 1))]   # t -> s + t
    base = exhaustive_census(0, 2, 3, 2).smooth_count
    K = S.field
    for mat in subs:
        smooth = 0
        for v in range(1, 2**dim):
            sec = _decode_section(S, bid, dim, v)
            sub = _substitute_base(sec, mat)
            if sub.is_zero():
                raise AssertionError("substitution must be invertible")
            if sec.bidegree.i >= 1:
                if singular_fibers(sub).is_smooth():
                    smooth += 1
        assert smooth == base


def _substitute_base(sec: Section, mat):
    """(s, t) -> (a s + b t, c s + d t) on the coefficient forms."""
    (a, b), (c, d) = mat
    K = sec.surface.field
    i = sec.bidegree.i
    new_cs = []
    for beta in range(i + 1):
        form = sec.coefficient_form(beta)
        D = form.n
        s_img = BinaryForm(K, 1, [K.decode_int(b), K.decode_int(a)])
        t_img = BinaryForm(K, 1, [K.decode_int(d), K.decode_int(c)])
        acc = BinaryForm.zero(K, D)
        for k, cf in enumerate(form.coeffs):
            if K.is_zero(cf):
                continue
            term = BinaryForm(K, 0, [cf])
            for _ in range(k):
                term = term * s_img
            for _ in range(D - k):
                term = term * t_img
            acc = acc + term
        new_cs.extend(acc.coeffs)
    return Section(sec.surface, sec.bidegree, tuple(new_cs))


def test_checkpoint_resume(tmp_path, monkeypatch):
    """Interrupt an exhaustive walk midway; resume must reproduce the
    uninterrupted result."""
    monkeypatch.setattr(census_mod, "CHECKPOINT_EVERY", 64)
    full = exhaustive_census(0, 1, 2, 3, cache_directory=str(tmp_path))
    calls = {"n": 0}
    real = census_mod._classify

    def exploding(sec):
        calls["n"] += 1
        if calls["n"] == 200:
            raise RuntimeError("interrupted")
        return real(sec)

    monkeypatch.setattr(census_mod, "_classify", exploding)
    with pytest.raises(RuntimeError):
        exhaustive_census(0, 1, 2, 3, cache_directory=str(tmp_path))
    monkeypatch.setattr(census_mod, "_classify", real)
    resumed = exhaustive_census(0, 1, 2, 3, resume=True,
                                cache_directory=str(tmp_path))
    assert resumed.smooth_count == full.smooth_count
    assert resumed.point_counts == full.point_counts
    assert resumed.total == full.total


def test_mc_convergence_d30_vs_d60():
    """The d=30 and d=60 estimates agree within the sum of 3-sigma radii."""
    samples = scale(4000, 100000)
    r30 = mc_census(0, 2, 30, 2, samples, seed=60, threads=2)
    r60 = mc_census(0, 2, 60, 2, samples, seed=61, threads=2)
    f30, f60 = float(r30.smooth_fraction()), float(r60.smooth_fraction())
    import math
    s30 = 3 * math.sqrt(f30 * (1 - f30) / r30.nonzero_total)
    s60 = 3 * math.sqrt(f60 * (1 - f60) / r60.nonzero_total)
    assert abs(f30 - f60) <= s30 + s60


def test_payload_roundtrip():
    r = exhaustive_census(0, 2, 3, 2)
    payload = r.to_payload()
    assert payload["smooth_fraction"] == str(r.smooth_fraction())
    assert payload["mode"] == {"kind": "exhaustive"}
