import pytest

from bertinilab.gf import field_new, GFError
from bertinilab.poly import BinaryForm
from bertinilab.hirzebruch import (Surface, Bidegree, FiberJet, random_section,
                                   canonical_fiber, fibers_of_degree,
                                   restrict_to_fiber_jet)
from bertinilab.smoothcheck import (is_good_pair, singular_fibers,
                                    brute_force_is_smooth, count_points,
                                    candidate_degree_bound,
                                    batch_singular_degrees,
                                    witness_point_degrees)
from bertinilab.localfactor import good_pair_count
from conftest import make_section, scale


def _jet(K, e, f1, f2):
    from bertinilab.gf import ext_field
    E = ext_field(K, e)
    fib = canonical_fiber(K, e)
    n = len(f1) - 1
    return FiberJet(fib, E, BinaryForm(E, n, f1), BinaryForm(E, n, f2))


def test_is_good_pair_examples(F2, F3):
    # F1 = u v squarefree: good for any F2
    assert is_good_pair(_jet(F3, 1, [0, 1, 0], [1, 2, 1]))
    # F1 = u^2, F2 = u + v: the double root (0:1) is not a root of F2
    assert is_good_pair(_jet(F3, 1, [0, 0, 1], [1, 1, 0]))
    # F1 = u^2, F2 = u: common point (0:1)
    assert not is_good_pair(_jet(F3, 1, [0, 0, 1], [0, 1, 0]))
    # F1 = 0 always fails
    assert not is_good_pair(_jet(F3, 1, [0, 0, 0], [0, 1, 0]))
    # F2 = 0 fails exactly when F1 has a multiple root
    assert not is_good_pair(_jet(F2, 1, [0, 0, 1], [0, 0, 0]))
    assert is_good_pair(_jet(F2, 1, [0, 1, 1], [0, 0, 0]))


def test_singular_fibers_examples(S0):
    # f = x t + y s: smooth, empty fiber list
    rep = singular_fibers(make_section(
        S0, Bidegree(1, 1), {(1, 0, 0, 1): 1, (0, 1, 1, 0): 1}))
    assert rep.verdict == "smooth" and rep.singular_fibers == []
    # f = x s: singular with the fiber s reported
    rep = singular_fibers(make_section(S0, Bidegree(1, 1), {(1, 0, 1, 0): 1}))
    assert rep.verdict == "singular"
    assert [f.label() for f in rep.singular_fibers] == ["s"]
    # f = (x t + y s)^2: non-reduced
    rep = singular_fibers(make_section(
        S0, Bidegree(2, 2), {(2, 0, 0, 2): 1, (0, 2, 2, 0): 1}))
    assert rep.verdict == "non_reduced"


def test_singular_fibers_validation(S0):
    with pytest.raises(GFError):
        singular_fibers(make_section(S0, Bidegree(0, 1), {(0, 0, 1, 0): 1}))
    with pytest.raises(GFError):
        singular_fibers(make_section(S0, Bidegree(1, 1), {}))


def test_inseparable_char2_cases(S0):
    # x^2 s + y^2 t is reduced and smooth despite vanishing x,y-partials
    rep = singular_fibers(make_section(
        S0, Bidegree(2, 1), {(2, 0, 1, 0): 1, (0, 2, 0, 1): 1}))
    assert rep.verdict == "smooth"
    # (x^2 s + y^2 t)(x t + y s): singular exactly over s + t, s^2 + st + t^2
    rep = singular_fibers(make_section(
        S0, Bidegree(3, 2),
        {(3, 0, 1, 1): 1, (2, 1, 2, 0): 1, (1, 2, 0, 2): 1, (0, 3, 1, 1): 1}))
    assert rep.verdict == "singular"
    assert sorted(f.label() for f in rep.singular_fibers) == \
        ["s + t", "s^2 + s*t + t^2"]
    assert witness_point_degrees(rep) == [1, 2]


def test_brute_force_examples(S0):
    f = make_section(S0, Bidegree(1, 1), {(1, 0, 0, 1): 1, (0, 1, 1, 0): 1})
    assert brute_force_is_smooth(f, 4)
    f = make_section(S0, Bidegree(1, 1), {(1, 0, 1, 0): 1})
    assert not brute_force_is_smooth(f, 1)
    f = make_section(S0, Bidegree(2, 2), {(2, 0, 0, 2): 1, (0, 2, 2, 0): 1})
    assert not brute_force_is_smooth(f, 2)  # non-reduced


def test_count_points_examples(S0):
    fx = make_section(S0, Bidegree(1, 0), {(1, 0, 0, 0): 1})
    assert count_points(fx, 1) == 3
    assert count_points(fx, 2) == 5
    f = make_section(S0, Bidegree(1, 1), {(1, 0, 0, 1): 1, (0, 1, 1, 0): 1})
    assert count_points(f, 1) == 3


def test_scaling_invariance():
    K = field_new(3, 1)
    S = Surface(1, K)
    for seed in range(20):
        sec = random_section(S, Bidegree(2, 3), seed)
        if sec.is_zero():
            continue
        rep = singular_fibers(sec)
        rep2 = singular_fibers(sec.scale(K.decode_int(2)))
        assert rep.verdict == rep2.verdict
        assert [f.sort_key() for f in rep.singular_fibers] == \
            [f.sort_key() for f in rep2.singular_fibers]


def test_fiber_locality_exhaustive(S0):
    """A fiber appears in the report iff its jet fails the good-pair test,
    over all nonzero (1,2)-sections and all fibers of degree <= 2."""
    bid = Bidegree(1, 2)
    from bertinilab.hirzebruch import Section
    fibers = list(fibers_of_degree(S0.field, 1)) + list(fibers_of_degree(S0.field, 2))
    for v in range(1, 2**6):
        cs = tuple((v >> k) & 1 for k in range(6))
        sec = Section(S0, bid, cs)
        rep = singular_fibers(sec)
        reported = {f.sort_key() for f in rep.singular_fibers}
        if rep.verdict == "non_reduced":
            continue
        for fib in fibers:
            failing = not is_good_pair(restrict_to_fiber_jet(sec, fib))
            assert failing == (fib.sort_key() in reported), (v, fib)


def test_degree1_fiber_failure_count(S0):
    """Exhaustively over bidegree (2,2) sections: the number whose jet at
    the fiber s fails goodness equals q^dim - good * q^(dim - 2(i+1))."""
    from bertinilab.hirzebruch import Section
    bid = Bidegree(2, 2)
    fib = canonical_fiber(S0.field, 1)
    failures = 0
    for v in range(2**9):
        cs = tuple((v >> k) & 1 for k in range(9))
        sec = Section(S0, bid, cs)
        if not is_good_pair(restrict_to_fiber_jet(sec, fib)):
            failures += 1
    good = good_pair_count(2, 1, 2)
    assert failures == 2**9 - good * 2 ** (9 - 6)


def test_oracle_equivalence_sample():
    """Small randomized slice of the acceptance-grid comparison."""
    for (a, q) in ((0, 2), (2, 2), (1, 3)):
        K = field_new(q, 1)
        S = Surface(a, K)
        for i in (1, 2, 3):
            bid = Bidegree(i, 4)
            secs, caps, reps = [], [], []
            for seed in range(scale(10, 60)):
                sec = random_section(S, bid, seed)
                if sec.is_zero():
                    continue
                rep = singular_fibers(sec)
                if rep.verdict == "non_reduced":
                    continue
                bound = candidate_degree_bound(sec)
                secs.append(sec)
                caps.append(min(bound, 6 if q == 2 else 4))
                reps.append(rep)
            oracle = batch_singular_degrees(S, bid, secs, caps)
            for sec, cap, rep, om in zip(secs, caps, reps, oracle):
                wd = [dd for dd in witness_point_degrees(rep) if dd <= cap]
                assert (min(wd) if wd else None) == om
