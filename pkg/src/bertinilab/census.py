"""Exhaustive and Monte Carlo censuses of curve sections on F_a.

Exhaustive mode walks every nonzero section of a bidegree (odometer order
over the canonical basis, restartable); Monte Carlo mode draws i.i.d.
sections from counter-based streams keyed (seed, index), so results are
independent of chunking.  Smooth fractions exclude the zero section from
the denominator; its count is reported separately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .gf import GFError, CapExceeded, field_new
from .poly import multiple_root_locus
from .hirzebruch import (Surface, Bidegree, Section, ClosedFiber,
                         section_space_dim, random_section, canonical_fiber)
from .smoothcheck import singular_fibers, count_points
from . import records

WILSON_Z99 = 2.5758293035489004
EXHAUSTIVE_CAP = 1 << 25
CHECKPOINT_EVERY = 1 << 20


def wilson_interval(k: int, n: int, z: float = WILSON_Z99) -> tuple[float, float]:
    """(center, radius) of the Wilson score interval for k successes of n."""
    if n == 0:
        return (0.0, 1.0)
    p = k / n
    denom = 1 + z * z / n
    center = (p + z * z / (2 * n)) / denom
    radius = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom
    return (center, radius)


@dataclass
class CensusResult:
    a: int
    n: int
    d: int
    q: int
    total: int
    zero_count: int
    smooth_count: int
    point_counts: dict  # {#C(F_q): count} among smooth sections
    mode: dict

    @property
    def nonzero_total(self) -> int:
        return self.total - self.zero_count

    def smooth_fraction(self) -> Fraction:
        if self.nonzero_total == 0:
            raise GFError("no nonzero sections examined")
        return Fraction(self.smooth_count, self.nonzero_total)

    def pmf(self) -> dict:
        if self.smooth_count == 0:
            return {}
        return {k: Fraction(v, self.smooth_count)
                for k, v in sorted(self.point_counts.items())}

    def smooth_ci(self) -> tuple[float, float]:
        return wilson_interval(self.smooth_count, self.nonzero_total)

    def pmf_ci(self) -> dict:
        return {k: wilson_interval(v, self.smooth_count)
                for k, v in sorted(self.point_counts.items())}

    def to_payload(self) -> dict:
        out = {
            "a": self.a, "n": self.n, "d": self.d, "q": self.q,
            "total": self.total, "zero_count": self.zero_count,
            "smooth_count": self.smooth_count,
            "smooth_fraction": str(self.smooth_fraction()),
            "smooth_fraction_float": float(self.smooth_fraction()),
            "point_counts": {str(k): v for k, v in sorted(self.point_counts.items())},
            "pmf": {str(k): str(w) for k, w in self.pmf().items()},
            "mode": self.mode,
        }
        if self.mode.get("kind") == "montecarlo":
            c, r = self.smooth_ci()
            out["smooth_wilson99"] = {"center": c, "radius": r}
            out["pmf_wilson99"] = {str(k): {"center": c2, "radius": r2}
                                   for k, (c2, r2) in self.pmf_ci().items()}
        return out


def _surface(a: int, q: int) -> Surface:
    from .localfactor import _field_for_q
    return Surface(a, _field_for_q(q))


def _decode_section(surface: Surface, bid: Bidegree, dim: int, v: int) -> Section:
    K = surface.field
    cs = []
    for _ in range(dim):
        cs.append(K.decode_int(v % K.q))
        v //= K.q
    return Section(surface, bid, tuple(cs))


def _classify(sec: Section) -> tuple[bool, int | None]:
    """(smooth?, #C(F_q) if smooth) for a nonzero section."""
    if sec.bidegree.i == 0:
        # the curve is a union of fibers: smooth iff the form is squarefree
        A = sec.coefficient_form(sec.bidegree.i)
        smooth = multiple_root_locus(A).n == 0
    else:
        smooth = singular_fibers(sec).is_smooth()
    if not smooth:
        return False, None
    return True, count_points(sec, 1)


def exhaustive_census(a: int, n: int, d: int, q: int,
                      resume: bool = False,
                      cache_directory: str | None = None) -> CensusResult:
    """Walk every section of bidegree (n, d) on F_a over F_q."""
    S = _surface(a, q)
    bid = Bidegree(n, d)
    dim = section_space_dim(S, bid)
    if dim == 0:
        raise GFError("empty section space")
    if q**dim > EXHAUSTIVE_CAP:
        raise CapExceeded(f"exhaustive census size {q}^{dim} exceeds cap")
    total = q**dim

    if a == 0 and q == 2 and n == 2 and d >= 1:
        from ._bulk import census_bulk_q2_n2
        nz, smooth, bins = census_bulk_q2_n2(d)
        assert nz == total - 1
        point_counts = {k: int(v) for k, v in enumerate(bins) if v}
        return CensusResult(a, n, d, q, total, 1, smooth,
                            point_counts, {"kind": "exhaustive"})

    params = {"a": a, "n": n, "d": d, "q": q}
    ckpath = records.checkpoint_path("exhaustive", params, None, cache_directory)
    start = 0
    zero_count = smooth = 0
    point_counts: dict[int, int] = {}
    if resume:
        state = records.load_checkpoint(ckpath)
        if state is not None:
            start = state["next"]
            zero_count = state["zero_count"]
            smooth = state["smooth_count"]
            point_counts = {int(k): v for k, v in state["point_counts"].items()}
    for v in range(start, total):
        if v % CHECKPOINT_EVERY == 0 and v > start:
            records.save_checkpoint(ckpath, {
                "next": v, "zero_count": zero_count, "smooth_count": smooth,
                "point_counts": {str(k): c for k, c in point_counts.items()}})
        if v == 0:
            zero_count += 1
            continue
        sec = _decode_section(S, bid, dim, v)
        ok, pts = _classify(sec)
        if ok:
            smooth += 1
            point_counts[pts] = point_counts.get(pts, 0) + 1
    if ckpath.exists():
        ckpath.unlink()
    return CensusResult(a, n, d, q, total, zero_count, smooth, point_counts,
                        {"kind": "exhaustive"})


def mc_census(a: int, n: int, d: int, q: int, samples: int, seed: int,
              threads: int = 1) -> CensusResult:
    """Monte Carlo census: sample index i draws its coefficients from the
    counter-based stream keyed (seed, i)."""
    if samples < 1:
        raise GFError("samples must be >= 1")
    S = _surface(a, q)
    bid = Bidegree(n, d)
    if section_space_dim(S, bid) == 0:
        raise GFError("empty section space")
    if threads > 1:
        return _mc_census_parallel(a, n, d, q, samples, seed, threads)
    zero_count = smooth = 0
    point_counts: dict[int, int] = {}
    for i in range(samples):
        sec = random_section(S, bid, seed, index=i)
        if sec.is_zero():
            zero_count += 1
            continue
        ok, pts = _classify(sec)
        if ok:
            smooth += 1
            point_counts[pts] = point_counts.get(pts, 0) + 1
    return CensusResult(a, n, d, q, samples, zero_count, smooth, point_counts,
                        {"kind": "montecarlo", "samples": samples, "seed": seed})


def _mc_chunk(args) -> tuple[int, int, dict]:
    a, n, d, q, seed, lo, hi = args
    S = _surface(a, q)
    bid = Bidegree(n, d)
    zero_count = smooth = 0
    point_counts: dict[int, int] = {}
    for i in range(lo, hi):
        sec = random_section(S, bid, seed, index=i)
        if sec.is_zero():
            zero_count += 1
            continue
        ok, pts = _classify(sec)
        if ok:
            smooth += 1
            point_counts[pts] = point_counts.get(pts, 0) + 1
    return zero_count, smooth, point_counts


def _mc_census_parallel(a, n, d, q, samples, seed, threads) -> CensusResult:
    from concurrent.futures import ProcessPoolExecutor
    chunk = max(1, samples // (threads * 4))
    jobs = [(a, n, d, q, seed, lo, min(lo + chunk, samples))
            for lo in range(0, samples, chunk)]
    zero_count = smooth = 0
    point_counts: dict[int, int] = {}
    with ProcessPoolExecutor(max_workers=threads) as ex:
        for zc, sm, pc in ex.map(_mc_chunk, jobs):
            zero_count += zc
            smooth += sm
            for k, v in pc.items():
                point_counts[k] = point_counts.get(k, 0) + v
    return CensusResult(a, n, d, q, samples, zero_count, smooth, point_counts,
                        {"kind": "montecarlo", "samples": samples, "seed": seed})


def convergence_table(a: int, n: int, q: int, d_list: list[int], mode: str,
                      samples: int = 100000, seed: int = 0,
                      threads: int = 1) -> list[dict]:
    """Rows (d, smooth fraction, error bar) ordered by d.  Exhaustive rows
    are exact (error 0); Monte Carlo rows carry the 99% Wilson radius."""
    rows = []
    for d in sorted(d_list):
        if mode == "exhaustive":
            res = exhaustive_census(a, n, d, q)
            err = 0.0
        elif mode == "montecarlo":
            res = mc_census(a, n, d, q, samples, seed, threads=threads)
            err = res.smooth_ci()[1]
        else:
            raise GFError(f"unknown mode {mode!r}")
        rows.append({
            "d": d,
            "smooth_fraction": str(res.smooth_fraction()),
            "smooth_fraction_float": float(res.smooth_fraction()),
            "error": err,
            "smooth_count": res.smooth_count,
            "nonzero_total": res.nonzero_total,
        })
    return rows


def doubled_fiber_probability(a: int, n: int, d: int, q: int,
                              fiber: ClosedFiber | None = None) -> Fraction:
    """Exact probability that a uniform section of bidegree (n, d) is
    divisible by the square of the given fiber (degree-e fibers give
    q^(dim(n, d-2e) - dim(n, d)); zero when no nonzero multiple exists)."""
    S = _surface(a, q)
    if fiber is None:
        fiber = canonical_fiber(S.field, 1)
    e = fiber.degree
    dim = section_space_dim(S, Bidegree(n, d))
    if dim == 0:
        raise GFError("empty section space")
    dim2 = section_space_dim(S, Bidegree(n, d - 2 * e))
    if dim2 == 0:
        return Fraction(0)
    return Fraction(1, q ** (dim - dim2))
