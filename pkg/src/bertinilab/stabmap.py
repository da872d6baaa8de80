"""Restriction of section spaces to doubled fibers, as exact linear algebra
over F_q: image stabilization in the base degree, rank additivity over
disjoint fibers, and the local smoothness factor recomputed by enumerating
the stabilized image."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .gf import FieldCtx, GFError, CapExceeded
from .poly import BinaryForm, form_gcd, form_factor, multiple_root_locus
from .hirzebruch import (Surface, Bidegree, ClosedFiber, Section,
                         section_basis, section_space_dim,
                         restrict_to_fiber_jet)
from .smoothcheck import is_good_pair
from .hirzebruch import FiberJet

IMAGE_ENUM_CAP = 1 << 24
STABILIZATION_WINDOW = 10
D_SCAN_CAP = 200


@dataclass(frozen=True)
class RestrictionTarget:
    """A disjoint union of doubled closed fibers (pairwise distinct)."""
    fibers: tuple

    def __post_init__(self):
        keys = [f.sort_key() for f in self.fibers]
        if len(set(keys)) != len(keys):
            raise GFError("target fibers must be pairwise distinct")

    @classmethod
    def of(cls, *fibers: ClosedFiber) -> "RestrictionTarget":
        return cls(tuple(fibers))

    def jet_dim(self, n: int) -> int:
        """F_q-dimension of the jet space: sum of 2(n+1)e over the fibers."""
        return sum(2 * (n + 1) * f.degree for f in self.fibers)


class GFMatrix:
    """Dense matrix over a (tabled) finite field, with exact elimination."""

    def __init__(self, ctx: FieldCtx, rows, row_labels=None, col_labels=None):
        self.ctx = ctx
        self.rows = [list(r) for r in rows]
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        for r in self.rows:
            if len(r) != self.ncols:
                raise GFError("ragged matrix")
        self.row_labels = row_labels
        self.col_labels = col_labels

    def rank(self) -> int:
        if self.ctx.q == 2:
            r_packed = self._rank_packed_gf2()
            r_generic = self._rank_generic()
            assert r_packed == r_generic
            return r_packed
        return self._rank_generic()

    def _rank_generic(self) -> int:
        K = self.ctx
        work = [list(r) for r in self.rows]
        rank = 0
        for col in range(self.ncols):
            piv = None
            for r in range(rank, len(work)):
                if not K.is_zero(work[r][col]):
                    piv = r
                    break
            if piv is None:
                continue
            work[rank], work[piv] = work[piv], work[rank]
            inv = K.inv(work[rank][col])
            prow = work[rank]
            for r in range(len(work)):
                if r == rank or K.is_zero(work[r][col]):
                    continue
                c = K.mul(work[r][col], inv)
                row = work[r]
                for cc in range(col, self.ncols):
                    row[cc] = K.sub(row[cc], K.mul(c, prow[cc]))
            rank += 1
            if rank == len(work):
                break
        return rank

    def _rank_packed_gf2(self) -> int:
        # rows as bit-packed ints, pivoting column by column
        work = []
        for r in self.rows:
            v = 0
            for i, c in enumerate(r):
                if c:
                    v |= 1 << i
            work.append(v)
        rank = 0
        for col in range(self.ncols):
            piv = None
            for r in range(rank, len(work)):
                if (work[r] >> col) & 1:
                    piv = r
                    break
            if piv is None:
                continue
            work[rank], work[piv] = work[piv], work[rank]
            for r in range(len(work)):
                if r != rank and ((work[r] >> col) & 1):
                    work[r] ^= work[rank]
            rank += 1
            if rank == len(work):
                break
        return rank

    def column_space_basis(self) -> list[list]:
        """Columns of the matrix forming a basis of the column space."""
        K = self.ctx
        work = [list(r) for r in self.rows]
        pivots = []
        rank = 0
        for col in range(self.ncols):
            piv = None
            for r in range(rank, len(work)):
                if not K.is_zero(work[r][col]):
                    piv = r
                    break
            if piv is None:
                continue
            work[rank], work[piv] = work[piv], work[rank]
            inv = K.inv(work[rank][col])
            prow = work[rank]
            for r in range(len(work)):
                if r == rank or K.is_zero(work[r][col]):
                    continue
                c = K.mul(work[r][col], inv)
                row = work[r]
                for cc in range(col, self.ncols):
                    row[cc] = K.sub(row[cc], K.mul(c, prow[cc]))
            pivots.append(col)
            rank += 1
            if rank == len(work):
                break
        return [[self.rows[r][c] for r in range(self.nrows)] for c in pivots]

    def solve_affine(self, rhs):
        """Solve M x = rhs: (particular solution, nullspace basis), or None
        if inconsistent."""
        K = self.ctx
        work = [list(r) + [b] for r, b in zip(self.rows, rhs)]
        ncols = self.ncols
        pivots = []
        rank = 0
        for col in range(ncols):
            piv = None
            for r in range(rank, len(work)):
                if not K.is_zero(work[r][col]):
                    piv = r
                    break
            if piv is None:
                continue
            work[rank], work[piv] = work[piv], work[rank]
            inv = K.inv(work[rank][col])
            work[rank] = [K.mul(inv, c) for c in work[rank]]
            for r in range(len(work)):
                if r == rank or K.is_zero(work[r][col]):
                    continue
                c = work[r][col]
                work[r] = [K.sub(a, K.mul(c, b)) for a, b in zip(work[r], work[rank])]
            pivots.append(col)
            rank += 1
        for r in range(rank, len(work)):
            if not K.is_zero(work[r][ncols]):
                return None
        particular = [K.zero] * ncols
        for r, col in enumerate(pivots):
            particular[col] = work[r][ncols]
        free = [c for c in range(ncols) if c not in set(pivots)]
        null_basis = []
        for fc in free:
            vec = [K.zero] * ncols
            vec[fc] = K.one
            for r, col in enumerate(pivots):
                vec[col] = K.neg(work[r][fc])
            null_basis.append(vec)
        return particular, null_basis


# ----------------------------------------------------------------------

def _jet_coords(jet: FiberJet, K: FieldCtx) -> list:
    """F_q-coordinates of a jet: F1 then F2 coefficients, each expanded in
    the residue-field power basis."""
    ext = jet.ext
    out = []
    for F in (jet.F1, jet.F2):
        for c in F.coeffs:
            if ext is K:
                out.append(c)
            else:
                out.extend(ext.coords(c))
    return out


def restriction_matrix(surface: Surface, n: int, d: int,
                       target: RestrictionTarget) -> GFMatrix:
    """Matrix of section space (n, d) -> jets at the doubled target fibers.
    Columns are indexed by the canonical monomial basis, rows by jet
    coordinates (F1 then F2 coefficients per fiber, residue power basis)."""
    K = surface.field
    bid = Bidegree(n, d)
    basis = section_basis(surface, bid)
    if not basis:
        raise GFError("empty section basis")
    cols = []
    dim = len(basis)
    for k in range(dim):
        coeffs = [K.zero] * dim
        coeffs[k] = K.one
        sec = Section(surface, bid, tuple(coeffs))
        col = []
        for fib in target.fibers:
            col.extend(_jet_coords(restrict_to_fiber_jet(sec, fib), K))
        cols.append(col)
    nrows = len(cols[0]) if cols else 0
    rows = [[cols[c][r] for c in range(dim)] for r in range(nrows)]
    return GFMatrix(K, rows, col_labels=basis)


def stabilized_rank(surface: Surface, n: int, target: RestrictionTarget,
                    window: int = STABILIZATION_WINDOW,
                    d_start: int = 0, d_cap: int = D_SCAN_CAP):
    """Scan d upward until the restriction rank is constant over a window;
    returns (d_star, rank) with d_star the first degree of the stable window."""
    if not target.fibers:
        return (d_start, 0)
    ranks: list[int] = []
    for d in range(d_start, d_cap + 1):
        ranks.append(restriction_matrix(surface, n, d, target).rank())
        if len(ranks) >= window and len(set(ranks[-window:])) == 1:
            return (d - window + 1, ranks[-1])
    err = CapExceeded(f"no stabilization by d = {d_cap}")
    err.partial_ranks = ranks
    raise err


def _enumerate_forms(E: FieldCtx, n: int):
    Q = E.q
    for v in range(Q ** (n + 1)):
        cs = []
        w = v
        for _ in range(n + 1):
            cs.append(E.decode_int(w % Q))
            w //= Q
        yield BinaryForm(E, n, cs)


def _good_count_full_space(E: FieldCtx, n: int) -> int:
    """Number of good pairs over E, by enumerating F1 and counting the bad
    F2 for each via inclusion-exclusion over the multiple-root orbits."""
    Q = E.q
    nf = Q ** (n + 1)
    good = 0
    for F1 in _enumerate_forms(E, n):
        if F1.is_zero():
            continue
        D = multiple_root_locus(F1)
        if D.n == 0:
            good += nf
            continue
        orbits = [g.n for g, _m in form_factor(D)]
        bad = 0
        for r in range(1, len(orbits) + 1):
            for sub in itertools.combinations(orbits, r):
                cnt = Q ** max(0, n + 1 - sum(sub))
                bad += cnt if r % 2 == 1 else -cnt
        good += nf - bad
    return good


def local_factor_from_image(surface: Surface, n: int, fiber: ClosedFiber,
                            enum_cap: int = IMAGE_ENUM_CAP) -> Fraction:
    """Fraction of the stabilized restriction image whose jet is good; by
    the jet bijection this equals the limiting local smoothness factor."""
    if n < 1:
        raise GFError("n must be >= 1")
    K = surface.field
    target = RestrictionTarget.of(fiber)
    d_star, rank = stabilized_rank(surface, n, target)
    e = fiber.degree
    full = 2 * (n + 1) * e * K.k
    if K.q ** rank > enum_cap and rank != full:
        raise CapExceeded(f"image enumeration q^{rank} exceeds cap")
    ext = fiber.residue_field()
    if rank == full:
        good = _good_count_full_space(ext, n)
        return Fraction(good, ext.q ** (2 * (n + 1)))
    # partial image: enumerate all F_q-combinations of a column-space basis
    mat = restriction_matrix(surface, n, d_star, target)
    basis_vecs = mat.column_space_basis()
    good = total = 0
    for combo in itertools.product(K.elements(), repeat=len(basis_vecs)):
        vec = [K.zero] * (2 * (n + 1) * e * K.k)
        for c, bv in zip(combo, basis_vecs):
            if K.is_zero(c):
                continue
            vec = [K.add(a, K.mul(c, b)) for a, b in zip(vec, bv)]
        jet = _jet_from_coords(fiber, ext, n, vec, K)
        total += 1
        if is_good_pair(jet):
            good += 1
    return Fraction(good, total)


def _jet_from_coords(fiber: ClosedFiber, ext: FieldCtx, n: int,
                     vec: list, K: FieldCtx) -> FiberJet:
    e = fiber.degree
    coeffs = []
    idx = 0
    for _ in range(2 * (n + 1)):
        if ext is K:
            coeffs.append(vec[idx])
            idx += 1
        else:
            coeffs.append(ext.from_coords(vec[idx: idx + e]))
            idx += e
    F1 = BinaryForm(ext, n, coeffs[: n + 1])
    F2 = BinaryForm(ext, n, coeffs[n + 1:])
    return FiberJet(fiber, ext, F1, F2)
