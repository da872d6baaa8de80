"""Hirzebruch surfaces F_a: Cox-ring sections, fibers of the ruling, jets.

Cox ring F_q[x, y, s, t] with gradings deg x = (1,0), deg s = deg t = (0,1),
deg y = (1,-a).  Sections of bidegree (i, j) are spanned by the monomials
x^alpha y^beta s^gamma t^delta with alpha + beta = i and
gamma + delta = j + a*beta.

Closed fibers of the ruling are irreducible binary forms r(s, t), carried in
a canonical presentation: the homogenization of a monic irreducible r(s)
(trivialized on the t = 1 chart), plus the single leftover fiber r = t on
the s = 1 chart.  All fibers flow through the same jet code path.

Restriction to a doubled fiber produces the pair (F1, F2) of degree-i forms
over the residue field: F1 is the section reduced mod r coefficientwise, F2
is (section - lift(F1))/r mod r, where the lift takes the canonical
degree-(< e) polynomial representatives.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Optional

import numpy as np

from .gf import (FieldCtx, GFError, CapExceeded, ENUM_CAP, divisors,
                 field_new, ext_field, residue_field, _prime_factors)
from .poly import UniPoly, BinaryForm, is_irreducible


@dataclass(frozen=True)
class Surface:
    """The Hirzebruch surface F_a over an explicit finite field (F_0 = P^1 x P^1)."""
    a: int
    field: FieldCtx

    def __post_init__(self):
        if self.a < 0:
            raise GFError("Hirzebruch twist a must be >= 0")

    @property
    def q(self) -> int:
        return self.field.q

    def point_count(self, e: int = 1) -> int:
        return (self.q**e + 1) ** 2

    def __repr__(self):
        return f"F_{self.a}/GF({self.q})"


@dataclass(frozen=True)
class Bidegree:
    """Divisor class i*D_h + j*D_v."""
    i: int
    j: int


class Monomial(NamedTuple):
    alpha: int  # power of x
    beta: int   # power of y
    gamma: int  # power of s
    delta: int  # power of t


def section_basis(surface: Surface, bidegree: Bidegree) -> list[Monomial]:
    """Canonical monomial basis, graded lexicographic in (beta, gamma)."""
    i, j, a = bidegree.i, bidegree.j, surface.a
    out: list[Monomial] = []
    if i < 0:
        return out
    for beta in range(i + 1):
        d = j + a * beta
        for gamma in range(d + 1):
            out.append(Monomial(i - beta, beta, gamma, d - gamma))
    return out


def section_space_dim(surface: Surface, bidegree: Bidegree) -> int:
    i, j, a = bidegree.i, bidegree.j, surface.a
    if i < 0:
        return 0
    return sum(max(0, j + a * beta + 1) for beta in range(i + 1))


@dataclass(frozen=True)
class Section:
    """A bihomogeneous Cox-ring element, as coefficients on the canonical basis."""
    surface: Surface
    bidegree: Bidegree
    coeffs: tuple

    def __post_init__(self):
        n = section_space_dim(self.surface, self.bidegree)
        if len(self.coeffs) != n:
            raise GFError(f"expected {n} coefficients, got {len(self.coeffs)}")

    def is_zero(self) -> bool:
        K = self.surface.field
        return all(K.is_zero(c) for c in self.coeffs)

    def basis(self) -> list[Monomial]:
        return section_basis(self.surface, self.bidegree)

    def coefficient_form(self, beta: int) -> BinaryForm:
        """The (s,t)-form multiplying x^(i-beta) y^beta (degree j + a*beta)."""
        K = self.surface.field
        i, j, a = self.bidegree.i, self.bidegree.j, self.surface.a
        d = j + a * beta
        if d < 0:
            return BinaryForm.zero(K, 0)
        # basis is ordered by (beta, gamma); find this beta's slice
        offset = sum(max(0, j + a * b + 1) for b in range(beta))
        cs = self.coeffs[offset: offset + d + 1]
        # basis entry gamma has monomial s^gamma t^(d-gamma): u = s, v = t
        return BinaryForm(K, d, list(cs))

    def eval(self, x, y, s, t, ctx: Optional[FieldCtx] = None):
        """Evaluate at Cox coordinates in an extension containing the base field."""
        K = ctx or self.surface.field
        acc = K.zero
        for m, c in zip(self.basis(), self.coeffs):
            if self.surface.field.is_zero(c):
                continue
            term = K.embed(c) if K is not self.surface.field else c
            term = K.mul(term, K.pow(x, m.alpha))
            term = K.mul(term, K.pow(y, m.beta))
            term = K.mul(term, K.pow(s, m.gamma))
            term = K.mul(term, K.pow(t, m.delta))
            acc = K.add(acc, term)
        return acc

    def scale(self, c) -> "Section":
        K = self.surface.field
        return Section(self.surface, self.bidegree,
                       tuple(K.mul(c, a) for a in self.coeffs))

    def to_json(self) -> str:
        K = self.surface.field
        return json.dumps({
            "a": self.surface.a, "q": K.q,
            "i": self.bidegree.i, "j": self.bidegree.j,
            "coeffs": [K.encode_int(c) for c in self.coeffs],
        })

    @classmethod
    def from_json(cls, text: str) -> "Section":
        doc = json.loads(text)
        q = doc["q"]
        fac = _prime_factors(q)
        if len(fac) != 1:
            raise GFError(f"{q} is not a prime power")
        p = fac[0]
        k = 0
        qq = q
        while qq > 1:
            qq //= p
            k += 1
        K = field_new(p, k)
        surf = Surface(doc["a"], K)
        coeffs = tuple(K.decode_int(v) for v in doc["coeffs"])
        return cls(surf, Bidegree(doc["i"], doc["j"]), coeffs)


# ----------------------------------------------------------------------
# closed fibers of the ruling

@dataclass(frozen=True)
class ClosedFiber:
    """An irreducible base point of the ruling, as a monic binary form r(s,t).

    chart records the trivialization: "t" means t = 1 with chart variable
    u = s (the form is the homogenization of a monic irreducible r(s)),
    "s" means s = 1 with u = t (only for the fiber r = t).
    """
    field: FieldCtx
    form: BinaryForm
    degree: int
    chart: str

    @classmethod
    def from_unipoly(cls, rhat: UniPoly, trusted: bool = False) -> "ClosedFiber":
        """Fiber from a monic irreducible polynomial r(s) in F_q[s]."""
        K = rhat.ctx
        if rhat.degree < 1 or rhat.lc() != K.one:
            raise GFError("fiber polynomial must be monic of degree >= 1")
        if not trusted and not is_irreducible(rhat):
            raise GFError("fiber polynomial must be irreducible")
        return cls(K, BinaryForm.from_unipoly(rhat, rhat.degree), rhat.degree, "t")

    @classmethod
    def from_form(cls, form: BinaryForm, trusted: bool = False) -> "ClosedFiber":
        """Fiber from an irreducible binary form (any scalar multiple)."""
        K = form.ctx
        if form.is_zero() or form.n < 1:
            raise GFError("fiber form must be nonzero of degree >= 1")
        if form.val_v() == form.n:
            if form.n != 1:
                raise GFError("fiber form must be irreducible")
            return cls.infinity(K)
        if form.val_v() > 0:
            raise GFError("fiber form must be irreducible")
        rhat = form.to_unipoly().monic()
        if rhat.degree != form.n:
            raise GFError("fiber form must be irreducible")  # divisible by t
        return cls.from_unipoly(rhat, trusted=trusted)

    @classmethod
    def infinity(cls, field: FieldCtx) -> "ClosedFiber":
        """The single fiber not covered by monic r(s): the zero locus of t."""
        return cls(field, BinaryForm(field, 1, [field.one]), 1, "s")

    def chart_poly(self) -> UniPoly:
        """The defining polynomial r(u), monic, in the chart variable
        (u = s on the t = 1 chart, u = t on the s = 1 chart)."""
        K = self.field
        if self.chart == "t":
            return self.form.to_unipoly().monic()
        return UniPoly(K, list(reversed(self.form.coeffs))).monic()

    def mirrored(self) -> "ClosedFiber":
        """The same fiber carried on the opposite trivialization chart
        (valid when the fiber avoids the other chart's locus)."""
        other = "s" if self.chart == "t" else "t"
        if self.chart_poly_degenerate(other):
            raise GFError("fiber meets the other chart's locus")
        return ClosedFiber(self.field, self.form, self.degree, other)

    def chart_poly_degenerate(self, chart: str) -> bool:
        K = self.field
        if chart == "t":
            return K.is_zero(self.form.coeffs[self.form.n])
        return K.is_zero(self.form.coeffs[0])

    def residue_field(self) -> FieldCtx:
        if self.degree == 1:
            return self.field
        return residue_field(self.field, self.chart_poly().coeffs)

    def sort_key(self):
        return (self.degree, self.chart, self.form.to_unipoly().encode_int())

    def label(self) -> str:
        K = self.field
        terms = []
        for idx in range(self.form.n, -1, -1):
            c = self.form.coeffs[idx]
            if K.is_zero(c):
                continue
            parts = []
            if c != K.one:
                parts.append(str(K.encode_int(c)))
            if idx:
                parts.append("s" if idx == 1 else f"s^{idx}")
            if self.form.n - idx:
                k = self.form.n - idx
                parts.append("t" if k == 1 else f"t^{k}")
            terms.append("*".join(parts) or "1")
        return " + ".join(terms)

    def __repr__(self):
        return f"ClosedFiber({self.label()}; deg {self.degree})"


def fibers_of_degree(field: FieldCtx, e: int):
    """All closed fibers of degree exactly e, canonical order (infinity last)."""
    if e < 1:
        raise GFError("degree must be >= 1")
    q = field.q
    if e == 1:
        for v in range(q):
            yield ClosedFiber.from_unipoly(
                UniPoly(field, [field.decode_int(v), field.one]), trusted=True)
        yield ClosedFiber.infinity(field)
        return
    if q**e > ENUM_CAP:
        raise CapExceeded(f"enumerating degree-{e} fibers over GF({q}) exceeds cap")
    for v in range(q**e):
        cs = []
        w = v
        for _ in range(e):
            cs.append(field.decode_int(w % q))
            w //= q
        rhat = UniPoly(field, cs + [field.one])
        if is_irreducible(rhat):
            yield ClosedFiber.from_unipoly(rhat, trusted=True)


def canonical_fiber(field: FieldCtx, e: int) -> ClosedFiber:
    """The first degree-e fiber in canonical order (e = 1 gives r = s)."""
    return next(iter(fibers_of_degree(field, e)))


@dataclass(frozen=True)
class FiberJet:
    """Restriction of a section to a doubled fiber: the pair (F1, F2) of
    degree-i forms in the fiber coordinates (x, y) over F_{q^e}."""
    fiber: ClosedFiber
    ext: FieldCtx
    F1: BinaryForm
    F2: BinaryForm


def restrict_to_fiber_jet(section: Section, fiber: ClosedFiber) -> FiberJet:
    """Split f mod r^2 as iota(F1) + r * iota(F2), where iota is the
    coefficient-field lift of F_{q^e} into F_q[u]/(r^2) (the Hensel lift of
    the residue root; equivalently, canonical representatives corrected by
    -P'(u) r/r'(u)).  This is the F_q-linear section for which goodness of
    (F1, F2) is exactly smoothness of the curve along the fiber: with the
    plain representative lift the base-direction derivative picks up the
    extra term P'(u)/r'(u) and the gcd criterion would misclassify."""
    i = section.bidegree.i
    if i < 0:
        raise GFError("fiber restriction needs i >= 0")
    K = section.surface.field
    if fiber.field is not K:
        raise GFError("fiber and section live over different fields")
    rhat = fiber.chart_poly()
    e = fiber.degree
    ext = fiber.residue_field()
    if K.q == 2:
        # int-encoded fast path: for p = 2 the residue elements are the
        # same bitmask ints in every representation mode
        from . import _gf2poly as g2
        rint = rhat._enc2()
        r2int = g2.mul(rint, rint)
        inv_rp = g2.invmod(g2.mod(g2.derivative(rint), rint), rint) if e > 1 else 0
        f1, f2 = [], []
        for beta in range(i + 1):
            c = section.coefficient_form(beta)
            cs = c.coeffs if fiber.chart == "t" else tuple(reversed(c.coeffs))
            v = 0
            for k, bit in enumerate(cs):
                if bit:
                    v |= 1 << k
            m2 = g2.mod(v, r2int)
            low = g2.mod(m2, rint)
            high = g2.divmod_(m2 ^ low, rint)[0]
            if e > 1:
                corr = g2.mulmod(g2.mod(g2.derivative(low), rint), inv_rp, rint)
                high ^= corr
            f1.append(low)
            f2.append(high)
        F1 = BinaryForm(ext, i, [f1[i - alpha] for alpha in range(i + 1)])
        F2 = BinaryForm(ext, i, [f2[i - alpha] for alpha in range(i + 1)])
        return FiberJet(fiber, ext, F1, F2)
    r2 = rhat * rhat
    inv_rp = None
    if e > 1:
        rp = rhat.derivative() % rhat
        inv_rp = ext.inv(ext.from_coords(list(rp.coeffs)))
    f1, f2 = [], []
    for beta in range(i + 1):
        c = section.coefficient_form(beta)
        if fiber.chart == "t":
            chat = UniPoly(K, c.coeffs)
        else:
            chat = UniPoly(K, list(reversed(c.coeffs)))
        m2 = chat % r2
        low = m2 % rhat
        high = (m2 - low) // rhat
        if e == 1:
            f1.append(low[0])
            f2.append(high[0])
        else:
            f1.append(ext.from_coords(list(low.coeffs)))
            h = ext.from_coords(list(high.coeffs))
            corr = ext.from_coords(list((low.derivative() % rhat).coeffs))
            f2.append(ext.add(h, ext.mul(corr, inv_rp)))
    # coefficient of x^alpha y^(i - alpha) at index alpha: u = x, v = y
    F1 = BinaryForm(ext, i, [f1[i - alpha] for alpha in range(i + 1)])
    F2 = BinaryForm(ext, i, [f2[i - alpha] for alpha in range(i + 1)])
    return FiberJet(fiber, ext, F1, F2)


# ----------------------------------------------------------------------
# points

def proj_line_points(ctx: FieldCtx) -> list[tuple]:
    """Normalized representatives of P^1(ctx): (c, 1) then (1, 0)."""
    if ctx.q > ENUM_CAP:
        raise CapExceeded("P^1 point enumeration exceeds cap")
    pts = [(x, ctx.one) for x in ctx.elements()]
    pts.append((ctx.one, ctx.zero))
    return pts


def rational_points(surface: Surface, e: int = 1) -> list[tuple]:
    """All F_{q^e}-points in normalized Cox coordinates (x, y, s, t)."""
    if e < 1:
        raise GFError("extension degree must be >= 1")
    K = surface.field
    if (K.q**e + 1) ** 2 > ENUM_CAP:
        raise CapExceeded("point enumeration exceeds cap")
    E = ext_field(K, e)
    p1 = proj_line_points(E)
    return [(x, y, s, t) for (x, y) in p1 for (s, t) in p1]


@dataclass(frozen=True)
class ClosedPoint:
    """A closed point of the surface, as a representative over F_{q^e}."""
    surface: Surface
    ext: FieldCtx
    coords: tuple  # (x, y, s, t) normalized representative
    degree: int

    @classmethod
    def from_coords(cls, surface: Surface, ext: FieldCtx, coords) -> "ClosedPoint":
        coords = _normalize_point(ext, tuple(coords))
        deg = _point_degree(surface, ext, coords)
        return cls(surface, ext, coords, deg)


def _normalize_point(E: FieldCtx, pt: tuple) -> tuple:
    x, y, s, t = pt
    if E.is_zero(x) and E.is_zero(y):
        raise GFError("(x, y) must not both vanish")
    if E.is_zero(s) and E.is_zero(t):
        raise GFError("(s, t) must not both vanish")
    if not E.is_zero(y):
        c = E.inv(y)
        x, y = E.mul(x, c), E.one
    else:
        x, y = E.one, E.zero
    if not E.is_zero(t):
        c = E.inv(t)
        s, t = E.mul(s, c), E.one
    else:
        s, t = E.one, E.zero
    return (x, y, s, t)


def _point_degree(surface: Surface, E: FieldCtx, pt: tuple) -> int:
    """Least f with Frobenius^f fixing the normalized point."""
    e = E.k // surface.field.k
    for f in divisors(e):
        q_to_f = surface.field.q ** f
        im = tuple(E.pow(c, q_to_f) for c in pt)
        if _normalize_point(E, im) == pt:
            return f
    return e


# ----------------------------------------------------------------------
# reproducible randomness

def _philox(seed: int, index: int = 0) -> np.random.Generator:
    key = np.array([seed % (1 << 64), index % (1 << 64)], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def random_section(surface: Surface, bidegree: Bidegree, seed: int,
                   index: int = 0) -> Section:
    """Uniform random section, from a counter-based stream keyed by
    (seed, index): identical output for identical keys on any platform."""
    dim = section_space_dim(surface, bidegree)
    if dim == 0:
        raise GFError("empty section basis")
    K = surface.field
    gen = _philox(seed, index)
    vals = gen.integers(0, K.q, size=dim)
    return Section(surface, bidegree, tuple(K.decode_int(int(v)) for v in vals))
