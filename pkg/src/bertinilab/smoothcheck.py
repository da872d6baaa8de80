"""Exact smoothness decision for curve sections on F_a.

The fiberwise path classifies a section as smooth / singular / non_reduced:

1. content step: split off the (s,t)-content; a non-squarefree content, a
   repeated bivariate factor, or a p-th power means non_reduced;
2. candidate step: candidate fibers are the irreducible factors of the
   content together with the factors of a container form, a nonzero
   pairwise resultant (in the fiber variables) of the Jacobian list
   [f0, f0_x, f0_y, f0_s, f0_t].  Any singular fiber divides every nonzero
   pairwise resultant, so one container is complete; structural shortcuts
   compute it cheaply in the common shapes, and a deterministic
   randomized-combination fallback covers the remaining degenerate shapes;
3. each candidate fiber is tested with the good-pair criterion on its jet.

An independent brute-force Jacobian oracle enumerates closed points and
checks the section and its four Cox partials (the Euler relations make this
equivalent to the chart criterion in every characteristic).  The oracle
suite certifies candidate completeness empirically.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field

import numpy as np

from .gf import FieldCtx, GFError, CapExceeded, ext_field
from .poly import (UniPoly, BinaryForm, form_gcd, form_factor,
                   multiple_root_locus, factor as poly_factor)
from . import _gf2poly as g2
from .hirzebruch import (Surface, Bidegree, Section, ClosedFiber, FiberJet,
                         section_basis, restrict_to_fiber_jet, rational_points,
                         proj_line_points)

ORACLE_POINT_CAP = 1 << 23


class CandidateSearchError(GFError):
    """All elimination attempts degenerated; certified unreachable by CI."""


# ----------------------------------------------------------------------
# bihomogeneous working form

class XYForm:
    """Section as a form in the fiber coordinates (x, y) with (s,t)-form
    coefficients: coeffs[alpha] multiplies x^alpha y^(m-alpha) and is a
    binary form of degree w + a*(m - alpha)."""

    __slots__ = ("K", "a", "m", "w", "coeffs")

    def __init__(self, K: FieldCtx, a: int, m: int, w: int, coeffs):
        self.K = K
        self.a = a
        self.m = m
        self.w = w
        self.coeffs = list(coeffs)
        assert len(self.coeffs) == m + 1

    @classmethod
    def from_section(cls, sec: Section) -> "XYForm":
        i, j, a = sec.bidegree.i, sec.bidegree.j, sec.surface.a
        K = sec.surface.field
        coeffs = []
        for alpha in range(i + 1):
            beta = i - alpha
            d = j + a * beta
            if d < 0:
                coeffs.append(BinaryForm.zero(K, 0))
            else:
                coeffs.append(sec.coefficient_form(beta))
        return cls(K, a, i, j, coeffs)

    def coeff_degree(self, alpha: int) -> int:
        return self.w + self.a * (self.m - alpha)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def deriv_x(self) -> "XYForm":
        K = self.K
        if self.m == 0:
            return XYForm(K, self.a, 0, self.w, [BinaryForm.zero(K, 0)])
        out = []
        for alpha in range(self.m):
            c = self.coeffs[alpha + 1]
            mult = (alpha + 1) % K.p
            acc = BinaryForm.zero(K, max(c.n, 0))
            for _ in range(mult):
                acc = acc + c
            out.append(acc)
        return XYForm(K, self.a, self.m - 1, self.w, out)

    def deriv_y(self) -> "XYForm":
        K = self.K
        out = []
        for alpha in range(self.m):
            c = self.coeffs[alpha]
            mult = (self.m - alpha) % K.p
            acc = BinaryForm.zero(K, max(c.n, 0))
            for _ in range(mult):
                acc = acc + c
            out.append(acc)
        if not out:
            out = [BinaryForm.zero(K, 0)]
        return XYForm(K, self.a, max(self.m - 1, 0), self.w + self.a, out)

    def _deriv_st(self, which: str) -> "XYForm":
        K = self.K
        out = []
        for alpha in range(self.m + 1):
            c = self.coeffs[alpha]
            if c.n == 0:
                out.append(BinaryForm.zero(K, 0))
                continue
            h = c.deriv_u() if which == "s" else c.deriv_v()
            out.append(h)
        return XYForm(K, self.a, self.m, self.w - 1, out)

    def deriv_s(self) -> "XYForm":
        return self._deriv_st("s")

    def deriv_t(self) -> "XYForm":
        return self._deriv_st("t")

    def content(self) -> BinaryForm:
        """Monic gcd of the nonzero coefficient forms."""
        K = self.K
        g = None
        for c in self.coeffs:
            if c.is_zero():
                continue
            g = c.monic() if g is None else form_gcd(g, c)
            if g.n == 0:
                break
        if g is None:
            raise GFError("content of the zero form")
        return g

    def divexact_form(self, d: BinaryForm) -> "XYForm":
        out = []
        for c in self.coeffs:
            if c.is_zero():
                out.append(BinaryForm.zero(self.K, max(c.n - d.n, 0)))
            else:
                out.append(c.divexact(d))
        return XYForm(self.K, self.a, self.m, self.w - d.n, out)

    def specialize(self, E: FieldCtx, sval, tval) -> BinaryForm:
        """Evaluate the (s,t)-coefficients at a base point over E, giving a
        binary form of formal degree m in (x, y) over E."""
        K = self.K
        out = []
        for alpha in range(self.m + 1):
            c = self.coeffs[alpha]
            if c.is_zero():
                out.append(E.zero)
                continue
            cE = BinaryForm(E, c.n, [E.embed(v) if E is not K else v for v in c.coeffs])
            out.append(cE.eval(sval, tval))
        # out[alpha] multiplies x^alpha: BinaryForm wants u-power index, u = x
        return BinaryForm(E, self.m, out)

    def mul_x(self) -> "XYForm":
        K = self.K
        coeffs = [BinaryForm.zero(K, self.coeff_degree(0) + self.a)] + self.coeffs
        return XYForm(K, self.a, self.m + 1, self.w, coeffs)

    def mul_y(self) -> "XYForm":
        coeffs = self.coeffs + [BinaryForm.zero(self.K, 0)]
        return XYForm(self.K, self.a, self.m + 1, self.w - self.a, coeffs)

    def mul_st(self, which: str) -> "XYForm":
        K = self.K
        mono = BinaryForm(K, 1, [K.zero, K.one] if which == "s" else [K.one])
        out = [mono * c if not c.is_zero() else BinaryForm.zero(K, c.n + 1)
               for c in self.coeffs]
        return XYForm(K, self.a, self.m, self.w + 1, out)

    def add(self, other: "XYForm") -> "XYForm":
        assert self.m == other.m and self.w == other.w
        K = self.K
        out = []
        for c, d in zip(self.coeffs, other.coeffs):
            n = max(c.n, d.n)
            cc = c if not c.is_zero() else BinaryForm.zero(K, n)
            dd = d if not d.is_zero() else BinaryForm.zero(K, n)
            if cc.n != dd.n:  # zero forms with mismatched formal degree
                cc = BinaryForm(K, n, cc.coeffs if cc.n == n else [])
                dd = BinaryForm(K, n, dd.coeffs if dd.n == n else [])
            out.append(cc + dd)
        return XYForm(K, self.a, self.m, self.w, out)

    def scale(self, c) -> "XYForm":
        return XYForm(self.K, self.a, self.m, self.w,
                      [f.scale(c) for f in self.coeffs])


# ----------------------------------------------------------------------
# exact resultants of specialized binary forms (formal degrees respected)

def _form_resultant_formal(G: BinaryForm, H: BinaryForm):
    """Resultant of binary forms with their *formal* degrees, via Gaussian
    elimination on the Sylvester matrix.  Exact over the ctx field."""
    E = G.ctx
    m, n = G.n, H.n
    if m == 0 and n == 0:
        return E.one
    size = m + n
    rows = []
    gc = list(reversed(G.coeffs))  # degree-major
    hc = list(reversed(H.coeffs))
    for k in range(n):
        rows.append([E.zero] * k + gc + [E.zero] * (n - 1 - k))
    for k in range(m):
        rows.append([E.zero] * k + hc + [E.zero] * (m - 1 - k))
    det = E.one
    for col in range(size):
        piv = None
        for r in range(col, size):
            if not E.is_zero(rows[r][col]):
                piv = r
                break
        if piv is None:
            return E.zero
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = E.neg(det)
        det = E.mul(det, rows[col][col])
        inv = E.inv(rows[col][col])
        for r in range(col + 1, size):
            if E.is_zero(rows[r][col]):
                continue
            c = E.mul(rows[r][col], inv)
            for cc in range(col, size):
                rows[r][cc] = E.sub(rows[r][cc], E.mul(c, rows[col][cc]))
    return det


def _interp_eval_field(K: FieldCtx, npoints: int) -> FieldCtx:
    m = 1
    while K.q**m < npoints:
        m += 1
    return ext_field(K, m)


def _resultant_container(g: XYForm, h: XYForm) -> BinaryForm | None:
    """The homogeneous resultant Res_{(x,y)}(g, h) as an (s,t)-form over F_q,
    by evaluation at enough base points and Lagrange interpolation.
    Returns None if identically zero."""
    K = g.K
    D = h.m * g.w + g.m * h.w + g.a * g.m * h.m
    if D < 0:
        return None
    E = _interp_eval_field(K, D + 1)
    lams = []
    vals = []
    it = iter(E.elements())
    for lam in it:
        G = g.specialize(E, lam, E.one)
        H = h.specialize(E, lam, E.one)
        vals.append(_form_resultant_formal(G, H))
        lams.append(lam)
        if len(lams) == D + 1:
            break
    if all(E.is_zero(v) for v in vals):
        # the resultant has degree <= D and vanishes at D+1 points
        return None
    # Lagrange interpolation of the dehomogenized container
    poly = UniPoly.zero(E)
    for k, (lk, vk) in enumerate(zip(lams, vals)):
        if E.is_zero(vk):
            continue
        num = UniPoly.one(E)
        den = E.one
        for jj, lj in enumerate(lams):
            if jj == k:
                continue
            num = num * UniPoly(E, [E.neg(lj), E.one])
            den = E.mul(den, E.sub(lk, lj))
        poly = poly + num.scale(E.mul(vk, E.inv(den)))
    # project back to F_q (coefficients must be in the embedded base field)
    cs = []
    for c in poly.coeffs:
        coords = E.coords(c) if E is not K else (c,)
        if E is not K:
            assert all(K.is_zero(x) for x in coords[1:]), "interpolation left the base field"
            cs.append(coords[0])
        else:
            cs.append(c)
    chat = UniPoly(K, cs)
    if chat.is_zero():
        return BinaryForm(K, D, [])  # pure power of t: t^D
    return BinaryForm.from_unipoly(chat, D)


# ----------------------------------------------------------------------
# container construction (candidate fibers divide the container)

def _f2_form_to_int(F: BinaryForm) -> int:
    v = 0
    for i, c in enumerate(F.coeffs):
        if c:
            v |= 1 << i
    return v


def _f2_int_to_form(K: FieldCtx, v: int, n: int) -> BinaryForm:
    return BinaryForm(K, n, [(v >> i) & 1 for i in range(n + 1)])


def _jacobian_list(f0: XYForm) -> list[XYForm]:
    out = [f0]
    for d in (f0.deriv_x(), f0.deriv_y(), f0.deriv_s(), f0.deriv_t()):
        if not d.is_zero():
            out.append(d)
    return out


def _cheap_container(f0: XYForm) -> BinaryForm | None:
    """Structural shortcuts for the common shapes; None means no shortcut."""
    K = f0.K
    m = f0.m
    if m == 1:
        # singular fibers divide both coefficient forms
        A, B = f0.coeffs[1], f0.coeffs[0]
        if A.is_zero() or B.is_zero():
            nz = B if A.is_zero() else A
            return nz.monic()
        return form_gcd(A, B)
    if K.p == 2 and m == 2:
        # f = x^2 A + xy B + y^2 C: f_x = yB, f_y = xB
        B = f0.coeffs[1]
        if not B.is_zero():
            return B.monic()
        return None
    if K.p == 2 and m == 3:
        # f_x = x^2 A + y^2 C, f_y = x^2 B + y^2 D; Res = (AD + BC)^2
        A, B, C, D = f0.coeffs[3], f0.coeffs[2], f0.coeffs[1], f0.coeffs[0]
        if K.q == 2:
            ad = g2.mul(_f2_form_to_int(A), _f2_form_to_int(D))
            bc = g2.mul(_f2_form_to_int(B), _f2_form_to_int(C))
            w = ad ^ bc
            if w == 0:
                return None
            deg = A.n + D.n
            return _f2_int_to_form(K, w, deg)
        wform = A * D + B * C
        return None if wform.is_zero() else wform.monic()
    return None


def _combination(jac: list[XYForm], f0: XYForm, lams: list) -> XYForm:
    """F_q-combination of x f_x + y f_y + s f_s + t f_t + f, all of type (m, w)."""
    terms = [f0]
    fx, fy, fs, ft = f0.deriv_x(), f0.deriv_y(), f0.deriv_s(), f0.deriv_t()
    if not fx.is_zero():
        terms.append(fx.mul_x())
    if not fy.is_zero():
        terms.append(fy.mul_y())
    if not fs.is_zero():
        terms.append(fs.mul_st("s"))
    if not ft.is_zero():
        terms.append(ft.mul_st("t"))
    acc = None
    for lam, t in zip(lams, terms):
        if f0.K.is_zero(lam):
            continue
        t = t.scale(lam)
        acc = t if acc is None else acc.add(t)
    return acc if acc is not None else f0.scale(f0.K.zero)


def _container_scan(f0: XYForm) -> BinaryForm | None:
    """A nonzero (s,t)-form divisible by every singular fiber of V(f0)
    (a degree-0 form means there are no candidate fibers at all), or None
    when every pairwise elimination vanished identically.  A non-None
    result certifies that f0 is reduced: a repeated factor would divide
    both members of every pair."""
    cheap = _cheap_container(f0)
    if cheap is not None:
        return cheap
    jac = _jacobian_list(f0)
    # degree-0 members in (x, y) are themselves containers
    const_members = [m for m in jac if m.m == 0]
    acc = None
    for cm in const_members:
        c = cm.coeffs[0]
        if not c.is_zero():
            acc = c.monic() if acc is None else form_gcd(acc, c)
    if acc is not None:
        return acc
    pairs = []
    pos = [m for m in jac if m.m >= 1]
    for i1 in range(len(pos)):
        for i2 in range(i1 + 1, len(pos)):
            pairs.append((pos[i1], pos[i2]))
    pairs.sort(key=lambda gh: gh[0].m * gh[1].m)
    for gpoly, hpoly in pairs:
        res = _resultant_container(gpoly, hpoly)
        if res is not None:
            return res
    return None


def _container_fallback(f0: XYForm) -> BinaryForm:
    """Randomized-combination elimination for reduced sections for which all
    pairwise resultants vanish.  Deterministic per section; CI-certified to
    succeed on the supported grids."""
    K = f0.K
    jac = _jacobian_list(f0)
    from .poly import _prand_elements
    seed = 0x5EED
    for c in f0.coeffs:
        for v in c.coeffs:
            seed = (seed * 1099511628211 + K.encode_int(v) + 1) % (1 << 64)
    for trial in range(24):
        lams1 = _prand_elements(K, seed + 2 * trial, 5)
        lams2 = _prand_elements(K, seed + 2 * trial + 1, 5)
        h1 = _combination(jac, f0, lams1)
        h2 = _combination(jac, f0, lams2)
        if h1.is_zero() or h2.is_zero():
            continue
        res = _resultant_container(h1, h2)
        if res is not None:
            return res
    raise CandidateSearchError(
        "all elimination attempts degenerated for this section")


# ----------------------------------------------------------------------
# goodness + reducedness

def is_good_pair(jet: FiberJet) -> bool:
    """True iff F1 != 0 and no geometric multiple root of F1 is a root of F2
    (equivalently: no point of the fiber is a singular point of the curve)."""
    F1, F2 = jet.F1, jet.F2
    if F1.is_zero():
        return False
    D = multiple_root_locus(F1)
    if D.n == 0:
        return True
    if F2.is_zero():
        return False
    return form_gcd(D, F2).n == 0


def _gcd_xy_nonconstant(members: list[XYForm]) -> bool:
    """True iff the members share a common factor of positive (x,y)-degree,
    by primitive pseudo-remainder gcds at y = 1 plus valuation bookkeeping."""
    # common x^k or y^k factor
    if min(_val_x(m) for m in members) >= 1:
        return True
    if min(_val_y(m) for m in members) >= 1:
        return True
    polys = [_dehom_y(m) for m in members]
    gcur = polys[0]
    for nxt in polys[1:]:
        gcur = _pgcd_x(gcur, nxt)
        if len(gcur) == 1:
            return False
    return len(gcur) > 1


def _val_x(m: XYForm) -> int:
    for alpha in range(m.m + 1):
        if not m.coeffs[alpha].is_zero():
            return alpha
    return m.m + 1


def _val_y(m: XYForm) -> int:
    for alpha in range(m.m, -1, -1):
        if not m.coeffs[alpha].is_zero():
            return m.m - alpha
    return m.m + 1


def _dehom_y(m: XYForm) -> list[BinaryForm]:
    """Coefficient list in x (all of them; zero forms kept) with content stripped."""
    cs = list(m.coeffs)
    while cs and cs[-1].is_zero():
        cs.pop()
    return _strip_content(cs)


def _strip_content(cs: list[BinaryForm]) -> list[BinaryForm]:
    g = None
    for c in cs:
        if c.is_zero():
            continue
        g = c.monic() if g is None else form_gcd(g, c)
        if g.n == 0:
            break
    if g is None or g.n == 0:
        return cs
    return [c.divexact(g) if not c.is_zero() else BinaryForm.zero(c.ctx, 0)
            for c in cs]


def _pgcd_x(a: list[BinaryForm], b: list[BinaryForm]) -> list[BinaryForm]:
    """Primitive pseudo-remainder gcd of polynomials in x over F_q[s,t]."""
    a, b = list(a), list(b)
    while True:
        if not b:
            return _strip_content(a) if a else a
        if len(b) == 1:
            return b[:1] if not b[0].is_zero() else a
        if len(a) < len(b):
            a, b = b, a
            continue
        # pseudo-remainder of a by b
        lcb = b[-1]
        r = list(a)
        while len(r) >= len(b):
            lcr = r[-1]
            if lcr.is_zero():
                r.pop()
                continue
            shift = len(r) - len(b)
            r = [c * lcb if not c.is_zero() else BinaryForm.zero(c.ctx, c.n + lcb.n)
                 for c in r]
            for k, bc in enumerate(b):
                if bc.is_zero():
                    continue
                idx = shift + k
                term = bc * lcr
                cur = r[idx]
                if cur.is_zero():
                    cur = BinaryForm.zero(cur.ctx, term.n)
                if cur.n != term.n:
                    # formal zero with wrong degree
                    cur = BinaryForm(cur.ctx, term.n, cur.coeffs if not cur.is_zero() else [])
                r[idx] = cur - term
            while r and r[-1].is_zero():
                r.pop()
        a, b = b, _strip_content(r)


def _analyze(section: Section):
    """Shared classification: ('non_reduced', detail) or
    ('candidates', content_form, candidate_fibers)."""
    f = XYForm.from_section(section)
    content = f.content()
    if content.n > 0:
        if multiple_root_locus(content).n > 0:
            return ("non_reduced", {
                "repeated": "content",
                "witness_degree_bound": _min_factor_degree_of_repeated(content)})
        f0 = f.divexact_form(content)
    else:
        f0 = f
    jac = _jacobian_list(f0)
    if len(jac) == 1:  # all four partials vanish identically: a p-th power
        return ("non_reduced", {
            "repeated": "pth_power",
            "witness_degree_bound": max(f0.m // f0.K.p, 1)})
    container = _container_scan(f0)
    if container is None:
        # every pairwise resultant vanished; decide reducedness the hard way
        if _gcd_xy_nonconstant(jac):
            return ("non_reduced", {
                "repeated": "primitive_part", "witness_degree_bound": f0.m})
        container = _container_fallback(f0)
    cands: dict[tuple, ClosedFiber] = {}
    if content.n > 0:
        for g, _m in form_factor(content):
            fib = ClosedFiber.from_form(g, trusted=True)
            cands[fib.sort_key()] = fib
    if container.n > 0:
        for g, _m in form_factor(container):
            fib = ClosedFiber.from_form(g, trusted=True)
            cands[fib.sort_key()] = fib
    return ("candidates", content, [cands[k] for k in sorted(cands)])


# ----------------------------------------------------------------------
# the fiberwise decision

@dataclass
class SmoothnessReport:
    verdict: str  # "smooth" | "singular" | "non_reduced"
    singular_fibers: list = dc_field(default_factory=list)
    witnesses: list = dc_field(default_factory=list)
    detail: dict = dc_field(default_factory=dict)

    def is_smooth(self) -> bool:
        return self.verdict == "smooth"

    def to_json(self) -> str:
        return json.dumps({
            "verdict": self.verdict,
            "singular_fibers": [
                {"form": fib.label(), "degree": fib.degree}
                for fib in self.singular_fibers],
            "witnesses": self.witnesses,
            "detail": self.detail,
        })


def singular_fibers(section: Section) -> SmoothnessReport:
    """Full fiberwise smoothness classification of a nonzero section, i >= 1."""
    if section.bidegree.i < 1:
        raise GFError("fiberwise check needs i >= 1")
    if section.is_zero():
        raise GFError("the zero section is excluded (tracked separately)")
    out = _analyze(section)
    if out[0] == "non_reduced":
        return SmoothnessReport("non_reduced", detail=out[1])
    _tag, content, cands = out
    detail = {"content_degree": content.n} if content.n > 0 else {}
    bad = []
    witnesses = []
    for fib in cands:
        jet = restrict_to_fiber_jet(section, fib)
        if not is_good_pair(jet):
            bad.append(fib)
            witnesses.extend(_witnesses_for(jet))
    if bad:
        return SmoothnessReport("singular", bad, witnesses, detail)
    return SmoothnessReport("smooth", [], [], detail)


def _min_factor_degree_of_repeated(content: BinaryForm) -> int:
    degs = [g.n for g, m in form_factor(content) if m >= 2]
    return min(degs) if degs else content.n


def _bad_locus(jet: FiberJet) -> BinaryForm | None:
    """Form over F_{q^e} whose roots are the singular points on the fiber;
    None encodes 'the entire fiber'."""
    F1, F2 = jet.F1, jet.F2
    if F1.is_zero():
        if F2.is_zero():
            return None
        return F2.monic()
    D = multiple_root_locus(F1)
    if D.n == 0:
        return BinaryForm(jet.ext, 0, [jet.ext.one])
    if F2.is_zero():
        return D.monic()
    return form_gcd(D, F2)


def _witnesses_for(jet: FiberJet) -> list[dict]:
    e = jet.fiber.degree
    ext = jet.ext
    base = {"fiber": jet.fiber.label(), "fiber_degree": e}
    loc = _bad_locus(jet)
    if loc is None:
        return [dict(base, whole_fiber=True, point_degree=e)]
    out = []
    if ext.q <= 1 << 13:
        for g, _m in form_factor(loc):
            if g.n == 0:
                continue
            out.append(dict(base, point_degree=e * g.n,
                            locus_factor=[ext.encode_int(c) for c in g.coeffs]))
    else:
        # large residue field: report residue degrees only
        for g, _m in _form_factor_degrees(loc):
            out.append(dict(base, point_degree=e * g))
    return out


def _form_factor_degrees(F: BinaryForm) -> list[tuple[int, int]]:
    out = []
    if F.val_v() > 0:
        out.append((1, F.val_v()))
    h = F.to_unipoly()
    if h.degree >= 1:
        for g, m in poly_factor(h):
            out.append((g.degree, m))
    return out


def witness_point_degrees(report: SmoothnessReport) -> list[int]:
    """Degrees of the singular closed points implied by the report."""
    return sorted(w["point_degree"] for w in report.witnesses)


def candidate_degree_bound(section: Section) -> int:
    """The degree bound making the brute-force oracle complete for this
    section: max over candidate fibers of (fiber degree) * (worst residue
    degree of a bad root, bounded by max(1, floor(i/2)))."""
    if section.bidegree.i < 1 or section.is_zero():
        raise GFError("bound needs a nonzero section with i >= 1")
    out = _analyze(section)
    if out[0] == "non_reduced":
        return out[1]["witness_degree_bound"]
    _tag, _content, cands = out
    if not cands:
        return 0
    mult = max(1, section.bidegree.i // 2)
    return max(f.degree for f in cands) * mult


# ----------------------------------------------------------------------
# brute-force Jacobian oracle

def _cox_partial_coeffs(section: Section, var: str):
    """Coefficient vector of a Cox partial in its own bidegree basis."""
    surf, bid = section.surface, section.bidegree
    K = surf.field
    i, j, a = bid.i, bid.j, surf.a
    shifts = {"x": (-1, 0, 0, 0), "y": (0, -1, 0, 0),
              "s": (0, 0, -1, 0), "t": (0, 0, 0, -1)}
    dx, dy, ds, dt = shifts[var]
    if var == "x":
        new_bid = Bidegree(i - 1, j)
    elif var == "y":
        new_bid = Bidegree(i - 1, j + a)
    else:
        new_bid = Bidegree(i, j - 1)
    basis_new = section_basis(surf, new_bid)
    index = {m: k for k, m in enumerate(basis_new)}
    out = [K.zero] * len(basis_new)
    for mon, c in zip(section.basis(), section.coeffs):
        if K.is_zero(c):
            continue
        exp = {"x": mon.alpha, "y": mon.beta, "s": mon.gamma, "t": mon.delta}[var]
        if exp == 0:
            continue
        mult = exp % K.p
        if mult == 0:
            continue
        tgt = (mon.alpha + dx, mon.beta + dy, mon.gamma + ds, mon.delta + dt)
        k = index[tgt]
        acc = out[k]
        for _ in range(mult):
            acc = K.add(acc, c)
        out[k] = acc
    return new_bid, out


class _PointData:
    """Cached per-(surface, e) point coordinates with a lazy power cache."""

    def __init__(self, surface: Surface, e: int):
        K = surface.field
        self.E = ext_field(K, e)
        pts = rational_points(surface, e)
        arr = np.array(pts, dtype=np.int64)
        self.coords = (arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3])
        self.npts = arr.shape[0]
        self._pows: dict = {}

    def power(self, coord: int, k: int) -> np.ndarray:
        key = (coord, k)
        if key not in self._pows:
            self._pows[key] = self.E.np_pow(self.coords[coord], k)
        return self._pows[key]


_COORD_CACHE: dict = {}


def _point_data(surface: Surface, e: int) -> _PointData:
    ckey = (surface.a, surface.field.q, e)
    if ckey not in _COORD_CACHE:
        _COORD_CACHE[ckey] = _PointData(surface, e)
    return _COORD_CACHE[ckey]


def _monomial_matrix(surface: Surface, bid: Bidegree, e: int) -> np.ndarray:
    """Base-p digit matrix of monomial values at all F_{q^e}-points:
    shape (num_points * ek, num_monomials), entries in [0, p)."""
    pd = _point_data(surface, e)
    E = pd.E
    basis = section_basis(surface, bid)
    npts = pd.npts
    if not basis:
        return np.zeros((npts * E.k, 0), dtype=np.int8)
    cols = []
    for mon in basis:
        col = E.np_mul(E.np_mul(pd.power(0, mon.alpha), pd.power(1, mon.beta)),
                       E.np_mul(pd.power(2, mon.gamma), pd.power(3, mon.delta)))
        # base-p digits, point-major then digit index
        digs = np.empty((npts, E.k), dtype=np.int8)
        v = col.copy()
        for d in range(E.k):
            digs[:, d] = v % E.p
            v //= E.p
        cols.append(digs.reshape(-1))
    return np.stack(cols, axis=1)


def batch_singular_degrees(surface: Surface, bid: Bidegree,
                           sections: list[Section],
                           e_caps: list[int]) -> list[int | None]:
    """For each section, the least extension degree e <= its cap at which a
    singular closed point exists (None if none found up to the cap).
    Vectorized Jacobian evaluation over all F_{q^e}-points of the surface."""
    K = surface.field
    if K.k != 1:
        raise GFError("batched oracle supports prime base fields")
    p = K.p
    names = ["f", "x", "y", "s", "t"]
    bids = {"f": bid}
    coeff_vecs: dict[str, list] = {"f": [list(s.coeffs) for s in sections]}
    for var in names[1:]:
        vecs = []
        for s in sections:
            nb, cv = _cox_partial_coeffs(s, var)
            bids[var] = nb
            vecs.append(cv)
        coeff_vecs[var] = vecs
    result: list[int | None] = [None] * len(sections)
    emax = max(e_caps) if e_caps else 0
    for e in range(1, emax + 1):
        active = [k for k in range(len(sections))
                  if result[k] is None and e_caps[k] >= e]
        if not active:
            continue
        if (K.q**e + 1) ** 2 > ORACLE_POINT_CAP:
            raise CapExceeded("oracle point enumeration exceeds cap")
        zero_masks = []
        for var in names:
            nb = bids[var]
            M = _monomial_matrix(surface, nb, e)
            npts = (K.q**e + 1) ** 2
            if M.shape[1] == 0:
                # identically zero polynomial: vanishes everywhere
                zero_masks.append(np.ones((npts, len(active)), dtype=bool))
                continue
            C = np.array([coeff_vecs[var][k] for k in active],
                         dtype=np.float32).T  # (mono, S)
            evals = (M.astype(np.float32) @ C)
            evals = np.rint(evals).astype(np.int64) % p
            ek = M.shape[0] // npts
            digits = evals.reshape(npts, ek, len(active))
            zero_masks.append((digits == 0).all(axis=1))
        allzero = zero_masks[0]
        for zm in zero_masks[1:]:
            allzero = allzero & zm
        hit = allzero.any(axis=0)
        for idx, k in enumerate(active):
            if hit[idx]:
                result[k] = e
    return result


def brute_force_is_smooth(section: Section, e_max: int) -> bool:
    """True iff no closed point of degree <= e_max is a singular point of the
    section's zero locus (section and all four Cox partials vanishing)."""
    if section.is_zero():
        raise GFError("the zero section is excluded")
    total = sum((section.surface.q**e + 1) ** 2 for e in range(1, e_max + 1))
    if total > ORACLE_POINT_CAP:
        raise CapExceeded(
            "oracle point enumeration exceeds cap; use singular_fibers instead")
    out = batch_singular_degrees(section.surface, section.bidegree,
                                 [section], [e_max])
    return out[0] is None


def count_points(section: Section, e: int = 1) -> int:
    """Number of F_{q^e}-points of the zero locus of a nonzero section,
    counted fiber by fiber: restrict to each base point, then count the
    projective roots of the resulting degree-i form."""
    if section.is_zero():
        raise GFError("the zero section is excluded")
    K = section.surface.field
    E = ext_field(K, e)
    if (E.q + 1) ** 2 > ORACLE_POINT_CAP:
        raise CapExceeded("point enumeration exceeds cap")
    i = section.bidegree.i
    forms = [section.coefficient_form(beta) for beta in range(i + 1)]
    if E is not K:
        forms = [BinaryForm(E, c.n, [E.embed(v) for v in c.coeffs])
                 for c in forms]
    fiber_pts = proj_line_points(E)
    total = 0
    for (sv, tv) in fiber_pts:  # base points
        vals = [c.eval(sv, tv) for c in forms]
        F = BinaryForm(E, i, [vals[i - alpha] for alpha in range(i + 1)])
        if F.is_zero():
            total += E.q + 1
            continue
        total += sum(1 for (x, y) in fiber_pts if E.is_zero(F.eval(x, y)))
    return total
