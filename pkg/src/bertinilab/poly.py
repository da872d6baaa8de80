"""Univariate and binary-form polynomial arithmetic over finite fields.

UniPoly is a dense univariate polynomial over a FieldCtx (little-endian
coefficient tuple, no trailing zeros).  BinaryForm is a homogeneous form in
two variables (u, v), stored as the coefficient sequence of u^i v^(n-i); a
zero form remembers its formal degree.  Roots at (1:0) are handled by the
form operations themselves (valuation bookkeeping), never by chart splits
in callers.

Conventions: gcds are monic; gcd(0, f) = monic f; resultant follows the
Sylvester normalization computed by the classical Euclidean recursion, with
res(f, c) = c^deg(f) for constants and res(f, 0) = 0 when deg(f) >= 1.
"""

from __future__ import annotations

from functools import lru_cache

from . import _gf2poly as g2
from .gf import FieldCtx, GFError, CapExceeded, moebius, divisors


class UniPoly:
    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs):
        cs = list(coeffs)
        while cs and ctx.is_zero(cs[-1]):
            cs.pop()
        self.ctx = ctx
        self.coeffs = tuple(cs)

    # -- constructors --------------------------------------------------

    @classmethod
    def zero(cls, ctx):
        return cls(ctx, ())

    @classmethod
    def one(cls, ctx):
        return cls(ctx, (ctx.one,))

    @classmethod
    def x(cls, ctx):
        return cls(ctx, (ctx.zero, ctx.one))

    @classmethod
    def constant(cls, ctx, c):
        return cls(ctx, (c,))

    # -- basics ---------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with degree -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self):
        if self.is_zero():
            raise GFError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __getitem__(self, i):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.ctx.zero

    def __eq__(self, other):
        return (isinstance(other, UniPoly) and self.ctx is other.ctx
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((id(self.ctx), self.coeffs))

    def __add__(self, other):
        K = self.ctx
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(K, [K.add(self[i], other[i]) for i in range(n)])

    def __sub__(self, other):
        K = self.ctx
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(K, [K.sub(self[i], other[i]) for i in range(n)])

    def __neg__(self):
        K = self.ctx
        return UniPoly(K, [K.neg(c) for c in self.coeffs])

    def _enc2(self) -> int:
        v = 0
        for i, c in enumerate(self.coeffs):
            if c:
                v |= 1 << i
        return v

    @classmethod
    def _dec2(cls, ctx, v: int) -> "UniPoly":
        return cls(ctx, [(v >> i) & 1 for i in range(v.bit_length())])

    def __mul__(self, other):
        K = self.ctx
        if self.is_zero() or other.is_zero():
            return UniPoly.zero(K)
        if K.q == 2:
            return UniPoly._dec2(K, g2.mul(self._enc2(), other._enc2()))
        out = [K.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if K.is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                if K.is_zero(b):
                    continue
                out[i + j] = K.add(out[i + j], K.mul(a, b))
        return UniPoly(K, out)

    def scale(self, c):
        K = self.ctx
        return UniPoly(K, [K.mul(c, a) for a in self.coeffs])

    def shift(self, k: int):
        """Multiply by x^k."""
        if self.is_zero():
            return self
        return UniPoly(self.ctx, (self.ctx.zero,) * k + self.coeffs)

    def __divmod__(self, other):
        K = self.ctx
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if K.q == 2:
            q, r = g2.divmod_(self._enc2(), other._enc2())
            return UniPoly._dec2(K, q), UniPoly._dec2(K, r)
        rem = list(self.coeffs)
        db = other.degree
        inv_lc = K.inv(other.lc())
        q = [K.zero] * max(0, len(rem) - db)
        while len(rem) - 1 >= db and rem:
            c = K.mul(rem[-1], inv_lc)
            shift = len(rem) - 1 - db
            q[shift] = c
            for i, b in enumerate(other.coeffs):
                rem[shift + i] = K.sub(rem[shift + i], K.mul(c, b))
            while rem and K.is_zero(rem[-1]):
                rem.pop()
        return UniPoly(K, q), UniPoly(K, rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __pow__(self, n: int):
        r = UniPoly.one(self.ctx)
        a = self
        while n:
            if n & 1:
                r = r * a
            a = a * a
            n >>= 1
        return r

    def powmod(self, n: int, m: "UniPoly") -> "UniPoly":
        r = UniPoly.one(self.ctx) % m
        a = self % m
        while n:
            if n & 1:
                r = (r * a) % m
            a = (a * a) % m
            n >>= 1
        return r

    def monic(self):
        if self.is_zero():
            return self
        return self.scale(self.ctx.inv(self.lc()))

    def derivative(self):
        K = self.ctx
        out = []
        for i in range(1, len(self.coeffs)):
            mult = i % K.p
            c = self.coeffs[i]
            acc = K.zero
            for _ in range(mult):
                acc = K.add(acc, c)
            out.append(acc)
        return UniPoly(K, out)

    def eval(self, x):
        K = self.ctx
        acc = K.zero
        for c in reversed(self.coeffs):
            acc = K.add(K.mul(acc, x), c)
        return acc

    def gcd(self, other) -> "UniPoly":
        if self.ctx.q == 2:
            return UniPoly._dec2(self.ctx, g2.gcd(self._enc2(), other._enc2()))
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def encode_int(self) -> int:
        """Canonical integer encoding (used only for deterministic sorting)."""
        K = self.ctx
        v = 0
        for c in reversed(self.coeffs):
            v = v * K.q + K.encode_int(c)
        return v

    @classmethod
    def from_encoding(cls, ctx, v: int) -> "UniPoly":
        cs = []
        while v:
            cs.append(ctx.decode_int(v % ctx.q))
            v //= ctx.q
        return cls(ctx, cs)

    def map_coeffs(self, fn, new_ctx=None):
        return UniPoly(new_ctx or self.ctx, [fn(c) for c in self.coeffs])

    def __repr__(self):
        if self.is_zero():
            return "UniPoly(0)"
        K = self.ctx
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if K.is_zero(c):
                continue
            cs = "" if (c == K.one and i > 0) else f"{K.encode_int(c)}"
            xs = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            terms.append(cs + ("*" if cs and xs else "") + xs)
        return "UniPoly(" + " + ".join(terms) + f") over GF({K.q})"


def resultant(f: UniPoly, g: UniPoly):
    """Sylvester resultant via the classical Euclidean recursion:
    res(a, b) = (-1)^(deg a * deg b) * lc(b)^(deg a - deg r) * res(b, r).

    Conventions: res(f, c) = c^deg(f) for constant c, and res with the zero
    polynomial is zero (the zero polynomial shares every root)."""
    if f.is_zero() and g.is_zero():
        raise GFError("resultant of two zero polynomials")
    K = f.ctx
    if f.is_zero() or g.is_zero():
        return K.zero
    acc = K.one
    neg = False
    a, b = f, g
    if a.degree < b.degree:
        if (a.degree * b.degree) % 2 == 1:
            neg = not neg
        a, b = b, a
    while True:
        if b.degree == 0:
            acc = K.mul(acc, K.pow(b.coeffs[0], a.degree))
            break
        r = a % b
        if r.is_zero():
            return K.zero
        if (a.degree * b.degree) % 2 == 1:
            neg = not neg
        acc = K.mul(acc, K.pow(b.lc(), a.degree - r.degree))
        a, b = b, r
    return K.neg(acc) if neg else acc


# -- factorization -----------------------------------------------------

def _prand_elements(ctx: FieldCtx, key: int, count: int):
    """Deterministic stream of field elements, counter-based."""
    out = []
    x = key & 0xFFFFFFFFFFFFFFFF
    while len(out) < count:
        x = (x + 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
        z = x
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
        z ^= z >> 31
        out.append(ctx.decode_int(z % ctx.q))
    return out


def _pth_root_poly(f: UniPoly) -> UniPoly:
    """For f with f' = 0, i.e. f = g(x^p): return g with p-th-rooted coefficients."""
    K = f.ctx
    p = K.p
    root_exp = K.q // p  # c -> c^(q/p) is the inverse of Frobenius on F_q
    cs = []
    for i in range(0, len(f.coeffs), p):
        cs.append(K.pow(f.coeffs[i], root_exp))
    return UniPoly(K, cs)


def squarefree_decomposition(f: UniPoly) -> list[tuple[UniPoly, int]]:
    """Nonzero f: list of (monic squarefree g, multiplicity) with product f up to lc."""
    out: dict[UniPoly, int] = {}

    def rec(h: UniPoly, mult: int):
        if h.degree <= 0:
            return
        hp = h.derivative()
        if hp.is_zero():
            rec(_pth_root_poly(h), mult * h.ctx.p)
            return
        g = h.gcd(hp)
        w = (h // g).monic()
        if w.degree >= 1:
            out[w] = out.get(w, 0) + mult
        if g.degree >= 1:
            rec(g, mult)

    rec(f.monic(), 1)
    merged: dict[UniPoly, int] = {}
    for g, m in out.items():
        merged[g] = merged.get(g, 0) + m
    return sorted(merged.items(), key=lambda t: (t[0].degree, t[0].encode_int()))


def distinct_degree_factorization(f: UniPoly) -> list[tuple[UniPoly, int]]:
    K = f.ctx
    out = []
    x = UniPoly.x(K)
    h = x
    d = 0
    f = f.monic()
    while f.degree >= 2 * (d + 1):
        d += 1
        h = h.powmod(K.q, f)
        g = f.gcd(h - x)
        if g.degree >= 1:
            out.append((g, d))
            f = (f // g).monic()
            h = h % f
    if f.degree >= 1:
        out.append((f, f.degree))
    return out


def _equal_degree_split(f: UniPoly, d: int) -> list[UniPoly]:
    """f = product of distinct irreducibles of degree d; split them all."""
    K = f.ctx
    if f.degree == d:
        return [f]
    stack = [f]
    done = []
    counter = f.encode_int() * 1000003 + d
    while stack:
        h = stack.pop()
        if h.degree == d:
            done.append(h)
            continue
        counter += 1
        g = UniPoly(K, _prand_elements(K, counter, h.degree))
        if g.degree < 1:
            stack.append(h)
            continue
        if K.p == 2:
            # additive trace map to F_2 over F_{q^d}
            t = UniPoly.zero(K)
            gg = g % h
            for _ in range(d * K.k):
                t = t + gg
                gg = (gg * gg) % h
        else:
            t = g.powmod((K.q**d - 1) // 2, h) - UniPoly.one(K)
        u = h.gcd(t)
        if 1 <= u.degree < h.degree:
            stack.append(u)
            stack.append((h // u).monic())
        else:
            stack.append(h)
    return done


def factor(f: UniPoly) -> list[tuple[UniPoly, int]]:
    """Full factorization into monic irreducibles, deterministic sorted order."""
    if f.is_zero():
        raise GFError("cannot factor the zero polynomial")
    K = f.ctx
    if K.q == 2:
        enc = f.encode_int()
        return [(UniPoly.from_encoding(K, irr), m) for irr, m in g2.factor(enc)]
    result: dict[UniPoly, int] = {}
    for sf, mult in squarefree_decomposition(f):
        for prod, d in distinct_degree_factorization(sf):
            for irr in _equal_degree_split(prod, d):
                irr = irr.monic()
                result[irr] = result.get(irr, 0) + mult
    return sorted(result.items(), key=lambda t: (t[0].degree, t[0].encode_int()))


def is_irreducible(f: UniPoly) -> bool:
    if f.degree < 1:
        return False
    if f.ctx.q == 2:
        return g2.is_irreducible(f.encode_int())
    facs = factor(f)
    return len(facs) == 1 and facs[0][1] == 1


def roots(f: UniPoly) -> list:
    """All roots of f in its (enumerable) coefficient field."""
    K = f.ctx
    if f.is_zero():
        raise GFError("zero polynomial has every root")
    if f.degree == 0:
        return []
    if f.degree == 1:
        a, b = f.coeffs[1], f.coeffs[0]
        return [K.neg(K.div(b, a))]
    if K.q <= 1 << 16:
        return [x for x in K.elements() if K.is_zero(f.eval(x))]
    # large field: roots via gcd with x^q - x, then splitting
    x = UniPoly.x(K)
    lin = f.gcd(x.powmod(K.q, f) - x)
    out = []
    for g, _ in _factor_linear(lin):
        out.append(K.neg(K.div(g.coeffs[0], g.coeffs[1])))
    return out


def _factor_linear(f: UniPoly) -> list[tuple[UniPoly, int]]:
    if f.degree <= 0:
        return []
    if f.degree == 1:
        return [(f.monic(), 1)]
    return [(gg, 1) for gg in _equal_degree_split(f.monic(), 1)]


def irreducible_count(q: int, e: int) -> int:
    """Number of monic irreducible degree-e polynomials over F_q (necklaces)."""
    if e < 1:
        raise GFError("degree must be >= 1")
    total = sum(moebius(e // f) * q**f for f in divisors(e))
    assert total % e == 0
    return total // e


# -- binary forms -------------------------------------------------------

class BinaryForm:
    """Homogeneous form of (formal) degree n in two variables (u, v).

    coeffs[i] is the coefficient of u^i v^(n-i).  The zero form keeps its
    formal degree so jets like F2 = 0 of a given degree stay well-typed.
    """

    __slots__ = ("ctx", "n", "coeffs")

    def __init__(self, ctx: FieldCtx, n: int, coeffs):
        cs = list(coeffs)
        if len(cs) > n + 1:
            raise GFError("too many coefficients for the degree")
        cs += [ctx.zero] * (n + 1 - len(cs))
        self.ctx = ctx
        self.n = n
        self.coeffs = tuple(cs)

    @classmethod
    def zero(cls, ctx, n: int):
        return cls(ctx, n, ())

    @classmethod
    def from_unipoly(cls, h: UniPoly, n: int | None = None) -> "BinaryForm":
        """Homogenize h(u) to degree n (default deg h) with powers of v."""
        if n is None:
            n = max(h.degree, 0)
        if h.degree > n:
            raise GFError("degree too small to homogenize")
        return cls(h.ctx, n, h.coeffs)

    def to_unipoly(self) -> UniPoly:
        """Dehomogenize at v = 1."""
        return UniPoly(self.ctx, self.coeffs)

    def is_zero(self) -> bool:
        K = self.ctx
        return all(K.is_zero(c) for c in self.coeffs)

    def val_u(self) -> int:
        """Multiplicity of the root (0:1), i.e. the power of u dividing."""
        K = self.ctx
        for i, c in enumerate(self.coeffs):
            if not K.is_zero(c):
                return i
        raise GFError("zero form has no valuation")

    def val_v(self) -> int:
        """Multiplicity of the root (1:0), i.e. the power of v dividing."""
        K = self.ctx
        for i in range(self.n, -1, -1):
            if not K.is_zero(self.coeffs[i]):
                return self.n - i
        raise GFError("zero form has no valuation")

    def __eq__(self, other):
        return (isinstance(other, BinaryForm) and self.ctx is other.ctx
                and self.n == other.n and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((id(self.ctx), self.n, self.coeffs))

    def __add__(self, other):
        if self.n != other.n:
            raise GFError("cannot add forms of different degrees")
        K = self.ctx
        return BinaryForm(K, self.n,
                          [K.add(a, b) for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        if self.n != other.n:
            raise GFError("cannot subtract forms of different degrees")
        K = self.ctx
        return BinaryForm(K, self.n,
                          [K.sub(a, b) for a, b in zip(self.coeffs, other.coeffs)])

    def __mul__(self, other):
        K = self.ctx
        n = self.n + other.n
        out = [K.zero] * (n + 1)
        for i, a in enumerate(self.coeffs):
            if K.is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                if K.is_zero(b):
                    continue
                out[i + j] = K.add(out[i + j], K.mul(a, b))
        return BinaryForm(K, n, out)

    def scale(self, c):
        K = self.ctx
        return BinaryForm(K, self.n, [K.mul(c, a) for a in self.coeffs])

    def eval(self, u, v):
        K = self.ctx
        acc = K.zero
        up = K.one
        vps = [K.one]
        for _ in range(self.n):
            vps.append(K.mul(vps[-1], v))
        for i, c in enumerate(self.coeffs):
            if not K.is_zero(c):
                acc = K.add(acc, K.mul(K.mul(c, up), vps[self.n - i]))
            up = K.mul(up, u)
        return acc

    def deriv_u(self) -> "BinaryForm":
        K = self.ctx
        out = [K.zero] * max(self.n, 1)
        for i in range(1, self.n + 1):
            c = self.coeffs[i]
            m = i % K.p
            acc = K.zero
            for _ in range(m):
                acc = K.add(acc, c)
            out[i - 1] = acc
        return BinaryForm(K, self.n - 1, out[: self.n]) if self.n >= 1 else BinaryForm.zero(K, 0)

    def deriv_v(self) -> "BinaryForm":
        K = self.ctx
        if self.n < 1:
            return BinaryForm.zero(K, 0)
        out = [K.zero] * self.n
        for i in range(0, self.n):
            c = self.coeffs[i]
            m = (self.n - i) % K.p
            acc = K.zero
            for _ in range(m):
                acc = K.add(acc, c)
            out[i] = acc
        return BinaryForm(K, self.n - 1, out)

    def monic(self) -> "BinaryForm":
        """Scale so the highest nonzero u-coefficient is 1."""
        if self.is_zero():
            return self
        K = self.ctx
        lead = self.coeffs[self.n - self.val_v()]
        return self.scale(K.inv(lead))

    def divexact(self, other: "BinaryForm") -> "BinaryForm":
        """Exact division of forms (raises if not divisible)."""
        K = self.ctx
        if other.is_zero():
            raise ZeroDivisionError("division by zero form")
        vv = other.val_v()
        if self.is_zero():
            return BinaryForm.zero(K, self.n - other.n)
        if self.val_v() < vv:
            raise GFError("not divisible (v-valuation)")
        a = self.to_unipoly()
        b = other.to_unipoly()
        q, r = divmod(a, b)
        if not r.is_zero():
            raise GFError("not divisible")
        return BinaryForm.from_unipoly(q, self.n - other.n)

    def __repr__(self):
        K = self.ctx
        if self.is_zero():
            return f"BinaryForm(0; deg {self.n})"
        terms = []
        for i in range(self.n, -1, -1):
            c = self.coeffs[i]
            if K.is_zero(c):
                continue
            parts = []
            if c != K.one or i == 0 and self.n == 0:
                parts.append(str(K.encode_int(c)))
            if i:
                parts.append("u" if i == 1 else f"u^{i}")
            if self.n - i:
                parts.append("v" if self.n - i == 1 else f"v^{self.n - i}")
            terms.append("*".join(parts) or "1")
        return "BinaryForm(" + " + ".join(terms) + ")"


def form_gcd(F: BinaryForm, G: BinaryForm) -> BinaryForm:
    """Monic gcd of binary forms; gcd(F, 0) = monic F."""
    if F.is_zero() and G.is_zero():
        raise GFError("gcd of two zero forms")
    if F.is_zero():
        return G.monic()
    if G.is_zero():
        return F.monic()
    g = F.to_unipoly().gcd(G.to_unipoly())
    vv = min(F.val_v(), G.val_v())
    return BinaryForm.from_unipoly(g, g.degree + vv)


def form_factor(F: BinaryForm) -> list[tuple[BinaryForm, int]]:
    """Factor a nonzero form into monic irreducible forms, sorted."""
    if F.is_zero():
        raise GFError("cannot factor the zero form")
    K = F.ctx
    out = []
    vv = F.val_v()
    if vv:
        out.append((BinaryForm(K, 1, [K.one]), vv))  # the form v
    h = F.to_unipoly()
    if h.degree >= 1:
        for g, m in factor(h):
            out.append((BinaryForm.from_unipoly(g, g.degree), m))
    return sorted(out, key=lambda t: (t[0].n, t[0].to_unipoly().encode_int()))


def form_squarefree(F: BinaryForm) -> bool:
    """True iff the nonzero form has no repeated projective root."""
    return multiple_root_locus(F).n == 0


def multiple_root_locus(F: BinaryForm) -> BinaryForm:
    """D = gcd(F, dF/du, dF/dv): projective roots of D are exactly the
    multiple roots of F over the algebraic closure.  If both partials vanish
    identically (F a p-th power), D = F up to a scalar."""
    if F.is_zero():
        raise GFError("multiple_root_locus of the zero form")
    Fu = F.deriv_u()
    Fv = F.deriv_v()
    if Fu.is_zero() and Fv.is_zero():
        return F.monic()
    D = F
    if not Fu.is_zero():
        D = form_gcd(D, Fu)
    if not Fv.is_zero():
        D = form_gcd(D, Fv)
    return D.monic()


def form_roots(F: BinaryForm) -> list[tuple]:
    """Rational projective roots (u:v) of a nonzero form, as normalized pairs:
    (x, 1) for finite roots and (1, 0) if v divides."""
    K = F.ctx
    out = [(r, K.one) for r in roots(F.to_unipoly())] if F.to_unipoly().degree >= 1 else []
    if F.val_v() > 0:
        out.append((K.one, K.zero))
    return out
