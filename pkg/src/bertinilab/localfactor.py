"""Closed-form local probabilities, zeta values, certified products, and
point-count distributions for curves on Hirzebruch surfaces.

All closed forms are exact rationals; floating output happens only at the
CLI boundary.  Infinite products over closed points are truncated with a
rigorous tail bound: every implemented local factor satisfies
1 - factor = q^(-2e) + q^(-3e) - q^(-ke) <= 2 q^(-2e)  (k = 4 or 5),
so with c = 2 the truncation error after degree E is at most
sum_{e > E} N_e * c * q^(-2e) <= c * (q^-E/(q-1) + q^-2E/(q^2-1)).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .gf import (GFError, CapExceeded, SpaceKind, closed_point_count,
                 field_new, ext_field, _prime_factors)
from .poly import BinaryForm, form_gcd, multiple_root_locus

_MP_DPS = 80
_ARITH_SLACK = Fraction(1, 10**60)


def _field_for_q(q: int):
    fac = _prime_factors(q)
    if len(fac) != 1:
        raise GFError(f"{q} is not a prime power")
    p = fac[0]
    k = 0
    while q > 1:
        if q % p:
            raise GFError("not a prime power")
        q //= p
        k += 1
    return field_new(p, k)


# ----------------------------------------------------------------------
# distributions

@dataclass(frozen=True)
class Distribution:
    """Exact pmf on {0, 1, ...} with rational weights summing to one."""
    weights: tuple  # tuple of Fraction, index = value

    def __post_init__(self):
        if any(w < 0 for w in self.weights):
            raise GFError("negative weight")
        if sum(self.weights, Fraction(0)) != 1:
            raise GFError("weights must sum to 1")

    @classmethod
    def from_pairs(cls, pairs) -> "Distribution":
        pairs = dict(pairs)
        n = max(pairs) if pairs else 0
        return cls(tuple(Fraction(pairs.get(k, 0)) for k in range(n + 1)))

    def support(self) -> list[int]:
        return [k for k, w in enumerate(self.weights) if w != 0]

    def pmf(self, k: int) -> Fraction:
        if 0 <= k < len(self.weights):
            return self.weights[k]
        return Fraction(0)

    def mean(self) -> Fraction:
        return sum((Fraction(k) * w for k, w in enumerate(self.weights)),
                   Fraction(0))

    def convolve(self, other: "Distribution") -> "Distribution":
        out = [Fraction(0)] * (len(self.weights) + len(other.weights) - 1)
        for i, a in enumerate(self.weights):
            if a == 0:
                continue
            for j, b in enumerate(other.weights):
                if b == 0:
                    continue
                out[i + j] += a * b
        return Distribution(tuple(out))

    def convolve_power(self, n: int) -> "Distribution":
        result = Distribution((Fraction(1),))
        base = self
        while n:
            if n & 1:
                result = result.convolve(base)
            base = base.convolve(base)
            n >>= 1
        return result

    def tv_distance(self, other: "Distribution") -> Fraction:
        n = max(len(self.weights), len(other.weights))
        total = sum(abs(self.pmf(k) - other.pmf(k)) for k in range(n))
        return total / 2

    def to_json(self) -> str:
        return json.dumps({
            "support": self.support(),
            "weights": [str(self.weights[k]) for k in self.support()],
        })

    @classmethod
    def from_json(cls, text: str) -> "Distribution":
        doc = json.loads(text)
        return cls.from_pairs({k: Fraction(w) for k, w
                               in zip(doc["support"], doc["weights"])})


# ----------------------------------------------------------------------
# good pairs

def good_pair_count(q: int, e: int, n: int) -> int:
    """Number of good pairs (F1, F2) of degree-n forms over F_{q^e}:
    q^(e(2n+2)) * (1 - q^-2e) for n = 1,
    ... * (1 - q^-2e - q^-3e + q^-4e) for n = 2,
    ... * (1 - q^-2e - q^-3e + q^-5e) for n >= 3."""
    if n < 1:
        raise GFError("n must be >= 1")
    if e < 1:
        raise GFError("e must be >= 1")
    Q = Fraction(q) ** e
    if n == 1:
        frac = 1 - Q**-2
    elif n == 2:
        frac = 1 - Q**-2 - Q**-3 + Q**-4
    else:
        frac = 1 - Q**-2 - Q**-3 + Q**-5
    total = Fraction(q) ** (e * (2 * n + 2)) * frac
    assert total.denominator == 1
    return int(total)


def good_pair_count_bruteforce(q: int, e: int, n: int) -> int:
    """Exhaustive count of good pairs over F_{q^e} via the good-pair test."""
    if n < 1 or e < 1:
        raise GFError("n and e must be >= 1")
    if q ** (2 * e * (n + 1)) > 1 << 24:
        raise CapExceeded("pair enumeration exceeds the 2^24 cap")
    K = _field_for_q(q)
    E = ext_field(K, e)
    Q = E.q
    count = 0
    n_f2 = Q ** (n + 1)
    for v1 in range(Q ** (n + 1)):
        cs = []
        w = v1
        for _ in range(n + 1):
            cs.append(E.decode_int(w % Q))
            w //= Q
        F1 = BinaryForm(E, n, cs)
        if F1.is_zero():
            continue
        D = multiple_root_locus(F1)
        if D.n == 0:
            count += n_f2
            continue
        for v2 in range(Q ** (n + 1)):
            cs2 = []
            w = v2
            for _ in range(n + 1):
                cs2.append(E.decode_int(w % Q))
                w //= Q
            F2 = BinaryForm(E, n, cs2)
            if F2.is_zero():
                continue
            if form_gcd(D, F2).n == 0:
                count += 1
    return count


def local_smooth_factor(q: int, e: int, n: int) -> Fraction:
    """Probability that a random section is smooth along a degree-e fiber."""
    return Fraction(good_pair_count(q, e, n), q ** (e * (2 * n + 2)))


# ----------------------------------------------------------------------
# zeta values and certified products

def zeta_inverse(space: SpaceKind, q: int, s: int) -> Fraction:
    """Exact 1/zeta_X(s), from the rational-point generating function."""
    return space.zeta_inverse(q, s)


@dataclass(frozen=True)
class CertifiedValue:
    """A value with a rigorous truncation-error bound:
    |value - true limit| <= tail_bound."""
    value: Fraction
    tail_bound: Fraction
    truncation_degree: int
    exact: bool = False

    def __float__(self):
        return float(self.value)

    def to_json(self) -> str:
        return json.dumps({
            "value": str(self.value),
            "float": float(self.value),
            "tail_bound": str(self.tail_bound),
            "truncation_degree": self.truncation_degree,
            "exact": self.exact,
        })


def _tail_bound(q: int, E: int) -> Fraction:
    # sum_{e>E} N_e * 2 * q^-2e with N_e <= q^e + 1
    c = 2
    return c * (Fraction(1, q**E * (q - 1)) + Fraction(1, q**(2 * E) * (q * q - 1)))


def certified_product(q: int, n: int, eps: Fraction) -> CertifiedValue:
    """prod over closed points P of P^1 of the local factor at deg(P),
    truncated at the smallest degree E whose tail bound is below eps."""
    if n < 1:
        raise GFError("n must be >= 1")
    eps = Fraction(eps)
    if eps <= 0:
        raise GFError("eps must be positive")
    E = 1
    while _tail_bound(q, E) > eps:
        E += 1
    line = SpaceKind.proj_line()
    with mpmath.workdps(_MP_DPS):
        acc = mpmath.mpf(1)
        for e in range(1, E + 1):
            Ne = closed_point_count(line, q, e)
            f = local_smooth_factor(q, e, n)
            acc *= mpmath.power(
                mpmath.mpf(f.numerator) / mpmath.mpf(f.denominator), Ne)
        value = _mpf_to_fraction(acc)
    return CertifiedValue(value, _tail_bound(q, E) + _ARITH_SLACK, E, exact=False)


def _mpf_to_fraction(x) -> Fraction:
    sign, man, exp, _ = x._mpf_
    out = Fraction(int(man)) * Fraction(2) ** int(exp)
    return -out if sign else out


def smooth_probability(n: int, q: int, eps: Fraction = Fraction(1, 10**6),
                       a: int = 0) -> CertifiedValue:
    """Limiting probability that a bidegree-(n, d) curve on F_a is smooth as
    the base degree grows.  Exact zeta values for n = 1 and n >= 3 (where
    the local factors telescope); a certified truncated product otherwise.
    The twist a does not enter: the product runs over the base P^1 either way."""
    if n < 1:
        raise GFError("n must be >= 1")
    if a < 0:
        raise GFError("a must be >= 0")
    line = SpaceKind.proj_line()
    if n == 1:
        v = zeta_inverse(line, q, 2)
        return CertifiedValue(v, Fraction(0), 0, exact=True)
    if n >= 3:
        v = zeta_inverse(line, q, 2) * zeta_inverse(line, q, 3)
        # the factor identity behind the telescoping:
        # (1 - u^2)(1 - u^3) = 1 - u^2 - u^3 + u^5
        assert _poly_identity_holds()
        expected = (Fraction(1) - Fraction(1, q)) * (1 - Fraction(1, q**2))**2 \
            * (1 - Fraction(1, q**3))
        assert v == expected
        return CertifiedValue(v, Fraction(0), 0, exact=True)
    return certified_product(q, n, eps)


def _poly_identity_holds() -> bool:
    """(1 - u^2)(1 - u^3) == 1 - u^2 - u^3 + u^5 as polynomials over Q."""
    lhs = _qpoly_mul([1, 0, -1], [1, 0, 0, -1])
    return lhs == [1, 0, -1, -1, 0, 1]


def _qpoly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


# ----------------------------------------------------------------------
# point-count distributions (T:Hpoints families)

def _x_variable(q: int) -> Distribution:
    d = Fraction(q**3 - 1)
    return Distribution((Fraction(q**3 - q**2) / d, Fraction(q**2 - 1) / d))


def _y_variable(q: int) -> Distribution:
    d = Fraction(2 * q**3 + 2 * q**2 - 2)
    return Distribution((Fraction(q**3 - q**2) / d,
                         Fraction(2 * q**2 - 2) / d,
                         Fraction(q**3 + q**2) / d))


def _z_variable(q: int) -> Distribution:
    d = Fraction(6 * q**2 + 6 * q + 6)
    return Distribution((Fraction(2 * q**2) / d,
                         Fraction(3 * q**2 + 6) / d,
                         Fraction(6 * q) / d,
                         Fraction(q**2) / d))


FAMILIES = ("ample", "2d", "3d", "d2", "d3")

_FAMILY_ALIASES = {
    "ample": "ample", "(2,d)": "2d", "(3,d)": "3d", "(d,2)": "d2",
    "(d,3)": "d3", "2d": "2d", "3d": "3d", "d2": "d2", "d3": "d3",
}


def point_count_distribution(family: str, q: int, a: int | None = None) -> Distribution:
    """Limiting distribution of #C(F_q) over smooth curves in the family:
    'ample' sums (q+1)^2 copies of X, '2d'/'3d' sum q+1 copies of Y/Z, and
    'd2'/'d3' (which require a >= 1) add Y or Z to q^2+q copies of X."""
    fam = _FAMILY_ALIASES.get(family)
    if fam is None:
        raise GFError(f"unknown family {family!r}; choose from {FAMILIES}")
    if fam == "ample":
        return _x_variable(q).convolve_power((q + 1) ** 2)
    if fam == "2d":
        return _y_variable(q).convolve_power(q + 1)
    if fam == "3d":
        return _z_variable(q).convolve_power(q + 1)
    if a is not None and a < 1:
        raise GFError(f"family {family!r} needs a Hirzebruch surface with a >= 1")
    head = _y_variable(q) if fam == "d2" else _z_variable(q)
    return head.convolve(_x_variable(q).convolve_power(q * q + q))


def fiber_point_pmf_bruteforce(q: int, n: int) -> Distribution:
    """Conditional distribution, over good pairs at a degree-1 fiber, of the
    number of rational roots of F1 (= rational curve points on the fiber)."""
    if n < 1:
        raise GFError("n must be >= 1")
    if q ** (2 * (n + 1)) > 1 << 24:
        raise CapExceeded("pair enumeration exceeds the 2^24 cap")
    K = _field_for_q(q)
    pts = [(x, K.one) for x in K.elements()] + [(K.one, K.zero)]
    counts: dict[int, int] = {}
    total = 0
    nf = K.q ** (n + 1)
    for v1 in range(nf):
        cs = []
        w = v1
        for _ in range(n + 1):
            cs.append(K.decode_int(w % K.q))
            w //= K.q
        F1 = BinaryForm(K, n, cs)
        if F1.is_zero():
            continue
        D = multiple_root_locus(F1)
        nroots = sum(1 for (u, v) in pts if K.is_zero(F1.eval(u, v)))
        if D.n == 0:
            counts[nroots] = counts.get(nroots, 0) + nf
            total += nf
            continue
        for v2 in range(nf):
            cs2 = []
            w = v2
            for _ in range(n + 1):
                cs2.append(K.decode_int(w % K.q))
                w //= K.q
            F2 = BinaryForm(K, n, cs2)
            if not F2.is_zero() and form_gcd(D, F2).n == 0:
                counts[nroots] = counts.get(nroots, 0) + 1
                total += 1
    return Distribution.from_pairs(
        {k: Fraction(v, total) for k, v in counts.items()})


def n0_bound(m: int, b: int, p: int) -> int:
    """General ampleness threshold max(b(m+1) - 1, b*p + 1) in terms of
    dim X = m, dim pi(X) = b, and the characteristic p.  For Hirzebruch
    surfaces with either ruling, n0 = 1 suffices (recorded constant)."""
    if m < 1:
        raise GFError("m must be >= 1")
    if b < 0:
        raise GFError("b must be >= 0")
    return max(b * (m + 1) - 1, b * p + 1)


HIRZEBRUCH_N0 = 1
