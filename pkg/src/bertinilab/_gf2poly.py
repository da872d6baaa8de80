"""Fast arithmetic for polynomials over GF(2), encoded as Python ints.

The polynomial b_n x^n + ... + b_1 x + b_0 is the integer with bit i equal
to b_i.  Used as the hot path for characteristic-2 work: factoring candidate
polynomials in the census, and field arithmetic in large extensions of F_2.
"""

from __future__ import annotations


def degree(a: int) -> int:
    """Degree of a, with degree(0) == -1."""
    return a.bit_length() - 1


def mul(a: int, b: int) -> int:
    """Carry-free product."""
    if a < b:
        a, b = b, a
    c = 0
    while b:
        if b & 1:
            c ^= a
        a <<= 1
        b >>= 1
    return c


def mod(a: int, m: int) -> int:
    if m == 0:
        raise ZeroDivisionError("mod by zero polynomial")
    dm = degree(m)
    da = degree(a)
    while da >= dm:
        a ^= m << (da - dm)
        da = degree(a)
    return a


def divmod_(a: int, m: int) -> tuple[int, int]:
    if m == 0:
        raise ZeroDivisionError("division by zero polynomial")
    dm = degree(m)
    q = 0
    da = degree(a)
    while da >= dm:
        shift = da - dm
        q |= 1 << shift
        a ^= m << shift
        da = degree(a)
    return q, a


def mulmod(a: int, b: int, m: int) -> int:
    return mod(mul(a, b), m)


def gcd(a: int, b: int) -> int:
    while b:
        a, b = b, mod(a, b)
    return a


def invmod(a: int, m: int) -> int:
    """Inverse of a modulo m (m irreducible or at least coprime to a)."""
    r0, r1 = m, mod(a, m)
    s0, s1 = 0, 1
    while r1:
        q, r = divmod_(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 ^ mul(q, s1)
    if r0 != 1:
        raise ZeroDivisionError("element not invertible")
    return s0


def powmod(a: int, e: int, m: int) -> int:
    result = 1
    a = mod(a, m)
    while e:
        if e & 1:
            result = mulmod(result, a, m)
        a = mulmod(a, a, m)
        e >>= 1
    return result


def derivative(a: int) -> int:
    # over GF(2) only odd-exponent terms survive, shifted down one
    mask = 0
    n = degree(a)
    for i in range(1, n + 1, 2):
        mask |= 1 << i
    return (a & mask) >> 1


def _sqrt_even_poly(a: int) -> int:
    # a has only even exponents: extract x^(2i) -> x^i
    r = 0
    i = 0
    while a:
        if a & 1:
            r |= 1 << i
        a >>= 2
        i += 1
    return r


def squarefree_factorization(a: int) -> list[tuple[int, int]]:
    """Yoneda-free SFF over GF(2): returns [(g, multiplicity)] with g squarefree."""
    out: dict[int, int] = {}

    def rec(f: int, mult: int) -> None:
        if f == 1:
            return
        fp = derivative(f)
        if fp == 0:
            # f is a square: f = g(x)^2
            rec(_sqrt_even_poly(f), 2 * mult)
            return
        g = gcd(f, fp)
        w = divmod_(f, g)[0]  # squarefree part
        if w != 1:
            out[w] = out.get(w, 0) + mult
        if g != 1:
            rec(g, mult)

    rec(a, 1)
    # merge repeated squarefree parts into distinct irreducible-power data later
    return sorted(out.items())


def distinct_degree_factorization(f: int) -> list[tuple[int, int]]:
    """f squarefree monic: returns [(product_of_irreducibles_of_degree_d, d)]."""
    out = []
    h = 2  # the polynomial x
    k = 0
    while degree(f) >= 2 * (k + 1):
        k += 1
        h = mulmod(h, h, f)  # x^(2^k) mod f
        g = gcd(f, h ^ 2)
        if g != 1:
            out.append((g, k))
            f = divmod_(f, g)[0]
            h = mod(h, f)
    if f != 1:
        out.append((f, degree(f)))
    return out


def _edf_split(f: int, d: int, seed: int) -> list[int]:
    """Equal-degree splitting (Cantor-Zassenhaus, trace method for GF(2))."""
    n = degree(f)
    if n == d:
        return [f]
    factors = [f]
    done: list[int] = []
    counter = seed
    while factors:
        g = factors.pop()
        if degree(g) == d:
            done.append(g)
            continue
        counter += 1
        # deterministic "random" polynomial of degree < deg g
        h = _prand(counter, degree(g))
        # trace map h + h^2 + h^4 + ... (d terms) mod g
        t = 0
        hh = mod(h, g)
        for _ in range(d):
            t ^= hh
            hh = mulmod(hh, hh, g)
        u = gcd(g, t)
        if u == 1 or u == g:
            factors.append(g)
            continue
        factors.append(u)
        factors.append(divmod_(g, u)[0])
    return done


def _prand(counter: int, degree_bound: int) -> int:
    # splitmix64-style mixing, enough bits for any degree we meet
    x = (counter * 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
    out = 0
    produced = 0
    while produced <= degree_bound:
        x = (x + 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
        z = x
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
        z ^= z >> 31
        out |= z << produced
        produced += 64
    return out & ((1 << (degree_bound + 1)) - 1)


def factor(a: int) -> list[tuple[int, int]]:
    """Full factorization of nonzero a into [(irreducible, multiplicity)], sorted."""
    if a == 0:
        raise ZeroDivisionError("cannot factor the zero polynomial")
    result: dict[int, int] = {}
    for sqf, mult in squarefree_factorization(a):
        for prod, d in distinct_degree_factorization(sqf):
            for irr in _edf_split(prod, d, seed=prod):
                result[irr] = result.get(irr, 0) + mult
    return sorted(result.items())


def is_irreducible(f: int) -> bool:
    n = degree(f)
    if n <= 0:
        return False
    if n == 1:
        return True
    # x^(2^n) == x mod f and gcd(x^(2^(n/l)) - x, f) == 1 for primes l | n
    h = 2
    for _ in range(n):
        h = mulmod(h, h, f)
    if h != mod(2, f):
        return False
    for ell in _prime_divisors(n):
        h = 2
        for _ in range(n // ell):
            h = mulmod(h, h, f)
        if gcd(f, h ^ 2) != 1:
            return False
    return True


def _prime_divisors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def irreducibles_of_degree(d: int):
    """Yield all monic irreducible polynomials of degree d over GF(2)."""
    for tail in range(1 << d):
        f = (1 << d) | tail
        if is_irreducible(f):
            yield f
