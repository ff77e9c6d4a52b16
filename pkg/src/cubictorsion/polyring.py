"""Dense univariate polynomials over an exact coefficient domain.

Supported domains: the rationals QQ, a CubicField, a FiniteField, and the
ring of rational polynomials in a parameter t (PolyRing).  On top of the
ring arithmetic this module provides exact division and gcd, rational roots,
root finding inside a cubic field through numeric embeddings plus rational
reconstruction, and factor-degree certification over the rationals from
distinct-degree factorization modulo several primes.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import gcd, lcm

from mpmath import mp

from .cubicfield import CubicField, FieldElement
from .errors import (
    DivisionByZero,
    InexactDivision,
    NoGoodPrimes,
    NotSquarefree,
)
from .finitefield import (
    FiniteField,
    ddf_degree_partition,
    poly_mod_gcd,
    poly_mod_normalize,
    poly_mod_roots,
)
from .numkernel import (
    DEFAULT_PRECISION,
    PRECISION_CAP,
    QQ,
    complex_roots,
    rat_reconstruct,
    rational_reconstruct_mod,
    to_mpc,
)


def _is_zero(c):
    if isinstance(c, Polynomial):
        return c.is_zero()
    return not bool(c) if not isinstance(c, (int, Fraction)) else c == 0


@dataclass(frozen=True)
class Polynomial:
    """Coefficients low to high over ``domain``; index equals degree."""

    domain: object
    coeffs: tuple

    @staticmethod
    def make(domain, coeffs):
        cs = [domain.coerce(c) for c in coeffs]
        while cs and _is_zero(cs[-1]):
            cs.pop()
        return Polynomial(domain, tuple(cs))

    def is_zero(self):
        return not self.coeffs

    def degree(self):
        return len(self.coeffs) - 1

    @property
    def lead(self):
        if self.is_zero():
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __add__(self, other):
        other = self._as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [self.domain.zero] * (n - len(self.coeffs))
        for i, c in enumerate(other.coeffs):
            a[i] = a[i] + c
        return Polynomial.make(self.domain, a)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.domain, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        other = self._as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return Polynomial(self.domain, ())
        out = [self.domain.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if _is_zero(x):
                continue
            for j, y in enumerate(other.coeffs):
                out[i + j] = out[i + j] + x * y
        return Polynomial.make(self.domain, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = Polynomial.make(self.domain, [self.domain.one])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        """Exact division; raises InexactDivision on a nonzero remainder."""
        other = self._as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        q, r = poly_divrem(self, other)
        if not r.is_zero():
            raise InexactDivision("polynomial division is not exact")
        return q

    def scale(self, scalar):
        s = self.domain.coerce(scalar)
        return Polynomial.make(self.domain, [c * s for c in self.coeffs])

    def shift_x(self, k: int):
        """Multiply by x^k."""
        if self.is_zero():
            return self
        return Polynomial(self.domain, (self.domain.zero,) * k + self.coeffs)

    def derivative(self):
        return Polynomial.make(
            self.domain,
            [self.domain.coerce(i) * c for i, c in enumerate(self.coeffs)][1:],
        )

    def monic(self):
        if self.is_zero():
            return self
        inv = self.domain.one / self.lead
        return Polynomial.make(self.domain, [c * inv for c in self.coeffs])

    def evaluate(self, x):
        """Horner evaluation; x may live in an extension of the domain."""
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * x + c
        if acc is None:
            return self.domain.zero if not hasattr(x, "field") else x.field.zero
        return acc

    def map_domain(self, new_domain, fn=None):
        fn = fn or new_domain.coerce
        return Polynomial.make(new_domain, [fn(c) for c in self.coeffs])

    def _as_poly(self, other):
        if isinstance(other, Polynomial):
            if other.domain is not self.domain and other.domain != self.domain:
                return NotImplemented
            return other
        try:
            return Polynomial.make(self.domain, [self.domain.coerce(other)])
        except TypeError:
            return NotImplemented

    def __repr__(self):
        if self.is_zero():
            return "Poly(0)"
        return "Poly(" + " + ".join(
            f"({c})*x^{i}" for i, c in enumerate(self.coeffs) if not _is_zero(c)
        ) + ")"


@dataclass(frozen=True)
class PolyRing:
    """Rational polynomials in one parameter, used as a coefficient domain.

    Elements are plain Polynomials over the base domain.  Not a field:
    coefficient divisions inside poly_divrem must land exactly or
    InexactDivision is raised.
    """

    base: object
    var: str = "t"

    is_field = False
    characteristic = 0

    @property
    def zero(self):
        return Polynomial(self.base, ())

    @property
    def one(self):
        return Polynomial.make(self.base, [self.base.one])

    @property
    def gen(self):
        return Polynomial.make(self.base, [self.base.zero, self.base.one])

    def coerce(self, value):
        if isinstance(value, Polynomial):
            if value.domain == self.base:
                return value
            raise TypeError("polynomial from a different ring")
        return Polynomial.make(self.base, [self.base.coerce(value)])


TPOLY = PolyRing(QQ)


def t_poly(coeffs) -> Polynomial:
    """Rational polynomial in the parameter t (an element of Q[t])."""
    return Polynomial.make(QQ, coeffs)


def q_poly(coeffs) -> Polynomial:
    return Polynomial.make(QQ, coeffs)


def x_poly_over_t(t_coeffs) -> Polynomial:
    """Polynomial in x whose coefficients are rational polynomials in t."""
    return Polynomial.make(TPOLY, t_coeffs)


def poly_divrem(g: Polynomial, h: Polynomial):
    """(q, r) with g = q*h + r and deg r < deg h.

    Over the polynomial-in-t coefficient ring the leading-coefficient
    divisions must be exact; otherwise InexactDivision propagates.
    """
    if h.is_zero():
        raise DivisionByZero("polynomial division by zero")
    domain = g.domain
    if h.domain != domain:
        h = h.map_domain(domain)
    rem = list(g.coeffs)
    dh = h.degree()
    if g.degree() < dh:
        return Polynomial(domain, ()), g
    quot = [domain.zero] * (len(rem) - dh)
    hl = h.lead
    while len(rem) - 1 >= dh and rem:
        f = rem[-1] / hl
        shift = len(rem) - 1 - dh
        quot[shift] = f
        for i, hc in enumerate(h.coeffs):
            rem[shift + i] = rem[shift + i] - f * hc
        while rem and _is_zero(rem[-1]):
            rem.pop()
    return Polynomial.make(domain, quot), Polynomial.make(domain, rem)


def poly_gcd(g: Polynomial, h: Polynomial) -> Polynomial:
    """Monic gcd by Euclid over a coefficient field."""
    if g.is_zero() and h.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    a, b = g, h
    while not b.is_zero():
        _, r = poly_divrem(a, b)
        a, b = b, r
    return a.monic()


def _primes(start=2):
    n = start
    while True:
        if n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1)):
            yield n
        n += 1


def integer_form(h: Polynomial):
    """(integer coefficient list, scale) with h * scale integral and primitive."""
    den = lcm(*(c.denominator for c in h.coeffs)) if h.coeffs else 1
    ints = [int(c * den) for c in h.coeffs]
    content = 0
    for v in ints:
        content = gcd(content, abs(v))
    content = content or 1
    return [v // content for v in ints], Fraction(den, content)


def reduce_poly_mod(int_coeffs, p: int):
    return poly_mod_normalize([c % p for c in int_coeffs], p)


def _squarefree_over_q(h: Polynomial) -> bool:
    """Exact squarefreeness over QQ, with a modular fast path for big inputs."""
    if h.degree() <= 0:
        return True
    ints, _ = integer_form(h)
    if h.degree() <= 24:
        return poly_gcd(h, h.derivative()).degree() == 0
    deriv = [i * c for i, c in enumerate(ints)][1:]
    tried = 0
    for p in _primes(5):
        if ints[-1] % p == 0:
            continue
        g = poly_mod_gcd(reduce_poly_mod(ints, p), reduce_poly_mod(deriv, p), p)
        if len(g) == 1:
            return True
        tried += 1
        if tried >= 30:
            break
    return poly_gcd(h, h.derivative()).degree() == 0


def _all_rational_coeffs(h: Polynomial) -> bool:
    return h.domain == QQ or all(
        isinstance(c, (int, Fraction))
        or (isinstance(c, FieldElement) and c.is_rational())
        for c in h.coeffs
    )


def _as_q_poly(h: Polynomial) -> Polynomial:
    return Polynomial.make(
        QQ,
        [c if isinstance(c, (int, Fraction)) else c.as_rational() for c in h.coeffs],
    )


def _squarefree_over_field(h: Polynomial, K: CubicField) -> bool:
    """Squarefreeness of h in K[x]; modular certificate, exact fallback."""
    if _all_rational_coeffs(h):
        # gcd degree is insensitive to field extension
        return _squarefree_over_q(_as_q_poly(h))
    dens = [
        lcm(*(fr.denominator for fr in c.coords)) if isinstance(c, FieldElement) else 1
        for c in h.coeffs
    ]
    den = lcm(*dens) if dens else 1
    tried = 0
    from .reduction import split_prime  # deferred: reduction imports polyring

    for p in _primes(5):
        if K.poly_disc % p == 0 or den % p == 0:
            continue
        try:
            split = split_prime(K, p)
        except Exception:
            continue
        Fq = split.residue_fields[0]
        to_res = _field_to_residue_map(K, split, 0)
        try:
            hp = h.map_domain(Fq, to_res)
        except ZeroDivisionError:
            continue
        if hp.degree() != h.degree():
            continue
        g = poly_gcd(hp, hp.derivative())
        if g.degree() == 0:
            return True
        tried += 1
        if tried >= 12:
            break
    return poly_gcd(h, h.derivative()).degree() == 0


def _field_to_residue_map(K: CubicField, split, index: int):
    Fq = split.residue_fields[index]
    root = split.residue_roots[index]

    def fn(c):
        if isinstance(c, (int, Fraction)):
            return Fq.coerce(c)
        acc = Fq.zero
        for coord in reversed(c.coords):
            acc = acc * root + Fq.coerce(coord)
        return acc

    return fn


def rational_roots(h: Polynomial):
    """All distinct rational roots of h, each verified exactly.

    Roots are recovered by lifting simple roots modulo a prime with
    squarefree reduction and applying rational reconstruction; every
    candidate is confirmed by exact evaluation.
    """
    if h.is_zero():
        raise ValueError("rational_roots of the zero polynomial")
    h = h.map_domain(QQ) if h.domain != QQ else h
    roots = []
    # strip powers of x
    k = 0
    while k < len(h.coeffs) and h.coeffs[k] == 0:
        k += 1
    if k:
        roots.append(Fraction(0))
        h = Polynomial(QQ, h.coeffs[k:])
    if h.degree() < 1:
        return sorted(roots)
    ints, _ = integer_form(h)
    deriv_ints = [i * c for i, c in enumerate(ints)][1:]
    good_p = None
    tried = 0
    for p in _primes(3):
        if ints[-1] % p == 0:
            continue
        g = poly_mod_gcd(reduce_poly_mod(ints, p), reduce_poly_mod(deriv_ints, p), p)
        if len(g) == 1:
            good_p = p
            break
        tried += 1
        if tried >= 25:
            break
    if good_p is None:
        # multiple factors over QQ: retry on the radical
        rad = h / poly_gcd(h, h.derivative())
        return sorted(set(roots) | set(rational_roots(rad)))
    p = good_p
    c0, lead = abs(ints[0]), abs(ints[-1])
    # symmetric reconstruction bound must dominate both |numerator| <= |c0|
    # and denominator <= |lead|
    target = 2 * max(c0, lead, 1) ** 2 + 1
    hp = reduce_poly_mod(ints, p)
    for r in poly_mod_roots(hp, p):
        m = p
        x = r
        while m < target:
            # Newton doubling: x := x - h(x)/h'(x)  (mod m^2)
            m = m * m
            hx = _eval_int_mod(ints, x, m)
            dhx = _eval_int_mod(deriv_ints, x, m)
            try:
                x = (x - hx * pow(dhx, -1, m)) % m
            except ValueError:
                break
        else:
            cand = rational_reconstruct_mod(x, m)
            if cand is not None and h.evaluate(cand) == 0:
                roots.append(cand)
    return sorted(set(roots))


def _eval_int_mod(coeffs, x, m):
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % m
    return acc


@dataclass(frozen=True)
class DegreeCertificate:
    """What the factor degrees of a rational polynomial can still be."""

    poly: Polynomial
    primes_used: tuple
    possible_factor_degrees: frozenset
    certified_no_factor_up_to: int
    irreducible_certified: bool


def factor_degree_sets(h: Polynomial, prime_count: int = 5,
                       prime_bound: int = 10000) -> DegreeCertificate:
    """Intersect subset-sums of DDF degree partitions modulo several primes.

    Any factor degree over QQ survives in every partition's subset sums, so
    the intersection bounds the possible factor degrees; a single-block
    partition certifies irreducibility.
    """
    if h.is_zero() or h.degree() < 1:
        raise ValueError("factor_degree_sets needs degree >= 1")
    h = h.map_domain(QQ) if h.domain != QQ else h
    ints, _ = integer_form(h)
    deg = len(ints) - 1
    primes_used = []
    mask = None
    irreducible = False
    for p in _primes(5):
        if p > prime_bound:
            break
        if ints[-1] % p == 0:
            continue
        hp = reduce_poly_mod(ints, p)
        try:
            parts = ddf_degree_partition(hp, p)
        except NotSquarefree:
            continue
        sums = 1
        for d in parts:
            sums |= sums << d
        if mask is None:
            mask = sums
        else:
            mask &= sums
        if parts == [deg]:
            irreducible = True
        primes_used.append(p)
        if len(primes_used) >= prime_count:
            break
    if len(primes_used) < prime_count:
        raise NoGoodPrimes(
            f"only {len(primes_used)} admissible primes below {prime_bound}"
        )
    possible = frozenset(d for d in range(1, deg + 1) if (mask >> d) & 1)
    up_to = 0
    for d in range(1, deg + 1):
        if d in possible:
            break
        up_to = d
    return DegreeCertificate(h, tuple(primes_used), possible, up_to, irreducible)


# ---------------------------------------------------------------------------
# Root search inside a cubic field.


def roots_in_field(h: Polynomial, K: CubicField, height_bound: int = 10**40,
                   precision_bits: int = DEFAULT_PRECISION,
                   precision_cap: int = PRECISION_CAP):
    """All roots of h lying in K, found numerically and verified exactly.

    Returns (roots, complete).  Roots satisfy h(x) = 0 by exact arithmetic,
    unconditionally.  ``complete`` means every candidate embedding tuple was
    either reconstructed and verified or cleanly rejected, so any K-root with
    coordinate denominators <= height_bound was found (conditional on the
    numeric kernel's residual contract).
    """
    if h.degree() < 1:
        raise ValueError("roots_in_field needs degree >= 1")
    if not _squarefree_over_field(h, K):
        raise NotSquarefree("input has repeated roots over the field")
    h_K = h if h.domain == K else h.map_domain(K)
    if h.degree() == 1:
        root = -(h_K.coeffs[0] / h_K.coeffs[1])
        return [root], True

    rational_input = _all_rational_coeffs(h)
    prec = max(precision_bits, 4 * height_bound.bit_length() + 64)
    while True:
        found, clean = _embedding_search(
            h, h_K, K, height_bound, prec, precision_cap, rational_input
        )
        if clean:
            return found, True
        if prec >= precision_cap:
            return found, False
        prec = min(prec * 2, precision_cap)


def _embedding_search(h, h_K, K, height_bound, prec, precision_cap, rational_input):
    from .errors import PrecisionExhausted

    embs = K.embeddings(prec)
    with mp.workprec(prec + 32):
        try:
            if rational_input:
                coeffs = [
                    c if isinstance(c, (int, Fraction)) else c.as_rational()
                    for c in h.coeffs
                ]
                shared = complex_roots(coeffs, prec, precision_cap)
                images = [shared, shared, shared]
            else:
                # signature (1,1) only consumes the real image and one member
                # of the conjugate pair
                needed = 3 if K.signature() == (3, 0) else 2
                images = []
                for e in embs[:needed]:
                    emb_coeffs = [e(c) for c in h_K.coeffs]
                    images.append(complex_roots(emb_coeffs, prec, precision_cap))
                images += [None] * (3 - needed)
        except PrecisionExhausted:
            return [], False
        vinv = _inverse_vandermonde([e.root for e in embs])
        real_eps = mp.mpf(2) ** (-prec // 4)
        imag_eps = mp.mpf(2) ** (-prec // 4)
        tuples = _candidate_tuples(K, images, real_eps)
        found = {}
        clean = True
        for s in tuples:
            c_num = [
                vinv[i][0] * s[0] + vinv[i][1] * s[1] + vinv[i][2] * s[2]
                for i in range(3)
            ]
            if any(abs(c.imag) > imag_eps for c in c_num):
                continue
            coords = []
            for c in c_num:
                q = rat_reconstruct(c.real, height_bound, prec)
                if q is None:
                    break
                coords.append(q)
            if len(coords) != 3:
                continue
            cand = K.element(coords)
            if h_K.evaluate(cand) == K.zero:
                found[cand] = float(s[0].real)
            else:
                # reconstruction locked onto a wrong rational: precision issue
                clean = False
        roots = [x for x, _ in sorted(found.items(), key=lambda kv: kv[1])]
        return roots, clean


def _candidate_tuples(K, images, real_eps):
    def real_roots(roots):
        return [mp.mpc(z.real) for z in roots if abs(z.imag) < real_eps]

    if K.signature() == (3, 0):
        r0, r1, r2 = (real_roots(im) for im in images)
        return [(a, b, c) for a in r0 for b in r1 for c in r2]
    out = []
    for u in real_roots(images[0]):
        for v in images[1]:
            out.append((u, v, mp.conj(v)))
    return out


def _inverse_vandermonde(roots):
    """Inverse of [[1, r_i, r_i^2]] rows via the explicit adjugate."""
    m = [[mp.mpc(1), r, r * r] for r in roots]
    det = (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )
    cof = [[None] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            sub = [m[r][c] for r in range(3) if r != i for c in range(3) if c != j]
            minor = sub[0] * sub[3] - sub[1] * sub[2]
            cof[j][i] = ((-1) ** (i + j)) * minor / det
    return cof


def lagrange_interpolate(points):
    """Interpolating polynomial over QQ through exact (x, y) points."""
    xs = [Fraction(x) for x, _ in points]
    ys = [Fraction(y) for _, y in points]
    if len(set(xs)) != len(xs):
        raise ValueError("interpolation nodes must be distinct")
    # Newton form, then expand.
    coeffs = ys[:]
    for j in range(1, len(xs)):
        for i in range(len(xs) - 1, j - 1, -1):
            coeffs[i] = (coeffs[i] - coeffs[i - 1]) / (xs[i] - xs[i - j])
    poly = Polynomial.make(QQ, [coeffs[-1]])
    for i in range(len(xs) - 2, -1, -1):
        poly = poly * Polynomial.make(QQ, [-xs[i], 1]) + Polynomial.make(QQ, [coeffs[i]])
    return poly
