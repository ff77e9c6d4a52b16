"""Prime fields F_p and extensions F_{p^k} for k <= 3.

Residue degrees of primes in a cubic field never exceed 3, so the extension
machinery is deliberately small: elements are coefficient tuples modulo a
monic irreducible modulus, and hot loops (DDF, point counting) run on raw
tuples through the field's internal ops.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DivisionByZero,
    NotSquarefree,
    ReducibleModulus,
    TooLarge,
)

ENUM_CAP = 10**6


@dataclass(frozen=True)
class FiniteField:
    """F_{p^k}; ``modulus`` is the monic degree-k modulus, low to high."""

    p: int
    k: int
    modulus: tuple | None = None

    is_field = True

    def __post_init__(self):
        if self.k > 1:
            assert self.modulus is not None and len(self.modulus) == self.k + 1
            assert self.modulus[-1] % self.p == 1

    @property
    def characteristic(self):
        return self.p

    @property
    def order(self):
        return self.p**self.k

    @property
    def zero(self):
        return FFElement(self, (0,) * self.k)

    @property
    def one(self):
        return FFElement(self, (1,) + (0,) * (self.k - 1))

    @property
    def gen(self):
        """The class of x for k >= 2, the element 1 for k = 1."""
        if self.k == 1:
            return self.one
        return FFElement(self, (0, 1) + (0,) * (self.k - 2))

    def element(self, coords):
        c = tuple(int(x) % self.p for x in coords)
        if len(c) != self.k:
            raise ValueError(f"expected {self.k} coordinates")
        return FFElement(self, c)

    def coerce(self, value):
        if isinstance(value, FFElement):
            if value.field != self:
                raise ValueError("element of a different finite field")
            return value
        if isinstance(value, int):
            return FFElement(self, (value % self.p,) + (0,) * (self.k - 1))
        if isinstance(value, Fraction):
            num = value.numerator % self.p
            den = value.denominator % self.p
            if den == 0:
                raise ZeroDivisionError(f"denominator divisible by {self.p}")
            return self.coerce(num * pow(den, -1, self.p))
        raise TypeError(f"cannot coerce {value!r} into F_{self.p}^{self.k}")

    # Raw tuple arithmetic used by enumeration-heavy callers.
    def _add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def _sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def _neg(self, a):
        p = self.p
        return tuple((-x) % p for x in a)

    def _mul(self, a, b):
        p = self.p
        k = self.k
        if k == 1:
            return ((a[0] * b[0]) % p,)
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        # reduce by the monic modulus
        mod = self.modulus
        for i in range(2 * k - 2, k - 1, -1):
            c = prod[i] % p
            if c:
                for j in range(k):
                    prod[i - k + j] -= c * mod[j]
            prod[i] = 0
        return tuple(v % p for v in prod[:k])

    def _pow(self, a, n):
        result = (1,) + (0,) * (self.k - 1)
        base = a
        while n:
            if n & 1:
                result = self._mul(result, base)
            base = self._mul(base, base)
            n >>= 1
        return result

    def _inv(self, a):
        if all(v == 0 for v in a):
            raise DivisionByZero(f"1/0 in F_{self.p}^{self.k}")
        if self.k == 1:
            return (pow(a[0], -1, self.p),)
        return self._pow(a, self.order - 2)

    def __repr__(self):
        if self.k == 1:
            return f"F_{self.p}"
        return f"F_{self.p}^{self.k}"


@dataclass(frozen=True)
class FFElement:
    field: FiniteField
    coords: tuple

    def _pair(self, other):
        if isinstance(other, FFElement):
            if other.field != self.field:
                raise ValueError("mixed finite fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.coerce(other)
        return None

    def __add__(self, other):
        o = self._pair(other)
        if o is None:
            return NotImplemented
        return FFElement(self.field, self.field._add(self.coords, o.coords))

    __radd__ = __add__

    def __neg__(self):
        return FFElement(self.field, self.field._neg(self.coords))

    def __sub__(self, other):
        o = self._pair(other)
        if o is None:
            return NotImplemented
        return FFElement(self.field, self.field._sub(self.coords, o.coords))

    def __rsub__(self, other):
        o = self._pair(other)
        if o is None:
            return NotImplemented
        return FFElement(self.field, self.field._sub(o.coords, self.coords))

    def __mul__(self, other):
        o = self._pair(other)
        if o is None:
            return NotImplemented
        return FFElement(self.field, self.field._mul(self.coords, o.coords))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._pair(other)
        if o is None:
            return NotImplemented
        return FFElement(self.field, self.field._mul(self.coords, self.field._inv(o.coords)))

    def __rtruediv__(self, other):
        o = self._pair(other)
        if o is None:
            return NotImplemented
        return FFElement(self.field, self.field._mul(o.coords, self.field._inv(self.coords)))

    def __pow__(self, n):
        if n < 0:
            return FFElement(self.field, self.field._pow(self.field._inv(self.coords), -n))
        return FFElement(self.field, self.field._pow(self.coords, n))

    def __bool__(self):
        return any(self.coords)

    def __repr__(self):
        return f"{list(self.coords)} in {self.field}"


def make_residue_field(p: int, g) -> FiniteField:
    """Residue field F_p[x]/(g) for a monic irreducible g of degree <= 3.

    For degree 2 and 3 irreducibility is equivalent to having no roots in F_p.
    """
    g = tuple(int(c) % p for c in g)
    while len(g) > 1 and g[-1] == 0:
        g = g[:-1]
    deg = len(g) - 1
    if deg < 1 or deg > 3:
        raise ValueError("modulus degree must be 1..3")
    if g[-1] != 1:
        raise ValueError("modulus must be monic")
    if deg == 1:
        return FiniteField(p, 1)
    for x in range(p):
        if _eval_mod(g, x, p) == 0:
            raise ReducibleModulus(f"{list(g)} has root {x} mod {p}")
    return FiniteField(p, deg, g)


def _eval_mod(coeffs, x, p):
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % p
    return acc


def enumerate_field(field: FiniteField):
    """Yield every element exactly once (order capped at 10^6)."""
    if field.order > ENUM_CAP:
        raise TooLarge(f"|F| = {field.order} exceeds {ENUM_CAP}")
    p, k = field.p, field.k
    idx = [0] * k
    while True:
        yield FFElement(field, tuple(idx))
        i = 0
        while i < k:
            idx[i] += 1
            if idx[i] < p:
                break
            idx[i] = 0
            i += 1
        if i == k:
            return


def quadratic_character(a: FFElement) -> int:
    """1 for a nonzero square, -1 for a non-square, 0 for zero (odd q)."""
    field = a.field
    if field.p == 2:
        raise ValueError("quadratic character needs odd characteristic")
    if not a:
        return 0
    val = field._pow(a.coords, (field.order - 1) // 2)
    return 1 if val == field.one.coords else -1


def ff_quadratic_count(a: FFElement, b: FFElement) -> int:
    """Number of y in the field with y^2 + a*y = b."""
    field = a.field
    if field.p == 2:
        # Fields here have at most 8 elements; brute force is exact and clear.
        count = 0
        for y in enumerate_field(field):
            if y * y + a * y == b:
                count += 1
        return count
    half = field.coerce(Fraction(1, 2))
    delta = b + a * a * half * half
    return 1 + quadratic_character(delta)


def sqrt_in_field(a: FFElement):
    """Solutions y of y^2 = a as a list (0, 1, or 2 values)."""
    field = a.field
    if field.p == 2:
        return [y for y in enumerate_field(field) if y * y == a]
    if not a:
        return [field.zero]
    if quadratic_character(a) != 1:
        return []
    q = field.order
    if q % 4 == 3:
        y = a ** ((q + 1) // 4)
    else:
        y = _tonelli_shanks(a)
    assert y * y == a
    return sorted([y, -y], key=lambda e: e.coords)


def _tonelli_shanks(a: FFElement):
    field = a.field
    q = field.order
    s, m = q - 1, 0
    while s % 2 == 0:
        s //= 2
        m += 1
    z = None
    for cand in enumerate_field(field):
        if cand and quadratic_character(cand) == -1:
            z = cand
            break
    c = z**s
    t = a**s
    r = a ** ((s + 1) // 2)
    while t != field.one:
        i, tt = 0, t
        while tt != field.one:
            tt = tt * tt
            i += 1
        b = c ** (1 << (m - i - 1))
        m = i
        c = b * b
        t = t * c
        r = r * b
    return r


# ---------------------------------------------------------------------------
# Polynomials over F_p as plain int lists (low to high), used by DDF and by
# prime splitting.  Kept free of element objects for speed.


def poly_trim(c):
    while c and c[-1] % 1 == 0 and (c[-1] == 0):
        c.pop()
    return c


def poly_mod_normalize(c, p):
    c = [v % p for v in c]
    while c and c[-1] == 0:
        c.pop()
    return c


def poly_mod_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return poly_mod_normalize(out, p)


def poly_mod_divrem(a, b, p):
    a = [v % p for v in a]
    b = poly_mod_normalize(list(b), p)
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    inv_lead = pow(b[-1], -1, p)
    q = [0] * max(1, len(a) - len(b) + 1)
    a = poly_mod_normalize(a, p)
    while len(a) >= len(b):
        f = (a[-1] * inv_lead) % p
        shift = len(a) - len(b)
        q[shift] = f
        for i, bc in enumerate(b):
            a[shift + i] = (a[shift + i] - f * bc) % p
        a = poly_mod_normalize(a, p)
    return poly_mod_normalize(q, p), a


def poly_mod_gcd(a, b, p):
    a = poly_mod_normalize(list(a), p)
    b = poly_mod_normalize(list(b), p)
    while b:
        _, r = poly_mod_divrem(a, b, p)
        a, b = b, r
    if a:
        inv = pow(a[-1], -1, p)
        a = [(v * inv) % p for v in a]
    return a


def poly_mod_pow_mod(base, exponent, modpoly, p):
    result = [1]
    base = poly_mod_divrem(base, modpoly, p)[1]
    while exponent:
        if exponent & 1:
            result = poly_mod_divrem(poly_mod_mul(result, base, p), modpoly, p)[1]
        base = poly_mod_divrem(poly_mod_mul(base, base, p), modpoly, p)[1]
        exponent >>= 1
    return result


def ff_ddf(h, p: int):
    """Distinct-degree factorization of a squarefree monic h over F_p.

    ``h`` is an int list, low to high.  Returns [(d, product of all
    irreducible factors of degree d)], d ascending.
    """
    h = poly_mod_normalize(list(h), p)
    if len(h) < 2:
        raise ValueError("ff_ddf needs degree >= 1")
    if h[-1] != 1:
        raise ValueError("ff_ddf needs a monic polynomial")
    deriv = poly_mod_normalize([(i * c) % p for i, c in enumerate(h)][1:], p)
    if len(poly_mod_gcd(h, deriv, p)) != 1:
        raise NotSquarefree(f"input not squarefree mod {p}")
    out = []
    rest = h
    xp = [0, 1]
    frob = poly_mod_pow_mod(xp, p, rest, p)  # x^p mod h
    power = frob
    d = 1
    while len(rest) - 1 >= 2 * d:
        diff = poly_mod_normalize(
            [a - b for a, b in zip_longest_pad(power, xp)], p
        )
        g = poly_mod_gcd(rest, diff, p)
        if len(g) > 1:
            out.append((d, g))
            rest = poly_mod_divrem(rest, g, p)[0]
            power = poly_mod_divrem(power, rest, p)[1]
        d += 1
        if len(rest) == 1:
            break
        power = poly_mod_pow_mod(power, p, rest, p)
    if len(rest) > 1:
        out.append((len(rest) - 1, rest))
    return out


def zip_longest_pad(a, b):
    n = max(len(a), len(b))
    return zip(a + [0] * (n - len(a)), b + [0] * (n - len(b)))


def ddf_degree_partition(h, p: int):
    """Degrees with multiplicity: degree-d block of size m contributes m/d copies."""
    h = poly_mod_normalize(list(h), p)
    if h and h[-1] != 1:
        inv = pow(h[-1], -1, p)
        h = [(c * inv) % p for c in h]
    parts = []
    for d, block in ff_ddf(h, p):
        count = (len(block) - 1) // d
        parts.extend([d] * count)
    return sorted(parts)


def poly_mod_roots(h, p: int):
    """Roots of h in F_p by scanning residues (p is always small here)."""
    h = poly_mod_normalize(list(h), p)
    return [x for x in range(p) if _eval_mod(h, x, p) == 0]
