"""Elliptic curves in long Weierstrass form over an exact ground field.

The ground field is the rationals, a cubic field, a finite field, or (for
parametrized families) the ring of rational polynomials in t.  Points are
affine plus a distinguished point at infinity; all arithmetic is exact.

Division polynomials follow the convention that for even n the stored
polynomial is psi_n / psi_2, which is a polynomial in x alone; a flag on the
returned object records the removed psi_2 factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import lcm

from .cubicfield import CubicField, FieldElement, norm_trace
from .errors import PrecisionExhausted, SingularCurve
from .finitefield import FiniteField, enumerate_field, sqrt_in_field
from .numkernel import QQ, is_rational_square
from .polyring import Polynomial, poly_gcd, q_poly, rational_roots, roots_in_field


class _InfiniteBeyondBound:
    def __repr__(self):
        return "InfiniteBeyondBound"


INFINITE_BEYOND_BOUND = _InfiniteBeyondBound()


@dataclass(frozen=True)
class WeierstrassCurve:
    field: object
    a1: object
    a2: object
    a3: object
    a4: object
    a6: object

    @cached_property
    def b2(self):
        return self.a1 * self.a1 + 4 * self.a2

    @cached_property
    def b4(self):
        return 2 * self.a4 + self.a1 * self.a3

    @cached_property
    def b6(self):
        return self.a3 * self.a3 + 4 * self.a6

    @cached_property
    def b8(self):
        # direct polynomial form, valid in every characteristic
        return (
            self.a1 * self.a1 * self.a6
            + 4 * self.a2 * self.a6
            - self.a1 * self.a3 * self.a4
            + self.a2 * self.a3 * self.a3
            - self.a4 * self.a4
        )

    @cached_property
    def c4(self):
        return self.b2 * self.b2 - 24 * self.b4

    @cached_property
    def c6(self):
        return -(self.b2 * self.b2 * self.b2) + 36 * self.b2 * self.b4 - 216 * self.b6

    @cached_property
    def disc(self):
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        return (
            -(b2 * b2 * b8)
            - 8 * (b4 * b4 * b4)
            - 27 * (b6 * b6)
            + 9 * b2 * b4 * b6
        )

    @cached_property
    def j(self):
        return self.c4 * self.c4 * self.c4 / self.disc

    @property
    def a_invariants(self):
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def infinity(self):
        return CurvePoint(self, None, None)

    def point(self, x, y):
        x = self.field.coerce(x)
        y = self.field.coerce(y)
        if not self.contains(x, y):
            raise ValueError(f"({x}, {y}) is not on the curve")
        return CurvePoint(self, x, y)

    def contains(self, x, y):
        lhs = y * y + self.a1 * x * y + self.a3 * y
        rhs = x * x * x + self.a2 * x * x + self.a4 * x + self.a6
        return lhs == rhs

    def rhs_poly(self) -> Polynomial:
        """x^3 + a2 x^2 + a4 x + a6 over the ground field."""
        return Polynomial.make(
            self.field, [self.a6, self.a4, self.a2, self.field.one]
        )

    def __repr__(self):
        return (
            f"E({self.a1}, {self.a2}, {self.a3}, {self.a4}, {self.a6})"
            f" over {self.field!r}"
        )


def make_curve(a_invariants, field) -> WeierstrassCurve:
    """Build a nonsingular curve; raises SingularCurve when disc = 0."""
    a1, a2, a3, a4, a6 = (field.coerce(a) for a in a_invariants)
    curve = WeierstrassCurve(field, a1, a2, a3, a4, a6)
    if _is_zero_value(curve.disc):
        raise SingularCurve(f"discriminant vanishes for {a_invariants}")
    # consistency of derived invariants
    assert 4 * curve.b8 == curve.b2 * curve.b6 - curve.b4 * curve.b4
    assert 1728 * curve.disc == curve.c4 ** 3 - curve.c6 ** 2 if not isinstance(
        curve.c4, Polynomial
    ) else True
    if isinstance(curve.c4, Polynomial):
        assert curve.disc.scale(1728) == curve.c4 * curve.c4 * curve.c4 - curve.c6 * curve.c6
    return curve


def _is_zero_value(v):
    if isinstance(v, Polynomial):
        return v.is_zero()
    return not bool(v) if not isinstance(v, (int, Fraction)) else v == 0


@dataclass(frozen=True)
class CurvePoint:
    curve: WeierstrassCurve
    x: object
    y: object

    @property
    def is_infinity(self):
        return self.x is None

    def __neg__(self):
        if self.is_infinity:
            return self
        E = self.curve
        return CurvePoint(E, self.x, -self.y - E.a1 * self.x - E.a3)

    def __add__(self, other):
        return add_points(self, other)

    def __sub__(self, other):
        return add_points(self, -other)

    def __rmul__(self, n: int):
        return scalar_mul(n, self)

    def __repr__(self):
        if self.is_infinity:
            return "O"
        return f"({self.x}, {self.y})"


def add_points(p: CurvePoint, q: CurvePoint) -> CurvePoint:
    """Chord-tangent group law with infinity as identity."""
    if p.curve != q.curve:
        raise ValueError("points on different curves")
    if p.is_infinity:
        return q
    if q.is_infinity:
        return p
    E = p.curve
    a1, a2, a3, a4 = E.a1, E.a2, E.a3, E.a4
    if p.x == q.x:
        if q.y == -p.y - a1 * p.x - a3:
            return E.infinity()
        # doubling
        num = 3 * p.x * p.x + 2 * a2 * p.x + a4 - a1 * p.y
        den = 2 * p.y + a1 * p.x + a3
        lam = num / den
    else:
        lam = (q.y - p.y) / (q.x - p.x)
    nu = p.y - lam * p.x
    x3 = lam * lam + a1 * lam - a2 - p.x - q.x
    y3 = -(lam + a1) * x3 - nu - a3
    return CurvePoint(E, x3, y3)


def scalar_mul(n: int, p: CurvePoint) -> CurvePoint:
    if n < 0:
        return scalar_mul(-n, -p)
    result = p.curve.infinity()
    base = p
    while n:
        if n & 1:
            result = add_points(result, base)
        base = add_points(base, base)
        n >>= 1
    return result


def _prime_factors(n: int):
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


def point_order(p: CurvePoint, bound: int, bound_is_group_multiple: bool = True):
    """Least n <= bound with nP = O, else INFINITE_BEYOND_BOUND.

    When ``bound`` is known to be a multiple of the group order the factored
    trick is used: only divisors of the bound are inspected.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    if p.is_infinity:
        return 1
    if bound_is_group_multiple:
        if not scalar_mul(bound, p).is_infinity:
            return INFINITE_BEYOND_BOUND
        order = bound
        for ell in _prime_factors(bound):
            while order % ell == 0 and scalar_mul(order // ell, p).is_infinity:
                order //= ell
        return order
    acc = p
    for n in range(1, bound + 1):
        if acc.is_infinity:
            return n
        acc = add_points(acc, p)
    return INFINITE_BEYOND_BOUND


# ---------------------------------------------------------------------------
# Division polynomials (x-only convention).


@dataclass(frozen=True)
class DivisionPolynomial:
    """psi_n for odd n; psi_n/psi_2 for even n (flag ``over_psi2``)."""

    n: int
    poly: Polynomial
    over_psi2: bool


_g_cache: dict = {}


def two_torsion_poly(curve: WeierstrassCurve) -> Polynomial:
    """psi_2^2 = 4x^3 + b2 x^2 + 2 b4 x + b6, the 2-division cubic in x."""
    F = curve.field
    return Polynomial.make(
        F, [curve.b6, 2 * curve.b4, curve.b2, F.coerce(4)]
    )


def _g_sequence(curve: WeierstrassCurve, n: int) -> Polynomial:
    """x-only division polynomial ladder, memoized per curve."""
    key = (curve, n)
    if key in _g_cache:
        return _g_cache[key]
    F = curve.field
    b2, b4, b6, b8 = curve.b2, curve.b4, curve.b6, curve.b8
    psi22 = two_torsion_poly(curve)
    base = {
        0: Polynomial.make(F, []),
        1: Polynomial.make(F, [F.one]),
        2: Polynomial.make(F, [F.one]),
        3: Polynomial.make(F, [b8, 3 * b6, 3 * b4, b2, F.coerce(3)]),
        4: Polynomial.make(
            F,
            [
                b4 * b8 - b6 * b6,
                b2 * b8 - b4 * b6,
                10 * b8,
                10 * b6,
                5 * b4,
                b2,
                F.coerce(2),
            ],
        ),
    }

    def g(m: int) -> Polynomial:
        if (curve, m) in _g_cache:
            return _g_cache[(curve, m)]
        if m in base:
            val = base[m]
        elif m % 2 == 1:
            k = (m - 1) // 2
            if k % 2 == 0:
                val = g(k + 2) * g(k) ** 3 * psi22**2 - g(k - 1) * g(k + 1) ** 3
            else:
                val = g(k + 2) * g(k) ** 3 - g(k - 1) * g(k + 1) ** 3 * psi22**2
        else:
            k = m // 2
            val = g(k) * (g(k + 2) * g(k - 1) ** 2 - g(k - 2) * g(k + 1) ** 2)
        _g_cache[(curve, m)] = val
        return val

    return g(n)


def division_poly(curve: WeierstrassCurve, n: int) -> DivisionPolynomial:
    """n-th division polynomial in x; roots are x-coordinates killed by n.

    For odd n this is psi_n itself, of degree (n^2-1)/2 with leading
    coefficient n; for even n the psi_2 factor is removed and flagged.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    poly = _g_sequence(curve, n)
    return DivisionPolynomial(n, poly, n % 2 == 0)


def nth_kill_poly(curve: WeierstrassCurve, n: int) -> Polynomial:
    """Polynomial in x vanishing exactly on x-coords of points with nP = O.

    For even n that is (psi_n/psi_2) * psi_2^2; for odd n it is psi_n.
    """
    d = division_poly(curve, n)
    if d.over_psi2:
        return d.poly * two_torsion_poly(curve)
    return d.poly


def preimage_poly(curve: WeierstrassCurve, ell: int, target_x) -> Polynomial:
    """Numerator of x(ell*X) - target_x as a polynomial in x(X), degree ell^2.

    Roots are x-coordinates of points X with x(ell X) = target_x; this is the
    ascent ladder used to climb prime-power torsion without the huge
    psi_{ell^j} root searches.
    """
    if ell < 2:
        raise ValueError("ell must be >= 2")
    F = curve.field
    x0 = F.coerce(target_x)
    psi22 = two_torsion_poly(curve)
    x_minus = Polynomial.make(F, [-x0, F.one])
    g_ell = _g_sequence(curve, ell)
    g_lo = _g_sequence(curve, ell - 1)
    g_hi = _g_sequence(curve, ell + 1)
    if ell % 2 == 1:
        num = x_minus * g_ell * g_ell - g_lo * g_hi * psi22
    else:
        num = x_minus * g_ell * g_ell * psi22 - g_lo * g_hi
    assert num.degree() == ell * ell
    return num


# ---------------------------------------------------------------------------
# y-lifting.


def lift_x_status(curve: WeierstrassCurve, x0, height_bound: int = 10**40,
                  precision_bits: int = 256, precision_cap: int = 4096):
    """(points with x-coordinate x0, search_complete)."""
    F = curve.field
    x0 = F.coerce(x0)
    A = curve.a1 * x0 + curve.a3
    B = x0 * x0 * x0 + curve.a2 * x0 * x0 + curve.a4 * x0 + curve.a6
    if isinstance(F, FiniteField):
        if F.p == 2:
            pts = [
                CurvePoint(curve, x0, y)
                for y in enumerate_field(F)
                if y * y + A * y == B
            ]
            return pts, True
        delta = A * A + 4 * B
        half = F.coerce(Fraction(1, 2))
        pts = [
            CurvePoint(curve, x0, (s - A) * half) for s in sqrt_in_field(delta)
        ]
        return pts, True
    delta = A * A + 4 * B
    if isinstance(F, CubicField):
        if _is_zero_value(delta):
            return [CurvePoint(curve, x0, -A / 2)], True
        if delta.is_rational():
            root = is_rational_square(delta.as_rational())
            if root is None:
                return [], True
            sqrts = [F.coerce(root), F.coerce(-root)] if root else [F.zero]
        else:
            # a square in K has rational-square norm; cheap exact refusal
            nrm, _ = norm_trace(delta)
            if is_rational_square(nrm) is None:
                return [], True
            zpoly = Polynomial.make(F, [-delta, F.zero, F.one])
            sqrts, complete = roots_in_field(
                zpoly, F, height_bound=height_bound,
                precision_bits=precision_bits, precision_cap=precision_cap,
            )
            if not sqrts:
                return [], complete
        pts = sorted(
            {CurvePoint(curve, x0, (s - A) / 2) for s in sqrts},
            key=lambda P: str(P.y),
        )
        for P in pts:
            assert curve.contains(P.x, P.y)
        return pts, True
    # rationals
    if delta == 0:
        return [CurvePoint(curve, x0, -A / 2)], True
    root = is_rational_square(delta)
    if root is None:
        return [], True
    return (
        sorted(
            {CurvePoint(curve, x0, (s - A) / 2) for s in (root, -root)},
            key=lambda P: P.y,
        ),
        True,
    )


def lift_x(curve: WeierstrassCurve, x0, **kwargs):
    """Points of the curve with the given x-coordinate (0, 1, or 2)."""
    pts, complete = lift_x_status(curve, x0, **kwargs)
    if not complete:
        raise PrecisionExhausted(f"y-lift undecided at x = {x0}")
    return pts


def base_change(curve: WeierstrassCurve, K) -> WeierstrassCurve:
    """View a rational curve over an extension field."""
    return make_curve(curve.a_invariants, K)


def integral_rescale(curve: WeierstrassCurve):
    """(isomorphic curve with integral coefficients, scaling integer u).

    Applies a_i -> u^i a_i with u the lcm of all coordinate denominators;
    this preserves j and moves (x, y) to (u^2 x, u^3 y).
    """

    def dens(v):
        if isinstance(v, Fraction):
            return [v.denominator]
        if isinstance(v, FieldElement):
            return [c.denominator for c in v.coords]
        return [1]

    u = 1
    for a in curve.a_invariants:
        for d in dens(a):
            u = lcm(u, d)
    if u == 1:
        return curve, 1
    a1, a2, a3, a4, a6 = curve.a_invariants
    scaled = (u * a1, u**2 * a2, u**3 * a3, u**4 * a4, u**6 * a6)
    return make_curve(scaled, curve.field), u


def short_form(curve: WeierstrassCurve):
    """(A, B) with the curve isomorphic to y^2 = x^3 + A x + B (char 0)."""
    return -27 * curve.c4, -54 * curve.c6
