"""Reduction of curves over cubic fields (or the rationals) at good primes.

Covers prime splitting in a cubic field, coefficient-wise reduction maps to
residue fields, exact point counts by enumeration, group structure over F_q,
the Frobenius trace recurrence, and the multi-prime torsion bound coming from
the injection of torsion into residue-field groups at unramified odd primes
of good reduction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .cubicfield import CubicField, FieldElement
from .errors import (
    BadReduction,
    HasseViolation,
    NoGoodPrimes,
    NonIntegral,
    RamifiedOrIndexPrime,
    TooLarge,
)
from .finitefield import (
    FFElement,
    FiniteField,
    enumerate_field,
    ff_quadratic_count,
    make_residue_field,
    poly_mod_divrem,
    poly_mod_normalize,
    poly_mod_roots,
    sqrt_in_field,
)
from .ellcurve import (
    CurvePoint,
    WeierstrassCurve,
    add_points,
    integral_rescale,
    make_curve,
    scalar_mul,
)
from .numkernel import QQ

COUNT_CAP = 10**6
STRUCTURE_CAP = 10**4


@dataclass(frozen=True)
class PrimeSplit:
    """Factorization of the defining cubic modulo an unramified prime."""

    field: CubicField
    p: int
    factors: tuple            # monic irreducible factors mod p, low-to-high int tuples
    residue_fields: tuple     # FiniteField per factor
    residue_roots: tuple      # image of alpha in each residue field

    @property
    def degrees(self):
        return tuple(len(f) - 1 for f in self.factors)


def split_prime(K: CubicField, p: int) -> PrimeSplit:
    """Factor the defining cubic mod p; p must not divide the poly disc."""
    if K.poly_disc % p == 0:
        raise RamifiedOrIndexPrime(f"{p} divides poly disc of {K.label}")
    f = [K.c0 % p, K.c1 % p, K.c2 % p, 1]
    roots = poly_mod_roots(f, p)
    factors = []
    rest = f
    for r in roots:
        factors.append(((-r) % p, 1))
        rest, rem = poly_mod_divrem(rest, [(-r) % p, 1], p)
        assert not rem
    rest = poly_mod_normalize(rest, p)
    if len(rest) > 1:
        # no roots remain, so a degree-2 or degree-3 tail is irreducible
        factors.append(tuple(rest))
    fields = tuple(make_residue_field(p, g) for g in factors)
    images = []
    for g, Fq in zip(factors, fields):
        if len(g) == 2:
            images.append(Fq.coerce((-g[0]) % p))
        else:
            images.append(Fq.gen)
    assert sum(len(g) - 1 for g in factors) == 3
    return PrimeSplit(K, p, tuple(factors), fields, tuple(images))


def residue_map(split: PrimeSplit, index: int):
    """Coefficient-wise map K -> residue field number ``index``."""
    Fq = split.residue_fields[index]
    root = split.residue_roots[index]

    def fn(value):
        if isinstance(value, (int, Fraction)):
            return Fq.coerce(value)
        if isinstance(value, FieldElement):
            acc = Fq.zero
            for coord in reversed(value.coords):
                acc = acc * root + Fq.coerce(coord)
            return acc
        raise TypeError(f"cannot reduce {value!r}")

    return fn


@dataclass(frozen=True)
class ReducedCurve:
    curve: WeierstrassCurve
    source: WeierstrassCurve
    split: PrimeSplit | None
    factor_index: int
    scale: int

    @property
    def residue_field(self):
        return self.curve.field


def _coefficient_denominators(curve: WeierstrassCurve):
    dens = []
    for a in curve.a_invariants:
        if isinstance(a, Fraction):
            dens.append(a.denominator)
        elif isinstance(a, FieldElement):
            dens.extend(c.denominator for c in a.coords)
    return dens


def reduce_curve(curve: WeierstrassCurve, split: PrimeSplit,
                 factor_index: int) -> ReducedCurve:
    """Reduce a curve over K at one prime above p, after integral rescaling."""
    p = split.p
    model, u = integral_rescale(curve)
    if u % p == 0:
        raise NonIntegral(f"rescaling unit {u} is divisible by {p}")
    fn = residue_map(split, factor_index)
    try:
        red = [fn(a) for a in model.a_invariants]
    except ZeroDivisionError as exc:
        raise NonIntegral(str(exc)) from exc
    Fq = split.residue_fields[factor_index]
    reduced = WeierstrassCurve(Fq, *red)
    if not reduced.disc:
        raise BadReduction(f"disc reduces to zero at prime above {p}")
    return ReducedCurve(reduced, curve, split, factor_index, u)


def reduce_rational_curve(curve: WeierstrassCurve, p: int) -> ReducedCurve:
    """Reduce a curve over the rationals mod p, after integral rescaling."""
    model, u = integral_rescale(curve)
    if u % p == 0:
        raise NonIntegral(f"rescaling unit {u} is divisible by {p}")
    Fp = make_residue_field(p, (0, 1))
    red = [Fp.coerce(a) for a in model.a_invariants]
    reduced = WeierstrassCurve(Fp, *red)
    if not reduced.disc:
        raise BadReduction(f"disc reduces to zero mod {p}")
    return ReducedCurve(reduced, curve, None, 0, u)


def reduce_point(reduced: ReducedCurve, point: CurvePoint) -> CurvePoint:
    """Image of a point under the reduction map (good, non-infinite case).

    Coordinates move to the rescaled model via (x, y) -> (u^2 x, u^3 y) and
    then map coefficient-wise; a p in a denominator raises NonIntegral.
    """
    if point.is_infinity:
        return reduced.curve.infinity()
    u = reduced.scale
    x = point.x * u**2
    y = point.y * u**3
    if reduced.split is not None:
        fn = residue_map(reduced.split, reduced.factor_index)
    else:
        fn = reduced.curve.field.coerce
    try:
        xr, yr = fn(x), fn(y)
    except ZeroDivisionError as exc:
        raise NonIntegral(str(exc)) from exc
    if not reduced.curve.contains(xr, yr):
        raise BadReduction("point does not reduce onto the curve")
    return CurvePoint(reduced.curve, xr, yr)


def count_points(curve: WeierstrassCurve) -> int:
    """#E(F_q) by summing per-x quadratic solution counts, plus infinity."""
    Fq = curve.field
    if not isinstance(Fq, FiniteField):
        raise TypeError("count_points needs a curve over a finite field")
    q = Fq.order
    if q > COUNT_CAP:
        raise TooLarge(f"q = {q} exceeds {COUNT_CAP}")
    a1, a2, a3, a4, a6 = curve.a_invariants
    total = 1
    for x in enumerate_field(Fq):
        a = a1 * x + a3
        b = ((x + a2) * x + a4) * x + a6
        total += ff_quadratic_count(a, b)
    if (total - q - 1) ** 2 > 4 * q:
        raise HasseViolation(f"count {total} violates Hasse at q = {q}")
    return total


def all_points(curve: WeierstrassCurve):
    """Every affine point of E(F_q) (q capped for enumeration)."""
    Fq = curve.field
    q = Fq.order
    if q > STRUCTURE_CAP:
        raise TooLarge(f"q = {q} exceeds {STRUCTURE_CAP}")
    a1, a2, a3, a4, a6 = curve.a_invariants
    pts = []
    if Fq.p == 2:
        for x in enumerate_field(Fq):
            for y in enumerate_field(Fq):
                if curve.contains(x, y):
                    pts.append(CurvePoint(curve, x, y))
        return pts
    half = Fq.coerce(Fraction(1, 2))
    for x in enumerate_field(Fq):
        a = a1 * x + a3
        b = ((x + a2) * x + a4) * x + a6
        delta = a * a + 4 * b
        for s in sqrt_in_field(delta):
            pts.append(CurvePoint(curve, x, (s - a) * half))
    return pts


def group_structure(curve: WeierstrassCurve):
    """(n1, n2) with E(F_q) isomorphic to Z/n1 + Z/n2, n1 | n2.

    The exponent n2 is the lcm of the point orders; n1 is #E / n2.
    """
    pts = all_points(curve)
    total = len(pts) + 1
    factors = _factorize(total)
    exponent = 1
    for pt in pts:
        order = total
        for ell in factors:
            while order % ell == 0 and scalar_mul(order // ell, pt).is_infinity:
                order //= ell
        exponent = exponent * order // gcd(exponent, order)
        if exponent == total:
            break
    n2 = exponent
    n1 = total // n2
    assert n1 * n2 == total and n2 % n1 == 0
    return n1, n2


def _factorize(n: int):
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


def frobenius_counts(count_q: int, q: int, k: int) -> int:
    """#E(F_{q^k}) from the trace recurrence, given #E(F_q) for E over F_q."""
    a = q + 1 - count_q
    if a * a > 4 * q:
        raise HasseViolation(f"trace {a} violates Hasse at q = {q}")
    s_prev, s_cur = 2, a
    for _ in range(k - 1):
        s_prev, s_cur = s_cur, a * s_cur - q * s_prev
    if k == 0:
        return 1
    return q**k + 1 - s_cur


def _iter_primes(start: int):
    n = start
    while True:
        if n >= 2 and all(n % d for d in range(2, isqrt(n) + 1)):
            yield n
        n += 1


def admissible_reductions(curve: WeierstrassCurve, p: int):
    """All residue-field reductions of the curve at p, or None if p is unusable.

    Usable means: p >= 3, unramified and prime to the index (p does not
    divide the poly disc), coefficients p-integral after rescaling, and good
    reduction at every prime above p with a countable residue field.
    """
    K = curve.field
    try:
        if isinstance(K, CubicField):
            split = split_prime(K, p)
            if any(p ** (len(g) - 1) > COUNT_CAP for g in split.factors):
                return None
            return [
                reduce_curve(curve, split, i) for i in range(len(split.factors))
            ]
        return [reduce_rational_curve(curve, p)]
    except (RamifiedOrIndexPrime, BadReduction, NonIntegral):
        return None


def torsion_bound(curve: WeierstrassCurve, prime_count: int = 3,
                  prime_search_bound: int = 1000):
    """(B, primes_used): the torsion order divides B.

    B is the gcd over admissible rational primes p >= 3 of the gcd of the
    residue-field point counts at every prime above p; torsion injects into
    each of those groups.
    """
    bound = 0
    used = []
    for p in _iter_primes(3):
        if p > prime_search_bound:
            break
        reds = admissible_reductions(curve, p)
        if reds is None:
            continue
        local = 0
        for red in reds:
            local = gcd(local, count_points(red.curve))
        bound = gcd(bound, local)
        used.append(p)
        if len(used) >= prime_count:
            break
    if len(used) < prime_count:
        raise NoGoodPrimes(
            f"only {len(used)} admissible primes below {prime_search_bound}"
        )
    return bound, tuple(used)
