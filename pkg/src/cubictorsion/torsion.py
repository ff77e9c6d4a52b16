"""Torsion subgroups of elliptic curves over the rationals or a cubic field.

The pipeline: bound the torsion order by reduction at several good primes,
then for each prime ell dividing the bound locate the ell-torsion through
division-polynomial root searches in the ground field, climb ell-power
orders with multiplication-preimage ladders, and assemble the group with
exactly verified generators.  A result is Certified only when every root
search ran to completion; numeric exhaustion degrades the status to
LowerBoundOnly, never silently.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from mpmath import mp

from .cubicfield import CubicField
from .errors import NotSquarefree, PreconditionFailed
from .ellcurve import (
    CurvePoint,
    WeierstrassCurve,
    add_points,
    base_change,
    division_poly,
    lift_x_status,
    make_curve,
    preimage_poly,
    scalar_mul,
    two_torsion_poly,
)
from .numkernel import QQ
from .polyring import Polynomial, poly_gcd, rational_roots, roots_in_field
from .reduction import torsion_bound

CERTIFIED = "Certified"
LOWER_BOUND_ONLY = "LowerBoundOnly"


@dataclass(frozen=True)
class TorsionConfig:
    prime_count: int = 3
    height_bound: int = 10**40
    precision_bits: int = 256
    precision_cap: int = 4096


DEFAULT_CONFIG = TorsionConfig()


@dataclass(frozen=True)
class TorsionResult:
    """Torsion group Z/n1 + Z/n2 with n1 | n2, generators, and provenance."""

    n1: int
    n2: int
    generators: tuple
    bound_B: int
    primes_used: tuple
    status: str
    logs: tuple

    @property
    def order(self):
        return self.n1 * self.n2

    @property
    def shape(self):
        return (self.n1, self.n2)

    def __repr__(self):
        return f"TorsionResult(Z/{self.n1} + Z/{self.n2}, {self.status})"


def _point_sort_key(point: CurvePoint):
    """Deterministic ordering: embedding-1 image of x, then of y."""
    K = point.curve.field
    if point.is_infinity:
        return (float("-inf"), float("-inf"))
    if isinstance(K, CubicField):
        emb = K.embeddings(64)[0]
        with mp.workprec(96):
            return (float(emb(point.x).real), float(emb(point.y).real))
    return (point.x, point.y)


def _find_roots(curve: WeierstrassCurve, poly: Polynomial, config: TorsionConfig):
    """Roots of poly in the ground field; retries on the radical if needed."""
    K = curve.field
    if isinstance(K, CubicField):
        try:
            return roots_in_field(
                poly, K,
                height_bound=config.height_bound,
                precision_bits=config.precision_bits,
                precision_cap=config.precision_cap,
            )
        except NotSquarefree:
            rad = poly / poly_gcd(poly, poly.derivative())
            return roots_in_field(
                rad, K,
                height_bound=config.height_bound,
                precision_bits=config.precision_bits,
                precision_cap=config.precision_cap,
            )
    qpoly = Polynomial.make(
        QQ,
        [c if isinstance(c, (int, Fraction)) else c.as_rational() for c in poly.coeffs],
    )
    return rational_roots(qpoly), True


def _lift(curve, x0, config):
    return lift_x_status(
        curve, x0,
        height_bound=config.height_bound,
        precision_bits=config.precision_bits,
        precision_cap=config.precision_cap,
    )


def _two_torsion_points(curve: WeierstrassCurve, config: TorsionConfig):
    """All 2-torsion points over the ground field, plus completeness."""
    xs, complete = _find_roots(curve, two_torsion_poly(curve), config)
    pts = []
    for x in xs:
        y = -(curve.a1 * x + curve.a3) / 2
        assert curve.contains(x, y)
        pts.append(CurvePoint(curve, x, y))
    return pts, complete


@dataclass(frozen=True)
class _EllPart:
    ell: int
    levels: tuple          # levels[j] = points of order ell^(j+1), canonical order
    two_torsion_count: int
    complete: bool

    @property
    def exponent_power(self):
        return len(self.levels)

    @property
    def generator(self):
        return self.levels[-1][0] if self.levels else None


def _ell_part(curve: WeierstrassCurve, ell: int, max_power: int,
              config: TorsionConfig, logs: list) -> _EllPart:
    """Find the ell-power torsion up to order ell^max_power."""
    complete = True
    if ell == 2:
        level, c = _two_torsion_points(curve, config)
        complete &= c
    else:
        dp = division_poly(curve, ell).poly
        xs, c = _find_roots(curve, dp, config)
        complete &= c
        level = []
        for x in xs:
            pts, c2 = _lift(curve, x, config)
            complete &= c2
            level.extend(pts)
    two_count = len(level) if ell == 2 else 0
    levels = []
    j = 1
    while level:
        level.sort(key=_point_sort_key)
        levels.append(tuple(level))
        logs.append(f"l={ell}: {len(level)} point(s) of order {ell**j}")
        if j >= max_power:
            break
        targets = []
        for pt in level:
            if pt.x not in targets:
                targets.append(pt.x)
        level = []
        for x0 in targets:
            pre = preimage_poly(curve, ell, x0)
            xs2, c3 = _find_roots(curve, pre, config)
            complete &= c3
            for x in xs2:
                pts, c4 = _lift(curve, x, config)
                complete &= c4
                for pt in pts:
                    if (
                        scalar_mul(ell ** (j + 1), pt).is_infinity
                        and not scalar_mul(ell**j, pt).is_infinity
                        and pt not in level
                    ):
                        level.append(pt)
        j += 1
    if not levels:
        logs.append(f"l={ell}: no {ell}-torsion")
    return _EllPart(ell, tuple(levels), two_count, complete)


def _factor(n: int):
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@lru_cache(maxsize=None)
def _torsion_cached(curve: WeierstrassCurve, config: TorsionConfig) -> TorsionResult:
    bound, primes_used = torsion_bound(curve, prime_count=config.prime_count)
    logs = [f"bound B = {bound} from primes {primes_used}"]
    parts = {}
    complete = True
    for ell, power in sorted(_factor(bound).items()):
        part = _ell_part(curve, ell, power, config, logs)
        complete &= part.complete
        if part.levels:
            parts[ell] = part
    n1 = 2 if (2 in parts and parts[2].two_torsion_count == 3) else 1
    n2 = 1
    main_gen = curve.infinity()
    for ell, part in sorted(parts.items()):
        order = ell**part.exponent_power
        n2 *= order
        main_gen = add_points(main_gen, part.generator)
    generators = []
    if n2 > 1:
        _verify_order(main_gen, n2)
        generators.append(main_gen)
    if n1 == 2:
        inside = scalar_mul(n2 // 2, main_gen)
        candidates = [p for p in parts[2].levels[0] if p != inside]
        candidates.sort(key=_point_sort_key)
        g1 = candidates[0]
        _verify_order(g1, 2)
        generators = [g1] + generators
    assert n2 % n1 == 0 and (n1 * n2 == 1 or bound % (n1 * n2) == 0)
    if isinstance(curve.field, CubicField):
        assert n1 in (1, 2)
    status = CERTIFIED if complete else LOWER_BOUND_ONLY
    return TorsionResult(
        n1, n2, tuple(generators), bound, primes_used, status, tuple(logs)
    )


def _verify_order(point: CurvePoint, n: int):
    assert scalar_mul(n, point).is_infinity
    for ell in _factor(n):
        assert not scalar_mul(n // ell, point).is_infinity


def torsion_subgroup(curve: WeierstrassCurve,
                     config: TorsionConfig = DEFAULT_CONFIG) -> TorsionResult:
    """Full torsion subgroup of a curve over the rationals or a cubic field."""
    if not isinstance(curve.field, CubicField) and curve.field is not QQ:
        raise TypeError("torsion_subgroup expects a curve over QQ or a cubic field")
    return _torsion_cached(curve, config)


@dataclass(frozen=True)
class OrderSearch:
    answer: str              # "yes" | "no" | "unknown"
    point: CurvePoint | None


def has_point_of_order(curve: WeierstrassCurve, n: int,
                       config: TorsionConfig = DEFAULT_CONFIG) -> OrderSearch:
    """Decide existence of a point of exact order n over the ground field."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return OrderSearch("yes", curve.infinity())
    bound, _ = torsion_bound(curve, prime_count=config.prime_count)
    gens = []
    unknown = False
    for ell, power in _factor(n).items():
        if bound % ell**power != 0:
            return OrderSearch("no", None)
        logs: list = []
        part = _ell_part(curve, ell, power, config, logs)
        if part.exponent_power >= power:
            gens.append(part.levels[power - 1][0])
        elif part.complete:
            return OrderSearch("no", None)
        else:
            unknown = True
    if unknown:
        return OrderSearch("unknown", None)
    point = curve.infinity()
    for g in gens:
        point = add_points(point, g)
    _verify_order(point, n)
    return OrderSearch("yes", point)


def sylow2_check(curve: WeierstrassCurve, K: CubicField,
                 config: TorsionConfig = DEFAULT_CONFIG) -> bool:
    """Whether the 2-Sylow torsion over QQ survives unchanged over K.

    Precondition: the rational torsion has a nontrivial 2-part.
    """
    if curve.field is not QQ:
        raise TypeError("sylow2_check expects a curve over the rationals")
    rational = torsion_subgroup(curve, config)
    if rational.order % 2 != 0:
        raise PreconditionFailed("rational torsion has trivial 2-Sylow subgroup")
    extended = torsion_subgroup(base_change(curve, K), config)
    return _two_part(rational.shape) == _two_part(extended.shape)


def _two_part(shape):
    def two_power(n):
        out = 1
        while n % 2 == 0:
            out *= 2
            n //= 2
        return out

    return (two_power(shape[0]), two_power(shape[1]))
