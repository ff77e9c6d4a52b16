"""Numeric kernel: exact rationals, arbitrary-precision complex arithmetic,
simultaneous polynomial root finding, and rational reconstruction.

Big floats and complexes are mpmath values; all exact rational work runs on
``fractions.Fraction``.  Every public function takes the precision it should
honor explicitly, so nothing here depends on ambient mpmath state.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

import mpmath
import numpy as np
from mpmath import mp

from .errors import DivisionByZero, NotSquarefree, PrecisionExhausted

DEFAULT_PRECISION = 256
PRECISION_CAP = 4096


class RationalField:
    """The rationals as a coefficient domain (singleton ``QQ``)."""

    is_field = True
    characteristic = 0
    zero = Fraction(0)
    one = Fraction(1)

    def coerce(self, value):
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        raise TypeError(f"cannot coerce {value!r} into QQ")

    def __repr__(self):
        return "QQ"


QQ = RationalField()


def exact_fraction(x) -> Fraction:
    """Exact rational value of a finite mpf (mpf values are dyadic)."""
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    # Read mantissa/exponent directly: mp.mpf(x) would re-round x to the
    # ambient precision and destroy guard bits.
    sign, man, exp, _ = x._mpf_ if hasattr(x, "_mpf_") else mp.mpf(x)._mpf_
    if man == 0 and exp != 0:
        raise ValueError("non-finite value has no exact fraction")
    man = int(man)
    if sign:
        man = -man
    if exp >= 0:
        return Fraction(man * (1 << exp))
    return Fraction(man, 1 << (-exp))


def to_mpf(value):
    """Convert an int/Fraction/mpf to mpf at the current working precision."""
    if isinstance(value, Fraction):
        return mp.mpf(value.numerator) / value.denominator
    return mp.mpf(value)


def to_mpc(value):
    if isinstance(value, Fraction):
        return mp.mpc(to_mpf(value))
    return mp.mpc(value)


def rat_reconstruct(x, denominator_bound: int, precision_bits: int = DEFAULT_PRECISION):
    """Recognize the float ``x`` as a rational with small denominator.

    Returns the continued-fraction best approximation p/q with
    q <= denominator_bound if it satisfies |x - p/q| < 2**(-precision_bits/2),
    else None.  Half the precision is kept as a guard band, so honest
    reconstructions must be much closer than accidental near-misses.
    """
    if denominator_bound < 1:
        raise ValueError("denominator_bound must be >= 1")
    target = exact_fraction(x)
    tol = Fraction(1, 1 << (precision_bits // 2))

    # Continued-fraction walk, keeping the last convergent with an admissible
    # denominator plus the best semiconvergent at the cutoff.
    p_prev, q_prev = 1, 0
    p_cur, q_cur = None, None
    num, den = target.numerator, target.denominator
    best = None
    while True:
        a, rem = divmod(num, den)
        p, q = (a, 1) if p_cur is None else (a * p_cur + p_prev, a * q_cur + q_prev)
        if q > denominator_bound:
            # Largest semiconvergent below the bound can still be the best
            # approximation with an admissible denominator.
            if p_cur is not None:
                t = (denominator_bound - q_prev) // q_cur
                if t >= 1:
                    cand = Fraction(t * p_cur + p_prev, t * q_cur + q_prev)
                    if best is None or abs(target - cand) < abs(target - best):
                        best = cand
            break
        best = Fraction(p, q)
        if rem == 0:
            break
        p_prev, q_prev, p_cur, q_cur = (p_cur, q_cur, p, q) if p_cur is not None else (1, 0, p, q)
        num, den = den, rem
    if best is not None and abs(target - best) < tol:
        return best
    return None


def rational_reconstruct_mod(residue: int, modulus: int):
    """Unique u/v with u*v' == residue (mod modulus), |u|,|v| <= sqrt(m/2).

    Classic half-extended Euclid; returns None when no such fraction exists
    or gcd(v, modulus) > 1.
    """
    bound = isqrt(modulus // 2)
    r0, r1 = modulus, residue % modulus
    t0, t1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if r1 == 0 or abs(t1) > bound or gcd(abs(t1), modulus) != 1:
        return None
    if t1 < 0:
        r1, t1 = -r1, -t1
    if gcd(abs(r1), t1) != 1:
        return None
    return Fraction(r1, t1)


def _rational_poly_gcd_degree(coeffs):
    """Degree of gcd(h, h') for h with Fraction coefficients (local Euclid)."""

    def trim(c):
        while c and c[-1] == 0:
            c.pop()
        return c

    def rem(a, b):
        a = a[:]
        while len(a) >= len(b):
            f = a[-1] / b[-1]
            shift = len(a) - len(b)
            for i, bc in enumerate(b):
                a[shift + i] -= f * bc
            trim(a)
            if not a:
                break
        return a

    h = [Fraction(c) for c in coeffs]
    dh = trim([i * c for i, c in enumerate(h)][1:])
    a, b = h[:], dh
    while b:
        a, b = b, rem(a, b)
    return len(a) - 1


def _initial_roots(monic, deg):
    """Starting points: double-precision companion roots, circle fallback."""
    try:
        scale = max(abs(c) for c in monic)
        floats = [complex(c / scale) for c in monic]
        arr = np.roots(list(reversed(floats)))
        if len(arr) == deg and np.all(np.isfinite(arr)):
            return [mp.mpc(complex(z)) for z in arr]
    except (OverflowError, ValueError, np.linalg.LinAlgError):
        pass
    radius = max(mp.mpf("0.5"), abs(monic[0]) ** (mp.mpf(1) / deg))
    return [
        radius * mp.expjpi(mp.mpf(2 * k) / deg + mp.mpf("0.35") / deg)
        for k in range(deg)
    ]


def _separate(points):
    """Nudge coincident starting points apart."""
    out = []
    for z in points:
        while any(z == w for w in out):
            z = z + mp.mpf("1e-3") * (1 + 1j)
        out.append(z)
    return out


def _horner2(monic, z):
    """(p(z), p'(z)) for monic given low-to-high."""
    p = mp.mpc(0)
    dp = mp.mpc(0)
    for c in reversed(monic):
        dp = dp * z + p
        p = p * z + c
    return p, dp


def _aberth_pass(monic, roots, tol, max_iter):
    deg = len(monic) - 1
    for _ in range(max_iter):
        moved = mp.mpf(0)
        new = list(roots)
        for k in range(deg):
            z = roots[k]
            p, dp = _horner2(monic, z)
            if p == 0:
                continue
            if dp == 0:
                new[k] = z + tol * (1 + 1j)
                moved = max(moved, abs(tol))
                continue
            newton = p / dp
            s = mp.mpc(0)
            for j in range(deg):
                if j != k:
                    diff = z - roots[j]
                    if diff == 0:
                        diff = mp.mpc(tol)
                    s += 1 / diff
            denom = 1 - newton * s
            step = newton if denom == 0 else newton / denom
            new[k] = z - step
            moved = max(moved, abs(step) / (1 + abs(z)))
        roots = new
        if moved < tol:
            break
    return roots


def _newton_sweeps(monic, roots, sweeps):
    """Per-root Newton polish; cheap (no pairwise coupling)."""
    for _ in range(sweeps):
        out = []
        for z in roots:
            p, dp = _horner2(monic, z)
            out.append(z if dp == 0 else z - p / dp)
        roots = out
    return roots


def _run_aberth(coeff_mpc_factory, deg, work_bits, coupled=False):
    """Separate roots with Aberth at low precision, then Newton ladders.

    Quadratic Newton convergence doubles accuracy per sweep, so doubling
    working precision with two sweeps per level tracks the roots at O(n)
    cost per root; the coupled O(n^2) Aberth passes (``coupled=True``) are
    the fallback when the cheap path misses the residual contract.
    """
    levels = [64]
    while levels[-1] < work_bits:
        levels.append(min(levels[-1] * 2, work_bits))
    roots = None
    for lvl in levels:
        with mp.workprec(lvl + 20):
            monic = coeff_mpc_factory()
            lead = monic[-1]
            monic = [c / lead for c in monic]
            if roots is None:
                roots = _separate(_initial_roots(monic, deg))
                tol = mp.mpf(2) ** (-lvl + 10)
                roots = _aberth_pass(monic, roots, tol, 60 + 4 * deg)
            else:
                roots = [mp.mpc(z) for z in roots]
                if coupled:
                    tol = mp.mpf(2) ** (-lvl + 10)
                    roots = _aberth_pass(monic, roots, tol, 30)
                else:
                    roots = _newton_sweeps(monic, roots, 2)
        if not coupled and _has_duplicates(roots, lvl):
            # two approximants locked onto one root: redo fully coupled
            return _run_aberth(coeff_mpc_factory, deg, work_bits, coupled=True)
    with mp.workprec(work_bits + 20):
        monic = coeff_mpc_factory()
        lead = monic[-1]
        monic = [c / lead for c in monic]
        roots = _newton_sweeps(monic, [mp.mpc(z) for z in roots], 2)
    return roots


def _has_duplicates(roots, prec_bits):
    eps = mp.mpf(2) ** (-max(16, prec_bits // 4))
    ordered = sorted(roots, key=lambda z: (z.real, z.imag))
    return any(
        abs(a - b) < eps for a, b in zip(ordered, ordered[1:])
    )


def complex_roots(coeffs, precision_bits: int = DEFAULT_PRECISION,
                  precision_cap: int = PRECISION_CAP):
    """All complex roots of the polynomial with the given low-to-high coeffs.

    Coefficients may be ints, Fractions, mpf or mpc values.  Returns exactly
    deg values, canonically ordered by (real part, imaginary part), each with
    residual |h(r)| <= 2**(-precision_bits+10) * max|coefficient|.  Working
    precision escalates until that contract holds or the cap is passed.
    """
    coeffs = list(coeffs)
    while coeffs and _is_zero_coeff(coeffs[-1]):
        coeffs.pop()
    deg = len(coeffs) - 1
    if deg < 1:
        raise ValueError("complex_roots needs degree >= 1")
    if all(isinstance(c, (int, Fraction)) for c in coeffs):
        if _rational_poly_gcd_degree(coeffs) > 0:
            raise NotSquarefree("gcd(h, h') is nonconstant")

    def factory():
        return [to_mpc(c) for c in coeffs]

    work = precision_bits + 64 + 2 * deg
    cap = max(precision_cap, work)
    coupled = False
    while True:
        roots = _run_aberth(factory, deg, work, coupled=coupled)
        check = work + 32
        with mp.workprec(check):
            cs = factory()
            maxc = max(abs(c) for c in cs)
            bound = mp.mpf(2) ** (-precision_bits + 10) * maxc
            ok = True
            for r in roots:
                val = mp.mpc(0)
                for c in reversed(cs):
                    val = val * r + c
                if abs(val) > bound:
                    ok = False
                    break
            if ok:
                return sorted((mp.mpc(r) for r in roots),
                              key=lambda z: (z.real, z.imag))
        if not coupled:
            # retry once with fully coupled iterations before raising precision
            coupled = True
            continue
        if work >= cap:
            raise PrecisionExhausted(
                f"root residual contract unreachable at {cap} bits"
            )
        work = min(work * 2, cap)


def _is_zero_coeff(c):
    if isinstance(c, (int, Fraction)):
        return c == 0
    return c == 0


def invert_fraction(q: Fraction) -> Fraction:
    if q == 0:
        raise DivisionByZero("1/0 in QQ")
    return 1 / q


def is_rational_square(q: Fraction):
    """Return sqrt(q) as a Fraction when q is a square in QQ, else None."""
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None
