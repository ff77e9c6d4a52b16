"""Cubic number fields Q[x]/(f) for a monic integer cubic f.

Elements are stored by their coordinates (c0, c1, c2) in the power basis
1, alpha, alpha^2 with exact Fraction entries.  Numeric embeddings come from
the numeric kernel and follow a fixed canonical order so that everything
derived from embedding indices is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt

from mpmath import mp

from .errors import DiscMismatch, DivisionByZero, FieldMismatch, Reducible
from .numkernel import DEFAULT_PRECISION, complex_roots, to_mpc


def cubic_disc(coeffs) -> int:
    """Discriminant of the monic cubic x^3 + c2 x^2 + c1 x + c0.

    ``coeffs`` is (c0, c1, c2).  Cross-checked against -Res(f, f').
    """
    c0, c1, c2 = (int(c) for c in coeffs)
    disc = (
        18 * c2 * c1 * c0
        - 4 * c2**3 * c0
        + c2**2 * c1**2
        - 4 * c1**3
        - 27 * c0**2
    )
    assert disc == -_resultant_f_fprime(c0, c1, c2), "discriminant formula drift"
    return disc


def _resultant_f_fprime(c0: int, c1: int, c2: int) -> int:
    # Sylvester matrix of f (deg 3) and f' (deg 2), 5x5, exact determinant.
    f = [1, c2, c1, c0]
    g = [3, 2 * c2, c1]
    rows = [
        f + [0, 0][: 5 - len(f)],
        [0] + f + [0][: 4 - len(f)],
        g + [0, 0],
        [0] + g + [0],
        [0, 0] + g,
    ]
    m = [[Fraction(v) for v in row[:5]] for row in rows]
    det = Fraction(1)
    for col in range(5):
        piv = next((r for r in range(col, 5) if m[r][col] != 0), None)
        if piv is None:
            return 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, 5):
            factor = m[r][col] * inv
            if factor:
                for c in range(col, 5):
                    m[r][c] -= factor * m[col][c]
    assert det.denominator == 1
    return int(det)


def _integer_roots(c0: int, c1: int, c2: int):
    """Rational (hence integer) roots of the monic integer cubic."""
    if c0 == 0:
        return [0]
    roots = []
    d = 1
    n = abs(c0)
    divs = set()
    while d * d <= n:
        if n % d == 0:
            divs.update((d, n // d))
        d += 1
    for a in sorted(divs):
        for r in (a, -a):
            if r**3 + c2 * r**2 + c1 * r + c0 == 0:
                roots.append(r)
    return roots


def galois_group(coeffs) -> str:
    """"C3" iff the discriminant is a perfect square, else "S3"."""
    c0, c1, c2 = (int(c) for c in coeffs)
    if _integer_roots(c0, c1, c2):
        raise Reducible("cubic has a rational root")
    disc = cubic_disc(coeffs)
    if disc > 0 and isqrt(disc) ** 2 == disc:
        return "C3"
    return "S3"


@dataclass(frozen=True)
class CubicField:
    """Q[x]/(x^3 + c2 x^2 + c1 x + c0) with catalog metadata."""

    c0: int
    c1: int
    c2: int
    poly_disc: int
    field_disc: int
    label: str

    is_field = True
    characteristic = 0
    degree = 3

    @property
    def defining_coeffs(self):
        """(c0, c1, c2, 1), low to high."""
        return (self.c0, self.c1, self.c2, 1)

    @property
    def zero(self):
        return FieldElement(self, (Fraction(0), Fraction(0), Fraction(0)))

    @property
    def one(self):
        return FieldElement(self, (Fraction(1), Fraction(0), Fraction(0)))

    @property
    def gen(self):
        return FieldElement(self, (Fraction(0), Fraction(1), Fraction(0)))

    def element(self, coords):
        c = tuple(Fraction(x) for x in coords)
        if len(c) != 3:
            raise ValueError("cubic field elements take 3 coordinates")
        return FieldElement(self, c)

    def coerce(self, value):
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatch(f"element of {value.field.label} used in {self.label}")
            return value
        if isinstance(value, (int, Fraction)):
            return FieldElement(self, (Fraction(value), Fraction(0), Fraction(0)))
        raise TypeError(f"cannot coerce {value!r} into {self.label}")

    def embeddings(self, precision_bits: int = DEFAULT_PRECISION):
        """The three embeddings into the complex numbers, canonically ordered.

        Real roots come first in ascending order; for negative discriminant
        the order is (real root, root with positive imaginary part, its
        conjugate).
        """
        return _embeddings(self, precision_bits)

    def signature(self):
        """(real embeddings, conjugate pairs): (3,0) or (1,1)."""
        return (3, 0) if self.field_disc > 0 else (1, 1)

    def __repr__(self):
        return f"CubicField({self.label}, x^3 + {self.c2}x^2 + {self.c1}x + {self.c0})"


class Embedding:
    """One complex embedding of a cubic field, determined by a root of f."""

    def __init__(self, field: CubicField, root, index: int, is_real: bool):
        self.field = field
        self.root = root
        self.index = index
        self.is_real = is_real

    def __call__(self, value):
        if isinstance(value, (int, Fraction)):
            return to_mpc(Fraction(value))
        if isinstance(value, FieldElement):
            c0, c1, c2 = value.coords
            r = self.root
            return to_mpc(c0) + to_mpc(c1) * r + to_mpc(c2) * r * r
        raise TypeError(f"cannot embed {value!r}")


@lru_cache(maxsize=None)
def _embeddings(field: CubicField, precision_bits: int):
    # mp.mpc re-rounds to the ambient precision, so keep all handling of the
    # high-precision roots inside an explicit workprec block.
    with mp.workprec(precision_bits + 32):
        roots = complex_roots(
            [field.c0, field.c1, field.c2, 1], precision_bits=precision_bits
        )
        if field.field_disc > 0:
            ordered = sorted(roots, key=lambda z: z.real)
            reals = [mp.mpc(z.real) for z in ordered]
            return tuple(
                Embedding(field, r, i, True) for i, r in enumerate(reals)
            )
        real = min(roots, key=lambda z: abs(z.imag))
        pair = [z for z in roots if z is not real]
        upper = max(pair, key=lambda z: z.imag)
        lower = min(pair, key=lambda z: z.imag)
        return (
            Embedding(field, mp.mpc(real.real), 0, True),
            Embedding(field, upper, 1, False),
            Embedding(field, lower, 2, False),
        )


def make_field(coeffs, field_disc: int, label: str) -> CubicField:
    """Validate and build a cubic field from (c0, c1, c2) and its catalog disc.

    Raises Reducible when f has a rational root, DiscMismatch when
    poly_disc/field_disc is not the square of a positive integer.
    """
    c0, c1, c2 = (int(c) for c in coeffs)
    if _integer_roots(c0, c1, c2):
        raise Reducible(f"{label}: defining cubic has a rational root")
    pdisc = cubic_disc((c0, c1, c2))
    if field_disc == 0 or pdisc % field_disc != 0:
        raise DiscMismatch(f"{label}: poly disc {pdisc} vs field disc {field_disc}")
    ratio = pdisc // field_disc
    if ratio <= 0 or isqrt(ratio) ** 2 != ratio:
        raise DiscMismatch(
            f"{label}: poly disc / field disc = {ratio} is not a positive square"
        )
    return CubicField(c0, c1, c2, pdisc, field_disc, label)


@dataclass(frozen=True)
class FieldElement:
    """Element of a cubic field in the power basis."""

    field: CubicField
    coords: tuple

    def __post_init__(self):
        assert len(self.coords) == 3

    def is_rational(self):
        return self.coords[1] == 0 and self.coords[2] == 0

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coords[0]

    def _pair(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch("elements of different cubic fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.coerce(other)
        return None

    def __add__(self, other):
        o = self._pair(other)
        if o is None:
            return NotImplemented
        return FieldElement(
            self.field, tuple(a + b for a, b in zip(self.coords, o.coords))
        )

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        o = self._pair(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._pair(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._pair(other)
        if o is None:
            return NotImplemented
        a0, a1, a2 = self.coords
        b0, b1, b2 = o.coords
        d0 = a0 * b0
        d1 = a0 * b1 + a1 * b0
        d2 = a0 * b2 + a1 * b1 + a2 * b0
        d3 = a1 * b2 + a2 * b1
        d4 = a2 * b2
        K = self.field
        c0, c1, c2 = K.c0, K.c1, K.c2
        # alpha^3 = -(c2 a^2 + c1 a + c0); alpha^4 folds one more step.
        r0 = d0 - d3 * c0 + d4 * c2 * c0
        r1 = d1 - d3 * c1 + d4 * (c2 * c1 - c0)
        r2 = d2 - d3 * c2 + d4 * (c2 * c2 - c1)
        return FieldElement(K, (r0, r1, r2))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._pair(other)
        if o is None:
            return NotImplemented
        return self * elem_inv(o)

    def __rtruediv__(self, other):
        o = self._pair(other)
        if o is None:
            return NotImplemented
        return o * elem_inv(self)

    def __pow__(self, n: int):
        if n < 0:
            return elem_inv(self) ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.coords == other.coords
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coords[0] == other
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self.coords[0])
        return hash((self.field.label, self.coords))

    def __bool__(self):
        return any(c != 0 for c in self.coords)

    def __repr__(self):
        c0, c1, c2 = self.coords
        return f"({c0} + {c1}*a + {c2}*a^2 in {self.field.label})"


def elem_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def elem_inv(a: FieldElement) -> FieldElement:
    """Inverse via extended Euclid on (a as polynomial, f)."""
    if not a:
        raise DivisionByZero(f"1/0 in {a.field.label}")
    K = a.field
    f = [Fraction(K.c0), Fraction(K.c1), Fraction(K.c2), Fraction(1)]
    g = list(a.coords)

    def trim(p):
        while p and p[-1] == 0:
            p.pop()
        return p

    def divrem(num, den):
        num = num[:]
        q = [Fraction(0)] * max(1, len(num) - len(den) + 1)
        while len(num) >= len(den) and num:
            fct = num[-1] / den[-1]
            shift = len(num) - len(den)
            q[shift] = fct
            for i, dc in enumerate(den):
                num[shift + i] -= fct * dc
            trim(num)
        return trim(q), num

    # Invariant: r0 = s0*g (mod f), r1 = s1*g (mod f).
    r0, r1 = f, trim(g[:])
    s0, s1 = [], [Fraction(1)]
    while len(r1) > 1:
        q, r = divrem(r0, r1)
        s = _poly_sub(s0, _poly_mul(q, s1))
        r0, s0, r1, s1 = r1, s1, r, s
    if not r1:
        raise DivisionByZero("element shares a factor with f (f reducible?)")
    scale = 1 / r1[0]
    inv = [c * scale for c in s1] + [Fraction(0)] * 3
    result = FieldElement(K, tuple(inv[:3]))
    assert result * a == K.one
    return result


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    while out and out[-1] == 0:
        out.pop()
    return out


def _poly_sub(a, b):
    out = list(a) + [Fraction(0)] * max(0, len(b) - len(a))
    for i, y in enumerate(b):
        out[i] -= y
    while out and out[-1] == 0:
        out.pop()
    return out


def norm_trace(a: FieldElement):
    """(norm, trace) via the multiplication matrix, exactly."""
    K = a.field
    cols = [a * K.one, a * K.gen, a * K.gen * K.gen]
    m = [[col.coords[i] for col in cols] for i in range(3)]
    trace = m[0][0] + m[1][1] + m[2][2]
    norm = (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )
    return norm, trace
