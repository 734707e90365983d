"""Certified rational interval arithmetic, enough to decide the sign of a
real cyclotomic number exactly: pi via Machin's formula with alternating
series truncation bounds, sin and cos via Taylor with alternating-series
remainders, and interval ring operations over Fraction endpoints.

No floating point is used anywhere; every endpoint is a Fraction and every
enclosure is rigorous.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty interval")

    @staticmethod
    def point(x):
        x = Fraction(x)
        return Interval(x, x)

    def __add__(self, o):
        o = _coerce(o)
        return Interval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, o):
        return self + (-_coerce(o))

    def __rsub__(self, o):
        return _coerce(o) + (-self)

    def __mul__(self, o):
        o = _coerce(o)
        cands = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo,
                 self.hi * o.hi]
        return Interval(min(cands), max(cands))

    __rmul__ = __mul__

    def width(self):
        return self.hi - self.lo

    def sign(self):
        """+1, -1, or None when the interval straddles zero."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        return None

    def contains_zero(self):
        return self.lo <= 0 <= self.hi


def _coerce(x):
    if isinstance(x, Interval):
        return x
    return Interval.point(Fraction(x))


def _arctan_inv(n, terms):
    """Enclosure of arctan(1/n) after `terms` alternating terms."""
    total = Fraction(0)
    sign = 1
    for k in range(terms):
        total += Fraction(sign, (2 * k + 1) * n ** (2 * k + 1))
        sign = -sign
    tail = Fraction(1, (2 * terms + 1) * n ** (2 * terms + 1))
    if sign > 0:
        return Interval(total, total + tail)
    return Interval(total - tail, total)


def pi_interval(terms=30):
    """Machin: pi = 16 arctan(1/5) - 4 arctan(1/239)."""
    return _arctan_inv(5, terms) * 16 - _arctan_inv(239, terms) * 4


def _sin_cos_small(x: Interval, terms):
    """Taylor enclosures valid for |x| <= 2 (alternating series bounds)."""
    if max(abs(x.lo), abs(x.hi)) > 2:
        raise ValueError("argument reduction failed")
    mid = (x.lo + x.hi) / 2
    rad = (x.hi - x.lo) / 2
    # evaluate at the midpoint, widen by the Lipschitz bound (|f'| <= 1)
    s = Fraction(0)
    c = Fraction(0)
    xs = Fraction(mid)
    term_s = xs
    term_c = Fraction(1)
    sign = 1
    for k in range(terms):
        s += sign * term_s
        c += sign * term_c
        term_s = term_s * xs * xs / ((2 * k + 2) * (2 * k + 3))
        term_c = term_c * xs * xs / ((2 * k + 1) * (2 * k + 2))
        sign = -sign
    err = max(abs(term_s), abs(term_c))  # alternating remainder bound
    widen = err + rad
    return (Interval(s - widen, s + widen), Interval(c - widen, c + widen))


def sin_cos_2pi_frac(k, m, precision_terms=25):
    """Enclosures of (sin, cos) of 2 pi k / m, by quadrant reduction."""
    k = k % m
    pi = pi_interval(precision_terms + 10)
    # angle = 2 pi k/m; reduce to |theta| <= pi/4-ish using symmetries:
    # work with t = k/m in [0,1) and fold into [0, 1/8]
    t = Fraction(k, m)

    def fold(t):
        # returns (t', transform) with transform in 0..7 octant index
        oct_ = int(t * 8) % 8
        frac = t - Fraction(oct_, 8)
        return oct_, frac

    oct_, frac = fold(t)
    theta = pi * 2 * Fraction(frac)  # in [0, pi/4]
    s, c = _sin_cos_small(theta, precision_terms)
    eighth = pi * 2 * Fraction(1, 8)
    # sin/cos of (octant*pi/4 + theta) via angle addition with exact
    # sqrt(2)/2 enclosure
    r = _sqrt_half(precision_terms)
    table = {
        0: lambda s, c: (s, c),
        1: lambda s, c: (r * (c + s), r * (c - s)),
        2: lambda s, c: (c, -s),
        3: lambda s, c: (r * (c - s), -(r * (c + s))),
        4: lambda s, c: (-s, -c),
        5: lambda s, c: (-(r * (c + s)), -(r * (c - s))),
        6: lambda s, c: (-c, s),
        7: lambda s, c: (-(r * (c - s)), r * (c + s)),
    }
    return table[oct_](s, c)


def _sqrt_half(terms):
    """Enclosure of sqrt(1/2) by interval bisection."""
    lo, hi = Fraction(7071, 10000), Fraction(7072, 10000)
    for _ in range(terms * 2):
        mid = (lo + hi) / 2
        if mid * mid * 2 <= 1:
            lo = mid
        else:
            hi = mid
    return Interval(lo, hi)


def eval_poly_at_root_of_unity(coeffs, k, m, precision=25):
    """Enclosure of Re(sum c_j w^j) and Im(...) for w = exp(2 pi i k/m),
    rational coefficients."""
    re = Interval.point(0)
    im = Interval.point(0)
    for j, cj in enumerate(coeffs):
        if cj == 0:
            continue
        s, c = sin_cos_2pi_frac(j * k, m, precision)
        re = re + c * Fraction(cj)
        im = im + s * Fraction(cj)
    return re, im


def sign_of_real_cyclotomic(coeffs, k, m, max_precision=200):
    """Exact sign of sum c_j w^j (known real, w = exp(2 pi i k/m));
    None only if the number is exactly zero -- the caller must have ruled
    that out in the field."""
    prec = 25
    while prec <= max_precision:
        re, im = eval_poly_at_root_of_unity(coeffs, k, m, prec)
        s = re.sign()
        if s is not None:
            return s
        prec *= 2
    raise ArithmeticError(
        "sign did not resolve; is the value exactly zero?")
