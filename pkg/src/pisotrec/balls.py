"""Complex midpoint-radius balls with exact dyadic rational endpoints.

Every operation returns a ball that contains the exact result for any
choice of points in the operand balls. Midpoints are rounded to ``prec``
significant bits after multiplications and divisions and the rounding error
is folded into the radius, so sizes stay bounded.
"""
from fractions import Fraction
from math import isqrt

_RADIUS_BITS = 30


def _log2_floor(q):
    """floor(log2(|q|)) for nonzero rational q, possibly off by one (low)."""
    q = abs(q)
    e = q.numerator.bit_length() - q.denominator.bit_length()
    if Fraction(2) ** e > q:
        e -= 1
    return e


def _grid(e):
    return Fraction(1 << e) if e >= 0 else Fraction(1, 1 << -e)


def round_dyadic(q, bits):
    """Round q to ``bits`` significant bits; returns (rounded, |error|)."""
    q = Fraction(q)
    if q == 0:
        return q, Fraction(0)
    g = _grid(_log2_floor(q) - bits)
    scaled = q / g
    if scaled.denominator == 1:
        return q, Fraction(0)
    r = round(scaled) * g
    return r, abs(q - r)


def round_up(q, bits=_RADIUS_BITS):
    """Smallest dyadic >= q with about ``bits`` significant bits (q >= 0)."""
    q = Fraction(q)
    if q <= 0:
        return Fraction(0)
    g = _grid(_log2_floor(q) - bits)
    scaled = q / g
    return -(-scaled.numerator // scaled.denominator) * g


def round_down(q, bits=_RADIUS_BITS):
    q = Fraction(q)
    if q <= 0:
        return Fraction(0) if q == 0 else -round_up(-q, bits)
    g = _grid(_log2_floor(q) - bits)
    scaled = q / g
    return (scaled.numerator // scaled.denominator) * g


def sqrt_upper(q, bits):
    """Dyadic upper bound for sqrt(q), q >= 0, absolute accuracy ~2**-bits relative to 1."""
    q = Fraction(q)
    if q == 0:
        return Fraction(0)
    shift = max(bits, bits - _log2_floor(q) // 2)
    n = -(-(q.numerator << (2 * shift)) // q.denominator)
    s = isqrt(n)
    if s * s < n:
        s += 1
    return Fraction(s, 1 << shift)


def sqrt_lower(q, bits):
    q = Fraction(q)
    if q == 0:
        return Fraction(0)
    shift = max(bits, bits - _log2_floor(q) // 2)
    n = (q.numerator << (2 * shift)) // q.denominator
    return Fraction(isqrt(n), 1 << shift)


class Ball:
    __slots__ = ("re", "im", "rad", "prec")

    def __init__(self, re, im=0, rad=0, prec=128):
        self.re = Fraction(re)
        self.im = Fraction(im)
        self.rad = Fraction(rad)
        self.prec = prec

    def __repr__(self):
        return f"Ball({float(self.re)!r}, {float(self.im)!r}, rad={float(self.rad):.3g})"

    @classmethod
    def coerce(cls, v, prec=128):
        if isinstance(v, Ball):
            return v
        if isinstance(v, complex):
            return cls(Fraction(v.real), Fraction(v.imag), 0, prec)
        return cls(Fraction(v), 0, 0, prec)

    def _trim(self):
        re, e1 = round_dyadic(self.re, self.prec)
        im, e2 = round_dyadic(self.im, self.prec)
        self.re, self.im = re, im
        self.rad = round_up(self.rad + e1 + e2)
        return self

    def mid_abs2(self):
        return self.re * self.re + self.im * self.im

    def abs_upper(self):
        return sqrt_upper(self.mid_abs2(), self.prec + 8) + self.rad

    def abs_lower(self):
        return max(Fraction(0), sqrt_lower(self.mid_abs2(), self.prec + 8) - self.rad)

    def contains(self, z):
        """Exact membership test for a rational/complex-rational point or Ball."""
        if isinstance(z, Ball):
            dre, dim = z.re - self.re, z.im - self.im
            extra = z.rad
        else:
            if isinstance(z, complex):
                zr, zi = Fraction(z.real), Fraction(z.imag)
            else:
                zr, zi = Fraction(z), Fraction(0)
            dre, dim = zr - self.re, zi - self.im
            extra = 0
        if extra > self.rad:
            return False
        lim = self.rad - extra
        return dre * dre + dim * dim <= lim * lim

    def excludes_zero(self):
        return self.mid_abs2() > self.rad * self.rad

    def real_interval(self):
        return self.re - self.rad, self.re + self.rad

    def imag_interval(self):
        return self.im - self.rad, self.im + self.rad

    def conjugate(self):
        return Ball(self.re, -self.im, self.rad, self.prec)

    def __neg__(self):
        return Ball(-self.re, -self.im, self.rad, self.prec)

    def __add__(self, other):
        o = Ball.coerce(other, self.prec)
        return Ball(self.re + o.re, self.im + o.im, self.rad + o.rad, max(self.prec, o.prec))

    __radd__ = __add__

    def __sub__(self, other):
        o = Ball.coerce(other, self.prec)
        return Ball(self.re - o.re, self.im - o.im, self.rad + o.rad, max(self.prec, o.prec))

    def __rsub__(self, other):
        return Ball.coerce(other, self.prec) - self

    def __mul__(self, other):
        o = Ball.coerce(other, self.prec)
        re = self.re * o.re - self.im * o.im
        im = self.re * o.im + self.im * o.re
        rad = 0
        if self.rad or o.rad:
            a = sqrt_upper(self.mid_abs2(), self.prec + 8)
            b = sqrt_upper(o.mid_abs2(), o.prec + 8)
            rad = a * o.rad + b * self.rad + self.rad * o.rad
        return Ball(re, im, rad, max(self.prec, o.prec))._trim()

    __rmul__ = __mul__

    def inverse(self):
        m2 = self.mid_abs2()
        low = sqrt_lower(m2, self.prec + 8)
        if low <= self.rad:
            raise ZeroDivisionError("ball may contain zero")
        rad = self.rad / (low * (low - self.rad)) if self.rad else 0
        return Ball(self.re / m2, -self.im / m2, rad, self.prec)._trim()

    def __truediv__(self, other):
        return self * Ball.coerce(other, self.prec).inverse()

    def __rtruediv__(self, other):
        return Ball.coerce(other, self.prec) * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = Ball(1, 0, 0, self.prec)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result


def horner(coeffs, z):
    """Evaluate a polynomial (highest coefficient first) at a Ball."""
    acc = Ball(0, 0, 0, z.prec)
    for c in coeffs:
        acc = acc * z + c
    return acc
