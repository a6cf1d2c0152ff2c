"""Certified root enclosures for integer characteristic polynomials.

Approximate roots come from mpmath's simultaneous iteration at the working
precision. They are rounded to dyadic rationals and certified a posteriori
with the Braess-Hadeler inclusion: for a monic degree-n polynomial p and
distinct approximations z_i with Weierstrass corrections

    W_i = p(z_i) / prod_{j != i} (z_i - z_j),

every connected component of the disks |z - z_i| <= n |W_i| made of m disks
holds exactly m roots. All of this is evaluated in exact rational
arithmetic, so pairwise disjoint disks each hold exactly one root.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import mpmath

from .balls import Ball, round_dyadic, round_up, sqrt_lower, sqrt_upper
from .exact import dyadic_to_decimal, poly_derivative, poly_gcd

DEFAULT_PRECISION = 128
PRECISION_CAP = 16384


class RepeatedRoots(ArithmeticError):
    def __init__(self, gcd):
        super().__init__(f"polynomial is not square-free (gcd with derivative {gcd})")
        self.gcd = gcd


class PrecisionExhausted(ArithmeticError):
    pass


@dataclass(frozen=True)
class CharPoly:
    """Monic integer polynomial, coefficients highest degree first."""

    coeffs: tuple

    def __post_init__(self):
        coeffs = []
        for c in self.coeffs:
            if int(c) != c:
                raise ValueError(f"non-integer coefficient {c}")
            coeffs.append(int(c))
        object.__setattr__(self, "coeffs", tuple(coeffs))
        if len(self.coeffs) < 2:
            raise ValueError("degree must be at least 1")
        if self.coeffs[0] != 1:
            raise ValueError("polynomial must be monic")

    @classmethod
    def from_recurrence(cls, coefficients):
        return cls((1,) + tuple(-int(c) for c in coefficients))

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def derivative_gcd(self):
        return poly_gcd(self.coeffs, poly_derivative(list(self.coeffs)))

    @property
    def squarefree(self):
        return len(self.derivative_gcd()) == 1

    def reciprocal_gcd(self):
        """gcd(p, t^k p(1/t)); nonconstant whenever p has a root on the unit circle."""
        return poly_gcd(self.coeffs, self.coeffs[::-1])

    def __str__(self):
        k = self.degree
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            d = k - i
            mono = "" if d == 0 else ("t" if d == 1 else f"t^{d}")
            if mono and abs(c) == 1:
                coef = "-" if c < 0 else "+"
                parts.append(f"{coef}{mono}")
            else:
                parts.append(f"{c:+d}{'*' + mono if mono else ''}")
        s = "".join(parts)
        return s[1:] if s.startswith("+") else s


@dataclass(frozen=True)
class RootEnclosure:
    center_re: Fraction
    center_im: Fraction
    radius: Fraction
    modulus_lo: Fraction
    modulus_hi: Fraction
    conjugate_pair_id: int = None
    prec: int = DEFAULT_PRECISION

    @property
    def is_real(self):
        # a disk on the real axis holding exactly one root of a real polynomial
        # holds a real root, since the conjugate root lies in the same disk
        return self.center_im == 0

    def ball(self, prec=None):
        return Ball(self.center_re, self.center_im, self.radius, prec or self.prec)

    def contains(self, z):
        return self.ball().contains(z)

    def to_dict(self):
        d = {
            "center_re": dyadic_to_decimal(self.center_re),
            "center_im": dyadic_to_decimal(self.center_im),
            "radius": dyadic_to_decimal(self.radius),
            "modulus_lo": dyadic_to_decimal(self.modulus_lo),
            "modulus_hi": dyadic_to_decimal(self.modulus_hi),
        }
        if self.conjugate_pair_id is not None:
            d["conjugate_pair_id"] = self.conjugate_pair_id
        return d

    @classmethod
    def from_dict(cls, d, prec=DEFAULT_PRECISION):
        return cls(
            Fraction(d["center_re"]),
            Fraction(d["center_im"]),
            Fraction(d["radius"]),
            Fraction(d["modulus_lo"]),
            Fraction(d["modulus_hi"]),
            d.get("conjugate_pair_id"),
            prec,
        )


def _approximate(coeffs, bits):
    """mpmath root approximations as exact dyadic (re, im) pairs."""
    with mpmath.workprec(bits + 32):
        steps = 100 + bits // 16
        try:
            roots = mpmath.polyroots(coeffs, maxsteps=steps, extraprec=bits // 2 + 32)
        except mpmath.libmp.NoConvergence:
            try:
                roots = mpmath.polyroots(coeffs, maxsteps=8 * steps, extraprec=bits + 64)
            except mpmath.libmp.NoConvergence:
                raise PrecisionExhausted(f"root iteration did not converge at {bits} bits")
        out = []
        for z in roots:
            z = mpmath.mpc(z)
            out.append((Fraction(*_man_exp(z.real)), Fraction(*_man_exp(z.imag)), abs(z)))
        return out


def _man_exp(x):
    sign, man, exp, _ = x._mpf_
    if not man:
        return 0, 1
    man, exp = (-int(man) if sign else int(man)), int(exp)
    return (man << exp, 1) if exp >= 0 else (man, 1 << -exp)


def _symmetrize(approx, bits):
    """Snap near-real roots to the axis and pair the rest as exact conjugates.

    Returns list of (re, im, pair_id). If the pairing is inconsistent the
    approximations are returned unchanged without pair ids.
    """
    tol = Fraction(1, 1 << max(bits // 2, 16))
    reals, upper, lower = [], [], []
    for re, im, mag in approx:
        scale = max(Fraction(1), Fraction(float(mag)))
        if abs(im) <= tol * scale:
            reals.append((re, Fraction(0)))
        elif im > 0:
            upper.append((re, im))
        else:
            lower.append((re, im))
    if len(upper) != len(lower):
        return [(re, im, None) for re, im, _ in approx]
    out = [(re, im, None) for re, im in reals]
    remaining = list(lower)
    for pid, (re, im) in enumerate(sorted(upper)):
        j = min(range(len(remaining)), key=lambda t: abs(remaining[t][0] - re) + abs(remaining[t][1] + im))
        re2, im2 = remaining.pop(j)
        mre, mim = (re + re2) / 2, (im - im2) / 2
        out.append((mre, mim, pid))
        out.append((mre, -mim, pid))
    return out


def _cmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _poly_at(coeffs, z):
    acc = (Fraction(0), Fraction(0))
    for c in coeffs:
        acc = _cmul(acc, z)
        acc = (acc[0] + c, acc[1])
    return acc


def _certify_once(poly, bits):
    coeffs = poly.coeffs
    k = poly.degree
    if k == 1:
        root = Fraction(-coeffs[1])
        return [RootEnclosure(root, Fraction(0), Fraction(0), abs(root), abs(root), None, bits)]
    pts = []
    for re, im, pid in _symmetrize(_approximate(coeffs, bits), bits):
        re, _ = round_dyadic(re, bits)
        im, _ = round_dyadic(im, bits)
        pts.append((re, im, pid))
    # conjugate pairs must stay exact mirrors after rounding
    by_pair = {}
    for i, (re, im, pid) in enumerate(pts):
        if pid is not None:
            by_pair.setdefault(pid, []).append(i)
    for pid, (i, j) in by_pair.items():
        re, im = pts[i][0], abs(pts[i][1])
        pts[i] = (re, im, pid)
        pts[j] = (re, -im, pid)

    radii = []
    for i, (re, im, _) in enumerate(pts):
        pz = _poly_at(coeffs, (re, im))
        num = pz[0] * pz[0] + pz[1] * pz[1]
        den = Fraction(1)
        for j, (re2, im2, _) in enumerate(pts):
            if j != i:
                dre, dim = re - re2, im - im2
                den *= dre * dre + dim * dim
        if den == 0:
            raise PrecisionExhausted("coincident root approximations")
        radii.append(round_up(k * sqrt_upper(num / den, bits + 8)))
    for i, j in combinations(range(k), 2):
        dre, dim = pts[i][0] - pts[j][0], pts[i][1] - pts[j][1]
        gap = radii[i] + radii[j]
        if gap * gap >= dre * dre + dim * dim:
            raise PrecisionExhausted(f"root disks {i} and {j} overlap at {bits} bits")
    out = []
    for (re, im, pid), rad in zip(pts, radii):
        m2 = re * re + im * im
        lo = max(Fraction(0), sqrt_lower(m2, bits + 8) - rad)
        hi = sqrt_upper(m2, bits + 8) + rad
        out.append(RootEnclosure(re, im, rad, lo, hi, pid, bits))
    return out


def _sort_key(e):
    return (-e.modulus_hi, -e.center_re, -e.center_im)


def certify_roots(poly, precision_bits=DEFAULT_PRECISION, precision_cap=PRECISION_CAP):
    """Disjoint certified disks, one per root, sorted by decreasing modulus upper bound.

    Precision doubles from ``precision_bits`` until the disks separate;
    PrecisionExhausted is raised past ``precision_cap``.
    """
    if not isinstance(poly, CharPoly):
        poly = CharPoly(poly)
    g = poly.derivative_gcd()
    if len(g) > 1:
        raise RepeatedRoots(g)
    bits = precision_bits
    last = None
    while bits <= max(precision_cap, precision_bits):
        try:
            return sorted(_certify_once(poly, bits), key=_sort_key)
        except PrecisionExhausted as exc:
            last = exc
        bits *= 2
    raise PrecisionExhausted(f"could not separate roots up to {precision_cap} bits: {last}")


SPECTRUM_KINDS = (
    "DominantContracting",
    "SecondRootOutside",
    "UnitCircleSpecial",
    "Ambiguous",
    "Degenerate",
)


@dataclass(frozen=True)
class SpectrumClass:
    kind: str
    enclosures: tuple
    s: int = 1
    straddling: tuple = ()
    reason: str = ""

    @property
    def dominant(self):
        return self.enclosures[0] if self.enclosures else None

    @property
    def second_modulus(self):
        """Bounds on the (s+1)-st largest root modulus, or None if k <= s."""
        if len(self.enclosures) <= self.s:
            return None
        los = sorted((e.modulus_lo for e in self.enclosures), reverse=True)
        his = sorted((e.modulus_hi for e in self.enclosures), reverse=True)
        return los[self.s], his[self.s]

    def to_dict(self):
        d = {"kind": self.kind, "s": self.s, "enclosures": [e.to_dict() for e in self.enclosures]}
        if self.straddling:
            d["straddling"] = list(self.straddling)
        if self.reason:
            d["reason"] = self.reason
        return d

    @classmethod
    def from_dict(cls, d):
        encs = tuple(RootEnclosure.from_dict(e) for e in d["enclosures"])
        return cls(d["kind"], encs, d.get("s", 1), tuple(d.get("straddling", ())), d.get("reason", ""))


def classify_spectrum(enclosures, s=1):
    """Place the roots against the unit circle.

    DominantContracting: at most s roots can have modulus >= 1 (for s = 1 the
    dominant disk must also be real, positive and strictly outside).
    SecondRootOutside: at least s + 1 roots certainly lie outside.
    """
    encs = tuple(sorted(enclosures, key=_sort_key))
    one = Fraction(1)
    outside = [i for i, e in enumerate(encs) if e.modulus_lo > one]
    maybe_out = [i for i, e in enumerate(encs) if e.modulus_hi >= one]
    straddle = tuple(i for i, e in enumerate(encs) if e.modulus_lo <= one <= e.modulus_hi)
    if len(outside) >= s + 1:
        return SpectrumClass("SecondRootOutside", encs, s)
    if len(maybe_out) <= s:
        if s == 1:
            dom = encs[0]
            if dom.modulus_lo > one and dom.is_real and dom.center_re > dom.radius:
                return SpectrumClass("DominantContracting", encs, s)
            if straddle:
                return SpectrumClass("Ambiguous", encs, s, straddle)
            if dom.modulus_hi < one:
                return SpectrumClass("Degenerate", encs, s, reason="no root outside the unit circle")
            return SpectrumClass("Degenerate", encs, s, reason="dominant root is not real and positive")
        return SpectrumClass("DominantContracting", encs, s)
    return SpectrumClass("Ambiguous", encs, s, straddle)


def certified_spectrum(poly, s=1, precision_bits=DEFAULT_PRECISION, precision_cap=PRECISION_CAP):
    """Certify and classify, doubling precision while the result is Ambiguous.

    Returns (SpectrumClass, bits_used). (t-1)^2 is reported as UnitCircleSpecial;
    other repeated roots raise RepeatedRoots.
    """
    if not isinstance(poly, CharPoly):
        poly = CharPoly(poly)
    if poly.coeffs == (1, -2, 1):
        one = RootEnclosure(Fraction(1), Fraction(0), Fraction(0), Fraction(1), Fraction(1), None, precision_bits)
        return SpectrumClass("UnitCircleSpecial", (one, one), s, reason="(t-1)^2"), precision_bits
    bits = precision_bits
    spectrum = None
    while bits <= precision_cap:
        try:
            encs = certify_roots(poly, bits, bits)
        except PrecisionExhausted:
            bits *= 2
            continue
        spectrum = classify_spectrum(encs, s)
        if spectrum.kind != "Ambiguous":
            return spectrum, bits
        bits *= 2
    if spectrum is None:
        raise PrecisionExhausted(f"could not separate roots up to {precision_cap} bits")
    return spectrum, bits // 2
