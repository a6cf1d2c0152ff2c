"""Prove or refute that a guessed recurrence generates a Pisot sequence.

Write b_n = sum_i C_i r_i^n (Binet form). For an order-s Pisot sequence the
next term is floor(G_s/F_s + r), where the Hankel determinant of a window is
Delta_s = b_{n+2s} F_s - G_s. The recurrence sequence obeys the Pisot rule at
index m = n + 2s exactly when -r <= -Delta_s/F_s < 1 - r. By Cauchy-Binet

    F_s(n)     = sum_{|S| = s}     prod_{i in S} C_i r_i^n * V(S)^2
    Delta_s(n) = sum_{|S| = s + 1} prod_{i in S} C_i r_i^n * V(S)^2

with V(S) the Vandermonde product of the roots in S. For s = 1 this is
b_{n}, and Delta_1 = -c_{n+2} with c_m = b_{m-1}^2 - b_m b_{m-2}. When the
(s+1)-st root lies inside the unit circle the ratio decays like K rho^m,
which yields an explicit N0; the finitely many indices below N0 are checked
exactly. Otherwise the ratio eventually leaves the bracket and the first
failure is located by an exact scan.
"""
import json
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations, islice
from typing import NamedTuple

import mpmath

from . import _kernels
from .balls import Ball, horner, round_up
from .exact import dyadic_to_decimal, poly_derivative
from .guess import LinearRecurrence, NotFound, eval_recurrence, guess_recurrence
from .roots import (
    DEFAULT_PRECISION,
    PRECISION_CAP,
    CharPoly,
    PrecisionExhausted,
    RepeatedRoots,
    SpectrumClass,
    certified_spectrum,
    certify_roots,
    classify_spectrum,
)
from .sequence import PisotParams, PivotVanished, generate, hankel_step

DEFAULT_CHECK_LIMIT = 50000
_BOUND_BITS = 64


class SingularSystem(ArithmeticError):
    pass


class DominantCoefficientAmbiguous(ArithmeticError):
    pass


class BoundNotContracting(ArithmeticError):
    pass


@dataclass(frozen=True)
class BinetData:
    recurrence: LinearRecurrence
    roots: tuple  # RootEnclosure, sorted by decreasing modulus
    coefficients: tuple  # Ball
    prec: int

    @property
    def root_balls(self):
        return tuple(e.ball(self.prec) for e in self.roots)

    @property
    def dominant_coefficient(self):
        return self.coefficients[0]

    def term_ball(self, n):
        acc = Ball(0, 0, 0, self.prec)
        for c, z in zip(self.coefficients, self.root_balls):
            acc = acc + c * z**n
        return acc

    def discrepancy_ball(self, n):
        """Ball for c_n = -sum_{i<j} C_i C_j (r_i r_j)^(n-2) (r_i - r_j)^2."""
        zs = self.root_balls
        cs = self.coefficients
        acc = Ball(0, 0, 0, self.prec)
        for i, j in combinations(range(len(zs)), 2):
            d = zs[i] - zs[j]
            acc = acc + cs[i] * cs[j] * (zs[i] * zs[j]) ** (n - 2) * d * d
        return -acc


def binet_coefficients(rec, roots, prec=None):
    """Coefficient balls C_i with b_n = sum C_i r_i^n.

    Solves the Vandermonde system through its partial-fraction form
    C_i = N(r_i) / P'(r_i), where P is the characteristic polynomial and N
    the numerator of the generating function written in t = 1/x.
    """
    k = rec.order_k
    if len(roots) != k:
        raise ValueError(f"need {k} roots, got {len(roots)}")
    prec = prec or max(e.prec for e in roots)
    b, a = rec.initial_terms, rec.coefficients
    numer = [b[m] - sum(a[j - 1] * b[m - j] for j in range(1, m + 1)) for m in range(k)]
    dpoly = poly_derivative(rec.char_poly())
    coeffs = []
    for e in roots:
        z = e.ball(prec)
        den = horner(dpoly, z)
        if not den.excludes_zero():
            raise SingularSystem("P'(r_i) not separated from zero")
        coeffs.append(horner(numer, z) / den)
    return BinetData(rec, tuple(roots), tuple(coeffs), prec)


def discrepancy(rec, n):
    if n < 2:
        raise ValueError("discrepancy needs n >= 2")
    b = eval_recurrence(rec, max(n + 1, rec.order_k))
    return b[n - 1] ** 2 - b[n] * b[n - 2]


def _least_index(pred, start, guess=None):
    """Least n >= start with pred(n) true, for pred monotone False -> True."""
    n = start if guess is None else max(start, guess)
    if pred(n):
        step = 1
        hi = n
        while hi > start:
            lo = max(start, hi - step)
            if pred(lo):
                hi = lo
                step *= 2
            else:
                break
        else:
            return start
        # pred(lo) False, pred(hi) True
    else:
        step = 1
        lo = n
        hi = n + 1
        while not pred(hi):
            lo = hi
            step *= 2
            hi = lo + step
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return hi


def _log(q):
    q = Fraction(q)
    return math.log(q.numerator) - math.log(q.denominator)


def least_exponent(coeff, base, bound, start=0, strict=True):
    """Least n >= start with coeff * base**n < bound (<= when not strict).

    ``base`` in [0, 1), ``bound`` > 0; compared in exact rational arithmetic.
    Logarithms only seed the search.
    """
    coeff, base, bound = Fraction(coeff), Fraction(base), Fraction(bound)

    def ok(n):
        v = coeff * base**n
        return v < bound if strict else v <= bound

    if coeff <= 0 or ok(start):
        return start
    if base == 0:
        return max(start, 1)
    guess = math.ceil((_log(bound) - _log(coeff)) / _log(base))
    return _least_index(ok, start, guess)


def _least_growth(coeff, base, bound, start=0):
    """Least n >= start with coeff * base**n >= bound, for base > 1."""
    coeff, base, bound = Fraction(coeff), Fraction(base), Fraction(bound)
    if coeff <= 0:
        return None

    def ok(n):
        return coeff * base**n >= bound

    guess = math.ceil((_log(bound) - _log(coeff)) / _log(base))
    return _least_index(ok, start, guess)


class RatioBound(NamedTuple):
    """|Delta_s / F_s| at target index m is at most K * rho**m for m >= n_min."""

    K: Fraction
    rho: Fraction
    n_min: int


def _vandermonde_sq(zs, subset, prec):
    v = Ball(1, 0, 0, prec)
    for i, j in combinations(subset, 2):
        d = zs[j] - zs[i]
        v = v * d * d
    return v


def _subset_weight(binet, subset):
    zs = binet.root_balls
    w = _vandermonde_sq(zs, subset, binet.prec)
    for i in subset:
        w = w * binet.coefficients[i]
    return w


def ratio_bound(binet, s=1):
    """Explicit K, rho, n_min bounding the Pisot-rule defect of the recurrence.

    Upper bound on |Delta_s(n)|: sum over (s+1)-subsets of |weight| times the
    product of the s+1 largest modulus upper bounds to the n. Lower bound on
    |F_s(n)|: the top-s term minus all other s-subsets, valid once the tail
    is at most half the main term (n >= n_min). All in exact rationals.
    """
    k = len(binet.roots)
    if k < s:
        raise SingularSystem(f"order {k} < s = {s}: the s x s Hankel minors vanish")
    hi = [e.modulus_hi for e in binet.roots]
    lo = [e.modulus_lo for e in binet.roots]
    top = tuple(range(s))
    lead = _subset_weight(binet, top)
    lead_lo = lead.abs_lower()
    if lead_lo == 0:
        raise DominantCoefficientAmbiguous("leading Binet weight is not separated from zero")
    q_top = math.prod(lo[:s])
    if k == s:
        return RatioBound(Fraction(0), Fraction(0), 2 * s)
    q_next = math.prod(hi[: s - 1]) * hi[s]
    if q_next >= q_top:
        raise BoundNotContracting("top-s roots are not separated from the rest")
    tail = sum(
        (_subset_weight(binet, S).abs_upper() for S in combinations(range(k), s) if S != top),
        Fraction(0),
    )
    w_min = least_exponent(tail, round_up(q_next / q_top, _BOUND_BITS), lead_lo / 2, 0, strict=False)
    s_delta = sum(
        (_subset_weight(binet, S).abs_upper() for S in combinations(range(k), s + 1)),
        Fraction(0),
    )
    rho = round_up(math.prod(hi[: s + 1]) / q_top, _BOUND_BITS)
    if s_delta == 0:
        return RatioBound(Fraction(0), rho, w_min + 2 * s)
    K = round_up(2 * s_delta / lead_lo / rho ** (2 * s), _BOUND_BITS)
    return RatioBound(K, rho, w_min + 2 * s)


def compute_N0(K, rho, r, n_min):
    """Smallest N >= n_min with K * rho**n < min(r, 1 - r) for every n >= N."""
    r = Fraction(r)
    if not (0 < r < 1):
        raise ValueError("r must lie strictly between 0 and 1")
    if not (0 <= rho < 1):
        raise ValueError("rho must lie in [0, 1)")
    return least_exponent(K, rho, min(r, 1 - r), n_min, strict=True)


@dataclass(frozen=True)
class DecisionReport:
    params: PisotParams
    recurrence: LinearRecurrence = None
    verdict: str = "Inconclusive"  # Proved | Disproved | Inconclusive | Unsupported
    reason: str = ""
    n0: int = None
    bound_K: Fraction = None
    bound_rho: Fraction = None
    n_min: int = None
    first_failure_index: int = None
    predicted_breakdown_index: int = None
    envelope_breakdown_indices: tuple = None
    breakdown_amplitude: tuple = None
    checked_up_to: int = 0
    spectrum: SpectrumClass = None
    precision_bits_used: int = None
    special_case: str = None
    contradiction_suspect: bool = False
    terms: tuple = None

    # The usual "breaks down at n" position counts terms from 1.
    @property
    def first_failure(self):
        return None if self.first_failure_index is None else self.first_failure_index + 1

    @property
    def predicted_breakdown(self):
        return None if self.predicted_breakdown_index is None else self.predicted_breakdown_index + 1

    @property
    def second_root_modulus_bounds(self):
        return None if self.spectrum is None else self.spectrum.second_modulus

    def to_dict(self):
        srm = self.second_root_modulus_bounds
        d = {
            "params": self.params.to_dict(),
            "recurrence": None if self.recurrence is None else self.recurrence.to_pair(),
            "order": None if self.recurrence is None else self.recurrence.order_k,
            "verdict": self.verdict,
            "reason": self.reason,
            "n0": self.n0,
            "predicted_breakdown": self.predicted_breakdown,
            "predicted_breakdown_index": self.predicted_breakdown_index,
            "envelope_breakdown": None
            if self.envelope_breakdown_indices is None
            else [None if v is None else v + 1 for v in self.envelope_breakdown_indices],
            "breakdown_amplitude": None
            if self.breakdown_amplitude is None
            else [_qstr(v) for v in self.breakdown_amplitude],
            "first_failure": self.first_failure,
            "first_failure_index": self.first_failure_index,
            "k": _qstr(self.bound_K),
            "rho": _qstr(self.bound_rho),
            "n_min": self.n_min,
            "second_root_modulus_bounds": None if srm is None else [_qstr(v) for v in srm],
            "checked_up_to": self.checked_up_to,
            "precision_bits_used": self.precision_bits_used,
            "special_case": self.special_case,
            "contradiction_suspect": self.contradiction_suspect,
            "spectrum": None if self.spectrum is None else self.spectrum.to_dict(),
        }
        if self.terms is not None:
            d["terms"] = [str(t) for t in self.terms]
        return d

    def to_json(self, indent=2):
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, d):
        env = d.get("envelope_breakdown")
        amp = d.get("breakdown_amplitude")
        return cls(
            params=PisotParams.from_dict(d["params"]),
            recurrence=None if d["recurrence"] is None else LinearRecurrence.from_pair(d["recurrence"]),
            verdict=d["verdict"],
            reason=d.get("reason", ""),
            n0=d.get("n0"),
            bound_K=_qparse(d.get("k")),
            bound_rho=_qparse(d.get("rho")),
            n_min=d.get("n_min"),
            first_failure_index=d.get("first_failure_index"),
            predicted_breakdown_index=d.get("predicted_breakdown_index"),
            envelope_breakdown_indices=None if env is None else tuple(None if v is None else v - 1 for v in env),
            breakdown_amplitude=None if amp is None else tuple(Fraction(v) for v in amp),
            checked_up_to=d.get("checked_up_to", 0),
            spectrum=None if d.get("spectrum") is None else SpectrumClass.from_dict(d["spectrum"]),
            precision_bits_used=d.get("precision_bits_used"),
            special_case=d.get("special_case"),
            contradiction_suspect=d.get("contradiction_suspect", False),
            terms=None if d.get("terms") is None else tuple(int(t) for t in d["terms"]),
        )

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def _qstr(q):
    if q is None:
        return None
    q = Fraction(q)
    den = q.denominator
    if den & (den - 1) == 0:
        return dyadic_to_decimal(q)
    return f"{q.numerator}/{den}"


def _qparse(v):
    return None if v is None else Fraction(v)


def _exact_scan(params, rec, limit):
    """First index m < limit at which b violates the Pisot rule, else None."""
    s = params.order_s
    r = params.r
    if s == 1:
        stream = _kernels.recurrence_stream(_kernels.lift(rec.coefficients), _kernels.lift(rec.initial_terms))
        idx, _ = _kernels.first_bracket_failure(islice(stream, limit), r.numerator, r.denominator, 2)
        return idx
    b = eval_recurrence(rec, max(limit, rec.order_k))
    for m in range(2 * s, limit):
        try:
            if hankel_step(b[m - 2 * s : m], s, r) != b[m]:
                return m
        except PivotVanished:
            return m
    return None


def confirm_failure(params, rec, index):
    """Regenerate both sequences from scratch; True when they first differ at ``index``."""
    if params.order_s == 1:
        r = params.r
        big = _kernels.number_type()
        a = _kernels.pisot_stream(big(params.x), big(params.y), r.numerator, r.denominator)
        b = _kernels.recurrence_stream(_kernels.lift(rec.coefficients), _kernels.lift(rec.initial_terms))
        return _kernels.first_mismatch(a, b, index + 1) == index
    b = eval_recurrence(rec, max(index + 1, rec.order_k))
    try:
        a = generate(params, index + 1).terms
    except PivotVanished as exc:
        if exc.n != index:
            return False
        a = exc.prefix.terms
        return list(a) == b[: len(a)]
    return all(a[i] == b[i] for i in range(index)) and a[index] != b[index]


def _phase_prediction(binet, s, r, limit):
    """First index where the floating Binet evaluation of -Delta/F leaves [-r, 1-r).

    Advisory only; evaluated with mpmath at the ball precision.
    """
    k = len(binet.roots)
    with mpmath.workprec(binet.prec):
        zs = [mpmath.mpc(mpmath.mpf(e.center_re.numerator) / e.center_re.denominator,
                         mpmath.mpf(e.center_im.numerator) / e.center_im.denominator) for e in binet.roots]
        cs = [mpmath.mpc(mpmath.mpf(c.re.numerator) / c.re.denominator,
                         mpmath.mpf(c.im.numerator) / c.im.denominator) for c in binet.coefficients]

        def vsq(S):
            v = mpmath.mpc(1)
            for i, j in combinations(S, 2):
                v *= (zs[j] - zs[i]) ** 2
            return v

        lower = [(S, vsq(S)) for S in combinations(range(k), s)]
        upper = [(S, vsq(S)) for S in combinations(range(k), s + 1)]
        lo_b, hi_b = -mpmath.mpf(r.numerator) / r.denominator, 1 - mpmath.mpf(r.numerator) / r.denominator
        p = list(cs)
        for m in range(2 * s, limit):
            f = mpmath.fsum(math.prod((p[i] for i in S), start=mpmath.mpc(1)) * v for S, v in lower)
            d = mpmath.fsum(math.prod((p[i] for i in S), start=mpmath.mpc(1)) * v for S, v in upper)
            val = mpmath.re(-d / f)
            if not (lo_b <= val < hi_b):
                return m
            p = [pi * zi for pi, zi in zip(p, zs)]
    return None


def _breakdown_envelope(binet, s, r):
    """Envelope of the dominant diverging term of -Delta/F.

    Returns ((amp_lo, amp_hi), (early_index, late_index)): the diverging
    term at index m has modulus at most amp_hi * |r_{s+1}|^(m-2s), summed over
    the roots sharing the (s+1)-st modulus.
    """
    k = len(binet.roots)
    top = tuple(range(s))
    zs = binet.root_balls
    base = _subset_weight(binet, top)
    lo_s1, hi_s1 = binet.roots[s].modulus_lo, binet.roots[s].modulus_hi
    group = [j for j in range(s, k) if binet.roots[j].modulus_hi >= lo_s1]
    amp_lo = Fraction(0)
    amp_hi = Fraction(0)
    for j in group:
        w = _subset_weight(binet, top + (j,)) / base
        amp_lo += w.abs_lower()
        amp_hi += w.abs_upper()
    thr = min(r, 1 - r)
    early = late = None
    if hi_s1 > 1 and amp_hi > 0:
        early = _least_growth(amp_hi, round_up(hi_s1, _BOUND_BITS), thr, 0) + 2 * s
    if lo_s1 > 1 and amp_lo > 0:
        late = _least_growth(amp_lo, lo_s1, thr, 0) + 2 * s
    return (amp_lo, amp_hi), (early, late)


def decide(params, rec, check_limit=DEFAULT_CHECK_LIMIT, precision_bits=DEFAULT_PRECISION,
           precision_cap=PRECISION_CAP, predict=True):
    """Decide whether ``rec`` generates the Pisot sequence ``params`` for all n."""
    s = params.order_s
    r = params.r
    report = DecisionReport(params, rec)
    if not (0 < r < 1):
        return replace(report, verdict="Unsupported", reason=f"limiting case r = {r}")
    if not rec.is_integral:
        return replace(report, verdict="Unsupported", reason="non-integer recurrence coefficients")

    init = params.initial_terms
    head = eval_recurrence(rec, max(len(init), rec.order_k))
    for i, v in enumerate(init):
        if head[i] != v:
            return replace(report, verdict="Disproved", reason="initial terms differ",
                           first_failure_index=i, checked_up_to=i + 1)

    poly = CharPoly.from_recurrence(rec.coefficients)
    try:
        spectrum, bits = certified_spectrum(poly, s, precision_bits, precision_cap)
    except RepeatedRoots as exc:
        return replace(report, verdict="Unsupported", reason=f"repeated characteristic roots: {exc}")
    except PrecisionExhausted as exc:
        return replace(report, verdict="Inconclusive", reason=f"PrecisionExhausted: {exc}",
                       precision_bits_used=precision_cap)
    report = replace(report, spectrum=spectrum, precision_bits_used=bits)

    if spectrum.kind == "UnitCircleSpecial":
        return _decide_arithmetic(report, check_limit)
    if spectrum.kind == "Ambiguous":
        reason = "UnitModulusRoot" if len(poly.reciprocal_gcd()) > 1 else "PrecisionCapReached"
        return replace(report, verdict="Inconclusive", reason=reason)
    if spectrum.kind == "Degenerate":
        return replace(report, verdict="Unsupported", reason=spectrum.reason)
    if spectrum.kind == "DominantContracting":
        return _decide_contracting(report, poly, bits, check_limit, precision_cap)
    return _decide_outside(report, poly, bits, check_limit, precision_cap, predict)


def _disproved(report, index, **extra):
    if not confirm_failure(report.params, report.recurrence, index):
        raise RuntimeError(f"exact scan and regeneration disagree about index {index}")
    return replace(report, verdict="Disproved", first_failure_index=index, checked_up_to=index + 1, **extra)


def _decide_arithmetic(report, check_limit):
    params, rec = report.params, report.recurrence
    if params.order_s != 1:
        return replace(report, verdict="Unsupported", reason="(t-1)^2 with s > 1")
    # b_n = x + n d and c_n = d^2, so c_n / b_{n-2} is positive and decreasing
    d = params.y - params.x
    p, q = params.r.numerator, params.r.denominator
    j0 = max(0, (q * d * d - (q - p) * params.x) // ((q - p) * d) + 1)
    n0 = max(2, j0 + 2)
    report = replace(report, n0=n0, special_case="(t-1)^2")
    if n0 > check_limit:
        return replace(report, verdict="Inconclusive", reason="N0 exceeds check limit")
    bad = _exact_scan(params, rec, n0)
    if bad is not None:
        return _disproved(report, bad)
    return replace(report, verdict="Proved", checked_up_to=n0)


def _recertify(poly, s, bits):
    encs = certify_roots(poly, bits, bits)
    return classify_spectrum(encs, s)


def _decide_contracting(report, poly, bits, check_limit, precision_cap):
    params, rec = report.params, report.recurrence
    s = params.order_s
    spectrum = report.spectrum
    while True:
        try:
            binet = binet_coefficients(rec, spectrum.enclosures, bits)
            bound = ratio_bound(binet, s)
            if bound.rho >= 1:
                raise BoundNotContracting("rho >= 1")
            break
        except (SingularSystem, DominantCoefficientAmbiguous, BoundNotContracting) as exc:
            bits *= 2
            if bits > precision_cap:
                return replace(report, verdict="Inconclusive", reason=f"{type(exc).__name__}: {exc}")
            try:
                spectrum = _recertify(poly, s, bits)
            except PrecisionExhausted:
                continue
            if spectrum.kind != "DominantContracting":
                return replace(report, verdict="Inconclusive", spectrum=spectrum,
                               reason=f"classification changed to {spectrum.kind}")
    n0 = compute_N0(bound.K, bound.rho, params.r, bound.n_min)
    report = replace(report, spectrum=spectrum, precision_bits_used=bits, n0=n0,
                     bound_K=bound.K, bound_rho=bound.rho, n_min=bound.n_min)
    if n0 > check_limit:
        return replace(report, verdict="Inconclusive", reason="N0 exceeds check limit")
    bad = _exact_scan(params, rec, n0)
    if bad is not None:
        return _disproved(report, bad)
    return replace(report, verdict="Proved", checked_up_to=n0)


def _decide_outside(report, poly, bits, check_limit, precision_cap, predict):
    params, rec = report.params, report.recurrence
    s = params.order_s
    extra = {}
    if predict and len(report.spectrum.enclosures) > s:
        try:
            binet = binet_coefficients(rec, report.spectrum.enclosures, bits)
            amp, env = _breakdown_envelope(binet, s, params.r)
            extra["breakdown_amplitude"] = amp
            extra["envelope_breakdown_indices"] = env
            extra["predicted_breakdown_index"] = _phase_prediction(binet, s, params.r, 2 * check_limit + 2 * s)
        except (SingularSystem, ZeroDivisionError):
            pass
    report = replace(report, **extra)
    bad = _exact_scan(params, rec, check_limit)
    if bad is None:
        return replace(report, verdict="Inconclusive", reason="CheckLimitExceeded",
                       checked_up_to=check_limit, contradiction_suspect=True)
    return _disproved(report, bad)


def end_to_end(params, max_order=12, print_terms=0, check_limit=DEFAULT_CHECK_LIMIT, **kwargs):
    """Generate a prefix, guess a recurrence, then decide it."""
    count = max(print_terms, 4 * max_order + 8, 2 * params.order_s)
    try:
        prefix = generate(params, count)
    except PivotVanished as exc:
        prefix = exc.prefix
    terms = tuple(prefix.terms[:print_terms]) if print_terms else None
    try:
        rec = guess_recurrence(prefix, max_order)
    except NotFound:
        return DecisionReport(params, None, "Inconclusive", "NoRecurrenceFound", terms=terms)
    except ValueError as exc:
        return DecisionReport(params, None, "Inconclusive", f"NoRecurrenceFound: {exc}", terms=terms)
    return replace(decide(params, rec, check_limit, **kwargs), terms=terms)
