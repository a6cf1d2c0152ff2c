"""Exact generation of Pisot sequences E_r(x, y) and their order-s analogues."""
import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import islice

from . import _kernels
from .exact import bareiss_det


class PivotVanished(ArithmeticError):
    """The s x s Hankel minor is zero, so the next order-s term is undefined."""

    def __init__(self, n, prefix=None):
        super().__init__(f"Hankel pivot F_s vanished while computing term {n}")
        self.n = n
        self.prefix = prefix


def parse_rational(text):
    """Parse "p/q", an integer, or a decimal into an exact Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    return Fraction(str(text).strip())


@dataclass(frozen=True)
class PisotParams:
    x: int
    y: int
    r: Fraction = Fraction(1, 2)
    order_s: int = 1
    extra_initial_terms: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "r", parse_rational(self.r))
        object.__setattr__(self, "extra_initial_terms", tuple(int(v) for v in self.extra_initial_terms))
        if not (0 < self.x < self.y):
            raise ValueError(f"need 0 < x < y, got x={self.x}, y={self.y}")
        if not (0 <= self.r <= 1):
            raise ValueError(f"need 0 <= r <= 1, got r={self.r}")
        if self.order_s < 1:
            raise ValueError("order_s must be positive")
        if len(self.extra_initial_terms) != 2 * self.order_s - 2:
            raise ValueError(
                f"order {self.order_s} needs {2 * self.order_s - 2} extra initial terms, "
                f"got {len(self.extra_initial_terms)}"
            )
        if any(v <= 0 for v in self.extra_initial_terms):
            raise ValueError("initial terms must be positive")

    @property
    def initial_terms(self):
        return (self.x, self.y) + self.extra_initial_terms

    def to_dict(self):
        d = {"x": self.x, "y": self.y, "r": f"{self.r.numerator}/{self.r.denominator}"}
        if self.order_s != 1:
            d["s"] = self.order_s
            d["initial_terms"] = list(self.initial_terms)
        return d

    @classmethod
    def from_dict(cls, d):
        s = d.get("s", 1)
        extra = tuple(d["initial_terms"][2:]) if s > 1 else ()
        return cls(d["x"], d["y"], parse_rational(d["r"]), s, extra)


@dataclass(frozen=True)
class SequencePrefix:
    params: PisotParams
    terms: tuple
    truncated_reason: str = None  # "requested length" | "pivot vanished"

    def __len__(self):
        return len(self.terms)

    def __getitem__(self, i):
        return self.terms[i]

    def to_bfile(self):
        return "".join(f"{n} {a}\n" for n, a in enumerate(self.terms))

    def to_json(self):
        return json.dumps({
            "params": self.params.to_dict(),
            "terms": [str(a) for a in self.terms],
            "truncated_reason": self.truncated_reason,
        })


def read_bfile(text):
    """Parse OEIS b-file text ("n a_n" per line, '#' comments allowed)."""
    terms = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        n, a = line.split()[:2]
        if int(n) != len(terms):
            raise ValueError(f"b-file index {n} out of sequence (expected {len(terms)})")
        terms.append(int(a))
    return terms


def next_term(a_prev2, a_prev1, r):
    """floor(a_prev1**2 / a_prev2 + r), exactly."""
    r = parse_rational(r)
    p, q = r.numerator, r.denominator
    return (q * a_prev1 * a_prev1 + p * a_prev2) // (q * a_prev2)


def hankel_parts(window, s):
    """Return (F_s, G_s) for a window of 2s consecutive terms.

    With the (s+1)x(s+1) Hankel matrix H[i][j] = a[i+j] whose bottom-right
    entry is the unknown a_{n+2s}, det H = a_{n+2s} * F_s - G_s.
    """
    if len(window) != 2 * s:
        raise ValueError(f"window must hold {2 * s} terms, got {len(window)}")
    if s == 1:
        return window[0], window[1] * window[1]
    f = bareiss_det([[window[i + j] for j in range(s)] for i in range(s)])
    h = [[window[i + j] if i + j < 2 * s else 0 for j in range(s + 1)] for i in range(s + 1)]
    g = -bareiss_det(h)
    return f, g


def hankel_step(window, s, r):
    r = parse_rational(r)
    f, g = hankel_parts(window, s)
    if f == 0:
        raise PivotVanished(None)
    p, q = r.numerator, r.denominator
    return (q * g + p * f) // (q * f)


def generate(params, count):
    """First ``count`` terms of the (order-s) Pisot sequence.

    Raises PivotVanished (carrying the truncated prefix) when an order-s
    Hankel pivot is zero.
    """
    s = params.order_s
    if count < 2 * s:
        raise ValueError(f"count must be at least {2 * s}")
    if s == 1:
        p, q = params.r.numerator, params.r.denominator
        big = _kernels.number_type()
        stream = _kernels.pisot_stream(big(params.x), big(params.y), p, q)
        terms = tuple(int(a) for a in islice(stream, count))
        return SequencePrefix(params, terms, "requested length")
    terms = list(params.initial_terms)
    while len(terms) < count:
        try:
            terms.append(hankel_step(terms[-2 * s:], s, params.r))
        except PivotVanished:
            prefix = SequencePrefix(params, tuple(terms), "pivot vanished")
            raise PivotVanished(len(terms), prefix) from None
    return SequencePrefix(params, tuple(terms), "requested length")
