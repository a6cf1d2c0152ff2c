"""Minimal-order constant-coefficient recurrences fitted to exact prefixes."""
import json
from dataclasses import dataclass
from fractions import Fraction

from . import _kernels
from .exact import solve_fraction_free


class NotFound(LookupError):
    pass


class InsufficientPrefix(ValueError):
    pass


@dataclass(frozen=True)
class LinearRecurrence:
    """b_n = sum(coefficients[i] * b_{n-1-i}) with b_0..b_{k-1} = initial_terms."""

    coefficients: tuple
    initial_terms: tuple

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(self.coefficients))
        object.__setattr__(self, "initial_terms", tuple(int(v) for v in self.initial_terms))
        if not self.coefficients:
            raise ValueError("empty recurrence")
        if len(self.initial_terms) != len(self.coefficients):
            raise ValueError("need exactly one initial term per coefficient")
        if self.coefficients[-1] == 0:
            raise ValueError("last coefficient must be nonzero")

    @property
    def order_k(self):
        return len(self.coefficients)

    @property
    def is_integral(self):
        return all(Fraction(c).denominator == 1 for c in self.coefficients)

    def char_poly(self):
        """Monic characteristic polynomial t^k - sum A_i t^(k-i), highest first."""
        return [1] + [-c for c in self.coefficients]

    def to_pair(self):
        """The [[d_1..d_k], [A_1..A_k]] pair-of-lists form."""
        coeffs = [int(c) if Fraction(c).denominator == 1 else str(c) for c in self.coefficients]
        return [list(self.initial_terms), coeffs]

    def to_json(self):
        return json.dumps(self.to_pair())

    @classmethod
    def from_pair(cls, pair):
        init, coeffs = pair
        coeffs = [Fraction(c) if isinstance(c, str) else c for c in coeffs]
        return cls(tuple(coeffs), tuple(init))

    @classmethod
    def from_json(cls, text):
        return cls.from_pair(json.loads(text))


def eval_recurrence(rec, count):
    if count < rec.order_k:
        raise ValueError(f"count must be at least the order {rec.order_k}")
    if not rec.is_integral:
        return _eval_rational(rec, count)
    stream = _kernels.recurrence_stream(
        _kernels.lift(rec.coefficients), _kernels.lift(rec.initial_terms)
    )
    out = []
    for b in stream:
        out.append(int(b))
        if len(out) == count:
            return out


def _eval_rational(rec, count):
    out = [Fraction(v) for v in rec.initial_terms]
    k = rec.order_k
    while len(out) < count:
        out.append(sum(rec.coefficients[i] * out[-1 - i] for i in range(k)))
    return out


def solve_order(terms, k, allow_rational=False):
    """Coefficients of the unique order-k recurrence fixed by terms[0..2k-1].

    Returns None when the k x k system is singular or (unless
    ``allow_rational``) the solution is not integral.
    """
    a = [[terms[n - i] for i in range(1, k + 1)] for n in range(k, 2 * k)]
    rhs = [terms[n] for n in range(k, 2 * k)]
    sol = solve_fraction_free(a, rhs)
    if sol is None:
        return None
    if all(c.denominator == 1 for c in sol):
        return tuple(int(c) for c in sol)
    return tuple(sol) if allow_rational else None


def fits(terms, coeffs):
    k = len(coeffs)
    for n in range(k, len(terms)):
        if sum(c * terms[n - 1 - i] for i, c in enumerate(coeffs)) != terms[n]:
            return False
    return True


def guess_recurrence(prefix, max_order, allow_rational=False):
    """Smallest-order recurrence holding on the whole prefix from index k on.

    ``prefix`` is a SequencePrefix or any sequence of integers.
    """
    terms = list(getattr(prefix, "terms", prefix))
    if len(terms) < 2 * max_order:
        raise InsufficientPrefix(
            f"{len(terms)} terms cannot determine a recurrence of order up to {max_order}"
        )
    for k in range(1, max_order + 1):
        coeffs = solve_order(terms, k, allow_rational)
        if coeffs is None or coeffs[-1] == 0:
            continue
        if fits(terms, coeffs):
            return LinearRecurrence(coeffs, tuple(terms[:k]))
    raise NotFound(f"no recurrence of order <= {max_order} fits {len(terms)} terms")
