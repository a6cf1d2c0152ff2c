from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pisotrec import (
    InsufficientPrefix,
    LinearRecurrence,
    NotFound,
    PisotParams,
    eval_recurrence,
    generate,
    guess_recurrence,
)
from pisotrec.guess import fits, solve_order

from .conftest import NAMED


@pytest.mark.parametrize("x, y, count, coeffs", [
    (4, 7, 20, (2, -1, 1)),
    (10, 219, 30, (22, -3, 18, -11)),
    (5, 17, 30, (4, -2)),
    (30, 989, 60, (33, -2, 30, -11)),
])
def test_guess_named(x, y, count, coeffs):
    prefix = generate(PisotParams(x, y), count)
    rec = guess_recurrence(prefix, 12 if count >= 24 else 5)
    assert rec.coefficients == coeffs
    assert rec.initial_terms == prefix.terms[: len(coeffs)]


def test_guess_geometric():
    rec = guess_recurrence([1, 2, 4, 8, 16, 32, 64, 128], 4)
    assert rec.coefficients == (2,) and rec.initial_terms == (1,)


def test_guess_errors():
    with pytest.raises(InsufficientPrefix):
        guess_recurrence([1, 2, 3], 2)
    squares = [n * n + 1 for n in range(12)]  # order 3, not 2
    with pytest.raises(NotFound):
        guess_recurrence(squares, 2)
    assert guess_recurrence(squares, 3).coefficients == (3, -3, 1)


def test_rational_solutions_rejected_by_default():
    # b_n = b_{n-1}/2 + b_{n-2}
    terms = [Fraction(4), Fraction(8)]
    for _ in range(10):
        terms.append(terms[-1] / 2 + terms[-2])
    scaled = [int(t * 2**12) for t in terms]
    assert solve_order(scaled, 2) is None
    assert solve_order(scaled, 2, allow_rational=True) == (Fraction(1, 2), Fraction(1))


@pytest.mark.parametrize("coeffs, init, count, expected", [
    ((2, -1, 1), (4, 7, 12), 7, [4, 7, 12, 21, 37, 65, 114]),
    ((2,), (1,), 5, [1, 2, 4, 8, 16]),
])
def test_eval_examples(coeffs, init, count, expected):
    assert eval_recurrence(LinearRecurrence(coeffs, init), count) == expected


def test_eval_e30_989_matches_generation():
    a = generate(PisotParams(30, 989), 10).terms
    rec = LinearRecurrence((33, -2, 30, -11), a[:4])
    assert eval_recurrence(rec, 10) == list(a)


def test_pair_json_form():
    rec = LinearRecurrence((4, 1), (4, 17))
    assert rec.to_json() == "[[4, 17], [4, 1]]"
    assert LinearRecurrence.from_json(rec.to_json()) == rec
    assert rec.char_poly() == [1, -4, -1]


def test_zero_last_coefficient_rejected():
    with pytest.raises(ValueError):
        LinearRecurrence((2, 0), (1, 2))


recurrences = st.integers(1, 4).flatmap(lambda k: st.tuples(
    st.lists(st.integers(-6, 6), min_size=k, max_size=k).filter(lambda c: c[-1] != 0),
    st.lists(st.integers(-20, 20), min_size=k, max_size=k),
))


@given(recurrences)
@settings(max_examples=150)
def test_round_trip_minimality_shift(data):
    coeffs, init = data
    rec = LinearRecurrence(tuple(coeffs), tuple(init))
    terms = eval_recurrence(rec, 4 * len(coeffs) + 6)
    try:
        g = guess_recurrence(terms, len(coeffs))
    except NotFound:
        # a singular system at the true order (degenerate start values)
        return
    assert g.order_k <= rec.order_k
    assert eval_recurrence(g, len(terms)) == terms
    # shift robustness: the guess fits every later window
    for start in range(0, len(terms) - 2 * g.order_k):
        assert fits(terms[start:], g.coefficients)
    if g.order_k > 1:
        lower = solve_order(terms, g.order_k - 1)
        assert lower is None or not fits(terms, lower) or lower[-1] == 0


@pytest.mark.parametrize("name", sorted(NAMED))
def test_minimality_on_fixtures(name):
    x, y, coeffs = NAMED[name]
    k = len(coeffs)
    terms = list(generate(PisotParams(x, y), 4 * k + 8).terms)
    sol = solve_order(terms, k)
    assert sol == coeffs and fits(terms, sol)
    if k > 1:
        lower = solve_order(terms, k - 1)
        assert lower is None or not fits(terms, lower)
