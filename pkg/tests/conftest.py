import pytest

from pisotrec import LinearRecurrence, PisotParams, generate

# (x, y, coefficients) for recurrences known from the literature
NAMED = {
    "E(4,7)": (4, 7, (2, -1, 1)),
    "E(5,17)": (5, 17, (4, -2)),
    "E(10,219)": (10, 219, (22, -3, 18, -11)),
    "E(30,989)": (30, 989, (33, -2, 30, -11)),
    "E(1,2)": (1, 2, (2,)),
}


def named_recurrence(name):
    x, y, coeffs = NAMED[name]
    init = generate(PisotParams(x, y), max(2, len(coeffs))).terms[: len(coeffs)]
    return PisotParams(x, y), LinearRecurrence(coeffs, init)


@pytest.fixture(params=sorted(NAMED))
def named(request):
    return (request.param,) + named_recurrence(request.param)
