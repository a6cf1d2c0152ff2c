"""Hot big-integer loops.

The same code runs on Python ints or on gmpy2.mpz; only the number type
changes. gmpy2 is used when importable unless PISOTREC_BACKEND=python is set
in the environment. Set PISOTREC_BACKEND=gmpy2 to require it.
"""
import os

try:
    import gmpy2
except ImportError:  # pragma: no cover - exercised only without gmpy2
    gmpy2 = None

_requested = os.environ.get("PISOTREC_BACKEND", "").strip().lower()
if _requested == "gmpy2" and gmpy2 is None:
    raise ImportError("PISOTREC_BACKEND=gmpy2 but gmpy2 is not installed")

BACKEND = "python" if (_requested == "python" or gmpy2 is None) else "gmpy2"


def number_type(backend=None):
    backend = backend or BACKEND
    if backend == "gmpy2":
        if gmpy2 is None:
            raise ImportError("gmpy2 is not installed")
        return gmpy2.mpz
    if backend == "python":
        return int
    raise ValueError(f"unknown backend {backend!r}")


def lift(values, backend=None):
    big = number_type(backend)
    return [big(v) for v in values]


def pisot_stream(a0, a1, p, q):
    """Yield E_{p/q}(a0, a1) forever. Inputs should already be lifted."""
    yield a0
    yield a1
    while True:
        a0, a1 = a1, (q * a1 * a1 + p * a0) // (q * a0)
        yield a1


def recurrence_stream(coeffs, initial):
    """Yield b_0, b_1, ... for b_n = sum_i coeffs[i] * b_{n-1-i}."""
    k = len(coeffs)
    window = list(initial[:k])
    yield from window
    pairs = list(enumerate(coeffs))
    while True:
        nxt = 0
        for i, c in pairs:
            if c:
                nxt += c * window[k - 1 - i]
        window.append(nxt)
        del window[0]
        yield nxt


def first_mismatch(stream_a, stream_b, limit):
    """Index of the first disagreement among the first ``limit`` items, or None."""
    for n, (a, b) in enumerate(zip(stream_a, stream_b)):
        if n >= limit:
            return None
        if a != b:
            return n
    return None


def first_bracket_failure(terms, p, q, start=2):
    """First n >= start at which terms[n] != floor(terms[n-1]^2/terms[n-2] + p/q).

    ``terms`` is any iterable; only a three-term window is kept. The test is
    the multiplication-only bracket -p*b <= q*c < (q-p)*b on the discrepancy
    c = b_{n-1}^2 - b_n b_{n-2}, falling back to floor division when
    b_{n-2} <= 0. Returns (index, None) on failure, (None, count) when the
    iterable is exhausted.
    """
    it = iter(terms)
    try:
        b0 = next(it)
        b1 = next(it)
    except StopIteration:
        return None, 0
    n = 1
    for b2 in it:
        n += 1
        if n >= start:
            if b0 > 0:
                c = b1 * b1 - b2 * b0
                qc = q * c
                if qc < -p * b0 or qc >= (q - p) * b0:
                    return n, None
            elif b0 == 0 or (q * b1 * b1 + p * b0) // (q * b0) != b2:
                return n, None
        b0, b1 = b1, b2
    return None, n + 1
