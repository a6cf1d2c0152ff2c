"""Exact integer and rational helpers: fraction-free elimination and polynomial gcd.

Polynomials are dense coefficient lists, highest degree first.
"""
from fractions import Fraction


def bareiss_det(matrix):
    """Determinant of a square integer matrix by fraction-free elimination.

    Every intermediate entry stays an integer (each step is an exact division),
    which keeps the cost reasonable when entries have thousands of digits.
    """
    m = [list(row) for row in matrix]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i = m[i]
            row_k = m[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def solve_fraction_free(a, b):
    """Solve ``a x = b`` exactly for square integer ``a``.

    Returns a list of Fractions, or None when ``a`` is singular.
    Forward elimination is Bareiss-style on the augmented matrix; the
    triangular back substitution runs over Fractions.
    """
    n = len(a)
    m = [list(a[i]) + [b[i]] for i in range(n)]
    prev = 1
    for k in range(n):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    break
            else:
                return None
        pivot = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i = m[i]
            row_k = m[k]
            for j in range(k + 1, n + 1):
                row_i[j] = (row_i[j] * pivot - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        acc = Fraction(m[i][n])
        for j in range(i + 1, n):
            acc -= m[i][j] * x[j]
        x[i] = acc / m[i][i]
    return x


def poly_strip(p):
    i = 0
    while i < len(p) - 1 and p[i] == 0:
        i += 1
    return list(p[i:])


def poly_derivative(p):
    d = len(p) - 1
    return poly_strip([c * (d - i) for i, c in enumerate(p[:-1])]) or [0]


def poly_rem(a, b):
    a = [Fraction(c) for c in poly_strip(a)]
    b = [Fraction(c) for c in poly_strip(b)]
    if b == [0]:
        raise ZeroDivisionError("polynomial division by zero")
    while len(a) >= len(b) and a != [0]:
        f = a[0] / b[0]
        for i in range(len(b)):
            a[i] -= f * b[i]
        a = poly_strip(a[1:]) if len(a) > 1 else [Fraction(0)]
    return a


def poly_gcd(a, b):
    """Monic gcd over the rationals."""
    a = poly_strip([Fraction(c) for c in a])
    b = poly_strip([Fraction(c) for c in b])
    while b != [0]:
        a, b = b, poly_rem(a, b)
    lead = a[0]
    if lead == 0:
        return [Fraction(0)]
    return [c / lead for c in a]


def poly_eval(p, x):
    acc = 0
    for c in p:
        acc = acc * x + c
    return acc


def dyadic_to_decimal(q):
    """Exact decimal string for a rational whose denominator is a power of two."""
    q = Fraction(q)
    den = q.denominator
    e = den.bit_length() - 1
    if den != 1 << e:
        raise ValueError(f"{q} is not dyadic")
    if e == 0:
        return str(q.numerator)
    sign = "-" if q < 0 else ""
    digits = str(abs(q.numerator) * 5**e).rjust(e + 1, "0")
    whole, frac = digits[:-e], digits[-e:].rstrip("0")
    return f"{sign}{whole}.{frac}" if frac else f"{sign}{whole}"


def rational_to_str(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
