"""Reference computations written independently of the library.

They use only ``fractions``, ``math`` and ``mpmath`` on closed-form term
formulas, never the package's sequence or norm code.
"""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath


def inverse_square_partials(K: int) -> list[float]:
    """Running sums of 1/k^2 in 40-digit arithmetic, rounded at the end."""
    with mpmath.workdps(40):
        acc = mpmath.mpf(0)
        out = []
        for k in range(1, K + 1):
            acc += mpmath.mpf(1) / (k * k)
            out.append(float(acc))
    return out


def harmonic(K: int) -> Fraction:
    return sum((Fraction(1, k) for k in range(1, K + 1)), Fraction(0))


def harmonic_partials(K: int) -> list[float]:
    with mpmath.workdps(40):
        acc = mpmath.mpf(0)
        out = []
        for k in range(1, K + 1):
            acc += mpmath.mpf(1) / k
            out.append(float(acc))
    return out


def first_exceeding(terms, bound):
    """1-based position of the first term strictly above ``bound``."""
    for n, t in enumerate(terms, 1):
        if t > bound:
            return n
    return None


def scan_max(values) -> Fraction:
    return max(values)


def geometric_term(a, r, n):
    return Fraction(a) * Fraction(r) ** n


def power_term(a, p, n):
    return Fraction(a) * Fraction(n) ** (-p)


def log_norm(cells) -> float:
    """``sum |c| -> log(1+|c|) * mass`` over (|c|, mass) pairs."""
    return math.fsum(math.log1p(abs(complex(c))) * float(m) for c, m in cells)


PI2_6 = math.pi**2 / 6
