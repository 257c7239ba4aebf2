"""Exact-or-float scalar helpers.

Masses are :class:`fractions.Fraction` whenever every input is rational and
plain floats otherwise. Equality of floats uses a 1e-12 relative tolerance.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Union

Number = Union[Fraction, float]

REL_TOL = 1e-12


def is_exact(x) -> bool:
    return isinstance(x, (Fraction, int)) and not isinstance(x, bool)


def as_number(x, *, rational: bool = False) -> Number:
    """Coerce an int/float/Fraction into the library's scalar type."""
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if rational:
            return Fraction(str(x))
        return x
    raise TypeError(f"not a real number: {x!r}")


def to_float(x) -> float:
    if isinstance(x, Fraction):
        try:
            return x.numerator / x.denominator
        except OverflowError:
            return math.inf if x > 0 else -math.inf
    if isinstance(x, int) and not isinstance(x, bool):
        try:
            return float(x)
        except OverflowError:
            return math.inf if x > 0 else -math.inf
    return float(x)


def log(x) -> float:
    """Natural log that survives Fractions far outside the float range."""
    if isinstance(x, Fraction):
        if x <= 0:
            raise ValueError("log of non-positive number")
        return math.log(x.numerator) - math.log(x.denominator)
    return math.log(x)


def close(a, b, rel: float = REL_TOL) -> bool:
    """Exact equality for two rationals, relative tolerance otherwise."""
    if is_exact(a) and is_exact(b):
        return a == b
    fa, fb = to_float(a), to_float(b)
    if math.isinf(fa) or math.isinf(fb):
        return fa == fb
    return math.isclose(fa, fb, rel_tol=rel, abs_tol=0.0)


def le(a, b, rel: float = REL_TOL) -> bool:
    """``a <= b`` with the float tolerance applied in favour of equality."""
    if is_exact(a) and is_exact(b):
        return a <= b
    return to_float(a) <= to_float(b) or close(a, b, rel)


def exact_sum(values: Iterable) -> Number:
    """Sum preserving exactness when every value is rational."""
    values = list(values)
    if all(is_exact(v) for v in values):
        return sum(values, Fraction(0))
    return math.fsum(to_float(v) for v in values)


class CompensatedSum:
    """Neumaier running sum; deterministic for a fixed input order."""

    __slots__ = ("total", "_comp")

    def __init__(self) -> None:
        self.total = 0.0
        self._comp = 0.0

    def add(self, x: float) -> float:
        x = float(x)
        if math.isinf(x) or math.isinf(self.total):
            self.total += x
            self._comp = 0.0
            return self.total
        t = self.total + x
        if abs(self.total) >= abs(x):
            self._comp += (self.total - t) + x
        else:
            self._comp += (x - t) + self.total
        self.total = t
        return self.value

    @property
    def value(self) -> float:
        return self.total + self._comp


def running_sums(values: Iterable[float]) -> list[float]:
    acc = CompensatedSum()
    return [acc.add(v) for v in values]


def number_from_json(obj, path: str = "$", *, rational: bool = False) -> Number:
    """Decode a JSON scalar; ``{"num": p, "den": q}`` is an exact rational."""
    from .errors import SchemaError

    if isinstance(obj, dict):
        try:
            num, den = obj["num"], obj["den"]
        except KeyError:
            raise SchemaError("rational must have 'num' and 'den'", path) from None
        if not (isinstance(num, int) and isinstance(den, int)) or isinstance(num, bool) or den == 0:
            raise SchemaError("rational needs integer num and non-zero integer den", path)
        return Fraction(num, den)
    if isinstance(obj, bool) or not isinstance(obj, (int, float)):
        raise SchemaError(f"expected a number, got {obj!r}", path)
    if isinstance(obj, float) and not math.isfinite(obj):
        raise SchemaError("number must be finite", path)
    return as_number(obj, rational=rational)


def jsonable(x):
    """Encode a scalar for JSON: ints stay ints, other rationals become num/den."""
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return int(x.numerator)
        return {"num": x.numerator, "den": x.denominator}
    if isinstance(x, float):
        if math.isinf(x):
            return "infinite" if x > 0 else "-infinite"
        if math.isnan(x):
            raise ValueError("NaN is not serializable")
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return x
    raise TypeError(f"cannot encode {x!r}")
