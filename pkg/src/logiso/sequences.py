"""Finite presentations of positive sequences and decisions about their ratios.

Every infinite sequence is an explicit head followed by a closed-form tail

    term(n) = a * r**(n - shift) * (n - shift)**(-p)        (n > head_len)

which covers geometric, power-law and mixed decay. Boundedness of a ratio of
two such sequences is decided symbolically: past a computable index the ratio
is monotone, so a finite scan plus the limit gives the exact supremum, and an
unbounded ratio yields a witness index for any requested bound.

Indices are 1-based throughout, matching the mass sequences they model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Sequence as Seq

import mpmath

from .errors import SchemaError, UndecidableTail
from .numeric import Number, as_number, exact_sum, is_exact, jsonable, log, number_from_json, to_float

# Above this index exact rational powers get too large; fall back to logs.
EXACT_INDEX_LIMIT = 20_000
# Longest finite scan a ratio decision may require before giving up.
SCAN_LIMIT = 2_000_000

_MP_DPS = 40


def _is_int(x) -> bool:
    return is_exact(x) and Fraction(x).denominator == 1


@dataclass(frozen=True)
class TailForm:
    """``a * r**m * m**(-p)`` evaluated at ``m = n - shift``."""

    a: Number
    r: Number
    p: Number
    shift: int = 0

    @property
    def exact(self) -> bool:
        return is_exact(self.a) and is_exact(self.r) and _is_int(self.p)

    @property
    def summable(self) -> bool:
        return self.r < 1 or self.p > 1

    def value(self, n: int) -> Number:
        m = n - self.shift
        if m < 1:
            raise IndexError(f"tail form undefined at n={n}")
        if self.exact and m <= EXACT_INDEX_LIMIT:
            return self.a * self.r**m * Fraction(m) ** (-int(self.p))
        v = math.exp(self.log_value(n))
        if v == 0.0:
            where = n if n < 10**15 else f"~1e{math.log10(n):.0f}"
            raise FloatingPointError(f"term underflows at n={where}; supply exact rational parameters")
        return v

    def log_value(self, n: int) -> float:
        m = n - self.shift
        lr = 0.0 if self.r == 1 else to_float(m) * log(self.r)
        return log(self.a) + lr - to_float(self.p) * math.log(m)

    def scaled(self, c: Number) -> "TailForm":
        return TailForm(self.a * c, self.r, self.p, self.shift)

    def tail_sum(self, start: int) -> Number:
        """Sum of ``value(n)`` over ``n >= start``; ``math.inf`` if divergent."""
        m0 = start - self.shift
        if m0 < 1:
            raise IndexError("tail sum must start inside the tail")
        if not self.summable:
            return math.inf
        if self.p == 0 and is_exact(self.a) and is_exact(self.r):
            return self.a * self.r**m0 / (1 - self.r)
        if self.exact and self.p < 0 and self.r < 1:
            d = -int(self.p)
            head = sum((Fraction(m) ** d * self.r**m for m in range(1, m0)), Fraction(0))
            return self.a * (_polylog_neg(d, self.r) - head)
        with mpmath.workdps(_MP_DPS):
            a = mpmath.mpf(to_float(self.a)) if not is_exact(self.a) else mpmath.mpf(self.a.numerator) / self.a.denominator
            p = mpmath.mpf(to_float(self.p))
            if self.r == 1:
                s = mpmath.zeta(p, m0)
            else:
                r = mpmath.mpf(to_float(self.r))
                s = r**m0 * mpmath.lerchphi(r, p, m0)
            return float(a * s)


def _polylog_neg(d: int, r: Fraction) -> Fraction:
    """Exact ``sum_{m>=1} m**d r**m`` via Eulerian numbers."""
    if d == 0:
        return r / (1 - r)
    eulerian = [
        sum((-1) ** j * math.comb(d + 1, j) * (k + 1 - j) ** d for j in range(k + 1))
        for k in range(d)
    ]
    poly = sum((c * r**k for k, c in enumerate(eulerian)), Fraction(0))
    return r * poly / (1 - r) ** (d + 1)


class Sequence:
    """A positive sequence indexed from 1, finite or infinite."""

    kind = "abstract"
    #: number of leading terms given explicitly; the tail form covers the rest
    head_len: int = 0
    form: TailForm | None = None

    @property
    def length(self) -> int | None:
        return None

    @property
    def is_finite(self) -> bool:
        return self.length is not None

    @property
    def exact(self) -> bool:
        head_exact = all(is_exact(v) for v in self._head_values())
        return head_exact and (self.form is None or self.form.exact)

    def _head_values(self) -> tuple:
        return ()

    def term(self, n: int) -> Number:
        if n < 1 or (self.length is not None and n > self.length):
            raise IndexError(f"index {n} outside sequence")
        if n <= self.head_len:
            return self._head_values()[n - 1]
        return self.form.value(n)

    def log_term(self, n: int) -> float:
        if n <= self.head_len:
            return log(self.term(n))
        if self.length is not None and n > self.length:
            raise IndexError(f"index {n} outside sequence")
        return self.form.log_value(n)

    def terms(self, count: int) -> list[Number]:
        if self.length is not None:
            count = min(count, self.length)
        return [self.term(n) for n in range(1, count + 1)]

    def __iter__(self) -> Iterator[Number]:
        n = 1
        while self.length is None or n <= self.length:
            yield self.term(n)
            n += 1

    def total(self) -> Number:
        head = exact_sum(self._head_values())
        if self.form is None:
            return head
        tail = self.form.tail_sum(self.head_len + 1)
        if isinstance(tail, float) or isinstance(head, float):
            return to_float(head) + to_float(tail)
        return head + tail

    def tail_sum(self, start: int) -> Number:
        """Sum of terms with index ``>= start``."""
        if start <= self.head_len:
            explicit = [self.term(n) for n in range(start, self.head_len + 1)]
            rest = self.form.tail_sum(self.head_len + 1) if self.form else Fraction(0)
            return exact_sum(explicit + [rest]) if rest != math.inf else math.inf
        if self.form is None:
            return Fraction(0)
        return self.form.tail_sum(start)

    def scaled(self, c: Number) -> "Sequence":
        raise NotImplementedError

    def base_tail(self, head: int) -> tuple["Sequence", int]:
        """Base kind and skip that reproduce this sequence after ``head`` terms."""
        raise NotImplementedError

    def with_head(self, values: Seq[Number]) -> "Sequence":
        """Replace the first ``len(values)`` terms, keeping the tail."""
        values = tuple(values)
        if self.is_finite:
            rest = self._head_values()[len(values):]
            return FiniteList(values + rest)
        if not values:
            return self
        if len(values) < self.head_len:
            values += tuple(self.term(n) for n in range(len(values) + 1, self.head_len + 1))
        tail, skip = self.base_tail(len(values))
        return PrefixThenTail(values, tail, len(values) + 1, skip)

    def to_json(self):
        raise NotImplementedError


def _positive(x, what: str) -> Number:
    x = as_number(x)
    if not x > 0:
        raise SchemaError(f"{what} must be strictly positive, got {x}")
    return x


def _coerce(obj, *names: str) -> None:
    for name in names:
        object.__setattr__(obj, name, as_number(getattr(obj, name)))


@dataclass(frozen=True)
class FiniteList(Sequence):
    values: tuple = ()

    kind = "finite"

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(_positive(v, "term") for v in self.values))

    @property
    def length(self) -> int:
        return len(self.values)

    @property
    def head_len(self) -> int:
        return len(self.values)

    def _head_values(self) -> tuple:
        return self.values

    def scaled(self, c):
        return FiniteList(tuple(v * c for v in self.values))

    def to_json(self):
        return {"kind": "finite", "values": [jsonable(v) for v in self.values]}


class _BaseKind(Sequence):
    """Sequences that are a single tail form from n = 1."""

    def base_tail(self, head: int):
        return self, head


@dataclass(frozen=True)
class Geometric(_BaseKind):
    """``a * r**n`` for n >= 1; total ``a r / (1 - r)``."""

    a: Number
    r: Number

    kind = "geometric"

    def __post_init__(self):
        _coerce(self, "a", "r")
        _positive(self.a, "a")
        if not 0 < self.r < 1:
            raise SchemaError(f"geometric ratio must lie in (0, 1), got {self.r}")

    @property
    def form(self):
        return TailForm(self.a, self.r, Fraction(0), 0)

    def scaled(self, c):
        return Geometric(self.a * c, self.r)

    def to_json(self):
        return {"kind": "geometric", "a": jsonable(self.a), "r": jsonable(self.r)}


@dataclass(frozen=True)
class PowerLaw(_BaseKind):
    """``a * n**(-p)`` for n >= 1 with p > 1."""

    a: Number
    p: Number

    kind = "power_law"

    def __post_init__(self):
        _coerce(self, "a", "p")
        _positive(self.a, "a")
        if not self.p > 1:
            raise SchemaError(f"power-law exponent must exceed 1, got {self.p}")

    @property
    def form(self):
        return TailForm(self.a, Fraction(1), self.p, 0)

    def scaled(self, c):
        return PowerLaw(self.a * c, self.p)

    def to_json(self):
        return {"kind": "power_law", "a": jsonable(self.a), "p": jsonable(self.p)}


@dataclass(frozen=True)
class GeometricPower(_BaseKind):
    """``a * r**n * n**(-p)``; r = 1 with p <= 1 gives an infinite total."""

    a: Number
    r: Number
    p: Number

    kind = "geometric_power"

    def __post_init__(self):
        _coerce(self, "a", "r", "p")
        _positive(self.a, "a")
        if not 0 < self.r <= 1:
            raise SchemaError(f"ratio must lie in (0, 1], got {self.r}")

    @property
    def form(self):
        return TailForm(self.a, self.r, self.p, 0)

    def scaled(self, c):
        return GeometricPower(self.a * c, self.r, self.p)

    def to_json(self):
        return {
            "kind": "geometric_power",
            "a": jsonable(self.a),
            "r": jsonable(self.r),
            "p": jsonable(self.p),
        }


@dataclass(frozen=True)
class PrefixThenTail(Sequence):
    """Explicit prefix at positions 1..L, then ``tail.term(skip + j)`` at L + j."""

    prefix: tuple
    tail: Sequence
    tail_start: int
    skip: int = 0

    kind = "prefix_then_tail"

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(_positive(v, "prefix term") for v in self.prefix))
        if not isinstance(self.tail, _BaseKind):
            raise SchemaError("tail must be geometric, power_law or geometric_power")
        if self.tail_start != len(self.prefix) + 1:
            raise SchemaError(
                f"tail_start must equal len(prefix) + 1 = {len(self.prefix) + 1}, got {self.tail_start}"
            )
        if self.skip < 0:
            raise SchemaError("skip must be non-negative")

    @property
    def head_len(self) -> int:
        return len(self.prefix)

    def _head_values(self) -> tuple:
        return self.prefix

    @property
    def form(self):
        f = self.tail.form
        return TailForm(f.a, f.r, f.p, len(self.prefix) - self.skip)

    def scaled(self, c):
        return PrefixThenTail(
            tuple(v * c for v in self.prefix), self.tail.scaled(c), self.tail_start, self.skip
        )

    def base_tail(self, head: int):
        if head < len(self.prefix):
            raise ValueError("new head must cover the explicit prefix")
        return self.tail, self.skip + head - len(self.prefix)

    def to_json(self):
        out = {
            "kind": "prefix_then_tail",
            "prefix": [jsonable(v) for v in self.prefix],
            "tail": self.tail.to_json(),
            "tail_start": self.tail_start,
        }
        if self.skip:
            out["skip"] = self.skip
        return out


EMPTY = FiniteList(())


def sequence_from_json(obj, path: str = "$", *, rational: bool = False) -> Sequence:
    """Parse the tagged-object sequence encoding (a bare list means ``finite``)."""
    def num(key):
        if key not in obj:
            raise SchemaError(f"missing field '{key}'", f"{path}")
        return number_from_json(obj[key], f"{path}.{key}", rational=rational)

    if obj is None:
        return EMPTY
    if isinstance(obj, list):
        obj = {"kind": "finite", "values": obj}
    if not isinstance(obj, dict):
        raise SchemaError("sequence must be a list or a tagged object", path)
    kind = obj.get("kind")
    try:
        if kind == "finite":
            vals = obj.get("values", [])
            if not isinstance(vals, list):
                raise SchemaError("values must be a list", f"{path}.values")
            return FiniteList(
                tuple(number_from_json(v, f"{path}.values[{i}]", rational=rational) for i, v in enumerate(vals))
            )
        if kind == "geometric":
            return Geometric(num("a"), num("r"))
        if kind == "power_law":
            return PowerLaw(num("a"), num("p"))
        if kind == "geometric_power":
            return GeometricPower(num("a"), num("r"), num("p"))
        if kind == "prefix_then_tail":
            prefix = obj.get("prefix", [])
            if not isinstance(prefix, list):
                raise SchemaError("prefix must be a list", f"{path}.prefix")
            tail = sequence_from_json(obj.get("tail"), f"{path}.tail", rational=rational)
            start = obj.get("tail_start", len(prefix) + 1)
            skip = obj.get("skip", 0)
            if not isinstance(start, int) or not isinstance(skip, int):
                raise SchemaError("tail_start and skip must be integers", path)
            return PrefixThenTail(
                tuple(number_from_json(v, f"{path}.prefix[{i}]", rational=rational) for i, v in enumerate(prefix)),
                tail,
                start,
                skip,
            )
    except SchemaError as exc:
        if exc.path == "$":
            raise SchemaError(exc.reason, path) from None
        raise
    raise SchemaError(f"unknown sequence kind {kind!r}", f"{path}.kind")


# ---------------------------------------------------------------------------
# ratio decisions


@dataclass(frozen=True)
class Bounded:
    """Supremum certificate; ``index`` is None when the sup is only approached."""

    sup: Number
    index: int | None = None

    bounded = True


@dataclass(frozen=True)
class Witness:
    index: int
    ratio: Number
    bound: Number


class Unbounded:
    """Unboundedness certificate carrying a witness generator."""

    bounded = False

    def __init__(self, ratio: "RatioSequence"):
        self.ratio = ratio

    def witness(self, bound) -> Witness:
        n = self.ratio.first_index(bound, strict=True)
        return Witness(n, self.ratio.value(n), bound)

    def __repr__(self) -> str:
        return f"Unbounded({self.ratio!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Unbounded) and other.ratio == self.ratio

    def __hash__(self) -> int:
        return hash(("Unbounded", self.ratio))


@dataclass(frozen=True)
class _TailBehaviour:
    """Past ``start`` the ratio is monotone, heading to ``limit``."""

    start: int
    limit: Number  # 0, a positive constant, or math.inf
    increasing: bool


def _behaviour(f1: TailForm, f2: TailForm, first: int) -> _TailBehaviour:
    h1, h2 = f1.shift, f2.shift
    p1, p2 = to_float(f1.p), to_float(f2.p)
    if f1.r != f2.r:
        # exponential factor dominates once the power terms' log-derivatives are small
        gap = abs(log(f2.r) - log(f1.r))
        bound = max(h1, h2) + (abs(p1) + abs(p2)) / gap
        start = max(first, math.floor(bound) + 1)
        if f1.r < f2.r:
            return _TailBehaviour(start, Fraction(0), False)
        return _TailBehaviour(start, math.inf, True)
    if p1 != p2:
        # sign of d/dn log R is the sign of n (p2 - p1) + p1 h2 - p2 h1
        crossing = (p2 * h1 - p1 * h2) / (p2 - p1)
        start = max(first, math.floor(crossing) + 1)
        if p2 > p1:
            return _TailBehaviour(start, math.inf, True)
        return _TailBehaviour(start, Fraction(0), False)
    # same rate and exponent: ((n - h2) / (n - h1))**p is monotone towards 1
    limit = f1.a / f2.a * f1.r ** (h2 - h1)
    increasing = (p1 * (h2 - h1)) > 0
    return _TailBehaviour(first, limit, increasing)


class RatioSequence:
    """``num(n) / den(n)`` for two sequences over the same index set."""

    def __init__(self, num: Sequence, den: Sequence):
        if num.length != den.length:
            raise ValueError("ratio of sequences of different lengths")
        self.num = num
        self.den = den

    def __repr__(self) -> str:
        return f"RatioSequence({self.num!r}, {self.den!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, RatioSequence) and (self.num, self.den) == (other.num, other.den)

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    @property
    def length(self) -> int | None:
        return self.num.length

    def inverse(self) -> "RatioSequence":
        return RatioSequence(self.den, self.num)

    @cached_property
    def _exact(self) -> bool:
        return self.num.exact and self.den.exact

    @cached_property
    def _forms(self) -> tuple:
        return self.num.form, self.den.form

    def _exact_value(self, n: int) -> Fraction | None:
        """The exact ratio when it is cheap: small index, or cancelling rates with integer exponents."""
        if not self._exact:
            return None
        if n <= EXACT_INDEX_LIMIT:
            return self.num.term(n) / self.den.term(n)
        if self.length is not None or n <= max(self.num.head_len, self.den.head_len):
            return None
        f1, f2 = self._forms
        if f1.r != f2.r or Fraction(f1.p).denominator != 1 or Fraction(f2.p).denominator != 1:
            return None
        m1, m2 = n - f1.shift, n - f2.shift
        return (
            Fraction(f1.a) / Fraction(f2.a) * Fraction(f1.r) ** (m1 - m2)
            * Fraction(m1) ** -int(f1.p) * Fraction(m2) ** int(f2.p)
        )

    def value(self, n: int) -> Number:
        exact = self._exact_value(n)
        if exact is not None:
            return exact
        if n <= self.num.head_len and n <= self.den.head_len:
            return to_float(self.num.term(n)) / to_float(self.den.term(n))
        try:
            return math.exp(self.log_value(n))
        except OverflowError:
            return math.inf

    def log_value(self, n: int) -> float:
        past_heads = n > self.num.head_len and n > self.den.head_len
        if self.length is not None or not past_heads:
            return self.num.log_term(n) - self.den.log_term(n)
        f1, f2 = self._forms
        if f1.r != f2.r:
            return self.num.log_term(n) - self.den.log_term(n)
        # equal rates: cancel the r**n factors symbolically before going to floats
        m1, m2 = n - f1.shift, n - f2.shift
        la, lr, p1, p2 = self._log_constants
        return la + (m1 - m2) * lr - p1 * math.log(m1) + p2 * math.log(m2)

    @cached_property
    def _log_constants(self) -> tuple[float, float, float, float]:
        f1, f2 = self._forms
        lr = 0.0 if f1.r == 1 else log(f1.r)
        return log(f1.a) - log(f2.a), lr, to_float(f1.p), to_float(f2.p)

    def compare(self, n: int, bound) -> int:
        """Sign of ``value(n) - bound``."""
        v = self._exact_value(n) if is_exact(bound) else None
        if v is not None:
            return (v > bound) - (v < bound)
        lv, lb = self.log_value(n), log(bound)
        if math.isclose(lv, lb, rel_tol=1e-13, abs_tol=1e-13):
            return 0
        return 1 if lv > lb else -1

    @cached_property
    def behaviour(self) -> _TailBehaviour | None:
        if self.length is not None:
            return None
        first = max(self.num.head_len, self.den.head_len) + 1
        return _behaviour(self.num.form, self.den.form, first)

    def decide(self) -> Bounded | Unbounded:
        return self._decision

    @cached_property
    def _decision(self) -> Bounded | Unbounded:
        if self.length is not None:
            if self.length == 0:
                return Bounded(Fraction(0), None)
            return self._scan_max(self.length)
        b = self.behaviour
        if b.limit == math.inf:
            return Unbounded(self)
        if b.start > SCAN_LIMIT:
            raise UndecidableTail(
                f"ratio becomes monotone only after index {b.start}, beyond the scan limit"
            )
        best = self._scan_max(b.start)
        if b.increasing and b.limit > best.sup:
            return Bounded(b.limit, None)
        return best

    def _scan_max(self, upto: int) -> Bounded:
        best_n, best_v = 1, self.value(1)
        for n in range(2, upto + 1):
            v = self.value(n)
            if v > best_v:
                best_n, best_v = n, v
        return Bounded(best_v, best_n)

    def first_index(self, bound, *, start: int = 1, strict: bool = False) -> int:
        """Smallest ``n >= start`` with ``value(n) > bound`` (``>=`` unless strict)."""
        want = (1,) if strict else (0, 1)

        def hit(n: int) -> bool:
            return self.compare(n, bound) in want

        b = self.behaviour
        if b is None:
            for n in range(start, self.length + 1):
                if hit(n):
                    return n
            raise ValueError(f"no index exceeds {bound}")
        for n in range(start, b.start):
            if hit(n):
                return n
        lo = max(start, b.start)
        if hit(lo):
            return lo
        reachable = b.limit == math.inf or (
            b.increasing and (b.limit > bound if strict else b.limit >= bound)
        )
        if not b.increasing or not reachable:
            raise ValueError(f"no index exceeds {bound}")
        step = 1
        hi = lo + step
        while not hit(hi):
            lo = hi
            step *= 2
            hi = lo + step
        # increasing on [lo, hi]: hit(lo) false, hit(hi) true
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if hit(mid):
                hi = mid
            else:
                lo = mid
        return hi


def ratio_bounded(num: Sequence, den: Sequence) -> Bounded | Unbounded:
    """Decide boundedness of ``num(n) / den(n)`` with a certificate."""
    if num.length != den.length:
        raise ValueError("sequences have different lengths")
    return RatioSequence(num, den).decide()


def sort_descending(seq: Sequence) -> tuple[Sequence, tuple[int, ...]]:
    """Sort terms non-increasingly.

    Returns the sorted sequence and the original index of every position in
    the returned head; positions after the head keep their original index.
    """
    if seq.is_finite:
        order = tuple(sorted(range(1, seq.length + 1), key=lambda i: (-seq.term(i), i)))
        if order == tuple(range(1, seq.length + 1)):
            return seq, order
        return FiniteList(tuple(seq.term(i) for i in order)), order
    f = seq.form
    p = to_float(f.p)
    start = seq.head_len + 1
    if p < 0:
        if f.r == 1:
            raise UndecidableTail("increasing tail cannot be sorted in descending order")
        start = max(start, math.floor(f.shift + p / log(f.r)) + 1)
    head = start - 1
    if head == 0:
        return seq, ()
    smallest = min(seq.term(i) for i in range(1, head + 1))
    while seq.term(head + 1) > smallest:
        head += 1
        if head > SCAN_LIMIT:
            raise UndecidableTail("sorting requires an unbounded head")
    order = tuple(sorted(range(1, head + 1), key=lambda i: (-seq.term(i), i)))
    if order == tuple(range(1, head + 1)):
        return seq, order
    return seq.with_head([seq.term(i) for i in order]), order
