"""Simple functions, the log F-norm and the inclusion/equality criteria.

``||f||_log = integral of log(1 + |f|) d(mu)`` (natural log). Finite simple
functions are stored pointwise: a coefficient per atom and a piecewise
constant function on ``[0, 1)`` per component. Infinite-support functions are
carried by an :class:`AtomSeries`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator

import mpmath

from .errors import DerivativeBounded, UndecidableTail
from .measure import (
    Cell,
    Event,
    MeasureSpace,
    RNDerivative,
    measure_of,
    rn_derivative,
)
from .numeric import CompensatedSum, Number, is_exact, to_float
from .sequences import RatioSequence, Sequence


@dataclass(frozen=True)
class ExpM1:
    """The positive real ``exp(exponent) - 1``, kept symbolic.

    The counterexample functions have exponents far beyond the float range;
    only ``log(1 + |c|) = exponent`` is ever needed to integrate them.
    """

    exponent: Number

    def __complex__(self) -> complex:
        return complex(self.value())

    def __float__(self) -> float:
        return self.value()

    def value(self) -> float:
        return math.expm1(to_float(self.exponent))

    def __abs__(self) -> "ExpM1":
        return self


def log1p_abs(c) -> Number:
    if isinstance(c, ExpM1):
        return c.exponent
    if c == 0:
        return 0.0
    return math.log1p(to_float(abs(c)))


def _is_zero(c) -> bool:
    if isinstance(c, ExpM1):
        return c.exponent == 0
    return c == 0


def _plain(c):
    return c.value() if isinstance(c, ExpM1) else c


def _conj(c):
    if isinstance(c, complex):
        return c.conjugate()
    return c


# ---------------------------------------------------------------------------
# piecewise-constant helpers on [0, 1)


def _merge_runs(pieces: Iterable[tuple]) -> tuple:
    out: list[list] = []
    for lo, hi, c in pieces:
        if _is_zero(c) or lo == hi:
            continue
        if out and out[-1][1] == lo and out[-1][2] == c:
            out[-1][1] = hi
        else:
            out.append([lo, hi, c])
    return tuple(tuple(p) for p in out)


def _piece_at(pieces: tuple, x) -> object:
    for lo, hi, c in pieces:
        if lo <= x < hi:
            return c
    return 0


def _combine_pieces(pa: tuple, pb: tuple, op) -> tuple:
    points = sorted({p for lo, hi, _ in pa + pb for p in (lo, hi)})
    out = []
    for lo, hi in zip(points, points[1:]):
        mid = (lo + hi) / 2
        out.append((lo, hi, op(_piece_at(pa, mid), _piece_at(pb, mid))))
    return _merge_runs(out)


# ---------------------------------------------------------------------------
# simple functions


@dataclass(frozen=True)
class SimpleFunction:
    """Finite linear combination of indicators of pairwise-disjoint events."""

    atom_values: tuple = ()  # ((index, coef), ...) ascending, non-zero
    component_values: tuple = ()  # ((id, ((lo, hi, coef), ...)), ...) sorted by id
    series: "AtomSeries | None" = field(default=None, compare=True)

    @classmethod
    def from_cells(cls, cells: Iterable[tuple[Event, object]]) -> "SimpleFunction":
        atoms: dict[int, object] = {}
        comps: dict[str, list] = {}
        for event, coef in cells:
            for i in event.atoms:
                if i in atoms:
                    raise ValueError(f"cells overlap on atom {i}")
                atoms[i] = coef
            for cid, ivs in event.components:
                comps.setdefault(cid, []).extend((lo, hi, coef) for lo, hi in ivs)
        comp_values = []
        for cid in sorted(comps):
            pieces = sorted(comps[cid], key=lambda p: (p[0], p[1]))
            for (_, hi, _), (lo, _, _) in zip(pieces, pieces[1:]):
                if lo < hi:
                    raise ValueError(f"cells overlap inside component {cid!r}")
            merged = _merge_runs(pieces)
            if merged:
                comp_values.append((cid, merged))
        atom_values = tuple((i, atoms[i]) for i in sorted(atoms) if not _is_zero(atoms[i]))
        return cls(atom_values, tuple(comp_values))

    @classmethod
    def zero(cls) -> "SimpleFunction":
        return cls()

    @classmethod
    def indicator(cls, e: Event) -> "SimpleFunction":
        return cls.from_cells([(e, Fraction(1))])

    @classmethod
    def from_series(cls, series: "AtomSeries") -> "SimpleFunction":
        return cls((), (), series)

    @property
    def is_finite(self) -> bool:
        return self.series is None

    @property
    def is_zero(self) -> bool:
        return not self.atom_values and not self.component_values and self.series is None

    @property
    def cells(self) -> list[tuple[Event, object]]:
        """Canonical cells: one per distinct coefficient, first-appearance order."""
        groups: dict = {}
        for i, c in self.atom_values:
            groups.setdefault(c, ([], {}))[0].append(i)
        for cid, pieces in self.component_values:
            for lo, hi, c in pieces:
                groups.setdefault(c, ([], {}))[1].setdefault(cid, []).append((lo, hi))
        return [(Event.make(atoms, comps), c) for c, (atoms, comps) in groups.items()]

    def pieces(self, space: MeasureSpace | None = None) -> list[tuple[Event, object]]:
        """Maximal constant pieces in ascending cell order (atoms, then components)."""
        out = [(Event.atom(i), c) for i, c in self.atom_values]
        comp = dict(self.component_values)
        order = list(comp)
        if space is not None and not space.is_ramp:
            rank = {cid: k for k, cid in enumerate(space.component_ids)}
            order.sort(key=lambda cid: (rank.get(cid, len(rank)), cid))
        elif space is not None:
            order.sort(key=lambda cid: (len(cid), cid))
        for cid in order:
            out.extend((Event.component(cid, [(lo, hi)]), c) for lo, hi, c in comp[cid])
        return out

    def support(self) -> Event:
        return Event.make(
            [i for i, _ in self.atom_values],
            {cid: [(lo, hi) for lo, hi, _ in pieces] for cid, pieces in self.component_values},
        )

    # algebra ------------------------------------------------------------------

    def _require_finite(self, other: "SimpleFunction | None" = None) -> None:
        if self.series is not None or (other is not None and other.series is not None):
            raise TypeError("algebra is only defined for finite simple functions")

    def combine(self, other: "SimpleFunction", op: Callable) -> "SimpleFunction":
        """Pointwise ``op`` on the common refinement of the two cell structures."""
        self._require_finite(other)
        a, b = dict(self.atom_values), dict(other.atom_values)
        atoms = []
        for i in sorted(set(a) | set(b)):
            v = op(_plain(a.get(i, 0)), _plain(b.get(i, 0)))
            if not _is_zero(v):
                atoms.append((i, v))
        ca, cb = dict(self.component_values), dict(other.component_values)
        comps = []
        for cid in sorted(set(ca) | set(cb)):
            merged = _combine_pieces(
                tuple((lo, hi, _plain(c)) for lo, hi, c in ca.get(cid, ())),
                tuple((lo, hi, _plain(c)) for lo, hi, c in cb.get(cid, ())),
                op,
            )
            if merged:
                comps.append((cid, merged))
        return SimpleFunction(tuple(atoms), tuple(comps))

    def map(self, fn: Callable) -> "SimpleFunction":
        """Apply ``fn`` to every coefficient; ``fn(0)`` is assumed to be 0."""
        self._require_finite()
        atoms = tuple((i, v) for i, v in ((i, fn(c)) for i, c in self.atom_values) if not _is_zero(v))
        comps = []
        for cid, pieces in self.component_values:
            merged = _merge_runs((lo, hi, fn(c)) for lo, hi, c in pieces)
            if merged:
                comps.append((cid, merged))
        return SimpleFunction(atoms, tuple(comps))

    def __add__(self, other: "SimpleFunction") -> "SimpleFunction":
        return self.combine(other, lambda x, y: x + y)

    def __sub__(self, other: "SimpleFunction") -> "SimpleFunction":
        return self.combine(other, lambda x, y: x - y)

    def __mul__(self, other):
        if isinstance(other, SimpleFunction):
            return self.combine(other, lambda x, y: x * y)
        return self.scale(other)

    __rmul__ = __mul__

    def __neg__(self) -> "SimpleFunction":
        return self.map(lambda c: -_plain(c))

    def scale(self, alpha) -> "SimpleFunction":
        return self.map(lambda c: alpha * _plain(c))

    def conj(self) -> "SimpleFunction":
        """The involution: complex conjugation."""
        return self.map(lambda c: c if isinstance(c, ExpM1) else _conj(c))

    def __abs__(self) -> "SimpleFunction":
        return self.map(lambda c: c if isinstance(c, ExpM1) else abs(c))

    def log1p_abs(self) -> "SimpleFunction":
        """``log(1 + |f|)`` as a simple function."""
        return self.map(log1p_abs)

    def le(self, other: "SimpleFunction") -> bool:
        """Pointwise ``self <= other`` for real-valued functions."""
        diff = other - self
        values = [c for _, c in diff.atom_values]
        values += [c for _, pieces in diff.component_values for _, _, c in pieces]
        for c in values:
            if isinstance(c, complex):
                if c.imag != 0:
                    raise ValueError("order is defined for real-valued functions")
                c = c.real
            if c < 0:
                return False
        return True

    def max_abs_difference(self, other: "SimpleFunction") -> float:
        diff = self - other
        values = [c for _, c in diff.atom_values]
        values += [c for _, pieces in diff.component_values for _, _, c in pieces]
        return max((to_float(abs(c)) for c in values), default=0.0)

    def integral(self, space: MeasureSpace):
        """``integral of f d(space)``; exact when coefficients and masses are rational."""
        self._require_finite()
        terms = [_plain(c) * measure_of(space, e) for e, c in self.pieces(space)]
        if all(is_exact(t) for t in terms):
            return sum(terms, Fraction(0))
        acc_re, acc_im = CompensatedSum(), CompensatedSum()
        for t in terms:
            t = complex(t) if not is_exact(t) else complex(to_float(t))
            acc_re.add(t.real)
            acc_im.add(t.imag)
        return complex(acc_re.value, acc_im.value) if acc_im.value else acc_re.value


# ---------------------------------------------------------------------------
# norms


class Divergent:
    """Divergence certificate: the running sums of ``terms()`` grow without bound.

    Terms are produced lazily; some constructions reach astronomically large
    cell indices after a handful of steps.
    """

    def __init__(self, terms: Callable[[], Iterator[float]], note: str):
        self._terms = terms
        self.note = note

    def lower_bounds(self, count: int) -> list[float]:
        return _running(itertools.islice(self._terms(), count))

    def first_exceeding(self, bound: float, max_terms: int) -> int | None:
        """Smallest k <= max_terms whose lower bound exceeds ``bound``."""
        acc = CompensatedSum()
        for k, term in enumerate(itertools.islice(self._terms(), max_terms), 1):
            if acc.add(term) > bound:
                return k
        return None

    def __repr__(self) -> str:
        return f"Divergent({self.note!r})"


@dataclass(frozen=True)
class LogNormResult:
    """``value`` is ``math.inf`` exactly when ``tail_bound`` is :class:`Divergent`."""

    value: float
    partial_sums: tuple
    tail_bound: float | Divergent = 0.0

    @property
    def finite(self) -> bool:
        return not isinstance(self.tail_bound, Divergent)

    def rescaled(self, factor: float) -> "LogNormResult":
        tb = self.tail_bound if isinstance(self.tail_bound, Divergent) else self.tail_bound / factor
        return LogNormResult(self.value / factor, tuple(s / factor for s in self.partial_sums), tb)


def _piece_integrand(c, mass) -> float:
    w = log1p_abs(c)
    if is_exact(w) and is_exact(mass):
        return to_float(w * mass)
    return to_float(w) * to_float(mass)


def log_fnorm(
    f: SimpleFunction, space: MeasureSpace, *, base: float | None = None, terms: int = 1000
) -> LogNormResult:
    """``integral of log(1 + |f|) d(space)``, summed in ascending cell order."""
    if f.series is not None:
        result = f.series.norm(space, terms)
    else:
        acc = CompensatedSum()
        partial = [acc.add(_piece_integrand(c, measure_of(space, e))) for e, c in f.pieces(space)]
        result = LogNormResult(acc.value if partial else 0.0, tuple(partial), 0.0)
    if base is not None:
        result = result.rescaled(math.log(base))
    return result


def fnorm_metric(f: SimpleFunction, g: SimpleFunction, space: MeasureSpace) -> float:
    """``rho(f, g) = ||f - g||_log``."""
    return log_fnorm(f - g, space).value


@dataclass(frozen=True)
class Membership:
    member: bool
    norm: LogNormResult


def is_log_integrable(f: SimpleFunction, space: MeasureSpace, *, terms: int = 1000) -> Membership:
    result = log_fnorm(f, space, terms=terms)
    return Membership(result.finite, result)


# ---------------------------------------------------------------------------
# infinite-support functions


class AtomSeries:
    """Infinite-support part of a simple function."""

    def norm(self, space: MeasureSpace, terms: int) -> LogNormResult:
        raise NotImplementedError


class DSLSeries(AtomSeries):
    """Coefficient ``c_n`` on atom ``n`` for every n, given by a bounded sequence.

    Since ``log(1 + c) <= c`` and ``log(1 + c) >= c log(1 + C) / C`` for
    ``c <= C``, the norm is finite iff ``sum c_n mu_n`` is.
    """

    def __init__(self, coefficients: Sequence):
        if coefficients.is_finite:
            raise ValueError("use a finite simple function for finite support")
        form = coefficients.form
        if form.r == 1 and form.p < 0:
            raise UndecidableTail("unbounded coefficient sequences have no tail rule")
        self.coefficients = coefficients

    def __eq__(self, other) -> bool:
        return isinstance(other, DSLSeries) and other.coefficients == self.coefficients

    def __hash__(self) -> int:
        return hash(self.coefficients)

    def _product_tail(self, space: MeasureSpace):
        a, b = self.coefficients.form, space.atoms.form
        return a.a * b.a, a.r * b.r, a.p + b.p

    def norm(self, space: MeasureSpace, terms: int) -> LogNormResult:
        if space.atoms.length is not None:
            raise UndecidableTail("infinite-support function on a space with finitely many atoms")
        start = max(self.coefficients.head_len, space.atoms.head_len) + 1
        terms = max(terms, start)
        acc = CompensatedSum()
        partial = tuple(
            acc.add(math.log1p(to_float(self.coefficients.term(n))) * to_float(space.atom_mass(n)))
            for n in range(1, terms + 1)
        )
        _, r, p = self._product_tail(space)
        if not (r < 1 or p > 1):
            return LogNormResult(
                math.inf,
                partial,
                Divergent(
                    lambda: (
                        math.log1p(to_float(self.coefficients.term(n))) * to_float(space.atom_mass(n))
                        for n in itertools.count(1)
                    ),
                    "sum of c_n mu_n diverges",
                ),
            )
        upper = _product_tail_sum(self.coefficients, space.atoms, terms + 1)
        return LogNormResult(partial[-1], partial, upper)


def _running(values) -> list[float]:
    acc = CompensatedSum()
    return [acc.add(v) for v in values]


def _product_tail_sum(s1: Sequence, s2: Sequence, start: int) -> float:
    """``sum_{n >= start} s1(n) s2(n)`` where both are in their tail regime."""
    f1, f2 = s1.form, s2.form
    with mpmath.workdps(30):
        total = mpmath.nsum(
            lambda n: mpmath.exp(f1.log_value(int(n)) + f2.log_value(int(n))),
            [start, mpmath.inf],
        )
    return float(total)


INDEX_CAP = 10**300


class CounterexampleSeries(AtomSeries):
    """``g = sum_k chi_{A_k} / (k**2 mu(A_k))`` on cells chosen along an unbounded derivative.

    The cell for step k is the smallest index ``n_k > n_{k-1}`` whose ratio
    ``d(nu)/d(mu)`` is at least ``max(n_{k-1} + 1, k)``. The function is
    ``f = exp(g) - 1``, so ``log(1 + |f|) = g``.
    """

    def __init__(self, rn: RNDerivative):
        cert = rn.certificate
        if cert.bounded:
            raise DerivativeBounded("d(nu)/d(mu) is bounded; no counterexample exists")
        self.rn = rn
        self.part = cert.part
        self.ratio: RatioSequence = cert.ratio
        self._indices: list[int] = []

    def __eq__(self, other) -> bool:
        return isinstance(other, CounterexampleSeries) and other.ratio == self.ratio

    def __hash__(self) -> int:
        return hash(self.ratio)

    def index(self, k: int) -> int:
        while len(self._indices) < k:
            prev = self._indices[-1] if self._indices else 0
            j = len(self._indices) + 1
            self._indices.append(self.ratio.first_index(max(prev + 1, j), start=prev + 1))
        return self._indices[k - 1]

    def cell(self, k: int) -> Cell:
        n = self.index(k)
        if self.part == "atoms":
            return ("atom", n)
        return ("component", self.rn.mu.component_id_at(n))

    def event(self, k: int) -> Event:
        kind, key = self.cell(k)
        return Event.atom(key) if kind == "atom" else Event.component(key)

    def _mass(self, space: MeasureSpace, k: int) -> Number:
        kind, key = self.cell(k)
        return space.atom_mass(key) if kind == "atom" else space.component_mass(key)

    def exponent(self, k: int) -> Number:
        """``1 / (k**2 mu(A_k))``; infinite when ``mu(A_k)`` underflows the float range."""
        try:
            return 1 / (k * k * self._mass(self.rn.mu, k))
        except FloatingPointError:
            return math.inf

    def _part_sequence(self, space: MeasureSpace) -> Sequence:
        return space.atoms if self.part == "atoms" else space.component_masses

    def iter_integrands(self, space: MeasureSpace) -> Iterator[float]:
        """``g * space(A_k)`` for k = 1, 2, ..., via the ratio to mu."""
        if self._part_sequence(space) == self._part_sequence(self.rn.mu):
            yield from (1 / (k * k) for k in itertools.count(1))
            return
        ratio = RatioSequence(self._part_sequence(space), self._part_sequence(self.rn.mu))
        for k in itertools.count(1):
            yield to_float(ratio.value(self.index(k))) / (k * k)

    def integrands(self, space: MeasureSpace, count: int) -> list[float]:
        return list(itertools.islice(self.iter_integrands(space), count))

    def _reportable(self, count: int) -> int:
        """How many of the first ``count`` cells have indices inside the float range.

        Indices can grow doubly exponentially; past ``INDEX_CAP`` they are
        not computed eagerly, only on demand through :class:`Divergent`.
        """
        for k in range(1, count + 1):
            if self.index(k) > INDEX_CAP:
                return k - 1
        return count

    def truncation(self, count: int) -> SimpleFunction:
        return SimpleFunction.from_cells((self.event(k), ExpM1(self.exponent(k))) for k in range(1, count + 1))

    def norm(self, space: MeasureSpace, terms: int) -> LogNormResult:
        if not space.same_algebra(self.rn.mu):
            raise UndecidableTail("counterexample norms are decided only on its own algebra")
        own = self._part_sequence(space)
        mu_part = self._part_sequence(self.rn.mu)
        count = terms if own == mu_part else self._reportable(terms)
        partial = tuple(_running(self.integrands(space, count)))
        ratio = RatioSequence(own, mu_part)
        if ratio == self.ratio:
            return LogNormResult(
                math.inf,
                partial,
                Divergent(lambda: self.iter_integrands(space), "lower bounds dominate the harmonic sums"),
            )
        d = ratio.decide()
        if not d.bounded:
            raise UndecidableTail("unbounded derivative other than the one the cells were chosen along")
        with mpmath.workdps(30):
            zeta_tail = float(mpmath.zeta(2, count + 1))
        if own == mu_part:
            return LogNormResult(math.pi**2 / 6, partial, zeta_tail)
        return LogNormResult(partial[-1], partial, to_float(d.sup) * zeta_tail)


# ---------------------------------------------------------------------------
# inclusion and equality of L_log spaces


@dataclass(frozen=True)
class InclusionVerdict:
    """``L_log(mu)`` is contained in ``L_log(nu)`` iff ``d(nu)/d(mu)`` is bounded."""

    included: bool
    derivative: RNDerivative

    def counterexample(self, K: int) -> "Counterexample":
        return build_counterexample(self.derivative.mu, self.derivative.nu, K)


def inclusion_check(mu: MeasureSpace, nu: MeasureSpace) -> InclusionVerdict:
    d = rn_derivative(mu, nu)
    return InclusionVerdict(d.certificate.bounded, d)


@dataclass(frozen=True)
class EqualityVerdict:
    equal: bool
    direction: str | None  # "mu_not_in_nu", "nu_not_in_mu" or "both"
    forward: InclusionVerdict
    backward: InclusionVerdict


def equality_check(mu: MeasureSpace, nu: MeasureSpace) -> EqualityVerdict:
    """``L_log(mu) = L_log(nu)`` iff both derivatives are bounded."""
    fwd, bwd = inclusion_check(mu, nu), inclusion_check(nu, mu)
    failing = [name for name, v in (("mu_not_in_nu", fwd), ("nu_not_in_mu", bwd)) if not v.included]
    direction = None if not failing else failing[0] if len(failing) == 1 else "both"
    return EqualityVerdict(not failing, direction, fwd, bwd)


@dataclass(frozen=True)
class Counterexample:
    """Truncation to K cells of ``f = exp(g) - 1`` with its diagnostic sums."""

    f: SimpleFunction
    mu_partials: list
    nu_lower_bounds: list
    cells: list
    series: CounterexampleSeries

    def __iter__(self):
        return iter((self.f, self.mu_partials, self.nu_lower_bounds))

    @property
    def infinite(self) -> SimpleFunction:
        return SimpleFunction.from_series(self.series)


def build_counterexample(mu: MeasureSpace, nu: MeasureSpace, K: int) -> Counterexample:
    """Function in ``L_log(mu)`` but not in ``L_log(nu)`` when ``d(nu)/d(mu)`` is unbounded.

    ``mu_partials[k-1]`` is ``sum_{j<=k} 1/j**2``; ``nu_lower_bounds[k-1]`` is
    the nu-norm of the k-cell truncation, at least the harmonic sum ``H_k``.
    """
    if K < 1:
        raise ValueError("K must be a positive integer")
    series = CounterexampleSeries(rn_derivative(mu, nu))
    f = series.truncation(K)
    # from the series, not from f: cell masses far out may not be representable
    mu_partials = _running(series.integrands(mu, K))
    nu_lower = _running(series.integrands(nu, K))
    return Counterexample(f, mu_partials, nu_lower, [series.cell(k) for k in range(1, K + 1)], series)
