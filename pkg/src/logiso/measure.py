"""Finitely presented sigma-finite measure algebras.

A space is a (possibly infinite) list of atoms plus homogeneous non-atomic
components. A component carries an opaque integer weight tag ``tau`` standing
in for its weight cardinal, and a mass. Sub-events of a component are finite
unions of half-open intervals of ``[0, 1)``: the component is identified with
the unit interval carrying ``mass`` times Lebesgue measure. Events therefore
have an identity independent of the measure, and several measures (mu, nu,
the gluing measure gamma) can live on the same algebra.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

from .errors import AlgebraMismatch, InfiniteMass, SchemaError, UnknownAtom, UnknownComponent
from .numeric import Number, as_number, close, exact_sum
from .sequences import (
    EMPTY,
    Bounded,
    FiniteList,
    RatioSequence,
    Sequence,
    Witness,
)

Interval = tuple  # (lo, hi) with 0 <= lo < hi <= 1
Cell = tuple  # ("atom", index) or ("component", id)


# ---------------------------------------------------------------------------
# interval sets on [0, 1)


def intervals(pieces: Iterable[Interval]) -> tuple[Interval, ...]:
    """Canonical disjoint, sorted, merged form of a union of intervals."""
    out: list[list] = []
    for lo, hi in sorted((as_number(lo), as_number(hi)) for lo, hi in pieces):
        if not 0 <= lo <= hi <= 1:
            raise ValueError(f"interval [{lo}, {hi}) not inside [0, 1]")
        if lo == hi:
            continue
        if out and lo <= out[-1][1]:
            out[-1][1] = max(out[-1][1], hi)
        else:
            out.append([lo, hi])
    return tuple((lo, hi) for lo, hi in out)


def intervals_length(ivs: Iterable[Interval]) -> Number:
    return exact_sum(hi - lo for lo, hi in ivs)


def intervals_intersect(a, b) -> tuple[Interval, ...]:
    out, i, j = [], 0, 0
    while i < len(a) and j < len(b):
        lo, hi = max(a[i][0], b[j][0]), min(a[i][1], b[j][1])
        if lo < hi:
            out.append((lo, hi))
        if a[i][1] < b[j][1]:
            i += 1
        else:
            j += 1
    return tuple(out)


def intervals_minus(a, b) -> tuple[Interval, ...]:
    out = []
    for lo, hi in a:
        cur = lo
        for blo, bhi in b:
            if bhi <= cur or blo >= hi:
                continue
            if blo > cur:
                out.append((cur, blo))
            cur = max(cur, bhi)
        if cur < hi:
            out.append((cur, hi))
    return tuple(out)


FULL = ((Fraction(0), Fraction(1)),)


@dataclass(frozen=True)
class Event:
    """Element of the measure algebra: atom indices plus component intervals."""

    atoms: frozenset = frozenset()
    components: tuple = ()  # sorted ((id, intervals), ...), intervals non-empty

    @classmethod
    def make(cls, atoms: Iterable[int] = (), components: Mapping[str, object] | None = None) -> "Event":
        comps = {}
        for cid, pieces in (components or {}).items():
            ivs = FULL if pieces == "all" else intervals(pieces)
            if ivs:
                comps[str(cid)] = ivs
        atom_set = frozenset(int(i) for i in atoms)
        if any(i < 1 for i in atom_set):
            raise UnknownAtom("atom indices start at 1")
        return cls(atom_set, tuple(sorted(comps.items())))

    @classmethod
    def atom(cls, index: int) -> "Event":
        return cls.make(atoms=[index])

    @classmethod
    def component(cls, cid: str, pieces="all") -> "Event":
        return cls.make(components={cid: pieces})

    @property
    def component_map(self) -> dict:
        return dict(self.components)

    @property
    def is_empty(self) -> bool:
        return not self.atoms and not self.components

    def _combine(self, other: "Event", atom_op, iv_op, keep_left_only: bool, keep_right_only: bool) -> "Event":
        a, b = self.component_map, other.component_map
        comps = {}
        for cid in set(a) | set(b):
            if cid in a and cid in b:
                ivs = iv_op(a[cid], b[cid])
            elif cid in a:
                ivs = a[cid] if keep_left_only else ()
            else:
                ivs = b[cid] if keep_right_only else ()
            if ivs:
                comps[cid] = ivs
        return Event(frozenset(atom_op(self.atoms, other.atoms)), tuple(sorted(comps.items())))

    def __or__(self, other: "Event") -> "Event":
        return self._combine(other, frozenset.__or__, lambda x, y: intervals(x + y), True, True)

    def __and__(self, other: "Event") -> "Event":
        return self._combine(other, frozenset.__and__, intervals_intersect, False, False)

    def __sub__(self, other: "Event") -> "Event":
        return self._combine(other, frozenset.__sub__, intervals_minus, True, False)

    def disjoint(self, other: "Event") -> bool:
        return (self & other).is_empty


# ---------------------------------------------------------------------------
# spaces


@dataclass(frozen=True)
class HomogeneousComponent:
    id: str
    tau: int
    mass: Number

    def __post_init__(self):
        object.__setattr__(self, "id", str(self.id))
        object.__setattr__(self, "mass", as_number(self.mass))
        if not isinstance(self.tau, int) or isinstance(self.tau, bool) or self.tau < 0:
            raise SchemaError(f"tau must be a non-negative integer, got {self.tau!r}")
        if not self.mass > 0:
            raise SchemaError(f"component {self.id!r} must have positive mass")


@dataclass(frozen=True)
class ComponentRamp:
    """Infinitely many components; the n-th has id ``str(n)`` and tau ``tau_base + n``."""

    tau_base: int
    masses: Sequence

    def __post_init__(self):
        if not isinstance(self.tau_base, int) or self.tau_base < -1:
            raise SchemaError("tau_base must be an integer >= -1")
        if self.masses.is_finite:
            raise SchemaError("a component ramp needs an infinite mass sequence")


@dataclass(frozen=True)
class MeasureSpace:
    """A strictly positive measure on a finitely presented measure algebra."""

    atoms: Sequence = EMPTY
    components: tuple | ComponentRamp = ()

    def __post_init__(self):
        if isinstance(self.components, ComponentRamp):
            pass
        else:
            comps = tuple(self.components)
            object.__setattr__(self, "components", comps)
            ids = [c.id for c in comps]
            if len(set(ids)) != len(ids):
                raise SchemaError("component ids must be unique")
            if not comps and self.atoms.length == 0:
                raise SchemaError("space has neither atoms nor components")

    # structure -------------------------------------------------------------

    @property
    def is_ramp(self) -> bool:
        return isinstance(self.components, ComponentRamp)

    @property
    def component_ids(self) -> tuple[str, ...] | None:
        if self.is_ramp:
            return None
        return tuple(c.id for c in self.components)

    @cached_property
    def _by_id(self) -> dict:
        return {c.id: c for c in self.components} if not self.is_ramp else {}

    def component_mass(self, cid: str) -> Number:
        return self._component(cid)[1]

    def component_tau(self, cid: str) -> int:
        return self._component(cid)[0]

    def _component(self, cid: str) -> tuple[int, Number]:
        cid = str(cid)
        if self.is_ramp:
            try:
                n = int(cid)
            except ValueError:
                raise UnknownComponent(f"unknown component {cid!r}") from None
            if n < 1 or str(n) != cid:
                raise UnknownComponent(f"unknown component {cid!r}")
            return self.components.tau_base + n, self.components.masses.term(n)
        try:
            c = self._by_id[cid]
        except KeyError:
            raise UnknownComponent(f"unknown component {cid!r}") from None
        return c.tau, c.mass

    @property
    def component_masses(self) -> Sequence:
        """Component masses in presentation order, as a sequence."""
        if self.is_ramp:
            return self.components.masses
        if not self.components:
            return EMPTY
        return FiniteList(tuple(c.mass for c in self.components))

    def component_id_at(self, n: int) -> str:
        return str(n) if self.is_ramp else self.components[n - 1].id

    def atom_mass(self, index: int) -> Number:
        if index < 1 or (self.atoms.length is not None and index > self.atoms.length):
            raise UnknownAtom(f"unknown atom {index}")
        return self.atoms.term(index)

    def check_event(self, e: Event) -> None:
        for i in e.atoms:
            self.atom_mass(i)
        for cid, _ in e.components:
            self._component(cid)

    @cached_property
    def exact(self) -> bool:
        comps = self.component_masses
        return self.atoms.exact and comps.exact

    @cached_property
    def total_mass(self) -> Number:
        parts = [self.atoms.total(), self.component_masses.total()]
        if any(p == math.inf for p in parts):
            return math.inf
        return exact_sum(parts)

    def same_algebra(self, other: "MeasureSpace") -> bool:
        if self.atoms.length != other.atoms.length:
            return False
        if self.is_ramp != other.is_ramp:
            return False
        if self.is_ramp:
            return self.components.tau_base == other.components.tau_base
        return [(c.id, c.tau) for c in self.components] == [(c.id, c.tau) for c in other.components]

    def scaled(self, c: Number) -> "MeasureSpace":
        if self.is_ramp:
            comps = ComponentRamp(self.components.tau_base, self.components.masses.scaled(c))
        else:
            comps = tuple(HomogeneousComponent(x.id, x.tau, x.mass * c) for x in self.components)
        atoms = self.atoms.scaled(c) if self.atoms.length != 0 else self.atoms
        return MeasureSpace(atoms, comps)

    def with_masses(self, atoms: Sequence, component_masses: Sequence) -> "MeasureSpace":
        """Same algebra, different measure."""
        if self.is_ramp:
            comps = ComponentRamp(self.components.tau_base, component_masses)
        else:
            comps = tuple(
                HomogeneousComponent(c.id, c.tau, component_masses.term(i))
                for i, c in enumerate(self.components, 1)
            )
        return MeasureSpace(atoms, comps)

    def sub_event(self, cid: str, mass: Number) -> Event:
        """An initial sub-interval of a component with the given mass."""
        total = self.component_mass(cid)
        if not 0 < mass <= total:
            raise ValueError(f"sub-mass {mass} outside (0, {total}]")
        return Event.component(cid, [(0, mass / total)])

    def unit(self) -> Event:
        """The unit of the algebra; only finite presentations have one as an Event."""
        if self.atoms.length is None or self.is_ramp:
            raise ValueError("unit of an infinite presentation is not a finite event")
        return Event.make(range(1, self.atoms.length + 1), {c.id: "all" for c in self.components})


def measure_of(space: MeasureSpace, e: Event) -> Number:
    """``mu(e)``: atom masses plus interval lengths scaled by component masses."""
    space.check_event(e)
    parts = [space.atom_mass(i) for i in sorted(e.atoms)]
    parts += [intervals_length(ivs) * space.component_mass(cid) for cid, ivs in e.components]
    return exact_sum(parts)


def normalize(space: MeasureSpace) -> MeasureSpace:
    """Rescale to a probability measure; a probability space is returned as is."""
    total = space.total_mass
    if total == math.inf:
        raise InfiniteMass("cannot normalize a space of infinite mass")
    if close(total, 1):
        return space
    return space.scaled(1 / total)


# ---------------------------------------------------------------------------
# Radon-Nikodym derivatives


@dataclass(frozen=True)
class RNBounded:
    """``sup`` of the derivative; ``cell`` attains it unless only approached."""

    sup: Number
    cell: Cell | None

    bounded = True


@dataclass(frozen=True)
class RNUnbounded:
    """The derivative is unbounded on ``part`` ("atoms" or "components")."""

    part: str
    ratio: RatioSequence
    space: MeasureSpace = field(repr=False, compare=False)

    bounded = False

    def witness(self, bound) -> tuple[Cell, Witness]:
        n = self.ratio.first_index(bound, strict=True)
        w = Witness(n, self.ratio.value(n), bound)
        return _cell(self.space, self.part, n), w


def _cell(space: MeasureSpace, part: str, n: int) -> Cell:
    if part == "atoms":
        return ("atom", n)
    return ("component", space.component_id_at(n))


@dataclass(frozen=True)
class RNDerivative:
    """Piecewise-constant ``d(nu)/d(mu)`` with a boundedness certificate."""

    mu: MeasureSpace = field(repr=False)
    nu: MeasureSpace = field(repr=False)
    atom_ratios: RatioSequence
    component_ratios: RatioSequence

    def at(self, cell: Cell) -> Number:
        kind, key = cell
        if kind == "atom":
            return self.atom_ratios.value(int(key))
        return self.nu.component_mass(key) / self.mu.component_mass(key)

    @cached_property
    def certificate(self) -> RNBounded | RNUnbounded:
        best = None
        for part, ratio in (("atoms", self.atom_ratios), ("components", self.component_ratios)):
            if ratio.length == 0:
                continue
            d = ratio.decide()
            if not d.bounded:
                return RNUnbounded(part, ratio, self.mu)
            cell = None if d.index is None else _cell(self.mu, part, d.index)
            if best is None or d.sup > best.sup:
                best = RNBounded(d.sup, cell)
        return best

    def inverse(self) -> "RNDerivative":
        return rn_derivative(self.nu, self.mu)


def rn_derivative(mu: MeasureSpace, nu: MeasureSpace) -> RNDerivative:
    """Cellwise ``nu / mu`` over a shared algebra (all masses positive, so mu ~ nu)."""
    if not mu.same_algebra(nu):
        raise AlgebraMismatch("measures live on different algebras")
    return RNDerivative(
        mu,
        nu,
        RatioSequence(nu.atoms, mu.atoms),
        RatioSequence(nu.component_masses, mu.component_masses),
    )


__all__ = [
    "Cell",
    "ComponentRamp",
    "Event",
    "HomogeneousComponent",
    "MeasureSpace",
    "RNBounded",
    "RNDerivative",
    "RNUnbounded",
    "Bounded",
    "measure_of",
    "normalize",
    "rn_derivative",
    "intervals",
]
