"""Passports of measure algebras and the isomorphism decisions built on them.

A passport lists the weight tags of the homogeneous parts in strictly
increasing order together with their masses, plus the atomic part sorted by
decreasing mass. Two probability algebras are measure-isomorphic iff their
passports coincide; their L_log algebras are *-isomorphic iff the upper rows
coincide and the mass ratios are bounded in both directions.

Atoms are matched by the index-preserving bijection of their sorted lists.
That convention is deterministic but not claimed to be complete: a different
bijection could in principle give bounded ratios when the sorted one does not.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import InfiniteMass, SchemaError
from .measure import ComponentRamp, MeasureSpace, normalize
from .numeric import Number, close, exact_sum, le
from .sequences import (
    EMPTY,
    Bounded,
    FiniteList,
    RatioSequence,
    Sequence,
    Unbounded,
    Witness,
    sort_descending,
)


@dataclass(frozen=True)
class Passport:
    """Rows ``(tau_n, mass_n)``; an infinite row set is a tau ramp with DSL masses."""

    masses: Sequence
    atoms: Sequence = EMPTY
    taus: tuple | None = None  # finite rows
    tau_base: int | None = None  # infinite rows: tau_n = tau_base + n

    def __post_init__(self):
        if self.taus is not None:
            taus = tuple(self.taus)
            object.__setattr__(self, "taus", taus)
            if len(taus) != self.masses.length:
                raise SchemaError("one mass per tau is required")
            for i, (a, b) in enumerate(zip(taus, taus[1:]), 1):
                if not a < b:
                    raise SchemaError(f"tau strictly increasing violated at row {i + 1}")
            if any(t < 0 for t in taus):
                raise SchemaError("tau must be non-negative")
        elif self.tau_base is None:
            raise SchemaError("passport needs either finite rows or a tau ramp")
        elif self.masses.is_finite:
            raise SchemaError("a tau ramp needs an infinite mass sequence")

    @classmethod
    def from_rows(cls, rows, atoms: Sequence = EMPTY) -> "Passport":
        rows = list(rows)
        return cls(FiniteList(tuple(m for _, m in rows)), atoms, tuple(t for t, _ in rows))

    @property
    def is_ramp(self) -> bool:
        return self.taus is None

    @property
    def rows(self) -> list[tuple[int, Number]] | None:
        if self.is_ramp:
            return None
        return list(zip(self.taus, self.masses.values))

    def tau(self, n: int) -> int:
        return self.tau_base + n if self.is_ramp else self.taus[n - 1]

    @property
    def total_mass(self) -> Number:
        parts = [self.masses.total(), self.atoms.total()]
        if math.inf in parts:
            return math.inf
        return exact_sum(parts)

    def normalized(self) -> "Passport":
        total = self.total_mass
        if total == math.inf:
            raise InfiniteMass("passport of infinite mass")
        if close(total, 1):
            return self
        c = 1 / total
        atoms = self.atoms.scaled(c) if self.atoms.length != 0 else self.atoms
        return Passport(self.masses.scaled(c), atoms, self.taus, self.tau_base)

    def atom_class(self) -> int | None:
        """Cardinality class of the atomic part: a count, or None for infinitely many."""
        return self.atoms.length


def extract_passport(space: MeasureSpace) -> Passport:
    """Passport of the normalized space: components grouped by tau, atoms sorted."""
    if space.total_mass == math.inf:
        raise InfiniteMass("passports are defined for finite measures")
    space = normalize(space)
    atoms, _ = sort_descending(space.atoms) if space.atoms.length != 0 else (EMPTY, ())
    if isinstance(space.components, ComponentRamp):
        return Passport(space.components.masses, atoms, None, space.components.tau_base)
    grouped: dict[int, list] = {}
    for c in space.components:
        grouped.setdefault(c.tau, []).append(c.mass)
    taus = tuple(sorted(grouped))
    masses = FiniteList(tuple(exact_sum(grouped[t]) for t in taus))
    return Passport(masses, atoms, taus)


def _first_row_mismatch(p1: Passport, p2: Passport) -> int | None:
    if p1.is_ramp and p2.is_ramp:
        return None if p1.tau_base == p2.tau_base else 1
    if p1.is_ramp != p2.is_ramp:
        finite = p2 if p1.is_ramp else p1
        ramp = p1 if p1.is_ramp else p2
        for n, t in enumerate(finite.taus, 1):
            if ramp.tau(n) != t:
                return n
        return len(finite.taus) + 1
    for n, (a, b) in enumerate(zip(p1.taus, p2.taus), 1):
        if a != b:
            return n
    if len(p1.taus) != len(p2.taus):
        return min(len(p1.taus), len(p2.taus)) + 1
    return None


def same_upper_row(p1: Passport, p2: Passport) -> bool:
    """Equal tau rows and atomic parts of the same cardinality class."""
    return _first_row_mismatch(p1, p2) is None and p1.atom_class() == p2.atom_class()


@dataclass(frozen=True)
class RatioWitness:
    """Unbounded mass ratio on ``part``; ``direction`` names the ratio that blows up."""

    part: str  # "rows" or "atoms"
    direction: str  # "mu/nu" or "nu/mu"
    ratio: RatioSequence

    def witness(self, bound) -> Witness:
        n = self.ratio.first_index(bound, strict=True)
        return Witness(n, self.ratio.value(n), bound)


@dataclass(frozen=True)
class IsoVerdict:
    """Decision with its certificate.

    For Yes, ``sups`` is ``(sup mu_n/nu_n, sup nu_n/mu_n)`` over rows and atoms.
    For No, ``reason`` is one of RowMismatch, AtomMismatch, MassMismatch or
    RatioUnbounded and ``detail`` carries the checkable evidence.
    """

    decision: bool
    sups: tuple | None = None
    reason: str | None = None
    detail: object = None

    def __bool__(self) -> bool:
        return self.decision


def ratio_bounded(s1: Sequence, s2: Sequence) -> Bounded | Unbounded:
    """Boundedness of ``s1(n) / s2(n)`` with sup or witness generator."""
    return RatioSequence(s1, s2).decide()


def _mismatch(p1: Passport, p2: Passport) -> IsoVerdict | None:
    n = _first_row_mismatch(p1, p2)
    if n is not None:
        return IsoVerdict(False, reason="RowMismatch", detail={"index": n})
    if p1.atom_class() != p2.atom_class():
        return IsoVerdict(
            False,
            reason="AtomMismatch",
            detail={"atoms_mu": p1.atom_class(), "atoms_nu": p2.atom_class()},
        )
    return None


def _parts(p1: Passport, p2: Passport):
    out = [("rows", p1.masses, p2.masses)]
    if p1.atoms.length != 0:
        out.append(("atoms", p1.atoms, p2.atoms))
    return [(name, a, b) for name, a, b in out if a.length != 0]


def log_iso_decision(p1: Passport, p2: Passport) -> IsoVerdict:
    """*-isomorphism of the L_log algebras: same upper rows and two-sided bounded ratios."""
    p1, p2 = p1.normalized(), p2.normalized()
    bad = _mismatch(p1, p2)
    if bad is not None:
        return bad
    sups = [Fraction(0), Fraction(0)]
    for part, a, b in _parts(p1, p2):
        for k, (direction, num, den) in enumerate((("mu/nu", a, b), ("nu/mu", b, a))):
            ratio = RatioSequence(num, den)
            d = ratio.decide()
            if not d.bounded:
                return IsoVerdict(False, reason="RatioUnbounded", detail=RatioWitness(part, direction, ratio))
            sups[k] = max(sups[k], d.sup)
    return IsoVerdict(True, sups=tuple(sups))


def measure_iso_decision(p1: Passport, p2: Passport) -> IsoVerdict:
    """Measure-preserving isomorphism: identical passports.

    Masses are compared through their ratios: equal iff both ratio sups are
    at most one (exactly for rationals, 1e-12 relative for floats).
    """
    p1, p2 = p1.normalized(), p2.normalized()
    bad = _mismatch(p1, p2)
    if bad is not None:
        return bad
    for part, a, b in _parts(p1, p2):
        for ratio in (RatioSequence(a, b), RatioSequence(b, a)):
            d = ratio.decide()
            if not d.bounded or not le(d.sup, 1):
                n = ratio.first_index(1, strict=True)
                return IsoVerdict(False, reason="MassMismatch", detail={"part": part, "index": n})
    return IsoVerdict(True, sups=(Fraction(1), Fraction(1)))

