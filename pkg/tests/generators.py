"""Random spaces, simple functions and DSL pairs.

Every generator takes ``pick(lo, hi)`` returning an integer in ``[lo, hi]``,
so the same code drives hypothesis (``draw(st.integers(lo, hi))``) and seeded
``random.Random(...).randint`` runs in the acceptance suite.
"""

from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import strategies as st

from logiso import (
    ComponentRamp,
    Event,
    FiniteList,
    Geometric,
    HomogeneousComponent,
    MeasureSpace,
    PowerLaw,
    PrefixThenTail,
    SimpleFunction,
)

RATES = (Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(3, 4))
EXPONENTS = (Fraction(3, 2), Fraction(2), Fraction(5, 2), Fraction(3))
SCALES = (Fraction(1, 2), Fraction(1), Fraction(2), Fraction(3))


def rng_pick(seed: int):
    rng = random.Random(seed)
    return rng.randint


def draw_pick(draw):
    return lambda lo, hi: draw(st.integers(lo, hi))


def choice(pick, items):
    return items[pick(0, len(items) - 1)]


def rational(pick, lo=1, hi=20, den=12) -> Fraction:
    return Fraction(pick(lo, hi), pick(1, den))


def finite_space(pick, max_atoms=4, max_components=3, taus=3) -> MeasureSpace:
    n_atoms = pick(0, max_atoms)
    n_comps = pick(0 if n_atoms else 1, max_components)
    atoms = FiniteList(tuple(rational(pick) for _ in range(n_atoms)))
    comps = tuple(HomogeneousComponent(f"c{i}", pick(0, taus), rational(pick)) for i in range(n_comps))
    return MeasureSpace(atoms, comps)


def remeasure(pick, space: MeasureSpace) -> MeasureSpace:
    """A fresh random measure on the same finite algebra."""
    atoms = FiniteList(tuple(rational(pick) for _ in range(space.atoms.length)))
    comps = FiniteList(tuple(rational(pick) for _ in space.components)) if space.components else FiniteList(())
    return space.with_masses(atoms, comps)


def coefficient(pick, allow_complex=True):
    re = Fraction(pick(-20, 20), pick(1, 4))
    if allow_complex and pick(0, 2) == 0:
        return complex(float(re), pick(-10, 10) / pick(1, 4))
    return re


def simple_function(pick, space: MeasureSpace, *, allow_complex=True, zero_rate=3, ramp_ids=()) -> SimpleFunction:
    """Random cells: a coefficient (possibly 0) per atom, a random partition per component."""
    cells = []
    n_atoms = space.atoms.length if space.atoms.length is not None else 6
    for i in range(1, n_atoms + 1):
        if pick(0, zero_rate) != 0:
            cells.append((Event.atom(i), coefficient(pick, allow_complex)))
    ids = space.component_ids if not space.is_ramp else ramp_ids
    for cid in ids:
        cuts = sorted({Fraction(pick(0, 12), 12) for _ in range(pick(0, 3))} | {Fraction(0), Fraction(1)})
        for lo, hi in zip(cuts, cuts[1:]):
            if pick(0, zero_rate) != 0:
                cells.append((Event.component(cid, [(lo, hi)]), coefficient(pick, allow_complex)))
    return SimpleFunction.from_cells(cells)


def scalar_in_disk(pick):
    """A scalar with modulus at most one."""
    if pick(0, 1):
        return Fraction(pick(-100, 100), 100)
    z = complex(pick(-70, 70) / 100, pick(-70, 70) / 100)
    return z


def dsl_sequence(pick):
    """A summable infinite sequence from the DSL kinds."""
    kind = pick(0, 2)
    if kind == 0:
        base = Geometric(choice(pick, SCALES), choice(pick, RATES))
    elif kind == 1:
        base = PowerLaw(choice(pick, SCALES), choice(pick, EXPONENTS))
    else:
        tail = Geometric(choice(pick, SCALES), choice(pick, RATES)) if pick(0, 1) else PowerLaw(
            choice(pick, SCALES), choice(pick, EXPONENTS)
        )
        prefix = tuple(rational(pick) for _ in range(pick(1, 4)))
        base = PrefixThenTail(prefix, tail, len(prefix) + 1)
    return base


def dsl_pair(pick) -> tuple[MeasureSpace, MeasureSpace]:
    """Two measures on one algebra: infinitely many atoms and up to two components."""
    n_comps = pick(0, 2)
    taus = [pick(0, 2) for _ in range(n_comps)]
    spaces = []
    for _ in range(2):
        comps = tuple(HomogeneousComponent(f"c{i}", t, rational(pick)) for i, t in enumerate(taus))
        spaces.append(MeasureSpace(dsl_sequence(pick), comps))
    return spaces[0], spaces[1]


def iso_pair(pick, max_rows=3, max_atoms=4) -> tuple[MeasureSpace, MeasureSpace]:
    """Two finite spaces with equal passport upper rows but different splittings and masses."""
    taus = sorted({pick(0, 5) for _ in range(pick(0 if max_atoms else 1, max_rows))})
    n_atoms = pick(0 if taus else 1, max_atoms)
    spaces = []
    for prefix in ("s", "t"):
        comps = []
        for tau in taus:
            for j in range(pick(1, 2)):
                comps.append(HomogeneousComponent(f"{prefix}{tau}_{j}", tau, rational(pick)))
        atoms = FiniteList(tuple(rational(pick) for _ in range(n_atoms)))
        spaces.append(MeasureSpace(atoms, tuple(comps)))
    return spaces[0], spaces[1]


def ramp_space(masses, atoms=None) -> MeasureSpace:
    return MeasureSpace(atoms if atoms is not None else FiniteList(()), ComponentRamp(0, masses))


@st.composite
def spaces(draw, **kw):
    return finite_space(draw_pick(draw), **kw)


@st.composite
def iso_pairs(draw, **kw):
    return iso_pair(draw_pick(draw), **kw)


@st.composite
def space_and_functions(draw, count=2, allow_complex=True):
    pick = draw_pick(draw)
    space = finite_space(pick)
    return (space, *[simple_function(pick, space, allow_complex=allow_complex) for _ in range(count)])
