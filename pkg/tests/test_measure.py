import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logiso import (
    AlgebraMismatch,
    Event,
    FiniteList,
    Geometric,
    GeometricPower,
    HomogeneousComponent,
    InfiniteMass,
    MeasureSpace,
    PowerLaw,
    UnknownAtom,
    UnknownComponent,
    measure_of,
    normalize,
    rn_derivative,
)
from logiso.measure import RNBounded

from generators import draw_pick, finite_space, remeasure


def comp(cid, tau, mass):
    return HomogeneousComponent(cid, tau, mass)


def test_measure_of_examples():
    s = MeasureSpace(FiniteList((F(1, 2), F(1, 4))))
    assert measure_of(s, Event()) == 0
    assert measure_of(s, Event.make([1, 2])) == F(3, 4)
    c = MeasureSpace(components=(comp("c", 0, 1),))
    assert measure_of(c, c.sub_event("c", F(3, 10))) == F(3, 10)


def test_component_sub_event_scales_with_mass():
    s = MeasureSpace(components=(comp("c", 0, 2),))
    assert measure_of(s, Event.component("c", [(0, F(1, 4)), (F(1, 2), F(3, 4))])) == 1


def test_unknown_ids_rejected():
    s = MeasureSpace(FiniteList((F(1, 2),)), (comp("c", 0, 1),))
    with pytest.raises(UnknownAtom):
        measure_of(s, Event.atom(2))
    with pytest.raises(UnknownComponent):
        measure_of(s, Event.component("d"))


def test_event_boolean_operations():
    a = Event.make([1, 2], {"c": [(0, F(1, 2))]})
    b = Event.make([2, 3], {"c": [(F(1, 4), 1)]})
    assert (a & b) == Event.make([2], {"c": [(F(1, 4), F(1, 2))]})
    assert (a | b) == Event.make([1, 2, 3], {"c": "all"})
    assert (a - b) == Event.make([1], {"c": [(0, F(1, 4))]})
    assert (a - b).disjoint(b)


def test_normalize_examples():
    s = MeasureSpace(FiniteList((F(1), F(1))))
    assert normalize(s).atoms == FiniteList((F(1, 2), F(1, 2)))
    p = MeasureSpace(FiniteList((F(1, 2), F(1, 2))))
    assert normalize(p) is p
    g = MeasureSpace(Geometric(2, F(1, 3)), (comp("c", 0, 1),))
    assert g.total_mass == 2
    n = normalize(g)
    assert n.atoms == Geometric(1, F(1, 3)) and n.component_mass("c") == F(1, 2)


def test_normalize_rejects_infinite_mass():
    inf = MeasureSpace(GeometricPower(1, 1, 1))  # sum 1/n
    assert inf.total_mass == math.inf
    with pytest.raises(InfiniteMass):
        normalize(inf)


def test_rn_examples():
    mu = MeasureSpace(FiniteList((F(1, 2), F(1, 4))), (comp("c", 0, F(1, 4)),))
    d = rn_derivative(mu, mu.scaled(2))
    assert d.certificate == RNBounded(F(2), ("atom", 1))
    assert d.at(("component", "c")) == 2
    geo = MeasureSpace(Geometric(1, F(1, 2)))
    assert rn_derivative(geo, geo).certificate.sup == 1


def test_rn_unbounded_witness_matches_scan():
    a = F(3)
    mu, nu = MeasureSpace(Geometric(1, F(1, 2))), MeasureSpace(PowerLaw(a, 2))
    cert = rn_derivative(mu, nu).certificate
    assert not cert.bounded
    cell, w = cert.witness(10**6)
    scan = next(k for k in range(1, 61) if a * 2**k / F(k * k) > 10**6)
    assert cell == ("atom", scan) and w.index == scan


def test_rn_algebra_mismatch():
    with pytest.raises(AlgebraMismatch):
        rn_derivative(MeasureSpace(FiniteList((F(1),))), MeasureSpace(FiniteList((F(1), F(1)))))
    with pytest.raises(AlgebraMismatch):
        rn_derivative(MeasureSpace(components=(comp("c", 0, 1),)), MeasureSpace(components=(comp("c", 1, 1),)))


@st.composite
def space_pair(draw):
    pick = draw_pick(draw)
    s = finite_space(pick)
    return s, remeasure(pick, s)


@st.composite
def space_and_disjoint_events(draw):
    pick = draw_pick(draw)
    s = finite_space(pick)
    atoms = list(range(1, s.atoms.length + 1))
    side = [pick(0, 2) for _ in atoms]
    cuts = {c.id: F(pick(0, 8), 8) for c in s.components}
    e = Event.make([i for i, k in zip(atoms, side) if k == 1], {cid: [(0, x)] for cid, x in cuts.items()})
    f = Event.make([i for i, k in zip(atoms, side) if k == 2], {cid: [(x, 1)] for cid, x in cuts.items()})
    return s, e, f


@settings(max_examples=100, deadline=None)
@given(space_and_disjoint_events())
def test_additivity(args):
    s, e, f = args
    assert e.disjoint(f)
    assert measure_of(s, e | f) == measure_of(s, e) + measure_of(s, f)


@settings(max_examples=100, deadline=None)
@given(space_pair())
def test_reciprocity(pair):
    mu, nu = pair
    fwd, bwd = rn_derivative(mu, nu), rn_derivative(nu, mu)
    cells = [("atom", i) for i in range(1, mu.atoms.length + 1)] + [("component", c) for c in mu.component_ids]
    for cell in cells:
        assert fwd.at(cell) * bwd.at(cell) == 1


@settings(max_examples=100, deadline=None)
@given(space_pair())
def test_normalize_idempotent_and_rescales_certificate(pair):
    mu, nu = pair
    assert normalize(normalize(mu)) == normalize(mu)
    assert normalize(mu).total_mass == 1
    raw = rn_derivative(mu, nu).certificate.sup
    norm = rn_derivative(normalize(mu), normalize(nu)).certificate.sup
    assert norm == raw * mu.total_mass / nu.total_mass
