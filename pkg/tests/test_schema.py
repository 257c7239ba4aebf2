import json
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logiso import (
    Event,
    FiniteList,
    Geometric,
    MeasureSpace,
    PowerLaw,
    SchemaError,
    SimpleFunction,
    extract_passport,
)
from logiso.logspace import DSLSeries, ExpM1
from logiso.schema import (
    event_from_json,
    event_to_json,
    function_from_json,
    function_to_json,
    passport_from_json,
    passport_to_json,
    space_from_json,
    space_to_json,
)

from generators import dsl_sequence, draw_pick, finite_space, ramp_space, rng_pick, simple_function


def through_text(obj):
    return json.loads(json.dumps(obj, sort_keys=True))


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_space_function_passport_round_trip(data):
    pick = draw_pick(data.draw)
    space = finite_space(pick)
    assert space_from_json(through_text(space_to_json(space))) == space
    f = simple_function(pick, space)
    assert function_from_json(through_text(function_to_json(f))) == f
    p = extract_passport(space)
    assert passport_from_json(through_text(passport_to_json(p))) == p


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**9))
def test_dsl_round_trip(seed):
    pick = rng_pick(seed)
    s = MeasureSpace(dsl_sequence(pick))
    assert space_from_json(through_text(space_to_json(s))) == s
    r = ramp_space(dsl_sequence(pick), dsl_sequence(pick))
    assert space_from_json(through_text(space_to_json(r))) == r
    p = extract_passport(r)
    assert passport_from_json(through_text(passport_to_json(p))) == p


def test_event_and_special_coefficients_round_trip():
    e = Event.make([3, 1], {"c": [(0, F(1, 3)), (F(1, 2), 1)], "d": "all"})
    assert event_from_json(through_text(event_to_json(e))) == e
    f = SimpleFunction.from_cells([(Event.atom(1), ExpM1(F(7, 2))), (Event.atom(2), complex(1, -2))])
    assert function_from_json(through_text(function_to_json(f))) == f
    g = SimpleFunction.from_series(DSLSeries(PowerLaw(1, 2)))
    assert function_from_json(through_text(function_to_json(g))) == g


def test_minimal_one_atom_space_parses():
    assert space_from_json({"atoms": [1]}) == MeasureSpace(FiniteList((F(1),)))


def test_rational_mode():
    s = space_from_json({"atoms": [{"num": 1, "den": 3}, 0.5]}, rational=True)
    assert s.atoms.values == (F(1, 3), F(1, 2)) and s.exact
    assert not space_from_json({"atoms": [0.5]}).exact


def test_geometric_space_total_checked():
    obj = {"atoms": Geometric(1, F(1, 2)).to_json(), "total_mass": 1}
    assert space_from_json(obj).total_mass == 1
    with pytest.raises(SchemaError, match="sum to"):
        space_from_json(dict(obj, total_mass=2))


@pytest.mark.parametrize(
    "obj,path,fragment",
    [
        ({"rows": [{"tau": 1, "mass": 0.5}, {"tau": 1, "mass": 0.5}]}, "$.rows[1].tau", "tau strictly increasing"),
        ({"rows": [{"tau": 0, "mass": -1}]}, "$.rows[0].mass", "positive"),
        ({"rows": [], "extra": 1}, "$", "unknown field"),
        ({"schema": "logiso.space/1", "rows": []}, "$.schema", "expected schema"),
    ],
)
def test_passport_errors_name_the_field(obj, path, fragment):
    with pytest.raises(SchemaError) as err:
        passport_from_json(obj)
    assert err.value.path == path and fragment in err.value.reason


@pytest.mark.parametrize(
    "obj,path",
    [
        ({"components": [{"id": "a", "tau": -1, "mass": 1}]}, "$.components[0].tau"),
        ({"components": [{"id": "a", "tau": 0, "mass": 0}]}, "$.components[0].mass"),
        ({"atoms": {"kind": "geometric", "a": 1, "r": 2}}, "$.atoms"),
        ({"components": {"tau_base": 0}}, "$.components"),
    ],
)
def test_space_errors_name_the_field(obj, path):
    with pytest.raises(SchemaError) as err:
        space_from_json(obj)
    assert err.value.path.startswith(path)


def test_overlapping_cells_rejected():
    obj = [{"cell": {"atoms": [1]}, "re": 1}, {"cell": {"atoms": [1, 2]}, "re": 2}]
    with pytest.raises(SchemaError) as err:
        function_from_json(obj)
    assert err.value.path == "$[1].cell"
