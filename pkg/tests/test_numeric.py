import math
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from logiso.errors import SchemaError
from logiso.numeric import (
    CompensatedSum,
    as_number,
    close,
    exact_sum,
    jsonable,
    le,
    log,
    number_from_json,
    running_sums,
    to_float,
)


def test_as_number_keeps_rationals_and_floats_apart():
    assert as_number(3) == F(3) and isinstance(as_number(3), F)
    assert isinstance(as_number(0.5), float)
    assert as_number(0.1, rational=True) == F(1, 10)
    with pytest.raises(TypeError):
        as_number(True)


def test_close_is_exact_for_rationals_and_relative_for_floats():
    assert not close(F(1, 3), F(1, 3) + F(1, 10**30))
    assert close(1.0, 1.0 + 1e-13)
    assert not close(1.0, 1.0 + 1e-11)
    assert le(1.0 + 1e-13, 1.0)


def test_log_of_huge_fraction():
    x = F(10**400, 3)
    assert math.isclose(log(x), 400 * math.log(10) - math.log(3), rel_tol=1e-14)


def test_to_float_saturates():
    assert to_float(F(10**400)) == math.inf


def test_exact_sum_mixes_to_float():
    assert exact_sum([F(1, 2), F(1, 3)]) == F(5, 6)
    assert isinstance(exact_sum([F(1, 2), 0.25]), float)


def test_compensated_sum_recovers_cancellation():
    acc = CompensatedSum()
    for x in (1e16, 1.0, -1e16):
        acc.add(x)
    assert acc.value == 1.0


@given(st.lists(st.floats(-1e6, 1e6), max_size=50))
def test_running_sums_end_with_fsum(xs):
    sums = running_sums(xs)
    assert len(sums) == len(xs)
    if xs:
        assert math.isclose(sums[-1], math.fsum(xs), rel_tol=1e-12, abs_tol=1e-6)


def test_json_numbers():
    assert number_from_json({"num": 1, "den": 3}) == F(1, 3)
    assert jsonable(F(1, 3)) == {"num": 1, "den": 3}
    assert jsonable(F(4)) == 4
    assert jsonable(math.inf) == "infinite"
    with pytest.raises(SchemaError, match="den"):
        number_from_json({"num": 1, "den": 0}, "$.x")
    with pytest.raises(SchemaError):
        number_from_json("1")
