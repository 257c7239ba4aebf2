import math
from fractions import Fraction as F

from hypothesis import given, settings
from hypothesis import strategies as st

from logiso import Event, FiniteList, MeasureSpace, SimpleFunction, is_log_integrable, log_fnorm

from checks import TOL, fnorm_axiom_failures, norm, submultiplicative_gap
from generators import draw_pick, finite_space, scalar_in_disk, simple_function, space_and_functions


@st.composite
def axiom_sample(draw):
    pick = draw_pick(draw)
    space = finite_space(pick)
    return space, simple_function(pick, space), simple_function(pick, space), scalar_in_disk(pick)


@settings(max_examples=200, deadline=None)
@given(axiom_sample())
def test_fnorm_axioms(sample):
    assert fnorm_axiom_failures(*sample) == []


@settings(max_examples=200, deadline=None)
@given(space_and_functions(count=2))
def test_submultiplicative_bound(args):
    space, f, g = args
    assert submultiplicative_gap(space, f, g) <= TOL


@settings(max_examples=100, deadline=None)
@given(space_and_functions(count=1), st.sampled_from([2.0, 10.0, 0.25, 3.5]))
def test_base_independence(args, base):
    space, f = args
    natural = log_fnorm(f, space)
    rescaled = log_fnorm(f, space, base=base)
    assert rescaled.value == natural.value / math.log(base)
    assert rescaled.finite == is_log_integrable(f, space).member


@settings(max_examples=100, deadline=None)
@given(space_and_functions(count=1))
def test_norm_of_modulus_and_conjugate(args):
    space, f = args
    assert norm(abs(f), space) == norm(f, space) == norm(f.conj(), space)


def test_zero_norm_only_for_zero():
    s = MeasureSpace(FiniteList((F(1, 2), F(1, 2))))
    assert norm(SimpleFunction.zero(), s) == 0
    assert norm(SimpleFunction.indicator(Event.atom(2)), s) > 0
