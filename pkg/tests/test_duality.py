import math

import numpy as np
import oracle
import pytest
from conftest import exponents, pairs, partitions, step_functions
from hypothesis import given, settings
from hypothesis import strategies as st

from odenorm.errors import ValidationError
from odenorm.duality import (
    conjugate,
    duality_map,
    exact_norming_pairing,
    extended_norm,
    holder_check,
    norming_functional,
    norming_pairing,
    special_variation,
    truncation_ladder,
    truncation_projection,
)
from odenorm.function_model import Exponent, Partition, StepFunction, sample_to_step
from odenorm.phi_solver import norm

HALVES = Partition([0, 0.5, 1])
ONE = StepFunction.constant(1.0)


def ident(n):
    return sample_to_step(lambda t: t, n)


def test_conjugate_examples():
    assert conjugate(Exponent.constant(2.0)).p_star.values.tolist() == [2.0]
    assert conjugate(Exponent.constant(3.0)).p_star.values.tolist() == [1.5]
    assert conjugate(Exponent(HALVES, [1.5, 4.0])).p_star.values == pytest.approx([3.0, 4 / 3])
    with pytest.raises(ValidationError, match="cell 1"):
        conjugate(Exponent(HALVES, [2.0, 1.0]))


def test_duality_map_examples():
    assert duality_map(ONE, Exponent(HALVES, [1.7, 9.0])).values.tolist() == [1.0, 1.0]
    x = ident(8)
    assert duality_map(x, Exponent.constant(3.0)).values == pytest.approx(x.values**2)
    assert duality_map(StepFunction.constant(-2.0), Exponent.constant(2.0)).values.tolist() == [-2.0]


def test_holder_examples():
    rep = holder_check(ident(4096), ONE, conjugate(Exponent.constant(2.0)))
    assert rep.lhs == pytest.approx(0.5, rel=1e-15)
    assert rep.rhs == pytest.approx(1 / math.sqrt(3), rel=1e-7)
    f = StepFunction([0, 0.3, 1], [2.0, -1.0])
    rep = holder_check(f, f, conjugate(Exponent.constant(2.0)))
    assert rep.lhs == pytest.approx(rep.rhs, rel=1e-14)
    assert holder_check(f, 0 * f, conjugate(Exponent.constant(2.0))) == (0.0, 0.0)


@given(st.data())
def test_holder_property(data):
    f = data.draw(step_functions())
    g = data.draw(step_functions())
    p = data.draw(exponents(lo=1.05, hi=8.0))
    assert holder_check(f, g, conjugate(p)).holds(1e-9)


def test_pairing_constant_exponent_examples():
    rep = norming_pairing(ident(4096), Exponent.constant(3.0))
    assert rep.pairing == pytest.approx(0.25, rel=1e-6)
    assert rep.norm_x == pytest.approx(0.25 ** (1 / 3), rel=1e-6)
    assert rep.norm_Jx == pytest.approx(0.25 ** (2 / 3), rel=1e-6)
    assert rep.relative_defect < 1e-12
    rep = norming_pairing(ONE, Exponent.constant(2.0))
    assert (rep.pairing, rep.norm_x, rep.norm_Jx) == pytest.approx((1.0, 1.0, 1.0))


@given(step_functions(), st.floats(1.2, 8.0))
def test_pairing_identity_for_constant_exponent(x, q):
    assert norming_pairing(x, Exponent.constant(q)).relative_defect <= 1e-10


def test_duality_map_does_not_norm_under_varying_exponent():
    # J_p is not homogeneous when p varies, so the literal identity fails
    x = StepFunction(HALVES, [1.0, 2.0])
    p = Exponent(HALVES, [2.0, 4.0])
    assert norming_pairing(x, p).relative_defect > 1e-3
    assert exact_norming_pairing(x, p).relative_defect < 1e-14


@given(pairs(lo=1.05, hi=8.0))
def test_norming_functional_attains_the_norm(xp):
    x, p = xp
    g = norming_functional(x, p)
    nx = norm(x, p)
    assert norm(g, conjugate(p).p_star) == pytest.approx(1.0, rel=1e-9)
    assert float(np.dot(x.widths, x.values * g.values)) == pytest.approx(nx, rel=1e-9)


@given(pairs(lo=1.05, hi=8.0), st.data())
def test_norming_functional_is_in_the_dual_unit_ball(xp, data):
    x, p = xp
    g = norming_functional(x, p)
    y = data.draw(step_functions(x.partition))
    assert float(np.dot(x.widths, y.values * g.values)) <= norm(y, p) * (1 + 1e-9) + 1e-12


def test_norming_functional_of_zero():
    assert norming_functional(0 * ONE, Exponent.constant(3.0)).values.tolist() == [0.0]


def test_truncation_projection_examples():
    f = StepFunction(HALVES, [3.0, -4.0])
    assert truncation_projection(f, Exponent.constant(2.0), 2) == f
    assert truncation_projection(f, Exponent(HALVES, [1.1, 5.0]), 4).values.tolist() == [0.0, 0.0]
    assert truncation_projection(f, Exponent(HALVES, [1.1, 5.0]), 10**6) == f
    with pytest.raises(ValidationError):
        truncation_projection(f, Exponent.constant(2.0), 1)


def test_extended_norm_examples():
    f = StepFunction(HALVES, [3.0, -4.0])
    p = Exponent(HALVES, [1.5, 5.0])
    assert extended_norm(f, p) == norm(f, p)
    assert extended_norm(0 * f, p) == 0.0
    ladder = truncation_ladder(ONE, Exponent(HALVES, [2.0, 100.0]))
    levels = [n for n, _ in ladder]
    values = [v for _, v in ladder]
    assert levels == [2, 4, 8, 16, 32, 64, 128]
    # the second cell only enters once n >= 100
    assert values[:-1] == [values[0]] * 6
    assert values[0] == pytest.approx(math.sqrt(0.5))
    assert values[-1] > values[0]
    assert values[-1] == norm(ONE, Exponent(HALVES, [2.0, 100.0]))


@given(pairs())
def test_truncation_ladder_non_decreasing(fp):
    f, p = fp
    values = [v for _, v in truncation_ladder(f, p)]
    assert all(b >= a for a, b in zip(values, values[1:]))
    assert values[-1] == norm(f, p)


def test_special_variation_examples():
    pair = conjugate(Exponent.constant(2.0))
    rep = special_variation(ONE, pair)
    assert rep.value == pytest.approx(1.0) and rep.oracle_value == pytest.approx(1.0)
    rep = special_variation(sample_to_step(lambda t: 2 * t, 256), pair)
    assert rep.value == pytest.approx(2 / math.sqrt(3), rel=1e-5)
    assert rep.oracle_value == pytest.approx(rep.value, rel=1e-10)
    assert special_variation(0 * ONE, pair) == (0.0, 0.0, True)


@settings(max_examples=10)
@given(partitions(max_cells=8), st.data())
def test_special_variation_matches_direct_maximization(part, data):
    g = data.draw(step_functions(part))
    p = data.draw(exponents(part, 1.05, 8.0))
    rep = special_variation(g, conjugate(p))
    assert rep.oracle_converged
    assert rep.oracle_value == pytest.approx(rep.value, rel=1e-9)


def test_norm_of_conjugate_matches_oracle():
    x = StepFunction([0, 0.25, 0.6, 1], [1.0, -3.0, 0.2])
    p = Exponent([0, 0.25, 0.6, 1], [1.3, 4.0, 2.2])
    ps = conjugate(p).p_star
    assert norm(x, ps) == pytest.approx(float(oracle.norm(x, ps)), rel=1e-14)
