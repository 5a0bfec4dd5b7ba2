import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from odenorm.errors import ValidationError
from odenorm.sequence_space import (
    NonnegMatrix,
    VarExpSequence,
    boxplus,
    disjoint_matrix_sum_check,
    mixed_norm,
    nesting_inequality_check,
    oplus,
    seq_norm,
    seq_norm_left,
    transpose_contraction_check,
)

nonneg = st.floats(0.0, 1e3)
exps = st.floats(1.0, 50.0)


def test_boxplus_examples():
    assert boxplus(3, 4, 2) == pytest.approx(5.0, rel=1e-15)
    assert boxplus(2.5, 0, 3.7) == 2.5
    # 2^(1/1000), frozen from a 50-digit evaluation
    assert boxplus(1, 1, 1000) == pytest.approx(1.0006933874625806, rel=1e-15)


def test_boxplus_large_exponent_does_not_overflow():
    assert boxplus(1e300, 1e300, 400) == pytest.approx(1e300 * 2 ** (1 / 400), rel=1e-14)
    assert boxplus(2.0, 1.0, 5000) == pytest.approx(2.0, rel=1e-14)


def test_boxplus_rejects_bad_input():
    with pytest.raises(ValidationError):
        boxplus(-1, 1, 2)
    with pytest.raises(ValidationError):
        boxplus(1, 1, 0.5)


@given(nonneg, nonneg, exps)
def test_boxplus_matches_high_precision(a, b, p):
    ref = (mp.mpf(a) ** p + mp.mpf(b) ** p) ** (1 / mp.mpf(p))
    assert boxplus(a, b, p) == pytest.approx(float(ref), rel=1e-13, abs=1e-300)


@given(nonneg, nonneg, nonneg, exps)
def test_boxplus_is_a_commutative_monotone_operation(a, b, c, p):
    assert boxplus(a, b, p) == boxplus(b, a, p)
    assert boxplus(a, b, p) >= max(a, b)
    assert boxplus(boxplus(a, b, p), c, p) == pytest.approx(
        boxplus(a, boxplus(b, c, p), p), rel=1e-13
    )


def test_oplus_matches_boxplus_chain():
    x = [0.5, 2.0, 1.5, 0.0]
    assert oplus(x, 2.5) == pytest.approx(boxplus(boxplus(boxplus(0.5, 2.0, 2.5), 1.5, 2.5), 0, 2.5))
    assert oplus([], 2) == 0.0
    assert oplus([0, 0], 3) == 0.0
    assert np.allclose(oplus([[3, 4], [0, 0]], 2, axis=1), [5, 0])


def test_sequence_norm_examples():
    x = VarExpSequence((1, 1, 1), (1, 2))
    assert seq_norm(x) == pytest.approx(math.sqrt(5), rel=1e-15)
    assert seq_norm_left(x) == pytest.approx(1 + math.sqrt(2), rel=1e-15)
    assert seq_norm(VarExpSequence.constant((3, 4), 2)) == pytest.approx(5.0)
    assert seq_norm(VarExpSequence((-7,), ())) == 7.0
    assert seq_norm_left(VarExpSequence((-7,), ())) == 7.0


def test_sequence_validation():
    with pytest.raises(ValidationError):
        VarExpSequence((1, 2), ())
    with pytest.raises(ValidationError):
        VarExpSequence((1, 2), (0.5,))
    with pytest.raises(ValidationError):
        VarExpSequence((), ())


@given(st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=12), exps)
def test_folds_agree_for_constant_exponent(vals, p):
    x = VarExpSequence.constant(vals, p)
    assert seq_norm(x) == pytest.approx(seq_norm_left(x), rel=1e-12, abs=1e-300)


def test_mixed_norm_examples():
    assert mixed_norm(np.eye(2), 1, 2) == pytest.approx(math.sqrt(2))
    assert mixed_norm(np.ones((2, 2)), 2, 2) == pytest.approx(2.0)
    assert mixed_norm([[1, 2], [3, 4]], 1, 2) == pytest.approx(7.615773105863909, rel=1e-15)


def test_nonneg_matrix_validation():
    with pytest.raises(ValidationError, match=r"\(0, 1\)"):
        NonnegMatrix([[1, -1]])
    with pytest.raises(ValidationError):
        NonnegMatrix([1, 2])
    m = NonnegMatrix([[1, 2]])
    assert m.T.shape == (2, 1)
    with pytest.raises(AttributeError):
        m.entries = None


def test_transpose_contraction_examples():
    rep = transpose_contraction_check(np.eye(2), 1, 2)
    assert rep.lhs == pytest.approx(math.sqrt(2)) and rep.rhs == pytest.approx(2.0)
    a = np.random.default_rng(5).uniform(size=(5, 5))
    rep = transpose_contraction_check(a, 2.5, 2.5)
    assert rep.lhs == pytest.approx(rep.rhs, rel=1e-14)
    assert transpose_contraction_check(a, 1.3, 2.7).holds()
    with pytest.raises(ValidationError):
        transpose_contraction_check(a, 3, 2)


def test_disjoint_matrix_sum_examples():
    rep = disjoint_matrix_sum_check([np.diag([1, 0]), np.diag([0, 1])], 1, 2)
    assert rep.lhs == pytest.approx(math.sqrt(2)) and rep.rhs == pytest.approx(2.0)
    a = np.random.default_rng(1).uniform(size=(4, 4))
    rep = disjoint_matrix_sum_check([a], 2, 3)
    assert rep.lhs == pytest.approx(rep.rhs, rel=1e-15)
    mask = np.random.default_rng(2).integers(0, 2, (4, 4)).astype(bool)
    assert disjoint_matrix_sum_check([np.where(mask, a, 0), np.where(mask, 0, a)], 2, 3).holds()
    with pytest.raises(ValidationError, match="overlap"):
        disjoint_matrix_sum_check([a, a], 2, 3)


def test_nesting_examples():
    rep = nesting_inequality_check(1, 1, 1, 1, 2)
    assert rep.lhs == pytest.approx(math.sqrt(5)) and rep.rhs == pytest.approx(1 + math.sqrt(2))
    rep = nesting_inequality_check(0, 2, 3, 1.5, 4)
    assert rep.lhs == pytest.approx(rep.rhs)
    rep = nesting_inequality_check(0.3, 2, 3, 2, 2)
    assert rep.lhs == pytest.approx(rep.rhs, rel=1e-14)


@st.composite
def ordered_exponents(draw):
    a, b = draw(st.floats(1.0, 6.0)), draw(st.floats(1.0, 6.0))
    return min(a, b), max(a, b)


matrices = st.integers(1, 6).flatmap(
    lambda n: st.integers(1, 6).flatmap(
        lambda m: st.lists(st.lists(st.floats(0, 1), min_size=m, max_size=m), min_size=n, max_size=n)
    )
)


@given(matrices, ordered_exponents())
def test_transpose_contraction_property(a, pr):
    assert transpose_contraction_check(a, *pr).slack >= -1e-12


@given(matrices, ordered_exponents(), st.integers(0, 2**32 - 1))
def test_disjoint_sum_property(a, pr, seed):
    a = np.array(a)
    owner = np.random.default_rng(seed).integers(0, 3, a.shape)
    parts = [np.where(owner == i, a, 0.0) for i in range(3)]
    assert disjoint_matrix_sum_check(parts, *pr).slack >= -1e-12


@given(st.floats(0, 1e3), st.floats(0, 1e3), st.floats(0, 1e3), ordered_exponents())
def test_nesting_property(a, b, c, pr):
    rep = nesting_inequality_check(a, b, c, *pr)
    assert rep.slack >= -1e-12 * max(1.0, rep.rhs)
