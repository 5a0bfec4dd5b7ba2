import math

import mpmath as mp
import pytest
from conftest import pairs
from hypothesis import given

from odenorm.errors import ValidationError
from odenorm.function_model import Exponent, Partition, StepFunction
from odenorm.nakano import ModularKind, equivalence_ratio, modular, nakano_norm

ONE = StepFunction.constant(1.0)
TWO = Exponent.constant(2.0)


def test_modular_examples():
    assert modular(ONE, TWO, 1.0) == 0.5
    assert modular(StepFunction.constant(0.0), TWO, 0.3) == 0.0
    assert modular(ONE, TWO, 1 / math.sqrt(2)) == pytest.approx(1.0, rel=1e-15)
    assert modular(ONE, TWO, 1.0, "plain") == 1.0
    with pytest.raises(ValidationError):
        modular(ONE, TWO, 0.0)


def test_modular_overflow_is_infinite_not_an_error():
    assert modular(StepFunction.constant(1e3), Exponent.constant(200.0), 1e-3) == math.inf


def test_nakano_norm_examples():
    assert nakano_norm(ONE, TWO) == pytest.approx(1 / math.sqrt(2), rel=1e-12)
    assert nakano_norm(ONE, TWO, ModularKind.PLAIN_PHI) == pytest.approx(1.0, rel=1e-12)
    assert nakano_norm(StepFunction.constant(0.0), TWO) == 0.0
    with pytest.raises(ValidationError):
        nakano_norm(ONE, TWO, "cubic")


def _mp_nakano(f, p):
    """Root of the psi-modular equation, bisected in 50-digit arithmetic."""
    cells = [(mp.mpf(b) - mp.mpf(a), mp.mpf(abs(v)), mp.mpf(q))
             for a, b, v, q in zip(f.breakpoints[:-1], f.breakpoints[1:], f.values, p.values)]

    def excess(lam):
        return mp.fsum(w * (v / lam) ** q / q for w, v, q in cells) - 1

    lo, hi = mp.mpf("1e-6"), mp.mpf("1e6")
    for _ in range(200):
        mid = mp.sqrt(lo * hi)
        lo, hi = (mid, hi) if excess(mid) > 0 else (lo, mid)
    return hi


def test_nakano_norm_matches_independent_root():
    part = Partition([0, 0.2, 0.7, 1])
    f = StepFunction(part, [3.0, -0.5, 20.0])
    p = Exponent(part, [1.3, 6.0, 2.2])
    assert nakano_norm(f, p) == pytest.approx(float(_mp_nakano(f, p)), rel=1e-11)


@pytest.mark.parametrize("q", [1.0, 1.5, 2.0, 3.0, 7.0])
def test_constant_exponent_ratio(q):
    f = StepFunction([0, 0.3, 1], [2.0, -5.0])
    assert equivalence_ratio(f, Exponent.constant(q)) == pytest.approx(q ** (1 / q), rel=1e-11)


def test_ratio_for_p2_is_sqrt2():
    assert equivalence_ratio(ONE, TWO) == pytest.approx(math.sqrt(2), abs=1e-8)


def test_ratio_of_zero_rejected():
    with pytest.raises(ValidationError):
        equivalence_ratio(StepFunction.constant(0.0), TWO)


@given(pairs())
def test_ratio_lies_in_band(fp):
    f, p = fp
    assert 0.5 - 1e-9 <= equivalence_ratio(f, p) <= 2.0 + 1e-9


@given(pairs())
def test_nakano_norm_is_homogeneous(fp):
    f, p = fp
    assert nakano_norm(3.0 * f, p) == pytest.approx(3.0 * nakano_norm(f, p), rel=1e-10)
