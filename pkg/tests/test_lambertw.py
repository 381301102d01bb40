import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pulseopt import lambert_w0, lambert_w0_ln


def newton_w(x, w0=0.5, iters=200):
    """Independent Newton solve of w e^w = x, used as the test oracle."""
    w = w0
    for _ in range(iters):
        f = w * np.exp(w) - x
        w = w - f / (np.exp(w) * (w + 1.0))
    return w


def test_trivial_points():
    assert lambert_w0(0.0) == 0.0
    assert lambert_w0(np.e) == pytest.approx(1.0, abs=1e-14)


def test_omega_constant_against_newton_oracle():
    omega = newton_w(1.0)
    assert abs(omega * np.exp(omega) - 1.0) < 1e-12
    assert lambert_w0(1.0) == pytest.approx(omega, abs=1e-13)


def test_residual_contract_on_grid():
    x = np.concatenate(([0.0], np.logspace(-8, 8, 200)))
    w = lambert_w0(x)
    resid = np.abs(w * np.exp(w) - x)
    assert np.all(resid <= 1e-12 * np.maximum(x, 1.0))


def test_round_trip_relative_accuracy():
    w = np.logspace(-6, np.log10(50.0), 300)
    x = w * np.exp(w)
    back = lambert_w0(x)
    assert np.max(np.abs(back - w) / w) < 1e-10


def test_monotone_on_grid():
    x = np.logspace(-6, 10, 500)
    w = lambert_w0(x)
    assert np.all(np.diff(w) > 0)


def test_domain_error():
    with pytest.raises(ValueError):
        lambert_w0(-1e-9)
    with pytest.raises(ValueError):
        lambert_w0(np.array([1.0, -2.0]))


def test_matches_scipy():
    scipy_special = pytest.importorskip("scipy.special")
    x = np.logspace(-6, 12, 100)
    ref = np.real(scipy_special.lambertw(x))
    assert np.max(np.abs(lambert_w0(x) - ref) / ref) < 1e-12


def test_huge_direct_argument_roundtrip():
    # direct entry point must survive arguments near the float ceiling
    for x in (1e260, 1e300):
        w = lambert_w0(x)
        assert w + np.log(w) == pytest.approx(np.log(x), rel=1e-13)


class TestLogVariant:
    def test_agrees_with_direct_on_overlap(self):
        ln_x = np.linspace(-20.0, 20.0, 121)
        direct = lambert_w0(np.exp(ln_x))
        via_log = lambert_w0_ln(ln_x)
        assert np.max(np.abs(via_log - direct) / np.maximum(direct, 1e-300)) < 1e-12

    @pytest.mark.parametrize("ln_x", [50.0, 800.0, 2000.0, 1e5])
    def test_log_residual(self, ln_x):
        w = lambert_w0_ln(ln_x)
        assert abs(w + np.log(w) - ln_x) <= 1e-12 * max(abs(ln_x), 1.0)

    def test_vectorized_mixed_branches(self):
        ln_x = np.array([-5.0, 0.5, 1.5, 900.0])
        w = lambert_w0_ln(ln_x)
        assert w.shape == (4,)
        assert np.all(np.diff(w) > 0)

    def test_matches_scipy_be_low_overflow(self):
        scipy_special = pytest.importorskip("scipy.special")
        ln_x = np.linspace(1.0, 700.0, 60)
        ref = np.real(scipy_special.lambertw(np.exp(ln_x)))
        assert np.max(np.abs(lambert_w0_ln(ln_x) - ref) / ref) < 1e-12


@given(w=st.floats(1e-6, 50.0))
@settings(max_examples=200, deadline=None)
def test_round_trip_property(w):
    x = w * np.exp(w)
    assert lambert_w0(x) == pytest.approx(w, rel=1e-10)


@given(ln_x=st.floats(-30.0, 1e4))
@settings(max_examples=200, deadline=None)
def test_log_variant_inverts_property(ln_x):
    w = lambert_w0_ln(ln_x)
    if w > 0:
        assert w + np.log(w) == pytest.approx(ln_x, abs=1e-9 * max(abs(ln_x), 1.0))
