import math
from types import SimpleNamespace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from unruh_decoherence.errors import DomainError
from unruh_decoherence.modes import AccelerationFrame, GaussianPacket, ModeIntegrals, mode_integrals, r_omega
from unruh_decoherence.purify import (
    PurificationScenario,
    Z_UPPER,
    lm_factors,
    optimal_z_narrowband,
    purified_variance,
    purity_residual,
    residual_sign_changes,
    solve_z,
    solve_z_integrals,
    two_mode_purification_check,
)
from unruh_decoherence.single_mode import SqueezeScenario, squeezer_variance

FRAME = AccelerationFrame(1.0)


def nb(ic):
    return ModeIntegrals.narrowband(ic)


def test_lm_factors():
    w = 0.3
    r = r_omega(w, FRAME)
    assert lm_factors(0.0, w, FRAME) == pytest.approx((math.cosh(r), -math.sinh(r)))
    assert lm_factors(math.tanh(r), w, FRAME)[1] == pytest.approx(0.0, abs=1e-15)
    for z in (0.0, 0.4, 0.9, 1.5):
        lf, mf = lm_factors(z, w, FRAME)
        assert lf**2 - mf**2 == pytest.approx(1 - z**2, rel=1e-12, abs=1e-12)
    lf, mf = lm_factors(0.5, np.array([0.2, 0.4]), FRAME)
    assert lf.shape == (2,)
    with pytest.raises(DomainError):
        lm_factors(0.5, 0.0, FRAME)


def test_scenario_rejects_negative_z():
    with pytest.raises(DomainError):
        PurificationScenario(0.5, -0.1, nb(1.2))


@settings(max_examples=80, deadline=None)
@given(r=st.floats(-2, 2), ic=st.floats(1, 4), phi=st.floats(-4, 4))
def test_regain_limit_at_z_zero(r, ic, phi):
    v = purified_variance(PurificationScenario(r, 0.0, nb(ic)), phi)
    assert v == pytest.approx(squeezer_variance(SqueezeScenario(r, nb(ic)), phi), rel=1e-12, abs=1e-12)


def test_regain_limit_broadband():
    integ = mode_integrals(GaussianPacket(0.3, 0.03), FRAME)
    phi = np.linspace(0, math.pi, 11)
    np.testing.assert_allclose(
        purified_variance(PurificationScenario(0.6, 0.0, integ), phi),
        squeezer_variance(SqueezeScenario(0.6, integ), phi),
        rtol=1e-12,
    )


@pytest.mark.parametrize("ic", [1.0, 1.2, 1.5, 2.0, 4.0])
@pytest.mark.parametrize("r", [0.2, 0.8, 2.0])
def test_purity_at_optimum(ic, r):
    s = PurificationScenario(r, optimal_z_narrowband(ic), nb(ic))
    phis = np.array([0.0, math.pi / 4, math.pi / 2])
    v = purified_variance(s, phis)
    np.testing.assert_allclose(v, np.cosh(2 * r) + np.sinh(2 * r) * np.cos(2 * phis), rtol=0, atol=1e-9 * np.cosh(2 * r))
    assert abs(purity_residual(r, s.z, s.integrals)) < 1e-9


@pytest.mark.parametrize("z", [0.0, 0.3, 0.9])
def test_no_signal_is_shot_noise(z):
    assert purified_variance(PurificationScenario(0.0, z, nb(1.7)), [0.0, 1.0]) == pytest.approx([1.0, 1.0])


def test_nonpositive_oscillator_strength_rejected():
    bad = SimpleNamespace(i_c=1.0, i_s=0.0, i_cs=1.0, total=1.0)
    with pytest.raises(DomainError):
        purified_variance(PurificationScenario(0.5, 1.0, bad), 0.0)


def test_optimal_z_values():
    assert optimal_z_narrowband(1.0) == 0.0
    assert optimal_z_narrowband(1.5) == pytest.approx(math.sqrt(3) / 2, rel=1e-15)
    assert optimal_z_narrowband(2.0) == pytest.approx(2 * math.sqrt(2) / 3, rel=1e-15)
    zs = [optimal_z_narrowband(ic) for ic in np.linspace(1, 1e4, 200)]
    assert np.all(np.diff(zs) > 0) and zs[-1] < 1
    assert 1 - optimal_z_narrowband(1e8) < 1e-15 + 1e-16
    with pytest.raises(DomainError):
        optimal_z_narrowband(0.99)


def test_optimal_z_is_tanh_r_omega():
    w = 0.37
    ic = 1 / -math.expm1(-2 * math.pi * w)
    assert optimal_z_narrowband(ic) == pytest.approx(math.tanh(2 * r_omega(w, FRAME)), rel=1e-12)


@pytest.mark.parametrize("ic", [1.1, 1.5, 2.0, 3.0])
def test_solve_z_narrowband_integrals(ic):
    for r in (0.3, 1.0, 2.0):
        assert solve_z_integrals(r, nb(ic)) == pytest.approx(optimal_z_narrowband(ic), abs=1e-10)


def test_solve_z_narrow_gaussian():
    w0 = FRAME.omega_from_scaled(math.log(2))
    packet = GaussianPacket(w0, 1e-3 * w0)
    zs = [solve_z(packet, FRAME, r) for r in (0.3, 1.0, 2.0)]
    for z in zs:
        assert z == pytest.approx(2 * math.sqrt(2) / 3, abs=1e-4)
    assert max(zs) - min(zs) < 1e-6


def test_solve_z_without_unruh_noise():
    w0 = FRAME.omega_from_scaled(50.0)
    assert solve_z(GaussianPacket(w0, 1e-3 * w0), FRAME, 0.5) < 1e-6


def test_solve_z_broadband_residual():
    integ = mode_integrals(GaussianPacket(0.16, 0.016), FRAME)
    z = solve_z_integrals(0.7, integ)
    assert 0 < z < 1
    assert abs(purity_residual(0.7, z, integ)) < 1e-9


def test_solve_z_domain():
    with pytest.raises(DomainError):
        solve_z_integrals(0.0, nb(1.5))


@pytest.mark.parametrize("ic", [1.5, 2.0])
def test_residual_has_two_roots(ic):
    # a smaller r-dependent root plus the noise-cancelling root z*
    roots = residual_sign_changes(0.8, nb(ic))
    assert len(roots) == 2
    assert roots[0] < roots[1]
    assert roots[1] == pytest.approx(optimal_z_narrowband(ic), abs=1e-3)
    small = roots[0]
    assert abs(residual_sign_changes(2.0, nb(ic))[0] - small) > 1e-3


@pytest.mark.xfail(strict=True, reason="the residual V_max V_min - 1 has two roots on [0, 1), not one")
def test_single_sign_change_claim():
    assert len(residual_sign_changes(0.8, nb(1.5))) == 1


@pytest.mark.parametrize("ic", [1.2, 2.0])
def test_variance_positive_over_bracket(ic):
    for z in np.linspace(0, Z_UPPER, 200):
        v = purified_variance(PurificationScenario(1.0, z, nb(ic)), np.linspace(0, math.pi, 9))
        assert np.all(v > 0)


def test_two_mode_purification_same_z():
    check = two_mode_purification_check(0.5, FRAME.omega_from_scaled(1.0), FRAME)
    assert check.pure, check.note
    assert check.z == pytest.approx(optimal_z_narrowband(1 / -math.expm1(-1.0)))
    np.testing.assert_allclose(check.symplectic_eigenvalues, 1.0, atol=1e-3)
