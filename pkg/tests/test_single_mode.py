import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import minimize_scalar

from unruh_decoherence.errors import DomainError
from unruh_decoherence.modes import AccelerationFrame, ModeIntegrals, scaled_frequency_for_ic
from unruh_decoherence.single_mode import (
    CRITICAL_ASYMPTOTE,
    Region,
    SqueezeScenario,
    classify,
    coherent_quadrature,
    critical_frequency,
    critical_ic,
    critical_scaled_frequency,
    purity_product,
    squeezer_quadrature,
    squeezer_variance,
    vmax_vmin,
)

FRAME = AccelerationFrame(1.0)


def scen(r, ic):
    return SqueezeScenario(r, ModeIntegrals.narrowband(ic))


@pytest.mark.parametrize(
    "ic, expected",
    [(1.1, 0.43599941473975953), (1.3, 0.60939571109547606), (1.9, 1.4268353939152826)],
)
def test_vmin_reference_values(ic, expected):
    # mpmath evaluation of e^{-2r} + 4 I_c (I_c - 1)(e^{-r} - 1)^2 at r = 0.5
    assert vmax_vmin(scen(0.5, ic))[1] == pytest.approx(expected, rel=1e-13)
    assert squeezer_variance(scen(0.5, ic), math.pi / 2) == pytest.approx(expected, rel=1e-13)


def test_ideal_squeezer_without_unruh_noise():
    s = scen(0.8, 1.0)
    phi = np.linspace(0, math.pi, 7)
    np.testing.assert_allclose(squeezer_variance(s, phi), np.cosh(1.6) + np.sinh(1.6) * np.cos(2 * phi), rtol=1e-14)


@settings(max_examples=60, deadline=None)
@given(r=st.floats(0, 3), ic=st.floats(1, 4), phi=st.floats(-10, 10))
def test_variance_periodic_and_bounded(r, ic, phi):
    s = scen(r, ic)
    v = squeezer_variance(s, phi)
    v_max, v_min = vmax_vmin(s)
    assert squeezer_variance(s, phi + math.pi) == pytest.approx(v, rel=1e-12)
    assert v_min * (1 - 1e-12) <= v <= v_max * (1 + 1e-12)
    assert v_min > 0


@pytest.mark.parametrize("r, ic", [(0.3, 1.2), (1.0, 2.0), (2.0, 1.05)])
def test_extremes_found_by_minimizer(r, ic):
    s = scen(r, ic)
    res = minimize_scalar(lambda p: squeezer_variance(s, p), bounds=(0, math.pi), method="bounded", options={"xatol": 1e-10})
    assert res.fun == pytest.approx(vmax_vmin(s)[1], rel=1e-9)


def test_negative_r_swaps_extremes():
    s = scen(-0.5, 1.3)
    v_max, v_min = vmax_vmin(s)
    assert v_max >= v_min
    assert squeezer_variance(s, 0.0) == pytest.approx(v_min)
    assert squeezer_variance(s, math.pi / 2) == pytest.approx(v_max)


def test_purity_product_reference():
    # mpmath: V_max V_min at I_c = 1.5, r = 1
    assert purity_product(scen(1.0, 1.5)) == pytest.approx(21.673923261526678, rel=1e-13)


@settings(max_examples=60, deadline=None)
@given(r=st.floats(-3, 3), ic=st.floats(1, 5))
def test_purity_product_equals_vmax_vmin(r, ic):
    s = scen(r, ic)
    v_max, v_min = vmax_vmin(s)
    assert purity_product(s) == pytest.approx(v_max * v_min, rel=1e-11)
    assert purity_product(s) >= 1 - 1e-12


def test_coherent_quadrature_is_shot_noise():
    integ = ModeIntegrals.narrowband(1.7)
    q = coherent_quadrature(0.3 + 0.4j, 0.0, integ)
    assert q.variance == 1.0
    assert q.mean == pytest.approx(2 * 0.3 * math.sqrt(integ.total))
    assert coherent_quadrature(1j, math.pi / 2, integ).mean == pytest.approx(2 * math.sqrt(integ.total))


def test_squeezer_quadrature_record():
    q = squeezer_quadrature(scen(0.5, 1.2), 0.3)
    assert q.mean == 0 and q.phase == 0.3


def test_critical_curve_values():
    assert critical_scaled_frequency(0.5) == pytest.approx(0.95327789352195533, rel=1e-13)
    assert critical_scaled_frequency(20.0) == pytest.approx(1.7627471711241746, rel=1e-13)
    assert CRITICAL_ASYMPTOTE == pytest.approx(1.7627471740390861, rel=1e-15)
    assert critical_frequency(0.5, AccelerationFrame(2 * math.pi)) == pytest.approx(0.95327789352195533)


def test_critical_curve_monotone():
    rs = np.linspace(0.01, 30, 500)
    xs = [critical_scaled_frequency(r) for r in rs]
    assert np.all(np.diff(xs) > 0)
    assert xs[-1] < CRITICAL_ASYMPTOTE


@pytest.mark.parametrize("r", [0.05, 0.5, 1.0, 3.0, 10.0])
def test_critical_curve_is_vmin_one(r):
    x = critical_scaled_frequency(r)
    ic = -1 / math.expm1(-x)
    assert ic == pytest.approx(critical_ic(r), rel=1e-12)
    assert vmax_vmin(scen(r, ic))[1] == pytest.approx(1.0, abs=1e-12)


def test_critical_domain():
    with pytest.raises(DomainError):
        critical_scaled_frequency(0.0)
    with pytest.raises(DomainError):
        critical_ic(-1.0)


@pytest.mark.parametrize(
    "r, x, region",
    [(0.5, 1.0, Region.SQUEEZING), (0.5, 0.5, Region.NO_SQUEEZING), (0.0, 1.0, Region.CRITICAL), (3.0, 0.5, Region.NO_SQUEEZING)],
)
def test_classify(r, x, region):
    assert classify(r, FRAME.omega_from_scaled(x), FRAME).kind is region


def test_classify_on_curve():
    r = 0.5
    assert classify(r, critical_frequency(r, FRAME), FRAME).kind is Region.CRITICAL


def test_classify_domain():
    with pytest.raises(DomainError):
        classify(-0.1, 1.0, FRAME)
    with pytest.raises(DomainError):
        SqueezeScenario(math.nan, ModeIntegrals.narrowband(1.2))


def test_scaled_frequency_roundtrip():
    x = scaled_frequency_for_ic(1.9)
    assert -1 / math.expm1(-x) == pytest.approx(1.9, rel=1e-14)


def test_classify_spec_examples():
    assert classify(0.5, FRAME.omega_from_scaled(3.0), FRAME).kind is Region.SQUEEZING


@pytest.mark.xfail(strict=True, reason="the r = 0.5 boundary sits at 2 pi omega0 / a = 0.953, so x = 1.0 is inside the squeezing region")
def test_classify_claimed_no_squeezing_at_x_1():
    assert classify(0.5, FRAME.omega_from_scaled(1.0), FRAME).kind is Region.NO_SQUEEZING


@settings(max_examples=60, deadline=None)
@given(r=st.floats(-3, 3), ic=st.floats(1, 4), phi=st.floats(0, math.pi))
def test_uncertainty_product(r, ic, phi):
    s = scen(r, ic)
    assert squeezer_variance(s, phi) * squeezer_variance(s, phi + math.pi / 2) >= 1 - 1e-12


@pytest.mark.parametrize("r, ic", [(0.1, 1.0), (0.5, 1.5), (2.0, 3.0)])
def test_extremality_dense(r, ic):
    s = scen(r, ic)
    phi = np.linspace(0, math.pi, 1000, endpoint=False)
    v = squeezer_variance(s, phi)
    assert np.argmax(v) == 0 and phi[np.argmin(v)] == pytest.approx(math.pi / 2, abs=math.pi / 1000)


def test_coherent_examples():
    integ = ModeIntegrals.narrowband(1.0)
    assert coherent_quadrature(0, 0.3, integ).mean == 0
    assert coherent_quadrature(1, 0.0, integ).mean == pytest.approx(2.0)
    assert abs(coherent_quadrature(1, math.pi / 2, ModeIntegrals.narrowband(2.4)).mean) < 1e-15


def test_inertial_limit_extremes():
    r = 0.7
    assert squeezer_variance(scen(r, 1.0), 0.0) == pytest.approx(math.exp(2 * r))
    assert squeezer_variance(scen(r, 1.0), math.pi / 2) == pytest.approx(math.exp(-2 * r))
    assert vmax_vmin(scen(0.0, 1.8)) == pytest.approx((1.0, 1.0))
    assert squeezer_variance(scen(0.0, 2.2), 0.4) == pytest.approx(1.0)


def test_purity_product_edges():
    for v in np.linspace(0, 3, 7):
        assert purity_product(scen(v, 1.0)) == pytest.approx(1.0, abs=1e-12)
        assert purity_product(scen(0.0, 1 + v)) == pytest.approx(1.0, abs=1e-12)


def test_purity_product_increasing_in_ic():
    for r in (0.1, 1.0, 2.5):
        p = [purity_product(scen(r, ic)) for ic in np.linspace(1, 3, 40)]
        assert np.all(np.diff(p) > 0)


@pytest.mark.parametrize("r", [0.1, 0.5, 1.5, 4.0])
def test_vmin_crosses_one_once(r):
    ics = np.linspace(1, 6, 2001)
    v = np.array([vmax_vmin(scen(r, ic))[1] for ic in ics]) - 1
    flips = np.flatnonzero(np.sign(v[1:]) != np.sign(v[:-1]))
    assert len(flips) == 1 and v[0] < 0
    x_cross = math.log(critical_ic(r) / (critical_ic(r) - 1))
    assert x_cross == pytest.approx(critical_scaled_frequency(r), abs=1e-6)


def test_classicality_limit():
    rs = np.linspace(0.01, 10, 1000)

    def vmin(r, x):
        return vmax_vmin(scen(r, -1 / math.expm1(-x)))[1]

    above = np.array([vmin(r, 1.5) > 1 for r in rs])
    r_star = rs[np.flatnonzero(~above)[-1]]
    assert np.all(above[rs > r_star])
    assert all(vmin(r, 2.0) < 1 for r in rs)


def test_critical_round_trip_frame():
    frame = AccelerationFrame(3.0)
    from unruh_decoherence.modes import narrowband_integrals

    integ = narrowband_integrals(critical_frequency(0.5, frame), frame)
    assert vmax_vmin(SqueezeScenario(0.5, integ))[1] == pytest.approx(1.0, abs=1e-9)
