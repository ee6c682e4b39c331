import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spincirc import ReducedParams, closed_form_smatrix, load_preset, oracle_smatrix, smatrix
from spincirc.errors import ParameterError
from spincirc.oracle import C_CCW, C_CW, D_CCW, D_CW, assemble
from spincirc.validation import random_samples

rates = st.floats(1e3, 1e8)
shifts = st.floats(-1e8, 1e8)


@pytest.mark.parametrize("backscatter", [False, True])
def test_oracle_matches_resolvent(backscatter):
    for rp, d in random_samples(300, seed=7, backscatter=backscatter):
        np.testing.assert_allclose(oracle_smatrix(rp, d).entries, smatrix(rp, d).entries, rtol=0, atol=1e-10)


def test_oracle_matches_closed_form():
    for rp, d in random_samples(300, seed=8):
        np.testing.assert_allclose(
            oracle_smatrix(rp, d).entries, closed_form_smatrix(rp, d).entries, rtol=0, atol=1e-10
        )


@settings(max_examples=100, deadline=None)
@given(rates, rates, rates, shifts, shifts, st.floats(0, 1e7), st.floats(0, 1e7), st.floats(-2, 2))
def test_oracle_unitary(ga, gb, j, d1, d2, c1, c2, x):
    rp = ReducedParams(ga, gb, j, d1, d2, c1, c2)
    assert oracle_smatrix(rp, x * rp.scale()).unitarity_error() < 1e-10


@pytest.mark.parametrize("vg", [1.0, 3e8, 1e-3])
def test_only_g_squared_over_vg_matters(vg):
    rp = load_preset("fig5").reduced()
    np.testing.assert_allclose(
        oracle_smatrix(rp, 1.3e6, group_velocity=vg).entries,
        oracle_smatrix(rp, 1.3e6).entries,
        rtol=0,
        atol=1e-10,
    )


def test_no_cross_waveguide_path_without_coupling():
    s = oracle_smatrix(ReducedParams(3e5, 2e5, 0.0, 1e6, -1e6), 4e5)
    for i, j in [(1, 3), (1, 4), (2, 3), (2, 4), (3, 1), (3, 2), (4, 1), (4, 2)]:
        assert abs(s.t(i, j)) < 1e-15


def _effective_sources(rp, delta, vg):
    """Solve the mode rows for given field values at x = 0 (chi = 0)."""
    system = assemble(rp, delta, port=1, group_velocity=vg)
    ga = np.sqrt(2 * rp.gamma_a * vg)
    gb = np.sqrt(2 * rp.gamma_b * vg)
    block = system.matrix[:4, :4]

    def modes(a_r, a_l, b_l, b_r):
        drive = np.array([ga * a_r, ga * a_l, gb * b_l, gb * b_r])
        return np.linalg.solve(block, drive)

    return ga, gb, modes


@settings(max_examples=100, deadline=None)
@given(rates, rates, rates, shifts, shifts, st.floats(-2, 2), st.complex_numbers(max_magnitude=2), st.complex_numbers(max_magnitude=2))
def test_mode_rows_reproduce_delta_potential(ga2, gb2, j, d1, d2, x, u, w):
    """Eliminating the modes gives the published delta-potential strengths.

    For the left movers, g_a C_ccw must equal
    [g_a^2 (E - w_dcw) A_L(0) + J g_a g_b B_L(0)] / [(E - w_ccw)(E - w_dcw) - J^2]
    and likewise for the other three channels.
    """
    rp = ReducedParams(ga2, gb2, j, d1, d2)
    delta = x * rp.scale()
    vg = 2.5
    ga, gb, modes = _effective_sources(rp, delta, vg)
    e_ccw, e_dcw = delta - d1, delta + d2  # E - w_ccw, E - w_dcw
    e_cw, e_dccw = delta + d1, delta - d2
    den_l = e_ccw * e_dcw - j**2
    den_r = e_cw * e_dccw - j**2
    if min(abs(den_l), abs(den_r)) < 1e-6 * rp.scale() ** 2:
        return
    m = modes(0.0, u, w, 0.0)
    assert ga * m[C_CCW] == pytest.approx((ga**2 * e_dcw * u + j * ga * gb * w) / den_l, rel=1e-8, abs=1e-12)
    assert gb * m[D_CW] == pytest.approx((gb**2 * e_ccw * w + j * ga * gb * u) / den_l, rel=1e-8, abs=1e-12)
    m = modes(u, 0.0, 0.0, w)
    assert ga * m[C_CW] == pytest.approx((ga**2 * e_dccw * u + j * ga * gb * w) / den_r, rel=1e-8, abs=1e-12)
    assert gb * m[D_CCW] == pytest.approx((gb**2 * e_cw * w + j * ga * gb * u) / den_r, rel=1e-8, abs=1e-12)


def test_static_double_backscatter_spreads_equally_in_weak_coupling_limit():
    # chi1 = chi2 on static resonators: T13 peaks at 1/4 as Gamma -> 0
    rp = ReducedParams(1e3, 1e3, 2.4e6, chi_1=1.2e6, chi_2=1.2e6)
    ds = np.linspace(-1.205e6, -1.195e6, 4001)
    peak = max(abs(oracle_smatrix(rp, d).t(1, 3)) ** 2 for d in ds)
    assert peak == pytest.approx(0.25, abs=1e-5)


def test_fig4a_peak_agrees_with_resolvent():
    rp = load_preset("fig4-a").reduced()
    ds = np.linspace(-2.5e6, -1e6, 301)
    o = np.array([abs(oracle_smatrix(rp, d).t(1, 3)) ** 2 for d in ds])
    r = np.array([abs(smatrix(rp, d).t(1, 3)) ** 2 for d in ds])
    np.testing.assert_allclose(o, r, atol=1e-12)


def test_bad_port():
    with pytest.raises(ParameterError):
        assemble(ReducedParams(1.0, 1.0, 1.0), 0.0, port=5)
