import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spincirc import ReducedParams, load_preset, smatrix
from spincirc.analysis import (
    ROUTING_MINUS,
    CirculatorPoint,
    Direction,
    backscatter_report,
    circulation_fidelity,
    closed_form_points,
    default_window,
    find_circulator_points,
    find_complete_routing,
    golden_section_max,
    max_reciprocity_gap,
    mean_fidelity,
    sweep,
)
from spincirc.errors import ConvergenceError, ParameterError
from spincirc.params import fig4_scenarios


def _identity_routing(cycle):
    t = np.zeros((4, 4))
    for k in range(4):
        i, j = cycle[k], cycle[(k + 1) % 4]
        t[j - 1, i - 1] = 1.0
    return t


# --- sweeps -----------------------------------------------------------------


def test_sweep_grid_includes_both_ends():
    res = sweep(load_preset("fig2-b").reduced(), -1e6, 1e6, 5)
    np.testing.assert_array_equal(res.deltas, [-1e6, -5e5, 0.0, 5e5, 1e6])
    assert res.tables.shape == (5, 4, 4)
    assert len(res) == 5


def test_sweep_matches_pointwise_smatrix():
    rp = load_preset("fig4-b").reduced()
    res = sweep(rp, -3e6, 3e6, 7)
    for d, t in zip(res.deltas, res.tables):
        np.testing.assert_allclose(t, smatrix(rp, d).transmission, atol=1e-14)


@pytest.mark.parametrize("lo,hi,steps", [(1.0, 1.0, 10), (2.0, 1.0, 10), (0.0, 1.0, 1)])
def test_sweep_rejects_bad_grid(lo, hi, steps):
    with pytest.raises(ParameterError):
        sweep(ReducedParams(1.0, 1.0, 1.0), lo, hi, steps)


def test_sweep_result_is_read_only():
    res = sweep(ReducedParams(1.0, 1.0, 1.0), -1.0, 1.0, 3)
    with pytest.raises(ValueError):
        res.tables[0, 0, 0] = 1.0


@pytest.mark.parametrize("workers", [2, 3, 8])
def test_sweep_independent_of_worker_count(workers):
    rp = load_preset("fig5").reduced()
    a = sweep(rp, -8e6, 8e6, 2001)
    b = sweep(rp, -8e6, 8e6, 2001, workers=workers)
    np.testing.assert_array_equal(a.tables, b.tables)


def test_equal_spins_are_reciprocal():
    res = sweep(load_preset("fig3-corotate").reduced(), -8e6, 8e6, 2001)
    assert max_reciprocity_gap(res) < 1e-10


def test_one_spinning_resonator_is_nonreciprocal():
    res = sweep(load_preset("fig2-b").reduced(), -8e6, 8e6, 2001)
    assert max_reciprocity_gap(res) > 0.5


def test_single_resonator_sweep_conserves_probability():
    p = load_preset("fig2-single")
    res = sweep(p.reduced(), p.sweep_min, p.sweep_max, 501, single=True)
    np.testing.assert_allclose(res.tables.sum(axis=1), 1.0, atol=1e-12)


def test_default_window_contains_closed_form_points():
    for name in ("fig2-b", "fig3-counter"):
        rp = load_preset(name).reduced()
        lo, hi = default_window(rp)
        assert all(lo < d < hi for d, _ in closed_form_points(rp))


# --- fidelity -----------------------------------------------------------------


@pytest.mark.parametrize("direction", list(Direction))
def test_perfect_routing_has_unit_fidelity(direction):
    t = _identity_routing(direction.cycle)
    assert circulation_fidelity(t, direction) == 1.0
    for other in Direction:
        if other is not direction:
            assert circulation_fidelity(t, other) == 0.0


def test_fidelity_examples():
    cw = _identity_routing((1, 2, 3, 4))
    assert circulation_fidelity(cw, (1, 2, 3, 4)) == 1.0
    assert circulation_fidelity(cw, (1, 4, 3, 2)) == 0.0
    assert circulation_fidelity(np.full((4, 4), 0.25), Direction.POS8) == 0.25


def test_fidelity_accepts_edge_mapping():
    t = _identity_routing((1, 3, 4, 2))
    assert circulation_fidelity(t, {1: 3, 3: 4, 4: 2, 2: 1}) == 1.0


def test_fidelity_rejects_non_permutation():
    with pytest.raises(ValueError):
        circulation_fidelity(np.eye(4), (1, 2, 2, 4))


def test_fidelity_is_worst_edge_and_mean_is_average():
    t = np.zeros((4, 4))
    for (i, j), v in zip(Direction.CW.edges, (0.9, 0.7, 0.95, 0.8)):
        t[j - 1, i - 1] = v
    assert circulation_fidelity(t, Direction.CW) == 0.7
    assert mean_fidelity(t, Direction.CW) == pytest.approx(0.8375)


def test_direction_strings():
    assert str(Direction.REV8) == "1->3->4->2->1"
    assert str(Direction.CCW) == "1->4->3->2->1"
    assert Direction.POS8.edges == ((1, 2), (2, 4), (4, 3), (3, 1))


def test_fig2b_fidelity_at_closed_form_candidate():
    # independent evaluation straight from the four amplitudes of the cycle
    rp = load_preset("fig2-b").reduced()
    for delta, direction in closed_form_points(rp):
        s = smatrix(rp, delta)
        direct = min(abs(s.t(i, j)) ** 2 for i, j in direction.edges)
        assert circulation_fidelity(s.transmission, direction) == pytest.approx(direct, abs=1e-15)
        assert 0.7 < direct < 0.8


# --- golden section ------------------------------------------------------------


@given(st.floats(-10, 10), st.floats(0.1, 5))
def test_golden_section_finds_parabola_peak(c, w):
    x, fx = golden_section_max(lambda x: -((x - c) ** 2), c - w, c + 1.3 * w, tol=1e-9)
    assert x == pytest.approx(c, abs=1e-8)
    assert fx <= 0.0


def test_golden_section_endpoint_maximum():
    x, _ = golden_section_max(lambda x: x, 0.0, 1.0, tol=1e-6)
    assert x == pytest.approx(1.0, abs=1e-6)


# --- circulator points -----------------------------------------------------------


def test_closed_form_points_static_degenerate():
    rp = ReducedParams(3e5, 2e5, 1e6)
    root = math.sqrt(3e5 * 2e5 + 1e12)
    pts = closed_form_points(rp)
    assert [d for d, _ in pts] == pytest.approx([-root, -root, root, root])
    assert {k for _, k in pts} == {Direction.POS8, Direction.REV8}


def test_closed_form_points_fig2b():
    rp = load_preset("fig2-b").reduced()
    pts = closed_form_points(rp)
    assert len(pts) == 4
    assert sorted(k.name for _, k in pts) == ["POS8", "POS8", "REV8", "REV8"]
    root = math.sqrt(rp.gamma_a * rp.gamma_b + rp.j**2 + rp.delta_f1**2 / 4)
    for d, k in pts:
        centre = -rp.delta_f1 / 2 if k is Direction.REV8 else rp.delta_f1 / 2
        assert abs(abs(d - centre) - root) < 1e-6


def test_closed_form_points_counter_spin():
    pts = closed_form_points(load_preset("fig3-counter").reduced())
    assert sum(k is Direction.REV8 for _, k in pts) == 2
    assert sum(k is Direction.POS8 for _, k in pts) == 2


def test_closed_form_points_require_no_backscatter():
    with pytest.raises(ParameterError):
        closed_form_points(load_preset("fig4-a").reduced())


def test_closed_form_candidates_sit_near_detected_points():
    p = load_preset("fig3-counter")
    rp = p.reduced()
    detected = find_circulator_points(rp, p.sweep_min, p.sweep_max, 0.9)
    cands = closed_form_points(rp)
    for q in detected:
        nearest = min(cands, key=lambda c: abs(c[0] - q.delta))
        assert nearest[1] is q.direction
        # offset is of order Gamma^2 / root
        assert abs(nearest[0] - q.delta) < 2 * rp.gamma_a**2 / abs(q.delta)


def test_counter_spin_two_point_structure():
    p = load_preset("fig3-counter")
    pts = find_circulator_points(p.reduced(), p.sweep_min, p.sweep_max, 0.9)
    assert [q.direction for q in pts] == [Direction.REV8, Direction.POS8]
    assert pts[0].delta == pytest.approx(-pts[1].delta, abs=2.0)
    assert all(q.fidelity > 0.99 for q in pts)


def test_corotating_pair_has_no_circulator_points():
    p = load_preset("fig3-corotate")
    assert find_circulator_points(p.reduced(), p.sweep_min, p.sweep_max, 0.5) == []


def test_static_resonators_have_no_circulator_points():
    assert find_circulator_points(ReducedParams(4.1e5, 4.1e5, 2.4e6), -8e6, 8e6, 0.5) == []


@pytest.mark.parametrize("name", ["fig2-b", "fig2-c", "fig3-counter", "fig5"])
def test_detector_mirror_symmetry(name):
    # reversing every shift and the detuning leaves each port cycle intact
    p = load_preset(name)
    rp = p.reduced()
    a = find_circulator_points(rp, p.sweep_min, p.sweep_max, 0.5)
    b = find_circulator_points(rp.mirrored(), -p.sweep_max, -p.sweep_min, 0.5)
    assert len(a) == len(b) > 0
    for x, y in zip(a, reversed(b)):
        assert x.direction is y.direction
        assert abs(x.delta + y.delta) < 10.0


def test_refinement_never_loses_fidelity():
    p = load_preset("fig2-b")
    rp = p.reduced()
    coarse = np.linspace(p.sweep_min, p.sweep_max, 4096)
    for q in find_circulator_points(rp, p.sweep_min, p.sweep_max, 0.5):
        k = int(np.argmin(np.abs(coarse - q.delta)))
        sampled = max(circulation_fidelity(smatrix(rp, coarse[k + o]).transmission, q.direction) for o in (-1, 0, 1))
        assert q.fidelity >= sampled - 1e-12


def test_ties_reported_once_per_direction():
    # static with chi: CW and CCW fidelities coincide, both reported
    rp = ReducedParams(4.1e5, 4.1e5, 2.4e6, 1e6, 1e6, 1.2e6, 1.2e6)
    pts = find_circulator_points(rp, -8e6, 8e6, 0.3)
    for d in {q.delta for q in pts}:
        dirs = [q.direction for q in pts if q.delta == d]
        assert len(dirs) == len(set(dirs))


def test_points_reject_bad_threshold():
    with pytest.raises(ParameterError):
        find_circulator_points(ReducedParams(1.0, 1.0, 1.0), -1.0, 1.0, 0.0)


def test_circulator_point_cycle():
    assert CirculatorPoint(0.0, Direction.CW, 1.0).cycle == (1, 2, 3, 4)


# --- complete routing ------------------------------------------------------------


@pytest.fixture(scope="module")
def routing():
    return find_complete_routing(load_preset("fig3-counter").reduced())


def test_routing_reaches_full_crossing(routing):
    assert routing.min_cross >= 1 - 1e-6
    assert abs(routing.delta_star) < 10.0


def test_routing_matches_minus_formula(routing):
    assert ROUTING_MINUS in routing.matched
    assert routing.shift_star == pytest.approx(math.sqrt(2.4e6**2 - 4.1e5**2), abs=1.0)


def test_routing_unpacks(routing):
    d, s, m = routing
    assert (d, s, m) == (routing.delta_star, routing.shift_star, routing.min_cross)


def test_routing_weak_decay_limit():
    r = find_complete_routing(ReducedParams(1e3, 1e3, 2.4e6))
    assert r.shift_star == pytest.approx(2.4e6, rel=1e-6)


def test_routing_rejects_unsupported_templates():
    with pytest.raises(ParameterError):
        find_complete_routing(ReducedParams(1.0, 1.0, 1.0, chi_1=1.0))
    with pytest.raises(ParameterError):
        find_complete_routing(ReducedParams(1.0, 2.0, 1.0))


def test_routing_unreachable_when_decay_dominates():
    # J < Gamma: no real shift satisfies the routing condition
    with pytest.raises(ConvergenceError):
        find_complete_routing(ReducedParams(2e6, 2e6, 1e6))


# --- backscattering ------------------------------------------------------------------


@pytest.fixture(scope="module")
def fig4():
    return {r.label: r for r in backscatter_report(fig4_scenarios(), -8e6, 8e6)}


def test_spinning_beats_static(fig4):
    assert fig4["spin1, chi1"].peak > fig4["static, chi1"].peak
    assert fig4["spin1, chi1+chi2"].peak > fig4["static, chi1+chi2"].peak
    assert fig4["counter-spin, chi1+chi2"].peak > fig4["spin1, chi1+chi2"].peak


def test_rotation_pushes_band_left(fig4):
    assert fig4["static, chi1"].centroid == pytest.approx(0.0, abs=1e3)
    assert fig4["spin1, chi1"].centroid < -1e6


def test_reverse_rotation_pushes_band_right():
    sc = [(label, rp.mirrored()) for label, rp in fig4_scenarios()]
    rep = {r.label: r for r in backscatter_report(sc, -8e6, 8e6)}
    assert rep["spin1, chi1"].centroid > 1e6


@pytest.mark.parametrize(
    "label,target", [("spin1, chi1", 0.683), ("spin1, chi1+chi2", 0.638), ("counter-spin, chi1+chi2", 0.895)]
)
def test_spinning_peaks_near_reference_values(fig4, label, target):
    assert fig4[label].peak == pytest.approx(target, abs=0.05)


def test_backscatter_peak_refined_over_grid():
    rp = dict(fig4_scenarios())["spin1, chi1"]
    (rep,) = backscatter_report([("x", rp)], -8e6, 8e6)
    grid = np.abs(np.array([smatrix(rp, d).t(1, 3) for d in np.linspace(-8e6, 8e6, 4096)])) ** 2
    assert rep.peak >= grid.max()
    assert abs(smatrix(rp, rep.location).t(1, 3)) ** 2 == pytest.approx(rep.peak, abs=1e-14)


def test_backscatter_needs_scenarios():
    with pytest.raises(ParameterError):
        backscatter_report([], -1.0, 1.0)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.0, 5e6))
def test_backscatter_peak_is_a_probability(chi):
    rp = replace(load_preset("fig4-a").reduced(), chi_1=chi)
    (rep,) = backscatter_report([("x", rp)], -8e6, 8e6, grid=512)
    assert 0.0 <= rep.peak <= 1.0 + 1e-12
