import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gngg import solver
from gngg.errors import DegenerateGateError, NotARootError
from gngg.phases import delta_closed_form
from gngg.su2 import wrap_phase
from gngg.two_pulse import TwoPulseParams, rotation_vector

ang = st.floats(0.05, 2 * math.pi - 0.05, allow_nan=False)


def dense_root_count(theta1, phi, n=100_000):
    """Oracle: sign changes of 2 delta on a very fine theta2 grid."""
    t2 = np.linspace(0, 3 * math.pi, n)[1:-1]
    f = solver.two_delta_fast(theta1, t2, phi)
    return int(np.count_nonzero(np.sign(f[:-1]) * np.sign(f[1:]) < 0))


@given(ang, ang, ang)
def test_numerator_is_scaled_two_delta(t1, t2, phi):
    p = TwoPulseParams(t1, t2, phi)
    if solver.is_degenerate(p):
        return
    vnorm = np.linalg.norm(rotation_vector(t1, t2, phi))
    assert np.isclose(solver.delta_numerator(t1, t2, phi), 2 * delta_closed_form(p) * vnorm, atol=1e-10)


@pytest.mark.parametrize("theta1", [0.1 * math.pi, 0.5 * math.pi, 0.9 * math.pi, 1.9 * math.pi])
@pytest.mark.parametrize("phi", [0.3, 1.1567 * math.pi, 2.5, 1.8433 * math.pi, 5.9])
def test_find_roots_against_dense_scan(theta1, phi):
    roots = solver.find_theta2_roots(theta1, phi)
    assert len(roots) == dense_root_count(theta1, phi)
    for r in roots:
        assert r.residual < solver.ROOT_TOL
        assert 0 < r.theta2 < 3 * math.pi
        assert abs(wrap_phase(2 * delta_closed_form(r.params))) < 1e-10


def test_find_roots_three_roots_in_window():
    assert len(solver.find_theta2_roots(0.9 * math.pi, 1.15 * math.pi)) == 3
    assert len(solver.find_theta2_roots(0.9 * math.pi, 0.5)) == 1


def test_find_roots_theta1_pi_branches():
    roots = solver.find_theta2_roots(math.pi, 1.5 * math.pi + 0.3)
    values = sorted(r.theta2 for r in roots)
    assert np.isclose(values[0], math.pi, atol=1e-10)
    assert np.isclose(values[1], -math.pi / math.sin(1.5 * math.pi + 0.3), atol=1e-9)


def test_mod2pi_contains_strict_roots():
    strict = solver.find_theta2_roots(0.9 * math.pi, 1.2 * math.pi, mode="strict")
    loose = solver.find_theta2_roots(0.9 * math.pi, 1.2 * math.pi, mode="mod2pi")
    for r in strict:
        assert min(abs(r.theta2 - q.theta2) for q in loose) < 1e-9
    for q in loose:
        assert abs(wrap_phase(2 * delta_closed_form(q.params))) < 1e-10


def test_find_roots_validates_arguments():
    with pytest.raises(ValueError):
        solver.find_theta2_roots(1.0, 1.0, mode="loose")
    with pytest.raises(ValueError):
        solver.find_theta2_roots(1.0, 1.0, theta2_range=(2.0, 1.0))


def test_default_phi_grid_is_open_and_centred():
    grid = solver.default_phi_grid(8)
    assert len(grid) == 8
    assert grid[0] > 0 and grid[-1] < 2 * math.pi
    assert np.allclose(np.diff(grid), 2 * math.pi / 8)


def test_scan_small_grid_and_counts():
    table = solver.scan_roots(0.5 * math.pi, solver.default_phi_grid(8))
    assert len(table) == 8
    assert list(table.counts()) == [1] * 8


def test_scan_parallel_matches_serial():
    grid = solver.default_phi_grid(64)
    serial = solver.scan_roots(0.9 * math.pi, grid)
    parallel = solver.scan_roots(0.9 * math.pi, grid, workers=2)
    assert [(b, r) for b, r in serial.records()] == [(b, r) for b, r in parallel.records()]


def test_scan_rejects_unsorted_grid():
    with pytest.raises(ValueError):
        solver.scan_roots(1.0, [1.0, 0.5])


def test_scan_windows_at_09pi(scan_09pi):
    counts = scan_09pi.counts()
    assert set(np.unique(counts)) == {1, 3}
    phi = scan_09pi.phi_grid[counts == 3]
    assert np.all(((phi > math.pi) & (phi < 1.25 * math.pi)) | ((phi > 1.75 * math.pi) & (phi < 2 * math.pi)))


def test_scan_branches_are_continuous(scan_09pi):
    for _, recs in scan_09pi.branches:
        t2 = np.array([r.theta2 for r in recs])
        assert np.all(np.abs(np.diff(t2)) < solver.BRANCH_BREAK)
        axes = np.array([r.eigen_axis for r in recs])
        assert np.all(np.einsum("ij,ij->i", axes[1:], axes[:-1]) > 0)


def test_gp_at_root_and_not_a_root(scan_09pi):
    _, rec = next(scan_09pi.records())
    assert abs(wrap_phase(solver.gp_at_root(rec) - rec.two_gamma)) < 1e-12
    bad = solver.make_record(TwoPulseParams(0.5 * math.pi, 0.5 * math.pi, 0.0))
    with pytest.raises(NotARootError):
        solver.gp_at_root(bad)
    with pytest.raises(NotARootError):
        solver.symmetry_map(bad, "pm")
    with pytest.raises(ValueError):
        solver.symmetry_map(rec, "xx")


def test_make_record_rejects_degenerate():
    with pytest.raises(DegenerateGateError):
        solver.make_record(TwoPulseParams(2 * math.pi, 0.0, 0.0))


def test_relabel_swaps_eigenvector():
    rec = solver.make_record(TwoPulseParams(1.0, 2.0, 0.5))
    other = solver.relabel(rec)
    assert other.label == -1
    assert np.allclose(other.eigen_axis, -np.array(rec.eigen_axis))
    assert np.isclose(other.two_gamma, wrap_phase(-rec.two_gamma))
    assert solver.relabel(other) == rec


@settings(max_examples=50, deadline=None)
@given(st.floats(0.05, 1.95), st.floats(0.01, 1.99))
def test_symmetry_maps_preserve_roots(t1_over_pi, phi_over_pi):
    roots = solver.find_theta2_roots(t1_over_pi * math.pi, phi_over_pi * math.pi)
    for rec in roots:
        for case in ("pm", "mp", "mm"):
            image = solver.symmetry_map(rec, case)
            assert abs(wrap_phase(2 * delta_closed_form(image.params))) < 1e-8
        mm = solver.symmetry_map(rec, "mm")
        assert abs(wrap_phase(mm.two_gamma - rec.two_gamma)) < 1e-8


def test_min_total_precession():
    tables = [solver.scan_roots(t * math.pi, solver.default_phi_grid(128)) for t in (0.3, 1.2)]
    assert solver.min_total_precession(tables) >= 2 * math.pi - 1e-4
    empty = solver.RootTable(1.0, np.array([1.0]), [])
    with pytest.raises(ValueError):
        solver.min_total_precession(empty)


def test_level_trace():
    assert np.isclose(solver.level_trace(math.pi), 0.0, atol=1e-15)
    assert np.isclose(solver.level_trace(0.5), math.cos(0.25))
    assert np.isclose(solver.level_trace(-0.5), -math.cos(0.25))


@pytest.mark.parametrize("target", [math.pi, math.pi / 2, -math.pi / 2, 0.4])
def test_eigenvector_surface_points_are_roots(target):
    pts = solver.eigenvector_surface(target, solver.default_phi_grid(24), solver.default_phi_grid(256))
    assert pts
    for p in pts:
        assert p.residual < solver.ROOT_TOL
        assert abs(wrap_phase(solver.two_gamma(p.params) - target)) < 1e-8
        assert np.isclose(np.linalg.norm(p.eigen_axis), 1.0)
