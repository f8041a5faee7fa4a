import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gngg.errors import DegenerateGateError, NotEigenstateError, UndefinedPhaseError
from gngg.evolution import PulseProgram, PulseSegment, trajectory
from gngg.phases import (
    cyclic_gp,
    delta_closed_form,
    dynamical_phase,
    noncyclic_gp,
    pancharatnam_phase,
    phase_report,
)
from gngg.su2 import wrap_phase
from gngg.synthesis import named_gate
from gngg.two_pulse import TwoPulseParams, eigensystem_closed_form, gate, program

ang = st.floats(0.05, 2 * math.pi - 0.05, allow_nan=False)
HADAMARD = named_gate("hadamard")


def test_pancharatnam_examples():
    assert pancharatnam_phase(HADAMARD, 0) == 0.0
    assert np.isclose(pancharatnam_phase(HADAMARD, 1), math.pi)
    assert pancharatnam_phase(np.eye(4), 3) == 0.0
    with pytest.raises(UndefinedPhaseError, match="orthogonal mapping") as info:
        pancharatnam_phase(named_gate("cnot"), 2)
    assert info.value.basis_index == 2


def test_noncyclic_constant_and_orthogonal_paths():
    assert noncyclic_gp(np.array([[1, 0]] * 5, dtype=complex)) == 0.0
    flip = PulseProgram((PulseSegment((0, 1, 0), math.pi),))
    with pytest.raises(UndefinedPhaseError, match="open-path GP undefined"):
        noncyclic_gp(trajectory(flip, [1, 0], 50))


def test_noncyclic_gp_is_gauge_invariant():
    prog = PulseProgram((PulseSegment((0, 0.6, 0.8), 1.7),))
    states = trajectory(prog, [0.8, 0.6], 300).states
    gauge = np.exp(1j * np.linspace(0, 5, len(states)))
    assert np.isclose(noncyclic_gp(states), noncyclic_gp(states * gauge[:, None]), atol=1e-12)


@settings(max_examples=40)
@given(ang, ang, ang, st.floats(0, 2 * math.pi))
def test_geodesic_noncyclic_phase_equals_pancharatnam(t1, t2, phi, alpha):
    p = TwoPulseParams(t1, t2, phi, alpha)
    U = gate(p)
    for q in range(2):
        if abs(U[q, q]) < 1e-3:
            continue
        basis = np.eye(2, dtype=complex)[q]
        Gamma = noncyclic_gp(trajectory(program(p), basis, 10_000))
        assert abs(wrap_phase(Gamma - pancharatnam_phase(U, q))) < 1e-6


def test_cyclic_gp_trivial_cases():
    ident = PulseProgram((PulseSegment((0, 0, 1), 0.0),))
    assert cyclic_gp([1, 0], ident) == 0.0
    prog = PulseProgram((PulseSegment((0, 1, 0), 1.2),))
    y_plus = np.array([1, 1j]) / math.sqrt(2)
    assert abs(cyclic_gp(y_plus, prog)) < 1e-12
    assert np.isclose(dynamical_phase(y_plus, prog), -0.6)


def test_cyclic_gp_rejects_non_eigenstate():
    prog = PulseProgram((PulseSegment((0, 1, 0), 1.2),))
    with pytest.raises(NotEigenstateError):
        cyclic_gp([1, 0], prog)


def test_cyclic_gp_orange_slice_is_half_solid_angle():
    # |0> runs pole to pole and back along two meridians separated by an opening angle;
    # the enclosed solid angle is 2 * opening, so gamma = -opening (mod 2 pi)
    phi = 0.4
    p = TwoPulseParams(math.pi, math.pi, phi)
    prog = program(p)
    gamma0 = cyclic_gp([1, 0], prog)
    gamma1 = cyclic_gp([0, 1], prog)
    assert np.isclose(abs(wrap_phase(gamma0 - gamma1)), abs(wrap_phase(math.pi - 2 * phi)), atol=1e-10)
    assert abs(dynamical_phase([1, 0], prog)) < 1e-12


def test_dynamical_phase_zero_program():
    prog = PulseProgram((PulseSegment((1, 0, 0), 0.0),))
    assert dynamical_phase([0.6, 0.8], prog) == 0.0


@settings(max_examples=60)
@given(ang, ang, ang)
def test_delta_closed_form_matches_integral(t1, t2, phi):
    p = TwoPulseParams(t1, t2, phi)
    eig = eigensystem_closed_form(p)
    if eig.degenerate:
        return
    numeric = dynamical_phase(eig.psi_plus, program(p), 4096)
    assert abs(delta_closed_form(p) - numeric) < 1e-7
    assert abs(dynamical_phase(eig.psi_minus, program(p), 4096) + numeric) < 1e-7


def test_delta_is_alpha_invariant():
    p = TwoPulseParams(1.0, 2.0, 0.7)
    assert np.isclose(delta_closed_form(p), delta_closed_form(p.with_alpha(1.9)))


def test_delta_degenerate_and_zero():
    assert delta_closed_form(TwoPulseParams(0.0, 0.0, 1.0)) == 0.0
    with pytest.raises(DegenerateGateError, match="basis-dependent"):
        delta_closed_form(TwoPulseParams(2 * math.pi, 0.0, 1.0))


@settings(max_examples=25, deadline=None)
@given(ang, ang, ang)
def test_phase_report_decomposition(t1, t2, phi):
    prog = program(TwoPulseParams(t1, t2, phi))
    report = phase_report(prog, 2048)
    for g, d, e in zip(report.gamma_per_eigen, report.delta_per_eigen, report.eigenphases):
        assert abs(wrap_phase(g + d - e)) < 1e-8
