"""Geometric and dynamical phase functionals.

Open-path phases use the Pancharatnam product form

    Gamma = arg<psi_0|psi_N> - sum_j arg<psi_j|psi_{j+1}>

which is gauge invariant at any sampling density and tends to the continuous
Mukunda-Simon functional as the sampling is refined.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGateError, NotEigenstateError, UndefinedPhaseError
from .evolution import DEFAULT_SAMPLES, PulseProgram, Trajectory, trajectory
from .su2 import SIGMA_X, SIGMA_Y, eig_unitary, normalize, wrap_phase
from .two_pulse import TwoPulseParams, eigensystem_closed_form

OVERLAP_TOL = 1e-9
EIGENSTATE_TOL = 1e-8


@dataclass(frozen=True)
class PhaseReport:
    Gamma_per_basis: list  # float, or None where <q|U|q> vanishes
    gamma_per_eigen: list
    delta_per_eigen: list
    eigenphases: list


def pancharatnam_phase(U, q: int) -> float:
    d = np.asarray(U, dtype=complex)[q, q]
    if abs(d) < OVERLAP_TOL:
        raise UndefinedPhaseError("orthogonal mapping: phase undefined", basis_index=q)
    return wrap_phase(np.angle(d))


def _states(path) -> np.ndarray:
    return path.states if isinstance(path, Trajectory) else np.asarray(path, dtype=complex)


def local_phase_sum(states) -> float:
    """Sum of arg<psi_j|psi_{j+1}> along a sampled path (unwrapped)."""
    overlaps = np.einsum("ij,ij->i", states[:-1].conj(), states[1:])
    return float(np.sum(np.angle(overlaps)))


def _endpoint_phase(states, message: str) -> float:
    end = np.vdot(states[0], states[-1])
    if abs(end) < OVERLAP_TOL:
        raise UndefinedPhaseError(message)
    return float(np.angle(end))


def noncyclic_gp(path) -> float:
    """Noncyclic geometric phase of a sampled open path (Trajectory or state array)."""
    states = _states(path)
    return wrap_phase(_endpoint_phase(states, "open-path GP undefined") - local_phase_sum(states))


def _extrapolated_local_sum(program: PulseProgram, psi, samples: int) -> tuple[float, np.ndarray]:
    # The per-step error of arg<psi_j|psi_j+1> is odd in the step size, so the
    # summed error is a series in h^2 and one Richardson step removes it.
    coarse = trajectory(program, psi, samples).states
    fine = trajectory(program, psi, 2 * samples - 1).states
    value = (4.0 * local_phase_sum(fine) - local_phase_sum(coarse)) / 3.0
    return value, fine


def cyclic_gp(
    eigenstate, program: PulseProgram, samples: int = DEFAULT_SAMPLES, extrapolate: bool = True
) -> float:
    """Aharonov-Anandan phase of an eigenstate of the full program gate."""
    psi = normalize(eigenstate)
    U = program.gate()
    image = U @ psi
    if np.linalg.norm(image - np.vdot(psi, image) * psi) > EIGENSTATE_TOL:
        raise NotEigenstateError("state is not an eigenvector of the program gate")
    if extrapolate:
        local, states = _extrapolated_local_sum(program, psi, samples)
    else:
        states = trajectory(program, psi, samples).states
        local = local_phase_sum(states)
    return wrap_phase(_endpoint_phase(states, "cyclic state lost") - local)


def dynamical_phase(state, program: PulseProgram, samples: int = DEFAULT_SAMPLES) -> float:
    """-(integral of <psi(t)|H(t)|psi(t)> dt), integrated numerically per segment.

    Works for any initial state; for eigenstates it is the dynamical part of
    the eigenphase.
    """
    psi = normalize(state)
    total = 0.0
    for seg in program.segments:
        if seg.angle == 0.0:
            continue
        single = PulseProgram((seg,))
        bloch = trajectory(single, psi, samples).bloch
        energy = 0.5 * bloch @ seg.axis
        # H = axis.sigma/2 acting for a time |angle| with sign carried by the angle
        mean_energy = (energy.sum() - 0.5 * (energy[0] + energy[-1])) / (samples - 1)
        total -= seg.angle * mean_energy
        psi = seg.unitary() @ psi
    return float(total)


def delta_expectations(params: TwoPulseParams, psi) -> float:
    """-(theta1/2)<sigma_y> - (theta2/2)<-cos(phi) sigma_x + sin(phi) sigma_y> in the alpha = 0 frame."""
    t1, t2, phi = params.theta1, params.theta2, params.phi
    rotated = -math.cos(phi) * SIGMA_X + math.sin(phi) * SIGMA_Y
    ey = np.vdot(psi, SIGMA_Y @ psi).real
    er = np.vdot(psi, rotated @ psi).real
    return float(-0.5 * t1 * ey - 0.5 * t2 * er)


def delta_closed_form(params: TwoPulseParams) -> float:
    """Dynamical phase delta = delta_+ = -delta_- of the two-pulse eigenstates.

    Both integrands are constant on each pulse, so the integral collapses to
    two expectation values of psi_+.
    """
    if params.theta1 == 0.0 and params.theta2 == 0.0:
        return 0.0
    eig = eigensystem_closed_form(params.with_alpha(0.0))
    if eig.degenerate:
        raise DegenerateGateError("dynamical phase basis-dependent")
    return delta_expectations(params, eig.psi_plus)


def phase_report(program: PulseProgram, samples: int = DEFAULT_SAMPLES) -> PhaseReport:
    """All phase functionals of a single-qubit program in one pass."""
    U = program.gate()
    Gammas = []
    for q in range(2):
        basis = np.zeros(2, dtype=complex)
        basis[q] = 1.0
        try:
            Gammas.append(noncyclic_gp(trajectory(program, basis, samples)))
        except UndefinedPhaseError:
            Gammas.append(None)
    eig = eig_unitary(U)
    gammas, deltas = [], []
    for k in range(len(eig.phases)):
        vec = eig.vectors[:, k]
        gammas.append(cyclic_gp(vec, program, samples))
        deltas.append(dynamical_phase(vec, program, samples))
    return PhaseReport(Gammas, gammas, deltas, [float(p) for p in eig.phases])
