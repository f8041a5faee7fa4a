"""Gate synthesis in the two-pulse scheme and analysis of arbitrary gates.

A single-qubit target is described, up to global phase, by the rotation it
performs: U ~ exp(-i (two_gamma / 2) axis . sigma).  The eigenstate along
``axis`` and the one along ``-axis`` then differ in phase by two_gamma, which
for a genuinely noncyclic geometric gate is a purely geometric splitting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import root

from . import solver
from .errors import (
    DegenerateGateError,
    TargetOutsideSurfaceError,
    UndefinedPhaseError,
    UnrealizableTargetError,
)
from .evolution import DEFAULT_SAMPLES, trajectory
from .phases import OVERLAP_TOL, delta_closed_form, dynamical_phase, noncyclic_gp, pancharatnam_phase
from .su2 import (
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    as_unit_axis,
    eig_unitary,
    fidelity_up_to_global_phase,
    rotation,
    wrap_phase,
)
from .two_pulse import TwoPulseParams, eigensystem_closed_form, gate, program, rotation_vector, trace_half

PI_TIE_TOL = 1e-9


@dataclass(frozen=True)
class GateTarget:
    two_gamma: float
    eigen_axis: tuple[float, float, float]

    def __post_init__(self):
        object.__setattr__(self, "two_gamma", float(self.two_gamma))
        object.__setattr__(self, "eigen_axis", tuple(float(x) for x in as_unit_axis(self.eigen_axis)))

    def matrix(self) -> np.ndarray:
        return rotation(self.eigen_axis, self.two_gamma)


@dataclass(frozen=True)
class VerificationReport:
    condition_i_residual: float  # NaN when a computational state is mapped to an orthogonal one
    condition_ii_residual: float
    gate_fidelity: float
    condition_ii_numeric: float = 0.0
    undefined_basis: int | None = None

    def passed(self, tol: float) -> bool:
        return (
            self.undefined_basis is None
            and self.condition_i_residual < tol
            and self.condition_ii_residual < tol
        )


@dataclass(frozen=True)
class GateAnalysis:
    amplitudes: list[float]
    noncyclic_phases: list  # float, or None where the phase is undefined
    eigenphases: list[float]
    noncyclic_differences: list
    eigenphase_differences: list[float]
    realizable: bool


@dataclass(frozen=True)
class SynthesisResult:
    params: TwoPulseParams
    verification: VerificationReport
    target: GateTarget
    matrix: np.ndarray = field(repr=False)


# --- targets -----------------------------------------------------------------------------------


def _canonical(angle: float, axis: np.ndarray) -> tuple[float, np.ndarray]:
    """Map (angle in [0, 2pi], axis) to angle in (0, pi] with a tie-break at pi."""
    if angle > math.pi:
        angle, axis = 2.0 * math.pi - angle, -axis
    if math.pi - angle < PI_TIE_TOL:
        # rotations by pi about n and -n coincide; prefer z > 0, then x > 0, then y > 0
        for comp in (axis[2], axis[0], axis[1]):
            if abs(comp) > 1e-12:
                if comp < 0:
                    axis = -axis
                break
    return angle, axis


def target_from_gate(U) -> GateTarget:
    """Rotation angle in (0, pi] and rotation axis of a 2x2 unitary, up to global phase."""
    U = np.asarray(U, dtype=complex)
    if U.shape != (2, 2):
        raise ValueError("target_from_gate expects a 2x2 unitary")
    V = U / np.sqrt(np.linalg.det(U))
    c = float(np.trace(V).real / 2)
    v = np.array([(1j * np.trace(V @ s) / 2).real for s in (SIGMA_X, SIGMA_Y, SIGMA_Z)])
    vnorm = float(np.linalg.norm(v))
    if vnorm < 1e-9:
        raise DegenerateGateError("trivial gate")
    angle, axis = _canonical(2.0 * math.atan2(vnorm, c), v / vnorm)
    return GateTarget(angle, axis)


def named_gate(name: str, angle: float | None = None) -> np.ndarray:
    """Built-in gates: hadamard, uy, uz, cnot, swap, sqrtswap, identity."""
    key = name.lower().replace("-", "").replace("_", "")
    if key in ("uy", "uz") and angle is None:
        raise ValueError(f"gate {name!r} needs an angle")
    if key == "hadamard":
        return np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
    if key == "uy":
        return rotation((0.0, 1.0, 0.0), angle)
    if key == "uz":
        return rotation((0.0, 0.0, 1.0), angle)
    if key == "identity":
        return np.eye(2, dtype=complex)
    if key == "cnot":
        U = np.eye(4, dtype=complex)
        U[2:, 2:] = [[0, 1], [1, 0]]
        return U
    if key == "swap":
        return np.eye(4, dtype=complex)[[0, 2, 1, 3]]
    if key == "sqrtswap":
        w = np.exp(1j * math.pi / 4) / math.sqrt(2)
        U = np.eye(4, dtype=complex)
        U[1:3, 1:3] = [[w, -1j * w], [-1j * w, w]]
        return U
    raise ValueError(f"unknown gate {name!r}")


GATE_NAMES = ("hadamard", "uy", "uz", "cnot", "swap", "sqrtswap", "identity")


# --- analysis ----------------------------------------------------------------------------------


def analyze_gate(U) -> GateAnalysis:
    """Computational-basis (noncyclic) and eigenbasis (cyclic) phase data of a gate."""
    U = np.asarray(U, dtype=complex)
    if U.shape not in ((2, 2), (4, 4)):
        raise ValueError("only 2x2 and 4x4 gates are supported")
    amps = [float(abs(U[q, q])) for q in range(U.shape[0])]
    phases = []
    for q in range(U.shape[0]):
        try:
            phases.append(pancharatnam_phase(U, q))
        except UndefinedPhaseError:
            phases.append(None)
    eig = eig_unitary(U)
    eigenphases = [float(p) for p in eig.phases]
    diffs = [
        None if p is None or phases[0] is None else wrap_phase(p - phases[0]) for p in phases
    ]
    return GateAnalysis(
        amplitudes=amps,
        noncyclic_phases=phases,
        eigenphases=eigenphases,
        noncyclic_differences=diffs,
        eigenphase_differences=[wrap_phase(p - eigenphases[0]) for p in eigenphases],
        realizable=all(a >= OVERLAP_TOL for a in amps),
    )


# --- verification ------------------------------------------------------------------------------


def verify_gngg(
    params: TwoPulseParams, samples: int = DEFAULT_SAMPLES, target=None
) -> VerificationReport:
    """Residuals of the two GNGG conditions for a two-pulse gate.

    Condition (i) compares the geodesic noncyclic phases of |0> and |1> with
    the Pancharatnam phases of the gate; condition (ii) is |wrap(delta_+ -
    delta_-)|.  ``gate_fidelity`` is measured against ``target`` when given,
    otherwise against the closed-form gate (a consistency check of the
    sampled evolution).
    """
    prog = program(params)
    U = gate(params)
    reference = U if target is None else np.asarray(target, dtype=complex)
    fidelity = fidelity_up_to_global_phase(reference, prog.gate())

    if params.theta1 == 0.0 and params.theta2 == 0.0:
        return VerificationReport(0.0, 0.0, fidelity)
    if solver.is_degenerate(params):
        raise DegenerateGateError("dynamical phase basis-dependent")

    residual_i = 0.0
    undefined = None
    gammas, pancharatnam = [], []
    for q in range(2):
        basis = np.zeros(2, dtype=complex)
        basis[q] = 1.0
        try:
            pancharatnam.append(pancharatnam_phase(U, q))
            gammas.append(noncyclic_gp(trajectory(prog, basis, samples)))
        except UndefinedPhaseError:
            undefined = q
            break
    if undefined is None:
        residual_i = abs(wrap_phase((gammas[1] - gammas[0]) - (pancharatnam[1] - pancharatnam[0])))
    else:
        residual_i = float("nan")

    residual_ii = abs(wrap_phase(2.0 * delta_closed_form(params)))
    eig = eigensystem_closed_form(params)
    numeric = dynamical_phase(eig.psi_plus, prog, samples) - dynamical_phase(
        eig.psi_minus, prog, samples
    )
    return VerificationReport(
        residual_i, residual_ii, fidelity, abs(wrap_phase(numeric)), undefined
    )


# --- synthesis ---------------------------------------------------------------------------------


def _scheme_rotation(theta1, theta2, phi) -> tuple[float, np.ndarray]:
    v = rotation_vector(theta1, theta2, phi)
    vnorm = float(np.linalg.norm(v))
    return 2.0 * math.atan2(vnorm, float(trace_half(theta1, theta2, phi))), v / vnorm


def _orange_slice(target: GateTarget) -> TwoPulseParams:
    # theta1 = theta2 = pi gives U = -sin(phi) I - i cos(phi) sigma_z
    half = target.two_gamma / 2
    sz = 1.0 if target.eigen_axis[2] > 0 else -1.0
    phi = math.atan2(-math.cos(half), sz * math.sin(half)) % (2 * math.pi)
    return TwoPulseParams(math.pi, math.pi, phi)


def _refine(start: TwoPulseParams, c_target: float, z_target: float):
    """Solve c = c_target, 2 delta = 0 and rotation-axis z = z_target from ``start``."""

    def equations(x):
        t1, t2, ph = x
        v = rotation_vector(t1, t2, ph)
        vnorm = np.linalg.norm(v)
        return [
            float(trace_half(t1, t2, ph)) - c_target,
            float(solver.delta_numerator(t1, t2, ph)) / vnorm,
            v[2] / vnorm - z_target,
        ]

    sol = root(equations, [start.theta1, start.theta2, start.phi], method="hybr", tol=1e-14)
    if not np.all(np.isfinite(sol.x)):
        return None
    t1, t2, ph = (float(x) for x in sol.x)
    if max(abs(e) for e in equations(sol.x)) > 1e-11:
        return None
    return TwoPulseParams(t1, t2, ph % (2 * math.pi))


def synthesize(
    target: GateTarget,
    theta1_grid=None,
    phi_grid=None,
    match_tol: float = 1e-3,
    samples: int = DEFAULT_SAMPLES,
    theta2_range: tuple[float, float] = solver.THETA2_RANGE,
) -> SynthesisResult:
    """Two-pulse parameters realizing ``target`` as a genuinely noncyclic geometric gate.

    Candidates come from ``solver.eigenvector_surface`` (alpha = 0); the best
    match of the rotation-axis polar angle is polished by a 3-variable root
    solve, then alpha rotates the axis azimuth onto the target.
    """
    U_target = target.matrix()
    if any(abs(U_target[q, q]) < OVERLAP_TOL for q in range(2)):
        raise UnrealizableTargetError(
            "not genuinely-noncyclic realizable: a computational state is mapped "
            "onto an orthogonal state"
        )
    n = np.asarray(target.eigen_axis)
    T = target.two_gamma

    if abs(n[2]) > 1.0 - 1e-12:
        params = _orange_slice(target)
    else:
        # (T, u) and (2pi - T, -u) are the same rotation; the scheme reports
        # wrap(angle) = T or -T on the respective c-level sets
        options = [(T, n[2])]
        if abs(T - math.pi) > PI_TIE_TOL:
            options.append((-T, -n[2]))
        else:
            options.append((T, -n[2]))
        params = None
        best = math.inf
        for record_gamma, z_target in options:
            surface = solver.eigenvector_surface(
                record_gamma, theta1_grid, phi_grid, theta2_range=theta2_range
            )
            # surface axes are psi_+ Bloch axes, i.e. minus the rotation axis
            ranked = sorted(surface, key=lambda p: abs(-p.eigen_axis[2] - z_target))
            for cand in ranked[:8]:
                miss = abs(-cand.eigen_axis[2] - z_target)
                if miss > max(match_tol, 0.05):
                    break
                refined = _refine(cand.params, solver.level_trace(record_gamma), z_target)
                if refined is None or solver.is_degenerate(refined):
                    continue
                if not theta2_range[0] < refined.theta2 < theta2_range[1]:
                    continue
                if abs(solver.delta_residual(refined)) >= solver.ROOT_TOL:
                    continue
                if miss < best:
                    best, params = miss, refined
                break
        if params is None:
            raise TargetOutsideSurfaceError("target outside scanned surface")

    # rotate the scheme about z so that its rotation axis azimuth matches the target
    angle, u = _scheme_rotation(params.theta1, params.theta2, params.phi)
    if abs(angle - math.pi) < 1e-6:
        # a pi rotation is the same about u and -u; take the one on the target's side
        u = u if u[2] * n[2] >= 0 else -u
    elif abs(wrap_phase(angle - T)) > abs(wrap_phase(2 * math.pi - angle - T)):
        u = -u
    alpha = 0.0
    if math.hypot(n[0], n[1]) > 1e-12 and math.hypot(u[0], u[1]) > 1e-12:
        alpha = (math.atan2(n[1], n[0]) - math.atan2(u[1], u[0])) % (2 * math.pi)
    params = params.with_alpha(alpha)

    report = verify_gngg(params, samples, target=U_target)
    return SynthesisResult(params, report, target, gate(params))
