"""The two-pulse geodesic scheme.

Pulse 1 rotates by theta1 about an axis in the xy-plane (e_y for alpha = 0),
so both computational states move along great circles through the poles.
Pulse 2 rotates by theta2 about an axis orthogonal to the Bloch vector
r1 = (sin theta1, 0, cos theta1) reached by |0>; phi sets where that axis sits
in the plane orthogonal to r1.  Nonzero alpha conjugates the whole scheme by
a z-rotation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .evolution import PulseProgram, PulseSegment
from .su2 import (
    SIGMA_Z,
    eig_unitary,
    rotation,
    rotz,
    state_from_bloch,
)

DEGENERATE_TOL = 1e-10
# Ratio-form eigenvectors lose accuracy like eps/|denominator| when numerator and
# denominator vanish together (e.g. theta1 = theta2 = pi), so switch to the
# rotation-vector form well before the denominator reaches zero.
DENOMINATOR_TOL = 1e-4


@dataclass(frozen=True)
class TwoPulseParams:
    theta1: float
    theta2: float
    phi: float
    alpha: float = 0.0

    def __post_init__(self):
        for name in ("theta1", "theta2", "phi", "alpha"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)

    def with_alpha(self, alpha: float) -> "TwoPulseParams":
        return replace(self, alpha=alpha)

    @property
    def total_precession(self) -> float:
        return abs(self.theta1) + abs(self.theta2)


@dataclass(frozen=True, eq=False)
class ClosedFormEigen:
    lambda_plus: complex
    lambda_minus: complex
    psi_plus: np.ndarray
    psi_minus: np.ndarray
    degenerate: bool
    source: str  # "ratio", "rotation-vector" or "numeric"


def first_axis(alpha: float = 0.0) -> np.ndarray:
    return np.array([-math.sin(alpha), math.cos(alpha), 0.0])


def axis2(theta1: float, phi: float) -> np.ndarray:
    """Second rotation axis, orthogonal to r1 = (sin theta1, 0, cos theta1)."""
    return np.array(
        [
            -math.cos(theta1) * math.cos(phi),
            math.sin(phi),
            math.sin(theta1) * math.cos(phi),
        ]
    )


def axes(params: TwoPulseParams) -> tuple[np.ndarray, np.ndarray]:
    R = rotz(params.alpha)
    return first_axis(params.alpha), R @ axis2(params.theta1, params.phi)


def program(params: TwoPulseParams) -> PulseProgram:
    n1, n2 = axes(params)
    return PulseProgram((PulseSegment(n1, params.theta1), PulseSegment(n2, params.theta2)))


def gate(params: TwoPulseParams) -> np.ndarray:
    n1, n2 = axes(params)
    return rotation(n2, params.theta2) @ rotation(n1, params.theta1)


def z_phase(alpha: float) -> np.ndarray:
    """exp(-i alpha sigma_z / 2), which maps the alpha = 0 scheme onto alpha."""
    return np.cos(alpha / 2) * np.eye(2) - 1j * np.sin(alpha / 2) * SIGMA_Z


def trace_half(theta1, theta2, phi):
    """c = Re(lambda) = tr(U)/2; works elementwise on arrays."""
    return np.cos(theta1 / 2) * np.cos(theta2 / 2) - np.sin(theta1 / 2) * np.sin(
        theta2 / 2
    ) * np.sin(phi)


def rotation_vector(theta1, theta2, phi):
    """Vector v with U = c I - i v . sigma (alpha = 0); |v| = sqrt(1 - c^2).

    Elementwise on arrays; returns an array of shape (..., 3).
    """
    a1, s1 = np.cos(theta1 / 2), np.sin(theta1 / 2)
    a2, s2 = np.cos(theta2 / 2), np.sin(theta2 / 2)
    cphi, sphi = np.cos(phi), np.sin(phi)
    vx = -a1 * s2 * cphi
    vy = a2 * s1 + a1 * s2 * sphi
    vz = s1 * s2 * cphi
    return np.stack(np.broadcast_arrays(vx, vy, vz), axis=-1)


def _sqrt_one_minus_c2(theta1, theta2, phi) -> float:
    # sqrt(1 - c^2) == |v|; the vector norm avoids cancellation as |c| -> 1
    return float(np.linalg.norm(rotation_vector(theta1, theta2, phi)))


def mixing_ratio(theta1, theta2, phi, sign: int):
    """Numerator and denominator of the |1> coefficient of psi_+/- (alpha = 0)."""
    a1, s1 = math.cos(theta1 / 2), math.sin(theta1 / 2)
    a2, s2 = math.cos(theta2 / 2), math.sin(theta2 / 2)
    num = s1 * s2 * math.cos(phi) + sign * _sqrt_one_minus_c2(theta1, theta2, phi)
    den = np.exp(1j * phi) * a1 * s2 + 1j * s1 * a2
    return num, complex(den)


def mixing_normalization(theta1, theta2, phi, sign: int) -> float:
    """Normalization factor N_+/- of the ratio-form eigenvectors."""
    s1, s2 = math.sin(theta1 / 2), math.sin(theta2 / 2)
    num = s1 * s2 * math.cos(phi) + sign * _sqrt_one_minus_c2(theta1, theta2, phi)
    denom = (
        1.0
        - math.cos(theta1) * math.cos(theta2)
        + math.sin(theta1) * math.sin(theta2) * math.sin(phi)
    )
    return 1.0 / math.sqrt(1.0 + 2.0 * num * num / denom)


def eigensystem_closed_form(params: TwoPulseParams) -> ClosedFormEigen:
    """Eigenvalues lambda_+/- = c +/- i sqrt(1 - c^2) and eigenvectors psi_+/-.

    psi_+ is the eigenvector of lambda_+ (the eigenvalue with Im >= 0).  The
    |0> + ratio |1> form is used where it is well conditioned; near
    its singular set psi_+ is built from the rotation vector instead (Bloch
    axis -v/|v|), and for gates proportional to the identity a numeric
    eigenbasis is returned with ``degenerate`` set.
    """
    t1, t2, phi = params.theta1, params.theta2, params.phi
    c = float(trace_half(t1, t2, phi))
    v = rotation_vector(t1, t2, phi)
    vnorm = float(np.linalg.norm(v))
    lam_p = complex(c, vnorm)
    lam_m = complex(c, -vnorm)
    conj = z_phase(params.alpha)

    if abs(c) >= 1.0 - DEGENERATE_TOL:
        eig = eig_unitary(gate(params))
        k = int(np.argmax(eig.phases))
        return ClosedFormEigen(
            lam_p, lam_m, eig.vectors[:, k], eig.vectors[:, 1 - k], True, "numeric"
        )

    num_p, den = mixing_ratio(t1, t2, phi, +1)
    if abs(den) >= DENOMINATOR_TOL:
        num_m, _ = mixing_ratio(t1, t2, phi, -1)
        psi_p = mixing_normalization(t1, t2, phi, +1) * np.array([1.0, num_p / den])
        psi_m = mixing_normalization(t1, t2, phi, -1) * np.array([1.0, num_m / den])
        source = "ratio"
    else:
        b = -v / vnorm
        psi_p = state_from_bloch(b)
        psi_m = state_from_bloch(-b)
        source = "rotation-vector"
    return ClosedFormEigen(lam_p, lam_m, conj @ psi_p, conj @ psi_m, False, source)


def eigen_axis(params: TwoPulseParams) -> np.ndarray:
    """Bloch vector of psi_+ (the lambda_+ eigenstate), including the alpha rotation."""
    v = rotation_vector(params.theta1, params.theta2, params.phi)
    vnorm = np.linalg.norm(v)
    if vnorm < 1e-15:
        raise ValueError("eigen-axis undefined for a gate proportional to the identity")
    return rotz(params.alpha) @ (-v / vnorm)
