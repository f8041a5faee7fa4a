"""Small dense complex linear algebra for qubits (and qubit pairs).

States are 1-D complex arrays of length 2 or 4, gates are square complex
arrays, Bloch vectors are real arrays of length 3.  Units are fixed by
hbar = omega = 1 so a rotation is fully described by its precession angle.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
from scipy.linalg import schur

from .errors import NotNormalizedError

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)

PAULI = {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}
_AXIS_INDEX = {0: "x", 1: "y", 2: "z"}

AXIS_TOL = 1e-9
DEGENERACY_TOL = 1e-8
GAUGE_TOL = 1e-12


def pauli(k: str | int) -> np.ndarray:
    """Return the Pauli matrix for axis ``'x'``, ``'y'``, ``'z'`` (or 0, 1, 2)."""
    key = _AXIS_INDEX.get(k, k) if isinstance(k, int) else str(k).lower()
    try:
        return PAULI[key].copy()
    except KeyError:
        raise ValueError(f"unknown Pauli axis {k!r}") from None


def wrap_phase(x):
    """Wrap angles to the half-open branch (-pi, pi]."""
    w = np.pi - np.mod(np.pi - np.asarray(x, dtype=float), 2.0 * np.pi)
    if np.ndim(w) == 0:
        return float(w)
    return w


def as_unit_axis(axis, tol: float = AXIS_TOL) -> np.ndarray:
    n = np.asarray(axis, dtype=float).reshape(3)
    if not np.all(np.isfinite(n)) or abs(np.linalg.norm(n) - 1.0) > tol:
        raise NotNormalizedError("axis not normalized")
    return n


def sigma_dot(n) -> np.ndarray:
    """n . sigma for a real 3-vector ``n``."""
    return n[0] * SIGMA_X + n[1] * SIGMA_Y + n[2] * SIGMA_Z


def rotation(axis, angle: float) -> np.ndarray:
    """exp(-i angle (axis . sigma) / 2) for a unit ``axis``."""
    n = as_unit_axis(axis)
    return np.cos(angle / 2.0) * IDENTITY - 1j * np.sin(angle / 2.0) * sigma_dot(n)


def rodrigues(axis, angle: float) -> np.ndarray:
    """Real 3x3 matrix rotating Bloch vectors by ``angle`` about ``axis``."""
    n = as_unit_axis(axis)
    k = np.array([[0.0, -n[2], n[1]], [n[2], 0.0, -n[0]], [-n[1], n[0], 0.0]])
    return np.eye(3) + np.sin(angle) * k + (1.0 - np.cos(angle)) * (k @ k)


def rotz(alpha: float) -> np.ndarray:
    c, s = np.cos(alpha), np.sin(alpha)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def normalize(state) -> np.ndarray:
    psi = np.asarray(state, dtype=complex)
    return psi / np.linalg.norm(psi)


def is_unitary(U, tol: float = 1e-12) -> bool:
    U = np.asarray(U, dtype=complex)
    return bool(np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0]))) < tol)


def bloch_from_state(state) -> np.ndarray:
    """Bloch vector (<sigma_x>, <sigma_y>, <sigma_z>) of a qubit state.

    Accepts a single state of shape (2,) or a stack of shape (..., 2).
    """
    psi = np.asarray(state, dtype=complex)
    a, b = psi[..., 0], psi[..., 1]
    cross = np.conj(a) * b
    return np.stack(
        [2.0 * cross.real, 2.0 * cross.imag, np.abs(a) ** 2 - np.abs(b) ** 2],
        axis=-1,
    )


def state_from_bloch(r) -> np.ndarray:
    """Pure state with Bloch vector ``r``.

    Gauge: the |0> amplitude is real and non-negative; when it vanishes the
    |1> amplitude is real and positive.
    """
    x, y, z = as_unit_axis(r)
    a0 = np.sqrt(max(0.0, (1.0 + z) / 2.0))
    a1 = np.sqrt(max(0.0, (1.0 - z) / 2.0))
    if a0 <= GAUGE_TOL:
        return np.array([0.0, 1.0], dtype=complex)
    return np.array([a0, a1 * np.exp(1j * np.arctan2(y, x))], dtype=complex)


def gauge_fix(v) -> np.ndarray:
    """Rotate the global phase so the first non-negligible component is real positive."""
    v = np.asarray(v, dtype=complex)
    for comp in v:
        if abs(comp) > GAUGE_TOL:
            return v * (abs(comp) / comp)
    return v


class Eigensystem(NamedTuple):
    """Eigenphases in (-pi, pi] (ascending) and eigenvectors as columns."""

    phases: np.ndarray
    vectors: np.ndarray
    degenerate: bool

    def pairs(self):
        return [(float(p), self.vectors[:, k]) for k, p in enumerate(self.phases)]


def _circular_gap(a: float, b: float) -> float:
    return abs(wrap_phase(a - b))


def eig_unitary(U, degeneracy_tol: float = DEGENERACY_TOL) -> Eigensystem:
    """Eigendecomposition of a unitary via complex Schur form.

    For a normal matrix the Schur factor is diagonal, so the Schur vectors are
    an orthonormal eigenbasis even inside degenerate eigenspaces.
    """
    U = np.asarray(U, dtype=complex)
    T, Z = schur(U, output="complex")
    phases = wrap_phase(np.angle(np.diag(T)))
    vectors = np.array([gauge_fix(Z[:, k]) for k in range(U.shape[0])]).T

    order = np.argsort(phases, kind="stable")
    phases, vectors = phases[order], vectors[:, order]

    # group near-equal phases (circularly, so -pi+eps joins pi) into clusters
    n = len(phases)
    clusters: list[list[int]] = [[0]]
    for k in range(1, n):
        if _circular_gap(phases[k], phases[k - 1]) < degeneracy_tol:
            clusters[-1].append(k)
        else:
            clusters.append([k])
    if n > 1 and len(clusters) > 1 and _circular_gap(phases[0], phases[-1]) < degeneracy_tol:
        clusters[0] = clusters.pop() + clusters[0]
    degenerate = any(len(c) > 1 for c in clusters)

    def lex_key(k):
        v = vectors[:, k]
        # descending order puts |0>-like vectors first
        return tuple(np.round(np.column_stack([v.real, v.imag]).ravel(), 12))

    new_order = []
    for cluster in sorted(clusters, key=lambda c: phases[c[0]]):
        new_order.extend(sorted(cluster, key=lex_key, reverse=True))
    return Eigensystem(phases[new_order], vectors[:, new_order], degenerate)


def fidelity_up_to_global_phase(U, V) -> float:
    """|tr(U^dagger V)| / N."""
    U = np.asarray(U, dtype=complex)
    V = np.asarray(V, dtype=complex)
    if U.shape != V.shape or U.ndim != 2 or U.shape[0] != U.shape[1]:
        raise ValueError(f"dimension mismatch: {U.shape} vs {V.shape}")
    return float(min(1.0, abs(np.trace(U.conj().T @ V)) / U.shape[0]))
