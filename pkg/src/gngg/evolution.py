"""Piecewise-constant Hamiltonian evolution of a qubit.

Each segment is a constant Hamiltonian H = (1/2) axis . sigma applied for a
precession angle ``angle`` (negative angles rotate counter-clockwise).  The
whole program is parametrized by s in [0, 1], proportional to the accumulated
|angle|, so s = 0 is the identity and s = 1 is the full gate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .su2 import IDENTITY, as_unit_axis, bloch_from_state, normalize, rotation, sigma_dot

DEFAULT_SAMPLES = 4096


@dataclass(frozen=True, eq=False)
class PulseSegment:
    axis: np.ndarray
    angle: float

    def __post_init__(self):
        object.__setattr__(self, "axis", as_unit_axis(self.axis))
        object.__setattr__(self, "angle", float(self.angle))

    @property
    def hamiltonian(self) -> np.ndarray:
        return 0.5 * sigma_dot(self.axis)

    def unitary(self, fraction: float = 1.0) -> np.ndarray:
        return rotation(self.axis, fraction * self.angle)


@dataclass(frozen=True, eq=False)
class PulseProgram:
    segments: tuple[PulseSegment, ...]

    def __post_init__(self):
        segs = tuple(self.segments)
        if not segs:
            raise ValueError("pulse program needs at least one segment")
        object.__setattr__(self, "segments", segs)

    @property
    def total_angle(self) -> float:
        return float(sum(abs(seg.angle) for seg in self.segments))

    def breakpoints(self) -> np.ndarray:
        """Values of s at the start of each segment, plus the final 1.0."""
        total = self.total_angle
        if total == 0.0:
            return np.linspace(0.0, 1.0, len(self.segments) + 1)
        cum = np.concatenate([[0.0], np.cumsum([abs(seg.angle) for seg in self.segments])])
        cum /= total
        cum[-1] = 1.0
        return cum

    def gate(self) -> np.ndarray:
        return propagator(self, 1.0)


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    bloch: np.ndarray
    junctions: tuple[int, ...] = field(default=())

    def __len__(self) -> int:
        return len(self.times)


def propagator(program: PulseProgram, s: float) -> np.ndarray:
    """U(s): ordered product of the (partial) segment rotations up to parameter s."""
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"s={s} outside [0, 1]")
    U = IDENTITY.copy()
    if s == 1.0:
        for seg in program.segments:
            U = seg.unitary() @ U
        return U
    remaining = s * program.total_angle
    for seg in program.segments:
        span = abs(seg.angle)
        if remaining <= 0.0:
            break
        frac = 1.0 if remaining >= span else remaining / span
        U = seg.unitary(frac) @ U
        remaining -= span
    return U


def _segment_states(seg: PulseSegment, start: np.ndarray, n: int) -> np.ndarray:
    u = np.linspace(0.0, 1.0, n)
    half = 0.5 * seg.angle * u
    ns = sigma_dot(seg.axis) @ start
    return np.cos(half)[:, None] * start[None, :] - 1j * np.sin(half)[:, None] * ns[None, :]


def trajectory(
    program: PulseProgram, initial, samples_per_segment: int = DEFAULT_SAMPLES
) -> Trajectory:
    """Sample U(s)|initial> densely; segment junctions appear exactly once.

    Every nonzero-angle segment contributes ``samples_per_segment`` points
    including both endpoints (the shared junction point is not repeated).
    """
    if samples_per_segment < 2:
        raise ValueError("samples_per_segment must be >= 2")
    psi = normalize(initial)
    if psi.shape != (2,):
        raise ValueError("trajectories are defined for single-qubit states")
    bp = program.breakpoints()
    active = [k for k, seg in enumerate(program.segments) if seg.angle != 0.0]
    if not active:
        states = np.array([psi, psi])
        times = np.array([0.0, 1.0])
        return Trajectory(times, states, bloch_from_state(states), (0, 1))

    times, chunks, junctions = [], [], [0]
    current = psi
    for k in active:
        seg = program.segments[k]
        pts = _segment_states(seg, current, samples_per_segment)
        t = np.linspace(bp[k], bp[k + 1], samples_per_segment)
        if chunks:
            pts, t = pts[1:], t[1:]
        chunks.append(pts)
        times.append(t)
        # restart from the exact segment unitary to keep junctions consistent with propagator
        current = seg.unitary() @ current
        chunks[-1][-1] = current
        junctions.append(sum(len(c) for c in chunks) - 1)
    states = np.concatenate(chunks)
    times = np.concatenate(times)
    times[0], times[-1] = 0.0, 1.0
    return Trajectory(times, states, bloch_from_state(states), tuple(junctions))
