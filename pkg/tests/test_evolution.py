import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gngg.errors import NotNormalizedError
from gngg.evolution import PulseProgram, PulseSegment, propagator, trajectory
from gngg.su2 import IDENTITY, rotation, state_from_bloch

angle = st.floats(-2 * math.pi, 2 * math.pi, allow_nan=False)


def two_segment(t1=1.0, t2=0.5):
    return PulseProgram((PulseSegment((0, 1, 0), t1), PulseSegment((1, 0, 0), t2)))


def test_segment_validates_axis():
    with pytest.raises(NotNormalizedError):
        PulseSegment((0, 2, 0), 1.0)


def test_empty_program_rejected():
    with pytest.raises(ValueError):
        PulseProgram(())


def test_propagator_examples():
    prog = two_segment()
    assert np.allclose(propagator(prog, 0.0), IDENTITY)
    U = rotation((1, 0, 0), 0.5) @ rotation((0, 1, 0), 1.0)
    assert np.allclose(propagator(prog, 1.0), U)
    assert np.allclose(prog.gate(), U)
    # s is proportional to accumulated |angle|: s = 1/1.5 ends the first segment
    assert np.allclose(propagator(prog, 1.0 / 1.5), rotation((0, 1, 0), 1.0))


def test_propagator_rejects_bad_s():
    with pytest.raises(ValueError):
        propagator(two_segment(), 1.5)


def test_breakpoints_and_zero_segment():
    prog = PulseProgram((PulseSegment((0, 1, 0), 1.0), PulseSegment((1, 0, 0), 0.0)))
    assert np.allclose(prog.breakpoints(), [0, 1, 1])
    traj = trajectory(prog, [1, 0], 5)
    assert len(traj) == 5


def test_zero_program_trajectory_is_constant():
    prog = PulseProgram((PulseSegment((0, 0, 1), 0.0),))
    traj = trajectory(prog, [0, 1], 10)
    assert len(traj) == 2
    assert np.allclose(traj.states, [[0, 1], [0, 1]])


def test_single_arc_in_xz_plane():
    prog = PulseProgram((PulseSegment((0, 1, 0), 2.0), PulseSegment((0, 1, 0), 0.0)))
    traj = trajectory(prog, [1, 0], 64)
    assert np.max(np.abs(traj.bloch[:, 1])) < 1e-12
    assert np.allclose(traj.bloch[-1], [math.sin(2.0), 0, math.cos(2.0)])


@settings(max_examples=40)
@given(angle, angle, st.floats(0, 2 * math.pi), st.floats(-1, 1))
def test_trajectory_consistent_with_propagator(t1, t2, phi, z):
    prog = PulseProgram(
        (PulseSegment((0, 1, 0), t1), PulseSegment((math.cos(phi), math.sin(phi), 0), t2))
    )
    r = np.array([math.sqrt(1 - z * z), 0.0, z])
    psi = state_from_bloch(r)
    traj = trajectory(prog, psi, 33)
    assert np.allclose(np.linalg.norm(traj.states, axis=1), 1.0, atol=1e-12)
    for s, state in zip(traj.times[::7], traj.states[::7]):
        assert np.allclose(state, propagator(prog, s) @ psi, atol=1e-11)
    assert np.allclose(traj.states[-1], prog.gate() @ psi, atol=1e-12)
    assert traj.times[0] == 0.0 and traj.times[-1] == 1.0
    assert np.all(np.diff(traj.times) >= 0)


def test_junctions_are_marked_once():
    traj = trajectory(two_segment(), [1, 0], 10)
    assert len(traj) == 19
    assert traj.junctions == (0, 9, 18)
    assert np.isclose(traj.times[9], 1.0 / 1.5)


def test_geodesic_energy_vanishes():
    # axis orthogonal to the initial Bloch vector: <H> = 0 along the whole arc
    seg = PulseSegment((0, 1, 0), 2.5)
    traj = trajectory(PulseProgram((seg,)), state_from_bloch((0.6, 0, 0.8)), 200)
    assert np.max(np.abs(0.5 * traj.bloch @ seg.axis)) < 1e-10
