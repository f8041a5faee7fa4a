"""Genuinely noncyclic geometric gates from two geodesic pulses on the Bloch sphere."""

from .errors import (
    DegenerateGateError,
    GNGGError,
    NotARootError,
    NotEigenstateError,
    NotNormalizedError,
    TargetOutsideSurfaceError,
    UndefinedPhaseError,
    UnrealizableTargetError,
)
from .evolution import PulseProgram, PulseSegment, Trajectory, propagator, trajectory
from .phases import (
    PhaseReport,
    cyclic_gp,
    delta_closed_form,
    dynamical_phase,
    noncyclic_gp,
    pancharatnam_phase,
    phase_report,
)
from .solver import (
    RootRecord,
    RootTable,
    eigenvector_surface,
    find_theta2_roots,
    gp_at_root,
    min_total_precession,
    scan_roots,
    symmetry_map,
)
from .su2 import bloch_from_state, eig_unitary, pauli, rotation, state_from_bloch
from .synthesis import (
    GateAnalysis,
    GateTarget,
    VerificationReport,
    analyze_gate,
    named_gate,
    synthesize,
    target_from_gate,
    verify_gngg,
)
from .two_pulse import TwoPulseParams, eigensystem_closed_form, gate

__version__ = "0.1.0"
