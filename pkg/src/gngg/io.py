"""Angle parsing, deterministic number formatting and CSV/JSON emission."""

from __future__ import annotations

import csv
import io
import json
import math
import re

import numpy as np

from .solver import RootTable
from .synthesis import GateAnalysis, SynthesisResult, VerificationReport
from .evolution import Trajectory

SCAN_COLUMNS = (
    "theta1", "phi", "theta2", "branch", "residual", "two_gamma",
    "axis_x", "axis_y", "axis_z", "total_precession", "tangent_flag",
)
TRACE_COLUMNS = ("s", "x", "y", "z", "re0", "im0", "re1", "im1", "junction")

_ANGLE = re.compile(
    r"""^\s*(?P<sign>[+-]?)\s*
        (?:(?P<coef>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s*\*?\s*)?
        (?P<pi>pi)
        (?:\s*/\s*(?P<div>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?))?\s*$""",
    re.VERBOSE | re.IGNORECASE,
)


def parse_angle(text) -> float:
    """Angles in radians: plain floats, or multiples of pi like '0.9pi', '-pi/2', '2*pi'."""
    if isinstance(text, (int, float)):
        value = float(text)
    else:
        m = _ANGLE.match(str(text))
        if m:
            value = float(m.group("coef") or 1.0) * math.pi
            if m.group("div"):
                value /= float(m.group("div"))
            if m.group("sign") == "-":
                value = -value
        else:
            try:
                value = float(str(text).strip())
            except ValueError:
                raise ValueError(f"invalid angle {text!r}") from None
    if not math.isfinite(value):
        raise ValueError(f"invalid angle {text!r}")
    return value


def parse_vector(text, size: int = 3) -> np.ndarray:
    parts = text if isinstance(text, (list, tuple)) else str(text).split(",")
    if len(parts) != size:
        raise ValueError(f"expected {size} comma-separated components, got {text!r}")
    return np.array([parse_angle(p) for p in parts], dtype=float)


def fmt(x) -> str:
    """Shortest repr that round-trips exactly (at most 17 significant digits)."""
    x = float(x)
    if x == 0.0:
        return "0"  # also folds -0.0
    if math.isnan(x):
        return "nan"
    return repr(x)


def _json_number(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _csv_text(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    writer.writerows(rows)
    return buf.getvalue()


# --- scan --------------------------------------------------------------------------------------


def scan_rows(table: RootTable) -> list[list[str]]:
    rows = []
    for b, r in sorted(table.records(), key=lambda item: (item[0], item[1].phi)):
        rows.append(
            [
                fmt(r.theta1), fmt(r.phi), fmt(r.theta2), str(b), fmt(r.residual),
                fmt(r.two_gamma), fmt(r.eigen_axis[0]), fmt(r.eigen_axis[1]),
                fmt(r.eigen_axis[2]), fmt(r.total_precession), str(int(r.tangent)),
            ]
        )
    return rows


def scan_csv(table: RootTable) -> str:
    return _csv_text(SCAN_COLUMNS, scan_rows(table))


def scan_json(table: RootTable) -> str:
    records = [
        {col: (int(v) if col in ("branch", "tangent_flag") else float(v)) for col, v in zip(SCAN_COLUMNS, row)}
        for row in scan_rows(table)
    ]
    return dumps({"theta1": table.theta1, "roots": records})


def read_scan_csv(text: str) -> list[dict]:
    reader = csv.DictReader(io.StringIO(text))
    out = []
    for row in reader:
        out.append(
            {k: (int(v) if k in ("branch", "tangent_flag") else float(v)) for k, v in row.items()}
        )
    return out


# --- trace -------------------------------------------------------------------------------------


def trace_rows(traj: Trajectory) -> list[list[str]]:
    junctions = set(traj.junctions)
    rows = []
    for i in range(len(traj)):
        x, y, z = traj.bloch[i]
        a, b = traj.states[i]
        rows.append(
            [fmt(traj.times[i]), fmt(x), fmt(y), fmt(z), fmt(a.real), fmt(a.imag),
             fmt(b.real), fmt(b.imag), "1" if i in junctions else "0"]
        )
    return rows


def trace_csv(traj: Trajectory) -> str:
    return _csv_text(TRACE_COLUMNS, trace_rows(traj))


def trace_json(traj: Trajectory) -> str:
    return dumps(
        {
            "columns": list(TRACE_COLUMNS),
            "rows": [[float(v) for v in row[:-1]] + [int(row[-1])] for row in trace_rows(traj)],
        }
    )


# --- reports -----------------------------------------------------------------------------------


def matrix_json(U) -> list:
    return [[[_json_number(z.real), _json_number(z.imag)] for z in row] for row in np.asarray(U)]


def verification_dict(report: VerificationReport) -> dict:
    return {
        "cond_i_residual": _json_number(report.condition_i_residual),
        "cond_ii_residual": _json_number(report.condition_ii_residual),
        "cond_ii_numeric": _json_number(report.condition_ii_numeric),
        "fidelity": _json_number(report.gate_fidelity),
        "undefined_basis": report.undefined_basis,
    }


def params_dict(params) -> dict:
    return {
        "theta1": params.theta1,
        "theta2": params.theta2,
        "phi": params.phi,
        "alpha": params.alpha,
    }


def synthesis_json(result: SynthesisResult) -> str:
    return dumps(
        {
            "params": params_dict(result.params),
            "matrix": matrix_json(result.matrix),
            "target": {
                "two_gamma": result.target.two_gamma,
                "eigen_axis": list(result.target.eigen_axis),
            },
            "verification": verification_dict(result.verification),
        }
    )


def verification_json(params, report: VerificationReport, tol: float) -> str:
    return dumps(
        {
            "params": params_dict(params),
            "verification": verification_dict(report),
            "tol": tol,
            "passed": report.passed(tol),
        }
    )


def analysis_json(analysis: GateAnalysis) -> str:
    basis = [
        {"amp": amp, "phase": phase, "undefined": phase is None}
        for amp, phase in zip(analysis.amplitudes, analysis.noncyclic_phases)
    ]
    return dumps(
        {
            "basis": basis,
            "eigenphases": analysis.eigenphases,
            "noncyclic_differences": analysis.noncyclic_differences,
            "eigenphase_differences": analysis.eigenphase_differences,
            "realizable": analysis.realizable,
        }
    )
