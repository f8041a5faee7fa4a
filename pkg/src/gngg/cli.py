"""Command-line interface: scan, synthesize, analyze, trace, verify.

Exit codes: 0 success, 1 usage or parse error, 2 I/O error, 3 unrealizable
target (or failed verification), 4 degenerate gate.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import io as gio
from . import solver
from .errors import DegenerateGateError, GNGGError, UnrealizableTargetError
from .evolution import DEFAULT_SAMPLES, trajectory
from .su2 import state_from_bloch
from .synthesis import (
    GATE_NAMES,
    GateTarget,
    analyze_gate,
    named_gate,
    synthesize,
    target_from_gate,
    verify_gngg,
)
from .two_pulse import TwoPulseParams, eigensystem_closed_form, program

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_UNREALIZABLE, EXIT_DEGENERATE = 0, 1, 2, 3, 4

DEFAULTS = {
    "scan": {
        "theta1": None,
        "phi_min": 0.0,
        "phi_max": 2 * math.pi,
        "phi_steps": 2048,
        "theta2_min": solver.THETA2_RANGE[0],
        "theta2_max": solver.THETA2_RANGE[1],
        "theta2_samples": solver.THETA2_SAMPLES,
        "mode": "strict",
        "tol": solver.ROOT_TOL,
        "workers": 1,
        "format": "csv",
    },
    "synthesize": {
        "gate": None,
        "angle": None,
        "two_gamma": None,
        "axis": None,
        "theta1_steps": 256,
        "match_tol": 1e-3,
        "samples": DEFAULT_SAMPLES,
        "format": "json",
    },
    "analyze": {"gate": None, "angle": None, "format": "json"},
    "trace": {
        "theta1": 0.0,
        "theta2": 0.0,
        "phi": 0.0,
        "alpha": 0.0,
        "gate": None,
        "angle": None,
        "initial": "0",
        "samples": 512,
        "format": "csv",
    },
    "verify": {
        "theta1": 0.0,
        "theta2": 0.0,
        "phi": 0.0,
        "alpha": 0.0,
        "samples": DEFAULT_SAMPLES,
        "tol": 1e-7,
        "format": "json",
    },
}

ANGLE_KEYS = {"theta1", "theta2", "phi", "alpha", "phi_min", "phi_max", "theta2_min",
              "theta2_max", "angle", "two_gamma"}
INT_KEYS = {"phi_steps", "theta2_samples", "workers", "theta1_steps", "samples"}
FLOAT_KEYS = {"tol", "match_tol"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gngg", description="Two-pulse genuinely noncyclic geometric gates.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, formats=("csv", "json")):
        p.add_argument("--config", help="JSON file with option values (flags take precedence)")
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--format", choices=formats, default=None)
        p.add_argument("--degrees", action="store_true", help="show angles in degrees in summaries")

    def params(p):
        for name in ("theta1", "theta2", "phi", "alpha"):
            p.add_argument(f"--{name}", default=None, help="angle, e.g. 0.9pi or 1.25")

    p = sub.add_parser("scan", help="root curves 2 delta = 0 over phi at fixed theta1")
    common(p)
    p.add_argument("--theta1", default=None)
    p.add_argument("--phi-min", default=None)
    p.add_argument("--phi-max", default=None)
    p.add_argument("--phi-steps", default=None)
    p.add_argument("--theta2-min", default=None)
    p.add_argument("--theta2-max", default=None)
    p.add_argument("--theta2-samples", default=None)
    p.add_argument("--mode", choices=solver.MODES, default=None)
    p.add_argument("--tol", default=None)
    p.add_argument("--workers", default=None)

    p = sub.add_parser("synthesize", help="two-pulse parameters for a target gate")
    common(p, ("json",))
    p.add_argument("--gate", default=None, help=f"one of {', '.join(GATE_NAMES[:3])}")
    p.add_argument("--angle", default=None)
    p.add_argument("--two-gamma", default=None)
    p.add_argument("--axis", default=None, help="target axis as x,y,z")
    p.add_argument("--theta1-steps", default=None)
    p.add_argument("--match-tol", default=None)
    p.add_argument("--samples", default=None)

    p = sub.add_parser("analyze", help="phase data of a named gate")
    common(p, ("json",))
    p.add_argument("--gate", default=None, help=", ".join(GATE_NAMES))
    p.add_argument("--angle", default=None)

    p = sub.add_parser("trace", help="Bloch trajectory of a two-pulse program")
    common(p)
    params(p)
    p.add_argument("--gate", default=None, help="synthesize this gate and trace its program")
    p.add_argument("--angle", default=None)
    p.add_argument("--initial", default=None, help="0, 1, +, -, +i, -i, eig+, eig- or x,y,z")
    p.add_argument("--samples", default=None, help="samples per segment")

    p = sub.add_parser("verify", help="check the GNGG conditions for given parameters")
    common(p, ("json",))
    params(p)
    p.add_argument("--samples", default=None)
    p.add_argument("--tol", default=None)
    return parser


def _convert(key, value):
    if value is None:
        return None
    try:
        if key in ANGLE_KEYS:
            return gio.parse_angle(value)
        if key in INT_KEYS:
            out = int(value)
            if out < 2 and key != "workers" or out < 1:
                raise ValueError
            return out
        if key in FLOAT_KEYS:
            out = float(value)
            if not out > 0:
                raise ValueError
            return out
    except (TypeError, ValueError):
        raise UsageError(f"invalid value for {key}: {value!r}") from None
    return value


def resolve_config(args) -> dict:
    """Merge flags > config file > defaults for the selected command."""
    defaults = DEFAULTS[args.command]
    from_file = {}
    if args.config:
        try:
            with open(args.config) as fh:
                raw = json.load(fh)
        except OSError as exc:
            raise OSError(f"cannot read config {args.config}: {exc.strerror}") from exc
        except json.JSONDecodeError as exc:
            raise UsageError(f"config {args.config} is not valid JSON: {exc}") from None
        if not isinstance(raw, dict):
            raise UsageError("config file must hold a JSON object")
        section = raw.get(args.command, {})
        if not isinstance(section, dict):
            raise UsageError(f"config section {args.command!r} must be a JSON object")
        # top-level keys are shared by all commands; a section named after the
        # command is specific to it and overrides them
        known = set(defaults) | {"out"}
        top = {k.replace("-", "_"): v for k, v in raw.items() if k not in DEFAULTS}
        from_file = {k: v for k, v in top.items() if k in known}
        specific = {k.replace("-", "_"): v for k, v in section.items()}
        from_file.update(specific)
        anywhere = {k for cmd in DEFAULTS.values() for k in cmd} | {"out"}
        unknown = (set(top) - anywhere) | (set(specific) - known)
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    cfg = {}
    for key in list(defaults) + ["out"]:
        flag = getattr(args, key, None)
        if flag is not None:
            cfg[key] = flag
        elif key in from_file:
            cfg[key] = from_file[key]
        else:
            cfg[key] = defaults.get(key)
        cfg[key] = _convert(key, cfg[key])
    cfg["degrees"] = args.degrees
    return cfg


def _emit(text: str, out) -> None:
    if out:
        try:
            with open(out, "w", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise OSError(f"cannot write {out}: {exc.strerror}") from exc
    else:
        sys.stdout.write(text)


def _show(x: float, degrees: bool) -> str:
    return f"{math.degrees(x):.6g} deg" if degrees else f"{x:.6g} rad"


def _summary(cfg, message: str) -> None:
    # summaries go to stderr so stdout stays a clean data stream
    if cfg["out"]:
        print(message, file=sys.stderr)


def _target(cfg) -> GateTarget:
    if cfg["gate"] is not None:
        if cfg["two_gamma"] is not None or cfg["axis"] is not None:
            raise UsageError("give either --gate or --two-gamma/--axis, not both")
        return target_from_gate(_gate_matrix(cfg, single_qubit=True))
    if cfg["two_gamma"] is None or cfg["axis"] is None:
        raise UsageError("synthesize needs --gate or both --two-gamma and --axis")
    try:
        axis = gio.parse_vector(cfg["axis"])
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return GateTarget(cfg["two_gamma"], axis)


def _gate_matrix(cfg, single_qubit=False) -> np.ndarray:
    try:
        U = named_gate(cfg["gate"], cfg.get("angle"))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if single_qubit and U.shape != (2, 2):
        raise UsageError(f"gate {cfg['gate']!r} is not a single-qubit gate")
    return U


def _params(cfg) -> TwoPulseParams:
    return TwoPulseParams(cfg["theta1"], cfg["theta2"], cfg["phi"], cfg["alpha"])


def cmd_scan(cfg) -> int:
    if cfg["theta1"] is None:
        raise UsageError("scan needs --theta1")
    if not cfg["phi_min"] < cfg["phi_max"] or not cfg["theta2_min"] < cfg["theta2_max"]:
        raise UsageError("empty phi or theta2 range")
    grid = solver.default_phi_grid(cfg["phi_steps"], cfg["phi_min"], cfg["phi_max"])
    table = solver.scan_roots(
        cfg["theta1"],
        grid,
        theta2_range=(cfg["theta2_min"], cfg["theta2_max"]),
        mode=cfg["mode"],
        samples=cfg["theta2_samples"],
        tol=cfg["tol"],
        workers=cfg["workers"],
    )
    text = gio.scan_csv(table) if cfg["format"] == "csv" else gio.scan_json(table)
    _emit(text, cfg["out"])
    _summary(cfg, f"theta1 = {_show(cfg['theta1'], cfg['degrees'])}: "
                  f"{len(table)} roots on {len(table.branches)} branches")
    return EXIT_OK


def cmd_synthesize(cfg) -> int:
    target = _target(cfg)
    result = synthesize(
        target,
        theta1_grid=solver.default_phi_grid(cfg["theta1_steps"]),
        match_tol=cfg["match_tol"],
        samples=cfg["samples"],
    )
    _emit(gio.synthesis_json(result), cfg["out"])
    p = result.params
    _summary(cfg, "theta1, theta2, phi, alpha = "
                  + ", ".join(_show(x, cfg["degrees"]) for x in (p.theta1, p.theta2, p.phi, p.alpha)))
    return EXIT_OK


def cmd_analyze(cfg) -> int:
    if cfg["gate"] is None:
        raise UsageError("analyze needs --gate")
    analysis = analyze_gate(_gate_matrix(cfg))
    _emit(gio.analysis_json(analysis), cfg["out"])
    _summary(cfg, f"realizable: {analysis.realizable}")
    return EXIT_OK


def _initial_state(label: str, params: TwoPulseParams) -> np.ndarray:
    s = 1 / math.sqrt(2)
    fixed = {
        "0": [1, 0], "1": [0, 1], "+": [s, s], "-": [s, -s], "+i": [s, 1j * s], "-i": [s, -1j * s],
    }
    if label in fixed:
        return np.array(fixed[label], dtype=complex)
    if label in ("eig+", "eig-"):
        eig = eigensystem_closed_form(params)
        return eig.psi_plus if label == "eig+" else eig.psi_minus
    try:
        return state_from_bloch(gio.parse_vector(label))
    except ValueError as exc:
        raise UsageError(f"invalid initial state {label!r}: {exc}") from None


def cmd_trace(cfg) -> int:
    if cfg["gate"] is not None:
        params = synthesize(target_from_gate(_gate_matrix(cfg, single_qubit=True))).params
    else:
        params = _params(cfg)
    psi = _initial_state(str(cfg["initial"]), params)
    traj = trajectory(program(params), psi, cfg["samples"])
    _emit(gio.trace_csv(traj) if cfg["format"] == "csv" else gio.trace_json(traj), cfg["out"])
    _summary(cfg, f"{len(traj)} samples, junctions at rows {list(traj.junctions)}")
    return EXIT_OK


def cmd_verify(cfg) -> int:
    params = _params(cfg)
    report = verify_gngg(params, cfg["samples"])
    _emit(gio.verification_json(params, report, cfg["tol"]), cfg["out"])
    ok = report.passed(cfg["tol"])
    _summary(cfg, "GNGG conditions " + ("satisfied" if ok else "violated"))
    return EXIT_OK if ok else EXIT_UNREALIZABLE


COMMANDS = {
    "scan": cmd_scan,
    "synthesize": cmd_synthesize,
    "analyze": cmd_analyze,
    "trace": cmd_trace,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg)
    except UsageError as exc:
        print(f"gngg: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"gngg: error: {exc}", file=sys.stderr)
        return EXIT_IO
    except UnrealizableTargetError as exc:
        print(f"gngg: error: {exc}", file=sys.stderr)
        return EXIT_UNREALIZABLE
    except DegenerateGateError as exc:
        print(f"gngg: error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (GNGGError, ValueError) as exc:
        print(f"gngg: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
