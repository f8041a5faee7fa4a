"""Root finding for trivial dynamical phase in the two-pulse scheme.

For alpha = 0 the gate is U = c I - i v.sigma with

    c = cos(t1/2) cos(t2/2) - sin(t1/2) sin(t2/2) sin(phi)
    v = (-cos(t1/2) sin(t2/2) cos(phi),
         cos(t2/2) sin(t1/2) + cos(t1/2) sin(t2/2) sin(phi),
         sin(t1/2) sin(t2/2) cos(phi))

and psi_+ has Bloch axis -v/|v|.  Hence 2*delta = g / |v| with the smooth
numerator

    g = t1 (a2 s1 + a1 s2 sin phi) + t2 (a1 s2 + a2 s1 sin phi),

(a = cos, s = sin of the half angles).  Brackets are located on g, which has
no label-flip jumps; residuals are always re-evaluated with
``phases.delta_closed_form``.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import partial

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DegenerateGateError, NotARootError
from .phases import delta_closed_form
from .su2 import wrap_phase
from .two_pulse import TwoPulseParams, eigen_axis, rotation_vector, trace_half

log = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
THETA2_RANGE = (0.0, 3.0 * math.pi)
THETA2_SAMPLES = 2048
ROOT_TOL = 1e-10
XTOL = 1e-12
DEGENERACY_TOL = 1e-8
BRANCH_BREAK = 0.1 * math.pi
SURFACE_THETA1_STEPS = 256
MODES = ("strict", "mod2pi")
CASES = ("pp", "pm", "mp", "mm")


def delta_numerator(theta1, theta2, phi):
    """g = |v| * 2 delta; smooth in all three angles, elementwise on arrays."""
    a1, s1 = np.cos(theta1 / 2), np.sin(theta1 / 2)
    a2, s2 = np.cos(theta2 / 2), np.sin(theta2 / 2)
    sphi = np.sin(phi)
    return theta1 * (a2 * s1 + a1 * s2 * sphi) + theta2 * (a1 * s2 + a2 * s1 * sphi)


def two_delta_fast(theta1, theta2, phi):
    """2 delta from the rotation vector; NaN where the gate is degenerate."""
    g = delta_numerator(theta1, theta2, phi)
    vnorm = np.linalg.norm(rotation_vector(theta1, theta2, phi), axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(vnorm > 0.0, g / vnorm, np.nan)


def is_degenerate(params: TwoPulseParams, tol: float = DEGENERACY_TOL) -> bool:
    return abs(float(trace_half(params.theta1, params.theta2, params.phi))) > 1.0 - tol


def delta_residual(params: TwoPulseParams, strict: bool = False) -> float:
    """wrap(2 delta) in (-pi, pi]; the unwrapped 2 delta when ``strict``."""
    two_delta = 2.0 * delta_closed_form(params)
    return two_delta if strict else wrap_phase(two_delta)


def two_gamma(params: TwoPulseParams) -> float:
    """gamma_+ - gamma_- = (arg lambda_+ - arg lambda_-) - (delta_+ - delta_-), wrapped."""
    v = rotation_vector(params.theta1, params.theta2, params.phi)
    c = float(trace_half(params.theta1, params.theta2, params.phi))
    arg_plus = math.atan2(float(np.linalg.norm(v)), c)
    return wrap_phase(2.0 * arg_plus - 2.0 * delta_closed_form(params))


@dataclass(frozen=True)
class RootRecord:
    theta1: float
    phi: float
    theta2: float
    residual: float
    two_gamma: float
    eigen_axis: tuple[float, float, float]
    total_precession: float
    degenerate: bool = False
    tangent: bool = False
    # +1: two_gamma / eigen_axis refer to psi_+; -1: relabelled to psi_- by continuation
    label: int = 1

    @property
    def params(self) -> TwoPulseParams:
        return TwoPulseParams(self.theta1, self.theta2, self.phi)


def make_record(params: TwoPulseParams, tangent: bool = False) -> RootRecord:
    if is_degenerate(params):
        raise DegenerateGateError("gate is proportional to the identity")
    residual = abs(delta_residual(params))
    return RootRecord(
        theta1=params.theta1,
        phi=params.phi,
        theta2=params.theta2,
        residual=residual,
        two_gamma=two_gamma(params),
        eigen_axis=tuple(float(x) for x in eigen_axis(params.with_alpha(0.0))),
        total_precession=params.total_precession,
        tangent=tangent,
    )


def relabel(record: RootRecord) -> RootRecord:
    """Report the same root from the point of view of the other eigenvector."""
    return replace(
        record,
        two_gamma=wrap_phase(-record.two_gamma),
        eigen_axis=tuple(-x for x in record.eigen_axis),
        label=-record.label,
    )


def _bisect(f, lo, hi, flo, xtol=0.0, max_iter=200):
    """Vectorized bisection on brackets [lo, hi] with sign(f(lo)) = sign(flo) != sign(f(hi)).

    The default runs until the brackets collapse to adjacent floats: near
    degenerate gates 2 delta is steep enough that a 1e-12 bracket is too loose.
    """
    lo, hi, flo = (np.array(a, dtype=float) for a in (lo, hi, flo))
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        done = (hi - lo <= xtol) | (mid == lo) | (mid == hi)
        if np.all(done):
            break
        fm = f(mid)
        keep_lo = np.sign(fm) == np.sign(flo)
        lo = np.where(done, lo, np.where(keep_lo, mid, lo))
        flo = np.where(done, flo, np.where(keep_lo, fm, flo))
        hi = np.where(done, hi, np.where(keep_lo, hi, mid))
    return 0.5 * (lo + hi)


def _sign_change_brackets(f: np.ndarray) -> np.ndarray:
    s = np.sign(f)
    return np.nonzero((s[:-1] * s[1:] < 0) & np.isfinite(f[:-1]) & np.isfinite(f[1:]))[0]


def _near_pair_candidates(f: np.ndarray) -> np.ndarray:
    """Interior grid points where |f| has a local minimum without a sign change."""
    a = np.abs(f)
    s = np.sign(f)
    inner = np.arange(1, len(f) - 1)
    mask = (
        (a[inner] <= a[inner - 1])
        & (a[inner] < a[inner + 1])
        & (s[inner - 1] == s[inner])
        & (s[inner] == s[inner + 1])
        & (s[inner] != 0)
    )
    return inner[mask]


def _strict_roots(theta1, phi, grid, f, tol):
    func = partial(delta_numerator, theta1, phi=phi)
    roots: list[tuple[float, bool]] = [(float(x), False) for x in grid[f == 0.0]]

    idx = _sign_change_brackets(f)
    if idx.size:
        roots += [(float(x), False) for x in _bisect(func, grid[idx], grid[idx + 1], f[idx])]

    # two simple roots inside one grid cell, or a double root (tangency)
    for i in _near_pair_candidates(f):
        orient = np.sign(f[i])
        lo, hi = grid[i - 1], grid[i + 1]
        res = minimize_scalar(
            lambda x: orient * func(x), bounds=(lo, hi), method="bounded", options={"xatol": 1e-13}
        )
        xmin, fmin = float(res.x), orient * float(res.fun)
        if orient * fmin < 0.0:
            left = _bisect(func, [lo], [xmin], [f[i - 1]])[0]
            right = _bisect(func, [xmin], [hi], [fmin])[0]
            roots += [(float(left), False), (float(right), False)]
        else:
            p = TwoPulseParams(theta1, xmin, phi)
            if not is_degenerate(p) and abs(delta_residual(p, strict=True)) < tol:
                roots.append((xmin, True))
    return roots


def _mod2pi_roots(theta1, phi, grid, tol):
    two_delta = two_delta_fast(theta1, grid, phi)
    w = wrap_phase(np.nan_to_num(two_delta, nan=np.pi))
    roots: list[tuple[float, bool]] = [(float(x), False) for x in grid[w == 0.0]]
    for i in _sign_change_brackets(w):
        mid = 0.5 * (grid[i] + grid[i + 1])
        mid_value = float(two_delta_fast(theta1, mid, phi))
        # wrap discontinuities at +/-pi look like sign changes
        if not np.isfinite(mid_value) or abs(wrap_phase(mid_value)) > math.pi / 2:
            continue
        shift = TWO_PI * round(mid_value / TWO_PI)
        func = lambda x, s=shift: two_delta_fast(theta1, x, phi) - s  # noqa: E731
        lo_val = two_delta[i] - shift
        roots.append((float(_bisect(func, [grid[i]], [grid[i + 1]], [lo_val])[0]), False))
    return roots


def find_theta2_roots(
    theta1: float,
    phi: float,
    theta2_range: tuple[float, float] = THETA2_RANGE,
    mode: str = "strict",
    samples: int = THETA2_SAMPLES,
    tol: float = ROOT_TOL,
) -> list[RootRecord]:
    """All isolated roots of 2 delta = 0 (or 0 mod 2 pi) for theta2 in ``theta2_range``."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    lo, hi = (float(x) for x in theta2_range)
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi <= lo:
        raise ValueError("theta2 range must be a finite interval")
    grid = np.linspace(lo, hi, samples)
    if mode == "strict":
        raw = _strict_roots(theta1, phi, grid, delta_numerator(theta1, grid, phi), tol)
    else:
        raw = _mod2pi_roots(theta1, phi, grid, tol)

    records: list[RootRecord] = []
    for theta2, tangent in sorted(raw):
        params = TwoPulseParams(theta1, theta2, phi)
        if not lo + XTOL < theta2 < hi - XTOL:
            continue
        if is_degenerate(params):
            log.debug("skipping degenerate point %s", params)
            continue
        rec = make_record(params, tangent=tangent)
        if rec.residual >= tol:
            log.debug("rejecting bracket at %s, residual %.3g", params, rec.residual)
            continue
        if records and abs(records[-1].theta2 - theta2) < 1e-9:
            continue
        records.append(rec)
    return records


def default_phi_grid(steps: int = 2048, lo: float = 0.0, hi: float = TWO_PI) -> np.ndarray:
    """Cell-centred grid on the open interval (lo, hi)."""
    if steps < 1:
        raise ValueError("need at least one phi step")
    return lo + (np.arange(steps) + 0.5) * (hi - lo) / steps


@dataclass
class RootTable:
    theta1: float
    phi_grid: np.ndarray
    branches: list[tuple[int, list[RootRecord]]] = field(default_factory=list)

    def records(self):
        """(branch id, record) pairs sorted by (branch, phi)."""
        for bid, recs in self.branches:
            for rec in recs:
                yield bid, rec

    def counts(self) -> np.ndarray:
        """Number of roots at each phi grid point."""
        index = {float(p): k for k, p in enumerate(self.phi_grid)}
        out = np.zeros(len(self.phi_grid), dtype=int)
        for _, rec in self.records():
            out[index[rec.phi]] += 1
        return out

    def __len__(self) -> int:
        return sum(len(recs) for _, recs in self.branches)


def _stitch(
    phi_grid: np.ndarray, per_phi: list[list[RootRecord]], branch_break: float
) -> list[tuple[int, list[RootRecord]]]:
    branches: list[list[RootRecord]] = []
    last_step: list[int] = []
    for step, roots in enumerate(per_phi):
        candidates = []
        for b, recs in enumerate(branches):
            if last_step[b] != step - 1:
                continue
            pred = recs[-1].theta2
            if len(recs) > 1:
                prev, last = recs[-2], recs[-1]
                slope = (last.theta2 - prev.theta2) / (last.phi - prev.phi)
                pred = last.theta2 + slope * (phi_grid[step] - last.phi)
            for r, rec in enumerate(roots):
                candidates.append((abs(rec.theta2 - pred), b, r))
        taken_b, taken_r = set(), set()
        for dist, b, r in sorted(candidates):
            if b in taken_b or r in taken_r or dist > branch_break:
                continue
            taken_b.add(b)
            taken_r.add(r)
            rec = roots[r]
            # keep following the same eigenvector through label flips
            if np.dot(rec.eigen_axis, branches[b][-1].eigen_axis) < 0.0:
                rec = relabel(rec)
            branches[b].append(rec)
            last_step[b] = step
        for r, rec in enumerate(roots):
            if r not in taken_r:
                branches.append([rec])
                last_step.append(step)
    return list(enumerate(branches))


def _roots_for_phi(phi, theta1, theta2_range, mode, samples, tol):
    return find_theta2_roots(theta1, phi, theta2_range, mode, samples, tol)


def scan_roots(
    theta1: float,
    phi_grid=None,
    theta2_range: tuple[float, float] = THETA2_RANGE,
    mode: str = "strict",
    samples: int = THETA2_SAMPLES,
    tol: float = ROOT_TOL,
    branch_break: float = BRANCH_BREAK,
    workers: int = 1,
) -> RootTable:
    """Roots on every phi of the grid, stitched into continuous branches."""
    phi_grid = default_phi_grid() if phi_grid is None else np.asarray(phi_grid, dtype=float)
    if np.any(np.diff(phi_grid) <= 0):
        raise ValueError("phi grid must be strictly increasing")
    job = partial(
        _roots_for_phi, theta1=theta1, theta2_range=theta2_range, mode=mode, samples=samples, tol=tol
    )
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            per_phi = list(pool.map(job, phi_grid, chunksize=64))
    else:
        per_phi = [job(phi) for phi in phi_grid]
    return RootTable(float(theta1), phi_grid, _stitch(phi_grid, per_phi, branch_break))


def gp_at_root(record: RootRecord, tol: float = ROOT_TOL) -> float:
    """2 gamma of a root, from the point of view of the record's eigenvector label."""
    params = record.params
    if is_degenerate(params):
        raise DegenerateGateError("gate is proportional to the identity")
    if abs(delta_residual(params)) >= tol:
        raise NotARootError(f"{params} is not a root")
    value = two_gamma(params)
    return value if record.label == 1 else wrap_phase(-value)


def symmetry_map(record: RootRecord, case: str, tol: float = ROOT_TOL) -> RootRecord:
    """Image of a (+,+) root under the sign-case maps of the rotation directions.

    pm: (phi, theta2) -> (2pi - phi, -theta2)
    mp: (theta1, phi) -> (-theta1, 2pi - phi)
    mm: (theta1, theta2) -> (-theta1, -theta2)
    """
    if case not in CASES:
        raise ValueError(f"case must be one of {CASES}")
    p = record.params
    if abs(delta_residual(p)) >= tol:
        raise NotARootError(f"{p} is not a root")
    mirrored = (TWO_PI - p.phi) % TWO_PI
    image = {
        "pp": p,
        "pm": TwoPulseParams(p.theta1, -p.theta2, mirrored),
        "mp": TwoPulseParams(-p.theta1, p.theta2, mirrored),
        "mm": TwoPulseParams(-p.theta1, -p.theta2, p.phi),
    }[case]
    out = make_record(image, tangent=record.tangent)
    # keep the input's eigenvector labelling so 2 gamma values are comparable
    return relabel(out) if record.label == -1 else out


def min_total_precession(tables) -> float:
    """Minimum theta1 + theta2 over all positive-angle roots of one or more tables."""
    if isinstance(tables, RootTable):
        tables = [tables]
    values = [
        rec.theta1 + rec.theta2
        for table in tables
        for _, rec in table.records()
        if rec.theta1 > 0 and rec.theta2 > 0
    ]
    if not values:
        raise ValueError("no positive-angle roots in table")
    return float(min(values))


# --- surfaces of constant eigenphase splitting -------------------------------------------------


@dataclass(frozen=True)
class SurfacePoint:
    params: TwoPulseParams
    eigen_axis: tuple[float, float, float]
    two_gamma: float
    residual: float


def level_trace(two_gamma_target: float) -> float:
    """Value of c = tr(U)/2 at which a root has the requested 2 gamma."""
    t = wrap_phase(two_gamma_target)
    return math.cos(t / 2) if t >= 0 else -math.cos(t / 2)


def _level_theta2(theta1, phi, c_target, sign, k, psi0_ref=None):
    """theta2 on the branch (sign, k) of the curve c(theta1, theta2, phi) = c_target."""
    a1 = np.cos(theta1 / 2)
    b = np.sin(theta1 / 2) * np.sin(phi)
    radius = np.hypot(a1, b)
    psi0 = np.arctan2(b, a1)
    if psi0_ref is not None:
        psi0 = psi0 + TWO_PI * np.round((psi0_ref - psi0) / TWO_PI)
    with np.errstate(invalid="ignore", divide="ignore"):
        opening = np.arccos(c_target / radius)
    return 2.0 * (-psi0 + sign * opening + TWO_PI * k), psi0


def eigenvector_surface(
    two_gamma_target: float,
    theta1_grid=None,
    phi_grid=None,
    tolerance: float = 1e-8,
    theta2_range: tuple[float, float] = THETA2_RANGE,
    tol: float = ROOT_TOL,
) -> list[SurfacePoint]:
    """Roots of 2 delta = 0 whose eigenphase splitting equals ``two_gamma_target``.

    For each theta1 the level set of constant 2 gamma is a family of explicit
    curves theta2(phi); 2 delta is bracketed along them on ``phi_grid`` and
    refined by bisection in phi.  Points are kept when |2 gamma - target| <
    ``tolerance`` and the residual is below ``tol``.
    """
    if theta1_grid is None:
        theta1_grid = default_phi_grid(SURFACE_THETA1_STEPS)
    phi_grid = default_phi_grid(1024) if phi_grid is None else np.asarray(phi_grid, dtype=float)
    c_target = level_trace(two_gamma_target)
    if abs(c_target) > 1.0 - DEGENERACY_TOL:
        return []
    lo, hi = theta2_range
    kmin = math.floor(lo / TWO_PI) - 1
    kmax = math.ceil(hi / TWO_PI) + 1
    points: list[SurfacePoint] = []
    for theta1 in np.asarray(theta1_grid, dtype=float):
        psi0_line = np.unwrap(np.arctan2(np.sin(theta1 / 2) * np.sin(phi_grid), np.cos(theta1 / 2)))
        for sign in (1, -1):
            for k in range(kmin, kmax + 1):
                t2, _ = _level_theta2(theta1, phi_grid, c_target, sign, k, psi0_line)
                ok = np.isfinite(t2) & (t2 > lo) & (t2 < hi)
                f = np.where(ok, delta_numerator(theta1, t2, phi_grid), np.nan)
                idx = _sign_change_brackets(f)
                idx = idx[ok[idx] & ok[idx + 1]]
                if not idx.size:
                    continue

                def along(ph, idx=idx, sign=sign, k=k):
                    ref = 0.5 * (psi0_line[idx] + psi0_line[idx + 1])
                    t2_, _ = _level_theta2(theta1, ph, c_target, sign, k, ref)
                    return delta_numerator(theta1, t2_, ph)

                phis = _bisect(along, phi_grid[idx], phi_grid[idx + 1], f[idx])
                ref = 0.5 * (psi0_line[idx] + psi0_line[idx + 1])
                t2_roots, _ = _level_theta2(theta1, phis, c_target, sign, k, ref)
                for ph, t2r in zip(phis, t2_roots):
                    if not (np.isfinite(t2r) and lo < t2r < hi):
                        continue
                    params = TwoPulseParams(float(theta1), float(t2r), float(ph) % TWO_PI)
                    try:
                        rec = make_record(params)
                    except DegenerateGateError:
                        continue
                    if rec.residual >= tol:
                        continue
                    if abs(wrap_phase(rec.two_gamma - two_gamma_target)) >= tolerance:
                        continue
                    points.append(SurfacePoint(params, rec.eigen_axis, rec.two_gamma, rec.residual))
    return points
