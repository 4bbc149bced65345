"""Sharpness probe: search family parameters and radii for the largest lhs/rhs ratio.

A coarse grid sweep is followed by a bounded Nelder-Mead refinement.  Everything
is deterministic: fixed grids, fixed simplex coefficients, no random numbers.
"""

from __future__ import annotations

import itertools
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import suite, verify, zoo
from .errors import HypothesisViolated

R_CAP = zoo.R_CAP
STEPS = 200
PROBE_FAMILY = "shifted-halfplane"
BOX = {"c": (1.0, 4.0), "k": (0.0, 0.95), "r": (0.05, R_CAP), "p": (0.05, 0.95)}
# reflection, expansion, contraction, shrink
ALPHA, GAMMA, RHO, SIGMA = 1.0, 2.0, 0.5, 0.5
INITIAL_STEP = 0.05
DEFAULT_GRID = {"c": (1.0, 2.0, 4.0), "k": (0.0, 0.2, 0.5, 0.9)}
DEFAULT_RADII = (0.5, 0.9, 0.99)
DEFAULT_PS = (0.3, 0.5, 0.7)
P_THEOREMS = ("kalaj-1", "kalaj-2")


@dataclass(frozen=True)
class TraceEntry:
    """One evaluated point; ``budget`` is the error budget divided by |rhs|."""

    point: dict
    ratio: float
    budget: float

    def to_dict(self):
        return {"point": dict(sorted(self.point.items())), "ratio": _num(self.ratio),
                "budget": _num(self.budget)}


@dataclass(frozen=True)
class ProbeResult:
    theorem_id: str
    family_id: str
    best_ratio: float
    argmax: dict | None
    trace: tuple
    evaluations: int
    error_budget: float
    r_cap: float = R_CAP
    skipped: tuple = field(default=())

    @property
    def counterexamples(self):
        """Trace entries whose ratio exceeds 1 by more than their budget."""
        if self.theorem_id not in verify.STRICT:
            return []
        return [e for e in self.trace if e.ratio > 1 + e.budget]

    @property
    def safe(self) -> bool:
        return not self.counterexamples

    def to_dict(self, trace: bool = False) -> dict:
        out = {
            "theorem_id": self.theorem_id,
            "family_id": self.family_id,
            "best_ratio": _num(self.best_ratio),
            "argmax": None if self.argmax is None else dict(sorted(self.argmax.items())),
            "evaluations": self.evaluations,
            "error_budget": _num(self.error_budget),
            "r_cap": self.r_cap,
            "skipped": len(self.skipped),
            "safe": self.safe,
        }
        if trace:
            out["trace"] = [e.to_dict() for e in self.trace]
        return out


def _num(x):
    x = float(x)
    return x if math.isfinite(x) else None


def to_json(results, trace: bool = False) -> str:
    return json.dumps([r.to_dict(trace) for r in results], indent=2, sort_keys=True) + "\n"


def ratio_of(report) -> float:
    """lhs/rhs; for a non-positive rhs, 1 - margin/|rhs| (same order, sign-safe)."""
    if report.rhs > 0:
        return report.lhs / report.rhs
    if report.rhs == 0:
        return 1.0 if report.lhs == 0 else math.inf
    return 1.0 - report.margin / abs(report.rhs)


def _relative_budget(report) -> float:
    return report.error_budget / abs(report.rhs) if report.rhs != 0 else math.inf


def evaluate(theorem_id: str, point: dict, family=PROBE_FAMILY) -> TraceEntry:
    """Ratio of one theorem at one point ``{params..., r[, p]}``.

    ``family`` is a zoo family id or a callable mapping the parameter dict to a subject.
    Raises HypothesisViolated when the point does not meet the theorem's hypotheses.
    """
    params = {k: v for k, v in point.items() if k not in ("r", "p")}
    r = point["r"]
    if callable(family):
        subject = family(params)
    else:
        subject = zoo.build(family, params, r_max=r)
    report = suite.dispatch(theorem_id, subject, r, point.get("p"))
    return TraceEntry(dict(point), ratio_of(report), _relative_budget(report))


def _cells(param_grid, r_grid, p_grid):
    if isinstance(param_grid, dict):
        keys = sorted(param_grid)
        params = [dict(zip(keys, vals)) for vals in itertools.product(*(param_grid[k] for k in keys))]
    else:
        params = [dict(p) for p in param_grid]
    cells = []
    for prm, r, p in itertools.product(params, r_grid, p_grid):
        cell = dict(prm, r=float(r))
        if p is not None:
            cell["p"] = float(p)
        cells.append(cell)
    return cells


def _summarize(theorem_id, family, trace, skipped, evaluations) -> ProbeResult:
    fid = family if isinstance(family, str) else "custom"
    if not trace:
        return ProbeResult(theorem_id, fid, -math.inf, None, (), evaluations, math.nan,
                           skipped=tuple(skipped))
    best = max(trace, key=lambda e: e.ratio)
    return ProbeResult(theorem_id, fid, best.ratio, dict(best.point), tuple(trace), evaluations,
                       best.budget, skipped=tuple(skipped))


def grid_sweep(theorem_id: str, param_grid=None, r_grid=DEFAULT_RADII, family=PROBE_FAMILY,
               p_grid=None, workers: int = 1) -> ProbeResult:
    """Evaluate the ratio at every cell of params x r (x p); cells failing a hypothesis are skipped."""
    if param_grid is None:
        param_grid = DEFAULT_GRID
    if p_grid is None:
        p_grid = DEFAULT_PS if theorem_id in P_THEOREMS else (None,)
    cells = _cells(param_grid, r_grid, p_grid)
    if not cells:
        raise ValueError("empty probe grid")

    def one(cell):
        try:
            return evaluate(theorem_id, cell, family)
        except HypothesisViolated as exc:
            return (cell, exc.hypothesis)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            outcomes = list(pool.map(one, cells))
    else:
        outcomes = [one(c) for c in cells]
    trace = [o for o in outcomes if isinstance(o, TraceEntry)]
    skipped = [o for o in outcomes if not isinstance(o, TraceEntry)]
    return _summarize(theorem_id, family, trace, skipped, len(cells))


def _box_for(coords, box):
    lo = np.array([box[c][0] for c in coords])
    hi = np.array([box[c][1] for c in coords])
    return lo, hi


def refine_max(theorem_id: str, start: dict, steps: int = STEPS, family=PROBE_FAMILY,
               box=None) -> ProbeResult:
    """Nelder-Mead ascent of the ratio from ``start``, clamped to the box, at most ``steps`` evaluations."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    box = dict(BOX if box is None else box)
    coords = sorted(start)
    missing = [c for c in coords if c not in box]
    if missing:
        raise ValueError(f"no bounds for {missing}")
    lo, hi = _box_for(coords, box)
    span = np.where(hi > lo, hi - lo, 1.0)
    trace, skipped = [], []

    def to_point(x):
        y = lo + np.clip(x, 0.0, 1.0) * span
        return {c: float(v) for c, v in zip(coords, y)}

    def cost(x):
        # minimize the negative ratio; infeasible points count as -inf ratio
        point = to_point(x)
        try:
            entry = evaluate(theorem_id, point, family)
        except HypothesisViolated as exc:
            skipped.append((point, exc.hypothesis))
            return math.inf
        trace.append(entry)
        return -entry.ratio

    x0 = np.clip((np.array([start[c] for c in coords], float) - lo) / span, 0.0, 1.0)
    budget = [steps]

    def f(x):
        budget[0] -= 1
        return cost(x)

    n = len(coords)
    simplex = [x0]
    values = [f(x0)]
    for i in range(n):
        if budget[0] <= 0:
            break
        x = x0.copy()
        x[i] += INITIAL_STEP if x[i] + INITIAL_STEP <= 1.0 else -INITIAL_STEP
        simplex.append(x)
        values.append(f(x))
    if len(simplex) == n + 1:
        _nelder_mead(simplex, values, f, budget)
    return _summarize(theorem_id, family, trace, skipped, steps - budget[0])


def _nelder_mead(simplex, values, f, budget):
    clamp = lambda x: np.clip(x, 0.0, 1.0)
    while budget[0] > 0:
        order = np.argsort(values, kind="stable")
        simplex[:] = [simplex[i] for i in order]
        values[:] = [values[i] for i in order]
        pts = np.array(simplex)
        if np.max(np.abs(pts - pts[0])) < 1e-10:
            return
        centroid = pts[:-1].mean(axis=0)
        worst = pts[-1]
        xr = clamp(centroid + ALPHA * (centroid - worst))
        fr = f(xr)
        if values[0] <= fr < values[-2]:
            simplex[-1], values[-1] = xr, fr
            continue
        if fr < values[0]:
            if budget[0] <= 0:
                simplex[-1], values[-1] = xr, fr
                return
            xe = clamp(centroid + GAMMA * (xr - centroid))
            fe = f(xe)
            simplex[-1], values[-1] = (xe, fe) if fe < fr else (xr, fr)
            continue
        if budget[0] <= 0:
            return
        if fr < values[-1]:
            xc = clamp(centroid + RHO * (xr - centroid))
            fc = f(xc)
            if fc <= fr:
                simplex[-1], values[-1] = xc, fc
                continue
        else:
            xc = clamp(centroid + RHO * (worst - centroid))
            fc = f(xc)
            if fc < values[-1]:
                simplex[-1], values[-1] = xc, fc
                continue
        for i in range(1, len(simplex)):
            if budget[0] <= 0:
                return
            simplex[i] = simplex[0] + SIGMA * (simplex[i] - simplex[0])
            values[i] = f(simplex[i])


def run_probe(theorem_id: str, steps: int = STEPS, param_grid=None, r_grid=DEFAULT_RADII,
              family=PROBE_FAMILY, p_grid=None, workers: int = 1) -> ProbeResult:
    """Grid sweep, then refinement from the sweep's argmax; the traces are concatenated."""
    sweep = grid_sweep(theorem_id, param_grid, r_grid, family, p_grid, workers)
    if sweep.argmax is None:
        return sweep
    refined = refine_max(theorem_id, sweep.argmax, steps, family)
    trace = sweep.trace + refined.trace
    return _summarize(theorem_id, family, list(trace), list(sweep.skipped + refined.skipped),
                      sweep.evaluations + refined.evaluations)
