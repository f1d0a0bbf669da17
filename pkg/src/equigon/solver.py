"""Deterministic multi-start search for configurations with zero residual.

Each start is a local minimization of a scale-free version of the residual:
edge-length variances are divided by the squared configuration diameter so
that shrinking a configuration toward a point never looks like progress.
Smooth problems use trust-region least squares with central-difference
Jacobians; problems involving L1, Linf or kinked generalized functions run a
bounded Nelder-Mead simplex first and then a least-squares polish.

``NotFound`` only means the heuristic failed. It is never evidence that no
configuration exists.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from scipy.optimize import least_squares, minimize

from .errors import InvalidInput
from .metrics import GeneralizedSymmetric, LinearPullback, MetricSpec, ScaledSum, Snowflake
from .testmap import (
    Configuration,
    PgonProblem,
    pairwise_extremes,
    residual,
    separation_threshold,
    validate_configuration,
)

FOUND = "Found"
NOT_FOUND = "NotFound"

# residual components standing in for an infinite barrier
_BLOWUP = 1e6
_DIFF_STEP = 1e-6
_STAGNATION_WINDOW = 40
# the simplex aims below tol so the polish starts inside the basin
_SIMPLEX_MARGIN = 1e-2
# after a simplex pass, least squares only polishes; at kinks it can stall for
# thousands of steps
_POLISH_ITERS = 100
_POLISH_TOL = 1e-10


def _mentions_generalized(m: MetricSpec) -> bool:
    if isinstance(m, GeneralizedSymmetric):
        return True
    if isinstance(m, (LinearPullback, Snowflake)):
        return _mentions_generalized(m.inner)
    if isinstance(m, ScaledSum):
        return any(_mentions_generalized(part) for part in m.parts)
    return False


def default_tol(problem: PgonProblem) -> float:
    rough = any(not m.smooth or _mentions_generalized(m) for _, m in problem.pairs)
    return 1e-6 if rough else 1e-9


@dataclass(frozen=True)
class SolveOptions:
    restarts: int = 64
    max_iters: int = 2000
    tol: Optional[float] = None
    seed: int = 0
    box_radius: float = 2.0

    def __post_init__(self) -> None:
        if self.restarts < 1:
            raise InvalidInput("restarts must be >= 1")
        if self.max_iters < 1:
            raise InvalidInput("max_iters must be >= 1")
        if self.tol is not None and not self.tol > 0:
            raise InvalidInput("tol must be positive")
        if self.seed < 0:
            raise InvalidInput("seed must be a nonnegative integer")
        if not self.box_radius > 0:
            raise InvalidInput("box_radius must be positive")

    def resolved_tol(self, problem: PgonProblem) -> float:
        return self.tol if self.tol is not None else default_tol(problem)


@dataclass
class Solution:
    status: str
    config: Configuration
    residual: float
    common_lengths: List[float]
    min_separation: float
    starts_used: int
    tol: float
    seed: Optional[int] = None
    scaled_residual: float = math.inf
    edge_lengths: List[List[float]] = field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.status == FOUND

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "points": self.config.points.tolist(),
            "common_lengths": list(self.common_lengths),
            "residual": self.residual,
            "min_separation": self.min_separation,
            "seed": self.seed,
            "starts_used": self.starts_used,
            "tol": self.tol,
        }


class _Objective:
    """Flat-vector residuals of the scale-free objective for one problem."""

    def __init__(self, problem: PgonProblem):
        self.problem = problem
        self.shape = (problem.p, problem.point_dim)
        self.size = problem.p * problem.point_dim
        self._iu = np.triu_indices(problem.p, k=1)
        self._root_p = math.sqrt(problem.p)

    def points(self, z: np.ndarray) -> np.ndarray:
        pts = z.reshape(self.shape)
        if self.problem.sphere:
            norms = np.linalg.norm(pts, axis=1, keepdims=True)
            pts = pts / np.where(norms > 0, norms, 1.0)
        return pts

    def residuals(self, z: np.ndarray) -> np.ndarray:
        # called thousands of times per start on tiny arrays, so scalar work
        # stays in Python floats
        pts = self.points(z)
        diff = pts[self._iu[0]] - pts[self._iu[1]]
        dist = np.sqrt(np.einsum("ij,ij->i", diff, diff)).tolist()
        s, diam = min(dist), max(dist)
        p, n_len = self.problem.p, self.problem.r * self.problem.p
        if not diam > 0:
            return np.full(n_len + 1, _BLOWUP)
        lengths = self.problem.lengths(pts)
        out = np.empty(n_len + 1)
        dev = out[:n_len].reshape(lengths.shape)
        np.subtract(lengths, lengths.sum(axis=1, keepdims=True) / p, out=dev)
        dev *= 1.0 / (self._root_p * diam)
        eps = separation_threshold(diam)
        out[n_len] = 0.0 if s >= eps else min(eps / s - 1.0, _BLOWUP) if s > 0 else _BLOWUP
        return out

    def batch_residuals(self, zs: np.ndarray) -> np.ndarray:
        """``residuals`` for each row of ``zs`` in one vectorized pass."""
        m = zs.shape[0]
        pts = zs.reshape((m,) + self.shape)
        if self.problem.sphere:
            norms = np.linalg.norm(pts, axis=2, keepdims=True)
            pts = pts / np.where(norms > 0, norms, 1.0)
        diff = pts[:, self._iu[0]] - pts[:, self._iu[1]]
        dist = np.sqrt(np.einsum("mij,mij->mi", diff, diff))
        s, diam = dist.min(axis=1), dist.max(axis=1)
        p, n_len = self.problem.p, self.problem.r * self.problem.p
        out = np.full((m, n_len + 1), _BLOWUP)
        ok = diam > 0
        if not ok.any():
            return out
        lengths = self.problem.batch_lengths(pts[ok])
        dev = lengths - lengths.mean(axis=2, keepdims=True)
        out[ok, :n_len] = dev.reshape(-1, n_len) / (self._root_p * diam[ok, None])
        eps = separation_threshold(diam[ok])
        s_ok = s[ok]
        with np.errstate(divide="ignore"):
            bar = np.where(s_ok >= eps, 0.0, np.minimum(eps / s_ok - 1.0, _BLOWUP))
        out[ok, n_len] = np.where(s_ok > 0, bar, _BLOWUP)
        return out

    def jacobian(self, z: np.ndarray) -> np.ndarray:
        """Central differences with every perturbed point evaluated in one batch."""
        h = _DIFF_STEP * np.where(z >= 0, 1.0, -1.0) * np.maximum(1.0, np.abs(z))
        h = (z + h) - z
        steps = np.diag(h)
        res = self.batch_residuals(np.concatenate([z + steps, z - steps]))
        n = z.size
        return ((res[:n] - res[n:]) / (2.0 * h)[:, None]).T

    def scalar(self, z: np.ndarray) -> float:
        res = self.residuals(z)
        return float(res @ res)


def _start(problem: PgonProblem, options: SolveOptions, k: int) -> np.ndarray:
    # counter-based stream: start k is reproducible without drawing starts 0..k-1
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([options.seed, k])))
    shape = (problem.p, problem.point_dim)
    if problem.sphere:
        g = rng.standard_normal(shape)
        return g / np.linalg.norm(g, axis=1, keepdims=True)
    return rng.uniform(-options.box_radius, options.box_radius, size=shape)


class _Stagnation:
    """Stop a simplex run that cannot reach the target within its budget.

    The objective is flat along translations and dilations of the
    configuration, so the simplex need not collapse in those directions and
    the usual x-tolerance test may never fire. Instead the geometric descent
    rate over the last ``window`` iterations is extrapolated; once reaching
    ``target`` at that rate would take more than the remaining iterations,
    the run stops.
    """

    def __init__(self, target: float, max_iters: int, window: int = _STAGNATION_WINDOW):
        self.target = target
        self.max_iters = max_iters
        self.window = window
        self.history: List[float] = []

    def __call__(self, intermediate_result) -> None:
        f = float(intermediate_result.fun)
        self.history.append(f)
        if f <= self.target:
            raise StopIteration
        if len(self.history) > self.window:
            old = self.history[-self.window - 1]
            rate = math.log(old / f) / self.window if f < old else 0.0
            remaining = self.max_iters - len(self.history)
            if rate * remaining < math.log(f / self.target):
                raise StopIteration


def _least_squares(objective: _Objective, z: np.ndarray, options: SolveOptions) -> np.ndarray:
    if objective.problem.sphere:
        bounds = (-np.inf, np.inf)
        z = objective.points(z).ravel()
    else:
        bounds = (-options.box_radius, options.box_radius)
        # trf needs a strictly feasible start
        z = np.clip(z, -options.box_radius * (1 - 1e-12), options.box_radius * (1 - 1e-12))
    if objective.problem.smooth:
        stop, budget = 1e-14, options.max_iters
    else:
        stop, budget = _POLISH_TOL, min(options.max_iters, _POLISH_ITERS)
    ls = least_squares(
        objective.residuals,
        z,
        jac=objective.jacobian,
        method="trf",
        bounds=bounds,
        xtol=stop,
        ftol=stop,
        gtol=1e-14,
        max_nfev=budget,
    )
    return ls.x if objective.scalar(ls.x) <= objective.scalar(z) else z


def _simplex(objective: _Objective, z: np.ndarray, options: SolveOptions, target: float) -> np.ndarray:
    nm_bounds = None if objective.problem.sphere else [(-options.box_radius, options.box_radius)] * objective.size
    nm = minimize(
        objective.scalar,
        z,
        method="Nelder-Mead",
        bounds=nm_bounds,
        callback=_Stagnation(target, options.max_iters),
        options={"maxiter": options.max_iters, "xatol": 1e-13, "fatol": 1e-20, "adaptive": True},
    )
    return nm.x if nm.fun <= objective.scalar(z) else z


def _local(objective: _Objective, z0: np.ndarray, options: SolveOptions, tol: float) -> np.ndarray:
    """Nonsmooth problems get a simplex descent before the least-squares polish."""
    z = z0 if objective.problem.smooth else _simplex(objective, z0, options, _SIMPLEX_MARGIN * tol)
    return objective.points(_least_squares(objective, z, options))


def _assess(
    problem: PgonProblem, points: np.ndarray, tol: float, starts_used: int, seed: Optional[int]
) -> Solution:
    config = Configuration(points)
    report = residual(config, problem)
    lengths = problem.lengths(config.points)
    common = lengths.mean(axis=1)
    diam = report.diameter
    eps = separation_threshold(diam)
    scaled = float(np.sum(report.per_cycle_variance)) / diam**2 + report.barrier if diam > 0 else math.inf
    ok = (
        report.value <= tol
        and scaled <= tol
        and report.min_separation >= eps
        and all(
            c > eps
            for (_, m), c in zip(problem.pairs, common)
            if m.metric_axioms_guaranteed
        )
    )
    return Solution(
        status=FOUND if ok else NOT_FOUND,
        config=config,
        residual=report.value,
        common_lengths=[float(c) for c in common],
        min_separation=report.min_separation,
        starts_used=starts_used,
        tol=tol,
        seed=seed,
        scaled_residual=scaled,
        edge_lengths=lengths.tolist(),
    )


def solve(problem: PgonProblem, options: SolveOptions = SolveOptions()) -> Solution:
    """Run starts 0, 1, ... in order and stop at the first Found.

    If no start succeeds the result is the start with the lowest residual,
    ties going to the lower start index.
    """
    tol = options.resolved_tol(problem)
    objective = _Objective(problem)
    best: Optional[Solution] = None
    for k in range(options.restarts):
        z0 = _start(problem, options, k).ravel()
        candidate = _assess(problem, _local(objective, z0, options, tol), tol, k + 1, options.seed)
        if candidate.found:
            return candidate
        if best is None or candidate.residual < best.residual:
            best = candidate
    best.starts_used = options.restarts
    return best


def refine(problem: PgonProblem, config: Configuration, options: SolveOptions = SolveOptions()) -> Solution:
    """Run only the local phase from ``config``."""
    validate_configuration(config, problem)
    tol = options.resolved_tol(problem)
    start = _assess(problem, config.points, tol, 1, options.seed)
    if start.found:
        return start
    min_sep, _ = pairwise_extremes(config.points)
    if min_sep <= 0:
        return start
    objective = _Objective(problem)
    return _assess(problem, _local(objective, config.points.ravel(), options, tol), tol, 1, options.seed)
