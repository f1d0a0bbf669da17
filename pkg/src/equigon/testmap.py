"""The configuration-space / test-map scheme, evaluated numerically.

A configuration (x_0, ..., x_{p-1}) is sent to the tuple of edge-length
vectors, one per (cycle, metric) pair. The configuration realizes the
pairs exactly when every vector lies on the diagonal (all entries equal)
while the points stay pairwise distinct. :func:`residual` turns that
condition into a nonnegative scalar whose zeros are those configurations.

In sphere mode the points are unit vectors in R^{d+1} and the metrics are
evaluated on their images under an injective embedding of S^d.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import InvalidInput
from .metrics import MetricSpec, eval_metric, metric_from_json
from .orbits import CycleSpec, require_odd_prime

UNIT_TOL = 1e-9
SEPARATION_FACTOR = 1e-3


class EmbeddingSpec:
    """Continuous injective map S^d -> R^{d+1}."""

    dim: Optional[int] = None

    def _apply(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class Inclusion(EmbeddingSpec):
    def _apply(self, x):
        return x

    def to_json(self) -> dict:
        return {"kind": "inclusion"}


@dataclass(frozen=True, eq=False)
class Linear(EmbeddingSpec):
    A: np.ndarray

    def __post_init__(self) -> None:
        A = np.array(self.A, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise InvalidInput("Linear embedding needs a square matrix")
        if abs(np.linalg.det(A)) < 1e-12:
            raise InvalidInput("Linear embedding needs an invertible matrix")
        A.setflags(write=False)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "dim", A.shape[0])

    def _apply(self, x):
        return x @ self.A.T

    def to_json(self) -> dict:
        return {"kind": "linear", "params": {"A": self.A.tolist()}}


def _profile_constant(x, amplitude):
    return np.ones(x.shape[:-1])


def _profile_polar_bump(x, amplitude):
    return 1.0 + amplitude * x[..., 0] ** 2


def _profile_saddle(x, amplitude):
    if x.shape[-1] < 2:
        raise InvalidInput("saddle profile needs dimension >= 2")
    return np.exp(amplitude * x[..., 0] * x[..., 1])


RADIAL_PROFILES = {
    "constant": _profile_constant,
    "polar_bump": _profile_polar_bump,
    "saddle": _profile_saddle,
}


@dataclass(frozen=True, eq=False)
class RadialScale(EmbeddingSpec):
    """x -> scale * profile(x) * x with a positive built-in profile."""

    profile: str = "constant"
    scale: float = 1.0
    amplitude: float = 0.0

    def __post_init__(self) -> None:
        if self.profile not in RADIAL_PROFILES:
            raise InvalidInput(
                f"unknown radial profile {self.profile!r}; choose from {sorted(RADIAL_PROFILES)}"
            )
        if not self.scale > 0:
            raise InvalidInput("radial scale must be positive")
        # 1 + a*x0^2 over |x0| <= 1 stays positive iff a > -1
        if self.profile == "polar_bump" and not self.amplitude > -1:
            raise InvalidInput("polar_bump amplitude must exceed -1")

    def _apply(self, x):
        radius = self.scale * RADIAL_PROFILES[self.profile](x, self.amplitude)
        return radius[..., None] * x

    def to_json(self) -> dict:
        return {
            "kind": "radial",
            "params": {"profile": self.profile, "scale": self.scale, "amplitude": self.amplitude},
        }


_EMBEDDING_PARAMS = {"inclusion": set(), "linear": {"A"}, "radial": {"profile", "scale", "amplitude"}}


def embedding_from_json(obj: dict) -> EmbeddingSpec:
    if not isinstance(obj, dict) or obj.get("kind") not in _EMBEDDING_PARAMS:
        raise InvalidInput(f"unknown embedding {obj!r}")
    kind, params = obj["kind"], obj.get("params", {})
    extra = set(obj) - {"kind", "params"}
    if extra or not isinstance(params, dict) or set(params) - _EMBEDDING_PARAMS[kind]:
        raise InvalidInput(f"unexpected fields in {kind} embedding {obj!r}")
    if kind == "inclusion":
        return Inclusion()
    if kind == "linear":
        if "A" not in params:
            raise InvalidInput("linear embedding needs params.A")
        return Linear(np.array(params["A"], dtype=float))
    return RadialScale(
        params.get("profile", "constant"),
        float(params.get("scale", 1.0)),
        float(params.get("amplitude", 0.0)),
    )


def _check_unit(x: np.ndarray, tol: float) -> None:
    norms = np.linalg.norm(x, axis=-1)
    if np.any(np.abs(norms - 1.0) > tol):
        raise InvalidInput("sphere points must be unit vectors")


def embed(e: EmbeddingSpec, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if e.dim is not None and x.shape[-1] != e.dim:
        raise InvalidInput(f"embedding acts on S^{e.dim - 1}, got points in R^{x.shape[-1]}")
    _check_unit(x, UNIT_TOL)
    return e._apply(x)


@dataclass(frozen=True, eq=False)
class PgonProblem:
    """Find p distinct points making each cycle equilateral for its metric.

    ``embedding=None`` is the affine problem in R^d; otherwise the points
    live on S^d and lengths are measured between their embedded images.
    """

    d: int
    p: int
    pairs: Tuple[Tuple[CycleSpec, MetricSpec], ...]
    embedding: Optional[EmbeddingSpec] = None
    _index: Tuple[Tuple[np.ndarray, np.ndarray], ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        require_odd_prime(self.p)
        if not isinstance(self.d, int) or self.d < 1:
            raise InvalidInput(f"d must be a positive integer, got {self.d!r}")
        pairs = tuple((c, m) for c, m in self.pairs)
        if not pairs:
            raise InvalidInput("a problem needs at least one (cycle, metric) pair")
        for cycle, metric in pairs:
            if cycle.p != self.p:
                raise InvalidInput(f"cycle C_{cycle.t} is for p={cycle.p}, problem has p={self.p}")
            if metric.dim is not None and metric.dim != self.ambient_dim:
                raise InvalidInput(
                    f"metric on R^{metric.dim} used in a problem evaluated in R^{self.ambient_dim}"
                )
        if self.embedding is not None and self.embedding.dim not in (None, self.d + 1):
            raise InvalidInput(f"embedding must act on S^{self.d}")
        object.__setattr__(self, "pairs", pairs)
        index = []
        for cycle, _ in pairs:
            order = np.array(cycle.vertex_order)
            index.append((order, np.roll(order, -1)))
        object.__setattr__(self, "_index", tuple(index))

    @property
    def sphere(self) -> bool:
        return self.embedding is not None

    @property
    def point_dim(self) -> int:
        return self.d + 1 if self.sphere else self.d

    @property
    def ambient_dim(self) -> int:
        return self.d + 1 if self.sphere else self.d

    @property
    def r(self) -> int:
        return len(self.pairs)

    @property
    def smooth(self) -> bool:
        return all(m.smooth for _, m in self.pairs)

    def ambient_points(self, points: np.ndarray) -> np.ndarray:
        return self.embedding._apply(points) if self.sphere else points

    def lengths(self, points: np.ndarray) -> np.ndarray:
        """(r, p) array of edge lengths; no validation, used in inner loops."""
        y = self.ambient_points(points)
        out = np.empty((len(self.pairs), self.p))
        for row, ((_, m), (a, b)) in zip(out, zip(self.pairs, self._index)):
            row[:] = m._eval(y[a], y[b])
        return out

    def batch_lengths(self, points: np.ndarray) -> np.ndarray:
        """(m, r, p) edge lengths for a stack of m configurations."""
        y = self.ambient_points(points)
        return np.stack([m._eval(y[:, a], y[:, b]) for (_, m), (a, b) in zip(self.pairs, self._index)], axis=1)

    def to_json(self) -> dict:
        out = {
            "d": self.d,
            "p": self.p,
            "pairs": [{"t": c.t, "metric": m.to_json()} for c, m in self.pairs],
            "mode": "sphere" if self.sphere else "affine",
        }
        if self.sphere:
            out["embedding"] = self.embedding.to_json()
        return out


@dataclass(frozen=True, eq=False)
class Configuration:
    points: np.ndarray

    def __post_init__(self) -> None:
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 2:
            raise InvalidInput("a configuration is a (p, n) array of points")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def shifted(self, k: int = 1) -> "Configuration":
        """Relabel x_i -> x_{i+k}: the generator of Z/p acting k times."""
        return Configuration(np.roll(self.points, -k, axis=0))


def validate_configuration(config: Configuration, problem: PgonProblem) -> None:
    pts = config.points
    if pts.shape != (problem.p, problem.point_dim):
        raise InvalidInput(
            f"configuration has shape {pts.shape}, problem needs {(problem.p, problem.point_dim)}"
        )
    if problem.sphere:
        _check_unit(pts, 1e-12)


def edge_lengths(config: Configuration, problem: PgonProblem, pair_index: int) -> np.ndarray:
    """Lengths rho_i(y_0, y_t), rho_i(y_t, y_2t), ..., rho_i(y_(p-1)t, y_0)."""
    if not 0 <= pair_index < problem.r:
        raise InvalidInput(f"pair_index must lie in 0..{problem.r - 1}")
    validate_configuration(config, problem)
    _, metric = problem.pairs[pair_index]
    a, b = problem._index[pair_index]
    y = problem.ambient_points(config.points)
    return np.asarray(eval_metric(metric, y[a], y[b]), dtype=float)


def pairwise_extremes(points: np.ndarray) -> Tuple[float, float]:
    """(min, max) Euclidean distance over pairs of distinct indices."""
    diff = points[:, None, :] - points[None, :, :]
    dist = np.sqrt((diff * diff).sum(axis=-1))
    iu = np.triu_indices(len(points), k=1)
    upper = dist[iu]
    return float(upper.min()), float(upper.max())


def separation_threshold(diameter: float) -> float:
    return SEPARATION_FACTOR * diameter


def barrier(min_separation: float, diameter: float) -> float:
    eps = separation_threshold(diameter)
    if min_separation <= 0.0:
        return float("inf")
    if min_separation >= eps:
        return 0.0
    return (eps / min_separation - 1.0) ** 2


@dataclass
class ResidualReport:
    value: float
    per_cycle_variance: List[float]
    min_separation: float
    diameter: float
    barrier: float


def residual(config: Configuration, problem: PgonProblem) -> ResidualReport:
    """Sum of per-cycle edge-length variances plus the separation barrier."""
    validate_configuration(config, problem)
    lengths = problem.lengths(config.points)
    variances = lengths.var(axis=1)
    min_sep, diam = pairwise_extremes(config.points)
    bar = barrier(min_sep, diam)
    return ResidualReport(
        value=float(variances.sum()) + bar,
        per_cycle_variance=[float(v) for v in variances],
        min_separation=min_sep,
        diameter=diam,
        barrier=bar,
    )


def build_problem(
    d: int,
    p: int,
    pairs: Sequence[Tuple[int, MetricSpec]],
    embedding: Optional[EmbeddingSpec] = None,
) -> PgonProblem:
    """Convenience constructor taking cycle steps t instead of CycleSpec objects."""
    return PgonProblem(d, p, tuple((CycleSpec(p, t), m) for t, m in pairs), embedding)


def problem_from_json(obj: Dict) -> PgonProblem:
    embedding = None
    if obj.get("mode") == "sphere":
        embedding = embedding_from_json(obj.get("embedding", {"kind": "inclusion"}))
    pairs = [(int(item["t"]), metric_from_json(item["metric"])) for item in obj["pairs"]]
    return build_problem(int(obj["d"]), int(obj["p"]), pairs, embedding)
