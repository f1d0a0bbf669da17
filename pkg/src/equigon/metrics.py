"""A closed, serializable family of distance functions on R^n.

Every constructor except :class:`GeneralizedSymmetric` yields a metric that
induces the Euclidean topology:

* ``LqNorm(q)``            -- ||x - y||_q for q >= 1 or q = inf
* ``LinearPullback(A, m)`` -- m(Ax, Ay) with A invertible
* ``Snowflake(alpha, m)``  -- m(x, y) ** alpha with 0 < alpha <= 1
* ``ScaledSum(w, parts)``  -- sum_k w_k * parts_k(x, y) with w_k > 0

``GeneralizedSymmetric`` wraps a vetted built-in symmetric continuous
function that need not be a metric (it may vanish off the diagonal or be
negative).

All evaluations broadcast over leading axes: ``x`` and ``y`` of shape
``(..., n)`` give a result of shape ``(...)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from .errors import InvalidInput


class MetricSpec:
    """Base class of the constructor tree."""

    metric_axioms_guaranteed: bool = True

    @property
    def dim(self) -> Optional[int]:
        """Fixed ambient dimension, or None if any dimension is accepted."""
        return None

    @property
    def smooth(self) -> bool:
        """True when the function is differentiable away from the diagonal."""
        raise NotImplementedError

    def _eval(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, x, y):
        return eval_metric(self, x, y)

    def to_json(self) -> dict:
        raise NotImplementedError


def _merge_dims(*dims: Optional[int]) -> Optional[int]:
    known = {d for d in dims if d is not None}
    if len(known) > 1:
        raise InvalidInput(f"incompatible metric dimensions {sorted(known)}")
    return known.pop() if known else None


@dataclass(frozen=True, eq=False)
class LqNorm(MetricSpec):
    q: float = 2.0

    def __post_init__(self) -> None:
        if not (self.q == math.inf or self.q >= 1):
            raise InvalidInput(f"LqNorm needs q >= 1 or inf, got {self.q!r}")

    @property
    def smooth(self) -> bool:
        return 1 < self.q < math.inf

    def _eval(self, x, y):
        diff = x - y
        if self.q == 2:
            return np.sqrt(np.einsum("...i,...i->...", diff, diff))
        diff = np.abs(diff)
        if self.q == math.inf:
            return diff.max(axis=-1)
        if self.q == 1:
            return diff.sum(axis=-1)
        return (diff**self.q).sum(axis=-1) ** (1.0 / self.q)

    def to_json(self) -> dict:
        q = "inf" if self.q == math.inf else self.q
        return {"kind": "lq", "params": {"q": q}}


@dataclass(frozen=True, eq=False)
class LinearPullback(MetricSpec):
    A: np.ndarray
    inner: MetricSpec = field(default_factory=LqNorm)

    def __post_init__(self) -> None:
        A = np.array(self.A, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise InvalidInput("LinearPullback needs a square matrix")
        if abs(np.linalg.det(A)) < 1e-12 or np.linalg.cond(A) > 1e12:
            raise InvalidInput("LinearPullback needs an invertible matrix")
        A.setflags(write=False)
        object.__setattr__(self, "A", A)
        _merge_dims(A.shape[0], self.inner.dim)
        object.__setattr__(self, "metric_axioms_guaranteed", self.inner.metric_axioms_guaranteed)

    @property
    def dim(self) -> Optional[int]:
        return self.A.shape[0]

    @property
    def smooth(self) -> bool:
        return self.inner.smooth

    def _eval(self, x, y):
        return self.inner._eval(x @ self.A.T, y @ self.A.T)

    def to_json(self) -> dict:
        return {"kind": "linear", "params": {"A": self.A.tolist()}, "inner": self.inner.to_json()}


@dataclass(frozen=True, eq=False)
class Snowflake(MetricSpec):
    alpha: float
    inner: MetricSpec = field(default_factory=LqNorm)

    def __post_init__(self) -> None:
        if not 0 < self.alpha <= 1:
            raise InvalidInput(f"Snowflake exponent must lie in (0, 1], got {self.alpha!r}")
        if not self.inner.metric_axioms_guaranteed:
            raise InvalidInput("Snowflake needs a metric inside, not a generalized function")

    @property
    def dim(self) -> Optional[int]:
        return self.inner.dim

    @property
    def smooth(self) -> bool:
        return self.inner.smooth

    def _eval(self, x, y):
        return self.inner._eval(x, y) ** self.alpha

    def to_json(self) -> dict:
        return {"kind": "snowflake", "params": {"alpha": self.alpha}, "inner": self.inner.to_json()}


@dataclass(frozen=True, eq=False)
class ScaledSum(MetricSpec):
    weights: Tuple[float, ...]
    parts: Tuple[MetricSpec, ...]

    def __post_init__(self) -> None:
        weights = tuple(float(w) for w in self.weights)
        parts = tuple(self.parts)
        if not parts or len(weights) != len(parts):
            raise InvalidInput("ScaledSum needs one positive weight per part")
        if any(not w > 0 for w in weights):
            raise InvalidInput("ScaledSum weights must be positive")
        if any(not m.metric_axioms_guaranteed for m in parts):
            raise InvalidInput("ScaledSum parts must be metrics")
        _merge_dims(*(m.dim for m in parts))
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "parts", parts)

    @property
    def dim(self) -> Optional[int]:
        return _merge_dims(*(m.dim for m in self.parts))

    @property
    def smooth(self) -> bool:
        return all(m.smooth for m in self.parts)

    def _eval(self, x, y):
        return sum(w * m._eval(x, y) for w, m in zip(self.weights, self.parts))

    def to_json(self) -> dict:
        return {
            "kind": "sum",
            "params": {"weights": list(self.weights)},
            "inner": [m.to_json() for m in self.parts],
        }


def _coord_product(x, y):
    if x.shape[-1] < 2:
        raise InvalidInput("coord_product needs dimension >= 2")
    return (x[..., 0] - y[..., 0]) * (x[..., 1] - y[..., 1])


# name -> (function, smooth)
GENERALIZED_BUILTINS: Dict[str, Tuple[Callable, bool]] = {
    "zero": (lambda x, y: np.zeros(np.broadcast_shapes(x.shape, y.shape)[:-1]), True),
    "coord_product": (_coord_product, True),
    "neg_sq_euclidean": (lambda x, y: -((x - y) ** 2).sum(axis=-1), True),
    "dot": (lambda x, y: (x * y).sum(axis=-1), True),
    "abs_first_coord": (lambda x, y: np.abs(x[..., 0] - y[..., 0]), False),
}


@dataclass(frozen=True, eq=False)
class GeneralizedSymmetric(MetricSpec):
    """A symmetric continuous function picked from ``GENERALIZED_BUILTINS``."""

    name: str
    metric_axioms_guaranteed: bool = field(default=False, init=False)

    def __post_init__(self) -> None:
        if self.name not in GENERALIZED_BUILTINS:
            raise InvalidInput(
                f"unknown generalized function {self.name!r}; "
                f"choose from {sorted(GENERALIZED_BUILTINS)}"
            )

    @property
    def smooth(self) -> bool:
        return GENERALIZED_BUILTINS[self.name][1]

    def _eval(self, x, y):
        return GENERALIZED_BUILTINS[self.name][0](x, y)

    def to_json(self) -> dict:
        return {"kind": "gsym", "params": {"name": self.name}}


L1 = LqNorm(1.0)
L2 = LqNorm(2.0)
LINF = LqNorm(math.inf)


def eval_metric(rho: MetricSpec, x, y) -> np.ndarray | float:
    """Evaluate ``rho(x, y)``; scalar for single points, array for batches."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim == 0 or y.ndim == 0 or x.shape[-1] != y.shape[-1]:
        raise InvalidInput(f"point shapes {x.shape} and {y.shape} do not match")
    if rho.dim is not None and x.shape[-1] != rho.dim:
        raise InvalidInput(f"metric is defined on R^{rho.dim}, got points in R^{x.shape[-1]}")
    out = rho._eval(x, y)
    if np.ndim(out) == 0:
        return float(out)
    return out


@dataclass
class SymmetryReport:
    max_asymmetry: float
    identity_violations: int
    samples: int


def check_symmetry_and_identity(
    rho: MetricSpec, sample_count: int, seed: int, dim: Optional[int] = None
) -> SymmetryReport:
    if sample_count < 1:
        raise InvalidInput("sample_count must be >= 1")
    n = rho.dim or dim or 3
    rng = np.random.default_rng(seed)
    x = rng.uniform(-5.0, 5.0, size=(sample_count, n))
    y = rng.uniform(-5.0, 5.0, size=(sample_count, n))
    forward = np.atleast_1d(eval_metric(rho, x, y))
    backward = np.atleast_1d(eval_metric(rho, y, x))
    asym = float(np.max(np.abs(forward - backward)))
    violations = 0
    if rho.metric_axioms_guaranteed:
        violations = int(np.count_nonzero(np.atleast_1d(eval_metric(rho, x, x)) != 0.0))
    return SymmetryReport(max_asymmetry=asym, identity_violations=violations, samples=sample_count)


_JSON_PARAMS = {"lq": {"q"}, "linear": {"A"}, "snowflake": {"alpha"}, "sum": {"weights"}, "gsym": {"name"}}


def metric_from_json(obj: dict) -> MetricSpec:
    """Inverse of ``MetricSpec.to_json``."""
    if not isinstance(obj, dict) or obj.get("kind") not in _JSON_PARAMS:
        raise InvalidInput(f"metric JSON must be an object with a known 'kind', got {obj!r}")
    kind = obj["kind"]
    params = obj.get("params", {})
    inner = obj.get("inner")
    if set(obj) - {"kind", "params", "inner"} or not isinstance(params, dict):
        raise InvalidInput(f"unexpected fields in {kind} metric {obj!r}")
    if set(params) != _JSON_PARAMS[kind]:
        raise InvalidInput(f"{kind} metric needs params {sorted(_JSON_PARAMS[kind])}, got {sorted(params)}")
    if inner is not None and kind in ("lq", "gsym"):
        raise InvalidInput(f"{kind} metric takes no inner metric")
    try:
        if kind == "lq":
            q = params["q"]
            return LqNorm(math.inf if q in ("inf", "Infinity", "infinity") else float(q))
        if kind == "linear":
            return LinearPullback(np.array(params["A"], dtype=float), metric_from_json(inner) if inner else L2)
        if kind == "snowflake":
            return Snowflake(float(params["alpha"]), metric_from_json(inner) if inner else L2)
        if kind == "sum":
            if not isinstance(inner, list):
                raise InvalidInput("'sum' metric needs a list of parts under 'inner'")
            return ScaledSum(tuple(float(w) for w in params["weights"]), tuple(metric_from_json(m) for m in inner))
        return GeneralizedSymmetric(params["name"])
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"bad {kind} metric parameters: {exc}") from None


_SHORTHANDS: Dict[str, MetricSpec] = {"l1": L1, "l2": L2, "linf": LINF}


def parse_metric_shorthand(text: str) -> Optional[MetricSpec]:
    """Return the metric for names like ``l1``, ``l2``, ``linf``, ``l3.5``."""
    key = text.strip().lower()
    if key in _SHORTHANDS:
        return _SHORTHANDS[key]
    if key.startswith("l"):
        try:
            return LqNorm(float(key[1:]))
        except ValueError:
            return None
    return None


def describe(rho: MetricSpec) -> str:
    if isinstance(rho, LqNorm):
        return "Linf" if rho.q == math.inf else f"L{rho.q:g}"
    if isinstance(rho, LinearPullback):
        return f"Linear({describe(rho.inner)})"
    if isinstance(rho, Snowflake):
        return f"Snowflake({rho.alpha:g}, {describe(rho.inner)})"
    if isinstance(rho, ScaledSum):
        return " + ".join(f"{w:g}*{describe(m)}" for w, m in zip(rho.weights, rho.parts))
    if isinstance(rho, GeneralizedSymmetric):
        return f"gsym:{rho.name}"
    return type(rho).__name__

