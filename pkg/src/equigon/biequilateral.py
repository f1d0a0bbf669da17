"""Euclidean-equilateral triangles inscribed in the unit circle, measured in L1.

The vertices sit at angles theta, theta + 2pi/3, theta + 4pi/3. Up to
rotation and scaling this family contains every Euclidean equilateral
triangle in the plane, and theta in [0, 2pi/3] covers the family once.
The taxicab side lengths reduce to

    d01 = sqrt3 (|sin(theta + pi/3)|  + |cos(theta + pi/3)|)
    d02 = sqrt3 (|sin(theta + 2pi/3)| + |cos(theta + 2pi/3)|)
    d12 = sqrt3 (|sin(theta + pi)|    + |cos(theta + pi)|)

:func:`scan` locates every theta with d01 = d02 and reports how far d12 is
from that common value there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .errors import InvalidInput

THETA_MAX = 2.0 * math.pi / 3.0
SQRT3 = math.sqrt(3.0)
_RANGE_SLACK = 1e-12
BISECTION_TOL = 1e-12
GAP_THRESHOLD = 1e-6


def _check_theta(theta: float) -> None:
    if not -_RANGE_SLACK <= theta <= THETA_MAX + _RANGE_SLACK:
        raise InvalidInput(f"theta must lie in [0, 2pi/3], got {theta!r}")


def inscribed_triangle(theta: float) -> np.ndarray:
    """The three vertices as rows; defined for every real theta."""
    angles = theta + np.array([0.0, 2.0, 4.0]) * math.pi / 3.0
    return np.stack([np.cos(angles), np.sin(angles)], axis=1)


def _reduced(theta):
    def side(shift):
        u = theta + shift
        return SQRT3 * (np.abs(np.sin(u)) + np.abs(np.cos(u)))

    return side(math.pi / 3.0), side(2.0 * math.pi / 3.0), side(math.pi)


def _unreduced(theta):
    c0, s0 = np.cos(theta), np.sin(theta)
    c1, s1 = np.cos(theta + 2 * math.pi / 3), np.sin(theta + 2 * math.pi / 3)
    c2, s2 = np.cos(theta + 4 * math.pi / 3), np.sin(theta + 4 * math.pi / 3)
    return (
        np.abs(c1 - c0) + np.abs(s1 - s0),
        np.abs(c2 - c0) + np.abs(s2 - s0),
        np.abs(c2 - c1) + np.abs(s2 - s1),
    )


def taxicab_lengths(theta: float) -> Tuple[float, float, float]:
    """(d01, d02, d12) from the reduced closed forms."""
    _check_theta(theta)
    return tuple(float(v) for v in _reduced(theta))


def reduced_form_agreement(theta: float) -> float:
    _check_theta(theta)
    return max(abs(float(a) - float(b)) for a, b in zip(_reduced(theta), _unreduced(theta)))


@dataclass
class ScanResult:
    equalization_thetas: List[float]
    common_values: List[float]
    third_values: List[float]
    min_gap: float
    verdict: str
    grid_size: int

    def to_json(self) -> dict:
        return {
            "equalization_thetas": self.equalization_thetas,
            "common_values": self.common_values,
            "third_values": self.third_values,
            "min_gap": self.min_gap,
            "verdict": self.verdict,
            "grid_size": self.grid_size,
        }


def curve(grid_size: int) -> np.ndarray:
    """Rows (theta, d01, d02, d12) on an even grid over [0, 2pi/3]."""
    if grid_size < 2:
        raise InvalidInput("grid_size must be >= 2")
    grid = np.linspace(0.0, THETA_MAX, grid_size)
    return np.column_stack([grid, *_reduced(grid)])


def _gap01_02(theta):
    d01, d02, _ = _reduced(theta)
    return d01 - d02


def _bisect(lo: float, hi: float, flo: float) -> float:
    while hi - lo > BISECTION_TOL:
        mid = 0.5 * (lo + hi)
        fmid = float(_gap01_02(mid))
        if fmid == 0.0:
            return mid
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def scan(grid_size: int = 100_000, zero_tol: float = 1e-12) -> ScanResult:
    """Find all roots of d01 - d02 on [0, 2pi/3] by grid sign changes and bisection."""
    if grid_size < 3:
        raise InvalidInput("grid_size must be >= 3")
    grid = np.linspace(0.0, THETA_MAX, grid_size)
    values = _gap01_02(grid)
    zero = np.abs(values) <= zero_tol
    roots: List[float] = [float(t) for t in grid[zero]]
    sign = np.sign(values)
    for i in np.nonzero((sign[:-1] * sign[1:] < 0) & ~zero[:-1] & ~zero[1:])[0]:
        roots.append(_bisect(float(grid[i]), float(grid[i + 1]), float(values[i])))
    roots.sort()
    merged: List[float] = []
    for t in roots:
        if not merged or t - merged[-1] > 10 * THETA_MAX / grid_size:
            merged.append(t)
    common, third = [], []
    for t in merged:
        d01, d02, d12 = (float(v) for v in _reduced(t))
        common.append(0.5 * (d01 + d02))
        third.append(d12)
    gaps = [abs(c - d) for c, d in zip(common, third)]
    min_gap = min(gaps) if gaps else math.inf
    verdict = "NoBiEquilateral" if min_gap > GAP_THRESHOLD else "BiEquilateralCandidate"
    return ScanResult(merged, common, third, min_gap, verdict, grid_size)
