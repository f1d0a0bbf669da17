"""Group cohomology of Z/p and the E_2 page of the Borel fibration of X_{d,p}.

Here X_{d,p} = (S^d)^p minus the thin diagonal, with Z/p permuting the
factors cyclically. Its F_p-cohomology is concentrated in degrees 0, d, ...,
(p-1)d: a free permutation module on the j-subsets of the factors in degree
jd for 1 <= j <= p-2, and M = <x_1..x_p>/<x_1+...+x_p> in degree (p-1)d.

Cohomology of a cyclic group is 2-periodic. With T = omega - 1 and norm
N = 1 + omega + ... + omega^(p-1) acting on a module V:

    H^0     = ker T
    H^odd   = ker N / im T
    H^even  = ker T / im N     (positive degrees)

Differentials of the spectral sequence are never computed; only whether
their sources vanish, which is all the bottom-row survivor check needs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Dict, List, Tuple

import numpy as np

from .errors import InvalidInput
from .fp import as_fp, matpow_mod_p, rank_mod_p
from .orbits import is_prime, require_odd_prime


@dataclass(frozen=True, eq=False)
class CyclicModule:
    """F_p[Z/p]-module given by the matrix of the generator."""

    p: int
    omega: np.ndarray

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise InvalidInput(f"p must be prime, got {self.p!r}")
        omega = as_fp(self.omega, self.p)
        if omega.shape[0] != omega.shape[1]:
            raise InvalidInput("omega must be square")
        if not np.array_equal(matpow_mod_p(omega, self.p, self.p), np.eye(len(omega), dtype=np.int64)):
            raise InvalidInput("omega^p must be the identity over F_p")
        omega.setflags(write=False)
        object.__setattr__(self, "omega", omega)

    @property
    def dim(self) -> int:
        return self.omega.shape[0]

    def t_map(self) -> np.ndarray:
        return (self.omega - np.eye(self.dim, dtype=np.int64)) % self.p

    def norm_map(self) -> np.ndarray:
        total = np.zeros_like(self.omega)
        power = np.eye(self.dim, dtype=np.int64)
        for _ in range(self.p):
            total = (total + power) % self.p
            power = (power @ self.omega) % self.p
        return total


@dataclass(frozen=True)
class CyclicCohomology:
    h0: int
    h_odd: int
    h_even_pos: int

    def in_degree(self, s: int) -> int:
        if s < 0:
            return 0
        if s == 0:
            return self.h0
        return self.h_odd if s % 2 else self.h_even_pos


def cyclic_cohomology(module: CyclicModule) -> CyclicCohomology:
    n, p = module.dim, module.p
    if n == 0:
        return CyclicCohomology(0, 0, 0)
    rank_t = rank_mod_p(module.t_map(), p)
    rank_n = rank_mod_p(module.norm_map(), p)
    ker_t = n - rank_t
    ker_n = n - rank_n
    return CyclicCohomology(h0=ker_t, h_odd=ker_n - rank_t, h_even_pos=ker_t - rank_n)


def permutation_module(p: int) -> CyclicModule:
    """F_p[Z/p] itself: the cyclic shift of the basis."""
    return CyclicModule(p, np.roll(np.eye(p, dtype=np.int64), 1, axis=0))


def subset_module(p: int, j: int) -> CyclicModule:
    """Z/p permuting the j-element subsets of {0..p-1} by shifting each element."""
    subsets = list(combinations(range(p), j))
    where = {s: i for i, s in enumerate(subsets)}
    omega = np.zeros((len(subsets), len(subsets)), dtype=np.int64)
    for i, s in enumerate(subsets):
        image = tuple(sorted((x + 1) % p for x in s))
        omega[where[image], i] = 1
    return CyclicModule(p, omega)


def quotient_module(p: int) -> CyclicModule:
    """M = <x_1, ..., x_p>/<x_1 + ... + x_p> in the basis x_1, ..., x_(p-1)."""
    # omega: x_i -> x_(i+1), and x_p = -(x_1 + ... + x_(p-1))
    n = p - 1
    omega = np.zeros((n, n), dtype=np.int64)
    for i in range(n - 1):
        omega[i + 1, i] = 1
    omega[:, n - 1] = p - 1
    return CyclicModule(p, omega)


def betti_xdp(d: int, p: int) -> Dict[int, int]:
    """dim H^i(X_{d,p}; F_p) for the nonzero degrees i."""
    require_odd_prime(p)
    if d < 1:
        raise InvalidInput(f"d must be >= 1, got {d}")
    betti = {0: 1}
    for j in range(1, p - 1):
        betti[j * d] = comb(p, j)
    betti[(p - 1) * d] = p - 1
    return betti


def fiber_module(d: int, p: int, t: int) -> CyclicModule | None:
    """H^t(X_{d,p}; F_p) as a Z/p-module, or None when it is zero."""
    if t == 0:
        return CyclicModule(p, np.eye(1, dtype=np.int64))
    if t < 0 or t % d:
        return None
    j = t // d
    if 1 <= j <= p - 2:
        return subset_module(p, j)
    if j == p - 1:
        return quotient_module(p)
    return None


@dataclass
class E2Page:
    """Sparse table of dim E_2^{s,t} = dim H^s(Z/p; H^t(X_{d,p})) for 0 <= s <= s_max.

    The bottom row t = 0 is the ring F_p[a, b]/<a^2>; ``entry`` answers for
    any (s, t), including positions beyond s_max, from the periodic rows.
    """

    d: int
    p: int
    s_max: int
    rows: Dict[int, CyclicCohomology] = field(default_factory=dict)
    bottom_row_ring: str = "F_p[a,b]/<a^2>"

    def entry(self, s: int, t: int) -> int:
        if s < 0 or t not in self.rows:
            return 0
        return self.rows[t].in_degree(s)

    def row(self, t: int) -> List[int]:
        return [self.entry(s, t) for s in range(self.s_max + 1)]

    @property
    def entries(self) -> Dict[Tuple[int, int], int]:
        return {
            (s, t): self.entry(s, t)
            for t in self.rows
            for s in range(self.s_max + 1)
            if self.entry(s, t)
        }

    def grid(self) -> str:
        """Rows printed top (t = (p-1)d) to bottom (t = 0), columns s = 0..s_max."""
        width = max(3, len(str((self.p - 1) * self.d)) + 2)
        lines = []
        for t in range((self.p - 1) * self.d, -1, -1):
            cells = "".join(f"{self.entry(s, t):>4}" for s in range(self.s_max + 1))
            lines.append(f"t={t:<{width}}|{cells}")
        lines.append(" " * (width + 2) + "+" + "-" * 4 * (self.s_max + 1))
        lines.append(" " * (width + 3) + "".join(f"{s:>4}" for s in range(self.s_max + 1)))
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "p": self.p,
            "s_max": self.s_max,
            "rows": {str(t): self.row(t) for t in sorted(self.rows)},
            "bottom_row_ring": self.bottom_row_ring,
        }


def e2_page(d: int, p: int, s_max: int = 6) -> E2Page:
    require_odd_prime(p)
    if d < 1:
        raise InvalidInput(f"d must be >= 1, got {d}")
    if s_max < 0:
        raise InvalidInput("s_max must be >= 0")
    page = E2Page(d, p, s_max)
    page.rows[0] = cyclic_cohomology(fiber_module(d, p, 0))
    # the shift permutes j-subsets freely (p prime), so H^{jd} is a sum of
    # C(p, j)/p copies of F_p[Z/p] and cohomology adds over the summands
    free = cyclic_cohomology(permutation_module(p))
    for j in range(1, p - 1):
        copies = comb(p, j) // p
        page.rows[j * d] = CyclicCohomology(
            copies * free.h0, copies * free.h_odd, copies * free.h_even_pos
        )
    page.rows[(p - 1) * d] = cyclic_cohomology(quotient_module(p))
    return page


@dataclass(frozen=True)
class Differential:
    page: int
    source: Tuple[int, int]
    target: Tuple[int, int]
    source_dim: int

    def __str__(self) -> str:
        return f"d_{self.page}: E^{self.source} -> E^{self.target} (source dim {self.source_dim})"

    def to_json(self) -> dict:
        return {
            "page": self.page,
            "source": list(self.source),
            "target": list(self.target),
            "source_dim": self.source_dim,
        }


@dataclass
class SurvivorReport:
    survives: bool
    blocked_by: List[Differential]
    candidates: List[Differential]

    def to_json(self) -> dict:
        return {
            "survives": self.survives,
            "blocked_by": [x.to_json() for x in self.blocked_by],
            "candidates": [x.to_json() for x in self.candidates],
        }


def bottom_row_survivor_check(d: int, r: int, p: int) -> SurvivorReport:
    """Can b^(r(p-1)/2), sitting at E_2^{r(p-1), 0}, be hit by a differential?

    Only two differentials can reach that spot: d_{r(p-1)} from
    E^{0, r(p-1)-1} and d_{(p-1)d+1} from E^{(r-d)(p-1)-1, (p-1)d}. The class
    survives when both sources are zero.
    """
    require_odd_prime(p)
    if r < 1 or d < 1:
        raise InvalidInput("r and d must be >= 1")
    n = r * (p - 1)
    page = e2_page(d, p, s_max=max(0, n))
    target = (n, 0)
    candidates = [
        Differential(n, (0, n - 1), target, page.entry(0, n - 1)),
        Differential(
            (p - 1) * d + 1,
            ((r - d) * (p - 1) - 1, (p - 1) * d),
            target,
            page.entry((r - d) * (p - 1) - 1, (p - 1) * d),
        ),
    ]
    blocked = [x for x in candidates if x.source_dim]
    return SurvivorReport(survives=not blocked, blocked_by=blocked, candidates=candidates)
