"""Orbits of the rotation action of Z/m on the edges of the complete graph K_m.

Vertices are the residues 0, ..., m-1 and the generator acts by i -> i + 1
(mod m). For an odd prime p every orbit is a p-gon; these are the cycles
C_t, t = 1, ..., (p-1)/2, whose edges join successive multiples of t.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

from .errors import InvalidInput

Edge = Tuple[int, int]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


def require_odd_prime(p: int) -> None:
    if not isinstance(p, int) or p == 2 or not is_prime(p):
        raise InvalidInput(f"p must be an odd prime, got {p!r}")


def _normalize(a: int, b: int) -> Edge:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class EdgeOrbit:
    """One orbit of edges; ``ngon`` is n when the edges form a single n-cycle."""

    m: int
    edges: Tuple[Edge, ...]
    ngon: Optional[int]

    @property
    def kind(self) -> str:
        return f"NGon({self.ngon})" if self.ngon is not None else "NotAGon"

    def edge_set(self) -> frozenset:
        return frozenset(frozenset(e) for e in self.edges)

    def to_dict(self) -> dict:
        return {"edges": [list(e) for e in self.edges], "kind": self.kind}


def _classify(edges: Tuple[Edge, ...]) -> Optional[int]:
    adjacency: dict = {}
    for a, b in edges:
        adjacency.setdefault(a, []).append(b)
        adjacency.setdefault(b, []).append(a)
    if any(len(nbrs) != 2 for nbrs in adjacency.values()):
        return None
    # every vertex has degree 2: a disjoint union of cycles; walk one of them
    start = min(adjacency)
    prev, cur, length = start, adjacency[start][0], 1
    while cur != start:
        nxt = adjacency[cur][0] if adjacency[cur][0] != prev else adjacency[cur][1]
        prev, cur = cur, nxt
        length += 1
    return length if length == len(adjacency) else None


def edge_orbits(m: int) -> List[EdgeOrbit]:
    """Partition the edges of K_m into Z/m-orbits, ordered by chord step 1..m//2."""
    if not isinstance(m, int) or m < 3:
        raise InvalidInput(f"m must be an integer >= 3, got {m!r}")
    orbits = []
    for step in range(1, m // 2 + 1):
        seen = set()
        edges = []
        for i in range(m):
            e = _normalize(i, (i + step) % m)
            if e not in seen:
                seen.add(e)
                edges.append(e)
        orbit_edges = tuple(edges)
        orbits.append(EdgeOrbit(m=m, edges=orbit_edges, ngon=_classify(orbit_edges)))
    return orbits


@dataclass(frozen=True)
class CycleSpec:
    """The p-gon C_t traversed as x_0, x_t, x_2t, ..., x_(p-1)t, x_0."""

    p: int
    t: int

    def __post_init__(self) -> None:
        require_odd_prime(self.p)
        if not isinstance(self.t, int) or not 1 <= self.t <= (self.p - 1) // 2:
            raise InvalidInput(
                f"t must lie in 1..{(self.p - 1) // 2} for p={self.p}, got {self.t!r}"
            )

    @property
    def vertex_order(self) -> Tuple[int, ...]:
        return tuple((k * self.t) % self.p for k in range(self.p))

    @property
    def edges(self) -> Tuple[Edge, ...]:
        order = self.vertex_order
        return tuple((order[k], order[(k + 1) % self.p]) for k in range(self.p))

    def edge_set(self) -> frozenset:
        return frozenset(frozenset(e) for e in self.edges)


def cycle_edges(p: int, t: int) -> CycleSpec:
    return CycleSpec(p, t)
