"""Regenerate every literature-anchored number and compare with its expected value."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Any, Callable, List, Tuple

import numpy as np

from . import admissibility, biequilateral, cohomology, index, orbits
from .metrics import L1, L2, eval_metric
from .solver import SolveOptions, solve
from .testmap import Configuration, Inclusion, build_problem, edge_lengths

SOFT_BUDGET_SECONDS = 60.0
VALUE_TOL = 1e-9
THETA_TOL = 1e-6

S3 = math.sqrt(3.0)
S2 = math.sqrt(2.0)


@dataclass
class CheckResult:
    section: str
    name: str
    measured: Any
    expected: Any
    passed: bool
    seconds: float

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.section}: {self.name}  measured={self.measured}  expected={self.expected}"

    def to_json(self) -> dict:
        return {
            "section": self.section,
            "name": self.name,
            "measured": _plain(self.measured),
            "expected": _plain(self.expected),
            "passed": self.passed,
        }


def _plain(value):
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, (bool, int, float, str)) or value is None:
        return value
    return str(value)


def _close(a, b, tol=VALUE_TOL) -> bool:
    return all(abs(x - y) <= tol for x, y in zip(a, b)) and len(a) == len(b)


Check = Tuple[str, str, Callable[[], Tuple[Any, Any, bool]]]


def _orbit_checks() -> List[Check]:
    def fig_a():
        got = [(sorted(o.edges), o.kind) for o in orbits.edge_orbits(4)]
        want = [([(0, 1), (0, 3), (1, 2), (2, 3)], "NGon(4)"), ([(0, 2), (1, 3)], "NotAGon")]
        return got, want, got == want

    def fig_b():
        got = [o.edge_set() for o in orbits.edge_orbits(5)]
        want = [orbits.cycle_edges(5, 1).edge_set(), orbits.cycle_edges(5, 2).edge_set()]
        kinds = [o.kind for o in orbits.edge_orbits(5)]
        return kinds, ["NGon(5)", "NGon(5)"], got == want and kinds == ["NGon(5)"] * 2

    def c52():
        got = list(orbits.cycle_edges(5, 2).edges)
        want = [(0, 2), (2, 4), (4, 1), (1, 3), (3, 0)]
        return got, want, got == want

    return [
        ("orbits", "Z/4 orbits on K_4", fig_a),
        ("orbits", "Z/5 orbits on K_5 are C_1, C_2", fig_b),
        ("orbits", "C_2 for p=5", c52),
    ]


def _index_checks() -> List[Check]:
    def ideal(got, want):
        return str(got), want, str(got) == want

    def sharp():
        bad = [
            (d, r, p)
            for p in (3, 5, 7)
            for d in range(1, 9)
            for r in range(1, 9)
            if (index.map_obstruction(index.index_config_space(d, p), index.index_delta_complement(r, p))
                is index.IndexVerdict.EXCLUDED) != (d > r)
        ]
        return len(bad), 0, not bad

    def obstruction(d, r, p, want):
        got = index.map_obstruction(index.index_config_space(d, p), index.index_delta_complement(r, p))
        return str(got), want, str(got) == want

    def product():
        b1 = index.StoredIdeal(3, ("b1",), (index.GradedPoly.monomial(3, ("b1",), (2,)),))
        b2 = index.StoredIdeal(3, ("b2",), (index.GradedPoly.monomial(3, ("b2",), (3,)),))
        return ideal(index.index_product(b1, b2), "<b1^2, b2^3>")

    return [
        ("index", "free sphere S^3, p=5", lambda: ideal(index.index_free_sphere(3, 5), "<a^0 b^2>")),
        ("index", "E_4 space, p=3", lambda: ideal(index.index_free_sphere(4, 3), "<a^1 b^2>")),
        ("index", "antipodal S^1, p=2", lambda: ideal(index.index_free_sphere(1, 2), "<t^2>")),
        ("index", "F(R^2,3)", lambda: ideal(index.index_config_space(2, 3), "<a^0 b^2, a^1 b^1>")),
        ("index", "F(R^3,3)", lambda: ideal(index.index_config_space(3, 3), "<a^0 b^3, a^1 b^2>")),
        ("index", "F(R^2,5)", lambda: ideal(index.index_config_space(2, 5), "<a^0 b^3, a^1 b^2>")),
        ("index", "S((Delta^1)^perp), p=3", lambda: ideal(index.index_delta_complement(1, 3), "<a^0 b^1>")),
        ("index", "S((Delta^2)^perp), p=5", lambda: ideal(index.index_delta_complement(2, 5), "<a^0 b^4>")),
        ("index", "obstruction d=2 r=1 p=3", lambda: obstruction(2, 1, 3, "Excluded")),
        ("index", "obstruction d=2 r=2 p=3", lambda: obstruction(2, 2, 3, "Inconclusive")),
        ("index", "Excluded iff d > r on d,r<=8, p in {3,5,7}", sharp),
        ("index", "product <b1^2> x <b2^3>", product),
        (
            "index",
            "join of spheres b^2 * b^3",
            lambda: ideal(index.index_join_spheres(index.MonomialAB(0, 2, 5), index.MonomialAB(0, 3, 5)), "a^0 b^5"),
        ),
        ("index", "torus line (2,1), p=3", lambda: ideal(index.index_torus_rep_line((2, 1), 3), "2*b1 + b2")),
    ]


def _cohomology_checks() -> List[Check]:
    def perm():
        h = cohomology.cyclic_cohomology(cohomology.permutation_module(3))
        got = (h.h0, h.h_odd, h.h_even_pos)
        return got, (1, 0, 0), got == (1, 0, 0)

    def betti(d, p, want):
        got = cohomology.betti_xdp(d, p)
        return got, want, got == want

    def row(t, want):
        got = cohomology.e2_page(2, 3, 4).row(t)
        return got, want, got == want

    def survivor():
        rep = cohomology.bottom_row_survivor_check(3, 2, 5)
        return rep.survives, True, rep.survives

    return [
        ("cohomology", "H^*(Z/3; F_3[Z/3])", perm),
        ("cohomology", "betti X_{2,3}", lambda: betti(2, 3, {0: 1, 2: 3, 4: 2})),
        ("cohomology", "betti X_{3,3}", lambda: betti(3, 3, {0: 1, 3: 3, 6: 2})),
        ("cohomology", "E_2 (d,p)=(2,3) row t=0", lambda: row(0, [1, 1, 1, 1, 1])),
        ("cohomology", "E_2 (d,p)=(2,3) row t=2", lambda: row(2, [1, 0, 0, 0, 0])),
        ("cohomology", "E_2 (d,p)=(2,3) row t=4", lambda: row(4, [1, 1, 1, 1, 1])),
        ("cohomology", "b^4 survives for (d,r,p)=(3,2,5)", survivor),
    ]


def _admissibility_checks() -> List[Check]:
    def verdict(report, want, extra=True):
        return report.verdict, want, report.verdict == want and extra

    def witness35():
        rep = admissibility.pair_admissible(3, 5)
        w = rep.conditions[1].witness
        return (rep.verdict, w), (True, [4, 7, 10, 13]), rep.verdict and w == [4, 7, 10, 13]

    def borsuk():
        rep = admissibility.theorem_equilateral_applies(2, 1, 3)
        return (rep.verdict, str(rep.certificate)), (True, "Excluded"), rep.verdict and str(rep.certificate) == "Excluded"

    def sharp():
        rep = admissibility.theorem_equilateral_applies(2, 2, 3)
        got = (rep.verdict, str(rep.certificate))
        return got, (False, "Inconclusive"), got == (False, "Inconclusive")

    def parity():
        bad = [
            (d, p)
            for d in range(2, 11, 2)
            for p in range(3, 2 * d + 2)
            if orbits.is_prime(p) and not admissibility.pair_admissible(d, p).verdict
        ]
        return len(bad), 0, not bad

    return [
        ("admissibility", "(d,r,p)=(2,1,3) applies", borsuk),
        ("admissibility", "(d,r,p)=(2,2,3) not established", sharp),
        ("admissibility", "(2,5) admissible", lambda: verdict(admissibility.pair_admissible(2, 5), True)),
        ("admissibility", "(3,5) admissible, jd+1 values", witness35),
        ("admissibility", "even d <= 10, p <= 2d+1 admissible", parity),
    ]


def _biequilateral_checks() -> List[Check]:
    top = (3 + S3) / 2

    def at(theta, want):
        got = biequilateral.taxicab_lengths(theta)
        return [round(v, 12) for v in got], [round(v, 12) for v in want], _close(got, want)

    def roots():
        res = biequilateral.scan(100_000)
        want = [0.0, math.pi / 4, math.pi / 2]
        return res.equalization_thetas, want, _close(res.equalization_thetas, want, THETA_TOL)

    def gap():
        res = biequilateral.scan(100_000)
        ok = res.verdict == "NoBiEquilateral" and abs(res.min_gap - (math.sqrt(6) - 3 * S2 / 2)) <= VALUE_TOL
        return (res.verdict, res.min_gap), ("NoBiEquilateral", math.sqrt(6) - 3 * S2 / 2), ok

    def l1_eval():
        got = eval_metric(L1, (1.0, 0.0), (-0.5, S3 / 2))
        return got, top, abs(got - top) <= VALUE_TOL

    def pi4_edges():
        problem = build_problem(2, 3, [(1, L1)])
        got = edge_lengths(Configuration(biequilateral.inscribed_triangle(math.pi / 4)), problem, 0).tolist()
        want = [3 * S2 / 2, math.sqrt(6), 3 * S2 / 2]
        return got, want, _close(got, want)

    def agreement():
        worst = max(biequilateral.reduced_form_agreement(t) for t in (0.0, math.pi / 4, 2 * math.pi / 3))
        return worst, 1e-12, worst <= 1e-12

    return [
        ("biequilateral", "taxicab lengths at theta=0", lambda: at(0.0, (top, top, S3))),
        ("biequilateral", "taxicab lengths at theta=pi/4", lambda: at(math.pi / 4, (3 * S2 / 2, 3 * S2 / 2, math.sqrt(6)))),
        ("biequilateral", "taxicab lengths at theta=pi/2", lambda: at(math.pi / 2, (top, top, S3))),
        ("biequilateral", "reduced forms match unreduced", agreement),
        ("biequilateral", "d01 = d02 only at 0, pi/4, pi/2", roots),
        ("biequilateral", "no taxicab-equilateral member", gap),
        ("biequilateral", "L1 side of the theta=0 triangle", l1_eval),
        ("biequilateral", "test-map lengths at theta=pi/4", pi4_edges),
    ]


def _solver_checks() -> List[Check]:
    def run(problem, want_found, restarts=64):
        sol = solve(problem, SolveOptions(seed=0, restarts=restarts))
        return sol.status, "Found" if want_found else "NotFound", sol.found == want_found

    def pentagon():
        sol = solve(build_problem(2, 5, [(1, L2), (2, L2)], Inclusion()), SolveOptions(seed=0))
        pts = sol.config.points
        spreads = []
        for t in (1, 2):
            lengths = [np.linalg.norm(pts[(k * t) % 5] - pts[((k + 1) * t) % 5]) for k in range(5)]
            spreads.append(max(lengths) - min(lengths))
        ok = sol.found and max(spreads) <= 1e-6
        return (sol.status, float(max(spreads))), ("Found", "<= 1e-6"), ok

    return [
        ("solver", "equilateral triangle in R^2", lambda: run(build_problem(2, 3, [(1, L2)]), True)),
        ("solver", "(L2, L1) bi-equilateral triangle in R^3", lambda: run(build_problem(3, 3, [(1, L2), (1, L1)]), True)),
        ("solver", "pentagon + pentagram on S^2", pentagon),
        (
            "solver",
            "(L2, L1) bi-equilateral triangle in R^2, 256 starts",
            lambda: run(build_problem(2, 3, [(1, L2), (1, L1)]), False, restarts=256),
        ),
    ]


SECTIONS = {
    "orbits": _orbit_checks,
    "index": _index_checks,
    "cohomology": _cohomology_checks,
    "admissibility": _admissibility_checks,
    "biequilateral": _biequilateral_checks,
    "solver": _solver_checks,
}


@dataclass
class ReproduceReport:
    results: List[CheckResult]
    seconds: float

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def over_budget(self) -> bool:
        return self.seconds > SOFT_BUDGET_SECONDS

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "seconds": round(self.seconds, 3),
            "items": [r.to_json() for r in self.results],
        }


def reproduce_paper(sections=None) -> ReproduceReport:
    chosen = list(SECTIONS) if sections is None else list(sections)
    t0 = time.perf_counter()
    results = []
    for section in chosen:
        for sec, name, fn in SECTIONS[section]():
            t = time.perf_counter()
            try:
                measured, expected, ok = fn()
            except Exception as exc:  # a crash is a failed item, not an aborted run
                measured, expected, ok = f"error: {exc}", "no error", False
            results.append(CheckResult(sec, name, measured, expected, bool(ok), time.perf_counter() - t))
    return ReproduceReport(results, time.perf_counter() - t0)
