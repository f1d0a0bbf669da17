"""Command-line entry point: ``equigon <subcommand> ...``.

Every subcommand is a thin adapter over the library. Tuning options
(seed, restarts, grid size, ...) resolve as flag > EQUIGON_CONFIG > built-in
default, where EQUIGON_CONFIG names a JSON file such as

    {"seed": 3, "solve": {"restarts": 128}, "biequilateral": {"grid": 20000}}

Top-level scalars apply to every subcommand that has the option; an object
keyed by a subcommand name applies to that subcommand only.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence, TextIO, Tuple

from . import __version__
from .admissibility import AdmissibilityReport, pair_admissible, triplet_check
from .biequilateral import curve, scan
from .cohomology import bottom_row_survivor_check, e2_page
from .errors import InvalidInput
from .index import (
    index_config_space,
    index_delta_complement,
    index_free_sphere,
    map_obstruction,
)
from .jsonio import RunRecord, canonical_dumps, with_schema
from .metrics import GeneralizedSymmetric, MetricSpec, describe, metric_from_json, parse_metric_shorthand
from .orbits import edge_orbits
from .reproduce import SECTIONS, SOFT_BUDGET_SECONDS, reproduce_paper
from .solver import SolveOptions, solve
from .testmap import Inclusion, build_problem, embedding_from_json

CONFIG_ENV = "EQUIGON_CONFIG"

# options that may come from the config file, with their types
TUNABLE: Dict[str, Dict[str, type]] = {
    "solve": {"seed": int, "restarts": int, "max_iters": int, "tol": float, "box_radius": float},
    "biequilateral": {"grid": int},
    "e2": {"smax": int},
}

Outcome = Tuple[dict, str, int]


# ------------------------------------------------------------------ inputs


def _load_json_arg(text: str, what: str):
    """Inline JSON (starting with '{') or a path to a JSON file."""
    try:
        if text.lstrip().startswith("{"):
            return json.loads(text)
        return json.loads(Path(text).read_text())
    except OSError as exc:
        raise InvalidInput(f"cannot read {what} file {text!r}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{what} is not valid JSON: {exc.msg}") from None


def _parse_metric(text: str) -> MetricSpec:
    if text.startswith("gsym:"):
        return GeneralizedSymmetric(text[5:])
    metric = parse_metric_shorthand(text)
    if metric is not None:
        return metric
    return metric_from_json(_load_json_arg(text, "metric"))


def _parse_pair(text: str) -> Tuple[int, MetricSpec]:
    t, sep, spec = text.partition(":")
    if not sep or not spec:
        raise InvalidInput(f"--pair expects t:metric, got {text!r}")
    try:
        step = int(t)
    except ValueError:
        raise InvalidInput(f"cycle step must be an integer, got {t!r}") from None
    return step, _parse_metric(spec)


def _load_config(environ) -> dict:
    path = environ.get(CONFIG_ENV)
    if not path:
        return {}
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise InvalidInput(f"cannot read {CONFIG_ENV} file {path!r}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{CONFIG_ENV} file {path!r} is not valid JSON: {exc.msg}") from None
    if not isinstance(data, dict):
        raise InvalidInput(f"{CONFIG_ENV} file must hold a JSON object")
    return data


def _config_defaults(command: str, config: dict) -> dict:
    types = TUNABLE.get(command, {})
    merged = {k.replace("-", "_"): v for k, v in config.items() if not isinstance(v, dict)}
    scoped = config.get(command, {})
    if isinstance(scoped, dict):
        merged.update({k.replace("-", "_"): v for k, v in scoped.items()})
    out = {}
    for key, value in merged.items():
        if key not in types:
            continue
        try:
            out[key] = types[key](value)
        except (TypeError, ValueError):
            raise InvalidInput(f"config value for {key!r} must be {types[key].__name__}, got {value!r}") from None
    return out


# ---------------------------------------------------------------- handlers


def _orbits(args) -> Outcome:
    orbits = edge_orbits(args.m)
    lines = [f"{o.kind}: " + " ".join(f"{{{a},{b}}}" for a, b in o.edges) for o in orbits]
    return {"m": args.m, "orbits": [o.to_dict() for o in orbits]}, "\n".join(lines), 0


def _solve(args) -> Outcome:
    if args.embed is not None and not args.sphere:
        raise InvalidInput("--embed needs --sphere")
    if not args.pair:
        raise InvalidInput("at least one --pair t:metric is required")
    pairs = [_parse_pair(text) for text in args.pair]
    embedding = None
    if args.sphere:
        embedding = embedding_from_json(_load_json_arg(args.embed, "embedding")) if args.embed else Inclusion()
    problem = build_problem(args.d, args.p, pairs, embedding)
    options = SolveOptions(
        restarts=args.restarts,
        max_iters=args.max_iters,
        tol=args.tol,
        seed=args.seed,
        box_radius=args.box_radius,
    )
    sol = solve(problem, options)
    lines = [
        f"status: {sol.status}",
        f"residual: {sol.residual:.3e} (tol {sol.tol:.0e})",
        f"min separation: {sol.min_separation:.6g}",
        f"starts used: {sol.starts_used}",
    ]
    for (t, metric), c in zip(pairs, sol.common_lengths):
        lines.append(f"C_{t} under {describe(metric)}: common length {c:.12g}")
    lines.append("points:")
    lines.extend("  " + " ".join(f"{x: .12f}" for x in row) for row in sol.config.points)
    if not sol.found:
        lines.append("no configuration found; this is a search failure, not a proof of nonexistence")
    payload = {"problem": problem.to_json(), "solution": sol.to_json()}
    return payload, "\n".join(lines), 0


def _index(args) -> Outcome:
    if args.space == "config":
        ideal, label = index_config_space(args.d, args.p), f"Ind F(R^{args.d}, {args.p})"
    elif args.space == "sphere":
        ideal, label = index_free_sphere(args.n, args.p), f"Ind S^{args.n} (free, p={args.p})"
    else:
        ideal, label = index_delta_complement(args.r, args.p), f"Ind S((Delta^{args.r})^perp) (p={args.p})"
    return {"space": args.space, "index": ideal.to_json(), "text": str(ideal)}, f"{label} = {ideal}", 0


def _obstruction(args) -> Outcome:
    source = index_config_space(args.d, args.p)
    target = index_delta_complement(args.r, args.p)
    verdict = map_obstruction(source, target)
    text = "\n".join(
        [
            str(verdict),
            f"  source Ind F(R^{args.d}, {args.p}) = {source}",
            f"  target Ind S((Delta^{args.r})^perp) = {target}",
        ]
    )
    payload = {"verdict": verdict.value, "source_index": source.to_json(), "target_index": target.to_json()}
    return payload, text, 0


def _report_lines(label: str, report: AdmissibilityReport) -> List[str]:
    lines = [f"{label}: {report.summary}"]
    for c in report.conditions:
        mark = "holds" if c.holds else "fails"
        extra = f"  witness {c.witness}" if c.witness is not None else ""
        lines.append(f"  [{mark}] {c.name}{extra}")
    return lines


def _admissible(args) -> Outcome:
    if args.r is None:
        report = pair_admissible(args.d, args.p)
        lines = _report_lines("admissible", report)
    else:
        report = triplet_check(args.d, args.r, args.p)
        lines = _report_lines("obstructed", report)
    cert = report.certificate
    if cert is not None:
        lines.append(f"  survivor check: b class {'survives' if cert.survives else 'may be hit'}")
    return report.to_json(), "\n".join(lines), 0


def _e2(args) -> Outcome:
    page = e2_page(args.d, args.p, args.smax)
    header = f"E_2 page, d={args.d}, p={args.p} (bottom row {page.bottom_row_ring})"
    return page.to_json(), header + "\n" + page.grid(), 0


def _survivor(args) -> Outcome:
    report = bottom_row_survivor_check(args.d, args.r, args.p)
    n = args.r * (args.p - 1)
    lines = [f"survives: {'true' if report.survives else 'false'}  (target E^({n}, 0))"]
    for diff in report.candidates:
        state = "blocks" if diff.source_dim else "zero source"
        lines.append(f"  {diff}  {state}")
    return report.to_json(), "\n".join(lines), 0


def _biequilateral(args) -> Outcome:
    result = scan(args.grid)
    lines = [f"{'theta':>20} {'d01 = d02':>20} {'d12':>20} {'gap':>12}"]
    for t, c, d in zip(result.equalization_thetas, result.common_values, result.third_values):
        lines.append(f"{t:20.15f} {c:20.15f} {d:20.15f} {abs(c - d):12.6f}")
    lines.append(f"min gap: {result.min_gap:.12f}")
    lines.append(f"verdict: {result.verdict}")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["theta", "d01", "d02", "d12"])
            for row in curve(args.grid):
                writer.writerow([format(v, ".17g") for v in row])
        lines.append(f"curve written to {args.csv}")
    return result.to_json(), "\n".join(lines), 0


def _reproduce(args) -> Outcome:
    sections = list(args.section) if args.section else list(SECTIONS)
    if args.skip_solver:
        sections = [s for s in sections if s != "solver"]
    report = reproduce_paper(sections)
    lines = [r.line() for r in report.results]
    passed = sum(r.passed for r in report.results)
    lines.append(f"{passed}/{len(report.results)} passed in {report.seconds:.2f} s")
    if report.over_budget:
        print(f"warning: run took {report.seconds:.1f} s, over the {SOFT_BUDGET_SECONDS:.0f} s budget", file=args.stderr)
    return report.to_json(), "\n".join(lines), 0 if report.passed else 1


# ------------------------------------------------------------------ parser


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--json",
        nargs="?",
        const="-",
        metavar="PATH",
        help="emit canonical JSON (to stdout, or to PATH with the table still printed)",
    )
    common.add_argument("--record", metavar="PATH", help="write a replayable RunRecord to PATH")
    return common


def build_parser() -> argparse.ArgumentParser:
    return _build()[0]


def _build() -> Tuple[argparse.ArgumentParser, Dict[str, argparse.ArgumentParser]]:
    common = _common()
    parser = argparse.ArgumentParser(prog="equigon", description="Equilateral p-gon workbench.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    p = sub.add_parser("orbits", parents=[common], help="Z/m orbits on the edges of K_m")
    p.add_argument("m", type=int)
    p.set_defaults(handler=_orbits)

    p = sub.add_parser("solve", parents=[common], help="search for an r-equilateral p-gon")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument(
        "--pair",
        action="append",
        metavar="T:METRIC",
        help="cycle step and metric: l1, l2, linf, lq like l3.5, gsym:NAME, inline JSON or a JSON file",
    )
    p.add_argument("--sphere", action="store_true", help="points on S^d instead of R^d")
    p.add_argument("--embed", metavar="JSON", help="embedding of S^d into R^(d+1), inline or file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=64)
    p.add_argument("--max-iters", type=int, default=2000)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--box-radius", type=float, default=2.0)
    p.set_defaults(handler=_solve)

    p = sub.add_parser("index", help="Fadell-Husseini index of a standard space")
    spaces = p.add_subparsers(dest="space", metavar="SPACE", required=True)
    q = spaces.add_parser("config", parents=[common], help="F(R^d, p)")
    q.add_argument("--d", type=int, required=True)
    q.add_argument("--p", type=int, required=True)
    q = spaces.add_parser("sphere", parents=[common], help="free Z/p-sphere S^n")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--p", type=int, required=True)
    q = spaces.add_parser("delta", parents=[common], help="unit sphere of (Delta^r)^perp")
    q.add_argument("--r", type=int, required=True)
    q.add_argument("--p", type=int, required=True)
    p.set_defaults(handler=_index)

    p = sub.add_parser("obstruction", parents=[common], help="index test for F(R^d,p) -> S((Delta^r)^perp)")
    for flag in ("--d", "--r", "--p"):
        p.add_argument(flag, type=int, required=True)
    p.set_defaults(handler=_obstruction)

    p = sub.add_parser("admissible", parents=[common], help="admissibility of (d, p), or (d, r, p) with --r")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--r", type=int, default=None)
    p.set_defaults(handler=_admissible)

    p = sub.add_parser("e2", parents=[common], help="E_2 page of the Borel fibration of X_{d,p}")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--smax", type=int, default=6)
    p.set_defaults(handler=_e2)

    p = sub.add_parser("survivor", parents=[common], help="bottom-row survivor check")
    for flag in ("--d", "--r", "--p"):
        p.add_argument(flag, type=int, required=True)
    p.set_defaults(handler=_survivor)

    p = sub.add_parser("biequilateral", parents=[common], help="taxicab scan of inscribed equilateral triangles")
    p.add_argument("--grid", type=int, default=100_000)
    p.add_argument("--csv", metavar="PATH", help="write (theta, d01, d02, d12) on the grid")
    p.set_defaults(handler=_biequilateral)

    p = sub.add_parser("reproduce-paper", parents=[common], help="rerun every anchored value")
    p.add_argument("--section", action="append", choices=list(SECTIONS), help="run only these sections")
    p.add_argument("--skip-solver", action="store_true", help="leave out the numerical solver section")
    p.set_defaults(handler=_reproduce)
    return parser, sub.choices


def _inputs(args) -> dict:
    skip = {"handler", "json", "record", "stderr"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def dispatch(
    argv: Optional[Sequence[str]] = None,
    stdout: Optional[TextIO] = None,
    stderr: Optional[TextIO] = None,
    environ=None,
) -> int:
    """Run one command; returns the exit code instead of exiting."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    environ = os.environ if environ is None else environ
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, commands = _build()
    try:
        config = _load_config(environ)
        for name, sub in commands.items():
            sub.set_defaults(**_config_defaults(name, config))
    except InvalidInput as exc:
        print(f"error: {exc}", file=stderr)
        return 1
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args.stderr = stderr
    try:
        payload, text, code = args.handler(args)
    except InvalidInput as exc:
        print(f"error: {exc}", file=stderr)
        return 1
    document = with_schema(args.command, payload)
    if args.json == "-":
        print(canonical_dumps(document), file=stdout)
    else:
        print(text, file=stdout)
        if args.json:
            Path(args.json).write_text(canonical_dumps(document) + "\n")
    if args.record:
        record = RunRecord(
            command=args.command,
            inputs=_inputs(args),
            outputs=payload,
            tool_version=__version__,
            seed=getattr(args, "seed", None),
        )
        Path(args.record).write_text(record.dumps() + "\n")
    return code


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
