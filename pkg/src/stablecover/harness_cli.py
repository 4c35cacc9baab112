"""Stream I/O, experiment orchestration and the command-line surface.

Streams are plain text, one event per line (``insert x y``, ``delete x y``,
or ``line a b c`` with exact rationals, three line-rows per arrival step).
Reports are CSV with a fixed header and a summary trailer; every value in a
row is recomputed here from first principles (coverage recount, multiset
difference, a fresh oracle solve) rather than copied from engine internals,
and any invariant violation makes the process exit nonzero.
"""

from __future__ import annotations

import argparse
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import baseline, sas_engine
from .adversary.lines import RationalLine, evaluate_hitting
from .adversary.lower_bound import lower_bound_stream
from .adversary.streams import (
    ExactHittingMaintainer,
    ExactMaintainer,
    GreedyHittingMaintainer,
    build_line_instance,
    disk_churn,
    solve_hitting,
)
from .geometry import Point, coverage_value
from .sas_engine import EngineConfig, EngineState
from .static_solver import SolverKind, solve

REPORT_HEADER = "t,op,alg_value,opt_value,ratio,churn,branch"

POINT_ENGINES = ("sas", "two_stable", "exact_maintainer")
LINE_ENGINES = ("greedy_hitting", "exact_hitting")


class HarnessError(Exception):
    pass


@dataclass
class RunConfig:
    engine: str = "sas"
    m: int = 2
    epsilon: float = 0.25
    solver: SolverKind = SolverKind.EXACT
    seed: int = 0
    scaled: dict | None = None  # None: stock constants; dict: scaled overrides
    out: str | None = None


# ---------------------------------------------------------------------------
# Stream files.


@dataclass
class UpdateStream:
    kind: str  # "points" | "lines"
    point_events: list[tuple[str, Point]] = field(default_factory=list)
    line_steps: list[list[RationalLine]] = field(default_factory=list)


def parse_stream(text: str) -> UpdateStream:
    point_events: list[tuple[str, Point]] = []
    raw_lines: list[RationalLine] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        row = raw.strip()
        if not row or row.startswith("#"):
            continue
        parts = row.split()
        try:
            if parts[0] in ("insert", "delete") and len(parts) == 3:
                point_events.append(
                    (parts[0], Point(float(parts[1]), float(parts[2])))
                )
            elif parts[0] == "line" and len(parts) == 4:
                a, b, c = (Fraction(tok) for tok in parts[1:])
                raw_lines.append(RationalLine.normalized(a, b, c))
            else:
                raise ValueError("unrecognized record")
        except (ValueError, ZeroDivisionError) as exc:
            raise HarnessError(f"malformed stream line {lineno}: {raw!r} ({exc})")
    if point_events and raw_lines:
        raise HarnessError("stream mixes point and line events")
    if raw_lines:
        if len(raw_lines) % 3 != 0:
            raise HarnessError("line streams must arrive in triples")
        steps = [raw_lines[i : i + 3] for i in range(0, len(raw_lines), 3)]
        return UpdateStream(kind="lines", line_steps=steps)
    return UpdateStream(kind="points", point_events=point_events)


def load_stream(path: str | Path) -> UpdateStream:
    return parse_stream(Path(path).read_text())


def format_point_event(op: str, p: Point) -> str:
    return f"{op} {p.x!r} {p.y!r}"


def format_line_event(line: RationalLine) -> str:
    return f"line {line.a} {line.b} {line.c}"


# ---------------------------------------------------------------------------
# Generators.


def gen_random(n: int, bbox: float, seed: int, delete_prob: float = 0.0) -> list[str]:
    rng = random.Random(seed)
    rows: list[str] = []
    present: list[Point] = []
    for _ in range(n):
        if present and rng.random() < delete_prob:
            victim = present.pop(rng.randrange(len(present)))
            rows.append(format_point_event("delete", victim))
        else:
            p = Point(rng.uniform(0.0, bbox), rng.uniform(0.0, bbox))
            present.append(p)
            rows.append(format_point_event("insert", p))
    return rows


def gen_lower_bound(m: int) -> list[str]:
    """2m chain inserts plus the trigger that is adversarial for a canonical
    exact maintainer replaying the same prefix."""
    stream = lower_bound_stream(m)
    maintainer = ExactMaintainer(m)
    for p in stream.prefix:
        maintainer.apply("insert", p)
    trigger = stream.choose_trigger(maintainer.solution())
    return [format_point_event("insert", p) for p in stream.prefix] + [
        format_point_event("insert", trigger)
    ]


def gen_lines(m: int, seed: int) -> list[str]:
    """Non-adaptive flattening of the schedule (the attachment side is fixed
    to L); the adaptive variant is available through the library API."""
    instance = build_line_instance(m, seed)
    rows = []
    for tri in instance.schedule_lines(instance.base_triples):
        rows.extend(format_line_event(ln) for ln in tri)
    for tri in instance.schedule_lines(instance.z_triples["L"]):
        rows.extend(format_line_event(ln) for ln in tri)
    return rows


# ---------------------------------------------------------------------------
# Replay.


def _engine_config(config: RunConfig) -> EngineConfig:
    overrides = dict(config.scaled or {})
    return EngineConfig(
        m=config.m,
        epsilon=config.epsilon,
        solver=config.solver,
        scaled_mode=config.scaled is not None,
        **overrides,
    )


def _check(condition: bool, message: str) -> None:
    if not condition:
        raise HarnessError(message)


def run_points(config: RunConfig, events: list[tuple[str, Point]]) -> list[str]:
    rows = []
    points: set[Point] = set()
    if config.engine == "exact_maintainer":
        maintainer = ExactMaintainer(config.m, config.solver)
        stepper = None
        state = None
    else:
        state = EngineState(config=_engine_config(config))
        stepper = sas_engine.update if config.engine == "sas" else baseline.update2
        maintainer = None

    for t, (op, p) in enumerate(events, start=1):
        if op == "insert":
            _check(p not in points, f"duplicate insert at t={t}")
            points.add(p)
        else:
            _check(p in points, f"delete of absent point at t={t}")
            points.remove(p)
        if config.engine == "exact_maintainer":
            before = maintainer.solution()
            maintainer.apply(op, p)
            after = maintainer.solution()
            branch = "Recompute"
        else:
            before = list(state.disks)
            report = stepper(state, op, p)
            after = list(state.disks)
            branch = report.branch.value

        alg = coverage_value(points, after)
        opt = solve(points, config.m, config.solver).value
        churn = disk_churn(before, after)
        if state is not None:
            _check(report.alg_value == alg, f"alg recount mismatch at t={t}")
            _check(report.opt_value == opt, f"opt recount mismatch at t={t}")
            _check(report.churn == churn, f"churn recount mismatch at t={t}")
        if config.engine == "sas":
            _check(
                opt <= (1.0 + config.epsilon) * alg,
                f"ratio invariant failed at t={t}: opt={opt} alg={alg}",
            )
        elif config.engine == "two_stable":
            _check(opt <= 2 * alg, f"2-approximation failed at t={t}")
            _check(churn <= 2, f"churn {churn} above 2 at t={t}")
        else:
            _check(alg == opt, f"exact maintainer suboptimal at t={t}")
        ratio = alg / opt if opt else 1.0
        rows.append(f"{t},{op},{alg},{opt},{ratio:.6f},{churn},{branch}")
    return rows


def run_lines(config: RunConfig, steps: list[list[RationalLine]]) -> list[str]:
    maintainer = (
        GreedyHittingMaintainer(config.m)
        if config.engine == "greedy_hitting"
        else ExactHittingMaintainer(config.m)
    )
    rows = []
    arrived: list[RationalLine] = []
    for t, triple in enumerate(steps, start=1):
        before = set(maintainer.solution())
        maintainer.apply_triple(triple)
        after = set(maintainer.solution())
        arrived.extend(triple)
        alg = evaluate_hitting(after, arrived)
        opt, _ = solve_hitting(arrived, config.m)
        churn = len(before ^ after)
        if config.engine == "exact_hitting":
            _check(alg == opt, f"exact hitting maintainer suboptimal at t={t}")
        ratio = alg / opt if opt else 1.0
        rows.append(f"{t},lines,{alg},{opt},{ratio:.6f},{churn},Hitting")
    return rows


def run(config: RunConfig, stream: UpdateStream) -> str:
    _check(config.m >= 1, "m must be at least 1")
    if stream.kind == "points":
        _check(config.engine in POINT_ENGINES, f"engine {config.engine} needs a line stream")
        rows = run_points(config, stream.point_events)
    else:
        _check(config.engine in LINE_ENGINES, f"engine {config.engine} needs a point stream")
        rows = run_lines(config, stream.line_steps)
    max_churn = 0
    min_ratio = 1.0
    for row in rows:
        parts = row.split(",")
        max_churn = max(max_churn, int(parts[5]))
        min_ratio = min(min_ratio, float(parts[4]))
    out = [REPORT_HEADER]
    out.extend(rows)
    out.append(f"# summary max_churn={max_churn} min_ratio={min_ratio:.6f}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# CLI.


def _parse_overrides(text: str) -> dict:
    out: dict = {}
    if not text:
        return out
    for item in text.split(","):
        key, _, value = item.partition("=")
        key = key.strip()
        if not key:
            continue
        value = value.strip()
        if key in ("epsilon", "grid_edge"):
            out[key] = float(value)
        else:
            out[key] = int(value)
    return out


def _config_from_args(args) -> RunConfig:
    return RunConfig(
        engine=args.engine,
        m=args.m,
        epsilon=args.epsilon,
        solver=SolverKind.GREEDY if args.solver == "greedy" else SolverKind.EXACT,
        seed=args.seed,
        scaled=_parse_overrides(args.scaled) if args.scaled is not None else None,
        out=args.out,
    )


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="stablecover",
        description="dynamic unit-disk max coverage: stream generation, replay, verification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="write a deterministic update stream")
    p_gen.add_argument("kind", choices=("random", "lower_bound", "lines"))
    p_gen.add_argument("--n", type=int, default=50)
    p_gen.add_argument("--m", type=int, default=4)
    p_gen.add_argument("--bbox", type=float, default=100.0)
    p_gen.add_argument("--delete-prob", type=float, default=0.0)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", default=None)

    p_run = sub.add_parser("run", help="replay a stream and write a report")
    p_run.add_argument("--stream", required=True)
    p_run.add_argument("--engine", default="sas", choices=POINT_ENGINES + LINE_ENGINES)
    p_run.add_argument("--m", type=int, default=2)
    p_run.add_argument("--epsilon", type=float, default=0.25)
    p_run.add_argument("--solver", default="exact", choices=("exact", "greedy"))
    p_run.add_argument("--seed", type=int, default=0)
    p_run.add_argument("--scaled", nargs="?", const="", default=None,
                       help="scaled-constant overrides, e.g. c_star=1,kappa=3")
    p_run.add_argument("--out", default=None)

    p_ver = sub.add_parser("verify", help="re-run a stream and compare reports")
    p_ver.add_argument("--stream", required=True)
    p_ver.add_argument("--report", required=True)
    p_ver.add_argument("--engine", default="sas", choices=POINT_ENGINES + LINE_ENGINES)
    p_ver.add_argument("--m", type=int, default=2)
    p_ver.add_argument("--epsilon", type=float, default=0.25)
    p_ver.add_argument("--solver", default="exact", choices=("exact", "greedy"))
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.add_argument("--scaled", nargs="?", const="", default=None)
    p_ver.add_argument("--out", default=None)

    args = parser.parse_args(argv)
    try:
        if args.command == "gen":
            if args.kind == "random":
                rows = gen_random(args.n, args.bbox, args.seed, args.delete_prob)
            elif args.kind == "lower_bound":
                rows = gen_lower_bound(args.m)
            else:
                rows = gen_lines(args.m, args.seed)
            _write("\n".join(rows) + "\n", args.out)
            return 0
        stream = load_stream(args.stream)
        config = _config_from_args(args)
        report = run(config, stream)
        if args.command == "run":
            _write(report, args.out)
            return 0
        existing = Path(args.report).read_text()
        if existing == report:
            print("report verified: byte-identical")
            return 0
        print("report mismatch", file=sys.stderr)
        return 1
    except (HarnessError, sas_engine.StreamError, sas_engine.EngineInvariantError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
