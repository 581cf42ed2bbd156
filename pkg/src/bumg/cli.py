"""Command-line driver: solve, transform, bench, check-model."""

from __future__ import annotations

import argparse
import concurrent.futures
import sys
from pathlib import Path
from typing import Optional

from . import engine, oracle, tptp, transform

CSV_HEADER = "problem,pipeline,status,ms,rules,splits,domain"


def _pipeline_config(args) -> transform.PipelineConfig:
    return transform.PipelineConfig(
        rr_variant=args.rr,
        shift=args.shift,
        blocking=args.block,
        step1_constant_policy=("reuse_first" if args.const == "reuse"
                               else "always_fresh"),
    )


def _strategy(args) -> engine.Strategy:
    return engine.Strategy(max_rules=args.max_steps, max_depth=args.max_depth,
                           timeout=args.timeout)


def _add_pipeline_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--rr", choices=("new", "classical", "none"), default="new")
    p.add_argument("--shift", action="store_true")
    p.add_argument("--block", choices=("none", "sd", "sp", "ud", "up"),
                   default="none")
    p.add_argument("--const", choices=("reuse", "fresh"), default="reuse")


def _add_limit_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-steps", type=int, default=100_000)
    p.add_argument("--max-depth", type=int, default=10_000)
    p.add_argument("--timeout", type=float, default=60.0)


def cmd_solve(args) -> int:
    try:
        problem = tptp.parse_file(args.file)
        cfg = _pipeline_config(args)
        transformed, _ = transform.apply_pipeline(problem, cfg)
    except (tptp.ParseError, transform.ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    trace_file = None
    trace_fn = None
    if args.trace:
        trace_file = open(args.trace, "w")
        trace_fn = lambda line: print(line, file=trace_file)  # noqa: E731
    try:
        result = engine.saturate(transformed, _strategy(args), trace_fn)
    except engine.NotRangeRestrictedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    finally:
        if trace_file:
            trace_file.close()

    print(tptp.print_szs(result.status, problem.name))
    if result.status == "Satisfiable" and args.model_out:
        Path(args.model_out).write_text(tptp.print_model(result.model))
    if result.status in ("Satisfiable", "Unsatisfiable"):
        return 0
    return 2


def cmd_transform(args) -> int:
    try:
        problem = tptp.parse_file(args.file)
        cfg = _pipeline_config(args)
        transformed, report = transform.apply_pipeline(problem, cfg)
    except (tptp.ParseError, transform.ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    text = tptp.print_clauses(transformed)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.report:
        path = Path(args.report)
        row = report.csv_row()
        if path.exists() and path.read_text().strip():
            with path.open("a") as fh:
                fh.write(row + "\n")
        else:
            path.write_text(report.CSV_HEADER + "\n" + row + "\n")
    return 0


def _bench_cell(problem_path: str, label: str, max_steps: int, max_depth: int,
                timeout: float, model_dir: Optional[str]) -> dict:
    name = Path(problem_path).stem
    row = {"problem": name, "pipeline": label, "status": "Error",
           "ms": 0, "rules": 0, "splits": 0, "domain": ""}
    try:
        problem = tptp.parse_file(problem_path)
        cfg = transform.config_from_label(label)
        transformed, _ = transform.apply_pipeline(problem, cfg)
        strategy = engine.Strategy(max_rules=max_steps, max_depth=max_depth,
                                   timeout=timeout)
        result = engine.saturate(transformed, strategy)
    except Exception as exc:  # keep the bench running; report the cell
        row["error"] = str(exc)
        return row
    row["status"] = result.status
    row["ms"] = int(result.stats.ms)
    row["rules"] = result.stats.rules
    row["splits"] = result.stats.splits
    if result.status == "Satisfiable":
        row["domain"] = len(result.model.domain)
        if model_dir:
            out = Path(model_dir) / f"{name}__{label}.model"
            out.write_text(tptp.print_model(result.model))
    return row


def cmd_bench(args) -> int:
    directory = Path(args.dir)
    problems = sorted(directory.glob("*.p"))
    if not problems:
        print(f"error: no .p files in {directory}", file=sys.stderr)
        return 1
    labels = [s.strip() for s in args.configs.split(",") if s.strip()]
    for label in labels:
        transform.config_from_label(label)  # validate early
    if args.model_dir:
        Path(args.model_dir).mkdir(parents=True, exist_ok=True)

    cells = [(str(p), label) for p in problems for label in labels]
    rows: list[dict]
    if args.workers > 1:
        with concurrent.futures.ProcessPoolExecutor(args.workers) as pool:
            rows = list(pool.map(
                _bench_cell_star,
                [(p, label, args.max_steps, args.max_depth, args.timeout,
                  args.model_dir) for p, label in cells]))
    else:
        rows = [_bench_cell(p, label, args.max_steps, args.max_depth,
                            args.timeout, args.model_dir)
                for p, label in cells]

    lines = [CSV_HEADER]
    for row in rows:
        lines.append(f"{row['problem']},{row['pipeline']},{row['status']},"
                     f"{row['ms']},{row['rules']},{row['splits']},"
                     f"{row['domain']}")
    solved: dict[str, int] = {label: 0 for label in labels}
    for row in rows:
        if row["status"] in ("Satisfiable", "Unsatisfiable"):
            solved[row["pipeline"]] += 1
    for label in labels:
        lines.append(f"# solved {label} {solved[label]}/{len(problems)}")
    text = "\n".join(lines) + "\n"
    if args.csv:
        Path(args.csv).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _bench_cell_star(packed) -> dict:
    return _bench_cell(*packed)


def cmd_check_model(args) -> int:
    try:
        model = tptp.parse_model(Path(args.model).read_text())
        problem = tptp.parse_file(args.problem)
    except (tptp.ParseError, tptp.ModelParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    ok, cex = engine.check_model(model, problem.clauses)
    if ok:
        print(f"model satisfies {problem.name}")
        return 0
    print(f"model falsifies {problem.name}: {cex}", file=sys.stderr)
    return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bumg",
        description="Bottom-up model generation for first-order clause "
                    "logic with equality")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="decide a TPTP-CNF problem")
    p.add_argument("file")
    _add_pipeline_flags(p)
    _add_limit_flags(p)
    p.add_argument("--model-out", default=None)
    p.add_argument("--trace", default=None)
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("transform", help="apply a transformation pipeline")
    p.add_argument("file")
    _add_pipeline_flags(p)
    p.add_argument("-o", "--out", default=None)
    p.add_argument("--report", default=None)
    p.set_defaults(fn=cmd_transform)

    p = sub.add_parser("bench", help="run a corpus against pipelines")
    p.add_argument("dir")
    p.add_argument("--configs", required=True,
                   help="comma-separated pipeline labels, e.g. rr.blud,crr")
    p.add_argument("--csv", default=None)
    p.add_argument("--model-dir", default=None)
    p.add_argument("--workers", type=int, default=1)
    _add_limit_flags(p)
    p.set_defaults(fn=cmd_bench)

    p = sub.add_parser("check-model", help="validate a model file")
    p.add_argument("model")
    p.add_argument("problem")
    p.set_defaults(fn=cmd_check_model)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
