"""Command-line driver: ``run``, ``verify`` and ``errorgrid``.

Data files are deterministic for a given configuration.  When ``--out`` is
given, a ``<out>.meta.json`` sidecar records provenance (version, argv, time).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import __version__
from .engine import PAPER_PROBLEM, IterationTrace, PathMode, run
from .exactcore import format_rational, parse_rational, poly_eval_float, to_decimal_string
from .multiplier import MultiplierSpec
from .reference import bound_check, check_lemmas, choose_exact_degree, exact_series


@dataclass
class RunConfig:
    multiplier: str = "ps2"
    iterations: int = 2
    truncation_degree: int | None = None
    R: Fraction = Fraction(2)
    grid_points: int = 201
    exact_degree: int | None = None
    output_format: str = "csv"
    output_path: Path | None = None
    path: str = PathMode.ORACLE.value
    two_sided: bool = False
    compare: list[str] = field(default_factory=list)

    def validate(self) -> None:
        if self.iterations < 0:
            raise ValueError("--iterations must be >= 0")
        if self.truncation_degree is not None and self.truncation_degree < 1:
            raise ValueError("--max-degree must be a positive integer")
        if self.grid_points < 2:
            raise ValueError("--points must be >= 2")
        if self.R <= 0:
            raise ValueError("--R must be > 0")
        if self.output_format not in ("csv", "json"):
            raise ValueError("--format must be csv or json")
        for text in [self.multiplier, *self.compare]:
            MultiplierSpec.parse(text)

    def to_dict(self) -> dict:
        return {
            "multiplier": self.multiplier,
            "iterations": self.iterations,
            "max_degree": self.truncation_degree,
            "R": format_rational(self.R),
            "points": self.grid_points,
            "exact_degree": self.exact_degree,
            "format": self.output_format,
            "path": self.path,
            "two_sided": self.two_sided,
            "compare": list(self.compare),
        }


@dataclass
class ErrorGrid:
    r_values: list[float]
    labels: list[tuple[str, int]]
    rows: list[list[float]]  # one per label, aligned with r_values
    exact_degree: int

    @property
    def sup_error(self) -> list[float]:
        return [max(row) for row in self.rows]

    def sup(self, multiplier: str, n: int) -> float:
        return self.sup_error[self.labels.index((multiplier, n))]


# --------------------------------------------------------------------------
# Computation
# --------------------------------------------------------------------------


def _trace(config: RunConfig, multiplier: str | None = None) -> IterationTrace:
    spec = MultiplierSpec.parse(multiplier or config.multiplier)
    return run(PAPER_PROBLEM, spec, config.iterations, config.truncation_degree, config.path)


def grid_points(R: Fraction, points: int, two_sided: bool = False) -> list[Fraction]:
    lo = -R if two_sided else Fraction(0)
    return [lo + (R - lo) * i / (points - 1) for i in range(points)]


def error_grid(
    traces: dict[str, IterationTrace],
    R: Fraction,
    points: int,
    two_sided: bool = False,
    exact_degree: int | None = None,
) -> ErrorGrid:
    """|w_n(r) - w_exact(r)| in double precision on exact coefficients."""
    if exact_degree is None:
        exact_degree = choose_exact_degree(R)
    exact = exact_series(max(exact_degree, 2)).as_poly()
    rs = [float(r) for r in grid_points(Fraction(R), points, two_sided)]
    ref = [poly_eval_float(exact, r) for r in rs]
    labels, rows = [], []
    for name, trace in traces.items():
        for n, w in enumerate(trace.profiles):
            labels.append((name, n))
            rows.append([abs(poly_eval_float(w, r) - e) for r, e in zip(rs, ref)])
    return ErrorGrid(rs, labels, rows, exact_degree)


def _fmt_float(x: float) -> str:
    return format(x, ".17g")


# --------------------------------------------------------------------------
# Rendering
# --------------------------------------------------------------------------


def table_to_csv(trace: IterationTrace) -> str:
    table = trace.coefficient_table
    width = trace.width
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", *(f"a{k}" for k in range(width))])
    for n, row in enumerate(table):
        writer.writerow([n, *(format_rational(c) for c in row)])
    buf.write("\n")
    writer.writerow(["n", *(f"a{k}_decimal" for k in range(width))])
    for n, row in enumerate(table):
        writer.writerow([n, *(to_decimal_string(c) for c in row)])
    return buf.getvalue()


def table_to_json(trace: IterationTrace, config: RunConfig) -> str:
    table = trace.coefficient_table
    payload = {
        "config": config.to_dict(),
        "table": [[format_rational(c) for c in row] for row in table],
        "table_decimal": [[to_decimal_string(c) for c in row] for row in table],
        "reports": {"discrepancies": _discrepancies(trace)},
    }
    return json.dumps(payload, indent=2) + "\n"


def load_table_json(text: str) -> list[list[Fraction]]:
    return [[parse_rational(c) for c in row] for row in json.loads(text)["table"]]


def load_table_csv(text: str) -> list[list[Fraction]]:
    exact_block = text.split("\n\n", 1)[0]
    rows = list(csv.reader(io.StringIO(exact_block)))
    return [[parse_rational(c) for c in row[1:]] for row in rows[1:]]


def _discrepancies(trace: IterationTrace) -> list[dict]:
    return [
        {
            "iteration": d.iteration,
            "column": d.column,
            "oracle": format_rational(d.oracle),
            "recurrence": format_rational(d.recurrence),
        }
        for d in trace.discrepancies
    ]


def _column_name(grid: ErrorGrid, label: tuple[str, int]) -> str:
    single = len({name for name, _ in grid.labels}) == 1
    name, n = label
    return f"iter{n}" if single else f"{name}:iter{n}"


def grid_to_csv(grid: ErrorGrid) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["r", *(_column_name(grid, lab) for lab in grid.labels)])
    for i, r in enumerate(grid.r_values):
        writer.writerow([_fmt_float(r), *(_fmt_float(row[i]) for row in grid.rows)])
    buf.write("\n")
    writer.writerow(["multiplier", "iteration", "sup_error"])
    for (name, n), sup in zip(grid.labels, grid.sup_error):
        writer.writerow([name, n, _fmt_float(sup)])
    return buf.getvalue()


def grid_to_json(grid: ErrorGrid, config: RunConfig) -> str:
    payload = {
        "config": config.to_dict(),
        "exact_degree": grid.exact_degree,
        "r": grid.r_values,
        "errors": {_column_name(grid, lab): row for lab, row in zip(grid.labels, grid.rows)},
        "sup_error": [
            {"multiplier": name, "iteration": n, "sup_error": sup}
            for (name, n), sup in zip(grid.labels, grid.sup_error)
        ],
    }
    return json.dumps(payload, indent=2) + "\n"


def _emit(text: str, config: RunConfig, argv: Sequence[str] | None) -> None:
    if config.output_path is None:
        sys.stdout.write(text)
        return
    out = Path(config.output_path)
    out.write_text(text, encoding="utf-8", newline="\n")
    meta = {
        "version": __version__,
        "argv": list(argv) if argv is not None else sys.argv[1:],
        "created": datetime.now(timezone.utc).isoformat(),
        "config": config.to_dict(),
    }
    Path(f"{out}.meta.json").write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")


# --------------------------------------------------------------------------
# Commands
# --------------------------------------------------------------------------


def cmd_run(config: RunConfig, argv: Sequence[str] | None = None) -> int:
    trace = _trace(config)
    if config.output_format == "json":
        text = table_to_json(trace, config)
    else:
        text = table_to_csv(trace)
    _emit(text, config, argv)
    if trace.discrepancies:
        print(f"{len(trace.discrepancies)} oracle/recurrence discrepancies", file=sys.stderr)
        return 1
    return 0


def cmd_verify(config: RunConfig, argv: Sequence[str] | None = None) -> int:
    spec = MultiplierSpec.parse(config.multiplier)
    if not spec.is_paper_case2:
        print(
            f"verify: the lemma checks are stated for the ps2 multiplier, got {spec.label()}",
            file=sys.stderr,
        )
        return 2
    trace = _trace(config)
    lemmas = check_lemmas(trace)
    bounds = bound_check(trace)
    payload = {
        "config": config.to_dict(),
        "reports": {
            "lemmas": lemmas.to_dict(),
            "bounds": bounds.to_dict(),
            "discrepancies": _discrepancies(trace),
        },
    }
    _emit(json.dumps(payload, indent=2) + "\n", config, argv)
    ok = lemmas.all_pass and not trace.discrepancies
    verdicts = lemmas.to_dict()
    for key in ("L1_prefix_growth", "L2_support_growth", "L3_bounded"):
        print(f"{key}: {'PASS' if verdicts[key] else 'FAIL'}", file=sys.stderr)
    print(f"pair-product bound: {'PASS' if bounds.all_pass else 'FAIL'}", file=sys.stderr)
    return 0 if ok else 1


def cmd_errorgrid(config: RunConfig, argv: Sequence[str] | None = None) -> int:
    names = config.compare or [config.multiplier]
    traces = {name: _trace(config, name) for name in names}
    grid = error_grid(traces, config.R, config.grid_points, config.two_sided, config.exact_degree)
    if config.output_format == "json":
        text = grid_to_json(grid, config)
    else:
        text = grid_to_csv(grid)
    _emit(text, config, argv)
    return 0


COMMANDS = {"run": cmd_run, "verify": cmd_verify, "errorgrid": cmd_errorgrid}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vimairy",
        description="Exact variational iteration for w'' + (r + 1) w = 0, w(0)=1, w'(0)=0.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("run", "write the coefficient table a_k^n"),
        ("verify", "check the lemma suite and coefficient bound on a ps2 trace"),
        ("errorgrid", "tabulate |w_n(r) - w_exact(r)| on a uniform grid"),
    ]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--multiplier", default="ps2", help="ps1, ps2 or series:K")
        p.add_argument("--iterations", type=int, default=2)
        p.add_argument("--max-degree", type=int, default=None, dest="max_degree")
        p.add_argument("--format", choices=["csv", "json"], default="csv")
        p.add_argument("--out", type=Path, default=None)
        p.add_argument("--path", choices=[m.value for m in PathMode], default="oracle")
        if name == "errorgrid":
            p.add_argument("--R", default="2", help="grid half-width, parsed exactly")
            p.add_argument("--points", type=int, default=201)
            p.add_argument("--exact-degree", type=int, default=None, dest="exact_degree")
            p.add_argument("--two-sided", action="store_true")
            p.add_argument("--compare", nargs="+", default=[], metavar="MULTIPLIER")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        multiplier=args.multiplier,
        iterations=args.iterations,
        truncation_degree=args.max_degree,
        R=parse_rational(getattr(args, "R", "2")),
        grid_points=getattr(args, "points", 201),
        exact_degree=getattr(args, "exact_degree", None),
        output_format=args.format,
        output_path=args.out,
        path=args.path,
        two_sided=getattr(args, "two_sided", False),
        compare=getattr(args, "compare", []),
    )


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
        config.validate()
        return COMMANDS[args.command](config, argv)
    except (ValueError, OSError) as exc:
        print(f"vimairy {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
