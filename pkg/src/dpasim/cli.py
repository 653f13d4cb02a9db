"""Command-line entry point: ``dpasim validate|run|sweep|compare``.

Exit codes: 0 success, 1 invalid config or usage, 2 infeasible result under ``--strict``.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import build_scenario, load_config, load_document, parse_config
from .errors import ConfigError
from .layout import validate_spacing
from .scenario import (SweepFailure, compare_layouts, compare_to_csv, expand_grid, rows_to_csv,
                       run, sweep, sweep_to_json)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_INFEASIBLE = 2


def _write(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_validate(args) -> int:
    scenario = build_scenario(load_config(args.config))
    report = validate_spacing(scenario.layout, scenario.catalog)
    print(f"config ok: {len(scenario.layout)} modules, fabric n_bf={scenario.fabric.n_bf} "
          f"n_wigig_if={scenario.fabric.n_wigig_if} n_sub6_fe={scenario.fabric.n_sub6_fe}")
    print(f"spacing: {report.checked_pairs} pairs checked, {len(report.violations)} violations")
    for v in report.violations:
        print(f"  {v.a}-{v.b} on {v.band_id}: required > {v.required_mm:.2f} mm, "
              f"actual {v.actual_mm:.2f} mm")
    return EXIT_OK if report.ok else EXIT_CONFIG


def cmd_run(args) -> int:
    report = run(load_config(args.config), oracle=args.oracle)
    _write(report.to_json(), args.out)
    csv_path = args.csv
    if csv_path is None and args.out is not None:
        csv_path = str(Path(args.out).with_suffix(".csv"))
    if csv_path is not None:
        Path(csv_path).write_text(report.to_csv())
    if report.infeasibility:
        print(f"infeasible: {report.infeasibility}", file=sys.stderr)
        if args.strict:
            return EXIT_INFEASIBLE
    return EXIT_OK


def _grid_configs(path: str) -> tuple[list, int]:
    doc = load_document(path)
    if not isinstance(doc, dict):
        raise ConfigError("grid document must be a mapping")
    unknown = set(doc) - {"schema_version", "base", "base_path", "grid", "configs", "workers"}
    if unknown:
        raise ConfigError(f"unknown keys {sorted(unknown)}")
    if doc.get("schema_version") != 1:
        raise ConfigError("unsupported or missing schema_version", "schema_version")
    workers = int(doc.get("workers", 1))
    root = Path(path).parent
    if "configs" in doc:
        items = []
        for item in doc["configs"]:
            items.append(load_document(root / item) if isinstance(item, str) else item)
        return items, workers
    if "base_path" in doc:
        base = load_document(root / doc["base_path"])
    elif "base" in doc:
        base = doc["base"]
    else:
        raise ConfigError("grid needs base, base_path or configs")
    return expand_grid(parse_config(base), doc.get("grid") or {}), workers


def cmd_sweep(args) -> int:
    configs, workers = _grid_configs(args.grid)
    results = sweep(configs, workers=args.workers or workers, oracle=args.oracle)
    _write(sweep_to_json(results), args.out)
    if args.csv:
        rows = []
        for r in results:
            if not isinstance(r, SweepFailure):
                rows.extend(r.csv_rows())
        Path(args.csv).write_text(rows_to_csv(rows))
    failed = 0
    for i, r in enumerate(results):
        msg = r.error if isinstance(r, SweepFailure) else r.infeasibility
        if msg:
            failed += 1
            print(f"point {i}: {msg}", file=sys.stderr)
    return EXIT_INFEASIBLE if failed and args.strict else EXIT_OK


def cmd_compare(args) -> int:
    grips = [g.strip() for g in args.grips.split(",") if g.strip()]
    try:
        rows = compare_layouts(grips, load_config(args.config), oracle=args.oracle)
    except ValueError as err:
        if isinstance(err, ConfigError):
            raise
        raise ConfigError(str(err), "--grips") from None
    _write(compare_to_csv(rows), args.out)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    # usage mistakes share the invalid-input code; 2 stays reserved for --strict
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dpasim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a scenario config and its spacing rule")
    p.add_argument("config")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("run", help="run one scenario and emit the metrics report")
    p.add_argument("config")
    p.add_argument("--oracle", action="store_true", help="exact allocator when n_bf <= 6")
    p.add_argument("--out", help="JSON report path (default: stdout)")
    p.add_argument("--csv", help="CSV path (default: next to --out)")
    p.add_argument("--strict", action="store_true", help="exit 2 on infeasibility")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="run every point of a grid config")
    p.add_argument("grid")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--out")
    p.add_argument("--csv")
    p.add_argument("--strict", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("compare", help="compare preset layouts across grips")
    p.add_argument("config")
    p.add_argument("--grips", required=True, help="comma-separated grip names")
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as err:
        print(f"invalid config: {err}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
