"""Command-line interface: ``nie run``, ``nie presets`` and ``nie verify``.

Exit codes: 0 success, 1 invalid input (the message names the offending
option or key), 2 numeric failure (the message names the scan point).
"""

from __future__ import annotations

import argparse
import os
import sys

from . import checks
from .doppler import VelocityGrid
from .errors import IncompatibleRegime, ScanPointError, UnknownPreset
from .scenarios import PRESETS, REGIMES, ScanSpec, load_preset, parse_locks, parse_preset, run_scan


class UsageError(Exception):
    def __init__(self, key, message):
        self.key = key
        super().__init__(f"{key}: {message}")


def _parser():
    p = argparse.ArgumentParser(prog="nie", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute a scan and write a table")
    src = run.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", help="preset name, optionally NAME:VARIANT")
    src.add_argument("--config", help="path to a preset INI file")
    run.add_argument("--variant")
    run.add_argument("--regime", choices=REGIMES)
    run.add_argument("--scan", dest="variable", help="scan variable (y1..y4, omega1..4, S1..S4, z)")
    run.add_argument("--from", dest="start", type=float)
    run.add_argument("--to", dest="stop", type=float)
    run.add_argument("--points", type=int)
    run.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="fixed value, e.g. S1=150")
    run.add_argument("--lock", action="append", default=None, metavar="TARGET:SOURCE", help="replace preset locks")
    run.add_argument("--grid", choices=("gauss_hermite", "trapezoid"))
    run.add_argument("--nodes", type=int)
    run.add_argument("--cutoff", type=float)
    run.add_argument("--out", required=True, help="output path ('-' for stdout)")
    run.add_argument("--format", choices=("csv", "tsv"))
    run.add_argument("--workers", type=int)
    run.add_argument("--emit-plotscript", action="store_true", help="also write OUT.gp for gnuplot")

    pr = sub.add_parser("presets", help="list or describe presets")
    pr.add_argument("name", nargs="?")
    pr.add_argument("--ini", action="store_true", help="print the stored INI text")

    ver = sub.add_parser("verify", help="run the self-check suites")
    ver.add_argument("--suite", choices=("ratios", "oracle", "all"), default="all")
    ver.add_argument("--draws", type=int, default=20, help="random draws per case for the oracle suite")
    ver.add_argument("--seed", type=int, default=0)
    return p


def _workers(args):
    if args.workers is not None:
        if args.workers < 1:
            raise UsageError("--workers", "must be at least 1")
        return args.workers
    env = os.environ.get("NIE_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise UsageError("NIE_THREADS", f"not an integer: {env!r}") from None
        if n < 1:
            raise UsageError("NIE_THREADS", "must be at least 1")
        return n
    return 1


def _check_writable(path):
    if path == "-":
        return
    parent = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(parent):
        raise UsageError("--out", f"directory does not exist: {parent}")
    if os.path.exists(path) and (os.path.isdir(path) or not os.access(path, os.W_OK)):
        raise UsageError("--out", f"not writable: {path}")
    if not os.access(parent, os.W_OK):
        raise UsageError("--out", f"directory not writable: {parent}")


def _fixed(items):
    out = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError("--set", f"expected KEY=VALUE, got {item!r}")
        try:
            out[key.strip()] = float(value)
        except ValueError:
            raise UsageError(f"--set {key.strip()}", f"not a number: {value!r}") from None
    return out


def build_run(args):
    """Resolve preset, scan, grid and regime with flag > preset > built-in precedence."""
    if args.preset:
        try:
            preset = load_preset(args.preset)
        except UnknownPreset as exc:
            raise UsageError("--preset", exc.args[0]) from None
    else:
        try:
            with open(args.config, encoding="utf-8") as fh:
                preset = parse_preset(fh.read(), os.path.splitext(os.path.basename(args.config))[0])
        except OSError as exc:
            raise UsageError("--config", str(exc)) from None
        except (ValueError, KeyError) as exc:
            raise UsageError("--config", f"invalid preset file: {exc}") from None
    if args.variant:
        try:
            preset = preset.variant(args.variant)
        except UnknownPreset as exc:
            raise UsageError("--variant", exc.args[0]) from None
    overrides = {}
    for key in ("variable", "start", "stop", "points"):
        value = getattr(args, key)
        if value is not None:
            overrides[key] = value
    try:
        if args.lock is not None:
            overrides["locks"] = parse_locks(",".join(args.lock))
        overrides["fixed"] = _fixed(args.set)
        scan = ScanSpec.from_preset(preset, **overrides)
    except UsageError:
        raise
    except ValueError as exc:
        raise UsageError("--scan" if "variable" in str(exc) else "--points", str(exc)) from None
    g = preset.grid
    try:
        grid = VelocityGrid(
            args.grid or g.method,
            args.nodes if args.nodes is not None else g.nodes,
            args.cutoff if args.cutoff is not None else g.cutoff,
        )
    except ValueError as exc:
        raise UsageError("--grid", str(exc)) from None
    regime = args.regime or preset.scan.get("regime", "two_field")
    return preset, scan, grid, regime


def plot_script(table_path, table, fmt):
    sep = "," if fmt == "csv" else "\\t"
    x = table.columns[0]
    name = os.path.basename(table_path)
    lines = [
        f"# gnuplot script for {name}",
        f'set datafile separator "{sep}"',
        "set key autotitle columnhead",
        f'set xlabel "{x}"',
        f'plot "{name}" using 1:"abs2_chi4" with lines, "" using 1:"alpha4" with lines',
    ]
    return "\n".join(lines) + "\n"


def cmd_run(args):
    preset, scan, grid, regime = build_run(args)
    fmt = args.format or ("tsv" if args.out.endswith(".tsv") else "csv")
    _check_writable(args.out)
    workers = _workers(args)
    try:
        table = run_scan(preset, scan, grid, regime, workers=workers)
    except IncompatibleRegime as exc:
        raise UsageError("--regime", str(exc)) from None
    except ValueError as exc:
        raise UsageError("--lock", str(exc)) from None
    if args.out == "-":
        sys.stdout.write(table.to_text("," if fmt == "csv" else "\t"))
    else:
        table.write(args.out, fmt)
        if args.emit_plotscript:
            with open(args.out + ".gp", "w", encoding="ascii") as fh:
                fh.write(plot_script(args.out, table, fmt))
    return 0


def cmd_presets(args):
    if args.name is None:
        for name in PRESETS:
            print(f"{name:16s} {load_preset(name).description}")
        return 0
    try:
        preset = load_preset(args.name)
    except UnknownPreset as exc:
        raise UsageError("name", exc.args[0]) from None
    print(preset.to_ini() if args.ini else preset.describe())
    return 0


def cmd_verify(args):
    results = []
    if args.suite in ("ratios", "all"):
        results += checks.ratio_suite()
    if args.suite in ("oracle", "all"):
        results += checks.oracle_suite(draws=args.draws, seed=args.seed)
    for r in results:
        print(r.line())
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 0 if failed == 0 else 1


def main(argv=None):
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    handler = {"run": cmd_run, "presets": cmd_presets, "verify": cmd_verify}[args.command]
    try:
        return handler(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ScanPointError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
