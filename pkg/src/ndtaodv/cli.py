"""Command line: ``run``, ``sweep`` and ``plot`` subcommands.

Settings are resolved as command-line flags > config file > built-in defaults.
Exit status is 0 on success and 2 on configuration errors (including a
workload that cannot be placed on the legitimate nodes).
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .config import ConfigInvalid, ScenarioConfig
from .simulation import Simulation
from .sweep import SweepRow, pivot, read_csv, sweep, write_csv, write_series
from .traffic import InsufficientNodes


def _csv_list(cast):
    def parse(text: str):
        try:
            return [cast(x) for x in text.split(",") if x.strip()]
        except ValueError as e:
            raise argparse.ArgumentTypeError(str(e))
    return parse


def _seeds(text: str) -> list[int]:
    """``1..10`` (inclusive) or ``1,2,5``."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return list(range(int(lo), int(hi) + 1))
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _base_config(args) -> ScenarioConfig:
    cfg = ScenarioConfig.from_file(args.config) if args.config else ScenarioConfig()
    overrides = {k: v for k, v in {
        "protocol": getattr(args, "protocol", None),
        "nodes": getattr(args, "nodes", None),
        "malicious": getattr(args, "malicious_count", None),
        "pause_time": getattr(args, "pause_time", None),
        "seed": getattr(args, "seed", None),
        "duration": getattr(args, "duration", None),
    }.items() if v is not None}
    for item in getattr(args, "set", None) or ():
        if "=" not in item:
            raise ConfigInvalid({item: "expected key=value"})
        k, v = item.split("=", 1)
        overrides.setdefault(k.strip(), v.strip())
    return ScenarioConfig.from_mapping(overrides, cfg).validate()


def _cmd_run(args) -> int:
    cfg = _base_config(args)
    trace = open(args.trace, "w") if args.trace else None
    try:
        report = Simulation(cfg, trace=trace).run()
    finally:
        if trace:
            trace.close()
    rows = [SweepRow.from_report(report)]
    if args.out:
        write_csv(rows, args.out)
    else:
        write_csv(rows, sys.stdout)
    return 0


def _cmd_sweep(args) -> int:
    base = _base_config(args)

    def progress(row):
        if args.verbose:
            print(f"{row.protocol} m={row.malicious} pause={row.pause_time:g} seed={row.seed} "
                  f"pdf={row.pdf}", file=sys.stderr)

    rows = sweep(base, args.pause_times, args.malicious, args.protocols, args.seeds,
                 workers=args.workers, progress=progress)
    write_csv(rows, args.out if args.out else sys.stdout)
    return 0


def _cmd_plot(args) -> int:
    header, table = pivot(read_csv(args.input), args.metric)
    if args.out:
        write_series(header, table, args.out)
    else:
        print(",".join(header))
        for line in table:
            print(",".join("" if v is None else repr(v) for v in line))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ndtaodv", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="key=value scenario file")
        p.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override any config key (repeatable)")
        p.add_argument("--nodes", type=int)
        p.add_argument("--duration", type=float)

    run = sub.add_parser("run", help="run one scenario")
    common(run)
    run.add_argument("--protocol", choices=("aodv", "ndtaodv"))
    run.add_argument("--malicious", dest="malicious_count", type=int)
    run.add_argument("--pause-time", type=float)
    run.add_argument("--seed", type=int)
    run.add_argument("--out", help="CSV file (default stdout)")
    run.add_argument("--trace", help="write a tab-separated event trace")
    run.set_defaults(func=_cmd_run)

    sw = sub.add_parser("sweep", help="pause time x attackers x protocol x seed sweep")
    common(sw)
    sw.add_argument("--pause-times", type=_csv_list(float), default=[0, 5, 10, 15, 20])
    sw.add_argument("--malicious", type=_csv_list(int), default=[0, 1, 3])
    sw.add_argument("--protocols", type=_csv_list(str), default=["aodv", "ndtaodv"])
    sw.add_argument("--seeds", type=_seeds, default=list(range(1, 11)))
    sw.add_argument("--workers", type=int, default=1)
    sw.add_argument("--out", help="CSV file (default stdout)")
    sw.add_argument("-v", "--verbose", action="store_true")
    sw.set_defaults(func=_cmd_sweep)

    pl = sub.add_parser("plot", help="pivot sweep results into per-metric series")
    pl.add_argument("--in", dest="input", required=True)
    pl.add_argument("--metric", choices=("pdf", "at", "nrl"), required=True)
    pl.add_argument("--out")
    pl.set_defaults(func=_cmd_plot)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigInvalid, InsufficientNodes) as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
