"""Parameter sweeps, CSV results, and per-metric series for plotting."""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass, fields
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence, Union

from .config import ScenarioConfig
from .metrics import MetricsReport
from .simulation import run_scenario

CSV_HEADER = ("protocol", "pause_time", "malicious", "seed", "data_sent", "data_delivered",
              "pdf", "at_kbps", "routing_tx", "nrl", "first_detection_time",
              "broody_final_size")

METRIC_COLUMNS = {"pdf": "pdf", "at": "at_kbps", "nrl": "nrl"}


@dataclass(frozen=True)
class SweepRow:
    protocol: str
    pause_time: float
    malicious: int
    seed: Union[int, str]  # "mean" on aggregate rows
    data_sent: float
    data_delivered: float
    pdf: Optional[float]
    at_kbps: float
    routing_tx: float
    nrl: float
    first_detection_time: Optional[float]
    broody_final_size: float

    @classmethod
    def from_report(cls, r: MetricsReport) -> "SweepRow":
        return cls(r.protocol, r.pause_time, r.malicious, r.seed, r.data_sent,
                   r.data_delivered, r.pdf, r.avg_throughput, r.routing_tx, r.nrl,
                   r.first_detection_time, r.broody_final_size)

    @property
    def is_mean(self) -> bool:
        return self.seed == "mean"

    def csv_fields(self) -> list[str]:
        return [_fmt(v) for v in astuple(self)]


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        if math.isinf(v):
            return "inf"
        return repr(v)
    return str(v)


def _mean(values: Iterable[Optional[float]]) -> Optional[float]:
    vals = [v for v in values if v is not None]
    if not vals:
        return None
    return math.fsum(vals) / len(vals) if not any(math.isinf(v) for v in vals) else math.inf


def mean_row(rows: Sequence[SweepRow]) -> SweepRow:
    first = rows[0]
    return SweepRow(
        first.protocol, first.pause_time, first.malicious, "mean",
        _mean(r.data_sent for r in rows), _mean(r.data_delivered for r in rows),
        _mean(r.pdf for r in rows), _mean(r.at_kbps for r in rows),
        _mean(r.routing_tx for r in rows), _mean(r.nrl for r in rows),
        _mean(r.first_detection_time for r in rows),
        _mean(r.broody_final_size for r in rows),
    )


def sweep_configs(base: ScenarioConfig, pause_times, malicious_counts, protocols, seeds):
    """Cells in output order: malicious, then pause time, then protocol, then seed."""
    if not (pause_times and malicious_counts and protocols and seeds):
        raise ValueError("every sweep axis needs at least one value")
    cells = []
    for m in malicious_counts:
        for p in pause_times:
            for proto in protocols:
                cfgs = [base.replace(protocol=proto, pause_time=float(p), malicious=int(m),
                                     seed=int(s), malicious_ids=None).validate()
                        for s in seeds]
                cells.append(cfgs)
    return cells


def _run(cfg: ScenarioConfig) -> SweepRow:
    return SweepRow.from_report(run_scenario(cfg))


def sweep(base: ScenarioConfig, pause_times: Sequence[float], malicious_counts: Sequence[int],
          protocols: Sequence[str], seeds: Sequence[int], workers: int = 1,
          progress: Optional[Callable[[SweepRow], None]] = None) -> list[SweepRow]:
    """Run every combination; per-seed rows followed by a mean row per cell."""
    cells = sweep_configs(base, pause_times, malicious_counts, protocols, seeds)
    flat = [cfg for cell in cells for cfg in cell]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_run, flat))
        if progress:
            for r in results:
                progress(r)
    else:
        results = []
        for cfg in flat:
            results.append(_run(cfg))
            if progress:
                progress(results[-1])
    out, i = [], 0
    for cell in cells:
        chunk = results[i:i + len(cell)]
        i += len(cell)
        out.extend(chunk)
        out.append(mean_row(chunk))
    return out


# -- CSV -------------------------------------------------------------------------

def write_csv(rows: Iterable[SweepRow], dest: Union[str, Path, io.TextIOBase]) -> None:
    def _write(fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in rows:
            w.writerow(r.csv_fields())
    if isinstance(dest, (str, Path)):
        with open(dest, "w", newline="") as fh:
            _write(fh)
    else:
        _write(dest)


def _parse(name: str, raw: str):
    if raw == "":
        return None
    if name == "protocol":
        return raw
    if name == "seed":
        return raw if raw == "mean" else int(raw)
    if name == "malicious":
        return int(raw)
    return float(raw)


def read_csv(src: Union[str, Path]) -> list[SweepRow]:
    with open(src, newline="") as fh:
        reader = csv.DictReader(fh)
        missing = set(CSV_HEADER) - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"results file lacks columns: {sorted(missing)}")
        return [SweepRow(**{f.name: _parse(f.name, rec[f.name]) for f in fields(SweepRow)})
                for rec in reader]


def pivot(rows: Sequence[SweepRow], metric: str) -> tuple[list[str], list[list]]:
    """Per-metric series: one row per pause time, one column per protocol/attacker count.

    Uses the mean rows when present, else averages the per-seed rows.
    """
    if metric not in METRIC_COLUMNS:
        raise ValueError(f"metric must be one of {sorted(METRIC_COLUMNS)}")
    col = METRIC_COLUMNS[metric]
    groups: dict[tuple, list[SweepRow]] = {}
    means: dict[tuple, SweepRow] = {}
    for r in rows:
        key = (r.protocol, r.malicious, r.pause_time)
        if r.is_mean:
            means[key] = r
        else:
            groups.setdefault(key, []).append(r)
    for key, grp in groups.items():
        means.setdefault(key, mean_row(grp))
    series = sorted({(k[1], k[0]) for k in means})
    pauses = sorted({k[2] for k in means})
    header = ["pause_time"] + [f"{proto}_m{m}" for m, proto in series]
    table = []
    for p in pauses:
        line = [p]
        for m, proto in series:
            r = means.get((proto, m, p))
            line.append(None if r is None else getattr(r, col))
        table.append(line)
    return header, table


def write_series(header, table, dest: Union[str, Path]) -> None:
    with open(dest, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for line in table:
            w.writerow([_fmt(v) for v in line])
