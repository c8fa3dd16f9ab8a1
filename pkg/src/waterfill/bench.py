"""Synthetic-corpus benchmark: PSNR before/after correction and stage timings."""

import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, replace

import numpy as np

from ._kernels import warmup
from .errors import WaterfillError
from .metrics import psnr
from .pipeline import correct_document
from .synthetic import brightness_matched_reference, generate_synthetic

CSV_COLUMNS = ("spec_id", "psnr_in_db", "psnr_out_db", "coarse_iters", "fine_iters", "elapsed_ms", "ks")
SWEEP_COLUMNS = (
    "ks",
    "n_specs",
    "n_failed",
    "psnr_in_db",
    "psnr_out_db",
    "coarse_iters",
    "fine_iters",
    "elapsed_ms",
)


@dataclass
class BenchRow:
    spec_id: str
    ks: int
    psnr_in_db: float = math.nan
    psnr_out_db: float = math.nan
    coarse_iters: int = 0
    fine_iters: int = 0
    elapsed_ms: float = 0.0
    coarse_converged: bool = False
    fine_converged: bool = False
    error: str = None

    @property
    def ok(self):
        return self.error is None

    @property
    def gain_db(self):
        return self.psnr_out_db - self.psnr_in_db


@dataclass
class BenchReport:
    rows: list
    ks: int

    @property
    def ok_rows(self):
        return [r for r in self.rows if r.ok]

    @property
    def n_failed(self):
        return sum(not r.ok for r in self.rows)

    def summary(self):
        ok = self.ok_rows
        def mean(attr):
            return float(np.mean([getattr(r, attr) for r in ok])) if ok else math.nan
        return {
            "ks": self.ks,
            "n_specs": len(self.rows),
            "n_failed": self.n_failed,
            "psnr_in_db": mean("psnr_in_db"),
            "psnr_out_db": mean("psnr_out_db"),
            "coarse_iters": mean("coarse_iters"),
            "fine_iters": mean("fine_iters"),
            "elapsed_ms": mean("elapsed_ms"),
        }


def _spec_id(spec, index):
    return spec.spec_id or f"spec-{index:03d}"


def run_one(spec, config, index=0):
    row = BenchRow(_spec_id(spec, index), config.ks)
    try:
        gt, distorted = generate_synthetic(spec)
        ref = brightness_matched_reference(gt, spec.background_level, config.brightness)
        result = correct_document(distorted, config)
    except WaterfillError as exc:
        row.error = f"{type(exc).__name__}: {exc}"
        return row
    m = result.metrics
    row.psnr_in_db = psnr(distorted, ref).psnr_db
    row.psnr_out_db = psnr(result.corrected, ref).psnr_db
    row.coarse_iters = m.coarse_iterations
    row.fine_iters = m.fine_iterations
    row.elapsed_ms = m.total_ms
    row.coarse_converged = m.coarse_converged
    row.fine_converged = m.fine_converged
    return row


def run_benchmark(specs, config, workers=1):
    """Correct every synthetic spec and collect one row per spec.

    A failing row records its error and the batch carries on. Rows keep the
    order of ``specs`` regardless of ``workers``.
    """
    specs = list(specs)
    if not specs:
        raise ValueError("benchmark needs at least one spec")
    warmup()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda a: run_one(a[1], config, a[0]), enumerate(specs)))
    else:
        rows = [run_one(s, config, i) for i, s in enumerate(specs)]
    return BenchReport(rows, config.ks)


def sweep_sampling_rate(specs, config, ks_values, workers=1):
    return [run_benchmark(specs, replace(config, ks=ks), workers) for ks in ks_values]


def _json_value(v):
    if isinstance(v, float):
        if math.isinf(v):
            return "inf"
        if math.isnan(v):
            return None
        return round(v, 6)
    return v


def _csv_value(v):
    if isinstance(v, float):
        if math.isinf(v):
            return "inf"
        if math.isnan(v):
            return ""
        return f"{v:.4f}"
    return v


def write_jsonl(rows, path):
    with open(path, "w") as fh:
        for r in rows:
            fh.write(json.dumps({k: _json_value(v) for k, v in asdict(r).items()}) + "\n")


def write_csv(rows, path):
    """Per-spec rows followed by a ``mean`` row over the successful ones."""
    rows = list(rows)
    ok = [r for r in rows if r.ok]
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(CSV_COLUMNS)
        for r in rows:
            out.writerow([_csv_value(getattr(r, c)) for c in CSV_COLUMNS])
        if ok:
            mean = ["mean"] + [
                _csv_value(float(np.mean([getattr(r, c) for r in ok])))
                for c in CSV_COLUMNS[1:-1]
            ]
            ks_set = {r.ks for r in ok}
            mean.append(ks_set.pop() if len(ks_set) == 1 else "")
            out.writerow(mean)


def write_sweep_csv(reports, path):
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(SWEEP_COLUMNS)
        for rep in reports:
            s = rep.summary()
            out.writerow([_csv_value(s[c]) for c in SWEEP_COLUMNS])
