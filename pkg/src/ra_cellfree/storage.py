"""CSV output of trial records, convergence traces, and CDF grids."""

from __future__ import annotations

import csv
from pathlib import Path

RECORD_COLUMNS = ("trial_id", "scheme", "L", "K", "user_index", "rate_bpshz",
                  "sum_rate_bpshz", "iterations_used")
TRACE_COLUMNS = ("trial_id", "iteration", "sum_rate_bpshz")
CDF_COLUMNS = ("scheme", "rate_bpshz", "cdf")


def _fmt(x: float) -> str:
    return repr(float(x))


def write_csv(records, path):
    """One row per (trial, scheme, user), in the order given."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RECORD_COLUMNS)
        for r in records:
            for u, rate in enumerate(r.per_user_rate):
                w.writerow([r.trial_id, r.scheme, r.L, r.K, u, _fmt(rate),
                            _fmt(r.sum_rate), r.iterations_used])


def read_csv(path):
    """Rows of a record CSV with numeric columns converted."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    for row in rows:
        for key in ("trial_id", "L", "K", "user_index", "iterations_used"):
            row[key] = int(row[key])
        for key in ("rate_bpshz", "sum_rate_bpshz"):
            row[key] = float(row[key])
    return rows


def trace_path(out_path, L, K) -> Path:
    out = Path(out_path)
    return out.with_name(f"{out.stem}_trace_L{L}_K{K}.csv")


def write_traces(records, out_path):
    """Write one trace file per (L, K) point for the optimized scheme.

    Returns the paths written.
    """
    by_point = {}
    for r in records:
        if r.scheme == "optimized":
            by_point.setdefault((r.L, r.K), []).append(r)
    paths = []
    for (L, K), recs in sorted(by_point.items()):
        path = trace_path(out_path, L, K)
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(TRACE_COLUMNS)
            for r in sorted(recs, key=lambda r: r.trial_id):
                for i, value in enumerate(r.convergence_trace):
                    w.writerow([r.trial_id, i, _fmt(value)])
        paths.append(path)
    return paths


def write_cdf(curves, path):
    """``curves`` maps scheme -> list of (value, fraction)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CDF_COLUMNS)
        for scheme in sorted(curves):
            for value, frac in curves[scheme]:
                w.writerow([scheme, _fmt(value), _fmt(frac)])
