"""Deterministic CSV/JSON emission and parsing for traces and reports.

Floats are written with 17 significant digits (CSV) or shortest-round-trip
repr (JSON), so re-running a command with the same configuration reproduces
the output files byte for byte.
"""

import csv
import json

import numpy as np

TRACE_COLUMNS = ["k", "t", "err_to_truth", "err_rel", "residual",
                 "step_diff", "descriptor_size", "consistent", "dual_objective"]


def _fmt(x):
    return format(float(x), ".17g")


def trace_rows(trace, problem, reg, tol=None):
    """Per-record CSV rows: errors, descriptor size, truth-match flag."""
    truth = reg.descriptor(problem.w_true)
    w_norm = float(np.linalg.norm(problem.w_true))
    rows = []
    for r in trace.records:
        d = reg.descriptor(r.w, tol)
        rows.append({
            "k": r.k,
            "t": r.t,
            "err_to_truth": r.err_to_truth,
            "err_rel": r.err_to_truth / w_norm if w_norm > 0 else np.nan,
            "residual": r.residual,
            "step_diff": r.step_diff,
            "descriptor_size": d.size,
            "consistent": int(d == truth),
            "dual_objective": r.dual_objective,
        })
    return rows


def write_trace_csv(path, trace, problem, reg, tol=None):
    rows = trace_rows(trace, problem, reg, tol)
    with open(path, "w", newline="") as fh:
        fh.write(",".join(TRACE_COLUMNS) + "\n")
        for row in rows:
            cells = [str(row["k"]), _fmt(row["t"]), _fmt(row["err_to_truth"]),
                     _fmt(row["err_rel"]), _fmt(row["residual"]), _fmt(row["step_diff"]),
                     str(row["descriptor_size"]), str(row["consistent"]),
                     _fmt(row["dual_objective"])]
            fh.write(",".join(cells) + "\n")
    return path


def read_trace_csv(path):
    """Parse a trace CSV into a dict of numpy arrays keyed by column name."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        missing = set(TRACE_COLUMNS) - set(reader.fieldnames or [])
        if missing:
            raise ValueError(f"trace CSV missing columns: {sorted(missing)}")
        rows = list(reader)
    out = {}
    for col in TRACE_COLUMNS:
        vals = [row[col] for row in rows]
        if col in ("k", "descriptor_size", "consistent"):
            out[col] = np.array([int(v) for v in vals])
        else:
            out[col] = np.array([float(v) for v in vals])
    return out


SWEEP_COLUMNS = ["snr_db", "delta", "k_best", "descriptor_size", "consistent"]


def write_sweep_csv(path, rows):
    with open(path, "w", newline="") as fh:
        fh.write(",".join(SWEEP_COLUMNS) + "\n")
        for row in rows:
            fh.write(",".join([_fmt(row["snr_db"]), _fmt(row["delta"]),
                               str(row["k_best"]), str(row["descriptor_size"]),
                               str(int(row["consistent"]))]) + "\n")
    return path


def read_sweep_csv(path):
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        rows = list(reader)
    return {
        "snr_db": np.array([float(r["snr_db"]) for r in rows]),
        "delta": np.array([float(r["delta"]) for r in rows]),
        "k_best": np.array([int(r["k_best"]) for r in rows]),
        "descriptor_size": np.array([int(r["descriptor_size"]) for r in rows]),
        "consistent": np.array([bool(int(r["consistent"])) for r in rows]),
    }


def _plain(obj):
    """Recursively convert numpy containers/scalars to JSON-ready values."""
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, float) and not np.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return obj


def write_json(path, data):
    with open(path, "w", newline="") as fh:
        json.dump(_plain(data), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def consistency_to_dict(rep):
    return {
        "k_best": rep.k_best,
        "d_best": rep.d_best,
        "interval": list(rep.interval) if rep.interval is not None else None,
        "consistent_at_best": rep.consistent_at_best,
    }


def local_rate_to_dict(rep):
    return {
        "p_t": rep.P_T,
        "m": rep.M,
        "rho": rep.rho,
        "sigma_min_t": rep.sigma_min_T,
        "inj_ok": rep.inj_ok,
        "fitted_slope": rep.fitted_slope,
        "window": list(rep.window) if rep.window is not None else None,
    }
