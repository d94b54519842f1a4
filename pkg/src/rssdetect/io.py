"""CSV and SVG writers.

CSV files start with a ``# rssdetect <table> v<N>`` line; values are written with
``repr`` so they round-trip exactly and reruns are byte-identical.
"""
from __future__ import annotations

import csv
import math
from pathlib import Path

SCHEMAS = {
    "roc": (1, ["p_fa", "p_d_analytic", "p_d_empirical", "gamma_thr", "lambda", "env_label",
                "gamma_i", "altitude_m", "r0_m", "mode"]),
    "pdavg_vs_lambda": (1, ["lambda", "alpha_fa", "env_label", "gamma_thr", "p_d_avg", "gamma_g"]),
    "optimize_trace": (1, ["env_label", "alpha_fa", "lambda", "gamma_thr", "p_d_avg"]),
    "validation": (1, ["gamma_thr", "p_fa_analytic", "p_fa_empirical", "p_d_analytic",
                       "p_d_empirical", "delta_fa", "delta_d", "ok"]),
    "xi_table": (1, ["b_i", "xi", "xi_closed_form", "published_value", "published_agrees"]),
}


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return "" if math.isnan(v) else repr(v)
    return str(v)


def write_csv(path, table: str, rows) -> Path:
    version, columns = SCHEMAS[table]
    path = Path(path)
    with open(path, "w", newline="") as fh:
        fh.write(f"# rssdetect {table} v{version}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_fmt(row.get(c)) for c in columns])
    return path


def read_csv(path):
    """Return (table, version, rows) with numeric fields parsed back to float."""
    with open(path, newline="") as fh:
        head = fh.readline().split()
        table, version = head[2], int(head[3].lstrip("v"))
        rows = []
        for rec in csv.DictReader(fh):
            out = {}
            for k, v in rec.items():
                if v == "":
                    out[k] = None
                elif v in ("true", "false"):
                    out[k] = v == "true"
                else:
                    try:
                        out[k] = float(v)
                    except ValueError:
                        out[k] = v
            rows.append(out)
    return table, version, rows


def line_plot(path, series, *, xlabel, ylabel, title="", logx=False):
    """series: list of (label, xs, ys).  Writes a self-contained SVG."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "rssdetect"
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    for label, xs, ys in series:
        ax.plot(xs, ys, marker="o", ms=3, label=label)
    if logx:
        ax.set_xscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return Path(path)
