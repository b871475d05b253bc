"""Summary tables, raw CSV and plots for a finished sweep.

All files are first written to a scratch directory inside the destination and
moved into place only once every requested output has been produced, so a
failure never leaves a partial set of summaries behind.
"""

from __future__ import annotations

import csv
import io
import json
import os
import shutil
import tempfile

from .bench import COMPARISONS, aggregate, rows_to_csv
from .engines import Algorithm

FORMATS = ("csv", "table", "plot")

RAW_CSV = "runs.csv"
SUMMARY_CSV = "summary.csv"
SUMMARY_TABLE = "summary.txt"
PROVENANCE = "provenance.json"


def _algorithms(cells):
    present = {a for cell in cells.values() for a in cell.samples}
    return [a for a in Algorithm if a in present]


def _comparisons(cells):
    present = {pair for cell in cells.values() for pair in cell.welch}
    return [pair for pair in COMPARISONS if pair in present]


def summary_csv(cells) -> str:
    """One row per cell: a count/mean/min/max triple per algorithm, then each test."""
    algos = _algorithms(cells)
    pairs = _comparisons(cells)
    header = ["n", "k", "p"]
    for a in algos:
        header += [f"{a.value}_{stat}" for stat in ("count", "mean", "min", "max", "variance")]
    for c, b in pairs:
        tag = f"{c.value}_vs_{b.value}"
        header += [f"{tag}_t", f"{tag}_df", f"{tag}_p", f"{tag}_verdict", f"{tag}_paired_p"]

    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for key in sorted(cells):
        cell = cells[key]
        row = list(key)
        for a in algos:
            s = cell.summaries.get(a)
            row += [""] * 5 if s is None else [s.count, repr(s.mean), repr(s.min), repr(s.max),
                                               repr(s.variance)]
        for pair in pairs:
            w = cell.welch.get(pair)
            if w is None:
                row += [""] * 5
                continue
            paired = cell.paired.get(pair)
            row += [repr(w.t_statistic), repr(w.degrees_of_freedom), repr(w.p_value),
                    cell.verdict(*pair), "" if paired is None else repr(paired.p_value)]
        writer.writerow(row)
    return out.getvalue()


def summary_table(cells) -> str:
    """Fixed-width text rendering of the summary for terminals and logs."""
    algos = _algorithms(cells)
    pairs = _comparisons(cells)
    lines = []
    head = f"{'n':>4} {'k':>3} {'p':>3}"
    for a in algos:
        head += f" | {a.value + ' mean [min, max]':^28}"
    for c, b in pairs:
        head += f" | {c.value + ' vs ' + b.value:^22}"
    lines.append(head)
    lines.append("-" * len(head))
    for key in sorted(cells):
        cell = cells[key]
        line = f"{key[0]:>4} {key[1]:>3} {key[2]:>3}"
        for a in algos:
            s = cell.summaries.get(a)
            text = "" if s is None else f"{s.mean:.4f} [{s.min:.4f}, {s.max:.4f}]"
            line += f" | {text:^28}"
        for pair in pairs:
            w = cell.welch.get(pair)
            text = "" if w is None else f"p={w.p_value:.3g} {cell.verdict(*pair)}"
            line += f" | {text:^22}"
        lines.append(line)
    lines.append("")
    lines.append("significance: Welch unpaired two-tailed t-test, p < 0.05")
    return "\n".join(lines) + "\n"


def plot_svgs(cells) -> dict:
    """Fitness against K per N, one series per algorithm (and P), min/max whiskers."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "nkhdea"
    files = {}
    for n in sorted({key[0] for key in cells}):
        keys = sorted(key for key in cells if key[0] == n)
        ps = sorted({key[2] for key in keys})
        fig, ax = plt.subplots(figsize=(6, 4))
        for p in ps:
            for offset, algo in enumerate(_algorithms(cells)):
                pts = [(key[1], cells[key].summaries[algo]) for key in keys
                       if key[2] == p and algo in cells[key].summaries]
                if not pts:
                    continue
                ks = [k + 0.15 * (offset - 0.5) for k, _ in pts]
                means = [s.mean for _, s in pts]
                err = [[s.mean - s.min for _, s in pts], [s.max - s.mean for _, s in pts]]
                label = algo.value if len(ps) == 1 else f"{algo.value} P={p}"
                ax.errorbar(ks, means, yerr=err, marker="o", capsize=3, label=label)
        ax.set_xlabel("K")
        ax.set_ylabel("fitness")
        ax.set_title(f"N={n}")
        ax.legend()
        buf = io.StringIO()
        fig.savefig(buf, format="svg", metadata={"Date": None})
        plt.close(fig)
        files[f"fitness_n{n}.svg"] = buf.getvalue()
    return files


def render(rows, formats=("csv", "table"), provenance=None) -> dict:
    """Map of output filename to contents for the requested formats."""
    unknown = set(formats) - set(FORMATS)
    if unknown:
        raise ValueError(f"unknown report formats: {', '.join(sorted(unknown))}")
    cells = aggregate(rows)
    files = {}
    if "csv" in formats:
        files[SUMMARY_CSV] = summary_csv(cells)
    if "table" in formats:
        files[SUMMARY_TABLE] = summary_table(cells)
    if "plot" in formats:
        files.update(plot_svgs(cells))
    if provenance is not None:
        files[PROVENANCE] = json.dumps(provenance, indent=2, sort_keys=True) + "\n"
    return files


def write_files(files: dict, out_dir) -> list:
    """Write ``files`` into ``out_dir`` all-or-nothing; returns the final paths."""
    os.makedirs(out_dir, exist_ok=True)
    scratch = tempfile.mkdtemp(prefix=".partial-", dir=out_dir)
    try:
        for name, text in files.items():
            with open(os.path.join(scratch, name), "w", encoding="utf-8") as fh:
                fh.write(text)
        paths = []
        for name in files:
            dest = os.path.join(out_dir, name)
            os.replace(os.path.join(scratch, name), dest)
            paths.append(dest)
        return paths
    finally:
        shutil.rmtree(scratch, ignore_errors=True)


def report(result, out_dir, formats=("csv", "table")) -> list:
    """Write the raw run CSV, requested summaries and provenance for a sweep result."""
    files = {RAW_CSV: rows_to_csv(result.rows)}
    files.update(render(result.rows, formats, result.provenance))
    return write_files(files, out_dir)
