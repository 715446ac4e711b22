"""Result tables, CSV emission, and SVG line plots."""

from __future__ import annotations

import csv
from dataclasses import dataclass


@dataclass
class Table:
    columns: list
    rows: list

    def column(self, name):
        i = self.columns.index(name)
        return [row[i] for row in self.rows]

    def select(self, **conditions):
        """Rows matching all column=value conditions, as a new Table."""
        idx = {c: self.columns.index(c) for c in conditions}
        rows = [r for r in self.rows
                if all(r[idx[c]] == v for c, v in conditions.items())]
        return Table(self.columns, rows)


def _format_cell(value):
    if isinstance(value, float):
        return repr(value)  # shortest round-trip representation
    return str(value)


def emit_csv(table: Table, path):
    """Write a table as RFC-4180-style CSV with a header row.

    Floats are written in round-trip form, so parsing the file reproduces
    them exactly.  An empty table is an error.
    """
    if not table.rows:
        raise ValueError(f"refusing to write empty table to {path}")
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(table.columns)
            for row in table.rows:
                writer.writerow([_format_cell(v) for v in row])
    except OSError as exc:
        raise OSError(f"cannot write table to {path}: {exc}") from exc


def read_csv(path) -> Table:
    """Read a CSV written by :func:`emit_csv`, parsing numeric cells."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        columns = next(reader)
        rows = []
        for raw in reader:
            row = []
            for cell in raw:
                try:
                    row.append(int(cell))
                except ValueError:
                    try:
                        row.append(float(cell))
                    except ValueError:
                        row.append(cell)
            rows.append(tuple(row))
    return Table(columns, rows)


def emit_svg_plot(table: Table, path, *, x, y, series=None, logy=False,
                  title=None, xlabel=None, ylabel=None):
    """Line plot of table columns as SVG.

    One line per distinct value of the ``series`` column (or a single line);
    ``logy`` switches the y axis to log scale.  Rows with non-numeric y
    values are skipped.
    """
    if not table.rows:
        raise ValueError(f"refusing to plot empty table to {path}")
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    groups = sorted(set(table.column(series))) if series else [None]
    for key in groups:
        sub = table.select(**{series: key}) if series else table
        pairs = [(px, py) for px, py in zip(sub.column(x), sub.column(y))
                 if isinstance(py, (int, float))]
        if not pairs:
            continue
        pairs.sort()
        ax.plot([p[0] for p in pairs], [p[1] for p in pairs],
                marker="o", label=None if key is None else str(key))
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(xlabel or x)
    ax.set_ylabel(ylabel or y)
    if title:
        ax.set_title(title)
    if series:
        ax.legend(fontsize=8)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    try:
        fig.savefig(path, format="svg")
    except OSError as exc:
        raise OSError(f"cannot write plot to {path}: {exc}") from exc
    finally:
        plt.close(fig)
