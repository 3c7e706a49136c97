"""CSV, Markdown, key=value and SVG rendering of command results."""

import csv
import io
import sys
from collections.abc import Iterable, Mapping, Sequence
from pathlib import Path
from typing import Any

import numpy as np
from numpy.typing import NDArray

from ..models.analysis import PeRow
from ..models.config import OutputFormat
from ..models.reports import ConvergenceTable, ErrorReport

FemColumn = tuple[str, list[ErrorReport]]


def format_float(value: float) -> str:
    """Round-trip safe decimal rendering."""
    return "%.17g" % value


def format_compact(value: float) -> str:
    """Five significant digits with a short exponent, e.g. ``2.6315e-4``."""
    if not np.isfinite(value):
        return str(value)
    mantissa, _, exponent = ("%.4e" % value).partition("e")
    sign = "-" if exponent.startswith("-") else ""
    return f"{mantissa}e{sign}{int(exponent.lstrip('+-'))}"


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        return format_float(float(value))
    return str(value)


def write_csv(fieldnames: Sequence[str], rows: Iterable[Mapping[str, Any]]) -> str:
    """Render rows with a header line; floats use ``%.17g`` and ``None`` is empty."""
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(fieldnames), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({key: _cell(value) for key, value in row.items()})
    return buffer.getvalue()


def markdown_table(header: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    lines = [
        "| " + " | ".join(header) + " |",
        "|" + "|".join("---" for _ in header) + "|",
    ]
    lines.extend("| " + " | ".join(row) + " |" for row in rows)
    return "\n".join(lines) + "\n"


def key_value_lines(items: Iterable[tuple[str, Any]]) -> str:
    """``key=value`` lines; floats in compact form, complex values as ``re+imj``."""
    lines = []
    for key, value in items:
        if isinstance(value, complex):
            text = f"{format_compact(value.real)}{'-' if value.imag < 0 else '+'}{format_compact(abs(value.imag))}j"
        elif isinstance(value, float):
            text = format_compact(value)
        else:
            text = str(value)
        lines.append(f"{key}={text}")
    return "\n".join(lines) + "\n"


def columns_csv(columns: Mapping[str, NDArray[np.float64]]) -> str:
    """Column-major data (curves, sweeps) as CSV."""
    names = list(columns)
    length = len(next(iter(columns.values()))) if columns else 0
    rows = ({name: float(columns[name][k]) for name in names} for k in range(length))
    return write_csv(names, rows)


def _pair_slug(key: str) -> str:
    return key.replace(",", "_")


def convergence_csv(table: ConvergenceTable) -> str:
    """One CSV row per mesh: errors of every scheme, then gaps, differences and orders."""
    fields = ["n_nodes", "h"]
    for scheme in table.schemes:
        fields += [f"inf_abs_{scheme}", f"inf_rel_{scheme}", f"l2_rel_{scheme}"]
    for key in table.pair_keys:
        slug = _pair_slug(key)
        fields += [f"gap_{slug}", f"diff_{slug}", f"order_{slug}"]

    def rows() -> Iterable[dict[str, Any]]:
        for row in table.rows:
            record: dict[str, Any] = {"n_nodes": row.n_nodes, "h": row.h}
            for scheme in table.schemes:
                report = row.errors[scheme]
                record[f"inf_abs_{scheme}"] = report.inf_abs
                record[f"inf_rel_{scheme}"] = report.inf_rel
                record[f"l2_rel_{scheme}"] = report.l2_rel
            for key in table.pair_keys:
                entry = row.pair(key)
                slug = _pair_slug(key)
                record[f"gap_{slug}"] = entry.gap
                record[f"diff_{slug}"] = entry.rel_difference
                record[f"order_{slug}"] = entry.order
            yield record

    return write_csv(fields, rows())


def convergence_markdown(table: ConvergenceTable) -> str:
    """Table layout with meshes as columns: error rows, difference rows, order rows."""
    header = ["Value", *(f"N={n}" for n in table.n_values)]
    body: list[list[str]] = []
    for scheme in table.schemes:
        body.append([f"err_{scheme} inf,rel", *(format_compact(v) for v in table.rel_errors(scheme))])
    differences = table.difference_rows()
    for key in table.pair_keys:
        body.append([f"err_{key.replace(',', ' - err_')}", *(format_compact(v) for v in differences[key])])
    for key in table.pair_keys:
        orders = table.orders(key)
        body.append([f"P_{key}", *("" if v is None else f"{v:.4f}" for v in orders)])
    return f"{table.example}, t={table.t:g} ({table.mode.value})\n\n" + markdown_table(header, body)


def fem_csv(columns: Sequence[FemColumn]) -> str:
    """One CSV row per mesh and scheme."""
    fields = ["mesh", "scheme", "inf_abs", "inf_rel", "l2_rel", "excluded_nodes"]
    rows = (
        {"mesh": mesh, **report.model_dump()}
        for mesh, reports in columns
        for report in reports
    )
    return write_csv(fields, rows)


def fem_markdown(example: str, t: float, columns: Sequence[FemColumn]) -> str:
    """Meshes as columns; relative max-norm rows, then relative l2 rows."""
    header = ["Value", *(mesh for mesh, _ in columns)]
    schemes = [report.scheme for report in columns[0][1]] if columns else []
    body: list[list[str]] = []
    for norm, label in (("inf_rel", "inf,rel"), ("l2_rel", "2,dis")):
        for index, scheme in enumerate(schemes):
            body.append(
                [f"err_{scheme} {label}", *(format_compact(getattr(reports[index], norm)) for _, reports in columns)]
            )
    return f"{example}, t={t:g}\n\n" + markdown_table(header, body)


_PE_FIELDS = ("pe", "z0", "z_tilde", "psi", "z0_scaled", "gap_scaled", "psi_gap_scaled")


def pe_table(rows: Sequence[PeRow], fmt: OutputFormat) -> str:
    if fmt is OutputFormat.CSV:
        return write_csv(_PE_FIELDS, (row.model_dump() for row in rows))
    body = [[format_compact(getattr(row, name)) for name in _PE_FIELDS] for row in rows]
    return markdown_table(_PE_FIELDS, body)


def svg_polylines(
    columns: Mapping[str, NDArray[np.float64]],
    x: str = "z",
    width: int = 640,
    height: int = 400,
) -> str:
    """Every non-``x`` column as a polyline over ``x``, scaled to the canvas."""
    xs = np.asarray(columns[x], dtype=np.float64)
    series = {name: np.asarray(v, dtype=np.float64) for name, v in columns.items() if name != x}
    finite = [v[np.isfinite(v)] for v in series.values()]
    values = np.concatenate(finite) if finite else np.zeros(1)
    lo, hi = (float(values.min()), float(values.max())) if values.size else (0.0, 1.0)
    if hi == lo:
        hi = lo + 1.0
    x_lo, x_hi = float(xs.min()), float(xs.max())
    x_span = x_hi - x_lo or 1.0

    def point(a: float, b: float) -> str:
        px = (a - x_lo) / x_span * width
        py = height - (b - lo) / (hi - lo) * height
        return f"{px:.2f},{py:.2f}"

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">'
    ]
    if lo < 0.0 < hi:
        zero = height - (0.0 - lo) / (hi - lo) * height
        parts.append(f'<line x1="0" y1="{zero:.2f}" x2="{width}" y2="{zero:.2f}" stroke="#999"/>')
    palette = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
    for index, (name, ys) in enumerate(series.items()):
        coords = " ".join(point(a, b) for a, b in zip(xs, ys) if np.isfinite(b))
        parts.append(
            f'<polyline fill="none" stroke="{palette[index % len(palette)]}" points="{coords}">'
            f"<title>{name}</title></polyline>"
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit(text: str, out: str) -> None:
    """Write to ``out``, or to stdout when it is ``-``; ``OSError`` propagates."""
    if out == "-":
        sys.stdout.write(text)
        return
    Path(out).write_text(text, encoding="utf-8")
