"""Report emitters: JSON, CSV, Markdown, normalised plot data and figures.

Numbers are formatted once, here. JSON keeps full precision; tabular
outputs show reliability KPIs with 3 decimals and weight/volume with 1.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path

from .model import Subsystem

KPI_FIELDS = ("weight", "volume", "saidi", "ppl_interruption", "trl")
KPI_HEADERS = {
    "weight": "Weight [t]",
    "volume": "Volume [m³]",
    "saidi": "SAIDI [hours/year]",
    "ppl_interruption": "PPL interruption index [hours/year]",
    "trl": "TRL [-]",
}
CSV_COLUMNS = {
    "weight": "weight_t",
    "volume": "volume_m3",
    "saidi": "saidi_h_per_year",
    "ppl_interruption": "ppl_interruption_h_per_year",
    "trl": "trl",
}
_DECIMALS = {"weight": 1, "volume": 1, "saidi": 3, "ppl_interruption": 3}

FORMAT_SUFFIX = {"json": ".json", "csv": ".csv", "markdown": ".md"}


def fmt(value, decimals=3, missing="-"):
    if value is None:
        return missing
    if isinstance(value, int) and not isinstance(value, bool):
        return str(value)
    return f"{value:.{decimals}f}"


def display_value(report, kpi):
    value = getattr(report, kpi)
    if kpi == "trl":
        return fmt(value)
    return fmt(value, _DECIMALS[kpi])


def write_atomic(path, data):
    """Write text or bytes to ``path`` via a temporary file and rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    mode = "wb" if isinstance(data, bytes) else "w"
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, mode, **({} if mode == "wb" else {"encoding": "utf-8", "newline": ""})) as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


# -- KPI reports ---------------------------------------------------------------

def kpi_json(reports) -> str:
    return json.dumps({"reports": [r.to_dict() for r in reports]}, indent=2) + "\n"


def kpi_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["architecture", "basis"] + [CSV_COLUMNS[k] for k in KPI_FIELDS])
    for r in reports:
        w.writerow([r.architecture, r.basis] + [display_value(r, k) for k in KPI_FIELDS])
    return buf.getvalue()


def subsystem_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["architecture", "basis", "subsystem", "lambda_eq_per_year", "mttr_eq_h",
                "annual_downtime_h_per_year", "n_chains"])
    for r in reports:
        for s in r.subsystem_results:
            w.writerow([r.architecture, r.basis, s.subsystem.value, fmt(s.lambda_eq),
                        fmt(s.mttr_eq), fmt(s.annual_downtime), s.n_chains])
    return buf.getvalue()


def _md_table(header, rows):
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
    lines += ["| " + " | ".join(row) + " |" for row in rows]
    return "\n".join(lines)


def kpi_markdown(reports, subsystems=True) -> str:
    header = ["Conf."] + [KPI_HEADERS[k] for k in KPI_FIELDS]
    rows = [[r.label] + [display_value(r, k) for k in KPI_FIELDS] for r in reports]
    parts = ["## KPI comparison", "", _md_table(header, rows)]
    if subsystems:
        for r in reports:
            parts += ["", f"### Subsystem reliability, {r.label}", ""]
            parts.append(_md_table(
                ["Subsystem", "λ_eq [failures/year]", "MTTR_eq [hours]", "Annual downtime [hours/year]"],
                [[s.subsystem.label, fmt(s.lambda_eq), fmt(s.mttr_eq), fmt(s.annual_downtime)]
                 for s in r.subsystem_results]))
    return "\n".join(parts) + "\n"


def render_kpis(reports, fmt_name) -> str:
    if fmt_name == "json":
        return kpi_json(reports)
    if fmt_name == "csv":
        return kpi_csv(reports)
    if fmt_name == "markdown":
        return kpi_markdown(reports)
    raise ValueError(f"unknown format {fmt_name!r}")


# -- normalised bar-plot data --------------------------------------------------

def normalized(reports) -> list:
    """Each KPI divided by its maximum over the reports (None stays None)."""
    scale = {}
    for k in KPI_FIELDS:
        values = [getattr(r, k) for r in reports if getattr(r, k) is not None]
        scale[k] = max(values) if values else None
    out = []
    for r in reports:
        row = {"architecture": r.label}
        for k in KPI_FIELDS:
            v = getattr(r, k)
            if v is None or scale[k] is None:
                row[k] = None
            else:
                row[k] = v / scale[k] if scale[k] > 0 else 0.0
        out.append(row)
    return out


def normalized_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["architecture"] + list(KPI_FIELDS))
    for row in normalized(reports):
        w.writerow([row["architecture"]] + [fmt(row[k], missing="") for k in KPI_FIELDS])
    return buf.getvalue()


def render_barplot(reports, path):
    """Grouped bar chart of normalised KPIs, one group per KPI."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    import numpy as np

    rows = normalized(reports)
    x = np.arange(len(KPI_FIELDS))
    width = 0.8 / max(len(rows), 1)
    fig, ax = plt.subplots(figsize=(8, 4.5))
    for i, row in enumerate(rows):
        heights = [row[k] if row[k] is not None else 0.0 for k in KPI_FIELDS]
        ax.bar(x + (i - (len(rows) - 1) / 2) * width, heights, width, label=row["architecture"])
    ax.set_xticks(x)
    ax.set_xticklabels(["Weight", "Volume", "SAIDI", "PPL index", "TRL"])
    ax.set_ylabel("value / max over architectures")
    ax.set_ylim(0, 1.1)
    ax.legend(title="Conf.")
    ax.grid(axis="y", alpha=0.3)
    fig.tight_layout()
    buf = io.BytesIO()
    # fixed metadata keeps the PNG byte-stable between runs
    fig.savefig(buf, format="png", dpi=150, metadata={"Software": None})
    plt.close(fig)
    return write_atomic(path, buf.getvalue())


# -- chains dump ---------------------------------------------------------------

def chains_rows(arch_name, grouped) -> list:
    rows = []
    for subsystem in Subsystem:
        for chain in grouped.get(subsystem, []):
            for e in chain.elements:
                rows.append({
                    "architecture": arch_name,
                    "subsystem": subsystem.value,
                    "load": chain.load_id,
                    "component": e.component_id,
                    "failure_rate": e.failure_rate,
                    "effective_mttr": e.effective_mttr,
                    "bypassed_by": e.bypassed_by,
                })
    return rows


def render_chains(rows, fmt_name) -> str:
    if fmt_name == "json":
        return json.dumps({"chains": rows}, indent=2) + "\n"
    header = ["architecture", "subsystem", "load", "component", "failure_rate",
              "effective_mttr", "bypassed_by"]
    cells = [[str(r["architecture"]), r["subsystem"], r["load"], r["component"],
              fmt(r["failure_rate"]), fmt(r["effective_mttr"]), r["bypassed_by"] or ""]
             for r in rows]
    if fmt_name == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(cells)
        return buf.getvalue()
    return _md_table(header, cells) + "\n"


# -- simulation ----------------------------------------------------------------

def simulation_json(results) -> str:
    return json.dumps({"simulations": results}, indent=2) + "\n"


def simulation_table(results) -> str:
    header = ["Conf.", "Subsystem", "Analytic [h/yr]", "Simulated [h/yr]", "± half-width",
              "Delta", "Within"]
    rows = []
    for res in results:
        for s in res["subsystems"]:
            rows.append([res["label"], Subsystem(s["subsystem"]).label, fmt(s["analytic_downtime"]),
                         fmt(s["mean_downtime"]), fmt(s["half_width"]), fmt(s["delta"]),
                         "yes" if s["within_half_width"] else "no"])
    return _md_table(header, rows) + "\n"
