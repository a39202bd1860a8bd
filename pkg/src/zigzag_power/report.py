"""CSV/JSON emission for studies and the catalog.

Powers and levels are written with 6 significant digits, cutoffs with 10,
integers verbatim. Curve and sensitivity files reuse the exact strings of
``study.csv`` so every file agrees with it character for character.
"""

from __future__ import annotations

import csv
import json
import math
import re
from pathlib import Path

from .distributions import catalog_entries
from .power import StudyResult

STUDY_HEADER = (
    "alternative",
    "statistic",
    "sample_size",
    "alpha",
    "alpha1",
    "alpha2",
    "x1",
    "x2",
    "power_at_x1",
    "power_at_x2",
    "power",
    "sensitivity",
    "replicates",
    "seed",
)


def fmt_level(x: float | None) -> str:
    if x is None or math.isnan(x):
        return ""
    return f"{x:.6g}"


def fmt_cutoff(x: float | None) -> str:
    if x is None or math.isnan(x):
        return ""
    return f"{x:.10g}"


def _writer(fh):
    return csv.writer(fh, delimiter=",", lineterminator="\n")


def study_rows(result: StudyResult) -> list[dict[str, str]]:
    rows = []
    for rec in result.records:
        row = dict.fromkeys(STUDY_HEADER, "")
        row.update(
            alternative=rec.alternative,
            statistic=rec.statistic.value,
            sample_size=str(rec.sample_size),
            alpha=fmt_level(result.plan.alpha),
            replicates=str(rec.replicates),
            seed=str(rec.seed),
        )
        est = rec.estimate
        if est is not None:
            b = est.bracket
            row.update(
                alpha1=fmt_level(b.alpha1),
                alpha2=fmt_level(b.alpha2),
                x1=fmt_cutoff(b.x1),
                x2=fmt_cutoff(b.x2),
                power_at_x1=fmt_level(est.power_at_x1),
                power_at_x2=fmt_level(est.power_at_x2),
                power=fmt_level(est.power),
                sensitivity=fmt_level(est.sensitivity),
            )
        rows.append(row)
    return rows


def safe_label(label: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]+", "_", label) or "_"


def write_study_csv(rows: list[dict[str, str]], path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = _writer(fh)
        w.writerow(STUDY_HEADER)
        for row in rows:
            w.writerow([row[c] for c in STUDY_HEADER])


def write_curves(result: StudyResult, rows: list[dict[str, str]], outdir: Path) -> list[Path]:
    """One ``curve_<label>.csv`` per alternative: sample sizes down, statistics across."""
    kinds = [k.value for k in result.plan.statistics]
    lookup = {(r["alternative"], r["statistic"], r["sample_size"]): r["power"] for r in rows}
    paths = []
    for label in result.alternatives:
        path = outdir / f"curve_{safe_label(label)}.csv"
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = _writer(fh)
            w.writerow(["sample_size", *kinds])
            for n in result.plan.sample_sizes:
                w.writerow([n, *(lookup[(label, k, str(n))] for k in kinds)])
        paths.append(path)
    return paths


def write_sensitivity(result: StudyResult, rows: list[dict[str, str]], path: Path) -> None:
    """Sensitivity (1 - power) per statistic, plus the statistic with the lowest one."""
    kinds = [k.value for k in result.plan.statistics]
    lookup = {(r["alternative"], r["statistic"], r["sample_size"]): r["sensitivity"] for r in rows}
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = _writer(fh)
        w.writerow(["alternative", "sample_size", *kinds, "lowest_sensitivity"])
        for label in result.alternatives:
            for n in result.plan.sample_sizes:
                values = [lookup[(label, k, str(n))] for k in kinds]
                scored = [(float(v), k) for v, k in zip(values, kinds) if v]
                best = min(scored)[1] if scored else ""
                w.writerow([label, n, *values, best])


def write_study_json(result: StudyResult, path: Path) -> None:
    plan = result.plan
    records = []
    for rec in result.records:
        item = {
            "alternative": rec.alternative,
            "statistic": rec.statistic.value,
            "sample_size": rec.sample_size,
            "replicates": rec.replicates,
            "seed": rec.seed,
            "error": rec.error,
        }
        if rec.estimate is not None:
            est, b = rec.estimate, rec.estimate.bracket
            item.update(
                power=est.power,
                sensitivity=est.sensitivity,
                power_at_x1=est.power_at_x1,
                power_at_x2=est.power_at_x2,
                x1=b.x1,
                x2=b.x2,
                alpha1=b.alpha1,
                alpha2=b.alpha2,
                exact_hit=b.exact_hit,
            )
        records.append(item)
    doc = {
        "null": result.null_label,
        "alternatives": list(result.alternatives),
        "plan": {
            "replicates": plan.replicates,
            "alpha": plan.alpha,
            "sample_sizes": list(plan.sample_sizes),
            "seed": plan.seed,
            "statistics": [k.value for k in plan.statistics],
        },
        "records": records,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def write_study(result: StudyResult, outdir, formats=("csv",)) -> list[Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    rows = study_rows(result)
    written = []
    if "csv" in formats:
        write_study_csv(rows, outdir / "study.csv")
        written.append(outdir / "study.csv")
        written += write_curves(result, rows, outdir)
        write_sensitivity(result, rows, outdir / "sensitivity.csv")
        written.append(outdir / "sensitivity.csv")
    if "json" in formats:
        write_study_json(result, outdir / "study.json")
        written.append(outdir / "study.json")
    return written


def write_catalog(fh) -> None:
    """Raw and resolved rows of every catalog distribution, long format."""
    entries = catalog_entries()
    k = max(len(e.raw) for e in entries)
    w = _writer(fh)
    w.writerow(["name", "row", *(f"p{i}" for i in range(1, k + 1)), "sum", "provenance_note"])
    for e in entries:
        w.writerow([e.name, "raw", *(repr(v) for v in e.raw), f"{math.fsum(e.raw):.12g}", e.provenance_note])
        res = e.resolved.probs
        w.writerow([e.name, "resolved", *(repr(v) for v in res), f"{math.fsum(res):.12g}", e.provenance_note])
