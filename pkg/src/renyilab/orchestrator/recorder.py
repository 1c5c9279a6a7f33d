"""Report writers: canonical JSON body, metadata sidecar and per-trial CSV."""

from __future__ import annotations

import csv
from pathlib import Path

from renyilab.contracts.models import CampaignReport, SuiteReport, canonical_json

BASE_COLUMNS = ("campaign", "trial", "seed", "margin", "violation", "near_violation")


def metadata_path(out: Path) -> Path:
    return out.with_name(out.stem + ".meta.json")


def write_report(report: CampaignReport | SuiteReport, out: Path) -> None:
    """Write the report body to ``out`` and its run metadata next to it.

    The body depends only on the invocation, so identical runs give identical files.
    """
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(report.body_json() + "\n", encoding="utf-8")
    if report.metadata is not None:
        metadata = canonical_json(report.metadata.model_dump(mode="json"))
        metadata_path(out).write_text(metadata + "\n", encoding="utf-8")


def write_csv(report: CampaignReport, out: Path) -> None:
    """One row per trial record; params and values are flattened into prefixed columns."""
    param_keys = sorted({key for row in report.rows for key in row.params})
    value_keys = sorted({key for row in report.rows for key in row.values})
    header = [
        *BASE_COLUMNS,
        *(f"param.{k}" for k in param_keys),
        *(f"value.{k}" for k in value_keys),
    ]
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(handle, fieldnames=header)
        writer.writeheader()
        for row in report.rows:
            line: dict[str, object] = {
                "campaign": row.campaign,
                "trial": row.trial,
                "seed": row.seed,
                "margin": repr(row.margin),
                "violation": row.violation,
                "near_violation": row.near_violation,
            }
            line.update({f"param.{k}": row.params.get(k, "") for k in param_keys})
            values = {k: repr(v) for k, v in row.values.items()}
            line.update({f"value.{k}": values.get(k, "") for k in value_keys})
            writer.writerow(line)
