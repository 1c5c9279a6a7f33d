"""Tests for seeded campaigns and the report writers."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import pytest

from renyilab.contracts.models import CampaignReport
from renyilab.errors import InvalidOrder
from renyilab.orchestrator.campaigns import (
    TRIAL_FUNCTIONS,
    aggregate,
    run_cmi_alpha_mono,
    run_conjecture1,
    run_conjecture2,
    run_duality_campaign,
    run_lemma_campaign,
    run_refinement_campaign,
    run_remainder_campaign,
)
from renyilab.orchestrator.recorder import metadata_path, write_csv, write_report
from renyilab.states import make_rng


def _duality(workers: int = 1, seed: int = 7) -> CampaignReport:
    return run_duality_campaign((0.5, 1.5), trials=4, seed=seed, workers=workers)


def test_aggregate_counts_violations_and_near_misses() -> None:
    summary = aggregate([0.1, -1e-9, -1.0], -1e-8)
    assert summary.trials == 3
    assert summary.min_margin == -1.0
    assert summary.violations == 1
    assert summary.near_violations == 1
    empty = aggregate([], -1e-8)
    assert empty.trials == 0
    assert empty.min_margin == math.inf


def test_campaign_body_is_deterministic_across_workers() -> None:
    serial = _duality(workers=1)
    parallel = _duality(workers=2)
    assert serial.body_json() == parallel.body_json()
    assert [row.trial for row in serial.rows] == [0, 0, 1, 1, 2, 2, 3, 3]
    assert _duality(seed=8).body_json() != serial.body_json()


def test_rows_replay_from_seed_and_trial() -> None:
    report = _duality()
    replayed = TRIAL_FUNCTIONS["duality"](report.spec, 2, make_rng(report.spec.seed, 2)).rows
    assert replayed == [row for row in report.rows if row.trial == 2]


def test_duality_campaign_has_no_violations() -> None:
    report = _duality()
    assert report.aggregate.violations == 0
    assert report.aggregate.min_margin >= -1e-8
    assert report.metadata is not None
    assert report.metadata.workers == 1


def test_lemma_campaign_within_tolerance() -> None:
    report = run_lemma_campaign((0.5, 2.0), trials=2, seed=3)
    assert report.aggregate.min_margin >= -1e-9
    assert {"tensor_gap", "conditioning_gap"} <= set(report.rows[0].values)


def test_conjecture1_reports_b_side_control() -> None:
    report = run_conjecture1((2,), (0.5, 1.5), trials=2, seed=1)
    assert len(report.rows) == 4
    assert report.controls["b-side"].trials == 4
    assert report.controls["b-side"].violations == 0
    assert {"cmi", "cmi_after"} == set(report.rows[0].values)


def test_conjecture2_pairs_and_unitary_control() -> None:
    report = run_conjecture2((2,), (0.5, 1.5), trials=2, seed=2, reject_eps=1e-3)
    assert len(report.rows) == 4
    assert {row.params["variant"] for row in report.rows} == {"petz", "sandwiched"}
    assert all(row.params["alpha"] < row.params["beta"] for row in report.rows)
    unitary = report.controls["unitary"]
    assert unitary.trials == 4
    assert unitary.violations == 0


def test_conjecture2_beta_grid_filters_pairs() -> None:
    report = run_conjecture2(
        (2,), (0.5, 2.0), trials=1, beta_grid=(1.5,), variants=("petz",), reject_eps=1e-3
    )
    assert [(row.params["alpha"], row.params["beta"]) for row in report.rows] == [(0.5, 1.5)]


def test_cmi_alpha_mono_records_every_order() -> None:
    report = run_cmi_alpha_mono((2,), (0.5, 1.0, 2.0), trials=2)
    assert set(report.rows[0].values) == {"alpha=0.5", "alpha=1", "alpha=2"}
    assert len(report.rows) == 2


def test_joint_convexity_remainder_campaign_matches_flagged_form() -> None:
    report = run_remainder_campaign("joint-convexity", (2,), trials=3, seed=4)
    assert all(row.values["equivalence_gap"] <= 1e-9 for row in report.rows)
    assert all(row.params["kind"] == "joint-convexity" for row in report.rows)


def test_holevo_remainder_campaign_gap_non_negative() -> None:
    report = run_remainder_campaign("holevo", (2,), trials=3, seed=5)
    assert all(row.values["holevo_gap"] >= -1e-9 for row in report.rows)


def test_unknown_remainder_kind_is_rejected() -> None:
    with pytest.raises(ValueError):
        run_remainder_campaign("bogus", (2,), trials=1)


def test_refinement_campaign_margins() -> None:
    report = run_refinement_campaign((2,), (0.5, 2.0), trials=2, seed=6)
    assert report.aggregate.violations == 0
    assert report.aggregate.min_margin >= -1e-9


@pytest.mark.parametrize("grid", [(0.0,), (-1.0,), (1.0 + 1e-8,)])
def test_grid_validation(grid: tuple[float, ...]) -> None:
    with pytest.raises(InvalidOrder):
        run_duality_campaign(grid, trials=1)


def test_report_writers(tmp_path: Path) -> None:
    report = _duality()
    out = tmp_path / "reports" / "duality.json"
    write_report(report, out)
    body = out.read_text(encoding="utf-8")
    assert body == report.body_json() + "\n"
    assert "metadata" not in json.loads(body)
    meta = json.loads(metadata_path(out).read_text(encoding="utf-8"))
    assert meta["workers"] == 1
    assert metadata_path(out).name == "duality.meta.json"

    csv_path = tmp_path / "duality.csv"
    write_csv(report, csv_path)
    with csv_path.open(encoding="utf-8") as handle:
        rows = list(csv.DictReader(handle))
    assert len(rows) == len(report.rows)
    assert rows[0]["campaign"] == "duality"
    assert float(rows[0]["value.cmi_abc"]) == report.rows[0].values["cmi_abc"]
    assert float(rows[0]["param.alpha"]) == 0.5


def test_identical_runs_write_identical_bodies(tmp_path: Path) -> None:
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    write_report(_duality(), first)
    write_report(_duality(), second)
    assert first.read_bytes() == second.read_bytes()
