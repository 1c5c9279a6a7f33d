"""Tests for the JSON payload codecs."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from renyilab.channels import Povm, depolarizing
from renyilab.contracts.models import canonical_json
from renyilab.contracts.serialization import (
    ChannelPayload,
    StatePayload,
    channel_from_payload,
    channel_to_payload,
    decode_matrix,
    dump_state,
    encode_matrix,
    ensemble_from_payload,
    ensemble_to_payload,
    load_instance,
    load_state,
    povm_from_payload,
    povm_to_payload,
    state_from_payload,
)
from renyilab.errors import NegativeEigenvalue, ShapeMismatch
from renyilab.states import make_rng, random_density, random_pure_ensemble


def test_complex_entries_are_pairs() -> None:
    rows = encode_matrix(np.array([[1.0, 1j], [-1j, 2.0]]))
    assert rows[0][1] == (0.0, 1.0)
    assert np.array_equal(decode_matrix(rows), np.array([[1.0, 1j], [-1j, 2.0]]))


def test_decode_rejects_flat_payload() -> None:
    with pytest.raises(ShapeMismatch):
        decode_matrix([[1.0, 0.0]])  # type: ignore[list-item]


def test_state_file_round_trip(tmp_path: Path) -> None:
    rho = random_density((2, 3), make_rng(1))
    path = tmp_path / "rho.json"
    dump_state(rho, path)
    loaded = load_state(path)
    assert loaded.labels == ("A", "B")
    assert np.allclose(loaded.matrix, rho.matrix, atol=1e-15)


def test_state_payload_is_validated() -> None:
    bad = StatePayload(dims=[2], labels=["A"], matrix=encode_matrix(np.diag([1.5, -0.5])))
    with pytest.raises(NegativeEigenvalue):
        state_from_payload(bad)
    wrong_dims = StatePayload(dims=[3], labels=["A"], matrix=encode_matrix(np.eye(2) / 2))
    with pytest.raises(ShapeMismatch):
        state_from_payload(wrong_dims)


def test_load_state_rejects_malformed_files(tmp_path: Path) -> None:
    path = tmp_path / "broken.json"
    path.write_text(json.dumps({"labels": ["A"]}), encoding="utf-8")
    with pytest.raises(ShapeMismatch):
        load_state(path)
    with pytest.raises(ShapeMismatch):
        load_instance(path)


def test_channel_payload_checks_declared_dimensions() -> None:
    payload = channel_to_payload(depolarizing(2, 0.3))
    assert channel_from_payload(payload).d_out == 2
    lying = ChannelPayload(d_in=3, d_out=2, kraus=payload.kraus)
    with pytest.raises(ShapeMismatch):
        channel_from_payload(lying)


def test_povm_and_ensemble_payloads() -> None:
    povm = Povm.random_rank_one(2, 3, make_rng(2))
    restored = povm_from_payload(povm_to_payload(povm))
    assert len(restored) == 3
    assert restored.rank_one
    ensemble = random_pure_ensemble((2, 2), 3, make_rng(3))
    back = ensemble_from_payload(ensemble_to_payload(ensemble))
    assert np.allclose(back.average().matrix, ensemble.average().matrix, atol=1e-14)


def test_canonical_json_is_key_sorted() -> None:
    assert canonical_json({"b": 1, "a": [1.5, 2]}) == canonical_json({"a": [1.5, 2], "b": 1})
