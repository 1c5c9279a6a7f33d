"""JSON codecs for matrices, states, channels, POVMs and ensembles.

Complex entries are written as ``[re, im]`` pairs in row-major order.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, Field, ValidationError

from renyilab.channels import Povm, QuantumChannel
from renyilab.errors import ShapeMismatch
from renyilab.linalg import Matrix, SubsystemShape
from renyilab.states import DensityOperator, Ensemble

ComplexRows = list[list[tuple[float, float]]]


class StatePayload(BaseModel):
    dims: list[int]
    labels: list[str]
    matrix: ComplexRows


class ChannelPayload(BaseModel):
    d_in: int
    d_out: int
    kraus: list[ComplexRows]


class PovmPayload(BaseModel):
    effects: list[ComplexRows]


class EnsemblePayload(BaseModel):
    probs: list[float]
    states: list[StatePayload]


class InstancePayload(BaseModel):
    """Inputs of a relative-entropy difference: rho, sigma and the channel."""

    rho: StatePayload
    sigma: StatePayload
    channel: ChannelPayload
    povm: PovmPayload | None = None
    extras: dict[str, Any] = Field(default_factory=dict)


def encode_matrix(m: npt.ArrayLike) -> ComplexRows:
    a = np.asarray(m, dtype=np.complex128)
    return [[(float(z.real), float(z.imag)) for z in row] for row in a]


def decode_matrix(rows: ComplexRows) -> Matrix:
    data = np.asarray(rows, dtype=np.float64)
    if data.ndim != 3 or data.shape[-1] != 2:
        raise ShapeMismatch(f"matrix payload has shape {data.shape}, expected (rows, cols, 2)")
    return np.asarray(data[..., 0] + 1j * data[..., 1], dtype=np.complex128)


def state_to_payload(rho: DensityOperator) -> StatePayload:
    return StatePayload(
        dims=list(rho.shape.dims), labels=list(rho.shape.labels), matrix=encode_matrix(rho.matrix)
    )


def state_from_payload(payload: StatePayload) -> DensityOperator:
    shape = SubsystemShape(dims=tuple(payload.dims), labels=tuple(payload.labels))
    return DensityOperator.from_matrix(decode_matrix(payload.matrix), shape)


def channel_to_payload(channel: QuantumChannel) -> ChannelPayload:
    return ChannelPayload(
        d_in=channel.d_in, d_out=channel.d_out, kraus=[encode_matrix(k) for k in channel.kraus]
    )


def channel_from_payload(payload: ChannelPayload) -> QuantumChannel:
    channel = QuantumChannel.from_kraus(decode_matrix(k) for k in payload.kraus)
    if (channel.d_in, channel.d_out) != (payload.d_in, payload.d_out):
        raise ShapeMismatch(
            f"channel declares {payload.d_in}->{payload.d_out} "
            f"but Kraus operators are {channel.d_in}->{channel.d_out}"
        )
    return channel


def povm_to_payload(povm: Povm) -> PovmPayload:
    return PovmPayload(effects=[encode_matrix(e) for e in povm.effects])


def povm_from_payload(payload: PovmPayload) -> Povm:
    return Povm.from_effects(decode_matrix(e) for e in payload.effects)


def ensemble_to_payload(ensemble: Ensemble) -> EnsemblePayload:
    return EnsemblePayload(
        probs=[float(p) for p in ensemble.probs],
        states=[state_to_payload(s) for s in ensemble.states],
    )


def ensemble_from_payload(payload: EnsemblePayload) -> Ensemble:
    return Ensemble.of(payload.probs, [state_from_payload(s) for s in payload.states])


def read_json(path: Path) -> Any:
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ShapeMismatch(f"cannot read {path}") from exc
    except json.JSONDecodeError as exc:
        raise ShapeMismatch(f"{path} is not JSON: {exc.msg} at line {exc.lineno}") from exc


def load_state(path: Path) -> DensityOperator:
    try:
        payload = StatePayload.model_validate(read_json(path))
    except ValidationError as exc:
        raise ShapeMismatch(
            f"{path} is not a state payload: {exc.error_count()} validation errors"
        ) from exc
    return state_from_payload(payload)


def load_instance(path: Path) -> InstancePayload:
    try:
        return InstancePayload.model_validate(read_json(path))
    except ValidationError as exc:
        raise ShapeMismatch(
            f"{path} is not an instance payload: {exc.error_count()} validation errors"
        ) from exc


def dump_state(rho: DensityOperator, path: Path) -> None:
    path.write_text(state_to_payload(rho).model_dump_json(indent=2), encoding="utf-8")
