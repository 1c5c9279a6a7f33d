"""Derivative-free minimization over isometries with restarts.

Isometries are parameterized by an unconstrained complex matrix M mapped to
the Stiefel manifold by the polar retraction M (M^dagger M)^(-1/2).
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
import logging
import math
from typing import Protocol

import numpy as np
import numpy.typing as npt
from scipy import optimize

from renyilab.contracts.models import OptimizerConfig
from renyilab.contracts.types import OptimizerMethod
from renyilab.errors import OptimizerBudgetExceeded, ShapeMismatch
from renyilab.linalg import Matrix
from renyilab.observability.metrics import OBJECTIVE_EVALUATIONS
from renyilab.observability.telemetry import set_attributes, traced
from renyilab.orchestrator.pool import WorkQueue
from renyilab.states import make_rng, random_isometry

logger = logging.getLogger(__name__)


class IsometryObjective(Protocol):
    """Real-valued function of an isometry."""

    def __call__(self, v: Matrix, /) -> float: ...


Params = npt.NDArray[np.float64]

MAX_ROUNDS = 4


def polar_retraction(m: npt.ArrayLike) -> Matrix:
    """Closest isometry to ``m`` in Frobenius norm, U V^dagger from the thin SVD."""
    a = np.asarray(m, dtype=np.complex128)
    u, _, vh = np.linalg.svd(a, full_matrices=False)
    return np.asarray(u @ vh, dtype=np.complex128)


def isometry_to_params(v: npt.ArrayLike) -> Params:
    a = np.asarray(v, dtype=np.complex128)
    return np.concatenate([a.real.reshape(-1), a.imag.reshape(-1)])


def params_to_isometry(x: Params, d_out: int, d_in: int) -> Matrix:
    n = d_out * d_in
    if x.shape != (2 * n,):
        raise ShapeMismatch(
            f"expected {2 * n} parameters for a {d_out}x{d_in} isometry, got {x.shape}"
        )
    return polar_retraction((x[:n] + 1j * x[n:]).reshape(d_out, d_in))


@dataclass(slots=True)
class OptimizationOutcome:
    value: float
    isometry: Matrix
    converged: bool
    evaluations: int
    restart_index: int


@dataclass(slots=True)
class _CountingObjective:
    """Objective on raw parameters that remembers the best point it has seen."""

    objective: IsometryObjective
    d_out: int
    d_in: int
    evaluations: int = 0
    best_value: float = math.inf
    best_point: Matrix | None = None

    def __call__(self, x: Params) -> float:
        v = params_to_isometry(x, self.d_out, self.d_in)
        value = float(self.objective(v))
        self.evaluations += 1
        if not math.isfinite(value):
            return 1e300
        if value < self.best_value:
            self.best_value = value
            self.best_point = v
        return value


def _nelder_mead(f: _CountingObjective, x0: Params, cfg: OptimizerConfig) -> bool:
    result = optimize.minimize(
        f,
        x0,
        method="Nelder-Mead",
        options={"maxfev": cfg.max_iters, "xatol": cfg.tol, "fatol": cfg.tol, "adaptive": True},
    )
    return bool(result.success)


def _polar_descent(f: _CountingObjective, x0: Params, cfg: OptimizerConfig) -> bool:
    """L-BFGS-B rounds with finite-difference gradients, re-retracting between rounds."""
    x = x0
    converged = False
    for _ in range(MAX_ROUNDS):
        budget = cfg.max_iters - f.evaluations
        if budget <= 0:
            return False
        before = f.best_value
        result = optimize.minimize(
            f, x, method="L-BFGS-B", options={"maxfun": budget, "ftol": cfg.tol, "gtol": cfg.tol}
        )
        converged = bool(result.success)
        x = isometry_to_params(params_to_isometry(np.asarray(result.x), f.d_out, f.d_in))
        if before - f.best_value <= cfg.tol:
            break
    return converged


def _random_search(
    f: _CountingObjective, x0: Params, cfg: OptimizerConfig, rng: np.random.Generator
) -> bool:
    """(1+1) evolution strategy with a success-driven step size."""
    x, fx = x0, f(x0)
    step = 0.5
    while f.evaluations < cfg.max_iters:
        if step < cfg.tol:
            return True
        candidate = x + step * rng.standard_normal(x.shape)
        fc = f(candidate)
        if fc < fx:
            x, fx = candidate, fc
            step *= 1.5
        else:
            step *= 0.9
    return False


def _run_restart(
    objective: IsometryObjective,
    start: Matrix,
    d_out: int,
    d_in: int,
    cfg: OptimizerConfig,
    index: int,
) -> OptimizationOutcome:
    f = _CountingObjective(objective=objective, d_out=d_out, d_in=d_in)
    x0 = isometry_to_params(start)
    f(x0)
    if cfg.method is OptimizerMethod.NELDER_MEAD:
        converged = _nelder_mead(f, x0, cfg)
    elif cfg.method is OptimizerMethod.POLAR_RETRACTION_DESCENT:
        converged = _polar_descent(f, x0, cfg)
    else:
        converged = _random_search(f, x0, cfg, make_rng(cfg.seed, index, 1))
    assert f.best_point is not None
    logger.debug(
        "optimizer.restart.finished",
        extra={
            "extra": {
                "restart": index,
                "value": f.best_value,
                "evaluations": f.evaluations,
                "converged": converged,
            }
        },
    )
    return OptimizationOutcome(
        value=f.best_value,
        isometry=f.best_point,
        converged=converged,
        evaluations=f.evaluations,
        restart_index=index,
    )


def minimize_over_isometries(
    objective: IsometryObjective,
    d_out: int,
    d_in: int,
    cfg: OptimizerConfig,
    warm_starts: Sequence[Matrix] = (),
    label: str = "isometry",
) -> OptimizationOutcome:
    """Minimize ``objective`` over d_out x d_in isometries.

    Warm starts take the first restart slots; the remaining restarts draw Haar
    isometries from stream ``(cfg.seed, restart)``. The best restart wins, ties
    going to the lower restart index. The returned evaluation count covers all
    restarts.
    """
    if d_out < d_in:
        raise ShapeMismatch(f"no isometry from dimension {d_in} into {d_out}")
    starts = [polar_retraction(w) for w in warm_starts]
    for w in starts:
        if w.shape != (d_out, d_in):
            raise ShapeMismatch(f"warm start has shape {w.shape}, expected {(d_out, d_in)}")
    total = max(cfg.restarts, len(starts))

    def restart(index: int) -> OptimizationOutcome:
        if index < len(starts):
            start = starts[index]
        else:
            start = random_isometry(d_out, d_in, make_rng(cfg.seed, index))
        return _run_restart(objective, start, d_out, d_in, cfg, index)

    with traced(f"measure.{label}", restarts=total, method=cfg.method, workers=cfg.workers) as span:
        outcomes = WorkQueue(workers=cfg.workers, name=f"optimizer-{label}").map(restart, total)
        best = min(outcomes, key=lambda o: (o.value, o.restart_index))
        evaluations = sum(o.evaluations for o in outcomes)
        attributes = {"value": best.value, "converged": best.converged, "evaluations": evaluations}
        set_attributes(span, attributes)
    OBJECTIVE_EVALUATIONS.labels(measure=label).inc(evaluations)
    if not best.converged:
        logger.warning(
            "optimizer.budget_exceeded",
            extra={"extra": {"measure": label, "value": best.value, "evaluations": evaluations}},
        )
        if cfg.strict:
            raise OptimizerBudgetExceeded(
                f"{label}: best restart did not converge within {cfg.max_iters} evaluations "
                f"(value {best.value:.3e})"
            )
    return OptimizationOutcome(
        value=best.value,
        isometry=best.isometry,
        converged=best.converged,
        evaluations=evaluations,
        restart_index=best.restart_index,
    )
