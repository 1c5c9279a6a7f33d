"""Recovery-based remainder terms and the proven unitary special cases."""

from __future__ import annotations

from collections.abc import Sequence
import math

import numpy as np
import numpy.typing as npt

from renyilab.channels import (
    Povm,
    apply,
    discord_eb_channel,
    holevo_eb_channel,
    measurement_channel,
    partial_trace_channel,
    petz_map,
    rank_one_dilation,
)
from renyilab.contracts.models import HolevoOutcome, JointConvexityOutcome
from renyilab.errors import InvalidOrder, ShapeMismatch
from renyilab.info import vn_cmi, vn_mutual_info, vn_relative_entropy
from renyilab.linalg import hermitize, matrix_power, sandwich
from renyilab.reldiff.differences import delta_alpha, delta_tilde_alpha, delta_vn
from renyilab.reldiff.instance import RelDiffInstance
from renyilab.states import DensityOperator, fidelity, flagged_state

UNITARY_TOL = 1e-10
ORDER_TOL = 1e-9


def monotonicity_remainder(inst: RelDiffInstance) -> float:
    """Delta(rho, sigma, N) + log F(rho, T(N(rho))) with T the Petz map of (sigma, N)."""
    recovered = petz_map(inst.sigma.matrix, inst.channel)(inst.n_rho)
    return delta_vn(inst) + math.log(fidelity(inst.rho.matrix, recovered))


def _sqrt_fidelity_sum(
    probs: npt.NDArray[np.float64],
    rhos: Sequence[DensityOperator],
    recovered: Sequence[npt.NDArray[np.complex128]],
) -> float:
    triples = zip(probs, rhos, recovered, strict=True)
    return float(sum(p * math.sqrt(fidelity(r.matrix, s)) for p, r, s in triples))


def joint_convexity_remainder(
    probs: npt.ArrayLike, rhos: Sequence[DensityOperator], sigmas: Sequence[DensityOperator]
) -> JointConvexityOutcome:
    """sum_x p D(rho_x||sigma_x) - D(rho||sigma) + 2 log sum_x p sqrt F(rho_x, sigma_x^1/2 sigma^-1/2 rho sigma^-1/2 sigma_x^1/2).

    ``flagged_margin`` is the monotonicity remainder of the flagged pair under Tr_X, which the
    margin must reproduce.
    """
    p = np.asarray(probs, dtype=np.float64)
    if not len(p) == len(rhos) == len(sigmas):
        raise ShapeMismatch("joint convexity needs one probability per (rho_x, sigma_x) pair")
    rho_bar = hermitize(sum(px * r.matrix for px, r in zip(p, rhos, strict=True)))
    sigma_bar = hermitize(sum(px * s.matrix for px, s in zip(p, sigmas, strict=True)))
    inner = sandwich(matrix_power(sigma_bar, -0.5), rho_bar)
    recovered = [sandwich(matrix_power(s.matrix, 0.5), inner) for s in sigmas]
    triples = zip(p, rhos, sigmas, strict=True)
    average_divergence = float(sum(px * vn_relative_entropy(r, s) for px, r, s in triples))
    recovery = 2.0 * math.log(_sqrt_fidelity_sum(p, rhos, recovered))
    margin = average_divergence - vn_relative_entropy(rho_bar, sigma_bar) + recovery
    rho_xb = flagged_state(p, rhos)
    sigma_xb = flagged_state(p, sigmas)
    flagged = RelDiffInstance(
        rho=rho_xb, sigma=sigma_xb, channel=partial_trace_channel(rho_xb.shape, ("X",))
    )
    return JointConvexityOutcome(margin=margin, flagged_margin=monotonicity_remainder(flagged))


def holevo_remainder(
    probs: npt.ArrayLike, states: Sequence[DensityOperator], povm: Povm
) -> HolevoOutcome:
    """I(X;B) - I(X;Y) + 2 log sum_x p sqrt F(rho_B^x, E_B(rho_B^x)) for a rank-one POVM on B.

    E_B measures with ``povm`` and prepares rho_B^1/2 |phi_y><phi_y| rho_B^1/2 / <phi_y|rho_B|phi_y>.
    """
    p = np.asarray(probs, dtype=np.float64)
    rho_xb = flagged_state(p, states)
    label = states[0].labels[0]
    mutual_xb = vn_mutual_info(rho_xb, "X", label)
    omega = apply(measurement_channel(povm), rho_xb, label, "Y")
    mutual_xy = vn_mutual_info(omega, "X", "Y")
    eb = holevo_eb_channel(rho_xb.marginal(label), povm)
    recovered = [eb(s.matrix) for s in states]
    margin = mutual_xb - mutual_xy + 2.0 * math.log(_sqrt_fidelity_sum(p, states, recovered))
    return HolevoOutcome(
        holevo_gap=mutual_xb - mutual_xy,
        margin=margin,
        mutual_info_xb=mutual_xb,
        mutual_info_xy=mutual_xy,
    )


def discord_remainder(rho: DensityOperator, povm: Povm, a: str = "A") -> float:
    """I(E;B|X) of the rank-one dilation + log F(rho_AB, (E_A (x) id)(rho_AB))."""
    rows = povm.rank_one_isometry()
    omega = rank_one_dilation(rows).apply(rho, a)
    rest = tuple(lab for lab in rho.labels if lab != a)
    cmi = vn_cmi(omega, "E", rest, "X")
    broken = apply(discord_eb_channel(rho, povm, a), rho, a)
    return cmi + math.log(fidelity(rho.matrix, broken.matrix))


def _is_unitary(inst: RelDiffInstance) -> bool:
    if inst.d_in != inst.d_out or len(inst.channel.kraus) != 1:
        return False
    u = inst.channel.kraus[0]
    return float(np.max(np.abs(u @ u.conj().T - np.eye(inst.d_out)))) <= UNITARY_TOL


def unitary_channel_exact_mono(
    inst: RelDiffInstance, alpha: float, beta: float, *, sandwiched: bool = False
) -> float:
    """Delta_beta - Delta_alpha for a unitary channel on the proven order pairs.

    Petz form needs alpha + beta = 2; the sandwiched form needs 1/alpha + 1/beta = 2.
    """
    if not _is_unitary(inst):
        raise ShapeMismatch("the exact monotonicity cases need a single unitary Kraus operator")
    if sandwiched:
        paired = abs(1.0 / alpha + 1.0 / beta - 2.0) <= ORDER_TOL
    else:
        paired = abs(alpha + beta - 2.0) <= ORDER_TOL
    if not paired or alpha > beta:
        raise InvalidOrder(f"orders ({alpha}, {beta}) are not a proven pair for this difference")
    fn = delta_tilde_alpha if sandwiched else delta_alpha
    return fn(inst, beta) - fn(inst, alpha)
