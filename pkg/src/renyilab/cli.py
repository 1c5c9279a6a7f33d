"""CLI entrypoint for renyi-lab."""

from __future__ import annotations

from argparse import ArgumentParser, Namespace
import logging
from pathlib import Path
import sys
from typing import Any

from renyilab.contracts.models import (
    CampaignReport,
    CampaignSpec,
    EntropicValue,
    OptimizerConfig,
    canonical_json,
)
from renyilab.contracts.serialization import (
    InstancePayload,
    channel_from_payload,
    load_instance,
    load_state,
    povm_from_payload,
    state_from_payload,
)
from renyilab.contracts.types import (
    Branch,
    MeasureKind,
    OptimizerMethod,
    RemainderKind,
    SuiteVerdict,
)
from renyilab.errors import RenyiLabError, ShapeMismatch
from renyilab.gatekeeper import ToleranceConfig
from renyilab.info import RenyiOrder, renyi_cmi, renyi_cmi_petz, sandwiched_cmi, vn_cmi
from renyilab.measures import discord_mbpds, discord_renyi, eof_renyi, squashed_entanglement
from renyilab.observability.logging import configure_logging
from renyilab.observability.metrics import write_metrics
from renyilab.observability.telemetry import setup_tracing
from renyilab.orchestrator.campaigns import (
    CMI_MONO_ALPHAS,
    CONJECTURE1_ALPHAS,
    CONJECTURE2_ALPHAS,
    DEFAULT_DIMS,
    DUALITY_ALPHAS,
    REFINEMENT_ALPHAS,
    run_campaign,
)
from renyilab.orchestrator.recorder import write_csv, write_report
from renyilab.orchestrator.suite import run_property_suite
from renyilab.reldiff import (
    RelDiffInstance,
    delta_alpha,
    delta_tilde_alpha,
    delta_vn,
    discord_remainder,
    monotonicity_remainder,
    variance_v,
)
from renyilab.settings import get_settings

logger = logging.getLogger("renyilab.cli")

DEFAULT_ALPHAS = {
    "c1": CONJECTURE1_ALPHAS,
    "c2": CONJECTURE2_ALPHAS,
    "delta-mono": CONJECTURE2_ALPHAS,
    "cmi-mono": CMI_MONO_ALPHAS,
    "remainder": (),
    "refinement": REFINEMENT_ALPHAS,
    "duality": DUALITY_ALPHAS,
    "lemmas": DUALITY_ALPHAS,
}
DEFAULT_TRIALS = {"c1": 1000, "c2": 1000, "delta-mono": 1000, "remainder": 500, "duality": 500}


def _build_parser() -> ArgumentParser:
    parser = ArgumentParser(
        prog="renyi-lab", description="Rényi correlation measures and conjecture campaigns."
    )
    parser.add_argument("--log-level", default="INFO", help="Logging level.")
    parser.add_argument(
        "--metrics-out", type=Path, default=None, help="Write Prometheus text metrics here."
    )
    parser.add_argument(
        "--trace", action="store_true", help="Export OpenTelemetry spans to the console."
    )
    commands = parser.add_subparsers(dest="command", required=True)

    conjecture = commands.add_parser("conjecture", help="Run a randomized campaign.")
    conjecture.add_argument("campaign", choices=sorted(DEFAULT_ALPHAS))
    conjecture.add_argument("--dims", type=int, nargs="+", default=list(DEFAULT_DIMS))
    conjecture.add_argument("--alpha-grid", type=float, nargs="+", default=None)
    conjecture.add_argument("--beta-grid", type=float, nargs="+", default=[])
    conjecture.add_argument("--trials", type=int, default=None)
    conjecture.add_argument("--seed", type=int, default=0)
    conjecture.add_argument("--reject-eps", type=float, default=None)
    conjecture.add_argument(
        "--kind",
        choices=[k.value for k in RemainderKind],
        default=RemainderKind.MONOTONICITY.value,
    )
    conjecture.add_argument(
        "--variants", nargs="+", choices=["petz", "sandwiched"], default=["petz", "sandwiched"]
    )
    conjecture.add_argument("--workers", type=int, default=None)
    conjecture.add_argument("--out", type=Path, default=None)
    conjecture.add_argument("--csv", type=Path, default=None)

    measure = commands.add_parser("measure", help="Optimize a correlation measure for a state.")
    measure.add_argument("measure", choices=[k.value for k in MeasureKind])
    measure.add_argument("--in", dest="input", type=Path, required=True, help="State JSON.")
    measure.add_argument("--alpha", type=float, required=True)
    measure.add_argument("--ext-dim", type=int, default=None)
    measure.add_argument("--n-outcomes", type=int, default=None)
    measure.add_argument("--n-terms", type=int, default=None)
    measure.add_argument("--restarts", type=int, default=16)
    measure.add_argument("--max-iters", type=int, default=20000)
    measure.add_argument("--tol", type=float, default=1e-7)
    measure.add_argument(
        "--method",
        choices=[m.value for m in OptimizerMethod],
        default=OptimizerMethod.NELDER_MEAD.value,
    )
    measure.add_argument("--seed", type=int, default=0)
    measure.add_argument("--workers", type=int, default=1)
    measure.add_argument("--strict", action="store_true")
    measure.add_argument("--out", type=Path, default=None)

    verify = commands.add_parser("verify", help="Run the property suite.")
    verify.add_argument("target", choices=["suite"])
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--tolerances", type=Path, default=None)
    verify.add_argument("--tolerance-scale", type=float, default=1.0)
    verify.add_argument(
        "--scale", type=float, default=1.0, help="Multiplier on configured trial counts."
    )
    verify.add_argument("--only", nargs="+", default=None)
    verify.add_argument("--out", type=Path, default=None)

    evaluate = commands.add_parser("eval", help="Evaluate one quantity on serialized inputs.")
    evaluate.add_argument("quantity", choices=["dalpha", "cmi", "delta", "remainder"])
    evaluate.add_argument("--in", dest="input", type=Path, required=True)
    evaluate.add_argument("--alpha", type=float, default=1.0)
    evaluate.add_argument("--labels", nargs=3, default=["A", "B", "C"], metavar=("A", "B", "C"))
    return parser


def _emit(payload: Any, out: Path | None) -> None:
    text = canonical_json(payload)
    if out is None:
        print(text)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text + "\n", encoding="utf-8")


def _run_conjecture(args: Namespace) -> int:
    name = args.campaign
    options: dict[str, Any] = {}
    if args.reject_eps is not None:
        options["reject_eps"] = args.reject_eps
    if name == "remainder":
        options["kind"] = args.kind
    if name in ("c2", "delta-mono"):
        options["variants"] = args.variants
    spec = CampaignSpec(
        name=name,
        seed=args.seed,
        trials=args.trials or DEFAULT_TRIALS.get(name, 100),
        dims=args.dims,
        alpha_grid=list(args.alpha_grid if args.alpha_grid is not None else DEFAULT_ALPHAS[name]),
        beta_grid=args.beta_grid,
        options=options,
        violation_threshold=get_settings().violation_threshold,
    )
    report: CampaignReport = run_campaign(spec, workers=args.workers)
    if args.out is not None:
        write_report(report, args.out)
    else:
        print(canonical_json(report.aggregate.model_dump(mode="json")))
    if args.csv is not None:
        write_csv(report, args.csv)
    return 0


def _run_measure(args: Namespace) -> int:
    rho = load_state(args.input)
    cfg = OptimizerConfig(
        restarts=args.restarts,
        max_iters=args.max_iters,
        tol=args.tol,
        method=OptimizerMethod(args.method),
        seed=args.seed,
        workers=args.workers,
        strict=args.strict,
    )
    kind = MeasureKind(args.measure)
    if kind is MeasureKind.SQUASHED:
        result = squashed_entanglement(rho, args.alpha, args.ext_dim, cfg)
    elif kind is MeasureKind.DISCORD:
        result = discord_renyi(rho, args.alpha, args.n_outcomes, cfg)
    elif kind is MeasureKind.DISCORD_MBPDS:
        result = discord_mbpds(rho, args.alpha, cfg, n_outcomes=args.n_outcomes)
    else:
        result = eof_renyi(rho, args.alpha, args.n_terms, cfg)
    _emit(result.model_dump(mode="json"), args.out)
    return 0


def _run_verify(args: Namespace) -> int:
    policy = ToleranceConfig.load(args.tolerances) if args.tolerances else None
    report = run_property_suite(
        args.seed,
        policy=policy,
        scale=args.scale,
        tolerance_scale=args.tolerance_scale,
        only=args.only,
    )
    if args.out is not None:
        write_report(report, args.out)
    print(canonical_json(report.decision.model_dump(mode="json")))
    return 1 if report.decision.verdict is SuiteVerdict.FAIL else 0


def _instance(payload: InstancePayload) -> RelDiffInstance:
    return RelDiffInstance(
        rho=state_from_payload(payload.rho),
        sigma=state_from_payload(payload.sigma),
        channel=channel_from_payload(payload.channel),
    )


def _entropic(value: float, alpha: float = 1.0) -> dict[str, Any]:
    order = RenyiOrder.parse(alpha)
    branch = Branch.VON_NEUMANN_LIMIT if order.is_von_neumann else Branch.CLOSED_FORM
    record = EntropicValue(value=value, alpha=order.alpha, regime=order.regime, branch=branch)
    return record.model_dump()


def _run_eval(args: Namespace) -> int:
    alpha = args.alpha
    values: dict[str, dict[str, Any]]
    if args.quantity == "cmi":
        rho = load_state(args.input)
        a, b, c = args.labels
        values = {
            "renyi_cmi": _entropic(renyi_cmi(rho, alpha, a, b, c), alpha),
            "renyi_cmi_petz": _entropic(renyi_cmi_petz(rho, alpha, a, b, c), alpha),
            "sandwiched_cmi": _entropic(sandwiched_cmi(rho, alpha, a, b, c), alpha),
            "vn_cmi": _entropic(vn_cmi(rho, a, b, c)),
        }
    else:
        payload = load_instance(args.input)
        if args.quantity == "remainder" and payload.povm is not None:
            # a POVM in the payload selects the discord remainder of rho
            rho = state_from_payload(payload.rho)
            povm = povm_from_payload(payload.povm)
            values = {"discord_remainder": _entropic(discord_remainder(rho, povm))}
        else:
            inst = _instance(payload)
            if args.quantity == "dalpha":
                values = {
                    "delta_alpha": _entropic(delta_alpha(inst, alpha), alpha),
                    "delta_tilde_alpha": _entropic(delta_tilde_alpha(inst, alpha), alpha),
                }
            elif args.quantity == "delta":
                values = {
                    "delta": _entropic(delta_vn(inst)),
                    "variance": _entropic(variance_v(inst)),
                }
            elif args.quantity == "remainder":
                values = {"monotonicity_remainder": _entropic(monotonicity_remainder(inst))}
            else:
                raise ShapeMismatch(f"unknown quantity {args.quantity}")
    _emit({"quantity": args.quantity, "alpha": alpha, "values": values}, None)
    return 0


HANDLERS = {
    "conjecture": _run_conjecture,
    "measure": _run_measure,
    "verify": _run_verify,
    "eval": _run_eval,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    configure_logging(args.log_level.upper())
    if args.trace:
        setup_tracing("renyi-lab")
    try:
        code = HANDLERS[args.command](args)
    except RenyiLabError as exc:
        detail = {"command": args.command, "error": type(exc).__name__, "detail": str(exc)}
        logger.error("cli.failed", extra={"extra": detail})
        code = 2
    if args.metrics_out is not None:
        write_metrics(args.metrics_out)
    return code


if __name__ == "__main__":
    sys.exit(main())
