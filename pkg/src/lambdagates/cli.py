"""Command-line front end.

Three subcommands:

``simulate <config.json>``
    Run a named sweep scenario and write its CSV table.

``report``
    Design and score a single gate from command-line parameters and
    print a JSON report (including the resolved pulse constants).

``scenarios``
    List the available scenarios, or dump their default configurations
    as JSON templates.

Exit status: 0 on success, 1 when ``--strict`` is set and any sweep
point failed, 2 for configuration errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from .backend import backend_name
from .model import SystemParams
from .pulses import STRATEGIES
from .scenarios import (
    SCENARIOS,
    config_from_dict,
    config_to_dict,
    default_config,
    evaluate_gate,
    run_scenario,
)

__all__ = ["main", "gate_report"]


def gate_report(strategy, sigma, eps, lambda0=0.0, lambda1=0.0,
                phi=-math.pi / 2.0, *, eta=None, gamma=0.0, omega_s=0.0,
                steps=None, crosstalk=False, drive_scale=1.0):
    """Score one gate and return a plain dict (JSON friendly).

    ``eta`` switches to the locked-coupling parameterization, in which
    case ``lambda0``/``lambda1`` are derived rather than taken from the
    arguments.
    """
    from .dynamics import DEFAULT_STEPS

    common = dict(eps=eps, sigma=sigma, gamma=gamma, omega_s=omega_s)
    if eta is not None:
        params = SystemParams.dependent(eta, **common)
    else:
        params = SystemParams.independent(lambda0, lambda1, **common)
    n_steps = DEFAULT_STEPS if steps is None else int(steps)
    report, plan = evaluate_gate(params, strategy, phi, n_steps,
                                 crosstalk=crosstalk, drive_scale=drive_scale)
    out = {
        "strategy": strategy,
        "sigma_meV": params.sigma,
        "eps_meV": params.eps,
        "sigma_over_eps": params.sigma / params.eps,
        "eta_rad": eta,
        "lambda0": params.lambda0,
        "lambda1": params.lambda1,
        "gamma_meV": params.gamma,
        "omega_s_meV": params.omega_s,
        "phi_target_rad": phi,
        "steps": n_steps,
        "crosstalk": bool(crosstalk),
        "drive_scale": drive_scale,
        "t_g_per_meV": plan.t_g,
        "delta_meV": plan.delta,
        "delta_over_sigma": plan.delta / params.sigma,
        "drag_phase_rad": plan.drag_phase,
        "envelope_tail_fraction": plan.tail_fraction(),
        "fidelity": report.fidelity,
        "gate_error": report.gate_error,
        "unitarity_dev": report.unitarity_deviation,
        "leakage": report.leakage,
        "backend": backend_name(),
    }
    return out


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="lambdagates",
        description="Pulse design and simulation for ground-state qubit "
                    "gates in four-level Lambda systems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run a sweep scenario from a JSON config")
    p_sim.add_argument("config", help="path to a JSON sweep configuration")
    p_sim.add_argument("--output", default=None,
                       help="CSV output path (overrides the config)")
    p_sim.add_argument("--strict", action="store_true",
                       help="exit with status 1 if any sweep point failed")

    p_rep = sub.add_parser("report", help="score a single gate")
    p_rep.add_argument("--strategy", required=True, choices=STRATEGIES)
    p_rep.add_argument("--sigma", type=float, required=True,
                       help="pulse bandwidth in meV")
    p_rep.add_argument("--eps", type=float, required=True,
                       help="excited-state splitting in meV")
    p_rep.add_argument("--lambda0", type=float, default=0.0,
                       help="unwanted-transition coupling ratio, leg 0")
    p_rep.add_argument("--lambda1", type=float, default=0.0,
                       help="unwanted-transition coupling ratio, leg 1")
    p_rep.add_argument("--eta", type=float, default=None,
                       help="coupling mixing angle in rad (locked mode; "
                            "overrides --lambda0/--lambda1)")
    p_rep.add_argument("--phi", type=float, default=-math.pi / 2.0,
                       help="target rotation angle in rad")
    p_rep.add_argument("--gamma", type=float, default=0.0,
                       help="excited-state decay rate in meV")
    p_rep.add_argument("--omega-s", type=float, default=0.0,
                       help="ground-state splitting in meV (cross-talk)")
    p_rep.add_argument("--steps", type=int, default=None)
    p_rep.add_argument("--crosstalk", action="store_true",
                       help="propagate in the lab frame with both drive "
                            "legs on both transitions")
    p_rep.add_argument("--drive-scale", type=float, default=1.0)

    p_ls = sub.add_parser("scenarios", help="list available sweep scenarios")
    p_ls.add_argument("--json", action="store_true",
                      help="print default configurations as JSON")
    return parser


def _cmd_simulate(args):
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"error: config is not valid JSON: {exc}", file=sys.stderr)
        return 2
    try:
        config = config_from_dict(data)
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    result = run_scenario(config)
    out_path = args.output or config.output_csv or f"{config.scenario}.csv"
    result.write_csv(out_path)
    print(f"scenario {result.scenario}: {len(result.rows)} rows "
          f"({result.n_failed} failed) -> {out_path} [backend: {backend_name()}]")
    if args.strict and result.n_failed:
        return 1
    return 0


def _cmd_report(args):
    try:
        out = gate_report(
            args.strategy, args.sigma, args.eps,
            lambda0=args.lambda0, lambda1=args.lambda1, phi=args.phi,
            eta=args.eta, gamma=args.gamma, omega_s=args.omega_s,
            steps=args.steps, crosstalk=args.crosstalk,
            drive_scale=args.drive_scale,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(json.dumps(out, indent=2, sort_keys=True))
    return 0


def _cmd_scenarios(args):
    if args.json:
        dump = {name: config_to_dict(default_config(name)) for name in SCENARIOS}
        print(json.dumps(dump, indent=2, sort_keys=True))
        return 0
    width = max(len(name) for name in SCENARIOS)
    for name, spec in SCENARIOS.items():
        print(f"{name:<{width}}  {spec.description}")
    return 0


def main(argv=None):
    args = _build_parser().parse_args(argv)
    if args.command == "simulate":
        return _cmd_simulate(args)
    if args.command == "report":
        return _cmd_report(args)
    return _cmd_scenarios(args)


if __name__ == "__main__":
    sys.exit(main())
