"""Named sweep scenarios and the single-gate evaluation they share.

A scenario is a fully specified parameter sweep producing one CSV table.
Scenario names are stable identifiers (they are the CLI contract), each
covering one slice of the gate-performance story: the uncorrected
baseline, the exact-detuning construction, the derivative correction,
spontaneous emission, drive cross-talk, and level-population histories.

Determinism is a hard requirement here: grid points are enumerated in a
fixed order, evaluated (possibly by a worker pool) and emitted in that
same order, and all numbers are formatted with 12 significant digits, so
identical configurations produce byte-identical files.
"""

from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .dynamics import (
    DEFAULT_HISTORY_STRIDE,
    DEFAULT_STEPS,
    TimeGrid,
    propagate_lindblad,
    propagate_unitary,
)
from .metrics import (
    GateReport,
    average_gate_fidelity,
    gate_improvement,
    ideal_phase_for_rotation,
    leakage_of,
    projected_unitarity_deviation,
    unitary_channel,
)
from .model import (
    SystemParams,
    cpt_transform,
    dependent_couplings,
    h_cpt,
    h_crosstalk,
    lindblad_generators,
)
from .pulses import build_pulse_plan

__all__ = [
    "CSV_COLUMNS",
    "SweepConfig",
    "SweepResult",
    "ScenarioSpec",
    "SCENARIOS",
    "config_from_dict",
    "config_to_dict",
    "default_config",
    "evaluate_gate",
    "run_scenario",
    "worker_count",
]

CSV_COLUMNS = (
    "scenario",
    "strategy",
    "sigma_over_eps",
    "eta",
    "lambda0",
    "lambda1",
    "gamma_over_eps",
    "omega_s_over_eps",
    "phi_target",
    "fidelity",
    "gate_error",
    "unitarity_dev",
    "leakage",
    "improvement",
    "status",
)

POPULATION_COLUMNS = ("t", "p_D", "p_B", "p_t", "p_u")

WORKERS_ENV = "LAMBDAGATES_WORKERS"


# ---------------------------------------------------------------------------
# configuration

@dataclass(frozen=True)
class SweepConfig:
    """Resolved sweep configuration (all grids as tuples, all units fixed).

    Energies are in meV; ``eta`` and ``phi_target`` in radians. Exactly
    one of the bandwidth conventions applies per scenario: either sigma
    is held at ``sigma_mev`` and eps follows the ratio grid, or (decay
    sweeps) eps is held at ``eps_mev`` and sigma follows it.
    """

    scenario: str
    sigma_mev: float = 0.02
    eps_mev: Optional[float] = None
    sigma_over_eps: Tuple[float, ...] = (0.5,)
    eta: Tuple[float, ...] = ()
    lambda_pairs: Tuple[Tuple[float, float], ...] = ()
    gamma_over_eps: Tuple[float, ...] = (0.0,)
    omega_s_over_eps: Tuple[float, ...] = (0.0,)
    phi_target: Tuple[float, ...] = (-math.pi / 2.0,)
    steps: int = DEFAULT_STEPS
    output_csv: Optional[str] = None
    kappa01: float = 1.0
    kappa10: float = 1.0
    strategy: str = "exact"  # population histories only
    history_stride: int = DEFAULT_HISTORY_STRIDE

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ValueError(
                f"unknown scenario {self.scenario!r}; available: "
                f"{', '.join(SCENARIOS)}"
            )
        if not self.sigma_over_eps:
            raise ValueError("sigma_over_eps grid must be non-empty")
        if not self.eta and not self.lambda_pairs:
            raise ValueError("need at least one coupling spec (eta or lambda_pairs)")
        for r in self.sigma_over_eps:
            if r <= 0:
                raise ValueError(f"sigma_over_eps entries must be positive, got {r}")
        for r in self.gamma_over_eps + self.omega_s_over_eps:
            if r < 0:
                raise ValueError(f"rate ratios must be nonnegative, got {r}")
        if self.steps < 1:
            raise ValueError(f"steps must be >= 1, got {self.steps}")


_CONFIG_KEYS = {
    "scenario": "scenario",
    "sigma_meV": "sigma_mev",
    "eps_meV": "eps_mev",
    "sigma_over_eps": "sigma_over_eps",
    "eta_rad": "eta",
    "lambda_pairs": "lambda_pairs",
    "gamma_over_eps": "gamma_over_eps",
    "omega_s_over_eps": "omega_s_over_eps",
    "phi_target_rad": "phi_target",
    "steps": "steps",
    "output_csv": "output_csv",
    "kappa01": "kappa01",
    "kappa10": "kappa10",
    "strategy": "strategy",
    "history_stride": "history_stride",
}


def _as_tuple(v):
    if isinstance(v, (list, tuple, np.ndarray)):
        return tuple(float(x) for x in v)
    return (float(v),)


def config_from_dict(data):
    """Build a :class:`SweepConfig` from a parsed JSON mapping.

    Keys carry explicit unit suffixes (``sigma_meV``, ``eta_rad``,
    ``phi_target_rad``); dimensionless ratios are plain. Scalars are
    accepted wherever a grid is expected. Unknown keys are rejected so a
    typo cannot silently drop a grid axis. Grid axes the caller omits
    fall back to the scenario's defaults.
    """
    if "scenario" not in data:
        raise ValueError("config must name a scenario")
    unknown = sorted(set(data) - set(_CONFIG_KEYS))
    if unknown:
        raise ValueError(
            f"unknown config keys: {', '.join(unknown)}; "
            f"expected a subset of {', '.join(sorted(_CONFIG_KEYS))}"
        )
    base = default_config(str(data["scenario"]))
    updates = {}
    for json_key, attr in _CONFIG_KEYS.items():
        if json_key not in data or json_key == "scenario":
            continue
        v = data[json_key]
        if attr in ("sigma_over_eps", "eta", "gamma_over_eps",
                    "omega_s_over_eps", "phi_target"):
            updates[attr] = _as_tuple(v)
        elif attr == "lambda_pairs":
            pairs = []
            for pair in v:
                if len(pair) != 2:
                    raise ValueError(f"lambda_pairs entries must be pairs, got {pair!r}")
                pairs.append((float(pair[0]), float(pair[1])))
            updates[attr] = tuple(pairs)
        elif attr in ("steps", "history_stride"):
            updates[attr] = int(v)
        elif attr in ("output_csv", "strategy"):
            updates[attr] = str(v)
        elif attr == "eps_mev":
            updates[attr] = None if v is None else float(v)
        else:
            updates[attr] = float(v)
    return replace(base, **updates)


# ---------------------------------------------------------------------------
# single-gate evaluation

def config_to_dict(config):
    """Inverse of :func:`config_from_dict`, for writing config templates."""
    out = {}
    for json_key, attr in _CONFIG_KEYS.items():
        value = getattr(config, attr)
        if isinstance(value, tuple):
            value = [list(v) if isinstance(v, tuple) else v for v in value]
        out[json_key] = value
    return out


def _build_params(task):
    common = dict(
        eps=task.eps, sigma=task.sigma, t_g=task.t_g, gamma=task.gamma,
        omega_s=task.omega_s, kappa01=task.kappa01, kappa10=task.kappa10,
    )
    if task.coupling_mode == "dependent":
        return SystemParams.dependent(task.eta, **common)
    return SystemParams.independent(task.lambda0, task.lambda1, **common)


def evaluate_gate(params, strategy, phi_target, steps=DEFAULT_STEPS, *,
                  crosstalk=False, drive_scale=1.0):
    """Design, propagate and score one gate.

    The drive is resolved via :func:`lambdagates.pulses.build_pulse_plan`
    and propagated in the dressed static frame (or, with ``crosstalk``,
    in the lab frame and conjugated back afterwards: the dressing map is
    time independent so the comparison frame is well defined). With
    ``params.gamma > 0`` the six cardinal inputs go through the master
    equation for fidelity and leakage, while unitarity deviation is read
    from the matching coherent propagation, where it isolates population
    loss from the qubit subspace rather than emission.

    Returns ``(report, plan)``.
    """
    plan = build_pulse_plan(params, strategy, phi_target)
    if drive_scale != 1.0:
        plan = plan.with_drive_scale(drive_scale)
    grid = TimeGrid(t_end=params.t_g, steps=steps)
    V = cpt_transform(plan.theta_cpt, plan.alpha_cpt)
    Vd = V.conj().T

    if crosstalk:
        def h(t):
            return h_crosstalk(params, plan, t)
    else:
        def h(t):
            return h_cpt(params, plan, t)

    U = propagate_unitary(h, grid).final_operator
    U_dressed = V @ U @ Vd if crosstalk else U
    phi_ideal = ideal_phase_for_rotation(phi_target)

    if params.gamma > 0.0:
        lops = lindblad_generators(params.gamma)
        if not crosstalk:
            lops = [V @ L @ Vd for L in lops]

        def channel(rho):
            rho_in = Vd @ rho @ V if crosstalk else rho
            out = propagate_lindblad(h, lops, rho_in, grid).final_rho
            return V @ out @ Vd if crosstalk else out
    else:
        channel = unitary_channel(U_dressed)

    fidelity = average_gate_fidelity(channel, phi_ideal)
    report = GateReport(
        fidelity=fidelity,
        gate_error=1.0 - fidelity,
        unitarity_deviation=projected_unitarity_deviation(U_dressed),
        leakage=leakage_of(channel),
        phi_target=phi_target,
        strategy=strategy,
    )
    return report, plan


# ---------------------------------------------------------------------------
# sweep machinery

@dataclass(frozen=True)
class _PointTask:
    scenario: str
    strategy: str
    coupling_mode: str
    eta: Optional[float]
    lambda0: float
    lambda1: float
    sigma: float
    eps: float
    t_g: float
    gamma: float
    omega_s: float
    kappa01: float
    kappa10: float
    phi_target: float
    steps: int
    crosstalk: bool
    drive_scale: float
    sigma_over_eps: float
    gamma_over_eps: float
    omega_s_over_eps: float
    point_key: Tuple[int, ...]


def _evaluate_task(task):
    # Per-point failures become flagged rows; the sweep always finishes.
    try:
        params = _build_params(task)
        report, _plan = evaluate_gate(
            params, task.strategy, task.phi_target, task.steps,
            crosstalk=task.crosstalk, drive_scale=task.drive_scale,
        )
        return {
            "fidelity": report.fidelity,
            "gate_error": report.gate_error,
            "unitarity_dev": report.unitarity_deviation,
            "leakage": report.leakage,
            "status": "ok",
        }
    except Exception as exc:  # noqa: BLE001 - failures are data here
        reason = str(exc).replace("\n", " ")
        return {"status": f"failed: {type(exc).__name__}: {reason}"}


@dataclass(frozen=True)
class ScenarioSpec:
    name: str
    description: str
    corrected: bool
    crosstalk: bool = False
    eps_fixed: bool = False
    corrected_drive_scale: float = 1.0
    populations: bool = False
    defaults: Callable[[], "SweepConfig"] = field(default=None, repr=False)


def _coupling_axis(config):
    axis = []
    for eta in config.eta:
        l0, l1 = dependent_couplings(eta)
        axis.append(("dependent", eta, l0, l1))
    for l0, l1 in config.lambda_pairs:
        axis.append(("independent", None, float(l0), float(l1)))
    return axis


def _make_tasks(config, spec):
    """Enumerate the sweep grid in its fixed emission order.

    Order: coupling spec, then phi, gamma ratio, cross-talk ratio, and
    bandwidth ratio, with the baseline strategy immediately before the
    corrected one at each point (so improvement pairing is a single
    forward pass).
    """
    tasks = []
    couplings = _coupling_axis(config)
    for ic, (mode, eta, l0, l1) in enumerate(couplings):
        corrected_strategy = "exact" if mode == "dependent" else "drag"
        strategies = [("uncorrected", 1.0)]
        if spec.corrected:
            strategies.append((corrected_strategy, spec.corrected_drive_scale))
        for ip, phi in enumerate(config.phi_target):
            for ig, gr in enumerate(config.gamma_over_eps):
                for io, orr in enumerate(config.omega_s_over_eps):
                    for ir, ratio in enumerate(config.sigma_over_eps):
                        if spec.eps_fixed:
                            if config.eps_mev is None:
                                raise ValueError(
                                    f"scenario {spec.name} needs eps_meV"
                                )
                            eps = config.eps_mev
                            sigma = ratio * eps
                        else:
                            sigma = config.sigma_mev
                            eps = sigma / ratio
                        key = (ic, ip, ig, io, ir)
                        for strategy, scale in strategies:
                            tasks.append(_PointTask(
                                scenario=config.scenario,
                                strategy=strategy,
                                coupling_mode=mode,
                                eta=eta,
                                lambda0=l0,
                                lambda1=l1,
                                sigma=sigma,
                                eps=eps,
                                t_g=16.0 / sigma,
                                gamma=gr * eps,
                                omega_s=orr * eps,
                                kappa01=config.kappa01,
                                kappa10=config.kappa10,
                                phi_target=phi,
                                steps=config.steps,
                                crosstalk=spec.crosstalk,
                                drive_scale=scale,
                                sigma_over_eps=ratio,
                                gamma_over_eps=gr,
                                omega_s_over_eps=orr,
                                point_key=key,
                            ))
    return tasks


def worker_count(n_tasks):
    """Worker pool size: serial unless the environment raises the cap."""
    raw = os.environ.get(WORKERS_ENV, "")
    if not raw:
        return 1
    try:
        cap = int(raw)
    except ValueError as exc:
        raise ValueError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from exc
    return max(1, min(cap, n_tasks))


def _fmt(value):
    if value is None or value == "":
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.12g}"


@dataclass
class SweepResult:
    scenario: str
    columns: Tuple[str, ...]
    rows: list
    n_failed: int = 0

    def to_csv_text(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_fmt(v) for v in row])
        return buf.getvalue()

    def write_csv(self, path):
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(self.to_csv_text())


def _run_population_history(config):
    mode, eta, l0, l1 = _coupling_axis(config)[0]
    ratio = config.sigma_over_eps[0]
    sigma = config.sigma_mev
    eps = sigma / ratio
    gamma = config.gamma_over_eps[0] * eps
    kwargs = dict(eps=eps, sigma=sigma, t_g=16.0 / sigma, gamma=gamma)
    if mode == "dependent":
        params = SystemParams.dependent(eta, **kwargs)
    else:
        params = SystemParams.independent(l0, l1, **kwargs)
    plan = build_pulse_plan(params, config.strategy, config.phi_target[0])
    grid = TimeGrid(t_end=params.t_g, steps=config.steps)

    def h(t):
        return h_cpt(params, plan, t)

    # Start in the bare |0> state: an equal dark/bright superposition.
    psi0 = np.array([1.0, 1.0, 0.0, 0.0], dtype=np.complex128) / math.sqrt(2.0)
    if gamma > 0.0:
        V = cpt_transform(plan.theta_cpt, plan.alpha_cpt)
        lops = [V @ L @ V.conj().T for L in lindblad_generators(gamma)]
        res = propagate_lindblad(h, lops, np.outer(psi0, psi0.conj()), grid,
                                 history_stride=config.history_stride)
    else:
        res = propagate_unitary(h, grid, psi0=psi0,
                                history_stride=config.history_stride)
    rows = [tuple(r) for r in np.column_stack([res.times, res.populations])]
    return SweepResult(scenario=config.scenario,
                       columns=POPULATION_COLUMNS, rows=rows)


def run_scenario(config):
    """Execute a sweep and return its table (no file I/O here).

    Rows appear in grid-enumeration order regardless of worker
    scheduling. Corrected rows carry the improvement ratio against the
    baseline at the same grid point; point failures are emitted as rows
    whose status column explains what went wrong.
    """
    spec = SCENARIOS[config.scenario]
    if spec.populations:
        return _run_population_history(config)

    tasks = _make_tasks(config, spec)
    n_workers = worker_count(len(tasks))
    if n_workers > 1:
        chunk = max(1, len(tasks) // (4 * n_workers))
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            outcomes = list(pool.map(_evaluate_task, tasks, chunksize=chunk))
    else:
        outcomes = [_evaluate_task(t) for t in tasks]

    rows = []
    n_failed = 0
    baseline_errors = {}
    for task, out in zip(tasks, outcomes):
        status = out["status"]
        ok = status == "ok"
        if not ok:
            n_failed += 1
        if ok and task.strategy == "uncorrected":
            baseline_errors[task.point_key] = out["gate_error"]

        improvement = None
        if ok and task.strategy != "uncorrected":
            base_err = baseline_errors.get(task.point_key)
            if base_err is not None:
                imp = gate_improvement(base_err, out["gate_error"])
                improvement = imp.ratio
                if imp.clipped:
                    status = "improvement_clipped"

        rows.append((
            task.scenario,
            task.strategy,
            task.sigma_over_eps,
            task.eta,
            task.lambda0,
            task.lambda1,
            task.gamma_over_eps,
            task.omega_s_over_eps,
            task.phi_target,
            out.get("fidelity"),
            out.get("gate_error"),
            out.get("unitarity_dev"),
            out.get("leakage"),
            improvement,
            status,
        ))
    return SweepResult(scenario=config.scenario, columns=CSV_COLUMNS,
                       rows=rows, n_failed=n_failed)


# ---------------------------------------------------------------------------
# scenario registry

_PI = math.pi


def _ratios(lo, hi, n):
    return tuple(float(r) for r in np.geomspace(lo, hi, n))


def _cfg_baseline():
    return SweepConfig(
        scenario="baseline_fig2",
        sigma_over_eps=_ratios(0.01, 1.0, 25),
        eta=(_PI / 4.0,),
        lambda_pairs=((1.0, 1.0),),
        phi_target=(-_PI / 2.0,),
        output_csv="baseline_fig2.csv",
    )


def _cfg_exact():
    return SweepConfig(
        scenario="exact_fig4",
        sigma_over_eps=_ratios(0.01, 1.0, 25),
        eta=(_PI / 4.0,),
        phi_target=(-_PI / 2.0, -_PI),
        output_csv="exact_fig4.csv",
    )


def _cfg_exact_improvement():
    return SweepConfig(
        scenario="exact_improvement_fig5",
        sigma_over_eps=_ratios(0.05, 1.0, 10),
        eta=tuple(float(e) for e in np.linspace(_PI / 8.0, 3.0 * _PI / 8.0, 9)),
        phi_target=(-_PI / 2.0, -_PI),
        output_csv="exact_improvement_fig5.csv",
    )


def _cfg_drag():
    return SweepConfig(
        scenario="drag_fig7",
        sigma_over_eps=_ratios(0.05, 1.0, 15),
        lambda_pairs=((1.2, 1.2), (0.8, 1.2)),
        phi_target=(-_PI / 2.0, -_PI),
        output_csv="drag_fig7.csv",
    )


def _cfg_drag_improvement():
    pairs = []
    for base in (0.8, 1.0, 1.2):
        for r in np.linspace(0.25, 1.75, 7):
            pairs.append((float(r * base), base))
    return SweepConfig(
        scenario="drag_improvement_fig8",
        sigma_over_eps=_ratios(0.05, 1.0, 10),
        lambda_pairs=tuple(pairs),
        phi_target=(-_PI / 2.0,),
        output_csv="drag_improvement_fig8.csv",
    )


def _cfg_decay():
    return SweepConfig(
        scenario="decay_fig9",
        eps_mev=0.04,
        sigma_over_eps=_ratios(0.02, 1.0, 13),
        eta=(math.atan(1.2),),
        lambda_pairs=((1.2, 0.8),),
        gamma_over_eps=(2.2e-3, 7.2e-4),
        phi_target=(-_PI / 2.0,),
        output_csv="decay_fig9.csv",
    )


def _cfg_crosstalk():
    return SweepConfig(
        scenario="crosstalk_fig10",
        sigma_over_eps=_ratios(0.05, 1.0, 10),
        eta=(_PI / 4.0,),
        lambda_pairs=((1.0, 1.0),),
        omega_s_over_eps=_ratios(1e-3, 1.0, 10),
        phi_target=(-_PI / 2.0,),
        output_csv="crosstalk_fig10.csv",
    )


def _cfg_crosstalk_corrected():
    return SweepConfig(
        scenario="crosstalk_corrected_fig11",
        sigma_over_eps=_ratios(0.05, 1.0, 10),
        eta=(_PI / 4.0,),
        lambda_pairs=((1.0, 1.0),),
        omega_s_over_eps=_ratios(1e-4, 1e-2, 9),
        phi_target=(-_PI / 2.0,),
        output_csv="crosstalk_corrected_fig11.csv",
    )


def _cfg_populations():
    return SweepConfig(
        scenario="populations_fig12",
        sigma_over_eps=(0.5,),
        eta=(_PI / 4.0,),
        phi_target=(-_PI / 2.0,),
        strategy="exact",
        output_csv="populations_fig12.csv",
    )


SCENARIOS = {
    "baseline_fig2": ScenarioSpec(
        name="baseline_fig2",
        description="Uncorrected gate error vs bandwidth ratio, dependent "
                    "and independent couplings.",
        corrected=False,
        defaults=_cfg_baseline,
    ),
    "exact_fig4": ScenarioSpec(
        name="exact_fig4",
        description="Exact detuning construction vs uncorrected drive at "
                    "locked couplings (eta = pi/4).",
        corrected=True,
        defaults=_cfg_exact,
    ),
    "exact_improvement_fig5": ScenarioSpec(
        name="exact_improvement_fig5",
        description="Improvement of the exact construction across the "
                    "mixing angle eta and bandwidth ratio.",
        corrected=True,
        defaults=_cfg_exact_improvement,
    ),
    "drag_fig7": ScenarioSpec(
        name="drag_fig7",
        description="Derivative-corrected drive vs uncorrected at "
                    "independent couplings, with unitarity deviation.",
        corrected=True,
        defaults=_cfg_drag,
    ),
    "drag_improvement_fig8": ScenarioSpec(
        name="drag_improvement_fig8",
        description="Derivative-correction improvement across coupling "
                    "ratio and bandwidth ratio.",
        corrected=True,
        defaults=_cfg_drag_improvement,
    ),
    "decay_fig9": ScenarioSpec(
        name="decay_fig9",
        description="Gate error under spontaneous emission; corrected and "
                    "uncorrected, both coupling modes.",
        corrected=True,
        eps_fixed=True,
        defaults=_cfg_decay,
    ),
    "crosstalk_fig10": ScenarioSpec(
        name="crosstalk_fig10",
        description="Cross-talk between drive legs across the ground-state "
                    "splitting ratio, corrections unmodified.",
        corrected=True,
        crosstalk=True,
        defaults=_cfg_crosstalk,
    ),
    "crosstalk_corrected_fig11": ScenarioSpec(
        name="crosstalk_corrected_fig11",
        description="Cross-talk in the small-splitting regime with the "
                    "corrected drive amplitude halved.",
        corrected=True,
        crosstalk=True,
        corrected_drive_scale=0.5,
        defaults=_cfg_crosstalk_corrected,
    ),
    "populations_fig12": ScenarioSpec(
        name="populations_fig12",
        description="Level-population history for one configured gate "
                    "(columns t, p_D, p_B, p_t, p_u).",
        corrected=False,
        populations=True,
        defaults=_cfg_populations,
    ),
}


def default_config(scenario):
    """The built-in configuration for a named scenario."""
    if scenario not in SCENARIOS:
        raise ValueError(
            f"unknown scenario {scenario!r}; available: {', '.join(SCENARIOS)}"
        )
    return SCENARIOS[scenario].defaults()
