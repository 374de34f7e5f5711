"""Reproducible experiment runner.

Usage:
    pathfisher <command> --config cfg.json [--out PATH] [--format csv|json]
               [--seed U64] [--set dotted.path=value]...

Commands: condition, channel, fisher-sweep, scaling, continuous,
oracle-check, estimate.  Configs are single JSON files; any leaf may be
overridden with ``--set`` (values parsed as JSON, falling back to strings).
Angles are radians unless the config sets ``"pi_units": true``, in which
case delta0, theta, window bounds and omega are read as multiples of pi.

Exit codes: 0 success, 2 config parse error, 3 validation error,
4 oracle resource limit.  Every successful run writes a manifest next to
the output file with the resolved config and per-output SHA-256 checksums;
identical config and seed reproduce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import csv
import datetime
import hashlib
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .channel import (
    apply_effective_channel,
    effective_channel_params,
    random_state,
    state_plus,
)
from .continuous import figure3_sweep
from .estimation import (
    ExperimentConfig,
    default_window,
    result_to_dict,
    rmse_trials,
)
from .noise import (
    ConditionViolationError,
    DEFAULT_CONDITION_TOL,
    DegenerateNoiseError,
    NoiseDistribution,
    check_condition,
    fourier_coefficient,
    gaussian_grid,
    noise_profile,
    phase_kick,
)
from .oracle import (
    ResourceLimitError,
    compare,
    fourier_branch,
    oracle_apply_discrete,
    oracle_effective_round,
    prepare_superposed,
)
from .protocols import ProtocolSpec, fisher_bound, fisher_exact
from .channel import superposed_output

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_RESOURCE = 4

COMMANDS = (
    "condition",
    "channel",
    "fisher-sweep",
    "scaling",
    "continuous",
    "oracle-check",
    "estimate",
)

#: Environment variable naming the default worker-pool size for sweeps.
WORKERS_ENV = "PATHFISHER_WORKERS"

_SEED_SPACING = 1_000_000  # per-row seed offset; keeps trial streams disjoint


class ConfigError(Exception):
    """Unreadable or syntactically invalid configuration (exit 2)."""


@dataclass(frozen=True)
class Diagnostic:
    field: str
    message: str

    def __str__(self) -> str:
        return f"{self.field}: {self.message}"


@dataclass(frozen=True)
class RunConfig:
    command: str
    data: dict


# --------------------------------------------------------------------------
# config plumbing


def _get(tree: dict, dotted: str, default=None):
    node = tree
    for part in dotted.split("."):
        if not isinstance(node, dict) or part not in node:
            return default
        node = node[part]
    return node


def _set_path(tree: dict, dotted: str, value) -> None:
    parts = dotted.split(".")
    node = tree
    for part in parts[:-1]:
        node = node.setdefault(part, {})
        if not isinstance(node, dict):
            raise ConfigError(f"--set path {dotted!r} crosses a non-object field")
    node[parts[-1]] = value


def load_config(
    path: str | None,
    overrides: list[str] | None = None,
    out: str | None = None,
    fmt: str | None = None,
    seed: int | None = None,
    command: str = "",
) -> RunConfig:
    """Read the JSON config and fold in command-line overrides.

    Raises ConfigError for unreadable files, JSON syntax errors (the message
    carries line/column) and malformed --set expressions.
    """
    data: dict = {}
    if path is not None:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(
                f"config {path!r} is not valid JSON: {exc.msg} "
                f"(line {exc.lineno}, column {exc.colno})"
            ) from exc
        if not isinstance(data, dict):
            raise ConfigError("config root must be a JSON object")
    for expr in overrides or []:
        if "=" not in expr:
            raise ConfigError(f"--set expects dotted.path=value, got {expr!r}")
        key, _, raw = expr.partition("=")
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        _set_path(data, key.strip(), value)
    if out is not None:
        _set_path(data, "output.path", out)
    if fmt is not None:
        _set_path(data, "output.format", fmt)
    if seed is not None:
        _set_path(data, "estimation.seed", seed)
        _set_path(data, "oracle.seed", seed)
    return RunConfig(command=command, data=data)


def _angle(config: RunConfig, value: float) -> float:
    return value * math.pi if config.data.get("pi_units", False) else value


# --------------------------------------------------------------------------
# validation


def _check_noise(config: RunConfig, diags: list[Diagnostic]) -> NoiseDistribution | None:
    section = config.data.get("noise")
    if not isinstance(section, dict):
        diags.append(Diagnostic("noise", "missing noise section"))
        return None
    kind = section.get("kind", "phase_kick")
    try:
        if kind == "phase_kick":
            return phase_kick(
                float(section.get("p", 0.5)),
                _angle(config, float(section.get("delta0", math.pi))),
            )
        if kind == "gaussian":
            return gaussian_grid(
                float(section.get("sigma", 0.5)),
                int(section.get("n_atoms", 101)),
                _angle(config, float(section.get("center", 1.0 if config.data.get("pi_units") else math.pi))),
            )
        if kind == "atoms":
            return NoiseDistribution(section.get("atoms", []))
    except (ValueError, TypeError) as exc:
        diags.append(Diagnostic("noise", str(exc)))
        return None
    diags.append(Diagnostic("noise.kind", f"unknown noise kind {kind!r}"))
    return None


def _as_list(value) -> list:
    return list(value) if isinstance(value, (list, tuple)) else [value]


def _theta_grid(config: RunConfig, diags: list[Diagnostic]) -> list[float]:
    theta = _get(config.data, "protocol.theta", 0.0)
    if isinstance(theta, dict):
        try:
            start = _angle(config, float(theta["start"]))
            stop = _angle(config, float(theta["stop"]))
            count = int(theta["count"])
            if count < 1:
                raise ValueError("count must be >= 1")
            return [float(x) for x in np.linspace(start, stop, count)]
        except (KeyError, ValueError, TypeError) as exc:
            diags.append(Diagnostic("protocol.theta", f"bad grid spec: {exc}"))
            return []
    try:
        return [_angle(config, float(x)) for x in _as_list(theta)]
    except (ValueError, TypeError) as exc:
        diags.append(Diagnostic("protocol.theta", str(exc)))
        return []


def _n_values(config: RunConfig, diags: list[Diagnostic]) -> list[int]:
    raw = _get(config.data, "protocol.N", None)
    if raw is None:
        diags.append(Diagnostic("protocol.N", "missing probe/step count"))
        return []
    try:
        values = [int(x) for x in _as_list(raw)]
    except (ValueError, TypeError) as exc:
        diags.append(Diagnostic("protocol.N", str(exc)))
        return []
    if any(n < 1 for n in values):
        diags.append(Diagnostic("protocol.N", "every N must be >= 1"))
        return []
    return values


def _m_for(config: RunConfig, n: int) -> int:
    m = _get(config.data, "protocol.M", None)
    if m is not None:
        return int(m)
    coeff = float(_get(config.data, "protocol.m_coefficient", 1.0))
    return max(1, int(round(coeff * n)))


def _mode(config: RunConfig, diags: list[Diagnostic]) -> str:
    mode = _get(config.data, "protocol.mode", "parallel")
    if mode not in ("parallel", "sequential"):
        diags.append(Diagnostic("protocol.mode", f"unknown mode {mode!r}"))
        return "parallel"
    return mode


def _estimation_fields(
    config: RunConfig, diags: list[Diagnostic]
) -> tuple[int, int, int]:
    nu = _get(config.data, "estimation.nu", 10_000)
    trials = _get(config.data, "estimation.trials", 200)
    seed = _get(config.data, "estimation.seed", 0)
    try:
        nu = int(nu)
        if nu < 1:
            raise ValueError("must be >= 1")
    except (ValueError, TypeError) as exc:
        diags.append(Diagnostic("estimation.nu", str(exc)))
        nu = 1
    try:
        trials = int(trials)
        if trials < 1:
            raise ValueError("must be >= 1")
    except (ValueError, TypeError) as exc:
        diags.append(Diagnostic("estimation.trials", str(exc)))
        trials = 1
    try:
        seed = int(seed)
        if not 0 <= seed < 2**64:
            raise ValueError("must be a 64-bit unsigned integer")
    except (ValueError, TypeError) as exc:
        diags.append(Diagnostic("estimation.seed", str(exc)))
        seed = 0
    return nu, trials, seed


def _window(
    config: RunConfig, diags: list[Diagnostic], theta_true: float, n_max: int
) -> tuple[float, float] | None:
    raw = _get(config.data, "estimation.window", None)
    if raw is None:
        return None
    if not (isinstance(raw, (list, tuple)) and len(raw) == 2):
        diags.append(Diagnostic("estimation.window", "expected [low, high]"))
        return None
    lo, hi = (_angle(config, float(x)) for x in raw)
    if not hi > lo:
        diags.append(Diagnostic("estimation.window", "window must be nonempty"))
        return None
    if hi - lo > 2.0 * math.pi / n_max + 1e-9:
        diags.append(
            Diagnostic(
                "estimation.window",
                f"width {hi - lo:.6g} exceeds the identifiable fringe period "
                f"2*pi/N = {2.0 * math.pi / n_max:.6g}",
            )
        )
        return None
    if not lo <= theta_true <= hi:
        diags.append(Diagnostic("estimation.window", "theta_true lies outside the window"))
        return None
    return (lo, hi)


def _output_target(config: RunConfig, diags: list[Diagnostic]) -> tuple[str, str]:
    default_fmt = "json" if config.command in ("condition", "oracle-check", "estimate") else "csv"
    fmt = _get(config.data, "output.format", default_fmt)
    if fmt not in ("csv", "json"):
        diags.append(Diagnostic("output.format", f"must be csv or json, got {fmt!r}"))
        fmt = default_fmt
    path = _get(config.data, "output.path", f"{config.command.replace('-', '_')}_output.{fmt}")
    return str(path), fmt


def validate(config: RunConfig) -> list[Diagnostic]:
    """Collect every configuration problem; an empty list means runnable."""
    diags: list[Diagnostic] = []
    if config.command not in COMMANDS:
        diags.append(Diagnostic("command", f"unknown command {config.command!r}"))
        return diags
    declared = config.data.get("command")
    if declared is not None and declared != config.command:
        diags.append(
            Diagnostic("command", f"config declares {declared!r} but {config.command!r} was invoked")
        )
    _output_target(config, diags)

    cmd = config.command
    if cmd in ("condition", "channel", "fisher-sweep", "scaling", "oracle-check", "estimate"):
        _check_noise(config, diags)
    if cmd == "condition":
        tol = _get(config.data, "condition.tol", DEFAULT_CONDITION_TOL)
        if not (isinstance(tol, (int, float)) and tol > 0):
            diags.append(Diagnostic("condition.tol", "tolerance must be positive"))
    if cmd == "channel":
        raw = _get(config.data, "protocol.M", None)
        if raw is None:
            diags.append(Diagnostic("protocol.M", "missing path-count list"))
        else:
            try:
                if any(int(m) < 1 for m in _as_list(raw)):
                    diags.append(Diagnostic("protocol.M", "every M must be >= 1"))
            except (ValueError, TypeError) as exc:
                diags.append(Diagnostic("protocol.M", str(exc)))
    if cmd in ("fisher-sweep", "scaling", "estimate"):
        ns = _n_values(config, diags)
        _mode(config, diags)
        _theta_grid(config, diags)
        m = _get(config.data, "protocol.M", None)
        if m is not None:
            try:
                if int(m) < 1:
                    diags.append(Diagnostic("protocol.M", "M must be >= 1"))
            except (ValueError, TypeError) as exc:
                diags.append(Diagnostic("protocol.M", str(exc)))
        if cmd in ("scaling", "estimate"):
            nu, trials, seed = _estimation_fields(config, diags)
            thetas = _theta_grid(config, [])
            if ns and thetas:
                _window(config, diags, thetas[0], max(ns))
    if cmd == "continuous":
        for name in ("gamma", "omega", "t_values", "T_grid"):
            if _get(config.data, f"continuous.{name}", None) is None:
                diags.append(Diagnostic(f"continuous.{name}", "missing"))
        gamma = _get(config.data, "continuous.gamma", 1.0)
        if isinstance(gamma, (int, float)) and gamma < 0:
            diags.append(Diagnostic("continuous.gamma", "gamma must be >= 0"))
        for name in ("t_values", "T_grid"):
            values = _get(config.data, f"continuous.{name}", [])
            if not isinstance(values, (list, tuple)) or not values:
                diags.append(Diagnostic(f"continuous.{name}", "expected a nonempty list"))
            elif any(not isinstance(v, (int, float)) or v <= 0 for v in values):
                diags.append(Diagnostic(f"continuous.{name}", "entries must be positive numbers"))
    if cmd == "oracle-check":
        for name, lo in (("M_values", 1), ("samples", 1)):
            raw = _get(config.data, f"oracle.{name}", None)
            if raw is None:
                continue
            try:
                if any(int(v) < lo for v in _as_list(raw)):
                    diags.append(Diagnostic(f"oracle.{name}", f"values must be >= {lo}"))
            except (ValueError, TypeError) as exc:
                diags.append(Diagnostic(f"oracle.{name}", str(exc)))
    return diags


# --------------------------------------------------------------------------
# output helpers


def _fmt_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def _write_csv(path: Path, columns: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt_cell(v) for v in row])


def _write_json(path: Path, payload) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _emit_table(path: Path, fmt: str, columns: list[str], rows: list[list]) -> None:
    if fmt == "csv":
        _write_csv(path, columns, rows)
    else:
        _write_json(path, [dict(zip(columns, row)) for row in rows])


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _write_manifest(config: RunConfig, out_path: Path, seed) -> None:
    manifest = {
        "command": config.command,
        "artifact_version": __version__,
        "generated_at": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "seed": seed,
        "config": config.data,
        "outputs": {out_path.name: _sha256(out_path)},
    }
    manifest_path = out_path.with_name(out_path.name + ".manifest.json")
    _write_json(manifest_path, manifest)


def _worker_count(config: RunConfig) -> int:
    raw = config.data.get("workers") or os.environ.get(WORKERS_ENV) or 1
    try:
        return max(1, int(raw))
    except (TypeError, ValueError):
        return 1


def _map_ordered(config: RunConfig, fn, items: list):
    workers = _worker_count(config)
    if workers == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# --------------------------------------------------------------------------
# command bodies


def _run_condition(config: RunConfig, out: Path, fmt: str) -> None:
    diags: list[Diagnostic] = []
    dist = _check_noise(config, diags)
    tol = float(_get(config.data, "condition.tol", DEFAULT_CONDITION_TOL))
    satisfied, residual = check_condition(dist, tol)
    profile = noise_profile(dist, tol)
    columns = ["satisfied", "residual", "tol", "f1_re", "f1_im", "f2_re", "f2_im", "theta0", "theta1"]
    row = [
        satisfied,
        residual,
        tol,
        profile.f1.real,
        profile.f1.imag,
        profile.f2.real,
        profile.f2.imag,
        profile.theta0,
        profile.theta1,
    ]
    if fmt == "json":
        _write_json(out, dict(zip(columns, row)))
    else:
        _write_csv(out, columns, [row])


def _run_channel(config: RunConfig, out: Path, fmt: str) -> None:
    dist = _check_noise(config, [])
    m_values = [int(m) for m in _as_list(_get(config.data, "protocol.M"))]
    rows = []
    for m in m_values:
        params = effective_channel_params(dist, m)
        rows.append([m, params.lam, params.theta2, params.theta0, params.theta1])
    _emit_table(out, fmt, ["M", "lambda", "theta2", "theta0", "theta1"], rows)


def _run_fisher_sweep(config: RunConfig, out: Path, fmt: str) -> None:
    dist = _check_noise(config, [])
    ns = _n_values(config, [])
    thetas = _theta_grid(config, [])
    mode = _mode(config, [])
    rows = []
    for n in ns:
        m = _m_for(config, n)
        params = effective_channel_params(dist, m)
        spec = ProtocolSpec(params, N=n, mode=mode)
        for theta in thetas:
            report = fisher_exact(spec, theta)
            rows.append([n, m, theta, params.lam, report.exact, report.bound])
    _emit_table(
        out, fmt, ["N", "M", "theta", "lambda", "fisher_exact", "fisher_bound"], rows
    )


def _run_scaling(config: RunConfig, out: Path, fmt: str) -> None:
    dist = _check_noise(config, [])
    ns = _n_values(config, [])
    theta = _theta_grid(config, [])[0]
    mode = _mode(config, [])
    nu, trials, seed = _estimation_fields(config, [])
    fixed_window = _window(config, [], theta, max(ns))

    def one(row_index_n):
        index, n = row_index_n
        m = _m_for(config, n)
        params = effective_channel_params(dist, m)
        spec = ProtocolSpec(params, N=n, mode=mode)
        window = fixed_window if fixed_window is not None else default_window(theta, n)
        experiment = ExperimentConfig(
            spec=spec,
            theta_true=theta,
            nu=nu,
            seed=seed + _SEED_SPACING * index,
            window=window,
        )
        result = rmse_trials(experiment, trials)
        report = fisher_exact(spec, theta)
        return [n, m, theta, params.lam, report.exact, report.bound, result.rmse, result.cramer_rao]

    rows = _map_ordered(config, one, list(enumerate(ns)))
    _emit_table(
        out,
        fmt,
        ["N", "M", "theta", "lambda", "fisher_exact", "fisher_bound", "rmse", "cramer_rao"],
        rows,
    )


def _run_continuous(config: RunConfig, out: Path, fmt: str) -> None:
    gamma = float(_get(config.data, "continuous.gamma"))
    omega = _angle(config, float(_get(config.data, "continuous.omega")))
    t_values = [float(t) for t in _get(config.data, "continuous.t_values")]
    t_grid = [float(T) for T in _get(config.data, "continuous.T_grid")]
    rows, skipped = figure3_sweep(gamma, omega, t_values, t_grid)
    for item in skipped:
        print(f"skipped t={item.t:g} T={item.T:g}: {item.reason}", file=sys.stderr)
    _emit_table(
        out,
        fmt,
        ["t", "T", "M", "abs_lambda_t", "theta_t", "fisher_omega", "envelope", "bound_half_T_sq"],
        [
            [r.t, r.T, r.M, r.abs_lambda_t, r.theta_t, r.fisher_omega, r.envelope, r.bound_half_T_sq]
            for r in rows
        ],
    )


def _run_oracle_check(config: RunConfig, out: Path, fmt: str) -> None:
    dist = _check_noise(config, [])
    m_values = [int(m) for m in _as_list(_get(config.data, "oracle.M_values", [1, 2, 3, 4]))]
    samples = int(_get(config.data, "oracle.samples", 20))
    seed = int(_get(config.data, "oracle.seed", 0))
    tol = float(_get(config.data, "oracle.tol", 1e-10))
    sequential_n = int(_get(config.data, "oracle.sequential_N", 4))
    rng = np.random.default_rng(seed)
    rows = []
    all_passed = True
    for m in m_values:
        params = effective_channel_params(dist, m)
        sup_entry = sup_weight = round_entry = 0.0
        for _ in range(samples):
            theta = float(rng.uniform(0.0, 2.0 * math.pi))
            rho = random_state(rng)
            sup = superposed_output(dist, theta, m, rho)
            state = oracle_apply_discrete(dist, theta, prepare_superposed(rho, m))
            prob0, cond0 = fourier_branch(state, 0)
            res = compare(sup.branch0_state, cond0, tol, sup.branch0_weight, prob0)
            sup_entry = max(sup_entry, res.max_abs_entry_diff)
            sup_weight = max(sup_weight, res.branch_weight_diff)
            if m > 1:
                prob1, cond1 = fourier_branch(state, 1)
                res = compare(
                    sup.branch_other_state, cond1, tol, sup.branch_other_weight_each, prob1
                )
                sup_entry = max(sup_entry, res.max_abs_entry_diff)
                sup_weight = max(sup_weight, res.branch_weight_diff)
            analytic = apply_effective_channel(params, theta, rho)
            res = compare(analytic, oracle_effective_round(dist, theta, m, rho), tol)
            round_entry = max(round_entry, res.max_abs_entry_diff)
        rows.append(["superposed_branches", m, sup_entry, sup_weight, sup_entry <= tol and sup_weight <= tol])
        rows.append(["effective_round", m, round_entry, 0.0, round_entry <= tol])
        # sequential composition against the closed-form coherence
        theta = float(rng.uniform(0.0, 2.0 * math.pi))
        rho = state_plus()
        for _ in range(sequential_n):
            rho = oracle_effective_round(dist, theta, m, rho)
        target = 0.5 * params.lam**sequential_n * np.exp(
            -1j * sequential_n * (theta + params.theta2)
        )
        seq_diff = abs(rho.matrix[0, 1] - target)
        rows.append(["sequential_coherence", m, seq_diff, 0.0, seq_diff <= tol])
    all_passed = all(bool(r[4]) for r in rows)
    columns = ["check", "M", "max_abs_entry_diff", "branch_weight_diff", "passed"]
    if fmt == "json":
        _write_json(
            out,
            {
                "tolerance": tol,
                "all_passed": all_passed,
                "rows": [dict(zip(columns, row)) for row in rows],
            },
        )
    else:
        _write_csv(out, columns, rows)


def _run_estimate(config: RunConfig, out: Path, fmt: str) -> None:
    dist = _check_noise(config, [])
    n = _n_values(config, [])[0]
    m = _m_for(config, n)
    theta = _theta_grid(config, [])[0]
    mode = _mode(config, [])
    nu, trials, seed = _estimation_fields(config, [])
    window = _window(config, [], theta, n) or default_window(theta, n)
    params = effective_channel_params(dist, m)
    spec = ProtocolSpec(params, N=n, mode=mode)
    experiment = ExperimentConfig(
        spec=spec, theta_true=theta, nu=nu, seed=seed, window=window
    )
    include_counts = bool(_get(config.data, "estimation.include_counts", False))
    result = rmse_trials(experiment, trials, keep_counts=include_counts)
    payload = result_to_dict(experiment, result, include_counts=include_counts)
    if fmt == "json":
        _write_json(out, payload)
    else:
        columns = ["N", "M", "theta_true", "nu", "trials", "seed", "theta_hat", "rmse", "cramer_rao"]
        row = [n, m, theta, nu, trials, seed, result.theta_hat, result.rmse, result.cramer_rao]
        _write_csv(out, columns, [row])


_RUNNERS = {
    "condition": _run_condition,
    "channel": _run_channel,
    "fisher-sweep": _run_fisher_sweep,
    "scaling": _run_scaling,
    "continuous": _run_continuous,
    "oracle-check": _run_oracle_check,
    "estimate": _run_estimate,
}


def run(config: RunConfig) -> int:
    """Validate and execute one command; returns the process exit code."""
    diagnostics = validate(config)
    if diagnostics:
        for diag in diagnostics:
            print(f"invalid config: {diag}", file=sys.stderr)
        return EXIT_VALIDATION
    out_str, fmt = _output_target(config, [])
    out = Path(out_str)
    if out.parent != Path(""):
        out.parent.mkdir(parents=True, exist_ok=True)
    try:
        _RUNNERS[config.command](config, out, fmt)
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ConditionViolationError, DegenerateNoiseError, ValueError) as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    seed = _get(config.data, "estimation.seed", _get(config.data, "oracle.seed", None))
    _write_manifest(config, out, seed)
    return EXIT_OK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="pathfisher",
        description="Simulation and estimation experiments for superposed-path probing.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", default=None, help="JSON config file")
        cmd.add_argument("--out", default=None, help="output file path")
        cmd.add_argument("--format", default=None, choices=("csv", "json"))
        cmd.add_argument("--seed", default=None, type=int, help="override estimation/oracle seed")
        cmd.add_argument(
            "--set",
            dest="overrides",
            action="append",
            default=[],
            metavar="dotted.path=value",
            help="override any config leaf (value parsed as JSON)",
        )
    args = parser.parse_args(argv)
    try:
        config = load_config(
            args.config,
            overrides=args.overrides,
            out=args.out,
            fmt=args.format,
            seed=args.seed,
            command=args.command,
        )
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    return run(config)


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
