"""Command-line front end: point reports, sweeps, histograms, audits, trajectories.

Outputs are pure functions of (config, overrides, seed): no timestamps or
environment state are written, so CSV/JSON regenerate byte-identically.
Exit codes: 0 success, 1 validation/usage error, 2 property-verification
failure, 3 numerical degeneracy.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__, analytic, sweep as sweep_mod, trajectory, verify as verify_mod
from .fcs import assemble, cumulants_charpoly, cumulants_spectral
from .params import (
    PARAM_KEYS,
    EngineParams,
    ModelKind,
    ValidationError,
    frequencies_from_mapping,
    params_from_mapping,
    validate,
)
from .steadystate import DegenerateStateError

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_PROPERTY = 2
EXIT_DEGENERATE = 3

SCHEMA_VERSION = sweep_mod.SCHEMA_VERSION

DEFAULT_POINT = {"gamma_h": 0.016, "gamma_c": 2.0, "n_h": 5.0, "n_c": 0.001, "lambda": 0.05}


class _Parser(argparse.ArgumentParser):
    # usage errors are validation errors (exit 1), not property failures (2)
    def error(self, message):
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="JSON config file (keys: gamma_h, gamma_c, n_h, n_c, lambda, optional omega_h/omega_c, model)")
    p.add_argument("--out", type=Path, help="output stem; files are written as STEM.csv/.json/.png")
    p.add_argument("--seed", type=int, help="RNG seed recorded in output sidecars")
    p.add_argument("--threads", type=int, default=1, help="worker count for trajectory chunks (0 = auto)")
    p.add_argument("--model", type=str, help="model variant: q1, q2, c1, c2")
    for key in PARAM_KEYS + ("omega_h", "omega_c"):
        p.add_argument(f"--{key.replace('_', '-')}", dest=key, type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="maserfcs", description=__doc__)
    parser.add_argument("--version", action="version", version=f"maserfcs {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_point = sub.add_parser("point", help="full statistics at one parameter point (JSON)")
    _add_common(p_point)

    p_sweep = sub.add_parser("sweep", help="one-axis parameter sweep (CSV + PNG)")
    _add_common(p_sweep)
    p_sweep.add_argument("--no-plot", action="store_true", help="skip figure rendering")

    p_hist = sub.add_parser("hist", help="random-sampling Q histogram (CSV + JSON + PNG)")
    _add_common(p_hist)
    p_hist.add_argument("--no-plot", action="store_true", help="skip figure rendering")
    p_hist.add_argument("--samples", type=int, default=None, help="number of parameter draws")

    p_verify = sub.add_parser("verify", help="cross-module property audit over random draws")
    _add_common(p_verify)
    p_verify.add_argument("--draws", type=int, default=1000)

    p_traj = sub.add_parser("traj", help="quantum-jump Monte Carlo estimates vs closed forms (JSON)")
    _add_common(p_traj)
    p_traj.add_argument("--n-traj", dest="n_traj", type=int, default=None)
    p_traj.add_argument("--window", type=float, default=None, help="post-burn-in counting window")
    p_traj.add_argument("--dump-records", type=Path, default=None,
                        help="write one CSV row of channel counts per trajectory")
    return parser


def _load_config(args) -> dict:
    cfg = {}
    if args.config is not None:
        try:
            cfg = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError([f"config: cannot read {args.config}: {exc}"]) from exc
        if not isinstance(cfg, dict):
            raise ValidationError(["config: top-level JSON value must be an object"])
    return cfg


def _merged_params(args, cfg: dict, defaults: dict | None = None) -> dict:
    merged = dict(defaults or {})
    merged.update({k: v for k, v in cfg.items() if k in PARAM_KEYS + ("omega_h", "omega_c", "model", "seed")})
    for key in PARAM_KEYS + ("omega_h", "omega_c"):
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    if getattr(args, "model", None):
        merged["model"] = args.model
    if getattr(args, "seed", None) is not None:
        merged["seed"] = args.seed
    return merged


def _model_of(merged: dict, default: str = "q1") -> ModelKind:
    return ModelKind.from_string(str(merged.get("model", default)))


def _dump_json(payload: dict, out: Path | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        Path(str(out) + ".json" if out.suffix != ".json" else out).write_text(text)


def _stem(out: Path) -> Path:
    out = Path(out)
    if out.suffix in (".csv", ".json", ".png"):
        out = out.with_suffix("")
    out.parent.mkdir(parents=True, exist_ok=True)
    return out


def cmd_point(args) -> int:
    cfg = _load_config(args)
    merged = _merged_params(args, cfg, DEFAULT_POINT)
    params = validate(params_from_mapping(merged))
    kind = _model_of(merged)
    freqs = frequencies_from_mapping(merged)
    result = assemble(params, kind)
    spectral_current, spectral_variance = cumulants_spectral(params, kind)
    report = {
        "schema_version": SCHEMA_VERSION,
        "params": params.as_dict(),
        "warnings": list(params.warnings),
        "seed": merged.get("seed"),
        **result.as_dict(),
        "routes": {
            "charpoly": {"current": result.current, "variance": result.variance},
            "spectral": {"current": spectral_current, "variance": spectral_variance},
            "discrepancy": {
                "current": abs(result.current - spectral_current),
                "variance": abs(result.variance - spectral_variance),
            },
        },
    }
    if freqs is not None:
        power, power_variance = analytic.power_stats(result.current, result.variance, freqs)
        report["power"] = {"omega_h": freqs.omega_h, "omega_c": freqs.omega_c,
                           "mean": power, "variance": power_variance}
    _dump_json(report, args.out)
    return EXIT_OK


def _sweep_spec_from(args, cfg: dict) -> sweep_mod.SweepSpec:
    merged = _merged_params(args, cfg, sweep_mod.FIG2_PARAMS.as_dict())
    fixed = validate(params_from_mapping(merged))
    grid_cfg = cfg.get("grid", {})
    axis = cfg.get("axis", "lambda")
    start = float(grid_cfg.get("start", 1e-3))
    stop = float(grid_cfg.get("stop", 3.0))
    num = int(grid_cfg.get("num", 200))
    scale = str(grid_cfg.get("scale", "log"))
    if num < 1:
        raise ValidationError(["grid.num: must be >= 1"])
    if scale == "log":
        if start <= 0 or stop <= 0:
            raise ValidationError(["grid: log scale needs positive endpoints"])
        values = sweep_mod.log_grid(start, stop, num)
    elif scale == "linear":
        values = sweep_mod.linear_grid(start, stop, num)
    else:
        raise ValidationError([f"grid.scale: expected 'log' or 'linear', got {scale!r}"])
    kinds = tuple(ModelKind.from_string(s) for s in cfg.get("models", ["q1", "q2", "c1", "c2"]))
    quantities = tuple(cfg.get("quantities", sweep_mod.ALL_QUANTITIES))
    return sweep_mod.SweepSpec(axis=axis, values=values, fixed=fixed,
                               kinds=kinds, quantities=quantities)


def cmd_sweep(args) -> int:
    cfg = _load_config(args)
    spec = _sweep_spec_from(args, cfg)
    rows = sweep_mod.run_sweep(spec)
    if args.out is None:
        raise ValidationError(["--out: required for sweep output"])
    stem = _stem(args.out)
    sweep_mod.write_sweep_csv(rows, stem.with_suffix(".csv"))
    sidecar = {
        "schema_version": SCHEMA_VERSION,
        "seed": args.seed,
        "axis": spec.axis,
        "grid": {"num": len(spec.values), "start": spec.values[0], "stop": spec.values[-1]},
        "fixed": spec.fixed.as_dict(),
        "models": [k.value for k in spec.kinds],
        "quantities": list(spec.quantities),
    }
    stem.with_suffix(".json").write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
    if not args.no_plot:
        from . import plotting

        plotting.plot_sweep(rows, spec.axis, spec.quantities, stem.with_suffix(".png"))
    return EXIT_OK


def cmd_hist(args) -> int:
    cfg = _load_config(args)
    merged = _merged_params(args, cfg)
    kind = _model_of(merged, default="q2")
    n_samples = args.samples if args.samples is not None else int(cfg.get("n_samples", 10_000))
    ranges = dict(sweep_mod.DEFAULT_SAMPLING_RANGES)
    for key, interval in cfg.get("ranges", {}).items():
        if key not in ranges:
            raise ValidationError([f"ranges.{key}: unknown parameter"])
        ranges[key] = (float(interval[0]), float(interval[1]))
    spec = sweep_mod.SamplingSpec(
        n_samples=n_samples,
        ranges=ranges,
        bin_width=float(cfg.get("bin_width", 0.01)),
        seed=int(merged.get("seed", 0)),
    )
    hist = sweep_mod.run_sampling(spec, kind)
    if args.out is None:
        raise ValidationError(["--out: required for hist output"])
    stem = _stem(args.out)
    sweep_mod.write_histogram_csv(hist, stem.with_suffix(".csv"))
    sweep_mod.write_histogram_sidecar(hist, stem.with_suffix(".json"))
    if not args.no_plot:
        from . import plotting

        plotting.plot_histogram(hist, stem.with_suffix(".png"))
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = _load_config(args)
    merged = _merged_params(args, cfg)
    if args.draws < 1:
        raise ValidationError(["--draws: must be >= 1"])
    seed = int(merged.get("seed", 7))
    n_checks, failures = verify_mod.run_audit(args.draws, seed)
    print(f"verify: {args.draws} draws (seed {seed}), {n_checks} property groups checked")
    if failures:
        for f in failures:
            print("FAIL " + f.reproducer())
        print(f"verify: {len(failures)} failure(s)")
        return EXIT_PROPERTY
    print("verify: all properties hold")
    return EXIT_OK


def cmd_traj(args) -> int:
    cfg = _load_config(args)
    merged = _merged_params(args, cfg, DEFAULT_POINT)
    params = validate(params_from_mapping(merged))
    kind = _model_of(merged)
    if not kind.is_quantum:
        raise ValidationError(["model: trajectory unraveling needs a quantum variant (q1 or q2)"])
    n_traj = args.n_traj if args.n_traj is not None else int(cfg.get("n_traj", 1000))
    seed = int(merged.get("seed", 0))
    if args.window is None and "t_final" in cfg:
        tcfg = trajectory.TrajectoryConfig(
            t_final=float(cfg["t_final"]),
            dt=float(cfg.get("dt", 0.005 / trajectory.max_rate(params))),
            n_traj=n_traj,
            seed=seed,
            burn_in=float(cfg.get("burn_in", 0.0)),
        )
    else:
        window = args.window if args.window is not None else float(cfg.get("window", 200.0))
        tcfg = trajectory.TrajectoryConfig.for_params(params, window=window, n_traj=n_traj, seed=seed)
    try:
        result = trajectory.run(params, kind, tcfg, threads=args.threads)
    except trajectory.TrajectoryConfigError as exc:
        raise ValidationError([str(exc)]) from exc
    closed_current = analytic.current_closed(params, kind)
    closed_activity = analytic.activity_closed(params, kind)
    report = {
        "schema_version": SCHEMA_VERSION,
        "params": params.as_dict(),
        **result.as_dict(),
        "closed_form": {"current": closed_current, "activity": closed_activity},
        "z_scores": {
            "current": (result.current - closed_current) / result.current_stderr,
            "activity": (result.activity - closed_activity) / result.activity_stderr,
        },
        "config": {"t_final": tcfg.t_final, "dt": tcfg.dt, "burn_in": tcfg.burn_in},
    }
    if args.dump_records is not None:
        trajectory.dump_records_csv(result, args.dump_records)
    _dump_json(report, args.out)
    return EXIT_OK


_COMMANDS = {
    "point": cmd_point,
    "sweep": cmd_sweep,
    "hist": cmd_hist,
    "verify": cmd_verify,
    "traj": cmd_traj,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ValidationError as exc:
        for problem in exc.problems:
            print(f"error: {problem}", file=sys.stderr)
        return EXIT_VALIDATION
    except DegenerateStateError as exc:
        print(f"degenerate: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except ArithmeticError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE


if __name__ == "__main__":
    sys.exit(main())
