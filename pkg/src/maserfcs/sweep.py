"""Parameter sweeps and random-sampling histograms as structured datasets.

Sweeps evaluate the closed forms (vectorized) along one parameter axis for
any set of model variants, spot-checking every tenth grid point against the
jet-based numerics. Sampling draws parameter tuples from a counter-based
Philox stream — sample i is row i of one vectorized draw, so results are
reproducible from the seed and independent of any worker count — and bins
the kinetic-uncertainty quantifier Q.

CSV schemas (stable, byte-identical for a given seed):
  sweep:     axis_value, kind, current, variance, fano, activity, ratio_R, Q, undefined_flag
  histogram: bin_left, bin_right, count   (+ JSON sidecar with the run metadata)
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import analytic
from .fcs import assemble
from .params import PARAM_KEYS, EngineParams, ModelKind, ValidatedParams, validate

SCHEMA_VERSION = 1
SWEEP_COLUMNS = ("axis_value", "kind", "current", "variance", "fano",
                 "activity", "ratio_R", "Q", "undefined_flag")
ALL_QUANTITIES = ("Q", "current", "activity", "fano", "ratio_R")

# Sampling box of the published histogram experiment.
DEFAULT_SAMPLING_RANGES: dict[str, tuple[float, float]] = {
    "gamma_h": (1e-4, 1.0),
    "gamma_c": (1e-4, 5.0),
    "n_h": (0.0, 5.0),
    "n_c": (0.0, 0.1),
    "lambda": (1e-4, 2.0),
}

FIG2_PARAMS = EngineParams(gamma_h=0.016, gamma_c=2.0, n_h=5.0, n_c=0.001, coupling=0.05)

CROSS_CHECK_STRIDE = 10
CROSS_CHECK_RTOL = 1e-8


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    values: tuple[float, ...]
    fixed: ValidatedParams
    kinds: tuple[ModelKind, ...]
    quantities: tuple[str, ...] = ALL_QUANTITIES

    def __post_init__(self):
        if self.axis not in PARAM_KEYS:
            raise ValueError(f"axis must be one of {PARAM_KEYS}, got {self.axis!r}")
        if not self.values:
            raise ValueError("sweep grid is empty")
        diffs = np.diff(self.values)
        if not (np.all(diffs > 0) or np.all(diffs < 0)):
            raise ValueError("sweep grid must be strictly monotone")
        unknown = set(self.quantities) - set(ALL_QUANTITIES)
        if unknown:
            raise ValueError(f"unknown quantities {sorted(unknown)}; expected subset of {ALL_QUANTITIES}")


def log_grid(start: float, stop: float, num: int) -> tuple[float, ...]:
    return tuple(np.geomspace(start, stop, num).tolist())


def linear_grid(start: float, stop: float, num: int) -> tuple[float, ...]:
    return tuple(np.linspace(start, stop, num).tolist())


def fig2_sweep_spec(num: int = 200) -> SweepSpec:
    """Coupling sweep reproducing the published Q-versus-coupling curves."""
    return SweepSpec(
        axis="lambda",
        values=log_grid(1e-3, 3.0, num),
        fixed=validate(FIG2_PARAMS),
        kinds=tuple(ModelKind),
    )


def _params_at(fixed: ValidatedParams, axis: str, value: float) -> ValidatedParams:
    d = fixed.as_dict()
    d[axis] = value
    return validate(EngineParams(
        gamma_h=d["gamma_h"], gamma_c=d["gamma_c"], n_h=d["n_h"],
        n_c=d["n_c"], coupling=d["lambda"],
    ))


def _point_row(axis_value: float, kind: ModelKind, p: ValidatedParams) -> dict:
    current = analytic.current_closed(p, kind)
    fano = analytic.fano_closed(p, kind)
    activity = analytic.activity_closed(p, kind)
    # zero current (n_h == n_c or lambda == 0) leaves the noise ratios undefined
    undefined = fano is None or p.coupling == 0.0 or current == 0.0
    if undefined:
        variance = fano = ratio = q = None
    else:
        variance = fano * current
        ratio = activity / current
        if kind.is_quantum:
            q = analytic.kur_quantifier(p, kind)
        else:
            q = analytic.kur_from_components(current, fano, activity)
    return {
        "axis_value": axis_value,
        "kind": kind.value,
        "current": current,
        "variance": variance,
        "fano": fano,
        "activity": activity,
        "ratio_R": ratio,
        "Q": q,
        "undefined_flag": int(undefined),
    }


def run_sweep(spec: SweepSpec) -> list[dict]:
    """One row per (grid point x kind); deterministic, closed-form valued.

    Every CROSS_CHECK_STRIDE-th grid point is recomputed through the jet FCS
    route and must agree to CROSS_CHECK_RTOL (transcription audit baked into
    the sweep itself).
    """
    rows = []
    for i, value in enumerate(spec.values):
        p = _params_at(spec.fixed, spec.axis, value)
        for kind in spec.kinds:
            row = _point_row(value, kind, p)
            rows.append(row)
            if i % CROSS_CHECK_STRIDE == 0 and not row["undefined_flag"]:
                numeric = assemble(p, kind)
                for key, got in (("current", row["current"]),
                                 ("fano", row["fano"]),
                                 ("activity", row["activity"])):
                    want = getattr(numeric, key)
                    if want is None or got is None:
                        continue
                    if abs(got - want) > CROSS_CHECK_RTOL * max(abs(want), 1e-30):
                        raise ArithmeticError(
                            f"sweep cross-check failed at {spec.axis}={value!r} "
                            f"({kind.value}, {key}): closed={got!r} numeric={want!r}"
                        )
    return rows


@dataclass(frozen=True)
class SamplingSpec:
    n_samples: int
    ranges: dict[str, tuple[float, float]] = field(default_factory=lambda: dict(DEFAULT_SAMPLING_RANGES))
    bin_width: float = 0.01
    seed: int = 0

    def __post_init__(self):
        if self.n_samples < 0:
            raise ValueError("n_samples must be >= 0")
        if self.bin_width <= 0:
            raise ValueError("bin_width must be > 0")
        for key in PARAM_KEYS:
            if key not in self.ranges:
                raise ValueError(f"ranges missing key {key!r}")
            lo, hi = self.ranges[key]
            if not (math.isfinite(lo) and math.isfinite(hi) and lo <= hi):
                raise ValueError(f"ranges[{key!r}] must be a finite interval, got {(lo, hi)!r}")
            if lo < 0:
                raise ValueError(f"ranges[{key!r}] must be nonnegative")


@dataclass(frozen=True)
class Histogram:
    bin_edges: tuple[float, ...]
    counts: tuple[int, ...]
    n_samples: int
    n_undefined: int
    n_violations: int
    max_q: float
    seed: int
    model: ModelKind
    ranges: dict[str, tuple[float, float]]
    bin_width: float

    def sidecar(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "model": self.model.value,
            "n_samples": self.n_samples,
            "n_violations": self.n_violations,
            "n_undefined": self.n_undefined,
            "max_Q": self.max_q,
            "seed": self.seed,
            "bin_width": self.bin_width,
            "ranges": {k: list(v) for k, v in self.ranges.items()},
        }


def draw_samples(spec: SamplingSpec) -> np.ndarray:
    """(n_samples, 5) parameter draws in PARAM_KEYS column order, Philox keyed by seed."""
    rng = np.random.Generator(np.random.Philox(key=spec.seed))
    cols = [rng.uniform(spec.ranges[k][0], spec.ranges[k][1], size=spec.n_samples) for k in PARAM_KEYS]
    return np.column_stack(cols) if spec.n_samples else np.empty((0, 5))


def sample_kur_values(spec: SamplingSpec, kind: ModelKind) -> tuple[np.ndarray, int]:
    """Q at every defined draw (vectorized closed forms), plus the undefined count."""
    draws = draw_samples(spec)
    if draws.shape[0] == 0:
        return np.empty(0), 0
    gh, gc, nh, nc, lam = (draws[:, i] for i in range(5))
    defined = (nh != nc) & (lam > 0.0)
    if kind is ModelKind.CLASSICAL_II:
        # matched classical rate is undefined at n_h = n_c = 0
        defined &= (gh * nh + gc * nc) > 0.0
    gh, gc, nh, nc, lam = (v[defined] for v in (gh, gc, nh, nc, lam))
    with np.errstate(divide="ignore", invalid="ignore"):
        if kind.is_quantum:
            q = analytic.kur_quantifier_arrays(gh, gc, nh, nc, lam, kind)
        else:
            current = analytic.current_closed_arrays(gh, gc, nh, nc, lam, kind)
            fano = analytic.fano_closed_arrays(gh, gc, nh, nc, lam, kind)
            activity = analytic.activity_closed_arrays(gh, gc, nh, nc, lam, kind)
            q = current / (activity * fano)
    q = np.asarray(q, dtype=float)
    finite = np.isfinite(q)
    n_undefined = int(np.count_nonzero(~defined)) + int(np.count_nonzero(~finite))
    return q[finite], n_undefined


def run_sampling(spec: SamplingSpec, kind: ModelKind) -> Histogram:
    """Histogram of Q over uniform draws; violation count = samples with Q > 1."""
    q, n_undefined = sample_kur_values(spec, kind)
    bw = spec.bin_width
    if q.size:
        n_bins = max(1, int(math.floor(float(q.max()) / bw)) + 1)
        idx = np.minimum((q / bw).astype(np.int64), n_bins - 1)
        counts = np.bincount(idx, minlength=n_bins)
        max_q = float(q.max())
    else:
        n_bins, counts, max_q = 0, np.empty(0, dtype=np.int64), 0.0
    edges = tuple((bw * i) for i in range(n_bins + 1))
    return Histogram(
        bin_edges=edges,
        counts=tuple(int(c) for c in counts),
        n_samples=spec.n_samples,
        n_undefined=n_undefined,
        n_violations=int(np.count_nonzero(q > 1.0)),
        max_q=max_q,
        seed=spec.seed,
        model=kind,
        ranges=dict(spec.ranges),
        bin_width=bw,
    )


# --- writers ------------------------------------------------------------------


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_sweep_csv(rows: list[dict], path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(f"# schema_version={SCHEMA_VERSION}\n")
        writer = csv.writer(fh)
        writer.writerow(SWEEP_COLUMNS)
        for row in rows:
            writer.writerow([_cell(row[c]) for c in SWEEP_COLUMNS])


def write_histogram_csv(hist: Histogram, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(f"# schema_version={SCHEMA_VERSION}\n")
        writer = csv.writer(fh)
        writer.writerow(["bin_left", "bin_right", "count"])
        for i, count in enumerate(hist.counts):
            writer.writerow([_cell(hist.bin_edges[i]), _cell(hist.bin_edges[i + 1]), count])


def write_histogram_sidecar(hist: Histogram, path) -> None:
    with open(path, "w") as fh:
        json.dump(hist.sidecar(), fh, indent=2, sort_keys=True)
        fh.write("\n")
