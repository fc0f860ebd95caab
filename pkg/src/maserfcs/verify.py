"""Cross-module property audit: closed forms against independent numerics.

Draws parameter tuples from the histogram sampling box and checks, for every
draw, the identities that hold by construction:

  * closed-form current / Fano / activity / Q equal the jet-charpoly values
    (all four variants),
  * classical steady-state current and populations coincide with the quantum
    ones at the matched drive rate,
  * the activity/current ratio of the first configuration dominates the
    second's, and the coherence of the first decays strictly faster,
  * the classical-minus-quantum Fano gap matches its printed closed form and
    is nonnegative in the engine regime,
  * any KUR violation (Q > 1) comes with a sub-Poissonian Fano factor,
  * optionally, charpoly and spectral cumulant routes agree.

Each check either passes or contributes a Failure naming the property and a
reproducer tuple. The command-line `verify` subcommand exits nonzero when
any failure survives.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import analytic
from .fcs import assemble, cumulants_charpoly, cumulants_spectral
from .liouvillian import build_tilted
from .params import EngineParams, ModelKind, ValidatedParams, validate
from .steadystate import solve_null
from .sweep import DEFAULT_SAMPLING_RANGES, PARAM_KEYS

FORMULA_RTOL = 1e-9
CLASSICAL_EQUALITY_RTOL = 1e-10
GAP_RTOL = 1e-9
ROUTE_RTOL = 1e-6
ROUTE_ATOL = 1e-9


@dataclass(frozen=True)
class Failure:
    prop: str
    params: dict
    detail: str

    def reproducer(self) -> str:
        keys = " ".join(f"--{k.replace('_', '-')} {v!r}" for k, v in self.params.items())
        return f"{self.prop}: {self.detail} [{keys}]"


def draw_box(n_draws: int, seed: int, ranges: dict | None = None) -> list[ValidatedParams]:
    rng = np.random.Generator(np.random.Philox(key=seed))
    ranges = dict(DEFAULT_SAMPLING_RANGES if ranges is None else ranges)
    cols = {k: rng.uniform(*ranges[k], size=n_draws) for k in PARAM_KEYS}
    out = []
    for i in range(n_draws):
        out.append(validate(EngineParams(
            gamma_h=float(cols["gamma_h"][i]),
            gamma_c=float(cols["gamma_c"][i]),
            n_h=float(cols["n_h"][i]),
            n_c=float(cols["n_c"][i]),
            coupling=float(cols["lambda"][i]),
        )))
    return out


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def check_formula_fidelity(p: ValidatedParams) -> list[Failure]:
    """Closed forms vs jet numerics for all four variants."""
    fails = []
    for kind in ModelKind:
        numeric = assemble(p, kind)
        closed_current = analytic.current_closed(p, kind)
        closed_fano = analytic.fano_closed(p, kind)
        closed_activity = analytic.activity_closed(p, kind)
        if kind.is_quantum:
            closed_q = analytic.kur_quantifier(p, kind)
        else:
            closed_q = analytic.kur_from_components(closed_current, closed_fano, closed_activity)
        pairs = [("current", closed_current, numeric.current),
                 ("activity", closed_activity, numeric.activity)]
        if closed_fano is not None and numeric.fano is not None:
            pairs.append(("fano", closed_fano, numeric.fano))
            pairs.append(("Q", closed_q, numeric.kur_q))
        for name, closed, num in pairs:
            if _rel(closed, num) > FORMULA_RTOL:
                fails.append(Failure(
                    f"formula:{name}:{kind.value}", p.as_dict(),
                    f"closed={closed!r} numeric={num!r} rel={_rel(closed, num):.3e}"))
    return fails


def check_classical_equality(p: ValidatedParams) -> list[Failure]:
    """Matched classical variants reproduce the quantum current and populations."""
    fails = []
    pairs = [(ModelKind.QUANTUM_I, ModelKind.CLASSICAL_I)]
    if p.gamma_h * p.n_h + p.gamma_c * p.n_c > 0.0:
        pairs.append((ModelKind.QUANTUM_II, ModelKind.CLASSICAL_II))
    for qkind, ckind in pairs:
        iq, _ = cumulants_charpoly(p, qkind)
        ic, _ = cumulants_charpoly(p, ckind)
        if abs(iq - ic) > CLASSICAL_EQUALITY_RTOL * max(abs(iq), 1e-300):
            fails.append(Failure(
                f"classical-current:{ckind.value}", p.as_dict(),
                f"quantum={iq!r} classical={ic!r}"))
        sq = solve_null(build_tilted(p, qkind, 0.0))
        sc = solve_null(build_tilted(p, ckind, 0.0))
        for label, value in sc.populations.items():
            if abs(value - sq.populations[label]) > CLASSICAL_EQUALITY_RTOL:
                fails.append(Failure(
                    f"classical-populations:{ckind.value}", p.as_dict(),
                    f"{label}: quantum={sq.populations[label]!r} classical={value!r}"))
    return fails


def check_orderings(p: ValidatedParams) -> list[Failure]:
    """R_I >= R_II in the engine regime; coherence decay always faster in I."""
    fails = []
    rate1 = analytic.decoherence_rate(p, ModelKind.QUANTUM_I)
    rate2 = analytic.decoherence_rate(p, ModelKind.QUANTUM_II)
    if not rate1 > rate2:
        fails.append(Failure("decoherence-ordering", p.as_dict(), f"rate_I={rate1!r} rate_II={rate2!r}"))
    r1 = analytic.ratio_activity_current(p, ModelKind.QUANTUM_I)
    r2 = analytic.ratio_activity_current(p, ModelKind.QUANTUM_II)
    if r1 is not None and r2 is not None and r1 < r2 * (1.0 - 1e-12):
        fails.append(Failure("ratio-ordering", p.as_dict(), f"R_I={r1!r} < R_II={r2!r}"))
    return fails


def check_fano_gap(p: ValidatedParams) -> list[Failure]:
    """Printed gap formula equals classical-minus-quantum Fano; >= 0 for n_h > n_c."""
    fails = []
    pairs = [(ModelKind.QUANTUM_I, ModelKind.CLASSICAL_I)]
    if p.gamma_h * p.n_h + p.gamma_c * p.n_c > 0.0:
        pairs.append((ModelKind.QUANTUM_II, ModelKind.CLASSICAL_II))
    for qkind, ckind in pairs:
        gap = analytic.fano_gap(p, qkind)
        fq = analytic.fano_closed(p, qkind)
        fc = analytic.fano_closed(p, ckind)
        if fq is None or fc is None:
            continue
        direct = fc - fq
        scale = max(abs(fq), abs(fc), 1.0)
        if abs(gap - direct) > GAP_RTOL * scale:
            fails.append(Failure(
                f"fano-gap:{qkind.value}", p.as_dict(),
                f"formula={gap!r} direct={direct!r}"))
        if p.engine_regime and gap < -1e-15:
            fails.append(Failure(f"fano-gap-sign:{qkind.value}", p.as_dict(), f"gap={gap!r} < 0"))
    return fails


def check_necessary_condition(p: ValidatedParams) -> list[Failure]:
    """Q > 1 requires Fano < 1 (and activity >= |current| regardless)."""
    fails = []
    for kind in (ModelKind.QUANTUM_I, ModelKind.QUANTUM_II):
        res = assemble(p, kind)
        if res.activity + 1e-15 < abs(res.current):
            fails.append(Failure(
                f"activity-bound:{kind.value}", p.as_dict(),
                f"activity={res.activity!r} < |current|={abs(res.current)!r}"))
        if res.kur_q is not None and res.kur_q > 1.0 and not res.fano < 1.0:
            fails.append(Failure(
                f"violation-needs-subpoisson:{kind.value}", p.as_dict(),
                f"Q={res.kur_q!r} with fano={res.fano!r}"))
    return fails


def check_route_equivalence(p: ValidatedParams, h: float = 1e-3) -> list[Failure]:
    """Charpoly jets vs dominant-eigenvalue finite differences."""
    fails = []
    for kind in ModelKind:
        ic, vc = cumulants_charpoly(p, kind)
        is_, vs = cumulants_spectral(p, kind, h=h)
        for name, a, b in (("current", ic, is_), ("variance", vc, vs)):
            if abs(a - b) > max(ROUTE_RTOL * abs(a), ROUTE_ATOL):
                fails.append(Failure(
                    f"route:{name}:{kind.value}", p.as_dict(),
                    f"charpoly={a!r} spectral={b!r}"))
    return fails


def run_audit(n_draws: int, seed: int, include_routes: bool = True,
              route_stride: int = 10) -> tuple[int, list[Failure]]:
    """Run every check over n_draws box samples; returns (checks run, failures)."""
    if n_draws < 1:
        raise ValueError("n_draws must be >= 1")
    failures: list[Failure] = []
    n_checks = 0
    for i, p in enumerate(draw_box(n_draws, seed)):
        if p.degenerate:
            continue
        failures += check_formula_fidelity(p)
        failures += check_classical_equality(p)
        failures += check_orderings(p)
        failures += check_fano_gap(p)
        failures += check_necessary_condition(p)
        n_checks += 5
        if include_routes and i % route_stride == 0:
            failures += check_route_equivalence(p)
            n_checks += 1
    return n_checks, failures
