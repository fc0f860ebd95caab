"""Closed-form steady-state statistics for all four engine variants.

Every expression here is a verbatim transcription of a published rational
function (or its stated specialization); the numerical FCS routes exist
precisely to audit these against an independent computation. All functions
accept numpy arrays broadcast over the parameter fields, so sweeps and
million-sample histograms evaluate vectorized.

Shorthand combinations (AggregateCoefficients):
    B  = gc (1+nc) + gh (1+nh)          B' = gc nc + gh nh
    C  = 3 nh nc + 2 nh + 2 nc + 1      C' = 3 nh nc + nh + nc
    D  = gc (1+3nc) + gh (1+3nh)        D' = gc (2+3nc) + gh (2+3nh)
    G  = 8 lam^2 + gc gh (10 nh nc + 7 nc + 7 nh + 4)
         + gc^2 (nc+1)(2nc+1) + gh^2 (nh+1)(2nh+1)
    G' = 8 lam^2 + gc gh (10 nh nc + 3 nc + 3 nh)
         + gc^2 nc (2nc+1) + gh^2 nh (2nh+1)
    H  = 4 lam^2 + (1+nc)(1+nh) gc gh   H' = 4 lam^2 + nc nh gc gh
and the common denominators
    den  = 4 lam^2 D  + B  C  gc gh  (first configuration),
    den' = 4 lam^2 D' + B' C' gc gh  (second configuration).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import Frequencies, ModelKind, ValidatedParams
from .steadystate import SteadyState

ArrayLike = float | np.ndarray


@dataclass(frozen=True)
class AggregateCoefficients:
    """The shorthand combinations entering every closed form."""

    b: ArrayLike
    bp: ArrayLike
    c: ArrayLike
    cp: ArrayLike
    d: ArrayLike
    dp: ArrayLike
    g: ArrayLike
    gp: ArrayLike
    h: ArrayLike
    hp: ArrayLike


def aggregate(gh: ArrayLike, gc: ArrayLike, nh: ArrayLike, nc: ArrayLike, lam: ArrayLike) -> dict:
    """All shorthand combinations plus both denominators, as a dict of arrays."""
    lam2 = lam * lam
    b = gc * (1.0 + nc) + gh * (1.0 + nh)
    bp = gc * nc + gh * nh
    c = 3.0 * nh * nc + 2.0 * nh + 2.0 * nc + 1.0
    cp = 3.0 * nh * nc + nh + nc
    d = gc * (1.0 + 3.0 * nc) + gh * (1.0 + 3.0 * nh)
    dp = gc * (2.0 + 3.0 * nc) + gh * (2.0 + 3.0 * nh)
    g = (8.0 * lam2 + gc * gh * (10.0 * nh * nc + 7.0 * nc + 7.0 * nh + 4.0)
         + gc * gc * (nc + 1.0) * (2.0 * nc + 1.0) + gh * gh * (nh + 1.0) * (2.0 * nh + 1.0))
    gp = (8.0 * lam2 + gc * gh * (10.0 * nh * nc + 3.0 * nc + 3.0 * nh)
          + gc * gc * nc * (2.0 * nc + 1.0) + gh * gh * nh * (2.0 * nh + 1.0))
    h = 4.0 * lam2 + (1.0 + nc) * (1.0 + nh) * gc * gh
    hp = 4.0 * lam2 + nc * nh * gc * gh
    return {
        "b": b, "bp": bp, "c": c, "cp": cp, "d": d, "dp": dp,
        "g": g, "gp": gp, "h": h, "hp": hp,
        "den1": 4.0 * lam2 * d + b * c * gc * gh,
        "den2": 4.0 * lam2 * dp + bp * cp * gc * gh,
        "lam2": lam2,
    }


def coefficients(params: ValidatedParams) -> AggregateCoefficients:
    a = aggregate(params.gamma_h, params.gamma_c, params.n_h, params.n_c, params.coupling)
    return AggregateCoefficients(
        b=a["b"], bp=a["bp"], c=a["c"], cp=a["cp"], d=a["d"], dp=a["dp"],
        g=a["g"], gp=a["gp"], h=a["h"], hp=a["hp"],
    )


def _fields(params) -> tuple:
    return params.gamma_h, params.gamma_c, params.n_h, params.n_c, params.coupling


def _classical_rate_arrays(gh, gc, nh, nc, lam, first: bool):
    if first:
        return 4.0 * lam * lam / (gh * (1.0 + nh) + gc * (1.0 + nc))
    return 4.0 * lam * lam / (gh * nh + gc * nc)


# --- currents ---------------------------------------------------------------

def current_closed_arrays(gh, gc, nh, nc, lam, kind: ModelKind):
    a = aggregate(gh, gc, nh, nc, lam)
    if kind is ModelKind.QUANTUM_I:
        return 4.0 * (nh - nc) * gh * gc * a["lam2"] / a["den1"]
    if kind is ModelKind.QUANTUM_II:
        return 4.0 * (nh - nc) * gh * gc * a["lam2"] / a["den2"]
    if kind is ModelKind.CLASSICAL_I:
        g = _classical_rate_arrays(gh, gc, nh, nc, lam, True)
        return (nh - nc) * g * gc * gh / (g * a["d"] + a["c"] * gc * gh)
    g = _classical_rate_arrays(gh, gc, nh, nc, lam, False)
    return (nh - nc) * g * gc * gh / (g * a["dp"] + a["cp"] * gc * gh)


def current_closed(params: ValidatedParams, kind: ModelKind) -> float:
    """Printed steady-state current of the chosen variant."""
    return float(current_closed_arrays(*_fields(params), kind))


# --- Fano factors -----------------------------------------------------------

def fano_closed_arrays(gh, gc, nh, nc, lam, kind: ModelKind):
    a = aggregate(gh, gc, nh, nc, lam)
    if kind is ModelKind.QUANTUM_I:
        return (2.0 * nh * nc + nh + nc
                - 8.0 * gc * gh * a["lam2"] * (nh - nc) ** 2 * a["g"] / a["den1"] ** 2) / (nh - nc)
    if kind is ModelKind.QUANTUM_II:
        return (2.0 * nh * nc + nh + nc
                - 8.0 * gc * gh * a["lam2"] * (nh - nc) ** 2 * a["gp"] / a["den2"] ** 2) / (nh - nc)
    drive_damp = gc * (1.0 + 2.0 * nc) + gh * (1.0 + 2.0 * nh)
    if kind is ModelKind.CLASSICAL_I:
        g = _classical_rate_arrays(gh, gc, nh, nc, lam, True)
        den = g * a["d"] + a["c"] * gc * gh
        return ((2.0 * nh * nc + nh + nc) / (nh - nc)
                - 2.0 * (nh - nc) * g * gc * gh * (drive_damp + 2.0 * g) / den ** 2)
    g = _classical_rate_arrays(gh, gc, nh, nc, lam, False)
    den = g * a["dp"] + a["cp"] * gc * gh
    return ((2.0 * nh * nc + nh + nc) / (nh - nc)
            - 2.0 * (nh - nc) * g * gc * gh * (drive_damp + 2.0 * g) / den ** 2)


def fano_closed(params: ValidatedParams, kind: ModelKind) -> float | None:
    """Printed Fano factor; None at n_h = n_c (1/(n_h - n_c) prefactor)."""
    if params.n_h == params.n_c:
        return None
    return float(fano_closed_arrays(*_fields(params), kind))


def fano_nc0_closed(params: ValidatedParams, kind: ModelKind) -> float:
    """The n_c = 0 Fano specializations (strictly below 1 for n_h > 0).

    First configuration (with the hot rate restored where the printed form
    dropped it in transcription — see the general formula at n_c = 0):
        F = 1 - 8 lam^2 gc gh nh (gc^2 + gh^2 (nh+1)(2nh+1) + gc gh (7nh+4) + 8 lam^2)
              / (4 lam^2 (gc + gh (3nh+1)) + gc gh (2nh+1)(gc + gh (nh+1)))^2
    Second configuration (printed form, verbatim):
        F = 1 - 8 lam^2 gc gh nh (gh nh (3 gc + gh (2nh+1)) + 8 lam^2)
              / (gc (gh^2 nh^2 + 8 lam^2) + 4 lam^2 gh (3nh+2))^2
    """
    gh, gc, nh, _nc, lam = _fields(params)
    lam2 = lam * lam
    if kind in (ModelKind.QUANTUM_I, ModelKind.CLASSICAL_I):
        num = 8.0 * lam2 * gc * gh * nh * (
            gc * gc + gh * gh * (nh + 1.0) * (2.0 * nh + 1.0) + gc * gh * (7.0 * nh + 4.0) + 8.0 * lam2)
        den = (4.0 * lam2 * (gc + gh * (3.0 * nh + 1.0))
               + gc * gh * (2.0 * nh + 1.0) * (gc + gh * (nh + 1.0))) ** 2
        return float(1.0 - num / den)
    num = 8.0 * lam2 * gc * gh * nh * (gh * nh * (3.0 * gc + gh * (2.0 * nh + 1.0)) + 8.0 * lam2)
    den = (gc * (gh * gh * nh * nh + 8.0 * lam2) + 4.0 * lam2 * gh * (3.0 * nh + 2.0)) ** 2
    return float(1.0 - num / den)


# --- dynamical activity -----------------------------------------------------

def activity_closed_arrays(gh, gc, nh, nc, lam, kind: ModelKind):
    a = aggregate(gh, gc, nh, nc, lam)
    if kind is ModelKind.QUANTUM_I:
        return 2.0 * a["bp"] * a["b"] * a["h"] / a["den1"]
    if kind is ModelKind.QUANTUM_II:
        return 2.0 * a["bp"] * a["b"] * a["hp"] / a["den2"]
    # classical variants: quantum activity plus the incoherent-drive jumps
    # (rate times the matching population pair; populations coincide with the
    # quantum ones by construction of the classical rate)
    if kind is ModelKind.CLASSICAL_I:
        g = _classical_rate_arrays(gh, gc, nh, nc, lam, True)
        quantum = 2.0 * a["bp"] * a["b"] * a["h"] / a["den1"]
        pop_00 = (nc * (1.0 + nh) * a["b"] * gc * gh + 4.0 * a["lam2"] * a["bp"]) / a["den1"]
        pop_11 = (nh * (1.0 + nc) * a["b"] * gc * gh + 4.0 * a["lam2"] * a["bp"]) / a["den1"]
        return quantum + g * (pop_00 + pop_11)
    g = _classical_rate_arrays(gh, gc, nh, nc, lam, False)
    quantum = 2.0 * a["bp"] * a["b"] * a["hp"] / a["den2"]
    pop_gg = (nc * (1.0 + nh) * a["bp"] * gh * gc + 4.0 * a["lam2"] * a["b"]) / a["den2"]
    pop_00 = (nh * (1.0 + nc) * a["bp"] * gh * gc + 4.0 * a["lam2"] * a["b"]) / a["den2"]
    return quantum + g * (pop_gg + pop_00)


def activity_closed(params: ValidatedParams, kind: ModelKind) -> float:
    """Printed dynamical activity (classical kinds add the drive-channel jumps)."""
    return float(activity_closed_arrays(*_fields(params), kind))


# --- ratios and the kinetic-uncertainty quantifier ---------------------------

def ratio_activity_current(params: ValidatedParams, kind: ModelKind) -> float | None:
    """Printed activity/current ratio; None off the engine regime (n_h <= n_c or lam = 0).

    R_I  = B' B (4 lam^2 + (1+nc)(1+nh) gc gh) / (2 lam^2 gc gh (nh - nc)),
    R_II = B' B (4 lam^2 + nc nh gc gh)        / (2 lam^2 gc gh (nh - nc));
    R_I >= R_II always.
    """
    gh, gc, nh, nc, lam = _fields(params)
    if nh <= nc or lam == 0.0:
        return None
    a = aggregate(gh, gc, nh, nc, lam)
    h = a["h"] if kind.is_first_configuration else a["hp"]
    return float(a["bp"] * a["b"] * h / (2.0 * a["lam2"] * gc * gh * (nh - nc)))


def kur_quantifier_arrays(gh, gc, nh, nc, lam, kind: ModelKind):
    a = aggregate(gh, gc, nh, nc, lam)
    if kind.is_first_configuration:
        h, gg, den = a["h"], a["g"], a["den1"]
    else:
        h, gg, den = a["hp"], a["gp"], a["den2"]
    bracket = (2.0 * nh * nc + nh + nc
               - 8.0 * a["lam2"] * (nh - nc) ** 2 * gc * gh * gg / den ** 2)
    return 2.0 * (nh - nc) ** 2 * gc * gh * a["lam2"] / (a["b"] * a["bp"] * h) / bracket


def kur_quantifier(params: ValidatedParams, kind: ModelKind) -> float | None:
    """Printed quantum KUR quantifier Q; None at n_h = n_c or lam = 0."""
    if not kind.is_quantum:
        raise ValueError("printed Q expressions exist for the quantum configurations only")
    gh, gc, nh, nc, lam = _fields(params)
    if nh == nc or lam == 0.0:
        return None
    return float(kur_quantifier_arrays(gh, gc, nh, nc, lam, kind))


def kur_from_components(current: float, fano: float | None, activity: float) -> float | None:
    """Q = I / (A F), for variants without a printed Q (the classical models)."""
    if fano is None or fano == 0.0 or activity == 0.0:
        return None
    return current / (activity * fano)


# --- classical-vs-quantum Fano gap -------------------------------------------

def fano_gap(params: ValidatedParams, kind: ModelKind) -> float:
    """Printed gap F_cl - F between classical and quantum Fano factors.

    DF_I  = 16 lam^2 gc^2 gh^2 (nh - nc) C  / den^2,
    DF_II = 16 lam^2 gc^2 gh^2 (nh - nc) C' / den'^2;
    nonnegative whenever n_h > n_c.
    """
    gh, gc, nh, nc, lam = _fields(params)
    a = aggregate(gh, gc, nh, nc, lam)
    if kind.is_first_configuration:
        return float(16.0 * a["lam2"] * gc * gc * gh * gh * (nh - nc) * a["c"] / a["den1"] ** 2)
    return float(16.0 * a["lam2"] * gc * gc * gh * gh * (nh - nc) * a["cp"] / a["den2"] ** 2)


def fano_gap_compact(params: ValidatedParams, kind: ModelKind) -> float | None:
    """Equivalent compact form C / (lam^2 (nh - nc)) * I^2; None when it is 0/0."""
    gh, gc, nh, nc, lam = _fields(params)
    if lam == 0.0 or nh == nc:
        return None
    a = aggregate(gh, gc, nh, nc, lam)
    c = a["c"] if kind.is_first_configuration else a["cp"]
    qkind = ModelKind.QUANTUM_I if kind.is_first_configuration else ModelKind.QUANTUM_II
    current = current_closed_arrays(gh, gc, nh, nc, lam, qkind)
    return float(c / (a["lam2"] * (nh - nc)) * current * current)


# --- coherence decay, limits, power ------------------------------------------

def decoherence_rate(params: ValidatedParams, kind: ModelKind) -> float:
    """Coherence damping rate: B/2 (first configuration) or B'/2 (second).

    The first configuration picks up the spontaneous-emission and
    zero-point terms (+1 in each occupation), so its rate always exceeds
    the second's by (gamma_h + gamma_c)/2.
    """
    gh, gc, nh, nc, _lam = _fields(params)
    if kind.is_first_configuration:
        return 0.5 * (gh * (nh + 1.0) + gc * (nc + 1.0))
    return 0.5 * (gh * nh + gc * nc)


def limit_populations(params: ValidatedParams, kind: ModelKind) -> SteadyState:
    """Analytic populations in the n_c = 0, lambda = 0 limit.

    First configuration: the lasing pair decouples, the cold pair drains into
    the ground state, and the hot pair thermalizes:
        rho_gg = (1+nh)/(1+2nh), rho_00 = 0, rho_11 = nh/(1+2nh).
    Second configuration: everything funnels into the (then absorbing) upper
    lasing state: rho_00 = 1.
    """
    nh = params.n_h
    if kind.is_first_configuration:
        pops = {"rho_gg": (1.0 + nh) / (1.0 + 2.0 * nh), "rho_00": 0.0, "rho_11": nh / (1.0 + 2.0 * nh)}
        qkind = ModelKind.QUANTUM_I if kind.is_quantum else ModelKind.CLASSICAL_I
    else:
        pops = {"rho_gg": 0.0, "rho_00": 1.0, "rho_11": 0.0}
        qkind = ModelKind.QUANTUM_II if kind.is_quantum else ModelKind.CLASSICAL_II
    coherence = 0j if qkind.is_quantum else None
    return SteadyState(kind=qkind, populations=pops, coherence=coherence)


def power_stats(current: float, variance: float, freqs: Frequencies) -> tuple[float, float]:
    """Power and scaled power variance from the current cumulants.

    P = (omega_h - omega_c) I and DP = (omega_h - omega_c)^2 DI, so the
    kinetic bound is frequency-independent: A DP / P^2 == A DI / I^2.
    """
    freqs = freqs.validated()
    gap = freqs.omega_h - freqs.omega_c
    return gap * current, gap * gap * variance
