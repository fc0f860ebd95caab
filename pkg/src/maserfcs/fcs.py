"""Counting statistics of the cold-bath photon stream, by two independent routes.

Conventions: the current I is the net emission rate into the cold bath
(cycles per unit time); the scaled variance is the long-time limit
DI = lim_{t->inf} t * var(I(t)). The Fano factor is DI/I, the dynamical
activity A the mean total jump rate over all bath (and, classically, drive)
channels, and the kinetic-uncertainty quantifier Q = I^2 / (A * DI), with
Q > 1 meaning the classical kinetic bound is violated.

Primary route: characteristic-polynomial coefficients of the tilted
generator carried as second-order jets in the counting field, giving
    I  = -a_0' / a_1,
    DI = -(a_0'' + 2 I (a_1' + a_2 I)) / a_1,
with a_k' = i d/dchi a_k at chi = 0. Cross-check route: central finite
differences of the dominant (largest-real-part) eigenvalue of the tilted
generator over the five-point stencil {0, +-h, +-2h}.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .jets import ACCUM_DTYPE, JetMatrix, charpoly_coefficients
from .liouvillian import Superoperator, basis_for, build_tilted, jump_channels
from .params import ModelKind, ValidatedParams
from .steadystate import DegenerateStateError, SteadyState, solve_null

# |a_1| below this times ||L||^(dim-1) means the zero eigenvalue is not simple.
A1_DEGENERACY_TOL = 1e-14
# Residual imaginary parts of cumulants must stay below this (relative).
IMAG_TOL = 1e-10
# Current magnitudes below this (times max(1, activity)) count as zero current.
ZERO_CURRENT_TOL = 1e-13

DEFAULT_SPECTRAL_STEP = 1e-3


class SpectralGapWarning(UserWarning):
    """The second eigenvalue's real part (numerically) touches the dominant one."""


@dataclass(frozen=True)
class FcsResult:
    """Steady state plus every derived statistic at one parameter point.

    fano, ratio_activity_current, and kur_q are None when the current
    vanishes (the undefined marker; never NaN).
    """

    kind: ModelKind
    state: SteadyState
    current: float
    variance: float
    activity: float
    fano: float | None
    ratio_activity_current: float | None
    kur_q: float | None

    @property
    def undefined(self) -> bool:
        return self.fano is None

    def as_dict(self) -> dict:
        return {
            "model": self.kind.value,
            "populations": self.state.populations,
            "coherence_imag": None if self.state.coherence is None else self.state.coherence.imag,
            "current": self.current,
            "variance": self.variance,
            "activity": self.activity,
            "fano": self.fano,
            "ratio_activity_current": self.ratio_activity_current,
            "kur_q": self.kur_q,
            "undefined_flag": int(self.undefined),
        }


def _real_checked(z: complex, what: str, scale: float) -> float:
    if abs(z.imag) > IMAG_TOL * max(abs(z.real), scale):
        raise DegenerateStateError(f"{what} has non-negligible imaginary part {z.imag!r}")
    return z.real


def cumulants_charpoly(params: ValidatedParams, kind: ModelKind) -> tuple[float, float]:
    """Mean current and scaled variance from jet-valued charpoly coefficients."""
    gen = build_tilted(params, kind, 0.0)
    jm = JetMatrix.from_superoperator(gen).balanced()
    coeffs = charpoly_coefficients(jm)
    a0, a1, a2 = coeffs[0], coeffs[1], coeffs[2]
    scale = float(np.max(np.abs(jm.v.astype(complex)))) or 1.0
    if abs(a1.v) < A1_DEGENERACY_TOL * scale ** (gen.dim - 1):
        raise DegenerateStateError(
            f"charpoly coefficient a_1 = {a1.v!r} is negligible: zero eigenvalue not simple"
        )
    current = -a0.d1 / a1.v
    variance = -(a0.d2 + 2.0 * current * (a1.d1 + a2.v * current)) / a1.v
    rate_scale = float(np.max(np.abs(gen.entries)))
    return (
        _real_checked(complex(current), "current", rate_scale),
        _real_checked(complex(variance), "scaled variance", rate_scale),
    )


def _lu_solve_extended(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Partial-pivot LU solve in extended precision (tiny dense systems)."""
    n = a.shape[0]
    a = a.astype(ACCUM_DTYPE).copy()
    x = b.astype(ACCUM_DTYPE).copy()
    for k in range(n - 1):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if p != k:
            a[[k, p]] = a[[p, k]]
            x[[k, p]] = x[[p, k]]
        pivot = a[k, k]
        if pivot == 0.0:
            raise ZeroDivisionError("singular matrix in extended-precision solve")
        for i in range(k + 1, n):
            m = a[i, k] / pivot
            a[i, k + 1:] -= m * a[k, k + 1:]
            x[i] -= m * x[k]
    if a[-1, -1] == 0.0:
        raise ZeroDivisionError("singular matrix in extended-precision solve")
    for i in range(n - 1, -1, -1):
        x[i] = (x[i] - a[i, i + 1:] @ x[i + 1:]) / a[i, i]
    return x


def dominant_eigenvalue(mat: np.ndarray, refine: bool = True) -> complex:
    """Eigenvalue with the largest real part (ties broken by smallest |imag|).

    Seeded by LAPACK, then refined by a few extended-precision inverse
    iterations: five-point second-derivative stencils amplify eigenvalue
    noise by 1/h^2, and plain double precision is not accurate enough for
    the route-agreement tolerance.
    """
    vals, vecs = np.linalg.eig(mat)
    order = sorted(range(len(vals)), key=lambda i: (-vals[i].real, abs(vals[i].imag)))
    mu = vals[order[0]]
    if not refine:
        return complex(mu)
    v = vecs[:, order[0]].astype(ACCUM_DTYPE)
    a = mat.astype(ACCUM_DTYPE)
    n = mat.shape[0]
    scale = float(np.max(np.abs(mat))) or 1.0
    mu = ACCUM_DTYPE(mu.real) + 1j * ACCUM_DTYPE(mu.imag)
    eye = np.eye(n, dtype=ACCUM_DTYPE)
    for _ in range(3):
        shift = mu
        try:
            w = _lu_solve_extended(a - shift * eye, v)
        except ZeroDivisionError:
            # exactly singular shift: nudge by a few ulps of the matrix scale
            shift = mu + 16 * np.finfo(np.longdouble).eps * scale
            try:
                w = _lu_solve_extended(a - shift * eye, v)
            except ZeroDivisionError:
                break
        norm = np.sqrt(np.abs(np.vdot(w, w)))
        if not np.isfinite(float(norm)) or float(norm) == 0.0:
            break
        v = w / norm
        mu_new = np.vdot(v, a @ v) / np.vdot(v, v)
        if not np.isfinite(complex(mu_new).real):
            break
        mu = mu_new
    return complex(mu)


def spectral_gap(gen: Superoperator) -> float:
    """Real-part separation of the two slowest eigenvalues of the bare generator."""
    vals = np.linalg.eigvals(gen.bare())
    reals = np.sort(vals.real)[::-1]
    return float(reals[0] - reals[1])


def cumulants_spectral(
    params: ValidatedParams,
    kind: ModelKind,
    h: float = DEFAULT_SPECTRAL_STEP,
) -> tuple[float, float]:
    """Current and scaled variance from finite differences of the dominant eigenvalue.

    Fourth-order central differences over chi in {0, +-h, +-2h}:
        I  = Re[i (xi(-2h) - 8 xi(-h) + 8 xi(h) - xi(2h)) / (12 h)],
        DI = -(-xi(2h) + 16 xi(h) - 30 xi(0) + 16 xi(-h) - xi(-2h)) / (12 h^2).

    Warns (SpectralGapWarning) when the bare generator's two slowest
    eigenvalues are within 1e-10 of each other, in which case the dominant
    branch is ill-defined and the values are unreliable.
    """
    if not (1e-6 <= h <= 1e-2):
        raise ValueError(f"spectral step h must lie in [1e-6, 1e-2], got {h!r}")
    gen = build_tilted(params, kind, 0.0)
    if spectral_gap(gen) < 1e-10:
        warnings.warn(
            "spectral gap collapsed: dominant eigenvalue branch is ill-defined",
            SpectralGapWarning,
            stacklevel=2,
        )
    xi = [dominant_eigenvalue(gen.at_chi(k * h)) for k in (-2, -1, 0, 1, 2)]
    d1 = (xi[0] - 8.0 * xi[1] + 8.0 * xi[3] - xi[4]) / (12.0 * h)
    d2 = (-xi[4] + 16.0 * xi[3] - 30.0 * xi[2] + 16.0 * xi[1] - xi[0]) / (12.0 * h * h)
    return (1j * d1).real, (-d2).real


def dynamical_activity(params: ValidatedParams, kind: ModelKind, state: SteadyState | None = None) -> float:
    """Mean total jump rate: sum over channels of rate times source population.

    Quantum kinds sum the four bath channels; classical kinds add the two
    incoherent-drive channels at the matched classical rate.
    """
    if state is None:
        state = solve_null(build_tilted(params, kind, 0.0))
    return sum(rate * state.populations[src] for src, _dst, rate in jump_channels(params, kind))


def assemble(params: ValidatedParams, kind: ModelKind) -> FcsResult:
    """Full statistics record: charpoly cumulants, activity, and ratios.

    Zero current (n_h = n_c or lambda = 0, or numerically indistinguishable
    from it) yields None for fano / ratio / Q.
    """
    state = solve_null(build_tilted(params, kind, 0.0))
    current, variance = cumulants_charpoly(params, kind)
    activity = dynamical_activity(params, kind, state)
    if abs(current) <= ZERO_CURRENT_TOL * max(1.0, activity):
        return FcsResult(kind, state, current, variance, activity, None, None, None)
    fano = variance / current
    ratio = activity / current
    kur_q = current * current / (activity * variance)
    return FcsResult(kind, state, current, variance, activity, fano, ratio, kur_q)
