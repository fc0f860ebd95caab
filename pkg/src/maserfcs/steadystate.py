"""Steady states: null-space solver and the printed closed-form solutions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .liouvillian import COHERENCE_LABEL, Superoperator, basis_for
from .params import ModelKind, ValidatedParams

# Second singular value below this fraction of the largest means the zero
# eigenvalue is not simple (no unique steady state).
DEGENERACY_TOL = 1e-8
NEGATIVE_POP_TOL = 1e-12


class DegenerateStateError(ValueError):
    """The generator's null space is not one-dimensional (or a closed form blew up)."""


@dataclass(frozen=True)
class SteadyState:
    """Normalized steady state: populations by label, plus the coherence pair.

    coherence is rho_10 (first configuration) or rho_g0 (second); None for the
    classical variants. clamped_labels records populations nudged up from
    tiny negative round-off.
    """

    kind: ModelKind
    populations: dict[str, float]
    coherence: complex | None
    clamped_labels: tuple[str, ...] = ()

    def population_vector(self) -> np.ndarray:
        basis = basis_for(self.kind)
        return np.array([self.populations[l] for l in basis.population_labels])

    def as_vector(self) -> np.ndarray:
        """Full vectorized density matrix in the model's basis ordering."""
        basis = basis_for(self.kind)
        out = np.zeros(basis.dim, dtype=complex)
        for i, label in enumerate(basis.labels):
            if label in self.populations:
                out[i] = self.populations[label]
            elif label == COHERENCE_LABEL[self.kind]:
                out[i] = self.coherence
            else:
                out[i] = np.conj(self.coherence)
        return out


def _package_state(kind: ModelKind, vec: np.ndarray) -> SteadyState:
    basis = basis_for(kind)
    npop = basis.n_populations
    pops = vec[:npop].real.copy()
    clamped = []
    for i, label in enumerate(basis.population_labels):
        if pops[i] < 0:
            if pops[i] < -NEGATIVE_POP_TOL:
                raise DegenerateStateError(
                    f"{label} = {pops[i]!r} is negative beyond round-off; generator is not a valid steady state"
                )
            pops[i] = 0.0
            clamped.append(label)
    coherence = None
    if kind.is_quantum:
        coherence = complex(vec[basis.index(COHERENCE_LABEL[kind])])
    return SteadyState(
        kind=kind,
        populations=dict(zip(basis.population_labels, pops.tolist())),
        coherence=coherence,
        clamped_labels=tuple(clamped),
    )


def solve_null(gen: Superoperator) -> SteadyState:
    """Unique normalized right null vector of the chi = 0 generator.

    Dense SVD; the smallest singular direction is the steady state. Raises
    DegenerateStateError if a second singular value sits below
    DEGENERACY_TOL times the largest (zero eigenvalue not simple).
    """
    if gen.chi != 0.0:
        raise ValueError("steady state is defined for the untilted (chi = 0) generator")
    mat = gen.entries
    _, s, vh = np.linalg.svd(mat)
    if s[0] == 0.0:
        raise DegenerateStateError("zero generator has no unique steady state")
    if s[-2] < DEGENERACY_TOL * s[0]:
        raise DegenerateStateError(
            f"null space is (numerically) multi-dimensional: singular values {s.tolist()}"
        )
    vec = vh[-1].conj()
    npop = gen.basis.n_populations
    trace = vec[:npop].sum()
    if abs(trace) < 1e-12:
        raise DegenerateStateError("null vector carries no population weight")
    vec = vec / trace
    residual = np.linalg.norm(mat @ vec, ord=np.inf)
    scale = np.linalg.norm(mat, ord=np.inf)
    if residual > 1e-10 * scale:
        raise DegenerateStateError(
            f"steady-state residual {residual!r} exceeds 1e-10 * generator norm {scale!r}"
        )
    return _package_state(gen.kind, vec)


def closed_form_state(params: ValidatedParams, kind: ModelKind) -> SteadyState:
    """Printed rational-function steady state of either quantum configuration.

    First configuration, common denominator
    den = 4 lam^2 [gh(3nh+1) + gc(3nc+1)] + (3 nh nc + 2nh + 2nc + 1) B gh gc:
        rho_10 = 2i (nc - nh) gh gc lam / den
        rho_gg = B [4 lam^2 + (1+nc)(1+nh) gc gh] / den
        rho_00 = [nc (1+nh) B gc gh + 4 lam^2 B'] / den
        rho_11 = [nh (1+nc) B gc gh + 4 lam^2 B'] / den
    with B = gc(1+nc) + gh(1+nh), B' = gc nc + gh nh; the second configuration
    mirrors it with its own denominator and B' in place of B.
    """
    if not kind.is_quantum:
        raise ValueError("closed-form steady states are written for the quantum configurations")
    gh, gc = params.gamma_h, params.gamma_c
    nh, nc = params.n_h, params.n_c
    lam = params.coupling
    lam2 = lam * lam
    b = gc * (1.0 + nc) + gh * (1.0 + nh)
    bp = gc * nc + gh * nh

    if kind is ModelKind.QUANTUM_I:
        den = 4.0 * lam2 * (gh * (3.0 * nh + 1.0) + gc * (3.0 * nc + 1.0)) \
            + (3.0 * nh * nc + 2.0 * nh + 2.0 * nc + 1.0) * b * gh * gc
        if den == 0.0:
            raise DegenerateStateError("closed-form denominator vanished (first configuration)")
        coh = 2j * (nc - nh) * gh * gc * lam / den
        vec = np.array([
            b * (4.0 * lam2 + (1.0 + nc) * (1.0 + nh) * gc * gh) / den,
            (nc * (1.0 + nh) * b * gc * gh + 4.0 * lam2 * bp) / den,
            (nh * (1.0 + nc) * b * gc * gh + 4.0 * lam2 * bp) / den,
            coh,
            np.conj(coh),
        ])
    else:
        den = 4.0 * lam2 * (gh * (3.0 * nh + 2.0) + gc * (3.0 * nc + 2.0)) \
            + (3.0 * nh * nc + nh + nc) * bp * gh * gc
        if den == 0.0:
            raise DegenerateStateError("closed-form denominator vanished (second configuration)")
        coh = 2j * (nc - nh) * gh * gc * lam / den
        vec = np.array([
            bp * (4.0 * lam2 + nc * nh * gc * gh) / den,
            (nh * (1.0 + nc) * bp * gh * gc + 4.0 * lam2 * b) / den,
            (nc * (1.0 + nh) * bp * gh * gc + 4.0 * lam2 * b) / den,
            np.conj(coh),
            coh,
        ])
    return _package_state(kind, vec)
