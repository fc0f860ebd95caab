"""Dense generators for the four engine variants, tilted by a cold-bath counting field.

The density matrix is vectorized in a fixed per-model ordering (populations
first, then the coherence pair for the quantum models). The counting field
chi multiplies exactly two entries — the cold-bath emission entry by
e^{-i chi} and the absorption entry by e^{+i chi} — so the generator at
chi = 0 is the bare master-equation matrix, and the per-entry exponents are
exposed as integer tags for derivative bookkeeping.

Sign convention: the coherence sector is built in the gauge whose steady
state has Im(rho_10), Im(rho_g0) proportional to (n_c - n_h) * lambda. This
is a pure relabeling of the coherence pair (equivalently lambda -> -lambda);
populations and all counting statistics are unaffected.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .params import ModelKind, ValidatedParams


@dataclass(frozen=True)
class BasisOrdering:
    """Ordered component labels of the vectorized density matrix."""

    labels: tuple[str, ...]

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def population_labels(self) -> tuple[str, ...]:
        return tuple(l for l in self.labels if l[-2] == l[-1])

    @property
    def n_populations(self) -> int:
        return len(self.population_labels)

    def index(self, label: str) -> int:
        return self.labels.index(label)


BASIS_Q1 = BasisOrdering(("rho_gg", "rho_00", "rho_11", "rho_10", "rho_01"))
BASIS_Q2 = BasisOrdering(("rho_11", "rho_00", "rho_gg", "rho_0g", "rho_g0"))
BASIS_C1 = BasisOrdering(("rho_gg", "rho_00", "rho_11"))
BASIS_C2 = BasisOrdering(("rho_11", "rho_00", "rho_gg"))

_BASES = {
    ModelKind.QUANTUM_I: BASIS_Q1,
    ModelKind.QUANTUM_II: BASIS_Q2,
    ModelKind.CLASSICAL_I: BASIS_C1,
    ModelKind.CLASSICAL_II: BASIS_C2,
}

# Reported coherence component per quantum model.
COHERENCE_LABEL = {ModelKind.QUANTUM_I: "rho_10", ModelKind.QUANTUM_II: "rho_g0"}


def basis_for(kind: ModelKind) -> BasisOrdering:
    return _BASES[kind]


@dataclass(frozen=True)
class Superoperator:
    """Dense generator acting on the vectorized density matrix.

    entries holds the matrix evaluated at the stored chi; counting_tags holds
    the per-entry exponent s of e^{i s chi} (s = -1 cold emission, +1 cold
    absorption, 0 elsewhere), so entries == base * exp(1j * tags * chi).
    """

    kind: ModelKind
    basis: BasisOrdering
    entries: np.ndarray
    counting_tags: np.ndarray
    chi: float

    @property
    def dim(self) -> int:
        return self.basis.dim

    def entry(self, row_label: str, col_label: str) -> complex:
        return complex(self.entries[self.basis.index(row_label), self.basis.index(col_label)])

    def bare(self) -> np.ndarray:
        """The chi = 0 matrix."""
        return self.entries * np.exp(-1j * self.counting_tags * self.chi)

    def at_chi(self, chi: float) -> np.ndarray:
        """Re-tilt the generator to another value of the counting field."""
        return self.bare() * np.exp(1j * self.counting_tags * chi)

    def format_grid(self, fmt: str = "{: .6g}", sep: str = ",") -> str:
        """Labeled CSV grid of the entries, for diffing against printed matrices."""
        buf = io.StringIO()
        buf.write(sep.join([""] + list(self.basis.labels)) + "\n")
        for i, row_label in enumerate(self.basis.labels):
            cells = [row_label]
            for j in range(self.dim):
                z = self.entries[i, j]
                if z.imag == 0:
                    cells.append(fmt.format(z.real))
                else:
                    cells.append(fmt.format(z.real) + ("+" if z.imag >= 0 else "-")
                                 + fmt.format(abs(z.imag)).strip() + "j")
            buf.write(sep.join(cells) + "\n")
        return buf.getvalue()


def classical_rate(params: ValidatedParams, kind: ModelKind) -> float:
    """Incoherent drive rate matching the classical model's current to the quantum one.

    Model I: 4 lambda^2 / (gamma_h (1+n_h) + gamma_c (1+n_c));
    Model II: 4 lambda^2 / (gamma_h n_h + gamma_c n_c), undefined at n_h = n_c = 0.
    """
    lam = params.coupling
    if kind.is_first_configuration:
        return 4.0 * lam * lam / (params.gamma_h * (1.0 + params.n_h) + params.gamma_c * (1.0 + params.n_c))
    denom = params.gamma_h * params.n_h + params.gamma_c * params.n_c
    if denom == 0.0:
        raise ZeroDivisionError(
            "classical rate for the second configuration is undefined at n_h = n_c = 0"
        )
    return 4.0 * lam * lam / denom


def build_tilted(params: ValidatedParams, kind: ModelKind, chi: float = 0.0) -> Superoperator:
    """Generator of the requested variant with counting factors on the cold-bath pair.

    All four variants count the same physical channel (cold-bath emission and
    absorption); the incoherent-drive channel of the classical variants is
    never counted in the current.
    """
    gh, gc = params.gamma_h, params.gamma_c
    nh, nc = params.n_h, params.n_c
    lam = params.coupling
    il = 1j * lam
    basis = _BASES[kind]
    dim = basis.dim

    base = np.zeros((dim, dim), dtype=complex)
    tags = np.zeros((dim, dim), dtype=np.int8)

    if kind is ModelKind.QUANTUM_I:
        half_b = 0.5 * (gh * (1.0 + nh) + gc * (1.0 + nc))
        base[:] = [
            [-(gh * nh + gc * nc), gc * (1.0 + nc), gh * (1.0 + nh), 0.0, 0.0],
            [gc * nc, -gc * (1.0 + nc), 0.0, il, -il],
            [gh * nh, 0.0, -gh * (1.0 + nh), -il, il],
            [0.0, il, -il, -half_b, 0.0],
            [0.0, -il, il, 0.0, -half_b],
        ]
        emission, absorption = ("rho_gg", "rho_00"), ("rho_00", "rho_gg")
    elif kind is ModelKind.QUANTUM_II:
        half_bp = 0.5 * (gh * nh + gc * nc)
        base[:] = [
            [-(gh * (1.0 + nh) + gc * (1.0 + nc)), gc * nc, gh * nh, 0.0, 0.0],
            [gc * (1.0 + nc), -gc * nc, 0.0, il, -il],
            [gh * (1.0 + nh), 0.0, -gh * nh, -il, il],
            [0.0, il, -il, -half_bp, 0.0],
            [0.0, -il, il, 0.0, -half_bp],
        ]
        emission, absorption = ("rho_00", "rho_11"), ("rho_11", "rho_00")
    elif kind is ModelKind.CLASSICAL_I:
        g = classical_rate(params, kind)
        base[:] = [
            [-(gh * nh + gc * nc), gc * (1.0 + nc), gh * (1.0 + nh)],
            [gc * nc, -gc * (1.0 + nc) - g, g],
            [gh * nh, g, -gh * (1.0 + nh) - g],
        ]
        emission, absorption = ("rho_gg", "rho_00"), ("rho_00", "rho_gg")
    else:  # CLASSICAL_II
        g = classical_rate(params, kind)
        base[:] = [
            [-(gh * (1.0 + nh) + gc * (1.0 + nc)), gc * nc, gh * nh],
            [gc * (1.0 + nc), -gc * nc - g, g],
            [gh * (1.0 + nh), g, -gh * nh - g],
        ]
        emission, absorption = ("rho_00", "rho_11"), ("rho_11", "rho_00")

    tags[basis.index(emission[0]), basis.index(emission[1])] = -1
    tags[basis.index(absorption[0]), basis.index(absorption[1])] = +1
    entries = base * np.exp(1j * tags * float(chi))
    return Superoperator(kind=kind, basis=basis, entries=entries,
                         counting_tags=tags, chi=float(chi))


def build_classical(params: ValidatedParams, kind: ModelKind) -> tuple[Superoperator, float]:
    """Untilted classical generator plus its matched incoherent drive rate."""
    if kind.is_quantum:
        kind = ModelKind.CLASSICAL_I if kind.is_first_configuration else ModelKind.CLASSICAL_II
    return build_tilted(params, kind, 0.0), classical_rate(params, kind)


def jump_channels(params: ValidatedParams, kind: ModelKind) -> list[tuple[str, str, float]]:
    """All jump channels as (source population label, target label, rate).

    Used by the dynamical-activity sum (rate times source population over
    every channel) and by the trajectory unraveling. Labels refer to the
    model's own basis ordering. Classical variants append the two
    incoherent-drive channels at the matched rate.
    """
    gh, gc = params.gamma_h, params.gamma_c
    nh, nc = params.n_h, params.n_c
    if kind.is_first_configuration:
        chans = [
            ("rho_gg", "rho_11", gh * nh),          # hot absorption
            ("rho_11", "rho_gg", gh * (1.0 + nh)),  # hot emission
            ("rho_gg", "rho_00", gc * nc),          # cold absorption
            ("rho_00", "rho_gg", gc * (1.0 + nc)),  # cold emission
        ]
        if kind is ModelKind.CLASSICAL_I:
            g = classical_rate(params, kind)
            chans += [("rho_00", "rho_11", g), ("rho_11", "rho_00", g)]
    else:
        chans = [
            ("rho_gg", "rho_11", gh * nh),
            ("rho_11", "rho_gg", gh * (1.0 + nh)),
            ("rho_00", "rho_11", gc * nc),
            ("rho_11", "rho_00", gc * (1.0 + nc)),
        ]
        if kind is ModelKind.CLASSICAL_II:
            g = classical_rate(params, kind)
            chans += [("rho_gg", "rho_00", g), ("rho_00", "rho_gg", g)]
    return chans
