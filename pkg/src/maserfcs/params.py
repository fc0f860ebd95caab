"""Engine parameters, validation, and the temperature/occupation map.

Units: k_B = hbar = 1. Rates (gamma_h, gamma_c, lambda) and transition
frequencies (omega_h, omega_c) share one inverse-time/energy unit; bath
occupations n_h, n_c are dimensionless Bose factors.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field


class ModelKind(enum.Enum):
    """Which of the four engine generators to build.

    The two quantum configurations differ in which transition the cold bath
    and the drive couple to; the classical variants replace the coherent
    drive by a pair of incoherent jumps at a matched rate.
    """

    QUANTUM_I = "q1"
    QUANTUM_II = "q2"
    CLASSICAL_I = "c1"
    CLASSICAL_II = "c2"

    @property
    def is_quantum(self) -> bool:
        return self in (ModelKind.QUANTUM_I, ModelKind.QUANTUM_II)

    @property
    def is_first_configuration(self) -> bool:
        return self in (ModelKind.QUANTUM_I, ModelKind.CLASSICAL_I)

    @classmethod
    def from_string(cls, s: str) -> "ModelKind":
        table = {
            "q1": cls.QUANTUM_I, "quantum_i": cls.QUANTUM_I, "quantumi": cls.QUANTUM_I,
            "q2": cls.QUANTUM_II, "quantum_ii": cls.QUANTUM_II, "quantumii": cls.QUANTUM_II,
            "c1": cls.CLASSICAL_I, "classical_i": cls.CLASSICAL_I, "classicali": cls.CLASSICAL_I,
            "c2": cls.CLASSICAL_II, "classical_ii": cls.CLASSICAL_II, "classicalii": cls.CLASSICAL_II,
        }
        key = s.strip().lower()
        if key not in table:
            raise ValidationError([f"model: unknown kind {s!r} (expected one of q1, q2, c1, c2)"])
        return table[key]


@dataclass(frozen=True)
class EngineParams:
    """The five physical rates of the engine (hot/cold coupling, occupations, drive)."""

    gamma_h: float
    gamma_c: float
    n_h: float
    n_c: float
    coupling: float  # field-matter coupling strength ("lambda" in configs/CLI)

    def as_dict(self) -> dict[str, float]:
        return {
            "gamma_h": self.gamma_h,
            "gamma_c": self.gamma_c,
            "n_h": self.n_h,
            "n_c": self.n_c,
            "lambda": self.coupling,
        }


@dataclass(frozen=True)
class Frequencies:
    """Hot and cold transition frequencies, used only for power conversion."""

    omega_h: float
    omega_c: float

    def validated(self) -> "Frequencies":
        errs = []
        for name, v in (("omega_h", self.omega_h), ("omega_c", self.omega_c)):
            if not math.isfinite(v) or v <= 0:
                errs.append(f"{name}: must be finite and > 0, got {v!r}")
        if not errs and self.omega_h <= self.omega_c:
            errs.append(
                f"omega_h: must exceed omega_c for power conversion "
                f"(got omega_h={self.omega_h!r}, omega_c={self.omega_c!r})"
            )
        if errs:
            raise ValidationError(errs)
        return self


class ValidationError(ValueError):
    """Raised with the full list of violated parameter constraints."""

    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


@dataclass(frozen=True)
class ValidatedParams:
    """EngineParams that passed validation, plus degenerate-case warnings.

    Warnings flag inputs that are legal but make the counting statistics
    degenerate (zero current): equal bath occupations, or zero coupling.
    """

    gamma_h: float
    gamma_c: float
    n_h: float
    n_c: float
    coupling: float
    warnings: tuple[str, ...] = field(default_factory=tuple)

    @property
    def engine_regime(self) -> bool:
        """True iff n_h > n_c (forward-cycle heat-engine operation)."""
        return self.n_h > self.n_c

    @property
    def degenerate(self) -> bool:
        """True when a zero-current degeneracy warning was raised."""
        return bool(self.warnings)

    def as_dict(self) -> dict[str, float]:
        return {
            "gamma_h": self.gamma_h,
            "gamma_c": self.gamma_c,
            "n_h": self.n_h,
            "n_c": self.n_c,
            "lambda": self.coupling,
        }


def validate(params: EngineParams | ValidatedParams) -> ValidatedParams:
    """Check every constraint and return an immutable validated record.

    Collects all violations (not just the first) into one ValidationError
    naming the offending fields. n_h == n_c and coupling == 0 are accepted
    with warnings: limit formulas must remain computable there.

    Idempotent: validating a ValidatedParams returns an equal record.
    """
    problems = []
    for name, value, lower_ok in (
        ("gamma_h", params.gamma_h, False),
        ("gamma_c", params.gamma_c, False),
        ("n_h", params.n_h, True),
        ("n_c", params.n_c, True),
        ("lambda", params.coupling, True),
    ):
        if not isinstance(value, (int, float)) or not math.isfinite(value):
            problems.append(f"{name}: must be a finite number, got {value!r}")
        elif lower_ok and value < 0:
            problems.append(f"{name}: must be >= 0, got {value!r}")
        elif not lower_ok and value <= 0:
            problems.append(f"{name}: must be > 0, got {value!r}")
    if problems:
        raise ValidationError(problems)

    warnings = []
    if params.n_h == params.n_c:
        warnings.append("n_h == n_c: zero steady-state current, noise ratios undefined")
    if params.coupling == 0:
        warnings.append("lambda == 0: drive off, zero current; limit formulas still apply")
    return ValidatedParams(
        gamma_h=float(params.gamma_h),
        gamma_c=float(params.gamma_c),
        n_h=float(params.n_h),
        n_c=float(params.n_c),
        coupling=float(params.coupling),
        warnings=tuple(warnings),
    )


def occupation_from_temperature(omega: float, temperature: float) -> float:
    """Bose occupation n = 1/(exp(omega/T) - 1) at frequency omega.

    Strictly positive and monotone increasing in T for omega, T > 0.
    """
    if not (omega > 0) or not (temperature > 0):
        raise ValidationError(
            [f"occupation_from_temperature: omega and T must be > 0, got omega={omega!r}, T={temperature!r}"]
        )
    return 1.0 / math.expm1(omega / temperature)


def temperature_from_occupation(omega: float, occupation: float) -> float:
    """Inverse of occupation_from_temperature: T = omega / ln(1 + 1/n)."""
    if not (omega > 0) or not (occupation > 0):
        raise ValidationError(
            [f"temperature_from_occupation: omega and n must be > 0, got omega={omega!r}, n={occupation!r}"]
        )
    return omega / math.log1p(1.0 / occupation)


# Config-file / CLI key schema. "lambda" is the external spelling of the
# coupling; it is a Python keyword, hence the internal field name.
PARAM_KEYS = ("gamma_h", "gamma_c", "n_h", "n_c", "lambda")
FREQ_KEYS = ("omega_h", "omega_c")


def params_from_mapping(mapping: dict) -> EngineParams:
    """Build EngineParams from a config-file mapping (see PARAM_KEYS)."""
    missing = [k for k in PARAM_KEYS if k not in mapping]
    if missing:
        raise ValidationError([f"{k}: missing required key" for k in missing])
    bad = [k for k in PARAM_KEYS if not isinstance(mapping[k], (int, float)) or isinstance(mapping[k], bool)]
    if bad:
        raise ValidationError([f"{k}: must be a number, got {mapping[k]!r}" for k in bad])
    return EngineParams(
        gamma_h=float(mapping["gamma_h"]),
        gamma_c=float(mapping["gamma_c"]),
        n_h=float(mapping["n_h"]),
        n_c=float(mapping["n_c"]),
        coupling=float(mapping["lambda"]),
    )


def frequencies_from_mapping(mapping: dict) -> Frequencies | None:
    """Extract optional omega_h/omega_c; both or neither must be present."""
    present = [k for k in FREQ_KEYS if k in mapping and mapping[k] is not None]
    if not present:
        return None
    if len(present) == 1:
        raise ValidationError([f"{FREQ_KEYS[0]}/{FREQ_KEYS[1]}: both frequencies are required together"])
    return Frequencies(omega_h=float(mapping["omega_h"]), omega_c=float(mapping["omega_c"])).validated()
