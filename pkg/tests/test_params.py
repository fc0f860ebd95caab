import math

import numpy as np
import pytest

from maserfcs import (
    EngineParams,
    Frequencies,
    ValidationError,
    occupation_from_temperature,
    temperature_from_occupation,
    validate,
)
from maserfcs.params import frequencies_from_mapping, params_from_mapping

# 1/(e - 1) to 20 digits, frozen from a 50-digit mpmath evaluation.
OCCUPATION_AT_UNIT_RATIO = 0.58197670686932642439


def test_occupation_vanishes_at_low_temperature():
    assert occupation_from_temperature(1.0, 1e-3) < 1e-300


def test_occupation_unity_when_exponent_is_ln2():
    assert occupation_from_temperature(1.0, 1.0 / math.log(2.0)) == pytest.approx(1.0, rel=1e-14)


def test_occupation_reference_value():
    assert occupation_from_temperature(1.0, 1.0) == pytest.approx(OCCUPATION_AT_UNIT_RATIO, rel=1e-15)


def test_occupation_monotone_in_temperature():
    rng = np.random.default_rng(11)
    for _ in range(200):
        omega = rng.uniform(0.1, 5.0)
        t1 = rng.uniform(0.05, 10.0)
        t2 = t1 * rng.uniform(1.0001, 3.0)
        assert occupation_from_temperature(omega, t2) > occupation_from_temperature(omega, t1)


def test_occupation_temperature_round_trip():
    rng = np.random.default_rng(12)
    for _ in range(300):
        omega = rng.uniform(0.1, 5.0)
        temp = rng.uniform(0.05, 20.0)
        n = occupation_from_temperature(omega, temp)
        back = temperature_from_occupation(omega, n)
        assert abs(back - temp) <= 1e-12 * temp


def test_occupation_rejects_nonpositive_inputs():
    with pytest.raises(ValidationError):
        occupation_from_temperature(0.0, 1.0)
    with pytest.raises(ValidationError):
        occupation_from_temperature(1.0, -2.0)


def test_validate_accepts_sweep_operating_point(fig2):
    assert fig2.engine_regime
    assert fig2.warnings == ()


def test_validate_names_offending_field():
    with pytest.raises(ValidationError, match="gamma_h"):
        validate(EngineParams(-1.0, 2.0, 5.0, 0.001, 0.05))


def test_validate_collects_all_violations():
    with pytest.raises(ValidationError) as err:
        validate(EngineParams(-1.0, 0.0, -0.5, float("nan"), -0.1))
    text = str(err.value)
    for name in ("gamma_h", "gamma_c", "n_h", "n_c", "lambda"):
        assert name in text


def test_validate_degenerate_inputs_warn_not_error():
    p = validate(EngineParams(1.0, 1.0, 1.0, 1.0, 0.1))
    assert not p.engine_regime
    assert any("n_h == n_c" in w for w in p.warnings)
    p0 = validate(EngineParams(1.0, 1.0, 2.0, 0.5, 0.0))
    assert any("lambda == 0" in w for w in p0.warnings)


def test_validate_idempotent(fig2):
    assert validate(fig2) == fig2


def test_params_from_mapping_roundtrip(fig2):
    assert validate(params_from_mapping(fig2.as_dict())) == fig2


def test_params_from_mapping_missing_and_bad_keys():
    with pytest.raises(ValidationError, match="n_c"):
        params_from_mapping({"gamma_h": 1, "gamma_c": 1, "n_h": 1, "lambda": 0.1})
    with pytest.raises(ValidationError, match="gamma_c"):
        params_from_mapping({"gamma_h": 1, "gamma_c": "fast", "n_h": 1, "n_c": 0, "lambda": 0.1})


def test_frequencies_validation():
    assert frequencies_from_mapping({}) is None
    with pytest.raises(ValidationError):
        frequencies_from_mapping({"omega_h": 1.0})
    with pytest.raises(ValidationError, match="omega_h"):
        Frequencies(omega_h=0.5, omega_c=1.0).validated()
    f = frequencies_from_mapping({"omega_h": 2.0, "omega_c": 0.5})
    assert f == Frequencies(2.0, 0.5)
