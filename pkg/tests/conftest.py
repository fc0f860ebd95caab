import numpy as np
import pytest

from maserfcs import EngineParams, validate
from maserfcs.sweep import DEFAULT_SAMPLING_RANGES
from maserfcs.params import PARAM_KEYS


@pytest.fixture
def fig2():
    """The published sweep operating point (coupling set per test)."""
    return validate(EngineParams(gamma_h=0.016, gamma_c=2.0, n_h=5.0, n_c=0.001, coupling=0.05))


def box_draws(n, seed, ranges=None):
    """Uniform draws over the histogram sampling box, as ValidatedParams."""
    rng = np.random.Generator(np.random.Philox(key=seed))
    ranges = dict(DEFAULT_SAMPLING_RANGES if ranges is None else ranges)
    cols = {k: rng.uniform(*ranges[k], size=n) for k in PARAM_KEYS}
    return [
        validate(EngineParams(
            gamma_h=float(cols["gamma_h"][i]),
            gamma_c=float(cols["gamma_c"][i]),
            n_h=float(cols["n_h"][i]),
            n_c=float(cols["n_c"][i]),
            coupling=float(cols["lambda"][i]),
        ))
        for i in range(n)
    ]
