import numpy as np
import pytest

from maserfcs import (
    DegenerateStateError,
    EngineParams,
    ModelKind,
    build_tilted,
    closed_form_state,
    solve_null,
    validate,
)
from maserfcs.liouvillian import BASIS_C1, Superoperator
from maserfcs.steadystate import _package_state

from conftest import box_draws

QUANTUM = [ModelKind.QUANTUM_I, ModelKind.QUANTUM_II]


@pytest.mark.parametrize("kind", QUANTUM)
def test_closed_form_equals_null_solver_over_box(kind):
    # randomized equivalence of the printed solutions and the SVD null space
    for p in box_draws(1000, seed=101):
        num = solve_null(build_tilted(p, kind, 0.0))
        ref = closed_form_state(p, kind)
        for label, want in ref.populations.items():
            assert num.populations[label] == pytest.approx(want, rel=1e-9, abs=1e-12)
        assert num.coherence == pytest.approx(ref.coherence, rel=1e-9, abs=1e-12)


@pytest.mark.parametrize("kind", list(ModelKind))
def test_populations_normalized_and_in_range(kind):
    for p in box_draws(200, seed=102):
        state = solve_null(build_tilted(p, kind, 0.0))
        pops = state.population_vector()
        assert abs(pops.sum() - 1.0) < 1e-12
        assert np.all(pops >= 0.0) and np.all(pops <= 1.0 + 1e-12)


@pytest.mark.parametrize("kind", QUANTUM)
def test_coherence_imaginary_with_occupation_gap_sign(kind):
    for p in box_draws(300, seed=103):
        if p.n_h == p.n_c or p.coupling == 0.0:
            continue
        state = closed_form_state(p, kind)
        assert abs(state.coherence.real) < 1e-15 * max(1.0, abs(state.coherence))
        assert np.sign(state.coherence.imag) == np.sign((p.n_c - p.n_h) * p.coupling)


def test_equal_occupation_kills_coherence():
    p = validate(EngineParams(0.7, 1.3, 1.5, 1.5, 0.4))
    for kind in QUANTUM:
        assert closed_form_state(p, kind).coherence == 0.0


def test_equal_baths_give_uniform_populations():
    p = validate(EngineParams(1.0, 1.0, 1.0, 1.0, 0.3))
    state = solve_null(build_tilted(p, ModelKind.QUANTUM_I, 0.0))
    for label in ("rho_gg", "rho_00", "rho_11"):
        assert state.populations[label] == pytest.approx(1.0 / 3.0, abs=1e-12)
    assert abs(state.coherence) < 1e-13


def test_second_model_drains_into_upper_lasing_state_without_drive():
    p = validate(EngineParams(0.8, 1.7, 2.5, 0.0, 0.0))
    state = solve_null(build_tilted(p, ModelKind.QUANTUM_II, 0.0))
    assert state.populations["rho_00"] == pytest.approx(1.0, abs=1e-12)
    assert state.populations["rho_gg"] == pytest.approx(0.0, abs=1e-12)
    assert state.populations["rho_11"] == pytest.approx(0.0, abs=1e-12)


def test_first_model_thermalizes_hot_pair_without_drive():
    nh = 2.5
    p = validate(EngineParams(0.8, 1.7, nh, 0.0, 0.0))
    state = solve_null(build_tilted(p, ModelKind.QUANTUM_I, 0.0))
    assert state.populations["rho_gg"] == pytest.approx((1 + nh) / (1 + 2 * nh), rel=1e-12)
    assert state.populations["rho_11"] == pytest.approx(nh / (1 + 2 * nh), rel=1e-12)
    assert state.populations["rho_00"] == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("pair", [
    (ModelKind.QUANTUM_I, ModelKind.CLASSICAL_I),
    (ModelKind.QUANTUM_II, ModelKind.CLASSICAL_II),
])
def test_classical_populations_match_quantum(pair):
    qkind, ckind = pair
    for p in box_draws(200, seed=104):
        if ckind is ModelKind.CLASSICAL_II and p.gamma_h * p.n_h + p.gamma_c * p.n_c == 0.0:
            continue
        cstate = solve_null(build_tilted(p, ckind, 0.0))
        qstate = solve_null(build_tilted(p, qkind, 0.0))
        assert cstate.coherence is None
        for label, value in cstate.populations.items():
            assert value == pytest.approx(qstate.populations[label], abs=1e-10)


def test_tilted_generator_rejected():
    p = validate(EngineParams(1.0, 1.0, 2.0, 0.1, 0.2))
    with pytest.raises(ValueError, match="chi"):
        solve_null(build_tilted(p, ModelKind.QUANTUM_I, 0.3))


def test_multidimensional_null_space_detected():
    # two disconnected blocks -> two steady states
    entries = np.array([
        [-1.0, 1.0, 0.0],
        [1.0, -1.0, 0.0],
        [0.0, 0.0, 0.0],
    ], dtype=complex)
    gen = Superoperator(kind=ModelKind.CLASSICAL_I, basis=BASIS_C1, entries=entries,
                        counting_tags=np.zeros((3, 3), dtype=np.int8), chi=0.0)
    with pytest.raises(DegenerateStateError, match="multi-dimensional"):
        solve_null(gen)


def test_negative_population_beyond_roundoff_rejected():
    vec = np.array([1.2, -0.2, 0.0], dtype=complex)
    with pytest.raises(DegenerateStateError, match="negative"):
        _package_state(ModelKind.CLASSICAL_I, vec)
