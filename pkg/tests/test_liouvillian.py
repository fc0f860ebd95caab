import numpy as np
import pytest

from maserfcs import EngineParams, ModelKind, build_classical, build_tilted, classical_rate, validate
from maserfcs.liouvillian import basis_for, jump_channels

from conftest import box_draws

ALL_KINDS = list(ModelKind)


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_population_left_vector_annihilates_generator(kind):
    for p in box_draws(100, seed=21):
        gen = build_tilted(p, kind, 0.0)
        left = np.zeros(gen.dim)
        left[: gen.basis.n_populations] = 1.0
        assert np.max(np.abs(left @ gen.entries)) < 1e-12 * max(1.0, np.max(np.abs(gen.entries)))


def test_quantum_one_emission_entry_value(fig2):
    gen = build_tilted(fig2, ModelKind.QUANTUM_I, 0.0)
    # hot emission feeds the ground population from the upper level
    assert gen.entry("rho_gg", "rho_11") == pytest.approx(0.096, abs=1e-15)
    assert gen.entry("rho_gg", "rho_00") == pytest.approx(2.002, abs=1e-12)


def test_quantum_two_coherence_decay_entry(fig2):
    gen = build_tilted(fig2, ModelKind.QUANTUM_II, 0.0)
    assert gen.entry("rho_g0", "rho_g0") == pytest.approx(-0.041, abs=1e-15)
    assert gen.entry("rho_0g", "rho_0g") == pytest.approx(-0.041, abs=1e-15)


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_counting_tags_mark_exactly_the_cold_pair(kind, fig2):
    gen = build_tilted(fig2, kind, 0.0)
    tags = gen.counting_tags
    assert np.count_nonzero(tags) == 2
    emission_row, emission_col = np.argwhere(tags == -1)[0]
    absorption_row, absorption_col = np.argwhere(tags == +1)[0]
    labels = gen.basis.labels
    gc, nc = fig2.gamma_c, fig2.n_c
    assert gen.entries[emission_row, emission_col] == pytest.approx(gc * (1 + nc))
    assert gen.entries[absorption_row, absorption_col] == pytest.approx(gc * nc)
    # the tagged channel is the cold transition of the variant
    if kind.is_first_configuration:
        assert (labels[emission_row], labels[emission_col]) == ("rho_gg", "rho_00")
    else:
        assert (labels[emission_row], labels[emission_col]) == ("rho_00", "rho_11")
    assert labels[absorption_row] == labels[emission_col]
    assert labels[absorption_col] == labels[emission_row]


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_counting_field_touches_only_tagged_entries(kind, fig2):
    bare = build_tilted(fig2, kind, 0.0)
    h = 1e-6
    tilted = build_tilted(fig2, kind, h)
    deriv = (tilted.entries - build_tilted(fig2, kind, -h).entries) / (2 * h)
    expected = 1j * bare.counting_tags * bare.entries
    assert np.max(np.abs(deriv - expected)) < 1e-9 * np.max(np.abs(bare.entries))
    # and chi = 0 reproduces the bare generator through the re-tilt helper
    assert np.allclose(tilted.at_chi(0.0), bare.entries, rtol=0, atol=1e-15)


@pytest.mark.parametrize("kind", [ModelKind.QUANTUM_I, ModelKind.QUANTUM_II])
def test_hermiticity_propagation(kind):
    rng = np.random.default_rng(33)
    for p in box_draws(50, seed=34):
        gen = build_tilted(p, kind, 0.0)
        pops = rng.uniform(0.0, 1.0, 3)
        coh = complex(rng.normal(), rng.normal())
        vec = np.concatenate([pops.astype(complex), [coh, np.conj(coh)]])
        image = gen.entries @ vec
        assert image[:3].imag == pytest.approx(np.zeros(3), abs=1e-12)
        assert image[3] == pytest.approx(np.conj(image[4]), abs=1e-12)


def test_classical_rates_at_operating_point(fig2):
    # 4 lam^2 / (gamma_h(1+n_h) + gamma_c(1+n_c)) and / (gamma_h n_h + gamma_c n_c)
    assert classical_rate(fig2, ModelKind.CLASSICAL_I) == pytest.approx(0.01 / 2.098, rel=1e-14)
    assert classical_rate(fig2, ModelKind.CLASSICAL_II) == pytest.approx(0.01 / 0.082, rel=1e-14)


def test_classical_rate_undefined_without_thermal_quanta():
    p = validate(EngineParams(1.0, 1.0, 0.0, 0.0, 0.3))
    with pytest.raises(ZeroDivisionError):
        classical_rate(p, ModelKind.CLASSICAL_II)
    # first configuration stays defined (denominator has the +1 terms)
    assert classical_rate(p, ModelKind.CLASSICAL_I) == pytest.approx(0.36 / 2.0)


def test_classical_generator_without_drive_is_pure_bath():
    p = validate(EngineParams(0.5, 1.5, 2.0, 0.1, 0.0))
    gen, rate = build_classical(p, ModelKind.CLASSICAL_I)
    assert rate == 0.0
    # drive entries vanish; bath entries remain
    assert gen.entry("rho_00", "rho_11") == 0.0
    assert gen.entry("rho_11", "rho_00") == 0.0
    assert gen.entry("rho_gg", "rho_11") == pytest.approx(0.5 * 3.0)


def test_build_classical_accepts_quantum_alias(fig2):
    gen, rate = build_classical(fig2, ModelKind.QUANTUM_II)
    assert gen.kind is ModelKind.CLASSICAL_II
    assert rate == pytest.approx(0.01 / 0.082, rel=1e-14)


def test_basis_orderings_match_conventions():
    assert basis_for(ModelKind.QUANTUM_I).labels == ("rho_gg", "rho_00", "rho_11", "rho_10", "rho_01")
    assert basis_for(ModelKind.QUANTUM_II).labels == ("rho_11", "rho_00", "rho_gg", "rho_0g", "rho_g0")
    assert basis_for(ModelKind.CLASSICAL_I).labels == ("rho_gg", "rho_00", "rho_11")
    assert basis_for(ModelKind.CLASSICAL_II).labels == ("rho_11", "rho_00", "rho_gg")


def test_format_grid_lists_labels_and_entries(fig2):
    gen = build_tilted(fig2, ModelKind.QUANTUM_I, 0.0)
    text = gen.format_grid()
    lines = text.strip().splitlines()
    assert lines[0].split(",")[1:] == list(gen.basis.labels)
    assert "rho_10" in text
    assert " 0.096" in text


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_jump_channels_rates_are_nonnegative_and_complete(kind, fig2):
    chans = jump_channels(fig2, kind)
    assert all(rate >= 0 for _, _, rate in chans)
    expected = 4 if kind.is_quantum else 6
    assert len(chans) == expected
    labels = set(basis_for(kind).population_labels)
    assert {src for src, _, _ in chans} <= labels
    assert {dst for _, dst, _ in chans} <= labels
