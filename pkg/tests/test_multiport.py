import math

import numpy as np
import pytest

from loqc import (
    ElementSpec,
    FockState,
    ModeTransform,
    NS_ANGLES,
    beam_splitter,
    compose,
    compose_elements,
    embed,
    evolve,
    general3,
    matrix_permanent,
    ns_matrix,
    permanent_amplitude,
    phase_shifter,
)

from helpers import random_state, random_unitary, state_distance

SQ2 = math.sqrt(2)


# -- element constructors -------------------------------------------------

def test_full_reflection_beam_splitter():
    m = beam_splitter(1.0).matrix
    assert np.allclose(m, np.diag([1.0, -1.0]))


def test_balanced_beam_splitter_matrix():
    m = beam_splitter(0.5).matrix
    want = np.array([[1, 1], [1, -1]]) / SQ2
    assert np.abs(m - want).max() < 1e-15


def test_beam_splitter_half_angle_parametrization():
    gamma = 1.234
    m = beam_splitter(math.cos(gamma / 2) ** 2).matrix
    c, s = math.cos(gamma / 2), math.sin(gamma / 2)
    assert np.allclose(m, [[c, s], [s, -c]])


def test_beam_splitter_rejects_bad_reflectivity():
    for eta in (-0.1, 1.1):
        with pytest.raises(ValueError, match="eta"):
            beam_splitter(eta)


def test_balanced_splitter_is_an_involution():
    bs = beam_splitter(0.5)
    assert np.abs(compose(bs, bs).matrix - np.eye(2)).max() < 1e-15


def test_phase_shifter_limits():
    assert np.allclose(phase_shifter(0.0).matrix, np.eye(2))
    assert np.allclose(phase_shifter(math.pi).matrix, np.diag([-1.0, 1.0]))


def test_phase_shifter_acts_per_photon():
    state = FockState.from_occupation([1])
    out = evolve(state, ModeTransform(np.array([[np.exp(1j * 0.7)]])))
    assert out.amplitude([1]) == pytest.approx(np.exp(1j * 0.7))


def test_general3_at_zero_angles():
    m = general3(0.0, 0.0, 0.0).matrix
    assert np.allclose(m, np.diag([-1.0, 1.0, 1.0]))


def test_general3_matches_sign_shift_matrix_at_printed_angles():
    m = general3(math.radians(22.5), math.radians(65.53), math.radians(22.5)).matrix
    assert np.abs(m - ns_matrix().matrix).max() < 2e-3


def test_general3_is_unitary_for_random_angles():
    rng = np.random.default_rng(5)
    for _ in range(25):
        t = general3(*rng.uniform(0, 2 * math.pi, 3))
        assert t.unitarity_deviation() <= 1e-9


def test_ns_matrix_closed_form_entries():
    m = ns_matrix().matrix
    assert m[0, 0] == pytest.approx(1 - SQ2)
    assert m[0, 1] == pytest.approx(2 ** -0.25)
    assert m[0, 1].real == pytest.approx(0.8408964155, abs=1e-9)
    assert m[1, 2] == pytest.approx(0.5 - 1 / SQ2)
    assert m[1, 2].real == pytest.approx(-0.2071067810, abs=1e-9)
    assert m[0, 2] == pytest.approx(math.sqrt(3 / SQ2 - 2))
    assert m[2, 2] == pytest.approx(SQ2 - 0.5)


def test_mode_transform_rejects_nonunitary():
    with pytest.raises(ValueError, match="unitary"):
        ModeTransform(np.array([[1.0, 0.0], [0.0, 2.0]]))


# -- embed / compose ------------------------------------------------------

def test_embed_beam_splitter_block():
    t = embed(ElementSpec.bs(0, 1, 0.5), 3)
    assert np.allclose(t.matrix[:2, :2], beam_splitter(0.5).matrix)
    assert t.matrix[2, 2] == 1.0
    assert np.abs(t.matrix[2, :2]).max() == 0.0


def test_embed_phase_shifter_on_last_mode():
    t = embed(ElementSpec.ps(2, 0.3), 3)
    assert np.allclose(t.matrix, np.diag([1.0, 1.0, np.exp(1j * 0.3)]))


def test_embed_rejects_bad_targets():
    with pytest.raises(ValueError, match="out of range"):
        embed(ElementSpec.bs(0, 7, 0.5), 3)
    with pytest.raises(ValueError, match="distinct"):
        ElementSpec.bs(1, 1, 0.5)


def test_three_splitter_network_reproduces_ns_matrix():
    # the sign-shift network as three embedded two-mode blocks at the
    # exact angles behind the printed 22.5/65.53/22.5 values
    t1, t2, t3 = NS_ANGLES
    c1, s1 = math.cos(t1), math.sin(t1)
    c2, s2 = math.cos(t2), math.sin(t2)
    first = ElementSpec.raw((1, 2), np.array([[c1, s1], [-s1, c1]]))
    middle = ElementSpec.raw((0, 1), np.array([[-c2, s2], [s2, c2]]))
    last = ElementSpec.raw((1, 2), np.array([[c1, -s1], [s1, c1]]))
    network = compose_elements([first, middle, last], 3)
    assert np.abs(network.matrix - ns_matrix().matrix).max() < 1e-9


def test_compose_with_dagger_gives_identity():
    t = general3(0.3, 1.1, 2.0)
    assert np.abs(compose(t, t.dagger()).matrix - np.eye(3)).max() < 1e-12


def test_compose_with_identity():
    t = general3(0.3, 1.1, 2.0)
    ident = ModeTransform(np.eye(3))
    assert np.allclose(compose(ident, t).matrix, t.matrix)


def test_compose_dimension_mismatch():
    with pytest.raises(ValueError, match="mismatch"):
        compose(beam_splitter(0.5), ns_matrix())


# -- evolution -------------------------------------------------------------

def test_single_photon_through_splitter():
    eta = 0.3
    out = evolve(FockState.from_occupation([1, 0]), beam_splitter(eta))
    assert out.amplitude([1, 0]) == pytest.approx(math.sqrt(eta))
    assert out.amplitude([0, 1]) == pytest.approx(math.sqrt(1 - eta))


def test_two_photon_interference_kills_coincidence():
    out = evolve(FockState.from_occupation([1, 1]), beam_splitter(0.5))
    assert abs(out.amplitude([1, 1])) < 1e-12
    assert out.amplitude([2, 0]) == pytest.approx(1 / SQ2)
    assert out.amplitude([0, 2]) == pytest.approx(-1 / SQ2)


def test_sign_shift_heralded_amplitude():
    out = evolve(FockState.from_occupation([1, 1, 0]), ns_matrix())
    assert out.amplitude([1, 1, 0]) == pytest.approx(0.5)


def test_evolve_dimension_mismatch():
    with pytest.raises(ValueError, match="modes"):
        evolve(FockState.from_occupation([1, 0]), ns_matrix())


def test_norm_conservation_on_random_states():
    rng = np.random.default_rng(7)
    for _ in range(20):
        state = random_state(rng, 3, 2)
        if state.norm() == 0:
            continue
        t = ModeTransform(random_unitary(rng, 3))
        assert abs(evolve(state, t).norm() - state.norm()) < 1e-9


def test_photon_number_is_conserved_termwise():
    rng = np.random.default_rng(8)
    state = FockState(3, {(2, 1, 0): 1.0, (0, 0, 1): 1.0})
    out = evolve(state, ModeTransform(random_unitary(rng, 3)), prune_tol=0.0)
    totals = {sum(occ) for occ, _ in out.terms()}
    assert totals <= {1, 3}


def test_inverse_round_trip():
    rng = np.random.default_rng(9)
    for _ in range(10):
        state = random_state(rng, 3, 2)
        t = ModeTransform(random_unitary(rng, 3))
        back = evolve(evolve(state, t), t.dagger())
        assert state_distance(back, state) < 1e-9


def test_outcome_distribution_of_sign_shift_sums_to_one():
    for k in range(3):
        out = evolve(FockState.from_occupation([k, 1, 0]), ns_matrix())
        total = sum(abs(a) ** 2 for _, a in out.terms())
        assert total == pytest.approx(1.0, abs=1e-8)


# -- permanent oracle --------------------------------------------------------

def test_permanent_of_balanced_splitter_vanishes():
    assert abs(matrix_permanent(beam_splitter(0.5).matrix)) < 1e-15


def test_single_mode_amplitude_is_the_entry():
    t = ModeTransform(np.array([[np.exp(1j * 0.4)]]))
    assert permanent_amplitude((1,), (1,), t) == pytest.approx(np.exp(1j * 0.4))


def test_oracle_on_interference_and_sign_shift():
    assert abs(permanent_amplitude((1, 1), (1, 1), beam_splitter(0.5))) < 1e-12
    assert permanent_amplitude((1, 1, 0), (1, 1, 0), ns_matrix()) == pytest.approx(0.5)


def test_photon_number_mismatch_gives_zero():
    assert permanent_amplitude((1, 0), (1, 1), beam_splitter(0.5)) == 0j


def test_evolve_agrees_with_permanent_oracle():
    rng = np.random.default_rng(10)
    occs = [(0, 1, 1), (2, 0, 0), (1, 1, 1), (0, 0, 2)]
    for _ in range(10):
        t = ModeTransform(random_unitary(rng, 3))
        for inp in occs:
            out = evolve(FockState.from_occupation(inp), t, prune_tol=0.0)
            for outp in occs:
                if sum(outp) != sum(inp):
                    continue
                assert abs(out.amplitude(outp) - permanent_amplitude(inp, outp, t)) < 1e-10
