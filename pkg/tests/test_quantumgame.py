import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from qparrondo.classical import Verdict
from qparrondo.multiplexer import AngleError, DimensionError, PolarBlock, PolarQubit, block_from_polar
from qparrondo.qcore import PureState, schmidt_coefficients, win_probability
from qparrondo.quantumgame import (
    InitialStateSpec,
    QuantumHDGame,
    WinReport,
    build_initial_state,
    detect_quantum_parrondo,
    expected_payoff,
    games_from_table,
    play,
    play_sequence,
    play_stepwise,
    pwin_equal_superposition,
    pwin_quantum_closed,
    pwin_quantum_sim,
    pwin_sequence_formula,
    sequence_formula_exact,
)

from conftest import four_blocks, phases, polar_qubits, thetas

PI = math.pi
EQ = InitialStateSpec.equal_superposition()


def product(q1, q2, q3):
    return InitialStateSpec.product(q1, q2, q3)


def test_initial_state_builders():
    plus = PolarQubit(PI / 2)
    eq = build_initial_state(product(plus, plus, plus))
    assert eq.allclose(build_initial_state(EQ), atol=1e-15)
    zero = build_initial_state(product(PolarQubit(0), PolarQubit(0), PolarQubit(0)))
    assert abs(zero[0]) == pytest.approx(1)
    ghz = build_initial_state(InitialStateSpec.ghz())
    np.testing.assert_allclose(np.abs(ghz.amplitudes[[0, 7]]), [1 / math.sqrt(2)] * 2)
    assert np.count_nonzero(ghz.amplitudes) == 2


def test_initial_spec_validation():
    with pytest.raises(ValueError):
        InitialStateSpec("product")
    with pytest.raises(ValueError):
        InitialStateSpec("bell")
    with pytest.raises(ValueError):
        InitialStateSpec.ghz().product_qubits()
    with pytest.raises(AngleError):
        PolarQubit(4.0)


def test_play_identity_and_ghz():
    ident = QuantumHDGame.identity()
    for spec in (EQ, InitialStateSpec.ghz()):
        s = build_initial_state(spec)
        assert play(ident, s).allclose(s, atol=0)
    with pytest.raises(DimensionError):
        play(ident, PureState.basis("00"))


def test_quantum_game_needs_four_blocks():
    with pytest.raises(DimensionError):
        QuantumHDGame((PolarBlock(0),) * 3)


@pytest.mark.parametrize("theta_q3, expected", [(0.0, 0.0), (PI, 1.0)])
def test_sim_identity_target(theta_q3, expected):
    spec = product(PolarQubit(1.0, 2.0, 3.0), PolarQubit(0.4, 0.1, 6.0), PolarQubit(theta_q3))
    rep = pwin_quantum_sim(QuantumHDGame.identity(), spec)
    assert rep.p_win == pytest.approx(expected, abs=1e-15)


def test_sim_equal_superposition_full_bias():
    rep = pwin_quantum_sim(QuantumHDGame.from_thetas([PI / 2] * 4), EQ)
    assert rep.p_win == pytest.approx(0.0, abs=1e-15)
    assert rep.expected_payoff == pytest.approx(-1.0)
    assert rep.verdict is Verdict.LOSING


@given(polar_qubits, polar_qubits, polar_qubits, four_blocks)
def test_closed_form_matches_simulation(q1, q2, q3, blocks):
    closed = pwin_quantum_closed(q1, q2, q3, blocks)
    sim = pwin_quantum_sim(QuantumHDGame(blocks), product(q1, q2, q3)).p_win
    assert abs(closed - sim) < 1e-12


@given(polar_qubits, polar_qubits, polar_qubits, st.lists(phases, min_size=8, max_size=8))
def test_closed_form_phase_only_coins(q1, q2, q3, ph):
    blocks = [PolarBlock(0.0, ph[2 * j], ph[2 * j + 1]) for j in range(4)]
    expected = math.sin(q3.theta / 2) ** 2
    assert pwin_quantum_closed(q1, q2, q3, blocks) == pytest.approx(expected, abs=1e-12)
    assert pwin_quantum_sim(QuantumHDGame(blocks), product(q1, q2, q3)).p_win == pytest.approx(expected, abs=1e-12)


@given(st.lists(thetas, min_size=4, max_size=4), st.lists(phases, min_size=4, max_size=4))
def test_closed_form_equal_superposition_equal_phases(ts, ph):
    blocks = [PolarBlock(t, p, p) for t, p in zip(ts, ph)]
    plus = PolarQubit(PI / 2)
    expected = 0.5 - sum(math.sin(t) for t in ts) / 8
    assert pwin_quantum_closed(plus, plus, plus, blocks) == pytest.approx(expected, abs=1e-12)


def test_literal_cross_term_transcriptions_disagree(rng):
    # Full-angle squared sines or theta_j inside the cosine do not match
    # the simulation; the half-angle / phi_j form does.
    def term(blk, q3, full_angle_q, theta_in_cos):
        tq = q3.theta if full_angle_q else q3.theta / 2
        lead = blk.theta if theta_in_cos else blk.phi
        cross = math.cos(lead - blk.eta + q3.phi - q3.eta) * math.cos(blk.theta / 2) * math.sin(blk.theta / 2)
        cross *= math.cos(q3.theta / 2) * math.sin(q3.theta / 2)
        return math.cos(blk.theta / 2) ** 2 * math.sin(tq) ** 2 + math.sin(blk.theta / 2) ** 2 * math.cos(tq) ** 2 - 2 * cross

    q3 = PolarQubit(1.1, 0.3, 2.2)
    blk = PolarBlock(0.9, 1.7, 0.4)
    a, b = block_from_polar(blk).a, block_from_polar(blk).b
    (q31, q32) = q3.amplitudes
    direct = abs(a.conjugate() * q32 - b.conjugate() * q31) ** 2
    assert term(blk, q3, False, False) == pytest.approx(direct, abs=1e-14)
    assert abs(term(blk, q3, True, False) - direct) > 1e-3
    assert abs(term(blk, q3, False, True) - direct) > 1e-3


@pytest.mark.parametrize(
    "blocks, expected",
    [
        ([PolarBlock(0)] * 4, 0.5),
        ([PolarBlock(PI / 2, 1.0, 1.0)] * 4, 0.0),
        ([PolarBlock(1.3, 0.2, 0.2 + PI / 2)] * 4, 0.5),
        ([PolarBlock(PI)] * 4, 0.5),
    ],
)
def test_equal_superposition_formula_examples(blocks, expected):
    assert pwin_equal_superposition(blocks) == pytest.approx(expected, abs=1e-12)


@given(four_blocks)
def test_equal_superposition_formula_matches_sim(blocks):
    assert abs(pwin_equal_superposition(blocks) - pwin_quantum_sim(QuantumHDGame(blocks), EQ).p_win) < 1e-12


@given(st.lists(thetas, min_size=4, max_size=4), st.lists(phases, min_size=4, max_size=4))
def test_equal_phases_never_win(ts, ph):
    p = pwin_quantum_sim(QuantumHDGame(tuple(PolarBlock(t, x, x) for t, x in zip(ts, ph))), EQ).p_win
    assert p <= 0.5 + 1e-12


@given(polar_qubits, polar_qubits, polar_qubits, four_blocks, st.lists(phases, min_size=4, max_size=4))
def test_history_phases_are_irrelevant(q1, q2, q3, blocks, ph):
    game = QuantumHDGame(blocks)
    base = pwin_quantum_sim(game, product(q1, q2, q3)).p_win
    moved = product(PolarQubit(q1.theta, ph[0], ph[1]), PolarQubit(q2.theta, ph[2], ph[3]), q3)
    assert abs(pwin_quantum_sim(game, moved).p_win - base) < 1e-12


@given(polar_qubits, polar_qubits, polar_qubits, four_blocks, st.floats(-2 * PI, 2 * PI))
def test_target_phase_enters_through_difference(q1, q2, q3, blocks, delta):
    assume(0 <= q3.phi + delta <= 2 * PI and 0 <= q3.eta + delta <= 2 * PI)
    game = QuantumHDGame(blocks)
    shifted = PolarQubit(q3.theta, q3.phi + delta, q3.eta + delta)
    a = pwin_quantum_sim(game, product(q1, q2, q3)).p_win
    b = pwin_quantum_sim(game, product(q1, q2, shifted)).p_win
    assert abs(a - b) < 1e-12


def test_play_creates_entanglement():
    plus = PolarQubit(PI / 2)
    state = play(
        QuantumHDGame((PolarBlock(0), PolarBlock(PI), PolarBlock(PI / 2), PolarBlock(0.3, 1.0, 2.0))),
        build_initial_state(product(plus, plus, PolarQubit(0))),
    )
    # history register vs outcome qubit
    assert schmidt_coefficients(state, 2)[1] > 1e-3


def test_expected_payoff():
    assert expected_payoff(0.5) == 0
    assert expected_payoff(1.0) == 1
    assert expected_payoff(pwin_equal_superposition([PolarBlock(PI / 2)] * 4)) == pytest.approx(-1)
    with pytest.raises(ValueError):
        expected_payoff(1.5)
    rep = WinReport.from_pwin(0.5 + 1e-13)
    assert rep.verdict is Verdict.FAIR


def test_sequence_single_game_matches_play():
    g = QuantumHDGame.from_thetas([0.1, 0.9, 2.0, 3.0], 0.4, 1.2)
    assert play_sequence([g], EQ).p_win == pytest.approx(pwin_quantum_sim(g, EQ).p_win, abs=1e-15)
    with pytest.raises(ValueError):
        play_sequence([], EQ)


def _adjoint_game(game):
    # a -> conj(a), b -> -b
    return QuantumHDGame(
        tuple(PolarBlock(b.theta, (2 * PI - b.phi) % (2 * PI), (b.eta + PI) % (2 * PI)) for b in game.blocks)
    )


@given(four_blocks, polar_qubits, polar_qubits, polar_qubits)
def test_game_then_inverse_restores_input(blocks, q1, q2, q3):
    g = QuantumHDGame(blocks)
    spec = product(q1, q2, q3)
    expected = win_probability(build_initial_state(spec))
    assert abs(play_sequence([g, _adjoint_game(g)], spec).p_win - expected) < 1e-12


@settings(max_examples=30)
@given(st.lists(four_blocks, min_size=1, max_size=4), polar_qubits, polar_qubits, polar_qubits)
def test_composed_equals_stepwise(block_lists, q1, q2, q3):
    games = [QuantumHDGame(b) for b in block_lists]
    spec = product(q1, q2, q3)
    stepwise = win_probability(play_stepwise(games, build_initial_state(spec)))
    assert abs(play_sequence(games, spec).p_win - stepwise) < 1e-12


@pytest.mark.parametrize(
    "table, expected",
    [
        ([[0.75 * PI] * 4] * 2, 1.0),
        ([[PI / 2] * 4] * 2, 0.5),
        ([[0.3, 1.0, 2.0, 2.9]], 0.5 - sum(math.sin(t) for t in (0.3, 1.0, 2.0, 2.9)) / 8),
    ],
)
def test_sequence_formula_examples(table, expected):
    assert pwin_sequence_formula(table) == pytest.approx(expected, abs=1e-12)
    assert play_sequence(games_from_table(table), EQ).p_win == pytest.approx(expected, abs=1e-12)


def test_sequence_formula_validation():
    with pytest.raises(AngleError):
        pwin_sequence_formula([[4.0, 0, 0, 0]])
    with pytest.raises(DimensionError):
        pwin_sequence_formula([[0, 0, 0]])


def test_sequence_formula_exactness_flag():
    zero = games_from_table([[1.0] * 4] * 2)
    assert sequence_formula_exact(zero, EQ)
    assert not sequence_formula_exact(games_from_table([[1.0] * 4] * 2, 0.5, 0.5), EQ)
    assert not sequence_formula_exact(zero, InitialStateSpec.ghz())


def test_detect_effect_examples():
    rep = detect_quantum_parrondo([[0.75 * PI] * 4] * 2)
    assert rep.single_pwins == pytest.approx((0.1464466094067262,) * 2, abs=1e-12)
    assert rep.sequence_pwin_formula == pytest.approx(1.0, abs=1e-12)
    assert rep.effect
    none = detect_quantum_parrondo([[0.0] * 4] * 2)
    assert none.single_verdicts == (Verdict.FAIR, Verdict.FAIR) and not none.effect
    assert not detect_quantum_parrondo([[0.75 * PI] * 4]).effect
