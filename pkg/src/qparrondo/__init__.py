"""Classical and quantum history-dependent Parrondo games.

The quantum game plays four SU(2) coins as a multiplexer on three qubits (two
history qubits and one outcome qubit) from an un-entangled input. Closed-form
win probabilities are provided alongside a small state-vector simulator that
serves as the reference for all of them.
"""
from .classical import (
    ClassicalHDGame,
    DegenerateChain,
    GameA,
    GameClassification,
    ParrondoInstance,
    ParrondoSearch,
    ReducibleChain,
    Schedule,
    SimulationResult,
    Verdict,
    classify,
    find_parrondo_samples,
    pwin_closed_form,
    pwin_stationary,
    schedule_pwin,
    simulate_sequence,
    stationary_distribution,
)
from .multiplexer import (
    Multiplexer,
    PolarBlock,
    PolarQubit,
    SU2Block,
    apply,
    as_dense_matrix,
    block_from_polar,
    compose,
    qubit_from_polar,
)
from .qcore import PureState, norm_squared, tensor, win_probability
from .quantumgame import (
    InitialStateSpec,
    OracleMismatch,
    QuantumHDGame,
    WinReport,
    build_initial_state,
    detect_quantum_parrondo,
    expected_payoff,
    play,
    play_sequence,
    pwin_equal_superposition,
    pwin_quantum_closed,
    pwin_quantum_sim,
    pwin_sequence_formula,
)
from .sweep import ParamRange, SweepRecord, SweepSpec, sweep

__version__ = "0.1.0"
