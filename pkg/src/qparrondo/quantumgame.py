"""Three-qubit quantum history-dependent Parrondo game.

Qubits 1 and 2 hold the two-step history, qubit 3 the current outcome. A game is
four coins (one per history ``00, 01, 10, 11``) assembled into a multiplexer;
the win probability is the measurement mass on a final ``|1>`` for qubit 3.
Every closed form here is checked in the test-suite against the state-vector
route ``build_initial_state -> play -> win_probability``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import reduce
from typing import Literal, Sequence

import numpy as np

from .classical import FAIR_TOL, Verdict, verdict_from_pwin
from .multiplexer import (
    AngleError,
    DimensionError,
    Multiplexer,
    PolarBlock,
    PolarQubit,
    apply,
    compose,
    qubit_from_polar,
)
from .qcore import PureState, tensor, win_probability

ORACLE_TOL = 1e-12
HALF_PI = math.pi / 2.0

QUBIT_PARAMS = tuple(f"q{k}_{a}" for k in (1, 2, 3) for a in ("theta", "phi", "eta"))
BLOCK_PARAMS = tuple(f"b{j}_{a}" for j in (1, 2, 3, 4) for a in ("theta", "phi", "eta"))
# The 21 real parameters of a single play from a product input.
PARAMETER_NAMES = QUBIT_PARAMS + BLOCK_PARAMS


class OracleMismatch(AssertionError):
    """A closed form disagreed with the state-vector simulation."""


@dataclass(frozen=True)
class QuantumHDGame:
    blocks: tuple[PolarBlock, PolarBlock, PolarBlock, PolarBlock]

    def __post_init__(self) -> None:
        blocks = tuple(self.blocks)
        if len(blocks) != 4:
            raise DimensionError(f"expected 4 coins, got {len(blocks)}")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def from_thetas(
        cls, thetas: Sequence[float], phi: float = 0.0, eta: float = 0.0
    ) -> "QuantumHDGame":
        return cls(tuple(PolarBlock(t, phi, eta) for t in thetas))

    @classmethod
    def identity(cls) -> "QuantumHDGame":
        return cls.from_thetas([0.0] * 4)

    @property
    def multiplexer(self) -> Multiplexer:
        return Multiplexer.from_polar(self.blocks)

    @property
    def zero_phase(self) -> bool:
        return all(
            abs(cmath.exp(1j * b.phi) - 1) < ORACLE_TOL
            and abs(cmath.exp(1j * b.eta) - 1) < ORACLE_TOL
            for b in self.blocks
        )


@dataclass(frozen=True)
class InitialStateSpec:
    kind: Literal["product", "equal_superposition", "ghz"]
    q1: PolarQubit | None = None
    q2: PolarQubit | None = None
    q3: PolarQubit | None = None

    def __post_init__(self) -> None:
        if self.kind == "product":
            if not all(isinstance(q, PolarQubit) for q in (self.q1, self.q2, self.q3)):
                raise ValueError("product initial state needs three PolarQubits")
        elif self.kind in ("equal_superposition", "ghz"):
            if any(q is not None for q in (self.q1, self.q2, self.q3)):
                raise ValueError(f"{self.kind} initial state takes no qubit angles")
        else:
            raise ValueError(f"unknown initial state kind {self.kind!r}")

    @classmethod
    def product(cls, q1: PolarQubit, q2: PolarQubit, q3: PolarQubit) -> "InitialStateSpec":
        return cls("product", q1, q2, q3)

    @classmethod
    def equal_superposition(cls) -> "InitialStateSpec":
        return cls("equal_superposition")

    @classmethod
    def ghz(cls) -> "InitialStateSpec":
        return cls("ghz")

    def product_qubits(self) -> tuple[PolarQubit, PolarQubit, PolarQubit]:
        if self.kind == "product":
            return (self.q1, self.q2, self.q3)
        if self.kind == "equal_superposition":
            plus = PolarQubit(HALF_PI, 0.0, 0.0)
            return (plus, plus, plus)
        raise ValueError("the GHZ state is entangled and has no product form")


@dataclass(frozen=True)
class WinReport:
    p_win: float
    expected_payoff: float
    verdict: Verdict

    @classmethod
    def from_pwin(cls, p: float) -> "WinReport":
        return cls(p, expected_payoff(p), verdict_from_pwin(p, FAIR_TOL))


def expected_payoff(p: float) -> float:
    if not (0.0 <= p <= 1.0):
        # Rounding can push a simulated probability a hair past the unit interval.
        if -ORACLE_TOL <= p <= 1.0 + ORACLE_TOL:
            p = min(max(p, 0.0), 1.0)
        else:
            raise ValueError(f"p={p!r} is not a probability")
    return 2.0 * p - 1.0


def build_initial_state(spec: InitialStateSpec) -> PureState:
    if spec.kind == "ghz":
        amps = np.zeros(8, dtype=np.complex128)
        amps[0] = amps[7] = 1.0 / math.sqrt(2.0)
        return PureState(amps)
    if spec.kind == "equal_superposition":
        return PureState(np.full(8, 1.0 / math.sqrt(8.0), dtype=np.complex128))
    return tensor(qubit_from_polar(q) for q in spec.product_qubits())


def play(game: QuantumHDGame, initial: PureState) -> PureState:
    if initial.dim != 8:
        raise DimensionError(f"expected a 3-qubit state, got dimension {initial.dim}")
    return apply(game.multiplexer, initial)


def pwin_quantum_sim(game: QuantumHDGame, spec: InitialStateSpec) -> WinReport:
    return WinReport.from_pwin(win_probability(play(game, build_initial_state(spec))))


def _win_term(block: PolarBlock, q3: PolarQubit) -> float:
    # |conj(a) q32 - conj(b) q31|^2 expanded in polar form. The cross term is
    # 2 Re(conj(a) b q32 conj(q31)) = (1/2) sin(t) sin(tq) cos(phi - eta + phi_q - eta_q).
    cj, sj = math.cos(block.theta / 2), math.sin(block.theta / 2)
    cq, sq = math.cos(q3.theta / 2), math.sin(q3.theta / 2)
    cross = 0.5 * math.sin(block.theta) * math.sin(q3.theta) * math.cos(
        block.phi - block.eta + q3.phi - q3.eta
    )
    return cj * cj * sq * sq + sj * sj * cq * cq - cross


def pwin_quantum_closed(
    q1: PolarQubit, q2: PolarQubit, q3: PolarQubit, blocks: Sequence[PolarBlock]
) -> float:
    """Win probability from the 21 angles of a product input and four coins.

    History phases drop out: only ``|q_1r|^2 |q_2s|^2`` weight coin ``2r + s``.
    """
    if len(blocks) != 4:
        raise DimensionError(f"expected 4 coins, got {len(blocks)}")
    w1 = (math.cos(q1.theta / 2) ** 2, math.sin(q1.theta / 2) ** 2)
    w2 = (math.cos(q2.theta / 2) ** 2, math.sin(q2.theta / 2) ** 2)
    total = 0.0
    for r in (0, 1):
        for s in (0, 1):
            total += w1[r] * w2[s] * _win_term(blocks[2 * r + s], q3)
    return total


def pwin_closed_from_vector(angles: Sequence[float]) -> float:
    """Closed form over a flat vector ordered as :data:`PARAMETER_NAMES`."""
    q1, q2, q3, blocks = unpack_angles(angles)
    return pwin_quantum_closed(q1, q2, q3, blocks)


def unpack_angles(angles: Sequence[float]):
    if len(angles) != len(PARAMETER_NAMES):
        raise DimensionError(f"expected {len(PARAMETER_NAMES)} angles, got {len(angles)}")
    a = [float(x) for x in angles]
    q1, q2, q3 = (PolarQubit(*a[3 * k : 3 * k + 3]) for k in range(3))
    blocks = tuple(PolarBlock(*a[9 + 3 * j : 12 + 3 * j]) for j in range(4))
    return q1, q2, q3, blocks


def pwin_equal_superposition(blocks: Sequence[PolarBlock]) -> float:
    if len(blocks) != 4:
        raise DimensionError(f"expected 4 coins, got {len(blocks)}")
    return 0.5 - sum(math.sin(b.theta) * math.cos(b.eta - b.phi) for b in blocks) / 8.0


def sequence_multiplexer(games: Sequence[QuantumHDGame]) -> Multiplexer:
    if not games:
        raise ValueError("empty game sequence")
    return reduce(compose, (g.multiplexer for g in games))


def play_sequence(games: Sequence[QuantumHDGame], spec: InitialStateSpec) -> WinReport:
    """Compose the games' multiplexers in play order, apply once, then measure."""
    state = apply(sequence_multiplexer(games), build_initial_state(spec))
    return WinReport.from_pwin(win_probability(state))


def play_stepwise(games: Sequence[QuantumHDGame], initial: PureState) -> PureState:
    """Apply the games one after another with no intermediate measurement."""
    if not games:
        raise ValueError("empty game sequence")
    return reduce(lambda s, g: play(g, s), games, initial)


def _theta_table(theta) -> np.ndarray:
    table = np.asarray(theta, dtype=float)
    if table.ndim == 1:
        table = table[None, :]
    if table.ndim != 2 or table.shape[1] != 4 or table.shape[0] < 1:
        raise DimensionError(f"expected an n x 4 angle table, got shape {table.shape}")
    if not np.all(np.isfinite(table)) or np.any(table < -1e-12) or np.any(table > math.pi + 1e-12):
        raise AngleError("sequence angles must lie in [0, pi]")
    return table


def pwin_sequence_formula(theta) -> float:
    """Sine-of-summed-angles formula for ``n`` zero-phase games.

    Exact only for the equal-superposition input with every coin phase zero;
    see :func:`sequence_formula_exact`.
    """
    table = _theta_table(theta)
    return 0.5 - float(np.sum(np.sin(table.sum(axis=0)))) / 8.0


def sequence_formula_exact(games: Sequence[QuantumHDGame], spec: InitialStateSpec) -> bool:
    return spec.kind == "equal_superposition" and all(g.zero_phase for g in games)


def games_from_table(theta, phi: float = 0.0, eta: float = 0.0) -> list[QuantumHDGame]:
    return [QuantumHDGame.from_thetas(row, phi, eta) for row in _theta_table(theta)]


@dataclass(frozen=True)
class QuantumParrondoReport:
    single_pwins: tuple[float, ...]
    sequence_pwin_formula: float
    sequence_pwin_sim: float
    effect: bool

    @property
    def single_verdicts(self) -> tuple[Verdict, ...]:
        return tuple(verdict_from_pwin(p) for p in self.single_pwins)

    @property
    def sequence_verdict(self) -> Verdict:
        return verdict_from_pwin(self.sequence_pwin_sim)


def detect_quantum_parrondo(theta) -> QuantumParrondoReport:
    """Zero-phase games on the equal superposition: losing alone, winning together?"""
    table = _theta_table(theta)
    games = games_from_table(table)
    singles = tuple(pwin_equal_superposition(g.blocks) for g in games)
    formula = pwin_sequence_formula(table)
    sim = play_sequence(games, InitialStateSpec.equal_superposition()).p_win
    if abs(formula - sim) > ORACLE_TOL:
        raise OracleMismatch(f"sequence formula {formula!r} != simulation {sim!r}")
    effect = (
        len(games) >= 2
        and all(verdict_from_pwin(p) is Verdict.LOSING for p in singles)
        and verdict_from_pwin(sim) is Verdict.WINNING
    )
    return QuantumParrondoReport(singles, formula, sim, effect)
