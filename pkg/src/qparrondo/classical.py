"""Classical Parrondo games: the biased coin (game A) and the two-step
history-dependent game B.

Histories are indexed ``2*x[t-2] + x[t-1]`` with 1 = win, so index 0 is
loss-loss and uses ``p1``, index 3 is win-win and uses ``p4``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Sequence, Union

import numpy as np

FAIR_TOL = 1e-12
STATIONARY_TOL = 1e-12
MAX_POWER_ITERATIONS = 1_000_000
BURN_IN = 1000


class DegenerateChain(ArithmeticError):
    """The closed-form win probability or its c/s split is undefined."""


class ReducibleChain(ArithmeticError):
    """The history chain has no unique, reachable stationary distribution."""


class Verdict(str, Enum):
    WINNING = "winning"
    FAIR = "fair"
    LOSING = "losing"

    def __str__(self) -> str:
        return self.value


def verdict_from_pwin(p: float, tol: float = FAIR_TOL) -> Verdict:
    if abs(p - 0.5) <= tol:
        return Verdict.FAIR
    return Verdict.WINNING if p > 0.5 else Verdict.LOSING


def _check_prob(name: str, value: float) -> float:
    value = float(value)
    if not (0.0 <= value <= 1.0):
        raise ValueError(f"{name}={value!r} is not a probability")
    return value


@dataclass(frozen=True)
class GameA:
    p_win: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "p_win", _check_prob("p_win", self.p_win))

    @property
    def coins(self) -> tuple[float, float, float, float]:
        return (self.p_win,) * 4


@dataclass(frozen=True)
class ClassicalHDGame:
    """Win probabilities after loss-loss, loss-win, win-loss, win-win."""

    p1: float
    p2: float
    p3: float
    p4: float

    def __post_init__(self) -> None:
        for name in ("p1", "p2", "p3", "p4"):
            object.__setattr__(self, name, _check_prob(name, getattr(self, name)))

    @property
    def coins(self) -> tuple[float, float, float, float]:
        return (self.p1, self.p2, self.p3, self.p4)


Game = Union[GameA, ClassicalHDGame]


def as_hd_game(g: Game) -> ClassicalHDGame:
    return g if isinstance(g, ClassicalHDGame) else ClassicalHDGame(*g.coins)


@dataclass(frozen=True)
class GameClassification:
    verdict: Verdict
    c: float
    s: float


def pwin_closed_form(g: Game) -> float:
    p1, p2, p3, p4 = as_hd_game(g).coins
    denom = (1 - p4) * (2 * p1 + 1 - p3) + p1 * p2
    if denom <= 1e-12:
        raise DegenerateChain(f"denominator {denom!r} vanishes for {g!r}")
    return p1 * (p2 + 1 - p4) / denom


def classify(g: Game) -> GameClassification:
    """Sign of ``c = (1-p4)(1-p3) - p1 p2`` decides the game (``s`` > 0)."""
    p1, p2, p3, p4 = as_hd_game(g).coins
    s = p1 * (p2 + 1 - p4)
    c = (1 - p4) * (1 - p3) - p1 * p2
    if s <= 0:
        raise DegenerateChain(f"s = {s!r} is not positive for {g!r}")
    if abs(c) <= FAIR_TOL:
        verdict = Verdict.FAIR
    else:
        verdict = Verdict.WINNING if c < 0 else Verdict.LOSING
    return GameClassification(verdict, c, s)


def transition_matrix(g: Game) -> np.ndarray:
    """Row-stochastic 4x4 matrix; history ``(x2, x1)`` moves to ``(x1, outcome)``."""
    T = np.zeros((4, 4))
    for j, p in enumerate(g.coins):
        last = j & 1
        T[j, (last << 1) | 1] = p
        T[j, last << 1] = 1.0 - p
    return T


def _stationary(T: np.ndarray, tol: float = STATIONARY_TOL) -> np.ndarray:
    # Power iteration: repeated squaring reaches T^(2^m) quickly, then plain
    # steps pi <- pi T polish until the residual is below tol.
    P = T
    for _ in range(64):
        P2 = P @ P
        done = np.max(np.abs(P2 - P)) < tol
        P = P2
        if done:
            break
    if np.max(np.ptp(P, axis=0)) > 1e-8:
        raise ReducibleChain("history chain does not converge to a unique distribution")
    pi = P[0] / P[0].sum()
    for _ in range(MAX_POWER_ITERATIONS):
        nxt = pi @ T
        nxt /= nxt.sum()
        residual = np.max(np.abs(nxt - pi))
        pi = nxt
        if residual < tol:
            return pi
    raise ReducibleChain("power iteration did not reach the residual tolerance")


def stationary_distribution(g: Game) -> np.ndarray:
    coins = g.coins
    if not all(0.0 < p < 1.0 for p in coins):
        raise ReducibleChain(f"coin probabilities must lie strictly inside (0, 1): {coins}")
    return _stationary(transition_matrix(g))


def pwin_stationary(g: Game) -> float:
    """``sum_j pi_j p_j`` from the stationary history distribution."""
    return float(stationary_distribution(g) @ np.asarray(g.coins))


# --------------------------------------------------------------- sequences

@dataclass(frozen=True)
class Schedule:
    """Games played periodically in order, or drawn uniformly each step."""

    games: tuple[Game, ...]
    randomize: bool = False

    def __post_init__(self) -> None:
        games = tuple(self.games)
        if not games:
            raise ValueError("schedule is empty")
        object.__setattr__(self, "games", games)

    @classmethod
    def from_pattern(cls, pattern: str, a: GameA, b: ClassicalHDGame) -> "Schedule":
        """``"AB"``, ``"AAB"``... are periodic; ``"random"`` mixes A and B evenly."""
        if pattern == "random":
            return cls((a, b), randomize=True)
        lookup = {"A": a, "B": b}
        if not pattern or set(pattern) - set(lookup):
            raise ValueError(f"bad schedule pattern {pattern!r}")
        return cls(tuple(lookup[ch] for ch in pattern))


def schedule_pwin(schedule: Schedule) -> float:
    """Long-run win probability of a schedule, from the stationary chain."""
    coins = np.array([g.coins for g in schedule.games])
    if schedule.randomize:
        return pwin_closed_form(ClassicalHDGame(*coins.mean(axis=0)))
    if not np.all((coins > 0) & (coins < 1)):
        raise ReducibleChain("periodic schedules need coins strictly inside (0, 1)")
    mats = [transition_matrix(g) for g in schedule.games]
    period = np.eye(4)
    for T in mats:
        period = period @ T
    pi = _stationary(period)
    total = 0.0
    for T, c in zip(mats, coins):
        total += float(pi @ c)
        pi = pi @ T
    return total / len(mats)


@dataclass(frozen=True)
class SimulationResult:
    mean_payoff: float
    stderr: float
    win_frequency: float
    steps: int


def _batch_stderr(payoff: np.ndarray, n_batches: int = 50) -> float:
    n = payoff.size
    if n < 20 * n_batches:
        return float(payoff.std(ddof=1) / math.sqrt(n)) if n > 1 else float("inf")
    size = n // n_batches
    means = payoff[: size * n_batches].reshape(n_batches, size).mean(axis=1)
    return float(means.std(ddof=1) / math.sqrt(n_batches))


def simulate_sequence(
    schedule: Schedule | Sequence[Game], steps: int, seed: int, burn_in: int = BURN_IN
) -> SimulationResult:
    """Monte Carlo play of a schedule with +1/-1 stakes.

    The standard error uses batch means, since successive outcomes of a
    history-dependent game are correlated.
    """
    if not isinstance(schedule, Schedule):
        schedule = Schedule(tuple(schedule))
    if steps < 1:
        raise ValueError("steps must be >= 1")
    rng = np.random.default_rng(seed)
    total = burn_in + steps
    coins = [g.coins for g in schedule.games]
    n_games = len(coins)
    history = int(rng.integers(4))
    uniforms = rng.random(total).tolist()
    if schedule.randomize:
        picks = rng.integers(n_games, size=total).tolist()
    else:
        picks = [t % n_games for t in range(total)]
    outcomes = bytearray(total)
    for t in range(total):
        win = uniforms[t] < coins[picks[t]][history]
        outcomes[t] = win
        history = ((history << 1) & 3) | win
    won = np.frombuffer(bytes(outcomes), dtype=np.uint8)[burn_in:]
    payoff = 2.0 * won - 1.0
    return SimulationResult(
        mean_payoff=float(payoff.mean()),
        stderr=_batch_stderr(payoff),
        win_frequency=float(won.mean()),
        steps=steps,
    )


# ----------------------------------------------------------- region search

@dataclass(frozen=True)
class ParrondoSearch:
    """Random sampling of (game A, game B) pairs inside the unit hypercube."""

    budget: int = 10_000
    pa_range: tuple[float, float] = (0.40, 0.50)
    p_range: tuple[float, float] = (0.05, 0.95)
    schedules: tuple[str, ...] = ("random", "AB", "AAB", "ABB", "AABB")
    min_payoff: float = 0.0

    def __post_init__(self) -> None:
        if self.budget < 0:
            raise ValueError("budget must be non-negative")
        for name in ("pa_range", "p_range"):
            lo, hi = getattr(self, name)
            if not (0.0 < lo <= hi < 1.0):
                raise ValueError(f"{name}={(lo, hi)!r} must lie strictly inside (0, 1)")
        object.__setattr__(self, "schedules", tuple(self.schedules))


@dataclass(frozen=True)
class ParrondoInstance:
    a: GameA
    b: ClassicalHDGame
    schedule: str
    a_verdict: Verdict
    b_verdict: Verdict
    a_pwin: float
    b_pwin: float
    schedule_pwin: float
    index: int = field(default=-1, compare=False)

    @property
    def schedule_payoff(self) -> float:
        return 2.0 * self.schedule_pwin - 1.0

    def build_schedule(self) -> Schedule:
        return Schedule.from_pattern(self.schedule, self.a, self.b)


def iter_parrondo_samples(search: ParrondoSearch, seed: int) -> Iterator[ParrondoInstance]:
    rng = np.random.default_rng(seed)
    for idx in range(search.budget):
        pa = rng.uniform(*search.pa_range)
        ps = rng.uniform(*search.p_range, size=4)
        a, b = GameA(pa), ClassicalHDGame(*ps)
        ca, cb = classify(a), classify(b)
        if ca.verdict is not Verdict.LOSING or cb.verdict is not Verdict.LOSING:
            continue
        best = None
        for pattern in search.schedules:
            p = schedule_pwin(Schedule.from_pattern(pattern, a, b))
            if 2 * p - 1 > search.min_payoff and (best is None or p > best[1]):
                best = (pattern, p)
        if best is None:
            continue
        yield ParrondoInstance(
            a=a,
            b=b,
            schedule=best[0],
            a_verdict=ca.verdict,
            b_verdict=cb.verdict,
            a_pwin=pa,
            b_pwin=pwin_closed_form(b),
            schedule_pwin=best[1],
            index=idx,
        )


def find_parrondo_samples(search: ParrondoSearch, seed: int) -> list[ParrondoInstance]:
    """Losing A and B pairs for which some schedule has positive payoff.

    Each sampled pair keeps only its best winning schedule.
    """
    return list(iter_parrondo_samples(search, seed))
