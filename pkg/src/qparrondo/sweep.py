"""Grid and random sweeps over the 21 single-play angles.

Records are produced lazily so large grids run in constant memory. Every
``oracle_every``-th record is recomputed by state-vector simulation.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Literal, Mapping

import numpy as np

from .classical import Verdict, verdict_from_pwin
from .quantumgame import (
    ORACLE_TOL,
    PARAMETER_NAMES,
    InitialStateSpec,
    OracleMismatch,
    QuantumHDGame,
    expected_payoff,
    pwin_closed_from_vector,
    pwin_quantum_sim,
    unpack_angles,
)

# Equal-superposition input and identity coins.
BASE_POINT: dict[str, float] = {
    name: (math.pi / 2 if name in ("q1_theta", "q2_theta", "q3_theta") else 0.0)
    for name in PARAMETER_NAMES
}


class SweepConfigError(ValueError):
    pass


def upper_bound(name: str) -> float:
    return math.pi if name.endswith("_theta") else 2.0 * math.pi


@dataclass(frozen=True)
class ParamRange:
    lo: float
    hi: float
    count: int | None = None

    def values(self) -> np.ndarray:
        if self.count is None:
            raise SweepConfigError("grid ranges need a point count")
        if self.count == 1:
            return np.array([self.lo])
        return np.linspace(self.lo, self.hi, self.count)


@dataclass(frozen=True)
class SweepSpec:
    ranges: Mapping[str, ParamRange]
    mode: Literal["grid", "random"] = "grid"
    samples: int = 0
    fixed: Mapping[str, float] = field(default_factory=dict)
    oracle_every: int = 1000

    def __post_init__(self) -> None:
        if self.mode not in ("grid", "random"):
            raise SweepConfigError(f"unknown sweep mode {self.mode!r}")
        if self.oracle_every < 1:
            raise SweepConfigError("oracle_every must be a positive integer")
        if self.samples < 0:
            raise SweepConfigError("samples must be non-negative")
        for name, value in self.fixed.items():
            _check_name(name)
            if not 0.0 <= value <= upper_bound(name) + 1e-12:
                raise SweepConfigError(f"fixed value {name}={value!r} out of range")
        for name, r in self.ranges.items():
            _check_name(name)
            if not (0.0 <= r.lo <= r.hi <= upper_bound(name) + 1e-12):
                raise SweepConfigError(f"range for {name} must satisfy 0 <= lo <= hi <= {upper_bound(name)!r}")
            if self.mode == "grid" and (r.count is None or r.count < 0):
                raise SweepConfigError(f"grid range for {name} needs a non-negative count")
            if name in self.fixed:
                raise SweepConfigError(f"{name} is both fixed and swept")

    @property
    def swept(self) -> list[str]:
        return [n for n in PARAMETER_NAMES if n in self.ranges]

    @property
    def budget(self) -> int:
        if self.mode == "random":
            return self.samples
        return math.prod(self.ranges[n].count for n in self.swept)

    def base_vector(self) -> np.ndarray:
        point = dict(BASE_POINT)
        point.update(self.fixed)
        return np.array([point[n] for n in PARAMETER_NAMES])


def _check_name(name: str) -> None:
    if name not in PARAMETER_NAMES:
        raise SweepConfigError(f"unknown parameter {name!r}")


@dataclass(frozen=True)
class SweepRecord:
    index: int
    angles: tuple[float, ...]
    p_win: float
    expected_payoff: float
    verdict: Verdict
    oracle_checked: bool


def iter_points(spec: SweepSpec, seed: int) -> Iterator[np.ndarray]:
    base = spec.base_vector()
    cols = [PARAMETER_NAMES.index(n) for n in spec.swept]
    if spec.mode == "grid":
        axes = [spec.ranges[n].values() for n in spec.swept]
        if any(len(a) == 0 for a in axes):
            return
        for combo in itertools.product(*axes):
            x = base.copy()
            x[cols] = combo
            yield x
    else:
        rng = np.random.default_rng(seed)
        lo = np.array([spec.ranges[n].lo for n in spec.swept])
        hi = np.array([spec.ranges[n].hi for n in spec.swept])
        for _ in range(spec.samples):
            x = base.copy()
            x[cols] = rng.uniform(lo, hi)
            yield x


def oracle_pwin(angles) -> float:
    q1, q2, q3, blocks = unpack_angles(angles)
    return pwin_quantum_sim(QuantumHDGame(blocks), InitialStateSpec.product(q1, q2, q3)).p_win


def sweep(spec: SweepSpec, seed: int = 0) -> Iterator[SweepRecord]:
    for index, x in enumerate(iter_points(spec, seed)):
        p = pwin_closed_from_vector(x)
        checked = index % spec.oracle_every == 0
        if checked:
            ref = oracle_pwin(x)
            if abs(p - ref) > ORACLE_TOL:
                raise OracleMismatch(f"point {index}: closed form {p!r} vs simulation {ref!r}")
        yield SweepRecord(
            index=index,
            angles=tuple(float(v) for v in x),
            p_win=p,
            expected_payoff=expected_payoff(p),
            verdict=verdict_from_pwin(p),
            oracle_checked=checked,
        )
