"""SU(2) coins and the block-diagonal multiplexer acting on a history register.

A multiplexer on ``k`` qubits holds ``2**(k-1)`` coins. The first ``k-1`` qubits
are controls; coin ``j`` acts on the last qubit whenever the controls read ``j``
as a big-endian integer (coin 0 fires on history ``0...0``).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .qcore import NORM_TOL, PureState, StateError, qubit

TWO_PI = 2.0 * math.pi
# Absorbs rounding in values such as 0.75 * pi or 2 * pi; nothing is wrapped.
ANGLE_SLACK = 1e-12


class AngleError(ValueError):
    pass


class DimensionError(ValueError):
    pass


def _check_angle(name: str, value: float, upper: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value < -ANGLE_SLACK or value > upper + ANGLE_SLACK:
        raise AngleError(f"{name}={value!r} outside [0, {upper!r}]")
    return value


@dataclass(frozen=True)
class PolarQubit:
    """Single qubit ``(e^{i phi} cos(theta/2), e^{i eta} sin(theta/2))``."""

    theta: float
    phi: float = 0.0
    eta: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "theta", _check_angle("theta", self.theta, math.pi))
        object.__setattr__(self, "phi", _check_angle("phi", self.phi, TWO_PI))
        object.__setattr__(self, "eta", _check_angle("eta", self.eta, TWO_PI))

    @property
    def amplitudes(self) -> tuple[complex, complex]:
        half = self.theta / 2.0
        return (
            cmath.exp(1j * self.phi) * math.cos(half),
            cmath.exp(1j * self.eta) * math.sin(half),
        )


@dataclass(frozen=True)
class PolarBlock:
    """Coin angles; see :func:`block_from_polar`."""

    theta: float
    phi: float = 0.0
    eta: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "theta", _check_angle("theta", self.theta, math.pi))
        object.__setattr__(self, "phi", _check_angle("phi", self.phi, TWO_PI))
        object.__setattr__(self, "eta", _check_angle("eta", self.eta, TWO_PI))


@dataclass(frozen=True)
class SU2Block:
    """The coin ``[[a, b], [-conj(b), conj(a)]]`` with ``|a|^2 + |b|^2 = 1``."""

    a: complex
    b: complex

    def __post_init__(self) -> None:
        a, b = complex(self.a), complex(self.b)
        if not all(math.isfinite(x) for x in (a.real, a.imag, b.real, b.imag)):
            raise StateError("coin entries must be finite")
        norm = abs(a) ** 2 + abs(b) ** 2
        if abs(norm - 1.0) > NORM_TOL:
            raise StateError(f"|a|^2 + |b|^2 = {norm!r}, expected 1")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def identity(cls) -> "SU2Block":
        return cls(1.0, 0.0)

    @property
    def matrix(self) -> np.ndarray:
        a, b = self.a, self.b
        return np.array([[a, b], [-b.conjugate(), a.conjugate()]], dtype=np.complex128)

    def adjoint(self) -> "SU2Block":
        return SU2Block(self.a.conjugate(), -self.b)

    def then(self, other: "SU2Block") -> "SU2Block":
        """Coin equal to applying ``self`` first and ``other`` second."""
        # Closed under products: only the first row is needed.
        a1, b1 = self.a, self.b
        a2, b2 = other.a, other.b
        return SU2Block(a2 * a1 - b2 * b1.conjugate(), a2 * b1 + b2 * a1.conjugate())


def block_from_polar(p: PolarBlock) -> SU2Block:
    half = p.theta / 2.0
    return SU2Block(
        cmath.exp(1j * p.phi) * math.cos(half),
        cmath.exp(1j * p.eta) * math.sin(half),
    )


def qubit_from_polar(p: PolarQubit) -> PureState:
    return qubit(*p.amplitudes)


@dataclass(frozen=True)
class Multiplexer:
    blocks: tuple[SU2Block, ...]

    def __post_init__(self) -> None:
        blocks = tuple(self.blocks)
        n = len(blocks)
        if n < 1 or n & (n - 1):
            raise DimensionError(f"block count {n} is not a power of two")
        for blk in blocks:
            if not isinstance(blk, SU2Block):
                raise TypeError(f"expected SU2Block, got {type(blk).__name__}")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def from_polar(cls, blocks: Sequence[PolarBlock]) -> "Multiplexer":
        return cls(tuple(block_from_polar(p) for p in blocks))

    @classmethod
    def identity(cls, num_blocks: int) -> "Multiplexer":
        return cls((SU2Block.identity(),) * num_blocks)

    @property
    def num_qubits(self) -> int:
        return len(self.blocks).bit_length()

    @property
    def dim(self) -> int:
        return 2 * len(self.blocks)

    @cached_property
    def stacked(self) -> np.ndarray:
        """Coin matrices as a ``(num_blocks, 2, 2)`` array."""
        return np.stack([blk.matrix for blk in self.blocks])

    def adjoint(self) -> "Multiplexer":
        return Multiplexer(tuple(blk.adjoint() for blk in self.blocks))


def apply(m: Multiplexer, s: PureState) -> PureState:
    if s.dim != m.dim:
        raise DimensionError(f"state dimension {s.dim} != multiplexer dimension {m.dim}")
    pairs = s.amplitudes.reshape(-1, 2)
    out = np.einsum("jab,jb->ja", m.stacked, pairs)
    return PureState(out.reshape(-1))


def compose(first: Multiplexer, second: Multiplexer) -> Multiplexer:
    """Multiplexer for ``first`` followed by ``second``."""
    if len(first.blocks) != len(second.blocks):
        raise DimensionError(
            f"cannot compose multiplexers with {len(first.blocks)} and "
            f"{len(second.blocks)} blocks"
        )
    return Multiplexer(tuple(f.then(s) for f, s in zip(first.blocks, second.blocks)))


def as_dense_matrix(m: Multiplexer) -> np.ndarray:
    dim = m.dim
    out = np.zeros((dim, dim), dtype=np.complex128)
    for j, blk in enumerate(m.blocks):
        out[2 * j : 2 * j + 2, 2 * j : 2 * j + 2] = blk.matrix
    return out


def random_multiplexer(num_qubits: int, rng: np.random.Generator) -> Multiplexer:
    """Coins with angles drawn uniformly over their full polar ranges."""
    if num_qubits < 2:
        raise DimensionError("a multiplexer needs at least one control qubit")
    n = 2 ** (num_qubits - 1)
    theta = rng.uniform(0.0, math.pi, n)
    phi = rng.uniform(0.0, TWO_PI, n)
    eta = rng.uniform(0.0, TWO_PI, n)
    return Multiplexer.from_polar([PolarBlock(*t) for t in zip(theta, phi, eta)])
