"""Pure-state amplitude vectors over a small number of qubits.

Basis ordering is big-endian: the first qubit is the most significant bit, so
for three qubits index ``4*b0 + 2*b1 + b2`` holds ``|b0 b1 b2>``. The last qubit
carries the outcome of the current play (``|0>`` loss, ``|1>`` win).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

NORM_TOL = 1e-9
MAX_QUBITS = 20


class StateError(ValueError):
    """Raised for malformed amplitude vectors."""


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized amplitude vector of length ``2**num_qubits``."""

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        n = amps.size
        if n < 2 or n & (n - 1):
            raise StateError(f"state length {n} is not a power of two >= 2")
        if n > 2**MAX_QUBITS:
            raise StateError(f"more than {MAX_QUBITS} qubits")
        if not np.all(np.isfinite(amps)):
            raise StateError("state contains NaN or Inf amplitudes")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise StateError(f"state is not normalized (norm^2 = {norm!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def num_qubits(self) -> int:
        return self.amplitudes.size.bit_length() - 1

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def __len__(self) -> int:
        return self.amplitudes.size

    def __getitem__(self, index: int) -> complex:
        return complex(self.amplitudes[index])

    @classmethod
    def basis(cls, bits: str | Sequence[int]) -> "PureState":
        """Computational basis state from a bit string such as ``"001"``."""
        bits = [int(b) for b in bits]
        if not bits or any(b not in (0, 1) for b in bits):
            raise StateError(f"invalid basis label {bits!r}")
        amps = np.zeros(2 ** len(bits), dtype=np.complex128)
        amps[basis_index(bits)] = 1.0
        return cls(amps)

    def allclose(self, other: "PureState", atol: float = 1e-12) -> bool:
        return self.dim == other.dim and bool(
            np.allclose(self.amplitudes, other.amplitudes, rtol=0.0, atol=atol)
        )


def basis_index(bits: Sequence[int]) -> int:
    k = len(bits)
    return sum(int(b) << (k - 1 - i) for i, b in enumerate(bits))


def basis_label(index: int, num_qubits: int) -> str:
    if not 0 <= index < 2**num_qubits:
        raise StateError(f"index {index} out of range for {num_qubits} qubits")
    return format(index, f"0{num_qubits}b")


def qubit(alpha: complex, beta: complex) -> PureState:
    return PureState(np.array([alpha, beta], dtype=np.complex128))


def tensor(factors: Iterable[PureState]) -> PureState:
    """Kronecker product, first factor on the most significant qubits."""
    factors = list(factors)
    if not factors:
        raise StateError("tensor of an empty factor list")
    for f in factors:
        if not isinstance(f, PureState):
            raise StateError(f"tensor factor {f!r} is not a PureState")
    if sum(f.num_qubits for f in factors) > MAX_QUBITS:
        raise StateError(f"tensor product exceeds {MAX_QUBITS} qubits")
    amps = reduce(np.kron, (f.amplitudes for f in factors))
    return PureState(amps)


def norm_squared(state: PureState) -> float:
    return float(np.vdot(state.amplitudes, state.amplitudes).real)


def win_probability(state: PureState) -> float:
    """Born-rule mass on basis states whose last qubit is ``|1>``."""
    amps = state.amplitudes
    return float(np.sum(np.abs(amps[1::2]) ** 2))


def loss_probability(state: PureState) -> float:
    amps = state.amplitudes
    return float(np.sum(np.abs(amps[0::2]) ** 2))


def schmidt_coefficients(state: PureState, split: int) -> np.ndarray:
    """Singular values across the cut after the first ``split`` qubits."""
    if not 0 < split < state.num_qubits:
        raise StateError(f"invalid bipartition {split} for {state.num_qubits} qubits")
    mat = state.amplitudes.reshape(2**split, -1)
    return np.linalg.svd(mat, compute_uv=False)
