import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qparrondo.qcore import (
    PureState,
    StateError,
    basis_index,
    basis_label,
    loss_probability,
    norm_squared,
    qubit,
    schmidt_coefficients,
    tensor,
    win_probability,
)

from conftest import polar_qubits
from qparrondo.multiplexer import qubit_from_polar

PLUS = qubit(1 / math.sqrt(2), 1 / math.sqrt(2))


def test_basis_product():
    s = tensor([PureState.basis("0")] * 3)
    assert s[0] == 1
    assert np.count_nonzero(s.amplitudes) == 1


def test_equal_superposition_has_eight_entries():
    s = tensor([PLUS] * 3)
    assert s.dim == 8
    np.testing.assert_allclose(s.amplitudes, np.full(8, 1 / math.sqrt(8)), atol=1e-15)


def test_big_endian_order():
    s = tensor([PureState.basis("1"), PureState.basis("0")])
    assert s.dim == 4
    assert s[2] == 1
    assert basis_index([1, 1, 0]) == 6
    assert basis_label(6, 3) == "110"


@pytest.mark.parametrize("bits, expected", [("001", 1.0), ("110", 0.0), ("111", 1.0)])
def test_win_probability_of_basis_states(bits, expected):
    assert win_probability(PureState.basis(bits)) == expected


def test_win_probability_equal_superposition():
    assert win_probability(tensor([PLUS] * 3)) == pytest.approx(0.5, abs=1e-15)


def test_norm_squared():
    assert norm_squared(PureState.basis("000")) == 1.0
    assert norm_squared(tensor([PLUS] * 3)) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize(
    "amps",
    [[1, 0, 0], [1, 1], [0, 0], [float("nan"), 1], [float("inf"), 0], [1]],
)
def test_rejects_malformed_states(amps):
    with pytest.raises(StateError):
        PureState(np.array(amps, dtype=complex))


def test_tensor_errors():
    with pytest.raises(StateError):
        tensor([])
    with pytest.raises(StateError):
        tensor([np.array([1, 0])])


def test_state_is_read_only():
    s = PureState.basis("01")
    with pytest.raises(ValueError):
        s.amplitudes[0] = 1


@given(polar_qubits, polar_qubits, polar_qubits)
def test_tensor_associative(a, b, c):
    a, b, c = (qubit_from_polar(q) for q in (a, b, c))
    left = tensor([a, tensor([b, c])])
    right = tensor([tensor([a, b]), c])
    assert left.allclose(right, atol=1e-12)
    assert abs(norm_squared(left) - 1) < 1e-12


@given(polar_qubits, polar_qubits, polar_qubits, st.floats(0, 2 * math.pi))
def test_win_loss_partition_and_global_phase(a, b, c, phase):
    s = tensor(qubit_from_polar(q) for q in (a, b, c))
    assert win_probability(s) + loss_probability(s) == pytest.approx(1.0, abs=1e-12)
    rotated = PureState(cmath.exp(1j * phase) * s.amplitudes)
    assert abs(win_probability(rotated) - win_probability(s)) < 1e-12


def test_schmidt_coefficients_detect_product():
    s = tensor([PLUS, PureState.basis("1"), PLUS])
    sv = schmidt_coefficients(s, 2)
    assert sv[1] < 1e-12
    bell = PureState(np.array([1, 0, 0, 1]) / math.sqrt(2))
    np.testing.assert_allclose(schmidt_coefficients(bell, 1), [1 / math.sqrt(2)] * 2)
