import typing
import numpy as np
import pytest

from src.generics.linalg import Operator, StateVector


PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def random_matrix(rng: np.random.Generator, d: int) -> np.ndarray:
    """Complex Ginibre matrix."""
    return (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) / np.sqrt(2)


def random_unitary(rng: np.random.Generator, d: int) -> Operator:
    """Haar-random unitary from the QR decomposition of a Ginibre matrix."""
    q, r = np.linalg.qr(random_matrix(rng, d))
    phases = np.diag(r) / np.abs(np.diag(r))
    return Operator(q * phases)


def random_state(rng: np.random.Generator, d: int) -> StateVector:
    amplitudes = rng.normal(size=d) + 1j * rng.normal(size=d)
    return StateVector(amplitudes / np.linalg.norm(amplitudes))


def max_error(x: typing.Any, y: typing.Any) -> float:
    return float(np.max(np.abs(np.asarray(x) - np.asarray(y))))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)
