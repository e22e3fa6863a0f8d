"""
Dense complex linear algebra for small systems.

Operators and states are immutable wrappers around read-only `complex128`
numpy arrays. Matrix index convention is row-major with the row being the
output index of the matrix acting on column vectors.
"""

import typing
import functools
from dataclasses import dataclass

import numpy as np

from src.exceptions import DimensionMismatch, NonFiniteError
from src.typing import ComplexArray, ComplexLike


__all__ = [
    "DEFAULT_TOLERANCE",
    "StateVector",
    "Operator",
    "as_complex",
    "identity",
    "tensor_product",
    "dagger",
    "matmul",
    "apply",
    "inner",
    "norm",
    "frobenius_norm",
    "hs_inner",
    "normalized_hs_overlap",
    "unitarity_defect",
    "approx_eq",
    "approx_eq_up_to_phase",
]

DEFAULT_TOLERANCE = 1e-10
"""Absolute tolerance on entries used wherever a call does not override it."""


def _frozen_array(
    data: typing.Any, ndim: int, name: str
) -> ComplexArray:
    array = np.array(data, dtype=np.complex128, copy=True)
    if array.ndim != ndim:
        raise DimensionMismatch(
            f"{name} expects a {ndim}-dimensional array, got shape {array.shape}"
        )
    if not np.all(np.isfinite(array)):
        raise NonFiniteError(f"{name} entries must be finite")
    array.setflags(write=False)
    return array


def as_complex(value: ComplexLike) -> complex:
    """
    Coerce a scalar to `complex`, rejecting NaN and infinities.

    :param value: A real or complex number.
    :return: The value as a finite Python complex.
    """
    value = complex(value)
    if not (np.isfinite(value.real) and np.isfinite(value.imag)):
        raise NonFiniteError(f"Scalar {value!r} is not finite")
    return value


@dataclass(slots=True, frozen=True, eq=False)
class StateVector:
    """A ket on a `dim`-dimensional system."""

    amplitudes: ComplexArray
    """Read-only amplitudes, one per computational basis state."""

    def __post_init__(self) -> None:
        amplitudes = _frozen_array(self.amplitudes, 1, "StateVector")
        if amplitudes.shape[0] < 1:
            raise DimensionMismatch("StateVector must have dim >= 1")
        object.__setattr__(self, "amplitudes", amplitudes)

    @property
    def dim(self) -> int:
        return int(self.amplitudes.shape[0])

    @classmethod
    def basis(cls, index: int, dim: int) -> "StateVector":
        """Computational basis state |index⟩ of a `dim`-dimensional system."""
        if not 0 <= index < dim:
            raise DimensionMismatch(f"Basis index {index} out of range for dim {dim}")
        amplitudes = np.zeros(dim, dtype=np.complex128)
        amplitudes[index] = 1.0
        return cls(amplitudes)

    def __repr__(self) -> str:
        return f"StateVector(dim={self.dim}, amplitudes={self.amplitudes.tolist()!r})"


@dataclass(slots=True, frozen=True, eq=False)
class Operator:
    """A square `dim`×`dim` matrix acting on a `dim`-dimensional system."""

    entries: ComplexArray
    """Read-only matrix entries, `entries[row, column]`."""

    def __post_init__(self) -> None:
        entries = _frozen_array(self.entries, 2, "Operator")
        rows, columns = entries.shape
        if rows != columns:
            raise DimensionMismatch(
                f"Operator must be square, got {rows}x{columns}",
                expected=rows,
                actual=columns,
            )
        if rows < 1:
            raise DimensionMismatch("Operator must have dim >= 1")
        object.__setattr__(self, "entries", entries)

    @property
    def dim(self) -> int:
        return int(self.entries.shape[0])

    def __repr__(self) -> str:
        return f"Operator(dim={self.dim}, entries={self.entries.tolist()!r})"


Tensorable = typing.TypeVar("Tensorable", StateVector, Operator)


def _check_dims(
    x: typing.Union[Operator, StateVector], y: typing.Union[Operator, StateVector]
) -> None:
    if x.dim != y.dim:
        raise DimensionMismatch(expected=x.dim, actual=y.dim)


def _values(x: typing.Union[Operator, StateVector]) -> ComplexArray:
    return x.entries if isinstance(x, Operator) else x.amplitudes


def identity(dim: int) -> Operator:
    """Identity operator on a `dim`-dimensional system."""
    return Operator(np.eye(dim, dtype=np.complex128))


@functools.singledispatch
def tensor_product(x: typing.Any, y: typing.Any) -> typing.Any:
    """
    Kronecker product `x ⊗ y`.

    Entry `(i·dy + k, j·dy + l)` of the result is `x[i, j]·y[k, l]`
    (for states, entry `i·dy + k` is `x[i]·y[k]`).
    """
    raise TypeError(f"Cannot take the tensor product of {type(x).__name__}")


@tensor_product.register
def _(x: Operator, y: Operator) -> Operator:
    if not isinstance(y, Operator):
        raise TypeError("Both factors must be operators")
    return Operator(np.kron(x.entries, y.entries))


@tensor_product.register
def _(x: StateVector, y: StateVector) -> StateVector:
    if not isinstance(y, StateVector):
        raise TypeError("Both factors must be state vectors")
    return StateVector(np.kron(x.amplitudes, y.amplitudes))


def dagger(x: Operator) -> Operator:
    """Conjugate transpose."""
    return Operator(x.entries.conj().T)


def matmul(x: Operator, y: Operator) -> Operator:
    """Matrix product `x·y` (y acts first)."""
    _check_dims(x, y)
    return Operator(x.entries @ y.entries)


def apply(op: Operator, state: StateVector) -> StateVector:
    """Act with `op` on `state`."""
    _check_dims(op, state)
    return StateVector(op.entries @ state.amplitudes)


def inner(u: StateVector, v: StateVector) -> complex:
    """Inner product ⟨u|v⟩, antilinear in `u`."""
    _check_dims(u, v)
    return complex(np.vdot(u.amplitudes, v.amplitudes))


def norm(state: StateVector) -> float:
    """Euclidean norm of a state."""
    return float(np.linalg.norm(state.amplitudes))


def frobenius_norm(x: Operator) -> float:
    return float(np.linalg.norm(x.entries))


def hs_inner(x: Operator, y: Operator) -> complex:
    """
    Hilbert-Schmidt inner product `Tr(x†·y)`.

    Two processes are orthogonal exactly when this vanishes.
    """
    _check_dims(x, y)
    return complex(np.vdot(x.entries, y.entries))


def normalized_hs_overlap(x: Operator, y: Operator) -> float:
    """
    `|Tr(x†·y)| / (‖x‖·‖y‖)` in Frobenius norms; 0 when either operator vanishes.
    """
    denominator = frobenius_norm(x) * frobenius_norm(y)
    if denominator == 0.0:
        return 0.0
    return abs(hs_inner(x, y)) / denominator


def unitarity_defect(x: Operator) -> float:
    """Frobenius norm of `x†·x − I`. Zero exactly for unitary `x`."""
    gram = x.entries.conj().T @ x.entries
    return float(np.linalg.norm(gram - np.eye(x.dim)))


def approx_eq(
    x: Tensorable,
    y: Tensorable,
    tol: float = DEFAULT_TOLERANCE,
) -> bool:
    """
    True when the largest entrywise distance between `x` and `y` is at most `tol`.

    Accepts two operators or two state vectors.
    """
    _check_dims(x, y)
    return float(np.max(np.abs(_values(x) - _values(y)))) <= tol


def approx_eq_up_to_phase(
    x: Tensorable,
    y: Tensorable,
    tol: float = DEFAULT_TOLERANCE,
) -> bool:
    """
    Like `approx_eq`, but ignoring a global phase.

    `y` is first rotated so that, at the position of the largest-magnitude entry
    of `x`, its phase matches that of `x`.
    """
    _check_dims(x, y)
    xs, ys = _values(x), _values(y)
    pivot = np.unravel_index(int(np.argmax(np.abs(xs))), xs.shape)
    if abs(xs[pivot]) > 0.0 and abs(ys[pivot]) > 0.0:
        phase = (xs[pivot] / abs(xs[pivot])) / (ys[pivot] / abs(ys[pivot]))
        ys = ys * phase
    return float(np.max(np.abs(xs - ys))) <= tol
