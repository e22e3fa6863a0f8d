"""
Processes as vectors.

A process `U` on a `d`-dimensional system is represented by its Choi-style
vector in `H_in ⊗ H_out` with `coeffs[i·d + j] = U[j, i]`: the image of the
input basis state |i⟩ fills the |i⟩_in block. This is column stacking, and it
makes the coefficient inner product equal to the Hilbert-Schmidt inner
product `Tr(A†·B)` with no extra conjugation. Vectorization is unnormalized,
so a unitary has norm √d.
"""

import typing
import math
from dataclasses import dataclass

import numpy as np

from src.exceptions import (
    DegenerateVector,
    DimensionMismatch,
    NonFiniteError,
    OrderUndefined,
)
from src.generics.linalg import Operator, as_complex
from src.logging import logger
from src.typing import ComplexArray, ComplexLike
from src.utils import format_amplitude


__all__ = [
    "ZERO_NORM_TOLERANCE",
    "PARALLEL_TOLERANCE",
    "ProcessVector",
    "ProcessPair",
    "vectorize",
    "devectorize",
    "overlap",
    "process_norm",
    "normalize",
    "scale",
    "superpose",
    "fix_phase",
    "process_operator",
    "compose_label",
    "distill_orthogonal",
]

ZERO_NORM_TOLERANCE = 1e-12
PARALLEL_TOLERANCE = 1e-10


@dataclass(slots=True, frozen=True, eq=False)
class ProcessVector:
    """A process on a `d`-dimensional system as a vector of `d²` coefficients."""

    d: int
    """Dimension of the system the process acts on."""
    coeffs: ComplexArray
    """Read-only coefficients ordered as |i⟩_in ⊗ |j⟩_out, index `i·d + j`."""
    label: str
    """Human-readable process name, e.g. `A` or `(0.7071·A + 0.7071·B)`."""

    def __post_init__(self) -> None:
        coeffs = np.array(self.coeffs, dtype=np.complex128, copy=True).reshape(-1)
        if self.d < 1 or coeffs.shape[0] != self.d * self.d:
            raise DimensionMismatch(
                f"A process on d={self.d} needs {self.d * self.d} coefficients, "
                f"got {coeffs.shape[0]}",
                expected=self.d * self.d,
                actual=coeffs.shape[0],
            )
        if not np.all(np.isfinite(coeffs)):
            raise NonFiniteError(f"Process {self.label!r} has non-finite coefficients")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    def relabel(self, label: str) -> "ProcessVector":
        return ProcessVector(self.d, self.coeffs, label)

    def __repr__(self) -> str:
        return f"ProcessVector(label={self.label!r}, d={self.d})"


@dataclass(slots=True, frozen=True)
class ProcessPair:
    """Two mutually orthogonal process vectors to which an order applies."""

    first: ProcessVector
    second: ProcessVector


def _check_same_space(v: ProcessVector, w: ProcessVector) -> None:
    if v.d != w.d:
        raise DimensionMismatch(expected=v.d, actual=w.d)


def vectorize(u: Operator, label: str) -> ProcessVector:
    """
    Choi-style vector of the process `u`.

    :param u: The process as a matrix. Unitarity is not required.
    :param label: Name of the process.
    :return: Process vector with `coeffs[i·d + j] = u[j, i]`.
    """
    return ProcessVector(u.dim, u.entries.T.reshape(-1), label)


def devectorize(v: ProcessVector) -> Operator:
    """Exact inverse of `vectorize`."""
    return Operator(v.coeffs.reshape(v.d, v.d).T)


def overlap(v: ProcessVector, w: ProcessVector) -> complex:
    """Inner product of coefficient sequences, antilinear in `v`. Equals `Tr(V†·W)`."""
    _check_same_space(v, w)
    return complex(np.vdot(v.coeffs, w.coeffs))


def process_norm(v: ProcessVector) -> float:
    return float(np.linalg.norm(v.coeffs))


def scale(v: ProcessVector, factor: ComplexLike) -> ProcessVector:
    """Multiply all coefficients by `factor`; the label is kept."""
    return ProcessVector(v.d, v.coeffs * as_complex(factor), v.label)


def normalize(v: ProcessVector) -> ProcessVector:
    """
    Unit-norm copy of `v` with the same label.

    :raises DegenerateVector: If the norm of `v` is below `ZERO_NORM_TOLERANCE`.
    """
    size = process_norm(v)
    if size < ZERO_NORM_TOLERANCE:
        raise DegenerateVector(f"Process {v.label!r} has (near) zero norm", norm=size)
    return ProcessVector(v.d, v.coeffs / size, v.label)


def fix_phase(
    values: ComplexArray, tol: float = ZERO_NORM_TOLERANCE
) -> ComplexArray:
    """
    Rotate `values` by a global phase so that its first entry of modulus above
    `tol`, scanning by index, is real and positive.
    """
    for value in values:
        if abs(value) > tol:
            return values * (abs(value) / value)
    return values


def process_operator(v: ProcessVector) -> Operator:
    """
    Devectorize `v` after rescaling it to the norm √d of a vectorized unitary.

    Unit-norm process vectors built from normalized Choi vectors map to
    operators directly comparable with unitaries, e.g. (|X̂⟩ + |Ẑ⟩)/√2 ↦ H.
    """
    size = process_norm(v)
    if size < ZERO_NORM_TOLERANCE:
        raise DegenerateVector(f"Process {v.label!r} has (near) zero norm", norm=size)
    return devectorize(scale(v, math.sqrt(v.d) / size))


def _term(coefficient: complex, label: str) -> typing.Optional[typing.Tuple[str, str]]:
    rendered = format_amplitude(coefficient)
    if rendered == format_amplitude(0.0):
        return None
    if rendered.startswith("-"):
        return ("−", f"{rendered.removeprefix('-')}·{label}")
    return ("+", f"{rendered}·{label}")


def compose_label(terms: typing.Sequence[typing.Tuple[complex, str]]) -> str:
    """
    Label of a linear combination, e.g. `(0.7071·A − 0.7071·B)`.

    Amplitudes render to 4 decimal places rounding half to even. Terms that
    render as zero are dropped and a lone unit real coefficient collapses to
    the bare label.
    """
    rendered = [
        term
        for term in (_term(coefficient, label) for coefficient, label in terms)
        if term is not None
    ]
    if not rendered:
        return "0"
    if len(rendered) == 1:
        sign, body = rendered[0]
        if sign == "+" and body.startswith(f"{format_amplitude(1.0)}·"):
            return body.split("·", 1)[1]
    parts = []
    for index, (sign, body) in enumerate(rendered):
        if index == 0:
            parts.append(body if sign == "+" else f"{sign}{body}")
        else:
            parts.append(f" {sign} {body}")
    return f"({''.join(parts)})"


def superpose(
    alpha: ComplexLike,
    v: ProcessVector,
    beta: ComplexLike,
    w: ProcessVector,
    label: typing.Optional[str] = None,
) -> ProcessVector:
    """
    Coefficientwise `alpha·v + beta·w`.

    :param label: Explicit label for the result. By default it is composed
        from the amplitudes and the labels of `v` and `w`.
    """
    _check_same_space(v, w)
    alpha, beta = as_complex(alpha), as_complex(beta)
    coeffs = alpha * v.coeffs + beta * w.coeffs
    if label is None:
        label = compose_label([(alpha, v.label), (beta, w.label)])
    return ProcessVector(v.d, coeffs, label)


def distill_orthogonal(
    v: ProcessVector,
    w: ProcessVector,
    parallel_tol: float = PARALLEL_TOLERANCE,
) -> ProcessPair:
    """
    Replace two partially overlapping processes by an orthonormal pair.

    The part of `w` that has no sense of order relative to `v` is its projection
    onto `v`; subtracting it and normalizing leaves a vector orthogonal to `v`.
    The span of the inputs is preserved.

    :param v: Process that keeps its direction.
    :param w: Process that is made orthogonal to `v`.
    :param parallel_tol: Inputs whose normalized overlap modulus exceeds
        `1 - parallel_tol` are treated as the same process.
    :return: `(v̂, ŵ⊥)`. The phase of `ŵ⊥` is fixed so that its first nonzero
        coefficient is real and positive.
    :raises OrderUndefined: If `v` and `w` are parallel up to a phase.
    :raises DegenerateVector: If either input has (near) zero norm.
    """
    _check_same_space(v, w)
    v_hat = normalize(v)
    w_hat = normalize(w)
    projection = overlap(v_hat, w_hat)
    if abs(projection) > 1.0 - parallel_tol:
        raise OrderUndefined(
            f"Processes {v.label!r} and {w.label!r} are parallel up to a phase; "
            "there is no sense of order to the same process repeated",
            overlap=abs(projection),
        )

    logger.debug(
        f"Distilling {w.label!r} against {v.label!r} (|overlap| = {abs(projection):.3e})"
    )
    residual = w_hat.coeffs - projection * v_hat.coeffs
    # Second pass of Gram-Schmidt to restore orthogonality lost to rounding.
    residual = residual - np.vdot(v_hat.coeffs, residual) * v_hat.coeffs
    residual = residual / np.linalg.norm(residual)
    w_perp = ProcessVector(v.d, fix_phase(residual), f"{w.label}⊥")
    return ProcessPair(first=v_hat, second=w_perp)
