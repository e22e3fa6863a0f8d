"""
Definite-order descriptions of the quantum switch.

The control state `α|a⟩ + β|b⟩` determines which process happens first: the
superposition `α|Â⟩ + β|B̂⟩` of the (normalized, mutually orthogonal) branch
process vectors. The second process is the one orthogonal to it within the
span of |Â⟩ and |B̂⟩. The relabeling is purely descriptive; it never changes
what the switch does.
"""

import typing
import dataclasses
from dataclasses import dataclass

import numpy as np

from src.exceptions import NotUnitary
from src.generics.linalg import (
    DEFAULT_TOLERANCE,
    Operator,
    StateVector,
    approx_eq_up_to_phase,
    matmul,
    normalized_hs_overlap,
    unitarity_defect,
)
from src.generics.process_space import (
    PARALLEL_TOLERANCE,
    ProcessPair,
    ProcessVector,
    distill_orthogonal,
    fix_phase,
    normalize,
    overlap,
    process_operator,
    superpose,
    vectorize,
)
from src.logging import logger
from src.specifics.switch import (
    ControlBasis,
    SwitchCircuit,
    check_normalized,
    conditional_operators,
)


__all__ = [
    "DEFAULT_LABELS",
    "OrderedDescription",
    "ConsistencyReport",
    "relabel",
    "relabel_circuit",
    "narrative",
    "arm_narrative",
    "consistency_report",
]

DEFAULT_LABELS = ("A", "B")

Coordinates: typing.TypeAlias = typing.Tuple[complex, complex]


@dataclass(slots=True, frozen=True)
class OrderedDescription:
    """A definite-order account "first <first> then <second>" of a switch run."""

    control_state: StateVector
    """Control qubit state `α|a⟩ + β|b⟩`."""
    first: ProcessVector
    """Unit-norm process that happens first."""
    second: ProcessVector
    """Unit-norm process orthogonal to `first` that happens second."""
    basis: ProcessPair
    """Orthonormal pair (|Â⟩, |B̂⟩) the description is expressed in."""
    first_coordinates: Coordinates
    """Coordinates of `first` in `basis`."""
    second_coordinates: Coordinates
    """Coordinates of `second` in `basis`."""
    distilled: bool = False
    """Whether B was made orthogonal to A by subtracting its projection."""
    narrative: str = ""


@dataclass(slots=True, frozen=True)
class ConsistencyReport:
    """How the relabeled processes relate to what the switch actually does."""

    description: OrderedDescription
    first_operator: Operator
    second_operator: Operator
    composition: Operator
    """`second_operator·first_operator`, first applied first."""
    first_unitarity_defect: float
    second_unitarity_defect: float
    control_basis: ControlBasis
    """Outcome basis {control, orthogonal of control}."""
    switch_conditionals: typing.Tuple[Operator, Operator]
    overlap_table: typing.Tuple[typing.Tuple[float, float], typing.Tuple[float, float]]
    """Normalized Hilbert-Schmidt overlaps; rows `first_operator`, `composition`;
    columns the two switch conditionals."""
    composition_matches: typing.Tuple[bool, bool]
    """Whether `composition` equals each conditional up to a global phase."""
    notes: str


def _check_unitary(gate: Operator, label: str, tol: float) -> None:
    defect = unitarity_defect(gate)
    if not defect < tol:
        raise NotUnitary(defect=defect, gate_name=label)


def _orthonormal_basis(
    a_vector: ProcessVector,
    b_vector: ProcessVector,
    parallel_tol: float,
    orthogonality_tol: float,
) -> typing.Tuple[ProcessPair, bool]:
    pair = distill_orthogonal(a_vector, b_vector, parallel_tol=parallel_tol)
    raw_overlap = overlap(pair.first, normalize(b_vector))
    if raw_overlap == 0:
        return ProcessPair(pair.first, normalize(b_vector)), False

    # Keep |B̂⟩ pointing along |B⟩ rather than using the distilled phase rule,
    # so exactly orthogonal inputs come back as themselves.
    alignment = overlap(b_vector, pair.second)
    second = pair.second
    if abs(alignment) > 0:
        second = ProcessVector(
            second.d, second.coeffs * (abs(alignment) / alignment), second.label
        )
    distilled = abs(raw_overlap) > orthogonality_tol
    if not distilled:
        second = second.relabel(b_vector.label)
    return ProcessPair(pair.first, second), distilled


def relabel(
    a_gate: Operator,
    b_gate: Operator,
    control: StateVector,
    labels: typing.Tuple[str, str] = DEFAULT_LABELS,
    tol: float = DEFAULT_TOLERANCE,
    parallel_tol: float = PARALLEL_TOLERANCE,
    *,
    unitarity_tol: typing.Optional[float] = None,
    normalization_tol: typing.Optional[float] = None,
) -> OrderedDescription:
    """
    Describe the switch with control state `control` as a definite order.

    With `control = α|a⟩ + β|b⟩` the first process is `α|Â⟩ + β|B̂⟩` and the
    second is `conj(β)|Â⟩ − conj(α)|B̂⟩`, with its phase fixed so that its first
    nonzero coordinate in (|Â⟩, |B̂⟩) is real and positive. Partially
    overlapping processes are distilled first.

    :param a_gate: Process selected first by control |a⟩.
    :param b_gate: Process selected first by control |b⟩.
    :param control: Unit-norm control qubit state.
    :param labels: Names of the two processes.
    :param tol: Orthogonality tolerance below which B is not considered distilled.
        Also the default for `unitarity_tol` and `normalization_tol`.
    :param parallel_tol: Parallelism threshold passed to `distill_orthogonal`.
    :param unitarity_tol: Largest accepted unitarity defect of the gates.
    :param normalization_tol: Largest accepted deviation of the control norm from 1.
    :raises OrderUndefined: If |A⟩ and |B⟩ are parallel up to a phase.
    :raises NotUnitary: If either gate is not unitary.
    :raises NotNormalized: If the control state is not normalized.
    """
    label_a, label_b = labels
    unitarity_tol = tol if unitarity_tol is None else unitarity_tol
    normalization_tol = tol if normalization_tol is None else normalization_tol
    _check_unitary(a_gate, label_a, unitarity_tol)
    _check_unitary(b_gate, label_b, unitarity_tol)
    check_normalized(control, 2, normalization_tol, name="control state")

    basis, distilled = _orthonormal_basis(
        vectorize(a_gate, label_a),
        vectorize(b_gate, label_b),
        parallel_tol=parallel_tol,
        orthogonality_tol=tol,
    )
    amplitudes = control.amplitudes / np.linalg.norm(control.amplitudes)
    alpha, beta = complex(amplitudes[0]), complex(amplitudes[1])
    second_alpha, second_beta = (
        complex(c) for c in fix_phase(np.array([np.conj(beta), -np.conj(alpha)]))
    )

    first = superpose(alpha, basis.first, beta, basis.second)
    second = superpose(second_alpha, basis.first, second_beta, basis.second)
    description = OrderedDescription(
        control_state=control,
        first=normalize(first),
        second=normalize(second),
        basis=basis,
        first_coordinates=(alpha, beta),
        second_coordinates=(second_alpha, second_beta),
        distilled=distilled,
    )
    logger.debug(
        f"Relabeled control {control.amplitudes.tolist()!r}: "
        f"first {first.label}, second {second.label}"
    )
    return dataclasses.replace(description, narrative=narrative(description))


def relabel_circuit(
    c: SwitchCircuit,
    control: StateVector,
    labels: typing.Tuple[str, str] = DEFAULT_LABELS,
    tol: float = DEFAULT_TOLERANCE,
    parallel_tol: float = PARALLEL_TOLERANCE,
    *,
    normalization_tol: typing.Optional[float] = None,
) -> OrderedDescription:
    """
    `relabel` for a circuit, honouring its order convention: with
    `reverse_order` set, control |a⟩ selects B first.

    The gates are checked against the circuit's own unitarity tolerance.
    """
    a_gate, b_gate = c.a_gate, c.b_gate
    if c.reverse_order:
        a_gate, b_gate = b_gate, a_gate
        labels = (labels[1], labels[0])
    return relabel(
        a_gate,
        b_gate,
        control,
        labels=labels,
        tol=tol,
        parallel_tol=parallel_tol,
        unitarity_tol=c.tolerance,
        normalization_tol=normalization_tol,
    )


def narrative(desc: OrderedDescription) -> str:
    """
    Two-line account of a description: the quantum-language sentence followed
    by its ordinary-language form.
    """
    first, second = desc.first.label, desc.second.label
    return (
        f"{first} happens first, not its orthogonal {second}, "
        f"then {second} happens, not its orthogonal {first}.\n"
        f"first {first} then {second}"
    )


def arm_narrative(desc: OrderedDescription) -> str:
    """The same description in the language of a particle in a two-arm interferometer."""
    return f"Particle is in arm {desc.first.label} and not in arm {desc.second.label}."


def consistency_report(
    c: SwitchCircuit,
    control: StateVector,
    labels: typing.Tuple[str, str] = DEFAULT_LABELS,
    tol: float = DEFAULT_TOLERANCE,
    parallel_tol: float = PARALLEL_TOLERANCE,
    *,
    normalization_tol: typing.Optional[float] = None,
) -> ConsistencyReport:
    """
    Compare the relabeled processes with the switch's conditional operators
    for the outcome basis {control, orthogonal of control}.

    The report records whether the sequential composition of the relabeled
    processes matches a conditional; it does not assume it. Relabeled
    processes count as unitary when their defect is below the circuit's
    unitarity tolerance.

    :raises OrderUndefined: Propagated from `relabel`.
    """
    normalization_tol = tol if normalization_tol is None else normalization_tol
    desc = relabel_circuit(
        c,
        control,
        labels=labels,
        tol=tol,
        parallel_tol=parallel_tol,
        normalization_tol=normalization_tol,
    )
    first_operator = process_operator(desc.first)
    second_operator = process_operator(desc.second)
    composition = matmul(second_operator, first_operator)

    basis = ControlBasis.around(control, tolerance=normalization_tol)
    conditionals = conditional_operators(c, control, basis, normalization_tol)
    table = tuple(
        tuple(normalized_hs_overlap(row, column) for column in conditionals)
        for row in (first_operator, composition)
    )
    matches = tuple(
        approx_eq_up_to_phase(composition, conditional, tol)
        for conditional in conditionals
    )

    first_defect = unitarity_defect(first_operator)
    second_defect = unitarity_defect(second_operator)
    notes = []
    if desc.distilled:
        notes.append(
            f"{desc.basis.second.label.removesuffix('⊥')} overlaps "
            f"{desc.basis.first.label} and was distilled to its orthogonal part"
        )
    notes.append(
        f"first process {desc.first.label} is "
        + (
            "unitary"
            if first_defect < c.tolerance
            else f"not unitary (defect {first_defect:.3e})"
        )
    )
    notes.append(
        f"second process {desc.second.label} is "
        + (
            "unitary"
            if second_defect < c.tolerance
            else f"not unitary (defect {second_defect:.3e})"
        )
    )
    matched = [str(index) for index, match in enumerate(matches) if match]
    if matched:
        notes.append(
            "second·first matches switch conditional "
            + " and ".join(matched)
            + " up to global phase"
        )
    else:
        notes.append("second·first matches no switch conditional up to global phase")

    return ConsistencyReport(
        description=desc,
        first_operator=first_operator,
        second_operator=second_operator,
        composition=composition,
        first_unitarity_defect=first_defect,
        second_unitarity_defect=second_defect,
        control_basis=basis,
        switch_conditionals=conditionals,
        overlap_table=typing.cast(
            typing.Tuple[typing.Tuple[float, float], typing.Tuple[float, float]], table
        ),
        composition_matches=typing.cast(typing.Tuple[bool, bool], matches),
        notes="\n".join(notes),
    )
