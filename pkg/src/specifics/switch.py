"""
The two-process quantum switch.

The control qubit is the first tensor factor everywhere (joint index
`control·d + target`). Control |a⟩ (computational 0) means "first A then B",
so the target experiences the product `B·A`; control |b⟩ gives `A·B`:

    S = |a⟩⟨a| ⊗ B·A + |b⟩⟨b| ⊗ A·B
"""

import typing
from dataclasses import dataclass

import numpy as np

from src.exceptions import (
    DimensionMismatch,
    NotNormalized,
    NotOrthonormal,
    NotUnitary,
)
from src.generics.linalg import (
    DEFAULT_TOLERANCE,
    Operator,
    StateVector,
    apply,
    inner,
    matmul,
    norm,
    tensor_product,
    unitarity_defect,
)
from src.generics.process_space import fix_phase
from src.logging import logger


__all__ = [
    "ZERO_PROBABILITY",
    "SwitchCircuit",
    "ControlBasis",
    "SwitchOutcome",
    "CONTROL_A",
    "CONTROL_B",
    "check_normalized",
    "orthogonal_state",
    "switch_unitary",
    "run_switch",
    "measure_control",
    "conditional_operator",
    "conditional_operators",
]

ZERO_PROBABILITY = 1e-14
"""Outcomes less likely than this have no defined conditional target state."""

CONTROL_A = StateVector.basis(0, 2)
CONTROL_B = StateVector.basis(1, 2)


def check_normalized(
    state: StateVector,
    dim: typing.Optional[int] = None,
    tol: float = DEFAULT_TOLERANCE,
    name: str = "state",
) -> None:
    """
    :raises DimensionMismatch: If `dim` is given and differs from the state's.
    :raises NotNormalized: If the state's norm differs from 1 by more than `tol`.
    """
    if dim is not None and state.dim != dim:
        raise DimensionMismatch(
            f"The {name} must have dimension {dim}, got {state.dim}",
            expected=dim,
            actual=state.dim,
        )
    size = norm(state)
    if abs(size - 1.0) > tol:
        raise NotNormalized(f"The {name} must have unit norm, got {size!r}", norm=size)


@dataclass(slots=True, frozen=True)
class SwitchCircuit:
    """
    Two unitary branch processes A and B on a `d`-dimensional target,
    with the order selected by a control qubit.
    """

    a_gate: Operator
    """Process A."""
    b_gate: Operator
    """Process B."""
    reverse_order: bool = False
    """If True, control |a⟩ selects "first B then A" instead."""
    tolerance: float = DEFAULT_TOLERANCE
    """Largest unitarity defect accepted for the branch processes."""

    def __post_init__(self) -> None:
        if self.a_gate.dim != self.b_gate.dim:
            raise DimensionMismatch(
                "Processes A and B must act on the same system",
                expected=self.a_gate.dim,
                actual=self.b_gate.dim,
            )
        for name, gate in (("A", self.a_gate), ("B", self.b_gate)):
            defect = unitarity_defect(gate)
            if not defect < self.tolerance:
                raise NotUnitary(defect=defect, gate_name=name)

    @property
    def d(self) -> int:
        """Target dimension."""
        return self.a_gate.dim

    def branch_products(self) -> typing.Tuple[Operator, Operator]:
        """Target operators selected by control |a⟩ and |b⟩ respectively."""
        a_first = matmul(self.b_gate, self.a_gate)
        b_first = matmul(self.a_gate, self.b_gate)
        if self.reverse_order:
            return b_first, a_first
        return a_first, b_first


@dataclass(slots=True, frozen=True)
class ControlBasis:
    """An orthonormal measurement basis of the control qubit."""

    chi0: StateVector
    chi1: StateVector
    tolerance: float = DEFAULT_TOLERANCE

    def __post_init__(self) -> None:
        check_normalized(self.chi0, 2, self.tolerance, name="basis state chi0")
        check_normalized(self.chi1, 2, self.tolerance, name="basis state chi1")
        overlap = abs(inner(self.chi0, self.chi1))
        if overlap > self.tolerance:
            raise NotOrthonormal(
                "Control basis states must be mutually orthogonal", overlap=overlap
            )

    @classmethod
    def computational(cls) -> "ControlBasis":
        return cls(CONTROL_A, CONTROL_B)

    @classmethod
    def around(
        cls, state: StateVector, tolerance: float = DEFAULT_TOLERANCE
    ) -> "ControlBasis":
        """Basis `{state, orthogonal_state(state)}`."""
        return cls(state, orthogonal_state(state), tolerance)

    def __iter__(self) -> typing.Iterator[StateVector]:
        return iter((self.chi0, self.chi1))


@dataclass(slots=True, frozen=True)
class SwitchOutcome:
    """Result of one control measurement outcome."""

    outcome_index: int
    probability: float
    conditional_target: typing.Optional[StateVector]
    """Normalized target state given this outcome; None when the outcome is impossible."""

    @property
    def is_defined(self) -> bool:
        """False when the outcome probability is below `ZERO_PROBABILITY`."""
        return self.conditional_target is not None


def orthogonal_state(state: StateVector) -> StateVector:
    """
    The qubit state orthogonal to `state = α|a⟩ + β|b⟩`, i.e. `conj(β)|a⟩ − conj(α)|b⟩`,
    with its first nonzero amplitude made real and positive.
    """
    if state.dim != 2:
        raise DimensionMismatch(expected=2, actual=state.dim)
    alpha, beta = state.amplitudes
    return StateVector(fix_phase(np.array([np.conj(beta), -np.conj(alpha)])))


def switch_unitary(c: SwitchCircuit) -> Operator:
    """
    Joint unitary `|a⟩⟨a| ⊗ B·A + |b⟩⟨b| ⊗ A·B` on control ⊗ target.
    """
    a_first, b_first = c.branch_products()
    projector_a = Operator(np.outer(CONTROL_A.amplitudes, CONTROL_A.amplitudes))
    projector_b = Operator(np.outer(CONTROL_B.amplitudes, CONTROL_B.amplitudes))
    joint = (
        tensor_product(projector_a, a_first).entries
        + tensor_product(projector_b, b_first).entries
    )
    logger.debug(f"Built switch unitary on {2 * c.d} dimensions")
    return Operator(joint)


def run_switch(
    c: SwitchCircuit,
    control: StateVector,
    target: StateVector,
    tol: float = DEFAULT_TOLERANCE,
) -> StateVector:
    """
    Send `target` through the switch with the given control state.

    :return: Joint control ⊗ target state after the switch.
    """
    check_normalized(control, 2, tol, name="control state")
    check_normalized(target, c.d, tol, name="target state")
    return apply(switch_unitary(c), tensor_product(control, target))


def measure_control(
    joint: StateVector,
    basis: ControlBasis,
    tol: float = DEFAULT_TOLERANCE,
    zero_probability: float = ZERO_PROBABILITY,
) -> typing.Tuple[SwitchOutcome, SwitchOutcome]:
    """
    Measure the control qubit of a joint state in `basis`.

    :param joint: Unit-norm joint state of dimension `2·d`.
    :param basis: Orthonormal control basis.
    :return: One outcome per basis state. The probabilities sum to 1.
    """
    if joint.dim % 2:
        raise DimensionMismatch(
            f"Joint state dimension must be even, got {joint.dim}", actual=joint.dim
        )
    check_normalized(joint, tol=tol, name="joint state")
    blocks = joint.amplitudes.reshape(2, joint.dim // 2)

    outcomes = []
    for index, chi in enumerate(basis):
        projected = chi.amplitudes.conj() @ blocks
        probability = float(np.vdot(projected, projected).real)
        conditional = None
        if probability >= zero_probability:
            conditional = StateVector(projected / np.sqrt(probability))
        outcomes.append(
            SwitchOutcome(
                outcome_index=index,
                probability=probability,
                conditional_target=conditional,
            )
        )
    return outcomes[0], outcomes[1]


def conditional_operator(
    c: SwitchCircuit,
    control_in: StateVector,
    chi_out: StateVector,
    tol: float = DEFAULT_TOLERANCE,
) -> Operator:
    """
    The unnormalized map the target undergoes when the control, prepared in
    `control_in`, is found in `chi_out`:

        ⟨chi_out|a⟩⟨a|control_in⟩·B·A + ⟨chi_out|b⟩⟨b|control_in⟩·A·B
    """
    check_normalized(control_in, 2, tol, name="control state")
    if chi_out.dim != 2:
        raise DimensionMismatch(expected=2, actual=chi_out.dim)
    a_first, b_first = c.branch_products()
    weight_a = np.conj(chi_out.amplitudes[0]) * control_in.amplitudes[0]
    weight_b = np.conj(chi_out.amplitudes[1]) * control_in.amplitudes[1]
    return Operator(weight_a * a_first.entries + weight_b * b_first.entries)


def conditional_operators(
    c: SwitchCircuit,
    control_in: StateVector,
    basis: ControlBasis,
    tol: float = DEFAULT_TOLERANCE,
) -> typing.Tuple[Operator, Operator]:
    """Conditional operators for both outcomes of `basis`."""
    return (
        conditional_operator(c, control_in, basis.chi0, tol),
        conditional_operator(c, control_in, basis.chi1, tol),
    )
