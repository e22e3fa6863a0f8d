"""Named single-qubit gates and states."""

import typing
import re
import math

import numpy as np

from src.generics.linalg import Operator, StateVector


__all__ = [
    "FIXED_GATES",
    "ROTATION_GATES",
    "NAMED_STATES",
    "rotation_gate_re",
    "rx",
    "ry",
    "rz",
    "gate_names",
    "lookup_gate",
    "lookup_state",
]

_SQRT_HALF = 1 / math.sqrt(2)

FIXED_GATES: typing.Dict[str, Operator] = {
    "I": Operator(np.eye(2)),
    "X": Operator([[0, 1], [1, 0]]),
    "Y": Operator([[0, -1j], [1j, 0]]),
    "Z": Operator([[1, 0], [0, -1]]),
    "H": Operator(np.array([[1, 1], [1, -1]]) * _SQRT_HALF),
    "S": Operator([[1, 0], [0, 1j]]),
    "T": Operator([[1, 0], [0, np.exp(1j * math.pi / 4)]]),
}


def rx(theta: float) -> Operator:
    """Rotation about the x axis by `theta` radians."""
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return Operator([[c, -1j * s], [-1j * s, c]])


def ry(theta: float) -> Operator:
    """Rotation about the y axis by `theta` radians."""
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return Operator([[c, -s], [s, c]])


def rz(theta: float) -> Operator:
    """Rotation about the z axis by `theta` radians."""
    return Operator(
        [[np.exp(-1j * theta / 2), 0], [0, np.exp(1j * theta / 2)]]
    )


ROTATION_GATES: typing.Dict[str, typing.Callable[[float], Operator]] = {
    "RX": rx,
    "RY": ry,
    "RZ": rz,
}

rotation_gate_re = re.compile(
    r"^\s*(?P<name>R[XYZ])\s*\(\s*(?P<theta>[-+]?(\d+(\.\d*)?|\.\d+)([eE][-+]?\d+)?)\s*\)\s*$",
    flags=re.IGNORECASE,
)

NAMED_STATES: typing.Dict[str, StateVector] = {
    "0": StateVector([1, 0]),
    "1": StateVector([0, 1]),
    "a": StateVector([1, 0]),
    "b": StateVector([0, 1]),
    "+": StateVector([_SQRT_HALF, _SQRT_HALF]),
    "-": StateVector([_SQRT_HALF, -_SQRT_HALF]),
    "+i": StateVector([_SQRT_HALF, 1j * _SQRT_HALF]),
    "-i": StateVector([_SQRT_HALF, -1j * _SQRT_HALF]),
}


def gate_names() -> typing.List[str]:
    """Names accepted by `lookup_gate`; rotations are listed with a `(θ)` argument."""
    return [*FIXED_GATES, *(f"{name}(θ)" for name in ROTATION_GATES)]


def lookup_gate(name: str) -> typing.Optional[Operator]:
    """
    Resolve a gate name such as `X`, `h` or `RX(0.5)` (angles in radians).

    :param name: Gate name, case-insensitive.
    :return: The gate, or None if the name is unknown.
    """
    gate = FIXED_GATES.get(name.strip().upper())
    if gate is not None:
        return gate
    match = rotation_gate_re.match(name)
    if not match:
        return None
    theta = float(match.group("theta"))
    if not math.isfinite(theta):
        return None
    return ROTATION_GATES[match.group("name").upper()](theta)


def lookup_state(name: str) -> typing.Optional[StateVector]:
    """
    Resolve a qubit state name: `0 1 + - +i -i`, with `a` ≡ `0` and `b` ≡ `1`
    for the control basis.

    :param name: State name.
    :return: The state, or None if the name is unknown.
    """
    return NAMED_STATES.get(name.strip().lower())
