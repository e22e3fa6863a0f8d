"""
Experiment configuration schemas.

A config is a JSON object (RFC 8259, UTF-8; `NaN`/`Infinity` literals are not
JSON and are rejected). See `README.md` for the field grammar.
"""

import typing
from typing_extensions import Annotated
from annotated_types import Ge, Le
import orjson
import pydantic

from src.exceptions import ConfigParseError, ConfigValidationError
from src.generics.gates import gate_names, lookup_gate, lookup_state, NAMED_STATES
from src.generics.gates import FIXED_GATES, ROTATION_GATES
from src.generics.linalg import DEFAULT_TOLERANCE, Operator, StateVector, inner, norm
from src.specifics.switch import ZERO_PROBABILITY
from src.generics.process_space import PARALLEL_TOLERANCE
from src.utils import fuzzy_search_keys


Command: typing.TypeAlias = typing.Literal["run", "relabel", "report", "distill"]
COMMANDS: typing.Tuple[str, ...] = typing.get_args(Command)

ComplexEntry: typing.TypeAlias = typing.Tuple[pydantic.FiniteFloat, pydantic.FiniteFloat]
"""A complex number as `[re, im]`."""

Tolerance: typing.TypeAlias = Annotated[pydantic.FiniteFloat, Ge(0), Le(1)]


class FieldErrors(ValueError):
    """Several cross-field problems found at once, each tied to the field at fault."""

    def __init__(self, entries: typing.Sequence[typing.Tuple[str, str]]) -> None:
        self.entries = list(entries)
        super().__init__("; ".join(msg for _, msg in self.entries))


def _suggestions(mapping: typing.Mapping[str, typing.Any], query: str) -> str:
    matches = fuzzy_search_keys(mapping, query, cutoff=0.5, count=3)
    if not matches:
        return ""
    return f" Did you mean {', '.join(repr(k) for k in matches)}?"


class Tolerances(pydantic.BaseModel):
    """Numerical tolerances, each overridable per config."""

    atol: Tolerance = pydantic.Field(
        DEFAULT_TOLERANCE, description="Absolute tolerance on entries"
    )
    unitarity: Tolerance = pydantic.Field(
        DEFAULT_TOLERANCE, description="Largest accepted unitarity defect of a gate"
    )
    normalization: Tolerance = pydantic.Field(
        DEFAULT_TOLERANCE, description="Largest accepted |norm - 1| of a state"
    )
    parallel: Tolerance = pydantic.Field(
        PARALLEL_TOLERANCE,
        description="Processes with normalized overlap above 1 - parallel are the same process",
    )
    zero_probability: Tolerance = pydantic.Field(
        ZERO_PROBABILITY,
        description="Outcomes less likely than this have no conditional state",
    )

    model_config = pydantic.ConfigDict(extra="forbid", frozen=True)


class GateSpec(pydantic.BaseModel):
    """A branch process, by library name or as an explicit matrix."""

    name: typing.Optional[str] = pydantic.Field(
        default=None,
        description="Gate name: I, X, Y, Z, H, S, T, RX(θ), RY(θ), RZ(θ) (radians)",
    )
    matrix: typing.Optional[typing.List[typing.List[ComplexEntry]]] = pydantic.Field(
        default=None,
        description="Square matrix, rows of [re, im] pairs",
    )

    model_config = pydantic.ConfigDict(extra="forbid", frozen=True)

    @pydantic.model_validator(mode="before")
    @classmethod
    def coerce_shorthand(cls, value: typing.Any) -> typing.Any:
        """Accept a bare name or a bare matrix in place of the object form."""
        if isinstance(value, str):
            return {"name": value}
        if isinstance(value, list):
            return {"matrix": value}
        return value

    @pydantic.model_validator(mode="after")
    def validate_gate(self) -> "GateSpec":
        if (self.name is None) == (self.matrix is None):
            raise ValueError("Exactly one of 'name' or 'matrix' must be given")
        if self.name is not None and lookup_gate(self.name) is None:
            known = {**FIXED_GATES, **ROTATION_GATES}
            raise ValueError(
                f"Unknown gate {self.name!r}. Known gates: {', '.join(gate_names())}."
                + _suggestions(known, self.name.split("(")[0])
            )
        if self.matrix is not None:
            size = len(self.matrix)
            if size == 0 or any(len(row) != size for row in self.matrix):
                raise ValueError("Gate matrix must be square with at least one row")
        return self

    def resolve(self) -> Operator:
        """The gate as an operator."""
        if self.name is not None:
            return typing.cast(Operator, lookup_gate(self.name))
        return Operator(
            [[complex(re, im) for re, im in row] for row in self.matrix or []]
        )

    @property
    def display_name(self) -> str:
        return self.name.strip() if self.name is not None else "matrix"


class StateSpec(pydantic.BaseModel):
    """A pure state, by name or as explicit amplitudes."""

    name: typing.Optional[str] = pydantic.Field(
        default=None,
        description="State name: 0, 1, +, -, +i, -i, and a (= 0), b (= 1)",
    )
    amplitudes: typing.Optional[typing.List[ComplexEntry]] = pydantic.Field(
        default=None,
        description="Amplitudes as [re, im] pairs",
    )

    model_config = pydantic.ConfigDict(extra="forbid", frozen=True)

    @pydantic.model_validator(mode="before")
    @classmethod
    def coerce_shorthand(cls, value: typing.Any) -> typing.Any:
        """Accept a bare name or a bare amplitude list in place of the object form."""
        if isinstance(value, str):
            return {"name": value}
        if isinstance(value, list):
            return {"amplitudes": value}
        return value

    @pydantic.model_validator(mode="after")
    def validate_state(self) -> "StateSpec":
        if (self.name is None) == (self.amplitudes is None):
            raise ValueError("Exactly one of 'name' or 'amplitudes' must be given")
        if self.name is not None and lookup_state(self.name) is None:
            raise ValueError(
                f"Unknown state {self.name!r}. Known states: "
                f"{', '.join(NAMED_STATES)}." + _suggestions(NAMED_STATES, self.name)
            )
        if self.amplitudes is not None and not self.amplitudes:
            raise ValueError("State must have at least one amplitude")
        return self

    def resolve(self) -> StateVector:
        """The state as a vector."""
        if self.name is not None:
            return typing.cast(StateVector, lookup_state(self.name))
        return StateVector([complex(re, im) for re, im in self.amplitudes or []])


class ExperimentConfig(pydantic.BaseModel):
    """One experiment on the two-process switch."""

    gate_a: GateSpec = pydantic.Field(description="Process A, first when control is |a⟩")
    gate_b: GateSpec = pydantic.Field(description="Process B, first when control is |b⟩")
    control: StateSpec = pydantic.Field(description="Control qubit state")
    target: StateSpec = pydantic.Field(description="Target system state")
    measurement_basis: typing.Optional[typing.Tuple[StateSpec, StateSpec]] = (
        pydantic.Field(
            default=None,
            description="Control measurement basis; defaults to {control, orthogonal of control}",
        )
    )
    command: typing.Optional[Command] = pydantic.Field(
        default=None, description="What to compute; the CLI subcommand sets it"
    )
    labels: typing.Tuple[str, str] = pydantic.Field(
        default=("A", "B"), description="Names of processes A and B"
    )
    reverse_order: bool = pydantic.Field(
        default=False, description="If true, control |a⟩ selects B first"
    )
    tolerances: typing.Optional[Tolerances] = pydantic.Field(
        default=None, description="Overrides of the default numerical tolerances"
    )

    model_config = pydantic.ConfigDict(extra="forbid", frozen=True)

    @property
    def effective_tolerances(self) -> Tolerances:
        """Configured tolerances, with defaults for anything not overridden."""
        return self.tolerances or Tolerances()

    @pydantic.field_validator("labels")
    @classmethod
    def validate_labels(cls, value: typing.Tuple[str, str]) -> typing.Tuple[str, str]:
        if any(not label.strip() for label in value):
            raise ValueError("Process labels must not be blank")
        if value[0] == value[1]:
            raise ValueError("Process labels must differ")
        return value

    @pydantic.model_validator(mode="after")
    def validate_dimensions(self) -> "ExperimentConfig":
        """
        Cross-field checks: matching gate dimensions, a qubit control, a target
        on the gates' system, unit-norm states and an orthonormal basis.
        """
        errors: typing.List[typing.Tuple[str, str]] = []
        tol = self.effective_tolerances.normalization
        a_dim = self.gate_a.resolve().dim
        b_dim = self.gate_b.resolve().dim
        if a_dim != b_dim:
            errors.append(
                (
                    "gate_b",
                    f"gate_a and gate_b must have the same dimension (got {a_dim} and {b_dim})",
                )
            )

        states: typing.List[typing.Tuple[str, StateSpec, int]] = [
            ("control", self.control, 2),
            ("target", self.target, a_dim),
        ]
        if self.measurement_basis is not None:
            states.extend(
                (f"measurement_basis.{index}", spec, 2)
                for index, spec in enumerate(self.measurement_basis)
            )
        resolved = {}
        for loc, spec, dim in states:
            state = spec.resolve()
            if state.dim != dim:
                errors.append((loc, f"State must have dimension {dim} (got {state.dim})"))
                continue
            size = norm(state)
            if abs(size - 1.0) > tol:
                errors.append((loc, f"State must have unit norm (got {size!r})"))
                continue
            resolved[loc] = state

        if {"measurement_basis.0", "measurement_basis.1"} <= resolved.keys():
            basis_overlap = abs(
                inner(resolved["measurement_basis.0"], resolved["measurement_basis.1"])
            )
            if basis_overlap > tol:
                errors.append(
                    (
                        "measurement_basis",
                        f"Basis states must be orthogonal (|overlap| = {basis_overlap!r})",
                    )
                )
        if errors:
            raise FieldErrors(errors)
        return self


def _error_entries(exc: pydantic.ValidationError) -> typing.List[typing.Dict[str, typing.Any]]:
    entries = []
    for error in exc.errors(include_url=False, include_input=False):
        cause = error.get("ctx", {}).get("error")
        if isinstance(cause, FieldErrors):
            entries.extend(
                {"loc": loc, "msg": msg, "type": "value_error"} for loc, msg in cause.entries
            )
            continue
        entries.append(
            {
                "loc": ".".join(str(part) for part in error["loc"]) or "config",
                "msg": error["msg"],
                "type": error["type"],
            }
        )
    return entries


def load_config_data(
    data: typing.Any,
    defaults: typing.Optional[typing.Mapping[str, typing.Any]] = None,
) -> ExperimentConfig:
    """
    Validate already-decoded config data.

    :param data: Decoded JSON value; must be an object.
    :param defaults: Optional tolerance preset merged under the config's own
        `tolerances` block.
    :raises ConfigValidationError: With every validation error found.
    """
    if not isinstance(data, dict):
        raise ConfigValidationError(
            errors=[
                {
                    "loc": "config",
                    "msg": f"Config must be a JSON object, got {type(data).__name__}",
                    "type": "model_type",
                }
            ]
        )
    if defaults:
        tolerances = data.get("tolerances", {})
        if isinstance(tolerances, dict):
            data = {**data, "tolerances": {**defaults, **tolerances}}
    try:
        return ExperimentConfig.model_validate(data, strict=False)
    except pydantic.ValidationError as exc:
        raise ConfigValidationError(errors=_error_entries(exc)) from exc
    except (ValueError, TypeError, OverflowError) as exc:
        # Resolution of pathological values (e.g. overflowing matrix products).
        raise ConfigValidationError(
            errors=[{"loc": "config", "msg": str(exc), "type": "value_error"}]
        ) from exc


def parse_config(
    text: typing.Union[str, bytes],
    defaults: typing.Optional[typing.Mapping[str, typing.Any]] = None,
) -> ExperimentConfig:
    """
    Parse and validate a JSON experiment config.

    :param text: The config document.
    :param defaults: Optional tolerance preset, see `load_config_data`.
    :raises ConfigParseError: If the document is not well-formed JSON.
    :raises ConfigValidationError: With every validation error found.
    """
    try:
        data = orjson.loads(text)
    except orjson.JSONDecodeError as exc:
        raise ConfigParseError(f"Invalid JSON: {exc}") from exc
    return load_config_data(data, defaults=defaults)


def dump_config(cfg: ExperimentConfig) -> typing.Dict[str, typing.Any]:
    """JSON-ready echo of a config, with defaults omitted. Parses back to an equal config."""
    return cfg.model_dump(mode="json", exclude_defaults=True)
