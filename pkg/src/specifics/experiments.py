import typing
import asyncio
import csv
import io
from dataclasses import dataclass
from more_itertools import batched
import orjson
import pydantic

from src import CONVENTIONS_VERSION, __version__
from src.exceptions import ConfigValidationError, SwitchError
from src.generics.linalg import Operator, StateVector
from src.generics.process_space import (
    ProcessPair,
    ProcessVector,
    distill_orthogonal,
    process_norm,
    vectorize,
)
from src.logging import logger
from src.specifics.relabeler import (
    ConsistencyReport,
    OrderedDescription,
    arm_narrative,
    consistency_report,
    relabel_circuit,
)
from src.specifics.schemas import (
    Command,
    ExperimentConfig,
    Tolerances,
    dump_config,
)
from src.specifics.switch import (
    ControlBasis,
    SwitchCircuit,
    conditional_operators,
    measure_control,
    run_switch,
)
from src.utils import clean_float, complex_to_pair, timeit, to_async


OutputFormat: typing.TypeAlias = typing.Literal["structured", "tabular"]

CONVENTIONS: typing.Dict[str, str] = {
    "version": CONVENTIONS_VERSION,
    "tensor_ordering": "control ⊗ target, joint index = control·d + target",
    "switch_operator": "S = |a⟩⟨a| ⊗ B·A + |b⟩⟨b| ⊗ A·B; control |a⟩ means first A then B",
    "matrix_index": "entries[row][column]; row is the output index",
    "vectorization": "coeffs[i·d + j] = U[j][i] (column stacking, unnormalized)",
    "process_operator": "relabeled unit vectors are rescaled to norm √d before devectorizing",
    "phase_rule": "first coefficient with modulus above 1e-12 made real and positive; "
    "applied to distilled vectors, orthogonal control states and to the "
    "coordinates of the second relabeled process in (|Â⟩, |B̂⟩)",
    "complex_encoding": "[re, im]",
    "amplitude_rendering": "4 decimal places, round half to even",
}


class ReportDocument(pydantic.BaseModel):
    """Self-describing result of one command."""

    tool_version: str = __version__
    conventions: typing.Dict[str, str] = pydantic.Field(
        default_factory=lambda: dict(CONVENTIONS)
    )
    config: typing.Optional[typing.Dict[str, typing.Any]] = None
    """Echo of the config; re-running on it reproduces the results."""
    command: typing.Optional[Command] = None
    results: typing.Optional[typing.Dict[str, typing.Any]] = None
    error: typing.Optional[typing.Dict[str, typing.Any]] = None
    """Structured error, set instead of `results` when the command failed."""

    def as_data(self) -> typing.Dict[str, typing.Any]:
        """JSON-ready data, omitting unset top-level sections."""
        return {
            key: value
            for key, value in self.model_dump(mode="json").items()
            if value is not None
        }

    @property
    def exit_code(self) -> int:
        if self.error is None:
            return 0
        return int(self.error["exit_code"])


@dataclass(slots=True, frozen=True)
class ExperimentResult:
    """Outcome of one config in a sweep, in input order."""

    index: int
    document: ReportDocument


def _operator_data(op: Operator) -> typing.List[typing.List[typing.Tuple[float, float]]]:
    return [[complex_to_pair(entry) for entry in row] for row in op.entries.tolist()]


def _state_data(state: StateVector) -> typing.List[typing.Tuple[float, float]]:
    return [complex_to_pair(amplitude) for amplitude in state.amplitudes.tolist()]


def _process_data(v: ProcessVector) -> typing.Dict[str, typing.Any]:
    return {
        "label": v.label,
        "d": v.d,
        "coeffs": [complex_to_pair(c) for c in v.coeffs.tolist()],
        "norm": clean_float(process_norm(v)),
    }


def _description_data(desc: OrderedDescription) -> typing.Dict[str, typing.Any]:
    return {
        "control_state": _state_data(desc.control_state),
        "first": _process_data(desc.first),
        "second": _process_data(desc.second),
        "basis": [_process_data(desc.basis.first), _process_data(desc.basis.second)],
        "first_coordinates": [complex_to_pair(c) for c in desc.first_coordinates],
        "second_coordinates": [complex_to_pair(c) for c in desc.second_coordinates],
        "distilled": desc.distilled,
        "narrative": desc.narrative,
        "arm_narrative": arm_narrative(desc),
    }


def _report_data(report: ConsistencyReport) -> typing.Dict[str, typing.Any]:
    return {
        "description": _description_data(report.description),
        "first_operator": _operator_data(report.first_operator),
        "second_operator": _operator_data(report.second_operator),
        "composition": _operator_data(report.composition),
        "first_unitarity_defect": clean_float(report.first_unitarity_defect),
        "second_unitarity_defect": clean_float(report.second_unitarity_defect),
        "control_basis": [_state_data(chi) for chi in report.control_basis],
        "switch_conditionals": [_operator_data(k) for k in report.switch_conditionals],
        "overlap_table": [[clean_float(x) for x in row] for row in report.overlap_table],
        "composition_matches": list(report.composition_matches),
        "notes": report.notes,
    }


def _pair_data(pair: ProcessPair) -> typing.Dict[str, typing.Any]:
    return {"first": _process_data(pair.first), "second": _process_data(pair.second)}


def _circuit(cfg: ExperimentConfig, tolerances: Tolerances) -> SwitchCircuit:
    return SwitchCircuit(
        a_gate=cfg.gate_a.resolve(),
        b_gate=cfg.gate_b.resolve(),
        reverse_order=cfg.reverse_order,
        tolerance=tolerances.unitarity,
    )


def _run(cfg: ExperimentConfig, tolerances: Tolerances) -> typing.Dict[str, typing.Any]:
    circuit = _circuit(cfg, tolerances)
    control = cfg.control.resolve()
    target = cfg.target.resolve()
    if cfg.measurement_basis is not None:
        basis = ControlBasis(
            cfg.measurement_basis[0].resolve(),
            cfg.measurement_basis[1].resolve(),
            tolerance=tolerances.normalization,
        )
    else:
        basis = ControlBasis.around(control, tolerance=tolerances.normalization)

    joint = run_switch(circuit, control, target, tol=tolerances.normalization)
    outcomes = measure_control(
        joint,
        basis,
        tol=tolerances.normalization,
        zero_probability=tolerances.zero_probability,
    )
    conditionals = conditional_operators(
        circuit, control, basis, tol=tolerances.normalization
    )
    return {
        "joint_state": _state_data(joint),
        "measurement_basis": [_state_data(chi) for chi in basis],
        "outcomes": [
            {
                "outcome": outcome.outcome_index,
                "probability": clean_float(outcome.probability),
                "defined": outcome.is_defined,
                "conditional_target": (
                    _state_data(outcome.conditional_target)
                    if outcome.conditional_target is not None
                    else None
                ),
            }
            for outcome in outcomes
        ],
        "conditional_operators": [_operator_data(k) for k in conditionals],
    }


def _relabel(cfg: ExperimentConfig, tolerances: Tolerances) -> typing.Dict[str, typing.Any]:
    desc = relabel_circuit(
        _circuit(cfg, tolerances),
        cfg.control.resolve(),
        labels=cfg.labels,
        tol=tolerances.atol,
        parallel_tol=tolerances.parallel,
        normalization_tol=tolerances.normalization,
    )
    return _description_data(desc)


def _report(cfg: ExperimentConfig, tolerances: Tolerances) -> typing.Dict[str, typing.Any]:
    report = consistency_report(
        _circuit(cfg, tolerances),
        cfg.control.resolve(),
        labels=cfg.labels,
        tol=tolerances.atol,
        parallel_tol=tolerances.parallel,
        normalization_tol=tolerances.normalization,
    )
    return _report_data(report)


def _distill(cfg: ExperimentConfig, tolerances: Tolerances) -> typing.Dict[str, typing.Any]:
    label_a, label_b = cfg.labels
    pair = distill_orthogonal(
        vectorize(cfg.gate_a.resolve(), label_a),
        vectorize(cfg.gate_b.resolve(), label_b),
        parallel_tol=tolerances.parallel,
    )
    return _pair_data(pair)


COMMAND_HANDLERS: typing.Dict[
    str, typing.Callable[[ExperimentConfig, Tolerances], typing.Dict[str, typing.Any]]
] = {
    "run": _run,
    "relabel": _relabel,
    "report": _report,
    "distill": _distill,
}


def error_document(
    exc: SwitchError,
    cfg: typing.Optional[ExperimentConfig] = None,
) -> ReportDocument:
    """
    Structured error document for a failed command.

    :param exc: The error. Its `error_code` becomes the document's exit code.
    :param cfg: The config, when it was parsed.
    """
    details = exc.errors if isinstance(exc, ConfigValidationError) else []
    return ReportDocument(
        config=dump_config(cfg) if cfg is not None else None,
        command=cfg.command if cfg is not None else None,
        error={
            "type": type(exc).__name__,
            "message": str(exc),
            "exit_code": exc.error_code,
            "details": details,
        },
    )


def run_command(cfg: ExperimentConfig) -> ReportDocument:
    """
    Execute the config's command.

    - run: switch statistics and conditional states.
    - relabel: the definite-order description.
    - report: the consistency report.
    - distill: the orthonormal process pair.

    :raises ConfigValidationError: If the config has no command.
    :raises SwitchError: Domain errors such as `OrderUndefined` or `NotUnitary`.
    """
    if cfg.command is None:
        raise ConfigValidationError(
            errors=[{"loc": "command", "msg": "No command given", "type": "missing"}]
        )
    tolerances = cfg.effective_tolerances
    with timeit(f"Command {cfg.command!r}"):
        results = COMMAND_HANDLERS[cfg.command](cfg, tolerances)
    return ReportDocument(config=dump_config(cfg), command=cfg.command, results=results)


def execute(cfg: ExperimentConfig) -> ReportDocument:
    """`run_command`, returning domain and validation errors as error documents."""
    try:
        return run_command(cfg)
    except SwitchError as exc:
        logger.error(f"{type(exc).__name__}: {exc}")
        return error_document(exc, cfg)


async def run_experiments(
    configs: typing.Sequence[ExperimentConfig],
    batch_size: int = 10,
) -> typing.List[ExperimentResult]:
    """
    Run independent configs concurrently, `batch_size` at a time.

    :param configs: Configs to run; each must carry its command.
    :param batch_size: Number of configs to run concurrently.
    :return: One result per config, ordered by config index.
    """
    run_async = to_async(execute)
    results: typing.List[ExperimentResult] = []
    for batch_number, batch in enumerate(
        batched(enumerate(configs), n=batch_size), start=1
    ):
        logger.info(f"Running sweep batch {batch_number} ({len(batch)} configs)")
        documents = await asyncio.gather(*(run_async(cfg) for _, cfg in batch))
        results.extend(
            ExperimentResult(index=index, document=document)
            for (index, _), document in zip(batch, documents)
        )
    return sorted(results, key=lambda result: result.index)


def _dump_json(value: typing.Any) -> str:
    return orjson.dumps(
        value,
        option=orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS | orjson.OPT_APPEND_NEWLINE,
    ).decode("utf-8")


def _csv(header: typing.Sequence[str], rows: typing.Iterable[typing.Sequence[typing.Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def _process_rows(
    name: str, process: typing.Dict[str, typing.Any]
) -> typing.Iterator[typing.Tuple[typing.Any, ...]]:
    for index, (re, im) in enumerate(process["coeffs"]):
        yield (name, process["label"], index, repr(re), repr(im))


def _tabular(doc: ReportDocument) -> str:
    if doc.error is not None:
        return _csv(
            ("type", "exit_code", "message"),
            [(doc.error["type"], doc.error["exit_code"], doc.error["message"])],
        )
    results = doc.results or {}
    if doc.command == "run":
        return _csv(
            ("outcome", "probability"),
            (
                (outcome["outcome"], repr(outcome["probability"]))
                for outcome in results["outcomes"]
            ),
        )
    if doc.command == "relabel":
        return _csv(
            ("process", "label", "index", "re", "im"),
            [
                *_process_rows("first", results["first"]),
                *_process_rows("second", results["second"]),
            ],
        )
    if doc.command == "report":
        return _csv(
            ("row", "column", "overlap"),
            (
                (row_name, column, repr(value))
                for row_name, row in zip(("first", "second·first"), results["overlap_table"])
                for column, value in enumerate(row)
            ),
        )
    return _csv(
        ("vector", "label", "index", "re", "im"),
        [
            *_process_rows("first", results["first"]),
            *_process_rows("second", results["second"]),
        ],
    )


def emit(doc: ReportDocument, format: OutputFormat = "structured") -> str:
    """
    Serialize a document.

    Structured output is JSON with sorted keys and 2-space indentation.
    Tabular output is CSV with a header row and LF line endings. Both are
    deterministic byte for byte.
    """
    if format == "tabular":
        return _tabular(doc)
    return _dump_json(doc.as_data())


def emit_many(documents: typing.Sequence[ReportDocument], format: OutputFormat = "structured") -> str:
    """Serialize sweep results in order; tabular output prefixes each row with the config index."""
    if format == "tabular":
        chunks = []
        for index, doc in enumerate(documents):
            lines = emit(doc, "tabular").splitlines()
            header, rows = lines[0], lines[1:]
            chunks.append(f"config,{header}\n" + "".join(f"{index},{row}\n" for row in rows))
        return "".join(chunks)
    return _dump_json(
        [doc.as_data() for doc in documents]
    )
