import asyncio
import typing
from pathlib import Path
import click
import yaml

from src.exceptions import ConfigParseError, SwitchError
from src.logging import logger
from src.specifics.experiments import (
    OutputFormat,
    ReportDocument,
    emit,
    emit_many,
    error_document,
    run_command,
    run_experiments,
)
from src.specifics.schemas import COMMANDS, ExperimentConfig, parse_config


COMMAND_HELP: typing.Dict[str, str] = {
    "run": "Run the switch and measure the control qubit.",
    "relabel": "Describe the switch as a definite order of relabeled processes.",
    "report": "Compare the relabeled processes with the switch's conditional operators.",
    "distill": "Distill two partially overlapping processes into an orthonormal pair.",
}


def load_tolerance_preset(
    preset_file: typing.Optional[typing.BinaryIO],
) -> typing.Optional[typing.Dict[str, typing.Any]]:
    """
    Load a YAML tolerance preset.

    :param preset_file: YAML file with a mapping of tolerance names to values.
    :return: The mapping, or None if no file was given.
    :raises ConfigParseError: If the file is not a YAML mapping.
    """
    if preset_file is None:
        return None
    try:
        preset = yaml.safe_load(preset_file)
    except yaml.YAMLError as exc:
        raise ConfigParseError(f"Invalid tolerance preset: {exc}") from exc
    if preset is None:
        return None
    if not isinstance(preset, dict):
        raise ConfigParseError("Tolerance preset must be a YAML mapping")
    return preset


def load_config(
    config_file: typing.BinaryIO,
    command: typing.Optional[str] = None,
    preset: typing.Optional[typing.Mapping[str, typing.Any]] = None,
) -> ExperimentConfig:
    """
    Read, parse and validate a config file.

    :param config_file: Binary file containing the JSON config.
    :param command: If given, overrides the config's own command.
    :param preset: Optional tolerance preset.
    """
    cfg = parse_config(config_file.read(), defaults=preset)
    if command is not None:
        cfg = cfg.model_copy(update={"command": command})
    logger.info(f"Loaded config {getattr(config_file, 'name', '<stream>')!r}")
    return cfg


def write_output(text: str, out: typing.Optional[Path]) -> None:
    """Write `text` to `out`, or to stdout. Line endings are written as-is."""
    if out is None:
        click.echo(text, nl=False)
        return
    out.write_text(text, encoding="utf-8", newline="")
    logger.info(f"Wrote {out}")


def report_failure(exc: SwitchError) -> None:
    click.echo(
        click.style(f"{type(exc).__name__}: {exc}", fg="red"),
        err=True,
    )
    for detail in getattr(exc, "errors", []):
        click.echo(
            click.style(f"  {detail['loc']}: {detail['msg']}", fg="yellow"),
            err=True,
        )


def execute_command(
    command: str,
    config_file: typing.BinaryIO,
    output_format: OutputFormat = "structured",
    out: typing.Optional[Path] = None,
    preset_file: typing.Optional[typing.BinaryIO] = None,
) -> int:
    """
    Run one command end to end and write its document.

    :return: The exit code: 0 success, 2 parse, 3 validation, 4 domain error.
    """
    cfg: typing.Optional[ExperimentConfig] = None
    try:
        preset = load_tolerance_preset(preset_file)
        cfg = load_config(config_file, command=command, preset=preset)
        document = run_command(cfg)
    except SwitchError as exc:
        report_failure(exc)
        document = error_document(exc, cfg)

    write_output(emit(document, output_format), out)
    return document.exit_code


def _common_options(func: typing.Callable[..., typing.Any]) -> typing.Callable[..., typing.Any]:
    func = click.option(
        "preset_file",
        "--tolerances",
        type=click.File("rb", lazy=True),
        help="Path to YAML file with tolerance overrides; the config's own `tolerances` take precedence.",
    )(func)
    func = click.option(
        "--out",
        type=click.Path(dir_okay=False, writable=True, path_type=Path),
        default=None,
        help="Write the document to this file instead of stdout.",
    )(func)
    func = click.option(
        "output_format",
        "--format",
        type=click.Choice(["structured", "tabular"]),
        default="structured",
        show_default=True,
        help="Structured (JSON) document or tabular (CSV) rows.",
    )(func)
    return func


def make_command(command: str) -> click.Command:
    """Build the CLI command for one of `run`, `relabel`, `report` or `distill`."""

    @click.command(
        name=command,
        help=COMMAND_HELP[command],
        context_settings={"help_option_names": ["-h", "--help"]},
    )
    @click.option(
        "config_file",
        "--config",
        type=click.File("rb"),
        required=True,
        help="Path to the JSON experiment config ('-' for stdin).",
    )
    @_common_options
    @click.pass_context
    def main(
        ctx: click.Context,
        config_file: typing.BinaryIO,
        output_format: OutputFormat = "structured",
        out: typing.Optional[Path] = None,
        preset_file: typing.Optional[typing.BinaryIO] = None,
    ) -> None:
        ctx.exit(
            execute_command(
                command,
                config_file,
                output_format=output_format,
                out=out,
                preset_file=preset_file,
            )
        )

    return main


COMMAND_LINE_COMMANDS: typing.Dict[str, click.Command] = {
    command: make_command(command) for command in COMMANDS
}


@click.command(
    help="Run several configs concurrently; each config must name its command.",
    context_settings={"help_option_names": ["-h", "--help"]},
)
@click.option(
    "config_files",
    "--config",
    type=click.File("rb"),
    required=True,
    multiple=True,
    help="Path to a JSON experiment config. Repeat for each config.",
)
@click.option(
    "--batch-size",
    type=click.IntRange(min=1),
    default=10,
    show_default=True,
    help="Number of configs to run concurrently.",
)
@_common_options
@click.pass_context
def sweep(
    ctx: click.Context,
    config_files: typing.Sequence[typing.BinaryIO],
    batch_size: int = 10,
    output_format: OutputFormat = "structured",
    out: typing.Optional[Path] = None,
    preset_file: typing.Optional[typing.BinaryIO] = None,
) -> None:
    """
    *CLI entrypoint for sweeps.*

    Documents are emitted in the order the configs were given. The exit code
    is the largest exit code among them.
    """
    try:
        preset = load_tolerance_preset(preset_file)
    except SwitchError as exc:
        report_failure(exc)
        document = error_document(exc)
        write_output(emit(document, output_format), out)
        ctx.exit(document.exit_code)

    documents: typing.Dict[int, ReportDocument] = {}
    runnable: typing.List[typing.Tuple[int, ExperimentConfig]] = []
    for index, config_file in enumerate(config_files):
        try:
            runnable.append((index, load_config(config_file, preset=preset)))
        except SwitchError as exc:
            report_failure(exc)
            documents[index] = error_document(exc)

    results = asyncio.run(
        run_experiments([cfg for _, cfg in runnable], batch_size=batch_size)
    )
    for (index, _), result in zip(runnable, results):
        documents[index] = result.document

    ordered = [documents[index] for index in range(len(config_files))]
    write_output(emit_many(ordered, output_format), out)
    ctx.exit(max((doc.exit_code for doc in ordered), default=0))
