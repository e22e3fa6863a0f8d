import click

from cli import experiments
from src import CONVENTIONS_VERSION, __version__
from src.logging import set_level


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(
    __version__,
    prog_name="ico-relabel",
    message=f"%(prog)s %(version)s (conventions {CONVENTIONS_VERSION})",
)
@click.option(
    "--verbose",
    "-v",
    is_flag=True,
    default=False,
    help="Log debug messages to stderr.",
)
def main(verbose: bool = False) -> None:
    """
    CLI entry point.
    """
    if verbose:
        set_level("DEBUG")


for name, command in experiments.COMMAND_LINE_COMMANDS.items():
    main.add_command(command, name=name)
main.add_command(experiments.sweep, name="sweep")


if __name__ == "__main__":
    main()
