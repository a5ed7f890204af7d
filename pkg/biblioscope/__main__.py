"""Commandline interface to biblioscope."""
import dataclasses
import logging
import sys

import click

from biblioscope.config import load_run_config
from biblioscope.errors import BiblioscopeError, ConfigurationError
from biblioscope.reports import Report, run_report
from biblioscope.store import CorpusStore, ingest as ingest_files
from biblioscope.tagfile import Origin, Severity

EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_CONFIG = 3


class CommandError(click.ClickException):
    """Failure of a command with its own exit code."""

    def __init__(self, message, exit_code):
        """Init CommandError."""
        super().__init__(message)
        self.exit_code = exit_code


class BiblioscopeGroup(click.Group):
    """Command group that maps errors to biblioscope exit codes."""

    def invoke(self, ctx):
        """Invoke the group and convert library errors."""
        try:
            return super().invoke(ctx)
        except ConfigurationError as exception:
            raise CommandError(exception.message, EXIT_CONFIG)
        except BiblioscopeError as exception:
            raise CommandError(exception.message, EXIT_INPUT)

    def main(self, args=None, prog_name=None, complete_var=None,
             standalone_mode=True, **extra):
        """Run the group, exiting 1 on usage errors."""
        try:
            result = super().main(args=args, prog_name=prog_name,
                                  complete_var=complete_var,
                                  standalone_mode=False, **extra)
        except click.UsageError as exception:
            exception.show()
            sys.exit(EXIT_USAGE)
        except click.ClickException as exception:
            exception.show()
            sys.exit(exception.exit_code)
        except click.Abort:
            click.echo("Aborted!", err=True)
            sys.exit(EXIT_USAGE)
        if standalone_mode:
            sys.exit(result if isinstance(result, int) else 0)
        return result


@click.group(cls=BiblioscopeGroup,
             context_settings={"help_option_names": ['-h', '--help']})
@click.option(
    '--verbose/--no-verbose', '-v', help="Print debug messages.",
    default=None
)
@click.option(
    '-c', '--config',
    default=None,
    help=("Configuration file. If not set, $BIBLIOSCOPE_CONFIG or default "
          "config file: ~/.biblioscope.cfg, "
          "$XDG_CONFIG_HOME/biblioscope/biblioscope.cfg, or "
          "/etc/biblioscope.cfg is used.")
)
@click.option('--countries', help="Country alias map file.")
@click.option('--regions', help="Country to region map file.")
@click.option('--publisher-rules', help="Publisher root rules file.")
@click.option('--basemap', help="Science basemap TSV file.")
@click.option('--workers', type=int, help="Number of parser threads.")
@click.pass_context
def cli(ctx, config, **kwargs):
    """Analyze citation index exports."""
    run_config = load_run_config(config, **kwargs)
    logging.basicConfig(
        level=logging.DEBUG if run_config.verbose else logging.WARNING
    )
    run_config.validate()
    ctx.obj = run_config


@cli.command()
@click.option('--origin', required=True,
              type=click.Choice([origin.value for origin in Origin]),
              help="Citation index the files were exported from.")
@click.option('--in', 'inputs', required=True, multiple=True,
              help="Export file. Can be given several times.")
@click.option('--store', required=True, help="Store directory.")
@click.pass_obj
def ingest(config, origin, inputs, store):
    """Parse export files into a corpus store."""
    corpus_store = ingest_files(list(inputs), origin, config, store)
    manifest = corpus_store.manifest()
    click.echo(
        f"Ingested {manifest['counts']['documents']} documents into "
        f"{store} ({manifest['diagnostics'][Severity.WARNING.value]} "
        f"warnings, {manifest['diagnostics'][Severity.ERROR.value]} errors)"
    )


@cli.command()
@click.argument('name',
                type=click.Choice([report.value for report in Report],
                                  case_sensitive=False))
@click.option('--store', required=True, help="Store directory.")
@click.option('--store2', help="Second store for the crossrank report.")
@click.option('--out', 'output_dir', help="Output directory.")
@click.option('--multiplicity/--no-multiplicity', default=None,
              help="Count region pairs per address pair.")
@click.option('--scaling', type=click.Choice(['area', 'radius']),
              help="Overlay node scaling.")
@click.option('--lac-only', is_flag=True,
              help="Report only LAC countries.")
@click.option('--top', type=click.IntRange(min=1),
              help="Rows of crossrank report, labels of overlay map.")
@click.pass_obj
def report(config, name, store, store2, output_dir, multiplicity, scaling,
           lac_only, top):
    """Write report NAME of a corpus store.

    NAME is one of stats, countries, publishers, pairs, graph, overlay,
    categories or crossrank.

    Tables are tab separated. Means, standard deviations, shares and
    percentages are written with two decimals and fractional country
    counts with four decimals.
    """
    name = Report(name.lower())
    if name is Report.CROSSRANK and not store2:
        raise click.UsageError("crossrank report requires --store2.")

    changes = {}
    if multiplicity is not None:
        changes["multiplicity"] = multiplicity
    if scaling is not None:
        changes["scaling"] = scaling
    config = dataclasses.replace(config, **changes)

    stores = [CorpusStore(store)]
    if store2:
        stores.append(CorpusStore(store2))
    for path in run_report(name, stores, config, output_dir=output_dir,
                           lac_only=lac_only, top=top):
        click.echo(path)


@cli.command()
@click.option('--store', required=True, help="Store directory.")
def verify(store):
    """Check integrity of a corpus store."""
    documents = CorpusStore(store).verify()
    click.echo(f"Store {store} is consistent: {documents} documents")


def main():
    """Execute CLI."""
    # pylint: disable=no-value-for-parameter
    cli()


if __name__ == "__main__":
    main()
