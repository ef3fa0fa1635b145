"""
Command line interface of fdsic.

    fdsic gen-data --system h --taxonomy invNL+invSI --sdr0 10 --out d.sicd
    fdsic train --experiment fig5 --config experiments/fig5.yaml --out run
    fdsic evaluate --model run/model_global.sicm --data d.sicd --out eval
    fdsic sweep-sdr --grid 5,10,20,30 --repeats 3 --out sweep

Usage errors and invalid configurations exit with status 2, failures
during a run with status 1.
"""
import logging
import sys
import click

import fdsic
from fdsic import config
from fdsic.data import OfdmConfig, SystemKind, Taxonomy, generate
from fdsic.data import write_dataset
from fdsic.errors import ConfigError, FdsicError
from fdsic.harness.experiments import (
    Experiment,
    ExperimentConfig,
    load_config,
    config_from_dict,
    run_evaluation,
    run_experiment,
)
from fdsic.harness.manifest import write_manifest
from fdsic.models import TrainConfig

LOGGER = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(name)s %(levelname)s %(message)s"


def _parse_taxonomy(ctx, param, value):
    """Convert a taxonomy label, reporting bad labels as usage errors."""
    del ctx, param
    try:
        return Taxonomy.parse(value)
    except ValueError as err:
        raise click.BadParameter(str(err)) from err


def _parse_grid(ctx, param, value):
    """Convert a comma-separated list of dB values."""
    del ctx, param
    try:
        grid = [float(item) for item in value.split(",") if item.strip()]
    except ValueError as err:
        raise click.BadParameter(f"not a list of numbers: {value}") from err
    if not grid:
        raise click.BadParameter("the grid is empty")
    return grid


def _argv(ctx):
    return (ctx.obj or {}).get("argv")


@click.group()
@click.version_option(fdsic.__version__, prog_name="fdsic")
@click.option("-v", "--verbose", is_flag=True, help="Log at DEBUG level.")
@click.pass_context
def main(ctx, verbose):
    """Full-duplex SI data generation, modeling and experiments."""
    ctx.ensure_object(dict)
    level = logging.DEBUG if verbose else config.LOG_LEVEL
    logging.basicConfig(level=level, format=LOG_FORMAT)


@main.command("gen-data")
@click.option("--system", type=click.Choice(["h", "w"], case_sensitive=False),
              required=True, help="Hammerstein (h) or Wiener (w).")
@click.option("--taxonomy", required=True, callback=_parse_taxonomy,
              help="invNL+invSI, invNL+varSI or varNL+varSI.")
@click.option("--sdr0", type=click.FloatRange(*config.SI_SDR0_RANGE),
              default=config.DEFAULT_SI_SDR0,
              show_default=True, help="Nominal SI-SDR in dB.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--packet-samples", type=click.IntRange(min=1),
              default=config.PACKET_SAMPLES, show_default=True)
@click.pass_context
def gen_data(ctx, system, taxonomy, sdr0, seed, out, packet_samples):
    """Generate one dataset file and its sidecar."""
    system = SystemKind.parse(system)
    dataset = generate(system, taxonomy, sdr0, seed,
                       ofdm=OfdmConfig(packet_samples=packet_samples))
    path = write_dataset(dataset, out)
    settings = {
        "system": system.name,
        "taxonomy": dataset.label,
        "si_sdr0": sdr0,
        "packet_samples": packet_samples,
        "out": str(path),
    }
    write_manifest(path.with_name(path.name + ".manifest.yaml"),
                   "gen-data", settings, {"master_seed": seed}, _argv(ctx))


@main.command()
@click.option("--experiment",
              type=click.Choice([item.value for item in Experiment]),
              required=True)
@click.option("--config", "config_path",
              type=click.Path(exists=True, dir_okay=False),
              help="YAML experiment configuration.")
@click.option("--out", type=click.Path(file_okay=False), required=True)
@click.pass_context
def train(ctx, experiment, config_path, out):
    """Run a figure experiment and write traces, models and results."""
    overrides = {"experiment": experiment, "output_dir": out}
    if config_path:
        cfg = load_config(config_path, **overrides)
    else:
        cfg = config_from_dict({}, **overrides)
    run_experiment(cfg, _argv(ctx))


@main.command("evaluate")
@click.option("--model", "model_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--data", "data_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(file_okay=False), required=True)
@click.option("--adapt-epochs", type=click.IntRange(min=1),
              help="Re-fit the adaptive weights for this many epochs.")
@click.option("--lr", type=float, default=config.LEARNING_RATE,
              show_default=True)
@click.option("--log-every", type=click.IntRange(min=1),
              default=config.LOG_EVERY, show_default=True)
@click.pass_context
def evaluate_command(ctx, model_path, data_path, out, adapt_epochs, lr,
                     log_every):
    """Measure a saved model on a dataset."""
    adapt_config = None
    if adapt_epochs:
        adapt_config = TrainConfig(adapt_epochs, lr, log_every)
    run_evaluation(model_path, data_path, out, adapt_config, _argv(ctx))


@main.command("sweep-sdr")
@click.option("--grid", required=True, callback=_parse_grid,
              help="Comma-separated SI-SDR values in dB.")
@click.option("--repeats", type=click.IntRange(min=1), default=1,
              show_default=True)
@click.option("--out", type=click.Path(file_okay=False), required=True)
@click.option("--epochs", type=click.IntRange(min=1), default=config.EPOCHS,
              show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--packet-samples", type=click.IntRange(min=1),
              default=config.PACKET_SAMPLES, show_default=True)
@click.option("--parallel", is_flag=True,
              help="Run grid points on separate threads.")
@click.pass_context
def sweep_sdr(ctx, grid, repeats, out, epochs, seed, packet_samples,
              parallel):
    """Score the parallel network and memory polynomial over SI-SDRs."""
    try:
        cfg = ExperimentConfig(
            Experiment.FIG8_SWEEP,
            master_seed=seed,
            train=TrainConfig(epochs=epochs),
            output_dir=out,
            packet_samples=packet_samples,
            sdr_grid=tuple(grid),
            repeats=repeats,
            parallel=parallel,
        )
    except ValueError as err:
        raise ConfigError(str(err)) from err
    run_experiment(cfg, _argv(ctx), command="sweep-sdr")


def cli_main(args=None):
    """Run the CLI on an argument list and return the exit status."""
    argv = list(sys.argv[1:] if args is None else args)
    try:
        status = main.main(args=argv, prog_name="fdsic",
                           standalone_mode=False, obj={"argv": argv})
    except click.ClickException as err:
        err.show()
        return err.exit_code
    except click.Abort:
        click.echo("Aborted!", err=True)
        return 1
    except ConfigError as err:
        click.echo(f"Error: {err}", err=True)
        return 2
    except (FdsicError, ValueError, OSError) as err:
        LOGGER.debug("Run failed", exc_info=True)
        click.echo(f"Error: {err}", err=True)
        return 1
    return status if isinstance(status, int) else 0


def run():
    """Console script entry point."""
    sys.exit(cli_main())


if __name__ == "__main__":
    run()
