import functools
import json
import logging
import sys
from pathlib import Path
from typing import Annotated, Optional

import click
import typer
import yaml
from pydantic import ValidationError

from spikelv import config, tasks, utils
from spikelv import constants as const
from spikelv import exceptions
from spikelv.core import (
    check_window,
    parse_edges,
    parse_window,
    scheme_from_edges,
)
from spikelv.schema import RunConfig, SynthSpec

settings = config.get_settings()
logger = logging.getLogger(__name__)

app = typer.Typer(
    help="Local variation analytics for tagged event spike trains",
    pretty_exceptions_enable=False,
)

Inputs = Annotated[
    list[Path],
    typer.Option("--input", "-i", help="Event file(s), `<seconds>\\t<tag>`"),
]
Out = Annotated[
    Path,
    typer.Option("--out", "-o", envvar="SPIKELV__MAIN__OUT_DIR"),
]
Seed = Annotated[int, typer.Option(envvar="SPIKELV__MAIN__SEED")]
Classes = Annotated[
    str,
    typer.Option(help="Comma separated class edges, first edge 1"),
]
BinWidth = Annotated[
    Optional[int],
    typer.Option(help="Interval bin width in seconds for every class"),
]
Window = Annotated[
    Optional[str],
    typer.Option(help="Observation window 't_start,t_end' (inclusive)"),
]
Format = Annotated[str, typer.Option("--format", help="csv,json")]
Workers = Annotated[int, typer.Option(envvar="SPIKELV__MAIN__WORKERS")]


def exit_codes(func):
    """Maps data errors to exit code 2 and unexpected failures to 3"""

    @functools.wraps(func)
    def inner(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except exceptions.SpikeLvError as ex:
            typer.echo(f"Error: {ex}", err=True)
            raise typer.Exit(code=const.EXIT_DATA)
        except ValidationError as ex:
            typer.echo(f"Invalid configuration: {ex}", err=True)
            raise typer.Exit(code=const.EXIT_USAGE)
        except click.exceptions.UsageError as ex:
            typer.echo(f"Error: {ex.format_message()}", err=True)
            raise typer.Exit(code=const.EXIT_USAGE)
        except typer.Exit:
            raise
        except Exception:
            logger.exception("Internal error")
            typer.echo("Internal error, see log for details", err=True)
            raise typer.Exit(code=const.EXIT_INTERNAL)

    return inner


def run_config(
    inputs: list[Path],
    out: Path,
    seed: int,
    classes: str,
    bin_width: int | None,
    window: str | None,
    fmt: str,
    workers: int,
    drop_unit_interval: bool = False,
) -> RunConfig:
    try:
        edges = parse_edges(classes)
        scheme_from_edges(edges)
        bounds = parse_window(window) if window else None
    except exceptions.SpikeLvError as ex:
        raise typer.BadParameter(str(ex))

    return RunConfig(
        inputs=inputs,
        window=bounds,
        edges=edges,
        bin_width=bin_width,
        activity_bin=settings.spikelv__report__activity_bin,
        lv_bin=settings.spikelv__report__lv_bin,
        bins_per_decade=settings.spikelv__report__bins_per_decade,
        seed=seed,
        out_dir=out,
        formats=[part.strip() for part in fmt.split(",") if part.strip()],
        workers=workers,
        drop_unit_interval=drop_unit_interval,
    )


@app.callback()
def main_callback(
    logging_cfg: Annotated[
        Optional[Path], typer.Option(envvar="SPIKELV__MAIN__LOGGING_CFG")
    ] = settings.spikelv__main__logging_cfg,
):
    utils.setup_logging(logging_cfg)


@app.command(name="ingest")
@exit_codes
def ingest_cmd(
    inputs: Inputs,
    out: Out = settings.spikelv__main__out_dir,
    window: Window = None,
    fmt: Format = settings.spikelv__main__formats,
    emit: Annotated[
        bool, typer.Option(help="Re-emit normalized events")
    ] = False,
):
    """Ingest event files and print the corpus summary"""
    cfg = run_config(
        inputs,
        out,
        settings.spikelv__main__seed,
        settings.spikelv__classes__edges,
        None,
        window,
        fmt,
        settings.spikelv__main__workers,
    )
    summary = tasks.ingest_task(cfg, emit=emit)
    typer.echo(json.dumps(summary, indent=2, sort_keys=True))


@app.command(name="report")
@exit_codes
def report_cmd(
    inputs: Inputs,
    out: Out = settings.spikelv__main__out_dir,
    seed: Seed = settings.spikelv__main__seed,
    classes: Classes = settings.spikelv__classes__edges,
    bin_width: BinWidth = None,
    window: Window = None,
    fmt: Format = settings.spikelv__main__formats,
    workers: Workers = settings.spikelv__main__workers,
    drop_unit_interval: bool = False,
):
    """Full pipeline: every CSV artifact plus report.json"""
    cfg = run_config(
        inputs,
        out,
        seed,
        classes,
        bin_width,
        window,
        fmt,
        workers,
        drop_unit_interval,
    )
    tasks.report_task(cfg)
    typer.echo(f"Report written to {cfg.out_dir}")


@app.command(name="lv")
@exit_codes
def lv_cmd(
    inputs: Inputs,
    out: Out = settings.spikelv__main__out_dir,
    classes: Classes = settings.spikelv__classes__edges,
    window: Window = None,
    workers: Workers = settings.spikelv__main__workers,
):
    """Per-train L_V, per-class L_V densities and summaries"""
    cfg = run_config(
        inputs,
        out,
        settings.spikelv__main__seed,
        classes,
        None,
        window,
        "csv",
        workers,
    )
    corpus = tasks.load_corpus(cfg)
    tasks.lv_task(cfg, corpus, scheme_from_edges(cfg.edges))


@app.command(name="null")
@exit_codes
def null_cmd(
    inputs: Inputs,
    out: Out = settings.spikelv__main__out_dir,
    seed: Seed = settings.spikelv__main__seed,
    classes: Classes = settings.spikelv__classes__edges,
    window: Window = None,
    workers: Workers = settings.spikelv__main__workers,
):
    """Popularity-matched null corpus and its L_V summaries"""
    cfg = run_config(inputs, out, seed, classes, None, window, "csv", workers)
    corpus = tasks.load_corpus(cfg)
    tasks.null_task(cfg, corpus, scheme_from_edges(cfg.edges))


@app.command(name="dist")
@exit_codes
def dist_cmd(
    inputs: Inputs,
    out: Out = settings.spikelv__main__out_dir,
    classes: Classes = settings.spikelv__classes__edges,
    bin_width: BinWidth = None,
    window: Window = None,
    drop_unit_interval: bool = False,
):
    """Popularity density, interval and multiplicity histograms, activity"""
    cfg = run_config(
        inputs,
        out,
        settings.spikelv__main__seed,
        classes,
        bin_width,
        window,
        "csv",
        settings.spikelv__main__workers,
        drop_unit_interval,
    )
    corpus = tasks.load_corpus(cfg)
    tasks.dist_task(cfg, corpus, scheme_from_edges(cfg.edges))


@app.command(name="zipf")
@exit_codes
def zipf_cmd(
    inputs: Inputs,
    out: Out = settings.spikelv__main__out_dir,
    window: Window = None,
):
    """Rank table of tags by popularity"""
    cfg = run_config(
        inputs,
        out,
        settings.spikelv__main__seed,
        settings.spikelv__classes__edges,
        None,
        window,
        "csv",
        settings.spikelv__main__workers,
    )
    summary = tasks.zipf_task(cfg, tasks.load_corpus(cfg))
    typer.echo(json.dumps(summary, sort_keys=True))


@app.command(name="corr")
@exit_codes
def corr_cmd(
    inputs: Inputs,
    out: Out = settings.spikelv__main__out_dir,
    classes: Classes = settings.spikelv__classes__edges,
    window: Window = None,
    workers: Workers = settings.spikelv__main__workers,
):
    """Split-half L_V correlation per popularity class"""
    cfg = run_config(
        inputs,
        out,
        settings.spikelv__main__seed,
        classes,
        None,
        window,
        "csv",
        workers,
    )
    corpus = tasks.load_corpus(cfg)
    tasks.corr_task(cfg, corpus, scheme_from_edges(cfg.edges))


@app.command(name="synth")
@exit_codes
def synth_cmd(
    spec: Annotated[Path, typer.Option(help="YAML generator spec")],
    out: Out = settings.spikelv__main__out_dir,
    seed: Annotated[
        Optional[int], typer.Option(help="Overrides the spec file seed")
    ] = None,
    quantize: Annotated[
        bool, typer.Option(help="Floor times to whole seconds")
    ] = False,
    window: Window = None,
    workers: Workers = settings.spikelv__main__workers,
):
    """Synthetic event file plus ground-truth sidecar"""
    try:
        with open(spec, "r") as stream:
            data = yaml.safe_load(stream) or {}
    except (OSError, yaml.YAMLError) as ex:
        raise exceptions.UnreadableInput(f"Cannot read generator spec: {ex}")

    if seed is not None:
        data["seed"] = seed
    if quantize:
        data["quantize"] = True
    if window:
        try:
            data["window"] = parse_window(window)
        except exceptions.InvalidWindow as ex:
            raise typer.BadParameter(str(ex))
    synth_spec = SynthSpec.model_validate(data)
    check_window(synth_spec.window)

    events, sidecar = tasks.synth_task(
        synth_spec, out, workers, settings.spikelv__synth__max_expected
    )
    typer.echo(f"Wrote {events} and {sidecar}")


def main():
    try:
        code = app(standalone_mode=False)
    except click.exceptions.UsageError as ex:
        ex.show()
        sys.exit(const.EXIT_USAGE)
    except click.exceptions.Abort:
        sys.exit(const.EXIT_USAGE)
    except Exception:
        logger.exception("Internal error")
        sys.exit(const.EXIT_INTERNAL)

    sys.exit(code or const.EXIT_OK)


if __name__ == "__main__":
    main()
