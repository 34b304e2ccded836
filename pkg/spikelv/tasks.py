"""
Pipeline stages behind the CLI subcommands.

Stages compose through files in the output directory: each one writes its
artifacts and returns the scalars that go into `report.json`. A data error
inside a stage is re-raised as `StageFailed` naming the stage.
"""

import json
import logging
from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path

from spikelv import constants as const
from spikelv import exceptions, output, plib, stats
from spikelv.core import (
    class_members,
    default_bin_width,
    multiplicity_distribution,
    scheme_from_edges,
)
from spikelv.eventio import read_corpus, write_events
from spikelv.null import (
    merge_trains,
    null_metadata,
    randomize_corpus,
    write_null_corpus,
)
from spikelv.schema import (
    Corpus,
    HistKind,
    PopularityClass,
    RunConfig,
    SynthSpec,
)
from spikelv.synthetic import gen_corpus, synth_metadata

logger = logging.getLogger(__name__)


@contextmanager
def stage(name: str) -> Iterator[None]:
    logger.debug(f"Task started, stage={name}")
    try:
        yield
    except exceptions.StageFailed:
        raise
    except exceptions.SpikeLvError as ex:
        logger.error(f"Stage {name} failed: {ex}")
        raise exceptions.StageFailed(name, ex) from ex
    logger.debug(f"Task complete, stage={name}")


def wants_csv(config: RunConfig) -> bool:
    return "csv" in config.formats


def load_corpus(config: RunConfig) -> Corpus:
    with stage("ingest"):
        return read_corpus(config.inputs, config.window)


def ingest_summary(corpus: Corpus) -> dict:
    report = corpus.report
    return {
        "tags": len(corpus),
        "events": report.accepted,
        "rejected": report.rejected,
        "out_of_window": report.out_of_window,
        "window": list(corpus.window),
        "coverage": stats.coverage(corpus),
        "multiplicity": stats.multiplicity_summary(corpus),
    }


def ingest_task(config: RunConfig, emit: bool = False) -> dict:
    corpus = load_corpus(config)
    summary = ingest_summary(corpus)
    if emit:
        path = config.out_dir / "events.tsv"
        write_events(path, corpus, output.metadata(config, path.name))
        summary["emitted"] = path.name
    if "json" in config.formats:
        meta = output.metadata(config, const.INGEST_JSON)
        output.write_json(
            plib.ingest_path(config.out_dir), {**meta, **summary}
        )

    return summary


def _interval_bin(config: RunConfig, pclass: PopularityClass) -> int:
    return config.bin_width or default_bin_width(pclass)


def lv_task(
    config: RunConfig,
    corpus: Corpus,
    scheme: list[PopularityClass],
    null: bool = False,
) -> dict:
    """L_V per train, per-class densities and summaries of one corpus"""
    name = "null_lv" if null else "lv"
    with stage(name):
        lvs = stats.lv_by_tag(corpus, config.workers)
        rows = stats.lv_table(corpus, scheme, lvs=lvs)
        summaries = stats.class_lv_summary(corpus, scheme, lvs=lvs)

        if wants_csv(config):
            path = plib.lv_scatter_path(config.out_dir, null=null)
            output.write_lv_scatter(
                path, rows, output.metadata(config, path.name)
            )
            path = plib.class_summary_path(config.out_dir, null=null)
            output.write_class_summary(
                path, summaries, output.metadata(config, path.name)
            )
            for pclass in scheme:
                path = plib.lv_pdf_path(
                    config.out_dir, pclass.label, null=null
                )
                output.write_histogram(
                    path,
                    stats.lv_pdf(rows, pclass, config.lv_bin),
                    output.metadata(config, path.name, pclass=pclass.label),
                )

    return {
        "classes": [output.summary_record(s) for s in summaries],
        "rows": rows,
    }


def null_task(
    config: RunConfig, corpus: Corpus, scheme: list[PopularityClass]
) -> dict:
    with stage("null"):
        null_corpus = randomize_corpus(corpus, config.seed, config.workers)
        meta = null_metadata(config.seed, merge_trains(corpus))
        write_null_corpus(
            config.out_dir,
            null_corpus,
            output.metadata(config, const.NULL_EVENTS, **meta),
        )

    result = lv_task(config, null_corpus, scheme, null=True)

    return {"null_model": meta, "classes": result["classes"]}


def dist_task(
    config: RunConfig, corpus: Corpus, scheme: list[PopularityClass]
) -> dict:
    """Popularity density, per-class intervals and multiplicities, activity"""
    with stage("dist"):
        series = stats.activity_series(corpus, config.activity_bin)
        if not wants_csv(config):
            return {"activity_total": series.total}

        if not corpus.is_empty:
            output.write_histogram(
                plib.popularity_pdf_path(config.out_dir),
                stats.popularity_pdf(corpus, config.bins_per_decade),
                output.metadata(config, const.POPULARITY_PDF_CSV),
            )
        for pclass in scheme:
            width = _interval_bin(config, pclass)
            pdf, cdf = (
                stats.interval_histogram(
                    corpus, pclass, width, kind, config.drop_unit_interval
                )
                for kind in (HistKind.pdf, HistKind.cdf)
            )
            path = plib.intervals_path(config.out_dir, pclass.label)
            output.write_intervals(
                path,
                pdf,
                cdf,
                output.metadata(
                    config, path.name, pclass=pclass.label, bin_width_s=width
                ),
            )
            if not corpus.is_empty:
                path = plib.multiplicity_path(config.out_dir, pclass.label)
                output.write_histogram(
                    path,
                    multiplicity_distribution(corpus, pclass),
                    output.metadata(config, path.name, pclass=pclass.label),
                )
        output.write_activity(
            plib.activity_path(config.out_dir),
            series,
            output.metadata(config, const.ACTIVITY_CSV),
        )

    return {"activity_total": series.total}


def zipf_task(config: RunConfig, corpus: Corpus) -> dict:
    with stage("zipf"):
        table = stats.zipf_table(corpus)
        if wants_csv(config):
            output.write_zipf(
                plib.zipf_path(config.out_dir),
                table,
                output.metadata(config, const.ZIPF_CSV),
            )

    return {
        "n_tags": table.n_tags,
        "share_p1": table.share_p1,
        "share_p_lt5": table.share_p_lt5,
    }


def corr_task(
    config: RunConfig,
    corpus: Corpus,
    scheme: list[PopularityClass],
    rows=None,
) -> dict:
    with stage("corr"):
        pairs = stats.split_half_pairs(corpus, config.workers)
        splithalf = stats.split_half_correlation(corpus, scheme, pairs=pairs)
        if wants_csv(config):
            output.write_splithalf(
                plib.splithalf_path(config.out_dir),
                splithalf,
                output.metadata(config, const.SPLITHALF_CSV),
            )
            if rows is None:
                rows = stats.lv_table(corpus, scheme, config.workers)
            output.write_splithalf_pairs(
                plib.splithalf_pairs_path(config.out_dir),
                pairs,
                rows,
                output.metadata(config, const.SPLITHALF_PAIRS_CSV),
            )

    return {"classes": [output.splithalf_record(row) for row in splithalf]}


def report_task(config: RunConfig) -> dict:
    """Every artifact of the analysis plus `report.json` with all scalars"""
    scheme = scheme_from_edges(config.edges)
    corpus = load_corpus(config)
    if corpus.is_empty:
        raise exceptions.StageFailed(
            "ingest", exceptions.EmptyCorpus("No events")
        )

    logger.debug(f"Report on {len(corpus)} trains, seed={config.seed}")
    real = lv_task(config, corpus, scheme)
    report = {
        "ingest": ingest_summary(corpus),
        "zipf": zipf_task(config, corpus),
        "dist": dist_task(config, corpus, scheme),
        "real": {"classes": real["classes"]},
        "null": null_task(config, corpus, scheme),
        "splithalf": corr_task(config, corpus, scheme, rows=real["rows"]),
        "class_sizes": {
            pclass.label: len(class_members(corpus, pclass))
            for pclass in scheme
        },
    }
    if "json" in config.formats:
        meta = output.metadata(config, const.REPORT_JSON)
        output.write_json(plib.report_path(config.out_dir), {**meta, **report})

    return report


def synth_task(
    spec: SynthSpec,
    out_dir: Path,
    workers: int = 1,
    max_expected: float = const.MAX_EXPECTED_EVENTS,
) -> tuple[Path, Path]:
    """Synthetic event file plus per-tag ground truth sidecar"""
    with stage("synth"):
        corpus, truth = gen_corpus(spec, workers, max_expected)

    meta = {"tool": const.TOOL, **synth_metadata(spec)}
    events = write_events(out_dir / const.SYNTH_EVENTS, corpus, meta)
    sidecar = out_dir / const.SYNTH_SIDECAR
    sidecar.write_text(
        json.dumps({**meta, "tags": truth}, indent=2, sort_keys=True) + "\n"
    )
    logger.debug(f"Wrote {len(corpus)} synthetic trains to {events}")

    return events, sidecar
