"""
Plot-ready artifacts.

Every CSV starts with one '#'-prefixed JSON metadata line (tool, version,
seed, config hash, generator id, artifact name, optional flag), followed by
a column-name row. Nothing time-dependent goes into an artifact, so the
same config and seed reproduce the files byte for byte.
"""

import csv
import json
from collections.abc import Iterable, Sequence
from pathlib import Path

from spikelv import __version__
from spikelv import constants as const
from spikelv.schema import (
    ActivitySeries,
    ClassSummary,
    Histogram,
    LvRow,
    RunConfig,
    SplitHalfRow,
    ZipfTable,
)
from spikelv.utils import canonical_json

HISTOGRAM_COLUMNS = ["bin_lo", "bin_hi", "count", "mass"]
INTERVAL_COLUMNS = ["bin_lo_s", "bin_hi_s", "count", "pdf_per_s", "cdf"]
SUMMARY_COLUMNS = [
    "class",
    "lo",
    "hi",
    "n_trains",
    "mean_p",
    "mu_lv",
    "sigma_lv",
    "n",
    "z",
    "flag",
]
LV_SCATTER_COLUMNS = ["tag", "class", "p_raw", "n_spikes", "lv", "cv"]
SPLITHALF_COLUMNS = ["class", "lo", "hi", "mean_p", "r", "n_pairs", "flag"]
PAIR_COLUMNS = ["tag", "class", "p_raw", "lv_first", "lv_second"]
ZIPF_COLUMNS = ["rank", "tag", "p_raw"]
ACTIVITY_COLUMNS = ["bin_start_s", "bin_end_s", "occurrences"]


def metadata(config: RunConfig, artifact: str, **extra) -> dict:
    meta = {
        "tool": const.TOOL,
        "version": __version__,
        "seed": config.seed,
        "config_hash": config.config_hash(),
        "generator": const.GENERATOR_ID,
        "artifact": artifact,
    }
    meta.update(
        {key: value for key, value in extra.items() if value is not None}
    )

    return meta


def write_csv(
    path: Path, columns: Sequence[str], rows: Iterable[Sequence], meta: dict
) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as stream:
        stream.write(f"{const.COMMENT} {canonical_json(meta)}\n")
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow(["" if value is None else value for value in row])

    return path


def write_json(path: Path, data: dict) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")

    return path


def histogram_rows(hist: Histogram) -> Iterable[tuple]:
    yield from zip(hist.edges, hist.edges[1:], hist.counts, hist.mass)


def write_histogram(path: Path, hist: Histogram, meta: dict) -> Path:
    meta = {**meta, "kind": hist.kind.value, "n": hist.n}
    if hist.flag:
        meta["flag"] = hist.flag

    return write_csv(path, HISTOGRAM_COLUMNS, histogram_rows(hist), meta)


def write_intervals(
    path: Path, pdf: Histogram, cdf: Histogram, meta: dict
) -> Path:
    """PDF and CDF share edges; one row per bin with both columns"""
    meta = {**meta, "n": pdf.n}
    if pdf.flag:
        meta["flag"] = pdf.flag
    rows = (
        [lo, hi, count, density, cumulative]
        for lo, hi, count, density, cumulative in zip(
            pdf.edges, pdf.edges[1:], pdf.counts, pdf.mass, cdf.mass
        )
    )

    return write_csv(path, INTERVAL_COLUMNS, rows, meta)


def summary_record(summary: ClassSummary) -> dict:
    return {
        "class": summary.pclass.label,
        "lo": summary.pclass.lo,
        "hi": summary.pclass.hi,
        "n_trains": summary.n_trains,
        "mean_p": summary.mean_p,
        "mu_lv": summary.mu_lv,
        "sigma_lv": summary.sigma_lv,
        "n": summary.n,
        "z": summary.z,
        "flag": summary.flag,
    }


def write_class_summary(
    path: Path, summaries: Sequence[ClassSummary], meta: dict
) -> Path:
    rows = (
        [summary_record(s)[column] for column in SUMMARY_COLUMNS]
        for s in summaries
    )

    return write_csv(path, SUMMARY_COLUMNS, rows, meta)


def splithalf_record(row: SplitHalfRow) -> dict:
    return {
        "class": row.pclass.label,
        "lo": row.pclass.lo,
        "hi": row.pclass.hi,
        "mean_p": row.mean_p,
        "r": row.r,
        "n_pairs": row.n_pairs,
        "flag": row.flag,
    }


def write_splithalf(
    path: Path, rows: Sequence[SplitHalfRow], meta: dict
) -> Path:
    records = (
        [splithalf_record(row)[column] for column in SPLITHALF_COLUMNS]
        for row in rows
    )

    return write_csv(path, SPLITHALF_COLUMNS, records, meta)


def write_splithalf_pairs(
    path: Path,
    pairs: dict[str, tuple[float, float]],
    rows: Sequence[LvRow],
    meta: dict,
) -> Path:
    records = (
        [row.tag, row.label, row.p_raw, *pairs[row.tag]]
        for row in rows
        if row.tag in pairs
    )

    return write_csv(path, PAIR_COLUMNS, records, meta)


def write_lv_scatter(path: Path, rows: Sequence[LvRow], meta: dict) -> Path:
    records = (
        [row.tag, row.label, row.p_raw, row.n_spikes, row.lv, row.cv]
        for row in rows
    )

    return write_csv(path, LV_SCATTER_COLUMNS, records, meta)


def write_zipf(path: Path, table: ZipfTable, meta: dict) -> Path:
    meta = {
        **meta,
        "n_tags": table.n_tags,
        "share_p1": table.share_p1,
        "share_p_lt5": table.share_p_lt5,
    }
    records = ([row.rank, row.tag, row.p_raw] for row in table.rows)

    return write_csv(path, ZIPF_COLUMNS, records, meta)


def write_activity(path: Path, series: ActivitySeries, meta: dict) -> Path:
    meta = {**meta, "bin_width_s": series.bin_width}
    edges = series.edges
    records = (
        [lo, hi, count]
        for lo, hi, count in zip(edges, edges[1:], series.counts)
    )

    return write_csv(path, ACTIVITY_COLUMNS, records, meta)
