"""
Corpus-level descriptive statistics: activity series, popularity ranking
and density, inter-event histograms, per-class L_V summaries with
z-scores against the Poisson baseline, and split-half persistence.

Every function is a pure fold over an immutable corpus. Per-train work
can be spread over a thread pool; reductions run in tag order and use
exact summation so results never depend on scheduling.
"""

import logging
import math
from collections.abc import Mapping, Sequence

import numpy as np
import scipy.stats

from spikelv import constants as const
from spikelv import exceptions
from spikelv.core import class_members, classify, inter_event_intervals
from spikelv.lv import (
    coefficient_of_variation,
    split_half_lv,
    try_local_variation,
)
from spikelv.schema import (
    ActivitySeries,
    ClassSummary,
    Corpus,
    Histogram,
    HistKind,
    LvRow,
    PopularityClass,
    SplitHalfRow,
    ZipfRow,
    ZipfTable,
)
from spikelv.utils import parallel_map

logger = logging.getLogger(__name__)


def _mean(values: Sequence[float]) -> float:
    return math.fsum(values) / len(values)


def _sample_std(values: Sequence[float], mean: float) -> float:
    squares = math.fsum((v - mean) ** 2 for v in values)

    return math.sqrt(squares / (len(values) - 1))


def activity_series(corpus: Corpus, bin_width: int) -> ActivitySeries:
    """Occurrences (multiplicity weighted) per bin, covering the window"""
    if bin_width < 1:
        raise exceptions.InvalidParameter(
            f"Bin width must be >= 1, got {bin_width}"
        )

    t_start, t_end = corpus.window
    n_bins = math.ceil((t_end - t_start + 1) / bin_width)
    counts = np.zeros(n_bins, dtype=np.int64)
    for train in corpus.trains.values():
        index = ((train.times - t_start) // bin_width).astype(np.int64)
        weighted = np.bincount(index, weights=train.counts, minlength=n_bins)
        counts += weighted.astype(np.int64)

    return ActivitySeries(
        start=t_start, bin_width=bin_width, counts=counts.tolist()
    )


def zipf_table(corpus: Corpus) -> ZipfTable:
    """Tags ranked by descending p_raw, ties broken by tag"""
    ranked = sorted(corpus.trains.values(), key=lambda t: (-t.p_raw, t.tag))
    rows = [
        ZipfRow(rank=rank, tag=train.tag, p_raw=train.p_raw)
        for rank, train in enumerate(ranked, start=1)
    ]
    n_tags = len(rows)
    if not n_tags:
        return ZipfTable(rows=rows, n_tags=0)

    return ZipfTable(
        rows=rows,
        n_tags=n_tags,
        share_p1=sum(1 for row in rows if row.p_raw == 1) / n_tags,
        share_p_lt5=sum(1 for row in rows if row.p_raw < 5) / n_tags,
    )


def log_edges(max_value: int, bins_per_decade: int) -> np.ndarray:
    """
    Integer bin edges spaced ~10^(1/bins_per_decade) apart, starting at 1
    and ending above `max_value`. Small bins that would hold no integer are
    merged away, so each bin width is the number of integers it holds.
    """
    steps = math.ceil(math.log10(max_value + 1) * bins_per_decade) + 1
    raw = 10 ** (np.arange(steps + 1) / bins_per_decade)
    edges = np.unique(np.ceil(np.round(raw, 9)).astype(np.int64))
    if edges[-1] <= max_value:
        edges = np.append(edges, max_value + 1)

    return edges


def popularity_pdf(corpus: Corpus, bins_per_decade: int = 5) -> Histogram:
    if corpus.is_empty:
        raise exceptions.EmptyCorpus("Popularity density of empty corpus")
    if bins_per_decade < 1:
        raise exceptions.InvalidParameter(
            f"bins_per_decade must be >= 1, got {bins_per_decade}"
        )

    p = np.array([train.p_raw for train in corpus.trains.values()])
    edges = log_edges(int(p.max()), bins_per_decade)
    counts, _ = np.histogram(p, bins=edges)
    density = counts / (len(p) * np.diff(edges))

    return Histogram(
        edges=edges.astype(float).tolist(),
        mass=density.tolist(),
        counts=counts.tolist(),
        kind=HistKind.pdf,
        n=len(p),
    )


def loglog_slope(
    hist: Histogram, x_min: float = 1.0, min_count: int = 1
) -> float:
    """
    Least-squares slope of log10(density) against log10(x) over occupied
    bins. x is the geometric mean of the first and last integer of a bin.
    """
    edges = np.asarray(hist.edges)
    x = np.sqrt(edges[:-1] * (edges[1:] - 1))
    mass = np.asarray(hist.mass)
    keep = (np.asarray(hist.counts) >= min_count) & (x >= x_min) & (mass > 0)
    if keep.sum() < 2:
        raise exceptions.InvalidParameter(
            "Need two occupied bins to fit a slope"
        )
    slope, _ = np.polyfit(np.log10(x[keep]), np.log10(mass[keep]), 1)

    return float(slope)


def _class_intervals(corpus: Corpus, pclass: PopularityClass) -> np.ndarray:
    pooled = [
        inter_event_intervals(train)
        for train in class_members(corpus, pclass)
        if train.n_spikes >= 2
    ]
    if not pooled:
        return np.empty(0)

    return np.concatenate(pooled)


def interval_histogram(
    corpus: Corpus,
    pclass: PopularityClass,
    bin_width: float,
    kind: HistKind = HistKind.pdf,
    drop_unit_interval: bool = False,
) -> Histogram:
    """
    Pooled Δτ of the class on linear bins [0, w), [w, 2w), ...

    `drop_unit_interval` removes Δτ = 1 s from the histogram only; it is a
    display option for the peak at the grid resolution.
    """
    if bin_width < 1:
        raise exceptions.InvalidParameter(
            f"Bin width must be >= 1, got {bin_width}"
        )

    intervals = _class_intervals(corpus, pclass)
    if drop_unit_interval:
        intervals = intervals[intervals != 1]
    if not len(intervals):
        return Histogram(
            edges=[], mass=[], counts=[], kind=kind, flag=const.EMPTY
        )

    n_bins = int(intervals.max() // bin_width) + 1
    index = (intervals // bin_width).astype(np.int64)
    counts = np.bincount(index, minlength=n_bins)
    total = len(intervals)
    if kind == HistKind.pdf:
        mass = counts / (total * bin_width)
    else:
        mass = np.cumsum(counts) / total

    return Histogram(
        edges=(np.arange(n_bins + 1) * float(bin_width)).tolist(),
        mass=mass.tolist(),
        counts=counts.tolist(),
        kind=kind,
        n=total,
    )


def ks_exponential(intervals: np.ndarray, xi: float) -> tuple[float, float]:
    """KS statistic and p-value of intervals against Exp(rate=xi)"""
    result = scipy.stats.kstest(
        np.asarray(intervals, dtype=np.float64), "expon", args=(0, 1.0 / xi)
    )

    return float(result.statistic), float(result.pvalue)


def lv_by_tag(corpus: Corpus, workers: int = 1) -> dict[str, float | None]:
    values = parallel_map(try_local_variation, corpus.trains.values(), workers)

    return dict(zip(corpus.trains.keys(), values))


def lv_table(
    corpus: Corpus,
    scheme: Sequence[PopularityClass],
    workers: int = 1,
    lvs: Mapping[str, float | None] | None = None,
) -> list[LvRow]:
    """One row per train; L_V and CV are None below 3 spikes"""
    if lvs is None:
        lvs = lv_by_tag(corpus, workers)

    rows = []
    for tag, train in corpus.trains.items():
        lv = lvs[tag]
        rows.append(
            LvRow(
                tag=tag,
                label=classify(train.p_raw, scheme).label,
                p_raw=train.p_raw,
                n_spikes=train.n_spikes,
                lv=lv,
                cv=coefficient_of_variation(train) if lv is not None else None,
            )
        )

    return rows


def lv_pdf(
    rows: Sequence[LvRow], pclass: PopularityClass, bin_width: float = 0.1
) -> Histogram:
    """Density of per-train L_V of one class on [0, 3]"""
    n_bins = round(const.LV_MAX / bin_width)
    if n_bins < 1:
        raise exceptions.InvalidParameter(
            f"L_V bin width {bin_width} too large"
        )

    values = np.array(
        [
            row.lv
            for row in rows
            if row.lv is not None and pclass.contains(row.p_raw)
        ]
    )
    if not len(values):
        return Histogram(edges=[], mass=[], counts=[], flag=const.EMPTY)

    width = const.LV_MAX / n_bins
    index = np.minimum((values // width).astype(np.int64), n_bins - 1)
    counts = np.bincount(index, minlength=n_bins)

    return Histogram(
        edges=(np.arange(n_bins + 1) * width).tolist(),
        mass=(counts / (len(values) * width)).tolist(),
        counts=counts.tolist(),
        n=len(values),
    )


def class_lv_summary(
    corpus: Corpus,
    scheme: Sequence[PopularityClass],
    workers: int = 1,
    lvs: Mapping[str, float | None] | None = None,
) -> list[ClassSummary]:
    """
    Per class: unweighted mean and sample std (n-1) of L_V over trains with
    a defined L_V, and z = (mu - 1) * sqrt(n) / sigma against Poisson.
    Degenerate classes are flagged, never raised.
    """
    if lvs is None:
        lvs = lv_by_tag(corpus, workers)

    summaries = []
    for pclass in scheme:
        members = class_members(corpus, pclass)
        values = [lvs[t.tag] for t in members if lvs[t.tag] is not None]
        summary = ClassSummary(
            pclass=pclass, n_trains=len(members), n=len(values)
        )
        if members:
            summary.mean_p = _mean([t.p_raw for t in members])

        if not values:
            summary.flag = const.EMPTY
        else:
            summary.mu_lv = _mean(values)
            if len(values) < 2:
                summary.flag = const.TOO_FEW
            else:
                summary.sigma_lv = _sample_std(values, summary.mu_lv)
                if summary.sigma_lv > 0:
                    summary.z = (
                        (summary.mu_lv - const.POISSON_LV)
                        * math.sqrt(len(values))
                        / summary.sigma_lv
                    )
                else:
                    summary.flag = const.ZERO_VARIANCE

        summaries.append(summary)

    return summaries


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1 or len(x) < 2:
        raise exceptions.InvalidParameter(
            "Pearson needs two sequences of equal length >= 2"
        )

    dx = x - _mean(x.tolist())
    dy = y - _mean(y.tolist())
    sxx = math.fsum((dx * dx).tolist())
    syy = math.fsum((dy * dy).tolist())
    if sxx == 0 or syy == 0:
        raise exceptions.DegenerateCorrelation("Degenerate correlation input")
    sxy = math.fsum((dx * dy).tolist())

    return max(-1.0, min(1.0, sxy / math.sqrt(sxx * syy)))


def _halves(train) -> tuple[float, float] | None:
    if train.n_spikes < const.MIN_SPLIT_SPIKES:
        return None
    first, second = split_half_lv(train)

    return first.lv, second.lv


def split_half_pairs(
    corpus: Corpus, workers: int = 1
) -> dict[str, tuple[float, float]]:
    """(L_V first half, L_V second half) for every train with >= 6 spikes"""
    pairs = parallel_map(_halves, corpus.trains.values(), workers)

    return {
        tag: pair
        for tag, pair in zip(corpus.trains.keys(), pairs)
        if pair is not None
    }


def split_half_correlation(
    corpus: Corpus,
    scheme: Sequence[PopularityClass],
    workers: int = 1,
    pairs: Mapping[str, tuple[float, float]] | None = None,
) -> list[SplitHalfRow]:
    if pairs is None:
        pairs = split_half_pairs(corpus, workers)

    rows = []
    for pclass in scheme:
        members = [t for t in class_members(corpus, pclass) if t.tag in pairs]
        row = SplitHalfRow(pclass=pclass, n_pairs=len(members))
        if members:
            row.mean_p = _mean([t.p_raw for t in members])

        if len(members) < 2:
            row.flag = const.EMPTY if not members else const.TOO_FEW
        else:
            first = [pairs[t.tag][0] for t in members]
            second = [pairs[t.tag][1] for t in members]
            try:
                row.r = pearson(first, second)
            except exceptions.DegenerateCorrelation:
                logger.debug(f"Zero L_V variance in class {pclass.label}")
                row.flag = const.ZERO_VARIANCE

        rows.append(row)

    return rows


def multiplicity_summary(corpus: Corpus) -> dict:
    repeated = [t for t in corpus.trains.values() if t.n_spikes < t.p_raw]
    max_c = max(
        (int(t.counts.max()) for t in corpus.trains.values() if t.n_spikes),
        default=0,
    )

    return {"tags_with_repeats": len(repeated), "max_multiplicity": max_c}


def coverage(corpus: Corpus) -> dict:
    """Distinct active seconds and their share of the window"""
    t_start, t_end = corpus.window
    window_seconds = t_end - t_start + 1
    if corpus.is_empty:
        active = 0
    else:
        times = np.concatenate([t.times for t in corpus.trains.values()])
        active = int(np.unique(np.floor(times)).size)

    return {
        "active_seconds": active,
        "window_seconds": window_seconds,
        "share": active / window_seconds,
    }
