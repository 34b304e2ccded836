import logging
from collections import Counter, defaultdict
from collections.abc import Iterable, Sequence

import numpy as np
from pydantic import ValidationError

from spikelv import constants as const
from spikelv import exceptions
from spikelv.schema import (
    Corpus,
    EventRecord,
    Histogram,
    HistKind,
    IngestReport,
    PopularityClass,
    SpikeTrain,
)

logger = logging.getLogger(__name__)

RawEvent = EventRecord | tuple[object, object]


def check_window(window: Sequence[int]) -> tuple[int, int]:
    try:
        t_start, t_end = (int(value) for value in window)
    except (TypeError, ValueError):
        raise exceptions.InvalidWindow(
            f"Window {window!r} is not a pair of ints"
        )

    if t_start < 0 or t_start >= t_end or t_end > const.MAX_EVENT_TIME:
        raise exceptions.InvalidWindow(
            f"Window [{t_start}, {t_end}] must satisfy "
            f"0 <= t_start < t_end <= {const.MAX_EVENT_TIME}"
        )

    return t_start, t_end


def parse_window(text: str) -> tuple[int, int]:
    """Parses "t_start,t_end" as given on the command line"""
    parts = [part.strip() for part in text.split(",")]
    if len(parts) != 2:
        raise exceptions.InvalidWindow(
            f"Window '{text}' must be 't_start,t_end'"
        )

    return check_window(parts)


def _as_event(record: RawEvent) -> EventRecord:
    if isinstance(record, EventRecord):
        return record

    time, tag = record

    return EventRecord(time=time, tag=tag)


def _make_train(tag: str, seconds: Counter) -> SpikeTrain:
    ordered = sorted(seconds)
    return SpikeTrain(
        tag=tag,
        times=np.fromiter(ordered, dtype=np.int64, count=len(ordered)),
        counts=np.fromiter(
            (seconds[t] for t in ordered), dtype=np.int64, count=len(ordered)
        ),
    )


def _infer_window(per_tag: dict[str, Counter]) -> tuple[int, int]:
    if not per_tag:
        return 0, 1
    t_start = min(min(seconds) for seconds in per_tag.values())
    t_end = max(max(seconds) for seconds in per_tag.values())

    return t_start, max(t_end, t_start + 1)


def ingest_events(
    records: Iterable[RawEvent], window: Sequence[int] | None = None
) -> Corpus:
    """
    Folds raw events into one deduplicated spike train per tag.

    Records are `EventRecord`s or raw `(time, tag)` pairs in any order.
    Same-second occurrences of a tag collapse into a single spike whose
    multiplicity is kept in `counts`. Malformed records are skipped and
    counted as rejected; records outside `window` (inclusive bounds) are
    dropped and counted separately. Without a window, the window spans the
    accepted events.
    """
    bounds = check_window(window) if window is not None else None
    per_tag: dict[str, Counter] = defaultdict(Counter)
    report = IngestReport()

    for record in records:
        try:
            event = _as_event(record)
        except (ValidationError, TypeError, ValueError):
            report.rejected += 1
            continue

        if bounds is not None and not bounds[0] <= event.time <= bounds[1]:
            report.out_of_window += 1
            continue

        per_tag[event.tag][event.time] += 1
        report.accepted += 1

    if bounds is None:
        bounds = _infer_window(per_tag)

    trains = {
        tag: _make_train(tag, seconds) for tag, seconds in per_tag.items()
    }
    logger.debug(
        f"Ingested {report.accepted} events into {len(trains)} trains, "
        f"rejected={report.rejected} out_of_window={report.out_of_window}"
    )
    if report.rejected:
        logger.warning(f"{report.rejected} malformed records skipped")

    return Corpus(trains=trains, window=bounds, report=report)


def inter_event_intervals(train: SpikeTrain) -> np.ndarray:
    """Δτ_i = times[i] - times[i-1]; all >= 1 on the integer second grid"""
    if train.n_spikes < 2:
        raise exceptions.TrainTooShort(
            f"Train '{train.tag}' too short for intervals "
            f"(n_spikes={train.n_spikes})"
        )

    return np.diff(train.times)


def class_label(lo: int, hi: int | None) -> str:
    if hi is None:
        return f"p{lo}+"
    if hi == lo + 1:
        return f"p{lo}"

    return f"p{lo}-{hi - 1}"


def scheme_from_edges(edges: Sequence[int]) -> list[PopularityClass]:
    """
    Half-open classes [e0,e1), [e1,e2), ..., [e_last, inf).

    The first edge must be 1 so that the scheme covers every popularity.
    """
    edges = [int(edge) for edge in edges]
    if not edges or edges[0] != 1:
        raise exceptions.InvalidParameter(
            f"Class edges {edges} must start at 1 to cover all popularities"
        )
    if any(b <= a for a, b in zip(edges, edges[1:])):
        raise exceptions.InvalidParameter(
            f"Class edges {edges} must be strictly increasing"
        )

    bounds = list(zip(edges, edges[1:] + [None]))

    return [
        PopularityClass(label=class_label(lo, hi), lo=lo, hi=hi)
        for lo, hi in bounds
    ]


def parse_edges(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise exceptions.InvalidParameter(
            f"Class edges '{text}' are not integers"
        )


def default_scheme() -> list[PopularityClass]:
    return scheme_from_edges(const.DEFAULT_CLASS_EDGES)


def classify(p_raw: int, scheme: Sequence[PopularityClass]) -> PopularityClass:
    if p_raw < 1:
        raise exceptions.InvalidParameter(
            f"Popularity must be >= 1, got {p_raw}"
        )

    for pclass in scheme:
        if pclass.contains(p_raw):
            return pclass

    raise exceptions.InvalidParameter(
        f"Popularity {p_raw} not covered by class scheme"
    )


def class_members(corpus: Corpus, pclass: PopularityClass) -> list[SpikeTrain]:
    """Trains of `pclass` in tag order"""
    return [
        train
        for train in corpus.trains.values()
        if pclass.contains(train.p_raw)
    ]


def default_bin_width(pclass: PopularityClass) -> int:
    """Interval histogram bin width (seconds) by popularity regime"""
    if pclass.lo >= const.HIGH_P_FROM:
        return const.HIGH_P_BIN
    if pclass.lo >= const.MODERATE_P_FROM:
        return const.MODERATE_P_BIN

    return const.LOW_P_BIN


def multiplicity_distribution(
    corpus: Corpus, pclass: PopularityClass
) -> Histogram:
    """
    P(c_h): probability that an active second of a class train holds
    exactly c_h occurrences, pooled over all trains of the class.
    """
    if corpus.is_empty:
        raise exceptions.EmptyCorpus(
            "Multiplicity distribution of empty corpus"
        )

    members = class_members(corpus, pclass)
    if not members:
        return Histogram(edges=[], mass=[], counts=[], n=0, flag=const.EMPTY)

    pooled = np.concatenate([train.counts for train in members])
    counts = np.bincount(pooled)[1:]
    total = int(counts.sum())

    return Histogram(
        edges=[float(c) for c in range(1, len(counts) + 2)],
        mass=(counts / total).tolist(),
        counts=counts.tolist(),
        kind=HistKind.pdf,
        n=total,
    )
