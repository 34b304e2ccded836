"""
Event-line files: one `<unix_seconds>\\t<tag>` event per line, UTF-8,
optionally gzip-compressed (by `.gz` extension). Lines starting with '#'
in column 1 are comments.
"""

import itertools
import logging
import math
from collections.abc import Iterable, Iterator, Sequence
from pathlib import Path

from spikelv import constants as const
from spikelv import exceptions
from spikelv.core import ingest_events
from spikelv.schema import Corpus
from spikelv.utils import canonical_json, open_text

logger = logging.getLogger(__name__)


def _decodable(line: str) -> bool:
    try:
        line.encode("utf-8")
    except UnicodeEncodeError:
        return False

    return True


def read_events(path: Path) -> Iterator[tuple[str | None, str | None]]:
    """
    Yields raw (time, tag) pairs; validation happens at ingestion.

    A line that is not valid UTF-8 is yielded as `(None, None)` so that it
    counts as one rejected record.
    """
    with open_text(path) as stream:
        for line in stream:
            line = line.rstrip("\r\n")
            if not line or line.startswith(const.COMMENT):
                continue
            if not _decodable(line):
                yield None, None
                continue
            time, sep, tag = line.partition(const.SEP)
            yield time.strip(), (tag if sep else None)


def read_corpus(
    paths: Sequence[Path], window: Sequence[int] | None = None
) -> Corpus:
    logger.debug(f"Reading events from {[str(p) for p in paths]}")
    records = itertools.chain.from_iterable(
        read_events(path) for path in paths
    )
    try:
        return ingest_events(records, window)
    except OSError as ex:
        raise exceptions.UnreadableInput(f"Cannot read input: {ex}") from ex


def event_lines(corpus: Corpus) -> Iterable[str]:
    """
    One line per raw occurrence: spikes are repeated `counts` times and
    non-integer times are floored to the second.
    """
    for tag, train in corpus.trains.items():
        for time, count in zip(train.times.tolist(), train.counts.tolist()):
            second = math.floor(time)
            for _ in range(count):
                yield f"{second}{const.SEP}{tag}\n"


def write_events(
    path: Path, corpus: Corpus, metadata: dict | None = None
) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open_text(path, "w") as stream:
        if metadata is not None:
            stream.write(f"{const.COMMENT} {canonical_json(metadata)}\n")
        stream.writelines(event_lines(corpus))

    return path
