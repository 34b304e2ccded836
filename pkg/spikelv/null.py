"""
Popularity-matched null model.

All trains are merged into the set of distinct active seconds T. Each
real train of n spikes is replaced by n distinct seconds drawn uniformly
without replacement from T: a time-dependent Poisson surrogate that keeps
the global activity profile and nothing else.
"""

import json
import logging
from pathlib import Path

import numpy as np

from spikelv import constants as const
from spikelv import exceptions, rng
from spikelv.eventio import write_events
from spikelv.schema import Corpus, IngestReport, MergedTrain, SpikeTrain
from spikelv.utils import parallel_map

logger = logging.getLogger(__name__)


def merge_trains(corpus: Corpus) -> MergedTrain:
    """Set union of all train times; cross-tag collisions collapse"""
    if corpus.is_empty:
        raise exceptions.EmptyCorpus("Cannot merge trains of an empty corpus")

    times = np.unique(
        np.concatenate([t.times for t in corpus.trains.values()])
    )

    return MergedTrain(times=times)


def draw_indices(m: int, n: int, generator: np.random.Generator) -> np.ndarray:
    """
    First n positions of a Fisher-Yates shuffle of range(m).

    Position i is swapped with j drawn uniformly from [i, m); the swaps are
    tracked sparsely so the cost is O(n) whatever m is.
    """
    draws = generator.integers(np.arange(n), m).tolist()
    swapped: dict[int, int] = {}
    picks = np.empty(n, dtype=np.int64)
    for i, j in enumerate(draws):
        picks[i] = swapped.get(j, j)
        swapped[j] = swapped.get(i, i)

    return picks


def sample_null_train(
    merged: MergedTrain,
    n: int,
    seed: int,
    tag: str = "null",
    counts: np.ndarray | None = None,
) -> SpikeTrain:
    if n < 1:
        raise exceptions.InvalidParameter(
            f"Null train size must be >= 1, got {n}"
        )
    if n > len(merged):
        raise exceptions.PopularityExceedsSupport(
            f"Popularity exceeds merged support: n={n} > |T|={len(merged)}"
        )

    picks = draw_indices(len(merged), n, rng.make_rng(seed))

    return SpikeTrain(
        tag=tag, times=merged.times[np.sort(picks)], counts=counts
    )


def randomize_corpus(corpus: Corpus, seed: int, workers: int = 1) -> Corpus:
    """
    One null train per real train, matched on n_spikes. The real train's
    per-second multiplicities are carried over in time order so that the
    null train keeps the tag's popularity class.
    """
    merged = merge_trains(corpus)
    logger.debug(f"Randomizing {len(corpus)} trains over |T|={len(merged)}")

    def _null(train: SpikeTrain) -> SpikeTrain:
        return sample_null_train(
            merged,
            train.n_spikes,
            seed=rng.derive_subseed(seed, train.tag),
            tag=train.tag,
            counts=train.counts,
        )

    nulls = parallel_map(_null, corpus.trains.values(), workers)

    return Corpus(
        trains={train.tag: train for train in nulls},
        window=corpus.window,
        report=IngestReport(accepted=sum(t.p_raw for t in nulls)),
    )


def null_metadata(seed: int, merged: MergedTrain) -> dict:
    return {
        "seed": seed,
        "generator": const.GENERATOR_ID,
        "subseed_hash": const.SUBSEED_HASH,
        "merged_length": len(merged),
    }


def write_null_corpus(
    out_dir: Path, null_corpus: Corpus, metadata: dict
) -> tuple[Path, Path]:
    """Null events in the input line format plus a JSON sidecar"""
    events = write_events(out_dir / const.NULL_EVENTS, null_corpus, metadata)
    sidecar = out_dir / const.NULL_SIDECAR
    sidecar.write_text(json.dumps(metadata, indent=2, sort_keys=True) + "\n")

    return events, sidecar
