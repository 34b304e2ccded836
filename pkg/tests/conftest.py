import numpy as np
import pytest

from spikelv.schema import Corpus, IngestReport, SpikeTrain


@pytest.fixture(scope="function")
def train_factory():

    def _create_train(times, tag: str = "foo", counts=None) -> SpikeTrain:
        return SpikeTrain(tag=tag, times=np.asarray(times), counts=counts)

    return _create_train


@pytest.fixture(scope="function")
def corpus_factory(train_factory):
    """Corpus from {tag: times} or {tag: (times, counts)}"""

    def _create_corpus(trains: dict, window=None) -> Corpus:
        built = {}
        for tag, value in trains.items():
            if isinstance(value, tuple):
                times, counts = value
            else:
                times, counts = value, None
            built[tag] = train_factory(times, tag=tag, counts=counts)

        if window is None:
            last = max(int(np.max(t.times)) for t in built.values())
            window = (0, max(last, 1))
        accepted = sum(t.p_raw for t in built.values())

        return Corpus(
            trains=built, window=window, report=IngestReport(accepted=accepted)
        )

    return _create_corpus


@pytest.fixture(scope="function")
def event_file(tmp_path):

    def _create_file(lines: list[str], name: str = "events.tsv"):
        path = tmp_path / name
        text = "".join(f"{line}\n" for line in lines)
        path.write_text(text, encoding="utf-8")

        return path

    return _create_file
