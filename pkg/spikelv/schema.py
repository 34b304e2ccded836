from enum import Enum
from pathlib import Path

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    computed_field,
    field_validator,
    model_validator,
)

from spikelv import constants as const
from spikelv.utils import canonical_json, normalize_tag, sha256_hex


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


def _strictly_increasing(arr: np.ndarray) -> bool:
    return bool(np.all(np.diff(arr) > 0))


class EventRecord(BaseModel):
    time: int = Field(ge=0, le=const.MAX_EVENT_TIME)
    tag: str

    # Config
    model_config = ConfigDict(frozen=True)

    @field_validator("tag", mode="before")
    @classmethod
    def normalized_tag(cls, value):
        if not isinstance(value, str):
            raise ValueError("tag must be a string")
        tag = normalize_tag(value)
        if not tag:
            raise ValueError("tag is empty after normalization")

        return tag


class SpikeTrain(BaseModel):
    """
    Strictly increasing spike times of one tag.

    `counts[i]` is the number of raw occurrences collapsed into `times[i]`.
    Times are integer seconds for ingested data; synthetic generators
    produce float times unless quantized.
    """

    tag: str
    times: np.ndarray
    counts: np.ndarray

    # Config
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @model_validator(mode="before")
    @classmethod
    def default_counts(cls, data):
        if isinstance(data, dict) and data.get("counts") is None:
            data = dict(data)
            size = len(data.get("times", []))
            data["counts"] = np.ones(size, dtype=np.int64)

        return data

    @field_validator("times", mode="before")
    @classmethod
    def as_times(cls, value):
        arr = np.asarray(value)
        if arr.ndim != 1:
            raise ValueError("times must be one dimensional")
        if arr.size == 0 or arr.dtype.kind in "iub":
            return _readonly(np.array(arr, dtype=np.int64))
        if arr.dtype.kind != "f":
            raise ValueError(f"unsupported times dtype {arr.dtype}")

        return _readonly(np.array(arr, dtype=np.float64))

    @field_validator("counts", mode="before")
    @classmethod
    def as_counts(cls, value):
        arr = np.asarray(value)
        if arr.ndim != 1 or (arr.size and arr.dtype.kind not in "iu"):
            raise ValueError("counts must be a one dimensional integer array")

        return _readonly(np.array(arr, dtype=np.int64))

    @model_validator(mode="after")
    def check_train(self):
        if len(self.times) != len(self.counts):
            raise ValueError(
                f"times/counts length mismatch: "
                f"{len(self.times)} != {len(self.counts)}"
            )
        if not _strictly_increasing(self.times):
            raise ValueError(
                f"times of '{self.tag}' are not strictly increasing"
            )
        if len(self.counts) and self.counts.min() < 1:
            raise ValueError(f"counts of '{self.tag}' must be >= 1")

        return self

    @property
    def p_raw(self) -> int:
        return int(self.counts.sum())

    @property
    def n_spikes(self) -> int:
        return len(self.times)

    def __eq__(self, other):
        if not isinstance(other, SpikeTrain):
            return NotImplemented

        return (
            self.tag == other.tag
            and np.array_equal(self.times, other.times)
            and np.array_equal(self.counts, other.counts)
        )

    def __hash__(self):
        return hash((self.tag, self.times.tobytes(), self.counts.tobytes()))


class IngestReport(BaseModel):
    accepted: int = 0
    rejected: int = 0
    out_of_window: int = 0


class Corpus(BaseModel):
    trains: dict[str, SpikeTrain] = {}
    window: tuple[int, int]
    report: IngestReport = IngestReport()

    # Config
    model_config = ConfigDict(frozen=True)

    @field_validator("trains")
    @classmethod
    def sorted_trains(cls, value: dict[str, SpikeTrain]):
        return dict(sorted(value.items()))

    @model_validator(mode="after")
    def check_corpus(self):
        t_start, t_end = self.window
        if t_start >= t_end:
            raise ValueError(f"invalid window {self.window}")
        for tag, train in self.trains.items():
            if tag != train.tag:
                raise ValueError(f"key '{tag}' != train tag '{train.tag}'")
            if train.n_spikes and (
                train.times[0] < t_start or train.times[-1] > t_end
            ):
                raise ValueError(f"train '{tag}' exceeds window {self.window}")

        return self

    def __len__(self) -> int:
        return len(self.trains)

    @property
    def is_empty(self) -> bool:
        return len(self.trains) == 0


class PopularityClass(BaseModel):
    """Half-open popularity interval [lo, hi); hi=None means unbounded"""

    label: str
    lo: int = Field(ge=1)
    hi: int | None = None

    # Config
    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def check_bounds(self):
        if self.hi is not None and self.lo >= self.hi:
            raise ValueError(
                f"class {self.label}: lo={self.lo} >= hi={self.hi}"
            )

        return self

    def contains(self, p: int) -> bool:
        return self.lo <= p and (self.hi is None or p < self.hi)


class LvResult(BaseModel):
    lv: float = Field(ge=0.0, le=const.LV_MAX)
    n_spikes: int = Field(ge=const.MIN_LV_SPIKES)

    # Config
    model_config = ConfigDict(frozen=True)

    @computed_field
    @property
    def n_terms(self) -> int:
        return self.n_spikes - 2


class GammaShape(BaseModel):
    kappa: float = Field(gt=0)
    xi: float = Field(gt=0)

    # Config
    model_config = ConfigDict(frozen=True)

    @property
    def mean_interval(self) -> float:
        return 1.0 / self.xi

    @property
    def scale(self) -> float:
        # Gamma(shape=kappa, scale=1/(xi*kappa)) has mean 1/xi
        return 1.0 / (self.xi * self.kappa)


class MergedTrain(BaseModel):
    times: np.ndarray

    # Config
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @field_validator("times", mode="before")
    @classmethod
    def as_times(cls, value):
        arr = np.array(value)
        if arr.ndim != 1 or not _strictly_increasing(arr):
            raise ValueError("merged times must be strictly increasing")

        return _readonly(arr)

    def __len__(self) -> int:
        return len(self.times)


class HistKind(str, Enum):
    pdf = "pdf"
    cdf = "cdf"


class Histogram(BaseModel):
    """
    Binned distribution. For `pdf` the mass is a density (sum of
    mass * width is 1); for `cdf` it is the cumulative probability at the
    right edge of each bin.
    """

    edges: list[float]
    mass: list[float]
    counts: list[int]
    kind: HistKind = HistKind.pdf
    n: int = 0
    flag: str | None = None

    @model_validator(mode="after")
    def check_shape(self):
        if self.edges and len(self.edges) != len(self.mass) + 1:
            raise ValueError("histogram needs len(edges) == len(mass) + 1")
        if len(self.counts) != len(self.mass):
            raise ValueError("histogram needs len(counts) == len(mass)")

        return self

    @property
    def widths(self) -> np.ndarray:
        return np.diff(np.asarray(self.edges, dtype=np.float64))

    @property
    def is_empty(self) -> bool:
        return self.n == 0

    def probabilities(self) -> np.ndarray:
        """Per-bin probability regardless of `kind`"""
        mass = np.asarray(self.mass, dtype=np.float64)
        if self.kind == HistKind.pdf:
            return mass * self.widths

        return np.diff(mass, prepend=0.0)


class ClassSummary(BaseModel):
    pclass: PopularityClass
    n_trains: int = 0
    mean_p: float | None = None
    mu_lv: float | None = None
    sigma_lv: float | None = None
    n: int = Field(default=0, ge=0)
    z: float | None = None
    flag: str | None = None


class ActivitySeries(BaseModel):
    start: int
    bin_width: int
    counts: list[int]

    @property
    def edges(self) -> list[int]:
        return [
            self.start + i * self.bin_width
            for i in range(len(self.counts) + 1)
        ]

    @property
    def total(self) -> int:
        return sum(self.counts)


class ZipfRow(BaseModel):
    rank: int
    tag: str
    p_raw: int


class ZipfTable(BaseModel):
    rows: list[ZipfRow]
    n_tags: int
    share_p1: float | None = None
    share_p_lt5: float | None = None


class LvRow(BaseModel):
    tag: str
    label: str
    p_raw: int
    n_spikes: int
    lv: float | None = None
    cv: float | None = None


class SplitHalfRow(BaseModel):
    pclass: PopularityClass
    mean_p: float | None = None
    r: float | None = None
    n_pairs: int = 0
    flag: str | None = None


class GeneratorKind(str, Enum):
    poisson = "poisson"
    nonstationary = "nonstationary"
    gamma = "gamma"


class GeneratorGroup(BaseModel):
    """
    `count` tags generated with the same process. With `zipf_exponent`
    set, every tag rate is `xi` times an integer drawn from a Zipf law,
    clipped at `zipf_max`.
    """

    kind: GeneratorKind = GeneratorKind.poisson
    count: int = Field(default=1, ge=1)
    prefix: str | None = None
    xi: float = Field(gt=0)
    kappa: float = Field(default=1.0, gt=0)
    amplitude: float = Field(default=0.0, ge=0, lt=1)
    period: float = Field(default=86400.0, gt=0)
    phase: float = 0.0
    zipf_exponent: float | None = Field(default=None, gt=1)
    zipf_max: int = Field(default=1000, ge=1)

    @property
    def tag_prefix(self) -> str:
        return self.prefix or self.kind.value


class SynthSpec(BaseModel):
    window: tuple[int, int]
    seed: int = 0
    quantize: bool = False
    groups: list[GeneratorGroup]


class RunConfig(BaseModel):
    inputs: list[Path] = []
    window: tuple[int, int] | None = None
    edges: list[int] = list(const.DEFAULT_CLASS_EDGES)
    bin_width: int | None = Field(default=None, ge=1)
    activity_bin: int = Field(default=60, ge=1)
    lv_bin: float = Field(default=0.1, gt=0)
    bins_per_decade: int = Field(default=5, ge=1)
    seed: int = 0
    out_dir: Path = Path("out")
    formats: list[str] = ["csv", "json"]
    workers: int = Field(default=4, ge=1)
    drop_unit_interval: bool = False

    @field_validator("inputs")
    @classmethod
    def resolved(cls, value: list[Path]):
        return [path.resolve() for path in value]

    @field_validator("formats")
    @classmethod
    def known_formats(cls, value: list[str]):
        unknown = set(value) - {"csv", "json"}
        if unknown:
            raise ValueError(f"unknown output formats {sorted(unknown)}")

        return value

    def config_hash(self) -> str:
        # out_dir and workers never change results
        data = self.model_dump(mode="json", exclude={"out_dir", "workers"})
        return sha256_hex(canonical_json(data))[:16]
