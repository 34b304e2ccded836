"""
Ground-truth point processes: stationary Poisson, rate-modulated Poisson
(thinning) and Gamma renewal trains.

Gamma intervals follow the (rate ξ, shape κ) parameterization

    P(Δτ) = (ξκ)^κ Δτ^(κ-1) e^(-ξκΔτ) / Γ(κ)

so the mean interval is 1/ξ whatever κ is, and κ=1 is the exponential.
Trains are generated in continuous time over (t0, t1]; `quantize=True`
floors them to the 1 s grid and collapses same-second spikes.
"""

import logging
import math
from abc import ABC, abstractmethod
from collections.abc import Callable, Sequence

import numpy as np
import scipy.integrate
from pydantic import ValidationError

from spikelv import constants as const
from spikelv import exceptions, rng
from spikelv.core import check_window
from spikelv.schema import (
    Corpus,
    GammaShape,
    GeneratorGroup,
    GeneratorKind,
    IngestReport,
    SpikeTrain,
    SynthSpec,
)
from spikelv.utils import normalize_tag, parallel_map

logger = logging.getLogger(__name__)


class RateFunction(ABC):
    """ξ(t) >= 0 with a declared upper bound `xi_max`"""

    xi_max: float

    @abstractmethod
    def __call__(self, t: np.ndarray) -> np.ndarray: ...

    def integral(self, a: float, b: float) -> float:
        value, _ = scipy.integrate.quad(
            lambda t: float(self(np.array([t]))[0]), a, b
        )
        return value


class ConstantRate(RateFunction):
    def __init__(self, xi: float):
        if not xi > 0:
            raise exceptions.InvalidParameter(f"Rate must be > 0, got {xi}")
        self.xi = xi
        self.xi_max = xi

    def __call__(self, t: np.ndarray) -> np.ndarray:
        return np.full(np.shape(t), self.xi, dtype=np.float64)

    def integral(self, a: float, b: float) -> float:
        return self.xi * (b - a)


class SinusoidalRate(RateFunction):
    """ξ(t) = mean * (1 + amplitude * sin(2πt/period + phase))"""

    def __init__(
        self,
        mean: float,
        amplitude: float = 0.5,
        period: float = 86400.0,
        phase: float = 0.0,
    ):
        if not mean > 0 or not 0 <= amplitude < 1 or not period > 0:
            raise exceptions.InvalidParameter(
                f"Invalid sinusoidal rate mean={mean} "
                f"amplitude={amplitude} period={period}"
            )
        self.mean = mean
        self.amplitude = amplitude
        self.period = period
        self.phase = phase
        self.xi_max = mean * (1 + amplitude)

    def _angle(self, t):
        t = np.asarray(t, dtype=np.float64)

        return 2 * np.pi * t / self.period + self.phase

    def __call__(self, t: np.ndarray) -> np.ndarray:
        return self.mean * (1 + self.amplitude * np.sin(self._angle(t)))

    def integral(self, a: float, b: float) -> float:
        swing = self.amplitude * self.period / (2 * np.pi)
        drift = np.cos(self._angle(b)) - np.cos(self._angle(a))

        return float(self.mean * ((b - a) - swing * drift))


class CallableRate(RateFunction):
    """Wraps a vectorized callable; the bound is trusted and checked lazily"""

    def __init__(
        self, func: Callable[[np.ndarray], np.ndarray], xi_max: float
    ):
        self.func = func
        self.xi_max = xi_max

    def __call__(self, t: np.ndarray) -> np.ndarray:
        return np.asarray(self.func(t), dtype=np.float64)


def _guard(expected: float, max_expected: float) -> None:
    if expected > max_expected:
        raise exceptions.ResourceGuard(
            f"Expected {expected:.3g} events exceeds limit {max_expected:.3g}"
        )


def _nudged(times: np.ndarray) -> np.ndarray:
    """
    Gaps below float resolution at large t collapse two spikes onto one
    value; such spikes are moved up by one ulp to keep the train strictly
    increasing without dropping them.
    """
    bad = np.flatnonzero(np.diff(times) <= 0)
    if not len(bad):
        return times

    times = times.copy()
    for i in range(bad[0] + 1, len(times)):
        if times[i] <= times[i - 1]:
            times[i] = np.nextafter(times[i - 1], np.inf)

    return times


def _renewal_times(
    gaps: Callable[[int], np.ndarray], mean_gap: float, t0: float, t1: float
) -> np.ndarray:
    """Cumulated i.i.d. gaps from t0, cut at t1"""
    expected = (t1 - t0) / mean_gap
    chunk = int(expected + 5 * math.sqrt(expected) + 16)
    parts = []
    last = float(t0)
    while True:
        cumulated = last + np.cumsum(gaps(chunk))
        if cumulated[-1] > t1:
            parts.append(cumulated[cumulated <= t1])
            break
        parts.append(cumulated)
        last = float(cumulated[-1])

    times = _nudged(np.concatenate(parts))

    return times[times <= t1]


def _as_train(times: np.ndarray, tag: str, quantize: bool) -> SpikeTrain:
    if not quantize:
        return SpikeTrain(tag=tag, times=times)

    seconds, counts = np.unique(
        np.floor(times).astype(np.int64), return_counts=True
    )

    return SpikeTrain(tag=tag, times=seconds, counts=counts)


def gen_poisson(
    xi: float,
    window: Sequence[int],
    seed: int,
    tag: str = "poisson",
    quantize: bool = False,
    max_expected: float = const.MAX_EXPECTED_EVENTS,
) -> SpikeTrain:
    if not xi > 0:
        raise exceptions.InvalidParameter(f"Rate must be > 0, got {xi}")
    t0, t1 = check_window(window)
    _guard(xi * (t1 - t0), max_expected)

    generator = rng.make_rng(seed)
    times = _renewal_times(
        lambda k: generator.exponential(1.0 / xi, k), 1.0 / xi, t0, t1
    )

    return _as_train(times, tag, quantize)


def gen_nonstationary_poisson(
    rate: RateFunction,
    window: Sequence[int],
    seed: int,
    tag: str = "nonstationary",
    quantize: bool = False,
    max_expected: float = const.MAX_EXPECTED_EVENTS,
) -> SpikeTrain:
    """
    Thinning: candidates of a Poisson train at rate ξ_max, each kept with
    probability ξ(t)/ξ_max.
    """
    if not rate.xi_max > 0:
        raise exceptions.InvalidParameter(
            f"ξ_max must be > 0, got {rate.xi_max}"
        )
    t0, t1 = check_window(window)
    _guard(rate.xi_max * (t1 - t0), max_expected)

    generator = rng.make_rng(seed)
    candidates = _renewal_times(
        lambda k: generator.exponential(1.0 / rate.xi_max, k),
        1.0 / rate.xi_max,
        t0,
        t1,
    )
    values = rate(candidates)
    if np.any(values > rate.xi_max) or np.any(values < 0):
        raise exceptions.RateBoundViolation(
            f"Rate function leaves [0, {rate.xi_max}] "
            f"(min={values.min():.6g}, max={values.max():.6g})"
        )
    keep = generator.random(len(candidates)) * rate.xi_max < values

    return _as_train(candidates[keep], tag, quantize)


def gen_gamma_renewal(
    xi: float,
    kappa: float,
    window: Sequence[int],
    seed: int,
    tag: str = "gamma",
    quantize: bool = False,
    max_expected: float = const.MAX_EXPECTED_EVENTS,
) -> SpikeTrain:
    """
    Gamma(κ) renewal train with mean interval 1/ξ. numpy draws the gaps by
    rejection sampling valid for every κ > 0, including the bursty κ < 1.
    """
    try:
        shape = GammaShape(kappa=kappa, xi=xi)
    except ValidationError as ex:
        raise exceptions.InvalidParameter(
            f"Invalid Gamma parameters xi={xi} kappa={kappa}"
        ) from ex
    t0, t1 = check_window(window)
    _guard(xi * (t1 - t0), max_expected)

    generator = rng.make_rng(seed)
    times = _renewal_times(
        lambda k: generator.gamma(shape.kappa, shape.scale, k),
        shape.mean_interval,
        t0,
        t1,
    )

    return _as_train(times, tag, quantize)


def _popularity_multiplier(group: GeneratorGroup, seed: int, tag: str) -> int:
    if group.zipf_exponent is None:
        return 1
    draw = rng.tag_rng(seed, f"{tag}/popularity").zipf(group.zipf_exponent)

    return int(min(draw, group.zipf_max))


def gen_group_train(
    group: GeneratorGroup,
    tag: str,
    spec: SynthSpec,
    max_expected: float = const.MAX_EXPECTED_EVENTS,
) -> tuple[SpikeTrain, dict]:
    seed = rng.derive_subseed(spec.seed, tag)
    xi = group.xi * _popularity_multiplier(group, spec.seed, tag)
    options = dict(
        window=spec.window,
        seed=seed,
        tag=tag,
        quantize=spec.quantize,
        max_expected=max_expected,
    )

    match group.kind:
        case GeneratorKind.poisson:
            train = gen_poisson(xi, **options)
        case GeneratorKind.gamma:
            train = gen_gamma_renewal(xi, group.kappa, **options)
        case GeneratorKind.nonstationary:
            rate = SinusoidalRate(
                xi, group.amplitude, group.period, group.phase
            )
            train = gen_nonstationary_poisson(rate, **options)

    truth = {
        "tag": tag,
        "generator": group.kind.value,
        "xi": xi,
        "kappa": group.kappa if group.kind == GeneratorKind.gamma else 1.0,
        "seed": seed,
        "n_events": train.p_raw,
        "n_spikes": train.n_spikes,
    }

    return train, truth


def group_tags(spec: SynthSpec) -> list[tuple[GeneratorGroup, str]]:
    tags = []
    for group in spec.groups:
        prefix = normalize_tag(group.tag_prefix)
        tags.extend((group, f"{prefix}_{k:05d}") for k in range(group.count))

    duplicates = len(tags) - len({tag for _, tag in tags})
    if duplicates:
        raise exceptions.InvalidParameter(
            f"{duplicates} duplicate tags; "
            "give generator groups distinct prefixes"
        )

    return tags


def gen_corpus(
    spec: SynthSpec,
    workers: int = 1,
    max_expected: float = const.MAX_EXPECTED_EVENTS,
) -> tuple[Corpus, list[dict]]:
    """
    Corpus of independently seeded trains plus per-tag ground truth.
    Trains with no event in the window are left out of the corpus but kept
    in the ground truth.
    """
    check_window(spec.window)
    tags = group_tags(spec)
    logger.debug(f"Generating {len(tags)} trains, quantize={spec.quantize}")

    results = parallel_map(
        lambda item: gen_group_train(item[0], item[1], spec, max_expected),
        tags,
        workers,
    )
    trains = {train.tag: train for train, _ in results if train.n_spikes}
    truth = [item for _, item in results]
    corpus = Corpus(
        trains=trains,
        window=spec.window,
        report=IngestReport(accepted=sum(t.p_raw for t in trains.values())),
    )

    return corpus, truth


def synth_metadata(spec: SynthSpec) -> dict:
    return {
        "seed": spec.seed,
        "generator": const.GENERATOR_ID,
        "subseed_hash": const.SUBSEED_HASH,
        "window": list(spec.window),
        "quantize": spec.quantize,
    }
