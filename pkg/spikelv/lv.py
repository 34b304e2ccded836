"""
Local variation L_V of spike trains and its Gamma-process relations.

    L_V = 3/(N-2) Σ_{i=2}^{N-1} ((Δτ_{i+1} - Δτ_i)/(Δτ_{i+1} + Δτ_i))^2

L_V is 1 on average for (possibly rate-modulated) Poisson trains, above 1
for bursty and below 1 for regular trains, and bounded to [0, 3]. For a
renewal process with Gamma(κ) intervals its mean is 3/(2κ+1).
"""

import math
from collections.abc import Iterable

import numpy as np

from spikelv import constants as const
from spikelv import exceptions
from spikelv.core import inter_event_intervals
from spikelv.schema import LvResult, SpikeTrain


def lv_from_intervals(intervals: np.ndarray) -> float:
    intervals = np.asarray(intervals, dtype=np.float64)
    if len(intervals) < 2:
        raise exceptions.UndefinedLocalVariation(
            f"Undefined local variation for {len(intervals)} interval(s)"
        )

    backward = intervals[:-1]
    forward = intervals[1:]
    ratio = (forward - backward) / (forward + backward)
    total = math.fsum((ratio * ratio).tolist())

    return min(3.0 * total / len(ratio), const.LV_MAX)


def local_variation(train: SpikeTrain) -> LvResult:
    if train.n_spikes < const.MIN_LV_SPIKES:
        raise exceptions.UndefinedLocalVariation(
            f"Undefined local variation for '{train.tag}' "
            f"(n_spikes={train.n_spikes})"
        )

    return LvResult(
        lv=lv_from_intervals(inter_event_intervals(train)),
        n_spikes=train.n_spikes,
    )


def try_local_variation(train: SpikeTrain) -> float | None:
    """L_V or None for trains with less than 3 spikes"""
    if train.n_spikes < const.MIN_LV_SPIKES:
        return None

    return local_variation(train).lv


class StreamingLv:
    """
    Single-pass L_V accumulator over spike times.

    Keeps the last time and the last interval only; terms are summed with
    Neumaier compensation.
    """

    def __init__(self):
        self.n_spikes = 0
        self._last: float | None = None
        self._interval: float | None = None
        self._sum = 0.0
        self._comp = 0.0

    def push(self, time: float) -> None:
        if self._last is not None:
            interval = time - self._last
            if interval <= 0:
                raise exceptions.InvalidParameter(
                    "Spike times must strictly increase: "
                    f"{self._last} -> {time}"
                )
            if self._interval is not None:
                previous = self._interval
                ratio = (interval - previous) / (interval + previous)
                self._add(ratio * ratio)
            self._interval = interval

        self._last = time
        self.n_spikes += 1

    def _add(self, term: float) -> None:
        total = self._sum + term
        if abs(self._sum) >= abs(term):
            self._comp += (self._sum - total) + term
        else:
            self._comp += (term - total) + self._sum
        self._sum = total

    def result(self) -> LvResult:
        if self.n_spikes < const.MIN_LV_SPIKES:
            raise exceptions.UndefinedLocalVariation(
                f"Undefined local variation (n_spikes={self.n_spikes})"
            )
        lv = 3.0 * (self._sum + self._comp) / (self.n_spikes - 2)

        return LvResult(lv=min(lv, const.LV_MAX), n_spikes=self.n_spikes)


def streaming_local_variation(times: Iterable[float]) -> LvResult:
    acc = StreamingLv()
    for time in times:
        acc.push(time)

    return acc.result()


def coefficient_of_variation(train: SpikeTrain) -> float:
    """std/mean of intervals; the stationary burstiness indicator"""
    if train.n_spikes < const.MIN_LV_SPIKES:
        raise exceptions.TrainTooShort(
            f"Train '{train.tag}' too short for CV (n_spikes={train.n_spikes})"
        )
    intervals = inter_event_intervals(train).astype(np.float64)

    return float(intervals.std() / intervals.mean())


def expected_lv_gamma(kappa: float) -> float:
    if not kappa > 0:
        raise exceptions.InvalidParameter(
            f"Gamma shape must be > 0, got {kappa}"
        )

    return 3.0 / (2.0 * kappa + 1.0)


def shape_from_lv(lv: float) -> float:
    """Inverse of `expected_lv_gamma`: κ = (3/L_V - 1)/2"""
    if not 0 < lv <= const.LV_MAX:
        raise exceptions.InvalidParameter(f"L_V must be in (0, 3], got {lv}")
    if lv == const.LV_MAX:
        raise exceptions.DegenerateShape(
            "Degenerate shape: L_V=3 maps to κ=0"
        )

    return (3.0 / lv - 1.0) / 2.0


def sub_train(
    train: SpikeTrain, start: int, stop: int | None = None
) -> SpikeTrain:
    return SpikeTrain(
        tag=train.tag,
        times=train.times[start:stop],
        counts=train.counts[start:stop],
    )


def split_half_lv(train: SpikeTrain) -> tuple[LvResult, LvResult]:
    """
    L_V of the first ceil(N/2) spikes and of the remaining spikes. The
    interval bridging the two halves belongs to neither.
    """
    if train.n_spikes < const.MIN_SPLIT_SPIKES:
        raise exceptions.TrainTooShort(
            f"Train '{train.tag}' too short to split "
            f"(n_spikes={train.n_spikes})"
        )
    middle = math.ceil(train.n_spikes / 2)

    return (
        local_variation(sub_train(train, 0, middle)),
        local_variation(sub_train(train, middle)),
    )
