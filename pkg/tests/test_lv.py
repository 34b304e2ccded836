import math

import numpy as np
import pytest

from spikelv import exceptions
from spikelv.lv import (
    StreamingLv,
    coefficient_of_variation,
    expected_lv_gamma,
    local_variation,
    lv_from_intervals,
    shape_from_lv,
    split_half_lv,
    streaming_local_variation,
    try_local_variation,
)
from spikelv.rng import make_rng
from spikelv.schema import GammaShape
from spikelv.synthetic import gen_gamma_renewal

KAPPAS = [0.25, 0.5, 1.0, 2.0, 4.0]


def naive_lv(times) -> float:
    intervals = [b - a for a, b in zip(times, times[1:])]
    ratios = [(b - a) / (b + a) for a, b in zip(intervals, intervals[1:])]
    mean_square = sum(r * r for r in ratios) / len(ratios)

    return 3 * mean_square


def test_regular_train_is_exactly_zero(train_factory):
    result = local_variation(train_factory(np.arange(0, 1000, 7)))

    assert result.lv == 0.0
    assert result.n_spikes == 143
    assert result.n_terms == 141


def test_three_spikes(train_factory):
    assert local_variation(train_factory([0, 1, 4])).lv == pytest.approx(
        0.75, rel=1e-15
    )


def test_alternating_intervals():
    assert lv_from_intervals([1, 3, 1, 3]) == pytest.approx(0.75)


def test_too_few_spikes(train_factory):
    with pytest.raises(exceptions.UndefinedLocalVariation):
        local_variation(train_factory([1, 2]))
    with pytest.raises(exceptions.TrainTooShort):
        local_variation(train_factory([1]))

    assert try_local_variation(train_factory([1, 2])) is None


def test_lv_is_bounded_on_random_trains():
    generator = make_rng(5)
    for _ in range(100_000):
        n = int(generator.integers(2, 12))
        intervals = generator.exponential(1.0, n) ** generator.uniform(0.1, 6)
        lv = lv_from_intervals(intervals + 1e-300)
        assert 0.0 <= lv <= 3.0


def test_lv_reaches_the_upper_bound_only_in_the_limit():
    lv = lv_from_intervals([1.0, 1e9, 1.0, 1e9, 1.0])

    assert 2.99 < lv <= 3.0


def test_translation_invariance(train_factory):
    generator = make_rng(11)
    for _ in range(1000):
        times = np.cumsum(generator.integers(1, 1000, 50))
        shifted = times + int(generator.integers(1, 10**9))
        lv = local_variation(train_factory(times)).lv
        assert local_variation(train_factory(shifted)).lv == pytest.approx(
            lv, rel=1e-12, abs=1e-15
        )


def test_scale_and_reversal_invariance():
    generator = make_rng(12)
    for _ in range(1000):
        intervals = generator.gamma(0.5, 2.0, 40) + 1e-6
        lv = lv_from_intervals(intervals)
        scale = float(generator.uniform(1e-3, 1e3))
        assert lv_from_intervals(intervals * scale) == pytest.approx(
            lv, rel=1e-12, abs=1e-15
        )
        assert lv_from_intervals(intervals[::-1]) == pytest.approx(
            lv, rel=1e-12, abs=1e-15
        )


def test_streaming_matches_two_pass():
    generator = make_rng(13)
    for _ in range(10_000):
        n = int(generator.integers(3, 60))
        times = np.cumsum(generator.exponential(1.0, n)).tolist()
        streamed = streaming_local_variation(times)
        expected = naive_lv(times)
        assert streamed.n_spikes == n
        assert streamed.lv == pytest.approx(expected, rel=1e-12, abs=1e-15)


def test_streaming_rejects_unordered_times():
    acc = StreamingLv()
    acc.push(1.0)

    with pytest.raises(exceptions.InvalidParameter):
        acc.push(1.0)
    with pytest.raises(exceptions.InvalidParameter):
        acc.push(0.5)


def test_streaming_needs_three_spikes():
    with pytest.raises(exceptions.UndefinedLocalVariation):
        streaming_local_variation([0.0, 1.0])


@pytest.mark.parametrize("kappa", KAPPAS)
def test_gamma_intervals_mean_lv(kappa):
    shape = GammaShape(kappa=kappa, xi=1.0)
    generator = make_rng(int(kappa * 100))
    gaps = generator.gamma(shape.kappa, shape.scale, (500, 999))
    values = np.array([lv_from_intervals(row) for row in gaps])
    se = values.std(ddof=1) / math.sqrt(len(values))

    assert abs(values.mean() - expected_lv_gamma(kappa)) < 3 * se


@pytest.mark.parametrize("kappa", KAPPAS)
def test_gamma_renewal_trains_mean_lv(kappa):
    values = np.array(
        [
            local_variation(
                gen_gamma_renewal(1.0, kappa, (0, 1000), seed=seed)
            ).lv
            for seed in range(500)
        ]
    )
    se = values.std(ddof=1) / math.sqrt(len(values))

    assert abs(values.mean() - expected_lv_gamma(kappa)) < 3 * se + 0.005


def test_expected_lv_gamma_targets():
    assert [expected_lv_gamma(k) for k in KAPPAS] == pytest.approx(
        [2.0, 1.5, 1.0, 0.6, 1 / 3]
    )
    with pytest.raises(exceptions.InvalidParameter):
        expected_lv_gamma(0)


def test_shape_from_lv():
    assert shape_from_lv(1.0) == pytest.approx(1.0)
    assert shape_from_lv(0.5) == pytest.approx(2.5)
    for kappa in KAPPAS:
        assert shape_from_lv(expected_lv_gamma(kappa)) == pytest.approx(kappa)


def test_shape_from_lv_degenerate_and_invalid():
    with pytest.raises(exceptions.DegenerateShape):
        shape_from_lv(3.0)
    with pytest.raises(exceptions.InvalidParameter):
        shape_from_lv(0.0)
    with pytest.raises(exceptions.InvalidParameter):
        shape_from_lv(3.5)


def test_coefficient_of_variation(train_factory):
    assert coefficient_of_variation(train_factory([0, 5, 10, 15])) == 0.0
    cv = coefficient_of_variation(train_factory([0, 1, 4]))

    assert cv == pytest.approx(0.5)


def test_split_half_of_regular_train(train_factory):
    first, second = split_half_lv(train_factory(np.arange(8) * 10))

    assert (first.lv, second.lv) == (0.0, 0.0)
    assert first.n_spikes == 4
    assert second.n_spikes == 4


def test_split_half_ignores_bridging_interval(train_factory):
    train = train_factory([0, 2, 4, 6, 8, 20, 21, 24, 25, 28])
    first, second = split_half_lv(train)

    assert first.lv == 0.0
    assert second.lv == pytest.approx(0.75)


def test_split_half_odd_length_puts_extra_spike_first(train_factory):
    first, second = split_half_lv(train_factory(np.arange(7)))

    assert first.n_spikes == 4
    assert second.n_spikes == 3


def test_split_half_too_short(train_factory):
    with pytest.raises(exceptions.TrainTooShort, match="too short to split"):
        split_half_lv(train_factory(np.arange(5)))


def test_split_half_of_bursty_trains():
    halves = np.array(
        [
            [half.lv for half in split_half_lv(train)]
            for train in (
                gen_gamma_renewal(1.0, 0.5, (0, 2000), seed)
                for seed in range(5)
            )
        ]
    )
    first, second = halves.mean(axis=0)

    assert first == pytest.approx(1.5, abs=0.1)
    assert second == pytest.approx(1.5, abs=0.1)
