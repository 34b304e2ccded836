import math

import numpy as np
import pytest

from spikelv import exceptions
from spikelv.core import default_scheme, scheme_from_edges
from spikelv.rng import make_rng
from spikelv.schema import (
    Corpus,
    GeneratorGroup,
    HistKind,
    IngestReport,
    LvRow,
    PopularityClass,
    SpikeTrain,
    SynthSpec,
)
from spikelv.stats import (
    activity_series,
    class_lv_summary,
    coverage,
    interval_histogram,
    ks_exponential,
    log_edges,
    loglog_slope,
    lv_pdf,
    lv_table,
    multiplicity_summary,
    pearson,
    popularity_pdf,
    split_half_correlation,
    zipf_table,
)
from spikelv.synthetic import gen_corpus, gen_gamma_renewal, gen_poisson

ALL = PopularityClass(label="p1+", lo=1)


def popularity_corpus(p_values) -> Corpus:
    """One spike per tag carrying all of its p occurrences"""
    trains = {
        f"tag{k:06d}": SpikeTrain(
            tag=f"tag{k:06d}", times=[0], counts=[int(p)]
        )
        for k, p in enumerate(p_values)
    }

    return Corpus(trains=trains, window=(0, 1))


def test_activity_series_covers_window(corpus_factory):
    corpus = corpus_factory(
        {"a": ([0, 59, 60], [2, 1, 1]), "b": [119, 120]}, window=(0, 120)
    )
    series = activity_series(corpus, 60)

    assert series.counts == [3, 2, 1]
    assert series.edges == [0, 60, 120, 180]
    assert series.total == corpus.report.accepted


def test_activity_series_of_empty_corpus():
    series = activity_series(Corpus(window=(0, 599)), 60)

    assert series.counts == [0] * 10


def test_zipf_table_ranks_and_shares(corpus_factory):
    corpus = corpus_factory(
        {
            "b": [1, 2, 3],
            "a": ([1], [3]),
            "c": [5],
            "d": [1, 2, 3, 4, 5, 6],
        },
        window=(0, 10),
    )
    table = zipf_table(corpus)

    assert [(r.rank, r.tag, r.p_raw) for r in table.rows] == [
        (1, "d", 6),
        (2, "a", 3),
        (3, "b", 3),
        (4, "c", 1),
    ]
    assert table.share_p1 == 0.25
    assert table.share_p_lt5 == 0.75


def test_zipf_table_of_empty_corpus():
    table = zipf_table(Corpus(window=(0, 1)))

    assert table.n_tags == 0
    assert table.share_p1 is None


def test_log_edges_hold_integers():
    edges = log_edges(1000, 5)

    assert edges[0] == 1
    assert edges[-1] > 1000
    assert np.all(np.diff(edges) >= 1)
    assert edges[:5].tolist() == [1, 2, 3, 4, 7]


def test_popularity_pdf_is_normalized():
    hist = popularity_pdf(popularity_corpus([1, 1, 2, 3, 10, 250]), 5)

    assert hist.n == 6
    assert sum(hist.counts) == 6
    assert np.sum(hist.probabilities()) == pytest.approx(1.0)


def test_popularity_pdf_of_empty_corpus():
    with pytest.raises(exceptions.EmptyCorpus):
        popularity_pdf(Corpus(window=(0, 1)))


def test_power_law_popularity():
    draws = make_rng(17).zipf(2.0, 100_000)
    corpus = popularity_corpus(draws)
    hist = popularity_pdf(corpus, 5)
    table = zipf_table(corpus)

    assert loglog_slope(hist, min_count=50) == pytest.approx(-2.0, abs=0.15)
    assert table.share_p1 == pytest.approx(np.mean(draws == 1), abs=1e-12)
    assert table.share_p_lt5 == pytest.approx(np.mean(draws < 5), abs=1e-12)
    assert table.share_p1 == pytest.approx(6 / math.pi**2, abs=0.01)
    assert table.share_p_lt5 == pytest.approx(
        (1 + 1 / 4 + 1 / 9 + 1 / 16) * 6 / math.pi**2, abs=0.01
    )


def test_interval_histogram_pdf_and_cdf(corpus_factory):
    corpus = corpus_factory({"a": [0, 1, 3, 13], "b": [5, 6]}, window=(0, 20))
    pdf = interval_histogram(corpus, ALL, 5, HistKind.pdf)
    cdf = interval_histogram(corpus, ALL, 5, HistKind.cdf)

    # intervals 1, 2, 10, 1
    assert pdf.edges == [0.0, 5.0, 10.0, 15.0]
    assert pdf.counts == [3, 0, 1]
    assert np.sum(pdf.probabilities()) == pytest.approx(1.0)
    assert cdf.mass == pytest.approx([0.75, 0.75, 1.0])


def test_interval_histogram_drops_unit_interval(corpus_factory):
    corpus = corpus_factory({"a": [0, 1, 3, 13], "b": [5, 6]}, window=(0, 20))
    hist = interval_histogram(corpus, ALL, 5, drop_unit_interval=True)

    assert hist.n == 2


def test_interval_histogram_of_class_without_intervals(corpus_factory):
    corpus = corpus_factory({"a": [3], "b": [1, 5]}, window=(0, 10))
    pclass = PopularityClass(label="p1", lo=1, hi=2)
    hist = interval_histogram(corpus, pclass, 60)

    assert hist.is_empty
    assert hist.flag == "empty"


def test_poisson_intervals_pass_ks():
    train = gen_poisson(0.5, (0, 20_000), seed=8)
    statistic, pvalue = ks_exponential(np.diff(train.times), 0.5)

    assert pvalue > 0.01
    assert statistic < 0.05


def test_bursty_intervals_fail_ks():
    train = gen_gamma_renewal(0.5, 0.3, (0, 20_000), seed=8)
    _, pvalue = ks_exponential(np.diff(train.times), 0.5)

    assert pvalue < 1e-6


def test_lv_table_rows(corpus_factory):
    corpus = corpus_factory(
        {"a": [0, 1, 4], "b": [0, 2], "c": np.arange(10) * 3}, window=(0, 30)
    )
    rows = {row.tag: row for row in lv_table(corpus, default_scheme())}

    assert rows["a"].lv == pytest.approx(0.75)
    assert rows["a"].label == "p2-4"
    assert rows["b"].lv is None
    assert rows["b"].cv is None
    assert rows["c"].lv == 0.0
    assert rows["c"].label == "p5-49"


def test_lv_pdf_clamps_upper_edge():
    rows = [
        LvRow(tag="a", label="p1+", p_raw=3, n_spikes=3, lv=3.0),
        LvRow(tag="b", label="p1+", p_raw=3, n_spikes=3, lv=0.0),
        LvRow(tag="c", label="p1+", p_raw=3, n_spikes=3, lv=1.05),
        LvRow(tag="d", label="p1+", p_raw=2, n_spikes=2),
    ]
    hist = lv_pdf(rows, ALL, 0.1)

    assert len(hist.counts) == 30
    assert hist.counts[0] == 1
    assert hist.counts[10] == 1
    assert hist.counts[-1] == 1
    assert hist.n == 3
    assert np.sum(hist.probabilities()) == pytest.approx(1.0)


def test_class_summary_flags(corpus_factory):
    corpus = corpus_factory(
        {
            "a": [0, 1, 4],
            "b": [0, 5, 10, 15, 20],
            "c": [0, 2, 4, 6, 8],
            "d": [1],
        },
        window=(0, 30),
    )
    scheme = scheme_from_edges([1, 2, 5, 100])
    summaries = {s.pclass.label: s for s in class_lv_summary(corpus, scheme)}

    assert summaries["p1"].flag == "empty"
    assert summaries["p1"].n_trains == 1
    assert summaries["p2-4"].flag == "too_few"
    assert summaries["p2-4"].mu_lv == pytest.approx(0.75)
    assert summaries["p5-99"].flag == "zero_variance"
    assert summaries["p5-99"].sigma_lv == 0.0
    assert summaries["p100+"].n_trains == 0
    assert summaries["p100+"].mean_p is None


def test_class_summary_z_score(corpus_factory):
    corpus = corpus_factory(
        {"a": [0, 1, 4], "b": [0, 1, 2, 4], "c": [0, 3, 4]}, window=(0, 10)
    )
    summary = class_lv_summary(corpus, scheme_from_edges([1, 3, 5]))[1]
    values = [0.75, 1.5 * (1 / 9), 0.75]
    mu = np.mean(values)
    sigma = np.std(values, ddof=1)

    assert summary.n == 3
    assert summary.mu_lv == pytest.approx(mu)
    assert summary.sigma_lv == pytest.approx(sigma)
    assert summary.z == pytest.approx((mu - 1) * math.sqrt(3) / sigma)
    assert summary.flag is None


def test_poisson_corpus_class_mean_near_one():
    spec = SynthSpec(
        window=(0, 1000),
        seed=4,
        groups=[GeneratorGroup(kind="poisson", count=1000, xi=1.0)],
    )
    corpus, _ = gen_corpus(spec, workers=4)
    summary = class_lv_summary(corpus, scheme_from_edges([1, 500, 2000]))[1]

    assert summary.n == 1000
    assert 0.99 <= summary.mu_lv <= 1.01
    assert abs(summary.z) < 4


def test_pearson():
    assert pearson([1, 2, 3], [2, 4, 6]) == pytest.approx(1.0)
    assert pearson([1, 2, 3], [3, 2, 1]) == pytest.approx(-1.0)
    with pytest.raises(exceptions.DegenerateCorrelation):
        pearson([1, 1, 1], [1, 2, 3])
    with pytest.raises(exceptions.InvalidParameter):
        pearson([1], [2])


def test_split_half_correlation_of_mixed_shapes():
    groups = [
        GeneratorGroup(
            kind="gamma", count=100, xi=1.0, kappa=kappa, prefix=f"k{k}"
        )
        for k, kappa in enumerate([0.25, 0.5, 1.0, 2.0, 4.0])
    ]
    spec = SynthSpec(window=(0, 300), seed=1, groups=groups)
    corpus, _ = gen_corpus(spec, 4)
    rows = split_half_correlation(corpus, scheme_from_edges([1, 50, 1000]))

    populated = [row for row in rows if row.n_pairs >= 20]
    assert populated
    for row in populated:
        assert row.r > 0.5


def test_split_half_correlation_of_poisson_trains():
    spec = SynthSpec(
        window=(0, 200),
        seed=2,
        groups=[GeneratorGroup(kind="poisson", count=2000, xi=1.0)],
    )
    corpus, _ = gen_corpus(spec, workers=4)
    row = split_half_correlation(corpus, scheme_from_edges([1, 50, 1000]))[1]

    assert row.n_pairs == 2000
    assert abs(row.r) < 0.1


def test_split_half_correlation_flags(corpus_factory):
    corpus = corpus_factory(
        {"a": np.arange(6), "b": np.arange(8) * 2}, window=(0, 20)
    )
    rows = split_half_correlation(corpus, scheme_from_edges([1, 6, 7]))

    assert rows[0].flag == "empty"
    assert rows[1].flag == "too_few"
    assert rows[1].n_pairs == 1


def test_split_half_zero_variance(corpus_factory):
    corpus = corpus_factory(
        {"a": np.arange(6), "b": np.arange(6) * 2}, window=(0, 20)
    )
    row = split_half_correlation(corpus, scheme_from_edges([1, 6]))[1]

    assert row.flag == "zero_variance"
    assert row.r is None


def test_multiplicity_summary_and_coverage(corpus_factory):
    corpus = corpus_factory(
        {"a": ([1, 2], [4, 1]), "b": [2, 3]}, window=(0, 9)
    )

    assert multiplicity_summary(corpus) == {
        "tags_with_repeats": 1,
        "max_multiplicity": 4,
    }
    assert coverage(corpus) == {
        "active_seconds": 3,
        "window_seconds": 10,
        "share": 0.3,
    }


def test_empty_corpus_report_helpers():
    corpus = Corpus(window=(0, 9), report=IngestReport())

    assert multiplicity_summary(corpus)["max_multiplicity"] == 0
    assert coverage(corpus)["active_seconds"] == 0


def test_activity_series_bins(corpus_factory):
    corpus = corpus_factory({"a": [0, 30, 61]}, window=(0, 61))

    assert activity_series(corpus, 60).counts == [2, 1]
    with pytest.raises(exceptions.InvalidParameter):
        activity_series(corpus, 0)


def test_activity_of_periodic_corpus_peaks_at_period():
    spec = SynthSpec(
        window=(0, 20 * 3600),
        seed=6,
        quantize=True,
        groups=[
            GeneratorGroup(
                kind="nonstationary",
                count=50,
                xi=0.05,
                amplitude=0.8,
                period=3600,
            )
        ],
    )
    corpus, _ = gen_corpus(spec)
    counts = np.asarray(activity_series(corpus, 60).counts, dtype=float)
    centered = counts - counts.mean()
    lags = np.arange(30, 91)
    autocorr = [np.dot(centered[:-lag], centered[lag:]) for lag in lags]

    assert abs(lags[int(np.argmax(autocorr))] - 60) <= 3


def test_regular_intervals_fall_in_one_bin(corpus_factory):
    corpus = corpus_factory({"a": [0, 60, 120, 180]}, window=(0, 200))
    hist = interval_histogram(corpus, ALL, 60)

    assert hist.counts == [0, 3]
    assert hist.edges == [0.0, 60.0, 120.0]
    assert hist.probabilities().tolist() == pytest.approx([0.0, 1.0])


def test_popularity_pdf_two_tags():
    hist = popularity_pdf(popularity_corpus([1, 1000]), 5)

    assert sum(1 for count in hist.counts if count) == 2


def test_pooled_poisson_intervals_are_exponential():
    spec = SynthSpec(
        window=(0, 100_000),
        seed=12,
        groups=[GeneratorGroup(kind="poisson", count=20, xi=0.002)],
    )
    corpus, _ = gen_corpus(spec)
    intervals = np.concatenate(
        [np.diff(t.times) for t in corpus.trains.values()]
    )
    _, pvalue = ks_exponential(intervals, 0.002)

    assert pvalue > 0.01


def test_pearson_properties():
    generator = make_rng(21)
    x = generator.uniform(size=10_000)
    y = generator.uniform(size=10_000)
    r = pearson(x, y)

    assert abs(r) < 0.05
    assert pearson(y, x) == pytest.approx(r, abs=1e-15)
    assert pearson(3 * x + 7, y / 2 - 1) == pytest.approx(r, abs=1e-12)
