import math
from datetime import date, timedelta

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from benfordscope.ingest import PriceSeries
from benfordscope.series import (
    IndivisibleLength,
    ReturnSeries,
    TooFewValues,
    aligned_returns,
    describe,
    filter_for_digits,
    log_returns,
    normalize_sign,
    partition_prices,
    partition_returns,
    roman,
)


def prices_from(closes, label="P"):
    start = date(2000, 1, 3)
    return PriceSeries([start + timedelta(days=i) for i in range(len(closes))], closes, label)


def test_log_return_of_identical_prices_is_flagged_zero():
    r = log_returns(prices_from([100.0, 100.0]))
    assert list(r.values) == [0.0]
    assert list(r.zero_flags) == [True]
    assert r.zero_count == 1


def test_log_return_definition():
    r = log_returns(prices_from([100.0, 100.0 * math.e]))
    assert r.values[0] == pytest.approx(1.0, abs=1e-15)
    assert not r.zero_flags.any()


def test_partition_prices():
    part = partition_prices(prices_from(list(np.arange(1.0, 11.0))), 5)
    assert [len(s) for s in part.subsets] == [2] * 5
    assert part.boundaries == (2, 4, 6, 8, 10)
    assert [s.label for s in part.subsets] == ["CV_I", "CV_II", "CV_III", "CV_IV", "CV_V"]
    with pytest.raises(IndivisibleLength):
        partition_prices(prices_from(list(np.arange(1.0, 12.0))), 5)


def test_partition_returns_smallest_case():
    r = log_returns(prices_from(list(np.arange(1.0, 11.0))))
    part = partition_returns(r, 5)
    assert [len(s) for s in part.subsets] == [1] * 5
    assert part.dropped == (1, 3, 5, 7)
    # subset j holds the return inside price segment j
    np.testing.assert_allclose([s.values[0] for s in part.subsets], np.log([2 / 1, 4 / 3, 6 / 5, 8 / 7, 10 / 9]))
    with pytest.raises(IndivisibleLength):
        partition_returns(log_returns(prices_from(list(np.arange(1.0, 12.0)))), 5)


def test_fixture_partition(synthetic_csv, golden):
    from benfordscope.ingest import parse_csv

    prices = parse_csv(synthetic_csv)
    part = partition_prices(prices, 5)
    assert part.boundaries == (3253, 6506, 9759, 13012, 16265)
    r = log_returns(prices)
    assert len(r) == 16264
    lr = partition_returns(r, 5)
    assert [len(s) for s in lr.subsets] == [3252] * 5
    zeros = [int(s.zero_flags.sum()) for s in lr.subsets]
    assert zeros == [golden["zero_counts"][f"LR_{roman(i)}"] for i in range(1, 6)]
    assert sum(zeros) == int(aligned_returns(r, 5).zero_flags.sum())
    assert len(aligned_returns(r, 5)) == 16260


def test_filter_for_digits():
    r = ReturnSeries.from_values([-0.01, 0.0, 0.02])
    pos = filter_for_digits(r, "positive")
    assert list(pos.values) == [0.02] and pos.zero_count == 1 and pos.sign_filter == "positive"
    neg = filter_for_digits(r, "neg")
    assert list(neg.values) == [-0.01]
    both = filter_for_digits(r, "all")
    assert list(both.values) == [-0.01, 0.02] and both.n == 2
    assert filter_for_digits(pos, "all").zero_count == 1


def test_sign_aliases():
    assert normalize_sign("pos") == "positive"
    with pytest.raises(ValueError):
        normalize_sign("up")


def test_return_series_invariants():
    with pytest.raises(ValueError):
        ReturnSeries(np.array([0.0, 1.0]), np.array([False, False]))
    with pytest.raises(ValueError):
        ReturnSeries(np.array([-1.0]), np.array([False]), sign_filter="positive")


def test_describe_matches_oracle():
    rng = np.random.default_rng(3)
    x = rng.lognormal(size=500)
    got = describe(x).as_dict()
    want = oracle.moments(list(x))
    for key, value in want.items():
        assert got[key] == pytest.approx(value, rel=1e-10), key


def test_describe_constant_and_short():
    d = describe([1, 1, 1, 1])
    assert d.std_dev == 0 and d.skewness is None and d.excess_kurtosis is None
    assert d.total == 4
    with pytest.raises(TooFewValues):
        describe([1.0])


def test_describe_excess_kurtosis_convention():
    # uniform sample: excess kurtosis near -1.2; normal: near 0
    rng = np.random.default_rng(0)
    assert describe(rng.uniform(size=200_000)).excess_kurtosis == pytest.approx(-1.2, abs=0.02)
    assert describe(rng.standard_normal(200_000)).excess_kurtosis == pytest.approx(0.0, abs=0.05)


@settings(max_examples=300)
@given(st.integers(min_value=1, max_value=6), st.integers(min_value=2, max_value=12), st.data())
def test_partition_concatenation_and_zero_conservation(k, size, data):
    ints = data.draw(st.lists(st.integers(min_value=1, max_value=5), min_size=k * size, max_size=k * size))
    p = prices_from([float(v) for v in ints])
    part = partition_prices(p, k)
    np.testing.assert_array_equal(np.concatenate([s.closes for s in part.subsets]), p.closes)
    assert sum(len(s.dates) for s in part.subsets) == len(p)
    r = log_returns(p)
    lr = partition_returns(r, k)
    kept = np.concatenate([s.values for s in lr.subsets])
    np.testing.assert_array_equal(np.delete(r.values, list(lr.dropped)), kept)
    assert sum(int(s.zero_flags.sum()) for s in lr.subsets) == int(aligned_returns(r, k).zero_flags.sum())


def test_single_price_subsets_rejected():
    with pytest.raises(IndivisibleLength):
        partition_prices(prices_from([1.0, 2.0, 3.0]), 3)


@given(st.lists(st.sampled_from([-0.5, -0.01, 0.0, 0.003, 0.2]), max_size=80))
def test_sign_split_conserves_counts(values):
    r = ReturnSeries.from_values(values)
    pos, neg = filter_for_digits(r, "positive"), filter_for_digits(r, "negative")
    assert pos.n + neg.n + pos.zero_count == len(values)
    assert pos.zero_count == neg.zero_count == r.zero_count


@given(st.lists(st.floats(min_value=-1e3, max_value=1e3, allow_nan=False), min_size=4, max_size=40), st.randoms())
def test_describe_permutation_invariant(values, rnd):
    a = describe(values)
    shuffled = list(values)
    rnd.shuffle(shuffled)
    b = describe(shuffled)
    assert a.min == b.min and a.max == b.max and a.count == b.count
    assert a.min <= a.mean <= a.max
    assert a.std_dev >= 0
    assert b.mean == pytest.approx(a.mean, rel=1e-9, abs=1e-9)
    assert b.std_dev == pytest.approx(a.std_dev, rel=1e-9, abs=1e-9)


def test_describe_subnormal_spread_has_no_shape_moments():
    d = describe([1e-160, 2e-160, 7e-160, 3e-160])
    assert d.std_dev > 0
    assert d.skewness is None and d.excess_kurtosis is None
