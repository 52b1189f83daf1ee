import random
from decimal import Decimal

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from benfordscope.digits import (
    DigitCensus,
    census,
    extract,
    pair_codes,
    round_significant,
    round_significant_decimal,
)

finite_nonzero = st.floats(min_value=1e-300, max_value=1e300, allow_nan=False, allow_infinity=False)


@pytest.mark.parametrize(
    "x,sig,expected",
    [
        (1992.44, 5, 1992.4),
        (0.0, 5, 0.0),
        (0.0999996, 5, 0.1),
        (-0.0999996, 5, -0.1),
        (1.00005, 5, 1.0001),  # tie on the decimal text rounds away from zero
        (-1.00005, 5, -1.0001),
        (2.5, 1, 3.0),
        (99999.5, 5, 100000.0),
        (16.66, 5, 16.66),
    ],
)
def test_round_significant(x, sig, expected):
    assert round_significant(x, sig) == expected


def test_round_significant_changes_first_digit():
    assert extract(round_significant(0.0999996, 5)).d1 == 1
    assert str(round_significant_decimal(0.0999996, 5)) == "0.10000"


def test_round_significant_rejects_bad_sig():
    with pytest.raises(ValueError):
        round_significant(1.0, 0)


@pytest.mark.parametrize(
    "x,d1,d2,d12",
    [
        (16.66, 1, 6, 16),
        (0.04544, 4, 5, 45),
        (-0.2290, 2, 2, 22),
        (0.002, 2, 0, 20),
        (1e-05, 1, 0, 10),
        (123456789.0, 1, 2, 12),
        ("0.0450", 4, 5, 45),
        (Decimal("-7.3E+4"), 7, 3, 73),
    ],
)
def test_extract(x, d1, d2, d12):
    got = extract(x)
    assert (got.d1, got.d2, got.d12) == (d1, d2, d12)
    assert not got.is_zero


def test_extract_zero():
    z = extract(0.0)
    assert z.is_zero and z.d1 == 0 and z.d2 == 0 and z.d12 is None
    assert extract(-0.0).is_zero


def test_extract_non_finite():
    with pytest.raises(ValueError):
        extract(float("nan"))
    with pytest.raises(ValueError):
        pair_codes([1.0, float("inf")])


@given(finite_nonzero, st.booleans())
def test_sign_and_scale_invariance(x, negate):
    y = -x if negate else x
    base = extract(round_significant(x))
    assert extract(round_significant(y)) == base
    assert extract(round_significant_decimal(x) * 10) == base


@given(st.lists(st.floats(min_value=-1e6, max_value=1e6, allow_nan=False), max_size=50))
def test_pair_codes_match_scalar_path(values):
    codes = pair_codes(values)
    for v, c in zip(values, codes):
        expected = extract(round_significant(v)).d12
        assert c == (0 if expected is None else expected)


def test_pair_codes_tie_and_boundary_cases():
    # Ties and decade edges where binary floats misbehave.
    values = [1.00005, 0.000100005, 9.99995, 99999.5, 0.3, 1e-300, 5e-324, 1.7976931348623157e308, 999995.0, 0.0]
    expected = [extract(round_significant_decimal(v)).d12 or 0 for v in values]
    assert list(pair_codes(values)) == expected


def test_pair_codes_without_rounding():
    assert list(pair_codes([0.0999996, 0.0], sig=None)) == [99, 0]
    assert list(pair_codes([0.0999996], sig=5)) == [10]


def test_pair_codes_match_oracle_on_random_decimals():
    rng = random.Random(7)
    values = [rng.uniform(-1, 1) * 10 ** rng.randint(-8, 8) for _ in range(20000)]
    values += [round(v, rng.randint(0, 6)) for v in values[:5000]]
    codes = pair_codes(values)
    for v, c in zip(values, codes):
        d12 = oracle.walk_digits(v, 5)[2]
        assert c == (d12 or 0), v


def test_census_examples():
    c = census([16.66, 0.04544, -0.2290, 0.0, 0.002])
    assert c.n == 4 and c.zeros == 1
    assert c.first[0] == 1 and c.first[3] == 1 and c.first[1] == 2
    assert c.first_two[16 - 10] == 1 and c.first_two[20 - 10] == 1


def test_empty_census():
    c = census([])
    assert c.n == 0 and c.zeros == 0
    assert not c.first.any() and not c.second.any() and not c.first_two.any()


@given(st.lists(st.floats(min_value=-1e9, max_value=1e9, allow_nan=False), max_size=60))
def test_census_invariants(values):
    c = census(values)
    grid = c.first_two.reshape(9, 10)
    np.testing.assert_array_equal(grid.sum(axis=1), c.first)
    np.testing.assert_array_equal(grid.sum(axis=0), c.second)
    assert c.first.sum() == c.second.sum() == c.first_two.sum() == c.n
    assert c.n + c.zeros == len(values)


@settings(max_examples=200)
@given(st.lists(st.floats(min_value=-1e9, max_value=1e9, allow_nan=False), max_size=40),
       st.lists(st.floats(min_value=-1e9, max_value=1e9, allow_nan=False), max_size=40))
def test_census_additivity(a, b):
    assert census(a + b) == census(a) + census(b)


def test_census_dict_round_trip():
    c = census([1.5, 2.25, 0.0, 987.0, 0.011])
    assert DigitCensus.from_dict(c.to_dict()) == c
    assert c.to_dict()["first"]["1"] == 2
