# Copyright 2023 The Royalty-Cmd Contributors

# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at

#    http://www.apache.org/licenses/LICENSE-2.0

# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""royalty_cmd.core.model unit tests
"""
from decimal import Decimal

from hypothesis import given, strategies as st
import pytest

from royalty_cmd.core import model


def make_surface(shares_by_level, base_age=1):
    """Build a surface from level -> list of shares for horizons 1..n.
    """
    values = {}
    max_horizon = 0
    for level, shares in shares_by_level.items():
        for i, share in enumerate(shares, start=1):
            values[(i, level)] = share
        max_horizon = max(max_horizon, len(shares))
    return model.ShareSurface(
        base_age=base_age,
        levels=list(shares_by_level),
        max_horizon=max_horizon,
        values=values,
        counts={i: 5 for i in range(1, max_horizon + 1)},
    )


def annuity(rate, d):
    return (1 - (1 + rate)**-d) / rate


class TestDiscountFactor:
    """Unit tests for discount_factor function.
    """

    @pytest.mark.parametrize(
        'rate, year, expected', [
            (0.10, 1, 1 / 1.1),
            (0.0, 7, 1.0),
            (0.10, 10, 0.38554328942953164),
        ]
    )
    def test_discount_factor(self, rate, year, expected):
        assert model.discount_factor(rate, year) == pytest.approx(
            expected, rel=1e-12
        )

    @pytest.mark.parametrize(
        'rate, year', [
            (-0.01, 1),
            (float('nan'), 1),
            (float('inf'), 1),
            (0.10, 0),
        ]
    )
    def test_domain_error(self, rate, year):
        with pytest.raises(model.DomainError):
            model.discount_factor(rate, year)

    def test_discount_factors_match_scalar(self):
        factors = model.discount_factors(0.10, 10)
        assert len(factors) == 10
        for year, factor in enumerate(factors, start=1):
            assert factor == pytest.approx(
                model.discount_factor(0.10, year), rel=1e-15
            )


class TestMultiplierFromShares:
    """Unit tests for multiplier_from_shares function.
    """

    def test_zero_shares(self):
        assert model.multiplier_from_shares([0, 0, 0], 0.10) == 0.0

    def test_single_year(self):
        assert model.multiplier_from_shares([1.0], 0.10) == pytest.approx(
            0.9090909090909091, rel=1e-15
        )

    @pytest.mark.parametrize('d', range(1, 11))
    def test_annuity_oracle(self, d):
        multiplier = model.multiplier_from_shares([1.0] * d, 0.10)
        assert multiplier == pytest.approx(annuity(0.10, d), rel=1e-12)

    def test_ten_year_annuity(self):
        multiplier = model.multiplier_from_shares([1.0] * 10, 0.10)
        assert abs(multiplier - 6.14456711) <= 1e-8

    @pytest.mark.parametrize('d', [1, 5, 10, 30])
    def test_zero_rate_flat_shares(self, d):
        assert model.multiplier_from_shares([1.0] * d, 0.0) == d

    @pytest.mark.parametrize(
        'shares', [
            [],
            [1.0, -0.5],
            [1.0, float('nan')],
            [float('inf')],
        ]
    )
    def test_domain_error(self, shares):
        with pytest.raises(model.DomainError):
            model.multiplier_from_shares(shares, 0.10)

    def test_negative_rate(self):
        with pytest.raises(model.DomainError):
            model.multiplier_from_shares([1.0], -0.1)

    @given(
        shares=st.lists(
            st.floats(min_value=0, max_value=10, allow_subnormal=False),
            min_size=1,
            max_size=15,
        ),
        extra=st.floats(min_value=0, max_value=10, allow_subnormal=False),
        rate=st.floats(min_value=0, max_value=1),
    )
    def test_monotone_in_duration(self, shares, extra, rate):
        shorter = model.multiplier_from_shares(shares, rate)
        longer = model.multiplier_from_shares(shares + [extra], rate)
        assert longer >= shorter

    @given(
        shares=st.lists(
            st.one_of(
                st.just(0.0),
                st.floats(min_value=1e-6, max_value=10),
            ),
            min_size=1,
            max_size=15,
        ),
        low=st.floats(min_value=0, max_value=1),
        gap=st.one_of(st.just(0.0), st.floats(min_value=1e-6, max_value=1)),
    )
    def test_antitone_in_rate(self, shares, low, gap):
        high = low + gap
        at_low = model.multiplier_from_shares(shares, low)
        at_high = model.multiplier_from_shares(shares, high)
        if any(shares) and low < high:
            assert at_high < at_low
        else:
            assert at_high == at_low


class TestPrice:
    """Unit tests for price function.
    """

    @pytest.mark.parametrize(
        'multiplier, ltm, expected', [
            (0.0, 10000, 0.0),
            (1.0, 12345, 12345.0),
            (6.14456711, 10000, 61445.6711),
            (2.5, Decimal('100.00'), 250.0),
        ]
    )
    def test_price(self, multiplier, ltm, expected):
        assert model.price(multiplier, ltm) == pytest.approx(
            expected, rel=1e-12
        )

    def test_ltm_of_one_gives_multiplier(self):
        assert model.price(6.144567105704681, 1) == 6.144567105704681

    @pytest.mark.parametrize('ltm', [0, -100, Decimal('0.00')])
    def test_non_positive_ltm(self, ltm):
        with pytest.raises(model.DomainError):
            model.price(1.0, ltm)

    def test_negative_multiplier(self):
        with pytest.raises(model.DomainError):
            model.price(-1.0, 100)


class TestShareSurface:
    """Unit tests for ShareSurface class.
    """

    def test_levels_normalized_and_sorted(self):
        surface = make_surface({90.0: [1.0], 10: [0.5], 50: [0.8]})
        assert surface.levels == (10, 50, 90)
        assert surface.share(1, 90) == 1.0
        assert surface.share(1, 90.0) == 1.0

    def test_missing_cell(self):
        surface = make_surface({50: [1.0, 1.0]})
        with pytest.raises(model.MissingCellError) as exc_info:
            surface.share(3, 50)
        assert exc_info.value.horizon == 3
        assert exc_info.value.level == 50
        assert 'horizon 3 level 50' in str(exc_info.value)

    def test_shares(self):
        surface = make_surface({50: [0.9, 0.8, 0.7]})
        assert surface.shares(50, 2) == [0.9, 0.8]

    def test_populated_horizons(self):
        surface = model.ShareSurface(
            base_age=2,
            levels=[50],
            max_horizon=4,
            values={(1, 50): 1.0, (2, 50): 0.9},
            counts={1: 6, 2: 5, 3: 4, 4: 0},
        )
        assert surface.horizons == (1, 2, 3, 4)
        assert surface.populated_horizons == (1, 2)
        assert not surface.is_empty()

    def test_level_out_of_range(self):
        with pytest.raises(model.DomainError):
            make_surface({101: [1.0]})


class TestMultiplierTable:
    """Unit tests for multiplier_table function.
    """

    def test_all_zero_shares(self):
        surface = make_surface({10: [0.0] * 5, 50: [0.0] * 5, 90: [0.0] * 5})
        table = model.multiplier_table(surface, 0.10, 5)
        assert all(entry == 0 for entry in table.entries.values())

    def test_flat_unit_shares(self):
        surface = make_surface({
            10: [1.0] * 10,
            50: [1.0] * 10,
            90: [1.0] * 10
        })
        table = model.multiplier_table(surface, 0.10, 10)
        assert table.durations == tuple(range(1, 11))
        for d in table.durations:
            for level in table.levels:
                assert table.entry(d, level) == pytest.approx(
                    annuity(0.10, d), rel=1e-12
                )

    def test_linearity(self):
        shares = [1.2, 0.9, 0.7, 0.6, 0.55]
        surface = make_surface({
            50: shares,
            90: [2 * share for share in shares],
        })
        table = model.multiplier_table(surface, 0.10, 5)
        for d in table.durations:
            assert table.entry(d, 90) == pytest.approx(
                2 * table.entry(d, 50), rel=1e-12
            )

    def test_entry_is_prefix_multiplier(self):
        shares = [1.3, 0.4, 2.2, 0.01]
        surface = make_surface({50: shares})
        table = model.multiplier_table(surface, 0.07, 4)
        for d in range(1, 5):
            assert table.entry(d, 50) == model.multiplier_from_shares(
                shares[:d], 0.07
            )

    def test_first_missing_cell_named(self):
        surface = model.ShareSurface(
            base_age=3,
            levels=[10, 50, 90],
            max_horizon=3,
            values={
                (1, 10): 1.0, (1, 50): 1.0, (1, 90): 1.0,
                (2, 10): 1.0, (2, 90): 1.0,
            },
        )
        with pytest.raises(model.MissingCellError) as exc_info:
            model.multiplier_table(surface, 0.10, 3)
        assert (exc_info.value.horizon, exc_info.value.level) == (2, 50)
        assert exc_info.value.base_age == 3

    def test_band(self):
        surface = make_surface({10: [0.5], 50: [1.0], 90: [1.5]})
        table = model.multiplier_table(surface, 0.0, 1)
        assert table.band(1) == {10: 0.5, 50: 1.0, 90: 1.5}

    def test_bad_max_duration(self):
        surface = make_surface({50: [1.0]})
        with pytest.raises(model.DomainError):
            model.multiplier_table(surface, 0.10, 0)


class TestPriceBand:
    """Unit tests for price_band function.
    """

    def test_price_band(self):
        surface = make_surface({
            10: [1.0] * 10,
            50: [1.0] * 10,
            90: [1.0] * 10
        })
        table = model.multiplier_table(surface, 0.10, 10)
        band = model.price_band(table, 10, 10000)
        assert '{:.2f}'.format(band[50]) == '61445.67'
        assert set(band) == {10, 50, 90}


class TestAsset:
    """Unit tests for AnnualSeries and Asset classes.
    """

    def test_amount_at(self):
        series = model.AnnualSeries('A1', [Decimal(10), Decimal(5)])
        assert series.amount_at(1) == 10
        assert series.amount_at(2) == 5
        assert series.amount_at(0) is None
        assert series.amount_at(3) is None
        assert series.ltm == 5

    def test_empty_series(self):
        with pytest.raises(model.DomainError):
            model.AnnualSeries('A1', [])

    def test_non_positive_amount(self):
        series = model.AnnualSeries('A1', [Decimal(10), Decimal(0)])
        with pytest.raises(model.DomainError):
            model.Asset('A1', 2.0, series)

    @pytest.mark.parametrize(
        'dollar_age, expected', [
            (2.0, True),
            (2.6, True),
            (1.4, True),
            (2.61, False),
        ]
    )
    def test_within_tolerance(self, dollar_age, expected):
        series = model.AnnualSeries('A1', [Decimal(10), Decimal(5)])
        asset = model.Asset('A1', dollar_age, series)
        assert asset.within_tolerance(0.30) is expected

    def test_within_tolerance_uses_oldest_age(self):
        series = model.AnnualSeries('A1', [Decimal(10)])
        asset = model.Asset('A1', 2.49, series, oldest_age=23 / 12)
        assert asset.within_tolerance(0.30)
        assert not asset.within_tolerance(0.30, oldest_age=1.0)
        assert not model.Asset('A1', 2.49, series).within_tolerance(0.30)


class TestWithinMargin:
    """Unit tests for within_margin function.
    """

    @pytest.mark.parametrize(
        'value, reference, expected', [
            (7.0, 7.0, True),
            (9.1, 7.0, True),
            (4.9, 7.0, True),
            (10.0, 7.0, False),
            (9.100001, 7.0, False),
        ]
    )
    def test_within_margin(self, value, reference, expected):
        assert model.within_margin(value, reference, 0.30) is expected


class TestNormalizeLevel:
    """Unit tests for normalize_level function.
    """

    @pytest.mark.parametrize(
        'level, expected', [
            (90, 90),
            (90.0, 90),
            ('50', 50),
            (12.5, 12.5),
        ]
    )
    def test_normalize_level(self, level, expected):
        normalized = model.normalize_level(level)
        assert normalized == expected
        assert type(normalized) is type(expected)

    @pytest.mark.parametrize('level', [-1, 100.5])
    def test_out_of_range(self, level):
        with pytest.raises(model.DomainError):
            model.normalize_level(level)
