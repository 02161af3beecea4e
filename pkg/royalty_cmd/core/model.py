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
"""Core domain types and discounted cashflow arithmetic.

Revenue shares are converted into LTM multipliers by discounting them
at a fixed annual rate,
and multipliers into prices by scaling with the last twelve months
revenue.
"""
import decimal
import logging
import math

import attr
import numpy

logger = logging.getLogger(__name__)

#: Default annual discount rate.
DEFAULT_RATE = 0.10
#: Default percentile levels of a share surface.
DEFAULT_LEVELS = (10, 50, 90)
#: Default longest contract duration in years.
DEFAULT_MAX_DURATION = 10


class DomainError(ValueError):
    """Raised when an argument is outside the domain of an operation.
    """


class MissingCellError(DomainError):
    """Raised when a share surface lacks a (horizon, level) cell that a
    multiplier calculation needs.
    """

    def __init__(self, base_age, horizon, level):
        self.base_age = base_age
        self.horizon = horizon
        self.level = level
        super(MissingCellError, self).__init__(
            'share surface for base age {} has no cell at horizon {} '
            'level {}'.format(base_age, horizon, _format_level(level))
        )


def _format_level(level):
    return '{:g}'.format(level)


def normalize_level(level):
    """Return a percentile level as an int when it is integral,
    so that 90 and 90.0 key the same surface cell.

    :raises: :py:exc:`DomainError` if level is outside [0, 100].
    """
    level = float(level)
    if not 0 <= level <= 100:
        raise DomainError(
            'percentile level must be in [0, 100], got {}'.format(level)
        )
    return int(level) if level.is_integer() else level


def as_decimal(value):
    """Return value as the :py:class:`decimal.Decimal` of its shortest
    string form, so that 9.1 compares as 9.1 and not as its binary
    neighbour.
    """
    if isinstance(value, decimal.Decimal):
        return value
    return decimal.Decimal(str(value))


def within_margin(value, reference, tolerance):
    """Return :py:obj:`True` if value is within tolerance * reference of
    reference.

    The comparison is done in decimal arithmetic so that a deviation of
    exactly tolerance * reference is accepted.
    """
    value, reference, tolerance = (
        as_decimal(value), as_decimal(reference), as_decimal(tolerance)
    )
    return abs(value - reference) <= tolerance * reference


def _positive(instance, attribute, value):
    if not value > 0:
        raise DomainError(
            '{name} must be > 0, got {value}'.format(
                name=attribute.name, value=value
            )
        )


def _amounts_validator(instance, attribute, value):
    if not value:
        raise DomainError(
            'annual series for {} must have at least 1 amount'.format(
                instance.asset_id
            )
        )
    for amount in value:
        if not decimal.Decimal(amount).is_finite():
            raise DomainError(
                'annual series for {} has non-finite amount {}'.format(
                    instance.asset_id, amount
                )
            )


@attr.s(frozen=True)
class AnnualSeries(object):
    """Annual revenue of one asset indexed by song-age-year.

    ``amounts[k - 1]`` is the revenue during the asset's k-th year of life.
    Amounts are exact :py:class:`decimal.Decimal` values;
    they become floats only when shares are computed.
    """
    #: Asset identifier.
    asset_id = attr.ib()
    #: Annual amounts, oldest year first.
    amounts = attr.ib(converter=tuple, validator=_amounts_validator)

    def __len__(self):
        return len(self.amounts)

    def amount_at(self, age_year):
        """Return the revenue in song-age-year age_year (1-based),
        or :py:obj:`None` if the series does not reach that year.
        """
        if 1 <= age_year <= len(self.amounts):
            return self.amounts[age_year - 1]
        return None

    @property
    def ltm(self):
        """Revenue of the most recent complete year.
        """
        return self.amounts[-1]


@attr.s(frozen=True)
class Asset(object):
    """An accepted catalog item.
    """
    #: Asset identifier.
    asset_id = attr.ib()
    #: Value-weighted average age of the songs in the asset, in years.
    dollar_age = attr.ib(converter=float, validator=_positive)
    #: Annual revenue series.
    series = attr.ib(validator=attr.validators.instance_of(AnnualSeries))
    #: Age of the oldest cashflow in years, including any dropped trailing
    #: partial year; :py:obj:`None` when unknown.
    oldest_age = attr.ib(
        default=None, converter=attr.converters.optional(float)
    )

    @series.validator
    def _check_series(self, attribute, series):
        if any(amount <= 0 for amount in series.amounts):
            raise DomainError(
                'asset {} has non-positive annual revenue'.format(
                    self.asset_id
                )
            )

    def within_tolerance(self, tolerance, oldest_age=None):
        """Re-check the dollar age against the age of the oldest cashflow.

        :param float tolerance: Allowed deviation as a fraction of
                                oldest_age.

        :param float oldest_age: Age of the oldest cashflow in years;
                                 defaults to the asset's oldest_age,
                                 or the number of complete years in the
                                 series when that is unknown.

        :rtype: boolean
        """
        if oldest_age is None:
            oldest_age = self.oldest_age
        if oldest_age is None:
            oldest_age = len(self.series)
        return within_margin(self.dollar_age, oldest_age, tolerance)


@attr.s(frozen=True)
class ShareSurface(object):
    """Percentile revenue shares for one base age.

    ``values[(i, p)]`` is the level p percentile of the ratio of revenue
    in age-year t + i to revenue in age-year t,
    and ``counts[i]`` the number of assets in the horizon i cohort.
    """
    #: Base age t in years.
    base_age = attr.ib()
    #: Sorted percentile levels.
    levels = attr.ib(converter=lambda levels: tuple(
        sorted(normalize_level(level) for level in levels)
    ))
    #: Longest horizon considered.
    max_horizon = attr.ib()
    #: Mapping of (horizon, level) to share.
    values = attr.ib(factory=dict)
    #: Mapping of horizon to cohort size.
    counts = attr.ib(factory=dict)

    @property
    def horizons(self):
        return tuple(range(1, self.max_horizon + 1))

    def has_cell(self, horizon, level):
        return (horizon, normalize_level(level)) in self.values

    def share(self, horizon, level):
        """Return the share at (horizon, level).

        :raises: :py:exc:`MissingCellError` if the cell is absent.
        """
        try:
            return self.values[(horizon, normalize_level(level))]
        except KeyError:
            raise MissingCellError(self.base_age, horizon, level)

    def shares(self, level, duration):
        """Return the level shares for horizons 1 through duration.
        """
        return [self.share(i, level) for i in range(1, duration + 1)]

    @property
    def populated_horizons(self):
        """Horizons that carry cells, ascending.
        """
        return tuple(sorted({i for i, _ in self.values}))

    def is_empty(self):
        return not self.values


@attr.s(frozen=True)
class MultiplierTable(object):
    """LTM multipliers by contract duration and percentile level.
    """
    #: Base age t in years.
    base_age = attr.ib()
    #: Annual discount rate.
    discount_rate = attr.ib()
    #: Sorted percentile levels.
    levels = attr.ib(converter=tuple)
    #: Longest duration in the table.
    max_duration = attr.ib()
    #: Mapping of (duration, level) to multiplier.
    entries = attr.ib(factory=dict)

    def entry(self, duration, level):
        return self.entries[(duration, normalize_level(level))]

    @property
    def durations(self):
        return tuple(range(1, self.max_duration + 1))

    def band(self, duration):
        """Return the multipliers for duration as a level-keyed dict.
        """
        return {level: self.entry(duration, level) for level in self.levels}


def discount_factor(rate, year):
    """Return the present value of 1 paid at the end of year.

    :param float rate: Annual discount rate, >= 0.

    :param int year: Number of years, >= 1.

    :returns: 1 / (1 + rate) ** year
    :rtype: float

    :raises: :py:exc:`DomainError`
    """
    _check_rate(rate)
    if year < 1:
        raise DomainError('year must be >= 1, got {}'.format(year))
    return 1.0 / (1.0 + rate)**year


def discount_factors(rate, years):
    """Return the discount factors for years 1 through years as an array.
    """
    _check_rate(rate)
    return 1.0 / (1.0 + rate)**numpy.arange(1, years + 1, dtype=numpy.float64)


def _check_rate(rate):
    if not (math.isfinite(rate) and rate >= 0):
        raise DomainError(
            'discount rate must be finite and >= 0, got {}'.format(rate)
        )


def multiplier_from_shares(shares, rate=DEFAULT_RATE):
    """Return the LTM multiplier justified by a sequence of revenue shares.

    The sum of shares[i] / (1 + rate) ** i over i = 1..d is accumulated
    in ascending i with :py:func:`math.fsum` so that the result is
    correctly rounded and identical across runs and platforms.

    :param shares: Revenue shares for years 1 through d.
    :type shares: sequence of float

    :param float rate: Annual discount rate.

    :rtype: float

    :raises: :py:exc:`DomainError`
    """
    shares = numpy.asarray(shares, dtype=numpy.float64)
    if shares.ndim != 1 or shares.size < 1:
        raise DomainError('at least 1 share is required')
    if not numpy.all(numpy.isfinite(shares)):
        raise DomainError('shares must be finite')
    if numpy.any(shares < 0):
        raise DomainError('shares must be >= 0')
    terms = shares * discount_factors(rate, shares.size)
    return math.fsum(terms.tolist())


def price(multiplier, ltm):
    """Return the price implied by a multiplier of LTM revenue.

    :param float multiplier: LTM multiplier, >= 0.

    :param ltm: Last twelve months revenue, > 0.
    :type ltm: float or :py:class:`decimal.Decimal`

    :rtype: float

    :raises: :py:exc:`DomainError`
    """
    if not ltm > 0:
        raise DomainError('LTM revenue must be > 0, got {}'.format(ltm))
    if not multiplier >= 0:
        raise DomainError('multiplier must be >= 0, got {}'.format(multiplier))
    return float(multiplier) * float(ltm)


def multiplier_table(surface, rate=DEFAULT_RATE,
                     max_duration=DEFAULT_MAX_DURATION):
    """Compute the multipliers of every surface level for durations
    1 through max_duration.

    Each entry is recomputed from its own prefix of shares,
    so entry (d, p) is exactly
    ``multiplier_from_shares(surface.shares(p, d), rate)``.

    :param surface: Revenue share surface.
    :type surface: :py:class:`ShareSurface`

    :param float rate: Annual discount rate.

    :param int max_duration: Longest contract duration.

    :rtype: :py:class:`MultiplierTable`

    :raises: :py:exc:`MissingCellError` naming the first absent cell
             in (horizon, level) order.
    """
    _check_rate(rate)
    if max_duration < 1:
        raise DomainError(
            'max_duration must be >= 1, got {}'.format(max_duration)
        )
    for horizon in range(1, max_duration + 1):
        for level in surface.levels:
            if not surface.has_cell(horizon, level):
                raise MissingCellError(surface.base_age, horizon, level)
    entries = {}
    for level in surface.levels:
        shares = surface.shares(level, max_duration)
        for duration in range(1, max_duration + 1):
            entries[(duration, level)] = multiplier_from_shares(
                shares[:duration], rate
            )
    return MultiplierTable(
        base_age=surface.base_age,
        discount_rate=rate,
        levels=surface.levels,
        max_duration=max_duration,
        entries=entries,
    )


def price_band(table, duration, ltm):
    """Return the price at every level of table for a contract duration.

    :param table: Multiplier table.
    :type table: :py:class:`MultiplierTable`

    :param int duration: Contract duration in years.

    :param ltm: Last twelve months revenue.

    :returns: Prices keyed by percentile level.
    :rtype: dict
    """
    return {
        level: price(multiplier, ltm)
        for level, multiplier in table.band(duration).items()
    }
