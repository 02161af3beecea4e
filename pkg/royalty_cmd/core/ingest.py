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
"""Cashflow and asset file ingestion.

Raw monthly or quarterly cashflows are annualized forward from the first
covered month,
and assets are accepted or rejected by a fixed sequence of checks:
field validation,
annualization,
zero revenue years,
and agreement of the dollar age with the age of the oldest cashflow.
"""
from concurrent.futures import ThreadPoolExecutor
import collections
import csv
import decimal
import enum
import io
import logging
import re

import arrow
import attr

from royalty_cmd.core import model

logger = logging.getLogger(__name__)

CASHFLOWS_HEADER = ('asset_id', 'period_start', 'period_months', 'amount')
ASSETS_HEADER = ('asset_id', 'dollar_age')
REPORT_HEADER = ('asset_id', 'status', 'reason')

#: Default relative tolerance between dollar age and oldest cashflow age.
DEFAULT_TOLERANCE = 0.30
#: Default annual revenue floor at or below which an asset is rejected.
DEFAULT_ZERO_FLOOR = decimal.Decimal('0')

PERIODS = (1, 3)
CENT = decimal.Decimal('0.01')
_PERIOD_RE = re.compile(r'^\d{4}-\d{2}$')


class Reason(enum.Enum):
    """Asset rejection reasons, in the order in which they are checked.
    """
    NEGATIVE_AMOUNT = 'NEGATIVE_AMOUNT'
    GAP_IN_HISTORY = 'GAP_IN_HISTORY'
    INSUFFICIENT_HISTORY = 'INSUFFICIENT_HISTORY'
    ZERO_REVENUE_YEAR = 'ZERO_REVENUE_YEAR'
    DOLLAR_AGE_MISMATCH = 'DOLLAR_AGE_MISMATCH'


class IngestError(model.DomainError):
    """Raised for input data that cannot be turned into raw assets.
    """


class ParseError(IngestError):
    """Raised for a malformed row in an input file.
    """

    def __init__(self, line, message, reason=None):
        self.line = line
        self.reason = reason
        prefix = 'line {}'.format(line)
        if reason is not None:
            prefix = '{} {}'.format(prefix, reason.value)
        super(ParseError, self).__init__('{}: {}'.format(prefix, message))


class FilterError(IngestError):
    """Raised when an asset fails one of the acceptance checks.
    """

    def __init__(self, reason, message):
        self.reason = reason
        super(FilterError, self).__init__(
            '{}: {}'.format(reason.value, message)
        )


def _month_index(period_start):
    return period_start.year * 12 + period_start.month - 1


@attr.s(frozen=True)
class CashflowRecord(object):
    """One dated revenue observation for one asset.
    """
    #: Asset identifier.
    asset_id = attr.ib()
    #: First month of the period, as an :py:class:`arrow.Arrow`.
    period_start = attr.ib()
    #: Length of the period in months; 1 or 3.
    period_months = attr.ib(validator=attr.validators.in_(PERIODS))
    #: Revenue for the period.
    amount = attr.ib(converter=decimal.Decimal)

    @amount.validator
    def _check_amount(self, attribute, value):
        if not value.is_finite():
            raise model.DomainError(
                'amount for {} must be finite'.format(self.asset_id)
            )

    @property
    def first_month(self):
        """Absolute month number of the first covered month.
        """
        return _month_index(self.period_start)

    @property
    def end_month(self):
        """Absolute month number just past the last covered month.
        """
        return self.first_month + self.period_months


@attr.s(frozen=True)
class RawAsset(object):
    """An asset as read from the input files, before filtering.
    """
    #: Asset identifier.
    asset_id = attr.ib()
    #: Value-weighted age of the asset's songs, in years.
    dollar_age = attr.ib(converter=float, validator=model._positive)
    #: Cashflow records sorted by period start.
    records = attr.ib(converter=tuple)

    @records.validator
    def _check_records(self, attribute, records):
        if not records:
            raise IngestError(
                'asset {} has no cashflow records'.format(self.asset_id)
            )
        for prev, record in zip(records, records[1:]):
            if record.first_month < prev.end_month:
                raise IngestError(
                    'asset {} has overlapping or unsorted records at '
                    '{}'.format(
                        self.asset_id, record.period_start.format('YYYY-MM')
                    )
                )


@attr.s
class FilterReport(object):
    """Acceptance status of every input asset.
    """
    #: Mapping of asset_id to :py:class:`Reason`,
    #: or :py:obj:`None` for accepted assets.
    outcomes = attr.ib(factory=dict)

    def record(self, asset_id, reason=None):
        if asset_id in self.outcomes:
            raise IngestError('asset {} reported twice'.format(asset_id))
        self.outcomes[asset_id] = reason

    @property
    def accepted(self):
        return sorted(
            a for a, reason in self.outcomes.items() if reason is None
        )

    @property
    def rejected(self):
        return sorted(
            a for a, reason in self.outcomes.items() if reason is not None
        )

    def counts(self):
        """Return the number of rejections for every reason,
        in check order.
        """
        counter = collections.Counter(
            reason for reason in self.outcomes.values() if reason is not None
        )
        return collections.OrderedDict(
            (reason.value, counter[reason]) for reason in Reason
        )

    def rows(self):
        """Return (asset_id, status, reason) rows in asset_id order.
        """
        return [(
            asset_id,
            'accepted' if self.outcomes[asset_id] is None else 'rejected',
            '' if self.outcomes[asset_id] is None else
            self.outcomes[asset_id].value,
        ) for asset_id in sorted(self.outcomes)]

    def summary(self):
        return collections.OrderedDict([
            ('assets', len(self.outcomes)),
            ('accepted', len(self.accepted)),
            ('rejected', len(self.rejected)),
            ('reasons', self.counts()),
        ])


def _text_lines(stream):
    """Wrap a binary stream for the csv module.

    UTF-8 with an optional byte order mark; LF or CRLF line endings.
    """
    if isinstance(stream, io.TextIOBase):
        return stream
    return io.TextIOWrapper(stream, encoding='utf-8-sig', newline='')


def _rows(stream, header):
    """Yield (line number, fields) for the data rows of a CSV stream
    after checking its header.
    """
    reader = csv.reader(_text_lines(stream))
    try:
        first = next(reader)
    except StopIteration:
        raise ParseError(1, 'missing header {}'.format(','.join(header)))
    if tuple(field.strip() for field in first) != header:
        raise ParseError(
            1, 'expected header {}, got {}'.format(
                ','.join(header), ','.join(first)
            )
        )
    for fields in reader:
        if not fields or all(not field.strip() for field in fields):
            continue
        if len(fields) != len(header):
            raise ParseError(
                reader.line_num,
                'expected {} fields, got {}'.format(len(header), len(fields))
            )
        yield reader.line_num, [field.strip() for field in fields]


def _parse_decimal(line, name, text):
    try:
        value = decimal.Decimal(text)
    except decimal.InvalidOperation:
        raise ParseError(line, '{} {!r} is not a number'.format(name, text))
    if not value.is_finite():
        raise ParseError(line, '{} {!r} is not finite'.format(name, text))
    return value


def parse_period(text, line=None):
    """Parse a ``YYYY-MM`` period start into an :py:class:`arrow.Arrow`.
    """
    if not _PERIOD_RE.match(text):
        raise ParseError(
            line, 'period_start {!r} is not YYYY-MM'.format(text)
        )
    try:
        return arrow.get(text, 'YYYY-MM')
    except (arrow.parser.ParserError, ValueError):
        raise ParseError(
            line, 'period_start {!r} is not a calendar month'.format(text)
        )


def parse_cashflows(stream):
    """Parse a cashflows CSV stream into cashflow records.

    :param stream: Binary or text stream with the header
                   ``asset_id,period_start,period_months,amount``.

    :returns: Records in the order read.
    :rtype: list of :py:class:`CashflowRecord`

    :raises: :py:exc:`ParseError` naming the 1-based line number of a
             malformed row,
             an unknown frequency,
             a negative amount,
             or a duplicated (asset_id, period_start).
    """
    records = []
    seen = set()
    for line, (asset_id, period, months, amount) in _rows(
        stream, CASHFLOWS_HEADER
    ):
        if not asset_id:
            raise ParseError(line, 'empty asset_id')
        period_start = parse_period(period, line)
        try:
            period_months = int(months)
        except ValueError:
            raise ParseError(
                line, 'period_months {!r} is not an integer'.format(months)
            )
        if period_months not in PERIODS:
            raise ParseError(
                line, 'unknown frequency: period_months {}'.format(
                    period_months
                )
            )
        value = _parse_decimal(line, 'amount', amount)
        if value.as_tuple().exponent < -2:
            raise ParseError(
                line, 'amount {!r} has more than 2 fractional digits'.format(
                    amount
                )
            )
        if value < 0:
            raise ParseError(
                line, 'amount {} is negative'.format(amount),
                Reason.NEGATIVE_AMOUNT
            )
        key = (asset_id, period)
        if key in seen:
            raise ParseError(
                line, 'duplicate record for {} at {}'.format(asset_id, period)
            )
        seen.add(key)
        records.append(
            CashflowRecord(asset_id, period_start, period_months, value)
        )
    return records


def parse_assets(stream):
    """Parse an assets CSV stream into a mapping of dollar ages.

    :param stream: Binary or text stream with the header
                   ``asset_id,dollar_age``.

    :returns: Dollar age in years keyed by asset_id.
    :rtype: dict

    :raises: :py:exc:`ParseError`
    """
    dollar_ages = {}
    for line, (asset_id, dollar_age) in _rows(stream, ASSETS_HEADER):
        if not asset_id:
            raise ParseError(line, 'empty asset_id')
        if asset_id in dollar_ages:
            raise ParseError(line, 'duplicate asset_id {}'.format(asset_id))
        value = _parse_decimal(line, 'dollar_age', dollar_age)
        if value <= 0:
            raise ParseError(
                line, 'dollar_age must be > 0, got {}'.format(dollar_age)
            )
        dollar_ages[asset_id] = float(value)
    return dollar_ages


def assemble_raw_assets(records, dollar_ages):
    """Group cashflow records by asset and attach dollar ages.

    :param records: Parsed cashflow records.

    :param dict dollar_ages: Dollar ages keyed by asset_id.

    :returns: Raw assets in asset_id order.
    :rtype: list of :py:class:`RawAsset`

    :raises: :py:exc:`IngestError` if a cashflow asset has no dollar age,
             or if an asset's records overlap.
    """
    by_asset = collections.defaultdict(list)
    for record in records:
        by_asset[record.asset_id].append(record)
    missing = sorted(set(by_asset) - set(dollar_ages))
    if missing:
        raise IngestError(
            'no dollar_age for asset(s): {}'.format(', '.join(missing))
        )
    for asset_id in sorted(set(dollar_ages) - set(by_asset)):
        logger.warning(
            'asset {} has a dollar_age but no cashflows; skipped'.format(
                asset_id
            )
        )
    return [
        RawAsset(
            asset_id, dollar_ages[asset_id],
            sorted(by_asset[asset_id], key=lambda r: r.first_month)
        ) for asset_id in sorted(by_asset)
    ]


def oldest_cashflow_age(records):
    """Return the age in years of the oldest cashflow.

    That is the number of months from the first period start to the end
    of the last covered period,
    divided by 12.

    :param records: Cashflow records sorted by period start.

    :rtype: float

    :raises: :py:exc:`DomainError` if records is empty.
    """
    if not records:
        raise model.DomainError('at least 1 cashflow record is required')
    return (records[-1].end_month - records[0].first_month) / 12


def annualize(records, asset_id=None):
    """Sum one asset's cashflows into annual buckets.

    Buckets run forward from the first covered month,
    so bucket k is song-age-year k.
    A record belongs to the bucket holding its first month.
    A trailing partial bucket of fewer than 12 covered months is dropped.

    :param records: One asset's records, sorted and non-overlapping.

    :param asset_id: Identifier for the series;
                     defaults to the records' asset_id.

    :rtype: :py:class:`royalty_cmd.core.model.AnnualSeries`

    :raises: :py:exc:`FilterError` with :py:attr:`Reason.GAP_IN_HISTORY`
             or :py:attr:`Reason.INSUFFICIENT_HISTORY`.
    """
    if not records:
        raise FilterError(Reason.INSUFFICIENT_HISTORY, 'no records')
    asset_id = records[0].asset_id if asset_id is None else asset_id
    for prev, record in zip(records, records[1:]):
        if record.first_month != prev.end_month:
            raise FilterError(
                Reason.GAP_IN_HISTORY,
                '{} has no coverage between {} and {}'.format(
                    asset_id, prev.period_start.format('YYYY-MM'),
                    record.period_start.format('YYYY-MM')
                )
            )
    origin = records[0].first_month
    coverage = records[-1].end_month - origin
    n_years = coverage // 12
    if n_years < 1:
        raise FilterError(
            Reason.INSUFFICIENT_HISTORY,
            '{} covers only {} months'.format(asset_id, coverage)
        )
    buckets = [decimal.Decimal(0)] * n_years
    for record in records:
        k = (record.first_month - origin) // 12
        if k < n_years:
            buckets[k] += record.amount
    return model.AnnualSeries(asset_id, buckets)


def filter_zero_years(series, zero_floor=DEFAULT_ZERO_FLOOR):
    """Return :py:obj:`True` if no annual amount is at or below
    zero_floor.

    :param series: Annual revenue series.
    :type series: :py:class:`royalty_cmd.core.model.AnnualSeries`

    :param zero_floor: Revenue floor, >= 0.

    :rtype: boolean
    """
    zero_floor = model.as_decimal(zero_floor)
    return all(amount > zero_floor for amount in series.amounts)


def filter_dollar_age(dollar_age, oldest_age, tolerance=DEFAULT_TOLERANCE):
    """Return :py:obj:`True` if dollar_age is within tolerance * oldest_age
    of oldest_age.

    A deviation exactly at the margin is accepted.

    :param float dollar_age: Asset dollar age in years.

    :param float oldest_age: Age of the oldest cashflow in years, > 0.

    :param float tolerance: Allowed relative deviation, >= 0.

    :rtype: boolean
    """
    if not oldest_age > 0:
        raise model.DomainError(
            'oldest cashflow age must be > 0, got {}'.format(oldest_age)
        )
    if tolerance < 0:
        raise model.DomainError(
            'tolerance must be >= 0, got {}'.format(tolerance)
        )
    return model.within_margin(dollar_age, oldest_age, tolerance)


def check_asset(
    raw_asset, zero_floor=DEFAULT_ZERO_FLOOR, tolerance=DEFAULT_TOLERANCE
):
    """Run the acceptance checks on one raw asset.

    :returns: The accepted asset.
    :rtype: :py:class:`royalty_cmd.core.model.Asset`

    :raises: :py:exc:`FilterError` for the first check that fails.
    """
    negatives = [r for r in raw_asset.records if r.amount < 0]
    if negatives:
        raise FilterError(
            Reason.NEGATIVE_AMOUNT,
            '{} has a negative amount at {}'.format(
                raw_asset.asset_id,
                negatives[0].period_start.format('YYYY-MM')
            )
        )
    series = annualize(raw_asset.records, raw_asset.asset_id)
    if not filter_zero_years(series, zero_floor):
        raise FilterError(
            Reason.ZERO_REVENUE_YEAR,
            '{} has a year with revenue <= {}'.format(
                raw_asset.asset_id, zero_floor
            )
        )
    oldest_age = oldest_cashflow_age(raw_asset.records)
    if not filter_dollar_age(raw_asset.dollar_age, oldest_age, tolerance):
        raise FilterError(
            Reason.DOLLAR_AGE_MISMATCH,
            '{} dollar age {} is not within {:.0%} of {:.4f}'.format(
                raw_asset.asset_id, raw_asset.dollar_age, tolerance,
                oldest_age
            )
        )
    return model.Asset(
        raw_asset.asset_id, raw_asset.dollar_age, series, oldest_age
    )


def _outcome(raw_asset, zero_floor, tolerance):
    try:
        return check_asset(raw_asset, zero_floor, tolerance), None
    except FilterError as e:
        logger.debug('rejected {}'.format(e))
        return None, e.reason


def build_dataset(
    raw_assets,
    zero_floor=DEFAULT_ZERO_FLOOR,
    tolerance=DEFAULT_TOLERANCE,
    max_workers=1,
):
    """Filter raw assets into an accepted dataset and a report.

    Checks run in the order field validation,
    annualization,
    zero revenue years,
    dollar age;
    the first failure is the asset's rejection reason.

    :param raw_assets: Assets to check.
    :type raw_assets: sequence of :py:class:`RawAsset`

    :param zero_floor: Annual revenue floor.

    :param float tolerance: Dollar age tolerance.

    :param int max_workers: Number of threads to check assets with.

    :returns: Accepted assets in asset_id order, and the filter report.
    :rtype: 2-tuple
    """
    raw_assets = sorted(raw_assets, key=lambda a: a.asset_id)
    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            outcomes = list(
                executor.map(
                    lambda a: _outcome(a, zero_floor, tolerance), raw_assets
                )
            )
    else:
        outcomes = [_outcome(a, zero_floor, tolerance) for a in raw_assets]
    report = FilterReport()
    dataset = []
    for raw_asset, (asset, reason) in zip(raw_assets, outcomes):
        report.record(raw_asset.asset_id, reason)
        if asset is not None:
            dataset.append(asset)
    logger.debug(
        '{} of {} assets accepted'.format(len(dataset), len(raw_assets))
    )
    return dataset, report


def monthly_records(asset_id, annual_amounts, start='2000-01'):
    """Split annual amounts into monthly cashflow records.

    Each month gets the annual amount / 12 rounded down to the cent,
    and the 12th month also gets the remainder,
    so that the records annualize back to exactly annual_amounts.

    :param asset_id: Asset identifier.

    :param annual_amounts: Annual amounts with at most 2 fractional digits.

    :param str start: First period start as ``YYYY-MM``.

    :rtype: list of :py:class:`CashflowRecord`
    """
    month = parse_period(start)
    records = []
    for annual in annual_amounts:
        annual = model.as_decimal(annual)
        monthly = (annual / 12).quantize(CENT, rounding=decimal.ROUND_DOWN)
        for k in range(12):
            amount = monthly if k < 11 else annual - 11 * monthly
            records.append(CashflowRecord(asset_id, month, 1, amount))
            month = month.shift(months=+1)
    return records


def write_cashflows(raw_assets, stream):
    """Write raw assets' records as cashflows CSV to a text stream.
    """
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(CASHFLOWS_HEADER)
    for raw_asset in sorted(raw_assets, key=lambda a: a.asset_id):
        for record in raw_asset.records:
            writer.writerow((
                record.asset_id,
                record.period_start.format('YYYY-MM'),
                record.period_months,
                '{:f}'.format(record.amount),
            ))


def write_assets(raw_assets, stream):
    """Write raw assets' dollar ages as assets CSV to a text stream.
    """
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(ASSETS_HEADER)
    for raw_asset in sorted(raw_assets, key=lambda a: a.asset_id):
        writer.writerow((raw_asset.asset_id, repr(raw_asset.dollar_age)))


def to_raw_asset(asset, start='2000-01'):
    """Re-serialize an accepted asset to raw form with monthly records.

    The months of a trailing partial year dropped by annualization are
    written back as zero amount records,
    so that the raw asset keeps the oldest cashflow age it was accepted
    with.
    """
    records = monthly_records(asset.asset_id, asset.series.amounts, start)
    if asset.oldest_age is not None:
        partial = round(asset.oldest_age * 12) - len(records)
        month = parse_period(start).shift(months=+len(records))
        for k in range(max(partial, 0)):
            records.append(
                CashflowRecord(
                    asset.asset_id, month.shift(months=+k), 1,
                    decimal.Decimal(0)
                )
            )
    return RawAsset(asset.asset_id, asset.dollar_age, records)
