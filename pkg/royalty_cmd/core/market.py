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
"""Market quote comparison.

Bid and ask prices are turned into LTM multipliers,
screened,
and set against the model's bottom decile,
median,
and top decile multipliers for the quote's dollar age and duration.
"""
import collections
import csv
import decimal
import enum
import logging

import attr
import pandas

from royalty_cmd.core import ingest, model

logger = logging.getLogger(__name__)

QUOTES_HEADER = (
    'asset_id', 'ltm', 'best_bid', 'ask', 'duration_years', 'dollar_age'
)
COMPARISON_HEADER = (
    'asset_id', 'duration', 'dollar_age', 'bid_multiplier', 'ask_multiplier',
    'model_m10', 'model_m50', 'model_m90', 'bid_gap_to_m10', 'ask_gap_to_m50'
)
PLOT_HEADER = (
    'axis_value', 'n', 'mean_bid_mult', 'mean_ask_mult', 'mean_m10',
    'mean_m50', 'mean_m90'
)
BANDS = (10, 50, 90)

#: Default minimum ratio of bid multiplier to ask multiplier.
DEFAULT_MIN_BID_ASK_RATIO = 0.5


class QuoteReason(enum.Enum):
    """Quote rejection reasons, in the order in which they are checked.
    """
    DURATION_TOO_LONG = 'DURATION_TOO_LONG'
    BID_TOO_LOW = 'BID_TOO_LOW'


def _money(value):
    return None if value is None else model.as_decimal(value)


def _optional_money(value):
    return None if value in (None, '') else model.as_decimal(value)


@attr.s(frozen=True)
class MarketQuote(object):
    """Observed bid and ask for one listed asset.
    """
    asset_id = attr.ib()
    #: Last twelve months revenue.
    ltm = attr.ib(converter=_money)
    #: Most recent bid, or :py:obj:`None`.
    best_bid = attr.ib(converter=_optional_money)
    #: Seller's "Buy Now" price.
    ask = attr.ib(converter=_money)
    #: Contract duration in years.
    duration_years = attr.ib(converter=int)
    #: Dollar age in years.
    dollar_age = attr.ib(converter=float)

    @ltm.validator
    def _check_ltm(self, attribute, value):
        if not value > 0:
            raise model.DomainError(
                'quote {} ltm must be > 0, got {}'.format(self.asset_id, value)
            )

    @best_bid.validator
    def _check_bid(self, attribute, value):
        if value is not None and value < 0:
            raise model.DomainError(
                'quote {} best_bid must be >= 0, got {}'.format(
                    self.asset_id, value
                )
            )

    @ask.validator
    def _check_ask(self, attribute, value):
        if not value > 0:
            raise model.DomainError(
                'quote {} ask must be > 0, got {}'.format(self.asset_id, value)
            )

    @duration_years.validator
    def _check_duration(self, attribute, value):
        if value < 1:
            raise model.DomainError(
                'quote {} duration must be >= 1, got {}'.format(
                    self.asset_id, value
                )
            )

    @dollar_age.validator
    def _check_dollar_age(self, attribute, value):
        if not value > 0:
            raise model.DomainError(
                'quote {} dollar_age must be > 0, got {}'.format(
                    self.asset_id, value
                )
            )


@attr.s(frozen=True)
class ComparisonRow(object):
    """One quote set against the model band for its age and duration.
    """
    asset_id = attr.ib()
    duration = attr.ib()
    dollar_age = attr.ib()
    bid_multiplier = attr.ib()
    ask_multiplier = attr.ib()
    model_m10 = attr.ib()
    model_m50 = attr.ib()
    model_m90 = attr.ib()

    @model_m90.validator
    def _check_band(self, attribute, value):
        if not self.model_m10 <= self.model_m50 <= value:
            raise model.DomainError(
                'model band for {} is not ordered: {}, {}, {}'.format(
                    self.asset_id, self.model_m10, self.model_m50, value
                )
            )

    @property
    def bid_gap_to_m10(self):
        if self.bid_multiplier is None:
            return None
        return self.bid_multiplier - self.model_m10

    @property
    def ask_gap_to_m50(self):
        return self.ask_multiplier - self.model_m50

    def as_tuple(self):
        return (
            self.asset_id, self.duration, self.dollar_age, self.bid_multiplier,
            self.ask_multiplier, self.model_m10, self.model_m50,
            self.model_m90, self.bid_gap_to_m10, self.ask_gap_to_m50
        )


@attr.s(frozen=True)
class PlotRow(object):
    """Group means behind a multiplier-versus-axis plot.
    """
    axis_value = attr.ib()
    n = attr.ib()
    mean_bid_mult = attr.ib()
    mean_ask_mult = attr.ib()
    mean_m10 = attr.ib()
    mean_m50 = attr.ib()
    mean_m90 = attr.ib()

    def as_tuple(self):
        return attr.astuple(self)


def parse_quotes(stream):
    """Parse a quotes CSV stream.

    An empty best_bid field means there is no bid.

    :param stream: Binary or text stream with the header
                   ``asset_id,ltm,best_bid,ask,duration_years,dollar_age``.

    :rtype: list of :py:class:`MarketQuote`

    :raises: :py:exc:`royalty_cmd.core.ingest.ParseError` naming the
             1-based line number of a malformed row.
    """
    quotes = []
    for line, fields in ingest._rows(stream, QUOTES_HEADER):
        asset_id, ltm, bid, ask, duration, dollar_age = fields
        try:
            quotes.append(
                MarketQuote(
                    asset_id=asset_id,
                    ltm=ingest._parse_decimal(line, 'ltm', ltm),
                    best_bid=(
                        ingest._parse_decimal(line, 'best_bid', bid)
                        if bid else None
                    ),
                    ask=ingest._parse_decimal(line, 'ask', ask),
                    duration_years=int(duration),
                    dollar_age=float(
                        ingest._parse_decimal(line, 'dollar_age', dollar_age)
                    ),
                )
            )
        except ValueError as e:
            if isinstance(e, ingest.ParseError):
                raise
            raise ingest.ParseError(line, str(e))
    return quotes


def write_quotes(quotes, stream):
    """Write quotes as quotes CSV to a text stream.

    Amounts are written with all their digits so that a read-back quote
    implies exactly the same multipliers.
    """
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(QUOTES_HEADER)
    for quote in sorted(quotes, key=lambda q: q.asset_id):
        writer.writerow((
            quote.asset_id,
            '{:f}'.format(quote.ltm),
            '' if quote.best_bid is None else '{:f}'.format(quote.best_bid),
            '{:f}'.format(quote.ask),
            quote.duration_years,
            repr(quote.dollar_age),
        ))


def _ratio(amount, ltm):
    return float(amount / ltm)


def implied_multipliers(quote):
    """Return the bid and ask multipliers of a quote.

    :param quote: Market quote.
    :type quote: :py:class:`MarketQuote`

    :returns: Bid multiplier (or :py:obj:`None` when there is no bid)
              and ask multiplier.
    :rtype: 2-tuple
    """
    if not quote.ltm > 0:
        raise model.DomainError(
            'quote {} ltm must be > 0, got {}'.format(
                quote.asset_id, quote.ltm
            )
        )
    bid = None if quote.best_bid is None else _ratio(quote.best_bid, quote.ltm)
    return bid, _ratio(quote.ask, quote.ltm)


def quote_reason(quote, max_duration, min_bid_ask_ratio):
    """Return the reason a quote is screened out,
    or :py:obj:`None` if it is kept.

    The bid test compares prices,
    which is the same as comparing multipliers because both share the
    quote's LTM denominator;
    prices are exact decimals so equality at the boundary is kept.
    """
    if quote.duration_years > max_duration:
        return QuoteReason.DURATION_TOO_LONG
    if quote.best_bid is not None:
        if quote.best_bid < model.as_decimal(min_bid_ask_ratio) * quote.ask:
            return QuoteReason.BID_TOO_LOW
    return None


def filter_quotes(
    quotes,
    max_duration=model.DEFAULT_MAX_DURATION,
    min_bid_ask_ratio=DEFAULT_MIN_BID_ASK_RATIO,
):
    """Screen quotes by duration and by bid relative to ask.

    :param quotes: Market quotes.

    :param int max_duration: Longest duration kept, >= 1.

    :param float min_bid_ask_ratio: Lowest bid multiplier kept,
                                    as a fraction of the ask multiplier.

    :returns: Kept quotes, and (quote, :py:class:`QuoteReason`) pairs for
              screened-out quotes, both in input order.
    :rtype: 2-tuple
    """
    if max_duration < 1:
        raise model.DomainError(
            'max_duration must be >= 1, got {}'.format(max_duration)
        )
    if not 0 <= min_bid_ask_ratio <= 1:
        raise model.DomainError(
            'min_bid_ask_ratio must be in [0, 1], got {}'.format(
                min_bid_ask_ratio
            )
        )
    accepted, rejected = [], []
    for quote in quotes:
        reason = quote_reason(quote, max_duration, min_bid_ask_ratio)
        if reason is None:
            accepted.append(quote)
        else:
            logger.debug('screened out {}: {}'.format(quote.asset_id, reason))
            rejected.append((quote, reason))
    return accepted, rejected


def round_half_up(value):
    """Round a year count to the nearest integer, halves up.
    """
    return int(
        model.as_decimal(value).quantize(
            decimal.Decimal(1), rounding=decimal.ROUND_HALF_UP
        )
    )


def base_age_for(dollar_age, available_ages):
    """Map a dollar age onto the base age of a surface.

    :param float dollar_age: Dollar age in years.

    :param available_ages: Base ages of the surfaces on hand.

    :returns: Dollar age rounded half up,
              clamped to the range of available_ages.
    :rtype: int
    """
    ages = sorted(available_ages)
    if not ages:
        raise model.DomainError('no share surfaces are available')
    return min(max(round_half_up(dollar_age), ages[0]), ages[-1])


def compare(quotes, surfaces, rate=model.DEFAULT_RATE):
    """Set each quote against the model band for its age and duration.

    :param quotes: Screened market quotes.

    :param dict surfaces: Share surfaces keyed by base age;
                          empty surfaces are ignored.

    :param float rate: Annual discount rate.

    :returns: Comparison rows in asset_id order,
              and (asset_id, message) error entries for quotes whose
              surface cannot support their duration.
    :rtype: 2-tuple
    """
    available = {
        t: surface for t, surface in surfaces.items() if not surface.is_empty()
    }
    for surface in available.values():
        missing = [band for band in BANDS if band not in surface.levels]
        if missing:
            raise model.DomainError(
                'comparison needs surface levels {}, base age {} has '
                '{}'.format(BANDS, surface.base_age, surface.levels)
            )
    rows, errors = [], []
    for quote in sorted(quotes, key=lambda q: q.asset_id):
        try:
            t = base_age_for(quote.dollar_age, available)
            surface = available.get(t)
            if surface is None:
                raise model.DomainError(
                    'no share surface for base age {}'.format(t)
                )
            table = model.multiplier_table(surface, rate, quote.duration_years)
        except model.DomainError as e:
            logger.debug('no model band for {}: {}'.format(quote.asset_id, e))
            errors.append((quote.asset_id, str(e)))
            continue
        bid, ask = implied_multipliers(quote)
        band = table.band(quote.duration_years)
        rows.append(
            ComparisonRow(
                asset_id=quote.asset_id,
                duration=quote.duration_years,
                dollar_age=quote.dollar_age,
                bid_multiplier=bid,
                ask_multiplier=ask,
                model_m10=band[10],
                model_m50=band[50],
                model_m90=band[90],
            )
        )
    return rows, errors


def aggregate_plot_data(rows, axis='duration'):
    """Average comparison rows by duration or by dollar age.

    Dollar ages are grouped by their nearest integer year,
    halves up.
    Bid means are over the rows that have a bid,
    and are :py:obj:`None` for groups without any.

    :param rows: Comparison rows.

    :param str axis: ``duration`` or ``dollar_age``.

    :returns: One row per group, ascending axis value.
    :rtype: list of :py:class:`PlotRow`
    """
    if axis not in ('duration', 'dollar_age'):
        raise model.DomainError(
            'axis must be duration or dollar_age, got {}'.format(axis)
        )
    if not rows:
        return []
    frame = pandas.DataFrame.from_records(
        [{
            'axis_value': (
                row.duration if axis == 'duration' else
                round_half_up(row.dollar_age)
            ),
            'bid': (
                float('nan') if row.bid_multiplier is None else
                row.bid_multiplier
            ),
            'ask': row.ask_multiplier,
            'm10': row.model_m10,
            'm50': row.model_m50,
            'm90': row.model_m90,
        } for row in rows]
    )
    grouped = frame.groupby('axis_value', sort=True).agg(
        n=('ask', 'size'),
        mean_bid_mult=('bid', 'mean'),
        mean_ask_mult=('ask', 'mean'),
        mean_m10=('m10', 'mean'),
        mean_m50=('m50', 'mean'),
        mean_m90=('m90', 'mean'),
    )
    return [
        PlotRow(
            axis_value=int(axis_value),
            n=int(group.n),
            mean_bid_mult=(
                None if pandas.isna(group.mean_bid_mult) else
                float(group.mean_bid_mult)
            ),
            mean_ask_mult=float(group.mean_ask_mult),
            mean_m10=float(group.mean_m10),
            mean_m50=float(group.mean_m50),
            mean_m90=float(group.mean_m90),
        ) for axis_value, group in grouped.iterrows()
    ]


def band_summary(rows):
    """Report which model band each side of the market sits closest to.

    :returns: For ``bid`` and ``ask``:
              the number of rows,
              the mean signed gap to each band,
              and the band with the smallest mean absolute gap.
    :rtype: :py:class:`collections.OrderedDict`
    """
    summary = collections.OrderedDict()
    for side, attribute in (('bid', 'bid_multiplier'),
                            ('ask', 'ask_multiplier')):
        pairs = [(getattr(row, attribute), row) for row in rows
                 if getattr(row, attribute) is not None]
        side_summary = collections.OrderedDict([('n', len(pairs))])
        if pairs:
            gaps = collections.OrderedDict()
            abs_gaps = {}
            for band in BANDS:
                diffs = [
                    value - getattr(row, 'model_m{}'.format(band))
                    for value, row in pairs
                ]
                gaps['m{}'.format(band)] = sum(diffs) / len(diffs)
                abs_gaps[band] = sum(abs(d) for d in diffs) / len(diffs)
            side_summary['mean_gap'] = gaps
            side_summary['nearest_band'] = 'm{}'.format(
                min(BANDS, key=lambda band: abs_gaps[band])
            )
        summary[side] = side_summary
    return summary
