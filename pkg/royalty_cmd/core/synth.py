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
"""Deterministic synthetic catalogs and market quotes.

Annual revenue of a synthetic asset grows geometrically at a constant
rate with optional log-normal noise,
so share surfaces and multipliers have closed forms to check against.

Random numbers come from numpy's PCG64 bit generator.
Normal draws use the inverse normal CDF of uniforms built from 52 random
bits, (k + 0.5) / 2**52, which are exact and never 0 or 1.
Each asset's generator is seeded by a
:py:class:`numpy.random.SeedSequence` of the master seed with the asset's
index as spawn key,
so output does not depend on the number of worker threads.
"""
from concurrent.futures import ThreadPoolExecutor
import decimal
import logging
import math
import numbers

import attr
import numpy
from scipy import stats

from royalty_cmd.core import ingest, market, model

logger = logging.getLogger(__name__)

_UNIFORM_BITS = 2**52


class SpecError(model.DomainError):
    """Raised for an invalid population spec field.
    """

    def __init__(self, field, message):
        self.field = field
        super(SpecError, self).__init__('{}: {}'.format(field, message))


@attr.s(frozen=True)
class GroupSpec(object):
    """A group of identically distributed synthetic assets.
    """
    #: Number of assets, >= 1.
    count = attr.ib()
    #: Annual revenue growth rate, > -1.
    annual_growth = attr.ib()
    #: Standard deviation of the log revenue noise, >= 0.
    noise_sigma = attr.ib()
    #: Age in years, >= 2.
    age_years = attr.ib()
    #: First year revenue, > 0.
    initial_revenue = attr.ib()


@attr.s(frozen=True)
class QuoteSpec(object):
    """Settings for generating market quotes.
    """
    bid_level = attr.ib(default=10)
    ask_level = attr.ib(default=50)
    noise = attr.ib(default=0.05)
    rate = attr.ib(default=model.DEFAULT_RATE)
    max_duration = attr.ib(default=model.DEFAULT_MAX_DURATION)


@attr.s(frozen=True)
class PopulationSpec(object):
    """Groups of synthetic assets and the master seed.
    """
    groups = attr.ib(converter=tuple)
    seed = attr.ib()
    quotes = attr.ib(factory=QuoteSpec)


def _is_int(value):
    return isinstance(value, numbers.Integral) and not isinstance(value, bool)


def _is_real(value):
    return (
        isinstance(value, numbers.Real) and not isinstance(value, bool)
        and math.isfinite(value)
    )


def _require(mapping, key, field):
    try:
        return mapping[key]
    except (KeyError, TypeError):
        raise SpecError(field, 'is required')


def _check_keys(mapping, allowed, prefix):
    if not isinstance(mapping, dict):
        raise SpecError(prefix or 'spec', 'must be a mapping')
    unknown = sorted(set(mapping) - set(allowed))
    if unknown:
        raise SpecError(
            '{}{}'.format(prefix + '.' if prefix else '', unknown[0]),
            'unknown field'
        )


def _load_group(data, k):
    prefix = 'groups[{}]'.format(k)
    fields = (
        'count', 'annual_growth', 'noise_sigma', 'age_years',
        'initial_revenue'
    )
    _check_keys(data, fields, prefix)
    values = {
        name: _require(data, name, '{}.{}'.format(prefix, name))
        for name in fields
    }
    checks = (
        ('count', _is_int, lambda v: v >= 1, 'must be an integer >= 1'),
        ('annual_growth', _is_real, lambda v: v > -1, 'must be a number > -1'),
        ('noise_sigma', _is_real, lambda v: v >= 0, 'must be a number >= 0'),
        ('age_years', _is_int, lambda v: v >= 2, 'must be an integer >= 2'),
        ('initial_revenue', _is_real, lambda v: v > 0, 'must be a number > 0'),
    )
    for name, type_check, range_check, message in checks:
        value = values[name]
        if not (type_check(value) and range_check(value)):
            raise SpecError('{}.{}'.format(prefix, name), message)
    return GroupSpec(**values)


def _load_quotes(data):
    fields = attr.fields_dict(QuoteSpec)
    _check_keys(data, fields, 'quotes')
    spec = QuoteSpec(**data)
    for name in ('bid_level', 'ask_level'):
        if getattr(spec, name) not in market.BANDS:
            raise SpecError(
                'quotes.{}'.format(name),
                'must be one of {}'.format(market.BANDS)
            )
    if not (_is_real(spec.noise) and 0 <= spec.noise < 1):
        raise SpecError('quotes.noise', 'must be a number in [0, 1)')
    if not (_is_real(spec.rate) and spec.rate >= 0):
        raise SpecError('quotes.rate', 'must be a number >= 0')
    if not (_is_int(spec.max_duration) and spec.max_duration >= 1):
        raise SpecError('quotes.max_duration', 'must be an integer >= 1')
    return spec


def load_population_spec(data):
    """Validate a population spec mapping,
    as read from its JSON file.

    :param dict data: Mapping with ``groups``, ``seed``,
                      and optionally ``quotes``.

    :rtype: :py:class:`PopulationSpec`

    :raises: :py:exc:`SpecError` naming the offending field.
    """
    _check_keys(data, ('groups', 'seed', 'quotes'), '')
    groups = _require(data, 'groups', 'groups')
    if not isinstance(groups, list) or not groups:
        raise SpecError('groups', 'must be a non-empty list')
    seed = _require(data, 'seed', 'seed')
    if not (_is_int(seed) and 0 <= seed < 2**64):
        raise SpecError('seed', 'must be a 64-bit unsigned integer')
    quotes = _load_quotes(data.get('quotes', {}))
    return PopulationSpec(
        groups=[_load_group(group, k) for k, group in enumerate(groups)],
        seed=seed,
        quotes=quotes,
    )


def _generator(seed):
    return numpy.random.Generator(numpy.random.PCG64(seed))


def normal_draws(seed, n):
    """Return n standard normal draws by inverse CDF.

    :param seed: Integer seed or :py:class:`numpy.random.SeedSequence`.

    :rtype: :py:class:`numpy.ndarray`
    """
    ticks = _generator(seed).integers(0, _UNIFORM_BITS, size=n)
    return stats.norm.ppf((ticks + 0.5) / _UNIFORM_BITS)


def annual_amounts(seed, age_years, initial, g, sigma):
    """Return the rounded annual revenue of a synthetic asset.

    C_k = initial * (1 + g) ** (k - 1) * exp(sigma * z_k) for
    k = 1..age_years, rounded half even to the cent.
    """
    if sigma > 0:
        shocks = sigma * normal_draws(seed, age_years)
    else:
        shocks = numpy.zeros(age_years)
    amounts = []
    for k in range(age_years):
        value = initial * (1 + g)**k * math.exp(shocks[k])
        amounts.append(
            decimal.Decimal(repr(float(value))).quantize(
                ingest.CENT, rounding=decimal.ROUND_HALF_EVEN
            )
        )
    return amounts


def gen_asset(
    seed, age_years, initial, g, sigma, asset_id='S00001', start='2000-01'
):
    """Generate one synthetic raw asset with monthly records.

    Each annual total is split uniformly over 12 months,
    with the remainder cents in the 12th month.
    The dollar age is age_years exactly.

    :param seed: Integer seed or :py:class:`numpy.random.SeedSequence`.

    :param int age_years: Years of history, >= 2.

    :param float initial: First year revenue, > 0.

    :param float g: Annual growth rate, > -1.

    :param float sigma: Log revenue noise standard deviation, >= 0.

    :rtype: :py:class:`royalty_cmd.core.ingest.RawAsset`
    """
    amounts = annual_amounts(seed, age_years, initial, g, sigma)
    return ingest.RawAsset(
        asset_id, float(age_years),
        ingest.monthly_records(asset_id, amounts, start)
    )


def asset_seed(master_seed, index):
    """Return the seed sequence of the index-th asset of a population.
    """
    return numpy.random.SeedSequence(master_seed, spawn_key=(index,))


def generate_population(spec, max_workers=1):
    """Generate the raw assets of a population spec.

    Asset ids are S00001, S00002, ... in group order.

    :param spec: Population spec.
    :type spec: :py:class:`PopulationSpec`

    :param int max_workers: Number of threads to generate assets with.

    :rtype: list of :py:class:`royalty_cmd.core.ingest.RawAsset`
    """
    jobs = []
    for group in spec.groups:
        for _ in range(group.count):
            jobs.append((len(jobs), group))

    def _gen(job):
        index, group = job
        return gen_asset(
            asset_seed(spec.seed, index),
            group.age_years,
            group.initial_revenue,
            group.annual_growth,
            group.noise_sigma,
            asset_id='S{:05d}'.format(index + 1),
        )

    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            return list(executor.map(_gen, jobs))
    return [_gen(job) for job in jobs]


def closed_form_multiplier(g, r, d):
    """Return the multiplier of geometric shares (1 + g) ** i discounted
    at rate r over d years.

    With q = (1 + g) / (1 + r) the sum is q * (1 - q ** d) / (1 - q),
    or d when q is 1.
    """
    q = (1 + g) / (1 + r)
    if abs(q - 1) <= 1e-12:
        return float(d)
    return q * (1 - q**d) / (1 - q)


def _usable_duration(surface, max_duration):
    """Longest duration up to max_duration for which surface has every
    level at every horizon.
    """
    duration = 0
    while duration < max_duration and all(
        surface.has_cell(duration + 1, level) for level in surface.levels
    ):
        duration += 1
    return duration


def gen_quotes(
    dataset,
    surfaces,
    rate=model.DEFAULT_RATE,
    bid_level=10,
    ask_level=50,
    seed=0,
    noise=0.05,
    max_duration=model.DEFAULT_MAX_DURATION,
):
    """Generate market quotes priced off the model bands.

    For each asset in asset_id order the LTM is its last annual amount,
    the duration is drawn from 1 up to the longest duration its surface
    supports (at most max_duration),
    and bid and ask are LTM times the model multiplier at bid_level and
    ask_level,
    each scaled by 1 + eta with eta uniform on [-noise, noise].
    Assets whose surface supports no duration get no quote.

    :param dataset: Accepted assets.

    :param dict surfaces: Share surfaces keyed by base age.

    :rtype: list of :py:class:`royalty_cmd.core.market.MarketQuote`
    """
    available = {
        t: surface for t, surface in surfaces.items() if not surface.is_empty()
    }
    for surface in available.values():
        for level in (bid_level, ask_level):
            if level not in surface.levels:
                raise model.DomainError(
                    'surface for base age {} has no level {}'.format(
                        surface.base_age, level
                    )
                )
    rng = _generator(seed)
    quotes = []
    for asset in sorted(dataset, key=lambda a: a.asset_id):
        u_duration = rng.random()
        eta_bid, eta_ask = rng.uniform(-noise, noise, size=2)
        if not available:
            continue
        surface = available.get(
            market.base_age_for(asset.dollar_age, available)
        )
        longest = 0 if surface is None else _usable_duration(
            surface, max_duration
        )
        if longest < 1:
            logger.debug('no quote for {}'.format(asset.asset_id))
            continue
        duration = 1 + int(u_duration * longest)
        table = model.multiplier_table(surface, rate, duration)
        ltm = float(asset.series.ltm)
        bid = ltm * table.entry(duration, bid_level) * (1 + eta_bid)
        ask = ltm * table.entry(duration, ask_level) * (1 + eta_ask)
        quotes.append(
            market.MarketQuote(
                asset_id=asset.asset_id,
                ltm=asset.series.ltm,
                best_bid=repr(float(bid)),
                ask=repr(float(ask)),
                duration_years=duration,
                dollar_age=asset.dollar_age,
            )
        )
    return quotes
