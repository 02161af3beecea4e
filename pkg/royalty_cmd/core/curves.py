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
"""Percentile revenue share surfaces.

For a base age t and horizon i,
every asset old enough to have revenue in age-year t + i contributes the
ratio of that revenue to its age-year t revenue;
the percentiles of those ratios across the cohort form the surface.
"""
import collections
import csv
import json
import logging
import math

import attr
import numpy

from royalty_cmd.core import model

logger = logging.getLogger(__name__)

SURFACE_HEADER = ('base_age', 'horizon', 'level', 'share', 'cohort_size')

#: Default minimum cohort size for a surface cell.
DEFAULT_MIN_COHORT = 5


@attr.s(frozen=True)
class Cohort(object):
    """Observed shares of the assets qualifying at (base age, horizon).
    """
    base_age = attr.ib()
    horizon = attr.ib()
    #: Shares in member_ids order.
    shares = attr.ib(converter=tuple)
    #: Sorted asset identifiers.
    member_ids = attr.ib(converter=tuple)

    @member_ids.validator
    def _check_members(self, attribute, member_ids):
        if len(member_ids) != len(self.shares):
            raise model.DomainError(
                'cohort has {} members but {} shares'.format(
                    len(member_ids), len(self.shares)
                )
            )

    def __len__(self):
        return len(self.member_ids)


def observed_share(asset, t, i):
    """Return revenue in age-year t + i as a share of age-year t revenue.

    The asset qualifies when its dollar age is at least t + i and its
    annual series reaches age-year t + i.

    :param asset: Accepted asset.
    :type asset: :py:class:`royalty_cmd.core.model.Asset`

    :param int t: Base age in years, >= 1.

    :param int i: Horizon in years, >= 1.

    :returns: The share, or :py:obj:`None` if the asset does not qualify.
    :rtype: float
    """
    if t < 1 or i < 1:
        raise model.DomainError(
            'base age and horizon must be >= 1, got {} and {}'.format(t, i)
        )
    if asset.dollar_age < t + i:
        return None
    base = asset.series.amount_at(t)
    later = asset.series.amount_at(t + i)
    if base is None or later is None:
        return None
    return float(later) / float(base)


def percentile(values, level):
    """Return the level percentile of values by linear interpolation
    between closest ranks.

    With the values sorted ascending into v[0..n-1] and
    h = (n - 1) * level / 100,
    the result is
    v[floor(h)] + (h - floor(h)) * (v[floor(h) + 1] - v[floor(h)]).
    Level 0 is the minimum and level 100 the maximum.

    :param values: Non-empty collection of finite numbers.

    :param float level: Percentile level in [0, 100].

    :rtype: float

    :raises: :py:exc:`royalty_cmd.core.model.DomainError`
    """
    ordered = numpy.sort(numpy.asarray(values, dtype=numpy.float64))
    if ordered.ndim != 1 or ordered.size == 0:
        raise model.DomainError('percentile of an empty collection')
    if not 0 <= level <= 100:
        raise model.DomainError(
            'percentile level must be in [0, 100], got {}'.format(level)
        )
    h = (ordered.size - 1) * level / 100
    lo = int(math.floor(h))
    if lo >= ordered.size - 1:
        return float(ordered[-1])
    below, above = float(ordered[lo]), float(ordered[lo + 1])
    # interpolation may round past the upper rank
    return min(below + (h - lo) * (above - below), above)


def build_cohort(dataset, t, i):
    """Collect the observed shares of every qualifying asset.

    :param dataset: Accepted assets.

    :param int t: Base age in years.

    :param int i: Horizon in years.

    :rtype: :py:class:`Cohort`
    """
    members = []
    for asset in sorted(dataset, key=lambda a: a.asset_id):
        share = observed_share(asset, t, i)
        if share is not None:
            members.append((asset.asset_id, share))
    return Cohort(
        base_age=t,
        horizon=i,
        shares=[share for _, share in members],
        member_ids=[asset_id for asset_id, _ in members],
    )


def build_surface(
    dataset,
    t,
    levels=model.DEFAULT_LEVELS,
    max_horizon=model.DEFAULT_MAX_DURATION,
    min_cohort=DEFAULT_MIN_COHORT,
):
    """Build the percentile share surface for base age t.

    Cells are emitted only for horizons whose cohort has at least
    min_cohort members;
    cohort sizes are recorded for every horizon.

    :param dataset: Accepted assets.

    :param int t: Base age in years, >= 1.

    :param levels: Percentile levels in (0, 100).

    :param int max_horizon: Longest horizon, >= 1.

    :param int min_cohort: Minimum cohort size, >= 1.

    :rtype: :py:class:`royalty_cmd.core.model.ShareSurface`
    """
    if max_horizon < 1:
        raise model.DomainError(
            'max_horizon must be >= 1, got {}'.format(max_horizon)
        )
    if min_cohort < 1:
        raise model.DomainError(
            'min_cohort must be >= 1, got {}'.format(min_cohort)
        )
    levels = sorted(model.normalize_level(level) for level in levels)
    if any(not 0 < level < 100 for level in levels):
        raise model.DomainError(
            'surface levels must be in (0, 100), got {}'.format(levels)
        )
    values = {}
    counts = {}
    for i in range(1, max_horizon + 1):
        cohort = build_cohort(dataset, t, i)
        counts[i] = len(cohort)
        if len(cohort) < min_cohort:
            continue
        for level in levels:
            values[(i, level)] = percentile(cohort.shares, level)
    logger.debug(
        'base age {}: cohort sizes {}'.format(
            t, [counts[i] for i in sorted(counts)]
        )
    )
    return model.ShareSurface(
        base_age=t,
        levels=levels,
        max_horizon=max_horizon,
        values=values,
        counts=counts,
    )


def build_surfaces(dataset, ages, **kwargs):
    """Build a surface for each base age in ages.

    :returns: Surfaces keyed by base age.
    :rtype: :py:class:`collections.OrderedDict`
    """
    return collections.OrderedDict(
        (t, build_surface(dataset, t, **kwargs)) for t in sorted(set(ages))
    )


def surface_rows(surface):
    """Return the surface cells as rows in (horizon, level) order.

    :returns: (base_age, horizon, level, share, cohort_size) tuples.
    :rtype: list
    """
    return [
        (surface.base_age, i, level, surface.values[(i, level)],
         surface.counts[i]) for i, level in sorted(surface.values)
    ]


def surface_to_json(surface):
    """Return a JSON-serializable mapping of the surface.

    Cohort sizes are included for every horizon,
    not only those with cells.
    """
    return collections.OrderedDict([
        ('base_age', surface.base_age),
        ('levels', list(surface.levels)),
        ('max_horizon', surface.max_horizon),
        ('counts', [
            collections.OrderedDict([('horizon', i), ('cohort_size', n)])
            for i, n in sorted(surface.counts.items())
        ]),
        ('cells', [
            collections.OrderedDict(zip(SURFACE_HEADER, row))
            for row in surface_rows(surface)
        ]),
    ])


def surface_from_json(data):
    """Rebuild a surface from :py:func:`surface_to_json` output.
    """
    return model.ShareSurface(
        base_age=int(data['base_age']),
        levels=data['levels'],
        max_horizon=int(data['max_horizon']),
        values={(int(cell['horizon']), model.normalize_level(cell['level'])):
                float(cell['share'])
                for cell in data['cells']},
        counts={int(c['horizon']): int(c['cohort_size'])
                for c in data['counts']},
    )


def read_surface(path):
    """Read a surface written as CSV or JSON; the format is chosen by
    the file suffix.

    A CSV surface only carries cohort sizes for horizons with cells.

    :param path: Surface file path.
    :type path: :py:class:`pathlib.Path`

    :rtype: :py:class:`royalty_cmd.core.model.ShareSurface`
    """
    if path.suffix == '.json':
        with path.open('rt') as f:
            return surface_from_json(json.load(f))
    with path.open('rt', newline='') as f:
        reader = csv.DictReader(f)
        if tuple(reader.fieldnames or ()) != SURFACE_HEADER:
            raise model.DomainError(
                '{} does not have the surface header {}'.format(
                    path, ','.join(SURFACE_HEADER)
                )
            )
        rows = list(reader)
    if not rows:
        raise model.DomainError('{} has no surface cells'.format(path))
    base_ages = {int(row['base_age']) for row in rows}
    if len(base_ages) != 1:
        raise model.DomainError(
            '{} mixes base ages {}'.format(path, sorted(base_ages))
        )
    values = {}
    counts = {}
    for row in rows:
        i = int(row['horizon'])
        values[(i, model.normalize_level(row['level']))] = float(row['share'])
        counts[i] = int(row['cohort_size'])
    return model.ShareSurface(
        base_age=base_ages.pop(),
        levels={level for _, level in values},
        max_horizon=max(counts),
        values=values,
        counts=counts,
    )
