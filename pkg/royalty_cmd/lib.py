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
"""Utility functions for use by Royalty-Cmd sub-command plug-ins.
"""
import collections
import csv
import decimal
import json
import logging
import math
import numbers
import os
from pathlib import Path

import attr
import yaml

from royalty_cmd.core import curves, ingest, market, model

logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())

FORMATS = ('csv', 'json')


class ConfigError(model.DomainError):
    """Raised for an invalid configuration file or value.
    """


def _is_number(value):
    return (
        isinstance(value, numbers.Real) and not isinstance(value, bool)
        and math.isfinite(value)
    )


def _is_int(value):
    return isinstance(value, numbers.Integral) and not isinstance(value, bool)


def _check(predicate, requirement):
    """Return an attrs validator that raises :py:exc:`ConfigError`
    naming the field.
    """

    def validate(instance, attribute, value):
        if not predicate(value):
            raise ConfigError(
                '{}: must be {}, got {!r}'.format(
                    attribute.name, requirement, value
                )
            )

    return validate


def _levels(value):
    if isinstance(value, str):
        value = [level for level in value.split(',') if level.strip()]
    try:
        return tuple(sorted(model.normalize_level(level) for level in value))
    except (TypeError, ValueError):
        raise ConfigError(
            'percentile_levels: must be percentile levels in (0, 100), '
            'got {!r}'.format(value)
        )


def _floor(value):
    if isinstance(value, bool):
        raise ConfigError(
            'zero_floor: must be a number >= 0, got {!r}'.format(value)
        )
    try:
        return model.as_decimal(value)
    except (decimal.InvalidOperation, TypeError, ValueError):
        raise ConfigError(
            'zero_floor: must be a number >= 0, got {!r}'.format(value)
        )


@attr.s(frozen=True)
class Config(object):
    """Run settings shared by the sub-commands.
    """
    #: Annual discount rate.
    rate = attr.ib(
        default=model.DEFAULT_RATE,
        validator=_check(lambda v: _is_number(v) and v >= 0, 'a number >= 0'),
    )
    #: Percentile levels of share surfaces.
    percentile_levels = attr.ib(
        default=model.DEFAULT_LEVELS,
        converter=_levels,
        validator=_check(
            lambda v: bool(v) and all(0 < level < 100 for level in v),
            'a non-empty list of levels in (0, 100)'
        ),
    )
    #: Allowed relative deviation of dollar age from oldest cashflow age.
    dollar_age_tolerance = attr.ib(
        default=ingest.DEFAULT_TOLERANCE,
        validator=_check(lambda v: _is_number(v) and v >= 0, 'a number >= 0'),
    )
    #: Annual revenue at or below which an asset is rejected.
    zero_floor = attr.ib(
        default=ingest.DEFAULT_ZERO_FLOOR,
        converter=_floor,
        validator=_check(lambda v: v.is_finite() and v >= 0, 'a number >= 0'),
    )
    #: Minimum cohort size for a surface cell.
    min_cohort = attr.ib(
        default=curves.DEFAULT_MIN_COHORT,
        validator=_check(lambda v: _is_int(v) and v >= 1, 'an integer >= 1'),
    )
    #: Longest contract duration in years.
    max_duration = attr.ib(
        default=model.DEFAULT_MAX_DURATION,
        validator=_check(lambda v: _is_int(v) and v >= 1, 'an integer >= 1'),
    )
    #: Lowest bid multiplier kept, as a fraction of the ask multiplier.
    min_bid_ask_ratio = attr.ib(
        default=market.DEFAULT_MIN_BID_ASK_RATIO,
        validator=_check(
            lambda v: _is_number(v) and 0 <= v <= 1, 'a number in [0, 1]'
        ),
    )
    #: Table file format.
    output_format = attr.ib(
        default='csv',
        validator=_check(lambda v: v in FORMATS, 'one of csv, json'),
    )
    #: Number of threads for per-asset work.
    max_workers = attr.ib(
        default=1,
        validator=_check(lambda v: _is_int(v) and v >= 1, 'an integer >= 1'),
    )


#: Command-line flags for the Config fields:
#: field name -> (flag, argparse type, help).
CONFIG_FLAGS = collections.OrderedDict([
    ('rate', ('--rate', float, 'annual discount rate')),
    ('percentile_levels', (
        '--levels', str, 'comma-separated percentile levels of the surface'
    )),
    ('dollar_age_tolerance', (
        '--tolerance', float,
        'allowed relative deviation of dollar age from the age of the '
        'oldest cashflow'
    )),
    ('zero_floor', (
        '--zero-floor', str,
        'annual revenue at or below which an asset is rejected'
    )),
    ('min_cohort', (
        '--min-cohort', int, 'minimum number of assets for a surface cell'
    )),
    ('max_duration', (
        '--max-duration', int, 'longest contract duration in years'
    )),
    ('min_bid_ask_ratio', (
        '--min-bid-ask-ratio', float,
        'lowest bid kept, as a fraction of the ask'
    )),
    ('max_workers', (
        '--workers', int, 'number of threads for per-asset work'
    )),
])


def add_config_arguments(parser, fields=(), output=True):
    """Add the ``--config`` flag,
    the flags for the named Config fields,
    and optionally the ``--format`` and ``--out`` output flags to a
    sub-command parser.

    Config flags default to :py:obj:`None` so that
    :py:func:`resolve_config` can tell whether they were given.

    :param parser: Sub-command argument parser.
    :type parser: :py:class:`argparse.ArgumentParser`

    :param fields: Names of the Config fields to add flags for.

    :param boolean output: Add the output flags.
    """
    parser.add_argument(
        '--config',
        type=Path,
        metavar='CONFIG_FILE',
        help='JSON or YAML file of settings; flags override it'
    )
    for field in fields:
        flag, type_, help_ = CONFIG_FLAGS[field]
        parser.add_argument(flag, dest=field, type=type_, help=help_)
    if output:
        parser.add_argument(
            '--format',
            dest='output_format',
            choices=FORMATS,
            help='table file format; defaults to csv'
        )
        parser.add_argument(
            '--out',
            dest='out_dir',
            type=Path,
            default=Path('.'),
            metavar='DIR',
            help='directory to write output files into; '
            'defaults to the present working directory'
        )


def load_config(config_file):
    """Load the contents of a config file.

    The file is a flat mapping of Config fields.
    Files with a ``.json`` suffix are parsed as JSON;
    any other file is parsed as YAML.

    :param config_file: File path/name of the config file.
    :type config_file: :py:class:`pathlib.Path`

    :returns: Settings read from the file.
    :rtype: dict

    :raises: :py:exc:`ConfigError` for a file that does not parse,
             is not a mapping,
             or has unknown keys.
    """
    with open(os.fspath(config_file), 'rt') as f:
        if Path(config_file).suffix.lower() == '.json':
            try:
                settings = json.load(f)
            except json.JSONDecodeError as e:
                raise ConfigError('{}: {}'.format(config_file, e))
        else:
            try:
                settings = yaml.safe_load(f)
            except yaml.YAMLError as e:
                raise ConfigError('{}: {}'.format(config_file, e))
    if settings is None:
        return {}
    if not isinstance(settings, dict):
        raise ConfigError(
            '{}: must be a mapping of settings'.format(config_file)
        )
    unknown = sorted(
        str(key) for key in set(settings) - set(attr.fields_dict(Config))
    )
    if unknown:
        raise ConfigError(
            '{}: unknown key(s) {} - please check your config file'.format(
                config_file, ', '.join(unknown)
            )
        )
    return settings


def resolve_config(parsed_args):
    """Build the Config for a sub-command.

    Command-line flags override config file settings,
    which override Config defaults.

    :param parsed_args: Parsed sub-command arguments.
    :type parsed_args: :py:class:`argparse.Namespace`

    :rtype: :py:class:`Config`
    """
    settings = {}
    config_file = getattr(parsed_args, 'config', None)
    if config_file is not None:
        settings.update(load_config(config_file))
    for field in attr.fields_dict(Config):
        value = getattr(parsed_args, field, None)
        if value is not None:
            settings[field] = value
    config = Config(**settings)
    logger.debug('config: {}'.format(config))
    return config


def read_file(path, parse):
    """Parse an input file opened in binary mode.

    :param path: Input file path.
    :type path: :py:class:`pathlib.Path`

    :param parse: Function of a binary stream.

    :raises: :py:exc:`royalty_cmd.core.ingest.IngestError` with the path
             prefixed to the parse error.
    """
    with open(os.fspath(path), 'rb') as f:
        try:
            return parse(f)
        except ingest.IngestError as e:
            raise ingest.IngestError('{}: {}'.format(path, e)) from e


def load_dataset(cashflows_file, assets_file, config):
    """Read, annualize and filter the cashflows and assets files.

    :param cashflows_file: Cashflows CSV file path.
    :type cashflows_file: :py:class:`pathlib.Path`

    :param assets_file: Assets CSV file path.
    :type assets_file: :py:class:`pathlib.Path`

    :param config: Run settings.
    :type config: :py:class:`Config`

    :returns: Accepted assets, and the filter report.
    :rtype: 2-tuple
    """
    records = read_file(cashflows_file, ingest.parse_cashflows)
    dollar_ages = read_file(assets_file, ingest.parse_assets)
    raw_assets = ingest.assemble_raw_assets(records, dollar_ages)
    dataset, report = ingest.build_dataset(
        raw_assets,
        zero_floor=config.zero_floor,
        tolerance=config.dollar_age_tolerance,
        max_workers=config.max_workers,
    )
    logger.info(
        '{} of {} assets accepted from {}'.format(
            len(report.accepted), len(report.outcomes), cashflows_file
        )
    )
    return dataset, report


def load_surface(sources, age, config, max_horizon=None):
    """Get a share surface from a surface file or from the data files.

    :param sources: One surface file path,
                    or the cashflows and assets file paths.

    :param int age: Base age; required with data files.

    :param config: Run settings.
    :type config: :py:class:`Config`

    :param int max_horizon: Longest horizon to build;
                            defaults to ``config.max_duration``.

    :rtype: :py:class:`royalty_cmd.core.model.ShareSurface`
    """
    if len(sources) == 1:
        surface = curves.read_surface(sources[0])
        if age is not None and age != surface.base_age:
            raise model.DomainError(
                '{} is the surface for base age {}, not {}'.format(
                    sources[0], surface.base_age, age
                )
            )
        return surface
    if len(sources) != 2:
        raise model.DomainError(
            'expected a surface file or cashflows and assets files, '
            'got {} files'.format(len(sources))
        )
    if age is None:
        raise model.DomainError('--age is required with data files')
    dataset, _ = load_dataset(sources[0], sources[1], config)
    return curves.build_surface(
        dataset,
        age,
        levels=config.percentile_levels,
        max_horizon=max_horizon or config.max_duration,
        min_cohort=config.min_cohort,
    )


def _csv_field(name, value, money):
    if value is None:
        return ''
    if isinstance(value, decimal.Decimal):
        return '{:.2f}'.format(value)
    if isinstance(value, float):
        if name in money:
            return '{:.2f}'.format(value)
        return '{:.6f}'.format(value)
    return str(value)


def _json_value(value):
    if isinstance(value, decimal.Decimal):
        return float(value)
    return value


def write_table(out_dir, name, header, rows, output_format='csv', money=()):
    """Write rows to :file:`{out_dir}/{name}.csv` or
    :file:`{out_dir}/{name}.json`.

    In CSV,
    floats are written with 6 fractional digits,
    except for the money columns which get 2.
    JSON keeps full precision.

    :param out_dir: Directory to write into; created if necessary.
    :type out_dir: :py:class:`pathlib.Path`

    :param str name: File name without suffix.

    :param header: Column names.

    :param rows: Sequences of values in header order.

    :param str output_format: ``csv`` or ``json``.

    :param money: Names of currency columns.

    :returns: Path of the written file.
    :rtype: :py:class:`pathlib.Path`
    """
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / '{}.{}'.format(name, output_format)
    with path.open('wt', newline='') as f:
        if output_format == 'json':
            records = [
                collections.OrderedDict(
                    (column, _json_value(value))
                    for column, value in zip(header, row)
                ) for row in rows
            ]
            json.dump(records, f, indent=2)
            f.write('\n')
        else:
            writer = csv.writer(f, lineterminator='\n')
            writer.writerow(header)
            for row in rows:
                writer.writerow([
                    _csv_field(column, value, money)
                    for column, value in zip(header, row)
                ])
    logger.info('Wrote {}'.format(path))
    return path


def write_json(out_dir, name, data):
    """Write data to :file:`{out_dir}/{name}.json`.

    :returns: Path of the written file.
    :rtype: :py:class:`pathlib.Path`
    """
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / '{}.json'.format(name)
    with path.open('wt') as f:
        json.dump(data, f, indent=2)
        f.write('\n')
    logger.info('Wrote {}'.format(path))
    return path
