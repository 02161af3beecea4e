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
"""Royalty-Cmd command plug-in for value sub-command.

Price an asset at every percentile level of a share surface.
"""
import decimal
import logging
from pathlib import Path

import cliff.command

from royalty_cmd import lib
from royalty_cmd.core import model

logger = logging.getLogger(__name__)

VALUE_HEADER = ('base_age', 'duration', 'level', 'multiplier', 'ltm', 'price')


class Value(cliff.command.Command):
    """Price an asset from its LTM revenue.
    """

    def get_parser(self, prog_name):
        parser = super(Value, self).get_parser(prog_name)
        parser.description = '''
            Show the LTM multiplier and price of an asset with LTM revenue
            --ltm and contract duration --duration at each percentile level
            of a share surface,
            and write them to value.
            SOURCE is a surface file written by `royalty curves`,
            or the CASHFLOWS and ASSETS files together with --age.
        '''
        parser.add_argument(
            'sources',
            metavar='SOURCE',
            nargs='+',
            type=Path,
            help='surface file, or cashflows and assets CSV files'
        )
        parser.add_argument(
            '--ltm',
            required=True,
            help='last twelve months revenue of the asset'
        )
        parser.add_argument(
            '--duration',
            type=int,
            required=True,
            help='contract duration in years'
        )
        parser.add_argument(
            '--age',
            type=int,
            help='base age in years; required with data files'
        )
        lib.add_config_arguments(
            parser, (
                'rate', 'percentile_levels', 'min_cohort', 'max_duration',
                'dollar_age_tolerance', 'zero_floor', 'max_workers'
            )
        )
        return parser

    def take_action(self, parsed_args):
        """Execute the `royalty value` sub-command.

        The multiplier and price at each level are logged to the console.
        Exit with status 2 if the surface does not support the duration.
        """
        config = lib.resolve_config(parsed_args)
        ltm = parse_ltm(parsed_args.ltm)
        try:
            band = value(
                parsed_args.sources, parsed_args.age, ltm,
                parsed_args.duration, config, parsed_args.out_dir
            )
        except model.MissingCellError as e:
            logger.error(
                '{} - the surface does not support a {} year duration'.format(
                    e, parsed_args.duration
                )
            )
            raise SystemExit(2)
        for level, (multiplier, price) in band.items():
            logger.info(
                'level {}: multiplier {:.6f}, price {:.2f}'.format(
                    level, multiplier, price
                )
            )


def parse_ltm(text):
    """Parse an ``--ltm`` value.

    :rtype: :py:class:`decimal.Decimal`

    :raises: :py:exc:`royalty_cmd.core.model.DomainError` unless text is a
             number > 0.
    """
    try:
        ltm = decimal.Decimal(text)
    except decimal.InvalidOperation:
        raise model.DomainError(
            '--ltm must be a number, got {!r}'.format(text)
        )
    if not (ltm.is_finite() and ltm > 0):
        raise model.DomainError('--ltm must be > 0, got {}'.format(text))
    return ltm


def value(sources, age, ltm, duration, config, out_dir):
    """Compute and write the multiplier and price at each level.

    :param sources: One surface file path,
                    or the cashflows and assets file paths.

    :param int age: Base age; required with data files.

    :param ltm: Last twelve months revenue, > 0.
    :type ltm: :py:class:`decimal.Decimal`

    :param int duration: Contract duration in years.

    :param config: Run settings.
    :type config: :py:class:`royalty_cmd.lib.Config`

    :param out_dir: Directory to write the prices into.
    :type out_dir: :py:class:`pathlib.Path`

    :returns: (multiplier, price) pairs keyed by percentile level.
    :rtype: dict

    :raises: :py:exc:`royalty_cmd.core.model.MissingCellError`
    """
    if duration < 1:
        raise model.DomainError(
            '--duration must be >= 1, got {}'.format(duration)
        )
    surface = lib.load_surface(
        sources, age, config, max(duration, config.max_duration)
    )
    table = model.multiplier_table(surface, config.rate, duration)
    prices = model.price_band(table, duration, ltm)
    band = {
        level: (table.entry(duration, level), prices[level])
        for level in table.levels
    }
    rows = [
        (table.base_age, duration, level, multiplier, ltm, price)
        for level, (multiplier, price) in sorted(band.items())
    ]
    lib.write_table(
        out_dir, 'value', VALUE_HEADER, rows, config.output_format,
        money=('ltm', 'price')
    )
    return band
