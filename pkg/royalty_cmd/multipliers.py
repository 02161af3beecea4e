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
"""Royalty-Cmd command plug-in for multipliers sub-command.

Compute LTM multiplier tables from a share surface.
"""
import logging
from pathlib import Path

import cliff.command

from royalty_cmd import lib
from royalty_cmd.core import model

logger = logging.getLogger(__name__)

MULTIPLIERS_HEADER = ('base_age', 'duration', 'level', 'multiplier')


class Multipliers(cliff.command.Command):
    """Compute LTM multiplier tables.
    """

    def get_parser(self, prog_name):
        parser = super(Multipliers, self).get_parser(prog_name)
        parser.description = '''
            Discount the revenue shares of a surface into LTM multipliers
            for each contract duration and percentile level,
            and write them to multipliers_t{AGE}.
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
            '--age',
            type=int,
            help='base age in years; required with data files'
        )
        parser.add_argument(
            '--durations',
            help='''
            comma-separated contract durations in years,
            or N for durations 1 through N;
            defaults to 1 through max duration
            '''
        )
        lib.add_config_arguments(
            parser, (
                'rate', 'percentile_levels', 'min_cohort', 'max_duration',
                'dollar_age_tolerance', 'zero_floor', 'max_workers'
            )
        )
        return parser

    def take_action(self, parsed_args):
        """Execute the `royalty multipliers` sub-command.

        Exit with status 2 if the surface lacks a cell that the longest
        duration needs.
        """
        config = lib.resolve_config(parsed_args)
        durations = parse_durations(parsed_args.durations, config.max_duration)
        try:
            multipliers(
                parsed_args.sources, parsed_args.age, durations, config,
                parsed_args.out_dir
            )
        except model.MissingCellError as e:
            logger.error(
                '{} - the surface does not support a {} year duration'.format(
                    e, max(durations)
                )
            )
            raise SystemExit(2)


def parse_durations(text, max_duration=model.DEFAULT_MAX_DURATION):
    """Parse a ``--durations`` value.

    :param str text: Comma-separated durations,
                     or a single N meaning 1 through N,
                     or :py:obj:`None` for 1 through max_duration.

    :returns: Distinct durations, ascending.
    :rtype: list

    :raises: :py:exc:`royalty_cmd.core.model.DomainError`
    """
    if text is None:
        return list(range(1, max_duration + 1))
    try:
        values = [int(value) for value in text.split(',') if value.strip()]
    except ValueError:
        raise model.DomainError(
            'durations must be integers, got {!r}'.format(text)
        )
    if not values or any(value < 1 for value in values):
        raise model.DomainError(
            'durations must be integers >= 1, got {!r}'.format(text)
        )
    if len(values) == 1 and ',' not in text:
        return list(range(1, values[0] + 1))
    return sorted(set(values))


def multipliers(sources, age, durations, config, out_dir):
    """Compute and write the multiplier table of a surface.

    :param sources: One surface file path,
                    or the cashflows and assets file paths.

    :param int age: Base age; required with data files.

    :param durations: Contract durations to write.

    :param config: Run settings.
    :type config: :py:class:`royalty_cmd.lib.Config`

    :param out_dir: Directory to write the table into.
    :type out_dir: :py:class:`pathlib.Path`

    :rtype: :py:class:`royalty_cmd.core.model.MultiplierTable`

    :raises: :py:exc:`royalty_cmd.core.model.MissingCellError`
    """
    longest = max(durations)
    surface = lib.load_surface(
        sources, age, config, max(longest, config.max_duration)
    )
    table = model.multiplier_table(surface, config.rate, longest)
    rows = [
        (table.base_age, duration, level, table.entry(duration, level))
        for duration in durations for level in table.levels
    ]
    lib.write_table(
        out_dir, 'multipliers_t{}'.format(table.base_age), MULTIPLIERS_HEADER,
        rows, config.output_format
    )
    return table
