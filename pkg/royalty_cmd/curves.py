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
"""Royalty-Cmd command plug-in for curves sub-command.

Build percentile revenue share surfaces from cashflows and assets files.
"""
import logging
from pathlib import Path

import cliff.command

from royalty_cmd import lib
from royalty_cmd.core import curves as core_curves

logger = logging.getLogger(__name__)


class Curves(cliff.command.Command):
    """Build revenue share surfaces.
    """

    def get_parser(self, prog_name):
        parser = super(Curves, self).get_parser(prog_name)
        parser.description = '''
            Build the percentile revenue share surface for each base age
            given by --age from the accepted assets in CASHFLOWS and ASSETS,
            and write each to surface_t{AGE}.
        '''
        parser.add_argument(
            'cashflows_file',
            metavar='CASHFLOWS',
            type=Path,
            help='cashflows CSV file'
        )
        parser.add_argument(
            'assets_file', metavar='ASSETS', type=Path, help='assets CSV file'
        )
        parser.add_argument(
            '--age',
            dest='ages',
            type=int,
            action='append',
            required=True,
            help='base age in years; repeat for more surfaces'
        )
        lib.add_config_arguments(
            parser, (
                'percentile_levels', 'min_cohort', 'max_duration',
                'dollar_age_tolerance', 'zero_floor', 'max_workers'
            )
        )
        return parser

    def take_action(self, parsed_args):
        """Execute the `royalty curves` sub-command.

        Exit with status 2 if any base age has no cohort of at least
        min_cohort assets.
        """
        config = lib.resolve_config(parsed_args)
        surfaces = curves(
            parsed_args.cashflows_file, parsed_args.assets_file,
            parsed_args.ages, config, parsed_args.out_dir
        )
        empty = [t for t, surface in surfaces.items() if surface.is_empty()]
        for t in empty:
            counts = surfaces[t].counts
            logger.error(
                'no cohort for base age {t} has at least {min_cohort} assets; '
                'the largest has {largest}'.format(
                    t=t,
                    min_cohort=config.min_cohort,
                    largest=max(counts.values()) if counts else 0
                )
            )
        if empty:
            raise SystemExit(2)


def curves(cashflows_file, assets_file, ages, config, out_dir):
    """Build and write the share surface for each base age.

    Surfaces without any cell are returned but not written.

    :param cashflows_file: Cashflows CSV file path.
    :type cashflows_file: :py:class:`pathlib.Path`

    :param assets_file: Assets CSV file path.
    :type assets_file: :py:class:`pathlib.Path`

    :param ages: Base ages in years, each >= 1.

    :param config: Run settings.
    :type config: :py:class:`royalty_cmd.lib.Config`

    :param out_dir: Directory to write surface files into.
    :type out_dir: :py:class:`pathlib.Path`

    :returns: Surfaces keyed by base age.
    :rtype: :py:class:`collections.OrderedDict`
    """
    dataset, _ = lib.load_dataset(cashflows_file, assets_file, config)
    surfaces = core_curves.build_surfaces(
        dataset,
        ages,
        levels=config.percentile_levels,
        max_horizon=config.max_duration,
        min_cohort=config.min_cohort,
    )
    for t, surface in surfaces.items():
        if surface.is_empty():
            continue
        write_surface(surface, out_dir, config.output_format)
    return surfaces


def write_surface(surface, out_dir, output_format='csv'):
    """Write a surface to :file:`{out_dir}/surface_t{base_age}`.

    :returns: Path of the written file.
    :rtype: :py:class:`pathlib.Path`
    """
    name = 'surface_t{}'.format(surface.base_age)
    if output_format == 'json':
        return lib.write_json(
            out_dir, name, core_curves.surface_to_json(surface)
        )
    return lib.write_table(
        out_dir, name, core_curves.SURFACE_HEADER,
        core_curves.surface_rows(surface)
    )
