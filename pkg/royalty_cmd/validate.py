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
"""Royalty-Cmd command plug-in for validate sub-command.

Check cashflows and assets files and report which assets are accepted.
"""
import logging
from pathlib import Path

import cliff.command

from royalty_cmd import lib
from royalty_cmd.core import ingest

logger = logging.getLogger(__name__)


class Validate(cliff.command.Command):
    """Validate cashflows and assets files.
    """

    def get_parser(self, prog_name):
        parser = super(Validate, self).get_parser(prog_name)
        parser.description = '''
            Parse and annualize the cashflows in CASHFLOWS,
            check each asset against its dollar age in ASSETS,
            and write the acceptance status of every asset to
            filter_report and the counts by rejection reason to
            filter_summary.json.
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
        lib.add_config_arguments(
            parser, ('dollar_age_tolerance', 'zero_floor', 'max_workers')
        )
        return parser

    def take_action(self, parsed_args):
        """Execute the `royalty validate` sub-command.

        Exit with status 2 if no asset is accepted.
        """
        config = lib.resolve_config(parsed_args)
        report = validate(
            parsed_args.cashflows_file, parsed_args.assets_file, config,
            parsed_args.out_dir
        )
        logger.info(
            '{accepted} accepted, {rejected} rejected'.format(
                accepted=len(report.accepted), rejected=len(report.rejected)
            )
        )
        if not report.accepted:
            logger.error(
                'no asset in {} was accepted - please check '
                'filter_report'.format(parsed_args.cashflows_file)
            )
            raise SystemExit(2)


def validate(cashflows_file, assets_file, config, out_dir):
    """Filter the assets in the data files and write the filter report
    and its summary.

    :param cashflows_file: Cashflows CSV file path.
    :type cashflows_file: :py:class:`pathlib.Path`

    :param assets_file: Assets CSV file path.
    :type assets_file: :py:class:`pathlib.Path`

    :param config: Run settings.
    :type config: :py:class:`royalty_cmd.lib.Config`

    :param out_dir: Directory to write the report files into.
    :type out_dir: :py:class:`pathlib.Path`

    :rtype: :py:class:`royalty_cmd.core.ingest.FilterReport`
    """
    _, report = lib.load_dataset(cashflows_file, assets_file, config)
    lib.write_table(
        out_dir, 'filter_report', ingest.REPORT_HEADER, report.rows(),
        config.output_format
    )
    lib.write_json(out_dir, 'filter_summary', report.summary())
    return report
