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
"""Royalty-Cmd command plug-in for compare sub-command.

Set market quotes against the model's multiplier bands and write
plot-ready aggregate tables.
"""
import logging
from pathlib import Path

import cliff.command

from royalty_cmd import lib
from royalty_cmd.core import curves, market

logger = logging.getLogger(__name__)

ERRORS_HEADER = ('asset_id', 'error')
REJECTED_HEADER = ('asset_id', 'reason')


class Compare(cliff.command.Command):
    """Compare market quotes with model multipliers.
    """

    def get_parser(self, prog_name):
        parser = super(Compare, self).get_parser(prog_name)
        parser.description = '''
            Screen the quotes in QUOTES,
            set each against the model's bottom decile,
            median,
            and top decile multipliers built from the accepted assets in
            CASHFLOWS and ASSETS,
            and write the comparison,
            the screened-out quotes,
            the quotes that could not be compared,
            the means by duration and by dollar age,
            and the band each side of the market is closest to.
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
            'quotes_file', metavar='QUOTES', type=Path, help='quotes CSV file'
        )
        lib.add_config_arguments(
            parser, (
                'rate', 'percentile_levels', 'min_cohort', 'max_duration',
                'min_bid_ask_ratio', 'dollar_age_tolerance', 'zero_floor',
                'max_workers'
            )
        )
        return parser

    def take_action(self, parsed_args):
        """Execute the `royalty compare` sub-command.

        Exit with status 2 if no quote could be compared.
        """
        config = lib.resolve_config(parsed_args)
        rows, errors, rejected = compare(
            parsed_args.cashflows_file, parsed_args.assets_file,
            parsed_args.quotes_file, config, parsed_args.out_dir
        )
        logger.info(
            '{compared} quotes compared, {rejected} screened out, '
            '{errors} without a model band'.format(
                compared=len(rows), rejected=len(rejected), errors=len(errors)
            )
        )
        if not rows:
            logger.error(
                'no quote in {} could be compared with the model'.format(
                    parsed_args.quotes_file
                )
            )
            raise SystemExit(2)


def compare(cashflows_file, assets_file, quotes_file, config, out_dir):
    """Compare the quotes with the model and write the result tables.

    Surfaces are built for base ages 1 through the largest rounded quote
    dollar age or the oldest accepted asset, whichever is younger,
    always including levels 10, 50 and 90.

    :param cashflows_file: Cashflows CSV file path.
    :type cashflows_file: :py:class:`pathlib.Path`

    :param assets_file: Assets CSV file path.
    :type assets_file: :py:class:`pathlib.Path`

    :param quotes_file: Quotes CSV file path.
    :type quotes_file: :py:class:`pathlib.Path`

    :param config: Run settings.
    :type config: :py:class:`royalty_cmd.lib.Config`

    :param out_dir: Directory to write the tables into.
    :type out_dir: :py:class:`pathlib.Path`

    :returns: Comparison rows,
              (asset_id, message) error entries,
              and (quote, reason) screened-out pairs.
    :rtype: 3-tuple
    """
    quotes = lib.read_file(quotes_file, market.parse_quotes)
    if not quotes:
        logger.warning('{} has no quotes'.format(quotes_file))
        return [], [], []
    accepted, rejected = market.filter_quotes(
        quotes, config.max_duration, config.min_bid_ask_ratio
    )
    dataset, _ = lib.load_dataset(cashflows_file, assets_file, config)
    oldest = max(market.round_half_up(quote.dollar_age) for quote in quotes)
    # no cohort exists at base ages past the oldest asset
    oldest = min(
        oldest, int(max((asset.dollar_age for asset in dataset), default=1))
    )
    surfaces = curves.build_surfaces(
        dataset,
        range(1, max(oldest, 1) + 1),
        levels=sorted(set(config.percentile_levels) | set(market.BANDS)),
        max_horizon=config.max_duration,
        min_cohort=config.min_cohort,
    )
    rows, errors = market.compare(accepted, surfaces, config.rate)
    fmt = config.output_format
    lib.write_table(
        out_dir, 'comparison', market.COMPARISON_HEADER,
        [row.as_tuple() for row in rows], fmt
    )
    lib.write_table(out_dir, 'comparison_errors', ERRORS_HEADER, errors, fmt)
    lib.write_table(
        out_dir, 'rejected_quotes', REJECTED_HEADER,
        [(quote.asset_id, reason.value) for quote, reason in rejected], fmt
    )
    for axis in ('duration', 'dollar_age'):
        lib.write_table(
            out_dir, 'plot_by_{}'.format(axis), market.PLOT_HEADER, [
                plot_row.as_tuple()
                for plot_row in market.aggregate_plot_data(rows, axis)
            ], fmt
        )
    lib.write_json(out_dir, 'comparison_summary', market.band_summary(rows))
    return rows, errors, rejected
