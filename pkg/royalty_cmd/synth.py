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
"""Royalty-Cmd command plug-in for synth sub-command.

Generate a deterministic synthetic catalog and market quotes.
"""
import logging
import os
from pathlib import Path

import attr
import cliff.command
import yaml

from royalty_cmd import lib
from royalty_cmd.core import curves, ingest, market
from royalty_cmd.core import synth as core_synth

logger = logging.getLogger(__name__)


class Synth(cliff.command.Command):
    """Generate synthetic cashflows, assets and quotes.
    """

    def get_parser(self, prog_name):
        parser = super(Synth, self).get_parser(prog_name)
        parser.description = '''
            Generate the synthetic population described in SPEC_FILE
            and write cashflows.csv,
            assets.csv,
            and quotes.csv into OUTDIR.
            Output is byte-identical for the same spec and seed.

            If OUTDIR does not exist it will be created.
        '''
        parser.add_argument(
            'spec_file',
            metavar='SPEC_FILE',
            type=Path,
            help='population spec JSON file'
        )
        parser.add_argument(
            'out_dir',
            metavar='OUTDIR',
            type=Path,
            help='directory to write the data files into'
        )
        parser.add_argument(
            '--seed',
            type=int,
            help='master seed; overrides the seed in SPEC_FILE'
        )
        lib.add_config_arguments(
            parser, (
                'percentile_levels', 'min_cohort', 'dollar_age_tolerance',
                'zero_floor', 'max_workers'
            ),
            output=False
        )
        return parser

    def take_action(self, parsed_args):
        """Execute the `royalty synth` sub-command.
        """
        config = lib.resolve_config(parsed_args)
        raw_assets, quotes = synth(
            parsed_args.spec_file, parsed_args.out_dir, config,
            parsed_args.seed
        )
        logger.info(
            'Generated {} assets and {} quotes in {}'.format(
                len(raw_assets), len(quotes), parsed_args.out_dir
            )
        )


def load_spec(spec_file, seed=None):
    """Load and validate a population spec file.

    :param spec_file: File path/name of the population spec.
    :type spec_file: :py:class:`pathlib.Path`

    :param int seed: Master seed to use instead of the file's.

    :rtype: :py:class:`royalty_cmd.core.synth.PopulationSpec`

    :raises: :py:exc:`royalty_cmd.core.synth.SpecError`
    """
    with open(os.fspath(spec_file), 'rt') as f:
        try:
            data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise core_synth.SpecError('spec', '{}: {}'.format(spec_file, e))
    if seed is not None and isinstance(data, dict):
        data = dict(data, seed=seed)
    return core_synth.load_population_spec(data)


def synth(spec_file, out_dir, config, seed=None):
    """Generate the population of a spec file and write its data files.

    Quotes are priced off surfaces built from the accepted synthetic
    assets.

    :param spec_file: File path/name of the population spec.
    :type spec_file: :py:class:`pathlib.Path`

    :param out_dir: Directory to write the data files into.
    :type out_dir: :py:class:`pathlib.Path`

    :param config: Run settings.
    :type config: :py:class:`royalty_cmd.lib.Config`

    :param int seed: Master seed to use instead of the file's.

    :returns: Raw assets and quotes.
    :rtype: 2-tuple
    """
    spec = load_spec(spec_file, seed)
    raw_assets = core_synth.generate_population(spec, config.max_workers)
    dataset, _ = ingest.build_dataset(
        raw_assets,
        zero_floor=config.zero_floor,
        tolerance=config.dollar_age_tolerance,
        max_workers=config.max_workers,
    )
    settings = spec.quotes
    surfaces = curves.build_surfaces(
        dataset,
        range(1, max(group.age_years for group in spec.groups) + 1),
        levels=sorted(
            set(config.percentile_levels)
            | {settings.bid_level, settings.ask_level}
        ),
        max_horizon=settings.max_duration,
        min_cohort=config.min_cohort,
    )
    quotes = core_synth.gen_quotes(
        dataset,
        surfaces,
        seed=spec.seed,
        **attr.asdict(settings)
    )
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, write, items in (
        ('cashflows', ingest.write_cashflows, raw_assets),
        ('assets', ingest.write_assets, raw_assets),
        ('quotes', market.write_quotes, quotes),
    ):
        path = out_dir / '{}.csv'.format(name)
        with path.open('wt', newline='') as f:
            write(items, f)
        logger.info('Wrote {}'.format(path))
    return raw_assets, quotes
