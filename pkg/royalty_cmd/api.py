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
"""Royalty command processor API

Application programming interface for the royalty command processor.
Provides Python function interfaces to command processor sub-commands
for use in other sub-command processor modules,
and by other software.

File path arguments may be strings or :py:class:`pathlib.Path` objects.
When config is :py:obj:`None` the default settings are used.
"""
import logging
from pathlib import Path

from royalty_cmd import compare as compare_plugin
from royalty_cmd import curves as curves_plugin
from royalty_cmd import lib
from royalty_cmd import multipliers as multipliers_plugin
from royalty_cmd import synth as synth_plugin
from royalty_cmd import validate as validate_plugin
from royalty_cmd import value as value_plugin

logger = logging.getLogger(__name__)


def _config(config):
    return lib.Config() if config is None else config


def validate(cashflows_file, assets_file, config=None, out_dir='.'):
    """Filter the assets in the data files and write the filter report.

    :returns: Filter report.
    :rtype: :py:class:`royalty_cmd.core.ingest.FilterReport`
    """
    return validate_plugin.validate(
        Path(cashflows_file), Path(assets_file), _config(config), Path(out_dir)
    )


def curves(cashflows_file, assets_file, ages, config=None, out_dir='.'):
    """Build and write a share surface for each base age in ages.

    :returns: Surfaces keyed by base age.
    :rtype: :py:class:`collections.OrderedDict`
    """
    return curves_plugin.curves(
        Path(cashflows_file), Path(assets_file), ages, _config(config),
        Path(out_dir)
    )


def multipliers(sources, age=None, durations=None, config=None, out_dir='.'):
    """Compute and write the multiplier table of a surface.

    :param sources: One surface file path,
                    or the cashflows and assets file paths.

    :param int age: Base age; required with data files.

    :param durations: Contract durations;
                      defaults to 1 through ``config.max_duration``.

    :rtype: :py:class:`royalty_cmd.core.model.MultiplierTable`
    """
    config = _config(config)
    if durations is None:
        durations = range(1, config.max_duration + 1)
    return multipliers_plugin.multipliers(
        [Path(source) for source in sources], age, sorted(set(durations)),
        config, Path(out_dir)
    )


def value(sources, ltm, duration, age=None, config=None, out_dir='.'):
    """Price an asset at each percentile level of a surface.

    :param ltm: Last twelve months revenue, > 0.

    :param int duration: Contract duration in years.

    :returns: (multiplier, price) pairs keyed by percentile level.
    :rtype: dict
    """
    return value_plugin.value(
        [Path(source) for source in sources], age,
        value_plugin.parse_ltm(str(ltm)), duration, _config(config),
        Path(out_dir)
    )


def compare(
    cashflows_file, assets_file, quotes_file, config=None, out_dir='.'
):
    """Compare market quotes with the model and write the result tables.

    :returns: Comparison rows,
              (asset_id, message) error entries,
              and (quote, reason) screened-out pairs.
    :rtype: 3-tuple
    """
    return compare_plugin.compare(
        Path(cashflows_file), Path(assets_file), Path(quotes_file),
        _config(config), Path(out_dir)
    )


def synth(spec_file, out_dir, config=None, seed=None):
    """Generate a synthetic population and write its data files.

    :returns: Raw assets and quotes.
    :rtype: 2-tuple
    """
    return synth_plugin.synth(
        Path(spec_file), Path(out_dir), _config(config), seed
    )
