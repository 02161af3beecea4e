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
"""Fixtures shared by the sub-command plug-in tests.
"""
import json

import pytest

import royalty_cmd.lib
import royalty_cmd.synth


def _write_spec(path, groups, seed=42, quotes=None):
    spec = {
        'groups': [{
            'count': count,
            'annual_growth': g,
            'noise_sigma': sigma,
            'age_years': age,
            'initial_revenue': 1e6,
        } for count, g, sigma, age in groups],
        'seed': seed,
    }
    if quotes is not None:
        spec['quotes'] = quotes
    path.write_text(json.dumps(spec, indent=2))
    return path


#: Two decaying groups at two ages;
#: every model multiplier is below 3.
MARKET_GROUPS = [
    (5, -0.4, 0.0, 4),
    (5, -0.3, 0.0, 4),
    (5, -0.4, 0.0, 14),
    (5, -0.3, 0.0, 14),
]


@pytest.fixture
def market_groups():
    return list(MARKET_GROUPS)


@pytest.fixture
def write_spec(tmp_path):
    """Factory of population spec files for (count, g, sigma, age) groups.
    """

    def write(groups, seed=42, quotes=None, name='spec.json'):
        return _write_spec(tmp_path / name, groups, seed, quotes)

    return write


@pytest.fixture
def market_data(tmp_path):
    """Synthetic cashflows, assets and quotes files.
    """
    spec_file = _write_spec(tmp_path / 'spec.json', MARKET_GROUPS)
    data_dir = tmp_path / 'data'
    royalty_cmd.synth.synth(spec_file, data_dir, royalty_cmd.lib.Config())
    return data_dir


@pytest.fixture
def flat_data(tmp_path):
    """Synthetic data files of 6 identical 5 year old assets.
    """
    spec_file = _write_spec(tmp_path / 'flat.json', [(6, 0.0, 0.0, 5)])
    data_dir = tmp_path / 'flat'
    royalty_cmd.synth.synth(spec_file, data_dir, royalty_cmd.lib.Config())
    return data_dir


@pytest.fixture
def surface_csv(tmp_path):
    """Factory of surface CSV files with the same share at every cell.
    """

    def write(base_age, horizons, share=1.0):
        path = tmp_path / 'surface_t{}.csv'.format(base_age)
        lines = ['base_age,horizon,level,share,cohort_size']
        for i in range(1, horizons + 1):
            for level in (10, 50, 90):
                lines.append('{},{},{},{},5'.format(base_age, i, level, share))
        path.write_text('\n'.join(lines) + '\n')
        return path

    return write
