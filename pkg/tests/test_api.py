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
"""Royalty-Cmd api module unit tests
"""
from decimal import Decimal
from pathlib import Path
from unittest.mock import patch

import pytest

import royalty_cmd.api
from royalty_cmd.core import model
from royalty_cmd.lib import Config


class TestValidate:
    """Unit tests for api.validate() function.
    """

    @patch('royalty_cmd.api.validate_plugin.validate')
    def test_validate(self, m_validate):
        royalty_cmd.api.validate('c.csv', 'a.csv')
        m_validate.assert_called_once_with(
            Path('c.csv'), Path('a.csv'), Config(), Path('.')
        )

    @patch('royalty_cmd.api.validate_plugin.validate')
    def test_config(self, m_validate):
        config = Config(zero_floor='10')
        royalty_cmd.api.validate('c.csv', 'a.csv', config, 'out')
        m_validate.assert_called_once_with(
            Path('c.csv'), Path('a.csv'), config, Path('out')
        )


class TestCurves:
    """Unit tests for api.curves() function.
    """

    @patch('royalty_cmd.api.curves_plugin.curves')
    def test_curves(self, m_curves):
        royalty_cmd.api.curves('c.csv', 'a.csv', [1, 2], out_dir='out')
        m_curves.assert_called_once_with(
            Path('c.csv'), Path('a.csv'), [1, 2], Config(), Path('out')
        )


class TestMultipliers:
    """Unit tests for api.multipliers() function.
    """

    @patch('royalty_cmd.api.multipliers_plugin.multipliers')
    def test_default_durations(self, m_multipliers):
        royalty_cmd.api.multipliers(['surface_t3.csv'])
        m_multipliers.assert_called_once_with(
            [Path('surface_t3.csv')], None, list(range(1, 11)), Config(),
            Path('.')
        )

    @patch('royalty_cmd.api.multipliers_plugin.multipliers')
    def test_durations(self, m_multipliers):
        config = Config(max_duration=12)
        royalty_cmd.api.multipliers(
            ['c.csv', 'a.csv'], 2, [5, 1, 5], config, 'out'
        )
        m_multipliers.assert_called_once_with(
            [Path('c.csv'), Path('a.csv')], 2, [1, 5], config, Path('out')
        )

    def test_annuity_table(self, surface_csv, tmp_path):
        table = royalty_cmd.api.multipliers(
            [str(surface_csv(3, 10))], durations=[10], out_dir=str(tmp_path)
        )
        assert table.entry(10, 90) == pytest.approx(6.14456711, abs=1e-8)


class TestValue:
    """Unit tests for api.value() function.
    """

    @pytest.mark.parametrize('ltm', [10000, '10000', Decimal('10000')])
    @patch('royalty_cmd.api.value_plugin.value')
    def test_value(self, m_value, ltm):
        royalty_cmd.api.value(['surface_t3.csv'], ltm, 10)
        m_value.assert_called_once_with(
            [Path('surface_t3.csv')], None, Decimal('10000'), 10, Config(),
            Path('.')
        )

    @patch('royalty_cmd.api.value_plugin.value')
    def test_bad_ltm(self, m_value):
        with pytest.raises(model.DomainError):
            royalty_cmd.api.value(['surface_t3.csv'], -1, 10)
        assert not m_value.called


class TestCompare:
    """Unit tests for api.compare() function.
    """

    @patch('royalty_cmd.api.compare_plugin.compare')
    def test_compare(self, m_compare):
        royalty_cmd.api.compare('c.csv', 'a.csv', 'q.csv')
        m_compare.assert_called_once_with(
            Path('c.csv'), Path('a.csv'), Path('q.csv'), Config(), Path('.')
        )


class TestSynth:
    """Unit tests for api.synth() function.
    """

    @patch('royalty_cmd.api.synth_plugin.synth')
    def test_synth(self, m_synth):
        royalty_cmd.api.synth('spec.yaml', 'data', seed=3)
        m_synth.assert_called_once_with(
            Path('spec.yaml'), Path('data'), Config(), 3
        )

    def test_synth_then_validate(self, write_spec, tmp_path):
        spec_file = write_spec([(4, 0.0, 0.1, 3)])
        data_dir = tmp_path / 'data'
        raw_assets, quotes = royalty_cmd.api.synth(
            str(spec_file), str(data_dir)
        )
        assert len(raw_assets) == 4
        report = royalty_cmd.api.validate(
            data_dir / 'cashflows.csv', data_dir / 'assets.csv',
            out_dir=tmp_path / 'out'
        )
        assert len(report.accepted) == 4
        assert report.rejected == []
