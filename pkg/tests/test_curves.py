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
"""Royalty-Cmd curves sub-command plug-in unit tests
"""
import collections
import json
from pathlib import Path
from types import SimpleNamespace
from unittest.mock import Mock, patch

import cliff.app
import pytest

import royalty_cmd.curves
import royalty_cmd.lib
from royalty_cmd.core import curves, model


@pytest.fixture
def curves_cmd():
    return royalty_cmd.curves.Curves(Mock(spec=cliff.app.App), [])


class TestParser:
    """Unit tests for `royalty curves` sub-command command-line parser.
    """

    def test_get_parser(self, curves_cmd):
        parser = curves_cmd.get_parser('royalty curves')
        assert parser.prog == 'royalty curves'

    def test_parsed_args_defaults(self, curves_cmd):
        parser = curves_cmd.get_parser('royalty curves')
        parsed_args = parser.parse_args(['c.csv', 'a.csv', '--age', '3'])
        assert parsed_args.cashflows_file == Path('c.csv')
        assert parsed_args.assets_file == Path('a.csv')
        assert parsed_args.ages == [3]
        assert parsed_args.percentile_levels is None
        assert parsed_args.min_cohort is None
        assert parsed_args.max_duration is None
        assert parsed_args.out_dir == Path('.')

    def test_repeated_age(self, curves_cmd):
        parser = curves_cmd.get_parser('royalty curves')
        parsed_args = parser.parse_args(
            ['c.csv', 'a.csv', '--age', '3', '--age', '1']
        )
        assert parsed_args.ages == [3, 1]

    def test_age_required(self, curves_cmd):
        parser = curves_cmd.get_parser('royalty curves')
        with pytest.raises(SystemExit):
            parser.parse_args(['c.csv', 'a.csv'])

    @pytest.mark.parametrize(
        'flags, attr, expected', [
            (['--levels', '25,75'], 'percentile_levels', '25,75'),
            (['--min-cohort', '3'], 'min_cohort', 3),
            (['--max-duration', '5'], 'max_duration', 5),
        ]
    )
    def test_parsed_args_flags(self, flags, attr, expected, curves_cmd):
        parser = curves_cmd.get_parser('royalty curves')
        parsed_args = parser.parse_args(['c.csv', 'a.csv', '--age', '1'] +
                                        flags)
        assert getattr(parsed_args, attr) == expected


@patch('royalty_cmd.curves.logger')
class TestTakeAction:
    """Unit tests for `royalty curves` sub-command take_action() method.
    """

    def parsed_args(self, ages):
        return SimpleNamespace(
            cashflows_file=Path('c.csv'),
            assets_file=Path('a.csv'),
            ages=ages,
            config=None,
            out_dir=Path('out'),
        )

    @patch('royalty_cmd.curves.curves')
    def test_take_action(self, m_curves, m_logger, curves_cmd):
        m_curves.return_value = collections.OrderedDict([
            (1, model.ShareSurface(1, [50], 1, {(1, 50): 1.0}, {1: 5}))
        ])
        curves_cmd.take_action(self.parsed_args([1]))
        m_curves.assert_called_once_with(
            Path('c.csv'), Path('a.csv'), [1], royalty_cmd.lib.Config(),
            Path('out')
        )
        assert not m_logger.error.called

    @patch('royalty_cmd.curves.curves')
    def test_empty_surface(self, m_curves, m_logger, curves_cmd):
        m_curves.return_value = collections.OrderedDict([
            (1, model.ShareSurface(1, [50], 1, {(1, 50): 1.0}, {1: 5})),
            (9, model.ShareSurface(9, [50], 2, {}, {1: 3, 2: 0})),
        ])
        with pytest.raises(SystemExit) as exc_info:
            curves_cmd.take_action(self.parsed_args([1, 9]))
        assert exc_info.value.code == 2
        m_logger.error.assert_called_once_with(
            'no cohort for base age 9 has at least 5 assets; the largest '
            'has 3'
        )


class TestCurves:
    """Unit tests for curves() function.
    """

    def test_flat_population(self, flat_data, tmp_path):
        out_dir = tmp_path / 'out'
        surfaces = royalty_cmd.curves.curves(
            flat_data / 'cashflows.csv', flat_data / 'assets.csv', [1],
            royalty_cmd.lib.Config(), out_dir
        )
        assert surfaces[1].populated_horizons == (1, 2, 3, 4)
        assert all(share == 1.0 for share in surfaces[1].values.values())
        lines = (out_dir / 'surface_t1.csv').read_text().splitlines()
        assert lines[0] == 'base_age,horizon,level,share,cohort_size'
        assert lines[1] == '1,1,10,1.000000,6'
        assert len(lines) == 1 + 4 * 3

    def test_byte_identical_runs(self, market_data, tmp_path):
        for out_dir, workers in (('one', 1), ('again', 1), ('four', 4)):
            royalty_cmd.curves.curves(
                market_data / 'cashflows.csv', market_data / 'assets.csv',
                [1, 2], royalty_cmd.lib.Config(max_workers=workers),
                tmp_path / out_dir
            )
        for name in ('surface_t1.csv', 'surface_t2.csv'):
            expected = (tmp_path / 'one' / name).read_bytes()
            assert (tmp_path / 'again' / name).read_bytes() == expected
            assert (tmp_path / 'four' / name).read_bytes() == expected

    def test_json_output(self, flat_data, tmp_path):
        config = royalty_cmd.lib.Config(output_format='json')
        surfaces = royalty_cmd.curves.curves(
            flat_data / 'cashflows.csv', flat_data / 'assets.csv', [2],
            config, tmp_path
        )
        path = tmp_path / 'surface_t2.json'
        data = json.loads(path.read_text())
        assert data['base_age'] == 2
        assert curves.read_surface(path) == surfaces[2]

    def test_base_age_too_large(self, flat_data, tmp_path):
        surfaces = royalty_cmd.curves.curves(
            flat_data / 'cashflows.csv', flat_data / 'assets.csv', [1, 40],
            royalty_cmd.lib.Config(), tmp_path
        )
        assert surfaces[40].is_empty()
        assert not (tmp_path / 'surface_t40.csv').exists()
        assert (tmp_path / 'surface_t1.csv').exists()

    def test_min_cohort(self, flat_data, tmp_path):
        config = royalty_cmd.lib.Config(min_cohort=7)
        surfaces = royalty_cmd.curves.curves(
            flat_data / 'cashflows.csv', flat_data / 'assets.csv', [1], config,
            tmp_path
        )
        assert surfaces[1].is_empty()
        assert surfaces[1].counts[1] == 6
