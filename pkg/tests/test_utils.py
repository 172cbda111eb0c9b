import logging

import numpy as np
import pandas as pd
import pytest

from src.errors import ConfigurationError
from src.utils import (CRITERIA_COLUMNS, create_output_dirs, criterion_row, format_time,
                       get_num_threads, load_config, merge_configs, parse_angle,
                       parse_index_pairs, read_json, save_criteria, setup_logging, write_json)


@pytest.mark.parametrize('text, expected', [
    ('-pi', -np.pi),
    ('pi/2', np.pi / 2),
    ('2pi/3', 2 * np.pi / 3),
    ('0.25', 0.25),
    (1, 1.0),
])
def test_parse_angle(text, expected):
    assert parse_angle(text) == pytest.approx(expected)


@pytest.mark.parametrize('text', ['tau', 'pi/x', 'xpi'])
def test_parse_angle_rejects_garbage(text):
    with pytest.raises(ConfigurationError):
        parse_angle(text)


def test_parse_index_pairs():
    assert parse_index_pairs('1,0; 2,0;') == [(1, 0), (2, 0)]
    with pytest.raises(ConfigurationError):
        parse_index_pairs(';')
    with pytest.raises(ConfigurationError):
        parse_index_pairs('1,0,3')


def test_merge_configs_is_recursive():
    default = {'a': {'x': 1, 'y': 2}, 'b': 3}
    merged = merge_configs(default, {'a': {'y': 5}, 'c': 4})
    assert merged == {'a': {'x': 1, 'y': 5}, 'b': 3, 'c': 4}
    assert default['a']['y'] == 2


def test_load_config(tmp_path):
    defaults = load_config()
    assert defaults['quadrature']['nodes_per_panel'] == 64
    override = tmp_path / 'small.yaml'
    override.write_text('angle:\n  n_ladder: [2, 4]\n')
    merged = load_config(str(override))
    assert merged['angle']['n_ladder'] == [2, 4]
    assert merged['angle']['norm_N'] == defaults['angle']['norm_N']
    with pytest.raises(ConfigurationError):
        load_config(str(tmp_path / 'missing.yaml'))


def test_get_num_threads(monkeypatch):
    monkeypatch.delenv('CYLQUANT_NUM_THREADS', raising=False)
    assert get_num_threads() == 1
    monkeypatch.setenv('CYLQUANT_NUM_THREADS', '4')
    assert get_num_threads() == 4
    monkeypatch.setenv('CYLQUANT_NUM_THREADS', '0')
    assert get_num_threads() == 1
    monkeypatch.setenv('CYLQUANT_NUM_THREADS', 'many')
    with pytest.raises(ConfigurationError):
        get_num_threads()


def test_json_helpers(tmp_path):
    path = tmp_path / 'nested' / 'data.json'
    write_json({'b': 1, 'a': [1.5, 2]}, str(path))
    assert read_json(str(path)) == {'a': [1.5, 2], 'b': 1}


def test_output_dirs_and_logging(tmp_path):
    config = {
        'experiment': {'name': 'unit'},
        'logging': {'level': 'DEBUG', 'console': False, 'file': True,
                    'log_dir': str(tmp_path / 'logs')},
        'output': {'results_dir': str(tmp_path / 'results'),
                   'metrics_dir': str(tmp_path / 'results' / 'metrics'),
                   'matrices_dir': str(tmp_path / 'results' / 'matrices')},
    }
    dirs = create_output_dirs(config)
    assert all(path.is_dir() for path in dirs.values())

    logger = setup_logging(config)
    assert logger.level == logging.DEBUG
    logger.info('hello')
    for handler in logger.handlers:
        handler.flush()
    assert 'hello' in (tmp_path / 'logs' / 'unit.log').read_text()
    for handler in list(logger.handlers):
        handler.close()
        logger.removeHandler(handler)


def test_criterion_row():
    row = criterion_row(2, 'column norm', 1.8125, reference=1.8138, tolerance=1.2e-3)
    assert set(row) == set(CRITERIA_COLUMNS)
    assert row['deviation'] == pytest.approx(1.3e-3)
    assert row['passed'] is False
    assert criterion_row(1, 'defect', 0.0, deviation=0.0, tolerance=1e-12)['passed'] is True
    report_only = criterion_row(10, 'violations', 3)
    assert report_only['passed'] is None
    assert report_only['deviation'] is None


def test_save_criteria(tmp_path):
    rows = [criterion_row(1, 'exact', 0.0, deviation=0.0, tolerance=1e-12),
            criterion_row(10, 'report only', 4)]
    path = tmp_path / 'metrics' / 'criteria.csv'
    assert save_criteria(rows, path)
    assert list(pd.read_csv(path).columns) == CRITERIA_COLUMNS
    rows.append(criterion_row(2, 'off', 1.0, reference=0.0, tolerance=0.5))
    assert not save_criteria(rows, path)


@pytest.mark.parametrize('seconds, expected', [(4.5, '4.5s'), (75, '1m 15.0s'),
                                               (3725, '1h 2m 5.0s')])
def test_format_time(seconds, expected):
    assert format_time(seconds) == expected
