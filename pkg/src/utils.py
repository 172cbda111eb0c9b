"""
Utility functions for the cylquant framework
"""

import os
import json
import yaml
import logging
import numpy as np
import pandas as pd
from pathlib import Path
from typing import Dict, List, Tuple, Optional, Any

from .errors import ConfigurationError


DEFAULT_CONFIG_PATH = Path(__file__).resolve().parent.parent / "config" / "default_config.yaml"

THREADS_ENV_VAR = "CYLQUANT_NUM_THREADS"


def load_config(config_path: Optional[str] = None) -> Dict[str, Any]:
    """
    Load configuration from YAML file

    The file is merged over config/default_config.yaml, so override files only
    need to contain the keys they change. Without a path the defaults are returned.

    Args:
        config_path: Path to config file (None = defaults only)

    Returns:
        Configuration dictionary
    """
    with open(DEFAULT_CONFIG_PATH, 'r') as f:
        default_config = yaml.safe_load(f)

    if config_path is None:
        return default_config

    if not os.path.exists(config_path):
        raise ConfigurationError(f"Config file not found: {config_path}")

    with open(config_path, 'r') as f:
        config = yaml.safe_load(f) or {}

    if Path(config_path).resolve() == DEFAULT_CONFIG_PATH:
        return config

    return merge_configs(default_config, config)


def merge_configs(default: Dict, override: Dict) -> Dict:
    """
    Merge two configuration dictionaries

    Args:
        default: Default configuration
        override: Override configuration

    Returns:
        Merged configuration
    """
    result = default.copy()
    for key, value in override.items():
        if key in result and isinstance(result[key], dict) and isinstance(value, dict):
            result[key] = merge_configs(result[key], value)
        else:
            result[key] = value
    return result


def setup_logging(config: Dict) -> logging.Logger:
    """
    Setup logging configuration

    Args:
        config: Configuration dictionary

    Returns:
        Logger instance
    """
    log_config = config.get('logging', {})
    log_level = getattr(logging, str(log_config.get('level', 'INFO')).upper())

    logger = logging.getLogger('cylquant')
    logger.setLevel(log_level)

    # Avoid duplicate handlers when called twice in one process
    if logger.handlers:
        logger.handlers.clear()

    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )

    if log_config.get('console', True):
        console_handler = logging.StreamHandler()
        console_handler.setLevel(log_level)
        console_handler.setFormatter(formatter)
        logger.addHandler(console_handler)

    if log_config.get('file', False):
        log_dir = Path(log_config.get('log_dir', './results/logs'))
        log_dir.mkdir(parents=True, exist_ok=True)

        experiment_name = config.get('experiment', {}).get('name', 'cylquant')
        file_handler = logging.FileHandler(log_dir / f"{experiment_name}.log")
        file_handler.setLevel(log_level)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    return logger


def create_experiment_logger(name: str, log_dir: Path, debug: bool = False) -> logging.Logger:
    """
    Console + file logger for one experiment script, writing <log_dir>/<name>.log

    Library modules log through the 'src' hierarchy; their records are
    routed to the same handlers.
    """
    log_dir = Path(log_dir)
    log_dir.mkdir(parents=True, exist_ok=True)
    level = logging.DEBUG if debug else logging.INFO

    logger = logging.getLogger(name)
    logger.setLevel(level)
    if logger.handlers:
        logger.handlers.clear()

    formatter = logging.Formatter('%(asctime)s - %(levelname)s - %(message)s')

    console_handler = logging.StreamHandler()
    console_handler.setLevel(level)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    file_handler = logging.FileHandler(log_dir / f"{name}.log")
    file_handler.setLevel(level)
    file_handler.setFormatter(formatter)
    logger.addHandler(file_handler)

    library_logger = logging.getLogger('src')
    library_logger.setLevel(level)
    library_logger.handlers = list(logger.handlers)
    library_logger.propagate = False

    return logger


def create_output_dirs(config: Dict) -> Dict[str, Path]:
    """
    Create output directories

    Args:
        config: Configuration dictionary

    Returns:
        Dictionary of output paths
    """
    output_config = config.get('output', {})

    dirs = {
        'results': Path(output_config.get('results_dir', './results')),
        'metrics': Path(output_config.get('metrics_dir', './results/metrics')),
        'matrices': Path(output_config.get('matrices_dir', './results/matrices')),
        'logs': Path(config.get('logging', {}).get('log_dir', './results/logs')),
    }

    for dir_path in dirs.values():
        dir_path.mkdir(parents=True, exist_ok=True)

    return dirs


def parse_angle(value: Any) -> float:
    """
    Parse an angle given as a number or as a string such as "-pi" or "pi/2"

    Args:
        value: Number or string expression in multiples of pi

    Returns:
        Angle in radians
    """
    if isinstance(value, (int, float)):
        return float(value)

    text = str(value).strip().lower().replace(' ', '')
    try:
        return float(text)
    except ValueError:
        pass

    sign = 1.0
    if text.startswith('-'):
        sign, text = -1.0, text[1:]
    elif text.startswith('+'):
        text = text[1:]

    numerator, _, denominator = text.partition('/')
    if not numerator.endswith('pi'):
        raise ConfigurationError(f"Cannot parse angle: {value!r}")
    factor = numerator[:-2].rstrip('*')
    try:
        factor_value = float(factor) if factor else 1.0
        divisor = float(denominator) if denominator else 1.0
    except ValueError as e:
        raise ConfigurationError(f"Cannot parse angle: {value!r}") from e

    return sign * factor_value * np.pi / divisor


def parse_index_pairs(text: str) -> List[Tuple[int, int]]:
    """
    Parse matrix entry list of the form "1,0;2,0"

    Args:
        text: Semicolon separated "j,k" pairs

    Returns:
        List of (j, k) tuples
    """
    pairs = []
    for chunk in text.split(';'):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            j, k = (int(part) for part in chunk.split(','))
        except ValueError as e:
            raise ConfigurationError(f"Invalid entry specification: {chunk!r}") from e
        pairs.append((j, k))

    if not pairs:
        raise ConfigurationError(f"No entries in specification: {text!r}")
    return pairs


def get_num_threads(default: int = 1) -> int:
    """
    Number of worker threads for batch experiments

    Args:
        default: Value used when the environment variable is unset

    Returns:
        Thread count (>= 1)
    """
    raw = os.environ.get(THREADS_ENV_VAR)
    if raw is None:
        return default
    try:
        threads = int(raw)
    except ValueError as e:
        raise ConfigurationError(f"{THREADS_ENV_VAR} must be an integer, got {raw!r}") from e
    return max(1, threads)


def write_json(data: Dict, output_path: str) -> None:
    """
    Write JSON file with sorted keys, creating parent directories

    Args:
        data: JSON-serialisable dictionary
        output_path: Output file path
    """
    path = Path(output_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w') as f:
        json.dump(data, f, sort_keys=True)
        f.write('\n')


def read_json(input_path: str) -> Dict:
    """
    Read JSON file

    Args:
        input_path: Input file path

    Returns:
        Parsed dictionary
    """
    if not os.path.exists(input_path):
        raise ConfigurationError(f"File not found: {input_path}")
    with open(input_path, 'r') as f:
        try:
            return json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"Malformed JSON in {input_path}: {e}") from e


CRITERIA_COLUMNS = ['criterion', 'check', 'value', 'reference', 'deviation',
                    'tolerance', 'passed']


def criterion_row(criterion: int, check: str, value: float, reference: Optional[float] = None,
                  tolerance: Optional[float] = None,
                  deviation: Optional[float] = None) -> Dict[str, Any]:
    """
    One row of an experiment's acceptance table

    Without a tolerance the row is report-only and `passed` is None. The
    deviation defaults to |value - reference|.

    Args:
        criterion: Acceptance criterion number
        check: Short description
        value: Measured value
        reference: Expected value
        tolerance: Maximum allowed deviation
        deviation: Explicit deviation (e.g. a max-norm)

    Returns:
        Row dictionary with CRITERIA_COLUMNS keys
    """
    if deviation is None and reference is not None:
        deviation = abs(float(value) - float(reference))
    passed = None if tolerance is None or deviation is None else bool(deviation < tolerance)
    return {
        'criterion': int(criterion),
        'check': check,
        'value': float(value),
        'reference': None if reference is None else float(reference),
        'deviation': None if deviation is None else float(deviation),
        'tolerance': tolerance,
        'passed': passed,
    }


def save_criteria(rows: List[Dict[str, Any]], output_path: Path,
                  logger: Optional[logging.Logger] = None) -> bool:
    """
    Write an acceptance table as CSV and log the failed checks

    Returns:
        True when no check with a tolerance failed
    """

    logger = logger or logging.getLogger(__name__)
    criteria = pd.DataFrame(rows, columns=CRITERIA_COLUMNS)
    output_path = Path(output_path)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    criteria.to_csv(output_path, index=False)

    failed = criteria[criteria['passed'] == False]  # noqa: E712
    checked = int(criteria['passed'].notna().sum())
    logger.info(f"Results saved to: {output_path}")
    logger.info(f"Checks passed: {checked - len(failed)}/{checked}")
    for _, row in failed.iterrows():
        logger.error(f"  FAILED {row['check']}: deviation {row['deviation']} "
                     f"(tolerance {row['tolerance']})")
    return failed.empty


def format_time(seconds: float) -> str:
    """
    Format time in seconds to human-readable string

    Args:
        seconds: Time in seconds

    Returns:
        Formatted time string
    """
    hours = int(seconds // 3600)
    minutes = int((seconds % 3600) // 60)
    secs = seconds % 60

    if hours > 0:
        return f"{hours}h {minutes}m {secs:.1f}s"
    elif minutes > 0:
        return f"{minutes}m {secs:.1f}s"
    else:
        return f"{secs:.1f}s"
