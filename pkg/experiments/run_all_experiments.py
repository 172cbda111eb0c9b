"""
Run All Experiments - Batch execution
Executes every experiment script and collects the acceptance tables into one summary
"""

import sys
import os
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import argparse
import subprocess
from datetime import datetime
from pathlib import Path
import pandas as pd
from tabulate import tabulate

from src.utils import create_experiment_logger, create_output_dirs, format_time, load_config

EXPERIMENTS = [
    ('exp1_angle_operator.py', 'exp1_angle_operator.csv'),
    ('exp2_phase_variance.py', 'exp2_phase_variance.csv'),
    ('exp3_quantizer_structure.py', 'exp3_quantizer_structure.csv'),
    ('exp4_phase_equivalence.py', 'exp4_phase_equivalence.csv'),
    ('exp5_uncertainty.py', 'exp5_uncertainty.csv'),
]

EXPERIMENT_TIMEOUT = 3600


def parse_args():
    parser = argparse.ArgumentParser(description='Run all experiments')
    parser.add_argument('--config', default=None,
                        help='Config file (default: config/default_config.yaml)')
    parser.add_argument('--only', nargs='+', default=None,
                        help='Run only these scripts, e.g. exp1_angle_operator.py')
    parser.add_argument('--only-summary', action='store_true',
                        help='Only collect existing result tables')
    parser.add_argument('--debug', action='store_true', help='Enable debug logging')
    return parser.parse_args()


def run_experiment(script, config, debug, logger):
    """Run a single experiment script in a fresh interpreter"""
    logger.info(f"Running {script}...")

    cmd = [sys.executable, str(Path(__file__).resolve().parent / script)]
    if config:
        cmd.extend(['--config', config])
    if debug:
        cmd.append('--debug')

    try:
        result = subprocess.run(cmd, capture_output=True, text=True, timeout=EXPERIMENT_TIMEOUT)
    except subprocess.TimeoutExpired:
        logger.error(f"⏱️ {script} timed out (>{EXPERIMENT_TIMEOUT}s)")
        return False

    if result.returncode == 0:
        logger.info(f"✅ {script} completed successfully")
        return True
    logger.error(f"❌ {script} failed (exit {result.returncode}):")
    logger.error(result.stderr[-4000:])
    return False


def collect_summary(metrics_dir, logger):
    """Concatenate the per-experiment acceptance tables"""
    logger.info("\nCollecting acceptance tables...")

    tables = []
    for script, filename in EXPERIMENTS:
        path = metrics_dir / filename
        if path.exists():
            table = pd.read_csv(path)
            table.insert(0, 'experiment', Path(script).stem)
            tables.append(table)
            logger.info(f"  Loaded {filename}: {len(table)} checks")
        else:
            logger.warning(f"  Missing {filename}")

    if not tables:
        logger.error("No result tables found")
        return None

    summary = pd.concat(tables, ignore_index=True).sort_values(['criterion', 'experiment'],
                                                               kind='stable')
    summary.to_csv(metrics_dir / 'summary.csv', index=False)

    display = summary[['criterion', 'check', 'value', 'deviation', 'tolerance', 'passed']]
    logger.info("\n" + "=" * 60)
    logger.info("ACCEPTANCE SUMMARY")
    logger.info("=" * 60)
    logger.info("\n" + tabulate(display, headers='keys', tablefmt='github', showindex=False,
                                floatfmt='.3e', missingval='-'))
    logger.info(f"\nSummary saved to: {metrics_dir / 'summary.csv'}")
    return summary


def main():
    args = parse_args()
    config = load_config(args.config)
    dirs = create_output_dirs(config)
    logger = create_experiment_logger('batch', dirs['logs'] / 'batch', args.debug)

    logger.info("=" * 60)
    logger.info("BATCH EXPERIMENT EXECUTION")
    logger.info("=" * 60)
    logger.info(f"Config: {args.config or 'defaults'}")
    logger.info("=" * 60)

    results = {}
    if not args.only_summary:
        scripts = [script for script, _ in EXPERIMENTS
                   if args.only is None or script in args.only]
        start_time = datetime.now()

        for script in scripts:
            exp_start = datetime.now()
            success = run_experiment(script, args.config, args.debug, logger)
            results[script] = {'success': success,
                               'time': (datetime.now() - exp_start).total_seconds()}

        total_time = (datetime.now() - start_time).total_seconds()

        logger.info("\n" + "=" * 60)
        logger.info("EXECUTION SUMMARY")
        logger.info("=" * 60)
        for script, result in results.items():
            status = "✅ SUCCESS" if result['success'] else "❌ FAILED"
            logger.info(f"{script:32s} {status:15s} {format_time(result['time'])}")
        logger.info("=" * 60)
        logger.info(f"Total time: {format_time(total_time)}")

        successful = sum(1 for r in results.values() if r['success'])
        logger.info(f"Success rate: {successful}/{len(results)} experiments")

    summary = collect_summary(dirs['metrics'], logger)

    logger.info("\n" + "=" * 60)
    logger.info("BATCH EXECUTION COMPLETE")
    logger.info("=" * 60)

    if summary is None or not all(r['success'] for r in results.values()):
        return 1
    return 0 if not (summary['passed'] == False).any() else 1  # noqa: E712


if __name__ == '__main__':
    sys.exit(main())
