"""
Experiment 5: Angle/Angular-Momentum Uncertainty
Worked states, a rejection-sampled batch of centred circle states, and the
phase/number conjecture batch (report only)
"""

import sys
import os
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import argparse
import numpy as np

from src.operators import StateVector, basis_state
from src.uncertainty import (check_theta_l_uncertainty, count_violations, random_number_states,
                             run_circle_batch, run_conjecture_batch, sample_centered_states)
from src.utils import (create_experiment_logger, create_output_dirs, criterion_row,
                       load_config, save_criteria)

WORKED_STATE_TOL = 1e-6


def parse_args():
    parser = argparse.ArgumentParser(description='Uncertainty Relation Experiment')
    parser.add_argument('--config', type=str, default=None,
                        help='Path to configuration file (default: config/default_config.yaml)')
    parser.add_argument('--debug', action='store_true',
                        help='Enable debug logging')
    return parser.parse_args()


def run_uncertainty_experiment(config_path=None, debug=False):
    config = load_config(config_path)
    dirs = create_output_dirs(config)
    logger = create_experiment_logger('exp5_uncertainty', dirs['logs'] / 'exp5', debug)

    unc_config = config['uncertainty']
    N = int(unc_config['N'])
    batch_size = int(unc_config['batch_size'])
    centering_tol = float(unc_config['centering_tol'])
    seed = int(config['experiment']['random_seed'])

    logger.info("=" * 60)
    logger.info("EXPERIMENT 5: ANGLE/ANGULAR-MOMENTUM UNCERTAINTY")
    logger.info("=" * 60)
    logger.info(f"Truncation N: {N}, batch size: {batch_size}, seed: {seed}")

    rows = []

    # Worked states
    vacuum = check_theta_l_uncertainty(basis_state(0, -N, N), N, centering_tol=centering_tol)
    rows.append(criterion_row(9, '|0> equality case lhs - rhs', vacuum.lhs - vacuum.rhs,
                              reference=0.0, tolerance=WORKED_STATE_TOL))

    two_level = StateVector.from_coefficients([1.0, 1.0], lo=0).normalized()
    report = check_theta_l_uncertainty(two_level, N, centering_tol=centering_tol)
    rows.append(criterion_row(9, '(|0>+|1>)/sqrt2 lhs', report.lhs,
                              reference=0.5 * np.sqrt(np.pi ** 2 / 3 - 2.0),
                              tolerance=WORKED_STATE_TOL))
    rows.append(criterion_row(9, '(|0>+|1>)/sqrt2 rhs', report.rhs,
                              reference=0.5, tolerance=WORKED_STATE_TOL))
    logger.info(f"(|0>+|1>)/sqrt2: dTheta dL = {report.lhs:.9f} >= {report.rhs:.9f}")

    # Centred random states
    states = sample_centered_states(batch_size, N, np.random.default_rng(seed), centering_tol,
                                    int(unc_config['max_attempts']), logger)
    circle = run_circle_batch(states, N, centering_tol=centering_tol, logger=logger,
                              show_progress=True)
    circle.to_csv(dirs['metrics'] / 'exp5_circle_batch.csv', index=False)
    violations = count_violations(circle)
    rows.append(criterion_row(9, f'violations among {len(circle)} centred states N={N}',
                              violations, reference=0, tolerance=0.5))

    # Conjecture harness, reported without a threshold
    number_states = random_number_states(batch_size, N, np.random.default_rng(seed))
    conjecture = run_conjecture_batch(number_states, logger=logger, show_progress=True)
    conjecture.to_csv(dirs['metrics'] / 'exp5_conjecture_batch.csv', index=False)
    rows.append(criterion_row(10, f'phase/number conjecture violations in {len(conjecture)} states',
                              count_violations(conjecture)))

    logger.info(f"\n{'=' * 60}")
    logger.info("EXPERIMENT COMPLETED")
    logger.info(f"{'=' * 60}")
    return save_criteria(rows, dirs['metrics'] / 'exp5_uncertainty.csv', logger)


if __name__ == '__main__':
    args = parse_args()
    sys.exit(0 if run_uncertainty_experiment(args.config, args.debug) else 1)
