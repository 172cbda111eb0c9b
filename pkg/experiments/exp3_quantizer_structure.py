"""
Experiment 3: Restricted Quantizer Structure
Hermiticity, unit trace and resolution of identity of Omega_N[K](Theta, n),
and agreement of the closed Weyl/symmetric forms with the general n-sum
"""

import sys
import os
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import argparse
import numpy as np
from tqdm import tqdm

from src.kernel import SYMMETRIC_KERNEL, WEYL_KERNEL
from src.observable import make_builtin
from src.operators import hermiticity_defect, trace
from src.quantizer import WeylQuantizer
from src.utils import (create_experiment_logger, create_output_dirs, criterion_row,
                       load_config, save_criteria)

STRUCTURE_TOL = 1e-10
CLOSED_FORM_TOL = 1e-10

CLOSED_FORM_OBSERVABLES = ('angle', 'angle_squared', 'momentum', 'momentum_angle', 'cos_angle')


def parse_args():
    parser = argparse.ArgumentParser(description='Quantizer Structure Experiment')
    parser.add_argument('--config', type=str, default=None,
                        help='Path to configuration file (default: config/default_config.yaml)')
    parser.add_argument('--debug', action='store_true',
                        help='Enable debug logging')
    return parser.parse_args()


def structure_defects(quantizer, kernel, rng, trials):
    """Worst hermiticity, trace and projection defects over random (Theta, n)"""
    N = quantizer.N
    hermiticity, trace_defect, projection = 0.0, 0.0, 0.0
    for _ in range(trials):
        theta = float(rng.uniform(-np.pi, np.pi))
        n = int(rng.integers(-N, N + 1))
        omega = quantizer.restricted_quantizer(kernel, theta, n)
        hermiticity = max(hermiticity, hermiticity_defect(omega))
        trace_defect = max(trace_defect, abs(trace(omega) - 1.0))
        if N >= 1 and abs(n) <= N - 1:
            projection = max(projection, quantizer.projection_defect(kernel, theta, n, N - 1))
    return hermiticity, trace_defect, projection


def run_structure_experiment(config_path=None, debug=False):
    config = load_config(config_path)
    dirs = create_output_dirs(config)
    logger = create_experiment_logger('exp3_quantizer_structure', dirs['logs'] / 'exp3', debug)

    quant_config = config['quantization']
    N_max = int(quant_config['structure_N_max'])
    trials = int(quant_config['structure_trials'])
    rng = np.random.default_rng(int(config['experiment']['random_seed']))

    logger.info("=" * 60)
    logger.info("EXPERIMENT 3: RESTRICTED QUANTIZER STRUCTURE")
    logger.info("=" * 60)
    logger.info(f"N range: 1..{N_max}, {trials} random (Theta, n) per N")

    observables = {name: make_builtin(name) for name in CLOSED_FORM_OBSERVABLES}
    worst = {}

    for N in tqdm(range(1, N_max + 1), desc="Truncations"):
        quantizer = WeylQuantizer(config, logger, N=N)
        for kernel in (WEYL_KERNEL, SYMMETRIC_KERNEL):
            hermiticity, trace_defect, projection = structure_defects(quantizer, kernel, rng, trials)
            resolution = quantizer.resolution_of_identity_defect(kernel)
            trace_identity = quantizer.trace_identity_defect(observables['angle_squared'], kernel)

            closed = (quantizer.weyl_apply_closed_weyl if kernel == WEYL_KERNEL
                      else quantizer.weyl_apply_closed_symmetric)
            closed_form = max(quantizer.weyl_apply(f, kernel).max_abs_diff(closed(f))
                              for f in observables.values())

            for check, value in (('hermiticity', hermiticity), ('trace', trace_defect),
                                 ('resolution', resolution), ('projection', projection),
                                 ('trace identity', trace_identity), ('closed form', closed_form)):
                key = (check, kernel.name)
                worst[key] = max(worst.get(key, 0.0), value)

            logger.debug(f"N={N} {kernel.name}: hermiticity {hermiticity:.2e}, "
                         f"trace {trace_defect:.2e}, resolution {resolution:.2e}, "
                         f"closed form {closed_form:.2e}")

    criterion_of = {'hermiticity': 5, 'trace': 5, 'resolution': 5, 'projection': 5,
                    'trace identity': 5, 'closed form': 6}
    rows = []
    for (check, kernel_name), value in worst.items():
        tolerance = CLOSED_FORM_TOL if check == 'closed form' else STRUCTURE_TOL
        rows.append(criterion_row(criterion_of[check], f'{kernel_name} {check} N<={N_max}', value,
                                  deviation=value, tolerance=tolerance))
        logger.info(f"{kernel_name:10s} {check:15s} worst defect {value:.3e}")

    logger.info(f"\n{'=' * 60}")
    logger.info("EXPERIMENT COMPLETED")
    logger.info(f"{'=' * 60}")
    return save_criteria(rows, dirs['metrics'] / 'exp3_quantizer_structure.csv', logger)


if __name__ == '__main__':
    args = parse_args()
    sys.exit(0 if run_structure_experiment(args.config, args.debug) else 1)
