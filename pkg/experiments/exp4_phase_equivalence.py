"""
Experiment 4: Phase Equivalence
Naimark compression of -Theta against Garrison-Wong, Pegg-Barnett matrix
elements against Garrison-Wong, PB-limit expectations against the POV
measure, and POV sanity on number states
"""

import sys
import os
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import argparse
import numpy as np
import pandas as pd
from tqdm import tqdm

from src.angle import angle_limit_matrix
from src.observable import make_builtin
from src.phase import (gw_phase_element, gw_phase_matrix, naimark_compress, number_state,
                       pb_expectation, pb_phase_element, phase_expectation, pov_density,
                       pov_distribution)
from src.quantizer import WeylQuantizer
from src.uncertainty import random_number_states
from src.utils import (create_experiment_logger, create_output_dirs, criterion_row,
                       load_config, parse_angle, save_criteria)

NAIMARK_TOL = 1e-12
PB_GW_TOL = 1e-3
PB_POV_TOL = 1e-4
DENSITY_TOL = 1e-12
TOTAL_TOL = 1e-10

PB_LADDER = (10, 100, 1000, 10000)
MAX_OFFSET = 5
EXPECTATION_FUNCTIONS = ('identity', 'square', 'cos')


def parse_args():
    parser = argparse.ArgumentParser(description='Phase Equivalence Experiment')
    parser.add_argument('--config', type=str, default=None,
                        help='Path to configuration file (default: config/default_config.yaml)')
    parser.add_argument('--debug', action='store_true',
                        help='Enable debug logging')
    return parser.parse_args()


def pb_gw_rate(s_values, phi0):
    """|<j|Phi_PB|k> - <j|Phi_GW|k>| for k = 0, j - k = 0..MAX_OFFSET along s"""
    rows = []
    for s in s_values:
        for d in range(min(MAX_OFFSET, s) + 1):
            deviation = abs(pb_phase_element(d, 0, s, phi0) - gw_phase_element(d, 0, phi0))
            rows.append({'s': s, 'j': d, 'k': 0, 'deviation': deviation,
                         'scaled_deviation': deviation * (s + 1)})
    return pd.DataFrame(rows)


def run_equivalence_experiment(config_path=None, debug=False):
    config = load_config(config_path)
    dirs = create_output_dirs(config)
    logger = create_experiment_logger('exp4_phase_equivalence', dirs['logs'] / 'exp4', debug)

    phase_config = config['phase']
    s = int(phase_config['s'])
    phi0 = parse_angle(phase_config['phi0'])
    resolution = int(phase_config['pb_limit_resolution'])
    grid = int(phase_config['pov_grid'])
    count = int(phase_config['equivalence_states'])
    rng = np.random.default_rng(int(config['experiment']['random_seed']))

    logger.info("=" * 60)
    logger.info("EXPERIMENT 4: PHASE EQUIVALENCE")
    logger.info("=" * 60)
    logger.info(f"Truncation s: {s}, PB resolution: {resolution}, POV grid: {grid}")

    rows = []

    # Naimark compression of -Theta
    gw = gw_phase_matrix(s, phi0)
    defect = gw.max_abs_diff(-naimark_compress(angle_limit_matrix(s)))
    rows.append(criterion_row(7, f'GW vs compression of -Theta s={s}', defect,
                              deviation=defect, tolerance=NAIMARK_TOL))
    pullback = make_builtin('phase_pullback', g='identity')
    quantized = WeylQuantizer(config, logger, N=s, hbar=1.0).weyl_apply_closed_symmetric(pullback)
    defect = gw.max_abs_diff(naimark_compress(quantized))
    rows.append(criterion_row(7, f'GW vs compressed symmetric quantization of -Theta s={s}',
                              defect, deviation=defect, tolerance=NAIMARK_TOL))
    logger.info(f"Naimark compression defect: {defect:.3e}")

    # PB -> GW at rate O(1/s)
    rate = pb_gw_rate(PB_LADDER, phi0)
    rate.to_csv(dirs['metrics'] / 'exp4_pb_gw_rate.csv', index=False)
    largest = rate[rate['s'] == PB_LADDER[-1]]['deviation'].max()
    rows.append(criterion_row(7, f'PB vs GW |j-k|<={MAX_OFFSET} s={PB_LADDER[-1]}', largest,
                              deviation=largest, tolerance=PB_GW_TOL))
    for s_value, group in rate.groupby('s'):
        logger.info(f"s={s_value:6d}: max |PB - GW| = {group['deviation'].max():.3e}, "
                    f"(s+1) x max = {group['scaled_deviation'].max():.6f}")

    # PB-limit expectations against the POV measure
    states = random_number_states(count, s, rng)
    expectations = []
    for index, psi in enumerate(tqdm(states, desc="Random states")):
        for g in EXPECTATION_FUNCTIONS:
            pb = pb_expectation(g, psi, resolution, phi0)
            pov = phase_expectation(g, psi, 'pov', phi0)
            expectations.append({'state': index, 'g': g, 'pb_limit': pb.real, 'pov': pov.real,
                                 'deviation': abs(pb - pov)})
    expectations = pd.DataFrame(expectations)
    expectations.to_csv(dirs['metrics'] / 'exp4_pb_pov_expectations.csv', index=False)
    for g, group in expectations.groupby('g', sort=False):
        worst = group['deviation'].max()
        rows.append(criterion_row(7, f'PB limit vs POV <{g}> on {count} states', worst,
                                  deviation=worst, tolerance=PB_POV_TOL))
        logger.info(f"g={g}: max |PB limit - POV| = {worst:.3e}")

    # POV sanity
    phi = phi0 + 2.0 * np.pi * np.arange(grid) / grid
    density_defect = max(float(np.max(np.abs(pov_density(number_state(n, s), phi)
                                              - 1.0 / (2.0 * np.pi))))
                         for n in range(s + 1))
    rows.append(criterion_row(8, f'number-state density uniform n<={s}', density_defect,
                              deviation=density_defect, tolerance=DENSITY_TOL))

    total_defect = max(abs(pov_distribution(psi, grid, phi0).total() - 1.0)
                       for psi in states + [number_state(n, s) for n in range(s + 1)])
    rows.append(criterion_row(8, 'total POV probability', total_defect,
                              deviation=total_defect, tolerance=TOTAL_TOL))

    logger.info(f"\n{'=' * 60}")
    logger.info("EXPERIMENT COMPLETED")
    logger.info(f"{'=' * 60}")
    return save_criteria(rows, dirs['metrics'] / 'exp4_phase_equivalence.csv', logger)


if __name__ == '__main__':
    args = parse_args()
    sys.exit(0 if run_equivalence_experiment(args.config, args.debug) else 1)
