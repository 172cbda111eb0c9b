"""
Command-line front end

COMMANDS:
    quantize          f -> f_N[K] for a built-in observable
    quantizer         Omega_N[K](Theta, n)
    angle-op          Theta_N[K] with norm diagnostics
    angle-converge    entries of Theta_N[K] along an N-ladder (CSV)
    phase-op          GW or PB phase operator on [0, s]
    pov-dist          POV phase density of a state file (CSV)
    variance          phase variance of a number state
    uncertainty       circle bound or phase/number conjecture over a batch (CSV)
    validate-kernel   structural conditions of a kernel (CSV)

USAGE:
    python -m src.cli quantize --observable angle --kernel symmetric --N 8 --out matrix.json
    python -m src.cli variance --method pb --n 0 --s 10000

Values come from flags, then --config, then config/default_config.yaml.
Exit status: 0 success, 1 numerical failure or missed tolerance, 2 invalid job.
"""

import argparse
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from .angle import angle_report, convergence_table
from .errors import ConfigurationError, CylQuantError
from .kernel import KernelGrid, get_kernel, validate_kernel
from .observable import make_builtin
from .operators import save_matrix_csv, save_matrix_json, state_from_dict
from .phase import (PHASE_METHODS, NumberStateVector, embed, gw_phase_matrix,
                    number_state_phase_variance, pb_phase_matrix, pov_distribution)
from .quantizer import WeylQuantizer
from .uncertainty import (count_violations, random_number_states, run_circle_batch,
                          run_conjecture_batch, sample_centered_states)
from .utils import (load_config, merge_configs, parse_angle, parse_index_pairs, read_json,
                    setup_logging, write_json)

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_INVALID = 2

COMMANDS = ('quantize', 'quantizer', 'angle-op', 'angle-converge', 'phase-op',
            'pov-dist', 'variance', 'uncertainty', 'validate-kernel')

# POV grid sums are checked against this normalization tolerance
TOTAL_PROBABILITY_TOL = 1e-10


@dataclass
class JobConfig:
    """
    One CLI invocation after merging flags, config file and defaults
    """
    command: str
    config: Dict[str, Any]
    kernel: str = 'symmetric'
    observable: str = 'angle'
    observable_params: Dict[str, Any] = field(default_factory=dict)
    N: int = 8
    s: int = 20
    n: int = 0
    hbar: float = 1.0
    phi0: float = -np.pi
    theta: float = 0.0
    method: str = 'gw'
    form: str = 'explicit'
    mode: str = 'circle'
    entries: List[Tuple[int, int]] = field(default_factory=list)
    ladder: List[int] = field(default_factory=list)
    grid: int = 1024
    states: Optional[str] = None
    seed: int = 0
    n_sigma: int = 129
    l_max: int = 10
    tol: float = 1e-12
    out: Optional[Path] = None

    def validate(self) -> None:
        """Raise ConfigurationError for any invalid field"""
        if self.command not in COMMANDS:
            raise ConfigurationError(f"Unknown command: {self.command!r}")
        if self.N < 0:
            raise ConfigurationError(f"N must be >= 0, got {self.N}")
        if self.s < 0:
            raise ConfigurationError(f"s must be >= 0, got {self.s}")
        if not self.hbar > 0:
            raise ConfigurationError(f"hbar must be positive, got {self.hbar}")
        if not np.isfinite(self.phi0) or not np.isfinite(self.theta):
            raise ConfigurationError("Angles must be finite")
        if self.grid < 1:
            raise ConfigurationError(f"grid must be >= 1, got {self.grid}")
        if any(N < 0 for N in self.ladder):
            raise ConfigurationError(f"N-ladder must be non-negative: {self.ladder}")
        if self.n_sigma < 1 or self.l_max < 0 or not self.tol > 0:
            raise ConfigurationError("Kernel validation grid and tolerance must be positive")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigurationError(f"Seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.command in ('phase-op',) and self.method not in ('gw', 'pb'):
            raise ConfigurationError(f"phase-op method must be gw or pb, got {self.method!r}")
        if self.command == 'variance' and self.method not in PHASE_METHODS:
            raise ConfigurationError(f"variance method must be one of {PHASE_METHODS}")
        if self.command == 'uncertainty':
            if self.mode not in ('circle', 'phase-conjecture'):
                raise ConfigurationError(f"Unknown uncertainty mode: {self.mode!r}")
            if not self.states:
                raise ConfigurationError("uncertainty needs --states <file|random:count[:seed]>")
        if self.command == 'pov-dist' and not self.states:
            raise ConfigurationError("pov-dist needs --state <file.json>")

        # Name lookups fail early with ConfigurationError
        if self.command in ('quantize', 'quantizer', 'angle-op', 'angle-converge',
                            'validate-kernel'):
            get_kernel(self.kernel)
        if self.command == 'quantize':
            make_builtin(self.observable, **self.observable_params)


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(prog='cylquant',
                                     description='Generalized Weyl quantization on the cylinder')
    parser.add_argument('--config', type=str, default=None,
                        help='YAML file merged over config/default_config.yaml')
    parser.add_argument('--log-level', type=str, default=None,
                        help='Logging level (DEBUG, INFO, WARNING)')
    subparsers = parser.add_subparsers(dest='command', required=True)

    def add_common(sub, kernel=False, truncation=False, phase=False):
        if kernel:
            sub.add_argument('--kernel', type=str, default=None,
                             help='Ordering kernel: weyl or symmetric')
        if truncation:
            sub.add_argument('--N', type=int, default=None, help='Truncation N')
            sub.add_argument('--hbar', type=float, default=None, help='Reduced Planck constant')
        if phase:
            sub.add_argument('--phi0', type=str, default=None,
                             help='Reference phase, e.g. -pi or 0.5')
        sub.add_argument('--out', type=str, default=None, help='Output file')

    sub = subparsers.add_parser('quantize', help='Quantize a built-in observable')
    add_common(sub, kernel=True, truncation=True)
    sub.add_argument('--observable', type=str, default=None, help='Built-in observable name')
    sub.add_argument('--power', type=int, default=None, help='Exponent for momentum_power')
    sub.add_argument('--g', type=str, default=None, help='Phase function for phase_pullback')

    sub = subparsers.add_parser('quantizer', help='Restricted quantizer at (Theta, n)')
    add_common(sub, kernel=True, truncation=True)
    sub.add_argument('--theta', type=str, default='0', help='Angle in [-pi, pi)')
    sub.add_argument('--n', type=int, default=0, help='Momentum index')

    sub = subparsers.add_parser('angle-op', help='Restricted angle operator')
    add_common(sub, kernel=True, truncation=True)

    sub = subparsers.add_parser('angle-converge', help='Angle entries along an N-ladder')
    add_common(sub, kernel=True)
    sub.add_argument('--entries', type=str, default=None, help='Entries as "1,0;2,0"')
    sub.add_argument('--ladder', type=int, nargs='+', default=None, help='Truncations N')

    sub = subparsers.add_parser('phase-op', help='GW or PB phase operator')
    add_common(sub, phase=True)
    sub.add_argument('--method', type=str, default='gw', help='gw or pb')
    sub.add_argument('--s', type=int, default=None, help='Truncation s')
    sub.add_argument('--form', type=str, default='explicit', help='PB form: explicit or spectral')

    sub = subparsers.add_parser('pov-dist', help='POV phase density of a state')
    add_common(sub, phase=True)
    sub.add_argument('--state', type=str, required=True, help='State JSON file')
    sub.add_argument('--grid', type=int, default=None, help='Number of grid points')

    sub = subparsers.add_parser('variance', help='Phase variance of a number state')
    add_common(sub, phase=True)
    sub.add_argument('--method', type=str, required=True, help='gw, pb or pov')
    sub.add_argument('--n', type=int, required=True, help='Number state')
    sub.add_argument('--s', type=int, required=True, help='Truncation s')

    sub = subparsers.add_parser('uncertainty', help='Uncertainty checks over a batch of states')
    add_common(sub, truncation=True, phase=True)
    sub.add_argument('--mode', type=str, default='circle', help='circle or phase-conjecture')
    sub.add_argument('--states', type=str, required=True,
                     help='State JSON file or random:count[:seed]')
    sub.add_argument('--seed', type=int, default=None, help='RNG seed (PCG64)')

    sub = subparsers.add_parser('validate-kernel', help='Check kernel conditions')
    add_common(sub, kernel=True)
    sub.add_argument('--n-sigma', type=int, default=129, help='sigma grid points')
    sub.add_argument('--l-max', type=int, default=10, help='Largest |lambda|')
    sub.add_argument('--tol', type=float, default=1e-12, help='Tolerance')

    return parser.parse_args(argv)


def _pick(flag: Any, section: Dict, key: str, default: Any) -> Any:
    return flag if flag is not None else section.get(key, default)


def build_job(args: argparse.Namespace) -> JobConfig:
    """
    Merge flags over the configuration file and defaults

    Args:
        args: Parsed command line

    Returns:
        Validated JobConfig
    """
    config = load_config(args.config)
    if args.log_level:
        config = merge_configs(config, {'logging': {'level': args.log_level}})

    quantization = config.get('quantization', {})
    phase = config.get('phase', {})
    angle = config.get('angle', {})
    uncertainty = config.get('uncertainty', {})
    get = lambda name: getattr(args, name, None)  # noqa: E731

    observable_params = dict(quantization.get('observable_params') or {})
    if get('power') is not None:
        observable_params['power'] = get('power')
    if get('g') is not None:
        observable_params['g'] = get('g')

    N_default = uncertainty.get('N', 32) if args.command == 'uncertainty' else quantization.get('N', 8)
    states = get('state') if args.command == 'pov-dist' else get('states')

    try:
        job = JobConfig(
            command=args.command,
            config=config,
            kernel=str(_pick(get('kernel'), quantization, 'kernel', 'symmetric')),
            observable=str(_pick(get('observable'), quantization, 'observable', 'angle')),
            observable_params=observable_params,
            N=int(get('N') if get('N') is not None else N_default),
            s=int(_pick(get('s'), phase, 's', 20)),
            n=int(get('n') or 0),
            hbar=float(_pick(get('hbar'), quantization, 'hbar', 1.0)),
            phi0=parse_angle(_pick(get('phi0'), phase, 'phi0', '-pi')),
            theta=parse_angle(get('theta') or 0.0),
            method=str(get('method') or 'gw'),
            form=str(get('form') or 'explicit'),
            mode=str(get('mode') or 'circle'),
            entries=parse_index_pairs(str(_pick(get('entries'), angle, 'entries', '1,0;2,0'))),
            ladder=[int(N) for N in _pick(get('ladder'), angle, 'n_ladder', [2, 8, 32, 128, 512])],
            grid=int(_pick(get('grid'), phase, 'pov_grid', 1024)),
            states=states,
            seed=int(_pick(get('seed'), config.get('experiment', {}), 'random_seed', 0)),
            n_sigma=int(get('n_sigma') if get('n_sigma') is not None else 129),
            l_max=int(get('l_max') if get('l_max') is not None else 10),
            tol=float(get('tol') if get('tol') is not None else 1e-12),
            out=Path(get('out')) if get('out') else None,
        )
    except (TypeError, ValueError) as e:
        if isinstance(e, CylQuantError):
            raise
        raise ConfigurationError(f"Invalid job configuration: {e}") from e

    job.validate()
    return job


def _save_matrix(matrix, out: Optional[Path], logger: logging.Logger) -> None:
    if out is None:
        return
    if out.suffix.lower() == '.csv':
        save_matrix_csv(matrix, out)
    else:
        save_matrix_json(matrix, out)
    logger.info(f"Matrix [{matrix.lo}, {matrix.hi}] saved to: {out}")


def _save_frame(frame, out: Optional[Path], logger: logging.Logger) -> None:
    if out is None:
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(out, index=False, float_format='%.17g')
    logger.info(f"Table with {len(frame)} rows saved to: {out}")


def _state_from_dict(data: Any):
    if not isinstance(data, dict):
        raise ConfigurationError(f"Invalid state file: expected an object, got {type(data).__name__}")
    if 's' in data:
        return NumberStateVector.from_dict(data)
    return state_from_dict(data)


def load_states(spec: str, job: JobConfig, logger: logging.Logger) -> List:
    """
    States named by --states: a JSON file (one state or {"states": [...]})
    or random:count[:seed]
    """
    if spec.startswith('random:'):
        parts = spec.split(':')
        try:
            count = int(parts[1])
            seed = int(parts[2]) if len(parts) > 2 else job.seed
        except (IndexError, ValueError) as e:
            raise ConfigurationError(f"Invalid random state specification: {spec!r}") from e
        if count < 0:
            raise ConfigurationError(f"State count must be >= 0, got {count}")

        rng = np.random.default_rng(seed)
        logger.info(f"Drawing {count} random states (PCG64 seed {seed})")
        if job.mode == 'circle':
            section = job.config.get('uncertainty', {})
            return sample_centered_states(
                count, job.N, rng,
                centering_tol=float(section.get('centering_tol', 1e-8)),
                max_attempts=int(section.get('max_attempts', 100000)),
                logger=logger)
        return random_number_states(count, job.N, rng)

    data = read_json(spec)
    items = data.get('states', [data]) if isinstance(data, dict) else data
    if not isinstance(items, list):
        raise ConfigurationError(f"Invalid state file {spec}: 'states' must be a list")
    return [_state_from_dict(item) for item in items]


def run(job: JobConfig, logger: Optional[logging.Logger] = None) -> int:
    """
    Execute one job

    Args:
        job: Validated job configuration
        logger: Logger instance

    Returns:
        Exit status
    """
    logger = logger or logging.getLogger('cylquant')
    config = job.config

    if job.command in ('quantize', 'quantizer'):
        kernel = get_kernel(job.kernel)
        quantizer = WeylQuantizer(config, logger, N=job.N, hbar=job.hbar)
        if job.command == 'quantize':
            f = make_builtin(job.observable, **job.observable_params)
            matrix = quantizer.weyl_apply(f, kernel)
            logger.info(f"Quantized {f.name} with {kernel.name} ordering at N={job.N}")
        else:
            matrix = quantizer.restricted_quantizer(kernel, job.theta, job.n)
            logger.info(f"Quantizer {kernel.name} at Theta={job.theta:.6f}, n={job.n}, N={job.N}")
        _save_matrix(matrix, job.out, logger)
        return EXIT_OK

    if job.command == 'angle-op':
        report = angle_report(get_kernel(job.kernel), job.N, config, logger)
        _save_matrix(report.matrix, job.out, logger)
        return EXIT_OK

    if job.command == 'angle-converge':
        table = convergence_table(get_kernel(job.kernel), job.entries, job.ladder,
                                  logger=logger, show_progress=True)
        print(table.to_string(index=False))
        _save_frame(table, job.out, logger)
        return EXIT_OK

    if job.command == 'phase-op':
        if job.method == 'gw':
            matrix = gw_phase_matrix(job.s, job.phi0)
        else:
            matrix = pb_phase_matrix(job.s, job.phi0, form=job.form)
        logger.info(f"{job.method.upper()} phase operator at s={job.s}, phi0={job.phi0:.6f}")
        _save_matrix(matrix, job.out, logger)
        return EXIT_OK

    if job.command == 'pov-dist':
        state = _state_from_dict(read_json(job.states))
        if not isinstance(state, NumberStateVector):
            raise ConfigurationError("pov-dist needs a number state file {\"s\", \"coefficients\"}")
        distribution = pov_distribution(state, job.grid, job.phi0)
        frame = pd.DataFrame({'phi': distribution.support, 'density': distribution.values})
        _save_frame(frame, job.out, logger)

        total = distribution.total()
        logger.info(f"POV density on {job.grid} points: total {total:.15f}, "
                    f"min {distribution.min_value():.3e}")
        if abs(total - 1.0) > TOTAL_PROBABILITY_TOL and job.grid > 2 * state.s:
            logger.error(f"Total probability {total!r} misses 1 by more than "
                         f"{TOTAL_PROBABILITY_TOL:g}")
            return EXIT_NUMERICAL
        return EXIT_OK

    if job.command == 'variance':
        variance = number_state_phase_variance(job.method, job.n, job.s, job.phi0, logger)
        print(repr(variance))
        if job.out is not None:
            write_json({'method': job.method, 'n': job.n, 's': job.s,
                        'phi0': job.phi0, 'variance': variance}, str(job.out))
        return EXIT_OK

    if job.command == 'uncertainty':
        states = load_states(job.states, job, logger)
        if job.mode == 'circle':
            states = [embed(psi, job.N) if isinstance(psi, NumberStateVector) else psi
                      for psi in states]
            centering_tol = float(config.get('uncertainty', {}).get('centering_tol', 1e-8))
            frame = run_circle_batch(states, job.N, job.hbar, centering_tol, logger,
                                     show_progress=True)
            status = EXIT_NUMERICAL if count_violations(frame) else EXIT_OK
        else:
            if not all(isinstance(psi, NumberStateVector) for psi in states):
                raise ConfigurationError("phase-conjecture mode needs number states")
            frame = run_conjecture_batch(states, job.phi0, logger, show_progress=True)
            status = EXIT_OK
        _save_frame(frame, job.out, logger)
        return status

    if job.command == 'validate-kernel':
        report = validate_kernel(get_kernel(job.kernel), KernelGrid(job.n_sigma, job.l_max),
                                 tol=job.tol, logger=logger)
        frame = report.to_frame()
        print(frame.to_string(index=False))
        _save_frame(frame, job.out, logger)
        return EXIT_OK if report.passed else EXIT_NUMERICAL

    raise ConfigurationError(f"Unknown command: {job.command!r}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = parse_args(argv)
    logger = logging.getLogger('cylquant')

    try:
        job = build_job(args)
        logger = setup_logging(job.config)
        return run(job, logger)
    except CylQuantError as e:
        if isinstance(e, ValueError):
            logger.error(f"Invalid job: {e}")
            return EXIT_INVALID
        logger.error(f"Numerical failure: {e}")
        return EXIT_NUMERICAL


if __name__ == '__main__':
    sys.exit(main())
