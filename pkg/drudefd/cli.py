"""Command line interface.

Usage::

    drudefd converge --scheme 44 --levels 6 --out table2.csv
    drudefd longtime --case 1 --format json --out case1.json
    drudefd energy-table --out table1.csv
    drudefd simulate --config run.json --nu 0.5
    drudefd snapshot --dim 2 --T 0.5 --centre --out fields.csv

Exit codes: 0 on success, 2 for configuration errors, 3 when a run blows
up and 4 for I/O errors.
"""

import argparse
import logging
import sys
from typing import List

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INSTABILITY = 3
EXIT_IO = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='drudefd',
        description='FDTD schemes for Maxwell equations in Drude '
            'metamaterials.'
    )
    parser.add_argument('--version', action='version',
        version='%(prog)s {}'.format(__version__))
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument('--config', help='JSON configuration file')
    parent.add_argument('--scheme', help='scheme: 22, 24 or 44')
    parent.add_argument('--schemes', nargs='+',
        help='schemes of the energy table')
    parent.add_argument('--dim', type=int, choices=(1, 2))
    parent.add_argument('--pair', type=str.upper, choices=('EK', 'HJ'))
    parent.add_argument('--nu', type=float, help='Courant number c dt / h')
    parent.add_argument('--nus', type=float, nargs='+',
        help='Courant numbers of the energy table')
    parent.add_argument('--dt', type=float, help='(coarsest) time step')
    parent.add_argument('--dts', type=float, nargs='+',
        help='time steps of the energy table')
    parent.add_argument('--levels', type=int,
        help='number of convergence levels')
    parent.add_argument('--T', type=float, dest='T', help='final time')
    parent.add_argument('--case', type=int, choices=(1, 2),
        help='long time preset')
    parent.add_argument('--start', choices=('exact', 'taylor'),
        help='how the second time level is computed')
    parent.add_argument('--energy-stride', type=int, dest='energy_stride')
    parent.add_argument('--workers', type=int,
        help='threads for independent runs')
    parent.add_argument('--out', help='output file (default: stdout)')
    parent.add_argument('--format', choices=('csv', 'json', 'pdf'))
    parent.add_argument('--allow-unstable', action='store_const', const=True,
        dest='allow_unstable', help='permit nu >= 1 to explore the CFL limit')
    parent.add_argument('--centre', action='store_const', const=True,
        help='snapshot: average the electric fields to the cell centres')
    parent.add_argument('-v', '--verbose', action='store_true')
    parent.add_argument('-q', '--quiet', action='store_true')

    sub = parser.add_subparsers(dest='experiment', metavar='EXPERIMENT')
    sub.required = True
    helps = {
        'simulate': 'run one simulation and record its energy',
        'converge': 'convergence study over halved time and mesh steps',
        'longtime': 'long time energy conservation run',
        'energy-table': 'energy conservation over schemes, nu and dt',
        'snapshot': 'numerical and exact fields at the final time',
    }
    for name in EXPERIMENTS:
        sub.add_parser(name, parents=[parent], help=helps[name])
    return parser


def setup_logging(verbose: bool=False, quiet: bool=False) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet \
        else logging.INFO
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter('%(levelname)s %(name)s: %(message)s'))
    root = logging.getLogger('drudefd')
    root.handlers[:] = [handler]
    root.setLevel(level)


OVERRIDE_KEYS = (
    'scheme', 'schemes', 'dim', 'pair', 'nu', 'nus', 'dt', 'dts', 'levels',
    'T', 'case', 'start', 'energy_stride', 'workers', 'out', 'format',
    'allow_unstable', 'centre'
)


def main(argv: List[str]=None) -> int:
    """Run the command line interface and return the exit code."""
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose, args.quiet)
    overrides = {key: getattr(args, key) for key in OVERRIDE_KEYS}
    try:
        config = load_config(args.config, overrides, args.experiment)
        table = run_experiment(config)
        emit(table, config.format, config.out)
    except ConfigError as e:
        logger.error('configuration error: %s', e)
        return EXIT_CONFIG
    except InstabilityError as e:
        logger.error('%s', e)
        return EXIT_INSTABILITY
    except OSError as e:
        logger.error('I/O error: %s', e)
        return EXIT_IO
    except ValueError as e:
        logger.error('configuration error: %s', e)
        return EXIT_CONFIG
    return EXIT_OK

from . import __version__
from .config import EXPERIMENTS, load_config
from .errors import ConfigError, InstabilityError
from .experiments import run_experiment
from .output import emit
