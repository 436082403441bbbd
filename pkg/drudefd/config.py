"""Experiment configuration.

A configuration is a flat JSON object. Values given on the command line
override the ones in the file, and everything missing is filled in with the
defaults of :func:`load_config`.
"""

import json
import logging
from collections.abc import Sequence
from dataclasses import asdict, dataclass, field
from typing import Any, List, Optional, Tuple, Union

logger = logging.getLogger(__name__)

EXPERIMENTS = ('simulate', 'converge', 'longtime', 'energy-table', 'snapshot')
FORMATS = ('csv', 'json', 'pdf')
STARTS = ('exact', 'taylor')

DEFAULT_OMEGA_1D = 26.63199
DEFAULT_OMEGA_2D = 10.0

LONGTIME_CASES = {
    1: {'T': 250.0, 'dt': 0.02},
    2: {'T': 50.0, 'dt': 0.004},
}

KEYS = (
    'experiment', 'scheme', 'schemes', 'dim', 'pair', 'L', 'eps0', 'mu0',
    'omega_pe', 'omega_pm', 'k', 'nu', 'nus', 'dt', 'dts', 'levels', 'T',
    'out', 'format', 'energy_stride', 'workers', 'start', 'strict',
    'allow_unstable', 'case', 'centre'
)


@dataclass
class ExperimentConfig:
    """A fully resolved experiment configuration. Build it with
    :func:`load_config`.

    For the ``EK`` pair ``omega_pe`` is given and ``omega_pm`` derived; for
    the ``HJ`` pair it is the other way around.
    """
    experiment: str = 'simulate'
    scheme: Tuple[int, int] = (4, 4)
    schemes: List[Tuple[int, int]] = field(
        default_factory=lambda: [(4, 4), (2, 4), (2, 2)]
    )
    dim: int = 1
    pair: str = 'EK'
    L: float = 1.0
    eps0: float = 5.0
    mu0: float = 0.2
    omega_pe: Optional[float] = DEFAULT_OMEGA_1D
    omega_pm: Optional[float] = None
    k: Union[int, Tuple[int, int]] = 2
    nu: float = 0.2
    nus: List[float] = field(default_factory=lambda: [0.2, 0.5, 0.8])
    dt: float = 0.02
    dts: List[float] = field(default_factory=lambda: [0.02, 0.01])
    levels: int = 6
    T: float = 1.0
    out: Optional[str] = None
    format: str = 'csv'
    energy_stride: int = 1
    workers: int = 1
    start: str = 'exact'
    strict: bool = True
    allow_unstable: bool = False
    case: Optional[int] = None
    centre: bool = False

    def solution(self) -> 'ManufacturedSolution':
        """Method to build the manufactured solution of this configuration,
        with its derived parameters."""
        if self.dim == 2:
            _, omega, p = derive_params_2d(self.eps0, self.mu0, self.k,
                self.omega_pe)
            return ManufacturedSolution2D(self.k, omega, p)
        if self.pair == HJ:
            _, omega, p = derive_params_hj_1d(self.eps0, self.mu0, self.k,
                self.omega_pm)
            return ManufacturedSolution1D(self.k, omega, p.swapped(), HJ)
        _, omega, p = derive_params_1d(self.eps0, self.mu0, self.k,
            self.omega_pe)
        return ManufacturedSolution1D(self.k, omega, p)

    @property
    def params(self) -> 'PhysParams':
        return self.solution().params

    def scheme_spec(
        self, dt: float=None, nu: float=None, order: Tuple[int, int]=None
    ) -> 'SchemeSpec':
        """Method to build the scheme of a run, by default the one of
        ``scheme``, ``dt`` and ``nu``."""
        return SchemeSpec.from_courant(
            self.scheme if order is None else order,
            self.dt if dt is None else dt, self.nu if nu is None else nu,
            self.T, self.params.c, self.dim, self.pair, self.L
        )

    def derived(self) -> dict:
        """Method to get the derived quantities echoed in result headers."""
        sol = self.solution()
        p = sol.params
        derived = {
            'c': p.c, 'omega': sol.omega, 'omega_pe': p.omega_pe,
            'omega_pm': p.omega_pm,
        }
        if self.experiment != 'energy-table':
            spec = self.scheme_spec()
            derived.update(dx=spec.mesh.h, M=spec.mesh.M, N=spec.steps)
        return derived

    def as_dict(self) -> dict:
        """Method to get the configuration as a JSON-ready dict, schemes
        written as ``'(4,4)'``."""
        d = asdict(self)
        d['scheme'] = scheme_label(self.scheme)
        d['schemes'] = [scheme_label(s) for s in self.schemes]
        if isinstance(self.k, tuple):
            d['k'] = list(self.k)
        return d


def read_config_file(path: str) -> dict:
    """Function to read a JSON configuration file.

    Raises:
        ConfigError: if the file is not a JSON object.
        OSError: if the file can't be read.
    """
    with open(path, 'r', encoding='utf-8') as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError('config', 'invalid JSON in {}: {}'
                .format(path, e)) from e
    if not isinstance(data, dict):
        raise ConfigError('config', '{} must hold a JSON object'.format(path))
    return data


def _number(key: str, value: Any, positive: bool=True) -> float:
    if isinstance(value, bool):
        raise ConfigError(key, 'expected a number, got {!r}'.format(value))
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ConfigError(key, 'expected a number, got {!r}'.format(value)) \
            from None
    if positive and not value > 0:
        raise ConfigError(key, 'must be positive, got {}'.format(value))
    return value


def _integer(key: str, value: Any, minimum: int=None) -> int:
    if isinstance(value, bool) or int(_number(key, value, False)) != value:
        raise ConfigError(key, 'expected an integer, got {!r}'.format(value))
    value = int(value)
    if minimum is not None and value < minimum:
        raise ConfigError(key, 'must be at least {}, got {}'
            .format(minimum, value))
    return value


def _choice(key: str, value: Any, choices: Sequence) -> Any:
    if value not in choices:
        raise ConfigError(key, 'must be one of {}, got {!r}'
            .format(', '.join(str(c) for c in choices), value))
    return value


def _scheme(key: str, value: Any) -> Tuple[int, int]:
    try:
        return parse_scheme(value)
    except (TypeError, ValueError) as e:
        raise ConfigError(key, str(e)) from None


def _flag(key: str, value: Any) -> bool:
    if not isinstance(value, bool):
        raise ConfigError(key, 'expected true or false, got {!r}'
            .format(value))
    return value


def _list(key: str, value: Any) -> list:
    if isinstance(value, (str, bytes)) or not isinstance(value, Sequence):
        value = [value]
    if not value:
        raise ConfigError(key, 'must not be empty')
    return list(value)


def load_config(
    path: str=None, overrides: dict=None, experiment: str=None
) -> ExperimentConfig:
    """Function to load and resolve an experiment configuration.

    Args:
        path (str, optional): a JSON configuration file.
        overrides (dict, optional): values that take precedence over the
            file, like command line flags. ``None`` values are ignored.
        experiment (str, optional): the experiment kind, overriding the
            ``experiment`` key.

    Defaults are the 1D parameter set ``eps0=5, mu0=0.2, k=2,
    omega_pe=26.63199`` (``omega_pm=26.63199`` for the ``HJ`` pair), or
    ``k=(2, 2), omega_pe=10`` in 2D; ``nu=0.2``, ``dt=0.02``, ``T=1`` and
    ``levels=6`` (5 in 2D). A ``case`` of 1 or 2 sets ``T`` and ``dt`` to
    the long time presets unless they are given.

    Raises:
        ConfigError: naming the offending key, for unknown keys, values out of
            range, the ``HJ`` pair in 2D, ``nu >= 1`` in strict mode without
            ``allow_unstable``, or a ``dt`` that doesn't fit ``T`` and ``nu``.
        OSError: if ``path`` can't be read.

    Returns:
        ExperimentConfig: the resolved configuration.
    """
    raw = read_config_file(path) if path else {}
    for key, value in (overrides or {}).items():
        if value is not None:
            raw[key] = value
    if experiment is not None:
        raw['experiment'] = experiment
    for key in raw:
        if key not in KEYS:
            raise ConfigError(key, 'unknown configuration key')

    cfg = {}
    cfg['experiment'] = _choice('experiment',
        raw.get('experiment', 'simulate'), EXPERIMENTS)
    cfg['dim'] = _choice('dim', _integer('dim', raw.get('dim', 1)), (1, 2))
    dim = cfg['dim']
    pair = raw.get('pair', EK)
    cfg['pair'] = _choice('pair', pair.upper() if isinstance(pair, str)
        else pair, PAIRS)
    if cfg['pair'] == HJ and dim == 2:
        raise ConfigError('pair', 'the HJ pair is only available in 1D')

    cfg['scheme'] = _scheme('scheme', raw.get('scheme', '44'))
    cfg['schemes'] = [_scheme('schemes', s) for s in
        _list('schemes', raw.get('schemes', ['44', '24', '22']))]
    cfg['L'] = _number('L', raw.get('L', 1.0))
    cfg['eps0'] = _number('eps0', raw.get('eps0', 5.0))
    cfg['mu0'] = _number('mu0', raw.get('mu0', 0.2))

    if dim == 1:
        cfg['k'] = _integer('k', raw.get('k', 2), 1)
        ks = (cfg['k'],)
    else:
        k = raw.get('k', [2, 2])
        if isinstance(k, (int, float)):
            k = [k, k]
        if len(_list('k', k)) != 2:
            raise ConfigError('k', 'a 2D run needs two wavenumbers')
        cfg['k'] = tuple(_integer('k', v, 1) for v in k)
        ks = cfg['k']
    for kv in ks:
        if abs(kv * cfg['L'] - round(kv * cfg['L'])) > 1e-12 \
                or round(kv * cfg['L']) % 2:
            raise ConfigError('k', 'k * L = {} must be an even integer for a '
                'periodic solution'.format(kv * cfg['L']))

    default_omega = DEFAULT_OMEGA_1D if dim == 1 else DEFAULT_OMEGA_2D
    if cfg['pair'] == HJ:
        cfg['omega_pm'] = _number('omega_pm',
            raw.get('omega_pm', DEFAULT_OMEGA_1D))
        cfg['omega_pe'] = None
        if 'omega_pe' in raw:
            raise ConfigError('omega_pe', 'is derived for the HJ pair; give '
                'omega_pm instead')
    else:
        cfg['omega_pe'] = _number('omega_pe',
            raw.get('omega_pe', default_omega))
        cfg['omega_pm'] = None
        if 'omega_pm' in raw:
            raise ConfigError('omega_pm', 'is derived for the EK pair; give '
                'omega_pe instead')

    case = raw.get('case')
    if case is not None:
        case = _choice('case', _integer('case', case), tuple(LONGTIME_CASES))
        for key, value in LONGTIME_CASES[case].items():
            raw.setdefault(key, value)
    cfg['case'] = case

    cfg['nu'] = _number('nu', raw.get('nu', 0.2))
    cfg['nus'] = [_number('nus', v) for v in
        _list('nus', raw.get('nus', [0.2, 0.5, 0.8]))]
    cfg['dt'] = _number('dt', raw.get('dt', 0.02))
    cfg['dts'] = [_number('dts', v) for v in
        _list('dts', raw.get('dts', [0.02, 0.01]))]
    cfg['T'] = _number('T', raw.get('T', 1.0))
    cfg['levels'] = _integer('levels', raw.get('levels',
        6 if dim == 1 else 5), 1)
    cfg['energy_stride'] = _integer('energy_stride',
        raw.get('energy_stride', 1 if dim == 1 else 10), 1)
    cfg['workers'] = _integer('workers', raw.get('workers', 1), 1)
    cfg['start'] = _choice('start', raw.get('start', 'exact'), STARTS)
    cfg['format'] = _choice('format', raw.get('format', 'csv'), FORMATS)
    out = raw.get('out')
    if out is not None and not isinstance(out, str):
        raise ConfigError('out', 'expected a path, got {!r}'.format(out))
    cfg['out'] = out
    cfg['strict'] = _flag('strict', raw.get('strict', True))
    cfg['allow_unstable'] = _flag('allow_unstable',
        raw.get('allow_unstable', False))
    cfg['centre'] = _flag('centre', raw.get('centre', False))

    config = ExperimentConfig(**cfg)
    _validate(config)
    logger.debug('resolved configuration %s', config.as_dict())
    return config


def _validate(config: ExperimentConfig) -> None:
    try:
        sol = config.solution()
    except DomainError as e:
        if 'eps0' in str(e):
            key = 'eps0'
        else:
            key = 'omega_pe' if config.pair == EK else 'omega_pm'
        raise ConfigError(key, str(e)) from e
    c = sol.params.c

    if config.experiment == 'energy-table':
        runs = [('nus', nu, 'dts', dt) for nu in config.nus
            for dt in config.dts]
    else:
        runs = [('nu', config.nu, 'dt', config.dt)]
    for nu_key, nu, dt_key, dt in runs:
        if config.strict and nu >= 1 and not config.allow_unstable:
            raise ConfigError(nu_key, 'nu = {} violates the stability '
                'condition c dt / h < 1; pass allow_unstable to run it anyway'
                .format(nu))
        cells = config.L * nu / (c * dt)
        M = int(round(cells))
        if M < 4 or abs(M * c * dt / nu - config.L) > 1e-9 * config.L:
            raise ConfigError(dt_key, 'dt = {} and nu = {} give {} cells, '
                'not an integer of at least 4'.format(dt, nu, cells))
        N = round(config.T / dt)
        if N < 1 or abs(N * dt - config.T) > 1e-12 * config.T:
            raise ConfigError(dt_key, 'dt = {} does not divide T = {}'
                .format(dt, config.T))

from .errors import ConfigError, DomainError
from .model import (
    EK, HJ, PAIRS, ManufacturedSolution1D, ManufacturedSolution2D,
    derive_params_1d, derive_params_2d, derive_params_hj_1d
)
from .stepper import SchemeSpec, parse_scheme, scheme_label
