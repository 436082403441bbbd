"""Experiment drivers: single runs, field snapshots, convergence studies,
long time runs and the energy conservation table."""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, List, NamedTuple, Optional, Sequence

import numpy as np

logger = logging.getLogger(__name__)

ENERGY_COLUMNS = (
    'n', 't', 'energy', 'theta', 'theta_minus_theta0', 'delta_energy'
)
ENERGY_TABLE_COLUMNS = ('scheme', 'nu', 'dt', 'max_theta')
MAX_THETA_NOTE = 'max over n of |theta[n] - theta[0]|, the drift of theta'


@dataclass
class ResultTable:
    """The result of an experiment.

    Args:
        kind (str): the experiment kind.
        columns (list): the column names, in output order.
        rows (list): one dict per row, column name to value; missing values
            are ``None``.
        header (dict): the metadata: resolved configuration, derived
            quantities, code version, timing and experiment summaries.
    """
    kind: str
    columns: List[str]
    rows: List[dict] = field(default_factory=list)
    header: dict = field(default_factory=dict)

    def column(self, name: str) -> list:
        return [row.get(name) for row in self.rows]


class EnergyTableCell(NamedTuple):
    scheme: str
    nu: float
    dt: float
    max_theta: Optional[float]


def convergence_columns(names: Sequence[str]) -> List[str]:
    """Function to get the columns of a convergence table:
    ``dt, dx, err_<f>, rate_<f>, ...``."""
    columns = ['dt', 'dx']
    for name in names:
        columns += ['err_' + name, 'rate_' + name]
    return columns


def energy_rows(records: Sequence['EnergyRecord']) -> List[dict]:
    return [
        {
            'n': r.n, 't': r.t, 'energy': r.energy, 'theta': r.theta,
            'theta_minus_theta0': r.drift, 'delta_energy': r.delta
        }
        for r in records
    ]


def convergence_rows(
    rows: Sequence['ConvergenceRow'], names: Sequence[str]
) -> List[dict]:
    out = []
    for row in rows:
        values = {'dt': row.dt, 'dx': row.dx}
        for name in names:
            values['err_' + name] = row.errors[name] if row.errors else None
            values['rate_' + name] = row.rates[name] if row.rates else None
        out.append(values)
    return out


def _header(config: 'ExperimentConfig') -> dict:
    return {
        'experiment': config.experiment,
        'version': __version__,
        'config': config.as_dict(),
        'derived': config.derived(),
    }


def _finish(table: ResultTable, started: float) -> ResultTable:
    table.header['wall_clock_seconds'] = round(time.perf_counter() - started, 3)
    table.header['finished'] = time.strftime('%Y-%m-%dT%H:%M:%S')
    return table


def _map(func: Callable, items: Sequence, workers: int) -> list:
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def _reference_energy(sol: 'ManufacturedSolution', L: float) -> Optional[float]:
    if sol.pair == EK:
        return continuous_energy_EK(sol, L=L)
    return None


def run_simulation(config: 'ExperimentConfig') -> ResultTable:
    """Function to run one simulation and record its energy series.

    The header gets the max-in-time error of every field and the energy
    summaries ``max_theta`` and ``max_theta_drift``.

    Raises:
        InstabilityError: if the run blows up.

    Returns:
        ResultTable: the energy series.
    """
    started = time.perf_counter()
    sol = config.solution()
    p = sol.params
    scheme = config.scheme_spec()
    energy = EnergyMonitor(p, _reference_energy(sol, config.L),
        config.energy_stride)
    errors = ErrorMonitor(sol)
    logger.info('%s %s: dt=%g M=%d N=%d', config.experiment, scheme.label,
        scheme.dt, scheme.mesh.M, scheme.steps)
    run(scheme, p, sol, (energy, errors), config.start)
    table = ResultTable(config.experiment, list(ENERGY_COLUMNS),
        energy_rows(energy.records), _header(config))
    table.header['errors'] = dict(errors.errors)
    table.header['max_theta'] = energy.max_theta
    table.header['max_theta_drift'] = energy.max_drift
    return _finish(table, started)


def run_longtime(config: 'ExperimentConfig') -> ResultTable:
    """Function to run a long time conservation study.

    It is :func:`run_simulation` with the long time presets of the
    configuration (``case`` 1: ``T=250, dt=0.02``; ``case`` 2:
    ``T=50, dt=0.004``), recording ``theta`` and ``theta - theta[0]`` every
    ``energy_stride`` steps.
    """
    return run_simulation(config)


def snapshot_columns(dim: int) -> List[str]:
    return ['field'] + ['x', 'y'][:dim] + ['value', 'exact', 'error']


def _snapshot_fields(
    W: 'FieldBundle', sol: 'ManufacturedSolution', t: float, centre: bool
):
    electric = W.names[:-1]
    for name in W.names:
        gf = W[name]
        if centre and name in electric:
            gf = average_to_centres(gf)
        yield name, gf, sample(sol.field(name, t), gf.mesh, gf.stagger)


def run_snapshot(config: 'ExperimentConfig') -> ResultTable:
    """Function to run one simulation up to ``T`` and tabulate the numerical
    and exact fields there, one row per grid node of every field.

    Every field is reported on its own staggered grid, unless ``centre`` is
    set: then the electric-type components are first averaged to the cell
    centres, where the auxiliary field lives, so all fields share the same
    nodes.

    Raises:
        InstabilityError: if the run blows up.

    Returns:
        ResultTable: columns ``field, x[, y], value, exact, error``.
    """
    started = time.perf_counter()
    sol = config.solution()
    scheme = config.scheme_spec()
    logger.info('snapshot %s: dt=%g M=%d N=%d', scheme.label, scheme.dt,
        scheme.mesh.M, scheme.steps)
    state = run(scheme, sol.params, sol, (), config.start)
    rows = []
    max_errors = {}
    staggers = {}
    for name, gf, exact in _snapshot_fields(state.current, sol, state.t,
            config.centre):
        coords = np.meshgrid(*gf.stagger.coordinates(gf.mesh), indexing='ij')
        coords = [c.ravel() for c in coords]
        values, exact = gf.values.ravel(), exact.values.ravel()
        error = values - exact
        max_errors[name] = float(np.max(np.abs(error)))
        staggers[name] = str(gf.stagger)
        for i in range(values.size):
            row = {'field': name}
            for axis, c in zip(('x', 'y'), coords):
                row[axis] = float(c[i])
            row.update(value=float(values[i]), exact=float(exact[i]),
                error=float(error[i]))
            rows.append(row)
    table = ResultTable('snapshot', snapshot_columns(config.dim), rows,
        _header(config))
    table.header.update(t=state.t, n=state.n, staggers=staggers,
        max_abs_errors=max_errors)
    return _finish(table, started)


def _convergence_level(config: 'ExperimentConfig', level: int):
    sol = config.solution()
    dt = config.dt / 2 ** level
    scheme = config.scheme_spec(dt=dt)
    monitor = ErrorMonitor(sol)
    try:
        run(scheme, sol.params, sol, (monitor,), config.start)
    except InstabilityError as e:
        logger.warning('level %d (dt=%g) is unstable at step %d', level, dt,
            e.step)
        return ConvergenceRow(level, dt, scheme.mesh.h, None, stable=False)
    logger.info('level %d: dt=%g M=%d errors %s', level, dt, scheme.mesh.M,
        monitor.errors)
    return ConvergenceRow(level, dt, scheme.mesh.h, dict(monitor.errors))


def run_convergence(config: 'ExperimentConfig') -> ResultTable:
    """Function to run a convergence study.

    Level ``i`` runs with ``dt / 2^i`` and the mesh step
    ``c (dt / 2^i) / nu``, for ``i = 0, ..., levels - 1``. Levels run on a
    pool of ``workers`` threads; rows are in level order whatever the order
    of completion. A level that blows up gets an empty row, is listed in the
    header's ``unstable_levels`` and the study goes on.

    Returns:
        ResultTable: the convergence table.
    """
    started = time.perf_counter()
    names = config.solution().names
    rows = _map(lambda level: _convergence_level(config, level),
        list(range(config.levels)), config.workers)
    rows = convergence_rates(rows)
    table = ResultTable('converge', convergence_columns(names),
        convergence_rows(rows, names), _header(config))
    table.header['unstable_levels'] = [r.level for r in rows if not r.stable]
    return _finish(table, started)


def _energy_cell(config: 'ExperimentConfig', cell: tuple) -> EnergyTableCell:
    order, nu, dt = cell
    sol = config.solution()
    scheme = config.scheme_spec(dt=dt, nu=nu, order=order)
    monitor = EnergyMonitor(sol.params, _reference_energy(sol, config.L))
    try:
        run(scheme, sol.params, sol, (monitor,), config.start)
    except InstabilityError as e:
        logger.warning('%s nu=%g dt=%g is unstable at step %d',
            scheme.label, nu, dt, e.step)
        return EnergyTableCell(scheme.label, nu, dt, None)
    return EnergyTableCell(scheme.label, nu, dt, monitor.max_drift)


def run_energy_table(config: 'ExperimentConfig') -> ResultTable:
    """Function to build the energy conservation table.

    Every combination of ``schemes``, ``nus`` and ``dts`` runs up to ``T``
    and reports ``max_theta``, the largest ``|theta[n] - theta[0]|`` over the
    run.

    Returns:
        ResultTable: one row per combination, schemes first, then Courant
        numbers, then time steps.
    """
    started = time.perf_counter()
    cells = [
        (order, nu, dt) for order in config.schemes for nu in config.nus
        for dt in config.dts
    ]
    results = _map(lambda cell: _energy_cell(config, cell), cells,
        config.workers)
    table = ResultTable('energy-table', list(ENERGY_TABLE_COLUMNS),
        [r._asdict() for r in results], _header(config))
    table.header['max_theta_column'] = MAX_THETA_NOTE
    table.header['unstable_cells'] = [
        [r.scheme, r.nu, r.dt] for r in results if r.max_theta is None
    ]
    return _finish(table, started)


EXPERIMENT_RUNNERS = {
    'simulate': run_simulation,
    'converge': run_convergence,
    'longtime': run_longtime,
    'energy-table': run_energy_table,
    'snapshot': run_snapshot,
}


def run_experiment(config: 'ExperimentConfig') -> ResultTable:
    """Function to run the experiment named in ``config.experiment``."""
    return EXPERIMENT_RUNNERS[config.experiment](config)

from . import __version__
from .diagnostics import (
    ConvergenceRow, EnergyMonitor, ErrorMonitor, convergence_rates
)
from .errors import InstabilityError
from .grid import sample
from .model import EK, continuous_energy_EK
from .stepper import run
from .stencil import average_to_centres
