"""Discrete energies, solution errors and convergence rates."""

from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence


class EnergyRecord(NamedTuple):
    """The discrete energy between levels ``n`` and ``n + 1``.

    Attributes:
        n (int): the lower level index; the energy is ``E[n+1/2]``.
        t (float): the time ``(n + 1/2) dt``.
        energy (float): the discrete energy.
        theta (float): the relative error ``|energy - ref| / |ref|``.
        drift (float): ``theta`` minus its value at ``n = 0``.
        delta (float): ``E[n+1/2] - E[n-1/2]``, 0 for the first record.
    """
    n: int
    t: float
    energy: float
    theta: float
    drift: float
    delta: float


class ConvergenceRow(NamedTuple):
    """One level of a convergence study.

    Attributes:
        level (int): the refinement level, 0 for the coarsest.
        dt (float): the time step.
        dx (float): the mesh step.
        errors (dict): field name to the max-in-time error, ``None`` for an
            unstable level.
        rates (dict): field name to ``log2`` of the error ratio with the
            previous level, ``None`` where it is not defined.
        stable (bool): ``False`` if the level blew up.
    """
    level: int
    dt: float
    dx: float
    errors: Optional[Dict[str, float]]
    rates: Optional[Dict[str, Optional[float]]] = None
    stable: bool = True


def discrete_energy(
    state: 'StatePair', p: 'PhysParams', stepper: 'LeapfrogStepper'=None,
    explicit: bool=None
) -> float:
    """Function to compute the conserved discrete energy of two consecutive
    levels ``W' = W[n+1]`` and ``W = W[n]``::

        1/2 [ |U' - U|^2 / (c^2 dt^2) + |V' - V|^2 / (wb^2 dt^2)
              + <A1 W', W> - dt^2 c^2 / 12 <A2 W', W> ]

    The ``A2`` term is scaled by the stepper's ``correction_factor``, so it is
    only present for the ``(4, 4)`` scheme. For the ``(2, 2)`` scheme the
    ``A1`` term is evaluated in the equivalent form
    ``<C U' + s V', C U + s V> + wa^2 / c^2 <U', U>``.

    Args:
        state (StatePair): ``current`` is ``W[n+1]`` and ``previous`` is
            ``W[n]``.
        p (PhysParams): the parameters.
        stepper (LeapfrogStepper, optional): the stepper whose operators to
            use; by default the stepper of ``state.scheme``.
        explicit (bool, optional): use the explicit form of the ``A1`` term.
            Defaults to ``True`` for the ``(2, 2)`` scheme only.

    Raises:
        StaggerError: if the state doesn't fit the stepper's scheme.

    Returns:
        float: the energy.
    """
    if stepper is None:
        stepper = get_stepper(state.scheme, p)
    elif stepper.scheme != state.scheme:
        raise StaggerError('state of scheme {} with a stepper of scheme {}'
            .format(state.scheme.label, stepper.scheme.label))
    scheme = stepper.scheme
    if explicit is None:
        explicit = scheme.order == (2, 2)
    Wn1, Wn = state.current, state.previous
    dt, c2 = scheme.dt, stepper.c2
    U1, V1 = stepper.split(Wn1)
    U0, V0 = stepper.split(Wn)

    energy = sum(norm(a - b) ** 2 for a, b in zip(U1, U0)) / (c2 * dt * dt)
    if stepper.wb:
        energy += (
            sum(norm(a - b) ** 2 for a, b in zip(V1, V0))
            / (stepper.wb ** 2 * dt * dt)
        )
    if explicit:
        energy += inner(stepper.coupling(Wn1), stepper.coupling(Wn))
        energy += stepper.wa ** 2 / c2 * sum(
            inner(a, b) for a, b in zip(U1, U0)
        )
    else:
        energy += inner_bundle(stepper.apply_A1(Wn1), Wn)
    if stepper.correction_factor:
        energy -= (
            stepper.correction_factor * dt * dt * c2 / 12
            * inner_bundle(stepper.apply_A2(Wn1), Wn)
        )
    return 0.5 * energy


def relative_energy_error(energy: float, reference: float) -> float:
    """Function to compute ``|energy - reference| / |reference|``.

    Raises:
        DomainError: if ``reference`` is zero.
    """
    if reference == 0:
        raise DomainError('relative energy error with a zero reference')
    return abs(energy - reference) / abs(reference)


def field_errors(
    W: 'FieldBundle', sol: 'ManufacturedSolution', t: float
) -> Dict[str, float]:
    """Function to compute the discrete norm of the error of every field of
    ``W`` against the manufactured solution at time ``t``."""
    exact = exact_state(sol, next(iter(W.values())).mesh, t)
    return {name: norm(W[name] - exact[name]) for name in W.names}


class ErrorMonitor:
    """Run callback keeping the running maximum over time of every field's
    error against a manufactured solution.

    On its first call it also measures the ``previous`` level, so with an
    initial state at ``n = 1`` the maximum covers every level from 0.

    Args:
        sol (ManufacturedSolution): the exact solution.
    """
    def __init__(self, sol: 'ManufacturedSolution') -> None:
        self.sol = sol
        self.errors = None

    def _update(self, W: 'FieldBundle', t: float) -> None:
        errors = field_errors(W, self.sol, t)
        if self.errors is None:
            self.errors = errors
        else:
            for name, value in errors.items():
                self.errors[name] = max(self.errors[name], value)

    def __call__(self, stepper: 'LeapfrogStepper', state: 'StatePair') -> None:
        dt = state.scheme.dt
        if self.errors is None:
            self._update(state.previous, (state.n - 1) * dt)
        self._update(state.current, state.n * dt)


def solution_error(
    states: Iterable['StatePair'], sol: 'ManufacturedSolution'
) -> Dict[str, float]:
    """Function to compute ``max_n |W[n] - W(t_n)|`` for every field, over the
    levels of a sequence of states.

    Args:
        states (iterable): consecutive states of a trajectory.
        sol (ManufacturedSolution): the exact solution.

    Returns:
        dict: field name to the error.
    """
    monitor = ErrorMonitor(sol)
    for state in states:
        monitor(None, state)
    return monitor.errors or {}


class EnergyMonitor:
    """Run callback recording :class:`EnergyRecord` rows.

    Energies are recorded every ``stride`` levels (``n = 0, stride, ...``)
    and at the last level reached. ``theta`` is measured against
    ``reference``, or against the first energy when no reference is given.

    Args:
        p (PhysParams): the parameters.
        reference (float, optional): the reference energy.
        stride (int, optional): the recording stride.
    """
    def __init__(
        self, p: 'PhysParams', reference: float=None, stride: int=1
    ) -> None:
        if stride < 1:
            raise ValueError('energy stride must be positive: {}'.format(stride))
        self.params = p
        self.reference = reference
        self.stride = stride
        self.records: List[EnergyRecord] = []
        self._theta0 = None
        self._last = None

    def __call__(self, stepper: 'LeapfrogStepper', state: 'StatePair') -> None:
        n = state.n - 1
        last_step = state.n >= state.scheme.steps
        if n % self.stride and (n + 1) % self.stride and not last_step:
            return
        energy = discrete_energy(state, self.params, stepper)
        if self.reference is None:
            self.reference = energy
        if n % self.stride == 0 or last_step:
            self._record(n, state.scheme.dt, energy)
        self._last = (n, energy)

    def _record(self, n: int, dt: float, energy: float) -> None:
        theta = relative_energy_error(energy, self.reference)
        if self._theta0 is None:
            self._theta0 = theta
        if self._last is not None and self._last[0] == n - 1:
            delta = energy - self._last[1]
        else:
            delta = 0.0
        self.records.append(EnergyRecord(
            n, (n + 0.5) * dt, energy, theta, theta - self._theta0, delta
        ))

    @property
    def max_theta(self) -> float:
        return max((r.theta for r in self.records), default=0.0)

    @property
    def max_drift(self) -> float:
        """float: ``max_n |theta[n] - theta[0]|`` over the records."""
        return max((abs(r.drift) for r in self.records), default=0.0)

    @property
    def max_relative_change(self) -> float:
        """float: ``max_n |E[n+1/2] - E[1/2]| / |E[1/2]|``."""
        if not self.records or not self.records[0].energy:
            return 0.0
        e0 = self.records[0].energy
        return max(abs(r.energy - e0) for r in self.records) / abs(e0)


def convergence_rates(rows: Sequence[ConvergenceRow]) -> List[ConvergenceRow]:
    """Function to fill in the rates of a convergence table.

    The rate of a field at level ``i`` is ``log2(err[i] / err[i-1])``, so a
    decreasing error has a negative rate (``-4`` for a fourth order scheme
    when the steps are halved). The first row, and rows following an unstable
    one, have no rate.

    Raises:
        DomainError: if an error of a stable row is not positive.

    Returns:
        list: the rows with their ``rates`` set.
    """
    out = []
    prev = None
    for row in rows:
        if not row.stable or row.errors is None:
            out.append(row._replace(rates=None))
            prev = None
            continue
        for name, err in row.errors.items():
            if not err > 0:
                raise DomainError('error of {} at level {} is not positive: {}'
                    .format(name, row.level, err))
        rates = {
            name: (log2_ratio(err, prev.errors[name]) if prev else None)
            for name, err in row.errors.items()
        }
        out.append(row._replace(rates=rates))
        prev = row
    return out

from .errors import DomainError, StaggerError
from .grid import inner, inner_bundle, norm
from .model import exact_state
from .stepper import get_stepper
from .utils import log2_ratio
