"""Three-level leapfrog time stepping of the Maxwell-Drude system.

With ``W = (U, V)`` the electric-type fields ``U`` and the auxiliary field
``V``, the semi-discrete system reads ``P W_tt + A1 W = 0`` with
``P = diag(1 / c^2, 1 / wb^2)`` and::

    A1 = [ C*C + wa^2 / c^2    s C* ]
         [ s C                 1    ]

The fourth order scheme replaces the leading truncation term of the centered
second difference in time by spatial operators,
``W_tttt = (P^-1 A)^2 W = c^2 P^-1 A2 W``::

    W[n+1] = 2 W[n] - W[n-1] - dt^2 P^-1 (A1 W[n] - dt^2 c^2 / 12 A2 W[n])

``A2`` is always assembled from second order operators. The ``(2, 4)`` scheme
drops the ``A2`` term and the ``(2, 2)`` scheme also uses second order
operators in ``A1``.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Sequence, Tuple, Union

import numpy as np

logger = logging.getLogger(__name__)

SCHEMES = {'22': (2, 2), '24': (2, 4), '44': (4, 4)}


def parse_scheme(value: Union[str, Sequence[int]]) -> Tuple[int, int]:
    """Function to turn ``'44'``, ``'(4,4)'``, ``'4,4'`` or ``(4, 4)`` into
    the order pair ``(time order, space order)``.

    Raises:
        ValueError: if ``value`` is not one of the three schemes.
    """
    if isinstance(value, str):
        key = ''.join(ch for ch in value if ch.isdigit())
    else:
        key = ''.join(str(int(v)) for v in value)
    if key not in SCHEMES:
        raise ValueError('scheme must be one of 22, 24 or 44: {}'
            .format(value))
    return SCHEMES[key]


def scheme_label(order: Tuple[int, int]) -> str:
    return '({},{})'.format(*order)


@dataclass(frozen=True)
class SchemeSpec:
    """The numerical setup of one simulation.

    Use :meth:`from_courant` or :meth:`from_mesh` to build one; they compute
    the mesh, the Courant number and the number of steps.

    Args:
        order (tuple): ``(time order, space order)``, one of ``(2, 2)``,
            ``(2, 4)`` and ``(4, 4)``.
        dim (int): 1 or 2.
        pair (str): ``'EK'`` or ``'HJ'`` (1D only).
        dt (float): the time step.
        mesh (MeshSpec): the mesh.
        nu (float): the Courant number ``c * dt / h``.
        T (float): the final time.
        steps (int): the number of time steps ``N = T / dt``.
    """
    order: Tuple[int, int]
    dim: int
    pair: str
    dt: float
    mesh: 'MeshSpec'
    nu: float
    T: float
    steps: int

    def __post_init__(self) -> None:
        if tuple(self.order) not in SCHEMES.values():
            raise ValueError('unknown scheme {}'.format(self.order))
        if self.dim not in (1, 2):
            raise ValueError('time stepping is available in 1D and 2D: {}'
                .format(self.dim))
        if self.pair not in PAIRS:
            raise ValueError('pair must be one of {}: {}'
                .format(PAIRS, self.pair))
        if self.pair == HJ and self.dim != 1:
            raise ValueError('the HJ pair is only available in 1D')
        if self.mesh.d != self.dim:
            raise StaggerError('a {}D scheme on a {}D mesh'
                .format(self.dim, self.mesh.d))
        if not (self.dt > 0 and self.T > 0 and self.steps >= 1):
            raise ValueError('dt, T and steps must be positive')

    @classmethod
    def from_courant(
        cls, order: Union[str, Tuple[int, int]], dt: float, nu: float,
        T: float, c: float, dim: int=1, pair: str='EK', L: float=1.0
    ) -> 'SchemeSpec':
        """Method to build a scheme from the time step and the Courant number.

        The cell count is ``M = round(L nu / (c dt))``; the Courant number is
        then recomputed as ``c dt / h``.

        Raises:
            DomainError: if ``L nu / (c dt)`` is not an integer or ``dt``
                does not divide ``T``.
        """
        if not (dt > 0 and nu > 0 and c > 0):
            raise DomainError('dt, nu and c must be positive: {}, {}, {}'
                .format(dt, nu, c))
        M = int(round(L * nu / (c * dt)))
        if M < 1 or abs(M * c * dt / nu - L) > 1e-9 * L:
            raise DomainError(
                'dt={} and nu={} give a non-integer cell count {}'
                .format(dt, nu, L * nu / (c * dt))
            )
        return cls.from_mesh(order, dt, M, T, c, dim, pair, L)

    @classmethod
    def from_mesh(
        cls, order: Union[str, Tuple[int, int]], dt: float, M: int, T: float,
        c: float, dim: int=1, pair: str='EK', L: float=1.0
    ) -> 'SchemeSpec':
        """Method to build a scheme from the time step and the cell count.

        Raises:
            DomainError: if ``dt`` does not divide ``T``.
        """
        mesh = MeshSpec(L, M, dim)
        N = int(round(T / dt))
        if N < 1 or abs(N * dt - T) > 1e-12 * T:
            raise DomainError('dt={} does not divide T={}'.format(dt, T))
        return cls(parse_scheme(order), dim, pair, dt, mesh, c * dt / mesh.h,
            T, N)

    @property
    def time_order(self) -> int:
        return self.order[0]

    @property
    def space_order(self) -> int:
        return self.order[1]

    @property
    def label(self) -> str:
        return scheme_label(self.order)

    @property
    def layout(self) -> tuple:
        return field_layout(self.dim, self.pair)

    def describe(self) -> dict:
        return {
            'scheme': self.label, 'dim': self.dim, 'pair': self.pair,
            'dt': self.dt, 'dx': self.mesh.h, 'M': self.mesh.M,
            'nu': self.nu, 'T': self.T, 'N': self.steps,
        }


@dataclass(frozen=True)
class StatePair:
    """The two most recent time levels of a simulation.

    Args:
        current (FieldBundle): ``W[n]``.
        previous (FieldBundle): ``W[n-1]``.
        n (int): the index of ``current``.
        scheme (SchemeSpec): the scheme.
    """
    current: 'FieldBundle'
    previous: 'FieldBundle'
    n: int
    scheme: SchemeSpec

    def __post_init__(self) -> None:
        layout = self.scheme.layout
        for bundle in (self.current, self.previous):
            if bundle.names != tuple(name for name, _ in layout):
                raise StaggerError('state fields {} do not match the layout {}'
                    .format(bundle.names, [name for name, _ in layout]))
            for name, stagger in layout:
                gf = bundle[name]
                if gf.stagger != stagger or gf.mesh != self.scheme.mesh:
                    raise StaggerError(
                        'state field {} on {} does not fit the scheme grid {}'
                        .format(name, gf.stagger, stagger)
                    )

    @property
    def t(self) -> float:
        """float: the time of ``current``, ``n * dt``."""
        return self.n * self.scheme.dt

    def reversed(self) -> 'StatePair':
        """Method to swap the two levels. Stepping the reversed state runs the
        recurrence backwards in time; ``n`` goes on counting steps."""
        return StatePair(self.previous, self.current, self.n, self.scheme)

    def is_finite(self) -> bool:
        return self.current.is_finite() and self.previous.is_finite()


class LeapfrogStepper:
    """The matrix-free operators and update of one scheme.

    The operator chains are built (and stagger-checked) once here. The
    attribute ``correction_factor`` multiplies the ``A2`` term; it is 1 for
    the ``(4, 4)`` scheme and 0 for the others.

    Args:
        scheme (SchemeSpec): the scheme.
        params (PhysParams): the physical parameters of the scheme's pair.
    """
    def __init__(self, scheme: SchemeSpec, params: 'PhysParams') -> None:
        self.scheme = scheme
        self.params = params
        self.names = tuple(name for name, _ in scheme.layout)
        self.c2 = params.c ** 2
        self.wa, self.wb, self.sign = pair_frequencies(params, scheme.pair)
        self.correction_factor = 1.0 if scheme.time_order == 4 else 0.0

        p1 = curl_pair(scheme.dim, scheme.space_order)
        self.CsC = p1.chain('C', 'C*')
        self.C = p1.chain('C')
        self.Cs = p1.chain('C*')

        p2 = curl_pair(scheme.dim, 2)
        self.C2 = p2.chain('C')
        self.Cs2 = p2.chain('C*')
        self.CsC2 = p2.chain('C', 'C*')
        self.CCs2 = p2.chain('C*', 'C')
        self.CsCCsC2 = p2.chain('C', 'C*', 'C', 'C*')
        self.CsCCs2 = p2.chain('C*', 'C', 'C*')
        self.CCsC2 = p2.chain('C', 'C*', 'C')

    def split(self, W: 'FieldBundle') -> Tuple[tuple, tuple]:
        """Method to split a bundle into its electric-type fields and its
        auxiliary field."""
        if W.names != self.names:
            raise StaggerError('bundle fields {} do not match the layout {}'
                .format(W.names, self.names))
        fields = tuple(W.values())
        return fields[:-1], fields[-1:]

    def join(self, U: Iterable, V: Iterable) -> 'FieldBundle':
        return FieldBundle(zip(self.names, tuple(U) + tuple(V)))

    def coupling(self, W: 'FieldBundle', order: int=None) -> 'GridFunction':
        """Method to compute ``C U + s V``, with second order operators if
        ``order`` is 2 and the scheme's operators otherwise."""
        U, V = self.split(W)
        C = self.C2 if order == 2 else self.C
        return C(U)[0] + self.sign * V[0]

    def apply_A1(self, W: 'FieldBundle') -> 'FieldBundle':
        """Method to apply ``A1`` with the scheme's space order."""
        U, V = self.split(W)
        k = self.wa ** 2 / self.c2
        s = self.sign
        out_U = [
            a + k * u + s * b for a, u, b in zip(self.CsC(U), U, self.Cs(V))
        ]
        out_V = [s * a + v for a, v in zip(self.C(U), V)]
        return self.join(out_U, out_V)

    def apply_A2(self, W: 'FieldBundle') -> 'FieldBundle':
        """Method to apply ``A2``, assembled from second order operators::

            a11 = (C*C)^2 + (2 wa^2 + wb^2) C*C / c^2 + wa^4 / c^4
            a12 = s (C*CC* + (wa^2 + wb^2) C* / c^2)
            a21 = s (CC*C + (wa^2 + wb^2) C / c^2)
            a22 = CC* + wb^2 / c^2
        """
        U, V = self.split(W)
        c2, s = self.c2, self.sign
        wa2, wb2 = self.wa ** 2, self.wb ** 2
        k11 = (2 * wa2 + wb2) / c2
        k0 = wa2 * wa2 / (c2 * c2)
        kx = (wa2 + wb2) / c2
        out_U = [
            q + k11 * a + k0 * u + s * (b + kx * e)
            for q, a, u, b, e in zip(
                self.CsCCsC2(U), self.CsC2(U), U, self.CsCCs2(V), self.Cs2(V)
            )
        ]
        out_V = [
            s * (a + kx * b) + q + (wb2 / c2) * v
            for a, b, q, v in zip(self.CCsC2(U), self.C2(U), self.CCs2(V), V)
        ]
        return self.join(out_U, out_V)

    def apply_Pinv(self, W: 'FieldBundle') -> 'FieldBundle':
        """Method to apply ``P^-1 = diag(c^2, wb^2)``."""
        U, V = self.split(W)
        return self.join((self.c2 * u for u in U), (self.wb ** 2 * v for v in V))

    def operator(self, W: 'FieldBundle') -> 'FieldBundle':
        """Method to compute ``A1 W - dt^2 c^2 / 12 A2 W``, the A2 term
        scaled by ``correction_factor``."""
        out = self.apply_A1(W)
        if self.correction_factor:
            kappa = self.correction_factor * self.scheme.dt ** 2 * self.c2 / 12
            out = out - kappa * self.apply_A2(W)
        return out

    def initialize(
        self, source: Union['ManufacturedSolution', 'InitialData'],
        start: str='exact'
    ) -> StatePair:
        """Method to compute the first two time levels.

        Args:
            source (ManufacturedSolution, InitialData): the initial data.
            start (str, optional): ``'exact'`` samples a manufactured solution
                at ``t = 0`` and ``t = dt``. ``'taylor'`` expands ``W(dt)`` in
                time, turning time derivatives into spatial operators through
                the equations::

                    W1 = W0 + dt V0 - dt^2/2 P^-1 A1 W0
                         - dt^3/6 P^-1 A1 V0 + dt^4/24 c^2 P^-1 A2 W0

                where ``V0 = W_t(0)``. Second order in time schemes stop after
                the ``dt^2`` term.

        Raises:
            StaggerError: if ``start`` is ``'exact'`` and ``source`` is not a
                manufactured solution, or if the initial data has no time
                derivatives.

        Returns:
            StatePair: the state at ``n = 1``.
        """
        scheme = self.scheme
        mesh, dt = scheme.mesh, scheme.dt
        if start == 'exact':
            if not isinstance(source, ManufacturedSolution):
                raise StaggerError('exact start-up needs a manufactured solution')
            self._check_source(source.dim, source.pair)
            W0 = exact_state(source, mesh, 0.0)
            W1 = exact_state(source, mesh, dt)
        elif start == 'taylor':
            data = source
            if isinstance(source, ManufacturedSolution):
                data = source.initial_data()
            self._check_source(data.dim, data.pair)
            if not data.rates or set(data.rates) != set(self.names):
                raise StaggerError('Taylor start-up needs the time derivative '
                    'of every field')
            W0, V0 = data.sample(mesh)
            W1 = W0 + dt * V0 - (dt ** 2 / 2) * self.apply_Pinv(self.apply_A1(W0))
            if scheme.time_order == 4:
                W1 = (
                    W1 - (dt ** 3 / 6) * self.apply_Pinv(self.apply_A1(V0))
                    + (dt ** 4 / 24 * self.c2)
                    * self.apply_Pinv(self.apply_A2(W0))
                )
        else:
            raise ValueError('start must be "exact" or "taylor": {}'
                .format(start))
        return StatePair(W1, W0, 1, scheme)

    def _check_source(self, dim: int, pair: str) -> None:
        if (dim, pair) != (self.scheme.dim, self.scheme.pair):
            raise StaggerError('initial data for dim={} pair={} does not fit '
                'the scheme (dim={} pair={})'.format(
                    dim, pair, self.scheme.dim, self.scheme.pair))

    def step(self, state: StatePair) -> StatePair:
        """Method to advance the state by one time step.

        Raises:
            InstabilityError: if the new level has non-finite values.

        Returns:
            StatePair: the state at ``n + 1``.
        """
        dt2 = self.scheme.dt ** 2
        W, W_prev = state.current, state.previous
        with np.errstate(over='ignore', invalid='ignore'):
            W_next = 2.0 * W - W_prev - dt2 * self.apply_Pinv(self.operator(W))
        if not W_next.is_finite():
            logger.warning('non-finite values at step %d (%s, nu=%.4g)',
                state.n + 1, self.scheme.label, self.scheme.nu)
            raise InstabilityError(state.n + 1)
        return StatePair(W_next, W, state.n + 1, state.scheme)

    def run(
        self, state: StatePair, steps: int=None,
        callbacks: Iterable[Callable]=()
    ) -> StatePair:
        """Method to advance ``state`` by ``steps`` steps (by default up to
        the scheme's final step) calling ``callback(stepper, state)`` after
        every step.

        Returns:
            StatePair: the last state.
        """
        if steps is None:
            steps = self.scheme.steps - state.n
        callbacks = tuple(callbacks)
        for _ in range(steps):
            state = self.step(state)
            for callback in callbacks:
                callback(self, state)
        return state


@lru_cache(maxsize=32)
def get_stepper(scheme: SchemeSpec, params: 'PhysParams') -> LeapfrogStepper:
    """Function to get the (cached) stepper of a scheme."""
    return LeapfrogStepper(scheme, params)


def apply_A1(
    W: 'FieldBundle', scheme: SchemeSpec, p: 'PhysParams'
) -> 'FieldBundle':
    return get_stepper(scheme, p).apply_A1(W)


def apply_A2(
    W: 'FieldBundle', scheme: SchemeSpec, p: 'PhysParams'
) -> 'FieldBundle':
    return get_stepper(scheme, p).apply_A2(W)


def initialize(
    scheme: SchemeSpec, p: 'PhysParams',
    source: Union['ManufacturedSolution', 'InitialData'], start: str='exact'
) -> StatePair:
    return get_stepper(scheme, p).initialize(source, start)


def step(state: StatePair, p: 'PhysParams') -> StatePair:
    return get_stepper(state.scheme, p).step(state)


def run(
    scheme: SchemeSpec, p: 'PhysParams',
    source: Union['ManufacturedSolution', 'InitialData'],
    callbacks: Iterable[Callable]=(), start: str='exact'
) -> StatePair:
    """Function to run a whole simulation: compute the first two levels, then
    step up to ``scheme.steps``. Every callback is called as
    ``callback(stepper, state)`` for the initial state and after every step.

    Args:
        scheme (SchemeSpec): the scheme.
        p (PhysParams): the parameters.
        source (ManufacturedSolution, InitialData): the initial data.
        callbacks (iterable, optional): diagnostics, like the monitors of
            :mod:`drudefd.diagnostics`.
        start (str, optional): ``'exact'`` or ``'taylor'``.

    Raises:
        InstabilityError: if the fields blow up.

    Returns:
        StatePair: the final state.
    """
    stepper = get_stepper(scheme, p)
    callbacks = tuple(callbacks)
    logger.debug('run %s dim=%d pair=%s dt=%g M=%d N=%d', scheme.label,
        scheme.dim, scheme.pair, scheme.dt, scheme.mesh.M, scheme.steps)
    state = stepper.initialize(source, start)
    for callback in callbacks:
        callback(stepper, state)
    state = stepper.run(state, callbacks=callbacks)
    logger.debug('run %s finished at n=%d', scheme.label, state.n)
    return state

from .errors import DomainError, InstabilityError, StaggerError
from .grid import FieldBundle, GridFunction, MeshSpec
from .model import (
    HJ, PAIRS, InitialData, ManufacturedSolution, exact_state, field_layout,
    pair_frequencies
)
from .stencil import curl_pair
