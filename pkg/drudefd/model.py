"""Physical model: Drude parameters, manufactured solutions and energies.

The solver works with two second order formulations of the Maxwell-Drude
system. In the ``EK`` pair the unknowns are the electric field ``E`` and the
magnetization current ``K``; in the ``HJ`` pair they are the magnetic field
``H`` and the polarization current ``J``. Both have the form::

    U_tt + c^2 C*C U + wa^2 U + s c^2 C* V = 0
    V_tt + wb^2 V + s wb^2 C U = 0

where ``C`` is the curl (``d/dx`` in 1D), ``C*`` its adjoint and
``(wa, wb, s)`` is ``(omega_pe, omega_pm, +1)`` for ``EK`` and
``(omega_pm, omega_pe, -1)`` for ``HJ`` (see :func:`pair_frequencies`).

The manufactured solutions carry the factor ``sin(omega * pi * t)``: the
temporal angular frequency is ``omega * pi``, not ``omega``.
"""

import math
from dataclasses import dataclass, replace
from typing import Callable, Dict, Sequence, Tuple

import numpy as np

EK = 'EK'
HJ = 'HJ'
PAIRS = (EK, HJ)

LAYOUTS = {
    (1, EK): (('E', 'p'), ('K', 'd')),
    (1, HJ): (('H', 'p'), ('J', 'd')),
    (2, EK): (('Ex', 'dp'), ('Ey', 'pd'), ('K', 'dd')),
}


def field_layout(dim: int, pair: str=EK) -> Tuple[Tuple[str, 'Stagger'], ...]:
    """Function to get the names and staggers of the fields of a simulation.

    The electric-type fields come first and the auxiliary field last.

    Args:
        dim (int): 1 or 2.
        pair (str, optional): ``'EK'`` or ``'HJ'`` (1D only).

    Raises:
        ValueError: if there's no layout for ``dim`` and ``pair``.

    Returns:
        tuple: ``(name, Stagger)`` pairs.
    """
    try:
        layout = LAYOUTS[(dim, pair)]
    except KeyError:
        raise ValueError(
            'no field layout for dim={} and pair={}'.format(dim, pair)
        ) from None
    return tuple((name, Stagger(tags)) for name, tags in layout)


@dataclass(frozen=True)
class PhysParams:
    """The constants of the Maxwell-Drude system.

    Args:
        eps0 (float): vacuum permittivity.
        mu0 (float): vacuum permeability.
        omega_pe (float): electric plasma frequency.
        omega_pm (float): magnetic plasma frequency.

    Raises:
        DomainError: if ``eps0`` or ``mu0`` are not positive, or a plasma
            frequency is negative.
    """
    eps0: float
    mu0: float
    omega_pe: float
    omega_pm: float

    def __post_init__(self) -> None:
        if not self.eps0 > 0:
            raise DomainError('eps0 must be positive: {}'.format(self.eps0))
        if not self.mu0 > 0:
            raise DomainError('mu0 must be positive: {}'.format(self.mu0))
        if not self.omega_pe >= 0:
            raise DomainError('omega_pe must be non-negative: {}'
                .format(self.omega_pe))
        if not self.omega_pm >= 0:
            raise DomainError('omega_pm must be non-negative: {}'
                .format(self.omega_pm))

    @property
    def c(self) -> float:
        """float: the speed of light ``1 / sqrt(eps0 * mu0)``."""
        return 1.0 / math.sqrt(self.eps0 * self.mu0)

    def swapped(self) -> 'PhysParams':
        """Method to get these parameters with the plasma frequencies
        exchanged, the map between the ``EK`` and ``HJ`` formulations."""
        return replace(self, omega_pe=self.omega_pm, omega_pm=self.omega_pe)

    def as_dict(self) -> dict:
        return {
            'eps0': self.eps0, 'mu0': self.mu0, 'omega_pe': self.omega_pe,
            'omega_pm': self.omega_pm, 'c': self.c
        }


def pair_frequencies(p: PhysParams, pair: str=EK) -> Tuple[float, float, int]:
    """Function to get the frequencies ``(wa, wb)`` and the coupling sign ``s``
    of the second order system of ``pair`` (see the module docstring)."""
    if pair == EK:
        return p.omega_pe, p.omega_pm, 1
    if pair == HJ:
        return p.omega_pm, p.omega_pe, -1
    raise ValueError('pair must be one of {}: {}'.format(PAIRS, pair))


def drude_permittivity(omega: float, p: PhysParams) -> Tuple[float, float]:
    """Function to evaluate Drude's law at angular frequency ``omega``.

    Args:
        omega (float): the angular frequency.
        p (PhysParams): the material constants.

    Raises:
        DomainError: if ``omega`` is zero.

    Returns:
        tuple: ``(eps0 * (1 - omega_pe^2 / omega^2),
        mu0 * (1 - omega_pm^2 / omega^2))``. Both are negative below the
        plasma frequencies.
    """
    if omega == 0:
        raise DomainError('Drude permittivity is not defined at omega = 0')
    w2 = omega * omega
    return (
        p.eps0 * (1 - p.omega_pe ** 2 / w2),
        p.mu0 * (1 - p.omega_pm ** 2 / w2),
    )


def derive_params_1d(
    eps0: float, mu0: float, k: int, omega_pe: float
) -> Tuple[float, float, PhysParams]:
    """Function to get the frequencies that make the 1D manufactured solution
    exact for the ``EK`` system::

        omega = (omega_pe / pi) * sqrt(eps0 / (eps0 - k))
        omega_pm = sqrt((omega_pe^2 / (c^2 (eps0 - k)) - k pi^2) / mu0)

    Args:
        eps0 (float): vacuum permittivity, larger than ``k``.
        mu0 (float): vacuum permeability.
        k (int): the wavenumber.
        omega_pe (float): electric plasma frequency.

    Raises:
        DomainError: if ``eps0 <= k`` or the radicand of ``omega_pm`` is not
            positive.

    Returns:
        tuple: ``(omega_pm, omega, PhysParams)``.
    """
    if not eps0 > k:
        raise DomainError('eps0 must exceed k: eps0={}, k={}'.format(eps0, k))
    if not mu0 > 0:
        raise DomainError('mu0 must be positive: {}'.format(mu0))
    c2 = 1.0 / (eps0 * mu0)
    radicand = (omega_pe ** 2 / (c2 * (eps0 - k)) - k * math.pi ** 2) / mu0
    if not radicand > 0:
        raise DomainError('omega_pm^2 = {} is not positive'.format(radicand))
    omega_pm = math.sqrt(radicand)
    omega = omega_pe / math.pi * math.sqrt(eps0 / (eps0 - k))
    return omega_pm, omega, PhysParams(eps0, mu0, omega_pe, omega_pm)


def derive_params_hj_1d(
    eps0: float, mu0: float, k: int, omega_pm: float
) -> Tuple[float, float, PhysParams]:
    """Function to get the frequencies of the 1D ``HJ`` manufactured solution
    from the given magnetic plasma frequency.

    The ``HJ`` system is the ``EK`` system with the plasma frequencies
    exchanged, so this is :func:`derive_params_1d` with ``omega_pm`` in the
    role of ``omega_pe``.

    Returns:
        tuple: ``(omega_pe, omega, PhysParams)``, the parameters being those
        of the ``HJ`` system.
    """
    omega_pe, omega, p = derive_params_1d(eps0, mu0, k, omega_pm)
    return omega_pe, omega, p.swapped()


def derive_params_2d(
    eps0: float, mu0: float, kvec: Sequence[int], omega_pe: float
) -> Tuple[float, float, PhysParams]:
    """Function to get the frequencies that make the 2D TE manufactured
    solution exact::

        omega = (omega_pe / pi) * sqrt(eps0 / (1 + eps0))
        omega_pm = sqrt((|k|^2 pi^2 + omega_pe^2 / (c^2 (1 + eps0))) / mu0)

    Returns:
        tuple: ``(omega_pm, omega, PhysParams)``.
    """
    kx, ky = kvec
    if not (eps0 > 0 and mu0 > 0):
        raise DomainError('eps0 and mu0 must be positive: {}, {}'
            .format(eps0, mu0))
    c2 = 1.0 / (eps0 * mu0)
    k2 = kx * kx + ky * ky
    radicand = (k2 * math.pi ** 2 + omega_pe ** 2 / (c2 * (1 + eps0))) / mu0
    if not radicand > 0:
        raise DomainError('omega_pm^2 = {} is not positive'.format(radicand))
    omega_pm = math.sqrt(radicand)
    omega = omega_pe / math.pi * math.sqrt(eps0 / (1 + eps0))
    return omega_pm, omega, PhysParams(eps0, mu0, omega_pe, omega_pm)


@dataclass(frozen=True)
class InitialData:
    """Field values and their first time derivatives at ``t = 0``.

    Args:
        dim (int): the spatial dimension.
        pair (str): ``'EK'`` or ``'HJ'``.
        values (dict): field name to a vectorized function of position.
        rates (dict): field name to the time derivative at ``t = 0``.
    """
    dim: int
    pair: str
    values: Dict[str, Callable]
    rates: Dict[str, Callable]

    def sample(self, mesh: 'MeshSpec') -> Tuple['FieldBundle', 'FieldBundle']:
        """Method to sample the data on the staggered grids of ``mesh``.

        Returns:
            tuple: the bundles ``(W0, V0)`` of values and time derivatives.
        """
        layout = field_layout(self.dim, self.pair)
        W0 = FieldBundle(
            (name, sample(self.values[name], mesh, st)) for name, st in layout
        )
        V0 = FieldBundle(
            (name, sample(self.rates[name], mesh, st)) for name, st in layout
        )
        return W0, V0


class ManufacturedSolution:
    """Base class of the exact solutions used as error oracles.

    Subclasses define :meth:`field`, :meth:`rate` and :meth:`curl`, each
    returning a vectorized function of position for a given time.
    """
    dim = 1
    pair = EK

    def __init__(self, omega: float, params: PhysParams) -> None:
        self.omega = omega
        self.params = params

    @property
    def layout(self) -> Tuple[Tuple[str, 'Stagger'], ...]:
        return field_layout(self.dim, self.pair)

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(name for name, _ in self.layout)

    @property
    def angular_frequency(self) -> float:
        """float: ``omega * pi``, the angular frequency in time."""
        return self.omega * math.pi

    def field(self, name: str, t: float) -> Callable:
        raise NotImplementedError

    def rate(self, name: str, t: float) -> Callable:
        raise NotImplementedError

    def curl(self, t: float) -> Callable:
        raise NotImplementedError

    def initial_data(self) -> InitialData:
        return InitialData(
            self.dim, self.pair,
            {name: self.field(name, 0.0) for name in self.names},
            {name: self.rate(name, 0.0) for name in self.names},
        )


class ManufacturedSolution1D(ManufacturedSolution):
    """The 1D exact solution on ``[0, L]``::

        E(x, t) = (1 / omega) sin(omega pi t) sin(k pi x)
        K(x, t) = mu0 omega_pm^2 / (pi omega) sin(omega pi t) cos(k pi x)

    It solves the ``EK`` system when ``omega`` and ``omega_pm`` come from
    :func:`derive_params_1d`. With ``pair='HJ'`` the fields are
    ``H = E`` and ``J = -K`` and the parameters have their plasma frequencies
    exchanged, which solves the ``HJ`` system.

    Args:
        k (int): the wavenumber.
        omega (float): the frequency.
        params (PhysParams): the parameters of the ``EK`` system.
        pair (str, optional): ``'EK'`` or ``'HJ'``.
    """
    dim = 1

    def __init__(
        self, k: int, omega: float, params: PhysParams, pair: str=EK
    ) -> None:
        if pair not in PAIRS:
            raise ValueError('pair must be one of {}: {}'.format(PAIRS, pair))
        super().__init__(omega, params if pair == EK else params.swapped())
        self.k = k
        self.pair = pair
        self._ek_params = params
        self.amplitude = params.mu0 * params.omega_pm ** 2 / (math.pi * omega)

    @classmethod
    def from_params(
        cls, eps0: float=5.0, mu0: float=0.2, k: int=2,
        omega_pe: float=26.63199
    ) -> 'ManufacturedSolution1D':
        _, omega, p = derive_params_1d(eps0, mu0, k, omega_pe)
        return cls(k, omega, p)

    def dual(self) -> 'ManufacturedSolution1D':
        """Method to get the same solution in the other formulation
        (``EK`` to ``HJ`` and back)."""
        return ManufacturedSolution1D(
            self.k, self.omega, self._ek_params, HJ if self.pair == EK else EK
        )

    @property
    def _sign(self) -> int:
        return 1 if self.pair == EK else -1

    def E(self, x, t: float):
        return (np.sin(self.angular_frequency * t) / self.omega
            * np.sin(self.k * math.pi * x))

    def K(self, x, t: float):
        return (self.amplitude * np.sin(self.angular_frequency * t)
            * np.cos(self.k * math.pi * x))

    def dE_dt(self, x, t: float):
        return (math.pi * np.cos(self.angular_frequency * t)
            * np.sin(self.k * math.pi * x))

    def dK_dt(self, x, t: float):
        return (self.amplitude * self.angular_frequency
            * np.cos(self.angular_frequency * t) * np.cos(self.k * math.pi * x))

    def dE_dx(self, x, t: float):
        return (np.sin(self.angular_frequency * t) / self.omega
            * self.k * math.pi * np.cos(self.k * math.pi * x))

    def dK_dx(self, x, t: float):
        return (-self.amplitude * np.sin(self.angular_frequency * t)
            * self.k * math.pi * np.sin(self.k * math.pi * x))

    def field(self, name: str, t: float) -> Callable:
        primary, auxiliary = self.names
        if name == primary:
            return lambda x: self.E(x, t)
        if name == auxiliary:
            return lambda x: self._sign * self.K(x, t)
        raise KeyError(name)

    def rate(self, name: str, t: float) -> Callable:
        primary, auxiliary = self.names
        if name == primary:
            return lambda x: self.dE_dt(x, t)
        if name == auxiliary:
            return lambda x: self._sign * self.dK_dt(x, t)
        raise KeyError(name)

    def curl(self, t: float) -> Callable:
        return lambda x: self.dE_dx(x, t)

    def residual(self, x, t: float) -> Tuple[float, float]:
        """Method to evaluate the two equations of the solution's system at
        ``(x, t)`` with closed form derivatives. Both vanish for a consistent
        set of parameters.

        For ``EK``::

            E_tt - c^2 E_xx + omega_pe^2 E - c^2 K_x
            K_tt + omega_pm^2 K + omega_pm^2 E_x

        and for ``HJ``::

            H_tt - c^2 H_xx + omega_pm^2 H + c^2 J_x
            J_tt + omega_pe^2 J - omega_pe^2 H_x
        """
        p = self.params
        c2 = p.c ** 2
        w2 = self.angular_frequency ** 2
        kpi2 = (self.k * math.pi) ** 2
        U, V = self.E(x, t), self._sign * self.K(x, t)
        U_x, V_x = self.dE_dx(x, t), self._sign * self.dK_dx(x, t)
        U_tt, V_tt, U_xx = -w2 * U, -w2 * V, -kpi2 * U
        if self.pair == EK:
            return (
                U_tt - c2 * U_xx + p.omega_pe ** 2 * U - c2 * V_x,
                V_tt + p.omega_pm ** 2 * V + p.omega_pm ** 2 * U_x,
            )
        return (
            U_tt - c2 * U_xx + p.omega_pm ** 2 * U + c2 * V_x,
            V_tt + p.omega_pe ** 2 * V - p.omega_pe ** 2 * U_x,
        )


class ManufacturedSolution2D(ManufacturedSolution):
    """The 2D TE exact solution on ``[0, L]^2``::

        Ex = -(ky / omega) sin(omega pi t) sin(kx pi x) cos(ky pi y)
        Ey =  (kx / omega) sin(omega pi t) cos(kx pi x) sin(ky pi y)
        K  = mu0 omega_pm^2 / (pi omega) sin(omega pi t)
             sin(kx pi x) sin(ky pi y)

    with ``omega`` and ``omega_pm`` from :func:`derive_params_2d`.
    """
    dim = 2

    def __init__(
        self, k: Sequence[int], omega: float, params: PhysParams
    ) -> None:
        super().__init__(omega, params)
        self.k = tuple(k)
        self.amplitude = params.mu0 * params.omega_pm ** 2 / (math.pi * omega)

    @classmethod
    def from_params(
        cls, eps0: float=5.0, mu0: float=0.2, k: Sequence[int]=(2, 2),
        omega_pe: float=10.0
    ) -> 'ManufacturedSolution2D':
        _, omega, p = derive_params_2d(eps0, mu0, k, omega_pe)
        return cls(k, omega, p)

    def _trig(self, x, y):
        ax, ay = self.k[0] * math.pi, self.k[1] * math.pi
        return np.sin(ax * x), np.cos(ax * x), np.sin(ay * y), np.cos(ay * y)

    def _shapes(self, x, y) -> Dict[str, np.ndarray]:
        sx, cx, sy, cy = self._trig(x, y)
        kx, ky = self.k
        return {
            'Ex': -ky / self.omega * sx * cy,
            'Ey': kx / self.omega * cx * sy,
            'K': self.amplitude * sx * sy,
        }

    def field(self, name: str, t: float) -> Callable:
        s = np.sin(self.angular_frequency * t)
        return lambda x, y: s * self._shapes(x, y)[name]

    def rate(self, name: str, t: float) -> Callable:
        s = self.angular_frequency * np.cos(self.angular_frequency * t)
        return lambda x, y: s * self._shapes(x, y)[name]

    def curl(self, t: float) -> Callable:
        kx, ky = self.k
        s = np.sin(self.angular_frequency * t)
        scale = -(kx * kx + ky * ky) * math.pi / self.omega

        def func(x, y):
            sx, _, sy, _ = self._trig(x, y)
            return s * scale * sx * sy
        return func

    def residual(self, x, y, t: float) -> Tuple[float, float, float]:
        """Method to evaluate the three equations of the TE system::

            E_tt + c^2 curl_v curl E + omega_pe^2 E + c^2 curl_v K
            K_tt + omega_pm^2 K + omega_pm^2 curl E

        at ``(x, y, t)``, where ``curl_v K = (K_y, -K_x)``. All vanish for a
        consistent set of parameters.
        """
        p = self.params
        c2 = p.c ** 2
        w2 = self.angular_frequency ** 2
        ax, ay = self.k[0] * math.pi, self.k[1] * math.pi
        s = np.sin(self.angular_frequency * t)
        sx, cx, sy, cy = self._trig(x, y)
        shapes = self._shapes(x, y)
        Ex, Ey, K = (s * shapes[n] for n in ('Ex', 'Ey', 'K'))
        curl_scale = s * -(self.k[0] ** 2 + self.k[1] ** 2) * math.pi / self.omega
        # curl_v of the scalar curl and of K
        cc_x = curl_scale * ay * sx * cy
        cc_y = -curl_scale * ax * cx * sy
        cK_x = s * self.amplitude * ay * sx * cy
        cK_y = -s * self.amplitude * ax * cx * sy
        curl_E = curl_scale * sx * sy
        return (
            -w2 * Ex + c2 * cc_x + p.omega_pe ** 2 * Ex + c2 * cK_x,
            -w2 * Ey + c2 * cc_y + p.omega_pe ** 2 * Ey + c2 * cK_y,
            -w2 * K + p.omega_pm ** 2 * K + p.omega_pm ** 2 * curl_E,
        )


def exact_state(
    sol: ManufacturedSolution, mesh: 'MeshSpec', t: float
) -> 'FieldBundle':
    """Function to sample a manufactured solution at time ``t``, every field on
    its own staggered grid.

    Args:
        sol (ManufacturedSolution): the solution.
        mesh (MeshSpec): the mesh, of the solution's dimension.
        t (float): the time.

    Returns:
        FieldBundle: the sampled fields.
    """
    if mesh.d != sol.dim:
        raise StaggerError('a {}D solution on a {}D mesh'
            .format(sol.dim, mesh.d))
    return FieldBundle(
        (name, sample(sol.field(name, t), mesh, st))
        for name, st in sol.layout
    )


def _quadrature_mesh(sol: ManufacturedSolution, L: float) -> 'MeshSpec':
    kmax = max(abs(k) for k in np.atleast_1d(sol.k))
    return MeshSpec(L, max(64, int(4 * kmax * L) + 8), sol.dim)


def continuous_energy(
    sol: ManufacturedSolution, p: PhysParams=None, t: float=0.0,
    L: float=1.0
) -> float:
    """Function to compute the continuous energy of a manufactured solution::

        1/2 (|U_t|^2 / c^2 + |V_t|^2 / wb^2 + wa^2 |U|^2 / c^2 + |C U + s V|^2)

    with ``(wa, wb, s)`` from :func:`pair_frequencies`. The integrals over
    ``[0, L]^d`` use the periodic trapezoidal rule, exact for the trigonometric
    polynomials of the manufactured solutions.

    Args:
        sol (ManufacturedSolution): the solution.
        p (PhysParams, optional): the parameters; defaults to ``sol.params``.
        t (float, optional): the time of evaluation.
        L (float, optional): the box length.

    Returns:
        float: the energy.
    """
    p = sol.params if p is None else p
    wa, wb, s = pair_frequencies(p, sol.pair)
    c2 = p.c ** 2
    mesh = _quadrature_mesh(sol, L)
    primal = Stagger.primal(sol.dim)
    names = sol.names
    fields = [sample(sol.field(n, t), mesh, primal) for n in names]
    rates = [sample(sol.rate(n, t), mesh, primal) for n in names]
    electric, auxiliary = fields[:-1], fields[-1]
    energy = sum(norm(u) ** 2 for u in rates[:-1]) / c2
    if wb:
        energy += norm(rates[-1]) ** 2 / wb ** 2
    energy += wa ** 2 / c2 * sum(norm(u) ** 2 for u in electric)
    coupled = sample(sol.curl(t), mesh, primal) + s * auxiliary
    energy += norm(coupled) ** 2
    return 0.5 * energy


def continuous_energy_EK(
    sol: ManufacturedSolution, p: PhysParams=None, t: float=0.0,
    L: float=1.0
) -> float:
    """Function to compute the ``EK`` energy
    ``1/2 (|E_t|^2 / c^2 + |K_t|^2 / omega_pm^2 + omega_pe^2 |E|^2 / c^2
    + |curl E + K|^2)``. See :func:`continuous_energy`."""
    if sol.pair != EK:
        raise ValueError('continuous_energy_EK needs an EK solution')
    return continuous_energy(sol, p, t, L)


def continuous_energy_HJ(
    sol: ManufacturedSolution, p: PhysParams=None, t: float=0.0,
    L: float=1.0
) -> float:
    """Function to compute the ``HJ`` energy
    ``1/2 (|H_t|^2 / c^2 + |J_t|^2 / omega_pe^2 + omega_pm^2 |H|^2 / c^2
    + |curl H - J|^2)``. See :func:`continuous_energy`."""
    if sol.pair != HJ:
        raise ValueError('continuous_energy_HJ needs an HJ solution')
    return continuous_energy(sol, p, t, L)

from .errors import DomainError, StaggerError
from .grid import FieldBundle, MeshSpec, Stagger, norm, sample
