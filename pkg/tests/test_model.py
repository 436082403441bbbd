import math

import numpy as np
import pytest

from drudefd import (
    DomainError, ManufacturedSolution1D, ManufacturedSolution2D, MeshSpec,
    PhysParams, StaggerError, continuous_energy_EK, continuous_energy_HJ,
    derive_params_1d, derive_params_2d, derive_params_hj_1d,
    drude_permittivity, exact_state
)
from drudefd.model import (
    EK, HJ, continuous_energy, field_layout, pair_frequencies
)

from .utils import rng

E_EK = 13.301488849498405
PUBLISHED_E_EK = 13.30148848500039


def test_phys_params():
    p = PhysParams(5.0, 0.2, 1.0, 2.0)
    assert p.c == pytest.approx(1.0, rel=1e-15)
    assert p.swapped() == PhysParams(5.0, 0.2, 2.0, 1.0)
    assert p.as_dict()['omega_pm'] == 2.0
    for args in [(0, 1, 1, 1), (1, -1, 1, 1), (1, 1, -1, 1), (1, 1, 1, -2)]:
        with pytest.raises(DomainError):
            PhysParams(*args)


def test_pair_frequencies():
    p = PhysParams(5.0, 0.2, 1.0, 2.0)
    assert pair_frequencies(p, EK) == (1.0, 2.0, 1)
    assert pair_frequencies(p, HJ) == (2.0, 1.0, -1)
    with pytest.raises(ValueError):
        pair_frequencies(p, 'EH')


def test_field_layout():
    assert [n for n, _ in field_layout(1, HJ)] == ['H', 'J']
    assert [str(s) for _, s in field_layout(2)] == ['dp', 'pd', 'dd']
    with pytest.raises(ValueError):
        field_layout(2, HJ)


def test_drude_permittivity():
    p = PhysParams(5.0, 0.2, 3.0, 3.0)
    assert drude_permittivity(3.0, p) == (0.0, 0.0)
    eps, mu = drude_permittivity(1.5, p)
    assert eps == pytest.approx(-3 * 5.0, rel=1e-15)
    assert mu == pytest.approx(-3 * 0.2, rel=1e-15)
    eps, mu = drude_permittivity(1e9, PhysParams(5.0, 0.2, 1.0, 1.0))
    assert eps == pytest.approx(5.0, rel=1e-15)
    assert mu == pytest.approx(0.2, rel=1e-15)
    with pytest.raises(DomainError):
        drude_permittivity(0.0, p)


def test_derive_params_1d():
    omega_pm, omega, p = derive_params_1d(5.0, 0.2, 2, 26.63199)
    assert p.c == pytest.approx(1.0, rel=1e-14)
    assert omega == pytest.approx(10.9440, abs=1e-3)
    assert omega_pm == pytest.approx(32.915, abs=1e-3)
    assert p.omega_pm == omega_pm
    expected = 26.63199 / math.pi * math.sqrt(5.0 / 3.0)
    assert omega == pytest.approx(expected, rel=1e-15)


def test_derive_params_1d_errors():
    with pytest.raises(DomainError, match='eps0'):
        derive_params_1d(2.0, 0.2, 2, 26.63199)
    with pytest.raises(DomainError, match='omega_pm'):
        derive_params_1d(5.0, 0.2, 2, 1.0)


def test_derive_params_hj_1d():
    omega_pe, omega, p = derive_params_hj_1d(5.0, 0.2, 2, 26.63199)
    omega_pm, omega_ek, _ = derive_params_1d(5.0, 0.2, 2, 26.63199)
    assert omega_pe == omega_pm
    assert omega == omega_ek
    assert p.omega_pm == 26.63199
    assert p.omega_pe == omega_pe


def test_derive_params_2d():
    omega_pm, omega, p = derive_params_2d(5.0, 0.2, (2, 2), 10.0)
    assert p.c == pytest.approx(1.0, rel=1e-14)
    assert omega == pytest.approx(10 / math.pi * math.sqrt(5 / 6), rel=1e-14)
    expected = math.sqrt(5 * (8 * math.pi ** 2 + 100 / 6))
    assert omega_pm == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize('pair', [EK, HJ])
def test_residual_1d(pair):
    sol = ManufacturedSolution1D.from_params()
    if pair == HJ:
        sol = sol.dual()
    gen = rng(40)
    x = gen.uniform(0, 1, 100)
    t = gen.uniform(0, 2, 100)
    for r in sol.residual(x, t):
        assert np.abs(r).max() < 1e-10


def test_residual_2d():
    sol = ManufacturedSolution2D.from_params()
    gen = rng(41)
    x, y, t = (gen.uniform(0, 1, 100) for _ in range(3))
    for r in sol.residual(x, y, t):
        assert np.abs(r).max() < 1e-10


def test_residual_detects_wrong_parameters():
    sol = ManufacturedSolution1D.from_params()
    p = sol.params
    wrong = ManufacturedSolution1D(
        sol.k, sol.omega, PhysParams(p.eps0, p.mu0, p.omega_pe + 1, p.omega_pm)
    )
    res = wrong.residual(np.array([0.1, 0.3]), 0.4)
    assert np.abs(res[0]).max() > 1e-3


def test_dual_solution():
    sol = ManufacturedSolution1D.from_params()
    dual = sol.dual()
    assert dual.pair == HJ
    assert dual.names == ('H', 'J')
    assert dual.params == sol.params.swapped()
    x = np.linspace(0, 1, 7)
    np.testing.assert_array_equal(dual.field('H', 0.3)(x), sol.E(x, 0.3))
    np.testing.assert_array_equal(dual.field('J', 0.3)(x), -sol.K(x, 0.3))
    np.testing.assert_array_equal(dual.rate('J', 0.3)(x), -sol.dK_dt(x, 0.3))
    assert dual.dual().pair == EK
    with pytest.raises(ValueError):
        ManufacturedSolution1D(2, 1.0, sol.params, pair='XY')


def test_angular_frequency():
    sol = ManufacturedSolution1D.from_params()
    assert sol.angular_frequency == pytest.approx(sol.omega * math.pi)
    t = 0.5 / sol.omega
    x = np.array([0.125])
    assert sol.E(x, t)[0] == pytest.approx(
        math.sin(2 * math.pi * 0.125) / sol.omega, rel=1e-14
    )


def test_continuous_energy_ek():
    sol = ManufacturedSolution1D.from_params()
    assert continuous_energy_EK(sol) == pytest.approx(E_EK, rel=1e-13)
    assert continuous_energy_EK(sol) == pytest.approx(PUBLISHED_E_EK, abs=1e-6)
    p = sol.params
    closed = math.pi ** 2 / 4 + p.mu0 ** 2 * p.omega_pm ** 2 / 4
    assert continuous_energy_EK(sol) == pytest.approx(closed, rel=1e-13)


def test_continuous_energy_is_time_invariant():
    for sol in (ManufacturedSolution1D.from_params(),
            ManufacturedSolution2D.from_params()):
        e0 = continuous_energy(sol, t=0.3)
        e1 = continuous_energy(sol, t=0.7)
        assert abs(e0 - e1) / e0 < 1e-10
        gen = rng(42)
        t1, t2 = gen.uniform(0, 5, 2)
        assert abs(continuous_energy(sol, t=t1) - continuous_energy(sol, t=t2)) \
            / e0 < 1e-10


class ZeroSolution(ManufacturedSolution1D):
    E = K = dE_dt = dK_dt = dE_dx = dK_dx = lambda self, x, t: 0.0 * x


def test_continuous_energy_zero():
    assert continuous_energy_EK(ZeroSolution.from_params()) == 0.0


def test_continuous_energy_hj():
    sol = ManufacturedSolution1D.from_params()
    dual = sol.dual()
    assert continuous_energy_HJ(dual) == pytest.approx(E_EK, rel=1e-13)
    with pytest.raises(ValueError):
        continuous_energy_HJ(sol)
    with pytest.raises(ValueError):
        continuous_energy_EK(dual)


def test_exact_state_at_zero():
    for sol, d in ((ManufacturedSolution1D.from_params(), 1),
            (ManufacturedSolution2D.from_params(), 2)):
        W = exact_state(sol, MeshSpec(1.0, 16, d), 0.0)
        assert W.names == sol.names
        assert all(W[n].max_abs() == 0.0 for n in W)


def test_exact_state_staggers():
    sol = ManufacturedSolution2D.from_params()
    W = exact_state(sol, MeshSpec(1.0, 8, 2), 0.1)
    assert [str(W[n].stagger) for n in W] == ['dp', 'pd', 'dd']
    with pytest.raises(StaggerError):
        exact_state(sol, MeshSpec(1.0, 8), 0.1)


def test_exact_state_peak_1d():
    sol = ManufacturedSolution1D.from_params()
    t = 0.5 / sol.omega
    mesh = MeshSpec(1.0, 16)
    W = exact_state(sol, mesh, t)
    x = np.arange(16) * mesh.h
    np.testing.assert_allclose(W['E'].values,
        np.sin(2 * math.pi * x) / sol.omega, rtol=1e-13, atol=1e-15)


def test_exact_state_peak_2d():
    sol = ManufacturedSolution2D.from_params()
    t = 0.3
    p = sol.params
    expected = p.mu0 * p.omega_pm ** 2 / (math.pi * sol.omega) \
        * math.sin(sol.omega * math.pi * t)
    # dual node (1, 1) of a 6-cell mesh sits at (0.25, 0.25)
    W = exact_state(sol, MeshSpec(1.0, 6, 2), t)
    assert W['K'].values[1, 1] == pytest.approx(expected, rel=1e-13)


def test_initial_data():
    sol = ManufacturedSolution1D.from_params()
    mesh = MeshSpec(1.0, 32)
    W0, V0 = sol.initial_data().sample(mesh)
    assert W0.names == ('E', 'K')
    assert W0['E'].max_abs() == 0.0
    x = np.arange(32) * mesh.h
    np.testing.assert_allclose(V0['E'].values, math.pi * np.sin(2 * math.pi * x),
        atol=1e-14)
