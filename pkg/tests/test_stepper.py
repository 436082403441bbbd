import numpy as np
import pytest

from drudefd import (
    DomainError, InstabilityError, LeapfrogStepper, ManufacturedSolution1D,
    ManufacturedSolution2D, SchemeSpec, StaggerError, StatePair, apply_A1,
    apply_A2, exact_state, initialize, inner, inner_bundle, norm_bundle, run,
    step
)
from drudefd.diagnostics import EnergyMonitor, ErrorMonitor, field_errors
from drudefd.model import InitialData
from drudefd.stepper import get_stepper, parse_scheme, scheme_label
from drudefd.utils import observed_orders

from .utils import constant_bundle, gen_bundle, rng

SCHEME_KEYS = ('22', '24', '44')


def solution(dim=1, pair='EK'):
    if dim == 2:
        return ManufacturedSolution2D.from_params()
    sol = ManufacturedSolution1D.from_params()
    return sol.dual() if pair == 'HJ' else sol


def errors_at(order, dt, nu=0.2, dim=1, pair='EK', T=1.0, start='exact'):
    sol = solution(dim, pair)
    scheme = SchemeSpec.from_courant(order, dt, nu, T, sol.params.c, dim, pair)
    monitor = ErrorMonitor(sol)
    run(scheme, sol.params, sol, (monitor,), start)
    return monitor.errors


def study(order, dts, **kwargs):
    rows = [errors_at(order, dt, **kwargs) for dt in dts]
    return {name: [row[name] for row in rows] for name in rows[0]}


def test_parse_scheme():
    assert parse_scheme('44') == (4, 4)
    assert parse_scheme('(2,4)') == (2, 4)
    assert parse_scheme('2,2') == (2, 2)
    assert parse_scheme((4, 4)) == (4, 4)
    assert scheme_label((2, 4)) == '(2,4)'
    for value in ('42', '33', (4, 2), ''):
        with pytest.raises(ValueError):
            parse_scheme(value)


def test_scheme_from_courant():
    scheme = SchemeSpec.from_courant('44', 0.02, 0.2, 1.0, 1.0)
    assert scheme.mesh.M == 10
    assert scheme.steps == 50
    assert scheme.nu == pytest.approx(0.2, rel=1e-14)
    assert scheme.steps * scheme.dt == pytest.approx(scheme.T, rel=1e-12)
    assert scheme.label == '(4,4)'
    assert (scheme.time_order, scheme.space_order) == (4, 4)
    described = scheme.describe()
    assert described['M'] == 10 and described['N'] == 50
    assert described['dx'] == pytest.approx(0.1)


def test_scheme_errors():
    with pytest.raises(DomainError):
        SchemeSpec.from_courant('44', 0.03, 0.2, 0.9, 1.0)
    with pytest.raises(DomainError):
        SchemeSpec.from_mesh('44', 0.03, 10, 1.0, 1.0)
    with pytest.raises(DomainError):
        SchemeSpec.from_courant('44', 0.02, -0.2, 1.0, 1.0)
    with pytest.raises(ValueError):
        SchemeSpec.from_courant('44', 0.02, 0.2, 1.0, 1.0, dim=2, pair='HJ')
    with pytest.raises(ValueError):
        SchemeSpec.from_courant('44', 0.02, 0.2, 1.0, 1.0, dim=3)
    with pytest.raises(ValueError):
        SchemeSpec.from_courant('33', 0.02, 0.2, 1.0, 1.0)


def test_state_pair():
    sol = solution()
    scheme = SchemeSpec.from_courant('44', 0.02, 0.2, 1.0, 1.0)
    W0 = exact_state(sol, scheme.mesh, 0.0)
    W1 = exact_state(sol, scheme.mesh, 0.02)
    state = StatePair(W1, W0, 1, scheme)
    assert state.t == pytest.approx(0.02)
    back = state.reversed()
    assert back.current is W0 and back.previous is W1 and back.n == 1
    with pytest.raises(StaggerError):
        StatePair(W1, exact_state(sol.dual(), scheme.mesh, 0.0), 1, scheme)
    other = SchemeSpec.from_courant('44', 0.01, 0.2, 1.0, 1.0)
    with pytest.raises(StaggerError):
        StatePair(W1, W0, 1, other)


def test_correction_factor():
    p = solution().params
    for key, factor in zip(SCHEME_KEYS, (0.0, 0.0, 1.0)):
        scheme = SchemeSpec.from_courant(key, 0.02, 0.2, 1.0, 1.0)
        assert LeapfrogStepper(scheme, p).correction_factor == factor


def test_get_stepper_is_cached():
    p = solution().params
    scheme = SchemeSpec.from_courant('44', 0.02, 0.2, 1.0, 1.0)
    assert get_stepper(scheme, p) is get_stepper(scheme, p)


def _stepper(key, dim, pair, M=16):
    sol = solution(dim, pair)
    scheme = SchemeSpec.from_mesh(key, 0.01, M, 1.0, 1.0, dim, pair)
    return LeapfrogStepper(scheme, sol.params), scheme


CASES = [(1, 'EK'), (1, 'HJ'), (2, 'EK')]


@pytest.mark.parametrize('key', SCHEME_KEYS)
@pytest.mark.parametrize('dim, pair', CASES)
def test_A1_is_self_adjoint(key, dim, pair):
    stepper, scheme = _stepper(key, dim, pair)
    gen = rng(50)
    W, X = (gen_bundle(scheme.mesh, dim, pair, gen) for _ in range(2))
    AW, AX = stepper.apply_A1(W), stepper.apply_A1(X)
    scale = norm_bundle(AW) * norm_bundle(X) + norm_bundle(W) * norm_bundle(AX)
    assert abs(inner_bundle(AW, X) - inner_bundle(W, AX)) <= 1e-13 * scale


@pytest.mark.parametrize('key', SCHEME_KEYS)
@pytest.mark.parametrize('dim, pair', CASES)
def test_A1_quadratic_form(key, dim, pair):
    stepper, scheme = _stepper(key, dim, pair)
    W = gen_bundle(scheme.mesh, dim, pair, rng(51))
    U, _ = stepper.split(W)
    coupling = stepper.coupling(W)
    expected = inner(coupling, coupling) \
        + stepper.wa ** 2 / stepper.c2 * sum(inner(u, u) for u in U)
    value = inner_bundle(stepper.apply_A1(W), W)
    assert value == pytest.approx(expected, rel=1e-12)
    assert value >= 0


@pytest.mark.parametrize('dim, pair', CASES)
def test_A2_is_self_adjoint(dim, pair):
    stepper, scheme = _stepper('44', dim, pair)
    gen = rng(52)
    W, X = (gen_bundle(scheme.mesh, dim, pair, gen) for _ in range(2))
    AW, AX = stepper.apply_A2(W), stepper.apply_A2(X)
    scale = norm_bundle(AW) * norm_bundle(X) + norm_bundle(W) * norm_bundle(AX)
    assert abs(inner_bundle(AW, X) - inner_bundle(W, AX)) <= 1e-13 * scale


@pytest.mark.parametrize('key', SCHEME_KEYS)
@pytest.mark.parametrize('dim, pair', CASES)
def test_A2_is_squared_second_order_A1(key, dim, pair):
    stepper, scheme = _stepper(key, dim, pair)
    second, _ = _stepper('22', dim, pair)
    W = gen_bundle(scheme.mesh, dim, pair, rng(53))
    expected = second.apply_A1(second.apply_Pinv(second.apply_A1(W))) \
        * (1.0 / second.c2)
    diff = stepper.apply_A2(W) - expected
    assert norm_bundle(diff) <= 1e-12 * norm_bundle(expected)


def test_module_level_operators():
    stepper, scheme = _stepper('44', 1, 'EK')
    p = stepper.params
    W = gen_bundle(scheme.mesh, gen=rng(54))
    assert norm_bundle(apply_A1(W, scheme, p) - stepper.apply_A1(W)) == 0.0
    assert norm_bundle(apply_A2(W, scheme, p) - stepper.apply_A2(W)) == 0.0


def test_split_checks_layout():
    stepper, scheme = _stepper('44', 1, 'EK')
    with pytest.raises(StaggerError):
        stepper.split(gen_bundle(scheme.mesh, pair='HJ'))


@pytest.mark.parametrize('key', SCHEME_KEYS)
def test_zero_state_stays_zero(key):
    stepper, scheme = _stepper(key, 1, 'EK')
    zero = constant_bundle(scheme.mesh, [0.0, 0.0])
    state = stepper.run(StatePair(zero, zero, 1, scheme), steps=10)
    assert state.n == 11
    assert norm_bundle(state.current) == 0.0


def test_constant_electric_field_oscillates():
    stepper, scheme = _stepper('22', 1, 'EK')
    W = constant_bundle(scheme.mesh, [1.0, 0.0])
    state = stepper.step(StatePair(W, W, 1, scheme))
    dt2 = scheme.dt ** 2
    expected = 1.0 - dt2 * stepper.wa ** 2
    np.testing.assert_allclose(state.current['E'].values, expected, rtol=1e-14)
    assert state.current['K'].max_abs() < 1e-12


@pytest.mark.parametrize('key', SCHEME_KEYS)
def test_time_reversibility(key):
    sol = solution()
    scheme = SchemeSpec.from_courant(key, 0.01, 0.5, 1.0, 1.0)
    stepper = LeapfrogStepper(scheme, sol.params)
    W0 = exact_state(sol, scheme.mesh, 0.3)
    W1 = exact_state(sol, scheme.mesh, 0.31)
    state = stepper.run(StatePair(W1, W0, 1, scheme), steps=40)
    back = stepper.run(state.reversed(), steps=40)
    assert norm_bundle(back.current - W0) <= 1e-10 * norm_bundle(W0)


def test_run_calls_callbacks():
    sol = solution()
    scheme = SchemeSpec.from_courant('44', 0.02, 0.2, 1.0, 1.0)
    seen = []
    final = run(scheme, sol.params, sol, (lambda s, st: seen.append(st.n),))
    assert seen == list(range(1, scheme.steps + 1))
    assert final.n == scheme.steps
    assert final.t == pytest.approx(1.0)


def test_initialize_and_step_wrappers():
    sol = solution()
    scheme = SchemeSpec.from_courant('44', 0.02, 0.2, 1.0, 1.0)
    state = initialize(scheme, sol.params, sol)
    assert state.n == 1
    assert state.previous['E'].max_abs() == 0.0
    assert norm_bundle(state.current - exact_state(sol, scheme.mesh, 0.02)) \
        == 0.0
    nxt = step(state, sol.params)
    assert nxt.n == 2 and nxt.previous is state.current


def test_initialize_errors():
    sol = solution()
    scheme = SchemeSpec.from_courant('44', 0.02, 0.2, 1.0, 1.0)
    stepper = LeapfrogStepper(scheme, sol.params)
    data = sol.initial_data()
    with pytest.raises(StaggerError):
        stepper.initialize(data, 'exact')
    with pytest.raises(StaggerError):
        stepper.initialize(InitialData(1, 'EK', data.values, {}), 'taylor')
    with pytest.raises(StaggerError):
        stepper.initialize(sol.dual(), 'exact')
    with pytest.raises(ValueError):
        stepper.initialize(sol, 'backwards')


def _taylor_error(key, dt):
    sol = solution()
    scheme = SchemeSpec.from_courant(key, dt, 0.2, 100 * dt, 1.0)
    state = LeapfrogStepper(scheme, sol.params).initialize(sol, 'taylor')
    return field_errors(state.current, sol, dt)


@pytest.mark.parametrize('key, rate', [('44', 5), ('22', 3)])
def test_taylor_start_order(key, rate):
    rows = [_taylor_error(key, dt) for dt in (0.005, 0.0025, 0.00125)]
    for name in rows[0]:
        for r in observed_orders([row[name] for row in rows]):
            assert abs(r - rate) < 0.1


def test_taylor_start_from_initial_data():
    sol = solution()
    scheme = SchemeSpec.from_courant('44', 0.01, 0.2, 1.0, 1.0)
    stepper = LeapfrogStepper(scheme, sol.params)
    a = stepper.initialize(sol, 'taylor')
    b = stepper.initialize(sol.initial_data(), 'taylor')
    assert norm_bundle(a.current - b.current) == 0.0


DTS = (0.02, 0.01, 0.005, 0.0025, 0.00125)


@pytest.mark.parametrize('key, order', [('44', 4), ('24', 2), ('22', 2)])
def test_convergence_1d(key, order):
    errors = study(key, DTS)
    for name, values in errors.items():
        rates = observed_orders(values)
        for r in rates[1:]:
            assert abs(r - order) < 0.1, (name, rates)


def test_convergence_1d_taylor_start():
    errors = study('44', DTS[1:], start='taylor')
    for values in errors.values():
        for r in observed_orders(values)[1:]:
            assert abs(r - 4) < 0.1


def test_error_magnitudes():
    e44 = errors_at('44', 0.02)
    e22 = errors_at('22', 0.02)
    e24 = errors_at('24', 0.02)
    # published magnitudes
    assert 6.280e-4 / 2 < e44['E'] < 6.280e-4 * 2
    assert 4.360e-2 / 2 < e44['K'] < 4.360e-2 * 2
    assert 4.070e-2 / 2 < e22['E'] < 4.070e-2 * 2
    assert 3.026 / 2 < e24['K'] < 3.026 * 2
    # regression values, stored to five significant digits
    assert e44['E'] == pytest.approx(6.2796e-4, rel=1e-4)
    assert e44['K'] == pytest.approx(4.3599e-2, rel=1e-4)
    assert e22['E'] == pytest.approx(4.0700e-2, rel=1e-4)
    assert e24['K'] == pytest.approx(3.0263, rel=1e-4)


def test_hj_matches_ek():
    for key in SCHEME_KEYS:
        ek = errors_at(key, 0.01)
        hj = errors_at(key, 0.01, pair='HJ')
        assert hj['H'] == pytest.approx(ek['E'], rel=1e-6)
        assert hj['J'] == pytest.approx(ek['K'], rel=1e-6)


def test_convergence_1d_hj():
    errors = study('44', DTS[:4], pair='HJ')
    for values in errors.values():
        for r in observed_orders(values)[1:]:
            assert abs(r - 4) < 0.1


@pytest.mark.slow
def test_convergence_2d():
    errors = study('44', DTS[:4], dim=2)
    assert set(errors) == {'Ex', 'Ey', 'K'}
    for name, values in errors.items():
        rates = observed_orders(values)
        for r in rates[1:]:
            assert abs(r - 4) < 0.15, (name, rates)
    assert errors['Ex'][0] == pytest.approx(errors['Ey'][0], rel=1e-12)
    for ex, ey in zip(errors['Ex'][1:], errors['Ey'][1:]):
        assert ex == pytest.approx(ey, rel=1e-8)


@pytest.mark.slow
@pytest.mark.parametrize('key', ['22', '24'])
def test_convergence_2d_second_order(key):
    errors = study(key, DTS[:4], dim=2)
    for values in errors.values():
        for r in observed_orders(values)[1:]:
            assert abs(r - 2) < 0.15


def test_instability_is_detected():
    sol = solution()
    scheme = SchemeSpec.from_mesh('22', 0.013125, 80, 65.625, 1.0)
    assert scheme.nu == pytest.approx(1.05)
    with pytest.raises(InstabilityError) as info:
        run(scheme, sol.params, sol)
    assert 1 < info.value.step < scheme.steps


@pytest.mark.parametrize('key', ['22', '44'])
def test_stable_below_limit(key):
    sol = solution()
    scheme = SchemeSpec.from_mesh(key, 0.011875, 80, 59.375, 1.0)
    assert scheme.nu == pytest.approx(0.95)
    assert scheme.steps == 5000
    monitor = EnergyMonitor(sol.params, stride=500)
    state = run(scheme, sol.params, sol, (monitor,))
    assert state.is_finite()
    assert state.current['E'].max_abs() < 1.0
    assert monitor.max_relative_change < 1e-12


def test_second_fourth_scheme_limit_is_below_one():
    # the (2,4) scheme is stable only up to nu = 6/7
    sol = solution()
    scheme = SchemeSpec.from_mesh('24', 0.011875, 80, 59.375, 1.0)
    with pytest.raises(InstabilityError) as info:
        run(scheme, sol.params, sol)
    assert 100 < info.value.step < 2000
