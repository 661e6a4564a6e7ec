import numpy as np
import pytest

from bathprobe._kernels import get_kernels
from bathprobe.errors import (
    IntervalNotOnGridError,
    PositivityLossError,
    PulseOffGridError,
)
from bathprobe.evolve import (
    PulseEvent,
    PulseSchedule,
    bloch_ode,
    bloch_rotation,
    compile_generator,
    decoupling_schedule,
    integrate,
    lindblad_rhs,
    merge_schedules,
)
from bathprobe.linalg import SubsystemLayout, kron
from bathprobe.metrics import bloch_series, trace_distance
from bathprobe.model import (
    LindbladModel,
    ModelParams,
    build_full_model,
    build_reduced_model,
    const_rate,
    pauli,
)
from bathprobe.riccati import closed_solution

from conftest import random_density

PARAMS = ModelParams(1.0, 1.0, 1.0, 2.0, 2)


def ket(dim, idx):
    v = np.zeros(dim, complex)
    v[idx] = 1.0
    return v


def dm(psi):
    return np.outer(psi, np.conj(psi))


def plus_state():
    return dm((ket(2, 0) + ket(2, 1)) / np.sqrt(2))


def fig_initial(nc=2):
    return kron(plus_state(), dm(ket(nc, 0)))


def atom_only_model():
    layout = SubsystemLayout((("atom", 2),))
    return LindbladModel(layout, np.zeros((2, 2), complex), label="idle")


# -- schedules -------------------------------------------------------------

def test_schedule_validation():
    with pytest.raises(ValueError):
        PulseSchedule((PulseEvent(1.0, pauli("z")), PulseEvent(1.0, pauli("z"))))
    with pytest.raises(ValueError):
        PulseSchedule((PulseEvent(1.0, np.array([[1, 1], [0, 1]], complex)),))
    s = PulseSchedule.single(1.0, pauli("x"))
    assert len(s) == 1


def test_decoupling_schedule_count():
    s = decoupling_schedule(1.0, 2.0, 0.1, pauli("z"), 0)
    assert len(s) == 11
    assert s.events[0].time == pytest.approx(1.0)
    assert s.events[-1].time == pytest.approx(2.0)


def test_decoupling_interval_off_grid():
    with pytest.raises(IntervalNotOnGridError):
        decoupling_schedule(1.0, 2.0, 0.0305, pauli("z"), 0, dt=1e-2)
    s = decoupling_schedule(1.0, 2.0, 0.03, pauli("z"), 0, dt=1e-2)
    assert len(s) == 34


def test_merge_schedules():
    a = PulseSchedule.single(1.0, pauli("z"))
    b = decoupling_schedule(1.1, 1.5, 0.1, pauli("z"), 0)
    merged = merge_schedules(a, b)
    assert [e.time for e in merged] == pytest.approx([1.0, 1.1, 1.2, 1.3, 1.4, 1.5])


# -- generator ---------------------------------------------------------------

def test_lindblad_rhs_examples():
    m = build_full_model(PARAMS)
    dark = dm(np.kron(ket(2, 1), ket(2, 0)))
    assert np.max(np.abs(lindblad_rhs(m, dark, 0.0))) <= 1e-14

    layout = SubsystemLayout((("atom", 2),))
    decay = LindbladModel(layout, np.zeros((2, 2), complex),
                          collapse_terms=((pauli("minus"), const_rate(0.7)),))
    out = lindblad_rhs(decay, dm(ket(2, 0)), 0.0)
    expected = 2 * 0.7 * (np.diag([0.0, 1.0]) - np.diag([1.0, 0.0]))
    assert np.allclose(out, expected)


def test_lindblad_rhs_traceless(rng):
    m = build_full_model(PARAMS)
    for _ in range(5):
        rho = random_density(rng, 4)
        assert abs(np.trace(lindblad_rhs(m, rho, 0.0))) <= 1e-12


def test_superoperator_matches_rhs(rng):
    p = PARAMS
    models = [build_full_model(p), build_reduced_model(p, closed_solution(p.riccati()))]
    for m in models:
        gen = compile_generator(m)
        for t in (0.0, 0.7, 1.3):
            lt = gen.l_static.copy()
            for mat, fn, is_rate in zip(gen.part_mats, gen.part_fns, gen.part_is_rate):
                c = float(np.real(fn(t)))
                lt = lt + (max(c, 0.0) if is_rate else c) * mat
            rho = random_density(rng, m.dim)
            direct = lindblad_rhs(m, rho, t)
            via_super = (lt @ rho.reshape(-1)).reshape(m.dim, m.dim)
            assert np.max(np.abs(direct - via_super)) <= 1e-12


# -- integration ---------------------------------------------------------------

def test_constant_trajectory_without_pulses():
    m = build_full_model(PARAMS)
    dark = dm(np.kron(ket(2, 1), ket(2, 0)))
    traj = integrate(m, dark, 1.0, 1e-3)
    assert len(traj) == 1001
    assert np.max(np.abs(traj.states - dark)) <= 1e-12


def test_state_invariants_along_trajectory():
    m = build_full_model(PARAMS)
    traj = integrate(m, fig_initial(), 5.0, 1e-3, PulseSchedule.single(1.0, pauli("z"), 0))
    tr = np.einsum("tii->t", traj.states)
    assert np.max(np.abs(tr - 1.0)) <= 1e-8
    herm = np.max(np.abs(traj.states - traj.states.conj().transpose(0, 2, 1)))
    assert herm <= 1e-9
    mins = np.array([np.linalg.eigvalsh(s)[0] for s in traj.states])
    assert mins.min() >= -1e-7


def test_pulse_action_and_record_semantics():
    m = atom_only_model()
    traj = integrate(m, plus_state(), 2.0, 1e-3, PulseSchedule.single(1.0, pauli("z"), 0))
    minus = dm((ket(2, 0) - ket(2, 1)) / np.sqrt(2))
    i_p = 1000
    assert np.max(np.abs(traj.states[i_p - 1] - plus_state())) <= 1e-12
    assert np.max(np.abs(traj.states[i_p] - minus)) <= 1e-12  # post-pulse stored
    assert np.max(np.abs(traj.states[-1] - minus)) <= 1e-12


def test_pulse_at_t0_and_zero_duration():
    m = atom_only_model()
    traj = integrate(m, plus_state(), 0.0, 1e-3, PulseSchedule.single(0.0, pauli("z"), 0))
    assert traj.states.shape == (1, 2, 2)
    minus = dm((ket(2, 0) - ket(2, 1)) / np.sqrt(2))
    assert np.max(np.abs(traj.states[0] - minus)) <= 1e-12


def test_pulse_off_grid():
    m = atom_only_model()
    with pytest.raises(PulseOffGridError):
        integrate(m, plus_state(), 1.0, 1e-3, PulseSchedule.single(2.0, pauli("z"), 0))


def test_positivity_loss_on_oversized_step():
    m = build_full_model(ModelParams(1.0, 1.0, 1.0, 40.0, 2))
    rho0 = fig_initial()
    with pytest.raises(PositivityLossError):
        integrate(m, rho0, 10.0, 0.5)


def test_rk4_convergence_order():
    m = build_full_model(PARAMS)
    rho0 = fig_initial()
    ref = integrate(m, rho0, 1.0, 1e-5).states[-1]
    err = {}
    for dt in (4e-3, 2e-3):
        err[dt] = np.max(np.abs(integrate(m, rho0, 1.0, dt).states[-1] - ref))
    factor = err[4e-3] / err[2e-3]
    assert 12.0 <= factor <= 20.0


def test_pulse_unitality_preserves_trace_distance():
    # at the common pulse instant the stored (post-pulse) pair distance equals
    # the unpulsed pair distance: the pulse cannot change distinguishability
    m = build_full_model(PARAMS)
    sched = PulseSchedule.single(0.5, pauli("x"), 0)
    rho_a = kron(dm(ket(2, 0)), dm(ket(2, 0)))
    rho_b = fig_initial()
    i_p = 500
    with_pulse = [integrate(m, r, 1.0, 1e-3, sched).states[i_p] for r in (rho_a, rho_b)]
    without = [integrate(m, r, 1.0, 1e-3).states[i_p] for r in (rho_a, rho_b)]
    assert trace_distance(*with_pulse) == pytest.approx(trace_distance(*without), abs=1e-11)


def test_dual_track_agreement_before_pulse(fig3_data):
    # the Markovian track and the partial-traced full model agree pre-pulse
    i_p = 1000
    dev = np.max(np.abs(fig3_data.markov[: i_p + 1] - fig3_data.full[: i_p + 1]))
    assert dev <= 1e-6


def test_backend_parity(rng):
    numba_k = get_kernels("numba")
    numpy_k = get_kernels("numpy")
    m = build_reduced_model(PARAMS, closed_solution(PARAMS.riccati()))
    gen = compile_generator(m)
    from bathprobe.evolve import fold_constant_parts, sample_coefficients

    n = 500
    coefs = sample_coefficients(gen, 0.0, 1e-3, n)
    l_static, parts, rows = fold_constant_parts(gen, coefs)
    v0 = plus_state().reshape(-1)
    steps = np.array([250], dtype=np.int64)
    sup = np.stack([np.kron(pauli("z"), pauli("z").conj())]).astype(complex)
    out_a = numba_k.rk4_super(n, 1e-3, l_static, parts, rows, v0, steps, sup)
    out_b = numpy_k.rk4_super(n, 1e-3, l_static, parts, rows, v0, steps, sup)
    assert np.max(np.abs(out_a - out_b)) <= 1e-10

    h = (rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5)))
    h = (h + h.conj().T) / 2
    wa, va = numba_k.jacobi_eig(h)
    wb, vb = numpy_k.jacobi_eig(h)
    assert np.max(np.abs(wa - wb)) <= 1e-12
    assert np.max(np.abs(va @ np.diag(wa) @ va.conj().T - h)) <= 1e-12
    assert np.max(np.abs(vb @ np.diag(wb) @ vb.conj().T - h)) <= 1e-12


# -- Bloch track ---------------------------------------------------------------

def test_bloch_rotation_of_sigma_z():
    r = bloch_rotation(pauli("z"))
    assert np.allclose(r, np.diag([-1.0, -1.0, 1.0]))


def test_bloch_ground_state_fixed_point():
    p = PARAMS
    f = closed_solution(p.riccati())
    _, series = bloch_ode(p, f, (0.0, 0.0, -1.0), 2.0, 1e-3)
    assert np.max(np.abs(series - np.array([0.0, 0.0, -1.0]))) <= 1e-12


def test_bloch_constant_rate_closed_form():
    p = PARAMS
    rate = 0.3

    def f_const(t):
        return np.full(np.shape(t), rate, complex) if np.ndim(t) else complex(rate)

    times, series = bloch_ode(p, f_const, (0.0, 0.0, 1.0), 2.0, 1e-3)
    exact = 2.0 * np.exp(-2.0 * rate * times) - 1.0
    assert np.max(np.abs(series[:, 2] - exact)) <= 1e-10
    assert np.max(np.abs(series[:, :2])) <= 1e-12


def test_bloch_matches_reduced_model_with_pulses():
    p = PARAMS
    f = closed_solution(p.riccati())
    sched = PulseSchedule.single(1.0, pauli("z"), 0)
    m = build_reduced_model(p, f)
    traj = integrate(m, plus_state(), 3.0, 1e-3, sched)
    _, series = bloch_ode(p, f, (1.0, 0.0, 0.0), 3.0, 1e-3, sched)
    assert np.max(np.abs(series - bloch_series(traj.states))) <= 1e-8
