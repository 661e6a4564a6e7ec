"""Time evolution of Lindblad models with instantaneous scheduled pulses.

Fixed-step RK4 on a uniform grid (deterministic, bit-reproducible per
backend).  Internally the generator is applied in row-major superoperator
form: rho evolves as a vector of length d^2, pulses become (U kron U*)
matrices, and time-dependent coefficients are sampled on the half grid.
Pulses fire after the step ending at their grid instant; the stored state at
a pulse instant is the post-pulse state.
"""
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import (
    IntervalNotOnGridError,
    PositivityLossError,
    PulseOffGridError,
    RateNegativeError,
)
from .linalg import as_matrix, herm_eigvals, hermiticity_defect, kron, partial_trace
from .model import embed, pauli
from .riccati import RATE_NEGATIVE_TOL

UNITARITY_TOL = 1e-10
POSITIVITY_ERROR_TOL = -1e-6
GRID_TOL = 1e-9


@dataclass(frozen=True)
class PulseEvent:
    time: float
    unitary: np.ndarray
    target: int = 0


@dataclass(frozen=True)
class PulseSchedule:
    """Ordered instantaneous local unitaries, strictly increasing in time."""

    events: tuple = ()

    def __post_init__(self):
        times = [e.time for e in self.events]
        if any(t < 0 for t in times):
            raise ValueError("pulse times must be nonnegative")
        if any(t2 <= t1 for t1, t2 in zip(times, times[1:])):
            raise ValueError("pulse times must be strictly increasing")
        for e in self.events:
            u = as_matrix(e.unitary)
            defect = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))
            if defect > UNITARITY_TOL:
                raise ValueError(f"pulse at t={e.time} is not unitary (defect {defect:.2e})")

    def __len__(self):
        return len(self.events)

    def __iter__(self):
        return iter(self.events)

    @staticmethod
    def empty():
        return PulseSchedule(())

    @staticmethod
    def single(time, unitary, target=0):
        return PulseSchedule((PulseEvent(float(time), unitary, target),))


def merge_schedules(*schedules):
    events = sorted((e for s in schedules for e in s.events), key=lambda e: e.time)
    return PulseSchedule(tuple(events))


def decoupling_schedule(t_start, t_end, interval, op, target=0, dt=None):
    """Pulse train at t_start, t_start + interval, ..., up to and including t_end.

    When dt is given, the interval must be an integer multiple of it
    (IntervalNotOnGridError otherwise); the grid snap itself is enforced by
    integrate.
    """
    if not interval > 0:
        raise ValueError("decoupling interval must be positive")
    if dt is not None:
        k = round(interval / dt)
        if k < 1 or abs(k * dt - interval) > 1e-12:
            raise IntervalNotOnGridError(
                f"interval {interval} is not an integer multiple of dt={dt}"
            )
    n = int(np.floor((t_end - t_start) / interval + 1e-12)) + 1
    if n < 1:
        return PulseSchedule.empty()
    events = tuple(PulseEvent(t_start + k * interval, op, target) for k in range(n))
    return PulseSchedule(events)


@dataclass
class Trajectory:
    """Uniform-grid record of states; states[i] is the density matrix at
    times[i] (post-pulse at pulse instants)."""

    times: np.ndarray
    states: np.ndarray
    model_id: str = ""

    def __len__(self):
        return len(self.times)

    @property
    def dt(self):
        return float(self.times[1] - self.times[0]) if len(self.times) > 1 else 0.0


def lindblad_rhs(m, rho, t=0.0):
    """Generator applied to a state: -i[H(t), rho] + sum_i gamma_i(t) *
    (2 A rho A^dag - {A^dag A, rho}).  Traceless by construction."""
    rho = as_matrix(rho)
    if rho.shape[0] != m.dim:
        raise ValueError(f"state dim {rho.shape[0]} != model dim {m.dim}")
    h = m.hamiltonian(t)
    out = -1j * (h @ rho - rho @ h)
    for op, rate in m.collapse_terms:
        gamma = float(np.real(rate(t)))
        if gamma == 0.0:
            continue
        op_dag = op.conj().T
        anti = op_dag @ op
        out = out + gamma * (2.0 * (op @ rho @ op_dag) - anti @ rho - rho @ anti)
    return out


# -- superoperator assembly ---------------------------------------------------

def hamiltonian_superpart(h):
    """Row-major superoperator of rho -> -i[h, rho]."""
    h = as_matrix(h)
    ident = np.eye(h.shape[0])
    return -1j * (kron(h, ident) - kron(ident, h.T))


def collapse_superpart(a):
    """Row-major superoperator of rho -> 2 a rho a^dag - {a^dag a, rho}."""
    a = as_matrix(a)
    ident = np.eye(a.shape[0])
    ada = a.conj().T @ a
    return 2.0 * kron(a, a.conj()) - kron(ada, ident) - kron(ident, ada.T)


def unitary_superop(u):
    """Row-major superoperator of rho -> u rho u^dag."""
    u = as_matrix(u)
    return kron(u, u.conj())


@dataclass(frozen=True)
class CompiledGenerator:
    """Model lowered to superoperator parts: a static matrix plus
    coefficient-weighted parts (is_rate marks collapse coefficients, which
    get clipped/validated on sampling)."""

    dim: int
    l_static: np.ndarray
    part_mats: tuple
    part_fns: tuple
    part_is_rate: tuple


def compile_generator(m):
    l_static = hamiltonian_superpart(m.h_static)
    mats, fns, flags = [], [], []
    for mat, coef in m.h_parts:
        mats.append(hamiltonian_superpart(mat))
        fns.append(coef)
        flags.append(False)
    for op, rate in m.collapse_terms:
        mats.append(collapse_superpart(op))
        fns.append(rate)
        flags.append(True)
    return CompiledGenerator(m.dim, np.ascontiguousarray(l_static),
                             tuple(np.ascontiguousarray(x) for x in mats),
                             tuple(fns), tuple(flags))


def sample_coefficients(gen, t0, dt, n_steps):
    """Coefficient samples on the half grid (P, 2*n_steps + 1)."""
    th = t0 + np.arange(2 * n_steps + 1) * (dt / 2.0)
    rows = []
    for fn, is_rate in zip(gen.part_fns, gen.part_is_rate):
        row = np.asarray(np.real(fn(th)), dtype=np.float64)
        row = np.broadcast_to(row, th.shape).astype(np.float64, copy=True)
        if is_rate:
            rmin = float(row.min()) if row.size else 0.0
            if rmin < RATE_NEGATIVE_TOL:
                raise RateNegativeError(f"collapse rate {rmin:.3e} below {RATE_NEGATIVE_TOL:.1e}")
            np.maximum(row, 0.0, out=row)
        rows.append(row)
    if rows:
        return np.ascontiguousarray(np.stack(rows))
    return np.zeros((0, th.shape[0]), dtype=np.float64)


def fold_constant_parts(gen, coefs):
    """Fold parts with constant coefficient rows into the static matrix;
    returns (l_static, part_mats, coefs) ready for the kernel."""
    l_static = gen.l_static
    keep_mats, keep_rows = [], []
    for k, mat in enumerate(gen.part_mats):
        row = coefs[k]
        if row.size == 0 or np.ptp(row) == 0.0:
            c = float(row[0]) if row.size else 0.0
            if c != 0.0:
                l_static = l_static + c * mat
        else:
            keep_mats.append(mat)
            keep_rows.append(row)
    if keep_mats:
        parts = np.ascontiguousarray(np.stack(keep_mats))
        rows = np.ascontiguousarray(np.stack(keep_rows))
    else:
        d2 = l_static.shape[0]
        parts = np.zeros((0, d2, d2), dtype=np.complex128)
        rows = np.zeros((0, coefs.shape[1] if coefs.ndim == 2 else 1), dtype=np.float64)
    return np.ascontiguousarray(l_static), parts, rows


def propagate(gen, v0, t0, dt, n_steps, pulse_steps=None, pulse_supers=None):
    """Drive the kernel over n_steps from vectorized state v0 at time t0."""
    coefs = sample_coefficients(gen, t0, dt, n_steps)
    l_static, parts, rows = fold_constant_parts(gen, coefs)
    d2 = gen.dim * gen.dim
    if pulse_steps is None:
        pulse_steps = np.zeros(0, dtype=np.int64)
        pulse_supers = np.zeros((0, d2, d2), dtype=np.complex128)
    return _kernels.rk4_super(
        n_steps, float(dt), l_static, parts, rows,
        np.ascontiguousarray(v0, dtype=np.complex128),
        np.ascontiguousarray(pulse_steps, dtype=np.int64),
        np.ascontiguousarray(pulse_supers, dtype=np.complex128),
    )


def _grid_steps(t_end, dt):
    if not dt > 0:
        raise ValueError("dt must be positive")
    if t_end < 0:
        raise ValueError("t_end must be nonnegative")
    n = int(round(t_end / dt))
    if abs(n * dt - t_end) > GRID_TOL:
        raise ValueError(f"t_end={t_end} is not an integer number of dt={dt} steps")
    return n


def snap_pulses(pulses, layout, dt, n_steps, t0=0.0):
    """Snap pulse times to grid indices and embed/vectorize the unitaries."""
    steps, supers = [], []
    for e in pulses:
        idx = int(round((e.time - t0) / dt))
        if idx < 0 or idx > n_steps or abs(t0 + idx * dt - e.time) > dt / 2 + 1e-12:
            raise PulseOffGridError(
                f"pulse at t={e.time} is farther than dt/2 from any grid point in "
                f"[{t0}, {t0 + n_steps * dt}]"
            )
        if steps and idx <= steps[-1]:
            raise PulseOffGridError(f"pulses collide on the grid at index {idx}")
        steps.append(idx)
        supers.append(unitary_superop(embed(e.unitary, layout, e.target)))
    d2 = layout.total_dim ** 2
    if not steps:
        return np.zeros(0, dtype=np.int64), np.zeros((0, d2, d2), dtype=np.complex128)
    return np.asarray(steps, dtype=np.int64), np.ascontiguousarray(np.stack(supers))


def check_state(rho, trace_tol=1e-8, herm_tol=1e-9):
    rho = as_matrix(rho)
    drift = abs(np.trace(rho).real - 1.0) + abs(np.trace(rho).imag)
    if drift > trace_tol:
        raise ValueError(f"state trace deviates from 1 by {drift:.3e}")
    if hermiticity_defect(rho) > herm_tol:
        raise ValueError("state is not Hermitian within tolerance")
    return rho


def integrate(m, rho0, t_end, dt, pulses=None, model_id=None, positivity_check_stride=50):
    """Evolve rho0 under the model from 0 to t_end, applying scheduled pulses.

    States are recorded at every grid point.  A min-eigenvalue sentinel runs
    on every positivity_check_stride-th recorded state (plus pulse instants
    and the endpoint) and raises PositivityLossError below -1e-6, the
    signature of an oversized step.
    """
    rho0 = check_state(rho0)
    if rho0.shape[0] != m.dim:
        raise ValueError(f"state dim {rho0.shape[0]} != model dim {m.dim}")
    n = _grid_steps(t_end, dt)
    pulses = pulses if pulses is not None else PulseSchedule.empty()
    steps, supers = snap_pulses(pulses, m.layout, dt, n)
    gen = compile_generator(m)
    vs = propagate(gen, rho0.reshape(-1), 0.0, dt, n, steps, supers)
    states = np.ascontiguousarray(vs.reshape(n + 1, m.dim, m.dim))
    if not np.all(np.isfinite(states.view(np.float64))):
        raise PositivityLossError("integration diverged (non-finite state); reduce dt")
    peak = float(np.max(np.abs(states)))
    if peak > 1e3:  # density-matrix entries are bounded by 1
        raise PositivityLossError(f"integration diverged (|rho| up to {peak:.1e}); reduce dt")
    check_idx = sorted(set(range(0, n + 1, max(1, positivity_check_stride))) | {n} | set(steps.tolist()))
    for i in check_idx:
        w = herm_eigvals((states[i] + states[i].conj().T) / 2.0)
        if w[0] < POSITIVITY_ERROR_TOL:
            raise PositivityLossError(
                f"min eigenvalue {w[0]:.3e} at t={i * dt:.6g}; dt is too large"
            )
    times = np.arange(n + 1) * dt
    return Trajectory(times, states, model_id or m.label)


def reduce_trajectory(traj, layout, keep, model_id=None):
    """Partial-trace every recorded state down to the kept factors."""
    states = partial_trace(traj.states, layout, keep)
    return Trajectory(traj.times.copy(), states, model_id or traj.model_id + "|reduced")


# -- Bloch-vector track --------------------------------------------------------

def bloch_rotation(u):
    """3x3 rotation acting on (<sx>, <sy>, <sz>) induced by a 2x2 unitary."""
    u = as_matrix(u)
    sig = [pauli("x"), pauli("y"), pauli("z")]
    r = np.empty((3, 3), dtype=np.float64)
    for i in range(3):
        for j in range(3):
            r[i, j] = 0.5 * np.real(np.trace(sig[i] @ u @ sig[j] @ u.conj().T))
    return r


def bloch_ode(p, f, s0, t_end, dt, pulses=None):
    """Markovian-track Bloch equations with decay rate g*Re{f(t)}:
    sdot = -[[r, w, 0], [-w, r, 0], [0, 0, 2r]] s - (0, 0, 2r).

    Pulses (2x2 unitaries on the atom) act as Bloch rotations.  Returns
    (times, series) with series of shape (n+1, 3).
    """
    n = _grid_steps(t_end, dt)
    th = np.arange(2 * n + 1) * (dt / 2.0)
    gp = p.g * np.real(np.asarray(f(th), dtype=np.complex128))
    rmin = float(gp.min()) if gp.size else 0.0
    if rmin < RATE_NEGATIVE_TOL:
        raise RateNegativeError(f"g*Re f = {rmin:.3e} below {RATE_NEGATIVE_TOL:.1e}")
    gp = np.maximum(gp, 0.0)
    pulses = pulses if pulses is not None else PulseSchedule.empty()
    steps, rots = [], []
    for e in pulses:
        if e.target != 0 or as_matrix(e.unitary).shape[0] != 2:
            raise ValueError("Bloch track only supports 2x2 pulses on the atom")
        idx = int(round(e.time / dt))
        if idx < 0 or idx > n or abs(idx * dt - e.time) > dt / 2 + 1e-12:
            raise PulseOffGridError(f"pulse at t={e.time} off the Bloch grid")
        if steps and idx <= steps[-1]:
            raise PulseOffGridError(f"pulses collide on the grid at index {idx}")
        steps.append(idx)
        rots.append(bloch_rotation(e.unitary))
    if steps:
        steps_arr = np.asarray(steps, dtype=np.int64)
        rots_arr = np.ascontiguousarray(np.stack(rots))
    else:
        steps_arr = np.zeros(0, dtype=np.int64)
        rots_arr = np.zeros((0, 3, 3), dtype=np.float64)
    s0 = np.ascontiguousarray(np.asarray(s0, dtype=np.float64).reshape(3))
    series = _kernels.rk4_bloch(n, float(dt), float(p.omega_q), gp, s0, steps_arr, rots_arr)
    return np.arange(n + 1) * dt, series
