"""Scalar figures of merit on states and trajectories.

Trace distance, two-qubit concurrence (and its atom-cavity projection),
Bloch expectations, the pulse-response criterion check, and the
dynamical-recovery measure with its schedule search.
"""
from dataclasses import dataclass

import numpy as np

from .errors import (
    AlphaOutOfRangeError,
    IntervalNotOnGridError,
    NonRealExpectationError,
    TruncationLeakError,
)
from .evolve import (
    PulseEvent,
    PulseSchedule,
    compile_generator,
    propagate,
    unitary_superop,
)
from .linalg import as_matrix, herm_eig, herm_eigvals, kron, partial_trace, trace_norm
from .model import embed, pauli

BLOCH_IMAG_TOL = 1e-8
TRUNCATION_LEAK_TOL = 1e-8


def trace_distance(r1, r2):
    """D(r1, r2) = Tr|r1 - r2| / 2, in [0, 1] for density matrices."""
    r1 = as_matrix(r1)
    r2 = as_matrix(r2)
    if r1.shape != r2.shape:
        raise ValueError(f"dimension mismatch {r1.shape} vs {r2.shape}")
    return 0.5 * trace_norm(r1 - r2)


def wootters_lambdas(rho):
    """Descending square-root eigenvalues of rho (sy kron sy) rho* (sy kron sy).

    Computed as the singular values of the complex-symmetric C = Y^T S Y with
    rho = Y Y^dagger (eigen-factor truncated at numerical rank) through the
    Hermitian embedding [[0, C], [C^dag, 0]]; this avoids the sqrt(eps) noise
    a matrix square root would inject for rank-deficient states.
    """
    rho = as_matrix(rho)
    if rho.shape != (4, 4):
        raise ValueError("concurrence is defined on a 2x2 composite (4x4 matrix)")
    syy = kron(pauli("y"), pauli("y"))
    w, v = herm_eig((rho + rho.conj().T) / 2.0)
    w = np.clip(w, 0.0, None)
    keep = w > 1e-14 * max(float(w.max()), 1e-300)
    rank = int(np.count_nonzero(keep))
    lam = np.zeros(4)
    if rank == 0:
        return lam
    y = v[:, keep] * np.sqrt(w[keep])
    c = y.T @ syy @ y
    emb = np.zeros((2 * rank, 2 * rank), dtype=np.complex128)
    emb[:rank, rank:] = c
    emb[rank:, :rank] = c.conj().T
    ev = herm_eigvals(emb)  # pairs (-sigma_i, +sigma_i)
    lam[:rank] = ev[rank:][::-1]
    return lam


def concurrence(rho, raw=False):
    """Two-qubit concurrence max(0, l1 - l2 - l3 - l4); raw=True skips the
    clip at zero (useful for locating the vanishing point)."""
    lam = wootters_lambdas(rho)
    val = float(lam[0] - lam[1] - lam[2] - lam[3])
    return val if raw else max(0.0, val)


def atom_cavity_concurrence(rho, raw=False):
    """Concurrence of an atom (2) x cavity (N_c) state after projecting the
    cavity onto its two lowest Fock levels.

    Valid only while levels >= 2 hold no population (conserved-excitation
    dynamics); raises TruncationLeakError when they do.
    """
    rho = as_matrix(rho)
    d = rho.shape[0]
    if d % 2 != 0 or d < 4:
        raise ValueError("expected an atom x cavity state with even dim >= 4")
    nc = d // 2
    pops = np.real(np.diag(rho))
    leak = sum(pops[s * nc + n] for s in range(2) for n in range(2, nc))
    if leak > TRUNCATION_LEAK_TOL:
        raise TruncationLeakError(f"population {leak:.3e} above cavity level 1")
    idx = [s * nc + n for s in range(2) for n in range(2)]
    sub = rho[np.ix_(idx, idx)]
    tr = float(np.trace(sub).real)
    if tr <= 0:
        raise ValueError("projected state has nonpositive trace")
    return concurrence(sub / tr, raw=raw)


def bloch_expectations(rho):
    """(<sx>, <sy>, <sz>) of the factor-0 qubit of a composite state."""
    rho = as_matrix(rho)
    d = rho.shape[0]
    if d % 2 != 0:
        raise ValueError("factor 0 must be a qubit")
    rest = d // 2
    out = []
    for which in ("x", "y", "z"):
        op = kron(pauli(which), np.eye(rest))
        val = complex(np.einsum("ij,ji->", op, rho))
        if abs(val.imag) > BLOCH_IMAG_TOL:
            raise NonRealExpectationError(f"<s{which}> has imaginary part {val.imag:.3e}")
        out.append(val.real)
    return tuple(out)


def bloch_series(states):
    """Vectorized (n, 3) Bloch expectations of the factor-0 qubit."""
    states = np.asarray(states, dtype=np.complex128)
    rest = states.shape[-1] // 2
    cols = []
    for which in ("x", "y", "z"):
        op = kron(pauli(which), np.eye(rest))
        vals = np.einsum("ij,tji->t", op, states)
        if vals.size and float(np.max(np.abs(vals.imag))) > BLOCH_IMAG_TOL:
            raise NonRealExpectationError(f"<s{which}> series has imaginary parts")
        cols.append(vals.real)
    return np.stack(cols, axis=1)


def marginal_qubit_distance_series(vs1, vs2, dim):
    """Trace distance between factor-0 qubit marginals along two vectorized
    state records (n, dim*dim); closed form for the 2x2 Hermitian difference."""
    nb = dim // 2
    diff = (np.asarray(vs1) - np.asarray(vs2)).reshape(-1, 2, nb, 2, nb)
    m = np.einsum("tibjb->tij", diff)
    half_tr = 0.5 * (m[:, 0, 0] + m[:, 1, 1]).real
    a = 0.5 * (m[:, 0, 0] - m[:, 1, 1]).real
    r = np.sqrt(a * a + np.abs(m[:, 0, 1]) ** 2)
    return 0.5 * (np.abs(half_tr + r) + np.abs(half_tr - r))


@dataclass
class CriterionResult:
    """Per-grid-point deviation between a plant trajectory and its reference,
    with the pulse-response flag (deviation beyond 10x the pre-pulse floor)."""

    times: np.ndarray
    deviation: np.ndarray
    flagged: bool | None = None
    threshold: float = 0.0
    floor: float = 0.0


def criterion_deviation(traj_plant, traj_reference, norm="bloch_max",
                        pulse_time=None, floor_atol=1e-9):
    """Deviation time series between two plant trajectories on one grid.

    norm "bloch_max" takes the max Bloch-component distance, "trace_distance"
    the state distance.  With pulse_time given, flags non-Markovian response
    when any post-pulse deviation exceeds 10x the pre-pulse floor (the floor
    is guarded below by floor_atol, since identical generators leave only
    roundoff before the pulse).
    """
    t1, t2 = traj_plant.times, traj_reference.times
    if len(t1) != len(t2) or float(np.max(np.abs(t1 - t2))) > 1e-12:
        raise ValueError("trajectory grids do not match")
    if norm == "bloch_max":
        b1 = bloch_series(traj_plant.states)
        b2 = bloch_series(traj_reference.states)
        dev = np.max(np.abs(b1 - b2), axis=1)
    elif norm == "trace_distance":
        dev = np.array([
            trace_distance(s1, s2)
            for s1, s2 in zip(traj_plant.states, traj_reference.states)
        ])
    else:
        raise ValueError(f"unknown norm {norm!r}")
    res = CriterionResult(times=t1.copy(), deviation=dev)
    if pulse_time is not None:
        pre = dev[t1 <= pulse_time + 1e-12]
        res.floor = max(float(pre.max()) if pre.size else 0.0, floor_atol)
        res.threshold = 10.0 * res.floor
        post = dev[t1 > pulse_time + 1e-12]
        res.flagged = bool(post.size and float(post.max()) > res.threshold)
    return res


# -- dynamical-recovery measure -------------------------------------------------

@dataclass(frozen=True)
class SearchSpec:
    """Restricted schedule family for the recovery search: one instantaneous
    pulse from `ops` on a time grid, optionally continued as a decoupling
    train of the same operator (delay 0 reuses the pulse as the train head).
    The achieved measure is a lower bound on the unrestricted supremum."""

    ops: tuple = ("sx", "sy", "sz")
    time_resolution: float = 0.05
    window: float = 5.0
    train_intervals: tuple = (0.02, 0.05)
    train_delays: tuple = (0.0, 0.05, 0.1, 0.2)
    include_trains: bool = True


@dataclass(frozen=True)
class SearchPoint:
    op: str
    pulse_time: float
    train_interval: float | None
    train_delay: float | None
    max_distance: float
    recovery: float


@dataclass
class MeasureResult:
    n_alpha: float
    alpha: float
    argmax_schedule: PulseSchedule
    best: SearchPoint
    search_log: tuple


def _steps_of(value, dt, what):
    k = int(round(value / dt))
    if abs(k * dt - value) > 1e-9:
        raise IntervalNotOnGridError(f"{what}={value} is not a multiple of dt={dt}")
    return k


def n_alpha(model, rho1, rho2, onset_time, dt, search=None, alpha=None):
    """Best normalized trace-distance recovery over the searched schedule
    family, clipped to [0, 1]; 0 for Markovian dynamics.

    rho1/rho2 are the joint states at the onset time (their factor-0
    marginals carry distance alpha < 1).  Returns the measure, the achieved
    argmax schedule and the full search log.
    """
    search = search or SearchSpec()
    layout = model.layout
    if layout.dims[0] != 2:
        raise ValueError("the searched plant must be a qubit (factor 0 of dim 2)")
    rho1 = as_matrix(rho1)
    rho2 = as_matrix(rho2)
    r1p = partial_trace(rho1, layout, {0})
    r2p = partial_trace(rho2, layout, {0})
    measured_alpha = trace_distance(r1p, r2p)
    alpha = measured_alpha if alpha is None else float(alpha)
    if alpha >= 1.0 - 1e-9:
        raise AlphaOutOfRangeError(f"alpha={alpha} too close to 1")
    if alpha < 0.0:
        raise AlphaOutOfRangeError(f"alpha={alpha} negative")

    n_win = _steps_of(search.window, dt, "search window")
    rstep = max(1, _steps_of(search.time_resolution, dt, "search resolution"))
    gen = compile_generator(model)
    base1 = propagate(gen, rho1.reshape(-1), onset_time, dt, n_win)
    base2 = propagate(gen, rho2.reshape(-1), onset_time, dt, n_win)

    variants = [None]
    if search.include_trains:
        variants += [(iv, dl) for iv in search.train_intervals for dl in search.train_delays]
    sup_cache = {
        op: unitary_superop(embed(pauli(op[1]), layout, 0)) for op in search.ops
    }
    d2 = model.dim * model.dim

    best = None
    best_schedule = None
    log = []
    for ip in range(0, n_win, rstep):
        seg = n_win - ip
        t_pulse = onset_time + ip * dt
        for op in search.ops:
            sup = sup_cache[op]
            for variant in variants:
                rel = [0]
                if variant is not None:
                    iv_steps = _steps_of(variant[0], dt, "train interval")
                    dl_steps = _steps_of(variant[1], dt, "train delay")
                    start = dl_steps if dl_steps > 0 else iv_steps
                    rel += list(range(start, seg + 1, iv_steps))
                steps = np.asarray(rel, dtype=np.int64)
                supers = np.ascontiguousarray(np.broadcast_to(sup, (len(rel), d2, d2)))
                vs1 = propagate(gen, base1[ip], t_pulse, dt, seg, steps, supers)
                vs2 = propagate(gen, base2[ip], t_pulse, dt, seg, steps, supers)
                dist = marginal_qubit_distance_series(vs1, vs2, model.dim)
                m = float(dist.max())
                rec = min(max((m - alpha) / (1.0 - alpha), 0.0), 1.0)
                point = SearchPoint(
                    op=op,
                    pulse_time=t_pulse,
                    train_interval=None if variant is None else variant[0],
                    train_delay=None if variant is None else variant[1],
                    max_distance=m,
                    recovery=rec,
                )
                log.append(point)
                if best is None or m > best.max_distance:
                    best = point
                    best_schedule = PulseSchedule(tuple(
                        PulseEvent(t_pulse + k * dt, pauli(op[1]), 0) for k in rel
                    ))
    value = min(max((best.max_distance - alpha) / (1.0 - alpha), 0.0), 1.0)
    return MeasureResult(
        n_alpha=value,
        alpha=alpha,
        argmax_schedule=best_schedule,
        best=best,
        search_log=tuple(log),
    )
