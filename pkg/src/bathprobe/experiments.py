"""Experiment presets: dual-track evolutions, figure data, CSV emission.

Every preset runs the same physical configuration through two tracks: the
full atom-cavity model (partial-traced to the atom) and the Markovian
reference built from the memory function, with the identical pulse schedule
injected into both.
"""
import os
from dataclasses import dataclass

import numpy as np

from .config import ExperimentConfig
from .errors import ConfigError
from .evolve import (
    PulseSchedule,
    Trajectory,
    bloch_ode,
    decoupling_schedule,
    integrate,
    merge_schedules,
    reduce_trajectory,
)
from .metrics import (
    MeasureResult,
    SearchSpec,
    atom_cavity_concurrence,
    bloch_expectations,
    bloch_series,
    concurrence,
    n_alpha,
    trace_distance,
)
from .linalg import kron
from .model import (
    ModelParams,
    build_full_model,
    build_reduced_model,
    pauli,
    with_ancilla,
)
from .riccati import closed_solution


def basis_state(dim, idx):
    v = np.zeros(dim, dtype=np.complex128)
    v[idx] = 1.0
    return v


def dm(psi):
    psi = np.asarray(psi, dtype=np.complex128)
    return np.outer(psi, psi.conj())


# atom basis: |e> = index 0 ("1"), |g> = index 1 ("0")
KET_E = basis_state(2, 0)
KET_G = basis_state(2, 1)
KET_PLUS = (KET_E + KET_G) / np.sqrt(2.0)


def _params(cfg):
    return ModelParams(cfg.omega_q, cfg.delta, cfg.g, cfg.gamma, cfg.cavity_dim)


def _tracks(cfg):
    p = _params(cfg)
    fsol = closed_solution(p.riccati())
    return p, build_full_model(p), build_reduced_model(p, fsol), fsol


def _pulse_matrix(cfg):
    if cfg.pulse_op == "none":
        return None
    return pauli(cfg.pulse_op[1])


def _single_pulse(cfg, target=0):
    op = _pulse_matrix(cfg)
    if op is None:
        return PulseSchedule.empty()
    return PulseSchedule.single(cfg.pulse_time, op, target)


def _vacuum(cavity_dim):
    return dm(basis_state(cavity_dim, 0))


def _distance_series(traj1, traj2):
    return np.array([trace_distance(s1, s2) for s1, s2 in zip(traj1.states, traj2.states)])


@dataclass
class Fig3Data:
    times: np.ndarray
    markov: np.ndarray  # (n, 3) Bloch components
    full: np.ndarray

    columns = ("t", "sx_markov", "sy_markov", "sz_markov", "sx_full", "sy_full", "sz_full")

    def table(self):
        return [self.times] + [self.markov[:, i] for i in range(3)] + [self.full[:, i] for i in range(3)]


def run_fig3(cfg):
    """Bloch-component comparison: Markovian track vs partial-traced full
    model, superposition atom, pulse on the atom at the configured time."""
    p, full, _, fsol = _tracks(cfg)
    pulses = _single_pulse(cfg, target=0)
    rho0 = kron(dm(KET_PLUS), _vacuum(cfg.cavity_dim))
    traj_full = integrate(full, rho0, cfg.t_end, cfg.dt, pulses)
    atom_traj = reduce_trajectory(traj_full, full.layout, {0})
    s0 = bloch_expectations(dm(KET_PLUS))
    times, markov = bloch_ode(p, fsol, s0, cfg.t_end, cfg.dt, pulses)
    return Fig3Data(times=times, markov=markov, full=bloch_series(atom_traj.states))


@dataclass
class Fig4Data:
    times: np.ndarray
    d_markov: np.ndarray
    d_full: np.ndarray
    c_markov: np.ndarray
    c_full: np.ndarray

    columns = ("t", "D_markov", "D_full", "C_markov", "C_full")

    def table(self):
        return [self.times, self.d_markov, self.d_full, self.c_markov, self.c_full]


def _bell_with_ancilla():
    # (|0>_anc |g> + |1>_anc |e>) / sqrt(2): maximally entangled with the atom
    psi = (np.kron(basis_state(2, 0), KET_G) + np.kron(basis_state(2, 1), KET_E)) / np.sqrt(2.0)
    return dm(psi)


def run_fig4(cfg):
    """Trace distance of the (|1>, |0>) atom pair and ancilla-atom concurrence,
    full vs Markovian track, with the pulse at the configured time."""
    _, full, reduced, _ = _tracks(cfg)
    vac = _vacuum(cfg.cavity_dim)
    pulses_atom0 = _single_pulse(cfg, target=0)
    pulses_atom1 = _single_pulse(cfg, target=1)

    # distance pair, full track
    t1 = integrate(full, kron(dm(KET_E), vac), cfg.t_end, cfg.dt, pulses_atom0)
    t2 = integrate(full, kron(dm(KET_G), vac), cfg.t_end, cfg.dt, pulses_atom0)
    d_full = _distance_series(
        reduce_trajectory(t1, full.layout, {0}), reduce_trajectory(t2, full.layout, {0})
    )
    # distance pair, Markovian track
    m1 = integrate(reduced, dm(KET_E), cfg.t_end, cfg.dt, pulses_atom0)
    m2 = integrate(reduced, dm(KET_G), cfg.t_end, cfg.dt, pulses_atom0)
    d_markov = _distance_series(m1, m2)

    # concurrence with an inert ancilla; the atom is factor 1
    bell = _bell_with_ancilla()
    anc_full = with_ancilla(full)
    tc = integrate(anc_full, kron(bell, vac), cfg.t_end, cfg.dt, pulses_atom1)
    marg = reduce_trajectory(tc, anc_full.layout, {0, 1})
    c_full = np.array([concurrence(s) for s in marg.states])

    anc_markov = with_ancilla(reduced)
    mc = integrate(anc_markov, bell, cfg.t_end, cfg.dt, pulses_atom1)
    c_markov = np.array([concurrence(s) for s in mc.states])

    return Fig4Data(times=t1.times, d_markov=d_markov, d_full=d_full,
                    c_markov=c_markov, c_full=c_full)


@dataclass
class Fig5Data:
    times: np.ndarray
    d_direct: np.ndarray
    d_delayed: np.ndarray
    c_atom_cavity_delayed: np.ndarray

    columns = ("t", "D_direct", "D_delayed", "C_atom_cavity_delayed")

    def table(self):
        return [self.times, self.d_direct, self.d_delayed, self.c_atom_cavity_delayed]


def fig5_schedules(cfg):
    """Protocol A: decoupling train from the pulse time.  Protocol B: single
    pulse, then the train delayed by decouple_delay."""
    op = _pulse_matrix(cfg)
    if op is None:
        raise ConfigError("fig5 needs a pulse operator (pulse_op != none)")
    direct = decoupling_schedule(cfg.pulse_time, cfg.t_end, cfg.decouple_interval, op, 0, cfg.dt)
    delayed = merge_schedules(
        PulseSchedule.single(cfg.pulse_time, op, 0),
        decoupling_schedule(cfg.pulse_time + cfg.decouple_delay, cfg.t_end,
                            cfg.decouple_interval, op, 0, cfg.dt),
    )
    return direct, delayed


def run_fig5(cfg):
    """Direct vs delayed decoupling after the pulse: trace distance of the
    atom pair under both protocols, plus the atom-cavity concurrence of the
    initially excited branch under the delayed protocol."""
    _, full, _, _ = _tracks(cfg)
    vac = _vacuum(cfg.cavity_dim)
    direct, delayed = fig5_schedules(cfg)

    rho_e = kron(dm(KET_E), vac)
    rho_g = kron(dm(KET_G), vac)
    layout = full.layout

    t1d = integrate(full, rho_e, cfg.t_end, cfg.dt, direct)
    t2d = integrate(full, rho_g, cfg.t_end, cfg.dt, direct)
    d_direct = _distance_series(
        reduce_trajectory(t1d, layout, {0}), reduce_trajectory(t2d, layout, {0})
    )

    t1y = integrate(full, rho_e, cfg.t_end, cfg.dt, delayed)
    t2y = integrate(full, rho_g, cfg.t_end, cfg.dt, delayed)
    d_delayed = _distance_series(
        reduce_trajectory(t1y, layout, {0}), reduce_trajectory(t2y, layout, {0})
    )
    c_acd = np.array([atom_cavity_concurrence(s) for s in t1y.states])

    return Fig5Data(times=t1d.times, d_direct=d_direct, d_delayed=d_delayed,
                    c_atom_cavity_delayed=c_acd)


@dataclass
class MeasureData:
    onset: float
    result: MeasureResult
    model_label: str

    columns = ("op", "pulse_time", "train_interval", "train_delay",
               "max_distance", "recovery")

    def summary(self):
        b = self.result.best
        train = ("none" if b.train_interval is None
                 else f"interval={b.train_interval:g} delay={b.train_delay:g}")
        return (
            f"n_alpha={self.result.n_alpha:.9e} alpha={self.result.alpha:.9e} "
            f"model={self.model_label} best: op={b.op} t={b.pulse_time:g} train={train}"
        )


def run_measure(cfg, search=None):
    """Evolve the (|1>, |0>) pair to the onset time under the selected model,
    then run the recovery-measure search from there."""
    p, full, reduced, _ = _tracks(cfg)
    onset = cfg.pulse_time
    if cfg.model == "full":
        model = full
        vac = _vacuum(cfg.cavity_dim)
        rho1_0, rho2_0 = kron(dm(KET_E), vac), kron(dm(KET_G), vac)
    else:
        model = reduced
        rho1_0, rho2_0 = dm(KET_E), dm(KET_G)
    if onset > 0:
        s1 = integrate(model, rho1_0, onset, cfg.dt).states[-1]
        s2 = integrate(model, rho2_0, onset, cfg.dt).states[-1]
    else:
        s1, s2 = rho1_0, rho2_0
    if search is None:
        window = cfg.t_end - onset
        if window <= 0:
            raise ConfigError("t_end must exceed the onset time for the measure")
        search = SearchSpec(window=window)
    result = n_alpha(model, s1, s2, onset, cfg.dt, search)
    return MeasureData(onset=onset, result=result, model_label=cfg.model)


# -- CSV emission ---------------------------------------------------------------

def _fmt(x):
    return f"{x:.8e}"  # 9 significant digits, scientific


def csv_text(columns, table):
    n = len(table[0])
    lines = [",".join(columns)]
    for i in range(n):
        row = []
        for col in table:
            v = col[i]
            row.append(v if isinstance(v, str) else _fmt(float(v)))
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def measure_csv_text(data):
    log = data.result.search_log
    cols = [
        [pt.op for pt in log],
        [_fmt(pt.pulse_time) for pt in log],
        ["" if pt.train_interval is None else _fmt(pt.train_interval) for pt in log],
        ["" if pt.train_delay is None else _fmt(pt.train_delay) for pt in log],
        [_fmt(pt.max_distance) for pt in log],
        [_fmt(pt.recovery) for pt in log],
    ]
    lines = [",".join(MeasureData.columns)]
    for i in range(len(log)):
        lines.append(",".join(col[i] for col in cols))
    return "\n".join(lines) + "\n"


def write_csv(path, text):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def run_experiment(cfg, out_dir=None):
    """Dispatch a validated config; returns (data, csv_path)."""
    cfg.validate()
    out = out_dir or cfg.out_dir
    name = cfg.experiment
    if name in ("fig3", "custom"):
        data = run_fig3(cfg)
        text = csv_text(Fig3Data.columns, data.table())
    elif name == "fig4":
        data = run_fig4(cfg)
        text = csv_text(Fig4Data.columns, data.table())
    elif name == "fig5":
        data = run_fig5(cfg)
        text = csv_text(Fig5Data.columns, data.table())
    elif name == "measure":
        data = run_measure(cfg)
        text = measure_csv_text(data)
    else:
        raise ConfigError(f"unknown experiment {name!r}")
    path = os.path.join(out, f"{name}.csv")
    write_csv(path, text)
    return data, path
