"""Benchmark the numba kernels against the pure-numpy fallback.

Times the three hot paths on realistic workloads: the superoperator RK4
integrator (the figure presets and the recovery-measure search), the Bloch
integrator, and the Jacobi eigensolver.  Run:

    python benchmarks/bench_kernels.py
"""
import time

import numpy as np

from bathprobe._kernels import get_kernels
from bathprobe.evolve import compile_generator, fold_constant_parts, sample_coefficients
from bathprobe.model import ModelParams, build_full_model, build_reduced_model, pauli
from bathprobe.riccati import closed_solution


def _timeit(fn, repeat=5):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _superop_inputs(model, n_steps, dt):
    gen = compile_generator(model)
    coefs = sample_coefficients(gen, 0.0, dt, n_steps)
    l_static, parts, rows = fold_constant_parts(gen, coefs)
    d = model.dim
    v0 = np.zeros(d * d, np.complex128)
    v0[0] = 1.0
    steps = np.array([n_steps // 2], dtype=np.int64)
    u = np.kron(np.eye(d // 2), pauli("z")) if d > 2 else pauli("z")
    sup = np.kron(u, u.conj())[None, :, :].astype(np.complex128)
    return n_steps, dt, l_static, parts, rows, v0, steps, np.ascontiguousarray(sup)


def main():
    p = ModelParams(1.0, 1.0, 1.0, 2.0, 2)
    cases = {
        "rk4_super fig preset (dim 4, 5000 steps)":
            ("rk4_super", _superop_inputs(build_full_model(p), 5000, 1e-3)),
        "rk4_super markovian (dim 2, 5000 steps)":
            ("rk4_super", _superop_inputs(
                build_reduced_model(p, closed_solution(p.riccati())), 5000, 1e-3)),
    }
    rng = np.random.default_rng(7)
    h = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    h = (h + h.conj().T) / 2
    gp = np.full(2 * 5000 + 1, 0.4)
    s0 = np.array([1.0, 0.0, 0.0])
    nopulse = np.zeros(0, np.int64)
    norot = np.zeros((0, 3, 3))

    backends = {name: get_kernels(name) for name in ("numba", "numpy")}
    # trigger jit compilation outside the timed region
    for name, (kname, args) in cases.items():
        backends["numba"].rk4_super(*args)
    backends["numba"].rk4_bloch(5000, 1e-3, 1.0, gp, s0, nopulse, norot)
    backends["numba"].jacobi_eig(h)

    rows = []
    for label, (kname, args) in cases.items():
        times = {b: _timeit(lambda k=k, a=args: getattr(k, kname)(*a))
                 for b, k in backends.items()}
        rows.append((label, times))
    rows.append(("rk4_bloch (5000 steps)", {
        b: _timeit(lambda k=k: k.rk4_bloch(5000, 1e-3, 1.0, gp, s0, nopulse, norot))
        for b, k in backends.items()
    }))
    rows.append(("jacobi_eig (dim 8, x100)", {
        b: _timeit(lambda k=k: [k.jacobi_eig(h) for _ in range(100)])
        for b, k in backends.items()
    }))

    width = max(len(r[0]) for r in rows)
    print(f"{'workload'.ljust(width)}  {'numba':>10}  {'numpy':>10}  {'speedup':>8}")
    for label, times in rows:
        speedup = times["numpy"] / times["numba"]
        print(f"{label.ljust(width)}  {times['numba'] * 1e3:8.2f}ms  "
              f"{times['numpy'] * 1e3:8.2f}ms  {speedup:7.1f}x")


if __name__ == "__main__":
    main()
