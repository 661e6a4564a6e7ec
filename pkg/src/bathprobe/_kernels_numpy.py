"""Pure-numpy fallback kernels.

Same contracts as `_kernels_numba`.  The integrator vectorizes over time by
assembling per-step RK4 transfer matrices in chunks (the step map of a linear
ODE), which keeps the python-level loop down to one matvec per step.
"""
import numpy as np

JACOBI_OFF_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100


def jacobi_eig(a):
    """Cyclic Jacobi eigendecomposition of a Hermitian complex matrix.

    Same rotation sequence as the jitted version, with vectorized row and
    column updates.  Returns (eigenvalues ascending, column eigenvectors).
    """
    n = a.shape[0]
    w = a.copy()
    v = np.eye(n, dtype=np.complex128)
    converged = False
    for _ in range(JACOBI_MAX_SWEEPS):
        off2 = float(np.sum(np.abs(w) ** 2) - np.sum(np.abs(np.diag(w)) ** 2))
        if np.sqrt(max(off2, 0.0)) <= JACOBI_OFF_TOL:
            converged = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = w[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue
                ph = apq / r
                phc = ph.conjugate()
                tau = (w[q, q].real - w[p, p].real) / (2.0 * r)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                colp, colq = w[:, p].copy(), w[:, q].copy()
                w[:, p] = c * colp - s * phc * colq
                w[:, q] = s * colp + c * phc * colq
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * phc * vq
                v[:, q] = s * vp + c * phc * vq
                rowp, rowq = w[p, :].copy(), w[q, :].copy()
                w[p, :] = c * rowp - s * ph * rowq
                w[q, :] = s * rowp + c * ph * rowq
    if not converged:
        raise ValueError("jacobi_eig: no convergence within sweep limit")
    evals = np.diag(w).real.copy()
    order = np.argsort(evals, kind="stable")
    return evals[order], v[:, order]


def _step_matrices(dt, l_static, l_parts, coefs, i0, i1):
    """RK4 transfer matrices for steps i0..i1-1 (batched over time)."""
    dim = l_static.shape[0]
    eye = np.eye(dim, dtype=np.complex128)
    idx = np.arange(i0, i1)
    if l_parts.shape[0] == 0:
        l0 = np.broadcast_to(l_static, (1, dim, dim))
        lmid = lend = l0
    else:
        def sampled(cols):
            return l_static + np.tensordot(coefs[:, cols].T, l_parts, axes=(1, 0))
        l0 = sampled(2 * idx)
        lmid = sampled(2 * idx + 1)
        lend = sampled(2 * idx + 2)
    k1 = l0
    k2 = lmid @ (eye + (0.5 * dt) * k1)
    k3 = lmid @ (eye + (0.5 * dt) * k2)
    k4 = lend @ (eye + dt * k3)
    return eye + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def rk4_super(n_steps, dt, l_static, l_parts, coefs, v0, pulse_steps, pulse_supers):
    """Fixed-step RK4 of v' = L(t) v; see the jitted twin for the contract."""
    dim = v0.shape[0]
    out = np.empty((n_steps + 1, dim), np.complex128)
    v = v0.copy()
    pp = 0
    npulse = pulse_steps.shape[0]
    if pp < npulse and pulse_steps[pp] == 0:
        v = pulse_supers[pp] @ v
        pp += 1
    out[0] = v
    constant = l_parts.shape[0] == 0
    chunk = n_steps if constant else min(n_steps, max(16, (1 << 18) // max(dim * dim, 1)))
    m_const = _step_matrices(dt, l_static, l_parts, coefs, 0, 1)[0] if constant and n_steps else None
    i = 0
    while i < n_steps:
        hi = min(i + chunk, n_steps)
        ms = None if constant else _step_matrices(dt, l_static, l_parts, coefs, i, hi)
        for j in range(i, hi):
            v = (m_const if constant else ms[j - i]) @ v
            if pp < npulse and pulse_steps[pp] == j + 1:
                v = pulse_supers[pp] @ v
                pp += 1
            out[j + 1] = v
        i = hi
    return out


def rk4_bloch(n_steps, dt, omega_q, gp, s0, pulse_steps, pulse_rots):
    """RK4 of the damped Bloch-vector system (plain loop, tiny state)."""
    out = np.empty((n_steps + 1, 3), np.float64)
    x, y, z = float(s0[0]), float(s0[1]), float(s0[2])
    pp = 0
    npulse = pulse_steps.shape[0]
    if pp < npulse and pulse_steps[pp] == 0:
        x, y, z = pulse_rots[pp] @ np.array([x, y, z])
        pp += 1
    out[0] = (x, y, z)

    def drv(g, sx, sy, sz):
        return (-(g * sx + omega_q * sy), -(-omega_q * sx + g * sy), -2.0 * g * (sz + 1.0))

    for i in range(n_steps):
        j0 = 2 * i
        k1 = drv(gp[j0], x, y, z)
        k2 = drv(gp[j0 + 1], x + 0.5 * dt * k1[0], y + 0.5 * dt * k1[1], z + 0.5 * dt * k1[2])
        k3 = drv(gp[j0 + 1], x + 0.5 * dt * k2[0], y + 0.5 * dt * k2[1], z + 0.5 * dt * k2[2])
        k4 = drv(gp[j0 + 2], x + dt * k3[0], y + dt * k3[1], z + dt * k3[2])
        x += (dt / 6.0) * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
        y += (dt / 6.0) * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])
        z += (dt / 6.0) * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2])
        if pp < npulse and pulse_steps[pp] == i + 1:
            x, y, z = pulse_rots[pp] @ np.array([x, y, z])
            pp += 1
        out[i + 1] = (x, y, z)
    return out
