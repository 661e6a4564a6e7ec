"""Numba-jitted hot kernels (scalar inner loops, one compile per signature).

Mirrors the API of `_kernels_numpy`; selection happens in `_kernels`.
"""
import numpy as np
from numba import njit

JACOBI_OFF_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100


@njit(cache=True)
def jacobi_eig(a):
    """Cyclic Jacobi eigendecomposition of a Hermitian complex matrix.

    Input must already be Hermitian (symmetrize at the call site).
    Returns eigenvalues ascending and the matching unitary of column vectors.
    Converges when the off-diagonal Frobenius norm drops below 1e-14.
    """
    n = a.shape[0]
    w = a.copy()
    v = np.eye(n, dtype=np.complex128)
    converged = False
    for _ in range(JACOBI_MAX_SWEEPS):
        off2 = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off2 += abs(w[i, j]) ** 2
        if np.sqrt(off2) <= JACOBI_OFF_TOL:
            converged = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = w[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue
                ph = apq / r  # e^{i phi}
                phc = ph.conjugate()
                tau = (w[q, q].real - w[p, p].real) / (2.0 * r)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # columns: p' = c*p - s*conj(ph)*q ; q' = s*p + c*conj(ph)*q
                for k in range(n):
                    wp = w[k, p]
                    wq = w[k, q]
                    w[k, p] = c * wp - s * phc * wq
                    w[k, q] = s * wp + c * phc * wq
                    vp = v[k, p]
                    vq = v[k, q]
                    v[k, p] = c * vp - s * phc * vq
                    v[k, q] = s * vp + c * phc * vq
                # rows: p' = c*p - s*ph*q ; q' = s*p + c*ph*q
                for k in range(n):
                    wp = w[p, k]
                    wq = w[q, k]
                    w[p, k] = c * wp - s * ph * wq
                    w[q, k] = s * wp + c * ph * wq
    if not converged:
        raise ValueError("jacobi_eig: no convergence within sweep limit")
    evals = np.empty(n, np.float64)
    for i in range(n):
        evals[i] = w[i, i].real
    order = np.argsort(evals)
    evals_sorted = np.empty(n, np.float64)
    vecs = np.empty((n, n), np.complex128)
    for i in range(n):
        evals_sorted[i] = evals[order[i]]
        for k in range(n):
            vecs[k, i] = v[k, order[i]]
    return evals_sorted, vecs


@njit(cache=True)
def _gen_apply(l_static, l_parts, coefs, j, vin, vout):
    """vout = (l_static + sum_k coefs[k, j] * l_parts[k]) @ vin."""
    dim = vin.shape[0]
    for a in range(dim):
        acc = 0.0 + 0.0j
        for b in range(dim):
            acc += l_static[a, b] * vin[b]
        vout[a] = acc
    for k in range(l_parts.shape[0]):
        ck = coefs[k, j]
        if ck != 0.0:
            for a in range(dim):
                acc = 0.0 + 0.0j
                for b in range(dim):
                    acc += l_parts[k, a, b] * vin[b]
                vout[a] += ck * acc


@njit(cache=True)
def _matvec_inplace(m, vin, vout):
    dim = vin.shape[0]
    for a in range(dim):
        acc = 0.0 + 0.0j
        for b in range(dim):
            acc += m[a, b] * vin[b]
        vout[a] = acc


@njit(cache=True)
def rk4_super(n_steps, dt, l_static, l_parts, coefs, v0, pulse_steps, pulse_supers):
    """Fixed-step RK4 of v' = L(t) v in superoperator form.

    coefs holds the time-varying part coefficients sampled on the half grid
    (2*n_steps + 1 points).  Pulses are superoperator matrices applied after
    the step whose end index appears in pulse_steps (index 0 = initial state).
    Returns the full record (n_steps + 1, D).
    """
    dim = v0.shape[0]
    out = np.empty((n_steps + 1, dim), np.complex128)
    v = v0.copy()
    tmp = np.empty(dim, np.complex128)
    k1 = np.empty(dim, np.complex128)
    k2 = np.empty(dim, np.complex128)
    k3 = np.empty(dim, np.complex128)
    k4 = np.empty(dim, np.complex128)
    pp = 0
    npulse = pulse_steps.shape[0]
    if pp < npulse and pulse_steps[pp] == 0:
        _matvec_inplace(pulse_supers[pp], v, tmp)
        v, tmp = tmp, v
        pp += 1
    for a in range(dim):
        out[0, a] = v[a]
    for i in range(n_steps):
        j0 = 2 * i
        _gen_apply(l_static, l_parts, coefs, j0, v, k1)
        for a in range(dim):
            tmp[a] = v[a] + 0.5 * dt * k1[a]
        _gen_apply(l_static, l_parts, coefs, j0 + 1, tmp, k2)
        for a in range(dim):
            tmp[a] = v[a] + 0.5 * dt * k2[a]
        _gen_apply(l_static, l_parts, coefs, j0 + 1, tmp, k3)
        for a in range(dim):
            tmp[a] = v[a] + dt * k3[a]
        _gen_apply(l_static, l_parts, coefs, j0 + 2, tmp, k4)
        for a in range(dim):
            v[a] = v[a] + (dt / 6.0) * (k1[a] + 2.0 * k2[a] + 2.0 * k3[a] + k4[a])
        if pp < npulse and pulse_steps[pp] == i + 1:
            _matvec_inplace(pulse_supers[pp], v, tmp)
            v, tmp = tmp, v
            pp += 1
        for a in range(dim):
            out[i + 1, a] = v[a]
    return out


@njit(cache=True)
def rk4_bloch(n_steps, dt, omega_q, gp, s0, pulse_steps, pulse_rots):
    """RK4 of the damped Bloch-vector system with decay rate samples gp
    on the half grid; pulses enter as 3x3 rotation matrices."""
    out = np.empty((n_steps + 1, 3), np.float64)
    s = s0.copy()
    tmp = np.empty(3, np.float64)
    pp = 0
    npulse = pulse_steps.shape[0]
    if pp < npulse and pulse_steps[pp] == 0:
        for a in range(3):
            tmp[a] = pulse_rots[pp, a, 0] * s[0] + pulse_rots[pp, a, 1] * s[1] + pulse_rots[pp, a, 2] * s[2]
        for a in range(3):
            s[a] = tmp[a]
        pp += 1
    out[0] = s
    k = np.empty((4, 3), np.float64)
    for i in range(n_steps):
        j0 = 2 * i
        for stage in range(4):
            if stage == 0:
                g = gp[j0]
                x, y, z = s[0], s[1], s[2]
            elif stage == 1:
                g = gp[j0 + 1]
                x = s[0] + 0.5 * dt * k[0, 0]
                y = s[1] + 0.5 * dt * k[0, 1]
                z = s[2] + 0.5 * dt * k[0, 2]
            elif stage == 2:
                g = gp[j0 + 1]
                x = s[0] + 0.5 * dt * k[1, 0]
                y = s[1] + 0.5 * dt * k[1, 1]
                z = s[2] + 0.5 * dt * k[1, 2]
            else:
                g = gp[j0 + 2]
                x = s[0] + dt * k[2, 0]
                y = s[1] + dt * k[2, 1]
                z = s[2] + dt * k[2, 2]
            k[stage, 0] = -(g * x + omega_q * y)
            k[stage, 1] = -(-omega_q * x + g * y)
            k[stage, 2] = -2.0 * g * (z + 1.0)
        for a in range(3):
            s[a] = s[a] + (dt / 6.0) * (k[0, a] + 2.0 * k[1, a] + 2.0 * k[2, a] + k[3, a])
        if pp < npulse and pulse_steps[pp] == i + 1:
            for a in range(3):
                tmp[a] = pulse_rots[pp, a, 0] * s[0] + pulse_rots[pp, a, 1] * s[1] + pulse_rots[pp, a, 2] * s[2]
            for a in range(3):
                s[a] = tmp[a]
            pp += 1
        out[i + 1] = s
    return out
