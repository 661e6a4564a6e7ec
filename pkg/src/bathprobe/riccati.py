"""Memory function f(t) of the damped-cavity bath.

Closed-form evaluation, an independent RK4 integration oracle of the scalar
Riccati equation, and the induced time-dependent decay rate g*Re{f(t)}.
"""
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import RateNegativeError, StepOverflowError

BETA_DEGENERATE_TOL = 1e-6
F_OVERFLOW = 1e6
RATE_NEGATIVE_TOL = -1e-9


@dataclass(frozen=True)
class RiccatiParams:
    omega_q: float
    delta: float
    g: float
    gamma: float

    def __post_init__(self):
        if not self.g > 0:
            raise ValueError("coupling g must be positive")
        if self.gamma < 0:
            raise ValueError("damping gamma must be nonnegative")

    @property
    def mu(self):
        return complex(self.gamma, -(self.omega_q - self.delta))

    @property
    def beta(self):
        # principal branch; f is even under beta -> -beta so the choice is moot
        return np.sqrt(self.mu * self.mu / 4.0 - self.g * self.g + 0j)

    @property
    def tuned(self):
        return self.omega_q == self.delta and self.gamma >= 2.0 * self.g


def riccati_rhs(f, p):
    """df/dt = g + g f^2 + (i(omega_q - delta) - gamma) f."""
    f = np.asarray(f, dtype=np.complex128) if np.ndim(f) else complex(f)
    return p.g + p.g * f * f + (1j * (p.omega_q - p.delta) - p.gamma) * f


def f_closed(p, t):
    """Closed-form f(t) = 2g sinh(bt) / (2b cosh(bt) + mu sinh(bt)).

    mu = gamma - i(omega_q - delta), b = sqrt(mu^2/4 - g^2); for |b| below
    the degenerate threshold the series limit 2gt/(2 + mu t) is used.  Accepts
    scalar or array t.
    """
    scalar = np.ndim(t) == 0
    t = np.atleast_1d(np.asarray(t, dtype=np.float64))
    mu = p.mu
    beta = p.beta
    if abs(beta) < BETA_DEGENERATE_TOL:
        out = 2.0 * p.g * t / (2.0 + mu * t)
    else:
        z = beta * t
        out = np.empty(t.shape, dtype=np.complex128)
        small = np.abs(z.real) <= 20.0
        zs = np.where(small, z, 0.0)
        out_small = 2.0 * p.g * np.sinh(zs) / (2.0 * beta * np.cosh(zs) + mu * np.sinh(zs))
        # tanh form is overflow-safe once the hyperbolics saturate
        th = np.tanh(np.where(small, 0.0, z))
        out_large = 2.0 * p.g * th / (2.0 * beta + mu * th)
        out = np.where(small, out_small, out_large)
    return complex(out[0]) if scalar else out


class RiccatiSolution:
    """Evaluates f(t); either the closed form or a cubic interpolation of an
    integrated grid (the oracle path)."""

    def __init__(self, params, method, times=None, values=None):
        if method not in ("closed_form", "ode_grid"):
            raise ValueError(f"unknown evaluation method {method!r}")
        self.params = params
        self.method = method
        self.times = times
        self.values = values
        self._spline = None
        if method == "ode_grid":
            if times is None or values is None:
                raise ValueError("ode_grid solution needs grid samples")
            self._spline = CubicSpline(times, values)

    def __call__(self, t):
        if self.method == "closed_form":
            return f_closed(self.params, t)
        t_arr = np.asarray(t, dtype=np.float64)
        if np.any(t_arr < self.times[0] - 1e-12) or np.any(t_arr > self.times[-1] + 1e-12):
            raise ValueError("time outside the integrated grid")
        out = self._spline(t_arr)
        return complex(out) if np.ndim(t) == 0 else np.asarray(out, dtype=np.complex128)

    def __repr__(self):
        return f"RiccatiSolution(method={self.method!r}, params={self.params})"


def closed_solution(p):
    return RiccatiSolution(p, "closed_form")


def f_ode(p, t_end, dt):
    """Integrate the Riccati equation with classical RK4 from f(0) = 0.

    Serves as the oracle for the closed form.  Raises StepOverflowError when
    |f| exceeds 1e6 (blow-up outside the validity regime).
    """
    if not dt > 0 or not t_end > 0:
        raise ValueError("t_end and dt must be positive")
    n = int(round(t_end / dt))
    if abs(n * dt - t_end) > 1e-9:
        raise ValueError("t_end must be an integer number of steps")
    values = np.empty(n + 1, dtype=np.complex128)
    f = 0.0 + 0.0j
    values[0] = f
    for i in range(n):
        k1 = riccati_rhs(f, p)
        k2 = riccati_rhs(f + 0.5 * dt * k1, p)
        k3 = riccati_rhs(f + 0.5 * dt * k2, p)
        k4 = riccati_rhs(f + dt * k3, p)
        f = f + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if abs(f) > F_OVERFLOW:
            raise StepOverflowError(f"|f| exceeded {F_OVERFLOW:.0e} at t={(i + 1) * dt:.6g}")
        values[i + 1] = f
    times = np.arange(n + 1) * dt
    return RiccatiSolution(p, "ode_grid", times=times, values=values)


def gamma_prime(p, t):
    """Induced decay rate g * Re{f(t)} of the direct-coupling reading.

    Raises RateNegativeError when the rate dips below -1e-9 (the reduced
    model has left its validity regime); tiny negatives are clipped to 0.
    """
    r = p.g * np.real(f_closed(p, t))
    rmin = float(np.min(r)) if np.ndim(r) else float(r)
    if rmin < RATE_NEGATIVE_TOL:
        raise RateNegativeError(f"g*Re f(t) = {rmin:.3e} below {RATE_NEGATIVE_TOL:.1e}")
    if np.ndim(r):
        return np.maximum(r, 0.0)
    return max(float(r), 0.0)
