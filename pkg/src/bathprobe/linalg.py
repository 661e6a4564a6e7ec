"""Dense complex linear algebra on small composite Hilbert spaces.

Matrices are plain numpy arrays (complex128, row-major).  Dimensions stay
tiny (<= ~16), so the Hermitian eigensolver is a cyclic Jacobi kernel picked
for robustness rather than asymptotics.
"""
from dataclasses import dataclass
from math import prod

import numpy as np

from . import _kernels
from .errors import NonHermitianError

HERM_TOL = 1e-10


@dataclass(frozen=True)
class SubsystemLayout:
    """Ordered tensor factors of a composite space; index 0 is the leftmost."""

    factors: tuple

    def __post_init__(self):
        factors = tuple((str(n), int(d)) for n, d in self.factors)
        object.__setattr__(self, "factors", factors)
        names = [n for n, _ in factors]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate factor names in {names}")
        if any(d < 2 for _, d in factors):
            raise ValueError("every factor dimension must be >= 2")

    @property
    def dims(self):
        return tuple(d for _, d in self.factors)

    @property
    def total_dim(self):
        return prod(self.dims)

    def index(self, name):
        for i, (n, _) in enumerate(self.factors):
            if n == name:
                return i
        raise KeyError(name)


def as_matrix(m):
    """Coerce to a finite complex128 square matrix."""
    a = np.ascontiguousarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a.view(np.float64))):
        raise ValueError("matrix contains non-finite entries")
    return a


def kron(a, b):
    """Kronecker product (tensor composition of operators)."""
    return np.kron(np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128))


def partial_trace(rho, layout, keep):
    """Trace out all factors not listed in `keep`.

    `rho` may carry leading batch axes, e.g. a stack of states (n, d, d);
    the kept factors stay in their original order.
    """
    rho = np.asarray(rho, dtype=np.complex128)
    dims = layout.dims
    k = len(dims)
    keep = sorted(set(int(i) for i in keep))
    if any(i < 0 or i >= k for i in keep):
        raise ValueError(f"keep indices {keep} out of range for {k} factors")
    d = layout.total_dim
    if rho.shape[-2:] != (d, d):
        raise ValueError(f"state dim {rho.shape[-2:]} does not match layout dim {d}")
    batch_shape = rho.shape[:-2]
    resh = rho.reshape(batch_shape + dims + dims)
    nb = len(batch_shape)
    batch_sub = list(range(2 * k, 2 * k + nb))
    row_sub = list(range(k))
    col_sub = [i if i not in keep else k + i for i in range(k)]
    out_sub = batch_sub + [i for i in keep] + [k + i for i in keep]
    out = np.einsum(resh, batch_sub + row_sub + col_sub, out_sub)
    dkeep = prod(dims[i] for i in keep)
    return np.ascontiguousarray(out.reshape(batch_shape + (dkeep, dkeep)))


def hermiticity_defect(m):
    """Max entrywise |m - m^dagger|."""
    m = np.asarray(m)
    return float(np.max(np.abs(m - m.conj().swapaxes(-1, -2)))) if m.size else 0.0


def _symmetrized(m, tol):
    a = as_matrix(m)
    defect = hermiticity_defect(a)
    if defect > tol:
        raise NonHermitianError(f"hermiticity defect {defect:.3e} exceeds {tol:.1e}")
    return np.ascontiguousarray((a + a.conj().T) / 2.0)


def herm_eig(m, tol=HERM_TOL):
    """Eigenvalues (ascending) and eigenvectors of a Hermitian matrix.

    Inputs within the tolerance are symmetrized before the Jacobi sweep;
    raises NonHermitianError beyond it.
    """
    return _kernels.jacobi_eig(_symmetrized(m, tol))


def herm_eigvals(m, tol=HERM_TOL):
    """Real eigenvalues of a Hermitian matrix, ascending."""
    return herm_eig(m, tol=tol)[0]


def trace_norm(m, tol=HERM_TOL):
    """Sum of absolute eigenvalues (Hermitian input only)."""
    return float(np.sum(np.abs(herm_eigvals(m, tol=tol))))
