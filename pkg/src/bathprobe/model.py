"""Operator builders and Lindblad models.

Basis conventions (everything downstream depends on these):
  * atom basis order (|e>, |g>) with the excited state at index 0, so
    sigma_z = diag(1, -1) and sigma_minus lowers |e> -> |g>;
  * logical labels map as |1> = |e>, |0> = |g> (an initially "1"-labelled
    atom starts with <sigma_z> = +1 and decays under sigma_minus);
  * cavity Fock basis |0> .. |N_c - 1>.
"""
from dataclasses import dataclass

import numpy as np

from .errors import RateNegativeError
from .linalg import SubsystemLayout, as_matrix, hermiticity_defect, kron
from .riccati import RiccatiParams

RATE_NEGATIVE_TOL = -1e-9
HAMILTONIAN_HERM_TOL = 1e-10

_SIGMA = {
    "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
    "plus": np.array([[0, 1], [0, 0]], dtype=np.complex128),
    "minus": np.array([[0, 0], [1, 0]], dtype=np.complex128),
}


def pauli(which):
    """2x2 atom operator in the (|e>, |g>) basis; which in {x,y,z,plus,minus}."""
    try:
        return _SIGMA[which].copy()
    except KeyError:
        raise ValueError(f"unknown pauli label {which!r}") from None


def annihilation(dim):
    """Cavity lowering operator on a dim-level Fock truncation."""
    if dim < 2:
        raise ValueError("Fock truncation needs dim >= 2")
    a = np.zeros((dim, dim), dtype=np.complex128)
    for n in range(1, dim):
        a[n - 1, n] = np.sqrt(n)
    return a


def embed(op, layout, target):
    """Lift an operator on one factor to the full space (identity elsewhere)."""
    op = as_matrix(op)
    dims = layout.dims
    if target < 0 or target >= len(dims):
        raise ValueError(f"target {target} out of range for {len(dims)} factors")
    if op.shape[0] != dims[target]:
        raise ValueError(f"operator dim {op.shape[0]} does not match factor dim {dims[target]}")
    out = np.eye(1, dtype=np.complex128)
    for i, d in enumerate(dims):
        out = kron(out, op if i == target else np.eye(d))
    return out


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters: atom frequency, cavity detuning, coupling,
    cavity damping, Fock truncation."""

    omega_q: float
    delta: float
    g: float
    gamma: float
    cavity_dim: int = 2

    def __post_init__(self):
        if not self.g > 0:
            raise ValueError("coupling g must be positive")
        if self.gamma < 0:
            raise ValueError("damping gamma must be nonnegative")
        if self.cavity_dim < 2:
            raise ValueError("cavity_dim must be >= 2")

    def riccati(self):
        return RiccatiParams(self.omega_q, self.delta, self.g, self.gamma)


def const_rate(value):
    v = float(value)

    def rate(t):
        return np.full(np.shape(t), v) if np.ndim(t) else v

    return rate


@dataclass(frozen=True)
class LindbladModel:
    """Hamiltonian (static part + coefficient-weighted Hermitian parts) and
    collapse terms (operator, nonnegative rate function of time)."""

    layout: SubsystemLayout
    h_static: np.ndarray
    h_parts: tuple = ()
    collapse_terms: tuple = ()
    label: str = "model"

    def __post_init__(self):
        d = self.layout.total_dim
        object.__setattr__(self, "h_static", as_matrix(self.h_static))
        for name, mat in [("h_static", self.h_static)] + [
            (f"h_parts[{i}]", m) for i, (m, _) in enumerate(self.h_parts)
        ]:
            if mat.shape[0] != d:
                raise ValueError(f"{name} dim {mat.shape[0]} != layout dim {d}")
            if hermiticity_defect(mat) > HAMILTONIAN_HERM_TOL:
                raise ValueError(f"{name} is not Hermitian within {HAMILTONIAN_HERM_TOL:.0e}")
        for i, (op, _) in enumerate(self.collapse_terms):
            if as_matrix(op).shape[0] != d:
                raise ValueError(f"collapse operator {i} dim mismatch with layout dim {d}")

    @property
    def dim(self):
        return self.layout.total_dim

    def hamiltonian(self, t):
        h = self.h_static.copy()
        for mat, coef in self.h_parts:
            h = h + float(np.real(coef(t))) * mat
        return h


def _reduced_rate(p, f):
    def rate(t):
        r = p.g * np.real(np.asarray(f(t), dtype=np.complex128))
        rmin = float(np.min(r)) if r.ndim else float(r)
        if rmin < RATE_NEGATIVE_TOL:
            raise RateNegativeError(
                f"reduced-model rate g*Re f = {rmin:.3e} below {RATE_NEGATIVE_TOL:.1e}"
            )
        out = np.maximum(r, 0.0)
        return out if out.ndim else float(out)

    return rate


def build_full_model(p):
    """Atom (2) x cavity (N_c) model: exchange coupling plus cavity damping."""
    layout = SubsystemLayout((("atom", 2), ("cavity", p.cavity_dim)))
    a = annihilation(p.cavity_dim)
    ident_c = np.eye(p.cavity_dim)
    h = (
        (p.omega_q / 2.0) * kron(pauli("z"), ident_c)
        + p.delta * kron(np.eye(2), a.conj().T @ a)
        + p.g * (kron(pauli("minus"), a.conj().T) + kron(pauli("plus"), a))
    )
    collapse = ((kron(np.eye(2), a), const_rate(p.gamma)),)
    return LindbladModel(layout, h, (), collapse, label="full")


def build_reduced_model(p, f):
    """Time-local atom-only model driven by the memory function f(t):
    Lamb-shift part g*Im{f} on the excited projector, decay rate g*Re{f}."""
    layout = SubsystemLayout((("atom", 2),))
    h_static = (p.omega_q / 2.0) * pauli("z")
    proj_e = pauli("plus") @ pauli("minus")

    def shift_coef(t):
        return p.g * np.imag(np.asarray(f(t), dtype=np.complex128))

    h_parts = ((proj_e, shift_coef),)
    collapse = ((pauli("minus"), _reduced_rate(p, f)),)
    return LindbladModel(layout, h_static, h_parts, collapse, label="reduced")


def with_ancilla(model, name="ancilla", dim=2):
    """Prepend an inert factor (no Hamiltonian, no dissipation) to a model."""
    layout = SubsystemLayout(((name, dim),) + model.layout.factors)
    ident = np.eye(dim)
    h_static = kron(ident, model.h_static)
    h_parts = tuple((kron(ident, m), fn) for m, fn in model.h_parts)
    collapse = tuple((kron(ident, op), fn) for op, fn in model.collapse_terms)
    return LindbladModel(layout, h_static, h_parts, collapse, label=model.label + "+ancilla")
