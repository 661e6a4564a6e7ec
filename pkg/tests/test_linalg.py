import numpy as np
import pytest

from bathprobe.errors import NonHermitianError
from bathprobe.linalg import (
    SubsystemLayout,
    herm_eig,
    herm_eigvals,
    kron,
    partial_trace,
    trace_norm,
)
from bathprobe.model import pauli

from conftest import random_density, random_hermitian


def test_kron_identities():
    i2 = np.eye(2, dtype=complex)
    assert np.array_equal(kron(i2, i2), np.eye(4))
    assert np.allclose(kron(pauli("z"), i2), np.diag([1, 1, -1, -1]))


def test_kron_bitflip_on_both_factors():
    xx = kron(pauli("x"), pauli("x"))
    ket00 = np.zeros(4, complex)
    ket00[0] = 1.0
    out = xx @ ket00
    expected = np.zeros(4, complex)
    expected[3] = 1.0  # |11>
    assert np.allclose(out, expected)


def test_kron_associativity(rng):
    for _ in range(10):
        a = random_hermitian(rng, 2)
        b = random_hermitian(rng, 3)
        c = random_hermitian(rng, 2)
        assert np.max(np.abs(kron(kron(a, b), c) - kron(a, kron(b, c)))) <= 1e-12


def test_partial_trace_product_state(rng):
    layout = SubsystemLayout((("a", 2), ("b", 3)))
    ra = random_density(rng, 2)
    rb = random_density(rng, 3)
    rho = kron(ra, rb)
    assert np.allclose(partial_trace(rho, layout, {0}), ra, atol=1e-12)
    assert np.allclose(partial_trace(rho, layout, {1}), rb, atol=1e-12)


def test_partial_trace_bell_marginal():
    layout = SubsystemLayout((("a", 2), ("b", 2)))
    bell = np.zeros(4, complex)
    bell[0] = bell[3] = 1 / np.sqrt(2)
    rho = np.outer(bell, bell.conj())
    assert np.allclose(partial_trace(rho, layout, {0}), np.eye(2) / 2, atol=1e-12)


def test_partial_trace_keep_all_and_trace_preserved(rng):
    layout = SubsystemLayout((("a", 2), ("b", 2), ("c", 2)))
    rho = random_density(rng, 8)
    assert np.allclose(partial_trace(rho, layout, {0, 1, 2}), rho, atol=1e-14)
    for keep in ({0}, {1}, {2}, {0, 2}):
        out = partial_trace(rho, layout, keep)
        assert abs(np.trace(out) - np.trace(rho)) <= 1e-12


def test_partial_trace_dimension_mismatch():
    layout = SubsystemLayout((("a", 2), ("b", 2)))
    with pytest.raises(ValueError):
        partial_trace(np.eye(6, dtype=complex) / 6, layout, {0})


def test_partial_trace_middle_factor(rng):
    layout = SubsystemLayout((("a", 2), ("b", 2), ("c", 3)))
    ra, rb, rc = (random_density(rng, d) for d in (2, 2, 3))
    rho = kron(kron(ra, rb), rc)
    assert np.allclose(partial_trace(rho, layout, {1}), rb, atol=1e-12)
    assert np.allclose(partial_trace(rho, layout, {0, 2}), kron(ra, rc), atol=1e-12)


def test_partial_trace_batched(rng):
    layout = SubsystemLayout((("a", 2), ("b", 2)))
    states = np.stack([random_density(rng, 4) for _ in range(5)])
    batched = partial_trace(states, layout, {0})
    for i in range(5):
        assert np.allclose(batched[i], partial_trace(states[i], layout, {0}), atol=1e-14)


def test_herm_eigvals_examples():
    assert np.allclose(herm_eigvals(np.diag([3.0, 1.0, 2.0]).astype(complex)), [1, 2, 3])
    assert np.allclose(herm_eigvals(pauli("x")), [-1, 1])
    assert np.allclose(herm_eigvals(np.eye(2, dtype=complex) / 2), [0.5, 0.5])


def test_herm_eigvals_against_numpy(rng):
    for dim in (2, 3, 4, 6, 8):
        for _ in range(20):
            m = random_hermitian(rng, dim)
            mine = herm_eigvals(m)
            ref = np.linalg.eigvalsh(m)
            assert np.max(np.abs(mine - ref)) <= 1e-11 * max(1.0, np.max(np.abs(ref)))


def test_herm_eig_reconstructs(rng):
    for _ in range(10):
        m = random_hermitian(rng, 5)
        w, v = herm_eig(m)
        assert np.max(np.abs(v @ np.diag(w) @ v.conj().T - m)) <= 1e-12
        assert np.max(np.abs(v.conj().T @ v - np.eye(5))) <= 1e-12


def test_herm_eigvals_sum_matches_trace(rng):
    for _ in range(20):
        m = random_hermitian(rng, 6)
        assert abs(np.sum(herm_eigvals(m)) - np.trace(m).real) <= 1e-10 * 6


def test_non_hermitian_rejected():
    m = np.array([[0, 1], [0, 0]], dtype=complex)
    with pytest.raises(NonHermitianError):
        herm_eigvals(m)
    with pytest.raises(NonHermitianError):
        trace_norm(m)


def test_trace_norm_examples():
    assert trace_norm(np.zeros((3, 3), complex)) == 0.0
    assert abs(trace_norm(np.diag([0.5, -0.5]).astype(complex)) - 1.0) <= 1e-14
    assert abs(trace_norm(pauli("z")) - 2.0) <= 1e-14


def test_trace_norm_is_a_norm(rng):
    # triangle inequality and absolute homogeneity, 100 random samples
    for _ in range(100):
        dim = int(rng.integers(2, 9))
        a = random_hermitian(rng, dim)
        b = random_hermitian(rng, dim)
        assert trace_norm(a + b) <= trace_norm(a) + trace_norm(b) + 1e-10
        c = float(rng.standard_normal())
        assert abs(trace_norm(c * a) - abs(c) * trace_norm(a)) <= 1e-10


def test_layout_validation():
    with pytest.raises(ValueError):
        SubsystemLayout((("a", 2), ("a", 2)))
    with pytest.raises(ValueError):
        SubsystemLayout((("a", 1),))
    layout = SubsystemLayout((("atom", 2), ("cavity", 4)))
    assert layout.total_dim == 8
    assert layout.index("cavity") == 1
