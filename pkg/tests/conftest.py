import numpy as np
import pytest

from bathprobe.config import apply_overrides, default_config
from bathprobe.experiments import run_fig3, run_fig4, run_fig5, run_measure


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_density(rng, dim, rank=None):
    rank = rank or dim
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_unitary(rng, dim):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_hermitian(rng, dim):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (g + g.conj().T) / 2.0


@pytest.fixture(scope="session")
def fig3_data():
    return run_fig3(default_config("fig3"))


@pytest.fixture(scope="session")
def fig4_data():
    return run_fig4(default_config("fig4"))


@pytest.fixture(scope="session")
def fig5_data():
    return run_fig5(default_config("fig5"))


@pytest.fixture(scope="session")
def fig5_data_long_delay():
    # delay past the disentanglement instant so the delayed trajectory
    # contains its genuine trace-distance extremum
    cfg = apply_overrides(default_config("fig5"), ["decouple_delay=0.4"])
    return run_fig5(cfg)


@pytest.fixture(scope="session")
def measure_full():
    return run_measure(default_config("measure"))


@pytest.fixture(scope="session")
def measure_markov():
    return run_measure(apply_overrides(default_config("measure"), ["model=markovian"]))
