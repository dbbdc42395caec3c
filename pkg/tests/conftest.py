"""Shared fixtures: the packet-loss example and small sampled instances."""

import numpy as np
import pytest

from switchcert.ncs import ncs_example
from switchcert.sampling import SamplingConfig, sample_hybrid
from switchcert.solver import solve_hybrid


@pytest.fixture(scope="session")
def ncs():
    return ncs_example()


@pytest.fixture(scope="session")
def ncs_hybrid_200(ncs):
    """One modest noise-free hybrid draw plus its solution, shared read-only."""
    samples = sample_hybrid(ncs, SamplingConfig(l=1, N=200, W=0.0, seed=11))
    return samples, solve_hybrid(samples)


def random_pd(rng, n):
    """Random well-conditioned positive definite matrix."""
    B = rng.standard_normal((n, n))
    return B @ B.T + 0.2 * np.eye(n)
