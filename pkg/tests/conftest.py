"""Shared fixtures and helpers for the test suite."""

import numpy as np
import pytest

from z2dfl import DensityMatrix


def random_density(dim: int, rng: np.random.Generator) -> DensityMatrix:
    """A full-rank valid density matrix drawn from a Wishart-like ensemble."""
    A = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    mat = A @ A.conj().T
    return DensityMatrix(mat / mat.trace())


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
