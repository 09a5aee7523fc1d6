"""Shared test utilities."""

import numpy as np

from loqc import FockState


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar-ish random unitary via QR with phase fixing."""
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_state(rng: np.random.Generator, num_modes: int, max_photons: int, terms: int = 4) -> FockState:
    amps = {}
    for _ in range(terms):
        occ = tuple(int(n) for n in rng.integers(0, max_photons + 1, num_modes))
        amps[occ] = complex(rng.normal(), rng.normal())
    return FockState(num_modes, amps)


def state_distance(a: FockState, b: FockState) -> float:
    return (a - b).norm()
