"""Shared oracles for the test suite.

These deliberately do not reuse the package's construction or evolution code:
the full 2^N Hamiltonian is assembled from Pauli operators, and time
evolution is integrated with a classic RK4 stepper on the Schrodinger
equation.
"""

from __future__ import annotations

import numpy as np
import pytest

SX = np.array([[0.0, 1.0], [1.0, 0.0]]) / 2.0
SY = np.array([[0.0, -1.0j], [1.0j, 0.0]]) / 2.0
SZ = np.array([[1.0, 0.0], [0.0, -1.0]]) / 2.0


def _embed(op: np.ndarray, site: int, n: int) -> np.ndarray:
    """op acting on one site of an n-spin register (site 0 = leftmost)."""
    full = np.eye(1)
    for k in range(n):
        full = np.kron(full, op if k == site else np.eye(2))
    return full


def full_dipole_hamiltonian(positions, c_const: float = 2.0) -> np.ndarray:
    """Brute-force 2^N dipolar Hamiltonian sum_{k<l} (C/r^3)(S.S - 3 Sz Sz)."""
    positions = np.asarray(positions, dtype=float)
    n = len(positions)
    dim = 2**n
    h = np.zeros((dim, dim), dtype=complex)
    for k in range(n - 1):
        for l in range(k + 1, n):
            r = abs(positions[l] - positions[k])
            j = c_const / r**3
            h += j * (
                _embed(SX, k, n) @ _embed(SX, l, n)
                + _embed(SY, k, n) @ _embed(SY, l, n)
                - 2.0 * _embed(SZ, k, n) @ _embed(SZ, l, n)
            )
    return h


def full_heisenberg_hamiltonian(positions, c_const: float = 2.0) -> np.ndarray:
    """Brute-force 2^N isotropic Heisenberg chain, couplings C/r^3 per bond."""
    positions = np.asarray(positions, dtype=float)
    n = len(positions)
    dim = 2**n
    h = np.zeros((dim, dim), dtype=complex)
    for k in range(n - 1):
        r = positions[k + 1] - positions[k]
        j = c_const / r**3
        h += j * (
            _embed(SX, k, n) @ _embed(SX, k + 1, n)
            + _embed(SY, k, n) @ _embed(SY, k + 1, n)
            + _embed(SZ, k, n) @ _embed(SZ, k + 1, n)
        )
    return h


def one_flip_block(h_full: np.ndarray, n: int) -> np.ndarray:
    """Restrict a 2^N matrix to the single-flip states, ordered by flip site.

    All-up register is index 0; flipping site j (0-based, leftmost first)
    sets bit n-1-j of the basis index.
    """
    idx = [1 << (n - 1 - j) for j in range(n)]
    return h_full[np.ix_(idx, idx)].real


def ground_index() -> int:
    """Index of the fully polarized (all spins up) basis state."""
    return 0


def rk4_evolve(matrix: np.ndarray, psi0: np.ndarray, t_final: float, dt: float):
    """Integrate i dpsi/dt = H psi from 0 to t_final with fixed-step RK4."""
    psi = psi0.astype(complex).copy()
    steps = int(np.ceil(t_final / dt))
    step = t_final / steps if steps else 0.0

    def rhs(p):
        return -1j * (matrix @ p)

    for _ in range(steps):
        k1 = rhs(psi)
        k2 = rhs(psi + 0.5 * step * k1)
        k3 = rhs(psi + 0.5 * step * k2)
        k4 = rhs(psi + step * k3)
        psi = psi + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return psi


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260825)
