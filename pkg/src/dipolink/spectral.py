"""Symmetric eigensolver, propagator and transfer fidelity.

The eigensolver is a cyclic Jacobi sweep: deterministic, dependency-free and
more than fast enough for the dense matrices (N up to a few hundred) this
package produces. Evolution is evaluated in the eigenbasis,

    f(t) = <out| e^{-iHt} |in> = sum_m <out|m><m|in> e^{-i E_m t},

and the averaged transfer fidelity is F = |f|/3 + |f|^2/6 + 1/2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError, NumericInputError, ShapeError
from .lattice import ExcitationHamiltonian

_JACOBI_TOL = 1e-12
_MAX_SWEEPS = 60


@dataclass(frozen=True)
class SpectralDecomposition:
    """Ascending eigenvalues and orthonormal eigenvectors (one per column)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        for name in ("eigenvalues", "eigenvectors"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n(self) -> int:
        return len(self.eigenvalues)

    @property
    def splitting(self) -> float:
        """Gap between the two lowest eigenvalues."""
        return self.eigenvalues[1] - self.eigenvalues[0]


@dataclass(frozen=True)
class SiteState:
    """Normalized state over the single-flip basis."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex)
        norm = np.linalg.norm(amp)
        if abs(norm - 1.0) > 1e-12:
            raise DomainError(f"state norm deviates from 1 by {abs(norm - 1.0):.3g}")
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)

    @property
    def n(self) -> int:
        return len(self.amplitudes)


def site_state(n: int, site: int) -> SiteState:
    """Basis state with the flip on the given site (1-based, matching |j>)."""
    if not 1 <= site <= n:
        raise DomainError(f"site {site} outside 1..{n}")
    amp = np.zeros(n)
    amp[site - 1] = 1.0
    return SiteState(amp)


def _jacobi(matrix: np.ndarray):
    """Cyclic Jacobi diagonalization of a symmetric matrix.

    Returns (eigenvalues, eigenvectors) unsorted; raises ConvergenceError if
    the off-diagonal Frobenius norm fails to drop below tolerance.
    """
    a = matrix.astype(float).copy()
    n = a.shape[0]
    v = np.eye(n)
    scale = np.linalg.norm(a)
    if scale == 0.0:
        return np.zeros(n), v
    threshold = _JACOBI_TOL * scale
    def off_norm():
        mask = ~np.eye(n, dtype=bool)
        return np.sqrt(np.sum(a[mask] ** 2))

    for _ in range(_MAX_SWEEPS):
        off = off_norm()
        if off <= threshold:
            return np.diag(a).copy(), v
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-30 * scale:
                    continue
                theta = 0.5 * (a[q, q] - a[p, p]) / apq
                t = np.sign(theta) if theta != 0 else 1.0
                t /= abs(theta) + np.sqrt(theta * theta + 1.0)
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rot = np.array([[c, -s], [s, c]])
                a[[p, q], :] = rot @ a[[p, q], :]
                a[:, [p, q]] = a[:, [p, q]] @ rot.T
                v[:, [p, q]] = v[:, [p, q]] @ rot.T
                # re-symmetrize the rotated pair to kill roundoff drift
                a[p, q] = a[q, p] = 0.5 * (a[p, q] + a[q, p])
    off = off_norm()
    raise ConvergenceError(
        f"Jacobi sweep cap reached, off-diagonal residual {off:.3g}", residual=off
    )


def decompose(h: ExcitationHamiltonian | np.ndarray) -> SpectralDecomposition:
    """Diagonalize a symmetric matrix into ascending eigenpairs.

    The returned eigenvectors follow a fixed sign convention: the component
    of largest magnitude in each vector is positive (ties broken by lowest
    index), so repeated calls are bit-identical.
    """
    matrix = h.matrix if isinstance(h, ExcitationHamiltonian) else np.asarray(h, float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise NumericInputError("matrix contains non-finite entries")
    vals, vecs = _jacobi(matrix)
    order = np.argsort(vals, kind="stable")
    vals = vals[order]
    vecs = vecs[:, order]
    for m in range(len(vals)):
        col = vecs[:, m]
        lead = int(np.argmax(np.abs(col) >= np.abs(col).max()))
        if col[lead] < 0:
            vecs[:, m] = -col
    return SpectralDecomposition(vals, vecs)


def _overlap_weights(
    spec: SpectralDecomposition, input_state: SiteState, output_state: SiteState
) -> np.ndarray:
    if input_state.n != spec.n or output_state.n != spec.n:
        raise ShapeError(
            f"state dimensions ({input_state.n}, {output_state.n}) "
            f"do not match operator dimension {spec.n}"
        )
    v = spec.eigenvectors
    return np.conj(v.T @ output_state.amplitudes) * (v.T @ input_state.amplitudes)


def propagator(
    spec: SpectralDecomposition,
    input_state: SiteState,
    output_state: SiteState,
    t: float,
) -> complex:
    """Transition amplitude <out| e^{-iHt} |in>."""
    w = _overlap_weights(spec, input_state, output_state)
    return complex(np.sum(w * np.exp(-1j * spec.eigenvalues * t)))


def propagator_abs_grid(
    spec: SpectralDecomposition,
    input_state: SiteState,
    output_state: SiteState,
    times: np.ndarray,
    chunk: int = 65536,
) -> np.ndarray:
    """|f(t)| on a time grid, evaluated in chunks to bound memory."""
    w = _overlap_weights(spec, input_state, output_state)
    times = np.asarray(times, dtype=float)
    out = np.empty(times.shape)
    e = spec.eigenvalues
    for start in range(0, len(times), chunk):
        ts = times[start : start + chunk]
        out[start : start + chunk] = np.abs(np.exp(-1j * np.outer(ts, e)) @ w)
    return out


def fidelity(f_abs: float) -> float:
    """Input-averaged transfer fidelity F = |f|/3 + |f|^2/6 + 1/2."""
    if f_abs < 0 or f_abs > 1 + 1e-9:
        raise DomainError(f"|f| = {f_abs} outside [0, 1]")
    f_abs = min(f_abs, 1.0)
    return f_abs / 3.0 + f_abs * f_abs / 6.0 + 0.5


_fidelity_vec = np.vectorize(fidelity, otypes=[float])


@dataclass(frozen=True)
class FidelityCurve:
    """F(t) sampled on an ascending time grid, with provenance metadata."""

    times: np.ndarray
    values: np.ndarray
    metadata: dict

    def __post_init__(self):
        for name in ("times", "values"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.times.shape != self.values.shape:
            raise ShapeError("times and values must have equal length")

    def to_csv(self) -> str:
        lines = ["t,F"]
        lines += [
            f"{t:.17g},{v:.17g}" for t, v in zip(self.times, self.values)
        ]
        return "\n".join(lines) + "\n"


def fidelity_curve(
    spec: SpectralDecomposition,
    input_state: SiteState,
    output_state: SiteState,
    t_max: float,
    n_steps: int,
    metadata: dict | None = None,
) -> FidelityCurve:
    """F(t) on a uniform grid t_k = k * t_max / (n_steps - 1)."""
    if t_max <= 0:
        raise DomainError(f"t_max must be positive, got {t_max}")
    if n_steps < 2:
        raise DomainError(f"need at least 2 steps, got {n_steps}")
    times = np.linspace(0.0, t_max, n_steps)
    f_abs = propagator_abs_grid(spec, input_state, output_state, times)
    return FidelityCurve(times, _fidelity_vec(f_abs), dict(metadata or {}))
