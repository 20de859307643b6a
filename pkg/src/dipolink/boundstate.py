"""q-spin bound-state model for the asymptotic end-to-end splitting.

A uniform dipole chain traps two nearly degenerate states at its ends; the
transfer time is set by their splitting dl = 2 <B|H|E>. Truncating |B> to its
first q sites and Taylor-expanding the cross matrix elements to first order
in the site offsets gives

    dl_pred = C * (Q / L^3 + a R / L^4),

with Q = (sum a_n)^2 and R = 3 sum a_n a_m (m + n - 2) computed from the
lowest eigenvector of the leading q x q corner of the chain Hamiltonian.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ExpansionInvalidError
from .lattice import CouplingSpec, DIPOLE, build_hamiltonian, uniform_chain
from .spectral import decompose


@dataclass(frozen=True)
class BoundStateModel:
    """Truncated end-state coefficients and their interference sums.

    ``coefficients[n-1]`` is a_n with a_1 > 0 and unit norm; ``source_n`` is
    the chain size whose Hamiltonian corner was diagonalized.
    """

    q: int
    coefficients: np.ndarray
    q_sum: float
    r_sum: float
    source_n: int

    def __post_init__(self):
        arr = np.asarray(self.coefficients, dtype=float)
        arr.setflags(write=False)
        object.__setattr__(self, "coefficients", arr)

    def to_json(self) -> str:
        return json.dumps(
            {
                "q": self.q,
                "source_n": self.source_n,
                "a": list(self.coefficients),
                "Q": self.q_sum,
                "R": self.r_sum,
            }
        )


@dataclass(frozen=True)
class SplittingPrediction:
    """First-order splitting and the timing figures it implies."""

    delta_lambda: float
    t_peak: float
    tau: float


def fit_bound_state(
    q: int, source_n: int = 14, coupling: CouplingSpec = DIPOLE
) -> BoundStateModel:
    """Fit the q-site end state from the corner of the source-chain Hamiltonian.

    a_n are the components of the lowest-eigenvalue eigenvector of the leading
    q x q principal submatrix of H(source_n), diagonal included as inherited
    (not re-derived for a q-spin chain).
    """
    if q < 1:
        raise DomainError(f"truncation order must be >= 1, got {q}")
    if q > source_n // 2:
        raise DomainError(
            f"truncation order {q} exceeds half the source chain ({source_n})"
        )
    h = build_hamiltonian(uniform_chain(source_n), coupling)
    corner = h.matrix[:q, :q]
    spec = decompose(corner)
    a = spec.eigenvectors[:, 0].copy()
    if a[0] < 0:
        a = -a
    q_sum = float(a.sum() ** 2)
    n_idx = np.arange(1, q + 1)
    r_sum = float(3.0 * a @ np.add.outer(n_idx, n_idx - 2) @ a)
    return BoundStateModel(q, a, q_sum, r_sum, source_n)


def predict_splitting(
    model: BoundStateModel,
    length: float,
    a: float = 1.0,
    coupling: CouplingSpec = DIPOLE,
) -> SplittingPrediction:
    """First-order splitting prediction for a chain of the given length.

    Returns dl_pred = C (Q / L^3 + a R / L^4) together with the peak time
    pi / dl_pred and tau = t_peak / L^3 it implies.
    """
    if length <= 0:
        raise DomainError(f"chain length must be positive, got {length}")
    c = coupling.c_const
    dl = c * (model.q_sum / length**3 + a * model.r_sum / length**4)
    if dl <= 0:
        raise ExpansionInvalidError(
            f"first-order splitting {dl:.3g} <= 0 at L = {length}; "
            "chain too short for the expansion"
        )
    t_peak = np.pi / dl
    return SplittingPrediction(dl, t_peak, t_peak / length**3)


def taylor_vs_exact_element(
    model: BoundStateModel,
    n: int,
    m: int,
    big_n: int,
    a: float = 1.0,
    coupling: CouplingSpec = DIPOLE,
) -> tuple[float, float]:
    """Exact vs first-order cross matrix element <n|H|N+1-m>.

    The exact element is C / (2 a^3 (N+1-m-n)^3); the first-order expansion
    in delta = m + n - 2 about the full end-to-end separation L = a (N - 1)
    is C / (2 L^3) + 3 C a delta / (2 L^4).
    """
    if not (1 <= n <= model.q and 1 <= m <= model.q):
        raise DomainError(f"(n, m) = ({n}, {m}) outside 1..{model.q}")
    sep = big_n + 1 - m - n
    if sep <= 0:
        raise DomainError(f"separation N+1-m-n = {sep} must be positive")
    c = coupling.c_const
    length = a * (big_n - 1)
    exact = c / (2.0 * (a * sep) ** 3)
    first_order = c / (2.0 * length**3) + 3.0 * c * a * (m + n - 2) / (
        2.0 * length**4
    )
    return exact, first_order
