"""Geometries and single-excitation Hamiltonians for dipole-coupled spin arrays.

A spin array is either an open chain with arbitrary (strictly increasing)
positions, or a uniform ring. Within the one-spin-flip sector the Hamiltonian
is a dense real symmetric N x N matrix whose off-diagonal elements fall off
as the inverse cube of the inter-site distance:

    H[i, j] = C / (2 |r_j - r_i|^3)          (i != j)
    H[j, j] = E0 + C * sum_{i != j} 1 / |r_j - r_i|^3

with E0 = -(C/2) * sum_{pairs} 1 / |r_k - r_l|^3 the energy of the fully
polarized state.

The nearest-neighbour comparison model is the isotropic Heisenberg chain
restricted to the same sector, with its hopping matched to the dipole
nearest-neighbour element: off-diagonal C / (2 r^3) on adjacent pairs only,
and an on-site term of the same magnitude per adjacent bond (half the dipole
diagonal coefficient, because the Heisenberg interaction lacks the -3 SzSz
anisotropy). On rings the two models differ only by the long-range tail;
their nn parts are identical up to a diagonal shift.

Positions are measured in units of the nearest-neighbour spacing a; with the
default C = 2 the nearest-neighbour coupling C/(2 a^3) equals 1 at a = 1.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidGeometryError


class Topology(enum.Enum):
    CHAIN = "chain"
    RING = "ring"


class CouplingModel(enum.Enum):
    DIPOLE = "dipole"
    NEAREST_NEIGHBOUR = "nn"


@dataclass(frozen=True)
class CouplingSpec:
    """Interaction model and overall coupling constant C (energy * length^3)."""

    model: CouplingModel = CouplingModel.DIPOLE
    c_const: float = 2.0

    def __post_init__(self):
        if not self.c_const > 0:
            raise ValueError(f"coupling constant must be positive, got {self.c_const}")


DIPOLE = CouplingSpec(CouplingModel.DIPOLE)
NEAREST_NEIGHBOUR = CouplingSpec(CouplingModel.NEAREST_NEIGHBOUR)


@dataclass(frozen=True)
class Geometry:
    """Spatial description of the spin array.

    For a chain, ``positions`` are arbitrary strictly increasing coordinates.
    For a ring, sites are the integers 0..N-1 on a circle of circumference N
    and distances are minimal-image arc lengths.
    """

    topology: Topology
    positions: tuple = field(default_factory=tuple)

    def __post_init__(self):
        pos = tuple(float(p) for p in self.positions)
        object.__setattr__(self, "positions", pos)
        if len(pos) < 2:
            raise InvalidGeometryError("need at least 2 sites")
        if self.topology is Topology.CHAIN:
            if any(b <= a for a, b in zip(pos, pos[1:])):
                raise InvalidGeometryError(
                    "chain positions must be strictly increasing"
                )
        elif len(pos) < 3:
            raise InvalidGeometryError("a ring needs at least 3 sites")

    @property
    def n(self) -> int:
        return len(self.positions)

    @property
    def length(self) -> float:
        """End-to-end extent; defined for chains only."""
        if self.topology is not Topology.CHAIN:
            raise InvalidGeometryError("length is defined for chains only")
        return self.positions[-1] - self.positions[0]

    @property
    def mean_spacing(self) -> float:
        """Average nearest-neighbour spacing (equals a for uniform arrays)."""
        if self.topology is Topology.RING:
            return 1.0
        return self.length / (self.n - 1)

    def to_json(self) -> str:
        return json.dumps(
            {"topology": self.topology.value, "positions": list(self.positions)}
        )

    @classmethod
    def from_json(cls, text: str) -> "Geometry":
        data = json.loads(text)
        return cls(Topology(data["topology"]), tuple(data["positions"]))


def uniform_chain(n: int, length: float | None = None) -> Geometry:
    """Uniform chain of n spins; unit spacing unless a total length is given."""
    if n < 2:
        raise InvalidGeometryError(f"need at least 2 sites, got {n}")
    pos = np.arange(n, dtype=float)
    if length is not None:
        pos *= length / (n - 1)
    return Geometry(Topology.CHAIN, tuple(pos))


def ring(n: int) -> Geometry:
    if n < 3:
        raise InvalidGeometryError(f"a ring needs at least 3 sites, got {n}")
    return Geometry(Topology.RING, tuple(range(n)))


@dataclass(frozen=True)
class ExcitationHamiltonian:
    """Dense symmetric matrix in the single-flip basis, plus the ground energy.

    ``matrix[i, j]`` is the element between flip states i and j; the diagonal
    includes ``ground_energy`` as a uniform offset plus the site-dependent
    flip cost. The originating geometry and coupling are kept for downstream
    metrics (chain length, spacing).
    """

    matrix: np.ndarray
    ground_energy: float
    geometry: Geometry
    coupling: CouplingSpec

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def onsite_energies(self) -> np.ndarray:
        return np.diag(self.matrix).copy()


def _pair_distances(geometry: Geometry) -> np.ndarray:
    pos = np.asarray(geometry.positions)
    if geometry.topology is Topology.CHAIN:
        return np.abs(pos[:, None] - pos[None, :])
    n = geometry.n
    sep = np.abs(pos[:, None] - pos[None, :])
    return np.minimum(sep, n - sep)


def _neighbour_mask(geometry: Geometry, coupling: CouplingSpec) -> np.ndarray:
    """True where a pair interacts under the given coupling model."""
    n = geometry.n
    idx = np.arange(n)
    off = ~np.eye(n, dtype=bool)
    if coupling.model is CouplingModel.DIPOLE:
        return off
    sep = np.abs(idx[:, None] - idx[None, :])
    if geometry.topology is Topology.RING:
        sep = np.minimum(sep, n - sep)
    return off & (sep == 1)


def build_hamiltonian(
    geometry: Geometry, coupling: CouplingSpec = DIPOLE
) -> ExcitationHamiltonian:
    """Single-excitation Hamiltonian for any geometry and coupling model."""
    dist = _pair_distances(geometry)
    mask = _neighbour_mask(geometry, coupling)
    inv3 = np.zeros_like(dist)
    inv3[mask] = 1.0 / dist[mask] ** 3

    c = coupling.c_const
    # Heisenberg nn bonds carry half the dipole on-site coefficient.
    diag_coef = c if coupling.model is CouplingModel.DIPOLE else 0.5 * c
    off = 0.5 * c * inv3
    ground = -0.25 * diag_coef * inv3.sum()  # k<l pair sum, counted twice
    h = off.copy()
    np.fill_diagonal(h, ground + diag_coef * inv3.sum(axis=1))
    return ExcitationHamiltonian(h, ground, geometry, coupling)


def build_chain_hamiltonian(
    geometry: Geometry, coupling: CouplingSpec = DIPOLE
) -> ExcitationHamiltonian:
    if geometry.topology is not Topology.CHAIN:
        raise InvalidGeometryError("expected a chain geometry")
    return build_hamiltonian(geometry, coupling)


def build_ring_hamiltonian(
    n: int, coupling: CouplingSpec = DIPOLE
) -> ExcitationHamiltonian:
    return build_hamiltonian(ring(n), coupling)


def ring_bloch_energies(n: int, coupling: CouplingSpec = DIPOLE) -> np.ndarray:
    """Analytic ring spectrum relative to the common diagonal constant.

    E_m = C * sum_j w_j cos(2 pi m j / n) / j^3 over j = 1 .. n//2, where the
    antipodal term j = n/2 (even n only) carries weight 1/2 because it is a
    single site, not a pair.
    """
    if n < 3:
        raise InvalidGeometryError(f"a ring needs at least 3 sites, got {n}")
    js = np.arange(1, n // 2 + 1)
    weights = np.ones_like(js, dtype=float)
    if n % 2 == 0:
        weights[-1] = 0.5
    if coupling.model is CouplingModel.NEAREST_NEIGHBOUR:
        weights[js > 1] = 0.0
    m = np.arange(n)
    phases = np.cos(2.0 * np.pi * np.outer(m, js) / n)
    return coupling.c_const * phases @ (weights / js.astype(float) ** 3)
