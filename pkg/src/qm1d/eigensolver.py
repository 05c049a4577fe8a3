"""Bound states of the time-independent problem on a grid.

The kinetic term is the symmetric 3-point stencil, so the discrete
Hamiltonian is a real symmetric tridiagonal matrix over the active points
(those not excluded by hard walls or the Dirichlet box boundary).  The
lowest eigenpairs come from bisection plus inverse iteration.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .constants import PhysicalConstants
from .core import Grid, WaveFunction, normalize
from .errors import ConfigurationError, NearDegeneracyWarning, ParameterError, SolverError
from .potentials import Potential, sample_on_grid

EDGE_DECAY_TOL = 1e-12
_GAP_WARN = 1e-10


@dataclass(frozen=True, eq=False)
class DiscreteHamiltonian:
    """Tridiagonal H over the active grid points.

    mask marks all excluded points (hard walls plus the two Dirichlet
    endpoints); wall_mask marks only the hard walls.  active_indices are the
    grid indices of the matrix rows, in order.  The off-diagonal coupling is
    zero across a removed interior point, which decouples the regions on
    either side of a wall.
    """

    grid: Grid
    diagonal: np.ndarray
    off_diagonal: np.ndarray
    mask: np.ndarray
    wall_mask: np.ndarray
    active_indices: np.ndarray
    potential_values: np.ndarray
    mass: float
    hbar: float

    @property
    def size(self) -> int:
        return len(self.diagonal)

    def apply(self, values: np.ndarray) -> np.ndarray:
        """H acting on a full-grid vector; excluded points map to zero."""
        out = np.zeros_like(values, dtype=np.complex128)
        idx = self.active_indices
        out[idx] = self.apply_active(values[idx])
        return out

    def apply_active(self, v: np.ndarray) -> np.ndarray:
        """H acting on a vector already restricted to the active points."""
        y = self.diagonal * v
        y[:-1] = y[:-1] + self.off_diagonal * v[1:]
        y[1:] = y[1:] + self.off_diagonal * v[:-1]
        return y


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Ascending eigenvalues with orthonormal eigenstates and solve residuals."""

    energies: np.ndarray
    states: list[WaveFunction]
    residuals: np.ndarray


def build_hamiltonian(
    grid: Grid,
    potential: Potential,
    mass: float,
    constants: PhysicalConstants,
) -> DiscreteHamiltonian:
    """Discretize -hbar^2/(2m) d2/dx2 + V with Dirichlet boundaries."""
    values, wall_mask = sample_on_grid(potential, grid)
    mask = wall_mask.copy()
    mask[0] = True
    mask[-1] = True
    active = np.flatnonzero(~mask)
    if active.size == 0:
        raise ConfigurationError("no active grid points remain after masking")
    dx = grid.dx
    c = constants.hbar**2 / (2.0 * mass * dx * dx)
    diagonal = 2.0 * c + values[active]
    adjacent = np.diff(active) == 1
    off_diagonal = np.where(adjacent, -c, 0.0)
    return DiscreteHamiltonian(
        grid=grid,
        diagonal=diagonal,
        off_diagonal=off_diagonal,
        mask=mask,
        wall_mask=wall_mask,
        active_indices=active,
        potential_values=values,
        mass=mass,
        hbar=constants.hbar,
    )


def _fix_sign(full: np.ndarray) -> np.ndarray:
    """Deterministic orientation: first interior extremum positive."""
    v = full
    turning = np.flatnonzero((v[1:-1] - v[:-2]) * (v[2:] - v[1:-1]) < 0.0)
    pivot = turning[0] + 1 if turning.size else int(np.argmax(np.abs(v)))
    return -full if v[pivot] < 0.0 else full


def _check_box_truncation(h: DiscreteHamiltonian, states: list[WaveFunction]):
    """Artificial Dirichlet edges must not clip the returned states.

    A masked neighbour that is not a hard wall is a box-truncation edge;
    the state amplitude just inside it has to be negligible.
    """
    edges = []
    first, last = h.active_indices[0], h.active_indices[-1]
    if not h.wall_mask[first - 1]:
        edges.append(first)
    if not h.wall_mask[last + 1]:
        edges.append(last)
    for n, psi in enumerate(states):
        for i in edges:
            amp = abs(psi.values[i])
            if amp > EDGE_DECAY_TOL:
                raise ConfigurationError(
                    f"state {n} has amplitude {amp:.2e} at the box edge "
                    f"(tolerance {EDGE_DECAY_TOL:.0e}); enlarge the domain"
                )


def solve_bound_states(h: DiscreteHamiltonian, count: int) -> Spectrum:
    """Lowest `count` eigenpairs, quadrature-normalized, sign-fixed.

    Raises if the requested states do not fit the matrix or are clipped by
    an artificial box edge.
    """
    if count < 1:
        raise ParameterError(f"need at least one state, got count={count}")
    if count > h.size:
        raise ParameterError(
            f"requested {count} states but the operator has only {h.size} points"
        )
    try:
        energies, vectors = eigh_tridiagonal(
            h.diagonal, h.off_diagonal, select="i", select_range=(0, count - 1)
        )
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise SolverError(f"tridiagonal eigensolve failed: {exc}") from exc

    gaps = np.diff(energies)
    if gaps.size and gaps.min() < _GAP_WARN:
        warnings.warn(
            f"eigenvalue gap {gaps.min():.2e} is below {_GAP_WARN:.0e}; "
            "near-degenerate pair returned as-is",
            NearDegeneracyWarning,
            stacklevel=2,
        )

    states = []
    residuals = np.empty(count)
    for j in range(count):
        v = vectors[:, j]
        hv = h.apply_active(v)
        residuals[j] = np.linalg.norm(hv - energies[j] * v) / np.linalg.norm(v)
        full = np.zeros(h.grid.n)
        full[h.active_indices] = v
        full = _fix_sign(full)
        states.append(normalize(WaveFunction(h.grid, full)))

    _check_box_truncation(h, states)
    return Spectrum(energies=energies, states=states, residuals=residuals)
