"""Expectation values, uncertainties, commutators, and the uncertainty bound.

Operators act on grid states under the uniform quadrature measure, so a
Hermitian matrix is Hermitian as an operator and the commutator and
variance identities hold to roundoff.  The momentum operator differentiates
spectrally (a transform round trip), which keeps commutator and
uncertainty-bound checks tight; its expectation defaults to the
momentum-space moment, with the position-space derivative route available
as an independent cross-check.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .constants import NATURAL, PhysicalConstants
from .core import Grid, Space, WaveFunction, inner_product, norm_squared
from .eigensolver import DiscreteHamiltonian
from .errors import (
    EdgeAmplitudeWarning,
    GridMismatchError,
    NormalizationWarning,
    ParameterError,
    SpaceTagError,
)
from .spectral import momentum_grid, to_momentum_space, to_position_space

HERMITICITY_TOL = 1e-12
_NORM_WARN = 1e-8


@dataclass(frozen=True, eq=False)
class Operator:
    """A Hermitian linear operator on position-space grid states."""

    kind: str
    grid: Grid
    constants: PhysicalConstants = NATURAL
    hamiltonian: DiscreteHamiltonian | None = None
    dense: np.ndarray | None = None

    def apply(self, psi: WaveFunction) -> WaveFunction:
        if psi.grid != self.grid:
            raise GridMismatchError("operator and state live on different grids")
        if psi.space is not Space.POSITION:
            raise SpaceTagError("operators act on position-space states")
        if self.kind == "position":
            return psi.with_values(self.grid.points * psi.values)
        if self.kind == "momentum":
            phi = to_momentum_space(psi, self.constants)
            p = momentum_grid(self.grid, self.constants).p
            return to_position_space(phi.with_values(p * phi.values), self.constants)
        if self.kind == "hamiltonian":
            return psi.with_values(self.hamiltonian.apply(psi.values))
        return psi.with_values(self.dense @ psi.values)

    def matrix(self) -> np.ndarray:
        """Dense n x n representation; intended for small grids."""
        if self.kind == "custom":
            return self.dense.copy()
        n = self.grid.n
        out = np.empty((n, n), dtype=np.complex128)
        basis = np.eye(n)
        with warnings.catch_warnings():
            # basis columns are not physical states; edge checks do not apply
            warnings.simplefilter("ignore", EdgeAmplitudeWarning)
            for j in range(n):
                out[:, j] = self.apply(WaveFunction(self.grid, basis[:, j])).values
        return out


def position_operator(grid: Grid) -> Operator:
    return Operator(kind="position", grid=grid)


def momentum_operator(grid: Grid, constants: PhysicalConstants = NATURAL) -> Operator:
    return Operator(kind="momentum", grid=grid, constants=constants)


def hamiltonian_operator(h: DiscreteHamiltonian) -> Operator:
    return Operator(kind="hamiltonian", grid=h.grid, hamiltonian=h)


def custom_operator(matrix: np.ndarray, grid: Grid) -> Operator:
    """Wrap an explicit matrix; rejects non-Hermitian input."""
    m = np.asarray(matrix, dtype=np.complex128)
    if m.shape != (grid.n, grid.n):
        raise GridMismatchError(f"matrix shape {m.shape} does not match grid size {grid.n}")
    defect = np.max(np.abs(m - m.conj().T))
    scale = max(1.0, float(np.max(np.abs(m))))
    if defect > HERMITICITY_TOL * scale:
        raise ParameterError(
            f"matrix is not Hermitian: max |A - A^dagger| = {defect:.2e}"
        )
    return Operator(kind="custom", grid=grid, dense=m)


def _check_normalized(psi: WaveFunction):
    n2 = norm_squared(psi)
    if abs(n2 - 1.0) > _NORM_WARN:
        warnings.warn(
            f"state norm-squared is {n2:.6g}; expectation values assume a "
            "normalized state",
            NormalizationWarning,
            stacklevel=3,
        )


def expectation(op: Operator, psi: WaveFunction) -> complex:
    """<psi|A psi> under the uniform quadrature measure.

    The momentum operator is special-cased to the momentum-space moment
    sum_j p_j |phi_j|^2 dp; all other kinds go through apply().
    """
    _check_normalized(psi)
    if op.kind == "momentum":
        if psi.grid != op.grid:
            raise GridMismatchError("operator and state live on different grids")
        phi = to_momentum_space(psi, op.constants)
        p = momentum_grid(op.grid, op.constants).p
        return complex(np.sum(p * np.abs(phi.values) ** 2) * phi.dp)
    return inner_product(psi, op.apply(psi))


def momentum_expectation_x_route(
    psi: WaveFunction, constants: PhysicalConstants = NATURAL
) -> complex:
    """<p> as the position-space integral of conj(psi) (hbar/i) dpsi/dx.

    The derivative is spectral, so this agrees with the momentum-space
    moment to roundoff for states negligible at the edges.
    """
    op = momentum_operator(psi.grid, constants)
    return inner_product(psi, op.apply(psi))


def uncertainty(op: Operator, psi: WaveFunction) -> float:
    """Root of the variance <(A - <A>)^2>, computed as ||(A - <A>) psi||."""
    _check_normalized(psi)
    if op.kind == "momentum":
        phi = to_momentum_space(psi, op.constants)
        p = momentum_grid(op.grid, op.constants).p
        density = np.abs(phi.values) ** 2
        mean = np.sum(p * density) * phi.dp
        var = np.sum((p - mean) ** 2 * density) * phi.dp
        return float(np.sqrt(max(var, 0.0)))
    mean = expectation(op, psi).real
    residual = op.apply(psi).values - mean * psi.values
    var = np.sum(np.abs(residual) ** 2) * psi.spacing
    return float(np.sqrt(max(var, 0.0)))


def commutator_expectation(op_a: Operator, op_b: Operator, psi: WaveFunction) -> complex:
    """<psi|[A, B] psi> for Hermitian A, B: equals <A psi|B psi> - <B psi|A psi>."""
    if op_a.grid != op_b.grid:
        raise GridMismatchError("operators live on different grids")
    a_psi = op_a.apply(psi)
    b_psi = op_b.apply(psi)
    ab = inner_product(a_psi, b_psi)
    return ab - ab.conjugate()


@dataclass(frozen=True)
class UncertaintyReport:
    lhs: float
    rhs: float
    satisfied: bool


_BOUND_SLACK = 1e-10


def uncertainty_bound_check(
    op_a: Operator, op_b: Operator, psi: WaveFunction
) -> UncertaintyReport:
    """Check dA * dB >= |<[A, B]>| / 2 with a small numerical slack."""
    lhs = uncertainty(op_a, psi) * uncertainty(op_b, psi)
    rhs = 0.5 * abs(commutator_expectation(op_a, op_b, psi))
    return UncertaintyReport(lhs=lhs, rhs=rhs, satisfied=bool(lhs + _BOUND_SLACK >= rhs))
