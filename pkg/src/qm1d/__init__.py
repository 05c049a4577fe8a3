"""qm1d: a one-dimensional quantum mechanics engine.

Stationary states by finite differences, scattering by transfer matrices,
time evolution by Crank-Nicolson and split-step propagators, and a layer of
closed-form results everything is validated against.
"""

__version__ = "0.1.0"

from .constants import NATURAL, PhysicalConstants, si_constants
from .core import (
    Grid,
    Space,
    WaveFunction,
    continuity_residual,
    inner_product,
    make_grid,
    norm_squared,
    normalize,
    probability_current,
)
from .spectral import MomentumGrid, momentum_grid, to_momentum_space, to_position_space
from .potentials import (
    Barrier,
    Harmonic,
    InfiniteWell,
    LinearRamp,
    PiecewiseConstant,
    Potential,
    Sampled,
    evaluate,
    sample_on_grid,
)
from .analytic import (
    GaussianPacketParams,
    ScatteringResult,
    barrier_scattering,
    blackbody_density,
    bohr_frequency,
    de_broglie_wavelength,
    free_packet_xt,
    gaussian_packet_x,
    hermite,
    oscillator_energy,
    oscillator_state,
    packet_spectral_width,
    packet_width,
    photoelectric_kinetic,
    sommerfeld_wilson_oscillator_energy,
    well_energy,
    well_state,
)
from .eigensolver import DiscreteHamiltonian, Spectrum, build_hamiltonian, solve_bound_states
from .scattering import RegionWave, region_waves, transfer_scattering, transmission_sweep
from .evolution import (
    EvolutionConfig,
    Trajectory,
    crank_nicolson_step,
    evolve,
    split_step,
)
from .observables import (
    Operator,
    UncertaintyReport,
    commutator_expectation,
    custom_operator,
    expectation,
    hamiltonian_operator,
    momentum_expectation_x_route,
    momentum_operator,
    position_operator,
    uncertainty,
    uncertainty_bound_check,
)
from . import errors
