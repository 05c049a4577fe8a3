"""Exception hierarchy shared by all qm1d modules."""


class QmError(Exception):
    """Base class for all qm1d errors."""


class ConfigurationError(QmError):
    """Degenerate domain, fully masked grid, or otherwise unusable setup."""


class ParameterError(QmError, ValueError):
    """A physical parameter is outside its admissible range."""


class GridMismatchError(QmError):
    """Two states (or a state and an operator) live on different grids."""


class SpaceTagError(QmError):
    """An operation received a wavefunction in the wrong representation."""


class DegenerateStateError(QmError):
    """A zero-norm state where a normalizable one is required."""


class SolverError(QmError):
    """A numerical routine failed to converge or produced invalid output."""


class UnsupportedMethodError(QmError):
    """The requested method cannot handle this potential or configuration."""


class EdgeAmplitudeError(QmError):
    """Probability reached the grid edge; results would wrap or leak."""


class EdgeAmplitudeWarning(UserWarning):
    """A state is not negligible at the grid edges; accuracy degrades."""


class NormalizationWarning(UserWarning):
    """An expectation value was requested on a state with norm far from 1."""


class NearDegeneracyWarning(UserWarning):
    """Two eigenvalues are closer than the resolution of the solver."""
