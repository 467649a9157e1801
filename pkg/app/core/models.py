"""
Domain models.
"""
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from core.exceptions import DomainError


SUPPORTED_DIMENSIONS = (1, 2, 3)
MIN_GRID_POINTS = 64


def _require(condition, message):
    """Raise a DomainError with message unless condition holds."""
    if not condition:
        raise DomainError(message)


def _is_power_of_two(n):
    return n > 0 and n & (n - 1) == 0


def _coarsest_grid(n):
    """Undo refinements n -> 2n + 1 down to the base grid."""
    while not _is_power_of_two(n) and n % 2 == 1 and n > MIN_GRID_POINTS:
        n = (n - 1) // 2
    return n


@dataclass(frozen=True)
class OscillatorParams:
    """Stiffness and spatial dimension of the oscillator."""
    kappa: float
    d: int = 1

    def __post_init__(self):
        _require(np.isfinite(self.kappa) and self.kappa >= 0,
                 f'kappa must be finite and >= 0, got {self.kappa!r}.')
        _require(self.d in SUPPORTED_DIMENSIONS,
                 f'd must be one of {SUPPORTED_DIMENSIONS}, got {self.d!r}.')

    @property
    def ground_energy(self):
        """Bottom of the whole-space spectrum, d*kappa/2."""
        return self.d * self.kappa / 2.0


@dataclass(frozen=True)
class TimePoint:
    """Semigroup time, strictly positive."""
    t: float

    def __post_init__(self):
        _require(np.isfinite(self.t) and self.t > 0,
                 f't must be finite and > 0, got {self.t!r}.')


@dataclass(frozen=True)
class WidenFactor:
    """Widening parameter of the Mehler kernel; 1 is the plain kernel."""
    gamma: float = 1.0

    def __post_init__(self):
        _require(np.isfinite(self.gamma) and self.gamma > 0,
                 f'gamma must be finite and > 0, got {self.gamma!r}.')


@dataclass(frozen=True)
class BoxGeometry:
    """Cube of side L centered at the origin."""
    L: float

    def __post_init__(self):
        _require(np.isfinite(self.L) and self.L > 0,
                 f'L must be finite and > 0, got {self.L!r}.')

    @property
    def half(self):
        return self.L / 2.0

    def contains(self, points):
        """True where every coordinate lies in the closed box."""
        points = np.asarray(points, dtype=float)
        return np.all(np.abs(points) <= self.half * (1 + 1e-14), axis=-1)


@dataclass(frozen=True)
class HermiteBasisEval:
    """Normalized Hermite functions phi_0..phi_S evaluated at one point."""
    order_max: int
    values: np.ndarray = field(compare=False)

    def __getitem__(self, s):
        return self.values[s]

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class DirichletOscillatorSpec:
    """Oscillator restricted to a box with Dirichlet walls."""
    box: BoxGeometry
    kappa: float

    def __post_init__(self):
        _require(np.isfinite(self.kappa) and self.kappa >= 0,
                 f'kappa must be finite and >= 0, got {self.kappa!r}.')

    @classmethod
    def create(cls, L, kappa):
        return cls(box=BoxGeometry(L), kappa=kappa)


@dataclass(frozen=True)
class Discretization:
    """Uniform interior grid for the finite-difference solver."""
    n: int = 1024
    scheme: str = 'central-2nd-order'

    SCHEMES = ('central-2nd-order',)

    def __post_init__(self):
        base = _coarsest_grid(int(self.n)) if int(self.n) == self.n else 0
        _require(
            _is_power_of_two(base) and base >= MIN_GRID_POINTS,
            f'n must be a power of two >= {MIN_GRID_POINTS} or a '
            f'refinement 2n + 1 of one, got {self.n!r}.')
        _require(self.scheme in self.SCHEMES,
                 f'Unknown scheme {self.scheme!r}.')

    def spacing(self, L):
        return L / (self.n + 1)

    def refined(self):
        """Grid with exactly half the spacing (nodes of self are kept)."""
        return Discretization(n=2 * self.n + 1, scheme=self.scheme)


@dataclass(frozen=True)
class EigenSpectrum:
    """Lowest Dirichlet-oscillator eigenvalues with error estimates."""
    values: np.ndarray = field(compare=False)
    errors: np.ndarray = field(compare=False)
    converged: bool = True
    spec: Optional[DirichletOscillatorSpec] = None
    disc: Optional[Discretization] = None

    @property
    def count(self):
        return len(self.values)

    @property
    def ground(self):
        return float(self.values[0])

    @property
    def ground_lower(self):
        """Ground state minus its error bar."""
        return float(self.values[0] - self.errors[0])


@dataclass(frozen=True)
class TraceReport:
    """A trace with its truncation and discretization error bounds."""
    value: float
    truncation_error: float = 0.0
    eigencount_used: int = 0
    discretization_error: float = 0.0

    @property
    def error(self):
        return self.truncation_error + self.discretization_error


@dataclass(frozen=True)
class TraceDifference:
    """Tr_inf - Tr_L split into its interior (y) and exterior (z) parts."""
    delta: float
    y_term: float
    z_term: float
    err_delta: float
    err_y: float
    err_z: float
    noise_floor: float
    below_noise_floor: bool


@dataclass(frozen=True)
class TheoremBoundInput:
    """Arguments of the Gaussian-decay bound on the trace difference."""
    t: float
    L: float
    kappa: float
    d: int = 1
    constant: float = 1.0

    def __post_init__(self):
        for name in ('t', 'L', 'kappa', 'constant'):
            value = getattr(self, name)
            _require(np.isfinite(value) and value > 0,
                     f'{name} must be finite and > 0, got {value!r}.')
        _require(self.d in SUPPORTED_DIMENSIONS,
                 f'd must be one of {SUPPORTED_DIMENSIONS}, got {self.d!r}.')


@dataclass(frozen=True)
class TheoremCheck:
    """Outcome of comparing one trace difference with the bound."""
    holds: bool
    delta: float
    rhs: float
    margin: float
    constant: float


@dataclass(frozen=True)
class DecayFitReport:
    """Least-squares Gaussian decay rate of a trace-difference sweep."""
    fitted_rate: float
    theorem_rate: float
    intercept: float
    residual_rms: float
    points_used: int
    expected_rate: float
    mean_ordinate: float
    abscissa: str = 'gaussian'

    @property
    def beats_theorem(self):
        return self.fitted_rate >= self.theorem_rate


@dataclass(frozen=True)
class EnsembleParams:
    """Grand-canonical inverse temperature and fugacity."""
    beta: float
    z: float

    def __post_init__(self):
        _require(np.isfinite(self.beta) and self.beta > 0,
                 f'beta must be finite and > 0, got {self.beta!r}.')
        _require(np.isfinite(self.z) and self.z > 0,
                 f'z must be finite and > 0, got {self.z!r}.')


@dataclass(frozen=True)
class NumberSeriesReport:
    """Truncated grand-canonical particle-number series."""
    value: float
    terms_used: int
    tail_bound: float
    discretization_error: float = 0.0

    @property
    def error(self):
        return self.tail_bound + self.discretization_error


@dataclass(frozen=True)
class FiniteSizeReport:
    """Gaussian finite-size fits of the partition function and N."""
    partition_rate: float
    number_rate: float
    partition_rms_gaussian: float
    partition_rms_exponential: float
    number_rms_gaussian: float
    number_rms_exponential: float
    points_used: int

    @property
    def gaussian_preferred(self):
        return (self.partition_rms_gaussian < self.partition_rms_exponential
                and self.number_rms_gaussian < self.number_rms_exponential)


@dataclass(frozen=True)
class DenseGridModel:
    """Full eigen-decomposition of the finite-difference box Hamiltonian."""
    L: float
    kappa: float
    n: int
    h: float
    values: np.ndarray = field(compare=False)
    vectors: np.ndarray = field(compare=False)

    @property
    def nodes(self):
        return -self.L / 2.0 + self.h * np.arange(1, self.n + 1)

    def orthonormality_defect(self):
        """max |V^T V - I| for the grid eigenvectors."""
        gram = self.vectors.T @ self.vectors
        return float(np.max(np.abs(gram - np.eye(self.n))))


@dataclass(frozen=True)
class EstimateOutcome:
    """Result of one pointwise inequality over a grid."""
    name: str
    holds: bool
    constant: Optional[float] = None
    worst_ratio: float = 0.0
    worst_point: Tuple = ()


@dataclass(frozen=True)
class SweepConfig:
    """Parameter grids and output settings of a sweep."""
    L_values: Tuple[float, ...]
    t_values: Tuple[float, ...]
    kappa_values: Tuple[float, ...]
    d: int = 1
    tol: float = 1e-10
    n: int = 1024
    output: Optional[str] = None
    fmt: str = 'csv'
    jobs: int = 1

    def points(self):
        """Grid points in a fixed (kappa, t, L) order."""
        return [(L, kappa, t, self.d)
                for kappa in self.kappa_values
                for t in self.t_values
                for L in self.L_values]
