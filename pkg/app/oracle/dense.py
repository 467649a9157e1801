"""
Brute-force reference computations on dense finite-difference grids.

They share no code with the tridiagonal solver or the closed forms.
"""
import logging
import math

import numpy as np
from scipy import linalg

from core.exceptions import DomainError
from core.models import (
    DenseGridModel,
    OscillatorParams,
    TimePoint,
    TraceReport,
)
from kernels import kernels
from kernels.quadrature import (
    GAUSSIAN_SPAN,
    integrate_pieces,
    whole_line_radius,
)

logger = logging.getLogger(__name__)

MAX_POINTS_1D = 2048
MAX_POINTS_2D = 48
DEFAULT_2D_LADDER = (32, 40, 48)


def _time(t):
    return TimePoint(float(t)).t


def _hamiltonian(L, kappa, n):
    h = L / (n + 1)
    nodes = -L / 2.0 + h * np.arange(1, n + 1)
    matrix = np.diag(1.0 / h ** 2 + 0.5 * kappa ** 2 * nodes ** 2)
    off = np.full(n - 1, -0.5 / h ** 2)
    matrix += np.diag(off, 1) + np.diag(off, -1)
    return matrix, h


def build_dense_model(L, kappa, n):
    """Full eigen-decomposition of the n-point box Hamiltonian."""
    if not 1 <= n <= MAX_POINTS_1D:
        raise DomainError(
            f'Dense 1D models take 1 <= n <= {MAX_POINTS_1D}, got {n}.'
        )
    matrix, h = _hamiltonian(L, kappa, n)
    values, vectors = linalg.eigh(matrix)
    logger.debug('dense model L=%g kappa=%g n=%d', L, kappa, n)
    return DenseGridModel(L=L, kappa=kappa, n=n, h=h, values=values,
                          vectors=vectors)


def oracle_kernel_diag(model, t):
    """Box kernel diagonal sum_k exp(-t e_k) v_k(x_i)^2 / h on the nodes."""
    t = _time(t)
    weights = np.exp(-t * model.values)
    return (model.vectors ** 2) @ weights / model.h


def oracle_trace(model, t):
    """Trapezoid integral of the diagonal; the walls contribute zero."""
    return float(model.h * np.sum(oracle_kernel_diag(model, t)))


def _richardson(coarse, fine):
    extrapolated = (4.0 * fine - coarse) / 3.0
    return extrapolated, np.abs(extrapolated - fine) / 3.0


def oracle_kernel_diag_extrapolated(t, spec, n):
    """Diagonal on the nodes of grid n, extrapolated with grid 2n + 1.

    Returns (nodes, values, errors).
    """
    coarse = build_dense_model(spec.box.L, spec.kappa, n)
    fine = build_dense_model(spec.box.L, spec.kappa, 2 * n + 1)
    # every second node of the fine grid is a node of the coarse grid
    values, errors = _richardson(oracle_kernel_diag(coarse, t),
                                 oracle_kernel_diag(fine, t)[1::2])
    return coarse.nodes, values, errors


def oracle_trace_extrapolated(t, spec, n):
    """Box trace from dense grids n and 2n + 1 with an error estimate."""
    coarse = oracle_trace(build_dense_model(spec.box.L, spec.kappa, n), t)
    fine = oracle_trace(
        build_dense_model(spec.box.L, spec.kappa, 2 * n + 1), t)
    value, error = _richardson(coarse, fine)
    return TraceReport(value=float(value), discretization_error=float(error))


def _axes(n):
    if np.ndim(n) == 0:
        return (int(n), int(n))
    return tuple(int(m) for m in n)


def oracle_trace_2d(L, kappa, t, n):
    """Trace of the dense two-dimensional box model.

    n is the per-axis grid size, an int or a pair. The Hamiltonian is the
    Kronecker sum of the axis Hamiltonians, diagonalized as a whole.
    """
    t = _time(t)
    axes = _axes(n)
    if any(not 1 <= m <= MAX_POINTS_2D for m in axes):
        raise DomainError(
            f'Dense 2D models take at most {MAX_POINTS_2D} points per '
            f'axis, got {axes}.'
        )
    first, _ = _hamiltonian(L, kappa, axes[0])
    second, _ = _hamiltonian(L, kappa, axes[1])
    matrix = (np.kron(first, np.eye(axes[1]))
              + np.kron(np.eye(axes[0]), second))
    values = linalg.eigvalsh(matrix)
    return float(np.sum(np.exp(-t * values)))


def oracle_trace_2d_extrapolated(L, kappa, t, ladder=DEFAULT_2D_LADDER):
    """Zero-spacing limit of the 2D trace from an h^2, h^4 fit.

    The error estimate compares the fit with the h^2 extrapolation of
    the two finest grids.
    """
    if len(ladder) < 3:
        raise DomainError('The 2D extrapolation needs three grid sizes.')
    spacing = np.array([L / (m + 1) for m in ladder])
    traces = np.array([oracle_trace_2d(L, kappa, t, m) for m in ladder])
    design = np.column_stack([np.ones_like(spacing), spacing ** 2,
                              spacing ** 4])
    coefficients, *_ = np.linalg.lstsq(design, traces, rcond=None)
    h1, h2 = spacing[-2:]
    t1, t2 = traces[-2:]
    quadratic = (h1 ** 2 * t2 - h2 ** 2 * t1) / (h1 ** 2 - h2 ** 2)
    value = float(coefficients[0])
    return TraceReport(value=value,
                       discretization_error=abs(value - quadratic))


def free_box_trace(t, box, d=1):
    """sum_k exp(-t k^2 pi^2 / (2 L^2)) to the d-th power, for kappa = 0."""
    t = _time(t)
    # terms beyond exp(-40) are below rounding
    count = int(math.ceil(box.L / math.pi * math.sqrt(80.0 / t))) + 1
    k = np.arange(1, count + 1)
    value = float(np.sum(np.exp(-t * k ** 2 * math.pi ** 2
                                / (2.0 * box.L ** 2))))
    return value ** d


def quadrature_z_term(L, kappa, t, tol=1e-12):
    """Mehler diagonal integrated over |x| > L/2 by adaptive quadrature."""
    t = _time(t)
    if L < 0 or not kappa > 0:
        raise DomainError(
            f'Need L >= 0 and kappa > 0, got L={L}, kappa={kappa}.'
        )
    p = OscillatorParams(kappa, 1)
    half_line = integrate_pieces(
        lambda x: kernels.mehler_kernel(x, x, t, p),
        L / 2.0, L / 2.0 + whole_line_radius(kappa, t),
        pieces=int(GAUSSIAN_SPAN), tol=tol / 2.0,
    )
    return 2.0 * half_line
