"""
Pointwise kernel estimates checked on random grids.

Each estimate is a ratio lhs / rhs without its constant. The worst of
the sampled points is refined with Nelder-Mead inside the sampling box,
and the largest ratio found is the smallest constant that works there.
Estimates with a known constant of one must stay below 1 + tol.
"""
import logging
import math
from collections import namedtuple

import numpy as np
from scipy.optimize import minimize

from core.models import (
    BoxGeometry,
    Discretization,
    EstimateOutcome,
    OscillatorParams,
    WidenFactor,
)
from kernels import kernels
from kernels.quadrature import integrate_gaussian
from spectrum import solver

logger = logging.getLogger(__name__)

GRADIENT_STEP = 1e-5
# Second differences lose sqrt(eps) at the gradient step.
LAPLACIAN_STEP = 1e-3
ESTIMATE_TOL = 1e-10
SCHUR_QUAD_TOL = 1e-13
REFINE_STARTS = 3

POSITION_RANGE = (-3.0, 3.0)
TIME_RANGE = (0.1, 2.0)
KAPPA_RANGE = (0.5, 2.0)
GAMMA_RANGE = (1.0, 8.0)
BOX_TIME_RANGE = (0.05, 2.0)
BOX_SIDE_RANGE = (0.5, 4.0)
FRACTION_RANGE = (0.0, 1.0)

KernelEstimate = namedtuple(
    'KernelEstimate', ['name', 'ratio', 'parameters', 'bounds', 'fitted'])
NormChain = namedtuple(
    'NormChain', ['box_norm', 'whole_norm', 'schur_bound', 'holds'])


def _richardson(coarse, fine):
    return (4.0 * fine - coarse) / 3.0


def fd_gradient(func, x, step):
    """Central-difference gradient of func at x, Richardson-corrected.

    func maps an array of points of shape (k, d) to k values.
    """
    x = np.asarray(x, dtype=float)

    def central(h):
        shifts = h * np.eye(x.size)
        return (func(x + shifts) - func(x - shifts)) / (2.0 * h)

    return _richardson(central(step), central(step / 2.0))


def fd_laplacian(func, x, step):
    """Central-difference Laplacian of func at x, Richardson-corrected."""
    x = np.asarray(x, dtype=float)
    centre = func(x[np.newaxis, :])[0]

    def central(h):
        shifts = h * np.eye(x.size)
        second = func(x + shifts) - 2.0 * centre + func(x - shifts)
        return float(np.sum(second)) / h ** 2

    return _richardson(central(step), central(step / 2.0))


def mehler_scale(kappa, t):
    """Width 1/sqrt(kappa coth(kappa t)) of the Mehler kernel in x."""
    return 1.0 / math.sqrt(kappa / math.tanh(kappa * t))


def _mehler_point(params, d):
    x, y = params[:d], params[d:2 * d]
    t, kappa = params[2 * d:2 * d + 2]
    return x, y, t, OscillatorParams(kappa, d)


def _box_point(params, d):
    t, L = params[2 * d:]
    x = L * (params[:d] - 0.5)
    y = L * (params[d:2 * d] - 0.5)
    return x, y, t, BoxGeometry(L)


def _log_absorbed(x, y, t, p):
    """log G(t, 1) - log G(t, 2)."""
    return (kernels.log_mehler_kernel(x, y, t, p)
            - kernels.log_mehler_kernel(x, y, t, p, WidenFactor(2.0)))


def gaussian_chain_ratio(params, d):
    """Largest link of G(t, g) <= (kt/sinh kt)^(d/2) g^(d/2) heat(gt)
    <= g^(d/2) heat(gt) <= (2 pi t)^(-d/2).
    """
    x, y, t, p = _mehler_point(params, d)
    gamma = params[-1]
    kt = p.kappa * t
    log_mehler = kernels.log_mehler_kernel(x, y, t, p, WidenFactor(gamma))
    log_widened = (0.5 * d * math.log(gamma)
                   + kernels.log_heat_kernel(x, y, gamma * t, d))
    log_damping = 0.5 * d * (math.log(kt) - float(kernels.log_sinh(kt)))
    log_sup = -0.5 * d * (kernels.LOG_2PI + math.log(t))
    links = (log_mehler - log_damping - log_widened,
             log_damping,
             log_widened - log_sup)
    return math.exp(max(links))


def absorption_ratio(params, d):
    """G(t, 1) / (exp(-(k/4)(|x|^2 + |y|^2) tanh(kt/2)) G(t, 2))."""
    x, y, t, p = _mehler_point(params, d)
    weight = (p.kappa / 4.0 * (np.sum(x ** 2) + np.sum(y ** 2))
              * math.tanh(p.kappa * t / 2.0))
    return math.exp(_log_absorbed(x, y, t, p) + weight)


def mehler_gradient_ratio(params, d):
    """|grad_x G(t, 1)| / (sqrt(kappa coth(kappa t/2)) G(t, 2))."""
    x, y, t, p = _mehler_point(params, d)
    step = GRADIENT_STEP * mehler_scale(p.kappa, t)
    gradient = fd_gradient(
        lambda points: kernels.log_mehler_kernel(points, y, t, p), x, step)
    scale = math.sqrt(p.kappa / math.tanh(p.kappa * t / 2.0))
    return (math.exp(_log_absorbed(x, y, t, p))
            * float(np.linalg.norm(gradient)) / scale)


def mehler_laplacian_ratio(params, d):
    """|Lap_x G(t, 1)| / (kappa coth(kappa t) G(t, 2))."""
    x, y, t, p = _mehler_point(params, d)

    def log_kernel(points):
        return kernels.log_mehler_kernel(points, y, t, p)

    width = mehler_scale(p.kappa, t)
    gradient = fd_gradient(log_kernel, x, GRADIENT_STEP * width)
    laplacian = fd_laplacian(log_kernel, x, LAPLACIAN_STEP * width)
    # Lap G = G (|grad log G|^2 + Lap log G)
    relative = float(np.sum(gradient ** 2)) + laplacian
    return (math.exp(_log_absorbed(x, y, t, p)) * abs(relative)
            * math.tanh(p.kappa * t) / p.kappa)


def box_gradient_ratio(params, d):
    """|grad_x G_L| sqrt(t) / ((1 + t)^d heat(x, y; 2t)), kappa = 0."""
    x, y, t, box = _box_point(params, d)
    derivatives = kernels.dirichlet_box_kernel_derivatives(x, y, t, box, d)
    return (float(np.linalg.norm(derivatives.gradient)) * math.sqrt(t)
            / ((1.0 + t) ** d * kernels.heat_kernel(x, y, 2.0 * t, d)))


def box_laplacian_ratio(params, d):
    """|Lap_x G_L| t / ((1 + t)^d heat(x, y; 2t)), kappa = 0."""
    x, y, t, box = _box_point(params, d)
    derivatives = kernels.dirichlet_box_kernel_derivatives(x, y, t, box, d)
    return (abs(derivatives.laplacian) * t
            / ((1.0 + t) ** d * kernels.heat_kernel(x, y, 2.0 * t, d)))


def schur_ratio(params, d):
    """int G(x, y) dy / cosh(kappa t)^(-d/2) by quadrature."""
    x = params[:d]
    t, kappa = params[d:]
    p = OscillatorParams(kappa, 1)
    tanh_half = math.tanh(kappa * t / 2.0)
    coth_half = 1.0 / tanh_half
    width = 1.0 / math.sqrt(kappa * (tanh_half + coth_half) / 4.0)
    mass = 1.0
    for xj in x:
        center = xj * (coth_half - tanh_half) / (coth_half + tanh_half)
        mass *= integrate_gaussian(
            lambda y, xj=xj: kernels.mehler_kernel(xj, y, t, p),
            center, width, tol=SCHUR_QUAD_TOL)
    return mass * math.cosh(kappa * t) ** (d / 2.0)


def _coordinates(prefix, d):
    return [f'{prefix}{j + 1}' for j in range(d)]


def kernel_estimates(d=1):
    """The estimate suite for dimension d."""
    xs, ys = _coordinates('x', d), _coordinates('y', d)
    mehler = xs + ys + ['t', 'kappa']
    mehler_bounds = [POSITION_RANGE] * (2 * d) + [TIME_RANGE, KAPPA_RANGE]
    box = xs + ys + ['t', 'L']
    box_bounds = [FRACTION_RANGE] * (2 * d) + [BOX_TIME_RANGE,
                                              BOX_SIDE_RANGE]
    return (
        KernelEstimate('gaussian-chain', gaussian_chain_ratio,
                       mehler + ['gamma'], mehler_bounds + [GAMMA_RANGE],
                       False),
        KernelEstimate('absorption', absorption_ratio, mehler,
                       mehler_bounds, False),
        KernelEstimate('mehler-gradient', mehler_gradient_ratio, mehler,
                       mehler_bounds, True),
        KernelEstimate('mehler-laplacian', mehler_laplacian_ratio, mehler,
                       mehler_bounds, True),
        KernelEstimate('box-gradient', box_gradient_ratio, box, box_bounds,
                       True),
        KernelEstimate('box-laplacian', box_laplacian_ratio, box,
                       box_bounds, True),
        KernelEstimate('schur-contraction', schur_ratio,
                       xs + ['t', 'kappa'],
                       [POSITION_RANGE] * d + [TIME_RANGE, KAPPA_RANGE],
                       False),
    )


def _refine(estimate, start, d):
    result = minimize(lambda q: -estimate.ratio(q, d), start,
                      method='Nelder-Mead', bounds=estimate.bounds,
                      options={'xatol': 1e-10, 'fatol': 1e-14,
                               'maxiter': 400 * len(start)})
    point = np.clip(result.x, *np.array(estimate.bounds).T)
    return point, estimate.ratio(point, d)


def check_estimate(estimate, rng, n_points=100, d=1, constant=None,
                   refine=True, tol=ESTIMATE_TOL):
    """Sup of one ratio over a random grid, refined from its worst points.

    A fitted estimate holds when its sup is finite and, if a constant is
    given, below it; the others must stay below 1 + tol.
    """
    low, high = np.array(estimate.bounds).T
    samples = rng.uniform(low, high, size=(n_points, len(low)))
    ratios = np.array([estimate.ratio(row, d) for row in samples])
    order = np.argsort(-ratios)
    worst_point, worst = samples[order[0]], float(ratios[order[0]])
    if refine:
        for index in order[:REFINE_STARTS]:
            point, ratio = _refine(estimate, samples[index], d)
            if ratio > worst:
                worst_point, worst = point, ratio

    if estimate.fitted:
        limit = math.inf if constant is None else constant * (1.0 + tol)
    else:
        limit = 1.0 + tol
    holds = bool(np.all(np.isfinite(ratios)) and worst <= limit)
    point = tuple((name, float(value))
                  for name, value in zip(estimate.parameters, worst_point))
    if not holds:
        logger.warning('%s fails at %s: ratio %.6g', estimate.name, point,
                       worst)
    logger.info('%s: sup ratio %.6g', estimate.name, worst)
    return EstimateOutcome(name=estimate.name, holds=holds,
                           constant=worst if estimate.fitted else None,
                           worst_ratio=worst, worst_point=point)


def check_kernel_estimates(n_points=100, seed=0, d=1, constants=None,
                           refine=True, tol=ESTIMATE_TOL):
    """Run every kernel estimate on its own random grid.

    constants maps estimate names to constants the fitted estimates must
    respect; without one the smallest working constant is only recorded.
    """
    constants = constants or {}
    rng = np.random.default_rng(seed)
    return [check_estimate(estimate, rng, n_points, d,
                           constants.get(estimate.name), refine, tol)
            for estimate in kernel_estimates(d)]


def check_norm_chain(t, spec, d=1, disc=Discretization()):
    """||G_L(t)|| <= ||G(t)|| <= cosh(kappa t)^(-d/2) <= 1.

    The box norm is exp(-t d epsilon_1); its first link is allowed the
    error bar of the ground state.
    """
    spectrum = solver.box_oscillator_eigs(spec, disc, count=1)
    box_norm = math.exp(-t * solver.ground_state(spectrum, d))
    slack = math.exp(t * d * float(spectrum.errors[0]))
    whole_norm = math.exp(-t * d * spec.kappa / 2.0)
    schur_bound = math.cosh(spec.kappa * t) ** (-d / 2.0)
    holds = box_norm <= whole_norm * slack and whole_norm <= schur_bound <= 1.0
    return NormChain(box_norm, whole_norm, schur_bound, holds)
