"""
Semigroup property of the kernels checked by quadrature.

All kernels factorize over coordinates, so a d-dimensional convolution is
the product of d one-dimensional integrals.
"""
import logging
import math
from collections import namedtuple

import numpy as np

from core.exceptions import DomainError
from core.models import OscillatorParams, TimePoint, WidenFactor
from kernels import kernels
from kernels.quadrature import PANEL_TOL, integrate_gaussian, integrate_pieces

logger = logging.getLogger(__name__)

MAX_PIECES = 64

ConvolutionCheck = namedtuple('ConvolutionCheck', ['lhs', 'rhs', 'residual'])


def _split(t, u):
    t = TimePoint(float(t)).t
    if not 0 < u < t:
        raise DomainError(f'u must lie in (0, t), got u={u}, t={t}.')
    return t, float(u)


def _mehler_peak(x, y, t, u, kappa, gamma):
    """Center and width in z of G(x, z; t - u) G(z, y; u)."""
    a = math.tanh(kappa * (t - u) / 2.0)
    b = 1.0 / a
    c = math.tanh(kappa * u / 2.0)
    dd = 1.0 / c
    total = a + b + c + dd
    center = ((b - a) * x + (dd - c) * y) / total
    width = 1.0 / math.sqrt(kappa / (4.0 * gamma) * total)
    return center, width


def mehler_convolution(x, y, t, u, p, g=WidenFactor(), tol=PANEL_TOL):
    """Compare int G(x,z;t-u,g) G(z,y;u,g) dz with g^(d/2) G(x,y;t,g)."""
    t, u = _split(t, u)
    x = kernels.as_points(x, p.d).reshape(p.d)
    y = kernels.as_points(y, p.d).reshape(p.d)
    line = OscillatorParams(p.kappa, 1)

    lhs = 1.0
    for j in range(p.d):
        def integrand(z, xj=x[j], yj=y[j]):
            return (kernels.mehler_kernel(xj, z, t - u, line, g)
                    * kernels.mehler_kernel(z, yj, u, line, g))

        center, width = _mehler_peak(x[j], y[j], t, u, p.kappa, g.gamma)
        lhs *= integrate_gaussian(integrand, center, width, tol=tol)

    rhs = g.gamma ** (p.d / 2.0) * kernels.mehler_kernel(x, y, t, p, g)
    return ConvolutionCheck(lhs, rhs, abs(lhs - rhs))


def box_kernel_convolution(x, y, t, u, box, d=1, tol=PANEL_TOL):
    """Compare int_box G_L(x,z;t-u) G_L(z,y;u) dz with G_L(x,y;t)."""
    t, u = _split(t, u)
    x = kernels.as_points(x, d).reshape(d)
    y = kernels.as_points(y, d).reshape(d)
    width = math.sqrt(min(u, t - u))
    pieces = int(min(MAX_PIECES, max(1, math.ceil(box.L / width))))

    lhs = 1.0
    for j in range(d):
        def integrand(z, xj=x[j], yj=y[j]):
            z = np.clip(z, -box.half, box.half)
            first = kernels.dirichlet_box_kernel(xj, z, t - u, box).value
            second = kernels.dirichlet_box_kernel(z, yj, u, box).value
            return first * second

        lhs *= integrate_pieces(integrand, -box.half, box.half, pieces,
                                tol=tol)

    rhs = kernels.dirichlet_box_kernel(x, y, t, box, d).value
    logger.debug('box convolution at L=%g t=%g u=%g: %.3e vs %.3e',
                 box.L, t, u, lhs, rhs)
    return ConvolutionCheck(lhs, rhs, abs(lhs - rhs))


def heat_convolution(x, y, t, u, d=1, tol=PANEL_TOL):
    """Compare int G_0(x,z;t-u) G_0(z,y;u) dz with G_0(x,y;t)."""
    t, u = _split(t, u)
    x = kernels.as_points(x, d).reshape(d)
    y = kernels.as_points(y, d).reshape(d)

    lhs = 1.0
    for j in range(d):
        def integrand(z, xj=x[j], yj=y[j]):
            return (kernels.heat_kernel(xj, z, t - u)
                    * kernels.heat_kernel(z, yj, u))

        center = (u * x[j] + (t - u) * y[j]) / t
        width = math.sqrt(2.0 * u * (t - u) / t)
        lhs *= integrate_gaussian(integrand, center, width, tol=tol)

    rhs = kernels.heat_kernel(x, y, t, d)
    return ConvolutionCheck(lhs, rhs, abs(lhs - rhs))
