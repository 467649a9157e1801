"""
Adaptive Gauss-Legendre quadrature on panels.

A panel is accepted when its single-panel estimate agrees with the sum
over its two halves; otherwise both halves are pushed back for
refinement. Integrands must accept and return numpy arrays.
"""
import logging
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss

from core.exceptions import ConvergenceError

logger = logging.getLogger(__name__)

PANEL_ORDER = 20
PANEL_TOL = 1e-12
RELATIVE_TOL = 1e-13
MAX_PANELS = 20000
# Gaussian integrands are negligible beyond this many widths.
GAUSSIAN_SPAN = 12.0


@lru_cache(maxsize=8)
def _rule(order):
    return leggauss(order)


def _panel(func, a, b, order):
    nodes, weights = _rule(order)
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    return half * np.dot(weights, func(mid + half * nodes))


def integrate(func, a, b, tol=PANEL_TOL, rel_tol=RELATIVE_TOL,
              order=PANEL_ORDER):
    """Integrate func over [a, b] to an absolute panel tolerance.

    The tolerance of a panel is tol scaled by its share of [a, b].
    Raises ConvergenceError when more than MAX_PANELS are needed.
    """
    a = float(a)
    b = float(b)
    if a == b:
        return 0.0
    sign = 1.0
    if b < a:
        a, b = b, a
        sign = -1.0
    width = b - a

    total = 0.0
    pending = [(a, b, _panel(func, a, b, order))]
    accepted = 0
    while pending:
        lo, hi, coarse = pending.pop()
        mid = 0.5 * (lo + hi)
        left = _panel(func, lo, mid, order)
        right = _panel(func, mid, hi, order)
        fine = left + right
        allowed = max(tol * (hi - lo) / width, rel_tol * abs(fine))
        if abs(fine - coarse) <= allowed or hi - lo < 1e-12 * width:
            total += fine
            accepted += 1
            continue
        if accepted + len(pending) > MAX_PANELS:
            raise ConvergenceError(
                f'Quadrature on [{a}, {b}] needs more than {MAX_PANELS} '
                f'panels; loosen tol={tol}.'
            )
        pending.append((lo, mid, left))
        pending.append((mid, hi, right))

    logger.debug('quadrature on [%g, %g] used %d panels', a, b, accepted)
    return sign * total


def integrate_pieces(func, a, b, pieces, tol=PANEL_TOL):
    """Integrate over [a, b] split into equal pieces.

    Narrow peaks cannot slip between the nodes of the first panel.
    """
    edges = np.linspace(a, b, pieces + 1)
    return sum(integrate(func, lo, hi, tol=tol / pieces)
               for lo, hi in zip(edges[:-1], edges[1:]))


def integrate_gaussian(func, center=0.0, width=1.0, tol=PANEL_TOL,
                       span=GAUSSIAN_SPAN):
    """Integrate a Gaussian-like integrand over the real line.

    width is the scale w of exp(-((z - center) / w)**2); the integral is
    taken over center +- span * width, one piece per width.
    """
    reach = span * width
    return integrate_pieces(func, center - reach, center + reach,
                            pieces=int(2 * span), tol=tol)


def whole_line_radius(kappa, t, L=0.0):
    """Half-width R of the window [-R, R] for oscillator integrands."""
    if kappa == 0:
        return max(GAUSSIAN_SPAN * np.sqrt(2.0 * t), L)
    return max(GAUSSIAN_SPAN / np.sqrt(kappa * np.tanh(kappa * t / 2.0)), L)
