"""
Parameter sweeps of the trace difference over (kappa, t, L) grids.
"""
import logging
from functools import partial
from multiprocessing import Pool

from bounds import theorem
from core.models import (
    DirichletOscillatorSpec,
    Discretization,
    TheoremBoundInput,
)
from traces import traces

logger = logging.getLogger(__name__)

COLUMNS = ['L', 'kappa', 't', 'd', 'delta', 'y', 'z', 'err', 'rhs',
           'margin']


def sweep_point(point, tol=traces.DEFAULT_TOL, n=1024, constant=1.0,
                noise_factor=traces.NOISE_FLOOR_FACTOR):
    """One sweep row; margin is None below the noise floor."""
    L, kappa, t, d = point
    spec = DirichletOscillatorSpec.create(L, kappa)
    diff = traces.trace_difference(t, spec, d, tol, Discretization(n),
                                   noise_factor)
    rhs = theorem.theorem_rhs(
        TheoremBoundInput(t=t, L=L, kappa=kappa, d=d, constant=constant))
    margin = None if diff.below_noise_floor else rhs / diff.delta
    return {
        'L': L, 'kappa': kappa, 't': t, 'd': d,
        'delta': diff.delta, 'y': diff.y_term, 'z': diff.z_term,
        'err': diff.err_delta, 'rhs': rhs, 'margin': margin,
    }


def sort_key(row):
    return (row['kappa'], row['t'], row['L'])


def run_sweep(config, constant=1.0,
              noise_factor=traces.NOISE_FLOOR_FACTOR):
    """Evaluate every grid point of a SweepConfig.

    Points are spread over config.jobs worker processes; rows come back
    sorted by (kappa, t, L) whatever the completion order.
    """
    worker = partial(sweep_point, tol=config.tol, n=config.n,
                     constant=constant, noise_factor=noise_factor)
    points = config.points()
    if config.jobs > 1:
        logger.info('sweeping %d points on %d processes', len(points),
                    config.jobs)
        with Pool(processes=config.jobs) as pool:
            rows = list(pool.imap_unordered(worker, points))
    else:
        rows = [worker(point) for point in points]
    return sorted(rows, key=sort_key)
