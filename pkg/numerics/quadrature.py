"""Vectorized quadrature helpers.

Two drivers are provided. ``adaptive_vector`` wraps scipy's vector-valued
Gauss-Kronrod integrator for integrands that return many values per
abscissa. ``integrate_panels`` is a composite Gauss-Legendre rule on
caller-supplied panel edges that evaluates every node in one call and refines
by bisecting all panels until two successive estimates agree; edges may
differ per batch element, which is how kernel peaks of varying width are
resolved without a per-point Python loop.
"""

from collections.abc import Callable
from functools import lru_cache
from typing import Any

import numpy as np
import numpy.typing as npt
from scipy.integrate import quad_vec

from utils.errors import AccuracyError, DataError
from utils.logger import logger

FloatArray = npt.NDArray[np.float64]
# values may be complex (Laplace-domain integrands)
Values = npt.NDArray[Any]
ArrayFn = Callable[[FloatArray], Values]


@lru_cache(maxsize=32)
def gauss_legendre(order: int) -> tuple[FloatArray, FloatArray]:
    """Nodes and weights of the order-point Gauss-Legendre rule on [-1, 1]"""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return nodes, weights


def panel_rule(edges: FloatArray, order: int) -> tuple[FloatArray, FloatArray]:
    """Composite rule on panels between consecutive entries of ``edges``.

    ``edges`` has shape (..., E) and must be sorted along the last axis;
    the result has shape (..., (E - 1) * order). Zero-length panels get zero
    weight.
    """
    ref_nodes, ref_weights = gauss_legendre(order)
    left = edges[..., :-1, np.newaxis]
    half = 0.5 * (edges[..., 1:, np.newaxis] - left)
    nodes = left + half * (ref_nodes + 1.0)
    weights = half * ref_weights
    shape = edges.shape[:-1] + (-1,)
    return nodes.reshape(shape), weights.reshape(shape)


def bisect_panels(edges: FloatArray) -> FloatArray:
    """Insert the midpoint of every panel"""
    mids = 0.5 * (edges[..., 1:] + edges[..., :-1])
    return np.sort(np.concatenate([edges, mids], axis=-1), axis=-1)


def graded_edges(
    centers: FloatArray,
    width: FloatArray | float,
    lo: float,
    hi: float,
    factors: tuple[float, ...] = (0.5, 1.0, 2.0, 4.0, 8.0, 16.0),
    base_panels: int = 4,
) -> FloatArray:
    """Panel edges clustered around ``centers`` at multiples of ``width``.

    ``centers`` has shape (..., C); every batch element gets the same number
    of edges, clipped to [lo, hi] and sorted, so duplicated edges turn into
    zero-length panels.
    """
    offsets = np.array(sorted({0.0, *factors, *(-f for f in factors)}))
    centers = np.asarray(centers, dtype=np.float64)
    w = np.asarray(width, dtype=np.float64)[..., np.newaxis, np.newaxis]
    around = centers[..., :, np.newaxis] + w * offsets
    around = around.reshape(around.shape[:-2] + (-1,))
    base = np.linspace(lo, hi, base_panels + 1)
    base = np.broadcast_to(base, around.shape[:-1] + base.shape)
    edges = np.concatenate([base, np.clip(around, lo, hi)], axis=-1)
    result: FloatArray = np.sort(edges, axis=-1)
    return result


def geometric_edges(
    width: FloatArray | float, hi: float, ratio: float = 2.0, base_panels: int = 4
) -> FloatArray:
    """Edges on [0, hi] refined geometrically towards 0 down to ``width``.

    ``width`` may be an array; every element gets the same number of edges.
    """
    w = np.clip(np.asarray(width, dtype=np.float64), 1e-12 * hi, hi)
    smallest = float(np.min(w, initial=hi))
    count = int(np.ceil(np.log(hi / smallest) / np.log(ratio))) + 1
    steps = ratio ** np.arange(count)
    graded = np.clip(w[..., np.newaxis] * steps, 0.0, hi)
    base = np.broadcast_to(np.linspace(0.0, hi, base_panels + 1), w.shape + (base_panels + 1,))
    result: FloatArray = np.sort(np.concatenate([base, graded], axis=-1), axis=-1)
    return result


def integrate_panels(
    f: ArrayFn,
    edges: FloatArray,
    order: int,
    tol: float,
    max_levels: int = 6,
    where: str = "",
) -> tuple[Values, float]:
    """Integrate ``f`` over the panels in ``edges`` to absolute tolerance ``tol``.

    ``f`` maps nodes of shape (..., N) to values of the same shape. Returns
    the integral with shape ``edges.shape[:-1]`` and the achieved estimate.
    """
    nodes, weights = panel_rule(edges, order)
    coarse = _weighted_sum(f(nodes), weights, where)
    estimate = np.inf
    for level in range(max_levels):
        edges = bisect_panels(edges)
        nodes, weights = panel_rule(edges, order)
        fine = _weighted_sum(f(nodes), weights, where)
        estimate = float(np.max(np.abs(fine - coarse), initial=0.0))
        logger.debug(f"panel refinement {level + 1} {where}: estimate {estimate:.3e}")
        if estimate <= tol:
            return fine, estimate
        coarse = fine
    raise AccuracyError("panel quadrature did not converge", estimate, where)


def _weighted_sum(values: Values, weights: FloatArray, where: str) -> Values:
    if not np.all(np.isfinite(values)):
        raise DataError(f"non-finite integrand values {where}".rstrip())
    result: Values = np.sum(values * weights, axis=-1)
    return result


def adaptive_vector(
    f: Callable[[float], FloatArray],
    a: float,
    b: float,
    tol: float,
    rel_tol: float = 0.0,
    limit: int = 200,
    where: str = "",
) -> tuple[FloatArray, float]:
    """Adaptive Gauss-Kronrod integration of a vector-valued integrand"""
    result, err, info = quad_vec(
        f, a, b, epsabs=tol, epsrel=rel_tol, norm="max", limit=limit, full_output=True
    )
    values = np.asarray(result, dtype=np.float64)
    if not np.all(np.isfinite(values)):
        raise DataError(f"non-finite integrand values {where}".rstrip())
    if not info.success and err > max(tol, rel_tol * float(np.max(np.abs(values), initial=0.0))):
        raise AccuracyError("adaptive quadrature did not converge", float(err), where)
    return values, float(err)
