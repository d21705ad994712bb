"""Low-dimensional Gauss-Legendre integration over ordered eigenvalue wedges.

The joint densities integrated here are permutation symmetric, so the
integral over R^n (or R_+^n) equals n! times the integral over the ordered
wedge lambda_1 < ... < lambda_n.  Inside the wedge the |lambda_j - lambda_i|
interaction factors are smooth, which restores the geometric convergence of
tensor Gauss-Legendre rules.  The remaining |lambda|^s cusp at zero is
removed by splitting every 1-d segment at 0 and substituting x = +-t^2 on
the piece that touches it.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

__all__ = ["wedge_ratio", "wedge_integral"]


@lru_cache(maxsize=32)
def _unit_nodes(n_nodes: int):
    # Gauss-Legendre nodes/weights mapped to (0, 1)
    x, w = np.polynomial.legendre.leggauss(n_nodes)
    return 0.5 * (x + 1.0), 0.5 * w


def _extend(points, weights, lows, hi, n_nodes):
    """Add one integration dimension: lambda_d in (low_i, hi) per point."""
    u, w = _unit_nodes(n_nodes)
    blocks_p, blocks_w, blocks_l = [], [], []

    def push(prefix_idx, nodes, node_w):
        # nodes, node_w: (K, N); prefix points/weights indexed by prefix_idx
        K, N = nodes.shape
        d = points.shape[1]
        newp = np.empty((K * N, d + 1))
        newp[:, :d] = np.repeat(points[prefix_idx], N, axis=0)
        newp[:, d] = nodes.ravel()
        blocks_p.append(newp)
        blocks_w.append((weights[prefix_idx, None] * node_w).ravel())
        blocks_l.append(nodes.ravel())

    neg = lows < 0.0
    if np.any(neg):
        lo = lows[neg]
        # (lo, 0): x = lo * u^2, dx = 2 |lo| u du
        nodes = lo[:, None] * (u * u)[None, :]
        node_w = (2.0 * -lo)[:, None] * (u * w)[None, :]
        push(np.nonzero(neg)[0], nodes, node_w)
        # (0, hi): x = hi * u^2
        nodes0 = np.broadcast_to(hi * u * u, (lo.size, u.size))
        node_w0 = np.broadcast_to(2.0 * hi * u * w, (lo.size, u.size))
        push(np.nonzero(neg)[0], nodes0.copy(), node_w0)
    zero = lows == 0.0
    if np.any(zero):
        kz = int(np.count_nonzero(zero))
        nodes0 = np.broadcast_to(hi * u * u, (kz, u.size))
        node_w0 = np.broadcast_to(2.0 * hi * u * w, (kz, u.size))
        push(np.nonzero(zero)[0], nodes0.copy(), node_w0)
    pos = lows > 0.0
    if np.any(pos):
        lo = lows[pos]
        span = hi - lo
        nodes = lo[:, None] + span[:, None] * u[None, :]
        node_w = span[:, None] * w[None, :]
        push(np.nonzero(pos)[0], nodes, node_w)

    return (
        np.concatenate(blocks_p, axis=0),
        np.concatenate(blocks_w, axis=0),
        np.concatenate(blocks_l, axis=0),
    )


def _wedge_points(n, lo, hi, n_nodes):
    points = np.zeros((1, 0))
    weights = np.ones(1)
    lows = np.array([float(lo)])
    for _ in range(n):
        points, weights, lows = _extend(points, weights, lows, float(hi), n_nodes)
    return points, weights


def wedge_integral(f, n, lo, hi, n_nodes=48):
    """n! * integral of f over the ordered wedge lo < l_1 < ... < l_n < hi.

    f must accept a (K, n) array and return (K,) values.
    """
    points, weights = _wedge_points(n, lo, hi, n_nodes)
    return math.factorial(n) * float(np.dot(weights, f(points)))


def wedge_ratio(density, weight, n, lo, hi, n_nodes=48):
    """(integral of density*weight, integral of density) over the wedge.

    One shared point set, so the s = 0 case cancels exactly.
    """
    points, weights = _wedge_points(n, lo, hi, n_nodes)
    dens = density(points)
    num = float(np.dot(weights, dens * weight(points)))
    den = float(np.dot(weights, dens))
    fac = math.factorial(n)
    return fac * num, fac * den
