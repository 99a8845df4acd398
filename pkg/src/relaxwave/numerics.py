"""Quadrature nodes and finite-difference derivatives of scalar functions."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

GAUSS_ORDER = 8

# step sizes balancing h^4 truncation against round-off for each derivative order
DEFAULT_STEP = {1: 1e-3, 2: 3e-3, 3: 6e-3, 4: 1e-2}


@lru_cache(maxsize=None)
def _gauss(order: int):
    return np.polynomial.legendre.leggauss(order)


def gauss_panels(panels: int, order: int = GAUSS_ORDER, lo: float = 0.0, hi: float = 1.0):
    """Nodes and weights of composite Gauss-Legendre on ``[lo, hi]``.

    Returns ``(nodes, weights)`` with shape ``(panels, order)`` so callers can
    reduce per panel.
    """
    ref_x, ref_w = _gauss(order)
    edges = np.linspace(lo, hi, panels + 1)
    half = 0.5 * np.diff(edges)[:, None]
    mid = 0.5 * (edges[:-1] + edges[1:])[:, None]
    return mid + half * ref_x[None, :], half * ref_w[None, :]


@lru_cache(maxsize=None)
def fd_weights(offsets: tuple, order: int) -> np.ndarray:
    """Weights ``w`` with ``sum(w_k f(x + k h)) ~ h^order f^(order)(x)``."""
    k = np.asarray(offsets, dtype=float)
    n = len(k)
    vander = np.vander(k, n, increasing=True).T
    rhs = np.zeros(n)
    rhs[order] = float(np.prod(np.arange(1, order + 1)))
    return np.linalg.solve(vander, rhs)


def fd_derivative(fn, x, order: int = 1, h: float | None = None,
                  lo: float | None = None, hi: float | None = None):
    """Fourth-order finite-difference derivative of ``fn`` at ``x``.

    Central stencils are used where they fit inside ``[lo, hi]``; near an
    end the stencil is shifted to stay inside, which keeps fourth order.
    """
    if h is None:
        h = DEFAULT_STEP[order]
    shape = np.shape(x)
    x_arr = np.atleast_1d(np.asarray(x, dtype=float)).ravel()
    half = (order + 3) // 2
    central = tuple(range(-half, half + 1))
    npts = order + 4
    out = np.empty_like(x_arr)

    # 0: central, 1: forward, -1: backward
    shift = np.zeros(len(x_arr), dtype=int)
    if lo is not None:
        shift[x_arr - half * h < lo] = 1
    if hi is not None:
        shift[(x_arr + half * h > hi) & (shift == 0)] = -1

    for s in np.unique(shift):
        mask = shift == s
        if s == 0:
            offsets = central
        elif s > 0:
            offsets = tuple(range(0, npts))
        else:
            offsets = tuple(range(-npts + 1, 1))
        w = fd_weights(offsets, order)
        xs = x_arr[mask]
        acc = np.zeros_like(xs)
        for k, wk in zip(offsets, w):
            acc = acc + wk * np.asarray(fn(xs + k * h), dtype=float)
        out[mask] = acc / h**order
    if not shape:
        return float(out[0])
    return out.reshape(shape)
