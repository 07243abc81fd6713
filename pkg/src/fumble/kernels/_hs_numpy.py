"""Numpy implementation of the variational flow iteration (fallback path)."""

from __future__ import annotations

import numpy as np

# Classic 8-neighbor averaging weights: edge neighbors 1/6, corners 1/12.
_EDGE_W = 1.0 / 6.0
_CORNER_W = 1.0 / 12.0


def _neighbor_avg(field: np.ndarray) -> np.ndarray:
    p = np.pad(field, 1, mode="edge")
    return _EDGE_W * (p[:-2, 1:-1] + p[2:, 1:-1] + p[1:-1, :-2] + p[1:-1, 2:]) + _CORNER_W * (
        p[:-2, :-2] + p[:-2, 2:] + p[2:, :-2] + p[2:, 2:]
    )


def hs_iterate(
    ix: np.ndarray,
    iy: np.ndarray,
    it: np.ndarray,
    u: np.ndarray,
    v: np.ndarray,
    alpha2: float,
    n_iters: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Run n_iters Jacobi updates of the brightness-constancy + smoothness energy.

    ix, iy, it are image gradients; u, v the initial flow (not modified).
    Returns the updated (u, v) as float64 arrays.
    """
    u = np.asarray(u, np.float64).copy()
    v = np.asarray(v, np.float64).copy()
    ix = np.asarray(ix, np.float64)
    iy = np.asarray(iy, np.float64)
    it = np.asarray(it, np.float64)
    den = alpha2 + ix * ix + iy * iy
    for _ in range(n_iters):
        ubar = _neighbor_avg(u)
        vbar = _neighbor_avg(v)
        num = (ix * ubar + iy * vbar + it) / den
        u = ubar - ix * num
        v = vbar - iy * num
    return u, v
