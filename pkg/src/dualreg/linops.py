"""Dense linear-operator helpers shared by the solvers and the harness.

Operators are plain 2-d float ndarrays.  Everything here is desk scale,
so exact factorizations (full SVD) are preferred over iterative methods.
"""

import numpy as np


def as_operator(a):
    """Validate ``a`` as a dense operator: a 2-d float array with finite entries."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError("operator must be a 2-d matrix with at least one row and column")
    if not np.all(np.isfinite(a)):
        raise ValueError("operator entries must be finite")
    return a


def spectral_norm(a):
    """Largest singular value of a dense matrix, computed by full SVD."""
    a = as_operator(a)
    return float(np.linalg.svd(a, compute_uv=False)[0])


def diff_operator(p):
    """Forward-difference matrix D of shape (p-1, p), (Dw)_i = w_{i+1} - w_i."""
    if p < 2:
        raise ValueError("diff_operator needs p >= 2")
    d = np.zeros((p - 1, p))
    idx = np.arange(p - 1)
    d[idx, idx] = -1.0
    d[idx, idx + 1] = 1.0
    return d


def mask_operator(rows, cols, density, seed):
    """0-1 mask with exactly round(density * rows * cols) ones.

    The mask acts entrywise on matrices of the given shape (equivalently, as
    a diagonal 0-1 operator on their flattened vectors).  Placement of the
    ones is drawn from ``numpy.random.default_rng(seed)``, so the result is
    deterministic for a fixed seed.
    """
    if rows < 1 or cols < 1:
        raise ValueError("mask shape must be positive")
    if not 0.0 < density <= 1.0:
        raise ValueError("density must lie in (0, 1]")
    n = rows * cols
    n_ones = int(round(density * n))
    rng = np.random.default_rng(seed)
    flat = np.zeros(n)
    flat[rng.choice(n, size=n_ones, replace=False)] = 1.0
    return flat.reshape(rows, cols)
