"""Synthetic problem instances: forward operators, structured ground truths,
and SNR-controlled noise.

Vector problems (l1, l12, tv1d) use an n x p Gaussian operator with entries
N(0, 1) / sqrt(n).  The low-rank problem observes a rows x cols matrix
through an entrywise 0-1 mask, represented as a diagonal 0-1 operator on the
flattened matrix so that the same solver path serves every regularizer.

All randomness flows through ``numpy.random.default_rng(seed)``; instances
are bit-reproducible per seed.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .linops import mask_operator, spectral_norm
from .regularizers import GroupL12Norm, L1Norm, NuclearNorm, TV1DNorm, contiguous_groups

KINDS = ("l1", "l12", "tv1d", "nuclear")


@dataclass
class ProblemInstance:
    """One synthetic inverse problem: operator, truth, observations, noise."""

    X: np.ndarray
    w_true: np.ndarray
    y_clean: np.ndarray
    y_noisy: np.ndarray
    noise_norm: float
    snr_db: float
    seed: int
    reg: object
    op_norm: float
    problem_id: str


def apply_noise(y_clean, snr_db, seed):
    """Additive Gaussian noise rescaled to hit ``snr_db`` exactly.

    The raw draw is renormalized to ||y_clean|| 10^(-snr_db/20), so the
    returned ``delta`` is the realized noise norm, not an expectation.
    """
    y_clean = np.asarray(y_clean, dtype=float).ravel()
    norm_y = float(np.linalg.norm(y_clean))
    if norm_y == 0.0:
        raise ValueError("clean observation must be nonzero")
    rng = np.random.default_rng(seed)
    eps = rng.standard_normal(y_clean.size)
    target = norm_y * 10.0 ** (-snr_db / 20.0)
    eps *= target / np.linalg.norm(eps)
    delta = float(np.linalg.norm(eps))
    return y_clean + eps, delta


def noisy_instance(problem, snr_db, seed):
    """Fresh noisy copy of ``problem`` at the requested SNR."""
    y_noisy, delta = apply_noise(problem.y_clean, snr_db, seed)
    realized = 20.0 * math.log10(np.linalg.norm(problem.y_clean) / delta)
    return replace(problem, y_noisy=y_noisy, noise_norm=delta, snr_db=realized)


def instance_for_delta(problem, delta, seed):
    """Fresh noisy copy with noise norm exactly ``delta``."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    snr_db = 20.0 * math.log10(np.linalg.norm(problem.y_clean) / delta)
    return noisy_instance(problem, snr_db, seed)


def _gaussian_operator(rng, n, p):
    return rng.standard_normal((n, p)) / np.sqrt(n)


def gen_problem(kind, seed=0, *, n=None, p=None, sparsity=None, group_size=None,
                active_groups=None, rows=None, cols=None, rank=None, density=None):
    """Generate a noiseless instance of the requested kind.

    l1      -- needs n, p, sparsity: ``sparsity`` standard-normal entries at
               uniformly random positions.
    l12     -- needs n, p, group_size, active_groups: whole groups filled
               with standard-normal entries.
    tv1d    -- needs n, p: piecewise constant with a single unit jump at a
               random interior position (total variation exactly 1).
    nuclear -- needs rows, cols, rank, density: a random rank-``rank`` matrix
               observed through a 0-1 mask with the given density.

    The returned instance is noiseless (``y_noisy = y_clean``); compose with
    :func:`noisy_instance` to add noise.
    """
    rng = np.random.default_rng(seed)
    if kind == "l1":
        if not (n and p and sparsity) or not 1 <= sparsity <= p:
            raise ValueError("l1 needs n, p and 1 <= sparsity <= p")
        X = _gaussian_operator(rng, n, p)
        w = np.zeros(p)
        support = rng.choice(p, size=sparsity, replace=False)
        w[support] = rng.standard_normal(sparsity)
        reg = L1Norm(p)
        pid = f"l1-n{n}-p{p}-s{sparsity}-seed{seed}"
    elif kind == "l12":
        if not (n and p and group_size and active_groups):
            raise ValueError("l12 needs n, p, group_size and active_groups")
        if p % group_size != 0:
            raise ValueError("group size must divide p")
        groups = contiguous_groups(p, group_size)
        if not 1 <= active_groups <= len(groups):
            raise ValueError("active_groups out of range")
        X = _gaussian_operator(rng, n, p)
        w = np.zeros(p)
        chosen = rng.choice(len(groups), size=active_groups, replace=False)
        for j in chosen:
            g = groups[j]
            w[g] = rng.standard_normal(len(g))
        reg = GroupL12Norm(p, groups)
        pid = f"l12-n{n}-p{p}-g{group_size}-a{active_groups}-seed{seed}"
    elif kind == "tv1d":
        if not (n and p) or p < 3:
            raise ValueError("tv1d needs n and p >= 3")
        X = _gaussian_operator(rng, n, p)
        base = rng.standard_normal()
        jump_at = int(rng.integers(1, p))          # first index of the higher/lower plateau
        sign = 1.0 if rng.standard_normal() >= 0 else -1.0
        w = np.full(p, base)
        w[jump_at:] = base + sign                  # |single jump| = 1, so TV(w) = 1
        reg = TV1DNorm(p)
        pid = f"tv1d-n{n}-p{p}-seed{seed}"
    elif kind == "nuclear":
        if not (rows and cols and rank and density) or not 1 <= rank <= min(rows, cols):
            raise ValueError("nuclear needs rows, cols, density and 1 <= rank <= min(rows, cols)")
        a = rng.standard_normal((rows, rank))
        b = rng.standard_normal((cols, rank))
        w = ((a @ b.T) / np.sqrt(rank)).ravel()
        mask = mask_operator(rows, cols, density, seed)
        X = np.diag(mask.ravel())
        reg = NuclearNorm(rows, cols)
        pid = f"nuclear-{rows}x{cols}-r{rank}-d{density:g}-seed{seed}"
    else:
        raise ValueError(f"unknown problem kind {kind!r}")

    y_clean = X @ w
    return ProblemInstance(X=X, w_true=w, y_clean=y_clean, y_noisy=y_clean.copy(),
                           noise_norm=0.0, snr_db=math.inf, seed=seed, reg=reg,
                           op_norm=spectral_norm(X), problem_id=pid)
