"""Independent oracles used by the test suite.

Nothing here touches the production closed forms: prox outputs are
reproduced by projected-gradient iterations on the Fenchel dual of the prox
problem (the projection being onto the dual-norm ball), conjugate values by
the distance to that ball, constrained minimizers by cvxpy, and spectral
norms by brute-force direction sampling.
"""

import numpy as np

try:
    import cvxpy as cp
except ImportError:          # allow collection without the optional extra
    cp = None


def project_dual_ball(reg, z):
    """Euclidean projection onto the unit dual-norm ball of the regularizer."""
    if reg.kind == "l1":
        return np.clip(z, -1.0, 1.0)
    if reg.kind == "l12":
        out = z.copy()
        for g in reg.groups:
            ng = np.linalg.norm(z[g])
            if ng > 1.0:
                out[g] = z[g] / ng
        return out
    if reg.kind == "nuclear":
        u, s, vt = np.linalg.svd(z.reshape(reg.shape), full_matrices=False)
        return ((u * np.minimum(s, 1.0)) @ vt).ravel()
    raise ValueError(f"no direct dual ball for kind {reg.kind!r}")


def _tv_dual_box(reg, x, tau, tol=1e-14, max_iters=500_000):
    """Maximize <D^T v, x> - tau/2 ||D^T v||^2 over the box ||v||_inf <= 1.

    Projected gradient with step 1/(tau * lmax(D D^T)); D D^T is positive
    definite, so the iteration contracts and v* is unique.
    """
    d = reg.diff
    lmax = np.linalg.eigvalsh(d @ d.T)[-1]
    step = 1.0 / (tau * lmax)
    v = np.zeros(d.shape[0])
    for _ in range(max_iters):
        grad = d @ (x - tau * (d.T @ v))
        v_new = np.clip(v + step * grad, -1.0, 1.0)
        if np.linalg.norm(v_new - v) <= tol * (1.0 + np.linalg.norm(v)):
            return v_new
        v = v_new
    return v


def prox_oracle(reg, tau, x):
    """Minimizer of R(u) + ||u - x||^2 / (2 tau) via its projected dual.

    The prox problem's dual is max_{z in C} <z, x> - tau/2 ||z||^2 with C
    the unit dual-norm ball, solved here by projected gradient iteration;
    the primal minimizer is recovered as u = x - tau z*.
    """
    x = np.asarray(x, dtype=float).ravel()
    if reg.kind == "tv1d":
        v = _tv_dual_box(reg, x, tau)
        return x - tau * (reg.diff.T @ v)
    z = np.zeros_like(x)
    step = 0.5 / tau
    for _ in range(2000):
        z_new = project_dual_ball(reg, z + step * (x - tau * z))
        if np.linalg.norm(z_new - z) <= 1e-15 * (1.0 + np.linalg.norm(z)):
            z = z_new
            break
        z = z_new
    return x - tau * z


def conjugate_oracle(reg, alpha, x):
    """Value of (R + alpha/2 ||.||^2)^* at x, as an envelope of R^*.

    R^* is the indicator of the unit dual-norm ball C, so the conjugate is
    dist(x, C)^2 / (2 alpha).  Evaluated from ball projections only.
    """
    x = np.asarray(x, dtype=float).ravel()
    if reg.kind == "tv1d":
        v = _tv_dual_box(reg, x, 1.0)
        resid = x - reg.diff.T @ v
    else:
        resid = x - project_dual_ball(reg, x)
    return float(resid @ resid) / (2.0 * alpha)


def prox_cvxpy(reg, tau, x):
    """cvxpy reference for the prox (spot checks of the main oracle)."""
    x = np.asarray(x, dtype=float).ravel()
    u = cp.Variable(x.size)
    obj = _reg_expr(reg, u) + cp.sum_squares(u - x) / (2.0 * tau)
    cp.Problem(cp.Minimize(obj)).solve(solver=cp.CLARABEL)
    return np.asarray(u.value).ravel()


def constrained_min_cvxpy(X, y, reg, alpha):
    """cvxpy solution of min R(w) + alpha/2 ||w||^2  s.t.  X w = y."""
    X = np.asarray(X, dtype=float)
    w = cp.Variable(X.shape[1])
    obj = _reg_expr(reg, w) + alpha / 2.0 * cp.sum_squares(w)
    cp.Problem(cp.Minimize(obj), [X @ w == y]).solve(solver=cp.CLARABEL)
    return np.asarray(w.value).ravel()


def _reg_expr(reg, w):
    if reg.kind == "l1":
        return cp.norm1(w)
    if reg.kind == "l12":
        return cp.sum([cp.norm2(w[list(g)]) for g in reg.groups])
    if reg.kind == "tv1d":
        return cp.tv(w)
    if reg.kind == "nuclear":
        return cp.normNuc(cp.reshape(w, reg.shape, order="C"))
    raise ValueError(reg.kind)


def spectral_norm_oracle(a, n_samples=100_000, seed=0, polish_iters=60):
    """max ||A v|| over random unit directions, with a power-iteration polish.

    Pure sampling resolves the top direction only to ~1/n_samples in angle,
    so the best sample is refined by a few A^T A iterations to make the
    oracle sharp to ~1e-12 while staying independent of any SVD routine.
    """
    a = np.asarray(a, dtype=float)
    rng = np.random.default_rng(seed)
    best = None
    best_val = -1.0
    for start in range(0, n_samples, 20_000):
        m = min(20_000, n_samples - start)
        v = rng.standard_normal((a.shape[1], m))
        v /= np.linalg.norm(v, axis=0)
        vals = np.linalg.norm(a @ v, axis=0)
        i = int(np.argmax(vals))
        if vals[i] > best_val:
            best_val = float(vals[i])
            best = v[:, i].copy()
    for _ in range(polish_iters):
        best = a.T @ (a @ best)
        best /= np.linalg.norm(best)
    return float(np.linalg.norm(a @ best))


def subgradient_inequality_slack(reg, w, g, probes):
    """min over probes u of R(u) - R(w) - <g, u - w>; >= 0 iff g is a subgradient."""
    rw = reg.value(w)
    slack = np.inf
    for u in probes:
        slack = min(slack, reg.value(u) - rw - float(g @ (u - w)))
    return slack
