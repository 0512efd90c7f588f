"""Low-complexity regularizers and their local geometry.

Four priors are implemented, each exposing the same surface:

* ``value(w)`` -- the regularizer value R(w),
* ``prox(tau, x)`` -- the unique minimizer of R(u) + ||u - x||^2 / (2 tau),
* ``descriptor(w, tol)`` -- the discrete model of ``w`` (support set, active
  group set, jump set, or rank),
* ``tangent_projector(d)`` -- orthogonal projector onto the model tangent
  space (affine-manifold kinds only),
* ``riemannian_hessian(w, d)`` -- Hessian of a smooth representation of R
  along the model, projected to the tangent space.

``check_source_condition`` certifies nondegeneracy of a dual vector at a
given ground truth, which is the identifiability condition behind model
consistency of the dual-ascent solvers.

Indices in descriptors are 0-based: coordinates for the l1 norm, group ids
for the group norm, difference positions for 1-d TV.
"""

from dataclasses import dataclass

import numpy as np

from .linops import diff_operator


class SingularModelError(ArithmeticError):
    """An active group has numerically zero norm; the smooth Hessian blows up."""


class UnsupportedModelError(ValueError):
    """Operation undefined for this regularizer kind (curved manifold)."""


@dataclass(frozen=True)
class ModelDescriptor:
    """Discrete structure of a point.

    ``indices`` holds a frozenset of 0-based positions (support coordinates,
    active group ids, or jump positions); the nuclear norm uses ``rank``
    instead.  Two descriptors are equal when kind and content match.
    """

    kind: str
    indices: frozenset = None
    rank: int = None

    @property
    def size(self):
        return self.rank if self.kind == "nuclear" else len(self.indices)


@dataclass
class CertificateReport:
    """Result of a nondegenerate-source-condition check.

    ``certificate_dual`` is the minimal-norm dual vector solving the on-model
    linear system, ``z`` its pullback -X^T v.  ``nondegenerate`` holds when
    the on-model residual is below tolerance and the off-model margin is
    strictly positive.
    """

    certificate_dual: np.ndarray
    z: np.ndarray
    on_model_residual: float
    off_model_margin: float
    nondegenerate: bool


def _check_tau(tau):
    if not tau > 0:
        raise ValueError("prox step tau must be positive")


def _check_tol(tol):
    if tol < 0:
        raise ValueError("descriptor tolerance must be nonnegative")


class _Regularizer:
    """Shared input checking for the concrete regularizers."""

    dim = 0

    def _vec(self, w):
        w = np.asarray(w, dtype=float).ravel()
        if w.size != self.dim:
            raise ValueError(f"expected a vector of length {self.dim}, got {w.size}")
        return w


class L1Norm(_Regularizer):
    """Sum of absolute values; model = support set, tangent = axis subspace."""

    kind = "l1"
    default_tol = 0.0

    def __init__(self, p):
        if p < 1:
            raise ValueError("dimension must be positive")
        self.dim = int(p)

    def value(self, w):
        return float(np.abs(self._vec(w)).sum())

    def prox(self, tau, x):
        _check_tau(tau)
        x = self._vec(x)
        return np.sign(x) * np.maximum(np.abs(x) - tau, 0.0)

    def descriptor(self, w, tol=None):
        tol = self.default_tol if tol is None else tol
        _check_tol(tol)
        w = self._vec(w)
        return ModelDescriptor("l1", frozenset(np.flatnonzero(np.abs(w) > tol).tolist()))

    def tangent_projector(self, d):
        p = np.zeros((self.dim, self.dim))
        idx = sorted(d.indices)
        p[idx, idx] = 1.0
        return p

    def riemannian_hessian(self, w, d):
        # polyhedral: the smooth representation is linear along the model
        return np.zeros((self.dim, self.dim))

    def _certificate_system(self, w, d):
        e = np.zeros(self.dim)
        idx = sorted(d.indices)
        e[idx] = np.sign(w[idx])
        return self.tangent_projector(d), e

    def _certificate_margin(self, g, w, d):
        off = np.setdiff1d(np.arange(self.dim), sorted(d.indices))
        if off.size == 0:
            return 1.0
        return 1.0 - float(np.max(np.abs(g[off])))


class GroupL12Norm(_Regularizer):
    """Sum of Euclidean norms over a disjoint partition of the coordinates."""

    kind = "l12"
    default_tol = 0.0

    def __init__(self, p, groups):
        groups = [np.asarray(sorted(g), dtype=int) for g in groups]
        if any(g.size < 1 for g in groups):
            raise ValueError("groups must be nonempty")
        flat = np.concatenate(groups) if groups else np.array([], dtype=int)
        if flat.size != p or np.unique(flat).size != p or flat.min() < 0 or flat.max() >= p:
            raise ValueError("groups must disjointly cover all coordinates")
        self.dim = int(p)
        self.groups = groups
        self._gid = np.empty(p, dtype=int)
        for j, g in enumerate(groups):
            self._gid[g] = j

    def _group_norms(self, w):
        sq = np.bincount(self._gid, weights=w * w, minlength=len(self.groups))
        return np.sqrt(sq)

    def value(self, w):
        return float(self._group_norms(self._vec(w)).sum())

    def prox(self, tau, x):
        _check_tau(tau)
        x = self._vec(x)
        norms = self._group_norms(x)
        scale = np.zeros_like(norms)
        nz = norms > 0
        scale[nz] = np.maximum(1.0 - tau / norms[nz], 0.0)
        return x * scale[self._gid]

    def descriptor(self, w, tol=None):
        tol = self.default_tol if tol is None else tol
        _check_tol(tol)
        active = np.flatnonzero(self._group_norms(self._vec(w)) > tol)
        return ModelDescriptor("l12", frozenset(active.tolist()))

    def tangent_projector(self, d):
        p = np.zeros((self.dim, self.dim))
        for j in sorted(d.indices):
            g = self.groups[j]
            p[g, g] = 1.0
        return p

    def riemannian_hessian(self, w, d):
        w = self._vec(w)
        h = np.zeros((self.dim, self.dim))
        for j in sorted(d.indices):
            g = self.groups[j]
            wg = w[g]
            ng = float(np.linalg.norm(wg))
            if ng < 1e-12:
                raise SingularModelError(f"active group {j} has norm {ng:.3e}")
            u = wg / ng
            h[np.ix_(g, g)] = (np.eye(g.size) - np.outer(u, u)) / ng
        return h

    def _certificate_system(self, w, d):
        e = np.zeros(self.dim)
        for j in sorted(d.indices):
            g = self.groups[j]
            e[g] = w[g] / np.linalg.norm(w[g])
        return self.tangent_projector(d), e

    def _certificate_margin(self, g, w, d):
        worst = 0.0
        inactive = [j for j in range(len(self.groups)) if j not in d.indices]
        for j in inactive:
            worst = max(worst, float(np.linalg.norm(g[self.groups[j]])))
        return 1.0 - worst


def _tv1d_prox(y, lam):
    """Exact prox of lam * ||Dw||_1 at y by the direct taut-string sweep.

    Single forward pass maintaining the lower/upper tube bounds (vmin, vmax)
    and their slacks (umin, umax); segments are emitted when a jump becomes
    unavoidable.  O(p) time, and flat runs are written as identical doubles
    so downstream jump detection at tolerance 0 is exact.
    """
    n = y.size
    x = np.empty_like(y)
    if n == 1:
        x[0] = y[0]
        return x
    k = k0 = km = kp = 0
    vmin = y[0] - lam
    vmax = y[0] + lam
    umin = lam
    umax = -lam
    while True:
        if k == n - 1:
            # end of signal: either break one more segment or flush the tail
            if umin < 0.0:
                x[k0:km + 1] = vmin
                k = k0 = km = kp = km + 1
                vmin = y[k]
                umin = lam
                umax = y[k] + lam - vmax
                if k == n - 1:
                    x[k] = vmin + umin
                    return x
                continue
            if umax > 0.0:
                x[k0:kp + 1] = vmax
                k = k0 = km = kp = kp + 1
                vmax = y[k]
                umax = -lam
                umin = y[k] - lam - vmin
                if k == n - 1:
                    x[k] = vmin + umin
                    return x
                continue
            x[k0:] = vmin + umin / (k - k0 + 1)
            return x
        if y[k + 1] + umin < vmin - lam:
            # negative jump: freeze the segment at the lower bound
            x[k0:km + 1] = vmin
            k = k0 = km = kp = km + 1
            vmin = y[k]
            vmax = y[k] + 2.0 * lam
            umin = lam
            umax = -lam
        elif y[k + 1] + umax > vmax + lam:
            # positive jump: freeze the segment at the upper bound
            x[k0:kp + 1] = vmax
            k = k0 = km = kp = kp + 1
            vmin = y[k] - 2.0 * lam
            vmax = y[k]
            umin = lam
            umax = -lam
        else:
            # no jump: absorb the sample and retighten the bounds
            k += 1
            umin += y[k] - vmin
            umax += y[k] - vmax
            if umin >= lam:
                vmin += (umin - lam) / (k - k0 + 1)
                umin = lam
                km = k
            if umax <= -lam:
                vmax += (umax + lam) / (k - k0 + 1)
                umax = -lam
                kp = k


class TV1DNorm(_Regularizer):
    """1-d total variation ||Dw||_1; model = jump set, tangent = piecewise-constant signals."""

    kind = "tv1d"
    default_tol = 0.0

    def __init__(self, p):
        if p < 2:
            raise ValueError("1-d TV needs dimension >= 2")
        self.dim = int(p)
        self.diff = diff_operator(p)

    def value(self, w):
        return float(np.abs(np.diff(self._vec(w))).sum())

    def prox(self, tau, x):
        _check_tau(tau)
        return _tv1d_prox(self._vec(x), tau)

    def descriptor(self, w, tol=None):
        tol = self.default_tol if tol is None else tol
        _check_tol(tol)
        jumps = np.flatnonzero(np.abs(np.diff(self._vec(w))) > tol)
        return ModelDescriptor("tv1d", frozenset(jumps.tolist()))

    def _runs(self, d):
        bounds = [0] + [j + 1 for j in sorted(d.indices)] + [self.dim]
        return [(bounds[i], bounds[i + 1]) for i in range(len(bounds) - 1)]

    def tangent_projector(self, d):
        p = np.zeros((self.dim, self.dim))
        for a, b in self._runs(d):
            p[a:b, a:b] = 1.0 / (b - a)
        return p

    def riemannian_hessian(self, w, d):
        # polyhedral, as for the l1 norm
        return np.zeros((self.dim, self.dim))

    def _certificate_system(self, w, d):
        jumps = sorted(d.indices)
        proj = self.tangent_projector(d)
        if jumps:
            signs = np.sign(np.diff(w)[jumps])
            e = proj @ (self.diff[jumps].T @ signs)
        else:
            e = np.zeros(self.dim)
        return proj, e

    def _certificate_margin(self, g, w, d):
        off = np.setdiff1d(np.arange(self.dim - 1), sorted(d.indices))
        if off.size == 0:
            return 1.0
        proj = self.tangent_projector(d)
        # the off-model component lives in range(D_off^T); recover its coefficients
        g_perp = g - proj @ g
        eta, *_ = np.linalg.lstsq(self.diff[off].T, g_perp, rcond=None)
        return 1.0 - float(np.max(np.abs(eta)))


class NuclearNorm(_Regularizer):
    """Sum of singular values of a matrix stored as a flat (row-major) vector."""

    kind = "nuclear"
    default_tol = 1e-8

    def __init__(self, rows, cols):
        if rows < 1 or cols < 1:
            raise ValueError("matrix shape must be positive")
        self.shape = (int(rows), int(cols))
        self.dim = int(rows) * int(cols)

    def _mat(self, w):
        return self._vec(w).reshape(self.shape)

    def value(self, w):
        return float(np.linalg.svd(self._mat(w), compute_uv=False).sum())

    def prox(self, tau, x):
        _check_tau(tau)
        u, s, vt = np.linalg.svd(self._mat(x), full_matrices=False)
        return ((u * np.maximum(s - tau, 0.0)) @ vt).ravel()

    def descriptor(self, w, tol=None):
        tol = self.default_tol if tol is None else tol
        _check_tol(tol)
        s = np.linalg.svd(self._mat(w), compute_uv=False)
        if s.size == 0 or s[0] <= 0.0:
            return ModelDescriptor("nuclear", rank=0)
        # relative threshold: singular-value thresholding leaves rounding dust
        return ModelDescriptor("nuclear", rank=int(np.sum(s > tol * s[0])))

    def tangent_projector(self, d):
        raise UnsupportedModelError("the rank manifold is curved; no affine tangent projector")

    def riemannian_hessian(self, w, d):
        raise UnsupportedModelError("the rank manifold is curved; no affine Hessian")

    def _svd_factors(self, w, rank):
        u, s, vt = np.linalg.svd(self._mat(w), full_matrices=False)
        return u[:, :rank], vt[:rank].T

    def _certificate_system(self, w, d):
        rows, cols = self.shape
        ur, vr = self._svd_factors(w, d.rank)
        pu = ur @ ur.T
        pv = vr @ vr.T
        # projector onto the tangent space of the fixed-rank manifold, acting
        # on row-major flattened matrices: G -> Pu G + G Pv - Pu G Pv
        proj = (np.kron(pu, np.eye(cols)) + np.kron(np.eye(rows), pv)
                - np.kron(pu, pv))
        e = (ur @ vr.T).ravel()
        return proj, e

    def _certificate_margin(self, g, w, d):
        rows, cols = self.shape
        ur, vr = self._svd_factors(w, d.rank)
        gm = g.reshape(self.shape)
        z = (np.eye(rows) - ur @ ur.T) @ gm @ (np.eye(cols) - vr @ vr.T)
        sig = np.linalg.svd(z, compute_uv=False)
        return 1.0 - (float(sig[0]) if sig.size else 0.0)


def contiguous_groups(p, size):
    """Partition 0..p-1 into consecutive groups of the given size."""
    if p % size != 0:
        raise ValueError("group size must divide the dimension")
    return [list(range(a, a + size)) for a in range(0, p, size)]


def check_source_condition(reg, alpha, w_true, X, tol_eq=1e-8):
    """Certify the nondegenerate source condition at ``w_true``.

    Finds the minimal-norm dual vector v solving the on-model system
    P_T(-X^T v) = P_T(alpha w_true) + e_T by least squares, where e_T is the
    fixed tangential subgradient component at ``w_true`` (sign pattern, group
    directions, jump signs, or U V^T).  The off-model margin measures how far
    the induced subgradient candidate -X^T v - alpha w_true sits inside the
    dual-norm constraint; nondegeneracy requires a strictly positive margin.

    A rank-deficient system that cannot meet the on-model equations is
    reported as ``nondegenerate=False`` rather than raised.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    w_true = np.asarray(w_true, dtype=float).ravel()
    if not np.any(w_true):
        raise ValueError("ground truth must be nonzero")
    X = np.asarray(X, dtype=float)
    d = reg.descriptor(w_true)
    proj, e = reg._certificate_system(w_true, d)
    a = -(proj @ X.T)
    b = proj @ (alpha * w_true) + e
    v, *_ = np.linalg.lstsq(a, b, rcond=None)
    residual = float(np.linalg.norm(a @ v - b))
    z = -X.T @ v
    margin = reg._certificate_margin(z - alpha * w_true, w_true, d)
    return CertificateReport(
        certificate_dual=v,
        z=z,
        on_model_residual=residual,
        off_model_margin=margin,
        nondegenerate=(residual <= tol_eq) and (margin > 0.0),
    )
