"""Model-consistency detection and local-rate analysis of solver traces.

``consistency_report`` locates the oracle stopping index (minimal true
error) and the maximal run of recorded iterates whose model descriptor
matches the ground truth.

``build_mdgd`` assembles the one-step iteration matrix that governs the
dynamics on the model tangent space T once the model is identified,

    M = P_T - (1/||X||^2) P_T (Id + H/alpha)^{-1} (X P_T)^T (X P_T),

with H the Riemannian Hessian of the regularizer at the anchor iterate.
Its spectral radius on T is < 1 exactly when X is injective on T, which is
what ``fit_rate`` (geometric decay of iterate steps) and
``error_envelope_check`` (error bound around the oracle stop) verify
against a trace.
"""

from dataclasses import dataclass

import numpy as np

from .linops import spectral_norm


class InsufficientDataError(ValueError):
    """Not enough usable records to run the requested fit."""


class RateNotApplicableError(ValueError):
    """The spectral radius is >= 1; the geometric envelope does not apply."""


@dataclass
class ConsistencyReport:
    """Oracle stop and model-consistency interval of one trace.

    ``interval`` is the (k_lo, k_hi) span of the maximal contiguous run of
    recorded iterates with descriptor equal to the truth, containing
    ``k_best``; it is None when the descriptor at ``k_best`` differs from
    the truth.
    """

    k_best: int
    d_best: float
    interval: tuple = None
    consistent_at_best: bool = False


@dataclass
class LocalRateReport:
    """Tangent-space rate data at the consistency anchor."""

    P_T: np.ndarray
    M: np.ndarray
    rho: float
    sigma_min_T: float
    inj_ok: bool
    fitted_slope: float = None
    window: tuple = None


def consistency_report(trace, truth, reg, tol=None):
    """Descriptor-match analysis of a recorded trace against ``truth``.

    ``k_best`` is the recorded index of minimal error to the truth (ties go
    to the smallest k) and ``d_best`` that error.  The interval is the
    maximal contiguous run of recorded iterates around ``k_best`` whose
    descriptor equals ``truth``.
    """
    if not trace.records:
        raise ValueError("trace has no records")
    if truth.kind != reg.kind:
        raise ValueError("truth descriptor kind does not match the regularizer")
    matches = [reg.descriptor(r.w, tol) == truth for r in trace.records]
    errs = trace.errs()
    i_best = int(np.argmin(errs))
    k_best = int(trace.records[i_best].k)
    d_best = float(errs[i_best])
    if not matches[i_best]:
        return ConsistencyReport(k_best=k_best, d_best=d_best,
                                 interval=None, consistent_at_best=False)
    lo = i_best
    while lo > 0 and matches[lo - 1]:
        lo -= 1
    hi = i_best
    while hi < len(matches) - 1 and matches[hi + 1]:
        hi += 1
    interval = (int(trace.records[lo].k), int(trace.records[hi].k))
    return ConsistencyReport(k_best=k_best, d_best=d_best,
                             interval=interval, consistent_at_best=True)


def _tangent_basis(proj):
    evals, evecs = np.linalg.eigh(proj)
    return evecs[:, evals > 0.5]


def build_mdgd(X, reg, w_anchor, d, alpha, tol_inj=None):
    """Local iteration matrix, spectral radius and injectivity margin.

    ``w_anchor`` must carry the descriptor ``d`` (it is the first consistent
    iterate of a run).  The spectral radius is computed from the eigenvalues
    of M restricted to an orthonormal basis of T, which are real;
    ``sigma_min_T`` is the smallest singular value of X on T and
    ``inj_ok`` its comparison with ``tol_inj`` (default 1e-8 ||X||).
    """
    X = np.asarray(X, dtype=float)
    w_anchor = np.asarray(w_anchor, dtype=float).ravel()
    proj = reg.tangent_projector(d)
    hess = reg.riemannian_hessian(w_anchor, d)
    nx = spectral_norm(X)
    xt = X @ proj
    winv = np.linalg.inv(np.eye(proj.shape[0]) + hess / alpha)
    m = proj - (proj @ winv @ (xt.T @ xt)) / nx**2

    basis = _tangent_basis(proj)
    if basis.shape[1] == 0:
        rho = 0.0
        sigma_min = np.inf
    else:
        eig = np.linalg.eigvals(basis.T @ m @ basis)
        rho = float(np.max(np.abs(eig.real)))
        if basis.shape[1] > X.shape[0]:
            sigma_min = 0.0
        else:
            sigma_min = float(np.linalg.svd(X @ basis, compute_uv=False)[-1])
    tol_inj = 1e-8 * nx if tol_inj is None else tol_inj
    return LocalRateReport(P_T=proj, M=m, rho=rho, sigma_min_T=sigma_min,
                           inj_ok=bool(sigma_min > tol_inj))


STAGNATION_FLOOR = 1e-13


def fit_rate(trace, report, interval, truth_scale=None):
    """Least-squares slope of log(step length) over a consistency interval.

    Records past the stagnation floor ``1e-13 (1 + truth_scale)`` (double
    precision masks the decay there) are truncated before fitting; at least
    four recorded iterates must lie in the interval and at least two must
    survive the truncation.  The slope and fit window are stored on
    ``report`` and the slope returned.
    """
    k_lo, k_hi = interval
    recs = [r for r in trace.records
            if k_lo <= r.k <= k_hi and np.isfinite(r.step_diff)]
    if len(recs) < 4:
        raise InsufficientDataError("interval holds fewer than four recorded iterates")
    if truth_scale is None:
        truth_scale = max(float(np.linalg.norm(r.w)) for r in recs)
    floor = STAGNATION_FLOOR * (1.0 + truth_scale)
    usable = []
    for r in recs:
        if r.step_diff < floor:
            break
        usable.append(r)
    if len(usable) < 2:
        raise InsufficientDataError("all steps are below the stagnation floor")
    ks = np.array([r.k for r in usable], dtype=float)
    logs = np.log(np.array([r.step_diff for r in usable]))
    slope = float(np.polyfit(ks, logs, 1)[0])
    report.fitted_slope = slope
    report.window = (int(usable[0].k), int(usable[-1].k))
    return slope


def error_envelope_check(trace, report, k_best, d_best, interval):
    """Fit the geometric error envelope around the oracle stop.

    Finds the smallest D such that for every recorded k in the interval

        err(k) <= d_best + D rho^{min(k, k_best) - k_lo}
                           (1 - rho^{|k - k_best|}) / (1 - rho),

    returns ``(ok, D)`` where ok means D is finite (the bound with this
    single constant holds and is attained).  Requires rho < 1.  When a fit
    window is present on ``report`` the check is restricted to it: past the
    stagnation floor the dynamics are rounding noise while the geometric
    unit keeps shrinking, which would inflate D meaninglessly.
    """
    rho = report.rho
    if rho >= 1.0:
        raise RateNotApplicableError("spectral radius >= 1")
    anchor, k_hi = interval
    k_lo = anchor
    if report.window is not None:
        k_lo = max(k_lo, report.window[0])
        k_hi = min(k_hi, report.window[1])
    d_max = 0.0
    for r in trace.records:
        if not k_lo <= r.k <= k_hi:
            continue
        unit = rho ** (min(r.k, k_best) - anchor) * (1.0 - rho ** abs(r.k - k_best)) / (1.0 - rho)
        excess = r.err_to_truth - d_best
        if excess <= 0.0:
            continue
        if unit <= 0.0:
            return False, np.inf
        d_max = max(d_max, excess / unit)
    return bool(np.isfinite(d_max)), float(d_max)
