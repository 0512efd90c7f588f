"""Dual-ascent solvers for equality-constrained recovery with a strongly
convexified regularizer.

The primal problem is ``min R(w) + (alpha/2) ||w||^2  s.t.  X w = y`` and all
three dynamics act on its Fenchel dual

    phi(v) = (R + alpha/2 ||.||^2)^* (-X^T v) + <y, v>,

whose gradient is ``-X prox_{R/alpha}(-X^T v / alpha) + y``.  With the step
``gamma = alpha / ||X||^2`` (one over the gradient's Lipschitz constant):

* ``dgd_run``  -- plain gradient descent on phi,
* ``adgd_run`` -- Nesterov-type inertial gradient descent, inertia
  (k - 1) / (k + theta),
* ``ode_run``  -- the underlying gradient flow v' = -grad phi(v), integrated
  by classical 4th-order Runge-Kutta.

Every run emits a :class:`Trace` of primal/dual iterates with per-iterate
error, residual, step length and dual-objective statistics.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from .linops import spectral_norm


class DivergenceError(RuntimeError):
    """An iterate overflowed; the run configuration is inconsistent."""

    def __init__(self, message, iteration):
        super().__init__(message)
        self.iteration = iteration


class ConvergenceFailure(RuntimeError):
    """A fixed-point loop hit its iteration cap before meeting tolerance."""

    def __init__(self, message, last_step):
        super().__init__(message)
        self.last_step = last_step


@dataclass
class SolverConfig:
    """Run parameters shared by the three dynamics.

    ``gamma`` and ``ode_step`` default to ``alpha / ||X||^2`` at run time;
    an explicit gamma may not exceed that value (descent-step bound).
    ``theta`` is the inertial offset of the accelerated scheme and must
    be > 2.
    """

    alpha: float
    gamma: float = None
    theta: float = 5.0
    max_iters: int = 1000
    record_every: int = 1
    ode_step: float = None

    def resolve(self, op_norm):
        """Fill the step defaults for an operator of the given spectral norm."""
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if self.max_iters < 0 or self.record_every < 1:
            raise ValueError("bad iteration counts")
        gamma = self.alpha / op_norm**2 if self.gamma is None else self.gamma
        if gamma <= 0 or gamma > self.alpha / op_norm**2 + 1e-12:
            raise ValueError("gamma must lie in (0, alpha/||X||^2]")
        if self.theta <= 2:
            raise ValueError("theta must exceed 2")
        ode_step = gamma if self.ode_step is None else self.ode_step
        if ode_step <= 0:
            raise ValueError("ode_step must be positive")
        return replace(self, gamma=gamma, ode_step=ode_step)


@dataclass
class IterateRecord:
    """State of one recorded iterate.

    ``v`` holds the dual iterate driving the primal reconstruction (u for the
    accelerated scheme), ``z = -X^T v`` the induced subgradient.  ``step_diff``
    of the first record is NaN (no predecessor).
    """

    k: int
    t: float
    w: np.ndarray
    v: np.ndarray
    z: np.ndarray
    err_to_truth: float
    residual: float
    step_diff: float
    dual_objective: float


@dataclass
class Trace:
    """Recorded iterates of one solver run, sorted by iteration index."""

    records: list = field(default_factory=list)
    config: SolverConfig = None
    method: str = ""
    problem_id: str = ""

    def ks(self):
        return np.array([r.k for r in self.records])

    def errs(self):
        return np.array([r.err_to_truth for r in self.records])

    def step_diffs(self):
        return np.array([r.step_diff for r in self.records])

    def record_at(self, k):
        for r in self.records:
            if r.k == k:
                return r
        raise KeyError(f"no record at iteration {k}")


def conjugate_value(reg, alpha, x):
    """Value of (R + alpha/2 ||.||^2)^* at x, by Fenchel-Young equality.

    The supremum defining the conjugate is attained at
    p = prox_{R/alpha}(x/alpha), so the value is
    <x, p> - R(p) - alpha/2 ||p||^2.
    """
    x = np.asarray(x, dtype=float).ravel()
    p = reg.prox(1.0 / alpha, x / alpha)
    return float(x @ p - reg.value(p) - 0.5 * alpha * (p @ p))


def dual_objective(problem, reg, alpha, v):
    """Dual objective phi(v) of the equality-constrained problem at ``v``."""
    v = np.asarray(v, dtype=float).ravel()
    z = -(problem.X.T @ v)
    return conjugate_value(reg, alpha, z) + float(problem.y_noisy @ v)


def _op_norm(problem):
    cached = getattr(problem, "op_norm", None)
    return cached if cached is not None else spectral_norm(problem.X)


def _guard(vec, k, scale):
    if not np.all(np.isfinite(vec)) or np.linalg.norm(vec) > 1e12 * scale:
        raise DivergenceError(f"iterate overflow at iteration {k}", iteration=k)


def _make_record(k, t, w, v, z, w_prev, problem, reg, alpha):
    err = float(np.linalg.norm(w - problem.w_true))
    residual = float(np.linalg.norm(problem.X @ w - problem.y_noisy))
    step = np.nan if w_prev is None else float(np.linalg.norm(w - w_prev))
    phi = conjugate_value(reg, alpha, z) + float(problem.y_noisy @ v)
    return IterateRecord(k=k, t=t, w=w.copy(), v=v.copy(), z=z.copy(),
                         err_to_truth=err, residual=residual,
                         step_diff=step, dual_objective=phi)


def dgd_run(problem, reg, cfg):
    """Dual gradient descent from v = 0; returns the recorded trace.

    Each iteration forms z = -X^T v, reconstructs
    w = prox_{R/alpha}(z/alpha), and ascends the constraint residual:
    v <- v + gamma (X w - y).  Iterates k = 0..max_iters are computed and
    every ``record_every``-th one (plus the last) is recorded.
    """
    cfg = cfg.resolve(_op_norm(problem))
    X, y, alpha = problem.X, problem.y_noisy, cfg.alpha
    scale = 1.0 + float(np.linalg.norm(y))
    v = np.zeros(X.shape[0])
    w_prev = None
    records = []
    for k in range(cfg.max_iters + 1):
        z = -(X.T @ v)
        w = reg.prox(1.0 / alpha, z / alpha)
        _guard(w, k, scale)
        if k % cfg.record_every == 0 or k == cfg.max_iters:
            records.append(_make_record(k, k * cfg.gamma, w, v, z, w_prev,
                                        problem, reg, alpha))
        if k == cfg.max_iters:
            break
        v = v + cfg.gamma * (X @ w - y)
        _guard(v, k + 1, scale)
        w_prev = w
    return Trace(records=records, config=cfg, method="dgd",
                 problem_id=getattr(problem, "problem_id", ""))


def adgd_run(problem, reg, cfg):
    """Accelerated dual gradient descent (inertia (k-1)/(k+theta)) from 0.

    Per iteration: r = prox_{R/alpha}(-X^T v / alpha), the gradient step
    u = v + gamma (X r - y), the extrapolation
    v <- u + (k-1)/(k+theta) (u - u_prev), and the recorded primal iterate
    w = prox_{R/alpha}(-X^T u / alpha).  Records carry u as the dual state.
    """
    cfg = cfg.resolve(_op_norm(problem))
    X, y, alpha = problem.X, problem.y_noisy, cfg.alpha
    scale = 1.0 + float(np.linalg.norm(y))
    v = np.zeros(X.shape[0])
    u_prev = np.zeros(X.shape[0])
    w_prev = None
    records = []
    for k in range(cfg.max_iters + 1):
        r = reg.prox(1.0 / alpha, -(X.T @ v) / alpha)
        u = v + cfg.gamma * (X @ r - y)
        _guard(u, k, scale)
        z = -(X.T @ u)
        w = reg.prox(1.0 / alpha, z / alpha)
        if k % cfg.record_every == 0 or k == cfg.max_iters:
            records.append(_make_record(k, k * cfg.gamma, w, u, z, w_prev,
                                        problem, reg, alpha))
        if k == cfg.max_iters:
            break
        v = u + ((k - 1.0) / (k + cfg.theta)) * (u - u_prev)
        u_prev = u
        w_prev = w
    return Trace(records=records, config=cfg, method="adgd",
                 problem_id=getattr(problem, "problem_id", ""))


def ode_run(problem, reg, cfg, horizon):
    """Integrate the dual gradient flow v' = -grad phi(v) by classical RK4.

    Steps of size ``ode_step`` (default gamma) are taken up to ``horizon``;
    the state at t = k * ode_step is recorded with the same statistics as the
    discrete runs, k playing the role of the iteration index.
    """
    cfg = cfg.resolve(_op_norm(problem))
    if horizon <= 0:
        raise ValueError("horizon must be positive")
    X, y, alpha = problem.X, problem.y_noisy, cfg.alpha
    h = cfg.ode_step
    n_steps = max(int(round(horizon / h)), 0)
    scale = 1.0 + float(np.linalg.norm(y))

    def rhs(v):
        return X @ reg.prox(1.0 / alpha, -(X.T @ v) / alpha) - y

    v = np.zeros(X.shape[0])
    w_prev = None
    records = []
    for k in range(n_steps + 1):
        z = -(X.T @ v)
        w = reg.prox(1.0 / alpha, z / alpha)
        _guard(w, k, scale)
        if k % cfg.record_every == 0 or k == n_steps:
            records.append(_make_record(k, k * h, w, v, z, w_prev,
                                        problem, reg, alpha))
        if k == n_steps:
            break
        k1 = rhs(v)
        k2 = rhs(v + 0.5 * h * k1)
        k3 = rhs(v + 0.5 * h * k2)
        k4 = rhs(v + h * k3)
        v = v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        _guard(v, k + 1, scale)
        w_prev = w
    return Trace(records=records, config=cfg, method="ode",
                 problem_id=getattr(problem, "problem_id", ""))


def stopping_schedule(delta, c, method):
    """A-priori early-stopping index for noise level ``delta``.

    Plain descent stops after floor(c / delta) iterations (requires
    c >= delta); the accelerated scheme after ceil(c / sqrt(delta)).
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    if c <= 0:
        raise ValueError("c must be positive")
    m = method.lower()
    if m == "dgd":
        if c < delta:
            raise ValueError("schedule requires c >= delta")
        return int(np.floor(c / delta))
    if m == "adgd":
        return int(np.ceil(c / np.sqrt(delta)))
    raise ValueError(f"unknown method {method!r}")


def solve_noiseless(problem, reg, alpha, tol=1e-12, max_iters=200_000):
    """Run dual gradient descent on the clean observation to convergence.

    Stops when ||v_{k+1} - v_k|| <= tol (1 + ||v_k||) and returns the pair
    (w_limit, v_limit): the minimizer of R + alpha/2 ||.||^2 on the clean
    constraint set and the dual solution it certifies.  Raises
    :class:`ConvergenceFailure` (carrying the last step size) if the cap is
    reached first.
    """
    op_norm = _op_norm(problem)
    gamma = alpha / op_norm**2
    X, y = problem.X, problem.y_clean
    v = np.zeros(X.shape[0])
    last_step = np.inf
    for _ in range(max_iters):
        w = reg.prox(1.0 / alpha, -(X.T @ v) / alpha)
        v_new = v + gamma * (X @ w - y)
        last_step = float(np.linalg.norm(v_new - v))
        if last_step <= tol * (1.0 + float(np.linalg.norm(v))):
            w = reg.prox(1.0 / alpha, -(X.T @ v_new) / alpha)
            return w, v_new
        v = v_new
    raise ConvergenceFailure(
        f"no convergence within {max_iters} iterations (last step {last_step:.3e})",
        last_step=last_step)
