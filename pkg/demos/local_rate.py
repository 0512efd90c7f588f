#!/usr/bin/env python3
"""Local geometry of the descent once the model is identified.

Inside the consistency interval the iteration is governed by the tangent-
space matrix M = P_T - (1/||X||^2) P_T (Id + H/alpha)^{-1} X_T^T X_T: its
spectral radius rho < 1 (restricted injectivity) predicts the geometric
decay of the iterate steps, and the error around the oracle stop obeys a
rho-geometric envelope.  This script measures all three on a small sparse
instance and prints predicted vs. fitted rates.
"""

import math
import os

import numpy as np

from dualreg import ExperimentConfig, SolverConfig, build_problem, dgd_run
from dualreg.analysis import build_mdgd, consistency_report, error_envelope_check, fit_rate

HERE = os.path.dirname(os.path.abspath(__file__))

cfg = ExperimentConfig.from_json(os.path.join(HERE, "..", "configs", "l1_local.json"))
problem = build_problem(cfg)
truth = problem.reg.descriptor(problem.w_true)

trace = dgd_run(problem, problem.reg, SolverConfig(alpha=cfg.alpha, max_iters=cfg.max_iters))
report = consistency_report(trace, truth, problem.reg)
lo, hi = report.interval
print(f"consistency interval [{lo}, {hi}], oracle stop {report.k_best}")

anchor = trace.record_at(lo)
rate = build_mdgd(problem.X, problem.reg, anchor.w, truth, cfg.alpha)
slope = fit_rate(trace, rate, report.interval,
                 truth_scale=float(np.linalg.norm(problem.w_true)))
ok, d_const = error_envelope_check(trace, rate, report.k_best, report.d_best,
                                   report.interval)

print(f"restricted injectivity: sigma_min(X on T) = {rate.sigma_min_T:.4f} "
      f"-> contraction rho = {rate.rho:.6f}")
print(f"step decay: fitted log-slope {slope:.6f} vs log(rho) {math.log(rate.rho):.6f} "
      f"over k in {rate.window} (stagnates below ~1e-13 of the signal)")
print(f"error envelope around the oracle stop holds with D = {d_const:.4g} "
      f"({'tight' if ok else 'failed'})")

# the one-step linearization is exact for this polyhedral regularizer
k = lo + 1
d1 = trace.record_at(k).w - trace.record_at(k - 1).w
d2 = trace.record_at(k + 1).w - trace.record_at(k).w
res = np.linalg.norm(d2 - rate.M @ d1) / np.linalg.norm(d1)
print(f"one-step linearization at the anchor: relative residual {res:.2e}")
