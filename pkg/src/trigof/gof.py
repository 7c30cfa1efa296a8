"""The goodness-of-fit test: trig moments, the scaled statistic, p-values,
component Z-scores and confidence-ellipse geometry.

The statistic is T_n = n [C_n, S_n] Sigma^-1 [C_n, S_n]^T with C_n, S_n the
sample means of cos/sin(2 pi U_i) over the fitted probability integral
transform U_i = F(x_i | theta_hat).  Under the null it is asymptotically
chi-square with 2 degrees of freedom, so the asymptotic p-value has the
closed form exp(-T_n / 2).  A parametric-bootstrap p-value (refit inside
each replication) is available with add-one smoothing (r+1)/(R+1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import families, scaling
from .errors import DomainError, EstimationError, SamplingError, SingularityError
from .estimate import EstimatorKind, FitResult, KnownMask, fit

__all__ = ["TrigMoments", "TestResult", "Ellipse", "trig_moments", "run_test",
           "statistic_from_moments", "ellipse"]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class TrigMoments:
    cn: float
    sn: float
    n: int


@dataclass(frozen=True)
class TestResult:
    family: str
    kind: str
    fit: FitResult
    moments: TrigMoments
    sigma: np.ndarray
    tn: float
    p_chi2: float
    zc: float
    zs: float
    p_mc: Optional[float] = None
    mc_reps: Optional[int] = None
    mc_exceed: Optional[int] = None
    mc_failed: Optional[int] = None


@dataclass(frozen=True)
class Ellipse:
    center: tuple[float, float]
    semi_axes: tuple[float, float]
    rotation: float
    level: float
    q: float
    x_threshold: float
    y_threshold: float
    boundary: np.ndarray  # (n_points, 2)


def trig_moments(fam, theta, x) -> TrigMoments:
    """Sample means of cos and sin of 2 pi times the PIT values."""
    fam = families.get_family(fam)
    x = np.asarray(x, dtype=float)
    lo, hi = fam.support(tuple(np.atleast_1d(np.asarray(theta, float))))
    if np.any(x < lo) or np.any(x > hi):
        raise DomainError(f"data outside the support of {fam.name}")
    u = TWO_PI * np.asarray(families.cdf(fam, theta, x))
    return TrigMoments(float(np.mean(np.cos(u))), float(np.mean(np.sin(u))), len(x))


def statistic_from_moments(m: TrigMoments, sig: np.ndarray) -> float:
    v = np.array([m.cn, m.sn])
    return float(m.n * v @ scaling.solve_2x2(sig, v))


def _single_test(fam, kind, mask, x):
    res = fit(fam, kind, mask, x)
    m = trig_moments(fam, res.theta, x)
    sig = scaling.sigma_from(fam, kind, res.theta, mask)
    tn = statistic_from_moments(m, sig)
    return res, m, sig, tn


def run_test(fam, kind=EstimatorKind.ML, mask: Optional[KnownMask] = None, x=None,
             mc: Optional[dict] = None) -> TestResult:
    """Fit, scale and test the sample against the null family.

    ``mc`` may carry {"reps": int, "seed": int} to add a parametric-bootstrap
    p-value: each replication draws n points from the fitted model, refits
    with the same estimator and mask, and recomputes the statistic.
    Replications whose refit fails are skipped and counted; more than 1%
    failures aborts with EstimationError.
    """
    fam = families.get_family(fam)
    kind = EstimatorKind(kind)
    x = np.asarray(x, dtype=float)
    res, m, sig, tn = _single_test(fam, kind, mask, x)
    sqrt_n = math.sqrt(m.n)
    zc = sqrt_n * m.cn / math.sqrt(sig[0, 0])
    zs = sqrt_n * m.sn / math.sqrt(sig[1, 1])
    p_chi2 = min(1.0, math.exp(-0.5 * tn))

    p_mc = reps = exceed = failed = None
    if mc is not None:
        reps = int(mc["reps"])
        seed = mc.get("seed", 0)
        if reps < 1:
            raise DomainError("mc reps must be >= 1")
        exceed = 0
        failed = 0
        n = len(x)
        for r in range(reps):
            xr = families.sample(fam, res.theta, n, np.random.SeedSequence([seed, r]))
            try:
                _, _, sig_r, tn_r = _single_test(fam, kind, mask, xr)
            except (EstimationError, SingularityError, SamplingError, DomainError):
                failed += 1
                if failed > max(1, 0.01 * reps):
                    raise EstimationError(
                        f"more than 1% of bootstrap refits failed ({failed}/{r + 1})")
                continue
            if tn_r >= tn:
                exceed += 1
        p_mc = (exceed + 1) / (reps - failed + 1)

    return TestResult(fam.name, kind.value, res, m, sig, tn, p_chi2, zc, zs,
                      p_mc, reps, exceed, failed)


def ellipse(sig: np.ndarray, level: float, n_points: int = 256) -> Ellipse:
    """Geometry of {v : v^T Sigma^-1 v = q}, q the chi2(2) quantile of level.

    Also carries the univariate two-sided thresholds
    z_(1+level)/2 * sqrt(Sigma_kk) drawn alongside the ellipse.
    """
    if not 0.0 < level < 1.0:
        raise DomainError("level must lie in (0, 1)")
    sig = np.asarray(sig, dtype=float)
    q = -2.0 * math.log1p(-level)
    a, b, c = sig[0, 0], sig[0, 1], sig[1, 1]
    half_tr = 0.5 * (a + c)
    disc = math.hypot(0.5 * (a - c), b)
    l1, l2 = half_tr + disc, half_tr - disc
    if l2 <= 0.0:
        raise SingularityError("covariance is not positive definite")
    rotation = 0.5 * math.atan2(2.0 * b, a - c) if b != 0.0 else (0.0 if a >= c else 0.5 * math.pi)
    phi = np.linspace(0.0, TWO_PI, n_points, endpoint=False)
    circle = np.column_stack([np.cos(phi), np.sin(phi)])
    ct, st = math.cos(rotation), math.sin(rotation)
    Q = np.array([[ct, -st], [st, ct]])
    half = Q @ np.diag([math.sqrt(q * l1), math.sqrt(q * l2)])
    boundary = circle @ half.T
    from .specfun import std_normal_quantile
    z = float(std_normal_quantile(0.5 * (1.0 + level)))
    return Ellipse(
        center=(0.0, 0.0),
        semi_axes=(math.sqrt(q * l1), math.sqrt(q * l2)),
        rotation=rotation,
        level=level,
        q=q,
        x_threshold=z * math.sqrt(a),
        y_threshold=z * math.sqrt(c),
        boundary=boundary,
    )
