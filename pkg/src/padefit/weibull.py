"""Weibull reliability toolkit: plotting positions, parameter fits, MTTF.

The two-parameter Weibull CDF used throughout is

    W(x) = 1 - exp(-(x / theta)**shape),    x >= 0,

with scale theta > 0 and shape > 0.  Failure-time samples are paired with
median-rank plotting positions to form empirical CDF points, which can be
fitted either in the classical log-log coordinates or by any of the
rational-model routes in the fitting module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateAbscissae,
    EmptyInput,
    LengthMismatch,
    NoBracket,
    NonconvergentTail,
    PoleOnRange,
)
from .rational import RationalModel, pole_scan

#: Bisection bracket for the MLE shape parameter.
SHAPE_BRACKET = (0.01, 100.0)

#: Absolute tolerance on the MLE shape bisection.
SHAPE_TOL = 1e-10

#: A model CDF must come within this of 1 for the MTTF integral to close.
TAIL_EPS = 1e-6

#: Absolute tolerance of the adaptive Simpson quadrature.
QUAD_TOL = 1e-6


@dataclass(frozen=True)
class WeibullParams:
    """Scale and shape of a two-parameter Weibull distribution."""

    theta: float
    shape: float

    def __post_init__(self):
        if not (self.theta > 0 and self.shape > 0):
            raise ValueError("theta and shape must be positive")


def weibull_cdf(params: WeibullParams, x):
    """W(x) = 1 - exp(-(x/theta)**shape), clamped to 0 for x < 0."""
    xs = np.asarray(x, dtype=float)
    out = np.where(xs > 0.0, -np.expm1(-((np.maximum(xs, 0.0) / params.theta) ** params.shape)), 0.0)
    return out if np.ndim(x) else float(out)


def weibull_pdf(params: WeibullParams, x):
    """Density of the two-parameter Weibull, 0 for x <= 0."""
    xs = np.asarray(x, dtype=float)
    t = np.maximum(xs, 0.0) / params.theta
    k = params.shape
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(xs > 0.0, (k / params.theta) * t ** (k - 1.0) * np.exp(-(t**k)), 0.0)
    return out if np.ndim(x) else float(out)


def median_ranks(m: int, a: float = 0.3) -> np.ndarray:
    """Plotting positions (k - a) / (m + 1 - 2a) for k = 1..m.

    a = 0.3 gives the usual median-rank approximation; a = 0.5 gives
    Hazen positions, a = 0 the expected ranks k/(m + 1).  Positions are
    strictly increasing and symmetric: F_k + F_{m+1-k} = 1.
    """
    if m < 1:
        raise EmptyInput("need at least one rank")
    if not (0.0 <= a <= 0.5):
        raise ValueError("a must lie in [0, 0.5]")
    k = np.arange(1, m + 1, dtype=float)
    return (k - a) / (m + 1.0 - 2.0 * a)


def transform_fit(times: np.ndarray, ranks: np.ndarray) -> WeibullParams:
    """Fit by simple regression in log-log coordinates.

    Taking logarithms of the CDF twice turns it into a straight line:

        ln(ln(1 / (1 - F))) = shape * ln(x) - shape * ln(theta),

    so the slope of the regression line is the shape and the intercept
    recovers the scale.  Exact for data generated from a Weibull CDF.
    """
    t = np.asarray(times, dtype=float)
    f = np.asarray(ranks, dtype=float)
    if t.shape != f.shape:
        raise LengthMismatch(f"shape {t.shape} vs {f.shape}")
    if t.size < 2:
        raise EmptyInput("need at least two points")
    if np.any(t <= 0.0):
        raise ValueError("times must be positive")
    if np.any((f <= 0.0) | (f >= 1.0)):
        raise ValueError("ranks must lie strictly inside (0, 1)")
    if np.all(t == t[0]):
        raise DegenerateAbscissae("all times equal")
    z = np.log(t)
    y = np.log(np.log(1.0 / (1.0 - f)))
    zbar = float(np.mean(z))
    ybar = float(np.mean(y))
    slope = float(np.dot(z - zbar, y - ybar) / np.dot(z - zbar, z - zbar))
    intercept = ybar - slope * zbar
    return WeibullParams(theta=math.exp(-intercept / slope), shape=slope)


def mle_fit(times: np.ndarray) -> WeibullParams:
    """Maximum likelihood fit of (theta, shape) to raw failure times.

    The shape solves the profile likelihood equation

        sum(x**k ln x) / sum(x**k) - 1/k - mean(ln x) = 0,

    found by bisection on SHAPE_BRACKET to SHAPE_TOL; the scale then
    follows in closed form as theta = (mean(x**k))**(1/k).  Times are
    pre-scaled by their maximum for overflow safety; the profile equation
    is exactly scale-invariant, so this does not move the root.
    """
    t = np.asarray(times, dtype=float)
    if t.size < 2:
        raise EmptyInput("need at least two times")
    if np.any(t <= 0.0):
        raise ValueError("times must be positive")
    scale = float(np.max(t))
    u = t / scale
    log_u = np.log(u)
    mean_log = float(np.mean(log_u))

    def profile(k: float) -> float:
        w = u**k
        return float(np.dot(w, log_u) / np.sum(w)) - 1.0 / k - mean_log

    lo, hi = SHAPE_BRACKET
    flo, fhi = profile(lo), profile(hi)
    if flo == 0.0:
        shape = lo
    elif fhi == 0.0:
        shape = hi
    elif flo * fhi > 0.0:
        raise NoBracket(f"profile equation has no sign change on {SHAPE_BRACKET}")
    else:
        while hi - lo > SHAPE_TOL:
            mid = 0.5 * (lo + hi)
            fmid = profile(mid)
            if fmid == 0.0:
                lo = hi = mid
                break
            if flo * fmid < 0.0:
                hi = mid
            else:
                lo, flo = mid, fmid
        shape = 0.5 * (lo + hi)
    theta = scale * float(np.mean(u**shape)) ** (1.0 / shape)
    return WeibullParams(theta=theta, shape=shape)


def _adaptive_simpson(fn, a: float, b: float, tol: float) -> float:
    """Adaptive Simpson quadrature with Richardson error control."""

    def simpson(lo, hi, flo, fmid, fhi):
        return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi)

    def recurse(lo, hi, flo, fmid, fhi, whole, tol, depth):
        mid = 0.5 * (lo + hi)
        lmid = 0.5 * (lo + mid)
        rmid = 0.5 * (mid + hi)
        fl = fn(lmid)
        fr = fn(rmid)
        left = simpson(lo, mid, flo, fl, fmid)
        right = simpson(mid, hi, fmid, fr, fhi)
        if depth <= 0:
            return left + right
        err = left + right - whole
        if abs(err) <= 15.0 * tol:
            return left + right + err / 15.0
        return recurse(lo, mid, flo, fl, fmid, left, tol / 2.0, depth - 1) + recurse(
            mid, hi, fmid, fr, fhi, right, tol / 2.0, depth - 1
        )

    fa, fm, fb = fn(a), fn(0.5 * (a + b)), fn(b)
    whole = simpson(a, b, fa, fm, fb)
    return recurse(a, b, fa, fm, fb, whole, tol, depth=48)


def _rational_tail_integral(model: RationalModel, x_cut: float) -> float:
    """Closed-form estimate of the remaining integral of 1 - R past x_cut.

    With the shared tail coefficient, the numerator of 1 - R loses its top
    power exactly, so 1 - R decays like (c_n / c_d) * x**(dn - dd) and the
    remainder integrates to a single power term.  Returns 0 for the exact
    case 1 - R == 0; raises NonconvergentTail when the decay is too slow
    for the remaining integral to be finite.
    """
    p, q = model._dense
    diff = q - p
    if not np.any(diff):
        return 0.0
    dn = int(np.max(np.nonzero(diff)[0]))
    dd = int(np.max(np.nonzero(q)[0]))
    decay = dd - dn
    expo = model.x_power * decay - 1.0
    if expo <= 0.0:
        raise NonconvergentTail(f"1 - R decays like x**{-model.x_power * decay:g}, integral diverges")
    # integral of c * x**(-power*decay) dx from x_cut:
    # c * x_cut**(1 - power*decay) / (power*decay - 1)
    c = diff[dn] / q[dd]
    return float(c * x_cut ** (-expo) / expo)


def mttf(obj: WeibullParams | RationalModel, *, x_max: float | None = None) -> float:
    """Mean time to failure of a CDF.

    For Weibull parameters this is the closed form theta * Gamma(1 + 1/shape)
    (stdlib Gamma; accurate to better than 1e-10 relative over the arguments
    that arise here).  For a rational CDF model it is the integral of
    1 - R(x) from 0, carried out by adaptive Simpson up to the point past
    which |1 - R| stays below TAIL_EPS, plus the closed-form value of the
    remaining leading-order tail.  The cutoff must sit in the decayed
    regime: a model that overshoots 1 crosses 1 - R = 0 transiently long
    before the leading power dominates, and cutting there would evaluate
    the tail formula far outside its range of validity.  `x_max` caps the
    cutoff search; pass about 50 times the largest data abscissa.

    Raises
    ------
    PoleOnRange
        If the model denominator changes sign inside the integration range.
    NonconvergentTail
        If 1 - R decays too slowly for a finite integral.
    """
    if isinstance(obj, WeibullParams):
        return obj.theta * math.gamma(1.0 + 1.0 / obj.shape)
    model = obj
    if x_max is None or not (x_max > 0):
        raise ValueError("rational MTTF needs a positive x_max search cap")
    if abs(model(0.0)) > 1e-12:
        raise ValueError("model CDF must start at R(0) = 0")
    if model.tail is None:
        raise ValueError("model CDF must carry a tail term so R -> 1 at infinity")
    scan = pole_scan(model, (0.0, x_max), 4097)
    if scan.sign_changes:
        raise PoleOnRange(f"denominator changes sign at x ~ {scan.sign_changes[0][2]:.6g}")
    xs = np.linspace(0.0, x_max, 4097)[1:]
    shortfall = 1.0 - np.asarray(model(xs))
    loud = np.nonzero(np.abs(shortfall) >= TAIL_EPS)[0]
    if loud.size == 0:
        x_cut = float(xs[0])
    elif loud[-1] == xs.size - 1:
        x_cut = float(xs[-1])
    else:
        x_cut = float(xs[loud[-1] + 1])

    def integrand(x):
        return 1.0 - model(float(x))

    tail = _rational_tail_integral(model, x_cut)
    body = _adaptive_simpson(integrand, 0.0, x_cut, QUAD_TOL)
    return body + tail
