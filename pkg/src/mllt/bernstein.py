"""Smoothed cdf/density estimators on the simplex and divergence statistics.

The estimators replace the empirical cdf (resp. bin masses) by mixtures
with multinomial weights evaluated at the query point, so their pointwise
variance involves lattice sums of squared and cubed weights. The three
limit constants those sums converge to are provided in closed form next
to their finite-N values. The power-divergence family covers Pearson,
likelihood-ratio and Freeman-Tukey statistics under one parameter.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln
from scipy.stats import binom

from .errors import CountsError, OutOfSimplexError
from .exact import simplex_lattice
from .model import ModelParams


@dataclass(frozen=True)
class Sample:
    """Points in the closed simplex {x : x_i >= 0, sum x_i <= 1}."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=np.float64))
        if pts.ndim != 2 or pts.shape[0] == 0:
            raise OutOfSimplexError("sample must be a nonempty (n, d) array")
        if np.any(pts < 0.0) or np.any(pts.sum(axis=1) > 1.0 + 1e-12):
            raise OutOfSimplexError("sample points must lie in the closed simplex")
        pts = pts.copy()
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)


def _check_point(d: int, x) -> np.ndarray:
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if x.shape != (d,):
        raise OutOfSimplexError(f"expected a point with {d} coordinates")
    if np.any(x < 0.0) or x.sum() > 1.0 + 1e-12:
        raise OutOfSimplexError("evaluation point must lie in the closed simplex")
    return x


def _weights_at(x: np.ndarray, n: int, ks: np.ndarray) -> np.ndarray:
    """Multinomial weights p_n(k) with the probability vector set to x.

    Allows boundary points: a zero coordinate forces the matching count
    to zero (0^0 = 1 convention).
    """
    rest = n - ks.sum(axis=1)
    q = max(0.0, 1.0 - float(x.sum()))
    logw = gammaln(n + 1) - gammaln(rest + 1) - gammaln(ks + 1).sum(axis=1)
    ok = np.ones(ks.shape[0], dtype=bool)
    for i in range(x.shape[0]):
        if x[i] > 0.0:
            logw = logw + ks[:, i] * math.log(x[i])
        else:
            ok &= ks[:, i] == 0
    if q > 0.0:
        logw = logw + rest * math.log(q)
    else:
        ok &= rest == 0
    w = np.where(ok, np.exp(np.where(ok, logw, 0.0)), 0.0)
    return w


def cdf_estimator(s: Sample, m: ModelParams, x) -> float:
    """Smoothed empirical cdf: multinomial mixture of cdf values at k/N."""
    x = _check_point(m.d, x)
    ks = simplex_lattice(m.d, m.N)
    pts = s.points
    # empirical cdf at each lattice point k/N
    below = np.all(pts[None, :, :] <= ks[:, None, :] / m.N + 1e-12, axis=2)
    ecdf = below.mean(axis=1)
    return float(np.dot(ecdf, _weights_at(x, m.N, ks)))


def density_estimator(s: Sample, m: ModelParams, x) -> float:
    """Smoothed histogram: bin masses on the 1/N grid, weight order N-1."""
    x = _check_point(m.d, x)
    n1 = m.N - 1
    ks = simplex_lattice(m.d, n1)
    pts = s.points
    lo = ks[:, None, :] / m.N
    hi = (ks[:, None, :] + 1) / m.N
    inside = np.all((pts[None, :, :] > lo) & (pts[None, :, :] <= hi), axis=2)
    mass = inside.mean(axis=1)
    scale = math.exp(gammaln(n1 + m.d + 1) - gammaln(n1 + 1))
    return float(scale * np.dot(mass, _weights_at(x, n1, ks)))


def limit_constant_sum_sq(m: ModelParams):
    """(N-1)^(d/2) * sum of squared order-(N-1) weights, and its limit."""
    n1 = m.N - 1
    ks = simplex_lattice(m.d, n1)
    w = _weights_at(m.p, n1, ks)
    finite = float(n1 ** (m.d / 2.0) * np.sum(w * w))
    limit = ((4.0 * math.pi) ** m.d * float(np.prod(m.p)) * m.q) ** -0.5
    return finite, limit


def limit_constant_sum_cube(m: ModelParams):
    """(N-1)^d * sum of cubed order-(N-1) weights, and its limit."""
    n1 = m.N - 1
    ks = simplex_lattice(m.d, n1)
    w = _weights_at(m.p, n1, ks)
    finite = float(float(n1) ** m.d * np.sum(w**3))
    limit = 1.0 / ((2.0 * math.sqrt(3.0) * math.pi) ** m.d * float(np.prod(m.p)) * m.q)
    return finite, limit


def limit_constant_min_cross(m: ModelParams, i: int):
    """sqrt(N) * E[min(K_i, K'_i)/N - p_i] over independent copies.

    The summand depends on coordinate i only, so the simplex double sum
    collapses to an O(N^2) sum over a pair of binomial marginals.
    """
    if not 0 <= i < m.d:
        raise CountsError(f"index {i} out of range for d={m.d}")
    pi = float(m.p[i])
    a = np.arange(m.N + 1)
    w = binom.pmf(a, m.N, pi)
    mins = np.minimum.outer(a, a) / m.N - pi
    finite = float(math.sqrt(m.N) * (w @ mins @ w))
    limit = -math.sqrt(pi * (1.0 - pi) / math.pi)
    return finite, limit


def power_divergence(m: ModelParams, k_full, lam: float) -> float:
    """Power divergence T_lambda of observed d+1 counts against m.

    lambda = 1 is Pearson's chi-square, the limit at 0 the likelihood
    ratio, -1 its dual, -1/2 the Freeman-Tukey statistic. Values within
    1e-7 of the two removable singularities use the limit formulas.
    """
    k = np.atleast_1d(np.asarray(k_full))
    if k.shape != (m.d + 1,):
        raise CountsError(f"expected {m.d + 1} counts, got shape {k.shape}")
    if np.any(k != np.floor(k)) or np.any(k < 0):
        raise CountsError("counts must be nonnegative integers")
    k = k.astype(np.int64)
    if k.sum() != m.N:
        raise CountsError(f"counts must sum to N={m.N}, got {int(k.sum())}")
    e = m.N * np.concatenate([m.p, [m.q]])
    pos = k > 0
    if abs(lam) < 1e-7:
        return float(2.0 * np.sum(k[pos] * np.log(k[pos] / e[pos])))
    if abs(lam + 1.0) < 1e-7:
        if not np.all(pos):
            return math.inf
        return float(2.0 * np.sum(e * np.log(e / k)))
    if lam < -1.0 and not np.all(pos):
        return math.inf
    t = np.sum(k[pos] * ((k[pos] / e[pos]) ** lam - 1.0)) - np.sum(k[~pos])
    return float(2.0 / (lam * (lam + 1.0)) * t)
