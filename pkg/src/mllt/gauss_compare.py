"""Distance between the smoothed count law and its matching Gaussian.

The smoothed law spreads each count's mass uniformly over the unit cube
around it; total variation against Normal(Np, N Sigma) is computed by
deterministic per-cell quadrature so rate fits carry no sampling noise.
Also holds the outside-bulk tail mass with its exponential bound and the
two randomization kernels (add uniform noise / round back).
"""

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from . import _backend
from .errors import EtaRangeError, OutOfSimplexError
from .exact import log_pmf_batch, simplex_lattice
from .model import ModelParams, check_in_simplex, covariance, gaussian_density_batch


@dataclass(frozen=True)
class SmoothedLaw:
    """Law of counts plus independent uniform(-1/2, 1/2) noise per axis."""

    m: ModelParams


@dataclass(frozen=True)
class TVReport:
    tv: float
    cell_contribution: float
    outside_mass: float
    cells_evaluated: int
    #: neglected overlap of pmf and Gaussian mass beyond the evaluation window
    truncation_bound: float


def _window_lattice(m: ModelParams, n_sds: float = 10.0) -> np.ndarray:
    """Lattice points within n_sds marginal standard deviations of the mean."""
    axes = []
    for i in range(m.d):
        sd = math.sqrt(m.N * m.p[i] * (1.0 - m.p[i]))
        lo = max(int(math.floor(m.N * m.p[i] - n_sds * sd - 1)), 0)
        hi = min(int(math.ceil(m.N * m.p[i] + n_sds * sd + 1)), m.N)
        axes.append(np.arange(lo, hi + 1, dtype=np.int64))
    if m.d == 1:
        ks = axes[0][:, None]
    else:
        grids = np.meshgrid(*axes, indexing="ij")
        ks = np.stack([g.ravel() for g in grids], axis=1)
    return ks[ks.sum(axis=1) <= m.N]


def tv_distance_numeric(m: ModelParams, nodes_per_axis: int = 8) -> TVReport:
    """Total variation between the smoothed law and Normal(Np, N Sigma).

    Half of: per-cell integrals of |pmf - gaussian| over the unit cubes,
    plus the Gaussian mass left outside the cube union. Cells are limited
    to a +-10-marginal-sd window; what that truncation can hide is
    reported separately, not folded into tv.

    Cells where the pmf level crosses the density give the integrand a
    kink, so accuracy saturates near 0.5% relative; plenty for the rate
    harness, which only fits slopes and order-one ratios.
    """
    if nodes_per_axis < 4:
        raise ValueError("nodes_per_axis must be >= 4")
    c = covariance(m)
    ks = _window_lattice(m)
    pk = np.exp(log_pmf_batch(m, ks))

    x0, w0 = leggauss(nodes_per_axis)
    grids = np.meshgrid(*([x0 * 0.5] * m.d), indexing="ij")
    offsets = np.stack([g.ravel() for g in grids], axis=1)
    wgrids = np.meshgrid(*([w0 * 0.5] * m.d), indexing="ij")
    w = np.ones(offsets.shape[0])
    for g in wgrids:
        w = w * g.ravel()

    sqrt_n = math.sqrt(m.N)
    scale = sqrt_n**m.d  # converts the normalized density to count coords
    cell_abs = np.zeros(ks.shape[0])
    cell_gauss = np.zeros(ks.shape[0])
    chunk = max(1, int(2e6) // offsets.shape[0])
    for start in range(0, ks.shape[0], chunk):
        blk = ks[start : start + chunk]
        xs = blk[:, None, :] + offsets[None, :, :]
        ys = (xs.reshape(-1, m.d) - m.N * m.p) / sqrt_n
        dens = gaussian_density_batch(c, ys).reshape(blk.shape[0], -1) / scale
        cell_abs[start : start + chunk] = _backend.abs_diff_cell_integrals(
            pk[start : start + chunk], dens, w
        )
        cell_gauss[start : start + chunk] = dens @ w

    pmf_out = max(0.0, 1.0 - float(np.sum(pk)))
    gauss_out = max(0.0, 1.0 - float(np.sum(cell_gauss)))
    cell_contribution = float(np.sum(cell_abs)) + pmf_out
    outside_mass = gauss_out
    tv = 0.5 * (cell_contribution + outside_mass)
    return TVReport(
        tv=tv,
        cell_contribution=cell_contribution,
        outside_mass=outside_mass,
        cells_evaluated=int(ks.shape[0]),
        truncation_bound=2.0 * min(pmf_out, gauss_out),
    )


def _bulk_mask(m: ModelParams, ks: np.ndarray, eta: float, margin: float = 0.0) -> np.ndarray:
    """Points whose cube (inflated by margin per axis) sits inside the bulk."""
    width = eta * m.N ** (2.0 / 3.0)
    dev = ks - m.N * m.p
    ok = np.all(np.abs(dev) + margin <= width * m.p, axis=1)
    return ok & (np.abs(dev.sum(axis=1)) + m.d * margin <= width * m.q)


def tail_mass_outside_bulk(m: ModelParams, eta: float):
    """Exact pmf mass outside the bulk and its union/concentration bound."""
    if not (0.0 < eta < 1.0):
        raise EtaRangeError(f"eta must be in (0, 1), got {eta}")
    ks = simplex_lattice(m.d, m.N)
    outside = ~_bulk_mask(m, ks, eta)
    exact_mass = float(np.sum(np.exp(log_pmf_batch(m, ks[outside]))))
    pfull = np.concatenate([m.p, [m.q]])
    azuma_bound = float(np.sum(2.0 * np.exp(-(eta**2) * pfull**2 * m.N ** (1.0 / 3.0) / 2.0)))
    return exact_mass, azuma_bound


def hellinger_upper_bound_terms(m: ModelParams, eta: float):
    """Concrete tail piece of the Hellinger-route bound.

    tail_term is twice the (conservatively computed) probability that the
    smoothed variable leaves the bulk: every count whose cube is not
    wholly inside contributes its full mass. bound_valid checks the
    exponential cap against that probability (vacuous once the cap
    exceeds 1).
    """
    if not (0.0 < eta < 1.0):
        raise EtaRangeError(f"eta must be in (0, 1), got {eta}")
    ks = simplex_lattice(m.d, m.N)
    inside = _bulk_mask(m, ks, eta, margin=0.5)
    tail_term = 2.0 * float(np.sum(np.exp(log_pmf_batch(m, ks[~inside]))))
    cap = 100.0 * m.d * math.exp(-m.min_mass**2 * m.N ** (1.0 / 3.0) / (100.0 * m.d**2))
    return tail_term, bool(tail_term / 2.0 <= cap)


def kernel_T1(m: ModelParams, k, noise) -> np.ndarray:
    """Add uniform cube noise to a count vector (count -> point kernel)."""
    ki = check_in_simplex(m, k)
    u = np.atleast_1d(np.asarray(noise, dtype=np.float64))
    if u.shape != (m.d,):
        raise OutOfSimplexError(f"expected {m.d} noise draws, got shape {u.shape}")
    if np.any(np.abs(u) >= 0.5):
        raise ValueError("noise draws must lie in (-1/2, 1/2)")
    return ki + u


def kernel_T2(m: ModelParams, y) -> np.ndarray:
    """Round a real vector back to the nearest feasible count vector.

    Componentwise round half-away-from-zero, clamp negatives to 0, then
    while the total exceeds N decrement the largest component (ties broken
    toward the lowest index).
    """
    y = np.atleast_1d(np.asarray(y, dtype=np.float64))
    k = np.copysign(np.floor(np.abs(y) + 0.5), y).astype(np.int64)
    k = np.maximum(k, 0)
    while k.sum() > m.N:
        k[int(np.argmax(k))] -= 1
    return k
