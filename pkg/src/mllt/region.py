"""Probabilities of lattice subsets through Gaussian integrals.

A lattice set is matched with the union of its normalized cells (side
1/sqrt(N), centered at the normalized deviations); the set probability is
the Gaussian integral over that union plus the same correction groups as
the pointwise expansion, with cell-quadrature monomial integrals standing
in for the monomials.
"""

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
from numpy.polynomial.legendre import leggauss

from . import _backend
from .errors import DegreeError, OutOfSimplexError, UnsupportedRegionError
from .exact import log_pmf_batch, simplex_lattice
from .expansion import normalize_order
from .model import (
    CovarianceSpec,
    ModelParams,
    check_in_simplex,
    covariance,
    gaussian_density_batch,
)


@dataclass(frozen=True)
class Hypercube:
    """Axis box in normalized deviation coordinates."""

    lo: np.ndarray
    hi: np.ndarray


# ---------------------------------------------------------------------------
# region descriptors

@dataclass(frozen=True)
class PointSet:
    """Explicit list of lattice points."""

    points: tuple


@dataclass(frozen=True)
class LatticeBox:
    """Axis-aligned integer box lo <= k <= hi (coordinatewise, inclusive)."""

    lo: tuple
    hi: tuple


@dataclass(frozen=True)
class LatticeHalfSpace:
    """Half-space a . k <= b over lattice points."""

    a: tuple
    b: float


Region = Union[PointSet, LatticeBox, LatticeHalfSpace]


@dataclass(frozen=True)
class ContinuousBox:
    """Axis box in count coordinates; entries may be +-inf."""

    lo: tuple
    hi: tuple


@dataclass(frozen=True)
class ContinuousHalfSpace:
    """Half-space a . x <= b in count coordinates."""

    a: tuple
    b: float


def region_members(m: ModelParams, region: Region) -> np.ndarray:
    """Enumerate the feasible lattice points of a region as an (n, d) array."""
    if isinstance(region, PointSet):
        if len(region.points) == 0:
            return np.zeros((0, m.d), dtype=np.int64)
        ks = np.array([check_in_simplex(m, k) for k in region.points], dtype=np.int64)
        return ks
    if isinstance(region, LatticeBox):
        axes = []
        for i in range(m.d):
            lo = max(int(math.ceil(region.lo[i])), 0)
            hi = min(int(math.floor(region.hi[i])), m.N)
            axes.append(np.arange(lo, hi + 1, dtype=np.int64))
        if any(ax.size == 0 for ax in axes):
            return np.zeros((0, m.d), dtype=np.int64)
        grids = np.meshgrid(*axes, indexing="ij")
        ks = np.stack([g.ravel() for g in grids], axis=1)
        return ks[ks.sum(axis=1) <= m.N]
    if isinstance(region, LatticeHalfSpace):
        ks = simplex_lattice(m.d, m.N)
        a = np.asarray(region.a, dtype=np.float64)
        return ks[ks @ a <= region.b]
    raise UnsupportedRegionError(f"unknown region descriptor {type(region).__name__}")


def region_contains(region: Region, k) -> bool:
    """Membership predicate over lattice points."""
    k = np.atleast_1d(np.asarray(k))
    if isinstance(region, PointSet):
        return any(np.array_equal(k, np.atleast_1d(np.asarray(pt))) for pt in region.points)
    if isinstance(region, LatticeBox):
        return bool(np.all(k >= region.lo) and np.all(k <= region.hi))
    if isinstance(region, LatticeHalfSpace):
        return bool(k @ np.asarray(region.a) <= region.b)
    raise UnsupportedRegionError(f"unknown region descriptor {type(region).__name__}")


# ---------------------------------------------------------------------------
# cells and quadrature

def cell(m: ModelParams, k) -> Hypercube:
    """Normalized cell of side 1/sqrt(N) centered at the deviation of k."""
    ki = check_in_simplex(m, k)
    sqrt_n = math.sqrt(m.N)
    lo = (ki - 0.5 - m.N * m.p) / sqrt_n
    hi = (ki + 0.5 - m.N * m.p) / sqrt_n
    lo.setflags(write=False)
    hi.setflags(write=False)
    return Hypercube(lo=lo, hi=hi)


def _axis_panels(lo: float, hi: float, nodes: int, max_width: float):
    """Composite Gauss-Legendre points/weights on [lo, hi], panels no wider
    than max_width so a fixed node count keeps Gaussian-scale accuracy."""
    x0, w0 = leggauss(nodes)
    n_panels = max(1, int(math.ceil((hi - lo) / max_width)))
    edges = np.linspace(lo, hi, n_panels + 1)
    half = np.diff(edges) / 2.0
    mid = (edges[:-1] + edges[1:]) / 2.0
    pts = (mid[:, None] + half[:, None] * x0[None, :]).ravel()
    wts = (half[:, None] * w0[None, :]).ravel()
    return pts, wts


def gauss_monomial_integral(
    c: CovarianceSpec, box: Union[Hypercube, Sequence], alpha, nodes: int = 12
) -> float:
    """Tensor quadrature of y^alpha times the Gaussian density over a box."""
    alpha = np.atleast_1d(np.asarray(alpha, dtype=np.int64))
    if alpha.sum() > 6:
        raise DegreeError(f"monomial degree {int(alpha.sum())} exceeds 6")
    if isinstance(box, Hypercube):
        lo, hi = np.asarray(box.lo), np.asarray(box.hi)
    else:
        lo, hi = (np.atleast_1d(np.asarray(b, dtype=np.float64)) for b in box)
    d = c.sigma.shape[0]
    sds = np.sqrt(np.diag(c.sigma))
    per_axis = [_axis_panels(lo[i], hi[i], nodes, sds[i]) for i in range(d)]
    grids = np.meshgrid(*[pw[0] for pw in per_axis], indexing="ij")
    ys = np.stack([g.ravel() for g in grids], axis=1)
    wgrids = np.meshgrid(*[pw[1] for pw in per_axis], indexing="ij")
    w = np.ones(ys.shape[0])
    for g in wgrids:
        w = w * g.ravel()
    vals = gaussian_density_batch(c, ys)
    for i in range(d):
        if alpha[i] > 0:
            vals = vals * ys[:, i] ** int(alpha[i])
    return float(np.sum(w * vals))


# ---------------------------------------------------------------------------
# region probabilities

def region_prob_exact(m: ModelParams, region: Region) -> float:
    """Compensated lattice sum of the exact pmf over the region's members."""
    ks = region_members(m, region)
    if ks.shape[0] == 0:
        return 0.0
    return float(np.sum(np.exp(log_pmf_batch(m, ks))))


def _cell_quadrature_pattern(m: ModelParams, nodes: int):
    """Shared offsets/weights for the identical normalized cells."""
    x0, w0 = leggauss(nodes)
    half = 0.5 / math.sqrt(m.N)
    grids = np.meshgrid(*([x0 * half] * m.d), indexing="ij")
    offsets = np.stack([g.ravel() for g in grids], axis=1)
    wgrids = np.meshgrid(*([w0 * half] * m.d), indexing="ij")
    w = np.ones(offsets.shape[0])
    for g in wgrids:
        w = w * g.ravel()
    return offsets, w


def region_prob_approx(m: ModelParams, region: Region, order, nodes: int = 12) -> float:
    """Gaussian cell-union integral with the requested correction groups.

    Per member cell the integrand is the Gaussian density times a
    polynomial sharing the expansion's coefficient code path; the order-one
    group also carries the midpoint-vs-integral curvature correction.
    """
    order = normalize_order(order)
    ks = region_members(m, region)
    if ks.shape[0] == 0:
        return 0.0
    c = covariance(m)
    centers = (ks - m.N * m.p) / math.sqrt(m.N)
    offsets, w = _cell_quadrature_pattern(m, nodes)
    total = 0.0
    chunk = max(1, int(2e6) // offsets.shape[0])
    for start in range(0, centers.shape[0], chunk):
        cen = centers[start : start + chunk]
        ys = (cen[:, None, :] + offsets[None, :, :]).reshape(-1, m.d)
        phi = gaussian_density_batch(c, ys)
        integrand = phi
        if order != 0:
            c_half, c_one = _backend.sym_coeffs(ys, m.p, m.q)
            poly = c_half / math.sqrt(m.N)
            if order == "one":
                sy = ys @ c.sigma_inv
                curvature = ((sy**2).sum(axis=1) - np.trace(c.sigma_inv)) / 24.0
                poly = poly + (c_one - curvature) / m.N
            integrand = phi * (1.0 + poly)
        cellvals = (integrand.reshape(cen.shape[0], -1) * w).sum(axis=1)
        total += float(np.sum(cellvals))
    return total


def leading_set_approx(m: ModelParams, region) -> float:
    """Zeroth-order set probability: Gaussian mass of the rescaled region."""
    c = covariance(m)
    sqrt_n = math.sqrt(m.N)
    if isinstance(region, ContinuousHalfSpace):
        a = np.asarray(region.a, dtype=np.float64)
        center = float(a @ (m.N * m.p))
        scale = math.sqrt(float(a @ c.sigma @ a))
        z = (region.b - center) / (sqrt_n * scale)
        return 0.5 * (1.0 + math.erf(z / math.sqrt(2.0)))
    if isinstance(region, ContinuousBox):
        sds = np.sqrt(np.diag(c.sigma))
        lo = (np.asarray(region.lo, dtype=np.float64) - m.N * m.p) / sqrt_n
        hi = (np.asarray(region.hi, dtype=np.float64) - m.N * m.p) / sqrt_n
        lo = np.maximum(lo, -12.0 * sds)
        hi = np.minimum(hi, 12.0 * sds)
        if np.any(hi <= lo):
            return 0.0
        return gauss_monomial_integral(c, (lo, hi), np.zeros(m.d, dtype=int))
    raise UnsupportedRegionError(
        f"continuous region must be a box or half-space, got {type(region).__name__}"
    )
