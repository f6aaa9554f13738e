"""Two-order Gaussian expansion of the multinomial pmf.

The base factor is N^(-d/2) times the matching Gaussian density at the
normalized deviation; the two correction scalars multiply N^(-1/2) and
N^(-1). Two algebraically equivalent coefficient forms exist: the raw
nested-sum form (kept literal, for cross-validation) and the symmetrized
form that treats all d+1 categories alike and costs O(d) per point.
"""

from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import MlltError
from .model import ModelParams, check_in_simplex, covariance, delta_vector

ORDERS = (0, "half", "one")


def normalize_order(order):
    if order in (0, "0", "zero"):
        return 0
    if order in ("half", 0.5):
        return "half"
    if order in ("one", 1):
        return "one"
    raise MlltError(f"order must be one of 0, 'half', 'one'; got {order!r}")


@dataclass(frozen=True)
class ExpansionTerms:
    """Base Gaussian value plus the two correction coefficients."""

    base: float
    c_half: float
    c_one: float
    form: str  # "raw" | "symmetrized"


def _base_values(m: ModelParams, deltas: np.ndarray) -> np.ndarray:
    c = covariance(m)
    quad = np.einsum("ni,ij,nj->n", deltas, c.sigma_inv, deltas)
    log_base = (
        -0.5 * m.d * np.log(float(m.N))
        - 0.5 * np.log((2.0 * np.pi) ** m.d * c.det)
        - 0.5 * quad
    )
    return np.exp(log_base)


def _deltas(m: ModelParams, ks: np.ndarray) -> np.ndarray:
    return (np.asarray(ks, dtype=np.float64) - m.N * m.p) / np.sqrt(float(m.N))


def expansion_terms(m: ModelParams, k) -> ExpansionTerms:
    """Correction terms from the literal nested-sum form (O(d^4) work)."""
    ki = check_in_simplex(m, k)
    delta = _deltas(m, ki[None, :])
    c_half, c_one = _backend.raw_coeffs(delta, m.p, m.q)
    return ExpansionTerms(
        base=float(_base_values(m, delta)[0]),
        c_half=float(c_half[0]),
        c_one=float(c_one[0]),
        form="raw",
    )


def expansion_terms_symmetrized(m: ModelParams, k) -> ExpansionTerms:
    """Correction terms from the symmetrized d+1-category form (O(d) work)."""
    ki = check_in_simplex(m, k)
    dv = delta_vector(m, ki)
    delta = dv.delta[None, :]
    c_half, c_one = _backend.sym_coeffs(delta, m.p, m.q)
    return ExpansionTerms(
        base=float(_base_values(m, delta)[0]),
        c_half=float(c_half[0]),
        c_one=float(c_one[0]),
        form="symmetrized",
    )


def bracket_batch(m: ModelParams, ks: np.ndarray, order):
    """Truncated bracket 1 + N^(-1/2) c_half + N^(-1) c_one per point."""
    order = normalize_order(order)
    ks = np.asarray(ks, dtype=np.float64)
    deltas = _deltas(m, ks)
    if order == 0:
        return np.ones(ks.shape[0])
    c_half, c_one = _backend.sym_coeffs(deltas, m.p, m.q)
    bracket = 1.0 + c_half / np.sqrt(float(m.N))
    if order == "one":
        bracket = bracket + c_one / float(m.N)
    return bracket


def approx_pmf_batch(m: ModelParams, ks: np.ndarray, order):
    """Truncated approximation per point; negative values are clamped to 0.

    Returns (values, clamped) where ``clamped`` marks points whose bracket
    went negative (possible far outside the bulk).
    """
    ks = np.asarray(ks, dtype=np.float64)
    base = _base_values(m, _deltas(m, ks))
    values = base * bracket_batch(m, ks, order)
    clamped = values < 0.0
    return np.where(clamped, 0.0, values), clamped


def approx_pmf(m: ModelParams, k, order) -> float:
    """Scalar truncated approximation at a single lattice point."""
    ki = check_in_simplex(m, k)
    values, _ = approx_pmf_batch(m, ki[None, :], order)
    return float(values[0])


def ratio_error_batch(m: ModelParams, ks: np.ndarray, order) -> np.ndarray:
    """pmf/base minus the truncated bracket, the quantity the theory bounds."""
    from .exact import log_pmf_batch

    ks = np.asarray(ks, dtype=np.float64)
    deltas = _deltas(m, ks)
    base = _base_values(m, deltas)
    ratio = np.exp(log_pmf_batch(m, ks) - np.log(base))
    return ratio - bracket_batch(m, ks, order)


def ratio_error(m: ModelParams, k, order) -> float:
    ki = check_in_simplex(m, k)
    return float(ratio_error_batch(m, ki[None, :], order)[0])


def max_bulk_ratio_error(m: ModelParams, eta: float, order) -> float:
    """Max of |ratio_error| over the eta-bulk."""
    from .model import bulk_points

    ks = bulk_points(m, eta)
    return float(np.max(np.abs(ratio_error_batch(m, ks, order))))


def loglog_slope(xs, ys) -> float:
    """Least-squares slope of log(y) against log(x)."""
    xs = np.log(np.asarray(xs, dtype=np.float64))
    ys = np.log(np.asarray(ys, dtype=np.float64))
    return float(np.polyfit(xs, ys, 1)[0])
