"""Model parameters, covariance structure, normalized deviations, bulk membership.

Everything here is immutable after construction and every operation is a
pure function of its inputs.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    EtaRangeError,
    InvalidProbabilityError,
    MassOverflowError,
    OutOfSimplexError,
    ZeroTrialsError,
)


def _frozen(arr) -> np.ndarray:
    out = np.array(arr, dtype=np.float64)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class ModelParams:
    """A d-cell count model: weights p, remainder mass q, trial count N.

    Construct through :func:`new_model`; q is always recomputed from p so
    the two can never drift apart.
    """

    p: np.ndarray
    N: int
    q: float

    @property
    def d(self) -> int:
        return self.p.shape[0]

    @property
    def min_mass(self) -> float:
        return min(float(self.p.min()), self.q)


@dataclass(frozen=True)
class CovarianceSpec:
    """Covariance of the scaled counts with its closed-form inverse and det.

    ``sigma = diag(p) - p p^T``; the inverse is ``1/p_i`` on the diagonal
    plus ``1/q`` everywhere; ``det`` is the plain product ``p_1...p_d q``
    (never computed through a factorization).
    """

    sigma: np.ndarray
    sigma_inv: np.ndarray
    det: float


@dataclass(frozen=True)
class DeltaVector:
    """Normalized deviations (k - Np)/sqrt(N) with the dependent coordinate.

    ``delta_last`` is stored rather than recomputed so both correction-term
    forms see bitwise-identical values.
    """

    delta: np.ndarray
    delta_last: float


def new_model(p, N: int) -> ModelParams:
    """Validate weights and trial count and build a ModelParams."""
    p = np.atleast_1d(np.asarray(p, dtype=np.float64))
    if p.ndim != 1 or p.size == 0:
        raise InvalidProbabilityError("p must be a nonempty 1-D vector")
    if not np.all(np.isfinite(p)) or np.any(p <= 0.0) or np.any(p >= 1.0):
        raise InvalidProbabilityError("every weight must lie in (0, 1)")
    total = float(p.sum())
    if total >= 1.0:
        raise MassOverflowError(f"weights sum to {total} >= 1")
    if int(N) < 1:
        raise ZeroTrialsError(f"trial count must be >= 1, got {N}")
    return ModelParams(p=_frozen(p), N=int(N), q=1.0 - total)


def covariance(m: ModelParams) -> CovarianceSpec:
    """Closed-form covariance matrix, inverse and determinant."""
    p = m.p
    sigma = np.diag(p) - np.outer(p, p)
    sigma_inv = np.diag(1.0 / p) + 1.0 / m.q
    det = float(np.prod(p)) * m.q
    return CovarianceSpec(sigma=_frozen(sigma), sigma_inv=_frozen(sigma_inv), det=det)


def check_in_simplex(m: ModelParams, k) -> np.ndarray:
    """Return k as an int vector, or raise if it is not a feasible count."""
    k = np.atleast_1d(np.asarray(k))
    if k.shape != (m.d,):
        raise OutOfSimplexError(f"expected {m.d} counts, got shape {k.shape}")
    ki = np.rint(k).astype(np.int64)
    if np.any(np.abs(k - ki) > 0):
        raise OutOfSimplexError("counts must be integers")
    if np.any(ki < 0) or ki.sum() > m.N:
        raise OutOfSimplexError(f"{ki.tolist()} is outside the width-{m.N} simplex")
    return ki


def delta_vector(m: ModelParams, k) -> DeltaVector:
    """Normalized deviation of a lattice point from the mean."""
    ki = check_in_simplex(m, k)
    sqrt_n = np.sqrt(float(m.N))
    delta = (ki - m.N * m.p) / sqrt_n
    return DeltaVector(delta=_frozen(delta), delta_last=-float(delta.sum()))


def in_bulk(m: ModelParams, k, eta: float) -> bool:
    """Whether k lies in the central region where the expansion is certified.

    Conditions: |delta_i / (sqrt(N) p_i)| <= eta N^(-1/3) for each cell and
    the same for the dependent coordinate against q.
    """
    if not (0.0 < eta < 1.0):
        raise EtaRangeError(f"eta must be in (0, 1), got {eta}")
    dv = delta_vector(m, k)
    sqrt_n = np.sqrt(float(m.N))
    thresh = eta * m.N ** (-1.0 / 3.0)
    if np.any(np.abs(dv.delta / (sqrt_n * m.p)) > thresh):
        return False
    return bool(abs(dv.delta.sum() / (sqrt_n * m.q)) <= thresh)


def bulk_points(m: ModelParams, eta: float) -> np.ndarray:
    """All lattice points of the bulk, enumerated directly from its box bounds.

    Returns an (n, d) int array; avoids touching the full simplex so it
    stays cheap even at large N.
    """
    if not (0.0 < eta < 1.0):
        raise EtaRangeError(f"eta must be in (0, 1), got {eta}")
    N, p, q = m.N, m.p, m.q
    width = eta * N ** (2.0 / 3.0)
    axes = []
    for i in range(m.d):
        lo = max(int(np.ceil(N * p[i] - width * p[i])), 0)
        hi = min(int(np.floor(N * p[i] + width * p[i])), N)
        axes.append(np.arange(lo, hi + 1, dtype=np.int64))
    if m.d == 1:
        ks = axes[0][:, None]
    else:
        grids = np.meshgrid(*axes, indexing="ij")
        ks = np.stack([g.ravel() for g in grids], axis=1)
    total = ks.sum(axis=1)
    keep = (total <= N) & (np.abs(total - N * (1.0 - q)) <= width * q)
    return ks[keep]


def gaussian_density(c: CovarianceSpec, x) -> float:
    """Centered Gaussian density with the model's covariance profile at x."""
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    d = c.sigma.shape[0]
    quad = float(x @ c.sigma_inv @ x)
    return float(np.exp(-0.5 * quad) / np.sqrt((2.0 * np.pi) ** d * c.det))


def gaussian_density_batch(c: CovarianceSpec, xs: np.ndarray) -> np.ndarray:
    """Vectorized :func:`gaussian_density` over rows of xs (shape (n, d))."""
    d = c.sigma.shape[0]
    quad = np.einsum("ni,ij,nj->n", xs, c.sigma_inv, xs)
    return np.exp(-0.5 * quad) / np.sqrt((2.0 * np.pi) ** d * c.det)
