"""Multinomial local-limit toolkit.

Exact multinomial probabilities, Gaussian local approximations with
explicit first and second correction terms, region probabilities by
quadrature over cube unions, closed-form moment identities, numerical
total-variation distance to the matching Gaussian, simplex estimator
limit constants, and power-divergence statistics.
"""

from ._backend import BACKEND
from .model import ModelParams, covariance, new_model

__version__ = "0.1.0"

__all__ = ["BACKEND", "ModelParams", "covariance", "new_model", "__version__"]
