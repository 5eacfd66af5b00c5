"""Closed-form quaternion Wiener solutions, strictly and widely linear.

The strictly linear solution is ``w_o^T = r^T R^{-1}`` with ``r = E[d x*]``:
the row form matters because quaternion products do not commute and
``R^{-1} r`` names a different vector.  The solve is carried out on the
equivalent left-sided Hermitian system ``R w* = r*``.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .algebra import conjugate, hamilton
from .exceptions import DimensionMismatch
from .filters import augmented_regressor, prediction_regressors, transpose_output
from .linalg import QMatrix, QVector, solve_hermitian
from .stats import AugmentedStats, augmented_covariance, estimate_stats
from .validation import as_quaternion_samples, as_vector_samples


def cross_moment(regressors, desired) -> QVector:
    """Sample mean of ``d(k) x*(k)`` with the desired sample on the left."""
    x = as_vector_samples(regressors)
    d = as_quaternion_samples(desired)
    if x.shape[0] != d.shape[0]:
        raise DimensionMismatch("regressors and desired stream must have the same length")
    return QVector(hamilton(d[:, None, :], conjugate(x)).mean(axis=0))


def augmented_cross_moment(regressors, desired) -> QVector:
    """Cross moment against the augmented regressor ``[x; x^i; x^j; x^k]``."""
    x = as_vector_samples(regressors)
    xa = np.stack([augmented_regressor(sample) for sample in x])
    return cross_moment(xa, desired)


def _solve_row_system(covariance: QMatrix, cross: QVector) -> QVector:
    # w^T R = r^T  <=>  R w* = r*  for Hermitian R.
    if covariance.shape[0] != len(cross):
        raise DimensionMismatch(
            f"covariance {covariance.shape} incompatible with cross moment of length {len(cross)}"
        )
    conj_solution = solve_hermitian(covariance, cross.conjugate())
    return conj_solution.conjugate()


def wiener_strict(stats: AugmentedStats | QMatrix, cross: QVector) -> QVector:
    """Strictly linear optimum ``w_o`` with ``w_o^T = r^T R^{-1}``.

    Accepts either the plain covariance or full augmented statistics; only
    ``E[x x^H]`` is used.  Optimal in the mean square sense for proper
    inputs only.
    """
    covariance = stats.covariance if isinstance(stats, AugmentedStats) else stats
    return _solve_row_system(covariance, cross)


def wiener_widely_linear(stats: AugmentedStats, cross_augmented: QVector) -> QVector:
    """Widely linear optimum on the augmented regressor, second-order optimal
    for proper and improper signals alike."""
    return _solve_row_system(augmented_covariance(stats), cross_augmented)


class WienerFilter(BaseEstimator):
    """Closed-form filter fit by solving the normal equations on sample data.

    Parameters
    ----------
    order : int
        Regressor length N.
    widely_linear : bool
        Solve on the augmented regressor when True.
    """

    def __init__(self, order=4, widely_linear=False):
        self.order = order
        self.widely_linear = widely_linear

    def fit(self, X, y):
        """Estimate statistics from ``(steps, order, 4)`` regressors and
        ``(steps, 4)`` targets, then solve for the optimal weights."""
        x = as_vector_samples(X)
        if x.shape[1] != self.order:
            raise DimensionMismatch(f"expected regressors of length {self.order}, got {x.shape[1]}")
        stats = estimate_stats(x)
        if self.widely_linear:
            solution = wiener_widely_linear(stats, augmented_cross_moment(x, y))
        else:
            solution = wiener_strict(stats, cross_moment(x, y))
        self.weights_ = solution.components
        self.stats_ = stats
        return self

    def predict(self, X):
        if not hasattr(self, "weights_"):
            raise NotFittedError("fit the filter before predicting")
        x = np.asarray(X, dtype=np.float64)
        if x.ndim == 2:
            x = prediction_regressors(x, self.order)
        outputs = np.empty((x.shape[0], 4))
        for t in range(x.shape[0]):
            regressor = augmented_regressor(x[t]) if self.widely_linear else x[t]
            outputs[t] = transpose_output(self.weights_, regressor)
        return outputs
