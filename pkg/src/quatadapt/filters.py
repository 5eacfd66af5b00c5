"""Adaptive quaternion filters: the strictly and widely linear LMS family.

All step functions are pure: they take the current weights and return the
updated weights together with the prediction error, leaving the caller's
state untouched.  Weights and regressors are ``(N, 4)`` component arrays
(``(4N, 4)`` for the widely linear variants, which stack the regressor with
its three involutions).

The strictly linear updates differ only in how the error/regressor product
is weighted between the scalar and vector channels, which is captured by
:class:`UnifiedCoefficients`; each named algorithm reproduces its preset
exactly, step by step.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .algebra import conjugate, hamilton, involute, squared_norm
from .exceptions import DimensionMismatch, NonFiniteUpdate, ZeroRegressor

STRICT_ALGORITHMS = ("qlms", "hr_qlms", "iqlms")
WIDELY_LINEAR_ALGORITHMS = ("wl_qlms", "wl_iqlms")
ALGORITHMS = STRICT_ALGORITHMS + WIDELY_LINEAR_ALGORITHMS
OUTPUT_CONVENTIONS = ("transpose", "hermitian")


@dataclass(frozen=True)
class UnifiedCoefficients:
    """Scalar/vector channel weightings (a, b, c, d) of the generic update."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        if min(self.a, self.b, self.c, self.d) < 0:
            raise ValueError("unified coefficients must be nonnegative")


UNIFIED_PRESETS = {
    "qlms": UnifiedCoefficients(0.25, 0.75, 0.75, 0.25),
    "hr_qlms": UnifiedCoefficients(0.25, 0.25, 0.75, 0.75),
    "iqlms": UnifiedCoefficients(0.75, 0.75, 0.75, 0.75),
}


@dataclass(frozen=True)
class FilterConfig:
    """Algorithm selection plus the knobs shared by every run."""

    algorithm: str = "iqlms"
    order: int = 4
    step_size: float = 0.01
    output_convention: str = "transpose"

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; expected one of {ALGORITHMS}")
        if self.order < 1:
            raise ValueError("filter order must be at least 1")
        if self.step_size <= 0:
            raise ValueError("step size must be positive")
        if self.output_convention not in OUTPUT_CONVENTIONS:
            raise ValueError(f"output convention must be one of {OUTPUT_CONVENTIONS}")

    @property
    def widely_linear(self) -> bool:
        return self.algorithm in WIDELY_LINEAR_ALGORITHMS

    @property
    def weight_length(self) -> int:
        return 4 * self.order if self.widely_linear else self.order


def transpose_output(weights: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Filter output ``sum_n w_n x_n`` (weights multiply from the left)."""
    return hamilton(weights, x).sum(axis=0)


def augmented_regressor(x: np.ndarray) -> np.ndarray:
    """Stack a regressor with its three involutions into a 4N vector."""
    return np.concatenate([x, involute(x, "i"), involute(x, "j"), involute(x, "k")], axis=0)


def _commit(weights: np.ndarray, update: np.ndarray) -> np.ndarray:
    new = weights + update
    if not np.all(np.isfinite(new)):
        raise NonFiniteUpdate("update produced non-finite weights; state left unchanged")
    return new


def qlms_step(weights, x, d, mu):
    """One step of the original strictly linear algorithm:
    ``w += mu (e x*/2 - x* e*/4)``, with ``e = d - w^T x``.

    Uses the scaling under which all three strictly linear variants share a
    single step-size scale (the historical 4x larger constant is absorbed
    into ``mu``).
    """
    e = d - transpose_output(weights, x)
    xc = conjugate(x)
    update = mu * (0.5 * hamilton(e, xc) - 0.25 * hamilton(xc, conjugate(e)))
    return _commit(weights, update), e


def hr_qlms_step(weights, x, d, mu):
    """One step of ``w += mu (e x*/2 - x e*/4)``; the second term uses the
    plain regressor, which is what distinguishes it from :func:`qlms_step`."""
    e = d - transpose_output(weights, x)
    update = mu * (0.5 * hamilton(e, conjugate(x)) - 0.25 * hamilton(x, conjugate(e)))
    return _commit(weights, update), e


def iqlms_step(weights, x, d, mu):
    """One step of the involution-gradient update ``w += 3/4 mu e x*``.

    Shares the generic single-term shape of the real and complex LMS and
    costs half the operations of :func:`qlms_step`.
    """
    e = d - transpose_output(weights, x)
    update = (0.75 * mu) * hamilton(e, conjugate(x))
    return _commit(weights, update), e


def unified_step(weights, x, d, mu, coefficients: UnifiedCoefficients):
    """Generic update: the scalar channel moves by
    ``a mu Re[e Re x] - b mu Re[e Im x]`` and the vector channels by
    ``c mu Im[e Re x] - d mu Im[e Im x]``, per regressor element."""
    e = d - transpose_output(weights, x)
    e_real_x = x[:, :1] * e[None, :]  # e times the (real) scalar part of x
    imx = x.copy()
    imx[:, 0] = 0.0
    e_imag_x = hamilton(e, imx)
    new = np.empty_like(weights)
    new[:, 0] = weights[:, 0] + mu * (coefficients.a * e_real_x[:, 0] - coefficients.b * e_imag_x[:, 0])
    new[:, 1:] = weights[:, 1:] + mu * (coefficients.c * e_real_x[:, 1:] - coefficients.d * e_imag_x[:, 1:])
    if not np.all(np.isfinite(new)):
        raise NonFiniteUpdate("update produced non-finite weights; state left unchanged")
    return new, e


def wl_qlms_step(weights, x, d, mu):
    """Widely linear two-term update on the augmented regressor."""
    xa = augmented_regressor(x)
    if weights.shape[0] != xa.shape[0]:
        raise DimensionMismatch(
            f"widely linear state must have length {xa.shape[0]}, got {weights.shape[0]}"
        )
    e = d - transpose_output(weights, xa)
    xac = conjugate(xa)
    update = mu * (0.5 * hamilton(e, xac) - 0.25 * hamilton(xa, conjugate(e)))
    return _commit(weights, update), e


def wl_iqlms_step(weights, x, d, mu):
    """Widely linear single-term update ``w_a += 3/4 mu e x_a*``."""
    xa = augmented_regressor(x)
    if weights.shape[0] != xa.shape[0]:
        raise DimensionMismatch(
            f"widely linear state must have length {xa.shape[0]}, got {weights.shape[0]}"
        )
    e = d - transpose_output(weights, xa)
    update = (0.75 * mu) * hamilton(e, conjugate(xa))
    return _commit(weights, update), e


STEP_FUNCTIONS = {
    "qlms": qlms_step,
    "hr_qlms": hr_qlms_step,
    "iqlms": iqlms_step,
    "wl_qlms": wl_qlms_step,
    "wl_iqlms": wl_iqlms_step,
}


def real_four_channel_lms_step(weights, x_channels, d_channels, mu):
    """One step of the four-channel real LMS dual to the widely linear
    single-term filter.

    ``weights`` is a ``(4, 4, N)`` block of real coefficient vectors; each
    stored block carries half the scale of the corresponding sum of
    quaternion weight components, so the output doubles the block form
    (``y_p = 2 sum_q w_pq . x_q``) and the update applies the error/channel
    outer-product table with the same three-quarter constant as the
    quaternion filter.  Under this normalization, running at step ``2 mu``
    reproduces the widely linear single-term filter at step ``mu`` output
    for output, and the stored block ``w_11`` moves by half the summed
    scalar-channel deltas of the quaternion weights.
    """
    weights = np.asarray(weights, dtype=np.float64)
    x = np.asarray(x_channels, dtype=np.float64)
    if weights.shape != (4, 4, x.shape[1]) or x.shape[0] != 4:
        raise DimensionMismatch(f"expected weights (4, 4, N) and channels (4, N), got {weights.shape} and {x.shape}")
    y = 2.0 * np.einsum("pqn,qn->p", weights, x)
    e = np.asarray(d_channels, dtype=np.float64) - y
    new = weights + (0.75 * mu) * np.einsum("p,qn->pqn", e, x)
    if not np.all(np.isfinite(new)):
        raise NonFiniteUpdate("update produced non-finite weights; state left unchanged")
    return new, e


@dataclass
class FilterRun:
    """Error history and final state of one sequential filtering pass."""

    errors: np.ndarray  # (steps, 4) component errors
    weights: np.ndarray  # final weight components
    weight_history: np.ndarray | None = None  # (steps, L, 4) if tracked

    @property
    def squared_errors(self) -> np.ndarray:
        return squared_norm(self.errors)


def prediction_regressors(series: np.ndarray, order: int) -> np.ndarray:
    """Most-recent-first regressors ``x(k) = [y(k-1), ..., y(k-N)]`` with
    zero padding over the first N steps."""
    series = np.asarray(series, dtype=np.float64)
    n = series.shape[0]
    out = np.zeros((n, order, 4))
    for lag in range(1, order + 1):
        out[lag:, lag - 1] = series[:-lag]
    return out


def run_filter(config: FilterConfig, inputs, desired=None, initial_weights=None, track_weights=False) -> FilterRun:
    """Run one filter over a sequence, recording per-step errors.

    ``inputs`` is either a regressor block ``(steps, N, 4)`` paired with a
    ``desired`` stream, or (when ``desired`` is None) a scalar signal
    ``(steps, 4)`` filtered in one-step-ahead prediction mode where the
    regressor holds the N most recent samples.  Deterministic given inputs.
    """
    inputs = np.asarray(inputs, dtype=np.float64)
    if desired is None:
        if inputs.ndim != 2 or inputs.shape[1] != 4:
            raise ValueError("prediction mode expects a (steps, 4) scalar signal")
        regressors = prediction_regressors(inputs, config.order)
        desired = inputs
    else:
        regressors = inputs
        desired = np.asarray(desired, dtype=np.float64)
        if regressors.ndim != 3 or regressors.shape[1] != config.order or regressors.shape[2] != 4:
            raise ValueError(f"expected regressors of shape (steps, {config.order}, 4)")
        if desired.shape != (regressors.shape[0], 4):
            raise DimensionMismatch("desired stream must align with the regressor block")

    steps = regressors.shape[0]
    if initial_weights is None:
        weights = np.zeros((config.weight_length, 4))
    else:
        weights = np.array(initial_weights, dtype=np.float64)
        if weights.shape != (config.weight_length, 4):
            raise DimensionMismatch(f"initial weights must have shape ({config.weight_length}, 4)")

    step = STEP_FUNCTIONS[config.algorithm]
    mirror = config.output_convention == "hermitian"
    if mirror:
        # y = w^H x is handled by running the transpose update on w* and
        # conjugating back; outputs and errors are identical by construction.
        weights = conjugate(weights)

    errors = np.empty((steps, 4))
    history = np.empty((steps, weights.shape[0], 4)) if track_weights else None
    mu = config.step_size
    for t in range(steps):
        weights, e = step(weights, regressors[t], desired[t], mu)
        errors[t] = e
        if track_weights:
            history[t] = conjugate(weights) if mirror else weights
    if mirror:
        weights = conjugate(weights)
    return FilterRun(errors=errors, weights=weights, weight_history=history)


class QuaternionLMS(BaseEstimator):
    """Adaptive quaternion filter with a scikit-learn estimator surface.

    Parameters
    ----------
    algorithm : str
        One of ``qlms``, ``hr_qlms``, ``iqlms``, ``wl_qlms``, ``wl_iqlms``;
        the widely linear variants keep a 4N augmented weight vector.
    order : int
        Number of regressor taps N.
    step_size : float
        Adaptation gain; must stay below the stability bound of the input
        covariance for convergence.
    output_convention : str
        ``"transpose"`` (``y = w^T x``) or ``"hermitian"`` (``y = w^H x``);
        the hermitian form mirrors the update through conjugation and leaves
        every performance property unchanged.
    coefficients : UnifiedCoefficients, optional
        Custom channel weightings; overrides ``algorithm`` for strict
        filters when given.
    """

    def __init__(self, algorithm="iqlms", order=4, step_size=0.01, output_convention="transpose", coefficients=None):
        self.algorithm = algorithm
        self.order = order
        self.step_size = step_size
        self.output_convention = output_convention
        self.coefficients = coefficients

    def _config(self) -> FilterConfig:
        return FilterConfig(
            algorithm=self.algorithm,
            order=self.order,
            step_size=self.step_size,
            output_convention=self.output_convention,
        )

    @property
    def widely_linear(self) -> bool:
        return self._config().widely_linear

    def fit(self, X, y=None, track_weights=False):
        """Adapt from zero initial weights through the sequence once.

        ``X`` is a regressor block ``(steps, order, 4)`` with targets ``y``
        of shape ``(steps, 4)``, or a scalar signal ``(steps, 4)`` with
        ``y=None`` for one-step-ahead prediction.
        """
        config = self._config()
        if self.coefficients is not None:
            run = self._fit_unified(config, X, y, track_weights)
        else:
            run = run_filter(config, X, desired=y, track_weights=track_weights)
        self.weights_ = run.weights
        self.errors_ = run.errors
        self.weight_history_ = run.weight_history
        self.n_steps_ = run.errors.shape[0]
        return self

    def _fit_unified(self, config, X, y, track_weights):
        if config.widely_linear:
            raise ValueError("custom coefficients apply to the strictly linear filters only")
        if config.output_convention != "transpose":
            raise ValueError("custom coefficients are defined for the transpose convention")
        X = np.asarray(X, dtype=np.float64)
        if y is None:
            regressors = prediction_regressors(X, config.order)
            desired = X
        else:
            regressors, desired = X, np.asarray(y, dtype=np.float64)
        weights = np.zeros((config.order, 4))
        errors = np.empty((regressors.shape[0], 4))
        history = np.empty((regressors.shape[0], config.order, 4)) if track_weights else None
        for t in range(regressors.shape[0]):
            weights, e = unified_step(weights, regressors[t], desired[t], config.step_size, self.coefficients)
            errors[t] = e
            if track_weights:
                history[t] = weights
        return FilterRun(errors=errors, weights=weights, weight_history=history)

    def predict(self, X):
        """Apply the fitted weights without further adaptation."""
        if not hasattr(self, "weights_"):
            raise NotFittedError("fit the filter before predicting")
        config = self._config()
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 2:
            X = prediction_regressors(X, config.order)
        weights = conjugate(self.weights_) if config.output_convention == "hermitian" else self.weights_
        outputs = np.empty((X.shape[0], 4))
        for t in range(X.shape[0]):
            x = augmented_regressor(X[t]) if config.widely_linear else X[t]
            outputs[t] = transpose_output(weights, x)
        return outputs

    @property
    def squared_error_history_(self) -> np.ndarray:
        if not hasattr(self, "errors_"):
            raise NotFittedError("fit the filter first")
        return squared_norm(self.errors_)

    def state_snapshot(self) -> list:
        """Weights as a flat list of (r, i, j, k) tuples."""
        if not hasattr(self, "weights_"):
            raise NotFittedError("fit the filter first")
        return [tuple(float(c) for c in row) for row in self.weights_]


def apriori_aposteriori_errors(weights_before, weights_after, x, optimal_weights, convention="hermitian"):
    """A priori/a posteriori errors of one step against known true weights.

    With the weight error ``r = w - w_o``, the a priori error is the inner
    product of ``r`` before the step with the regressor and the a posteriori
    error the same after the step (conjugating for the hermitian convention).
    """
    r_before = np.asarray(weights_before, dtype=np.float64) - optimal_weights
    r_after = np.asarray(weights_after, dtype=np.float64) - optimal_weights
    if convention == "hermitian":
        r_before, r_after = conjugate(r_before), conjugate(r_after)
    elif convention != "transpose":
        raise ValueError("convention must be 'hermitian' or 'transpose'")
    e_a = hamilton(r_before, x).sum(axis=0)
    e_p = hamilton(r_after, x).sum(axis=0)
    return e_a, e_p


def energy_conservation_residual(
    weights_before, weights_after, x, optimal_weights, e_a=None, e_p=None, convention="hermitian"
):
    """Residual of the per-step weight-error energy balance.

    The balance ``||r(k+1)||^2 + |e_a|^2/||x||^2 = ||r(k)||^2 +
    |e_p|^2/||x||^2`` holds exactly (to rounding) for any single-term update
    that moves the weights along the regressor, in particular the
    involution-gradient filters; deviations indicate a different update
    geometry.  ``e_a``/``e_p`` default to their definitions but can be
    supplied for cross-checking.
    """
    x = np.asarray(x, dtype=np.float64)
    x_power = float(squared_norm(x).sum())
    if x_power == 0.0:
        raise ZeroRegressor("energy balance undefined for a zero regressor")
    defaults = apriori_aposteriori_errors(weights_before, weights_after, x, optimal_weights, convention)
    if e_a is None:
        e_a = defaults[0]
    if e_p is None:
        e_p = defaults[1]
    r_before = np.asarray(weights_before, dtype=np.float64) - optimal_weights
    r_after = np.asarray(weights_after, dtype=np.float64) - optimal_weights
    lhs = float(squared_norm(r_after).sum()) + float(squared_norm(e_a)) / x_power
    rhs = float(squared_norm(r_before).sum()) + float(squared_norm(e_p)) / x_power
    return abs(lhs - rhs)
