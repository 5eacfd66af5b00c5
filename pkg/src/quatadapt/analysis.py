"""Mean and mean-square convergence machinery for the strictly linear filters.

The mean weight-error recursion of each strictly linear algorithm, written
over the four real component channels, is governed by a real 4N x 4N matrix
built from the component parts of the input covariance.  The single-term
(involution-gradient) filter is governed by the covariance itself; the other
two rescale whole block columns, which compresses parts of the spectrum and
slows the corresponding channels.

Spectral statements about the rescaled matrices are only well defined when
the covariance has no imaginary component parts (every circular signal
qualifies); the operations below refuse otherwise rather than report numbers
with no meaning attached.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import (
    AssumptionViolated,
    InsufficientTrials,
    NotHermitian,
    SingularMatrix,
    StepTooLarge,
)
from .linalg import QMatrix, hermitian_eigenvalues

STRICT_ALGORITHMS = ("qlms", "hr_qlms", "iqlms")

# Per-algorithm scaling of the four block columns (scalar channel first) of
# the governing matrix relative to the single-term filter's matrix.
_COLUMN_SCALINGS = {
    "iqlms": (1.0, 1.0, 1.0, 1.0),
    "hr_qlms": (1.0 / 3.0, 1.0, 1.0, 1.0),
    "qlms": (5.0 / 6.0, 0.5, 0.5, 0.5),
}


def _require_strict(algorithm: str) -> None:
    if algorithm not in STRICT_ALGORITHMS:
        raise ValueError(f"algorithm must be one of {STRICT_ALGORITHMS}, got {algorithm!r}")


def _require_hermitian(covariance: QMatrix, tol: float = 1e-10) -> None:
    if not covariance.is_hermitian(tol):
        raise NotHermitian("covariance matrix must be Hermitian")


def component_parts(covariance: QMatrix) -> tuple:
    """The four real N x N component matrices of a quaternion matrix."""
    data = covariance.components
    return data[..., 0], data[..., 1], data[..., 2], data[..., 3]


def column_scaling_matrix(algorithm: str, order: int) -> np.ndarray:
    """Diagonal matrix rescaling the four component block columns."""
    _require_strict(algorithm)
    return np.diag(np.repeat(_COLUMN_SCALINGS[algorithm], order))


def mean_recursion_matrix(algorithm: str, covariance: QMatrix) -> np.ndarray:
    """Real 4N x 4N matrix M governing the trial-mean weight-error recursion
    ``mean(k+1) = mean(k) (I - 3/4 mu M)`` over stacked component channels.

    For the single-term filter M is the signed component-block form of the
    covariance itself (same spectrum, each eigenvalue with multiplicity 4);
    the two-term variants rescale its block columns, exactly reproducing the
    printed structured matrices.
    """
    _require_strict(algorithm)
    _require_hermitian(covariance)
    r, i, j, k = component_parts(covariance)
    base = np.block(
        [
            [r, i, j, k],
            [-i, r, -k, j],
            [-j, k, r, -i],
            [-k, -j, i, r],
        ]
    )
    if algorithm == "iqlms":
        return base
    return base @ column_scaling_matrix(algorithm, covariance.shape[0])


def _require_componentwise_real(covariance: QMatrix, tol: float = 1e-8) -> None:
    data = covariance.components
    scale = max(1.0, float(np.abs(data).max()))
    if float(np.abs(data[..., 1:]).max()) > tol * scale:
        raise AssumptionViolated(
            "covariance has imaginary component parts; the spectral relations "
            "of the rescaled recursion matrices are only defined for "
            "componentwise-real covariances"
        )


def governing_eigenvalues(algorithm: str, covariance: QMatrix, tol: float = 1e-8) -> np.ndarray:
    """Ascending eigenvalues of the algorithm's recursion matrix.

    The single-term filter accepts any Hermitian covariance (its matrix has
    the covariance's spectrum); the rescaled matrices additionally require a
    componentwise-real covariance, under which they are block diagonal with
    real spectra.
    """
    _require_strict(algorithm)
    _require_hermitian(covariance)
    if algorithm == "iqlms":
        return hermitian_eigenvalues(covariance)
    _require_componentwise_real(covariance, tol)
    values = np.linalg.eigvals(mean_recursion_matrix(algorithm, covariance))
    scale = max(1.0, float(np.abs(values).max()))
    if float(np.abs(values.imag).max()) > tol * scale:
        raise AssumptionViolated("recursion matrix spectrum is not real to tolerance")
    return np.sort(values.real)


@dataclass(frozen=True)
class StepSizeBound:
    """Mean-convergence step-size ceilings, spectral and trace-approximated."""

    algorithm: str
    eigenvalue_bound: float  # 8 / (3 lambda_max)
    trace_bound: float  # 8 / (3 tr), with tr the per-channel trace


def step_size_bound(algorithm: str, covariance: QMatrix) -> StepSizeBound:
    """Upper step-size bounds ``0 < mu < 8 / (3 lambda_max(M))`` for the
    algorithm's governing matrix M, plus the trace-based approximation.

    The trace form uses the matrix trace divided by the fourfold channel
    multiplicity, so for the single-term filter it reduces to the plain
    covariance trace.  Requires a positive semidefinite covariance.
    """
    values = governing_eigenvalues(algorithm, covariance)
    lam_max = float(values[-1])
    if values[0] < -1e-10 * max(1.0, abs(lam_max)):
        raise NotHermitian("covariance must be positive semidefinite")
    if lam_max <= 0:
        raise SingularMatrix("covariance has no positive eigenvalue")
    quarter_trace = float(np.trace(mean_recursion_matrix(algorithm, covariance))) / 4.0
    return StepSizeBound(
        algorithm=algorithm,
        eigenvalue_bound=8.0 / (3.0 * lam_max),
        trace_bound=8.0 / (3.0 * quarter_trace),
    )


def eigenvalue_spread(algorithm: str, covariance: QMatrix) -> float:
    """Spread ``lambda_max / lambda_min`` of the governing matrix.

    The spread orders the convergence speeds: the single-term filter keeps
    the covariance's spread, the two-term variants inflate it by 5/3 and 3
    on componentwise-real inputs.
    """
    values = governing_eigenvalues(algorithm, covariance)
    lam_min, lam_max = float(values[0]), float(values[-1])
    if lam_min < 1e-12 * abs(lam_max):
        raise SingularMatrix("smallest eigenvalue vanishes; spread undefined")
    return lam_max / lam_min


@dataclass(frozen=True)
class EmsePrediction:
    """Steady-state excess error predictions and the MSE decomposition."""

    algorithm: str
    step_size: float
    small_step_emse: float  # a priori error power, small-step form
    large_step_emse: float  # a priori error power, large-step form
    conjugate_model_term: float  # residual power of the unmodeled involution part
    noise_variance: float

    def predicted_mse(self, form: str = "small") -> float:
        emse = self.small_step_emse if form == "small" else self.large_step_emse
        return emse + self.conjugate_model_term + self.noise_variance


def _real_trace(covariance: QMatrix) -> float:
    trace = covariance.trace()
    return float(trace.r)


def predict_emse(
    algorithm: str,
    step_size: float,
    covariance: QMatrix,
    noise_variance: float,
    conjugate_term: float = 0.0,
) -> EmsePrediction:
    """Steady-state a priori error power of the single-term filters.

    ``covariance`` is the plain covariance for the strictly linear filter
    and the augmented covariance for the widely linear one (whose conjugate
    model term vanishes by construction).  ``conjugate_term`` is the
    residual power of the involution part of the plant that a strictly
    linear filter cannot model; it adds to the predicted MSE and feeds the
    step-size-dependent part through the input power.

    Small-step form: ``(mu/2) tr (sigma^2 + conjugate_term)``.
    Large-step form: same numerator scaled by ``2 / (2 - mu tr)``; requires
    ``mu tr < 2``.  ``step_size`` enters the formulas verbatim: when
    predicting the behaviour of the packaged step functions, pass the
    effective step (3/4 of the configured one).
    """
    if algorithm not in ("iqlms", "wl_iqlms"):
        raise ValueError("mean-square predictions cover the single-term filters only")
    if noise_variance < 0 or conjugate_term < 0:
        raise ValueError("noise variance and conjugate term must be nonnegative")
    if step_size <= 0:
        raise ValueError("step size must be positive")
    _require_hermitian(covariance)
    if algorithm == "wl_iqlms":
        conjugate_term = 0.0
    tr = _real_trace(covariance)
    small = 0.5 * step_size * tr * (noise_variance + conjugate_term)
    denominator = 2.0 - step_size * tr
    if denominator <= 0:
        raise StepTooLarge(f"large-step form requires mu tr < 2, got mu tr = {step_size * tr:g}")
    large = step_size * tr * (noise_variance + conjugate_term) / denominator
    return EmsePrediction(
        algorithm=algorithm,
        step_size=step_size,
        small_step_emse=small,
        large_step_emse=large,
        conjugate_model_term=conjugate_term,
        noise_variance=noise_variance,
    )


@dataclass(frozen=True)
class ModeDecayFit:
    """Fitted vs. predicted geometric decay rates of the mean weight error."""

    eigenvalues: np.ndarray
    fitted_rates: np.ndarray
    predicted_rates: np.ndarray


def empirical_mode_decay(
    mean_weight_errors: np.ndarray,
    covariance: QMatrix,
    step_size: float,
    n_trials: int,
    fit_window: tuple = (50, 500),
) -> ModeDecayFit:
    """Fit per-mode decay rates of the trial-mean weight error.

    ``mean_weight_errors`` is the ``(steps, N, 4)`` trial average of
    ``w(k) - w_o`` from at least 50 independent runs of the single-term
    filter.  The error is rotated into the eigenbasis of the covariance
    (componentwise-real covariances only) and the magnitude of each mode is
    fit to a geometric decay ``rate^k`` over ``fit_window`` by least squares
    on the log; the prediction is ``1 - 3/4 mu lambda_n``.
    """
    if n_trials < 50:
        raise InsufficientTrials(f"need at least 50 trials for a stable fit, got {n_trials}")
    _require_hermitian(covariance)
    _require_componentwise_real(covariance)
    errors = np.asarray(mean_weight_errors, dtype=np.float64)
    if errors.ndim != 3 or errors.shape[1] != covariance.shape[0] or errors.shape[2] != 4:
        raise ValueError(f"expected (steps, {covariance.shape[0]}, 4) mean weight errors")
    eigenvalues, basis = np.linalg.eigh(covariance.components[..., 0])
    rotated = np.einsum("nm,knc->kmc", basis, errors)  # Q^T applied per component
    start, stop = fit_window
    stop = min(stop, errors.shape[0])
    if stop - start < 10:
        raise ValueError("fit window too short")
    steps = np.arange(start, stop)
    magnitudes = np.sqrt((rotated[start:stop] ** 2).sum(axis=2))  # (window, N)
    fitted = np.empty(covariance.shape[0])
    for mode in range(covariance.shape[0]):
        levels = np.log(np.maximum(magnitudes[:, mode], 1e-300))
        slope = np.polyfit(steps, levels, 1)[0]
        fitted[mode] = float(np.exp(slope))
    return ModeDecayFit(
        eigenvalues=eigenvalues,
        fitted_rates=fitted,
        predicted_rates=1.0 - 0.75 * step_size * eigenvalues,
    )
