"""Gradient operators for real-valued costs of quaternion vector arguments.

The operators assemble quaternion gradients from the four real partial
derivatives of the cost, obtained by central finite differences.  The finite
difference routine :func:`fd_partials` doubles as the independent oracle used
throughout the test suite: every closed-form gradient an algorithm relies on
can be checked against it.

The imaginary units are placed to the left of the real partials (the
left-placement convention); right-placement variants are not provided.
Quaternion-valued targets are differentiated analytically where needed by the
adaptive filters and never through these operators.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from . import algebra
from .exceptions import NonFiniteEvaluation
from .linalg import QVector

# Rows of the derivative assembly: signs applied to the real partials
# (g_r, g_i, g_j, g_k) to form each quaternion derivative, all scaled by 1/4.
_ASSEMBLY_SIGNS = {
    "q": np.array([1.0, -1.0, -1.0, -1.0]),
    "q_conj": np.array([1.0, 1.0, 1.0, 1.0]),
    "i": np.array([1.0, -1.0, 1.0, 1.0]),
    "j": np.array([1.0, 1.0, -1.0, 1.0]),
    "k": np.array([1.0, 1.0, 1.0, -1.0]),
}

CostFunction = Callable[[QVector], float]


def _evaluate(f: CostFunction, point: np.ndarray) -> float:
    value = f(QVector(point))
    value = float(value)
    if not np.isfinite(value):
        raise NonFiniteEvaluation("cost function returned a non-finite value")
    return value


def default_step(point: QVector) -> float:
    """Central-difference step balancing truncation against rounding."""
    return 1e-6 * max(1.0, point.norm())


def fd_partials(f: CostFunction, point: QVector, h: float | None = None) -> np.ndarray:
    """Central-difference partials of ``f`` w.r.t. every real component.

    Returns an ``(N, 4)`` array whose ``[n, c]`` entry is the derivative of
    ``f`` along component ``c`` of element ``n``, with O(h^2) error.  This is
    the oracle the closed-form operators are tested against.
    """
    if h is None:
        h = default_step(point)
    if h <= 0:
        raise ValueError("finite-difference step must be positive")
    base = np.array(point.components)
    out = np.empty_like(base)
    for n in range(base.shape[0]):
        for c in range(4):
            saved = base[n, c]
            base[n, c] = saved + h
            up = _evaluate(f, base)
            base[n, c] = saved - h
            down = _evaluate(f, base)
            base[n, c] = saved
            out[n, c] = (up - down) / (2.0 * h)
    return out


def _assemble(partials: np.ndarray, key: str) -> QVector:
    return QVector(0.25 * partials * _ASSEMBLY_SIGNS[key])


def hr_gradient(f: CostFunction, point: QVector, h: float | None = None) -> QVector:
    """Derivative w.r.t. the quaternion argument itself:
    ``df/dq = (g_r - i g_i - j g_j - k g_k) / 4``."""
    return _assemble(fd_partials(f, point, h), "q")


def hr_conjugate_gradient(f: CostFunction, point: QVector, h: float | None = None) -> QVector:
    """Conjugate derivative ``df/dq* = (g_r + i g_i + j g_j + k g_k) / 4``.

    For a real-valued cost this equals the componentwise conjugate of
    :func:`hr_gradient` and points along the steepest-ascent direction.
    """
    return _assemble(fd_partials(f, point, h), "q_conj")


def involution_gradient(f: CostFunction, point: QVector, axis: str, h: float | None = None) -> QVector:
    """Derivative w.r.t. the involution ``q^axis`` for ``axis`` in {i, j, k}."""
    if axis not in ("i", "j", "k"):
        raise ValueError(f"axis must be one of ('i', 'j', 'k'), got {axis!r}")
    return _assemble(fd_partials(f, point, h), axis)


def i_gradient(f: CostFunction, point: QVector, h: float | None = None) -> QVector:
    """Sum of the three involution derivatives.

    Satisfies the identity ``i_gradient = hr_conjugate_gradient + g_r / 2``
    elementwise, and coincides with the conjugate gradient on costs that do
    not depend on the scalar components.
    """
    partials = fd_partials(f, point, h)
    signs = _ASSEMBLY_SIGNS["i"] + _ASSEMBLY_SIGNS["j"] + _ASSEMBLY_SIGNS["k"]
    return QVector(0.25 * partials * signs)


def product_rule_residual(f, g, point: "algebra.Quaternion", h: float = 1e-5) -> float:
    """Residual ``|d(fg) - f dg - df g|`` for quaternion-valued f, g.

    Derivatives are taken along the real direction (``dq = h``, ``h -> 0``),
    for which the limit quotient commutes and the product rule holds; the
    residual vanishes as O(h) and is O(h^2) with the central quotients used
    here.
    """
    if h <= 0:
        raise ValueError("step must be positive")
    q = point.components

    def val(fn, at):
        out = np.asarray(fn(algebra.Quaternion.from_components(at)).components, dtype=np.float64)
        if not np.all(np.isfinite(out)):
            raise NonFiniteEvaluation("function returned non-finite components")
        return out

    step = np.array([h, 0.0, 0.0, 0.0])
    up, down = q + step, q - step
    d_fg = (algebra.hamilton(val(f, up), val(g, up)) - algebra.hamilton(val(f, down), val(g, down))) / (2 * h)
    df = (val(f, up) - val(f, down)) / (2 * h)
    dg = (val(g, up) - val(g, down)) / (2 * h)
    residual = d_fg - algebra.hamilton(val(f, q), dg) - algebra.hamilton(df, val(g, q))
    return float(np.sqrt((residual**2).sum()))
