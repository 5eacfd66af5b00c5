"""Dense quaternion vectors and matrices.

Both containers wrap float64 component arrays (``(N, 4)`` for vectors,
``(N, M, 4)`` for matrices) and respect the left/right multiplication order
everywhere.  Quaternion Hermitian eigenproblems and linear solves go through
the 4Nx4N real embedding, which represents left multiplication and is a ring
homomorphism.
"""

from __future__ import annotations

import numpy as np

from . import algebra
from .algebra import Quaternion, hamilton
from .exceptions import DimensionMismatch, SingularCovariance


class QVector:
    """Ordered sequence of quaternions, stored as an ``(N, 4)`` array."""

    __slots__ = ("_data",)

    def __init__(self, data):
        if isinstance(data, QVector):
            arr = data._data.copy()
        elif len(data) > 0 and isinstance(data[0], Quaternion):
            arr = np.stack([q.components for q in data])
        else:
            arr = np.array(data, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[1] != 4:
            raise ValueError(f"expected an (N, 4) component array, got shape {arr.shape}")
        arr.flags.writeable = False
        self._data = arr

    @classmethod
    def zeros(cls, n: int) -> "QVector":
        return cls(np.zeros((n, 4)))

    @property
    def components(self) -> np.ndarray:
        return self._data

    def __len__(self) -> int:
        return self._data.shape[0]

    def __getitem__(self, index) -> Quaternion:
        return Quaternion.from_components(self._data[index])

    def __iter__(self):
        return (Quaternion.from_components(row) for row in self._data)

    def conjugate(self) -> "QVector":
        return QVector(algebra.conjugate(self._data))

    def involute(self, axis: str) -> "QVector":
        return QVector(algebra.involute(self._data, axis))

    def __add__(self, other: "QVector") -> "QVector":
        _check_same_length(self, other)
        return QVector(self._data + other._data)

    def __sub__(self, other: "QVector") -> "QVector":
        _check_same_length(self, other)
        return QVector(self._data - other._data)

    def __neg__(self) -> "QVector":
        return QVector(-self._data)

    def __mul__(self, q) -> "QVector":
        """Elementwise right multiplication ``v_n * q``."""
        if isinstance(q, (int, float)):
            return QVector(self._data * float(q))
        if isinstance(q, Quaternion):
            return QVector(hamilton(self._data, q.components))
        return NotImplemented

    def __rmul__(self, q) -> "QVector":
        """Elementwise left multiplication ``q * v_n``."""
        if isinstance(q, (int, float)):
            return QVector(self._data * float(q))
        if isinstance(q, Quaternion):
            return QVector(hamilton(q.components, self._data))
        return NotImplemented

    def transpose_dot(self, other: "QVector") -> Quaternion:
        """Inner product without conjugation: ``sum_n self_n * other_n``."""
        _check_same_length(self, other)
        return Quaternion.from_components(hamilton(self._data, other._data).sum(axis=0))

    def hermitian_dot(self, other: "QVector") -> Quaternion:
        """Inner product ``sum_n self_n* other_n``; ``v.hermitian_dot(v)`` is
        real and nonnegative."""
        _check_same_length(self, other)
        return Quaternion.from_components(
            hamilton(algebra.conjugate(self._data), other._data).sum(axis=0)
        )

    def squared_norm(self) -> float:
        return float(algebra.squared_norm(self._data).sum())

    def norm(self) -> float:
        return float(np.sqrt(self.squared_norm()))

    def concat(self, other: "QVector") -> "QVector":
        return QVector(np.concatenate([self._data, other._data], axis=0))

    def __repr__(self):
        return f"QVector({self._data.tolist()!r})"


class QMatrix:
    """Row-major N x M quaternion matrix stored as an ``(N, M, 4)`` array."""

    __slots__ = ("_data",)

    def __init__(self, data):
        if isinstance(data, QMatrix):
            arr = data._data.copy()
        else:
            arr = np.array(data, dtype=np.float64)
        if arr.ndim != 3 or arr.shape[2] != 4:
            raise ValueError(f"expected an (N, M, 4) component array, got shape {arr.shape}")
        arr.flags.writeable = False
        self._data = arr

    @classmethod
    def zeros(cls, n: int, m: int) -> "QMatrix":
        return cls(np.zeros((n, m, 4)))

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        data = np.zeros((n, n, 4))
        data[np.arange(n), np.arange(n), 0] = 1.0
        return cls(data)

    @property
    def components(self) -> np.ndarray:
        return self._data

    @property
    def shape(self) -> tuple:
        return self._data.shape[:2]

    def __getitem__(self, index) -> Quaternion:
        n, m = index
        return Quaternion.from_components(self._data[n, m])

    def conjugate(self) -> "QMatrix":
        return QMatrix(algebra.conjugate(self._data))

    def involute(self, axis: str) -> "QMatrix":
        return QMatrix(algebra.involute(self._data, axis))

    def transpose(self) -> "QMatrix":
        return QMatrix(self._data.transpose(1, 0, 2))

    def hermitian_transpose(self) -> "QMatrix":
        return QMatrix(algebra.conjugate(self._data.transpose(1, 0, 2)))

    @property
    def H(self) -> "QMatrix":
        return self.hermitian_transpose()

    def __add__(self, other: "QMatrix") -> "QMatrix":
        _check_same_shape(self, other)
        return QMatrix(self._data + other._data)

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        _check_same_shape(self, other)
        return QMatrix(self._data - other._data)

    def __mul__(self, scale) -> "QMatrix":
        if isinstance(scale, (int, float)):
            return QMatrix(self._data * float(scale))
        return NotImplemented

    __rmul__ = __mul__

    def matvec(self, x: QVector) -> QVector:
        """``(A x)_n = sum_m A_nm x_m`` with matrix entries on the left."""
        if self.shape[1] != len(x):
            raise DimensionMismatch(f"cannot apply {self.shape} matrix to length-{len(x)} vector")
        prod = hamilton(self._data, x.components[None, :, :])
        return QVector(prod.sum(axis=1))

    def __matmul__(self, other):
        if isinstance(other, QVector):
            return self.matvec(other)
        if not isinstance(other, QMatrix):
            return NotImplemented
        if self.shape[1] != other.shape[0]:
            raise DimensionMismatch(f"cannot multiply shapes {self.shape} and {other.shape}")
        prod = hamilton(self._data[:, :, None, :], other._data[None, :, :, :])
        return QMatrix(prod.sum(axis=1))

    def frobenius_norm(self) -> float:
        return float(np.sqrt((self._data**2).sum()))

    def is_hermitian(self, tol: float = 1e-10) -> bool:
        scale = max(1.0, float(np.abs(self._data).max()))
        diff = self._data - self.hermitian_transpose()._data
        return bool(np.abs(diff).max() <= tol * scale)

    def trace(self) -> Quaternion:
        n = min(self.shape)
        return Quaternion.from_components(self._data[np.arange(n), np.arange(n)].sum(axis=0))

    def __repr__(self):
        return f"QMatrix(shape={self.shape})"


def _check_same_length(a: QVector, b: QVector) -> None:
    if len(a) != len(b):
        raise DimensionMismatch(f"vector lengths differ: {len(a)} vs {len(b)}")


def _check_same_shape(a: QMatrix, b: QMatrix) -> None:
    if a.shape != b.shape:
        raise DimensionMismatch(f"matrix shapes differ: {a.shape} vs {b.shape}")


def outer(x: QVector, y: QVector) -> QMatrix:
    """Outer product ``x y^H`` with entries ``x_n y_m*``.

    ``outer(x, x)`` is Hermitian, which is what makes it the building block
    of sample covariance estimates.
    """
    prod = hamilton(x.components[:, None, :], algebra.conjugate(y.components)[None, :, :])
    return QMatrix(prod)


def real_embedding(matrix: QMatrix) -> np.ndarray:
    """Left-multiplication real representation of a square quaternion matrix.

    Each entry becomes its 4x4 left-multiplication block, so the result is a
    4Nx4N real matrix satisfying ``embed(A) @ embed(B) == embed(A @ B)`` and
    ``embed(A) @ stack(x) == stack(A @ x)`` for the per-element component
    stacking used by :func:`stack_components`.  Hermitian input produces a
    symmetric embedding whose eigenvalues come in groups of four.
    """
    n, m = matrix.shape
    if n != m:
        raise DimensionMismatch(f"real embedding requires a square matrix, got {matrix.shape}")
    r = matrix.components[..., 0]
    i = matrix.components[..., 1]
    j = matrix.components[..., 2]
    k = matrix.components[..., 3]
    out = np.empty((4 * n, 4 * n))
    out[0::4, 0::4] = r
    out[0::4, 1::4] = -i
    out[0::4, 2::4] = -j
    out[0::4, 3::4] = -k
    out[1::4, 0::4] = i
    out[1::4, 1::4] = r
    out[1::4, 2::4] = -k
    out[1::4, 3::4] = j
    out[2::4, 0::4] = j
    out[2::4, 1::4] = k
    out[2::4, 2::4] = r
    out[2::4, 3::4] = -i
    out[3::4, 0::4] = k
    out[3::4, 1::4] = -j
    out[3::4, 2::4] = i
    out[3::4, 3::4] = r
    return out


def stack_components(x: QVector) -> np.ndarray:
    """Flatten to length 4N with each element's components contiguous."""
    return x.components.reshape(-1)


def unstack_components(flat: np.ndarray) -> QVector:
    return QVector(np.asarray(flat, dtype=np.float64).reshape(-1, 4))


def hermitian_eigenvalues(matrix: QMatrix, cluster_tol: float = 1e-8) -> np.ndarray:
    """Eigenvalues of a Hermitian quaternion matrix, ascending.

    Computed on the symmetric real embedding, whose spectrum consists of the
    N quaternion eigenvalues each with multiplicity four; quadruples are
    collapsed by averaging.  ``cluster_tol`` guards against quadruples that
    fail to cluster, which would indicate a non-Hermitian input.
    """
    embedded = real_embedding(matrix)
    values = np.linalg.eigvalsh(embedded)
    groups = values.reshape(-1, 4)
    spread = groups.max(axis=1) - groups.min(axis=1)
    scale = max(1.0, float(np.abs(values).max()))
    if np.any(spread > cluster_tol * scale):
        raise ValueError("embedded spectrum does not cluster in quadruples; input not Hermitian?")
    return groups.mean(axis=1)


def solve_hermitian(matrix: QMatrix, rhs: QVector, cond_limit: float = 1e12) -> QVector:
    """Solve ``A x = b`` for Hermitian ``A`` through the real embedding."""
    if matrix.shape[0] != len(rhs):
        raise DimensionMismatch(f"matrix {matrix.shape} incompatible with rhs length {len(rhs)}")
    embedded = real_embedding(matrix)
    if np.linalg.cond(embedded) > cond_limit:
        raise SingularCovariance(f"condition estimate exceeds {cond_limit:g}")
    flat = np.linalg.solve(embedded, stack_components(rhs))
    return unstack_components(flat)
