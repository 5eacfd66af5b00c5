"""Scalar quaternion arithmetic and the vectorized component kernels.

A quaternion ``q = q_r + i q_i + j q_j + k q_k`` is stored as four contiguous
float64 components in the order ``(r, i, j, k)``.  The module-level kernels
operate on arrays whose last axis has length 4 and broadcast like ordinary
numpy functions; the :class:`Quaternion` class wraps a single such 4-vector
for convenience.
"""

from __future__ import annotations

import numpy as np

from .exceptions import NonUnitRotor

PARTS = ("r", "i", "j", "k")
AXES = ("i", "j", "k")

_PART_INDEX = {"r": 0, "i": 1, "j": 2, "k": 3}

# Component sign patterns for -eta*q*eta, eta in {i, j, k}: the two axes
# orthogonal to eta are negated.
_INVOLUTION_SIGNS = {
    "i": np.array([1.0, 1.0, -1.0, -1.0]),
    "j": np.array([1.0, -1.0, 1.0, -1.0]),
    "k": np.array([1.0, -1.0, -1.0, 1.0]),
}

_CONJUGATION_SIGNS = np.array([1.0, -1.0, -1.0, -1.0])


def as_components(q) -> np.ndarray:
    """Coerce ``q`` to a float64 array with component axis last."""
    if isinstance(q, Quaternion):
        return q.components
    arr = np.asarray(q, dtype=np.float64)
    if arr.shape == ():
        out = np.zeros(4)
        out[0] = arr
        return out
    if arr.shape[-1] != 4:
        raise ValueError(f"expected a trailing component axis of length 4, got shape {arr.shape}")
    return arr


def hamilton(a, b, out=None) -> np.ndarray:
    """Hamilton product of two component arrays, broadcasting over leading axes.

    The product is associative and distributive but not commutative
    (``i*j = k`` while ``j*i = -k``).
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    ar, ai, aj, ak = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    br, bi, bj, bk = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    if out is None:
        out = np.empty(np.broadcast_shapes(a.shape, b.shape))
    out[..., 0] = ar * br - ai * bi - aj * bj - ak * bk
    out[..., 1] = ar * bi + ai * br + aj * bk - ak * bj
    out[..., 2] = ar * bj - ai * bk + aj * br + ak * bi
    out[..., 3] = ar * bk + ai * bj - aj * bi + ak * br
    return out


def conjugate(q) -> np.ndarray:
    """Negate the vector part: ``q* = Sq - Vq``."""
    return np.asarray(q, dtype=np.float64) * _CONJUGATION_SIGNS


def involute(q, axis: str) -> np.ndarray:
    """Self-inverse mapping ``-eta q eta`` for a unit axis ``eta`` in {i, j, k}."""
    try:
        signs = _INVOLUTION_SIGNS[axis]
    except KeyError:
        raise ValueError(f"axis must be one of {AXES}, got {axis!r}") from None
    return np.asarray(q, dtype=np.float64) * signs


def squared_norm(q) -> np.ndarray:
    """``q q* = q_r^2 + q_i^2 + q_j^2 + q_k^2``, reduced over the component axis."""
    q = np.asarray(q, dtype=np.float64)
    return np.einsum("...c,...c->...", q, q)


def norm(q) -> np.ndarray:
    return np.sqrt(squared_norm(q))


def scalar_part(q) -> np.ndarray:
    return np.asarray(q, dtype=np.float64)[..., 0]


def vector_part(q) -> np.ndarray:
    """Pure-quaternion projection: zero the scalar component."""
    out = np.array(q, dtype=np.float64)
    out[..., 0] = 0.0
    return out


def unit(axis: str) -> np.ndarray:
    """Component array of the unit quaternion for ``axis`` in {r, i, j, k}."""
    out = np.zeros(4)
    out[_PART_INDEX[axis]] = 1.0
    return out


def left_matrix(q) -> np.ndarray:
    """4x4 real matrix of left multiplication by ``q`` in the (r, i, j, k) basis.

    ``left_matrix(a) @ b.components == (a * b).components``; the map is a
    ring homomorphism, which makes it the workhorse behind the real embedding
    of quaternion matrices.
    """
    r, i, j, k = as_components(q)
    return np.array(
        [
            [r, -i, -j, -k],
            [i, r, -k, j],
            [j, k, r, -i],
            [k, -j, i, r],
        ]
    )


class Quaternion:
    """Immutable scalar quaternion over four float64 components."""

    __slots__ = ("_c",)

    def __init__(self, r=0.0, i=0.0, j=0.0, k=0.0):
        c = np.array([r, i, j, k], dtype=np.float64)
        c.flags.writeable = False
        self._c = c

    @classmethod
    def from_components(cls, components) -> "Quaternion":
        c = np.asarray(components, dtype=np.float64)
        if c.shape != (4,):
            raise ValueError(f"expected 4 components, got shape {c.shape}")
        return cls(c[0], c[1], c[2], c[3])

    @property
    def r(self) -> float:
        return float(self._c[0])

    @property
    def i(self) -> float:
        return float(self._c[1])

    @property
    def j(self) -> float:
        return float(self._c[2])

    @property
    def k(self) -> float:
        return float(self._c[3])

    @property
    def components(self) -> np.ndarray:
        return self._c

    def conjugate(self) -> "Quaternion":
        return Quaternion.from_components(conjugate(self._c))

    def involution(self, axis: str) -> "Quaternion":
        return Quaternion.from_components(involute(self._c, axis))

    def component(self, part: str) -> float:
        """Extract one real component through its involution identity.

        Each component is a signed quarter-sum of ``q`` and its three
        involutions, e.g. ``q_r = (q + q^i + q^j + q^k) / 4``; the arithmetic
        is exact in floating point, so the result equals the field read.
        """
        if part not in _PART_INDEX:
            raise ValueError(f"part must be one of {PARTS}, got {part!r}")
        qs = [self._c] + [involute(self._c, ax) for ax in AXES]
        if part == "r":
            return float((qs[0] + qs[1] + qs[2] + qs[3])[0] / 4.0)
        idx = _PART_INDEX[part]
        signs = {"i": (1, 1, -1, -1), "j": (1, -1, 1, -1), "k": (1, -1, -1, 1)}[part]
        acc = sum(s * q for s, q in zip(signs, qs))
        # acc equals 4 * q_part * unit(part); dividing by the unit means
        # reading the matching component.
        return float(acc[idx] / 4.0)

    def squared_norm(self) -> float:
        return float(squared_norm(self._c))

    def norm(self) -> float:
        return float(norm(self._c))

    def inverse(self) -> "Quaternion":
        """Two-sided inverse ``q* / ||q||^2`` of a nonzero quaternion."""
        n2 = self.squared_norm()
        if n2 == 0.0:
            raise ZeroDivisionError("zero quaternion has no inverse")
        return Quaternion.from_components(conjugate(self._c) / n2)

    def is_pure(self, tol: float = 1e-12) -> bool:
        return abs(self.r) <= tol * max(1.0, self.norm())

    def __add__(self, other):
        other = _coerce(other)
        return Quaternion.from_components(self._c + other._c)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        return Quaternion.from_components(self._c - other._c)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __neg__(self):
        return Quaternion.from_components(-self._c)

    def __mul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Quaternion.from_components(self._c * float(other))
        if isinstance(other, Quaternion):
            return Quaternion.from_components(hamilton(self._c, other._c))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Quaternion.from_components(self._c * float(other))
        return NotImplemented

    def __truediv__(self, other):
        # Quaternion/quaternion division is deliberately not provided; go
        # through conjugate() and squared_norm() and pick a side explicitly.
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Quaternion.from_components(self._c / float(other))
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            other = Quaternion(float(other))
        if not isinstance(other, Quaternion):
            return NotImplemented
        return bool(np.array_equal(self._c, other._c))

    def __hash__(self):
        return hash(tuple(self._c))

    def __repr__(self):
        return f"Quaternion({self.r:g}, {self.i:g}, {self.j:g}, {self.k:g})"


def _coerce(value) -> Quaternion:
    if isinstance(value, Quaternion):
        return value
    if isinstance(value, (int, float, np.floating, np.integer)):
        return Quaternion(float(value))
    raise TypeError(f"cannot interpret {type(value).__name__} as a quaternion")


def rotate(point: Quaternion, rotor: Quaternion, tol: float = 1e-12) -> Quaternion:
    """Rotate a pure quaternion: ``rotor * point * rotor*``.

    The rotor must be unit norm within ``tol``; the rotation preserves the
    norm of ``point`` and returns a pure quaternion.
    """
    if abs(rotor.norm() - 1.0) > tol:
        raise NonUnitRotor(f"rotor norm {rotor.norm()!r} deviates from 1 beyond {tol}")
    if not point.is_pure(tol):
        raise ValueError("rotation is defined for pure quaternions (zero scalar part)")
    out = hamilton(hamilton(rotor.components, point.components), conjugate(rotor.components))
    out[0] = 0.0  # exact in exact arithmetic; drop rounding residue
    return Quaternion.from_components(out)
