"""Input validation helpers shared by estimators and statistics routines."""

from __future__ import annotations

import numpy as np

from .algebra import Quaternion
from .exceptions import EmptyInput, RaggedInput
from .linalg import QVector


def as_quaternion_samples(samples) -> np.ndarray:
    """Coerce a scalar quaternion stream to a ``(K, 4)`` float64 array.

    Accepts an array, a sequence of :class:`Quaternion`, or a ``QVector``
    (interpreted as K scalar samples).
    """
    if isinstance(samples, QVector):
        return samples.components
    if isinstance(samples, np.ndarray):
        arr = samples.astype(np.float64, copy=False)
    else:
        seq = list(samples)
        if seq and isinstance(seq[0], Quaternion):
            arr = np.stack([q.components for q in seq])
        else:
            arr = np.asarray(seq, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 4:
        raise ValueError(f"expected a (K, 4) sample array, got shape {arr.shape}")
    if arr.shape[0] == 0:
        raise EmptyInput("at least one sample is required")
    return arr


def as_vector_samples(samples) -> np.ndarray:
    """Coerce a sequence of quaternion vectors to ``(K, N, 4)``.

    Scalar streams are promoted to N=1.  Raises ``RaggedInput`` when the
    per-sample lengths disagree.
    """
    if isinstance(samples, np.ndarray):
        arr = samples.astype(np.float64, copy=False)
        if arr.ndim == 2 and arr.shape[1] == 4:
            arr = arr[:, None, :]
        if arr.ndim != 3 or arr.shape[2] != 4:
            raise ValueError(f"expected a (K, N, 4) sample array, got shape {arr.shape}")
        if arr.shape[0] == 0:
            raise EmptyInput("at least one sample is required")
        return arr
    seq = list(samples)
    if not seq:
        raise EmptyInput("at least one sample is required")
    if isinstance(seq[0], QVector):
        lengths = {len(v) for v in seq}
        if len(lengths) != 1:
            raise RaggedInput(f"sample lengths differ: {sorted(lengths)}")
        return np.stack([v.components for v in seq])
    if isinstance(seq[0], Quaternion):
        return np.stack([q.components for q in seq])[:, None, :]
    return as_vector_samples(np.asarray(seq, dtype=np.float64))


def check_finite(arr: np.ndarray, what: str) -> None:
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} contains non-finite values")
