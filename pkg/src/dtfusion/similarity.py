"""Fuzzy similarity measures between a decision template and a decision profile.

Both arguments are K-by-C matrices with entries in [0, 1], viewed as fuzzy
sets over the K*C cells.  Six measures are provided, named by the short tags
used throughout the CLI and report formats:

  S1  ratio of the cellwise min-sum to the cellwise max-sum
  S2  one minus the largest absolute cellwise difference
  I1  inclusion index: min-sum over the template's own mass
  I2  inclusion index: smallest cell of max(1 - template, profile)
  C   consistency: largest cell of min(template, profile)
  N   one minus the mean squared cellwise difference

S2 and I2 are pointwise: they depend on a single extremal cell.  N is the
squared-distance complement (despite often being referred to as a Euclidean
distance, no square root is taken).

Sums are accumulated with compensated summation (math.fsum), so a joint
permutation of the rows or columns of both arguments never changes any
measure's value, not even in the last bit.  Inputs are never renormalized
here; validation happens upstream.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from .errors import DegenerateInputError, ShapeError


class Measure(enum.Enum):
    """The six template/profile comparison measures."""

    S1 = "S1"
    S2 = "S2"
    I1 = "I1"
    I2 = "I2"
    C = "C"
    N = "N"

    @classmethod
    def parse(cls, name: str) -> "Measure":
        """Case-insensitive lookup by tag; raises ValueError off the six tags."""
        try:
            return cls[str(name).strip().upper()]
        except KeyError:
            valid = ", ".join(m.value for m in cls)
            raise ValueError(
                f"unknown measure {name!r}; valid measures: {valid}"
            ) from None


def _check_pair(dt: np.ndarray, dp: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    dt = np.asarray(dt, dtype=np.float64)
    dp = np.asarray(dp, dtype=np.float64)
    if dt.ndim != 2 or dp.ndim != 2:
        raise ShapeError(
            f"expected two 2-D matrices, got shapes {dt.shape} and {dp.shape}"
        )
    if dt.shape != dp.shape:
        raise ShapeError(f"shape mismatch: template {dt.shape} vs profile {dp.shape}")
    return dt, dp


def _fsum(cells: np.ndarray) -> float:
    # fsum is correctly rounded, hence independent of cell order.
    return math.fsum(cells.ravel())


def s1(dt: np.ndarray, dp: np.ndarray) -> float:
    """Min-sum over max-sum.  For row-stochastic inputs the denominator is
    at least K, so it can only vanish on two all-zero matrices."""
    dt, dp = _check_pair(dt, dp)
    denom = _fsum(np.maximum(dt, dp))
    if denom == 0.0:
        raise DegenerateInputError("s1: both matrices are all zeros")
    return _fsum(np.minimum(dt, dp)) / denom


def s2(dt: np.ndarray, dp: np.ndarray) -> float:
    """One minus the largest absolute cellwise difference."""
    dt, dp = _check_pair(dt, dp)
    return 1.0 - float(np.abs(dt - dp).max())


def i1(dt: np.ndarray, dp: np.ndarray) -> float:
    """Min-sum over the template's total mass (= K for row-stochastic templates)."""
    dt, dp = _check_pair(dt, dp)
    denom = _fsum(dt)
    if denom == 0.0:
        raise DegenerateInputError("i1: template is all zeros")
    return _fsum(np.minimum(dt, dp)) / denom


def i2(dt: np.ndarray, dp: np.ndarray) -> float:
    """Smallest cell of max(complement of template, profile)."""
    dt, dp = _check_pair(dt, dp)
    return float(np.maximum(1.0 - dt, dp).min())


def c_measure(dt: np.ndarray, dp: np.ndarray) -> float:
    """Largest cell of min(template, profile)."""
    dt, dp = _check_pair(dt, dp)
    return float(np.minimum(dt, dp).max())


def n_measure(dt: np.ndarray, dp: np.ndarray) -> float:
    """One minus the mean squared cellwise difference."""
    dt, dp = _check_pair(dt, dp)
    diff = dt - dp
    return 1.0 - _fsum(diff * diff) / diff.size


_DISPATCH = {
    Measure.S1: s1,
    Measure.S2: s2,
    Measure.I1: i1,
    Measure.I2: i2,
    Measure.C: c_measure,
    Measure.N: n_measure,
}


def score(kind: Measure | str, dt: np.ndarray, dp: np.ndarray) -> float:
    """Evaluate one measure by tag; identical to calling it directly."""
    if not isinstance(kind, Measure):
        kind = Measure.parse(kind)
    return _DISPATCH[kind](dt, dp)
