"""Chebyshev polynomials of the second kind.

``S_0 = 1``, ``S_1 = z`` and ``S_j = z S_{j-1} - S_{j-2}``; running the
recurrence one step backwards gives ``S_{-1} = 0``.

Consecutive ratios ``S_k / S_{k-1}`` are kept as a pair ``(w, v)`` so the
``k = 0`` case (ratio at infinity) needs no special handling downstream.
"""

from __future__ import annotations

from dataclasses import dataclass


def cheb_eval(j: int, z):
    """Return ``S_j(z)`` for ``j >= -1`` by forward recurrence.

    Works for any numeric type closed under ``*`` and ``-`` (float,
    complex, :class:`fractions.Fraction`), which the exact-arithmetic
    property tests rely on.

    >>> cheb_eval(4, 3)
    55
    >>> cheb_eval(-1, 2.5)
    0.0
    """
    if j < -1:
        raise ValueError(f"S_j defined here for j >= -1, got j={j}")
    if j == -1:
        return z * 0
    return cheb_pair(j, z)[0]


def cheb_pair(k: int, z) -> tuple:
    """``(S_k(z), S_{k-1}(z))`` in a single recurrence pass."""
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    prev, cur = z * 0, z * 0 + 1
    for _ in range(k):
        prev, cur = cur, z * cur - prev
    return cur, prev


@dataclass(frozen=True)
class ChebRatio:
    """Projective ratio ``w : v = S_k(z) : S_{k-1}(z)``."""

    w: float
    v: float
    k: int
    z: float

    @property
    def ratio(self) -> float:
        return self.w / self.v if self.v != 0 else float("inf")

    def to_dict(self) -> dict:
        return {"w": self.w, "v": self.v, "k": self.k, "z": self.z}


def cheb_ratio(k: int, z: float) -> ChebRatio:
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    w, v = cheb_pair(k, z)
    return ChebRatio(w=w, v=v, k=k, z=z)
