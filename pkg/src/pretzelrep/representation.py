"""Explicit SL(2,C) matrices realizing a locus point.

Gauge: ``X1`` upper triangular and ``X2`` lower triangular, with
off-diagonal corners ``s`` and ``-s`` where ``s = sqrt(r3 - 2)``, so that
``tr(X1 X2^-1) = 2 + s^2 = r3``.  The remaining trace conditions are then
linear in the entries of ``X3``.  Unimodularity of ``X3`` is *not* imposed;
it comes out of the solve only if the locus data satisfies the quadratic
meridian-trace equation, which makes ``det(X3) - 1`` an independent
certificate for that equation.

Putting ``s`` in both corners (rather than ``1`` and ``2 - r3``) is a
diagonal conjugation of the same representation; it keeps the 4x4 system
well conditioned as ``r3 -> 2+``, where the unbalanced form loses about
half the available digits.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import InvalidInput, NonUnimodular, SingularSystem
from .trace_locus import DEFAULT_CONFIG, LocusPoint, PretzelKnot, ToleranceConfig

MAX_CONDITION = 1e12


@dataclass(frozen=True)
class Matrix2:
    a: complex
    b: complex
    c: complex
    d: complex

    @classmethod
    def identity(cls) -> "Matrix2":
        return cls(1, 0, 0, 1)

    def __matmul__(self, other: "Matrix2") -> "Matrix2":
        return Matrix2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __add__(self, other: "Matrix2") -> "Matrix2":
        return Matrix2(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    def __sub__(self, other: "Matrix2") -> "Matrix2":
        return Matrix2(self.a - other.a, self.b - other.b, self.c - other.c, self.d - other.d)

    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    def trace(self) -> complex:
        return self.a + self.d

    def inv(self) -> "Matrix2":
        det = self.det()
        return Matrix2(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def power(self, n: int) -> "Matrix2":
        """Binary exponentiation on raw products (no renormalization)."""
        base = self if n >= 0 else self.inv()
        n = abs(n)
        result = Matrix2.identity()
        while n:
            if n & 1:
                result = result @ base
            n >>= 1
            if n:
                base = base @ base
        return result

    def max_abs(self) -> float:
        return max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))

    def to_list(self) -> list[list[complex]]:
        return [[self.a, self.b], [self.c, self.d]]


@dataclass(frozen=True)
class Representation:
    knot: PretzelKnot
    X1: Matrix2
    X2: Matrix2
    X3: Matrix2
    sign: int
    t: float
    m: complex
    r_prod: float
    condition: float
    relation_residual: float

    @property
    def generators(self) -> tuple[Matrix2, Matrix2, Matrix2]:
        return (self.X1, self.X2, self.X3)


def meridian_eigenvalue(t: float) -> complex:
    """Root of ``m + 1/m = t``: on the upper unit circle for ``|t| < 2``,
    the root with ``|m| > 1`` for ``|t| > 2``."""
    m = 0.5 * (t + cmath.sqrt(t * t - 4.0))
    if abs(m) < 1.0:
        m = 1.0 / m
    return m


def build_representation(
    point: LocusPoint,
    sign: int,
    cfg: ToleranceConfig = DEFAULT_CONFIG,
    *,
    strict: bool = True,
) -> Representation:
    """Images of the three meridians realizing ``point`` on branch ``sign``.

    With ``strict=False`` a non-unimodular ``X3`` is returned instead of
    raising; this is how perturbed (off-locus) data is probed.
    """
    if sign not in (1, -1):
        raise InvalidInput(f"sign must be +1 or -1, got {sign!r}")
    if not point.T > 0:
        raise InvalidInput(f"T = {point.T} must be positive")
    if point.T == 4.0:
        raise InvalidInput("parabolic meridian (t = +-2) is not supported")
    t = sign * math.sqrt(point.T)
    m = meridian_eigenvalue(t)
    s = math.sqrt(point.offsets[2])
    r_prod = t * (point.T - 3.0 - point.gamma_offset)  # t^3 + t - t*gamma

    system = np.array(
        [
            [1, 0, 0, 1],
            [1 / m, 0, -s, m],
            [1 / m, s, 0, m],
            [m * m - s * s, -s / m, s / m, 1 / (m * m)],
        ],
        dtype=complex,
    )
    condition = float(np.linalg.cond(system))
    if not condition <= MAX_CONDITION:
        raise SingularSystem(f"trace system condition {condition:.3g} exceeds {MAX_CONDITION:g}")
    rhs = np.array([t, point.r2, point.r1, r_prod], dtype=complex)
    a, b, c, d = (complex(x) for x in np.linalg.solve(system, rhs))

    X1 = Matrix2(m, s, 0, 1 / m)
    X2 = Matrix2(m, 0, -s, 1 / m)
    X3 = Matrix2(a, b, c, d)
    if strict and abs(X3.det() - 1) > cfg.residual_tol:
        raise NonUnimodular(f"|det(X3) - 1| = {abs(X3.det() - 1):.3g} at r1 = {point.r1!r}")

    rep = Representation(
        knot=point.knot,
        X1=X1,
        X2=X2,
        X3=X3,
        sign=sign,
        t=t,
        m=m,
        r_prod=r_prod,
        condition=condition,
        relation_residual=float("nan"),
    )
    return replace(rep, relation_residual=relation_residual(rep, rep.knot))


def _conjugated(X: dict, i: int, j: int, e: int, x: int) -> Matrix2:
    # (X_i X_j^-1)^e X_x (X_i X_j^-1)^-e
    W = (X[i] @ X[j].inv()).power(e)
    return W @ X[x] @ W.inv()


def relation_residual(rep: Representation, knot: PretzelKnot) -> float:
    """Largest entrywise gap between the two sides of the three relations."""
    k1, k2, k3 = knot.k
    X = {1: rep.X1, 2: rep.X2, 3: rep.X3}
    pairs = (
        (_conjugated(X, 2, 3, k1 + 1, 3), _conjugated(X, 1, 2, k3, 1)),
        (_conjugated(X, 3, 1, k2 + 1, 1), _conjugated(X, 2, 3, k1, 2)),
        (_conjugated(X, 1, 2, k3 + 1, 2), _conjugated(X, 3, 1, k2, 3)),
    )
    return max((lhs - rhs).max_abs() for lhs, rhs in pairs)


def meridian_power_residual(rep: Representation, n: int) -> float:
    """``max |X1^n + I|`` entrywise."""
    if n < 1:
        raise InvalidInput(f"n must be >= 1, got {n}")
    return (rep.X1.power(n) + Matrix2.identity()).max_abs()


def trace_report(rep: Representation, point: LocusPoint) -> dict[str, float]:
    """Recovered-trace errors, imaginary parts and determinant defects."""
    X1, X2, X3 = rep.generators
    traces = {
        "x1": (X1.trace(), rep.t),
        "x2": (X2.trace(), rep.t),
        "x3": (X3.trace(), rep.t),
        "x2x3^-1": ((X2 @ X3.inv()).trace(), point.r1),
        "x3x1^-1": ((X3 @ X1.inv()).trace(), point.r2),
        "x1x2^-1": ((X1 @ X2.inv()).trace(), point.r3),
        "x1x2x3": ((X1 @ X2 @ X3).trace(), rep.r_prod),
    }
    return {
        "trace_error": max(abs(got - want) for got, want in traces.values()),
        "trace_imag": max(abs(got.imag) for got, _ in traces.values()),
        "det_error": max(abs(X.det() - 1) for X in rep.generators),
        "det_x3_error": abs(X3.det() - 1),
    }
