"""Real trace locus of the pretzel knot group.

For ``P(a1, a2, a3)`` with odd ``a_j = 2 k_j + 1`` sorted ascending, every
``r1 > 2`` determines a unique triple ``(r1, r2, r3)`` of traces of
``x2 x3^-1``, ``x3 x1^-1``, ``x1 x2^-1`` satisfying the Chebyshev system,
and from it ``gamma``, ``delta`` and the squared meridian trace ``T``.

Internally everything is carried in offset coordinates ``d_j = r_j - 2``.
The locus collapses onto ``r_j = 2`` as ``r1 -> 2+``, and the quantities of
interest there (``delta``, the quadratic in ``gamma``) are differences of
O(1) terms that agree to O(d^2); in offsets they are computed without that
cancellation.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from functools import lru_cache

from ._roots import bisect
from .chebyshev import ChebRatio, cheb_pair, cheb_ratio
from .errors import DegenerateBracket, InvalidInput, NoCrossing, Unsupported

R1_CROSSING_CAP = 1e6


@dataclass(frozen=True)
class PretzelKnot:
    """Odd classical pretzel knot; parameters are sorted on construction.

    Sorting is harmless because any permutation of the three tangles gives
    an isotopic knot.
    """

    a1: int
    a2: int
    a3: int

    def __post_init__(self):
        params = (self.a1, self.a2, self.a3)
        for a in params:
            if isinstance(a, bool) or not isinstance(a, int):
                raise InvalidInput(f"pretzel parameters must be integers, got {params!r}")
            if a < 1 or a % 2 == 0:
                raise InvalidInput(f"pretzel parameters must be positive and odd, got {params}")
        a1, a2, a3 = sorted(params)
        if a1 == 1 and a3 != 1:
            raise Unsupported(
                f"P{(a1, a2, a3)}: a1 = 1 is only supported for the trefoil P(1,1,1)"
            )
        object.__setattr__(self, "a1", a1)
        object.__setattr__(self, "a2", a2)
        object.__setattr__(self, "a3", a3)

    @classmethod
    def parse(cls, text: str) -> "PretzelKnot":
        """Parse ``"a1,a2,a3"``."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 3:
            raise InvalidInput(f"expected three comma-separated integers, got {text!r}")
        try:
            values = [int(p) for p in parts]
        except ValueError:
            raise InvalidInput(f"expected three comma-separated integers, got {text!r}") from None
        return cls(*values)

    @property
    def a(self) -> tuple[int, int, int]:
        return (self.a1, self.a2, self.a3)

    @property
    def k(self) -> tuple[int, int, int]:
        return tuple((a - 1) // 2 for a in self.a)

    @property
    def k1(self) -> int:
        return (self.a1 - 1) // 2

    @property
    def k2(self) -> int:
        return (self.a2 - 1) // 2

    @property
    def k3(self) -> int:
        return (self.a3 - 1) // 2

    @property
    def symmetric(self) -> bool:
        return self.a1 == self.a3

    @property
    def pair_sum(self) -> int:
        """``1 + a1 a2 + a2 a3 + a3 a1``."""
        a1, a2, a3 = self.a
        return 1 + a1 * a2 + a2 * a3 + a3 * a1

    def __str__(self) -> str:
        return f"P({self.a1},{self.a2},{self.a3})"

    def to_dict(self) -> dict:
        return {"a": list(self.a), "k": list(self.k)}


@dataclass(frozen=True)
class ToleranceConfig:
    root_tol: float = 1e-13
    residual_tol: float = 1e-9
    max_iter: int = 200
    march_step: float = 1e-2
    boundary_eps: float = 1e-9

    def __post_init__(self):
        for name in ("root_tol", "residual_tol", "march_step", "boundary_eps"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise InvalidInput(f"{name} must be a positive finite number, got {value!r}")
        if not isinstance(self.max_iter, int) or self.max_iter < 64:
            raise InvalidInput(f"max_iter must be an integer >= 64, got {self.max_iter!r}")

    def to_dict(self) -> dict:
        return asdict(self)


DEFAULT_CONFIG = ToleranceConfig()


@dataclass(frozen=True)
class LocusPoint:
    knot: PretzelKnot
    r1: float
    r2: float
    r3: float
    offsets: tuple[float, float, float]
    p1: ChebRatio
    p2: ChebRatio
    p3: ChebRatio
    gamma: float
    gamma_offset: float
    sigma1: float
    sigma2: float
    sigma3: float
    delta: float
    T: float

    @property
    def r(self) -> tuple[float, float, float]:
        return (self.r1, self.r2, self.r3)

    @property
    def p(self) -> tuple[ChebRatio, ChebRatio, ChebRatio]:
        return (self.p1, self.p2, self.p3)

    def to_dict(self) -> dict:
        return {
            "r1": self.r1,
            "r2": self.r2,
            "r3": self.r3,
            "offsets": list(self.offsets),
            "p": [p.to_dict() for p in self.p],
            "gamma": self.gamma,
            "sigma1": self.sigma1,
            "sigma2": self.sigma2,
            "sigma3": self.sigma3,
            "delta": self.delta,
            "T": self.T,
        }


def _r2_offset(d1: float, d3: float, w1: float, v1: float, w3: float, v3: float) -> float:
    # r2 - 2 = (r1 - r3)(p1 p3 - 1)/(p1 - p3), cleared of the v's
    return (d1 - d3) * (w1 * w3 - v1 * v3) / (w1 * v3 - w3 * v1)


def _f_offset(knot: PretzelKnot, d1: float, d3: float, w1: float, v1: float) -> float:
    k1, k2, k3 = knot.k
    w3, v3 = cheb_pair(k3, 2.0 + d3)
    d2 = _r2_offset(d1, d3, w1, v1, w3, v3)
    w2, v2 = cheb_pair(k2, 2.0 + d2)
    return (
        d3 * v3 / (w3 - v3)
        - (d1 - d3)
        - (d1 - d3) * v2 / (w2 - v2)
        - d1 * v1 / (w1 - v1)
    )


def residual_f(knot: PretzelKnot, r1: float, r3: float) -> float:
    """The strictly increasing function whose zero in ``(2, r1)`` is ``r3``.

    Negative as ``r3 -> 2+`` and positive as ``r3 -> r1-``.
    """
    if knot.symmetric:
        raise InvalidInput(f"{knot} has k1 = k3; its locus is r1 = r2 = r3, no root to find")
    d1, d3 = r1 - 2.0, r3 - 2.0
    if not (0.0 < d3 < d1):
        raise DegenerateBracket(f"r3={r3!r} outside the open interval (2, r1={r1!r})")
    w1, v1 = cheb_pair(knot.k1, r1)
    return _f_offset(knot, d1, d3, w1, v1)


def _solve_offsets(knot: PretzelKnot, d1: float, cfg: ToleranceConfig) -> tuple[float, float]:
    if knot.symmetric:
        return d1, d1
    w1, v1 = cheb_pair(knot.k1, 2.0 + d1)
    d3 = bisect(
        lambda d3: _f_offset(knot, d1, d3, w1, v1),
        0.0,
        d1,
        rtol=cfg.root_tol,
        max_iter=cfg.max_iter,
        f_lo=-1.0,
    )
    w3, v3 = cheb_pair(knot.k3, 2.0 + d3)
    return _r2_offset(d1, d3, w1, v1, w3, v3), d3


def solve_locus_offset(knot: PretzelKnot, d1: float, cfg: ToleranceConfig = DEFAULT_CONFIG) -> LocusPoint:
    """:func:`solve_locus` parametrized by ``d1 = r1 - 2`` directly."""
    if not (d1 >= cfg.boundary_eps and math.isfinite(d1)):
        raise InvalidInput(f"r1 - 2 = {d1!r} below boundary_eps={cfg.boundary_eps}")
    d2, d3 = _solve_offsets(knot, d1, cfg)
    r1, r2, r3 = 2.0 + d1, 2.0 + d2, 2.0 + d3
    p1, p2, p3 = (cheb_ratio(k, r) for k, r in zip(knot.k, (r1, r2, r3)))

    g = (p1.v * (d2 + d3) + p1.w * d1) / (p1.v + p1.w)
    s1 = d1 + d2 + d3
    e2 = d1 * d2 + d2 * d3 + d3 * d1
    # gamma^2 - (sigma1 + 2) gamma + sigma2 + 4, shifted by gamma = 4 + g
    quad = g * g - s1 * g + e2
    delta = d1 * d2 * d3 + 4.0 * d2 * d3 - (d2 + d3 - d1) ** 2

    return LocusPoint(
        knot=knot,
        r1=r1,
        r2=r2,
        r3=r3,
        offsets=(d1, d2, d3),
        p1=p1,
        p2=p2,
        p3=p3,
        gamma=4.0 + g,
        gamma_offset=g,
        sigma1=r1 + r2 + r3,
        sigma2=r1 * r2 + r2 * r3 + r3 * r1,
        sigma3=r1 * r2 * r3,
        delta=delta,
        T=delta / quad,
    )


def solve_locus(knot: PretzelKnot, r1: float, cfg: ToleranceConfig = DEFAULT_CONFIG) -> LocusPoint:
    """Locus point over ``r1``: the compatible ``(r2, r3)`` and derived traces.

    For ``k1 = k3`` the locus is the diagonal ``r1 = r2 = r3``; otherwise
    ``r3`` is the unique zero of :func:`residual_f` on ``(2, r1)``, found by
    bisection.
    """
    return solve_locus_offset(knot, r1 - 2.0, cfg)


def T_at_offset(knot: PretzelKnot, d1: float, cfg: ToleranceConfig = DEFAULT_CONFIG) -> float:
    return solve_locus_offset(knot, d1, cfg).T


def limit_T_exact(knot: PretzelKnot) -> Fraction:
    return 4 - Fraction(4, knot.pair_sum)


def limit_T(knot: PretzelKnot) -> float:
    """``lim T`` as ``r1 -> 2+``, i.e. ``4 - 4/(1 + a1 a2 + a2 a3 + a3 a1)``."""
    return float(limit_T_exact(knot))


def theta0(knot: PretzelKnot) -> float:
    """Angle in ``(0, pi/2)`` with ``4 cos^2(theta0) = limit_T``."""
    return 0.5 * math.acos(1.0 - 2.0 / knot.pair_sum)


# cos(2 pi / n) is rational only for these n
_RATIONAL_COS = {1: Fraction(1), 2: Fraction(-1), 3: Fraction(-1, 2), 4: Fraction(0), 6: Fraction(1, 2)}


def _above_threshold(knot: PretzelKnot, n: int) -> bool:
    # n > pi/theta0  <=>  cos(2 pi/n) > 1 - 2/N
    bound = 1 - Fraction(2, knot.pair_sum)
    if n in _RATIONAL_COS:
        return _RATIONAL_COS[n] > bound
    return math.cos(2.0 * math.pi / n) > float(bound)


def cover_threshold(knot: PretzelKnot) -> int:
    """Smallest integer ``n`` with ``n > pi / theta0``.

    The trefoil hits the bound exactly (``pi/theta0 = 6``), so ties are
    decided in exact arithmetic rather than by rounding ``pi/theta0``.
    """
    n = max(1, math.floor(math.pi / theta0(knot)) + 1)
    while n > 1 and _above_threshold(knot, n - 1):
        n -= 1
    while not _above_threshold(knot, n):
        n += 1
    return n


@lru_cache(maxsize=256)
def r1_star_offset(knot: PretzelKnot, cfg: ToleranceConfig = DEFAULT_CONFIG) -> float:
    """``r1* - 2`` for the first crossing ``T(r1*) = 4``."""
    d_prev = cfg.boundary_eps
    T_prev = T_at_offset(knot, d_prev, cfg)
    if T_prev >= 4.0:
        raise NoCrossing(f"{knot}: T(2 + eps) = {T_prev} already >= 4")
    while True:
        d = d_prev + cfg.march_step
        if d > R1_CROSSING_CAP:
            raise NoCrossing(f"{knot}: T stayed below 4 up to r1 = {R1_CROSSING_CAP:g}")
        T_d = T_at_offset(knot, d, cfg)
        if T_d >= 4.0:
            break
        d_prev = d
    if T_d == 4.0:
        return d
    return bisect(
        lambda x: T_at_offset(knot, x, cfg) - 4.0,
        d_prev,
        d,
        rtol=cfg.root_tol,
        max_iter=cfg.max_iter,
        f_lo=T_prev - 4.0,
    )


def find_r1_star(knot: PretzelKnot, cfg: ToleranceConfig = DEFAULT_CONFIG) -> float:
    """First ``r1 > 2`` with ``T(r1) = 4``; the elliptic path is ``(2, r1*)``."""
    return 2.0 + r1_star_offset(knot, cfg)


def limit_ratios(knot: PretzelKnot) -> tuple[Fraction, Fraction]:
    """Limits of ``(r2-2)/(r1-2)`` and ``(r3-2)/(r1-2)`` as ``r1 -> 2+``."""
    k1, k2, k3 = knot.k
    den = 1 + k2 + k3
    return Fraction(1 + k1 + k3, den), Fraction(1 + k1 + k2, den)


def _rel(diff: float, scale: float) -> float:
    return abs(diff) / scale if scale > 0 else abs(diff)


def locus_diagnostics(point: LocusPoint) -> dict[str, float]:
    """Residuals (want small) and margins (want positive) at a locus point.

    Residuals are relative to the magnitude of the terms being compared,
    so they measure rounding rather than the scale of the point.
    """
    d1, d2, d3 = point.offsets
    d = point.offsets
    w = [p.w for p in point.p]
    v = [p.v for p in point.p]
    g = point.gamma_offset
    s1 = d1 + d2 + d3

    # (r_i - 2)(p_j - p_k) = (r_j - r_k)(p_j p_k - 1), times v_j v_k
    eq = 0.0
    for i, j, k in ((0, 1, 2), (1, 0, 2), (2, 0, 1)):
        lhs = d[i] * (w[j] * v[k] - w[k] * v[j])
        rhs = (d[j] - d[k]) * (w[j] * w[k] - v[j] * v[k])
        scale = abs(d[i]) * (abs(w[j] * v[k]) + abs(w[k] * v[j])) + (abs(d[j]) + abs(d[k])) * (
            abs(w[j] * w[k]) + abs(v[j] * v[k])
        )
        eq = max(eq, _rel(lhs - rhs, scale))

    # (gamma - 2 - r_j) S_k(r_j) = (sigma1 - r_j - gamma) S_{k-1}(r_j)
    af1 = 0.0
    for j in range(3):
        lhs = (g - d[j]) * w[j]
        rhs = (s1 - d[j] - g) * v[j]
        scale = (abs(g) + abs(d[j])) * abs(w[j]) + (abs(s1) + abs(d[j]) + abs(g)) * abs(v[j])
        af1 = max(af1, _rel(lhs - rhs, scale))

    quad = g * g - s1 * g + (d1 * d2 + d2 * d3 + d3 * d1)
    w1, v1 = w[0], v[0]
    lhs_closed = d2 * d3 - (d2 + d3 - d1) ** 2 * (w1 * v1) / (w1 + v1) ** 2
    lhs_identity = _rel(quad - lhs_closed, max(abs(quad), abs(lhs_closed)))

    r1, r2, r3 = point.r
    delta_r = r1 * r2 * r3 + 4.0 - r1 * r1 - r2 * r2 - r3 * r3
    delta_scale = abs(r1 * r2 * r3) + 4.0 + r1 * r1 + r2 * r2 + r3 * r3

    prod = d1 * d2 * d3
    return {
        "equation_residual": eq,
        "chebyshev_system_residual": af1,
        "lhs_identity_residual": lhs_identity,
        "delta_consistency_residual": _rel(point.delta - delta_r, delta_scale),
        "triangle_margin": min(d1 + d2 - d3, d2 + d3 - d1, d3 + d1 - d2),
        "delta_margin": min(point.delta - prod, prod),
        "sigma_gamma_margin": s1 - 2.0 * g,
        "T_lower_margin": point.T - d1,
        "T_upper_margin": d1 + 4.0 - point.T,
    }


def locus_invariants_hold(point: LocusPoint, cfg: ToleranceConfig = DEFAULT_CONFIG) -> bool:
    diag = locus_diagnostics(point)
    for name, value in diag.items():
        if name.endswith("_residual"):
            if not value <= cfg.residual_tol:
                return False
        elif not value > 0:
            return False
    return True
