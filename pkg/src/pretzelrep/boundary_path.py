"""Boundary holonomy along the elliptic path and surgery/cover certificates.

On ``(2, r1*)`` the meridian trace squared ``T`` lies in ``(0, 4)``, so the
meridian has eigenvalue ``M = e^{i theta}`` (``-M`` on the minus branch)
and the longitude eigenvalue ``L`` is a unit complex number fixed by

    L (alpha M - beta M^-1) + alpha M^-1 - beta M = 0.

A slope ``m/l`` is realized where ``M^m L^l = 1``; a cyclic cover of
order ``n`` where the meridian has eigenvalues ``e^{+-i pi/n}``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from ._roots import bisect, march_bracket
from .errors import (
    BelowThreshold,
    DegenerateDenominator,
    InvalidInput,
    NoBracket,
    NotElliptic,
    OutOfRange,
)
from .representation import build_representation, meridian_power_residual
from .trace_locus import (
    DEFAULT_CONFIG,
    LocusPoint,
    PretzelKnot,
    ToleranceConfig,
    cover_threshold,
    locus_invariants_hold,
    r1_star_offset,
    solve_locus_offset,
)

# relation / meridian-power residuals compound a few dozen 2x2 products
PRODUCT_TOL_FACTOR = 10.0


def wrap_phase(x: float) -> float:
    """Representative of ``x`` modulo ``2 pi`` in ``[-pi, pi]``."""
    return math.remainder(x, 2.0 * math.pi)


def _complex_pair(z: complex) -> list[float]:
    return [z.real, z.imag]


@dataclass(frozen=True)
class BoundaryHolonomy:
    sign: int
    theta: float
    theta_eff: float
    alpha: float
    beta: float
    M: complex
    L: complex
    phi: float
    slope: float

    def to_dict(self) -> dict:
        return {
            "sign": self.sign,
            "theta": self.theta,
            "theta_eff": self.theta_eff,
            "alpha": self.alpha,
            "beta": self.beta,
            "M": _complex_pair(self.M),
            "L": _complex_pair(self.L),
            "phi": self.phi,
            "slope": self.slope,
        }


def boundary_holonomy(point: LocusPoint, sign: int) -> BoundaryHolonomy:
    """Meridian/longitude eigenvalue data at an elliptic locus point.

    ``L`` comes from direct complex division; the real/imaginary closed
    forms are only used as cross-checks (:func:`holonomy_diagnostics`).
    """
    if sign not in (1, -1):
        raise InvalidInput(f"sign must be +1 or -1, got {sign!r}")
    T = point.T
    if not 0.0 < T < 4.0:
        raise NotElliptic(f"T = {T!r} outside (0, 4) at r1 = {point.r1!r}")
    theta = math.acos(math.sqrt(T) / 2.0)
    M = cmath.exp(1j * theta)
    if sign == -1:
        M = -M
    s1 = sum(point.offsets)
    g = point.gamma_offset
    alpha = s1 + 4.0 - g - T  # sigma1 + 2 - gamma - t^2
    beta = 4.0 + g - T  # gamma - t^2
    den = alpha * M - beta / M
    if abs(den) < 1e-14:
        raise DegenerateDenominator(f"|alpha M - beta/M| = {abs(den):.3g}")
    L = -(alpha / M - beta * M) / den
    phi = cmath.phase(L)
    theta_eff = theta if sign == 1 else theta - math.pi
    return BoundaryHolonomy(
        sign=sign,
        theta=theta,
        theta_eff=theta_eff,
        alpha=alpha,
        beta=beta,
        M=M,
        L=L,
        phi=phi,
        slope=-phi / theta_eff,
    )


def holonomy_diagnostics(point: LocusPoint, hol: BoundaryHolonomy) -> dict[str, float]:
    """Cross-checks on ``L``.

    ``cos_theta_denominator_deviation`` measures how far ``Re(L)`` is from the
    variant of the closed form whose denominator uses ``cos(theta)`` in
    place of ``cos(2 theta)``; it is reported, never asserted.
    """
    M, L = hol.M, hol.L
    s1 = sum(point.offsets)
    g = point.gamma_offset
    lhs = (1 + L) * (M + 1 / M) * (s1 - 2.0 * g)
    rhs = (1 - L) * (M - 1 / M) * (s1 + 8.0 - 2.0 * point.T)

    a, b, th = hol.alpha, hol.beta, hol.theta
    c2 = math.cos(2.0 * th)
    den = a * a + b * b - 2.0 * a * b * c2
    re_closed = (2.0 * a * b - (a * a + b * b) * c2) / den
    im_closed = (a * a - b * b) * math.sin(2.0 * th) / den
    den_alt = a * a + b * b - 2.0 * a * b * math.cos(th)
    re_alt = (2.0 * a * b - (a * a + b * b) * c2) / den_alt

    return {
        "eigen_equation_residual": abs(lhs - rhs),
        "unit_modulus_residual": abs(abs(L) - 1.0),
        "closed_form_residual": max(abs(L.real - re_closed), abs(L.imag - im_closed)),
        "im_L_margin": L.imag,
        "alpha_beta_margin": a - b,
        "beta_margin": b,
        "cos_theta_denominator_deviation": abs(L.real - re_alt),
    }


@dataclass(frozen=True)
class Certificate:
    kind: str
    knot: PretzelKnot
    target: Fraction | int
    r1: float
    sign: int
    point: LocusPoint
    holonomy: BoundaryHolonomy
    phase_residual: float
    relation_residual: float
    meridian_power_residual: float | None
    eigenphase_residual: float | None
    passed: bool

    def residuals(self) -> dict[str, float]:
        out = {
            "phase_residual": self.phase_residual,
            "relation_residual": self.relation_residual,
        }
        if self.meridian_power_residual is not None:
            out["meridian_power_residual"] = self.meridian_power_residual
        if self.eigenphase_residual is not None:
            out["eigenphase_residual"] = self.eigenphase_residual
        return out

    def to_dict(self) -> dict:
        target = (
            {"m": self.target.numerator, "l": self.target.denominator}
            if self.kind == "slope"
            else {"n": self.target}
        )
        return {
            "kind": self.kind,
            "target": target,
            "r1": self.r1,
            "sign": self.sign,
            "point": self.point.to_dict(),
            "holonomy": self.holonomy.to_dict(),
            "passed": self.passed,
        }


def _path_bounds(knot: PretzelKnot, cfg: ToleranceConfig) -> tuple[float, float]:
    """Offsets ``r1 - 2`` of the clamped elliptic path ends."""
    return cfg.boundary_eps, r1_star_offset(knot, cfg) - cfg.boundary_eps


def _solve_on_path(func, knot: PretzelKnot, cfg: ToleranceConfig) -> float:
    lo, hi = _path_bounds(knot, cfg)
    for step in (cfg.march_step, cfg.march_step / 1e3):
        bracket = march_bracket(func, lo, hi, step)
        if bracket is not None:
            break
    else:
        raise NoBracket(f"{knot}: no sign change on (2, r1*) at resolution {cfg.march_step / 1e3:g}")
    x0, x1, f0, f1 = bracket
    if f1 == 0:
        return x1
    if f0 == 0:
        return x0
    return bisect(func, x0, x1, rtol=cfg.root_tol, max_iter=cfg.max_iter, f_lo=f0)


def realize_slope(knot: PretzelKnot, m: int, l: int, cfg: ToleranceConfig = DEFAULT_CONFIG) -> Certificate:
    """Elliptic representation killing ``mu^m lambda^l``, for ``m/l < 1``.

    Negative slopes use the plus branch (slope ``-phi/theta``), slopes in
    ``(0, 1)`` the minus branch (``-phi/(theta - pi)``).  Any root in the
    bracket is accepted.
    """
    if not all(isinstance(x, int) and not isinstance(x, bool) for x in (m, l)):
        raise InvalidInput(f"slope must be given by integers, got {m!r}/{l!r}")
    if l < 1:
        raise InvalidInput(f"denominator must be positive, got l={l}")
    if math.gcd(m, l) != 1:
        raise InvalidInput(f"slope {m}/{l} is not in lowest terms")
    target = Fraction(m, l)
    if m == 0:
        raise OutOfRange("slope 0 is handled by the first Betti number argument, not by a path")
    if target >= 1:
        raise OutOfRange(f"slope {target} is not < 1")

    sign = 1 if m < 0 else -1
    value = float(target)

    def gap(d1: float) -> float:
        return boundary_holonomy(solve_locus_offset(knot, d1, cfg), sign).slope - value

    d1 = _solve_on_path(gap, knot, cfg)
    point = solve_locus_offset(knot, d1, cfg)
    hol = boundary_holonomy(point, sign)
    rep = build_representation(point, sign, cfg)
    phase = abs(wrap_phase(m * hol.theta_eff + l * hol.phi))
    passed = (
        phase <= cfg.residual_tol
        and rep.relation_residual <= PRODUCT_TOL_FACTOR * cfg.residual_tol
        and locus_invariants_hold(point, cfg)
    )
    return Certificate(
        kind="slope",
        knot=knot,
        target=target,
        r1=point.r1,
        sign=sign,
        point=point,
        holonomy=hol,
        phase_residual=phase,
        relation_residual=rep.relation_residual,
        meridian_power_residual=None,
        eigenphase_residual=None,
        passed=passed,
    )


def realize_cover(knot: PretzelKnot, n: int, cfg: ToleranceConfig = DEFAULT_CONFIG) -> Certificate:
    """Plus-branch representation with ``rho(mu)^n = -I``, for ``n`` above
    the cover threshold."""
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InvalidInput(f"cover order must be a positive integer, got {n!r}")
    n0 = cover_threshold(knot)
    if n < n0:
        raise BelowThreshold(f"n = {n} is below the threshold {n0} for {knot}")

    target = 4.0 * math.cos(math.pi / n) ** 2

    def gap(d1: float) -> float:
        return solve_locus_offset(knot, d1, cfg).T - target

    d1 = _solve_on_path(gap, knot, cfg)
    point = solve_locus_offset(knot, d1, cfg)
    hol = boundary_holonomy(point, 1)
    rep = build_representation(point, 1, cfg)
    power = meridian_power_residual(rep, n)
    phase = abs(wrap_phase(n * hol.theta - math.pi))
    eigenphase = abs(abs(cmath.phase(rep.m)) - math.pi / n)
    bound = PRODUCT_TOL_FACTOR * cfg.residual_tol
    passed = (
        phase <= cfg.residual_tol
        and rep.relation_residual <= bound
        and power <= bound
        and locus_invariants_hold(point, cfg)
    )
    return Certificate(
        kind="cover",
        knot=knot,
        target=n,
        r1=point.r1,
        sign=1,
        point=point,
        holonomy=hol,
        phase_residual=phase,
        relation_residual=rep.relation_residual,
        meridian_power_residual=power,
        eigenphase_residual=eigenphase,
        passed=passed,
    )
