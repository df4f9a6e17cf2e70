"""Analyses, path sampling, the verification suite and serialization."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable

import numpy as np

from .boundary_path import PRODUCT_TOL_FACTOR, boundary_holonomy, holonomy_diagnostics
from .chebyshev import cheb_eval
from .errors import InvalidInput
from .representation import build_representation, trace_report
from .trace_locus import (
    DEFAULT_CONFIG,
    PretzelKnot,
    ToleranceConfig,
    cover_threshold,
    limit_ratios,
    limit_T,
    locus_diagnostics,
    r1_star_offset,
    solve_locus_offset,
    theta0,
)

VERSION = "0.1.0"
SURGERY_INTERVAL = "(-inf, 1)"
PATH_COLUMNS = ("r1", "r2", "r3", "gamma", "delta", "T", "theta", "phi", "slope_neg", "slope_pos")

# fixed tolerances for the limit checks, independent of residual_tol
LIMIT_OFFSET = 1e-5
LIMIT_TOL = 1e-3


# --------------------------------------------------------------------------
# serialization


def _clean(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        return value if math.isfinite(value) else None
    if isinstance(obj, complex):
        return [_clean(obj.real), _clean(obj.imag)]
    if isinstance(obj, Fraction):
        return str(obj)
    return obj


def dumps(payload: Any) -> str:
    """JSON text; floats use Python's shortest round-trip repr."""
    return json.dumps(_clean(payload), indent=2, allow_nan=False) + "\n"


def envelope(
    command: str,
    knot: PretzelKnot,
    query: dict,
    result: Any,
    residuals: dict,
    cfg: ToleranceConfig,
) -> dict:
    return {
        "knot": knot.to_dict(),
        "query": {"command": command, **query},
        "result": result,
        "residuals": residuals,
        "config": cfg.to_dict(),
        "version": VERSION,
    }


# --------------------------------------------------------------------------
# verification suite


@dataclass
class Check:
    """One named property, accumulated over many evaluations.

    ``residual`` and ``limit`` checks pass when every value is
    ``<= threshold``; ``margin`` checks when every value is ``> 0``;
    ``info`` checks only record the worst value.  ``limit`` values are
    truncation errors of a one-sided limit, not arithmetic residuals, so
    they stay out of the residual summary.
    """

    name: str
    kind: str
    threshold: float | None = None
    count: int = 0
    failures: int = 0
    worst: float | None = None

    def add(self, value: float) -> None:
        value = float(value)
        self.count += 1
        if self.kind == "margin":
            bad = not value > 0
            better = self.worst is None or value < self.worst or math.isnan(value)
        else:
            bad = self.kind in ("residual", "limit") and not value <= self.threshold
            better = self.worst is None or value > self.worst or math.isnan(value)
        if bad:
            self.failures += 1
        if better:
            self.worst = value

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "threshold": self.threshold,
            "count": self.count,
            "failures": self.failures,
            "worst": self.worst,
            "passed": self.passed,
        }


@dataclass
class SuiteReport:
    knot: PretzelKnot
    samples: int
    seed: int
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def summary(self) -> dict[str, float]:
        """Worst residual per category (the prefix before the first dot)."""
        out: dict[str, float] = {}
        for c in self.checks:
            if c.kind != "residual" or c.worst is None:
                continue
            category = c.name.split(".", 1)[0]
            out[category] = max(out.get(category, 0.0), c.worst)
        return out

    def to_dict(self) -> dict:
        return {
            "knot": self.knot.to_dict(),
            "samples": self.samples,
            "seed": self.seed,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }


def _cheb_checks(rng: np.random.Generator, samples: int, tol: float) -> list[Check]:
    identity = Check("chebyshev.identity", "residual", tol)
    closed = Check("chebyshev.closed_form", "residual", tol)
    mono_n = Check("chebyshev.monotone_in_n", "margin")
    mono_z = Check("chebyshev.monotone_in_z", "margin")
    for _ in range(samples):
        n = int(rng.integers(1, 13))
        z = float(rng.uniform(-3.0, 5.0))
        s_prev, s_n, s_next = cheb_eval(n - 1, z), cheb_eval(n, z), cheb_eval(n + 1, z)
        scale = max(1.0, s_n * s_n, abs(s_next * s_prev), s_prev * s_prev, abs(z * s_n * s_prev))
        identity.add(abs(s_n * s_n - s_next * s_prev - 1.0) / scale)
        identity.add(abs(s_n * s_n + s_prev * s_prev - z * s_n * s_prev - 1.0) / scale)

        s = float(rng.uniform(1.0 + 1e-3, 4.0))
        j = int(rng.integers(0, 13))
        exact = (s ** (j + 1) - s ** (-j - 1)) / (s - 1.0 / s)
        closed.add(abs(cheb_eval(j, s + 1.0 / s) - exact) / abs(exact))

        # exact arithmetic: the gaps shrink like z^(-2n), below double resolution
        zq = Fraction(float(rng.uniform(2.0, 6.0))).limit_denominator(10**6)
        n1, n2 = sorted(int(x) for x in rng.choice(np.arange(1, 13), size=2, replace=False))
        ratio = lambda k, x: cheb_eval(k, x) / cheb_eval(k - 1, x)  # noqa: E731
        mono_n.add(float(ratio(n1, zq) - ratio(n2, zq)))

        z1 = Fraction(float(rng.uniform(2.0, 8.0))).limit_denominator(10**6)
        z2 = z1 + Fraction(float(rng.uniform(1e-3, 3.0))).limit_denominator(10**6)
        if z1 <= 2:
            z1 = Fraction(2) + Fraction(1, 10**6)
        p1, p2 = ratio(n, z1), ratio(n, z2)
        mono_z.add(float(min(p2 - p1, (z2 - 2) / (p2 - 1) - (z1 - 2) / (p1 - 1))))
    return [identity, closed, mono_n, mono_z]


def _locus_checks(knot, rng, samples, cfg) -> list[Check]:
    tol = cfg.residual_tol
    checks = {
        "equation_residual": Check("locus.equations", "residual", tol),
        "chebyshev_system_residual": Check("locus.chebyshev_system", "residual", tol),
        "lhs_identity_residual": Check("locus.lhs_identity", "residual", tol),
        "delta_consistency_residual": Check("locus.delta_forms", "residual", tol),
        "triangle_margin": Check("locus.triangle", "margin"),
        "delta_margin": Check("locus.delta_bound", "margin"),
        "sigma_gamma_margin": Check("locus.sigma_gamma", "margin"),
        "T_lower_margin": Check("locus.T_lower", "margin"),
        "T_upper_margin": Check("locus.T_upper", "margin"),
    }
    for u in rng.uniform(-6.0, 1.0, size=samples):
        point = solve_locus_offset(knot, 10.0 ** float(u), cfg)
        for key, value in locus_diagnostics(point).items():
            checks[key].add(value)
    return list(checks.values())


def _representation_checks(knot, rng, samples, cfg) -> list[Check]:
    tol = cfg.residual_tol
    det = Check("representation.det_x3", "residual", tol)
    traces = Check("representation.traces", "residual", tol)
    reality = Check("representation.trace_reality", "residual", tol)
    relations = Check("representation.relations", "residual", PRODUCT_TOL_FACTOR * tol)
    branch = Check("representation.branch_symmetry", "residual", tol)
    irreducible = Check("representation.r1_trace_above_2", "margin")
    for u in rng.uniform(-6.0, 0.0, size=samples):
        point = solve_locus_offset(knot, 10.0 ** float(u), cfg)
        if point.T == 4.0:
            continue
        reps = [build_representation(point, sign, cfg, strict=False) for sign in (1, -1)]
        for rep in reps:
            tr = trace_report(rep, point)
            det.add(tr["det_x3_error"])
            traces.add(tr["trace_error"])
            reality.add(tr["trace_imag"])
            relations.add(rep.relation_residual)
            irreducible.add((rep.X2 @ rep.X3.inv()).trace().real - 2.0)
        plus, minus = reps
        branch.add(abs(plus.X1.trace() + minus.X1.trace()))
    return [det, traces, reality, relations, branch, irreducible]


def _holonomy_checks(knot, rng, samples, cfg) -> list[Check]:
    tol = cfg.residual_tol
    eigen = Check("holonomy.eigen_equation", "residual", tol / 10)
    unit = Check("holonomy.unit_modulus", "residual", tol / 1000)
    closed = Check("holonomy.closed_form", "residual", tol / 10)
    branch_L = Check("holonomy.branch_L_agreement", "residual", tol / 10)
    im_L = Check("holonomy.im_L", "margin")
    alpha_beta = Check("holonomy.alpha_gt_beta", "margin")
    beta = Check("holonomy.beta_positive", "margin")
    slope_neg = Check("holonomy.slope_neg_negative", "margin")
    slope_pos_lo = Check("holonomy.slope_pos_above_0", "margin")
    slope_pos_hi = Check("holonomy.slope_pos_below_1", "margin")
    alt_den = Check("holonomy.cos_theta_denominator_deviation", "info")

    lo, hi = _path_offsets(knot, cfg)
    span = hi + cfg.boundary_eps
    for u in rng.uniform(-12.0, 12.0, size=samples):
        d1 = min(max(span / (1.0 + math.exp(-float(u))), lo), hi)
        point = solve_locus_offset(knot, d1, cfg)
        plus = boundary_holonomy(point, 1)
        minus = boundary_holonomy(point, -1)
        for hol in (plus, minus):
            diag = holonomy_diagnostics(point, hol)
            eigen.add(diag["eigen_equation_residual"])
            unit.add(diag["unit_modulus_residual"])
            closed.add(diag["closed_form_residual"])
            im_L.add(diag["im_L_margin"])
            alt_den.add(diag["cos_theta_denominator_deviation"])
        alpha_beta.add(plus.alpha - plus.beta)
        beta.add(plus.beta)
        branch_L.add(abs(plus.L - minus.L))
        slope_neg.add(-plus.slope)
        slope_pos_lo.add(minus.slope)
        slope_pos_hi.add(1.0 - minus.slope)
    return [eigen, unit, closed, branch_L, im_L, alpha_beta, beta, slope_neg, slope_pos_lo, slope_pos_hi, alt_den]


def _limit_checks(knot: PretzelKnot, cfg: ToleranceConfig) -> list[Check]:
    T_lim = Check("limits.T", "limit", LIMIT_TOL)
    ratios = Check("limits.offset_ratios", "limit", LIMIT_TOL)
    theta = Check("limits.theta0_relation", "residual", 1e-12)
    threshold = Check("limits.cover_threshold_above_bound", "margin")

    point = solve_locus_offset(knot, LIMIT_OFFSET, cfg)
    T_lim.add(abs(point.T - limit_T(knot)))
    q2, q3 = limit_ratios(knot)
    d1, d2, d3 = point.offsets
    ratios.add(max(abs(d2 / d1 - float(q2)), abs(d3 / d1 - float(q3))))
    theta.add(abs(math.cos(theta0(knot)) ** 2 - limit_T(knot) / 4.0))
    threshold.add(cover_threshold(knot) - math.pi / theta0(knot))
    return [T_lim, ratios, theta, threshold]


def verify_suite(
    knot: PretzelKnot,
    samples: int,
    seed: int,
    cfg: ToleranceConfig = DEFAULT_CONFIG,
) -> SuiteReport:
    """Run every invariant at ``samples`` seeded random points.

    Failures are recorded in the report, never raised.
    """
    if samples < 1:
        raise InvalidInput(f"samples must be >= 1, got {samples}")
    rng = np.random.default_rng(seed)
    report = SuiteReport(knot=knot, samples=samples, seed=seed)
    report.checks += _cheb_checks(rng, samples, cfg.residual_tol)
    report.checks += _locus_checks(knot, rng, samples, cfg)
    report.checks += _representation_checks(knot, rng, samples, cfg)
    report.checks += _holonomy_checks(knot, rng, samples, cfg)
    report.checks += _limit_checks(knot, cfg)
    return report


# --------------------------------------------------------------------------
# analysis


@dataclass(frozen=True)
class AnalysisReport:
    knot: PretzelKnot
    limit_T: float
    theta0: float
    cover_threshold: int
    r1_star: float
    surgery_interval: str
    suite_passed: bool
    residual_summary: dict[str, float]

    def to_dict(self) -> dict:
        return {
            "knot": self.knot.to_dict(),
            "limit_T": self.limit_T,
            "theta0": self.theta0,
            "cover_threshold": self.cover_threshold,
            "r1_star": self.r1_star,
            "surgery_interval": self.surgery_interval,
            "suite_passed": self.suite_passed,
            "residual_summary": dict(self.residual_summary),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AnalysisReport":
        return cls(
            knot=PretzelKnot(*data["knot"]["a"]),
            limit_T=float(data["limit_T"]),
            theta0=float(data["theta0"]),
            cover_threshold=int(data["cover_threshold"]),
            r1_star=float(data["r1_star"]),
            surgery_interval=str(data["surgery_interval"]),
            suite_passed=bool(data["suite_passed"]),
            residual_summary={k: float(v) for k, v in data["residual_summary"].items()},
        )


ANALYZE_SAMPLES = 100
ANALYZE_SEED = 0


def analyze(knot: PretzelKnot, cfg: ToleranceConfig = DEFAULT_CONFIG) -> AnalysisReport:
    suite = verify_suite(knot, ANALYZE_SAMPLES, ANALYZE_SEED, cfg)
    return AnalysisReport(
        knot=knot,
        limit_T=limit_T(knot),
        theta0=theta0(knot),
        cover_threshold=cover_threshold(knot),
        r1_star=2.0 + r1_star_offset(knot, cfg),
        surgery_interval=SURGERY_INTERVAL,
        suite_passed=suite.passed,
        residual_summary=suite.summary(),
    )


# --------------------------------------------------------------------------
# path sampling


@dataclass(frozen=True)
class PathSample:
    knot: PretzelKnot
    rows: tuple[tuple[float, ...], ...]
    columns: tuple[str, ...] = PATH_COLUMNS

    def column(self, name: str) -> list[float]:
        i = self.columns.index(name)
        return [row[i] for row in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([repr(float(x)) for x in row])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {"columns": list(self.columns), "rows": [list(r) for r in self.rows]}


def _path_offsets(knot: PretzelKnot, cfg: ToleranceConfig) -> tuple[float, float]:
    return cfg.boundary_eps, r1_star_offset(knot, cfg) - cfg.boundary_eps


def path_offsets(knot: PretzelKnot, count: int, cfg: ToleranceConfig = DEFAULT_CONFIG) -> list[float]:
    """Offsets ``r1 - 2`` clustered geometrically at both ends of the path.

    A logistic map of an evenly spaced grid: near either end consecutive
    gaps to that end shrink by a constant factor.
    """
    lo, hi = _path_offsets(knot, cfg)
    span = hi + cfg.boundary_eps
    u_lo = math.log(lo / (span - lo))
    u_hi = math.log(hi / (span - hi))
    out = []
    for i, u in enumerate(np.linspace(u_lo, u_hi, count)):
        if i == 0:
            out.append(lo)
        elif i == count - 1:
            out.append(hi)
        else:
            out.append(span / (1.0 + math.exp(-float(u))))
    return out


def sample_path(knot: PretzelKnot, count: int, cfg: ToleranceConfig = DEFAULT_CONFIG) -> PathSample:
    if isinstance(count, bool) or not isinstance(count, int) or count < 2:
        raise InvalidInput(f"count must be an integer >= 2, got {count!r}")
    rows = []
    for d1 in path_offsets(knot, count, cfg):
        point = solve_locus_offset(knot, d1, cfg)
        plus = boundary_holonomy(point, 1)
        minus = boundary_holonomy(point, -1)
        rows.append(
            (
                point.r1,
                point.r2,
                point.r3,
                point.gamma,
                point.delta,
                point.T,
                plus.theta,
                plus.phi,
                plus.slope,
                minus.slope,
            )
        )
    return PathSample(knot=knot, rows=tuple(rows))


def iter_lines(checks: Iterable[Check]) -> Iterable[str]:
    for c in checks:
        status = "INFO" if c.kind == "info" else ("PASS" if c.passed else "FAIL")
        worst = "n/a" if c.worst is None else f"{c.worst:.3e}"
        yield f"{status}  {c.name:<45} worst={worst} n={c.count}"
