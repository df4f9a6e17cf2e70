from __future__ import annotations

import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pretzelrep.boundary_path import realize_cover
from pretzelrep.errors import InvalidInput, NonUnimodular
from pretzelrep.representation import (
    Matrix2,
    build_representation,
    meridian_eigenvalue,
    meridian_power_residual,
    relation_residual,
    trace_report,
)
from pretzelrep.trace_locus import PretzelKnot, solve_locus

P111 = PretzelKnot(1, 1, 1)
P333 = PretzelKnot(3, 3, 3)
P335 = PretzelKnot(3, 3, 5)

_entries = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)


def _np(m: Matrix2) -> np.ndarray:
    return np.array(m.to_list(), dtype=complex)


@given(_entries, _entries, _entries, _entries, _entries, _entries, _entries, _entries)
def test_matrix_product_matches_numpy(a, b, c, d, e, f, g, h):
    A, B = Matrix2(a, b, c, d), Matrix2(e, f, g, h)
    assert np.allclose(_np(A @ B), _np(A) @ _np(B), rtol=1e-12, atol=1e-12)
    assert A.det() == pytest.approx(np.linalg.det(_np(A)), rel=1e-9, abs=1e-9)
    assert A.trace() == a + d


@pytest.mark.parametrize("n", [-5, -1, 0, 1, 2, 7, 12])
def test_matrix_power(n):
    A = Matrix2(1.1 + 0.2j, 0.3, -0.4j, 0.9)
    assert np.allclose(_np(A.power(n)), np.linalg.matrix_power(_np(A), n), rtol=1e-12)


def test_matrix_inverse():
    A = Matrix2(2, 1, 1, 1)
    assert (A @ A.inv() - Matrix2.identity()).max_abs() == 0


def test_meridian_eigenvalue():
    m = meridian_eigenvalue(2 * math.cos(0.3))
    assert abs(m - complex(math.cos(0.3), math.sin(0.3))) <= 1e-15
    m = meridian_eigenvalue(-2.5)
    assert abs(m) > 1 and abs(m + 1 / m + 2.5) <= 1e-15


def test_trefoil_example():
    point = solve_locus(P111, 2.5)
    rep = build_representation(point, 1)
    assert rep.t == pytest.approx(math.sqrt(3.5), abs=1e-12)
    assert abs(rep.X3.det() - 1) <= 1e-9
    assert rep.relation_residual <= 1e-8


def test_symmetric_example():
    point = solve_locus(P333, 3.0)
    rep = build_representation(point, 1)
    t = math.sqrt(64 / 13)
    assert rep.t == pytest.approx(t, rel=1e-14)
    assert rep.r_prod == pytest.approx(t**3 + t - 21 / 4 * t, rel=1e-12)
    assert rep.relation_residual <= 1e-8


@pytest.mark.parametrize("sign", [1, -1])
def test_traces_recovered(knot, sign):
    # stop short of r1 = 3, where the trefoil meridian is parabolic
    for u in np.linspace(-6, -0.05, 12):
        point = solve_locus(knot, 2.0 + 10.0 ** float(u))
        rep = build_representation(point, sign)
        report = trace_report(rep, point)
        assert report["trace_error"] <= 1e-9
        assert report["trace_imag"] <= 1e-9
        assert report["det_error"] <= 1e-9
        assert rep.relation_residual <= 1e-8
        # never unitary: one pairwise trace is above 2
        assert (rep.X2 @ rep.X3.inv()).trace().real > 2


def test_relations_with_numpy_products(knot):
    # independent evaluation of the relations with numpy matrices
    point = solve_locus(knot, 2.3)
    rep = build_representation(point, 1)
    X = {i: _np(m) for i, m in enumerate(rep.generators, start=1)}
    inv = np.linalg.inv
    mp = np.linalg.matrix_power

    def conj(i, j, e, x):
        W = mp(X[i] @ inv(X[j]), e)
        return W @ X[x] @ inv(W)

    k1, k2, k3 = knot.k
    worst = max(
        np.abs(conj(2, 3, k1 + 1, 3) - conj(1, 2, k3, 1)).max(),
        np.abs(conj(3, 1, k2 + 1, 1) - conj(2, 3, k1, 2)).max(),
        np.abs(conj(1, 2, k3 + 1, 2) - conj(3, 1, k2, 3)).max(),
    )
    assert worst <= 1e-8
    assert rep.relation_residual == pytest.approx(worst, abs=1e-12)


def test_branch_symmetry(knot):
    point = solve_locus(knot, 2.2)
    plus = build_representation(point, 1)
    minus = build_representation(point, -1)
    assert abs(plus.X1.trace() + minus.X1.trace()) <= 1e-12
    for rep in (plus, minus):
        assert (rep.X2 @ rep.X3.inv()).trace() == pytest.approx(point.r1, abs=1e-9)
        assert (rep.X3 @ rep.X1.inv()).trace() == pytest.approx(point.r2, abs=1e-9)
        assert (rep.X1 @ rep.X2.inv()).trace() == pytest.approx(point.r3, abs=1e-9)


def test_identical_generators_have_zero_residual():
    A = Matrix2(2, 3, 1, 2)
    point = solve_locus(P335, 2.5)
    rep = replace(build_representation(point, 1), X1=A, X2=A, X3=A)
    assert relation_residual(rep, P335) == 0


def _perturbed(point, eps):
    d1, d2, d3 = point.offsets
    return replace(point, r3=point.r3 + eps, offsets=(d1, d2, d3 + eps))


def test_perturbed_point_fails(knot):
    point = solve_locus(knot, 2.5)
    bad = build_representation(_perturbed(point, 0.1), 1, strict=False)
    assert bad.relation_residual > 1e-3
    with pytest.raises(NonUnimodular):
        build_representation(_perturbed(point, 0.1), 1)


def test_residual_scales_linearly_with_perturbation():
    point = solve_locus(P335, 2.5)
    res = [build_representation(_perturbed(point, eps), 1, strict=False).relation_residual for eps in (1e-6, 1e-5, 1e-4)]
    for lo, hi in zip(res, res[1:]):
        assert 5 < hi / lo < 20


def test_meridian_power():
    cert = realize_cover(P111, 7)
    rep = build_representation(cert.point, 1)
    assert rep.t == pytest.approx(2 * math.cos(math.pi / 7), abs=1e-12)
    assert meridian_power_residual(rep, 7) <= 1e-8
    assert meridian_power_residual(rep, 3) >= 0.5
    assert meridian_power_residual(rep, 1) > 0
    with pytest.raises(InvalidInput):
        meridian_power_residual(rep, 0)


def test_rejects_bad_sign_and_parabolic():
    point = solve_locus(P335, 2.5)
    with pytest.raises(InvalidInput):
        build_representation(point, 0)
    with pytest.raises(InvalidInput):
        build_representation(solve_locus(P111, 3.0), 1)  # T = 4 exactly


def test_hyperbolic_points_also_realize():
    # T > 4 beyond the crossing: real eigenvalues, still a representation
    point = solve_locus(P335, 2.8)
    assert point.T > 4
    for sign in (1, -1):
        rep = build_representation(point, sign)
        assert rep.relation_residual <= 1e-8
