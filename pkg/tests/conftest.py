from __future__ import annotations

import mpmath
import pytest

from pretzelrep.trace_locus import PretzelKnot

CORPUS = [(1, 1, 1), (3, 3, 3), (3, 3, 5), (3, 5, 7)]
ASYMMETRIC = [(3, 3, 5), (3, 5, 7)]


@pytest.fixture(params=CORPUS, ids=lambda a: "P(%d,%d,%d)" % a)
def knot(request) -> PretzelKnot:
    return PretzelKnot(*request.param)


@pytest.fixture(params=ASYMMETRIC, ids=lambda a: "P(%d,%d,%d)" % a)
def asym_knot(request) -> PretzelKnot:
    return PretzelKnot(*request.param)


def _mp_cheb(k: int, z):
    prev, cur = mpmath.mpf(0), mpmath.mpf(1)
    for _ in range(k):
        prev, cur = cur, z * cur - prev
    return cur, prev


def mp_locus(a: tuple[int, int, int], r1: float, dps: int = 60) -> dict:
    """High-precision locus point computed from the ratio form of the
    equations (not the offset form used by the package).

    Only for k1 < k3 with k1 >= 1, so every ratio p_j is finite.
    """
    k1, k2, k3 = ((x - 1) // 2 for x in sorted(a))
    with mpmath.workdps(dps):
        R1 = mpmath.mpf(r1)

        def p(k, r):
            w, v = _mp_cheb(k, r)
            return w / v

        p1 = p(k1, R1)

        def r2_of(r3):
            p3 = p(k3, r3)
            return 2 + (R1 - r3) * (p1 * p3 - 1) / (p1 - p3)

        def f(r3):
            p3 = p(k3, r3)
            p2 = p(k2, r2_of(r3))
            return (r3 - 2) / (p3 - 1) - (R1 - r3) - (R1 - r3) / (p2 - 1) - (R1 - 2) / (p1 - 1)

        lo, hi = mpmath.mpf(2), R1
        for _ in range(dps * 4):
            mid = (lo + hi) / 2
            if f(mid) < 0:
                lo = mid
            else:
                hi = mid
        R3 = (lo + hi) / 2
        R2 = r2_of(R3)
        gamma = (R2 + R3 + (R1 + 2) * p1) / (p1 + 1)
        s1 = R1 + R2 + R3
        s2 = R1 * R2 + R2 * R3 + R3 * R1
        delta = R1 * R2 * R3 + 4 - (R1**2 + R2**2 + R3**2)
        T = delta / (gamma**2 - (s1 + 2) * gamma + s2 + 4)
        return {"r2": R2, "r3": R3, "gamma": gamma, "delta": delta, "T": T}


@pytest.fixture
def mp_oracle():
    return mp_locus
