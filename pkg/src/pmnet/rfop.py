"""Globally optimal minimization of bivariate rational objectives over a
convex 2-polytope.

The objective is ``H(x, y) = (C1 x^2 + C2 y^2 + C3 xy + C4 x + C5 y + C6) /
(C7 x + C8 y + C9)`` with a denominator positive on the nonnegative orthant,
minimized over ``{0 <= x <= N, 0 <= y <= min(Px + L, -Qx + M)}``.  The
solution pool combines the real stationary points (conic intersection via a
quartic) with exact minimizers of the restriction of ``H`` to each boundary
segment; no iterative descent is involved.  The heavy lifting lives in
:mod:`pmnet.kernels`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels


class RfopError(ValueError):
    pass


class InfeasiblePolytopeError(RfopError):
    """The bound set admits no feasible point."""


class DegenerateConicError(RfopError):
    """The two gradient conics share a component; stationary set ill-posed."""


@dataclass(frozen=True)
class RationalObjective:
    """Bivariate rational objective; ``coeffs`` holds C1..C9."""

    coeffs: tuple[float, ...]

    def __post_init__(self):
        if len(self.coeffs) != 9:
            raise RfopError("expected 9 coefficients")
        c = self.coeffs
        if c[6] < 0.0 or c[7] < 0.0 or c[8] <= 0.0:
            raise RfopError(
                "denominator must be positive on the nonnegative orthant "
                "(C7 >= 0, C8 >= 0, C9 > 0)")

    def array(self) -> np.ndarray:
        return np.asarray(self.coeffs, dtype=np.float64)

    def __call__(self, x, y):
        c = self.coeffs
        num = (c[0] * x * x + c[1] * y * y + c[2] * x * y + c[3] * x
               + c[4] * y + c[5])
        den = c[6] * x + c[7] * y + c[8]
        return num / den


@dataclass(frozen=True)
class PolytopeBounds:
    """Feasible set {0 <= x <= N, 0 <= y <= min(Px + L, -Qx + M)}.

    ``L``, ``M`` and ``N`` may be infinite, dropping the matching
    constraint.  ``M < 0`` is representable but makes the set empty.
    """

    P: float
    L: float
    Q: float
    M: float
    N: float

    def __post_init__(self):
        if self.P < 0.0 or self.Q < 0.0:
            raise RfopError("slopes P and Q must be non-negative")
        if self.L < 0.0 or self.N < 0.0:
            raise RfopError("L and N must be non-negative")


@dataclass(frozen=True)
class SegmentRestriction:
    """Univariate restriction h(r) = f(r)/g(r) on [r0, r1].

    ``f`` has degree <= 2, ``g`` degree <= 1 (ascending coefficients), so
    the convexity indicator of h is constant on the domain.
    """

    f: tuple[float, float, float]
    g: tuple[float, float]
    r0: float
    r1: float

    def __post_init__(self):
        g0, g1 = self.g
        lo = g0 + g1 * self.r0
        if lo <= 0.0:
            raise RfopError("denominator must be positive on the domain")
        if math.isfinite(self.r1):
            if g0 + g1 * self.r1 <= 0.0:
                raise RfopError("denominator must be positive on the domain")
        elif g1 < 0.0:
            raise RfopError("denominator must be positive on the domain")

    def __call__(self, r):
        f0, f1, f2 = self.f
        g0, g1 = self.g
        return ((f2 * r + f1) * r + f0) / (g1 * r + g0)


def _coerce_poly(coeffs: Sequence[float], max_deg: int) -> tuple[float, ...]:
    arr = [float(v) for v in coeffs]
    for i, v in enumerate(arr):
        if i > max_deg and v != 0.0:
            raise RfopError(f"degree violation: coefficient of r^{i} nonzero")
    arr = arr[:max_deg + 1]
    arr += [0.0] * (max_deg + 1 - len(arr))
    return tuple(arr)


def delta_h(f: Sequence[float], g: Sequence[float]) -> float:
    """Constant convexity indicator of h = f/g for deg f <= 2, deg g <= 1.

    Positive means h is convex wherever g > 0, negative concave.
    """
    f0, f1, f2 = _coerce_poly(f, 2)
    g0, g1 = _coerce_poly(g, 1)
    return kernels.seg_delta(f2, f1, f0, g1, g0)


def minimize_segment(seg: SegmentRestriction) -> tuple[float, float]:
    """Minimize the restriction over its domain; returns (r*, h(r*))."""
    if seg.r1 < seg.r0:
        raise RfopError("empty interval")
    f0, f1, f2 = seg.f
    g0, g1 = seg.g
    # shift so the kernel works on [0, r1 - r0]
    s0 = seg.r0
    fs0 = (f2 * s0 + f1) * s0 + f0
    fs1 = 2.0 * f2 * s0 + f1
    gs0 = g1 * s0 + g0
    length = seg.r1 - seg.r0
    if not math.isfinite(length):
        length = kernels.BIG
    rs, hs = kernels.segment_min(f2, fs1, fs0, g1, gs0, length)
    return seg.r0 + rs, hs


def restrict_to_line(H: RationalObjective, anchor: tuple[float, float],
                     m: float | None = None, n: float | None = None,
                     r0: float = 0.0,
                     r1: float = math.inf) -> SegmentRestriction:
    """Restrict H to the line through ``anchor`` with slope parameter m or n.

    ``m`` parameterizes by x-distance (points (x0 + r, y0 + m r)); ``n``
    parameterizes by y-distance (points (x0 + n r, y0 + r)).  The anchor
    maps to r = 0 exactly.
    """
    if (m is None) == (n is None):
        raise RfopError("exactly one of m or n must be given")
    x0, y0 = float(anchor[0]), float(anchor[1])
    if x0 < 0.0 or y0 < 0.0:
        raise RfopError("anchor must lie in the nonnegative orthant")
    if m is not None:
        dx, dy = 1.0, float(m)
    else:
        dx, dy = float(n), 1.0
    f2, f1, f0, g1, g0 = kernels.line_restrict(H.array(), x0, y0, dx, dy)
    return SegmentRestriction(f=(f0, f1, f2), g=(g0, g1), r0=r0, r1=r1)


def solve_quartic(a4: float, a3: float, a2: float, a1: float,
                  a0: float) -> list[float]:
    """All real roots, ascending and deduplicated.

    Degenerates gracefully to cubic/quadratic/linear when leading
    coefficients vanish; raises on the all-zero polynomial.
    """
    out = np.empty(4)
    n = kernels.quartic_roots(float(a4), float(a3), float(a2), float(a1),
                              float(a0), out)
    if n < 0:
        raise RfopError("all-zero polynomial has no defined roots")
    return [float(v) for v in out[:n]]


def stationary_points(H: RationalObjective) -> list[tuple[float, float]]:
    """Real intersection points of the two gradient conics of H (at most 4)."""
    pts = np.empty((8, 2))
    n, status = kernels.stationary_points(H.array(), pts)
    if status == kernels.STAT_DEGENERATE:
        raise DegenerateConicError(
            "gradient conics are degenerate or coincident")
    return [(float(pts[k, 0]), float(pts[k, 1])) for k in range(n)]


@dataclass(frozen=True)
class RfopResult:
    x: float
    y: float
    value: float
    clipped: bool = False


def solve_rfop(H: RationalObjective, bounds: PolytopeBounds) -> RfopResult:
    """Globally minimize H over the polytope; ties resolve to the
    lexicographically smallest (x, y).  Raises when the polytope is empty;
    results found on an artificial clip boundary carry ``clipped=True``.
    """
    x, y, val, status = kernels.rfop_solve(
        H.array(), float(bounds.P), float(bounds.L), float(bounds.Q),
        float(bounds.M), float(bounds.N))
    if status == kernels.RFOP_INFEASIBLE:
        raise InfeasiblePolytopeError(
            f"empty polytope (M={bounds.M}, N={bounds.N})")
    return RfopResult(x=float(x), y=float(y), value=float(val),
                      clipped=(status == kernels.RFOP_CLIPPED))
