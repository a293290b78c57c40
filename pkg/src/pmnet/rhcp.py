"""Receding-horizon decision problems solved by an agent at a target.

Three problem forms cover the agent life cycle: the arrival/active form
optimizes the remaining active time jointly with the whole next-visit plan;
the idle form optimizes the remaining idle time; the departure form picks
the next target with its dwell plan.  All of them minimize the mean
neighborhood cost over a variable-length window bounded by the horizon, and
every continuous subproblem reduces either to a closed form or to the
bivariate rational program solved in :mod:`pmnet.rfop`.

A weighted departure variant de-emphasizes the candidate target's own cost,
and an extended variant plans two visits ahead over the two-hop
neighborhood.  The ``denominator_free`` solver reproduces the degenerate
nearest-neighbor policy that results from dropping the window-length
denominator; it exists as a regression oracle, not as a useful controller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from . import kernels
from .model import (TargetGraph, NeighborhoodParams, neighborhood_params,
                    neighborhood_params_two_hop)


class RhcpError(ValueError):
    pass


@dataclass(frozen=True)
class RhcpContext:
    """Local state snapshot for one decision.

    ``horizon`` is the effective planning bound, already truncated to the
    remaining mission time.  ``R`` holds the uncertainty values as read by
    the agent (they may be noisy copies of the true state).  ``active`` is
    the candidate neighbor set of ``i`` after removing covered targets;
    ``covered`` lists targets claimed by other agents (used to filter
    two-hop sequences).
    """

    graph: TargetGraph
    i: int
    t: float
    horizon: float
    R: Mapping[int, float]
    active: tuple[int, ...]
    covered: frozenset[int] = frozenset()

    def __post_init__(self):
        if self.horizon < 0.0:
            raise RhcpError("horizon must be non-negative")


@dataclass(frozen=True)
class ControlDecision:
    """Optimal dwell/next-visit tuple with its induced window length."""

    u_i: float
    v_i: float
    j: int | None
    u_j: float
    v_j: float
    k: int | None = None
    u_k: float = 0.0
    v_k: float = 0.0
    w: float = 0.0
    cost: float = math.inf


def active_time_bound(R: float, A: float, B: float,
                      lead: float = 0.0) -> float:
    """Maximal active time: drives the uncertainty exactly to zero after it
    grew unattended for ``lead`` time units."""
    if B <= A:
        raise RhcpError("requires B > A")
    return (R + A * lead) / (B - A)


def active_time_bound_affine(R: float, A: float, B: float,
                             lead: float) -> tuple[float, float]:
    """(intercept, slope) of the active-time bound as an affine function of
    extra upstream delay beyond ``lead``."""
    if B <= A:
        raise RhcpError("requires B > A")
    return (R + A * lead) / (B - A), A / (B - A)


def _tie_better(cost: float, best: float) -> bool:
    return cost < best - 1e-12 * max(1.0, abs(best))


# ---------------------------------------------------------------------------
# departure problem (one-hop)
# ---------------------------------------------------------------------------

def rhcp3_objective_coeffs(ctx: RhcpContext, j: int,
                           weight_next: float = 1.0,
                           weight_rest: float = 1.0) -> np.ndarray:
    """C1..C6 of the departure objective for candidate ``j``.

    The numerator splits into the candidate's own visit cost (weight
    ``weight_next``) and the growth cost of the remaining neighborhood
    members (weight ``weight_rest``); unit weights give the plain mean-cost
    objective.
    """
    g = ctx.graph
    p = neighborhood_params(g, ctx.R, ctx.i, j, ctx.t)
    rho = g.rho[(ctx.i, j)]
    Aj = g.target(j).A
    Bj = g.target(j).B
    Rj = float(ctx.R[j])
    rj_arr = Rj + Aj * rho
    wn, wr = weight_next, weight_rest
    c = np.empty(6)
    c[0] = wr * 0.5 * p.A_wo_second - wn * 0.5 * (Bj - Aj)
    c[1] = wr * 0.5 * p.A_wo_second
    c[2] = wr * p.A_wo_second
    c[3] = wn * rj_arr + wr * (p.R_wo_second + p.A_wo_second * rho)
    c[4] = wr * (p.R_wo_second + p.A_wo_second * rho)
    c[5] = (wn * 0.5 * rho * (2.0 * Rj + Aj * rho)
            + wr * (rho * p.R_wo_second + 0.5 * p.A_wo_second * rho * rho))
    return c


def _rhcp3_bounds(ctx: RhcpContext, j: int) -> tuple[float, float, float, float] | None:
    g = ctx.graph
    rho = g.rho[(ctx.i, j)]
    if rho > ctx.horizon:
        return None
    tj = g.target(j)
    ujB = active_time_bound(float(ctx.R[j]), tj.A, tj.B, lead=rho)
    ubar = min(ujB, ctx.horizon - rho)
    vbar = ctx.horizon - (rho + ujB)
    return rho, ujB, ubar, vbar


def solve_rhcp3(ctx: RhcpContext, j: int) -> ControlDecision | None:
    """Closed-form departure solution for candidate ``j`` (None when the
    transit alone exceeds the horizon)."""
    b = _rhcp3_bounds(ctx, j)
    if b is None:
        return None
    rho, ujB, ubar, vbar = b
    c = rhcp3_objective_coeffs(ctx, j)
    g = ctx.graph
    p = neighborhood_params(g, ctx.R, ctx.i, j, ctx.t)
    tj = g.target(j)
    u, v, cost = kernels.dwell_closed_form(
        c[0], c[1], c[2], c[3], c[4], c[5], rho, tj.A, tj.B, p.A_all,
        p.A_wo_second, ujB, ubar, vbar)
    return ControlDecision(u_i=0.0, v_i=0.0, j=j, u_j=u, v_j=v,
                           w=rho + u + v, cost=cost)


def solve_rhcp3_segments(ctx: RhcpContext, j: int,
                         weight_next: float = 1.0,
                         weight_rest: float = 1.0) -> ControlDecision | None:
    """Departure solution via segment minimization over both constraint
    classes; handles arbitrarily weighted objectives and doubles as an
    independent route to the closed form."""
    b = _rhcp3_bounds(ctx, j)
    if b is None:
        return None
    rho, ujB, ubar, vbar = b
    c = rhcp3_objective_coeffs(ctx, j, weight_next, weight_rest)
    u, v, cost = kernels.dwell_two_segments(
        c[0], c[1], c[2], c[3], c[4], c[5], rho, ujB, ubar, vbar)
    return ControlDecision(u_i=0.0, v_i=0.0, j=j, u_j=u, v_j=v,
                           w=rho + u + v, cost=cost)


def next_visit(ctx: RhcpContext,
               solutions: Mapping[int, ControlDecision | None]) -> int | None:
    """Cheapest candidate, ties to the lower target id; None when no
    candidate has a feasible plan (caller idles in place)."""
    best: int | None = None
    best_cost = math.inf
    for j in sorted(solutions):
        d = solutions[j]
        if d is None:
            continue
        if best is None or _tie_better(d.cost, best_cost):
            best, best_cost = j, d.cost
    return best


def denominator_free_rhcp3(ctx: RhcpContext, j: int) -> ControlDecision | None:
    """Degenerate dwell solution when the window-length denominator is
    dropped from the objective: always depart immediately, and the cost
    reduces to the transit-period constant, so the induced next-visit rule
    is nearest-neighbor.  Regression oracle only."""
    b = _rhcp3_bounds(ctx, j)
    if b is None:
        return None
    rho = b[0]
    p = neighborhood_params(ctx.graph, ctx.R, ctx.i, j, ctx.t)
    cost = 0.5 * rho * (2.0 * p.R_all + p.A_all * rho)
    return ControlDecision(u_i=0.0, v_i=0.0, j=j, u_j=0.0, v_j=0.0, w=rho,
                           cost=cost)


def denominator_free_next_visit(ctx: RhcpContext) -> int | None:
    best = None
    best_rho = math.inf
    for j in ctx.active:
        rho = ctx.graph.rho[(ctx.i, j)]
        if rho > ctx.horizon:
            continue
        if rho < best_rho:
            best, best_rho = j, rho
    return best


# ---------------------------------------------------------------------------
# quadratic-form plumbing shared by the multi-variable forms
# ---------------------------------------------------------------------------

def _aff_const(n: int, c: float) -> np.ndarray:
    a = np.zeros(n + 1)
    a[n] = c
    return a


def _aff_var(n: int, idx: int) -> np.ndarray:
    a = np.zeros(n + 1)
    a[idx] = 1.0
    return a


class _QuadForm:
    """Quadratic polynomial over n variables: vars^T Q vars + c^T vars + k."""

    def __init__(self, n: int):
        self.n = n
        self.Q = np.zeros((n, n))
        self.c = np.zeros(n)
        self.k = 0.0

    def add_product(self, a: np.ndarray, b: np.ndarray, scale: float = 1.0):
        """Accumulate scale * (affine a) * (affine b), kept symmetric."""
        n = self.n
        va, ka = a[:n], a[n]
        vb, kb = b[:n], b[n]
        self.Q += 0.5 * scale * (np.outer(va, vb) + np.outer(vb, va))
        self.c += scale * (ka * vb + kb * va)
        self.k += scale * ka * kb

    def add_affine(self, a: np.ndarray, scale: float = 1.0):
        n = self.n
        self.c += scale * a[:n]
        self.k += scale * a[n]

    def trapezoid(self, duration: np.ndarray, level: np.ndarray,
                  rate: float, scale: float = 1.0):
        """Accumulate scale * d/2 * (2 level + rate d) for affine d, level."""
        self.add_product(duration, level, scale)
        self.add_product(duration, duration, 0.5 * rate * scale)

    def value(self, vars: np.ndarray) -> float:
        return float(vars @ self.Q @ vars + self.c @ vars + self.k)


@dataclass(frozen=True)
class _Case:
    """One constraint case: vars = S z + s0 over a bivariate polytope."""

    S: np.ndarray
    s0: np.ndarray
    P: float
    L: float
    Q: float
    M: float
    N: float


def _solve_cases(qf: _QuadForm, rho_total: float,
                 cases: Sequence[_Case]) -> tuple[np.ndarray, float] | None:
    """Minimum over the constraint cases; ties keep the earliest case."""
    best_vars = None
    best_cost = math.inf
    for case in cases:
        if case.M < 0.0:
            continue
        x, y, val, status = kernels.case_solve(
            qf.Q, qf.c, qf.k, rho_total, case.S, case.s0, case.P, case.L,
            case.Q, case.M, case.N)
        if status == kernels.RFOP_INFEASIBLE:
            continue
        if best_vars is None or _tie_better(val, best_cost):
            best_vars = case.S @ np.array([x, y]) + case.s0
            best_cost = val
    if best_vars is None:
        return None
    return best_vars, best_cost


# ---------------------------------------------------------------------------
# idle-phase problem: decide (v_i, u_j, v_j) with u_i = 0
# ---------------------------------------------------------------------------

def _rhcp2_quadform(ctx: RhcpContext, j: int,
                    p: NeighborhoodParams) -> _QuadForm:
    g = ctx.graph
    rho = g.rho[(ctx.i, j)]
    Aj = g.target(j).A
    Bj = g.target(j).B
    Rj = float(ctx.R[j])
    qf = _QuadForm(3)
    # vars = (v_i, u_j, v_j)
    qf.Q[0, 0] = 0.5 * p.A_wo_first
    qf.Q[1, 1] = 0.5 * (p.A_all - Bj)
    qf.Q[2, 2] = 0.5 * p.A_wo_second
    qf.Q[0, 1] = qf.Q[1, 0] = 0.5 * p.A_wo_first
    qf.Q[0, 2] = qf.Q[2, 0] = 0.5 * p.A_resid
    qf.Q[1, 2] = qf.Q[2, 1] = 0.5 * p.A_wo_second
    qf.c[0] = p.R_wo_first + p.A_wo_first * rho
    qf.c[1] = p.R_wo_first + p.A_all * rho
    qf.c[2] = p.R_resid + p.A_wo_second * rho
    qf.k = 0.5 * rho * (2.0 * p.R_wo_first + p.A_all * rho)
    return qf


def solve_rhcp2(ctx: RhcpContext, j: int) -> ControlDecision | None:
    """Idle-phase solution for candidate ``j``.

    Only valid when the current target's uncertainty is already zero and
    the agent can no longer be active there.
    """
    if float(ctx.R[ctx.i]) > 1e-9:
        raise RhcpError("idle-phase problem requires zero uncertainty at i")
    g = ctx.graph
    rho = g.rho[(ctx.i, j)]
    H = ctx.horizon
    if rho > H:
        return None
    tj = g.target(j)
    lead_b, slope = active_time_bound_affine(float(ctx.R[j]), tj.A, tj.B,
                                             lead=rho)
    p = neighborhood_params(g, ctx.R, ctx.i, j, ctx.t)
    qf = _rhcp2_quadform(ctx, j, p)
    S1 = np.zeros((3, 2))
    S1[0, 0] = 1.0
    S1[1, 1] = 1.0
    S2 = np.zeros((3, 2))
    S2[0, 0] = 1.0
    S2[1, 0] = slope
    S2[2, 1] = 1.0
    s02 = np.zeros(3)
    s02[1] = lead_b
    cases = [
        _Case(S=S1, s0=np.zeros(3), P=slope, L=lead_b, Q=1.0, M=H - rho,
              N=math.inf),
        _Case(S=S2, s0=s02, P=0.0, L=math.inf, Q=1.0 + slope,
              M=H - rho - lead_b, N=math.inf),
    ]
    got = _solve_cases(qf, rho, cases)
    if got is None:
        return None
    (vi, uj, vj), cost = got
    return ControlDecision(u_i=0.0, v_i=float(vi), j=j, u_j=float(uj),
                           v_j=float(vj), w=float(vi + rho + uj + vj),
                           cost=cost)


# ---------------------------------------------------------------------------
# arrival/active-phase problem: decide (u_i, v_i, u_j, v_j)
# ---------------------------------------------------------------------------

def _rhcp1_quadform(ctx: RhcpContext, j: int,
                    p: NeighborhoodParams) -> _QuadForm:
    g = ctx.graph
    rho = g.rho[(ctx.i, j)]
    Ai, Bi = g.target(ctx.i).A, g.target(ctx.i).B
    Bj = g.target(j).B
    qf = _QuadForm(4)
    # vars = (u_i, v_i, u_j, v_j)
    qf.Q[0, 0] = 0.5 * (p.A_all - Bi)
    qf.Q[1, 1] = 0.5 * p.A_wo_first
    qf.Q[2, 2] = 0.5 * (p.A_all - Bj)
    qf.Q[3, 3] = 0.5 * p.A_wo_second
    qf.Q[0, 1] = qf.Q[1, 0] = 0.5 * p.A_wo_first
    qf.Q[0, 2] = qf.Q[2, 0] = 0.5 * (p.A_all - Bi)
    qf.Q[0, 3] = qf.Q[3, 0] = 0.5 * (p.A_wo_second - Bi)
    qf.Q[1, 2] = qf.Q[2, 1] = 0.5 * p.A_wo_first
    qf.Q[1, 3] = qf.Q[3, 1] = 0.5 * p.A_resid
    qf.Q[2, 3] = qf.Q[3, 2] = 0.5 * p.A_wo_second
    qf.c[0] = p.R_all + (p.A_all - Bi) * rho
    qf.c[1] = p.R_wo_first + p.A_wo_first * rho
    qf.c[2] = p.R_all + p.A_all * rho
    qf.c[3] = p.R_wo_second + p.A_wo_second * rho
    qf.k = 0.5 * rho * (2.0 * p.R_all + p.A_all * rho)
    return qf


def solve_rhcp1(ctx: RhcpContext, j: int) -> ControlDecision | None:
    """Arrival/active-phase solution for candidate ``j``: four constraint
    cases, each a bivariate rational program."""
    g = ctx.graph
    rho = g.rho[(ctx.i, j)]
    H = ctx.horizon
    if rho > H:
        return None
    ti, tj = g.target(ctx.i), g.target(j)
    uiB = active_time_bound(float(ctx.R[ctx.i]), ti.A, ti.B)
    lead_b, slope = active_time_bound_affine(float(ctx.R[j]), tj.A, tj.B,
                                             lead=rho)
    p = neighborhood_params(g, ctx.R, ctx.i, j, ctx.t)
    qf = _rhcp1_quadform(ctx, j, p)
    cases = []
    # case 1: (u_i, u_j) with v_i = v_j = 0
    S = np.zeros((4, 2))
    S[0, 0] = 1.0
    S[2, 1] = 1.0
    cases.append(_Case(S=S, s0=np.zeros(4), P=slope, L=lead_b, Q=1.0,
                       M=H - rho, N=uiB))
    # case 2: (u_i, v_j) with v_i = 0, u_j at its bound
    S = np.zeros((4, 2))
    S[0, 0] = 1.0
    S[2, 0] = slope
    S[3, 1] = 1.0
    s0 = np.zeros(4)
    s0[2] = lead_b
    cases.append(_Case(S=S, s0=s0, P=0.0, L=math.inf, Q=1.0 + slope,
                       M=H - rho - lead_b, N=uiB))
    # case 3: (v_i, u_j) with u_i at its bound, v_j = 0
    S = np.zeros((4, 2))
    S[1, 0] = 1.0
    S[2, 1] = 1.0
    s0 = np.zeros(4)
    s0[0] = uiB
    cases.append(_Case(S=S, s0=s0, P=slope, L=lead_b + slope * uiB, Q=1.0,
                       M=H - rho - uiB, N=math.inf))
    # case 4: (v_i, v_j) with both active times at their bounds
    S = np.zeros((4, 2))
    S[1, 0] = 1.0
    S[2, 0] = slope
    S[3, 1] = 1.0
    s0 = np.zeros(4)
    s0[0] = uiB
    s0[2] = lead_b + slope * uiB
    cases.append(_Case(S=S, s0=s0, P=0.0, L=math.inf, Q=1.0 + slope,
                       M=H - rho - lead_b - (1.0 + slope) * uiB, N=math.inf))
    got = _solve_cases(qf, rho, cases)
    if got is None:
        return None
    (ui, vi, uj, vj), cost = got
    return ControlDecision(u_i=float(ui), v_i=float(vi), j=j, u_j=float(uj),
                           v_j=float(vj), w=float(ui + vi + rho + uj + vj),
                           cost=cost)


# ---------------------------------------------------------------------------
# extended departure problem: two-target lookahead (u_j, v_j, u_k, v_k)
# ---------------------------------------------------------------------------

def extended_quadform(ctx: RhcpContext, j: int, k: int,
                      weight_j: float = 1.0, weight_k: float = 1.0,
                      weight_rest: float = 1.0) -> _QuadForm:
    """Numerator of the two-visit departure objective, assembled from the
    three component costs (visited target j, visited target k, remaining
    two-hop members) so that weighted variants reuse the same expansion."""
    g = ctx.graph
    rij = g.rho[(ctx.i, j)]
    rjk = g.rho[(j, k)]
    rt = rij + rjk
    tj, tk = g.target(j), g.target(k)
    Rj, Rk = float(ctx.R[j]), float(ctx.R[k])
    p = neighborhood_params_two_hop(g, ctx.R, ctx.i, j, k, ctx.t)
    n = 4  # vars = (u_j, v_j, u_k, v_k)
    e_uj, e_vj = _aff_var(n, 0), _aff_var(n, 1)
    e_uk, e_vk = _aff_var(n, 2), _aff_var(n, 3)
    qf = _QuadForm(n)
    # target j: growth over rij, active decay, growth after leaving j
    rj_arr = Rj + tj.A * rij
    tail = e_uk + e_vk + _aff_const(n, rjk)
    qf.k += weight_j * 0.5 * rij * (2.0 * Rj + tj.A * rij)
    qf.trapezoid(e_uj, _aff_const(n, rj_arr), -(tj.B - tj.A), weight_j)
    rj_dep = _aff_const(n, rj_arr) - (tj.B - tj.A) * e_uj
    qf.trapezoid(tail, rj_dep, tj.A, weight_j)
    # target k: growth until the agent arrives there, then active decay
    lead_k = e_uj + e_vj + _aff_const(n, rt)
    qf.trapezoid(lead_k, _aff_const(n, Rk), tk.A, weight_k)
    rk_arr = _aff_const(n, Rk) + tk.A * lead_k
    qf.trapezoid(e_uk, rk_arr, -(tk.B - tk.A), weight_k)
    # remaining members grow for the whole window
    w_all = e_uj + e_vj + e_uk + e_vk + _aff_const(n, rt)
    qf.trapezoid(w_all, _aff_const(n, p.R_resid), p.A_resid, weight_rest)
    return qf


def solve_rhcp3_extended(ctx: RhcpContext, j: int, k: int,
                         weight_j: float = 1.0, weight_k: float = 1.0,
                         weight_rest: float = 1.0) -> ControlDecision | None:
    """Two-visit departure solution for the sequence (j, k); four constraint
    cases mirroring the arrival-form mapping, with the first active time
    bounded by a constant and the second by an affine function of the first
    visit's dwell."""
    g = ctx.graph
    rij = g.rho[(ctx.i, j)]
    rjk = g.rho[(j, k)]
    rt = rij + rjk
    H = ctx.horizon
    if rt > H:
        return None
    tj, tk = g.target(j), g.target(k)
    ujB = active_time_bound(float(ctx.R[j]), tj.A, tj.B, lead=rij)
    lead_b, slope = active_time_bound_affine(float(ctx.R[k]), tk.A, tk.B,
                                             lead=rt)
    qf = extended_quadform(ctx, j, k, weight_j, weight_k, weight_rest)
    cases = []
    # case 1: (u_j, u_k)
    S = np.zeros((4, 2))
    S[0, 0] = 1.0
    S[2, 1] = 1.0
    cases.append(_Case(S=S, s0=np.zeros(4), P=slope, L=lead_b, Q=1.0,
                       M=H - rt, N=ujB))
    # case 2: (u_j, v_k)
    S = np.zeros((4, 2))
    S[0, 0] = 1.0
    S[2, 0] = slope
    S[3, 1] = 1.0
    s0 = np.zeros(4)
    s0[2] = lead_b
    cases.append(_Case(S=S, s0=s0, P=0.0, L=math.inf, Q=1.0 + slope,
                       M=H - rt - lead_b, N=ujB))
    # case 3: (v_j, u_k)
    S = np.zeros((4, 2))
    S[1, 0] = 1.0
    S[2, 1] = 1.0
    s0 = np.zeros(4)
    s0[0] = ujB
    cases.append(_Case(S=S, s0=s0, P=slope, L=lead_b + slope * ujB, Q=1.0,
                       M=H - rt - ujB, N=math.inf))
    # case 4: (v_j, v_k)
    S = np.zeros((4, 2))
    S[1, 0] = 1.0
    S[2, 0] = slope
    S[3, 1] = 1.0
    s0 = np.zeros(4)
    s0[0] = ujB
    s0[2] = lead_b + slope * ujB
    cases.append(_Case(S=S, s0=s0, P=0.0, L=math.inf, Q=1.0 + slope,
                       M=H - rt - lead_b - (1.0 + slope) * ujB, N=math.inf))
    got = _solve_cases(qf, rt, cases)
    if got is None:
        return None
    (uj, vj, uk, vk), cost = got
    return ControlDecision(u_i=0.0, v_i=0.0, j=j, u_j=float(uj),
                           v_j=float(vj), k=k, u_k=float(uk), v_k=float(vk),
                           w=float(rt + uj + vj + uk + vk), cost=cost)


def extended_pairs(ctx: RhcpContext) -> list[tuple[int, int]]:
    """Feasible two-visit sequences: both targets uncovered, total transit
    within the horizon."""
    g = ctx.graph
    out = []
    for j in ctx.active:
        rij = g.rho[(ctx.i, j)]
        for k in g.neighbors[j]:
            if k in ctx.covered or k == j:
                continue
            if rij + g.rho[(j, k)] <= ctx.horizon:
                out.append((j, k))
    return out


# ---------------------------------------------------------------------------
# weighted next-visit selection
# ---------------------------------------------------------------------------

def nominal_alpha(ctx: RhcpContext) -> float:
    n = len(ctx.graph.closed_neighborhood(ctx.i))
    return 1.0 / (n * n)


def nominal_beta(ctx: RhcpContext) -> float:
    return 1.0 / len(ctx.graph.closed_neighborhood(ctx.i))


def weighted_next_visit(ctx: RhcpContext, alpha: float | None = None
                        ) -> tuple[int | None, ControlDecision | None]:
    """Departure selection under the weighted objective.

    ``alpha`` scales the candidate target's own cost against the remaining
    neighborhood (None picks the nominal neighborhood-size weight).  With
    ``alpha == 0`` the window-mean objective no longer depends on the dwell,
    so the zero-dwell choice is closed-form; otherwise each candidate's
    weighted problem is solved over both constraint classes.
    """
    if alpha is None:
        alpha = nominal_alpha(ctx)
    if not 0.0 <= alpha <= 1.0:
        raise RhcpError("alpha must lie in [0, 1]")
    g = ctx.graph
    if alpha == 0.0:
        best = None
        best_metric = math.inf
        for j in sorted(ctx.active):
            rho = g.rho[(ctx.i, j)]
            if rho > ctx.horizon:
                continue
            p = neighborhood_params(g, ctx.R, ctx.i, j, ctx.t)
            tj = g.target(j)
            metric = ((2.0 * p.R_all + p.A_all * rho)
                      - (2.0 * float(ctx.R[j]) + tj.A * rho))
            if best is None or _tie_better(metric, best_metric):
                best, best_metric = j, metric
        if best is None:
            return None, None
        rho = g.rho[(ctx.i, best)]
        p = neighborhood_params(g, ctx.R, ctx.i, best, ctx.t)
        cost = p.R_wo_second + 0.5 * p.A_wo_second * rho
        return best, ControlDecision(u_i=0.0, v_i=0.0, j=best, u_j=0.0,
                                     v_j=0.0, w=rho, cost=cost)
    sols = {j: solve_rhcp3_segments(ctx, j, weight_next=alpha,
                                    weight_rest=1.0 - alpha)
            for j in ctx.active}
    j = next_visit(ctx, sols)
    return j, (sols[j] if j is not None else None)


def extended_weighted_next_visit(ctx: RhcpContext,
                                 alpha: float | None = None,
                                 beta: float | None = None
                                 ) -> tuple[tuple[int, int] | None,
                                            ControlDecision | None]:
    """Two-visit departure selection under the weighted objective; falls
    back to the one-hop weighted rule when no sequence is feasible."""
    if alpha is None:
        alpha = nominal_alpha(ctx)
    if beta is None:
        beta = nominal_beta(ctx)
    if not 0.0 <= alpha <= 1.0 or not 0.0 <= beta <= 1.0:
        raise RhcpError("alpha and beta must lie in [0, 1]")
    if alpha + beta > 1.0:
        raise RhcpError("alpha + beta must not exceed 1")
    g = ctx.graph
    pairs = extended_pairs(ctx)
    if not pairs:
        return None, None
    if alpha == 0.0 and beta == 0.0:
        best = None
        best_metric = math.inf
        best_dec = None
        for (j, k) in sorted(pairs):
            rt = g.rho[(ctx.i, j)] + g.rho[(j, k)]
            p = neighborhood_params_two_hop(g, ctx.R, ctx.i, j, k, ctx.t)
            tj, tk = g.target(j), g.target(k)
            metric = ((2.0 * p.R_all + p.A_all * rt)
                      - (2.0 * float(ctx.R[j]) + tj.A * rt)
                      - (2.0 * float(ctx.R[k]) + tk.A * rt))
            if best is None or _tie_better(metric, best_metric):
                best, best_metric = (j, k), metric
                cost = p.R_resid + 0.5 * p.A_resid * rt
                best_dec = ControlDecision(u_i=0.0, v_i=0.0, j=j, u_j=0.0,
                                           v_j=0.0, k=k, u_k=0.0, v_k=0.0,
                                           w=rt, cost=cost)
        return best, best_dec
    best = None
    best_dec = None
    for (j, k) in sorted(pairs):
        d = solve_rhcp3_extended(ctx, j, k, weight_j=alpha, weight_k=beta,
                                 weight_rest=1.0 - alpha - beta)
        if d is None:
            continue
        if best_dec is None or _tie_better(d.cost, best_dec.cost):
            best, best_dec = (j, k), d
    return best, best_dec
