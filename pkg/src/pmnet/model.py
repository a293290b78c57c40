"""Target network model, piecewise-linear uncertainty dynamics and exact
trapezoidal cost accounting.

A target's uncertainty grows at rate ``A`` while unattended and shrinks at
``B - A`` while an agent dwells on it, clamping at zero.  Because every
trajectory is piecewise linear, cost integrals reduce to exact trapezoid
sums over inter-event segments; the helpers here are the single source of
truth for that accounting and are reused by the controllers and the
simulator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Sequence

ZERO_SNAP = 1e-12  # crossings within this of a segment endpoint snap to it


class ModelError(ValueError):
    """Raised for invalid model parameters or infeasible queries."""


@dataclass(frozen=True)
class Target:
    id: int
    position: tuple[float, float]
    A: float
    B: float
    R0: float


@dataclass(frozen=True)
class TargetGraph:
    """Immutable network of targets with uncertainty parameters and transit times.

    ``rho[(i, j)]`` is the transit time of the directed edge ``(i, j)``;
    ``neighbors[i]`` is the sorted neighbor set of target ``i``.
    """

    targets: tuple[Target, ...]
    rho: Mapping[tuple[int, int], float]
    neighbors: Mapping[int, tuple[int, ...]]

    @staticmethod
    def build(targets: Iterable[Target],
              edges: Iterable[tuple[int, int, float]]) -> "TargetGraph":
        targets = tuple(sorted(targets, key=lambda tg: tg.id))
        ids = [tg.id for tg in targets]
        if len(set(ids)) != len(ids):
            raise ModelError("duplicate target ids")
        for tg in targets:
            if not (0.0 <= tg.A < tg.B):
                raise ModelError(
                    f"target {tg.id}: rates must satisfy 0 <= A < B "
                    f"(removal must outpace growth), got A={tg.A}, B={tg.B}")
            if tg.R0 < 0.0:
                raise ModelError(f"target {tg.id}: R0 must be non-negative")
        idset = set(ids)
        rho: dict[tuple[int, int], float] = {}
        nbrs: dict[int, list[int]] = {i: [] for i in ids}
        for (i, j, r) in edges:
            if i not in idset or j not in idset:
                raise ModelError(f"edge ({i},{j}) references unknown target")
            if i == j:
                raise ModelError(f"self-loop on target {i}")
            if r <= 0.0:
                raise ModelError(f"edge ({i},{j}): transit time must be > 0")
            if (i, j) in rho:
                raise ModelError(f"duplicate edge ({i},{j})")
            rho[(i, j)] = float(r)
            nbrs[i].append(j)
        neighbors = {i: tuple(sorted(v)) for i, v in nbrs.items()}
        return TargetGraph(targets=targets, rho=dict(rho), neighbors=neighbors)

    def target(self, i: int) -> Target:
        return self._by_id[i]

    @property
    def ids(self) -> tuple[int, ...]:
        return tuple(tg.id for tg in self.targets)

    def closed_neighborhood(self, i: int) -> tuple[int, ...]:
        return tuple(sorted(set(self.neighbors[i]) | {i}))

    def two_hop_set(self, i: int) -> tuple[int, ...]:
        """Union of the neighbor sets of every member of the closed neighborhood."""
        out: set[int] = set()
        for m in self.closed_neighborhood(i):
            out.update(self.neighbors[m])
        return tuple(sorted(out))

    def __post_init__(self):
        object.__setattr__(self, "_by_id", {tg.id: tg for tg in self.targets})


@dataclass(frozen=True)
class TargetState:
    """Uncertainty state of one target between events."""

    R: float
    Rdot: float
    t: float  # time of the last event at this target


def uncertainty_rate(R: float, A: float, B: float, n_agents: int) -> float:
    """Instantaneous growth/decay rate of the uncertainty."""
    raw = A - B * n_agents
    if R > 0.0 or raw > 0.0:
        return raw
    return 0.0


def evolve_target(state: TargetState, A: float, B: float, n_agents: int,
                  dt: float) -> tuple[TargetState, float | None]:
    """Advance one target by ``dt`` under the piecewise-linear law.

    Returns the state ``dt`` later and, when the uncertainty crosses zero
    strictly inside the interval, the absolute crossing time.  After a
    crossing the uncertainty is clamped at zero (rate zero) for the rest of
    the interval while the agent remains.
    """
    if dt < 0.0:
        raise ModelError("dt must be non-negative")
    rate = uncertainty_rate(state.R, A, B, n_agents)
    if dt == 0.0:
        return replace(state, Rdot=rate), None
    if rate < 0.0 and state.R > 0.0:
        tc = state.R / (-rate)
        if tc <= ZERO_SNAP:  # snap crossings at the left endpoint
            tc = 0.0
        if tc < dt - ZERO_SNAP:
            return TargetState(R=0.0, Rdot=0.0, t=state.t + dt), state.t + tc
        # crossing at (or snapped to) the right endpoint: land exactly on zero
        if tc <= dt + ZERO_SNAP:
            return TargetState(R=0.0, Rdot=rate, t=state.t + dt), None
    R1 = state.R + rate * dt
    if R1 < 0.0:
        R1 = 0.0
    return TargetState(R=R1, Rdot=rate, t=state.t + dt), None


def segment_cost(R0: float, Rdot: float, dt: float) -> float:
    """Exact cost contribution of an event-free segment (trapezoid area)."""
    return 0.5 * dt * (2.0 * R0 + Rdot * dt)


def visit_cost(R0: float, u0: float, u1: float, A: float, B: float) -> float:
    """Cost of a visit that drives the uncertainty to zero.

    ``u0`` is the active time ending at the zero crossing, ``u1`` the growth
    time after the agent departs; the idle segment in between contributes
    nothing.
    """
    return 0.5 * u0 * (2.0 * R0 - (B - A) * u0) + 0.5 * A * u1 * u1


@dataclass(frozen=True)
class PlannedVisit:
    """One leg of a projected plan: transit to ``target`` then dwell there."""

    target: int
    transit: float
    active: float
    idle: float


def local_objective(A: Mapping[int, float], B: Mapping[int, float],
                    R: Mapping[int, float], members: Sequence[int],
                    start: int | None, start_active: float, start_idle: float,
                    visits: Sequence[PlannedVisit]) -> float:
    """Cost accumulated by ``members`` over the plan's window ``[0, w)``.

    The plan dwells at ``start`` for ``start_active + start_idle`` and then
    executes ``visits`` in order.  Unattended members grow at their own rate
    for the whole window (targets covered by other agents are projected the
    same way).  Idle time presumes the uncertainty was already driven to
    zero.  The result equals dense numerical integration of the projected
    profiles, computed exactly via trapezoid segments.
    """
    w = start_active + start_idle + sum(v.transit + v.active + v.idle
                                        for v in visits)
    # occupancy windows per target, chronological and non-overlapping
    occupied: dict[int, list[tuple[float, float]]] = {}
    if start is not None:
        occupied.setdefault(start, []).append(
            (0.0, start_active + start_idle))
    tcur = start_active + start_idle
    for v in visits:
        t0 = tcur + v.transit
        t1 = t0 + v.active + v.idle
        occupied.setdefault(v.target, []).append((t0, t1))
        tcur = t1
    total = 0.0
    for m in members:
        marks: list[tuple[float, int]] = []
        for (a, b) in sorted(occupied.get(m, [])):
            marks.append((a, 1))
            marks.append((b, 0))
        marks.append((w, -1))
        state = TargetState(R=float(R[m]), Rdot=0.0, t=0.0)
        tprev = 0.0
        n_here = 0
        cost = 0.0
        for (tm, occ) in marks:
            dt = tm - tprev
            if dt > 0.0:
                rate = uncertainty_rate(state.R, A[m], B[m], n_here)
                nxt, crossing = evolve_target(state, A[m], B[m], n_here, dt)
                if crossing is not None:
                    # the clamped tail after the crossing contributes zero
                    cost += segment_cost(state.R, rate, crossing - state.t)
                else:
                    cost += segment_cost(state.R, rate, dt)
                state = nxt
            tprev = tm
            if occ >= 0:
                n_here = occ
        total += cost
    return total


@dataclass(frozen=True)
class NeighborhoodParams:
    """Sums of growth rates and uncertainties over neighborhood subsets.

    The sums are taken relative to an ordered pair of distinguished targets
    (``first``, ``second``): the current and next target for a one-hop
    decision, or the next two targets for a two-hop decision.  ``A_resid``
    and ``R_resid`` run over the remaining members; the other fields add
    back one or both distinguished targets, so ``A_all == A_resid +
    A_first + A_second`` holds exactly (same for ``R``).
    """

    A_resid: float
    R_resid: float
    A_wo_first: float
    A_wo_second: float
    A_all: float
    R_wo_first: float
    R_wo_second: float
    R_all: float
    t: float = 0.0


def _pair_params(graph: TargetGraph, R: Mapping[int, float],
                 members: Sequence[int], first: int, second: int,
                 t: float) -> NeighborhoodParams:
    resid = [m for m in members if m != first and m != second]
    A_resid = math.fsum(graph.target(m).A for m in resid)
    R_resid = math.fsum(float(R[m]) for m in resid)
    A1, A2 = graph.target(first).A, graph.target(second).A
    R1, R2 = float(R[first]), float(R[second])
    return NeighborhoodParams(
        A_resid=A_resid, R_resid=R_resid,
        A_wo_first=A_resid + A2, A_wo_second=A_resid + A1,
        A_all=A_resid + A1 + A2,
        R_wo_first=R_resid + R2, R_wo_second=R_resid + R1,
        R_all=R_resid + R1 + R2, t=t)


def neighborhood_params(graph: TargetGraph, R: Mapping[int, float], i: int,
                        j: int, t: float = 0.0) -> NeighborhoodParams:
    """One-hop neighborhood sums for a decision at ``i`` visiting ``j`` next.

    The member set is the closed neighborhood of ``i``; the distinguished
    pair is ``(i, j)``.
    """
    if j not in graph.neighbors[i]:
        raise ModelError(f"target {j} is not a neighbor of {i}")
    return _pair_params(graph, R, graph.closed_neighborhood(i), i, j, t)


def neighborhood_params_two_hop(graph: TargetGraph, R: Mapping[int, float],
                                i: int, j: int, k: int,
                                t: float = 0.0) -> NeighborhoodParams:
    """Two-hop neighborhood sums for a decision at ``i`` visiting ``j`` then ``k``.

    The member set is the union of neighbor sets over the closed
    neighborhood of ``i``; the distinguished pair is ``(j, k)``.
    """
    if j not in graph.neighbors[i]:
        raise ModelError(f"target {j} is not a neighbor of {i}")
    if k not in graph.neighbors[j]:
        raise ModelError(f"target {k} is not a neighbor of {j}")
    return _pair_params(graph, R, graph.two_hop_set(i), j, k, t)
