"""Deterministic event-driven execution of receding-horizon patrol policies.

One simulation instance owns a priority queue of timestamped events; the
world state (piecewise-linear target uncertainties, agent modes, coverage
claims) only changes at event times, so the objective accumulates exactly
via trapezoid segments.  Simultaneous events resolve in a fixed kind
priority (zero crossings first, so idle-phase solves see a zero state),
then by agent and target id, making runs bit-reproducible for a given
(scenario, controller, seed) triple.

Covering bookkeeping: a target is claimed from the moment an agent commits
to travel toward it until that agent departs it again; claim transitions
notify dwelling agents in the static in-neighborhood, which re-solve their
current decision problem.  Randomness (five optional channels) is drawn
from independent streams keyed by (channel, entity) so enabling one channel
never perturbs another's draws.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass

import numpy as np

from .model import segment_cost, uncertainty_rate
from .rhcp import (RhcpContext, ControlDecision, solve_rhcp1, solve_rhcp2,
                   solve_rhcp3, next_visit, weighted_next_visit,
                   extended_weighted_next_visit, denominator_free_next_visit,
                   active_time_bound)
from .scenario import Scenario, ControllerConfig, NoiseConfig

MAX_EVENTS = 10 ** 6
LOC_STEP = 1e-3       # integration step for moving targets / pursuit
ARRIVE_EPS = 1e-6     # pursuit arrival distance
SNAP = 1e-12

KIND_PRIORITY = {
    "zeroCrossing": 0,
    "covering": 1,
    "uncovering": 2,
    "activeEnd": 3,
    "idleEnd": 4,
    "transitEnd": 5,
    "arrival": 5,
    "noiseShock": 6,
}

CHANNEL_CODES = {"growth-rate": 1, "speed": 2, "location": 3,
                 "state-shock": 4, "channel": 5}


class SimulationAbort(RuntimeError):
    """Event budget exceeded; indicates a livelocked controller."""


@dataclass(frozen=True)
class EventRecord:
    time: float
    kind: str
    agent: int | None
    target: int | None
    R: tuple[float, ...]


@dataclass
class AgentState:
    id: int
    mode: str            # "active" | "idle" | "transit"
    target: int          # dwell target, or transit destination
    origin: int          # transit origin (== target while dwelling)
    plan: ControlDecision | None = None
    plan_version: int = 0
    paused: bool = False
    position: tuple[float, float] = (0.0, 0.0)
    depart_time: float = 0.0


@dataclass
class SimulationResult:
    J_T: float
    events: list[EventRecord]
    trajectories: dict[int, list[tuple[float, float, float]]]
    visits: dict[int, list[tuple[float, int]]]
    T: float
    event_count: int
    wall_time: float
    seed: int
    controller: str
    max_occupancy: int = 0
    # claim intervals (t_claim, t_release, agent) per target: a target is
    # claimed from the moment an agent commits to travel toward it until
    # that agent departs it
    claims: dict[int, list[tuple[float, float, int]]] | None = None

    def recompute_objective(self) -> float:
        return accumulate_objective(self.trajectories, self.T)

    def claim_overlaps(self) -> list[tuple[int, float]]:
        """Times at which two agents claimed the same target (should be
        empty under the covering protocol)."""
        bad = []
        for i, spans in (self.claims or {}).items():
            spans = sorted(spans)
            for k in range(1, len(spans)):
                if spans[k][0] < spans[k - 1][1] - 1e-12:
                    bad.append((i, spans[k][0]))
        return bad


def accumulate_objective(trajectories: dict[int, list[tuple[float, float, float]]],
                         T: float) -> float:
    """Mean system uncertainty from per-target breakpoint lists.

    Each list holds (t_start, R_start, rate) segments; consecutive segments
    must tile [0, T] per target.
    """
    total = 0.0
    for i in sorted(trajectories):
        segs = trajectories[i]
        if not segs or segs[0][0] > 1e-9:
            raise ValueError(f"trajectory of target {i} does not start at 0")
        if segs[-1][0] > T + 1e-9:
            raise ValueError(f"trajectory of target {i} overruns T")
        for idx, (t0, R0, rate) in enumerate(segs):
            t1 = segs[idx + 1][0] if idx + 1 < len(segs) else T
            if t1 < t0 - 1e-9:
                raise ValueError(f"trajectory of target {i} is out of order")
            total += segment_cost(R0, rate, t1 - t0)
    return total / T


class _Streams:
    """Independent, named random streams keyed by (channel, entity id)."""

    def __init__(self, seed: int):
        self.seed = seed
        self._cache: dict[tuple[int, int], np.random.Generator] = {}

    def get(self, channel: str, entity: int) -> np.random.Generator:
        key = (CHANNEL_CODES[channel], entity)
        gen = self._cache.get(key)
        if gen is None:
            ss = np.random.SeedSequence([self.seed, key[0], entity])
            gen = np.random.Generator(np.random.PCG64(ss))
            self._cache[key] = gen
        return gen


# ---------------------------------------------------------------------------
# controllers
# ---------------------------------------------------------------------------

class Controller:
    """Maps decision events to plans; stateless unless noted."""

    name = "rhc"

    def dwell_active(self, ctx: RhcpContext) -> ControlDecision | None:
        sols = {j: solve_rhcp1(ctx, j) for j in ctx.active}
        j = next_visit(ctx, sols)
        return sols[j] if j is not None else None

    def dwell_idle(self, ctx: RhcpContext) -> ControlDecision | None:
        sols = {j: solve_rhcp2(ctx, j) for j in ctx.active}
        j = next_visit(ctx, sols)
        return sols[j] if j is not None else None

    def depart(self, ctx: RhcpContext) -> ControlDecision | None:
        sols = {j: solve_rhcp3(ctx, j) for j in ctx.active}
        j = next_visit(ctx, sols)
        return sols[j] if j is not None else None


class AlphaController(Controller):
    """Weighted next-visit selection; dwell phases as the plain controller."""

    name = "rhc_alpha"

    def __init__(self, alpha: float | None):
        self.alpha = alpha

    def depart(self, ctx: RhcpContext) -> ControlDecision | None:
        _, dec = weighted_next_visit(ctx, self.alpha)
        return dec


class ExtendedController(Controller):
    """Two-target lookahead departures with weighted objective."""

    name = "ex_rhc_alpha_beta"

    def __init__(self, alpha: float | None, beta: float | None):
        self.alpha = alpha
        self.beta = beta

    def depart(self, ctx: RhcpContext) -> ControlDecision | None:
        _, dec = extended_weighted_next_visit(ctx, self.alpha, self.beta)
        if dec is not None:
            return dec
        # no feasible two-visit sequence: one-hop fallback
        sols = {j: solve_rhcp3(ctx, j) for j in ctx.active}
        j = next_visit(ctx, sols)
        return sols[j] if j is not None else None


class DenominatorFreeController(Controller):
    """Nearest-neighbor departures (regression oracle for the degenerate
    objective without the window-length denominator)."""

    name = "denominator_free"

    def depart(self, ctx: RhcpContext) -> ControlDecision | None:
        j = denominator_free_next_visit(ctx)
        if j is None:
            return None
        rho = ctx.graph.rho[(ctx.i, j)]
        return ControlDecision(u_i=0.0, v_i=0.0, j=j, u_j=0.0, v_j=0.0,
                               w=rho, cost=rho)


class PeriodicBaselineController(Controller):
    """Trivial comparison baseline: drain the current target, then rotate
    round-robin over the (uncovered) neighbors."""

    name = "periodic_baseline"

    def __init__(self):
        self._rr: dict[int, int] = {}

    def dwell_active(self, ctx: RhcpContext) -> ControlDecision | None:
        tg = ctx.graph.target(ctx.i)
        u = active_time_bound(float(ctx.R[ctx.i]), tg.A, tg.B)
        return ControlDecision(u_i=u, v_i=0.0, j=None, u_j=0.0, v_j=0.0,
                               w=u, cost=0.0)

    def dwell_idle(self, ctx: RhcpContext) -> ControlDecision | None:
        return ControlDecision(u_i=0.0, v_i=0.0, j=None, u_j=0.0, v_j=0.0,
                               w=0.0, cost=0.0)

    def depart(self, ctx: RhcpContext) -> ControlDecision | None:
        if not ctx.active:
            return None
        options = sorted(ctx.active)
        idx = self._rr.get(ctx.i, 0) % len(options)
        self._rr[ctx.i] = idx + 1
        j = options[idx]
        return ControlDecision(u_i=0.0, v_i=0.0, j=j, u_j=0.0, v_j=0.0,
                               w=ctx.graph.rho[(ctx.i, j)], cost=0.0)


def make_controller(cfg: ControllerConfig) -> Controller:
    if cfg.type == "rhc":
        return Controller()
    if cfg.type == "rhc_alpha":
        return AlphaController(cfg.alpha)
    if cfg.type == "ex_rhc_alpha_beta":
        return ExtendedController(cfg.alpha, cfg.beta)
    if cfg.type == "denominator_free":
        return DenominatorFreeController()
    if cfg.type == "periodic_baseline":
        return PeriodicBaselineController()
    raise ValueError(f"unknown controller type '{cfg.type}'")


# ---------------------------------------------------------------------------
# the engine
# ---------------------------------------------------------------------------

class Simulation:
    def __init__(self, scenario: Scenario, seed: int | None = None):
        self.sc = scenario
        self.graph = scenario.graph
        self.T = scenario.T
        self.seed = scenario.seed if seed is None else seed
        self.noise: NoiseConfig = scenario.noise
        self.controller = make_controller(scenario.controller)
        self.H_cfg = scenario.controller.H
        self.extended = scenario.controller.type == "ex_rhc_alpha_beta"
        self.streams = _Streams(self.seed)
        self.edge_len = {(e.i, e.j): e.length for e in scenario.edges}
        self.edge_V = {(e.i, e.j): e.V for e in scenario.edges}
        ids = self.graph.ids
        self.t = 0.0
        self.R = {i: self.graph.target(i).R0 for i in ids}
        self.rate = {i: 0.0 for i in ids}
        self.growth_factor = {i: 1.0 for i in ids}
        self.occupancy = {i: 0 for i in ids}
        self.claims: dict[int, set[int]] = {i: set() for i in ids}
        self.cross_version = {i: 0 for i in ids}
        self.traj: dict[int, list[tuple[float, float, float]]] = {
            i: [] for i in ids}
        self.total_cost = 0.0
        self.agents: dict[int, AgentState] = {}
        self.visits: dict[int, list[tuple[float, int]]] = {}
        self.events: list[EventRecord] = []
        self.heap: list = []
        self._seq = 0
        self.event_count = 0
        self.max_occupancy = 0
        self.claim_log: dict[int, list[tuple[float, float, int]]] = {
            i: [] for i in ids}
        self._open_claim: dict[tuple[int, int], float] = {}
        # moving-target state (location noise)
        self.pos = {i: np.array(self.graph.target(i).position, dtype=float)
                    for i in ids}
        self.vel = {i: np.zeros(2) for i in ids}
        self.pos_step = {i: 0 for i in ids}
        # pre-scheduled state shocks
        if self.noise.model == "state-shock" and self.noise.m > 0.0:
            for i in ids:
                rng = self.streams.get("state-shock", i)
                tshock = 0.0
                while True:
                    tshock += rng.exponential(self.noise.lam)
                    if tshock > self.T:
                        break
                    mag = rng.uniform(-self.noise.m, self.noise.m)
                    self._push(tshock, "noiseShock", None, i, -1, mag)

    # -- queue ------------------------------------------------------------

    def _push(self, t: float, kind: str, agent: int | None,
              target: int | None, version: int, payload: float = 0.0):
        self._seq += 1
        heapq.heappush(self.heap, (
            t, KIND_PRIORITY[kind],
            agent if agent is not None else -1,
            target if target is not None else -1,
            self._seq, kind, version, payload))

    # -- world advancement --------------------------------------------------

    def _advance(self, to: float):
        dt = to - self.t
        if dt < -1e-9:
            raise RuntimeError("event queue went backwards in time")
        if dt <= 0.0:
            return
        for i in self.graph.ids:
            R0 = self.R[i]
            rate = self.rate[i]
            self.total_cost += segment_cost(R0, rate, dt)
            self.traj[i].append((self.t, R0, rate))
            R1 = R0 + rate * dt
            if R1 < 0.0:
                R1 = 0.0
            self.R[i] = R1
        self.t = to

    def _effective_A(self, i: int) -> float:
        return self.graph.target(i).A * self.growth_factor[i]

    def _refresh_segment(self):
        """Resample per-segment growth factors, recompute rates, and keep
        one live zero-crossing event per decaying target."""
        growth_noise = (self.noise.model == "growth-rate"
                        and self.noise.m > 0.0)
        for i in self.graph.ids:
            if growth_noise:
                rng = self.streams.get("growth-rate", i)
                self.growth_factor[i] = rng.uniform(1.0 - self.noise.m,
                                                    1.0 + self.noise.m)
            tg = self.graph.target(i)
            rate = uncertainty_rate(self.R[i], self._effective_A(i), tg.B,
                                    self.occupancy[i])
            self.rate[i] = rate
            self.cross_version[i] += 1
            if rate < 0.0 and self.R[i] > 0.0:
                tc = self.t + self.R[i] / (-rate)
                if tc <= self.T:
                    self._push(tc, "zeroCrossing", None, i,
                               self.cross_version[i])

    # -- coverage -----------------------------------------------------------

    def update_coverage(self, j: int, agent: int, covered: bool):
        """Claim or release target ``j`` for ``agent``; emits the
        notification event when the covered status actually flips."""
        was = bool(self.claims[j])
        if covered:
            self.claims[j].add(agent)
            self._open_claim[(j, agent)] = self.t
        else:
            self.claims[j].discard(agent)
            t0 = self._open_claim.pop((j, agent), None)
            if t0 is not None:
                self.claim_log[j].append((t0, self.t, agent))
        now = bool(self.claims[j])
        if was != now:
            self._push(self.t, "covering" if now else "uncovering", None, j,
                       -1)

    def _covered_for(self, agent_id: int) -> frozenset[int]:
        return frozenset(i for i, s in self.claims.items()
                         if s - {agent_id})

    # -- context ------------------------------------------------------------

    def _edge_rho(self, i: int, j: int) -> float:
        if self.noise.model == "location" and self.noise.m > 0.0:
            self._advance_positions(self.t)
            d = float(np.hypot(*(self.pos[i] - self.pos[j])))
            V = self._edge_speed(i, j)
            return max(d / V, 1e-9)
        return self.graph.rho[(i, j)]

    def _edge_speed(self, i: int, j: int) -> float:
        return self.edge_V.get((i, j), 50.0)

    def _context_graph(self):
        if self.noise.model == "location" and self.noise.m > 0.0:
            from .model import TargetGraph
            rho = {(a, b): self._edge_rho(a, b) for (a, b) in self.graph.rho}
            return TargetGraph(targets=self.graph.targets, rho=rho,
                               neighbors=self.graph.neighbors)
        return self.graph

    def _build_ctx(self, agent: AgentState) -> RhcpContext:
        i = agent.target
        graph = self._context_graph()
        members = (graph.two_hop_set(i) if self.extended
                   else graph.closed_neighborhood(i))
        members = sorted(set(members) | {i})
        reads: dict[int, float] = {}
        chan = self.noise.model == "channel" and self.noise.m > 0.0
        for m in members:
            val = self.R[m]
            if chan and m != i:
                rng = self.streams.get("channel", m)
                val = max(0.0, val + rng.uniform(-self.noise.m,
                                                 self.noise.m))
            reads[m] = val
        covered = self._covered_for(agent.id)
        active = [j for j in graph.neighbors[i] if j not in covered]
        # co-located agents split the candidate set round-robin
        co = sorted(a.id for a in self.agents.values()
                    if a.mode != "transit" and a.target == i)
        if len(co) > 1:
            rank = co.index(agent.id)
            active = [j for idx, j in enumerate(sorted(active))
                      if idx % len(co) == rank]
        horizon = min(self.H_cfg, self.T - self.t)
        if horizon < 0.0:
            horizon = 0.0
        return RhcpContext(graph=graph, i=i, t=self.t, horizon=horizon,
                           R=reads, active=tuple(sorted(active)),
                           covered=covered)

    # -- agent planning -------------------------------------------------------

    def _plan_active(self, agent: AgentState):
        agent.plan_version += 1
        ctx = self._build_ctx(agent)
        dec = self.controller.dwell_active(ctx)
        agent.mode = "active" if self.R[agent.target] > 0.0 else "idle"
        if dec is None:
            agent.plan = None
            agent.paused = True
            return
        agent.plan = dec
        agent.paused = False
        self._push(self.t + dec.u_i, "activeEnd", agent.id, agent.target,
                   agent.plan_version)

    def _plan_idle(self, agent: AgentState):
        agent.plan_version += 1
        agent.mode = "idle"
        ctx = self._build_ctx(agent)
        dec = self.controller.dwell_idle(ctx)
        if dec is None:
            agent.plan = None
            agent.paused = True
            return
        agent.plan = dec
        agent.paused = False
        self._push(self.t + dec.v_i, "idleEnd", agent.id, agent.target,
                   agent.plan_version)

    def _depart(self, agent: AgentState):
        agent.plan_version += 1
        ctx = self._build_ctx(agent)
        dec = self.controller.depart(ctx)
        if dec is None or dec.j is None:
            agent.plan = None
            agent.paused = True
            agent.mode = "active" if self.R[agent.target] > 0.0 else "idle"
            return
        i, j = agent.target, dec.j
        self.occupancy[i] -= 1
        self.update_coverage(i, agent.id, False)
        self.update_coverage(j, agent.id, True)
        agent.mode = "transit"
        agent.origin = i
        agent.target = j
        agent.plan = dec
        agent.paused = False
        agent.depart_time = self.t
        duration = self._transit_duration(agent, i, j)
        self._push(self.t + duration, "transitEnd", agent.id, j,
                   agent.plan_version)

    def _transit_duration(self, agent: AgentState, i: int, j: int) -> float:
        if self.noise.model == "speed" and self.noise.m > 0.0:
            rng = self.streams.get("speed", agent.id)
            factor = rng.uniform(1.0 - self.noise.m, 1.0 + self.noise.m)
            factor = max(factor, 1e-9)
            length = self.edge_len.get((i, j))
            if length is not None:
                return length / (self._edge_speed(i, j) * factor)
            return self.graph.rho[(i, j)] / factor
        if self.noise.model == "location" and self.noise.m > 0.0:
            return self._pursuit_duration(i, j)
        return self.graph.rho[(i, j)]

    def _pursuit_duration(self, i: int, j: int) -> float:
        V = self._edge_speed(i, j)
        self._advance_positions(self.t)
        s = self.pos[i].copy()
        steps = 0
        k = self.pos_step[j]
        while True:
            tgt = self._position_at_step(j, k + steps)
            d = float(np.hypot(*(tgt - s)))
            if d < ARRIVE_EPS:
                break
            step_len = V * LOC_STEP
            if step_len >= d:
                s = tgt.copy()
            else:
                s += (tgt - s) * (step_len / d)
            steps += 1
            if steps > 10_000_000:
                raise SimulationAbort("pursuit failed to converge")
        return max(steps * LOC_STEP, 1e-9)

    def _position_at_step(self, i: int, k: int) -> np.ndarray:
        while self.pos_step[i] < k:
            rng = self.streams.get("location", i)
            acc = rng.uniform(-self.noise.m, self.noise.m, size=2)
            self.vel[i] = self.vel[i] + acc * LOC_STEP
            cand = self.pos[i] + self.vel[i] * LOC_STEP
            anchor = np.array(self.graph.target(i).position)
            off = cand - anchor
            nrm = float(np.hypot(off[0], off[1]))
            if nrm > self.noise.radius:
                cand = anchor + off * (self.noise.radius / nrm)
            self.pos[i] = cand
            self.pos_step[i] += 1
        return self.pos[i]

    def _advance_positions(self, t: float):
        k = int(t / LOC_STEP)
        for i in self.graph.ids:
            self._position_at_step(i, k)

    # -- re-solve triggers -----------------------------------------------------

    def _resolve_dweller(self, agent: AgentState):
        """Re-solve the agent's current decision form after a neighborhood
        change (claim flip or state shock)."""
        if agent.mode == "transit":
            return
        if self.R[agent.target] > 0.0:
            self._plan_active(agent)
        else:
            self._plan_idle(agent)

    def _notify_neighbors(self, j: int):
        for aid in sorted(self.agents):
            agent = self.agents[aid]
            if agent.mode == "transit":
                continue
            if j in self.graph.neighbors[agent.target]:
                self._resolve_dweller(agent)

    # -- event handlers ---------------------------------------------------------

    def _snapshot(self) -> tuple[float, ...]:
        return tuple(self.R[i] for i in self.graph.ids)

    def _log(self, t: float, kind: str, agent: int | None,
             target: int | None):
        self.events.append(EventRecord(time=t, kind=kind, agent=agent,
                                       target=target, R=self._snapshot()))

    def run(self) -> SimulationResult:
        tic = time.perf_counter()
        ids = self.graph.ids
        starts = self.sc.resolved_starts()
        for aid in sorted(starts):
            i = starts[aid]
            ag = AgentState(id=aid, mode="active", target=i, origin=i,
                            position=tuple(self.graph.target(i).position))
            self.agents[aid] = ag
            self.visits[aid] = [(0.0, i)]
            self.occupancy[i] += 1
            self.max_occupancy = max(self.max_occupancy, self.occupancy[i])
            self.claims[i].add(aid)
            self._open_claim[(i, aid)] = 0.0
        for aid in sorted(self.agents):
            self._log(0.0, "arrival", aid, self.agents[aid].target)
        for aid in sorted(self.agents):
            self._plan_active(self.agents[aid])
        self._refresh_segment()
        while self.heap:
            entry = self.heap[0]
            if entry[0] > self.T:
                break
            (t, _prio, _aid, _tid, _seq, kind, version,
             payload) = heapq.heappop(self.heap)
            agent = self.agents.get(_aid) if _aid >= 0 else None
            target = _tid if _tid >= 0 else None
            # stale-entry filters
            if kind in ("activeEnd", "idleEnd", "transitEnd"):
                if agent is None or version != agent.plan_version:
                    continue
            elif kind == "zeroCrossing":
                if version != self.cross_version[target]:
                    continue
            self.event_count += 1
            if self.event_count > MAX_EVENTS:
                raise SimulationAbort(
                    f"exceeded {MAX_EVENTS} events at t={t:.6f}; "
                    f"controller appears to be livelocked")
            self._advance(t)
            if kind == "zeroCrossing":
                self.R[target] = 0.0
                dweller = None
                for aid in sorted(self.agents):
                    ag = self.agents[aid]
                    if ag.mode != "transit" and ag.target == target:
                        dweller = ag
                        break
                self._log(t, kind, dweller.id if dweller else None, target)
                if dweller is not None:
                    self._plan_idle(dweller)
            elif kind == "activeEnd":
                i = agent.target
                self._log(t, kind, agent.id, i)
                if self.R[i] <= SNAP:
                    self.R[i] = 0.0
                    self._plan_idle(agent)
                else:
                    self._depart(agent)
            elif kind == "idleEnd":
                self._log(t, kind, agent.id, agent.target)
                self._depart(agent)
            elif kind == "transitEnd":
                j = agent.target
                agent.mode = "active"
                agent.origin = j
                agent.position = tuple(self.graph.target(j).position)
                self.occupancy[j] += 1
                self.max_occupancy = max(self.max_occupancy,
                                         self.occupancy[j])
                self.visits[agent.id].append((t, j))
                self._log(t, kind, agent.id, j)
                self._plan_active(agent)
            elif kind in ("covering", "uncovering"):
                self._log(t, kind, None, target)
                self._notify_neighbors(target)
            elif kind == "noiseShock":
                self.R[target] = max(0.0, self.R[target] + payload)
                self._log(t, kind, None, target)
                for aid in sorted(self.agents):
                    ag = self.agents[aid]
                    if ag.mode == "transit":
                        continue
                    if (ag.target == target
                            or target in self.graph.neighbors[ag.target]):
                        self._resolve_dweller(ag)
            else:
                raise RuntimeError(f"unhandled event kind {kind}")
            self._refresh_segment()
        self._advance(self.T)
        for i in ids:
            if not self.traj[i]:
                self.traj[i].append((0.0, self.graph.target(i).R0,
                                     self.rate[i]))
        for (j, aid), t0 in sorted(self._open_claim.items()):
            self.claim_log[j].append((t0, self.T, aid))
        toc = time.perf_counter()
        return SimulationResult(
            J_T=self.total_cost / self.T, events=self.events,
            trajectories=self.traj, visits=self.visits, T=self.T,
            event_count=self.event_count, wall_time=toc - tic,
            seed=self.seed, controller=self.controller.name,
            max_occupancy=self.max_occupancy, claims=self.claim_log)


def run(scenario: Scenario, seed: int | None = None) -> SimulationResult:
    """Execute one deterministic simulation of the scenario."""
    return Simulation(scenario, seed=seed).run()
