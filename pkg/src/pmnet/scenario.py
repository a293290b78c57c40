"""Scenario files: schema, validation, defaults and topology generation.

Scenarios are JSON objects listing targets, directed edges, agents, the
mission length, a controller block, a noise block and a seed.  Benchmark-standard
defaults are filled in for missing fields (A=1, B=10, R0=0.5, T=500, V=50,
H=T/2).  Emitted files are fully materialized so they round-trip through
the parser with value equality.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .model import Target, TargetGraph, ModelError

DEFAULT_A = 1.0
DEFAULT_B = 10.0
DEFAULT_R0 = 0.5
DEFAULT_T = 500.0
DEFAULT_V = 50.0
REGION = 600.0  # mission space is REGION x REGION

CONTROLLER_TYPES = ("rhc", "rhc_alpha", "ex_rhc_alpha_beta",
                    "denominator_free", "periodic_baseline")
NOISE_MODELS = ("growth-rate", "speed", "location", "state-shock", "channel")


class ScenarioError(ValueError):
    """Scenario file violates the schema or admits no valid simulation."""


@dataclass(frozen=True)
class EdgeSpec:
    i: int
    j: int
    length: float
    V: float
    rho: float


@dataclass(frozen=True)
class AgentSpec:
    id: int
    start: int | str  # target id or "auto"


@dataclass(frozen=True)
class ControllerConfig:
    type: str = "rhc"
    H: float = DEFAULT_T / 2.0
    alpha: float | None = None  # None = nominal neighborhood-size weight
    beta: float | None = None


@dataclass(frozen=True)
class NoiseConfig:
    model: str | None = None
    m: float = 0.0
    lam: float = 50.0    # mean gap between state shocks
    radius: float = 20.0  # location-noise confinement radius


@dataclass(frozen=True)
class Scenario:
    graph: TargetGraph
    edges: tuple[EdgeSpec, ...]
    agents: tuple[AgentSpec, ...]
    T: float
    controller: ControllerConfig
    noise: NoiseConfig
    seed: int

    def resolved_starts(self) -> dict[int, int]:
        """Start target per agent; "auto" agents are spread uniformly over
        the target list: agent a (1-based) starts at the target with sorted
        index (a-1)*round(M/N).  Indices wrap around, and an occupied slot
        probes forward so auto placement never stacks two agents."""
        ids = self.graph.ids
        M = len(ids)
        N = len(self.agents)
        out: dict[int, int] = {}
        taken: set[int] = set()
        stride = int(math.floor(M / N + 0.5)) if N else 0
        for rank, ag in enumerate(sorted(self.agents, key=lambda a: a.id)):
            if ag.start == "auto":
                idx = (rank * stride) % M
                while idx in taken and len(taken) < M:
                    idx = (idx + 1) % M
                taken.add(idx)
                out[ag.id] = ids[idx]
            else:
                out[ag.id] = int(ag.start)
                taken.add(ids.index(int(ag.start)))
        return out


def _require(cond: bool, msg: str):
    if not cond:
        raise ScenarioError(msg)


def _num(obj, key, default=None, required=False):
    if key not in obj or obj[key] is None:
        if required:
            raise ScenarioError(f"missing required field '{key}'")
        return default
    v = obj[key]
    _require(isinstance(v, (int, float)) and not isinstance(v, bool),
             f"field '{key}' must be a number")
    return float(v)


def scenario_from_dict(data: dict) -> Scenario:
    _require(isinstance(data, dict), "scenario must be a JSON object")
    raw_targets = data.get("targets")
    _require(isinstance(raw_targets, list) and raw_targets,
             "scenario needs a non-empty 'targets' list")
    targets = []
    for entry in raw_targets:
        _require(isinstance(entry, dict), "each target must be an object")
        _require("id" in entry, "target missing 'id'")
        pos = entry.get("position", [0.0, 0.0])
        _require(isinstance(pos, (list, tuple)) and len(pos) == 2,
                 "target position must be a 2-vector")
        A = _num(entry, "A", DEFAULT_A)
        B = _num(entry, "B", DEFAULT_B)
        _require(0.0 <= A < B,
                 f"target {entry['id']}: requires 0 <= A < B so a dwelling "
                 f"agent can drain the uncertainty (got A={A}, B={B})")
        targets.append(Target(id=int(entry["id"]),
                              position=(float(pos[0]), float(pos[1])),
                              A=A, B=B, R0=_num(entry, "R0", DEFAULT_R0)))
    by_id = {t.id: t for t in targets}
    edges = []
    for entry in data.get("edges", []):
        _require(isinstance(entry, dict), "each edge must be an object")
        _require("i" in entry and "j" in entry, "edge missing endpoint")
        i, j = int(entry["i"]), int(entry["j"])
        _require(i in by_id and j in by_id,
                 f"edge ({i},{j}) references unknown target")
        V = _num(entry, "V", DEFAULT_V)
        _require(V > 0.0, f"edge ({i},{j}): V must be positive")
        length = _num(entry, "length")
        rho = _num(entry, "rho")
        if length is None:
            if rho is not None:
                length = rho * V
            else:
                pi, pj = by_id[i].position, by_id[j].position
                length = math.hypot(pi[0] - pj[0], pi[1] - pj[1])
        if rho is None:
            rho = length / V
        _require(rho > 0.0, f"edge ({i},{j}): transit time must be positive")
        edges.append(EdgeSpec(i=i, j=j, length=length, V=V, rho=rho))
    raw_agents = data.get("agents", [])
    _require(isinstance(raw_agents, list), "'agents' must be a list")
    agents = []
    for entry in raw_agents:
        _require(isinstance(entry, dict) and "id" in entry,
                 "each agent needs an 'id'")
        start = entry.get("start", "auto")
        if start != "auto":
            start = int(start)
            _require(start in by_id,
                     f"agent {entry['id']}: unknown start target {start}")
        agents.append(AgentSpec(id=int(entry["id"]), start=start))
    _require(len({a.id for a in agents}) == len(agents),
             "duplicate agent ids")
    T = _num(data, "T", DEFAULT_T)
    _require(T > 0.0, "mission length T must be positive")
    ctl_raw = data.get("controller", {})
    _require(isinstance(ctl_raw, dict), "'controller' must be an object")
    ctype = ctl_raw.get("type", "rhc")
    _require(ctype in CONTROLLER_TYPES,
             f"unknown controller '{ctype}' (choose from "
             f"{', '.join(CONTROLLER_TYPES)})")
    H = _num(ctl_raw, "H", T / 2.0)
    _require(H > 0.0, "horizon bound H must be positive")
    alpha = _num(ctl_raw, "alpha")
    beta = _num(ctl_raw, "beta")
    controller = ControllerConfig(type=ctype, H=H, alpha=alpha, beta=beta)
    nz_raw = data.get("noise", {})
    _require(isinstance(nz_raw, dict), "'noise' must be an object")
    model = nz_raw.get("model")
    _require(model is None or model in NOISE_MODELS,
             f"unknown noise model '{model}' (choose from "
             f"{', '.join(NOISE_MODELS)})")
    m = _num(nz_raw, "m", 0.0)
    _require(m >= 0.0, "noise magnitude m must be non-negative")
    lam = _num(nz_raw, "lambda", 50.0)
    _require(lam > 0.0, "shock inter-arrival mean must be positive")
    noise = NoiseConfig(model=model, m=m, lam=lam,
                        radius=_num(nz_raw, "radius", 20.0))
    seed = data.get("seed", 0)
    _require(isinstance(seed, int) and not isinstance(seed, bool),
             "seed must be an integer")
    try:
        graph = TargetGraph.build(targets,
                                  [(e.i, e.j, e.rho) for e in edges])
    except ModelError as exc:
        raise ScenarioError(str(exc)) from exc
    if any(a.start == "auto" for a in agents) and len(agents) > len(targets):
        raise ScenarioError(
            "auto placement needs at least as many targets as agents")
    return Scenario(graph=graph, edges=tuple(edges), agents=tuple(agents),
                    T=T, controller=controller, noise=noise, seed=int(seed))


def scenario_to_dict(sc: Scenario) -> dict:
    return {
        "targets": [{"id": t.id, "position": list(t.position), "A": t.A,
                     "B": t.B, "R0": t.R0} for t in sc.graph.targets],
        "edges": [{"i": e.i, "j": e.j, "length": e.length, "V": e.V,
                   "rho": e.rho} for e in sc.edges],
        "agents": [{"id": a.id, "start": a.start} for a in sc.agents],
        "T": sc.T,
        "controller": {"type": sc.controller.type, "H": sc.controller.H,
                       "alpha": sc.controller.alpha,
                       "beta": sc.controller.beta},
        "noise": {"model": sc.noise.model, "m": sc.noise.m,
                  "lambda": sc.noise.lam, "radius": sc.noise.radius},
        "seed": sc.seed,
    }


def parse_scenario(path: str | Path) -> Scenario:
    """Load and validate a scenario file, applying defaults."""
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"invalid JSON: {exc}") from exc
    return scenario_from_dict(data)


def write_scenario(sc: Scenario, path: str | Path):
    Path(path).write_text(json.dumps(scenario_to_dict(sc), indent=2) + "\n")


def apply_overrides(sc: Scenario, controller: str | None = None,
                    H: float | None = None, alpha: float | None = None,
                    beta: float | None = None, noise: str | None = None,
                    m: float | None = None, lam: float | None = None,
                    seed: int | None = None, T: float | None = None
                    ) -> Scenario:
    """Command-line style overrides on top of a parsed scenario."""
    ctl = sc.controller
    if controller is not None:
        if controller not in CONTROLLER_TYPES:
            raise ScenarioError(f"unknown controller '{controller}'")
        ctl = replace(ctl, type=controller)
    if H is not None:
        if H <= 0.0:
            raise ScenarioError("horizon bound H must be positive")
        ctl = replace(ctl, H=H)
    if alpha is not None:
        ctl = replace(ctl, alpha=alpha)
    if beta is not None:
        ctl = replace(ctl, beta=beta)
    nz = sc.noise
    if noise is not None:
        if noise == "none":
            nz = replace(nz, model=None)
        elif noise in NOISE_MODELS:
            nz = replace(nz, model=noise)
        else:
            raise ScenarioError(f"unknown noise model '{noise}'")
    if m is not None:
        if m < 0.0:
            raise ScenarioError("noise magnitude must be non-negative")
        nz = replace(nz, m=m)
    if lam is not None:
        if lam <= 0.0:
            raise ScenarioError("shock inter-arrival mean must be positive")
        nz = replace(nz, lam=lam)
    out = replace(sc, controller=ctl, noise=nz)
    if seed is not None:
        out = replace(out, seed=seed)
    if T is not None:
        if T <= 0.0:
            raise ScenarioError("mission length T must be positive")
        out = replace(out, T=T)
    return out


# ---------------------------------------------------------------------------
# topology generation
# ---------------------------------------------------------------------------

def _connected(n: int, und: dict[int, set[int]]) -> bool:
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for w in und.get(v, ()):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def generate_scenario(topology: str, M: int, N: int = 1, seed: int = 0,
                      T: float = DEFAULT_T) -> Scenario:
    """Build a connected scenario with the benchmark-standard defaults.

    Topologies: ``line``, ``star``, ``grid`` and ``random-geometric``; all
    positions live in the standard square region and every edge is emitted
    in both directions.
    """
    if M < 1:
        raise ScenarioError("need at least one target")
    if N < 0:
        raise ScenarioError("agent count must be non-negative")
    if N > M:
        raise ScenarioError("auto placement needs M >= N")
    rng = np.random.default_rng(seed)
    pos: list[tuple[float, float]] = []
    pairs: list[tuple[int, int]] = []
    if topology == "line":
        for idx in range(M):
            pos.append((REGION * (idx + 1) / (M + 1), REGION / 2.0))
        pairs = [(idx, idx + 1) for idx in range(M - 1)]
    elif topology == "star":
        pos.append((REGION / 2.0, REGION / 2.0))
        for idx in range(1, M):
            ang = 2.0 * math.pi * (idx - 1) / max(M - 1, 1)
            pos.append((REGION / 2.0 + 200.0 * math.cos(ang),
                        REGION / 2.0 + 200.0 * math.sin(ang)))
        pairs = [(0, idx) for idx in range(1, M)]
    elif topology == "grid":
        cols = int(math.ceil(math.sqrt(M)))
        rows = int(math.ceil(M / cols))
        for idx in range(M):
            r, c = divmod(idx, cols)
            pos.append((REGION * (c + 1) / (cols + 1),
                        REGION * (r + 1) / (rows + 1)))
            if c > 0:
                pairs.append((idx - 1, idx))
            if r > 0:
                pairs.append((idx - cols, idx))
    elif topology == "random-geometric":
        pts = rng.uniform(0.05 * REGION, 0.95 * REGION, size=(M, 2))
        pos = [(float(p[0]), float(p[1])) for p in pts]
        radius = 0.3 * REGION
        while True:
            pairs = []
            und: dict[int, set[int]] = {v: set() for v in range(M)}
            for a in range(M):
                for b in range(a + 1, M):
                    d = math.hypot(pos[a][0] - pos[b][0],
                                   pos[a][1] - pos[b][1])
                    if d <= radius:
                        pairs.append((a, b))
                        und[a].add(b)
                        und[b].add(a)
            if M == 1 or _connected(M, und):
                break
            radius *= 1.25
    else:
        raise ScenarioError(f"unknown topology '{topology}'")
    targets = [{"id": idx, "position": list(pos[idx]), "A": DEFAULT_A,
                "B": DEFAULT_B, "R0": DEFAULT_R0} for idx in range(M)]
    edges = []
    for (a, b) in pairs:
        d = math.hypot(pos[a][0] - pos[b][0], pos[a][1] - pos[b][1])
        if d <= 0.0:
            d = 1.0  # coincident points would give a zero-length segment
        edges.append({"i": a, "j": b, "length": d, "V": DEFAULT_V})
        edges.append({"i": b, "j": a, "length": d, "V": DEFAULT_V})
    data = {
        "targets": targets,
        "edges": edges,
        "agents": [{"id": a, "start": "auto"} for a in range(N)],
        "T": T,
        "controller": {"type": "rhc", "H": T / 2.0, "alpha": None,
                       "beta": None},
        "noise": {"model": None, "m": 0.0, "lambda": 50.0, "radius": 20.0},
        "seed": seed,
    }
    return scenario_from_dict(data)
