from dataclasses import replace

import pytest

from pmnet.scenario import (NoiseConfig, generate_scenario,
                            scenario_from_dict)
from pmnet.simulator import (SimulationAbort, accumulate_objective, run,
                             Simulation, _Streams)

from oracles import dense_trajectory_integral


def minimal_scenario(targets, edges=(), agents=(), T=500.0, seed=0,
                     controller=None, noise=None):
    data = {
        "targets": targets,
        "edges": list(edges),
        "agents": list(agents),
        "T": T,
        "seed": seed,
    }
    if controller:
        data["controller"] = controller
    if noise:
        data["noise"] = noise
    return scenario_from_dict(data)


class TestZeroAgents:
    def test_single_target_closed_form(self):
        sc = minimal_scenario(
            [{"id": 0, "A": 1.0, "B": 10.0, "R0": 0.5}], T=500.0)
        res = run(sc)
        assert res.J_T == pytest.approx(250.5, rel=1e-12)

    def test_arbitrary_target_set(self, rng):
        targets = [{"id": i, "A": float(rng.uniform(0, 3)),
                    "B": float(rng.uniform(3.5, 9)),
                    "R0": float(rng.uniform(0, 4))} for i in range(6)]
        T = 123.0
        sc = minimal_scenario(targets, T=T)
        res = run(sc)
        expected = sum(t["R0"] * T + t["A"] * T * T / 2.0
                       for t in targets) / T
        assert res.J_T == pytest.approx(expected, rel=1e-12)


class TestDeterminism:
    def test_same_seed_identical(self):
        sc = generate_scenario("random-geometric", 7, 2, seed=3)
        r1, r2 = run(sc), run(sc)
        assert r1.J_T == r2.J_T
        assert r1.events == r2.events
        assert r1.visits == r2.visits

    def test_seed_changes_noisy_run(self):
        sc = generate_scenario("line", 4, 1, seed=2)
        sc = replace(sc, noise=NoiseConfig(model="speed", m=0.4))
        r1 = run(sc, seed=1)
        r2 = run(sc, seed=2)
        assert r1.J_T != r2.J_T


class TestAccounting:
    def test_accumulate_examples(self):
        assert accumulate_objective({0: [(0.0, 0.0, 0.0)]}, 10.0) == 0.0
        traj = {0: [(0.0, 0.5, 1.0)]}
        assert accumulate_objective(traj, 500.0) == pytest.approx(250.5)
        with pytest.raises(ValueError):
            accumulate_objective({0: [(5.0, 0.0, 0.0)]}, 10.0)

    def test_line_run_matches_dense_integration(self):
        sc = generate_scenario("line", 2, 1, seed=0)
        res = run(sc)
        total = sum(dense_trajectory_integral(res.trajectories[i], res.T)
                    for i in res.trajectories)
        assert res.J_T == pytest.approx(total / res.T, rel=1e-3)
        assert res.J_T == pytest.approx(res.recompute_objective(), rel=1e-9)

    def test_trajectory_continuity(self):
        sc = generate_scenario("random-geometric", 6, 2, seed=9)
        res = run(sc)
        for i, segs in res.trajectories.items():
            for k in range(1, len(segs)):
                t0, R0, rate = segs[k - 1]
                t1, R1, _ = segs[k]
                pred = max(R0 + rate * (t1 - t0), 0.0)
                assert R1 == pytest.approx(pred, abs=1e-9)

    def test_snapshots_consistent_with_trajectories(self):
        sc = generate_scenario("line", 3, 1, seed=4)
        res = run(sc)
        ids = sorted(res.trajectories)
        for ev in res.events:
            for idx, i in enumerate(ids):
                segs = [s for s in res.trajectories[i] if s[0] <= ev.time]
                if not segs:
                    continue
                t0, R0, rate = segs[-1]
                pred = max(R0 + rate * (ev.time - t0), 0.0)
                assert ev.R[idx] == pytest.approx(pred, abs=1e-9)


class TestEventProtocol:
    def test_event_times_nondecreasing(self):
        sc = generate_scenario("random-geometric", 8, 3, seed=11)
        res = run(sc)
        times = [ev.time for ev in res.events]
        assert times == sorted(times)

    def test_zero_crossing_snapshots_exactly_zero(self):
        sc = generate_scenario("line", 3, 1, seed=4)
        res = run(sc)
        ids = sorted(res.trajectories)
        crossings = [ev for ev in res.events if ev.kind == "zeroCrossing"]
        assert crossings
        for ev in crossings:
            assert ev.R[ids.index(ev.target)] == 0.0

    def test_dwell_end_is_crossing_or_planned(self):
        # noiseless runs end every active span either at the exact zero
        # crossing (idle phase follows) or at a planned departure with
        # positive uncertainty
        sc = generate_scenario("line", 3, 1, seed=4)
        res = run(sc)
        ids = sorted(res.trajectories)
        for ev in res.events:
            if ev.kind == "activeEnd":
                assert ev.R[ids.index(ev.target)] > 0.0

    def test_mutually_exclusive_agent_events(self):
        # per (instant, agent) the horizon events form at most the chain
        # activeEnd -> idleEnd (a zero idle plan collapses both onto one
        # timestamp); duplicates of a kind or a transitEnd alongside a
        # dwell-end event would mean two action horizons fired at once
        sc = generate_scenario("random-geometric", 8, 3, seed=11)
        res = run(sc)
        seen: dict = {}
        for ev in res.events:
            if ev.kind in ("activeEnd", "idleEnd", "transitEnd"):
                key = (ev.time, ev.agent)
                kinds = seen.setdefault(key, [])
                assert ev.kind not in kinds
                kinds.append(ev.kind)
        for kinds in seen.values():
            if len(kinds) > 1:
                assert kinds == ["activeEnd", "idleEnd"]


class TestCoverageProtocol:
    def scripted(self):
        # path 0 - 1 - 2 with agents parked at both ends; target 1 is the
        # only neighbor of each agent
        targets = [{"id": i, "position": [100.0 * i, 0.0]}
                   for i in range(3)]
        edges = [{"i": 0, "j": 1, "length": 100.0}, {"i": 1, "j": 0,
                                                     "length": 100.0},
                 {"i": 1, "j": 2, "length": 150.0}, {"i": 2, "j": 1,
                                                     "length": 150.0}]
        agents = [{"id": 0, "start": 0}, {"id": 1, "start": 2}]
        return minimal_scenario(targets, edges, agents, T=120.0)

    def test_no_simultaneous_claims(self):
        res = run(self.scripted())
        assert res.max_occupancy <= 1
        assert res.claim_overlaps() == []
        # both agents did eventually visit the middle target
        mid_visitors = {aid for aid, seq in res.visits.items()
                        if any(tgt == 1 for _, tgt in seq)}
        assert mid_visitors == {0, 1}

    def test_covering_events_emitted(self):
        res = run(self.scripted())
        kinds = {ev.kind for ev in res.events}
        assert "covering" in kinds and "uncovering" in kinds
        cov = [ev for ev in res.events if ev.kind == "covering"
               and ev.target == 1]
        unc = [ev for ev in res.events if ev.kind == "uncovering"
               and ev.target == 1]
        assert cov and unc

    def test_multi_agent_no_sharing(self):
        for seed in (0, 1, 2):
            sc = generate_scenario("random-geometric", 8, 3, seed=seed)
            res = run(sc)
            assert res.max_occupancy <= 1
            assert res.claim_overlaps() == []


class TestNoiseModels:
    def base(self, model, m, T=60.0, seed=5, lam=None):
        sc = generate_scenario("random-geometric", 5, 2, seed=3, T=T)
        noise = {"model": model, "m": m}
        if lam is not None:
            noise["lambda"] = lam
        data_noise = NoiseConfig(model=model, m=m,
                                 lam=lam if lam else 50.0)
        return replace(sc, noise=data_noise, seed=seed)

    def test_zero_magnitude_matches_noiseless(self):
        for model in ("growth-rate", "speed", "state-shock", "channel",
                      "location"):
            sc = self.base(model, 0.0)
            clean = replace(sc, noise=NoiseConfig(model=None))
            r_noise = run(sc)
            r_clean = run(clean)
            assert r_noise.J_T == r_clean.J_T, model
            assert len(r_noise.events) == len(r_clean.events), model

    def test_growth_rate_noise_changes_outcome(self):
        sc = self.base("growth-rate", 0.5)
        clean = replace(sc, noise=NoiseConfig(model=None))
        assert run(sc).J_T != run(clean).J_T

    def test_speed_noise_durations_match_stream(self):
        sc = self.base("speed", 0.4)
        res = run(sc)
        lengths = {(e.i, e.j): e.length for e in sc.edges}
        speeds = {(e.i, e.j): e.V for e in sc.edges}
        # reconstruct each agent's transit durations from its claim spans
        for aid in sorted(res.visits):
            seq = res.visits[aid]
            if len(seq) < 2:
                continue
            rng = _Streams(res.seed).get("speed", aid)
            for k in range(1, len(seq)):
                arrive_t, tgt = seq[k]
                frm = seq[k - 1][1]
                claim = [c for c in res.claims[tgt]
                         if c[2] == aid and abs(c[1] - arrive_t) > -1.0
                         and c[0] < arrive_t <= c[1] + 1e-9]
                claim = [c for c in claim if c[0] <= arrive_t]
                assert claim
                depart_t = max(c[0] for c in claim)
                factor = rng.uniform(0.6, 1.4)
                expected = lengths[(frm, tgt)] / (speeds[(frm, tgt)]
                                                  * factor)
                assert arrive_t - depart_t == pytest.approx(expected,
                                                            rel=1e-12)

    def test_state_shocks_clamp_at_zero(self):
        targets = [{"id": 0, "A": 0.0, "B": 1.0, "R0": 0.1}]
        sc = minimal_scenario(targets, T=400.0, seed=7,
                              noise={"model": "state-shock", "m": 5.0,
                                     "lambda": 20.0})
        res = run(sc)
        shocks = [ev for ev in res.events if ev.kind == "noiseShock"]
        assert shocks
        assert all(ev.R[0] >= 0.0 for ev in res.events)
        assert any(ev.R[0] == 0.0 for ev in shocks)  # a clamp happened

    def test_channel_noise_keeps_true_dynamics_exact(self):
        sc = self.base("channel", 3.0)
        res = run(sc)
        A = {t.id: t.A for t in sc.graph.targets}
        B = {t.id: t.B for t in sc.graph.targets}
        for i, segs in res.trajectories.items():
            for (_, _, rate) in segs:
                ok = (rate == pytest.approx(A[i], abs=1e-12)
                      or rate == pytest.approx(A[i] - B[i], abs=1e-12)
                      or rate == 0.0)
                assert ok, (i, rate)

    def test_location_noise_runs_and_differs(self):
        sc = generate_scenario("line", 3, 1, seed=3, T=12.0)
        noisy = replace(sc, noise=NoiseConfig(model="location", m=30.0,
                                              radius=20.0))
        r_clean = run(sc)
        r_noisy = run(noisy)
        assert r_noisy.J_T != r_clean.J_T
        assert r_noisy.event_count > 0


class TestControllers:
    def test_all_controllers_complete(self):
        sc = generate_scenario("random-geometric", 6, 2, seed=8, T=120.0)
        costs = {}
        for ctype in ("rhc", "rhc_alpha", "ex_rhc_alpha_beta",
                      "denominator_free", "periodic_baseline"):
            sc2 = replace(sc, controller=replace(sc.controller, type=ctype))
            res = run(sc2)
            costs[ctype] = res.J_T
            assert res.max_occupancy <= 1
            assert res.claim_overlaps() == []
        assert costs["rhc"] < costs["periodic_baseline"] * 5

    def test_denominator_free_oscillates_on_line(self):
        # three targets in a row with distinct transit times: after the
        # first decision the nearest-neighbor rule ping-pongs between the
        # current target and its closest neighbor, never covering the rest
        targets = [{"id": i, "position": [0.0, 0.0]} for i in range(3)]
        edges = [{"i": 0, "j": 1, "rho": 2.0}, {"i": 1, "j": 0, "rho": 2.0},
                 {"i": 1, "j": 2, "rho": 3.0}, {"i": 2, "j": 1, "rho": 3.0}]
        agents = [{"id": 0, "start": 1}]
        sc = minimal_scenario(targets, edges, agents, T=500.0,
                              controller={"type": "denominator_free"})
        res = run(sc)
        seq = [tgt for _, tgt in res.visits[0]]
        assert len(seq) > 10
        assert set(seq[1:]) == {0, 1}  # target 2 is never visited

    def test_alpha_controller_uses_nominal_when_unset(self):
        sc = generate_scenario("star", 5, 1, seed=1, T=80.0)
        sc = replace(sc, controller=replace(sc.controller,
                                            type="rhc_alpha"))
        res = run(sc)
        assert res.event_count > 0


class TestDynamicsProtocol:
    def test_rate_transitions_follow_the_dwell_cycle(self):
        # without noise a target's rate only moves along the cycle
        # grow -> drain (arrival), drain -> clamp (crossing),
        # drain -> grow (early departure), clamp -> grow (departure)
        sc = generate_scenario("random-geometric", 6, 2, seed=12)
        res = run(sc)
        A = {t.id: t.A for t in sc.graph.targets}
        B = {t.id: t.B for t in sc.graph.targets}
        for i, segs in res.trajectories.items():
            rates = []
            for (_, _, rate) in segs:
                if not rates or rates[-1] != rate:
                    rates.append(rate)
            grow, drain = A[i], A[i] - B[i]
            allowed = {(grow, drain), (drain, 0.0), (drain, grow),
                       (0.0, grow)}
            for k in range(1, len(rates)):
                assert (rates[k - 1], rates[k]) in allowed, (
                    i, rates[k - 1], rates[k])

    def test_update_coverage_is_an_involution(self):
        sc = generate_scenario("line", 3, 1, seed=0)
        sim = Simulation(sc)
        before = sim._covered_for(99)
        sim.update_coverage(1, 7, True)
        assert 1 in sim._covered_for(99)
        sim.update_coverage(1, 7, False)
        assert sim._covered_for(99) == before
        kinds = [e[5] for e in sim.heap]
        assert "covering" in kinds and "uncovering" in kinds

    def test_left_endpoint_crossing_snaps(self):
        from pmnet.model import TargetState, evolve_target
        st = TargetState(R=5e-13, Rdot=0.0, t=2.0)
        nxt, crossing = evolve_target(st, 1.0, 10.0, 1, 1.0)
        assert crossing == 2.0  # snapped to the interval start
        assert nxt.R == 0.0


class TestGuards:
    def test_zeno_guard_message(self):
        sc = generate_scenario("line", 3, 1, seed=0, T=30.0)
        sim = Simulation(sc)
        import pmnet.simulator as S
        orig = S.MAX_EVENTS
        S.MAX_EVENTS = 5
        try:
            with pytest.raises(SimulationAbort):
                sim.run()
        finally:
            S.MAX_EVENTS = orig
