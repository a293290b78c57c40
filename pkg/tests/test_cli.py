import json
import subprocess
import sys

import pytest

from pmnet.cli import main
from pmnet.sweep import run_sweep
from pmnet.scenario import ScenarioError, parse_scenario, generate_scenario


@pytest.fixture()
def line3(tmp_path):
    path = tmp_path / "line3.json"
    rc = main(["generate", "--topology", "line", "--M", "3", "--N", "1",
               "--seed", "0", "--out", str(path)])
    assert rc == 0
    return path


class TestRunCommand:
    def test_outputs_and_exit_code(self, line3, tmp_path, capsys):
        out = tmp_path / "out"
        rc = main(["run", "--scenario", str(line3), "--out", str(out)])
        assert rc == 0
        assert (out / "trace.csv").exists()
        result = json.loads((out / "result.json").read_text())
        assert result["J_T"] > 0
        assert result["controller"] == "rhc"
        msg = capsys.readouterr().out
        assert "J_T" in msg

    def test_zero_agent_closed_form(self, tmp_path):
        sc = tmp_path / "empty.json"
        sc.write_text(json.dumps({
            "targets": [{"id": 0, "A": 1.0, "B": 10.0, "R0": 0.5}],
            "T": 500.0}))
        out = tmp_path / "o"
        assert main(["run", "--scenario", str(sc), "--out", str(out)]) == 0
        result = json.loads((out / "result.json").read_text())
        assert result["J_T"] == pytest.approx(250.5, rel=1e-12)

    def test_trace_is_time_ordered_and_matches_log(self, line3, tmp_path):
        out = tmp_path / "out"
        main(["run", "--scenario", str(line3), "--out", str(out)])
        lines = (out / "trace.csv").read_text().strip().split("\n")
        header = lines[0].split(",")
        assert header[:4] == ["time", "kind", "agent", "target"]
        assert header[4:] == ["R_0", "R_1", "R_2"]
        times = [float(row.split(",")[0]) for row in lines[1:]]
        assert times == sorted(times)
        from pmnet.simulator import run as sim_run
        res = sim_run(parse_scenario(line3))
        assert len(lines) - 1 == len(res.events)
        for row, ev in zip(lines[1:], res.events):
            cols = row.split(",")
            assert float(cols[0]) == ev.time
            assert cols[1] == ev.kind

    def test_byte_identical_across_processes(self, line3, tmp_path):
        outs = []
        for name in ("a", "b"):
            out = tmp_path / name
            cmd = [sys.executable, "-m", "pmnet.cli", "run", "--scenario",
                   str(line3), "--out", str(out)]
            proc = subprocess.run(cmd, capture_output=True, text=True)
            assert proc.returncode == 0, proc.stderr
            outs.append((out / "trace.csv").read_bytes())
        assert outs[0] == outs[1]

    def test_invalid_scenario_exit_1(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"targets": [{"id": 0, "A": 12.0,
                                                "B": 10.0}]}))
        rc = main(["run", "--scenario", str(bad), "--out",
                   str(tmp_path / "o")])
        assert rc == 1
        assert "invalid input" in capsys.readouterr().err

    def test_env_var_default_out_dir(self, line3, tmp_path, monkeypatch):
        monkeypatch.setenv("PMNET_OUT_DIR", str(tmp_path / "envout"))
        assert main(["run", "--scenario", str(line3)]) == 0
        assert (tmp_path / "envout" / "trace.csv").exists()


class TestSweepCommand:
    def test_h_sweep_report_shape(self, line3, tmp_path, capsys):
        out = tmp_path / "sw"
        rc = main(["sweep", "--scenario", str(line3), "--axis", "H",
                   "--grid", "10,50,250", "--seeds", "2", "--parallel", "1",
                   "--out", str(out)])
        assert rc == 0
        report = json.loads((out / "sweep_H.json").read_text())
        assert [p["value"] for p in report["points"]] == [10.0, 50.0, 250.0]
        assert "ratio_default_to_best" in report
        assert report["argmin"]["value"] in (10.0, 50.0, 250.0)
        assert "J_T(H=T/2)" in capsys.readouterr().out

    def test_statistics_recomputable_from_runs(self, line3, tmp_path):
        out = tmp_path / "sw"
        main(["sweep", "--scenario", str(line3), "--axis", "noise-m",
              "--grid", "0.1,0.3", "--seeds", "4", "--noise", "speed",
              "--parallel", "1", "--out", str(out)])
        report = json.loads((out / "sweep_noise_m.json").read_text())
        for point in report["points"]:
            vals = [r["J_T"] for r in report["runs"]
                    if r["value"] == point["value"]]
            assert len(vals) == point["count"] == 4
            mean = sum(vals) / len(vals)
            var = sum((v - mean) ** 2 for v in vals) / (len(vals) - 1)
            assert point["mean"] == pytest.approx(mean, rel=1e-12)
            assert point["variance"] == pytest.approx(var, rel=1e-12)

    def test_alpha_sweep_flags_nominal(self, tmp_path):
        path = tmp_path / "star.json"
        main(["generate", "--topology", "star", "--M", "4", "--N", "1",
              "--seed", "0", "--out", str(path)])
        sc = parse_scenario(path)
        report = run_sweep(sc, "alpha", [0.0, 1.0 / 16.0, 0.25, 0.3], [0],
                           parallel=1)
        flags = {p["value"]: p["nominal"] for p in report["points"]}
        # hub: |closed neighborhood| = 4 -> 1/16; leaves: size 2 -> 1/4
        assert flags[1.0 / 16.0] is True
        assert flags[0.25] is True
        assert flags[0.3] is False

    def test_noise_sweep_requires_model(self, line3):
        sc = parse_scenario(line3)
        with pytest.raises(ScenarioError, match="noise model"):
            run_sweep(sc, "noise-m", [0.1], [0], parallel=1)

    def test_invalid_axis_rejected(self, line3):
        sc = parse_scenario(line3)
        with pytest.raises(ScenarioError, match="axis"):
            run_sweep(sc, "gamma", [0.1], [0], parallel=1)

    def test_parallel_matches_serial(self, line3):
        sc = parse_scenario(line3)
        a = run_sweep(sc, "H", [20.0, 100.0], [0, 1], parallel=1)
        b = run_sweep(sc, "H", [20.0, 100.0], [0, 1], parallel=2)
        assert a["points"] == b["points"]
        assert a["runs"] == b["runs"]


class TestExitCodes:
    def test_usage_errors_exit_1(self, tmp_path):
        for argv in (["run"], ["bogus"], ["sweep", "--scenario", "x"]):
            proc = subprocess.run([sys.executable, "-m", "pmnet.cli"]
                                  + argv, capture_output=True)
            assert proc.returncode == 1, argv

    def test_simulation_abort_exits_2(self, line3, tmp_path):
        code = ("import pmnet.simulator as S; S.MAX_EVENTS = 3; "
                "from pmnet.cli import main; import sys; "
                f"sys.exit(main(['run', '--scenario', r'{line3}', "
                f"'--out', r'{tmp_path}']))")
        proc = subprocess.run([sys.executable, "-c", code],
                              capture_output=True, text=True)
        assert proc.returncode == 2
        assert "aborted" in proc.stderr


class TestOtherCommands:
    def test_validate_ok(self, line3, capsys):
        assert main(["validate", "--scenario", str(line3)]) == 0
        assert "ok:" in capsys.readouterr().out

    def test_validate_rejects(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{}")
        assert main(["validate", "--scenario", str(bad)]) == 1

    def test_generate_round_trips(self, tmp_path):
        path = tmp_path / "rg.json"
        assert main(["generate", "--topology", "random-geometric", "--M",
                     "8", "--N", "2", "--seed", "3", "--out",
                     str(path)]) == 0
        sc = parse_scenario(path)
        assert len(sc.graph.targets) == 8
        assert sc == generate_scenario("random-geometric", 8, 2, seed=3)
