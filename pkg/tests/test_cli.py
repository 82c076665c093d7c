import json

import pytest

from ratsys import ParseError, UnknownPresetError, load_scenario, save_scenario
from ratsys.cli import main
from ratsys.scenarios import PRESETS, Scenario, scenario_from_dict

EXPECTED_PRESETS = {
    "example1": (2.0, 0.6, 0.9, (2.5, 6.0, 2.0), (4.0, 2.0, 5.0)),
    "example2": (1.3, 0.9, 0.8, (2.6, 1.8, 3.0), (3.0, 5.0, 1.0)),
    "example3": (0.6, 0.8, 1.9, (1.6, 2.8, 4.0), (4.0, 1.5, 6.0)),
    "example4": (0.3, 1.2, 1.5, (6.0, 8.0, 3.0), (3.0, 5.0, 1.0)),
}


class TestScenarios:
    def test_preset_fidelity(self):
        for name, (alpha, p, q, x, y) in EXPECTED_PRESETS.items():
            sc = PRESETS[name]
            assert (sc.params.alpha, sc.params.p, sc.params.q) == (alpha, p, q)
            assert sc.init.x == x and sc.init.y == y
            assert sc.n_steps == 500 and sc.cap == 1e12

    def test_load_by_preset_name(self):
        assert load_scenario("example1") == PRESETS["example1"]

    def test_unknown_preset(self):
        with pytest.raises(UnknownPresetError):
            load_scenario("example9")

    def test_round_trip(self, tmp_path):
        path = tmp_path / "scenario.json"
        save_scenario(PRESETS["example2"], path)
        assert load_scenario(path) == PRESETS["example2"]

    def test_parse_error_names_field(self, tmp_path):
        data = {"alpha": 2.0, "p": -1.0, "q": 0.9,
                "x_init": [1, 2, 3], "y_init": [1, 2, 3]}
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(data))
        with pytest.raises(ParseError) as err:
            load_scenario(path)
        assert err.value.field == "p"

    def test_missing_key_reported(self):
        with pytest.raises(ParseError) as err:
            scenario_from_dict({"alpha": 2.0, "p": 0.5, "q": 0.5,
                                "x_init": [1, 2, 3]})
        assert err.value.field == "y_init"

    def test_invalid_json_position_reported(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{"alpha": 2.0,\n "p": }')
        with pytest.raises(ParseError) as err:
            load_scenario(path)
        assert "line 2" in str(err.value)

    def test_n_steps_floor(self):
        with pytest.raises(ValueError):
            Scenario(params=PRESETS["example1"].params,
                     init=PRESETS["example1"].init, n_steps=5)


class TestSimulateCommand:
    def test_csv_body_and_summary(self, tmp_path, capsys):
        out = tmp_path / "orbit.csv"
        assert main(["simulate", "--preset", "example1", "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "n,x,y"
        assert lines[1] == "-2,2.5,4.0"
        assert lines[4].startswith("1,3.1432626298183157,2.8180521460508583")
        assert len(lines) == 1 + 503
        err = capsys.readouterr().err
        assert "converged: yes" in err

    def test_byte_determinism(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["simulate", "--preset", "example2", "--out", str(a)])
        main(["simulate", "--preset", "example2", "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_equilibrium_seeded_constant_rows(self, tmp_path):
        cfg = tmp_path / "eq.json"
        cfg.write_text(json.dumps({
            "alpha": 2.0, "p": 0.6, "q": 0.9, "n_steps": 50,
            "x_init": [3.0, 3.0, 3.0], "y_init": [3.0, 3.0, 3.0]}))
        out = tmp_path / "eq.csv"
        assert main(["simulate", "--config", str(cfg), "--out", str(out)]) == 0
        rows = out.read_text().splitlines()[1:]
        assert all(r.split(",")[1:] == ["3.0", "3.0"] for r in rows)

    def test_unknown_preset_exit_code(self, capsys):
        assert main(["simulate", "--config", "nope_not_a_preset"]) == 2
        assert "unknown preset" in capsys.readouterr().err


class TestAnalyzeCommand:
    def test_equilibrium_scenario_single_open_cycles(self, tmp_path, capsys):
        cfg = tmp_path / "eq.json"
        cfg.write_text(json.dumps({
            "alpha": 2.0, "p": 0.6, "q": 0.9, "n_steps": 40,
            "x_init": [3.0, 3.0, 3.0], "y_init": [3.0, 3.0, 3.0]}))
        assert main(["analyze", "--config", str(cfg), "--format", "csv"]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[0] == "component,sign,start,length"
        body = [line.split(",") for line in out[1:]]
        for component in ("x", "y"):
            rows = [r for r in body if r[0] == component]
            assert rows == [[component, "positive", "-2", "open"]]

    def test_example1_rule_holds(self, capsys):
        assert main(["analyze", "--preset", "example1"]) == 0
        text = capsys.readouterr().out
        assert "semi-cycle length rule: holds" in text

    def test_example3_smoke(self, capsys):
        assert main(["analyze", "--preset", "example3"]) == 0
        assert "oscillation:" in capsys.readouterr().out


class TestBoundsCommand:
    def test_example1_clean(self, capsys):
        assert main(["bounds", "--preset", "example1"]) == 0
        text = capsys.readouterr().out
        assert "violations: 0" in text

    def test_alpha_below_one_is_usage_error(self, capsys):
        assert main(["bounds", "--preset", "example3"]) == 2


class TestStabilityCommand:
    def test_example1_classification(self, capsys):
        assert main(["stability", "--preset", "example1"]) == 0
        text = capsys.readouterr().out
        assert "classification: globally-asymptotically-stable" in text
        assert "global conditions (alpha > 1 and 0 < p, q <= 1): met" in text

    def test_example3_reports_violated_conditions(self, capsys):
        assert main(["stability", "--preset", "example3"]) == 0
        text = capsys.readouterr().out
        assert "global conditions (alpha > 1 and 0 < p, q <= 1): violated" in text
        assert "classification: unstable" in text
        assert "certificate refused" in text

    def test_explicit_params_csv(self, capsys):
        assert main(["stability", "--alpha", "1.5", "--p", "0.5", "--q", "0.5",
                     "--format", "csv"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "alpha,p,q,spectral_radius,classification"
        fields = lines[1].split(",")
        assert fields[:3] == ["1.5", "0.5", "0.5"]
        assert float(fields[3]) < 1.0
        assert fields[4] == "globally-asymptotically-stable"

    def test_partial_explicit_params_rejected(self, capsys):
        assert main(["stability", "--alpha", "1.5"]) == 2


class TestRateCommand:
    def test_example1_gap(self, capsys):
        assert main(["rate", "--preset", "example1"]) == 0
        text = capsys.readouterr().out
        gap = float(next(l for l in text.splitlines() if l.startswith("gap:")).split()[1])
        assert gap < 1e-3

    def test_example4_insufficient_data(self, capsys):
        assert main(["rate", "--preset", "example4"]) == 4
        assert "did not converge" in capsys.readouterr().err

    def test_synthetic_geometric_orbit_file(self, tmp_path, capsys):
        # x and y decay toward the fixed point at exact ratio 0.5; the
        # norm floor leaves ~43 usable entries, so the window must fit
        rows = ["n,x,y"]
        for i in range(60):
            n = i - 2
            dev = 0.5 ** (n + 3)
            rows.append(f"{n},{3.0 + dev!r},{3.0 + dev!r}")
        path = tmp_path / "orbit.csv"
        path.write_text("\n".join(rows) + "\n")
        assert main(["rate", "--preset", "example1", "--orbit", str(path),
                     "--window", "30", "--burn-in", "10"]) == 0
        text = capsys.readouterr().out
        assert "ratio estimate: 0.5\n" in text

    def test_orbit_file_bad_header(self, tmp_path, capsys):
        path = tmp_path / "orbit.csv"
        path.write_text("a,b,c\n1,2,3\n")
        assert main(["rate", "--preset", "example1", "--orbit", str(path)]) == 2


class TestSweepCommand:
    def test_grid_all_stable(self, tmp_path, capsys):
        cfg = tmp_path / "sweep.json"
        cfg.write_text(json.dumps({
            "alpha": [1.1, 3.0, 5], "p": [0.1, 1.0, 5], "q": [0.1, 1.0, 5]}))
        assert main(["sweep", "--config", str(cfg)]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "alpha,p,q,spectral_radius,classification"
        assert len(lines) == 1 + 125
        for line in lines[1:]:
            fields = line.split(",")
            assert float(fields[3]) < 1.0
            assert fields[4] == "globally-asymptotically-stable"

    def test_row_order_alpha_outer_q_inner(self, tmp_path, capsys):
        cfg = tmp_path / "sweep.json"
        cfg.write_text(json.dumps({
            "alpha": [1.5, 2.0, 2], "p": [0.4, 0.6, 2], "q": [0.3, 0.9, 2]}))
        main(["sweep", "--config", str(cfg)])
        rows = [l.split(",")[:3] for l in capsys.readouterr().out.splitlines()[1:]]
        assert rows == [
            ["1.5", "0.4", "0.3"], ["1.5", "0.4", "0.9"],
            ["1.5", "0.6", "0.3"], ["1.5", "0.6", "0.9"],
            ["2.0", "0.4", "0.3"], ["2.0", "0.4", "0.9"],
            ["2.0", "0.6", "0.3"], ["2.0", "0.6", "0.9"],
        ]

    def test_single_node_matches_stability(self, tmp_path, capsys):
        cfg = tmp_path / "single.json"
        cfg.write_text(json.dumps({
            "alpha": [2.0, 2.0, 1], "p": [0.6, 0.6, 1], "q": [0.9, 0.9, 1]}))
        main(["sweep", "--config", str(cfg)])
        sweep_row = capsys.readouterr().out.splitlines()[1]
        main(["stability", "--preset", "example1", "--format", "csv"])
        stab_row = capsys.readouterr().out.splitlines()[1]
        assert sweep_row == stab_row

    def test_invalid_range_rejected_before_work(self, tmp_path, capsys):
        cfg = tmp_path / "bad.json"
        cfg.write_text(json.dumps({
            "alpha": [3.0, 1.0, 5], "p": [0.1, 1.0, 5], "q": [0.1, 1.0, 5]}))
        assert main(["sweep", "--config", str(cfg)]) == 2
        assert "alpha" in capsys.readouterr().err

    def test_optional_node_simulation_column(self, tmp_path, capsys):
        cfg = tmp_path / "sim.json"
        cfg.write_text(json.dumps({
            "alpha": [2.0, 2.0, 1], "p": [0.6, 0.6, 1], "q": [0.9, 0.9, 1],
            "simulate": {"n_steps": 300, "x_init": [2.5, 6.0, 2.0],
                         "y_init": [4.0, 2.0, 5.0]}}))
        main(["sweep", "--config", str(cfg)])
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].endswith(",converged")
        assert lines[1].endswith(",yes")
