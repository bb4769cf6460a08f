import json
from importlib import resources

import jsonschema
import pytest

from qkdnet.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def load_schema(name):
    path = resources.files("qkdnet.schemas").joinpath(name)
    return json.loads(path.read_text())


def test_analyze_spot_value(capsys):
    code, out, _ = run_cli(
        capsys, "analyze", "--n", "20", "--c", "3",
        "--eps-auth", "1e-3", "--eps-qkd", "1e-3",
    )
    assert code == 0
    payload = json.loads(out)
    jsonschema.validate(payload, load_schema("analyze.schema.json"))
    assert payload["eps_qn"] == pytest.approx(1.8e-8, rel=1e-9)


def test_analyze_zero(capsys):
    code, out, _ = run_cli(
        capsys, "analyze", "--n", "20", "--c", "3",
        "--eps-auth", "0", "--eps-qkd", "0",
    )
    assert code == 0
    assert json.loads(out)["eps_qn"] == 0.0


def test_analyze_validation_error(capsys):
    code, out, err = run_cli(
        capsys, "analyze", "--n", "20", "--c", "25",
        "--eps-auth", "1e-3", "--eps-qkd", "1e-3",
    )
    assert code == 2
    assert "density" in err


def test_analyze_exact_mode_cap(capsys):
    code, _, err = run_cli(
        capsys, "analyze", "--n", "20", "--c", "3", "--mode", "exact",
        "--eps-auth", "1e-3", "--eps-qkd", "1e-3",
    )
    assert code == 3  # 54 edges exceed the default exact cap
    code, out, _ = run_cli(
        capsys, "analyze", "--n", "20", "--c", "3", "--mode", "exact",
        "--eps-auth", "1e-3", "--eps-qkd", "1e-3", "--edge-cap", "60",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["eps1_exact"] == pytest.approx(1.6e-8, rel=0.01)


def test_sweep_two_points(capsys):
    code, out, _ = run_cli(
        capsys, "sweep", "--param", "p", "--start", "0.01", "--stop", "0.1",
        "--points", "2", "--n", "20", "--c", "3",
    )
    assert code == 0
    lines = out.strip().split("\n")
    assert len(lines) == 3
    assert lines[0] == "p,p_s_exact,p_s_approx,regime_valid"


def test_sweep_fig5_shape(capsys):
    code, out, _ = run_cli(
        capsys, "sweep", "--param", "p", "--start", "1e-3", "--stop", "1",
        "--points", "13", "--spacing", "log", "--n", "20", "--c", "3",
    )
    assert code == 0
    rows = [line.split(",") for line in out.strip().split("\n")[1:]]
    exact = [float(r[1]) for r in rows]
    approx = [float(r[2]) for r in rows]
    assert exact[0] == pytest.approx(approx[0], rel=0.02)  # small-p agreement
    assert exact[-1] > 0.99  # exact saturates near 1


def test_sweep_c_monotone(capsys):
    code, out, _ = run_cli(
        capsys, "sweep", "--param", "c", "--start", "1", "--stop", "5",
        "--points", "5", "--n", "20", "--p", "0.1",
    )
    assert code == 0
    exact = [float(line.split(",")[1]) for line in out.strip().split("\n")[1:]]
    assert all(a >= b - 1e-15 for a, b in zip(exact, exact[1:]))


def test_sweep_invalid_spec(capsys):
    code, _, err = run_cli(
        capsys, "sweep", "--param", "p", "--start", "0.5", "--stop", "0.1",
        "--points", "5",
    )
    assert code == 2


def test_routes_count_only(capsys):
    code, out, _ = run_cli(capsys, "routes", "--n", "6", "--c", "2")
    assert code == 0
    payload = json.loads(out)
    jsonschema.validate(payload, load_schema("routes.schema.json"))
    assert payload["count"] == "8"


def test_routes_big_count_and_cap(capsys):
    code, out, _ = run_cli(capsys, "routes", "--n", "200", "--c", "3")
    assert code == 0
    assert int(json.loads(out)["count"]) > 1 << 20
    code, _, err = run_cli(capsys, "routes", "--n", "200", "--c", "3", "--enumerate")
    assert code == 3


def test_routes_enumerate_serial(capsys):
    code, out, _ = run_cli(capsys, "routes", "--n", "3", "--c", "1", "--enumerate")
    assert code == 0
    payload = json.loads(out)
    jsonschema.validate(payload, load_schema("routes.schema.json"))
    assert payload["routes"] == [[1, 2, 3]]


def test_routes_scheme_and_edges(capsys):
    code, out, _ = run_cli(capsys, "routes", "--n", "6", "--c", "2", "--scheme")
    assert code == 0
    payload = json.loads(out)
    jsonschema.validate(payload, load_schema("routes.schema.json"))
    assert sorted(payload["scheme"]["1-2"] + payload["scheme"]["1-3"]) == list(range(1, 9))

    code, out, _ = run_cli(capsys, "routes", "--n", "6", "--c", "2", "--edges")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "from,to"
    assert len(lines) == 10
    assert lines[1] == "1,2"


def test_simulate_deterministic(capsys):
    args = ["simulate", "--n", "10", "--c", "2", "--p-node", "0.3",
            "--p-link", "0.1", "--trials", "2000", "--seed", "7"]
    code1, out1, _ = run_cli(capsys, *args)
    code2, out2, _ = run_cli(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2
    payload = json.loads(out1)
    jsonschema.validate(payload, load_schema("simulate.schema.json"))


def test_simulate_certain_attack(capsys):
    code, out, _ = run_cli(
        capsys, "simulate", "--n", "10", "--c", "2", "--p-node", "1",
        "--trials", "100", "--seed", "1",
    )
    assert code == 0
    assert json.loads(out)["estimate_auth"] == 1.0


def test_simulate_progress_csv(capsys, tmp_path):
    target = tmp_path / "progress.csv"
    code, _, _ = run_cli(
        capsys, "simulate", "--n", "10", "--c", "2", "--p-node", "0.3",
        "--trials", "1000", "--seed", "3", "--progress-csv", str(target),
    )
    assert code == 0
    lines = target.read_text().strip().split("\n")
    assert lines[0] == "trials,estimate_auth,estimate_link"
    assert lines[-1].startswith("1000,")


def test_optimize_c(capsys):
    code, out, _ = run_cli(capsys, "optimize-c", "--n", "20")
    assert code == 0
    payload = json.loads(out)
    jsonschema.validate(payload, load_schema("optimize_c.schema.json"))
    assert 12 < payload["c_root"] < 13

    code, _, err = run_cli(capsys, "optimize-c", "--n", "4")
    assert code == 2


def test_optimize_c_factor_baseline(capsys):
    code, out, _ = run_cli(capsys, "optimize-c", "--n", "6")
    assert code == 0
    payload = json.loads(out)
    assert payload["factor"] >= 1.0


def test_demo_protocol(capsys, tmp_path):
    target = tmp_path / "transcript.json"
    args = ["demo-protocol", "--n", "6", "--c", "2", "--seed", "5",
            "--json-out", str(target)]
    code1, out1, _ = run_cli(capsys, *args)
    code2, out2, _ = run_cli(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2  # deterministic given the seed
    assert out1.count("message ") == 9
    assert "PASS" in out1
    transcript = json.loads(target.read_text())
    assert len(transcript["messages"]) == 9


def test_demo_protocol_serial(capsys):
    code, out, _ = run_cli(capsys, "demo-protocol", "--n", "3", "--c", "1")
    assert code == 0
    assert out.count("message ") == 2
    assert "PASS" in out


def test_demo_protocol_corrupt(capsys):
    code, out, _ = run_cli(
        capsys, "demo-protocol", "--n", "6", "--c", "2", "--corrupt"
    )
    assert code == 4
    assert "FAIL" in out
