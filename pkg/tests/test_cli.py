import json

import pytest

from relaxwave.cli import main
from relaxwave.errors import ConfigError
from relaxwave.io import RunConfig, build_config, parse_config_text, read_csv, snapshot_name


def run(argv, capsys=None):
    code = main([str(a) for a in argv])
    err = capsys.readouterr().err if capsys else ""
    return code, err


def test_config_text_with_comments():
    values = parse_config_text("# demo\na = 2\nb = 1  # drift\nf = sin(pi*x)\noutput_times = 0.1, 0.2\n")
    assert values == {"a": 2.0, "b": 1.0, "f": "sin(pi*x)", "output_times": (0.1, 0.2)}


@pytest.mark.parametrize("text", ["alpha = 1\n", "a 1\n", "n_max = many\n"])
def test_config_rejects(text):
    with pytest.raises(ConfigError):
        parse_config_text(text)


def test_flags_override_file():
    cfg = build_config({"a": 2.0, "epsilon": 0.5}, {"epsilon": 0.1})
    assert cfg.a == 2.0 and cfg.epsilon == 0.1
    assert cfg.times() == (cfg.t_max,)


def test_config_text_round_trip():
    cfg = RunConfig(a=2.0, f="sin(pi*x)", output_times=(0.1, 0.5), eps_list=(0.01,))
    assert build_config(parse_config_text(cfg.to_text()), {}) == cfg


def test_snapshot_name():
    assert snapshot_name("u", 0.1) == "u_t0.100000.csv"


def test_compare_reports_small_difference(tmp_path, capsys):
    code = main(["compare", "--a", "1", "--b", "0", "--epsilon", "0.1", "--f", "sin(pi*x)",
                 "--gprime", "0", "--t-max", "1", "--out", str(tmp_path)])
    out = capsys.readouterr().out
    assert code == 0
    l2 = float(out.strip().split("l2_diff=")[1])
    assert l2 < 1e-3
    header, rows = read_csv(tmp_path / "compare_summary.csv")
    assert header == ["t", "l2_diff"] and len(rows) == 1


def test_empty_expression_writes_nothing(tmp_path, capsys):
    out = tmp_path / "never"
    code, err = run(["solve", "--f", "", "--out", out], capsys)
    assert code == 2
    assert err.startswith("error syntax exprparse ")
    assert len(err.strip().splitlines()) == 1
    assert not out.exists()


@pytest.mark.parametrize("argv, status, code", [
    (["solve", "--a", "1", "--b", "1", "--f", "sin(pi*x)"], 2, "subcharacteristic"),
    (["solve", "--f", "cos(pi*x)"], 2, "compatibility"),
    (["reference", "--f", "sin(pi*x)", "--cfl", "1.5"], 2, "cfl"),
    (["energy", "--f", "sin(pi*x)", "--epsilon", "0.3"], 4, "hypothesis"),
    (["layer", "--f", "sin(pi*x)", "--b", "0"], 4, "wrong-sign"),
    (["sweep", "--f", "sin(pi*x)"], 2, "config"),
    (["solve", "--f", "1/x"], 3, "evaluation"),
])
def test_exit_codes(tmp_path, capsys, argv, status, code):
    rc, err = run(argv + ["--out", tmp_path / "o"], capsys)
    assert rc == status
    assert err.split()[1] == code


def test_unknown_config_key(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("f = sin(pi*x)\ncolour = red\n")
    rc, err = run(["solve", "--config", cfg, "--out", tmp_path / "o"], capsys)
    assert rc == 2 and "colour" in err


def test_solve_outputs(tmp_path):
    assert main(["solve", "--a", "2", "--b", "1", "--epsilon", "0.01", "--f", "sin(pi*x)",
                 "--gprime", "-pi*sin(pi*x)", "--n-max", "20", "--output-times", "0.1,0.2",
                 "--out", str(tmp_path)]) == 0
    header, rows = read_csv(tmp_path / "modes.csv")
    assert header[:2] == ["n", "branch"] and len(rows) == 20
    header, rows = read_csv(tmp_path / "u_t0.200000.csv")
    assert header == ["x", "u", "v"] and rows[0][2] == ""
    assert (tmp_path / "plot.py").exists()


def test_reference_has_v(tmp_path):
    assert main(["reference", "--f", "sin(pi*x)", "--gprime", "-pi*sin(pi*x)", "--m-grid", "50",
                 "--t-max", "0.3", "--out", str(tmp_path)]) == 0
    _, rows = read_csv(tmp_path / "ref_t0.300000.csv")
    assert all(r[2] != "" for r in rows)


def test_layer_outputs(tmp_path):
    assert main(["layer", "--b", "-0.5", "--epsilon", "0.02", "--f", "sin(pi*x)",
                 "--output-times", "0.5", "--out", str(tmp_path)]) == 0
    header, _ = read_csv(tmp_path / "layer_t0.500000.csv")
    assert header == ["x", "u_eps", "u_e", "U0", "eps_U1", "w"]


def test_energy_and_sweep_outputs(tmp_path):
    assert main(["energy", "--epsilon", "0.05", "--f", "sin(pi*x)", "--gprime", "-pi*sin(pi*x)",
                 "--eps-list", "0.1,0.05", "--out", str(tmp_path)]) == 0
    header, _ = read_csv(tmp_path / "energy.csv")
    assert header == ["t", "lhs", "rhs_data", "c_empirical"]
    header, rows = read_csv(tmp_path / "sweep.csv")
    assert header == ["epsilon", "t", "lhs", "rhs", "ratio", "slope_est"]
    assert rows[0][-1] == "" and rows[1][-1] != ""


def test_parallel_sweep_matches_serial(tmp_path):
    args = ["sweep", "--b", "-0.5", "--f", "sin(pi*x)", "--gprime", "-pi*sin(pi*x)",
            "--t-max", "0.5", "--eps-list", "0.04,0.02"]
    assert main(args + ["--out", str(tmp_path / "s1")]) == 0
    assert main(args + ["--jobs", "2", "--out", str(tmp_path / "s2")]) == 0
    for name in ("sweep.csv", "limit.csv"):
        assert (tmp_path / "s1" / name).read_bytes() == (tmp_path / "s2" / name).read_bytes()


def test_manifest_round_trip(tmp_path):
    first = tmp_path / "first"
    assert main(["reference", "--f", "sin(pi*x)", "--m-grid", "40", "--output-times", "0.1,0.2",
                 "--out", str(first)]) == 0
    manifest = json.loads((first / "manifest.json").read_text())
    assert manifest["config"]["m_grid"] == 40 and "wall_time_s" in manifest
    second = tmp_path / "second"
    assert main(["reference", "--config", str(first / "manifest.json"), "--out", str(second)]) == 0
    for name in manifest["files"]:
        if name.endswith(".csv"):
            assert (first / name).read_bytes() == (second / name).read_bytes()


def test_repro_run_deterministic(tmp_path):
    for d in ("a", "b"):
        assert main(["repro-paper", "--out", str(tmp_path / d)]) == 0
    snaps = sorted(p.name for p in (tmp_path / "a").glob("u_t*.csv"))
    assert len(snaps) == 5
    for name in snaps + ["modes.csv"]:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    assert (tmp_path / "a" / "plot.py").exists()
