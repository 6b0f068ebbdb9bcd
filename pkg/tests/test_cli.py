import json

import pytest

from carnot_acf.cli import main
from carnot_acf.config import RunConfig
from carnot_acf.errors import InvalidArgumentError, ParseError
from carnot_acf.functionals import (RadialScan, SignedPart, acf_j, acf_j_representation,
                                    acf_j_tilde, mean_value)
from carnot_acf.groups import heisenberg1
from carnot_acf.quadrature import Resolution

CE = "x - 3*y*t - 2*x^3"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_harmonic_exit_codes(capsys):
    code, out, _ = run(capsys, "verify-harmonic", "--group", "heisenberg1", "--poly", CE)
    assert code == 0 and json.loads(out)["harmonic"]
    code, out, _ = run(capsys, "verify-harmonic", "--group", "heisenberg1", "--poly", "x^3")
    assert code == 1 and json.loads(out)["laplacian"] == "6*x"
    code, _, err = run(capsys, "verify-harmonic", "--group", "heisenberg1", "--poly", "x^^3")
    assert code == 2 and "input error" in err
    assert run(capsys, "verify-harmonic", "--group", "nonsense", "--poly", "x")[0] == 2
    assert run(capsys, "no-such-command")[0] == 2


@pytest.mark.parametrize("poly,expect,code", [(CE, "decreasing", 0), ("t", "increasing", 0),
                                              (CE, "increasing", 1)])
def test_scan_expectations(tmp_path, capsys, poly, expect, code):
    got, out, _ = run(capsys, "scan", "--group", "heisenberg1", "--poly", poly,
                      "--radii", "0.05,0.1,0.2,0.3", "--expect", expect,
                      "--out", str(tmp_path / "s.csv"))
    assert got == code
    assert (tmp_path / "s.csv").read_text().startswith("r,value,abs_error,scheme")


def test_scan_inconclusive_for_constant_profile(tmp_path, capsys):
    code, _, _ = run(capsys, "scan", "--group", "euclidean:3", "--poly", "x", "--radii",
                     "0.1,0.2,0.3", "--expect", "increasing", "--out", str(tmp_path / "s.csv"))
    assert code == 3


LIB = {
    "j": lambda g, u, x0, r, res: acf_j(g, u, x0, r, res),
    "j_tilde": lambda g, u, x0, r, res: acf_j_tilde(g, u, x0, r, SignedPart.WHOLE, res),
    "mean_value": lambda g, u, x0, r, res: mean_value(g, u, x0, r, res),
    "j_repr": lambda g, u, x0, r, res: acf_j_representation(g, u, x0, r, 16, res),
}


@pytest.mark.parametrize("functional", sorted(LIB))
def test_cli_results_equal_library_bit_exactly(tmp_path, capsys, functional):
    out = tmp_path / f"{functional}.csv"
    code, _, _ = run(capsys, "scan", "--group", "heisenberg1", "--poly", "x*y + t - x",
                     "--x0", "1/4,-1/8,1/16", "--radii", "0.2,0.4,0.6",
                     "--functional", functional, "--resolution", "radial_nodes=8,angular_nodes_phi=16,angular_nodes_theta=16",
                     "--out", str(out))
    assert code == 0
    scan = RadialScan.from_csv(out.read_text())
    H = heisenberg1()
    u = H.parse("x*y + t - x")
    res = Resolution(8, 16, 16)
    for r, v, e in zip(scan.radii, scan.values, scan.errors):
        est = LIB[functional](H, u, [0.25, -0.125, 0.0625], r, res)
        assert (v, e) == (est.value, est.abs_error)


def test_mean_value_and_gauge_info(capsys):
    code, out, _ = run(capsys, "mean-value", "--group", "euclidean:3", "--poly", "x^2 - y^2 + x",
                       "--radii", "0.5,1")
    data = json.loads(out)
    assert code == 0 and all(abs(m["value"]) < 1e-6 for m in data["means"])
    code, out, _ = run(capsys, "gauge-info", "--group", "heisenberg1")
    info = json.loads(out)
    assert code == 0 and info["Q"] == 4 and abs(info["gamma_constant"] - 0.0397887357729738) < 1e-13


def test_fit_quartic_command(tmp_path, capsys):
    code, out, _ = run(capsys, "fit-quartic", "--c1", "1", "--c2", "0",
                       "--radii", "0.1,0.2,0.3,0.4,0.5", "--out", str(tmp_path / "q.csv"))
    fit = json.loads(out)["fit"]
    assert code == 0 and abs(fit["a1"] - 1.5) < 1e-9
    assert run(capsys, "fit-quartic", "--c1", "0", "--c2", "0")[0] == 2


def test_config_file_and_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"group": "heisenberg1", "poly": CE, "radii": [0.05, 0.1, 0.2],
                               "expect": "increasing"}))
    assert run(capsys, "scan", "--config", str(cfg), "--out", str(tmp_path / "a.csv"))[0] == 1
    assert run(capsys, "scan", "--config", str(cfg), "--expect", "decreasing",
               "--out", str(tmp_path / "b.csv"))[0] == 0
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"group": "heisenberg1", "polynomial": CE}))
    assert run(capsys, "scan", "--config", str(bad))[0] == 2


def test_env_var_output_dir(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("CARNOT_ACF_OUT", str(tmp_path / "envout"))
    assert run(capsys, "scan", "--group", "heisenberg1", "--poly", "t", "--radii", "0.1,0.2,0.3")[0] == 0
    assert (tmp_path / "envout" / "scan_j_tilde.csv").exists()


def test_runconfig_roundtrip_and_validation():
    cfg = RunConfig(group={"kind": "euclidean", "dim": 3}, poly="x*y*z", x0=["1/2", 0, 0],
                    radii=[0.1, 0.2], resolution={"radial_nodes": 8}, seed=3)
    again = RunConfig.from_dict(json.loads(cfg.dumps()))
    assert again.dumps() == cfg.dumps()
    assert again.resolution_obj().seed == 3 and again.origin() == [0.5, 0.0, 0.0]
    assert RunConfig(poly=[{"coeff": "2", "exps": [1, 0, 0]}]).polynomial() == heisenberg1().parse("2*x")
    for bad in ({"radii": [0.2, 0.1]}, {"radii": []}, {"functional": "other"},
                {"x0": [0, 0]}, {"expect": "flat"}, {"t_nodes": 1}, {"selector": "both"}):
        with pytest.raises(InvalidArgumentError):
            RunConfig(**bad)
    with pytest.raises(ParseError):
        RunConfig.from_dict({"unknown": 1})
    with pytest.raises(ParseError):
        RunConfig(resolution={"nodes": 3})
    with pytest.raises(InvalidArgumentError):
        RunConfig().polynomial()


def test_reproduce_paper_debug_flag_fails(tmp_path, capsys):
    code, out, _ = run(capsys, "reproduce-paper", "--out", str(tmp_path), "--mc-samples", "0",
                       "--debug-gamma-scale", "2")
    assert code == 1
    summary = json.loads((tmp_path / "summary.json").read_text())
    status = {c["claim_id"]: c["status"] for c in summary["claims"]}
    assert status["mean_value_property"] == "fail"
    assert status["harmonic_family"] == "pass"
