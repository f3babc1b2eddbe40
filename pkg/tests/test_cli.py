import json
import subprocess
import sys
from pathlib import Path

import pytest

from bergmanlab.cli import main

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def cfg(name):
    return str(CONFIGS / name)


def run(argv, capsys):
    code = main(argv)
    err = capsys.readouterr().err
    return code, err


def test_verify_moment_ratio_bidisc_exit_zero(tmp_path, capsys):
    code, err = run(["verify", "moment-ratio", "--domain", cfg("bidisc.json"), "--out", str(tmp_path)], capsys)
    assert code == 0 and "pass" in err
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["status"] == "pass" and report["expected"]
    assert (tmp_path / "ratio.csv").read_text().startswith("a1,a2,ratio,ratio_minus_1,err\n")


def test_verify_hankel_conj_z2(tmp_path, capsys):
    code, err = run(["verify", "hankel", "--domain", cfg("bidisc.json"), "--symbol", cfg("conj_z2.json"),
                     "--out", str(tmp_path)], capsys)
    assert code == 0
    assert "non-compact, consistent" in err
    assert json.loads((tmp_path / "report.json").read_text())["measured"]["verdict"] == "non-compact, consistent"


def test_verify_toeplitz_hull_emits_scan_csv(tmp_path, capsys):
    code, _ = run(["verify", "toeplitz", "--domain", cfg("hull.json"), "--symbol", cfg("vanishing.json"),
                   "--out", str(tmp_path)], capsys)
    assert code == 0
    scans = sorted(p.name for p in tmp_path.glob("scan_*.csv"))
    assert scans and (tmp_path / "plot.gp").exists()
    assert (tmp_path / scans[0]).read_text().splitlines()[0] == "t,re,im,tail,n1,n2"


def test_failing_experiment_exit_two(tmp_path, capsys):
    code, err = run(["verify", "moment-ratio", "--domain", cfg("hull.json"), "--alpha2", "4", "--out", str(tmp_path)], capsys)
    assert code == 2 and "expected:" in err


def test_budget_exhaustion_exit_three(tmp_path, capsys):
    code, _ = run(["verify", "toeplitz", "--domain", cfg("bidisc.json"), "--symbol", cfg("bidisc_vanishing.json"),
                   "--budget", "48,4", "--y0", "0", "--out", str(tmp_path)], capsys)
    assert code == 3


@pytest.mark.parametrize("argv", [
    ["verify", "nope"],
    ["verify", "moment-ratio"],
    ["verify", "moment-ratio", "--domain", "missing.json"],
    ["verify", "moment-ratio", "--domain", cfg("ball.json")],
    ["spectrum", "--domain", cfg("bidisc.json"), "--symbol", cfg("z1_conj_z2_real.json")],
    ["berezin", "scan", "--budget", "7"],
])
def test_usage_and_config_errors_exit_one(argv, tmp_path, capsys):
    code, err = run(argv + ["--out", str(tmp_path)] if argv[0] != "verify" or len(argv) > 2 else argv, capsys)
    assert code == 1 and err


def test_bad_json(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, err = run(["domain", "info", "--domain", str(bad)], capsys)
    assert code == 1 and "invalid JSON" in err


def test_domain_info_and_check(capsys):
    assert main(["domain", "info", "--domain", cfg("hull.json")]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["has_vertical_disc"] and not out["has_horizontal_disc"]
    bad = {"kind": "expression", "rho1": "1 + 0.2*sin(6*x)"}
    import tempfile
    with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as fh:
        json.dump(bad, fh)
    assert main(["domain", "check", "--domain", fh.name]) == 2


def test_spectrum_csv_is_deterministic(tmp_path, capsys):
    outs = []
    for i in range(2):
        d = tmp_path / str(i)
        assert main(["spectrum", "--domain", cfg("hull.json"), "--symbol", cfg("conj_z2.json"),
                     "--a1-max", "6", "--a2-max", "3", "--out", str(d)]) == 0
        outs.append((d / "spectrum.csv").read_bytes())
    assert outs[0] == outs[1]
    lines = outs[0].decode().splitlines()
    assert lines[0] == "a1,a2,lambda_prime,lambda_dprime,lambda,err"
    assert [tuple(map(int, l.split(",")[:2])) for l in lines[1:3]] == [(0, 0), (1, 0)]


def test_scan_command(tmp_path, capsys):
    code, err = run(["berezin", "scan", "--domain", cfg("bidisc.json"), "--symbol", cfg("one_minus_y2.json"),
                     "--n-points", "6", "--out", str(tmp_path)], capsys)
    assert code == 0
    rows = (tmp_path / "scan.csv").read_text().splitlines()
    assert 4 <= len(rows) <= 7 and all(abs(float(r.split(",")[1]) - 0.5) < 1e-9 for r in rows[1:])


def test_moments_and_decompose(tmp_path, capsys):
    assert main(["moments", "table", "--domain", cfg("bidisc.json"), "--a1-max", "2", "--a2-max", "2",
                 "--out", str(tmp_path / "m")]) == 0
    assert (tmp_path / "m" / "norms.csv").read_text().count("\n") == 10
    assert main(["decompose", "--domain", cfg("bidisc.json"), "--symbol", cfg("z1_conj_z2_real.json"),
                 "--k", "4,8", "--out", str(tmp_path / "d")]) == 0
    comps = (tmp_path / "d" / "components.csv").read_text().splitlines()
    assert [l.split(",")[:2] for l in comps[1:]] == [["-1", "1"], ["1", "-1"]]


def test_tauberian_command(tmp_path, capsys):
    assert main(["tauberian", "--synthetic", "harmonic", "--out", str(tmp_path / "h")]) == 0
    assert json.loads((tmp_path / "h" / "report.json").read_text())["verdict"] == "consistent"
    seq = tmp_path / "seq.csv"
    seq.write_text("k,b_k\n" + "".join(f"{k},{(-1) ** k * (k + 1)}\n" for k in range(20000)))
    assert main(["tauberian", "--sequence", str(seq), "--out", str(tmp_path / "s")]) == 0
    assert json.loads((tmp_path / "s" / "report.json").read_text())["verdict"] == "not-applicable"


def test_experiment_config_file(tmp_path, capsys):
    code, err = run(["verify", "hankel", "--config", cfg("hankel_bidisc_experiment.json"), "--out", str(tmp_path)], capsys)
    assert code == 0 and "non-compact" in err


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "bergmanlab", "--version"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.startswith("bergmanlab ")


def test_verify_interface_alias_matches_named_experiment(tmp_path, capsys):
    code, err = run(["verify", "eqn-ratio", "--domain", cfg("bidisc.json"), "--out", str(tmp_path)], capsys)
    assert code == 0 and "moment-ratio: pass" in err
