import csv
import json
import math
import os
import subprocess

CLI = os.environ.get("CYLDIFF_CLI", "cyldiff")


def run(*args, cwd=None):
    return subprocess.run([CLI, *map(str, args)], capture_output=True, text=True, cwd=cwd)


def write_json(path, obj):
    path.write_text(json.dumps(obj, indent=1))
    return path


def exact_system(c=0.3, w_scale=1.0):
    # P = c r cos(2 pi theta): Ev = -P_theta, Eu = P_r - P_theta, Ew = P_theta_r P_theta,
    # v_{+-} = Ev +- cos(2 pi theta) / 2.
    pc = math.pi * c
    w = 2 * math.pi**2 * c * c * w_scale
    entries = []
    for s in (1, -1):
        entries += [
            {"which": "v", "sign": s, "k": 1, "re": [0.25 * s], "im": [0, -pc]},
            {"which": "u", "sign": s, "k": 1, "re": [c / 2], "im": [0, -pc]},
            {"which": "w", "sign": s, "k": 0, "re": [0, w]},
            {"which": "w", "sign": s, "k": 2, "re": [0, -w / 2]},
        ]
    return {"potentials": entries, "beta": 0.01}


def read_csv(path):
    with open(path) as f:
        return list(csv.DictReader(f))


def test_help_lists_subcommands():
    r = run("--help")
    assert r.returncode == 0
    for sub in ("check", "simulate", "clt", "drift", "classify", "exits", "walk", "ergodize"):
        assert sub in r.stdout


def test_check_cos_sin_passes(tmp_path):
    r = run("check", "--out", tmp_path)
    assert r.returncode == 0
    report = json.loads((tmp_path / "hypotheses.json").read_text())
    assert report["pass"] is True
    names = {h["name"] for h in report["hypotheses"]}
    assert {"H0", "H1", "H2", "H3"} <= names


def test_check_degenerate_variance_fails_h1(tmp_path):
    cfg = write_json(
        tmp_path / "cfg.json",
        {"potentials": [{"which": "v", "sign": s, "k": 1, "re": [0.5]} for s in (1, -1)]},
    )
    r = run("check", "--config", cfg, "--out", tmp_path / "out")
    assert r.returncode == 1
    report = json.loads((tmp_path / "out" / "hypotheses.json").read_text())
    assert "H1" in report["failed_required"]


def test_config_errors_exit_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "epsilon": 0.02,\n  "bogus": 1\n}')
    r = run("check", "--config", bad, "--out", tmp_path / "o")
    assert r.returncode == 2
    assert "bogus: unknown key" in r.stderr

    broken = tmp_path / "broken.json"
    broken.write_text('{\n  "epsilon": ,\n}')
    r = run("check", "--config", broken, "--out", tmp_path / "o")
    assert r.returncode == 2
    assert "broken.json:2:" in r.stderr

    assert run("simulate", "--no-such-flag").returncode == 2
    assert run().returncode == 2
    assert run("simulate", "--epsilon", "0.5", "--out", tmp_path / "o").returncode == 2


def test_drift_vanishes_on_exact_system(tmp_path):
    cfg = write_json(tmp_path / "exact.json", exact_system())
    r = run("drift", "--config", cfg, "--grid", 201, "--out", tmp_path / "d")
    assert r.returncode == 0
    rows = read_csv(tmp_path / "d" / "drift.csv")
    assert len(rows) > 100
    assert max(abs(float(row["b"])) for row in rows) <= 1e-8
    assert all(float(row["sigma2"]) > 0 for row in rows)

    # Breaking the w relation must produce a visible drift.
    cfg2 = write_json(tmp_path / "broken.json", exact_system(w_scale=2.0))
    assert run("drift", "--config", cfg2, "--grid", 201, "--out", tmp_path / "d2").returncode == 0
    rows2 = read_csv(tmp_path / "d2" / "drift.csv")
    assert max(abs(float(row["b"])) for row in rows2) > 1e-3


def test_classify_counts_and_ir_measure(tmp_path):
    r = run("classify", "--epsilon", "1e-6", "--out", tmp_path)
    assert r.returncode == 0
    report = json.loads((tmp_path / "classify.json").read_text())
    rows = read_csv(tmp_path / "strips.csv")
    assert sum(report["counts"].values()) == len(rows)
    assert report["counts"]["IR"] > 0
    ir_rows = [row for row in rows if row["class"] == "IR"]
    assert {(row["p"], row["q"]) for row in ir_rows} == {("1", "3"), ("2", "3")}
    # IR strips cover the eps^nu windows around the witnesses, up to one strip per edge.
    slack = 2 * report["ir_rationals"] * report["strip_width"]
    assert report["ir_measure"] <= report["ir_strip_length"] <= report["ir_measure"] + slack
    assert report["ir_measure"] <= report["ir_bound"]

    r = run("classify", "--epsilon", "1e-4", "--out", tmp_path / "e4")
    report = json.loads((tmp_path / "e4" / "classify.json").read_text())
    assert report["counts"]["IR"] == 0
    assert report["ir_measure"] == report["ir_strip_length"] == 0


def test_simulate_is_deterministic(tmp_path):
    outs = []
    for threads, name in ((1, "a"), (4, "b")):
        r = run("simulate", "--epsilon", 0.05, "--samples", 300, "--seed", 9, "--threads", threads, "--out",
                tmp_path / name)
        assert r.returncode == 0
        outs.append((tmp_path / name / "displacements.csv").read_bytes())
    assert outs[0] == outs[1]
    summary = json.loads((tmp_path / "a" / "summary.json").read_text())
    assert summary["M"] == 300
    assert summary["n"] == 400
    assert len(read_csv(tmp_path / "a" / "displacements.csv")) == 300

    other = run("simulate", "--epsilon", 0.05, "--samples", 300, "--seed", 10, "--out", tmp_path / "c")
    assert other.returncode == 0
    assert (tmp_path / "c" / "displacements.csv").read_bytes() != outs[0]


def test_clt_writes_report_and_histogram(tmp_path):
    r = run("clt", "--epsilon", 0.05, "--samples", 2000, "--out", tmp_path)
    assert r.returncode in (0, 1)
    report = json.loads((tmp_path / "clt_report.json").read_text())
    for key in ("test", "statistic", "threshold", "pass", "M", "seed", "params"):
        assert key in report
    assert report["M"] == 2000
    hist = read_csv(tmp_path / "histogram.csv")
    assert len(hist) == 50
    assert sum(int(h["count"]) for h in hist) <= 2000


def test_walk_and_ergodize(tmp_path):
    r = run("walk", "--epsilon", 0.02, "--samples", 2000, "--out", tmp_path / "w")
    assert r.returncode in (0, 1)
    nodes = read_csv(tmp_path / "w" / "walk_nodes.csv")
    interior = nodes[1:-1]
    assert all(int(n["up"]) + int(n["down"]) + int(n["unresolved"]) == 2000 for n in interior)
    # Pinned band is checked in the acceptance suite; here 3 SE plus a small systematic term.
    assert all(abs(float(n["p_up"]) - 0.5) <= 3 / math.sqrt(2000) + 0.02 for n in interior)
    report = json.loads((tmp_path / "w" / "walk.json").read_text())
    assert report["params"]["assessed_nodes"] == len(interior)

    r = run("ergodize", "--epsilon", "1e-4", "--out", tmp_path / "e")
    assert r.returncode == 0
    e = json.loads((tmp_path / "e" / "ergodize.json").read_text())
    assert e["N"] in (1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144)

    r = run("ergodize", "--epsilon", "1e-6", "--r-star", 0.5, "--out", tmp_path / "e2")
    assert r.returncode == 3


def test_exits_outputs(tmp_path):
    r = run("exits", "--epsilon", 0.01, "--samples", 300, "--r-star", 0.3, "--out", tmp_path)
    assert r.returncode in (0, 1)
    report = json.loads((tmp_path / "exits.json").read_text())
    assert report["params"]["boundary_exits"] + report["params"]["final_time"] == 300
    rows = read_csv(tmp_path / "exit_times.csv")
    assert len(rows) == 300
