import json
import subprocess
import sys

import pytest

from vickrey_ring.cli import main
from vickrey_ring.transcript import Transcript

P20 = "1856507"


def write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.fixture
def honest_cfg(tmp_path):
    return write(tmp_path / "cfg.json", {"p": P20, "g": "2", "n": 4, "k": 5,
                                         "bids": ["3", "30", "17", "9"], "seed": 7})


def test_run_accepts_and_writes_transcript(tmp_path, honest_cfg, capsys):
    tr = tmp_path / "t.jsonl"
    assert main(["run", "--config", honest_cfg, "--transcript", str(tr)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["price"] == 17 and out["winner"] == 2 and out["accepted"]
    assert len(Transcript.load(tr)) > 0


def test_run_seed_override(tmp_path, honest_cfg):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    main(["run", "--config", honest_cfg, "--transcript", str(a), "--seed", "1"])
    main(["run", "--config", honest_cfg, "--transcript", str(b), "--seed", "2"])
    assert a.read_text() != b.read_text()


def test_run_rejected_price_exit_1(tmp_path, capsys):
    cfg = write(tmp_path / "c.json", {"p": P20, "g": "2", "n": 4, "k": 4,
                                       "bids": [4, 3, 0, 9], "seed": 22,
                                       "cheaters": {"3": "inflate"}})
    assert main(["run", "--config", cfg]) == 1
    out = json.loads(capsys.readouterr().out)
    assert out["price"] == 7 and not out["accepted"]


def test_run_protocol_violation_exit_2(tmp_path, capsys):
    cfg = write(tmp_path / "c.json", {"p": P20, "g": "2", "n": 3, "k": 3,
                                       "bids": [1, 2, 3], "seed": 1, "drop": {"2": ["D"]}})
    assert main(["run", "--config", cfg]) == 2
    assert "BrokenRing" in capsys.readouterr().err


def test_run_bad_config_exit_2(tmp_path):
    cfg = write(tmp_path / "c.json", {"n": 2, "k": 3, "bids": [1, 2]})
    assert main(["run", "--config", cfg]) == 2
    (tmp_path / "bad.json").write_text("{")
    assert main(["run", "--config", str(tmp_path / "bad.json")]) == 2


def test_verify_pass_fail_malformed(tmp_path, honest_cfg, capsys):
    tr = tmp_path / "t.jsonl"
    main(["run", "--config", honest_cfg, "--transcript", str(tr)])
    capsys.readouterr()
    report = tmp_path / "r.json"
    assert main(["verify", "--transcript", str(tr), "--report", str(report)]) == 0
    assert json.loads(report.read_text())["verdict"] == "pass"
    capsys.readouterr()
    recs = [json.loads(l) for l in tr.read_text().splitlines()]
    for r in recs:
        if r["tag"] == "digit" and r.get("j") == 2:
            r["payload"] = "0" if r["payload"] == "1" else "1"
    bad = tmp_path / "bad.jsonl"
    bad.write_text("".join(json.dumps(r) + "\n" for r in recs))
    assert main(["verify", "--transcript", str(bad)]) == 1
    rep = json.loads(capsys.readouterr().out)
    assert [(c["name"], c.get("j")) for c in rep["checks"] if not c["pass"]][0] == \
        ("digit_decision", 2)
    (tmp_path / "empty.jsonl").write_text("")
    assert main(["verify", "--transcript", str(tmp_path / "empty.jsonl")]) == 2


def test_demo(capsys):
    assert main(["demo", "--appendix"]) == 0
    out = capsys.readouterr().out
    assert "price 217 (11011001), winner 4" in out


def test_bench_writes_csv_and_png(tmp_path):
    out = tmp_path / "bench.csv"
    assert main(["bench", "--n", "3,4", "--k", "3", "--reps", "1", "--out", str(out)]) == 0
    assert out.read_text().startswith("n,k,phase")
    assert (tmp_path / "bench.png").stat().st_size > 0


def test_module_entry_point_and_log_env(tmp_path, honest_cfg):
    env = {"AUCTION_LOG": "INFO", "PATH": "/usr/bin:/bin"}
    proc = subprocess.run([sys.executable, "-m", "vickrey_ring", "run", "--config", honest_cfg],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 0
    assert "phase keygen done" in proc.stderr
