"""CLI contract tests: subcommands, exit codes, determinism, golden files.

Golden files live in tests/golden/; tables carry 17 significant digits, so
comparisons are bit-exact.
"""

import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

GOLDEN = Path(__file__).parent / "golden"

GOLDEN_ARGS = {
    "eval": ["eval", "--operator", "king", "--function", "e1", "--n", "16",
             "--c", "1", "--beta", "0.2", "--points", "0,1,2"],
    "moments": ["moments", "--operator", "jain-baskakov", "--n", "10",
                "--c", "1", "--beta", "0", "--x", "1"],
    "converge": ["converge", "--operator", "jain-baskakov", "--function", "e1",
                 "--c", "1", "--beta-schedule", "inv-n", "--n-values", "8,16,32",
                 "--points", "0.5,1,2"],
    "voronovskaja": ["voronovskaja", "--operator", "king", "--function", "sq",
                     "--c", "1", "--x", "1", "--n-values", "16,32,64"],
    "bound": ["bound", "--theorem", "rate", "--function", "recip-sq", "--n", "25",
              "--c", "1", "--beta", "0", "--a", "1", "--grid-points", "17"],
    "weighted": ["weighted", "--function", "e1", "--lambda", "0", "--c", "1",
                 "--beta-schedule", "inv-n", "--n-values", "16,32,64",
                 "--domain-cap", "8", "--grid-points", "33"],
}


def run_cli(*args, env_extra=None, cwd=None):
    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    cmd = [sys.executable, "-m", "jainbaskakov", *args]
    return subprocess.run(cmd, capture_output=True, text=True, env=env, cwd=cwd)


def test_help():
    cp = run_cli("--help")
    assert cp.returncode == 0, cp.stderr
    for sub in GOLDEN_ARGS:
        assert sub in cp.stdout


def test_eval_king_identity(tmp_path):
    out = tmp_path / "ev"
    cp = run_cli(*GOLDEN_ARGS["eval"], "--output", str(out))
    assert cp.returncode == 0, cp.stderr
    lines = (tmp_path / "ev.csv").read_text().splitlines()
    assert lines[0] == "x,value,fx,error,v_terms_used,tail_bound"
    values = [float(line.split(",")[1]) for line in lines[1:]]
    assert values == pytest.approx([0.0, 1.0, 2.0], abs=1e-9)


def test_eval_jain_constant(tmp_path):
    out = tmp_path / "c"
    cp = run_cli("eval", "--operator", "jain", "--function", "e0",
                 "--n", "20", "--beta", "0.3", "--points", "0,1,2",
                 "--output", str(out))
    assert cp.returncode == 0, cp.stderr
    values = [
        float(line.split(",")[1])
        for line in (tmp_path / "c.csv").read_text().splitlines()[1:]
    ]
    assert values == pytest.approx([1.0, 1.0, 1.0], abs=1e-10)


def test_moments_exit_zero_and_mu1_king_zero(tmp_path):
    out = tmp_path / "m"
    cp = run_cli("moments", "--operator", "king", "--n", "13", "--c", "1",
                 "--beta", "0.2", "--x", "1", "--output", str(out))
    assert cp.returncode == 0, cp.stderr
    rows = (tmp_path / "m.csv").read_text().splitlines()
    mu1 = [r for r in rows if r.startswith("mu1,")]
    assert len(mu1) == 1
    assert float(mu1[0].split(",")[2]) == 0.0  # closed form exactly zero


def test_unknown_function_exits_2(tmp_path):
    cp = run_cli("eval", "--function", "nope", "--output", str(tmp_path / "x"))
    assert cp.returncode == 2
    err = json.loads(cp.stderr.strip())
    assert err["error"]["exit_code"] == 2


def test_domain_error_exits_3(tmp_path):
    cp = run_cli("eval", "--operator", "jain-baskakov", "--function", "e4",
                 "--n", "4", "--c", "1", "--output", str(tmp_path / "x"))
    assert cp.returncode == 3
    err = json.loads(cp.stderr.strip())
    assert err["error"]["type"] == "IntegrabilityError"


def test_beta_guard_exits_3(tmp_path):
    cp = run_cli("eval", "--beta", "0.99", "--output", str(tmp_path / "x"))
    assert cp.returncode == 3


def test_stalled_trend_exits_4(tmp_path):
    # constant beta: the Jain operator's error on e1 is exactly x*beta/(1-beta)
    # for every n, so the decreasing-error assertion must fail
    cp = run_cli("converge", "--operator", "jain", "--function", "e1",
                 "--beta-schedule", "const", "--beta", "0.3",
                 "--n-values", "8,16,32", "--points", "1,2",
                 "--output", str(tmp_path / "t"))
    assert cp.returncode == 4, cp.stdout + cp.stderr
    assert "FAIL" in cp.stdout


def test_interval_spec(tmp_path):
    cp = run_cli("eval", "--operator", "jain", "--function", "e0",
                 "--n", "10", "--interval", "0:2:5", "--output", str(tmp_path / "i"))
    assert cp.returncode == 0, cp.stderr
    xs = [float(line.split(",")[0]) for line in (tmp_path / "i.csv").read_text().splitlines()[1:]]
    assert xs == pytest.approx([0.0, 0.5, 1.0, 1.5, 2.0])


def test_moments_threshold_rows_reported(tmp_path):
    # n = 4, c = 1: the fourth moment needs n > 5c, so its row carries a
    # threshold status instead of numbers, and the run still exits 0
    cp = run_cli("moments", "--operator", "jain-baskakov", "--n", "4", "--c", "1",
                 "--beta", "0", "--x", "1", "--output", str(tmp_path / "m"))
    assert cp.returncode == 0, cp.stdout + cp.stderr
    rows = (tmp_path / "m.csv").read_text().splitlines()
    m4 = [r for r in rows if r.startswith("4,")]
    assert m4 and "threshold" in m4[0]


def test_short_sweep_rejected(tmp_path):
    cp = run_cli("converge", "--operator", "jain", "--function", "e1",
                 "--n-values", "8", "--output", str(tmp_path / "s"))
    assert cp.returncode == 2


def test_seeded_jitter_deterministic(tmp_path):
    args = ["bound", "--theorem", "direct", "--function", "sin", "--n", "40",
            "--beta", "0.05", "--a", "2", "--grid-points", "9", "--seed", "11"]
    for tag in ("a", "b"):
        cp = run_cli(*args, "--output", str(tmp_path / tag))
        assert cp.returncode == 0, cp.stderr
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_converge_error_column_is_mu1(tmp_path):
    # for f = t the hybrid error D(t,x) - x equals mu1(x) exactly, so the
    # sup-error column must match the closed-form max over the points
    from jainbaskakov import OperatorParams, d_central_moment

    cp = run_cli("converge", "--operator", "jain-baskakov", "--function", "e1",
                 "--c", "1", "--beta-schedule", "inv-n", "--n-values", "8,16,32",
                 "--points", "0.5,1,2", "--output", str(tmp_path / "c"))
    assert cp.returncode == 0, cp.stderr
    for line in (tmp_path / "c.csv").read_text().splitlines()[1:]:
        n_s, beta_s, err_s, _ = line.split(",")
        p = OperatorParams(float(n_s), 1.0, float(beta_s))
        want = max(d_central_moment(p, 1, x) for x in (0.5, 1.0, 2.0))
        assert float(err_s) == pytest.approx(want, rel=1e-8)


def test_direct_bound_reports_small_required_constant(tmp_path):
    cp = run_cli("bound", "--theorem", "direct", "--function", "sin",
                 "--n", "50", "--c", "1", "--beta", "0.05", "--a", "2",
                 "--grid-points", "9", "--output", str(tmp_path / "b"))
    assert cp.returncode == 0, cp.stdout + cp.stderr
    lines = (tmp_path / "b.csv").read_text().splitlines()
    assert lines[0] == "x,lhs,rhs,slack,m_required"
    m_req = [float(line.split(",")[4]) for line in lines[1:] if line.split(",")[4]]
    assert all(m <= 2.0 for m in m_req)


def test_config_file_and_overrides(tmp_path):
    cfgfile = tmp_path / "run.json"
    cfgfile.write_text(json.dumps({
        "command": "eval",
        "operator": "jain",
        "function": "e1",
        "n": 50,
        "beta": 0.2,
        "points": "1",
    }))
    out = tmp_path / "from_config"
    cp = run_cli("eval", "--config", str(cfgfile), "--output", str(out))
    assert cp.returncode == 0, cp.stderr
    row = (tmp_path / "from_config.csv").read_text().splitlines()[1]
    assert float(row.split(",")[1]) == pytest.approx(1.25, rel=1e-10)
    # explicit flag wins over the config file
    out2 = tmp_path / "override"
    cp = run_cli("eval", "--config", str(cfgfile), "--beta", "0", "--output", str(out2))
    assert cp.returncode == 0, cp.stderr
    row = (tmp_path / "override.csv").read_text().splitlines()[1]
    assert float(row.split(",")[1]) == pytest.approx(1.0, rel=1e-10)
    # config for the wrong command is refused
    cp = run_cli("moments", "--config", str(cfgfile), "--output", str(tmp_path / "z"))
    assert cp.returncode == 2


def test_env_tolerance_override(tmp_path):
    # a sloppy tail_eps from the environment loosens truncation: fewer terms
    out1, out2 = tmp_path / "tight", tmp_path / "loose"
    args = ["eval", "--operator", "jain", "--function", "e1", "--n", "200",
            "--points", "2"]
    cp = run_cli(*args, "--output", str(out1))
    assert cp.returncode == 0
    cp = run_cli(*args, "--output", str(out2), env_extra={"JAINBASKAKOV_TAIL_EPS": "1e-3"})
    assert cp.returncode == 0
    terms1 = int((tmp_path / "tight.csv").read_text().splitlines()[1].split(",")[4])
    terms2 = int((tmp_path / "loose.csv").read_text().splitlines()[1].split(",")[4])
    assert terms2 <= terms1


def test_determinism_byte_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        cp = run_cli(*GOLDEN_ARGS["voronovskaja"], "--output", str(out), "--seed", "7")
        assert cp.returncode == 0, cp.stderr
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    assert (tmp_path / "a.plot.dat").read_bytes() == (tmp_path / "b.plot.dat").read_bytes()


def test_json_round_trip(tmp_path):
    out = tmp_path / "v"
    cp = run_cli(*GOLDEN_ARGS["voronovskaja"], "--format", "json", "--output", str(out))
    assert cp.returncode == 0, cp.stderr
    doc = json.loads((tmp_path / "v.json").read_text())
    assert doc["command"] == "voronovskaja"
    from jainbaskakov import VoronovskajaRecord

    for row in doc["rows"]:
        rec = VoronovskajaRecord(
            n=row["n"],
            beta_n=row["beta_n"],
            scaled_error=row["scaled_error"],
            predicted_limit=row["predicted_limit"],
            gap=row["gap"],
        )
        # floats survive the JSON round trip losslessly
        assert rec.gap == abs(rec.scaled_error - rec.predicted_limit)
        assert json.loads(json.dumps(row)) == row


@pytest.mark.parametrize("command", sorted(GOLDEN_ARGS))
def test_golden_files_bit_exact(command, tmp_path):
    out = tmp_path / command
    cp = run_cli(*GOLDEN_ARGS[command], "--output", str(out))
    assert cp.returncode == 0, cp.stderr
    for suffix in (".csv", ".plot.dat"):
        got = (tmp_path / (command + suffix)).read_bytes()
        want = (GOLDEN / (command + suffix)).read_bytes()
        assert got == want, f"{command}{suffix} deviates from the golden file"
