import json

import pytest

from madcap.capacity import sweep
from madcap.cli import ARGMAX_FIELDS, main, parse_values, read_csv, UsageError
from madcap.optimize import OptimizerConfig


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_point_ce_noiseless(capsys):
    code, out = run(capsys, "point", "ce", "--eta", "1", "--mu", "0.5", "--json")
    assert code == 0
    (pt,) = json.loads(out.out)
    assert pt["value"] == pytest.approx(4.0, abs=1e-8)
    assert set(pt["argmax"]) == {"alpha", "beta", "gamma", "delta"}


def test_point_q_lwb_threshold_note(capsys):
    code, out = run(capsys, "point", "--quantity", "q-lwb", "--eta", "0.3", "--mu", "0.1")
    assert code == 0
    assert "value      0\n" in out.out
    assert "threshold" in out.out


def test_point_chi_g2_dead(capsys):
    code, out = run(capsys, "point", "chi-g2", "--eta", "0", "--mu", "0", "--json")
    assert json.loads(out.out)[0]["value"] <= 1e-9


@pytest.mark.parametrize(
    "argv",
    [
        ["point", "ce", "--eta", "1.5", "--mu", "0"],
        ["point", "nope", "--eta", "1", "--mu", "0"],
        ["point", "--eta", "1", "--mu", "0"],
        ["sweep", "ce", "--grid-step", "-0.1"],
        ["sweep", "ce", "--eta", "0.2:x:0.1"],
        ["check", "--trials", "0"],
        ["point", "ce", "--eta", "1", "--mu", "0", "--restarts", "0"],
        [],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_parse_values():
    assert parse_values("0.3") == [0.3]
    assert parse_values("0,0.5,1") == [0.0, 0.5, 1.0]
    assert parse_values("0:0.9:0.1")[-1] == pytest.approx(0.9)
    assert len(parse_values("0:0.9:0.1")) == 10
    with pytest.raises(UsageError):
        parse_values("1.2")


def test_check_passes_and_is_deterministic(capsys):
    code, a = run(capsys, "check", "--trials", "50", "--seed", "3")
    assert code == 0
    assert "FAIL" not in a.out
    _, b = run(capsys, "check", "--trials", "50", "--seed", "3")
    assert a.out == b.out


def test_sweep_csv_round_trip(tmp_path, capsys):
    path = tmp_path / "g2.csv"
    code, _ = run(capsys, "sweep", "chi-g2", "--eta", "0.2,0.8", "--mu", "0,0.5", "--jobs", "1", "--out", str(path))
    assert code == 0
    header = path.read_text().splitlines()[0].split(",")
    assert header == ["eta", "mu", "value", *ARGMAX_FIELDS["chi-g2"], "evals", "converged"]
    rows = read_csv(path)
    ref = sweep("chi-g2", [0.2, 0.8], [0.0, 0.5], OptimizerConfig(), jobs=1)
    assert len(rows) == len(ref)
    for row, pt in zip(rows, ref):
        assert (row["eta"], row["mu"]) == (pt.eta, pt.mu)
        assert row["value"] == float(f"{pt.value:.12g}")
        assert row["value"] == pytest.approx(pt.value, rel=1e-11, abs=1e-15)
        assert row["theta2"] == float(f"{pt.argmax.theta2:.12g}")
        assert row["evals"] == pt.evals and row["converged"] == pt.converged


def test_sweep_byte_identical_reruns(tmp_path, capsys):
    a, b, c = tmp_path / "a.csv", tmp_path / "b.csv", tmp_path / "c.csv"
    base = ["sweep", "q-lwb", "--eta", "0.3,0.7", "--mu", "0:1:0.5", "--seed", "11"]
    run(capsys, *base, "--jobs", "1", "--out", str(a))
    run(capsys, *base, "--jobs", "1", "--out", str(b))
    run(capsys, *base, "--jobs", "2", "--out", str(c))
    assert a.read_bytes() == b.read_bytes() == c.read_bytes()


def test_sweep_json(tmp_path, capsys):
    path = tmp_path / "pts.json"
    code, _ = run(capsys, "sweep", "q-upb", "--eta", "0.3", "--mu", "0,1", "--out", str(path))
    assert code == 0
    data = json.loads(path.read_text())
    assert [d["mu"] for d in data] == [0.0, 1.0]
    assert data[0]["value"] == 0.0


def test_sweep_io_failure_removes_file(tmp_path, capsys):
    target = tmp_path / "missing" / "x.csv"
    code, out = run(capsys, "sweep", "q-upb", "--eta", "0.5", "--mu", "0.5", "--out", str(target))
    assert code == 1
    assert not target.exists()
    # a directory path is also a write failure
    code, _ = run(capsys, "sweep", "q-upb", "--eta", "0.5", "--mu", "0.5", "--out", str(tmp_path))
    assert code == 1
    assert tmp_path.is_dir()


def test_config_file_and_flag_precedence(tmp_path, capsys):
    conf = tmp_path / "opt.conf"
    conf.write_text("# optimizer\nrestarts = 3\nseed=5\n")
    _, a = run(capsys, "point", "chi-g2", "--eta", "0.4", "--mu", "0.4", "--json", "--config", str(conf))
    assert json.loads(a.out)[0]["restarts_used"] == 3
    _, b = run(capsys, "point", "chi-g2", "--eta", "0.4", "--mu", "0.4", "--json", "--config", str(conf), "--restarts", "5")
    assert json.loads(b.out)[0]["restarts_used"] == 5
    conf.write_text("bogus = 1\n")
    with pytest.raises(SystemExit) as exc:
        main(["point", "ce", "--eta", "1", "--mu", "0", "--config", str(conf)])
    assert exc.value.code == 2


def test_thresholds_table(capsys):
    code, out = run(capsys, "thresholds", "--eta", "0.3,0.8", "--json")
    assert code == 0
    rows = json.loads(out.out)
    assert rows[0]["mu_th_g2"] is not None and rows[0]["mu_bar_th_q"] is not None
    assert rows[1] == {"eta": 0.8, "mu_th_g2": None, "mu_bar_th_q": None}


def test_additivity_command(capsys):
    code, out = run(capsys, "additivity", "--eta", "1")
    assert code == 0
    assert "no violation found" in out.out


def test_check_failure_exit_1(monkeypatch, capsys):
    import madcap.cli as cli
    from madcap.channel import CheckReport

    monkeypatch.setattr(cli, "self_check", lambda trials, seed: CheckReport(1e-9, 0, 0, 0, 0, trials))
    code, out = run(capsys, "check")
    assert code == 1
    assert "FAIL" in out.out and "1.000e-09" in out.out
