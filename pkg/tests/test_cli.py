import json
import os
import subprocess
import sys

import pytest

from mllt.cli import CliError, main, parse_sweep


def run_cli(args, capsys):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_parse_sweep():
    assert parse_sweep("16:64:x2") == [16, 32, 64]
    assert parse_sweep("10:20:+5") == [10, 15, 20]
    assert parse_sweep("7:7:+1") == [7]
    for bad in ("16:8:x2", "16:64", "a:b:x2", "16:64:x1", "16:64:*2"):
        with pytest.raises(CliError):
            parse_sweep(bad)


def test_pmf_single_point(capsys):
    code, out, _ = run_cli(["pmf", "--p", "0.5", "--N", "100", "--k", "50"], capsys)
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "k,exact,approx0,approx_half,approx_one,ratio_error_one"
    fields = lines[1].split(",")
    assert fields[0] == "50"
    assert float(fields[1]) == pytest.approx(0.0795892, abs=1e-6)
    assert float(fields[4]) == pytest.approx(0.0795890, abs=1e-6)


def test_pmf_all_row_count(capsys):
    code, out, _ = run_cli(["pmf", "--p", "0.3,0.4", "--N", "10", "--all"], capsys)
    assert code == 0
    assert len(out.strip().split("\n")) == 1 + 66  # header + C(12,2)


def test_missing_p_is_args_error(capsys):
    code, _, err = run_cli(["pmf", "--N", "10"], capsys)
    assert code == 2
    payload = json.loads(err)
    assert payload["error"]["code"] == "E_ARGS"


def test_short_sweep_rejected(capsys):
    code, _, err = run_cli(["error-table", "--p", "0.5", "--N-sweep", "64:256:x2"], capsys)
    assert code == 2
    assert json.loads(err)["error"]["code"] == "E_ARGS"


def test_size_guard_exit_code(capsys):
    code, _, err = run_cli(["pmf", "--p", "0.2,0.2,0.2", "--N", "100000", "--all"], capsys)
    assert code == 3
    assert json.loads(err)["error"]["code"] == "E_TOO_LARGE"


def test_bad_model_exit_code(capsys):
    code, _, err = run_cli(["pmf", "--p", "0.7,0.7", "--N", "10", "--all"], capsys)
    assert code == 2


def test_tv_sweep(capsys):
    code, out, _ = run_cli(["tv", "--p", "0.5", "--N-sweep", "16:64:x2"], capsys)
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "N,tv,tv_sqrtN"
    assert len(lines) == 4
    n, tv, prod = lines[1].split(",")
    assert float(prod) == pytest.approx(float(tv) * 4.0, rel=1e-10)


def test_moments_table(capsys):
    code, out, _ = run_cli(["moments", "--p", "0.3,0.4", "--N", "10"], capsys)
    assert code == 0
    rows = {line.split(",")[0]: line.split(",")[1] for line in out.strip().split("\n")[1:]}
    assert float(rows["cov_12"]) == pytest.approx(-1.2, rel=1e-10)


def test_bernstein_table(capsys):
    code, out, _ = run_cli(["bernstein", "constants", "--p", "0.5", "--N", "400"], capsys)
    assert code == 0
    rows = {line.split(",")[0]: line.split(",")[1:] for line in out.strip().split("\n")[1:]}
    assert set(rows) == {"sum_sq", "sum_cube", "min_cross_1"}


def test_region_command(capsys):
    code, out, _ = run_cli(
        ["region", "--p", "0.5", "--N", "100", "--halfspace", "1;50", "--order", "0"], capsys
    )
    assert code == 0
    exact, approx = out.strip().split("\n")[1].split(",")[:2]
    assert float(exact) == pytest.approx(0.5397946, abs=1e-6)
    assert float(approx) == pytest.approx(0.539828, abs=1e-5)


def test_json_format(capsys):
    code, out, _ = run_cli(
        ["tv", "--p", "0.5", "--N", "16", "--format", "json"], capsys
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["rows"][0]["N"] == 16


def test_out_file(tmp_path, capsys):
    target = tmp_path / "rows.csv"
    code, out, _ = run_cli(["pmf", "--p", "0.5", "--N", "20", "--k", "10", "--out", str(target)], capsys)
    assert code == 0
    assert out == ""
    assert target.read_text().startswith("k,exact")


def test_config_file_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("p = 0.5\nN = 100\n")
    code, out, _ = run_cli(["pmf", "--k", "50", "--config", str(cfg)], capsys)
    assert code == 0
    assert out.strip().split("\n")[1].startswith("50,")
    # flag wins over config
    code, out, _ = run_cli(["pmf", "--k", "10", "--N", "20", "--config", str(cfg)], capsys)
    assert code == 0
    row = out.strip().split("\n")[1]
    assert float(row.split(",")[1]) == pytest.approx(0.17619705, rel=1e-6)


def _run_proc(args, env_extra=None):
    env = dict(os.environ, **(env_extra or {}))
    return subprocess.run(
        [sys.executable, "-m", "mllt.cli"] + args, capture_output=True, env=env
    )


def test_byte_identical_across_threads():
    args = ["error-table", "--p", "0.5", "--N-sweep", "64:512:x2"]
    outs = set()
    for extra in ({"MLLT_THREADS": "1"}, {"MLLT_THREADS": "4"}, None):
        r = _run_proc(args + (["--threads", "2"] if extra is None else []), extra)
        assert r.returncode == 0
        outs.add(r.stdout)
    assert len(outs) == 1


def test_repeat_runs_identical(capsys):
    a = run_cli(["moments", "--p", "0.3,0.4", "--N", "10"], capsys)
    b = run_cli(["moments", "--p", "0.3,0.4", "--N", "10"], capsys)
    assert a == b
