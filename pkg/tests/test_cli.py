import csv
import io
import json
import math
import subprocess
import sys

import pytest

from abcone import cli
from abcone.cli import SCATTER_COLUMNS, SHELL_COLUMNS, SPECTRUM_COLUMNS, XSEC_COLUMNS, main
from abcone.errors import ConvergenceError


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def csv_rows(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


def test_spectrum_csv_schema(capsys):
    code, out, _ = run(capsys, "spectrum", "--alpha", "0.9", "--flux", "0.3", "--spin", "-1")
    assert code == 0
    assert out.splitlines()[0] == ",".join(SPECTRUM_COLUMNS)
    rows = csv_rows(out)
    assert [r["n"] for r in rows] == ["-2", "-1", "0", "1", "2"]
    assert rows[0]["E_ks"] == "none" and rows[0]["lambda"] == "none"


def test_worked_channel_through_cli(capsys):
    # alpha = 0.4, flux = 0.1, n = 0 is a channel with |j| = 1/2 and xi = 3/4
    code, out, _ = run(capsys, "spectrum", "--alpha", "0.4", "--flux", "0.1", "--n-min", "0", "--n-max", "0", "--format", "json")
    assert code == 0
    row = json.loads(out)["rows"][0]
    assert row["lambda"]["value"] == pytest.approx(-1 / 7, rel=1e-12)
    assert row["E_ks"] == pytest.approx(-24.5, rel=1e-10)
    assert row["E_bg"] == pytest.approx(-24.5, rel=1e-10)


def test_lambda_override_infinite(capsys):
    code, out, _ = run(capsys, "spectrum", "--flux", "0.3", "--lambda-override", "inf", "--format", "json")
    assert code == 0
    ext = [r for r in json.loads(out)["rows"] if r["regime"] == "extension_required"]
    assert ext and all(r["lambda"] == {"kind": "infinite"} and r["bound_state"] is False for r in ext)


def test_scatter_schema_and_units(capsys):
    code, out, _ = run(capsys, "scatter", "--flux", "0.3", "--r0", "0.5", "--k", "1,2", "--n-min", "0", "--n-max", "0")
    assert code == 0
    assert out.splitlines()[0] == ",".join(SCATTER_COLUMNS)
    rows = csv_rows(out)
    assert [float(r["k"]) for r in rows] == [2.0, 4.0]
    assert all(abs(float(r["abs_S"]) - 1) < 1e-12 for r in rows)


def test_scatter_k_range_absolute(capsys):
    code, out, _ = run(capsys, "scatter", "--k-range", "0.1:10:3", "--k-absolute", "--format", "json", "--n-min", "0", "--n-max", "0")
    assert code == 0
    assert [r["k"] for r in json.loads(out)["rows"]] == pytest.approx([0.1, 1.0, 10.0])


def test_xsec_header(capsys):
    code, out, _ = run(capsys, "xsec", "--flux", "0.3", "--k", "1", "--n-angles", "4")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "# k=1.0"
    assert any(ln.startswith("# convention=") for ln in lines)
    assert ",".join(XSEC_COLUMNS) in lines
    assert len(csv_rows(out)) == 4


def test_shell_table(capsys):
    code, out, _ = run(capsys, "shell", "--flux", "-0.8", "--n-min", "-1", "--n-max", "-1", "--format", "json")
    assert code == 0
    rows = json.loads(out)["rows"]
    assert [r["r0"] for r in rows] == [1.0, 0.1, 0.01]
    prods = [r["M_r0sq_absE"] for r in rows]
    assert max(prods) - min(prods) < 1e-10 * min(prods)
    assert all(r["ratio_E_ks"] is None for r in rows)


def test_shell_csv_columns(capsys):
    code, out, _ = run(capsys, "shell", "--alpha", "0.9", "--flux", "-0.3")
    assert code == 0
    assert out.splitlines()[0] == ",".join(SHELL_COLUMNS)


@pytest.mark.parametrize(
    "argv",
    [
        ["spectrum", "--alpha", "0"],
        ["spectrum", "--spin", "2"],
        ["spectrum", "--mass", "abc"],
        ["spectrum", "--n-min", "3", "--n-max", "1"],
        ["xsec", "--k", "1,2"],
        ["scatter", "--k", "-1"],
        ["spectrum", "--lambda-override", "nan"],
        ["verify", "--tolerance-scale", "0"],
    ],
)
def test_invalid_input_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == "" and "invalid" in err


def test_unknown_flag_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["spectrum", "--bogus"])
    assert exc.value.code == 2


def test_numerical_failure_exit_3(capsys, monkeypatch):
    def boom(*_):
        raise ConvergenceError("no bracket")

    monkeypatch.setattr(cli, "energy_ks", boom)
    code, _, err = run(capsys, "spectrum", "--flux", "0.3")
    assert code == 3 and "numerical" in err


def test_verify_failure_exit_1(capsys):
    code, out, err = run(capsys, "verify", "--single", "--flux", "0.3", "--tolerance-scale", "1e-30")
    assert code == 1
    assert "FAIL" in err
    assert json.loads(out)["summary"]["passed"] is False


def test_verify_single_passes(capsys):
    code, out, err = run(capsys, "verify", "--single", "--alpha", "0.8", "--flux", "0.2")
    assert code == 0 and "PASS" in err
    assert json.loads(out)["golden"]["E_ks"] == pytest.approx(-24.5, rel=1e-10)


def test_config_file_and_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# cone\nalpha = 0.9\nflux = 0.3  # trailing\nspin = -1\nn-min = 0\nn_max = 0\nformat = json\n")
    code, out, _ = run(capsys, "spectrum", "--config", str(cfg), "--flux", "0.1")
    assert code == 0
    params = json.loads(out)["params"]
    assert params["alpha"] == 0.9 and params["flux"] == 0.1 and params["spin"] == -1


@pytest.mark.parametrize("text", ["alpha 0.9\n", "colour = red\n"])
def test_bad_config_file(tmp_path, capsys, text):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text(text)
    code, _, _ = run(capsys, "spectrum", "--config", str(cfg))
    assert code == 2


def test_missing_config_file(tmp_path, capsys):
    code, _, _ = run(capsys, "spectrum", "--config", str(tmp_path / "nope.cfg"))
    assert code == 2


def test_output_file(tmp_path, capsys):
    target = tmp_path / "spec.csv"
    code, out, _ = run(capsys, "spectrum", "-o", str(target))
    assert code == 0 and out == ""
    assert target.read_text().startswith("n,m,j")


def test_fmt_csv_sentinels():
    assert cli.fmt_csv(None) == "none"
    assert cli.fmt_csv(math.inf) == "inf"
    assert cli.fmt_csv(0.1) == "0.1"
    assert cli.fmt_csv(True) == "true"


def test_console_script_runs():
    proc = subprocess.run([sys.executable, "-m", "abcone.cli", "spectrum", "--n-min", "0", "--n-max", "0"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("n,m,j")
