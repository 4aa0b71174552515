import csv
import math
import subprocess
import sys

import pytest

from twosource import cli
from twosource.fock import Statistics


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_parse_sweep():
    spec = cli.parse_args(
        ["sweep", "--stats", "boson,fermion", "--phi", "0:6.283185:64", "--out", "results.csv"]
    )
    assert spec.stats == (Statistics.BOSON, Statistics.FERMION)
    assert len(spec.phis) == 64
    assert spec.phis[0] == 0.0
    assert spec.phis[1] == pytest.approx(6.283185 / 64)
    assert spec.out == "results.csv"
    assert not spec.verify


def test_parse_run_single_point():
    spec = cli.parse_args(["run", "--stats", "fermion", "--phi", "1.0472"])
    assert spec.phis == (1.0472,)
    assert spec.stats == (Statistics.FERMION,)


@pytest.mark.parametrize(
    "argv",
    [
        ["sweep", "--phi", "0:1:0"],
        ["sweep", "--phi", "0:abc:3"],
        ["sweep", "--stats", "anyon"],
        ["sweep", "--tol", "-1"],
        ["run", "--bogus"],
        ["run", "--phi", "0,1"],
        [],
    ],
)
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as exc:
        cli.parse_args(argv)
    assert exc.value.code != 0


def test_verify_subcommand_forces_checks():
    spec = cli.parse_args(["verify"])
    assert spec.verify and spec.labeled
    assert len(spec.phis) == 64 and len(spec.stats) == 3


def test_boson_sweep_with_verify(tmp_path, capsys):
    out = tmp_path / "boson.csv"
    status = cli.main(["sweep", "--stats", "boson", "--phi", f"0:{2 * math.pi}:64",
                       "--out", str(out), "--verify"])
    assert status == 0
    rows = read_rows(out)
    assert len(rows) == 64
    assert list(rows[0]) == cli.CSV_COLUMNS
    assert all(float(r["max_pattern_dev"]) < 1e-12 for r in rows)
    report = capsys.readouterr().out
    assert "max|simulated-closed_form|" in report and "PASS" in report


def test_fermion_point_at_pi(tmp_path):
    out = tmp_path / "f.csv"
    assert cli.main(["run", "--stats", "fermion", "--phi", str(math.pi), "--out", str(out)]) == 0
    [row] = read_rows(out)
    assert float(row["p_same_cond"]) == pytest.approx(1.0, abs=1e-12)
    assert row["max_pattern_dev"] == ""


def test_csv_is_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        cli.main(["sweep", "--phi", "0:3:5", "--out", str(path), "--verify", "--raw"])
    assert a.read_bytes() == b.read_bytes()
    header = a.read_text().splitlines()[0].split(",")
    assert header[: len(cli.CSV_COLUMNS)] == cli.CSV_COLUMNS
    assert len(header) == len(cli.CSV_COLUMNS) + 10


def test_floats_round_trip(tmp_path):
    out = tmp_path / "x.csv"
    cli.main(["sweep", "--stats", "boson", "--phi", "0.1,0.2", "--out", str(out)])
    rows = read_rows(out)
    assert float(rows[1]["phi"]) == 0.2
    assert float(rows[0]["p_same_closed"]) == 0.5 * (1 + math.cos(0.1))


def test_unwritable_output(tmp_path, capsys):
    status = cli.main(["run", "--out", str(tmp_path / "missing" / "x.csv")])
    assert status == 2
    assert "cannot write" in capsys.readouterr().err


def test_deviation_gives_exit_one(monkeypatch, tmp_path):
    real = cli.oracle.verify

    def skewed(table, phi, stats, tol):
        rep = real(table, phi, stats, tol)
        return type(rep)(rep.per_pattern, rep.max_deviation + 1e-6, tol)

    monkeypatch.setattr(cli.oracle, "verify", skewed)
    assert cli.main(["sweep", "--phi", "0:1:3", "--verify", "--out", str(tmp_path / "o.csv")]) == 1


def test_sweep_without_out_writes_csv_to_stdout(capsys):
    assert cli.main(["sweep", "--stats", "distinguishable", "--phi", "0:1:2"]) == 0
    captured = capsys.readouterr()
    assert captured.out.splitlines()[0] == ",".join(cli.CSV_COLUMNS)
    assert "distinguishable" in captured.err


def test_decompose_prints_parity_tags(capsys):
    assert cli.main(["decompose", "--phi", "0.5"]) == 0
    text = capsys.readouterr().out
    assert "one-each, symmetric part" in text
    assert "anti" in text


def test_module_entry_point(tmp_path):
    out = tmp_path / "m.csv"
    proc = subprocess.run(
        [sys.executable, "-m", "twosource", "verify", "--phi", "0:6.283185307179586:8",
         "--out", str(out)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert len(read_rows(out)) == 24
