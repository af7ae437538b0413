"""Command-line interface behavior and exit codes."""

import subprocess
import sys

import pytest

import cliffold
from hamgen import cli

H2 = "H 0 0 0; H 0 0 0.74"


def test_generates_parseable_file(tmp_path, capsys):
    out = tmp_path / "h2.ham"
    code = cli.main(["--geometry", H2, "--out", str(out)])
    assert code == 0
    assert capsys.readouterr().out.strip() == str(out)
    h = cliffold.load_hamiltonian(out)
    assert h.n_qubits == 4
    assert h.hermiticity_defect() == 0.0


def test_rerun_is_byte_identical(tmp_path):
    a = tmp_path / "a.ham"
    b = tmp_path / "b.ham"
    assert cli.main(["--geometry", H2, "--out", str(a)]) == 0
    assert cli.main(["--geometry", H2, "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_geometry_from_file(tmp_path):
    geo = tmp_path / "h2.xyz"
    geo.write_text("H 0 0 0\nH 0 0 0.74\n", encoding="utf-8")
    out = tmp_path / "h2.ham"
    assert cli.main(["--geometry", str(geo), "--out", str(out)]) == 0
    inline = tmp_path / "inline.ham"
    assert cli.main(["--geometry", H2, "--out", str(inline)]) == 0
    assert out.read_bytes() == inline.read_bytes()


def test_active_window_flagged_through(tmp_path):
    out = tmp_path / "h2-631g.ham"
    code = cli.main(
        [
            "--geometry",
            H2,
            "--basis",
            "6-31g",
            "--active",
            "6",
            "--frozen-core",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    assert cliffold.load_hamiltonian(out).n_qubits == 6


@pytest.mark.parametrize(
    "argv,code",
    [
        (["--geometry", "H 0 0", "--out", "x.ham"], 2),
        (["--geometry", "H 0 0 0; H 0 0 0.74", "--active", "3", "--out", "x.ham"], 2),
        (["--geometry", "H 0 0 0; H 0 0 0.74", "--active", "12", "--out", "x.ham"], 2),
        (["--geometry", "H 0 0 0", "--out", "x.ham"], 2),
        (["--geometry", "C 0 0 0", "--out", "x.ham"], 4),
        (["--geometry", "H 0 0 0; H 0 0 0.74", "--basis", "cc-pvdz", "--out", "x.ham"], 4),
    ],
)
def test_error_exit_codes(tmp_path, capsys, monkeypatch, argv, code):
    monkeypatch.chdir(tmp_path)
    assert cli.main(argv) == code
    assert capsys.readouterr().err.startswith("error:")


def test_unwritable_output_path(tmp_path, capsys):
    out = tmp_path / "missing" / "h2.ham"
    code = cli.main(["--geometry", H2, "--out", str(out)])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_console_script_version():
    proc = subprocess.run(
        [sys.executable, "-m", "hamgen.cli", "--version"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "hamgen" in proc.stdout


def test_missing_output_flag_is_usage_error():
    proc = subprocess.run(
        [sys.executable, "-m", "hamgen.cli", "--geometry", H2],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 2
