"""End-to-end checks of the batch front-end and its replayable manifests."""

import json
import math
import subprocess
import sys

import pytest

from cliffold import Circuit, Gate, dumps_circuit, loads_hamiltonian
from cliffold.cli import main

TFIM_TEXT = """# qubits: 2
-1 0 Z0 Z1
-0.5 0 X0
-0.5 0 X1
"""

BELL_TEXT = """# qubits: 2
-1 0 X0 X1
-1 0 Z0 Z1
"""

SQ2 = math.sqrt(2.0)


@pytest.fixture
def tfim(tmp_path):
    f = tmp_path / "tfim.txt"
    f.write_text(TFIM_TEXT)
    return str(f)


@pytest.fixture
def bell(tmp_path):
    f = tmp_path / "bell.txt"
    f.write_text(BELL_TEXT)
    return str(f)


@pytest.fixture
def cx_h(tmp_path):
    c = Circuit(2, (Gate("CX", (1,), control=0), Gate("H", (1,))))
    f = tmp_path / "cx_h.json"
    f.write_text(dumps_circuit(c))
    return str(f)


def _json(path):
    return json.loads(path.read_text())


# -- fold --------------------------------------------------------------------------


def test_fold_writes_artifacts(tmp_path, tfim, cx_h):
    out = tmp_path / "out"
    assert main(["fold", "--hamiltonian", tfim, "--circuit", cx_h,
                 "--out", str(out)]) == 0
    folded = loads_hamiltonian((out / "folded.txt").read_text())
    assert folded.cardinality == 3
    assert abs(folded.coefficient("Z0 X1") - (-1.0)) < 1e-12
    assert abs(folded.coefficient("X0 X1") - (-0.5)) < 1e-12
    assert abs(folded.coefficient("Z0 Z1") - (-0.5)) < 1e-12
    report = (out / "fold_report.csv").read_text().strip().split("\n")
    assert report[0] == "gate_index,kind,cardinality"
    assert len(report) == 3
    manifest = _json(out / "manifest.json")
    assert manifest["subcommand"] == "fold"
    assert sorted(manifest["outputs"]) == ["fold_report.csv", "folded.txt"]


def test_manifest_fields_are_reproducible(tmp_path, tfim, cx_h):
    out = tmp_path / "out"
    main(["fold", "--hamiltonian", tfim, "--circuit", cx_h, "--out", str(out)])
    manifest = _json(out / "manifest.json")
    # no timestamps or host fields, so reruns can be byte-identical
    assert set(manifest) == {
        "format", "tool_version", "subcommand", "config", "inputs", "outputs"
    }
    assert len(manifest["inputs"]["hamiltonian"]["sha256"]) == 64


# -- reference ---------------------------------------------------------------------


def test_reference_product_optimum(tmp_path, tfim):
    out = tmp_path / "out"
    code = main(["reference", "--hamiltonian", tfim, "--clusters", "0;1",
                 "--gamma", "auto", "--out", str(out)])
    assert code == 0
    payload = _json(out / "reference.json")
    assert payload["converged"]
    # analytic product optimum of the 2-site transverse-field chain
    assert abs(payload["energy"] - (-1.25)) < 1e-6
    assert len(payload["cluster_states"]) == 2


def test_reference_nonconvergence_exit_code(tmp_path, tfim):
    out = tmp_path / "out"
    code = main(["reference", "--hamiltonian", tfim, "--clusters", "0;1",
                 "--gamma", "auto", "--max-iter", "1", "--tol", "1e-15",
                 "--out", str(out)])
    assert code == 3
    assert not _json(out / "reference.json")["converged"]


# -- optimize ----------------------------------------------------------------------


def test_optimize_writes_search_artifacts(tmp_path, bell):
    out = tmp_path / "out"
    code = main(["optimize", "--hamiltonian", bell, "--clusters", "0;1",
                 "--populations", "4", "--offspring", "4", "--max-iter", "5",
                 "--out", str(out)])
    assert code == 0
    search = _json(out / "search.json")
    assert search["energy"] <= search["baseline_energy"] + 1e-12
    assert (out / "best_circuit.json").exists()
    trace = (out / "energy_trace.csv").read_text().strip().split("\n")
    assert trace[0] == "generation,population,energy"
    assert (out / "fold_report.csv").exists()


def test_optimize_deterministic_across_dirs(tmp_path, bell):
    args = ["optimize", "--hamiltonian", bell, "--clusters", "0;1",
            "--populations", "4", "--offspring", "4", "--max-iter", "5",
            "--seed", "3"]
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    for name in ("best_circuit.json", "energy_trace.csv", "search.json"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


# -- near-clifford -----------------------------------------------------------------


def test_near_clifford_improves_fixed_circuit(tmp_path, tfim, cx_h):
    out = tmp_path / "out"
    code = main(["near-clifford", "--hamiltonian", tfim, "--clusters", "0;1",
                 "--circuit", cx_h, "--out", str(out)])
    assert code == 0
    payload = _json(out / "ncliff.json")
    assert abs(payload["clifford_energy"] - (-(1 + SQ2) / 2)) < 1e-6
    assert abs(payload["energy"] - (-SQ2)) < 1e-6
    assert payload["replaced_kind"] == "H"
    assert payload["gate_index"] == 1
    assert payload["notice"] is None
    assert payload["tau"] is not None
    assert abs(payload["angle_deviation"] - (payload["tau"] - math.pi)) < 1e-12
    assert (out / "ncliff_circuit.json").exists()


# -- exact -------------------------------------------------------------------------


def test_exact_spectrum(tmp_path, bell):
    out = tmp_path / "out"
    assert main(["exact", "--hamiltonian", bell, "--out", str(out)]) == 0
    payload = _json(out / "spectrum.json")
    assert payload["n_qubits"] == 2
    assert abs(payload["ground_energy"] - (-2.0)) < 1e-12
    want = [-2.0, 0.0, 0.0, 2.0]
    assert max(abs(a - b) for a, b in zip(payload["eigenvalues"], want)) < 1e-9
    assert payload["degenerate_groups"] == [[0], [1, 2], [3]]


def test_exact_cap_exit_code(tmp_path, bell, capsys):
    code = main(["exact", "--hamiltonian", bell, "--cap", "1",
                 "--out", str(tmp_path / "out")])
    assert code == 4
    assert "error:" in capsys.readouterr().err


# -- fidelity ----------------------------------------------------------------------


def test_fidelity_table_sums_to_one(tmp_path, tfim, cx_h):
    out = tmp_path / "out"
    code = main(["fidelity", "--hamiltonian", tfim, "--clusters", "0;1",
                 "--circuit", cx_h, "--gamma", "auto", "--out", str(out)])
    assert code == 0
    lines = (out / "fidelity.csv").read_text().strip().split("\n")
    assert lines[0] == "group_index,eigenvalue,fidelity"
    fids = [float(line.split(",")[2]) for line in lines[1:]]
    assert all(-1e-12 <= f <= 1 + 1e-12 for f in fids)
    assert abs(sum(fids) - 1.0) < 1e-10


def test_fidelity_without_circuit(tmp_path, tfim):
    out = tmp_path / "out"
    code = main(["fidelity", "--hamiltonian", tfim, "--clusters", "0;1",
                 "--gamma", "auto", "--out", str(out)])
    assert code == 0
    assert (out / "fidelity.csv").exists()


# -- stats -------------------------------------------------------------------------


def test_stats_rows_and_ceiling(tmp_path, tfim, cx_h):
    out = tmp_path / "out"
    assert main(["stats", "--hamiltonian", tfim, "--circuit", cx_h,
                 "--out", str(out)]) == 0
    lines = (out / "stats.csv").read_text().strip().split("\n")
    assert lines[0] == (
        "step,gate_index,kind,cardinality,ceiling,envelope_min,envelope_max"
    )
    assert len(lines) == 4  # initial row + two gates
    first = lines[1].split(",")
    assert first[:5] == ["0", "-1", "initial", "3", "16"]
    for line in lines[1:]:
        cells = line.split(",")
        assert int(cells[3]) <= int(cells[4])
        # Clifford input: envelope probes filled in
        assert cells[5] != "" and cells[6] != ""
        assert int(cells[5]) <= int(cells[6])


def test_stats_envelope_empty_for_non_clifford(tmp_path, tfim):
    from cliffold import PauliTerm, rotation

    c = Circuit(2, (rotation(PauliTerm.from_label("X0", 2), 0.3),))
    circ = tmp_path / "rot.json"
    circ.write_text(dumps_circuit(c))
    out = tmp_path / "out"
    assert main(["stats", "--hamiltonian", tfim, "--circuit", str(circ),
                 "--out", str(out)]) == 0
    lines = (out / "stats.csv").read_text().strip().split("\n")
    for line in lines[1:]:
        cells = line.split(",")
        assert cells[5] == "" and cells[6] == ""


# -- sweep -------------------------------------------------------------------------


def test_sweep_grid(tmp_path, bell):
    out = tmp_path / "out"
    code = main(["sweep", "--hamiltonian", bell, "--clusters", "0;1",
                 "--populations-grid", "2,3", "--offspring-grid", "2",
                 "--max-iter", "2", "--out", str(out)])
    assert code == 0
    lines = (out / "sweep.csv").read_text().strip().split("\n")
    assert lines[0] == "populations,offspring,energy"
    assert len(lines) == 3
    assert lines[1].startswith("2,2,") and lines[2].startswith("3,2,")
    for line in lines[1:]:
        float(line.split(",")[2])


def test_sweep_rejects_bad_grid(tmp_path, bell, capsys):
    code = main(["sweep", "--hamiltonian", bell, "--clusters", "0;1",
                 "--populations-grid", "2,x", "--out", str(tmp_path / "o")])
    assert code == 2
    assert "error:" in capsys.readouterr().err


# -- pipeline ----------------------------------------------------------------------


def test_pipeline_stages_and_monotone_chain(tmp_path, bell):
    out = tmp_path / "out"
    code = main(["pipeline", "--hamiltonian", bell, "--clusters", "0;1",
                 "--populations", "8", "--offspring", "6", "--max-iter", "10",
                 "--out", str(out)])
    assert code == 0
    summary = _json(out / "summary.json")
    for stage, status in summary["stages"].items():
        assert not status.startswith("failed"), f"{stage}: {status}"
    e = summary["energies"]
    assert abs(e["exact"] - (-2.0)) < 1e-12
    assert abs(e["reference"] - (-1.0)) < 1e-6
    assert e["clifford"] <= e["reference"] + 1e-9
    assert e["near_clifford"] <= e["clifford"] + 1e-9
    assert summary["monotone_chain_ok"]
    assert summary["errors_vs_exact"]["reference"] >= -1e-9
    assert summary["cardinalities"]["initial"] == 2
    for name in ("reference.json", "best_circuit.json", "energy_trace.csv",
                 "fold_report.csv", "ncliff_circuit.json", "fidelity.csv",
                 "summary.json", "manifest.json"):
        assert (out / name).exists(), name


# -- rerun -------------------------------------------------------------------------


def test_rerun_reproduces_bytes(tmp_path, tfim, cx_h):
    out1 = tmp_path / "a"
    main(["fold", "--hamiltonian", tfim, "--circuit", cx_h, "--out", str(out1)])
    out2 = tmp_path / "b"
    assert main(["rerun", str(out1 / "manifest.json"), "--out", str(out2)]) == 0
    for name in ("folded.txt", "fold_report.csv", "manifest.json"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_rerun_defaults_to_manifest_directory(tmp_path, tfim, cx_h):
    out = tmp_path / "a"
    main(["fold", "--hamiltonian", tfim, "--circuit", cx_h, "--out", str(out)])
    before = (out / "folded.txt").read_bytes()
    assert main(["rerun", str(out / "manifest.json")]) == 0
    assert (out / "folded.txt").read_bytes() == before


def test_rerun_detects_changed_input(tmp_path, tfim, cx_h, capsys):
    out = tmp_path / "a"
    main(["fold", "--hamiltonian", tfim, "--circuit", cx_h, "--out", str(out)])
    with open(tfim, "a") as fh:
        fh.write("0.25 0 Z0\n")
    code = main(["rerun", str(out / "manifest.json"), "--out", str(tmp_path / "b")])
    assert code == 2
    assert "changed" in capsys.readouterr().err


def test_rerun_rejects_foreign_json(tmp_path, capsys):
    bogus = tmp_path / "manifest.json"
    bogus.write_text(json.dumps({"format": "something-else/9"}))
    assert main(["rerun", str(bogus)]) == 2
    assert "manifest" in capsys.readouterr().err


# -- error handling ----------------------------------------------------------------


def test_missing_input_file(tmp_path, capsys):
    code = main(["exact", "--hamiltonian", str(tmp_path / "nope.txt"),
                 "--out", str(tmp_path / "o")])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_bad_gamma_flag(tmp_path, tfim, capsys):
    code = main(["reference", "--hamiltonian", tfim, "--clusters", "0;1",
                 "--gamma", "huge", "--out", str(tmp_path / "o")])
    assert code == 2
    assert "gamma" in capsys.readouterr().err


def test_malformed_hamiltonian_text(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("# qubits: 2\n-1 0 Z0 Q1\n")
    code = main(["exact", "--hamiltonian", str(bad), "--out", str(tmp_path / "o")])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_console_script_version():
    proc = subprocess.run(
        [sys.executable, "-c",
         "import sys; from cliffold.cli import main; sys.exit(main(['--version']))"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip()
