"""Batch command-line front-end.

Every subcommand writes its artifacts plus a ``manifest.json`` into the
``--out`` directory.  The manifest records the tool version, the fully
resolved configuration, and sha256 digests of the input files — and no
timestamps — so ``cliffold rerun manifest.json --out elsewhere``
reproduces the artifacts byte for byte.

Exit codes: 0 success, 2 parse/input error, 3 non-convergence,
4 feasibility cap exceeded.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__, dense, gates, pauli
from .errors import CapExceededError, ConvergenceError, ParseError
from .folding import fold_circuit
from .gates import Circuit, Partition
from .optimizer import (
    GAConfig,
    PowerMethodBackend,
    ReferenceBudget,
    near_clifford_sweep,
    parametrized_form,
    run_search,
)
from .reference import PowerMethodConfig, power_method
from .simulator import exact_ground, fidelity_table

MANIFEST_FORMAT = "cliffold-manifest/1"
STATS_PROBE_OFFSET = 0.37  # offset from the Clifford angle for envelope probes


def _sha256(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_text(out_dir: Path, name: str, text: str) -> str:
    (out_dir / name).write_text(text, encoding="utf-8")
    return name


def _write_json(out_dir: Path, name: str, obj) -> str:
    return _write_text(
        out_dir, name, json.dumps(obj, indent=2, sort_keys=True) + "\n"
    )


def _write_manifest(
    out_dir: Path, subcommand: str, config: dict, inputs: dict[str, str],
    outputs: list[str],
) -> None:
    manifest = {
        "format": MANIFEST_FORMAT,
        "tool_version": __version__,
        "subcommand": subcommand,
        "config": config,
        "inputs": {
            key: {"path": str(Path(path).resolve()), "sha256": _sha256(path)}
            for key, path in inputs.items()
        },
        "outputs": sorted(outputs),
    }
    _write_json(out_dir, "manifest.json", manifest)


def _vec_json(vec) -> list[list[float]]:
    return [[float(v.real), float(v.imag)] for v in vec]


def _gamma_value(raw: str):
    if raw == "auto":
        return "auto"
    try:
        return float(raw)
    except ValueError as exc:
        raise ParseError(f"--gamma must be a number or 'auto', got {raw!r}") from exc


def _power_config(config: dict) -> PowerMethodConfig:
    return PowerMethodConfig(
        gamma=config["gamma"],
        tol=config["tol"],
        max_iter=config["max_iter"],
        seed=config["seed"],
        restarts=config["restarts"],
    )


def _ga_config(config: dict) -> GAConfig:
    return GAConfig(
        n_populations=config["populations"],
        n_offspring=config["offspring"],
        max_iter=config.get("ga_max_iter", config.get("max_iter", 20)),
        patience_limit=config["patience"],
        temperature_initial=config["t0"],
        temperature_decay=config["decay"],
        cross_cluster_only=config["cross_cluster_only"],
        seed=config["seed"],
    )


# -- subcommand bodies (take a plain config dict so `rerun` can replay them) --


def _run_fold(config: dict, out_dir: Path) -> int:
    h = pauli.load(config["hamiltonian"])
    circuit = gates.load(config["circuit"])
    folded, report = fold_circuit(h, circuit)
    outputs = [
        _write_text(out_dir, "folded.txt", pauli.dumps(folded)),
        _write_text(out_dir, "fold_report.csv", report.to_csv()),
    ]
    _write_manifest(
        out_dir, "fold", config,
        {"hamiltonian": config["hamiltonian"], "circuit": config["circuit"]},
        outputs,
    )
    return 0


def _run_reference(config: dict, out_dir: Path) -> int:
    h = pauli.load(config["hamiltonian"])
    partition = Partition.from_spec(config["clusters"])
    result = power_method(h, partition, _power_config(config))
    payload = {
        "energy": result.energy,
        "converged": result.converged,
        "sweeps": result.sweeps,
        "cluster_states": [_vec_json(v) for v in result.state.vectors],
        "clusters": [list(c) for c in partition.clusters],
    }
    outputs = [_write_json(out_dir, "reference.json", payload)]
    _write_manifest(
        out_dir, "reference", config, {"hamiltonian": config["hamiltonian"]}, outputs
    )
    return 0 if result.converged else 3


def _run_optimize(config: dict, out_dir: Path) -> int:
    h = pauli.load(config["hamiltonian"])
    partition = Partition.from_spec(config["clusters"])
    result = run_search(h, partition, _ga_config(config))
    folded, report = fold_circuit(h, result.circuit)
    payload = {
        "energy": result.energy,
        "baseline_energy": result.baseline_energy,
        "generations": result.generations,
        "gate_count": len(result.circuit),
        "folded_cardinality": folded.cardinality,
    }
    outputs = [
        _write_text(out_dir, "best_circuit.json", gates.dumps(result.circuit)),
        _write_text(out_dir, "energy_trace.csv", result.trace_csv()),
        _write_text(out_dir, "fold_report.csv", report.to_csv()),
        _write_json(out_dir, "search.json", payload),
    ]
    _write_manifest(
        out_dir, "optimize", config, {"hamiltonian": config["hamiltonian"]}, outputs
    )
    return 0


def _run_near_clifford(config: dict, out_dir: Path) -> int:
    h = pauli.load(config["hamiltonian"])
    partition = Partition.from_spec(config["clusters"])
    circuit = gates.load(config["circuit"])
    cfg = GAConfig(seed=config["seed"])
    result = near_clifford_sweep(h, circuit, partition, cfg)
    replaced = (
        None
        if result.gate_index is None
        else circuit.gates[result.gate_index].kind
    )
    payload = {
        "energy": result.energy,
        "clifford_energy": result.clifford_energy,
        "gate_index": result.gate_index,
        "replaced_kind": replaced,
        "rotation_kind": (
            None
            if result.gate_index is None
            else result.circuit.gates[result.gate_index].kind
        ),
        "tau": result.tau,
        "angle_deviation": (
            None if result.tau is None
            else result.tau - _clifford_angle_of(circuit, result.gate_index)
        ),
        "notice": result.notice,
    }
    outputs = [
        _write_text(out_dir, "ncliff_circuit.json", gates.dumps(result.circuit)),
        _write_json(out_dir, "ncliff.json", payload),
    ]
    _write_manifest(
        out_dir, "near-clifford", config,
        {"hamiltonian": config["hamiltonian"], "circuit": config["circuit"]},
        outputs,
    )
    return 0


def _clifford_angle_of(circuit: Circuit, index: int) -> float:
    pg = parametrized_form(circuit.gates[index], circuit.n_qubits)
    return pg.angle


def _run_exact(config: dict, out_dir: Path) -> int:
    h = pauli.load(config["hamiltonian"])
    spectrum = exact_ground(h, cap=config["cap"])
    payload = {
        "n_qubits": h.n_qubits,
        "ground_energy": spectrum.ground_energy,
        "eigenvalues": [float(v) for v in spectrum.eigenvalues],
        "degenerate_groups": [list(g) for g in spectrum.groups],
    }
    outputs = [_write_json(out_dir, "spectrum.json", payload)]
    _write_manifest(
        out_dir, "exact", config, {"hamiltonian": config["hamiltonian"]}, outputs
    )
    return 0


def _run_fidelity(config: dict, out_dir: Path) -> int:
    h = pauli.load(config["hamiltonian"])
    partition = Partition.from_spec(config["clusters"])
    circuit = gates.load(config["circuit"]) if config.get("circuit") else None
    reference = power_method(h, partition, _power_config(config))
    spectrum = exact_ground(h, cap=config["cap"])
    table = fidelity_table(reference.state, circuit, spectrum, cap=config["cap"])
    outputs = [_write_text(out_dir, "fidelity.csv", table.to_csv())]
    inputs = {"hamiltonian": config["hamiltonian"]}
    if config.get("circuit"):
        inputs["circuit"] = config["circuit"]
    _write_manifest(out_dir, "fidelity", config, inputs, outputs)
    return 0


def _stats_rows(h, circuit: Circuit) -> str:
    ceiling = 4 ** h.n_qubits
    _, report = fold_circuit(h, circuit)
    traces = []
    if circuit.is_clifford:
        for i, g in enumerate(circuit.gates):
            pg = parametrized_form(g, circuit.n_qubits)
            if pg is None:
                continue
            probe = circuit.replaced(
                i, replace(pg, angle=pg.angle + STATS_PROBE_OFFSET)
            )
            _, probe_report = fold_circuit(h, probe)
            traces.append(
                [h.cardinality] + [s.cardinality for s in probe_report.steps]
            )
    base = [h.cardinality] + [s.cardinality for s in report.steps]
    lines = ["step,gate_index,kind,cardinality,ceiling,envelope_min,envelope_max"]

    def envelope(step: int) -> tuple[str, str]:
        if not traces:
            return "", ""
        vals = [t[step] for t in traces]
        return str(min(vals)), str(max(vals))

    lo, hi = envelope(0)
    lines.append(f"0,-1,initial,{base[0]},{ceiling},{lo},{hi}")
    for pos, step in enumerate(report.steps, start=1):
        lo, hi = envelope(pos)
        lines.append(
            f"{pos},{step.gate_index},{step.kind},{step.cardinality},{ceiling},{lo},{hi}"
        )
    return "\n".join(lines) + "\n"


def _run_stats(config: dict, out_dir: Path) -> int:
    h = pauli.load(config["hamiltonian"])
    circuit = gates.load(config["circuit"])
    outputs = [_write_text(out_dir, "stats.csv", _stats_rows(h, circuit))]
    _write_manifest(
        out_dir, "stats", config,
        {"hamiltonian": config["hamiltonian"], "circuit": config["circuit"]},
        outputs,
    )
    return 0


def _run_sweep(config: dict, out_dir: Path) -> int:
    h = pauli.load(config["hamiltonian"])
    partition = Partition.from_spec(config["clusters"])
    lines = ["populations,offspring,energy"]
    for pops in config["populations_grid"]:
        for offs in config["offspring_grid"]:
            cfg = GAConfig(
                n_populations=pops,
                n_offspring=offs,
                max_iter=config["max_iter"],
                seed=config["seed"],
            )
            result = run_search(h, partition, cfg)
            lines.append(f"{pops},{offs},{result.energy:.17g}")
    outputs = [_write_text(out_dir, "sweep.csv", "\n".join(lines) + "\n")]
    _write_manifest(
        out_dir, "sweep", config, {"hamiltonian": config["hamiltonian"]}, outputs
    )
    return 0


def _run_pipeline(config: dict, out_dir: Path) -> int:
    h = pauli.load(config["hamiltonian"])
    partition = Partition.from_spec(config["clusters"])
    stages: dict[str, str] = {}
    energies: dict[str, float | None] = {
        "reference": None, "clifford": None, "near_clifford": None, "exact": None,
    }
    cardinalities: dict[str, int | None] = {
        "initial": h.cardinality, "clifford_folded": None,
        "near_clifford_folded": None,
    }
    outputs: list[str] = []
    ground_fidelity = None

    backend = PowerMethodBackend(gamma=config["gamma"], seed=config["seed"])
    # the pipeline's final (tight) re-solves follow the user's power flags
    tight = ReferenceBudget(
        tol=config["tol"], max_iter=config["max_iter"], restarts=config["restarts"]
    )
    search = sweep = None
    try:
        cfg_pm = _power_config(config)
        reference = power_method(h, partition, cfg_pm)
        energies["reference"] = reference.energy
        stages["reference"] = "ok" if reference.converged else "did not converge"
        outputs.append(_write_json(out_dir, "reference.json", {
            "energy": reference.energy,
            "converged": reference.converged,
            "sweeps": reference.sweeps,
            "cluster_states": [_vec_json(v) for v in reference.state.vectors],
        }))
    except Exception as exc:  # noqa: BLE001 - record the failure, skip dependents
        stages["reference"] = f"failed: {exc}"

    if "reference" in stages and not stages["reference"].startswith("failed"):
        try:
            search = run_search(
                h, partition, _ga_config(config),
                ref_backend=backend, tight_budget=tight,
            )
            energies["clifford"] = search.energy
            folded, report = fold_circuit(h, search.circuit)
            cardinalities["clifford_folded"] = folded.cardinality
            outputs.append(
                _write_text(out_dir, "best_circuit.json", gates.dumps(search.circuit))
            )
            outputs.append(
                _write_text(out_dir, "energy_trace.csv", search.trace_csv())
            )
            outputs.append(
                _write_text(out_dir, "fold_report.csv", report.to_csv())
            )
            stages["optimize"] = "ok"
        except Exception as exc:  # noqa: BLE001
            stages["optimize"] = f"failed: {exc}"

    if search is not None and stages.get("optimize") == "ok":
        try:
            sweep = near_clifford_sweep(
                h, search.circuit, partition,
                GAConfig(seed=config["seed"]),
                ref_backend=backend, tight_budget=tight,
            )
            energies["near_clifford"] = sweep.energy
            folded_n, _ = fold_circuit(h, sweep.circuit)
            cardinalities["near_clifford_folded"] = folded_n.cardinality
            outputs.append(
                _write_text(out_dir, "ncliff_circuit.json", gates.dumps(sweep.circuit))
            )
            stages["near_clifford"] = "ok" if sweep.notice is None else sweep.notice
        except Exception as exc:  # noqa: BLE001
            stages["near_clifford"] = f"failed: {exc}"

    spectrum = None
    if h.n_qubits <= config["cap"]:
        try:
            spectrum = exact_ground(h, cap=config["cap"])
            energies["exact"] = spectrum.ground_energy
            stages["exact"] = "ok"
        except Exception as exc:  # noqa: BLE001
            stages["exact"] = f"failed: {exc}"
    else:
        stages["exact"] = f"skipped: {h.n_qubits} qubits above cap {config['cap']}"

    if spectrum is not None and sweep is not None:
        try:
            table = fidelity_table(
                sweep.state, sweep.circuit, spectrum, cap=config["cap"]
            )
            ground_fidelity = table.ground_fidelity
            outputs.append(_write_text(out_dir, "fidelity.csv", table.to_csv()))
            stages["fidelity"] = "ok"
        except Exception as exc:  # noqa: BLE001
            stages["fidelity"] = f"failed: {exc}"

    errors_vs_exact = None
    if energies["exact"] is not None:
        errors_vs_exact = {
            key: (None if energies[key] is None
                  else energies[key] - energies["exact"])
            for key in ("reference", "clifford", "near_clifford")
        }

    chain = [
        energies["exact"], energies["near_clifford"],
        energies["clifford"], energies["reference"],
    ]
    known = [e for e in chain if e is not None]
    monotone = all(a <= b + 1e-9 for a, b in zip(known, known[1:]))

    summary = {
        "energies": energies,
        "errors_vs_exact": errors_vs_exact,
        "cardinalities": cardinalities,
        "ground_group_fidelity": ground_fidelity,
        "monotone_chain_ok": monotone,
        "stages": stages,
    }
    outputs.append(_write_json(out_dir, "summary.json", summary))
    _write_manifest(
        out_dir, "pipeline", config, {"hamiltonian": config["hamiltonian"]}, outputs
    )
    return 0


_RUNNERS = {
    "fold": _run_fold,
    "reference": _run_reference,
    "optimize": _run_optimize,
    "near-clifford": _run_near_clifford,
    "exact": _run_exact,
    "fidelity": _run_fidelity,
    "stats": _run_stats,
    "sweep": _run_sweep,
    "pipeline": _run_pipeline,
}


def _run_rerun(args) -> int:
    manifest_path = Path(args.manifest)
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read manifest: {exc}") from exc
    if manifest.get("format") != MANIFEST_FORMAT:
        raise ParseError("not a cliffold manifest")
    sub = manifest["subcommand"]
    if sub not in _RUNNERS:
        raise ParseError(f"manifest names unknown subcommand {sub!r}")
    for key, rec in manifest.get("inputs", {}).items():
        if _sha256(rec["path"]) != rec["sha256"]:
            raise ParseError(
                f"input {key} at {rec['path']} changed since the manifest was written"
            )
    out_dir = Path(args.out) if args.out else manifest_path.parent
    out_dir.mkdir(parents=True, exist_ok=True)
    config = dict(manifest["config"])
    # config paths were resolved when first written
    return _RUNNERS[sub](config, out_dir)


# -- argument parsing -----------------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--seed", type=int, default=0)


def _add_power_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--gamma", default="1.0",
                   help="power-method shift, a number or 'auto'")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--max-iter", type=int, default=10000)
    p.add_argument("--restarts", type=int, default=5)


def _add_ga_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--populations", type=int, default=12)
    p.add_argument("--offspring", type=int, default=9)
    p.add_argument("--max-iter", type=int, default=20)
    p.add_argument("--patience", type=int, default=4)
    p.add_argument("--t0", type=float, default=0.02)
    p.add_argument("--decay", type=float, default=0.9)
    p.add_argument("--cross-cluster-only", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cliffold",
        description="Cluster-product ground states with folded circuits",
    )
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="subcommand", required=True)

    p = subs.add_parser("fold", help="fold a circuit into a Hamiltonian")
    p.add_argument("--hamiltonian", required=True)
    p.add_argument("--circuit", required=True)
    _add_common(p)

    p = subs.add_parser("reference", help="product-state power-method baseline")
    p.add_argument("--hamiltonian", required=True)
    p.add_argument("--clusters", required=True)
    _add_power_flags(p)
    _add_common(p)

    p = subs.add_parser("optimize", help="genetic circuit search")
    p.add_argument("--hamiltonian", required=True)
    p.add_argument("--clusters", required=True)
    _add_ga_flags(p)
    _add_common(p)

    p = subs.add_parser("near-clifford", help="single-gate parametrization sweep")
    p.add_argument("--hamiltonian", required=True)
    p.add_argument("--clusters", required=True)
    p.add_argument("--circuit", required=True)
    _add_common(p)

    p = subs.add_parser("exact", help="dense spectrum (small registers)")
    p.add_argument("--hamiltonian", required=True)
    p.add_argument("--cap", type=int, default=dense.FEASIBILITY_CAP)
    _add_common(p)

    p = subs.add_parser("fidelity", help="eigenspace overlap table")
    p.add_argument("--hamiltonian", required=True)
    p.add_argument("--clusters", required=True)
    p.add_argument("--circuit", default=None)
    p.add_argument("--cap", type=int, default=dense.FEASIBILITY_CAP)
    _add_power_flags(p)
    _add_common(p)

    p = subs.add_parser("stats", help="term-growth trace and ceiling")
    p.add_argument("--hamiltonian", required=True)
    p.add_argument("--circuit", required=True)
    _add_common(p)

    p = subs.add_parser("sweep", help="population/offspring grid search")
    p.add_argument("--hamiltonian", required=True)
    p.add_argument("--clusters", required=True)
    p.add_argument("--populations-grid", default="12",
                   help="comma-separated population counts")
    p.add_argument("--offspring-grid", default="9",
                   help="comma-separated offspring counts")
    p.add_argument("--max-iter", type=int, default=20)
    _add_common(p)

    p = subs.add_parser("pipeline", help="reference, search, sweep, exact, fidelity")
    p.add_argument("--hamiltonian", required=True)
    p.add_argument("--clusters", required=True)
    _add_ga_flags(p)
    p.add_argument("--gamma", default="auto",
                   help="power-method shift, a number or 'auto'")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--pm-max-iter", type=int, default=10000)
    p.add_argument("--restarts", type=int, default=5)
    p.add_argument("--cap", type=int, default=dense.FEASIBILITY_CAP)
    _add_common(p)

    p = subs.add_parser("rerun", help="replay a run from its manifest")
    p.add_argument("manifest")
    p.add_argument("--out", default=None)

    return parser


def _parse_grid(raw: str) -> list[int]:
    try:
        vals = [int(v) for v in raw.split(",") if v.strip()]
    except ValueError as exc:
        raise ParseError(f"bad grid {raw!r}") from exc
    if not vals:
        raise ParseError("empty grid")
    return vals


def _config_from_args(args) -> dict:
    sub = args.subcommand
    config: dict = {"seed": getattr(args, "seed", 0)}
    if hasattr(args, "hamiltonian"):
        config["hamiltonian"] = str(Path(args.hamiltonian).resolve())
    if getattr(args, "circuit", None):
        config["circuit"] = str(Path(args.circuit).resolve())
    if hasattr(args, "clusters"):
        config["clusters"] = args.clusters
    if hasattr(args, "gamma"):
        config["gamma"] = _gamma_value(args.gamma)
        config["tol"] = args.tol
        config["restarts"] = args.restarts
        config["max_iter"] = (
            args.pm_max_iter if sub == "pipeline" else args.max_iter
        )
    if hasattr(args, "populations"):
        config["populations"] = args.populations
        config["offspring"] = args.offspring
        config["ga_max_iter" if sub == "pipeline" else "max_iter"] = args.max_iter
        config["patience"] = args.patience
        config["t0"] = args.t0
        config["decay"] = args.decay
        config["cross_cluster_only"] = args.cross_cluster_only
    if hasattr(args, "cap"):
        config["cap"] = args.cap
    if sub == "sweep":
        config["populations_grid"] = _parse_grid(args.populations_grid)
        config["offspring_grid"] = _parse_grid(args.offspring_grid)
        config["max_iter"] = args.max_iter
    return config


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.subcommand == "rerun":
            return _run_rerun(args)
        config = _config_from_args(args)
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        return _RUNNERS[args.subcommand](config, out_dir)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
