"""Command-line front end: one geometry in, one Hamiltonian file out."""

from __future__ import annotations

import argparse
import os
import sys

from . import __version__
from .errors import SCFConvergenceError, SpecError, ToolchainMissingError
from .generate import MoleculeSpec, generate, parse_geometry

EXIT_OK = 0
EXIT_SPEC = 2
EXIT_SCF = 3
EXIT_TOOLCHAIN = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hamgen",
        description=(
            "Generate a molecular qubit Hamiltonian in the plain-text "
            "Pauli-sum format."
        ),
    )
    parser.add_argument(
        "--geometry",
        required=True,
        help=(
            "inline atoms 'El x y z; El x y z' (angstrom) or a path to a "
            "file with one atom per line"
        ),
    )
    parser.add_argument("--basis", default="sto-3g", help="basis-set name")
    parser.add_argument(
        "--active",
        type=int,
        default=None,
        metavar="N",
        help=(
            "keep an N-spin-orbital active window (default: whole space); "
            "the lowest-energy orbitals are selected"
        ),
    )
    parser.add_argument(
        "--frozen-core",
        action="store_true",
        help="drop filled shells below the valence space",
    )
    parser.add_argument(
        "--encoding",
        default="jordan-wigner",
        help="fermion-to-qubit mapping name",
    )
    parser.add_argument("--out", required=True, help="output Hamiltonian path")
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        geometry_arg = args.geometry
        if os.path.isfile(geometry_arg):
            with open(geometry_arg, "r", encoding="utf-8") as fh:
                geometry_arg = fh.read()
        spec = MoleculeSpec(
            atoms=parse_geometry(geometry_arg),
            basis=args.basis,
            active=args.active,
            encoding=args.encoding,
            frozen_core=args.frozen_core,
        )
        generate(spec, args.out)
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    except SCFConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCF
    except ToolchainMissingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TOOLCHAIN
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    print(args.out)
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
