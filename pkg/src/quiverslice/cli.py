"""Batch JSON command line.

Every subcommand reads one JSON document (``--in`` or stdin) and writes one
(``--out`` or stdout).  Exit status: 0 success, 1 a check failed, 2 the
arguments or the input could not be used.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any

from .duality import duality_table
from .exactalg import DimensionError
from .grassmann import (chart_coords, classify_slice, decomposition_census, orbit_type, psi_global, psi_local,
                        psi_tilde)
from .library import load_library
from .maffei import phi, phi_tilde, slice_partition
from .orbits import SliceElement, class_of
from .quiverdata import EmptyQuiverVariety, dimension_identity, is_nonempty, maffei_dims, to_gl_data
from .quiverrep import ContractError, is_stable
from .serialize import (DecodeError, class_to_json, flag_from_json, flag_to_json, gl_data_to_json, input_from_json,
                        input_to_json, lattice_flag_to_json, lattice_from_json, lattice_to_json, maffei_dims_to_json,
                        matrix_from_json, matrix_to_json, quadruple_from_json, scalar_from_json, scalar_to_json)
from .verify import SUITES, ConfigError, VerifyConfig, human_summary, report_bytes, run_verify

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read_input(path: str | None, required: bool = True) -> Any:
    if path is None and not required:
        return {}
    try:
        text = Path(path).read_text() if path and path != "-" else sys.stdin.read()
    except OSError as exc:
        raise UsageError(f"cannot read input: {exc}") from exc
    if not text.strip():
        if required:
            raise UsageError("empty input")
        return {}
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"input is not JSON: {exc}") from exc


def _write_output(path: str | None, data: bytes) -> None:
    if path and path != "-":
        Path(path).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def _dump(obj) -> bytes:
    return (json.dumps(obj, indent=1, sort_keys=True, ensure_ascii=False) + "\n").encode()


def _partition_arg(obj, key: str) -> tuple[int, ...]:
    try:
        parts = tuple(int(x) for x in obj[key])
    except (KeyError, TypeError, ValueError) as exc:
        raise DecodeError(f"{key} must be a list of integers") from exc
    return parts


# subcommands ---------------------------------------------------------------------

def cmd_transform(args) -> tuple[dict, int]:
    q = input_from_json(_read_input(args.input))
    out: dict = {"input": input_to_json(q), "nonempty": is_nonempty(q)}
    try:
        gl = to_gl_data(q)
    except EmptyQuiverVariety as exc:
        out["error"] = str(exc)
        return out, EXIT_OK
    lhs, rhs = dimension_identity(q)
    out.update(gl_data=gl_data_to_json(gl), maffei_dims=maffei_dims_to_json(maffei_dims(q)),
               dimension_identity={"lhs": lhs, "rhs": rhs, "equal": lhs == rhs})
    return out, EXIT_OK if lhs == rhs else EXIT_FAIL


def cmd_phi(args) -> tuple[dict, int]:
    m = quadruple_from_json(_read_input(args.input))
    y = phi(m)
    gl = to_gl_data(m.input)
    out = {"lambda": list(slice_partition(m.input)), "y": matrix_to_json(y), "class": class_to_json(class_of(y, gl.E)),
           "stable": is_stable(m)}
    if out["stable"]:
        _, flag = phi_tilde(m)
        out["flag"] = flag_to_json(flag)
        out["labels"] = [scalar_to_json(b) for b in gl.b]
    return out, EXIT_OK


def cmd_psi(args) -> tuple[dict, int]:
    obj = _read_input(args.input)
    lam = _partition_arg(obj, "lambda")
    try:
        s = SliceElement(lam, matrix_from_json(obj["element"]))
    except KeyError as exc:
        raise DecodeError("psi needs lambda and element") from exc
    except ValueError as exc:
        raise DecodeError(str(exc)) from exc
    b = _partition_arg(obj, "b") if "b" in obj else tuple(s.lam)
    E = [scalar_from_json(e) for e in obj["E"]] if "E" in obj else None
    L = psi_local(s, b) if E is None else psi_global(s, b, E)
    spectrum = E if E is not None else [Fraction(0)]
    out = {"lattice": lattice_to_json(L), "orbit_type": class_to_json(orbit_type(L, spectrum))}
    f1 = chart_coords(L, b)
    out["chart"] = None if f1 is None else matrix_to_json(f1)
    if "flag" in obj:
        flag = flag_from_json(obj["flag"], s.mat.rows)
        labels = [scalar_from_json(x) for x in obj.get("labels", [])]
        out["lattice_flag"] = lattice_flag_to_json(psi_tilde(s, flag, b, labels, E=E))
    return out, EXIT_OK


def cmd_classify(args) -> tuple[dict, int]:
    obj = _read_input(args.input)
    L = lattice_from_json(obj.get("lattice", obj))
    bound = obj.get("bound") if isinstance(obj, dict) else None
    b = classify_slice(L, bound)
    out: dict = {"b": None if b is None else list(b)}
    if b is not None:
        out["chart"] = matrix_to_json(chart_coords(L, b))
    E = [scalar_from_json(e) for e in obj["E"]] if "E" in obj else list(L.poles()) or [Fraction(0)]
    out["orbit_type"] = class_to_json(orbit_type(L, E))
    return out, EXIT_OK


def cmd_census(args) -> tuple[dict, int]:
    obj = _read_input(args.input, required=False)
    mu = _partition_arg(obj, "mu") if "mu" in obj else (2, 2)
    m = int(obj.get("m", 2))
    samples = int(obj.get("samples", 6 * args.trials))
    seed = int(obj.get("seed", args.seed))
    r = decomposition_census(mu, m, samples, seed)
    out = {"mu": list(r.mu), "m": r.m, "samples": r.samples, "seed": seed,
           "tally": [[list(b), k] for b, k in r.tally.items()], "failures": r.failures, "ok": r.ok}
    return out, EXIT_OK if r.ok else EXIT_FAIL


def cmd_duality(args) -> tuple[dict, int]:
    obj = _read_input(args.input, required=False)
    rows = duality_table(int(obj.get("max_m", 3)), int(obj.get("max_n", 3)), int(obj.get("max_N", 6)))
    failed = [r for r in rows if not r.passed]
    out = {"rows": [{"identity": r.identity, "params": r.params, "lhs": r.lhs, "rhs": r.rhs, "passed": r.passed}
                    for r in rows],
           "summary": {"rows": len(rows), "failed": len(failed)}}
    return out, EXIT_FAIL if failed else EXIT_OK


def cmd_verify(args) -> tuple[bytes, int]:
    suites = tuple(s.strip() for s in args.suites.split(",") if s.strip()) if args.suites else SUITES
    try:
        cfg = VerifyConfig(seed=args.seed, max_n=args.max_n, max_dim=args.max_dim, trials=args.trials,
                           suites=suites, library=args.library, only=args.only)
    except ConfigError as exc:
        raise UsageError(str(exc)) from exc
    if args.library:
        try:
            load_library(args.library)
        except (OSError, KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"cannot load library {args.library}: {exc}") from exc
    report = run_verify(cfg)
    print(human_summary(report), file=sys.stderr)
    return report_bytes(report), EXIT_OK if report["passed"] else EXIT_FAIL


COMMANDS = {
    "transform": (cmd_transform, "quiver data (n, v, d, c) to GL data, tilde dimensions and the dimension identity"),
    "phi": (cmd_phi, "slice point (and kernel flag) of a quadruple"),
    "psi": (cmd_psi, "lattice of a slice element, optionally with a flag"),
    "classify": (cmd_classify, "slice piece and orbit type of a lattice"),
    "census": (cmd_census, "sort random lattices of type at most mu into slice pieces"),
    "duality": (cmd_duality, "table of skew, symmetric and mixed duality identities"),
    "verify": (cmd_verify, "run the seeded verification suites"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quiverslice", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--in", dest="input", help="input JSON file (default stdin)")
        p.add_argument("--out", dest="output", help="output JSON file (default stdout)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--trials", type=int, default=10)
        if name == "verify":
            p.add_argument("--max-n", type=int, default=4)
            p.add_argument("--max-dim", type=int, default=3)
            p.add_argument("--suites", help=f"comma separated subset of {','.join(SUITES)}")
            p.add_argument("--library", help="instance library JSON (default: bundled)")
            p.add_argument("--only", help="report a single check id")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    handler = COMMANDS[args.command][0]
    try:
        result, code = handler(args)
    except (UsageError, DecodeError, DimensionError, ContractError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _write_output(args.output, result if isinstance(result, bytes) else _dump(result))
    return code


if __name__ == "__main__":
    sys.exit(main())
