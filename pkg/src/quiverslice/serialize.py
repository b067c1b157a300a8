"""JSON encodings for every value that crosses the command line.

Scalars are strings "p/q" or "p"; matrices are {"rows", "cols", "entries"}
with entries as a list of rows.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Any

from .exactalg import Matrix, format_scalar, to_scalar
from .grassmann import Lattice, LatticeFlag
from .orbits import ConjClassData, Flag
from .quiverdata import GLData, MaffeiDims, QuiverInput
from .quiverrep import Quadruple


class DecodeError(ValueError):
    """Malformed JSON input."""


def scalar_to_json(x) -> str:
    return format_scalar(to_scalar(x))


def scalar_from_json(x) -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        raise DecodeError(f"scalars must be integers or 'p/q' strings, got {x!r}")
    try:
        return to_scalar(x)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise DecodeError(f"bad scalar {x!r}") from exc


def matrix_to_json(m: Matrix) -> dict:
    return {"rows": m.rows, "cols": m.cols,
            "entries": [[format_scalar(e) for e in m.row(i)] for i in range(m.rows)]}


def matrix_from_json(obj: Any) -> Matrix:
    try:
        rows, cols, entries = int(obj["rows"]), int(obj["cols"]), obj["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise DecodeError("matrix needs rows, cols and entries") from exc
    if len(entries) != rows or any(len(r) != cols for r in entries):
        raise DecodeError(f"entries do not match the declared {rows}x{cols} shape")
    return Matrix(rows, cols, [scalar_from_json(e) for r in entries for e in r])


def input_to_json(q: QuiverInput) -> dict:
    return {"n": q.n, "v": list(q.v), "d": list(q.d), "c": [scalar_to_json(x) for x in q.c]}


def input_from_json(obj: Any) -> QuiverInput:
    try:
        n = int(obj["n"])
        c = [scalar_from_json(x) for x in obj.get("c", [])]
        return QuiverInput(n, tuple(obj["v"]), tuple(obj["d"]), tuple(c))
    except DecodeError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise DecodeError(f"bad quiver input: {exc}") from exc


def quadruple_to_json(m: Quadruple) -> dict:
    return {
        "input": input_to_json(m.input),
        "x": [matrix_to_json(a) for a in m.x],
        "x_bar": [matrix_to_json(a) for a in m.x_bar],
        "p": [matrix_to_json(a) for a in m.p],
        "q": [matrix_to_json(a) for a in m.q],
    }


def quadruple_from_json(obj: Any) -> Quadruple:
    try:
        inp = input_from_json(obj["input"])
        parts = {k: [matrix_from_json(a) for a in obj[k]] for k in ("x", "x_bar", "p", "q")}
    except (KeyError, TypeError) as exc:
        raise DecodeError("quadruple needs input, x, x_bar, p and q") from exc
    try:
        return Quadruple(inp, parts["x"], parts["x_bar"], parts["p"], parts["q"])
    except ValueError as exc:
        raise DecodeError(str(exc)) from exc


def partition_map_to_json(mt: dict) -> list:
    return [[scalar_to_json(e), list(p)] for e, p in mt.items()]


def gl_data_to_json(gl: GLData) -> dict:
    return {
        "N": gl.N,
        "m": gl.m,
        "lambda_check": list(gl.lambda_check),
        "lambda": list(gl.lam),
        "a": list(gl.a),
        "mu_check": list(gl.mu_check),
        "mu": list(gl.mu),
        "b": [scalar_to_json(x) for x in gl.b],
        "E": [scalar_to_json(x) for x in gl.E],
        "mu_tilde": partition_map_to_json(gl.mu_tilde),
        "P_roots": [scalar_to_json(x) for x in gl.P_roots],
    }


def maffei_dims_to_json(md: MaffeiDims) -> dict:
    return {"v_tilde": list(md.v_tilde), "d_tilde": list(md.d_tilde)}


def class_to_json(c: ConjClassData) -> dict:
    return {"E": [scalar_to_json(e) for e in c.E], "mu": [list(c.mu_tilde[e]) for e in c.E]}


def class_from_json(obj: Any) -> ConjClassData:
    try:
        E = [scalar_from_json(e) for e in obj["E"]]
        mus = [tuple(int(x) for x in p) for p in obj["mu"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise DecodeError("class needs E and mu") from exc
    if len(E) != len(mus):
        raise DecodeError("E and mu must have the same length")
    return ConjClassData(tuple(E), dict(zip(E, mus)))


def flag_to_json(F: Flag) -> list:
    return [matrix_to_json(s) for s in F.steps]


def flag_from_json(obj: Any, N: int) -> Flag:
    if not isinstance(obj, list):
        raise DecodeError("a flag is a list of matrices")
    try:
        return Flag.from_spans([matrix_from_json(s) for s in obj], N)
    except ValueError as exc:
        raise DecodeError(str(exc)) from exc


def _principal_entry(terms: dict) -> list:
    """Terms {(e, k): coeff} of one coordinate as LaurentPoly objects, one per pole."""
    out = []
    for e in sorted({e for e, _ in terms}):
        top = max(k for ee, k in terms if ee == e)
        coeffs = [scalar_to_json(terms.get((e, k), 0)) for k in range(top, 0, -1)]
        out.append({"at": scalar_to_json(e), "low": -top, "coeffs": coeffs})
    return out


def lattice_to_json(L: Lattice) -> dict:
    """Generators of L: the standard basis of L_0 followed by the principal parts.

    Each coordinate is a list of LaurentPoly objects {"at": e, "low": -k,
    "coeffs": [...]} meaning Σ coeffs[t]·(z - e)^{low + t}.
    """
    gens = []
    for i in range(L.m):
        gens.append([[{"at": "0", "low": 0, "coeffs": ["1"]}] if j == i else [] for j in range(L.m)])
    for vec in L.vectors():
        coords = [dict() for _ in range(L.m)]
        for (e, i, k), val in vec.items():
            coords[i][(e, k)] = val
        gens.append([_principal_entry(c) for c in coords])
    return {"m": L.m, "gens": gens}


def lattice_from_json(obj: Any) -> Lattice:
    """Inverse of :func:`lattice_to_json`; nonnegative powers are dropped (they lie in L_0)."""
    try:
        m = int(obj["m"])
        vecs = []
        for gen in obj["gens"]:
            if len(gen) != m:
                raise DecodeError("generator length differs from m")
            vec: dict = {}
            for i, coord in enumerate(gen):
                for poly in coord:
                    e = scalar_from_json(poly.get("at", "0"))
                    low = int(poly["low"])
                    for t, cf in enumerate(poly["coeffs"]):
                        power = low + t
                        val = scalar_from_json(cf)
                        if power < 0 and val:
                            key = (e, i, -power)
                            vec[key] = vec.get(key, Fraction(0)) + val
            vecs.append({k: v for k, v in vec.items() if v})
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, DecodeError):
            raise
        raise DecodeError(f"bad lattice: {exc}") from exc
    return Lattice.from_generators(m, [v for v in vecs if v])


def lattice_flag_to_json(flag: LatticeFlag) -> dict:
    return {"a": list(flag.a), "labels": [scalar_to_json(x) for x in flag.labels],
            "steps": [lattice_to_json(L) for L in flag.steps]}
