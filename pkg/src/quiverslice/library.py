"""The frozen instance library behind the verification suites.

``data/library.json`` is produced once by :func:`generate_library` and kept
under version control; suites read it with :func:`load_library` so sampler
behaviour never changes what gets checked.  Regenerate with
``python -m quiverslice.library``.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .exactalg import Matrix, inverse, jordan_type_at
from .maffei import inverse_special, phi
from .orbits import jordan_matrix
from .quiverdata import QuiverInput, to_gl_data
from .quiverrep import Quadruple, is_stable, random_invertible, sample_solution, zero_quadruple
from .serialize import quadruple_from_json, quadruple_to_json

# (n, v, d) shapes sampled with c = 0 and with a generic c
SAMPLED_SHAPES = [
    (2, (1,), (2,)),
    (2, (1,), (3,)),
    (2, (2,), (3,)),
    (3, (1, 1), (1, 1)),
    (3, (1, 0), (2, 0)),
    (3, (0, 1), (0, 2)),
    (3, (1, 1), (1, 2)),
    (3, (1, 1), (2, 1)),
    (3, (2, 1), (3, 0)),
    (4, (0, 1, 1), (0, 1, 1)),
    (4, (0, 1, 1), (1, 1, 1)),
    (4, (0, 1, 2), (0, 0, 2)),
    (4, (0, 0, 1), (0, 0, 2)),
    (4, (0, 1, 0), (0, 2, 0)),
]

GENERIC_C = {2: ("3/2",), 3: ("1/2", "-2"), 4: ("1/2", "3/2", "-1")}
# repeated eigenvalue labels b = (0, 1, 0) and (0, 2, 2, 0)
DEGENERATE_C = {3: ("1", "-1"), 4: ("2", "0", "-2")}


@dataclass(frozen=True)
class Instance:
    ident: str
    origin: str
    quadruple: Quadruple
    stable: bool

    def to_json(self) -> dict:
        return {"id": self.ident, "origin": self.origin, "stable": self.stable,
                "quadruple": quadruple_to_json(self.quadruple)}


def _hand_instances() -> list[Instance]:
    out = []
    inp = QuiverInput(2, (1,), (2,))
    m = Quadruple(inp, [], [], [Matrix.from_rows([[1, 0]])], [Matrix.from_rows([[0], [1]])])
    out.append(Instance("hand-n2-pq-zero", "hand", m, True))
    inp = QuiverInput(2, (1,), (2,), (1,))
    m = Quadruple(inp, [], [], [Matrix.from_rows([[1, 0]])], [Matrix.from_rows([[1], [0]])])
    out.append(Instance("hand-n2-c1", "hand", m, True))
    out.append(Instance("hand-n3-zero-unstable", "hand", zero_quadruple(QuiverInput(3, (1, 1), (1, 1))), False))
    out.append(Instance("hand-n4-zero-unstable", "hand", zero_quadruple(QuiverInput(4, (0, 1, 1), (0, 1, 1))), False))
    out.append(Instance("hand-n3-v0", "hand", zero_quadruple(QuiverInput(3, (0, 0), (1, 1))), True))
    return out


def _sampled(inp: QuiverInput, want_stable: bool, want_generic: bool, tries: int = 40) -> tuple[Quadruple, int] | None:
    gl = to_gl_data(inp)
    for seed in range(tries):
        got = sample_solution(inp, seed)
        if got is None or got[1] != want_stable:
            continue
        if want_generic and inp.is_undeformed() and jordan_type_at(phi(got[0]), 0) != gl.mu:
            continue
        return got[0], seed
    return None


def _inverse_instances() -> list[Instance]:
    rng = random.Random(20)
    out = []
    for mu, n, c in [((2, 1), 2, None), ((3, 1), 3, None), ((2, 2), 2, None), ((1, 1, 1), 2, None)]:
        g = random_invertible(rng, sum(mu))
        y = g @ jordan_matrix(mu) @ inverse(g)
        m = inverse_special(y, n=n, c=c)
        out.append(Instance(f"inverse-mu{''.join(map(str, mu))}-n{n}", "inverse construction", m, True))
    # general c: y with eigenvalues among b, V_i = Im ∏(y - b_k)
    for blocks, c in [([((2,), 0), ((1,), 1)], (1, -1)), ([((1,), 0), ((1, 1), Fraction(1, 2))], (Fraction(1, 2),))]:
        y0 = Matrix.block_diag([jordan_matrix(lam, e) for lam, e in blocks])
        g = random_invertible(rng, y0.rows)
        y = g @ y0 @ inverse(g)
        m = inverse_special(y, n=len(c) + 1, c=c)
        out.append(Instance(f"inverse-general-c-N{y.rows}-c{'_'.join(str(x) for x in c)}",
                            "inverse construction", m, True))
    return out


def generate_library() -> list[Instance]:
    out = _hand_instances()
    for n, v, d in SAMPLED_SHAPES:
        tag = f"n{n}-v{''.join(map(str, v))}-d{''.join(map(str, d))}"
        variants = [("c0", ()), ("cgen", GENERIC_C[n])]
        if n in DEGENERATE_C:
            variants.append(("cdeg", DEGENERATE_C[n]))
        for label, c in variants:
            inp = QuiverInput(n, v, d, tuple(Fraction(x) for x in c))
            got = _sampled(inp, want_stable=True, want_generic=True)
            if got is not None:
                out.append(Instance(f"{tag}-{label}", f"sampler seed {got[1]}", got[0], True))
        got = _sampled(QuiverInput(n, v, d), want_stable=False, want_generic=False)
        if got is not None:
            out.append(Instance(f"{tag}-c0-unstable", f"sampler seed {got[1]}", got[0], False))
    out.extend(_inverse_instances())
    for inst in out:
        if is_stable(inst.quadruple) != inst.stable:
            raise AssertionError(f"stability flag wrong for {inst.ident}")
    return out


def library_path() -> Path:
    return Path(str(resources.files("quiverslice").joinpath("data/library.json")))


def load_library(path: str | Path | None = None) -> list[Instance]:
    path = library_path() if path is None else Path(path)
    raw = json.loads(path.read_text())
    return [Instance(item["id"], item["origin"], quadruple_from_json(item["quadruple"]), bool(item["stable"]))
            for item in raw["instances"]]


def write_library(path: str | Path | None = None) -> Path:
    path = library_path() if path is None else Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    data = {"instances": [inst.to_json() for inst in generate_library()]}
    path.write_text(json.dumps(data, indent=1, sort_keys=True) + "\n")
    return path


if __name__ == "__main__":
    print(write_library())
