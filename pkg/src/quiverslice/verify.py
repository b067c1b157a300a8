"""Seeded verification harness.

Each suite turns a family of identities into checks; a check carries a
stable id, a status, the JSON of the instance it ran on and a command line
that reruns it.  Reports contain no timings so that equal configurations
give byte-identical output.
"""
from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .duality import duality_table
from .exactalg import Matrix, inverse, jordan_type_at, nullspace
from .grassmann import (chart_coords, classify_slice, decomposition_census, jordan_to_graded, orbit_type,
                        psi_global, psi_local, psi_tilde, rotate, rotated_chart)
from .library import Instance, load_library
from .maffei import (build_tilde, extend_group_element, inverse_special, phi, phi_closed_form,
                     phi_product, phi_tilde, slice_partition, transversality_failures)
from .orbits import Flag, SliceElement, class_of, jordan_matrix, random_nilpotent_slice_element, \
    random_slice_element_with_spectrum, slice_contains
from .partitions import dominates, partitions
from .quiverdata import QuiverInput, dimension_identity, is_nonempty, quiver_from_partitions, tilde_input, \
    to_gl_data, weight_of
from .quiverrep import act, is_solution, is_stable, moment_residuals, random_group_element, random_invertible, \
    sample_solution
from .serialize import input_to_json, matrix_to_json, quadruple_to_json

SUITES = ("transform", "mainlemma", "phi", "psi", "diagram", "census", "duality")
ROTATION_SCALARS = (2, 3, 5)
GLOBAL_SPECTRUM = (Fraction(0), Fraction(1), Fraction(-1, 2))


class ConfigError(ValueError):
    """Unusable verification settings."""


@dataclass(frozen=True)
class VerifyConfig:
    seed: int = 0
    max_n: int = 4
    max_dim: int = 3
    trials: int = 10
    suites: tuple[str, ...] = SUITES
    library: str | None = None
    only: str | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        if self.max_n < 2:
            raise ConfigError("max-n must be at least 2")
        if self.max_dim < 0:
            raise ConfigError("max-dim must be non-negative")
        unknown = sorted(set(self.suites) - set(SUITES))
        if unknown:
            raise ConfigError(f"unknown suites: {', '.join(unknown)}")
        if not self.suites:
            raise ConfigError("no suites selected")
        # canonical order keeps reports independent of how suites were listed
        object.__setattr__(self, "suites", tuple(s for s in SUITES if s in set(self.suites)))

    def to_json(self) -> dict:
        return {"seed": self.seed, "max_n": self.max_n, "max_dim": self.max_dim, "trials": self.trials,
                "suites": list(self.suites), "library": self.library}

    def command(self, suite: str, check_id: str | None = None) -> str:
        parts = ["quiverslice", "verify", "--suites", suite, "--seed", str(self.seed), "--trials",
                 str(self.trials), "--max-n", str(self.max_n), "--max-dim", str(self.max_dim)]
        if self.library:
            parts += ["--library", self.library]
        if check_id:
            parts += ["--only", check_id]
        return " ".join(parts)


@dataclass(frozen=True)
class Check:
    id: str
    passed: bool
    instance: object
    detail: str = ""

    def to_json(self, cfg: VerifyConfig, suite: str) -> dict:
        out = {"id": self.id, "status": "pass" if self.passed else "fail", "instance": self.instance,
               "repro": cfg.command(suite, self.id)}
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class SuiteRun:
    """Collects checks; an exception inside a check body fails only that check."""
    name: str
    checks: list[Check] = field(default_factory=list)

    def run(self, ident: str, instance, body: Callable[[], object]) -> None:
        try:
            result = body()
        except Exception as exc:  # noqa: BLE001 - every failure becomes a report line
            self.checks.append(Check(ident, False, instance, f"{type(exc).__name__}: {exc}"))
            return
        if isinstance(result, tuple):
            ok, detail = result
        else:
            ok, detail = bool(result), ""
        self.checks.append(Check(ident, bool(ok), instance, "" if ok else (detail or "identity does not hold")))


def _tag(seq: Iterable[int]) -> str:
    return "".join(str(x) for x in seq) or "0"


def _input_tag(q: QuiverInput) -> str:
    tag = f"n{q.n}-v{_tag(q.v)}-d{_tag(q.d)}"
    if not q.is_undeformed():
        tag += "-c" + "_".join(str(x) for x in q.c)
    return tag


def _fails(items: list[str]) -> tuple[bool, str]:
    return (not items, "; ".join(items))


# instance sources -------------------------------------------------------------

def sampled_instances(cfg: VerifyConfig) -> list[Instance]:
    """``trials`` extra random solutions on shapes within the size bounds."""
    rng = random.Random(cfg.seed)
    top = min(cfg.max_dim, 2)
    shapes = []
    for n in range(2, min(cfg.max_n, 4) + 1):
        for v in itertools.product(range(top + 1), repeat=n - 1):
            for d in itertools.product(range(top + 1), repeat=n - 1):
                q = QuiverInput(n, v, d)
                if sum(d) and sum((j + 1) * x for j, x in enumerate(d)) <= 6 and is_nonempty(q):
                    shapes.append((n, v, d))
    out = []
    for t in range(cfg.trials):
        if not shapes:
            break
        n, v, d = rng.choice(shapes)
        c = () if rng.random() < 0.5 else tuple(Fraction(rng.randint(-4, 4), rng.randint(1, 2)) for _ in range(n - 1))
        q = QuiverInput(n, v, d, c)
        got = sample_solution(q, rng.randrange(10 ** 6))
        if got is not None:
            out.append(Instance(f"sampled-{t}-{_input_tag(q)}", f"seed {cfg.seed}", got[0], got[1]))
    return out


def instances(cfg: VerifyConfig) -> list[Instance]:
    return load_library(cfg.library) + sampled_instances(cfg)


def _safe_stable(inst: Instance) -> bool:
    try:
        return is_stable(inst.quadruple)
    except Exception:  # noqa: BLE001 - a corrupted point is simply not stable
        return False


# suites -----------------------------------------------------------------------

def suite_transform(cfg: VerifyConfig) -> SuiteRun:
    run = SuiteRun("transform")
    for n in range(2, cfg.max_n + 1):
        for v in itertools.product(range(cfg.max_dim + 1), repeat=n - 1):
            for d in itertools.product(range(cfg.max_dim + 1), repeat=n - 1):
                q = QuiverInput(n, v, d)
                if any(x < 0 for x in weight_of(q)):
                    continue
                tag = _input_tag(q)
                inst = input_to_json(q)

                def identity(q=q):
                    lhs, rhs = dimension_identity(q)
                    return lhs == rhs, f"lhs {lhs} != rhs {rhs}"

                run.run(f"transform/dimension-identity/{tag}", inst, identity)
                if not is_nonempty(q):
                    continue

                def gl_data(q=q):
                    gl = to_gl_data(q)
                    bad = []
                    if sum(gl.lam) != gl.N or sum(gl.mu) != gl.N:
                        bad.append("λ and μ must both have size N")
                    if not dominates(gl.mu, gl.lam):
                        bad.append(f"λ={gl.lam} is not dominated by μ={gl.mu}")
                    tl = to_gl_data(tilde_input(q))
                    if (tl.mu, tl.a) != (gl.mu, gl.a):
                        bad.append("tilde data changes the weight")
                    # only a dominant weight is recovered from (λ, μ)
                    dominant = list(gl.a) == sorted(gl.a, reverse=True)
                    if dominant and quiver_from_partitions(gl.lam, gl.mu, n) != q:
                        bad.append("(λ, μ) does not transform back to (v, d)")
                    return _fails(bad)

                run.run(f"transform/gl-data/{tag}", inst, gl_data)
    return run


def suite_mainlemma(cfg: VerifyConfig) -> SuiteRun:
    run = SuiteRun("mainlemma")
    rng = random.Random(cfg.seed)
    for inst in instances(cfg):
        m = inst.quadruple
        js = {"id": inst.ident, "quadruple": quadruple_to_json(m)}

        def tilde_checks(inst=inst, m=m):
            t = build_tilde(m, check=False)
            tq = t.as_quadruple()
            bad = []
            if not is_solution(m):
                bad.append("input violates the relations")
            if any(not r.is_zero() for r in moment_residuals(tq)):
                bad.append("tilde quadruple has nonzero moment residuals")
            bad += transversality_failures(t, m)
            if is_stable(tq) != is_stable(m):
                bad.append("stability of m and of its tilde differ")
            if is_stable(m) != inst.stable:
                bad.append(f"recorded stability {inst.stable} is wrong")
            return _fails(bad)

        run.run(f"mainlemma/tilde/{inst.ident}", js, tilde_checks)
        gs = [random_group_element(rng, m.v) for _ in range(cfg.trials)]

        def equivariance(m=m, gs=gs):
            y = phi(m)
            tq = build_tilde(m).as_quadruple()
            bad = []
            for k, g in enumerate(gs):
                mg = act(g, m)
                if phi(mg) != y:
                    bad.append(f"phi changes under group element {k}")
                if build_tilde(mg).as_quadruple() != act(extend_group_element(g, m.input), tq):
                    bad.append(f"tilde is not equivariant for group element {k}")
            return _fails(bad)

        run.run(f"mainlemma/equivariance/{inst.ident}", js, equivariance)
    return run


def _gkp_cases(cfg: VerifyConfig) -> list[tuple[str, Matrix, int]]:
    rng = random.Random(cfg.seed + 1)
    out = []
    for N in range(1, cfg.max_dim + 3):
        for mu in partitions(N):
            n = max(2, mu[0])
            for t in range(cfg.trials):
                g = random_invertible(rng, N)
                out.append((f"mu{_tag(mu)}-{t}", g @ jordan_matrix(mu) @ inverse(g), n))
    return out


def suite_phi(cfg: VerifyConfig) -> SuiteRun:
    run = SuiteRun("phi")
    attained: dict[tuple, list[str]] = {}
    library = {inst.ident for inst in load_library(cfg.library)}
    for inst in instances(cfg):
        m = inst.quadruple
        js = {"id": inst.ident, "quadruple": quadruple_to_json(m)}

        def closed_form(m=m):
            return phi_closed_form(m) == phi_product(m), "closed form differs from the block product"

        run.run(f"phi/closed-form/{inst.ident}", js, closed_form)
        if not _safe_stable(inst):
            continue

        def landing(inst=inst, m=m):
            y = phi(m)
            gl = to_gl_data(m.input)
            bad = []
            if not slice_contains(slice_partition(m.input), y):
                bad.append("phi(m) is off the slice pattern")
            for e in gl.E:
                got = jordan_type_at(y, e)
                if sum(got) != sum(gl.mu_tilde[e]) or not dominates(gl.mu_tilde[e], got):
                    bad.append(f"type {got} at {e} is not dominated by {gl.mu_tilde[e]}")
            yy, flag = phi_tilde(m)
            if yy != y:
                bad.append("phi_tilde disagrees with phi")
            if m.input.is_undeformed() and inst.ident in library:
                attained.setdefault((gl.lam, gl.mu), []).append(inst.ident if jordan_type_at(y, 0) == gl.mu else "")
            return _fails(bad)

        run.run(f"phi/slice-landing/{inst.ident}", js, landing)
    for (lam, mu), hits in sorted(attained.items()):
        run.run(f"phi/attains-mu/lam{_tag(lam)}-mu{_tag(mu)}", {"lambda": list(lam), "mu": list(mu)},
                lambda hits=hits: (any(hits), "no instance reaches type μ"))
    for ident, y, n in _gkp_cases(cfg):

        def roundtrip(y=y, n=n):
            m = inverse_special(y, n=n)
            if not (is_solution(m) and is_stable(m)):
                return False, "inverse is not a stable solution"
            yy, flag = phi_tilde(m)
            expected = Flag.from_spans([nullspace(y ** l) for l in range(1, n)] + [Matrix.identity(y.rows)], y.rows)
            return yy == y and flag.steps == expected.steps, "phi_tilde does not recover (y, kernel flag)"

        run.run(f"phi/gkp-roundtrip/{ident}", {"y": matrix_to_json(y), "n": n}, roundtrip)
    return run


def _psi_common(L, s: SliceElement, b, E, f1) -> list[str]:
    bad = []
    if not L.is_module():
        bad.append("lattice is not z-stable")
    if not orbit_type(L, E).same_as(class_of(s.mat, E)):
        bad.append("orbit type differs from the class of the slice point")
    if chart_coords(L, b) != f1:
        bad.append("chart coordinates do not return f1")
    if classify_slice(L) != tuple(b):
        bad.append("classification does not return b")
    for sc in ROTATION_SCALARS:
        if chart_coords(rotate(L, sc), b) != rotated_chart(f1, b, sc):
            bad.append(f"rotation law fails at s={sc}")
    return bad


def suite_psi(cfg: VerifyConfig) -> SuiteRun:
    run = SuiteRun("psi")
    rng = random.Random(cfg.seed + 2)
    for N in range(1, cfg.max_dim + 3):
        for lam in partitions(N):
            for t in range(cfg.trials):
                s = SliceElement(lam, random_nilpotent_slice_element(lam, rng))
                b = list(lam) + [0]
                rng.shuffle(b)
                b = tuple(b)
                js = {"lambda": list(lam), "b": list(b), "element": matrix_to_json(s.mat)}

                def local(s=s, b=b):
                    P = jordan_to_graded(b)
                    return _fails(_psi_common(psi_local(s, b), s, b, [0], P @ s.f1 @ P.T))

                run.run(f"psi/local/lam{_tag(lam)}-{t}", js, local)
            for t in range(max(1, cfg.trials // 2)):
                s = SliceElement(lam, random_slice_element_with_spectrum(lam, GLOBAL_SPECTRUM, rng))
                js = {"lambda": list(lam), "E": [str(e) for e in GLOBAL_SPECTRUM], "element": matrix_to_json(s.mat)}

                def glob(s=s, lam=lam):
                    return _fails(_psi_common(psi_global(s, lam, GLOBAL_SPECTRUM), s, lam, GLOBAL_SPECTRUM, s.f1))

                run.run(f"psi/global/lam{_tag(lam)}-{t}", js, glob)
    return run


def suite_diagram(cfg: VerifyConfig) -> SuiteRun:
    run = SuiteRun("diagram")
    for inst in instances(cfg):
        if not inst.stable:
            continue
        m = inst.quadruple
        js = {"id": inst.ident, "quadruple": quadruple_to_json(m)}

        def square(m=m):
            gl = to_gl_data(m.input)
            y, flag = phi_tilde(m)
            lam = slice_partition(m.input)
            s = SliceElement(lam, y)
            lflag = psi_tilde(s, flag, lam, gl.b, E=gl.E)
            top = psi_global(s, lam, gl.E)
            bad = []
            if y != phi(m):
                bad.append("forgetting the flag after phi_tilde differs from phi")
            if lflag.top() != top:
                bad.append("top of the lattice flag differs from psi of the slice point")
            if lflag.a != gl.a:
                bad.append(f"lattice flag steps {lflag.a} differ from a = {gl.a}")
            if not orbit_type(top, gl.E).same_as(class_of(y, gl.E)):
                bad.append("orbit type of the lattice differs from the class of phi(m)")
            return _fails(bad)

        run.run(f"diagram/commutes/{inst.ident}", js, square)
    return run


def suite_census(cfg: VerifyConfig) -> SuiteRun:
    run = SuiteRun("census")
    m = 2
    samples = 6 * cfg.trials
    for N in range(1, min(cfg.max_dim + 1, 4) + 1):
        for mu in partitions(N, max_len=m):

            def census(mu=mu):
                report = decomposition_census(mu, m, samples, cfg.seed)
                total = sum(report.tally.values())
                detail = f"{len(report.failures)} failures, first {report.failures[:1]}"
                return report.ok and total == samples, detail

            run.run(f"census/m{m}-mu{_tag(mu)}", {"mu": list(mu), "m": m, "samples": samples, "seed": cfg.seed},
                    census)
    return run


def suite_duality(cfg: VerifyConfig) -> SuiteRun:
    run = SuiteRun("duality")
    bound = min(cfg.max_n, 3)
    for row in duality_table(bound, bound, cfg.max_dim + 3):
        key = "-".join(f"{k}{_tag(v) if isinstance(v, list) else v}" for k, v in row.params.items())
        run.run(f"duality/{row.identity}/{key}", row.params,
                lambda row=row: (row.passed, f"lhs {row.lhs} != rhs {row.rhs}"))
    return run


SUITE_RUNNERS = {
    "transform": suite_transform,
    "mainlemma": suite_mainlemma,
    "phi": suite_phi,
    "psi": suite_psi,
    "diagram": suite_diagram,
    "census": suite_census,
    "duality": suite_duality,
}


def run_verify(cfg: VerifyConfig) -> dict:
    """The full report; ``report["passed"]`` is False iff some check failed."""
    suites = []
    total = failed = 0
    for name in cfg.suites:
        run = SUITE_RUNNERS[name](cfg)
        checks = sorted(run.checks, key=lambda c: c.id)
        if cfg.only:
            checks = [c for c in checks if c.id == cfg.only]
        total += len(checks)
        failed += sum(not c.passed for c in checks)
        suites.append({"suite": name, "checks": [c.to_json(cfg, name) for c in checks]})
    return {"config": cfg.to_json(), "suites": suites, "summary": {"checks": total, "failed": failed},
            "passed": failed == 0}


def report_bytes(report: dict) -> bytes:
    return (json.dumps(report, indent=1, sort_keys=True, ensure_ascii=False) + "\n").encode()


def human_summary(report: dict) -> str:
    lines = []
    for suite in report["suites"]:
        bad = [c for c in suite["checks"] if c["status"] != "pass"]
        lines.append(f"{suite['suite']}: {len(suite['checks']) - len(bad)}/{len(suite['checks'])} passed")
        for c in bad:
            lines.append(f"  FAIL {c['id']}: {c.get('detail', '')}")
            lines.append(f"    instance: {json.dumps(c['instance'], sort_keys=True)}")
            lines.append(f"    rerun: {c['repro']}")
    s = report["summary"]
    lines.append(f"total: {s['checks'] - s['failed']}/{s['checks']} passed")
    return "\n".join(lines)
