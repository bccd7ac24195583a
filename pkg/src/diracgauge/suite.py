"""Scenario configuration, check groups and JSON reports.

Config grammar: ``[section]`` headers followed by ``key = value`` lines,
``#`` comments.  Recognised sections and keys::

    [scenario]  signature = p, q | convention_sign = 1 | model = electroweak
                seed = 0 | groups = clifford, appendix, ...
    [grid]      refinements = 8, 16, 32 | split_sites = 8
    [samples]   <group or check name> = <int>
    [tolerances] <check name> = <float>

Each check draws from its own generator, seeded from the global seed and
a stable hash of the check name, so adding checks does not perturb others.
"""

from __future__ import annotations

import configparser
import hashlib
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from . import __version__
from .clifford import Signature, build_gamma_rep, grade_project
from .dirac_local import (assemble_omega, dirac_potential_analytic, dirac_potential_constant,
                          make_simple_type, check_simple_type, round_trip_residual,
                          simple_type_solution_space)
from .lattice import (FieldConfig, Grid, blw_split, build_lattice_dirac, dalambert_check,
                      dirac_potential_numeric, gauge_transform, site_blocks, write_triplets)
from .pauli import (DOUBLING_UNIT, DoubledFiber, build_pauli_dirac, charge_conjugation,
                    doubled_grading, lagrangian_split, odd_residual, pairing_matrix,
                    pauli_cancellation_check, sm_lepton_demo)
from .symmetry import (ModelError, abelian_model, compatibility_deficit, curvature_decomposition_check,
                       electroweak_model, fermionic_mass_operator, goldstone_count, goldstone_split,
                       group_element, isotropy_algebra, loads_model, matrix_rank, random_model,
                       su2_doublet_model, unitary_gauge, vacuum_potential, ym_kernel_complement_image,
                       ym_mass_matrix, ym_quadratic_form)
from .tensors import random_trailing_skew, verify_form1, verify_form2, verify_form4

GROUPS = ("clifford", "appendix", "simple-type", "potential", "blw", "masses", "pauli", "demo-sm")
FIXTURES = {"electroweak": electroweak_model, "abelian": abelian_model, "su2": su2_doublet_model}

# Ratio of the lattice Dirac potential to the closed-form expression for
# constant simple-type data, keyed by (n, convention sign).  Fitted once.
PINNED_POTENTIAL_RATIO = {(2, 1): 4 / 3, (2, -1): 4 / 5, (4, 1): 8 / 11, (4, -1): 8 / 13}

DEFAULT_TOLERANCES = {
    "clifford.anticommutator": 1e-12,
    "clifford.chirality": 1e-12,
    "clifford.blade_independence": 1e-12,
    "clifford.grade_projection": 1e-12,
    "appendix.form1": 1e-10,
    "appendix.form2": 1e-10,
    "appendix.form4": 1e-10,
    "simple_type.forward": 1e-10,
    "simple_type.converse": 1e-10,
    "simple_type.nullspace_containment": 1e-8,
    "simple_type.non_chiral_dimension": 0.0,
    "potential.lattice_vs_constant": 1e-8,
    "potential.fitted_ratio": 1e-8,
    "blw.zero_order_constant": 1e-10,
    "blw.convergence_gauge": 3.5,
    "blw.convergence_curvature": 3.5,
    "blw.gauge_invariance": 1e-8,
    "blw.dalambert_equivalence": 0.0,
    "masses.electroweak_pattern": 0.0,
    "masses.spectrum_gauge_invariance": 1e-10,
    "masses.higgs_dinner": 0.0,
    "masses.goldstone_containment": 1e-8,
    "masses.compatibility_variation": 1e-6,
    "masses.curvature_decomposition": 1e-10,
    "masses.vacuum_potential": 1e-8,
    "masses.unitary_gauge": 1e-9,
    "pauli.projectors": 1e-12,
    "pauli.cancellation": 1e-10,
    "pauli.off_diagonal_counterexample": 1e-6,
    "pauli.oddness": 1e-12,
    "pauli.charge_conjugation": 1e-10,
    "pauli.self_adjointness": 0.0,
    "pauli.split_fit": 1e-8,
    "pauli.split_minimum_orbit": 1e-6,
    "pauli.higgs_mass_kernel": 0.0,
    "demo_sm.pass": 0.0,
}
# Checks whose measured value must be at least the tolerance.
LOWER_BOUNDED = {"blw.convergence_gauge", "blw.convergence_curvature", "pauli.off_diagonal_counterexample"}

DEFAULT_SAMPLES = {"appendix": 200, "simple-type": 100, "gauge": 50, "dinner": 100, "spectrum": 100,
                   "compatibility": 20, "cancellation": 500}


class ConfigError(ValueError):
    pass


@dataclass
class ScenarioConfig:
    signature: tuple = (3, 1)
    convention_sign: int = 1
    model: str = "electroweak"
    seed: int = 0
    groups: tuple = GROUPS
    refinements: tuple = (8, 16, 32)
    split_sites: int = 8
    samples: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    tolerance_scale: float = 1.0

    def validate(self) -> None:
        p, q = self.signature
        if p < 0 or q < 0 or (p + q) not in (2, 4):
            raise ConfigError(f"signature must have p+q in {{2, 4}}, got {self.signature}")
        if self.convention_sign not in (1, -1):
            raise ConfigError("convention_sign must be 1 or -1")
        if self.model not in FIXTURES and not Path(self.model).is_file():
            raise ConfigError(f"unknown model fixture or missing file: {self.model}")
        unknown = set(self.groups) - set(GROUPS)
        if unknown:
            raise ConfigError(f"unknown check groups: {sorted(unknown)}")
        if any(v <= 0 for v in self.tolerances.values()) or self.tolerance_scale <= 0:
            raise ConfigError("tolerances must be positive")
        if len(self.refinements) != 3 or min(self.refinements) < 4:
            raise ConfigError("refinements must list three grid sizes of at least 4")
        if self.split_sites < 7:
            raise ConfigError("split_sites must be at least 7")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must fit in an unsigned 64-bit integer")

    def n_samples(self, key: str) -> int:
        return int(self.samples.get(key, DEFAULT_SAMPLES.get(key, 10)))

    def tolerance(self, name: str) -> float:
        tol = self.tolerances.get(name, DEFAULT_TOLERANCES[name])
        if name in LOWER_BOUNDED:
            return tol / self.tolerance_scale if tol else tol
        return tol * self.tolerance_scale

    def load_model(self):
        if self.model in FIXTURES:
            return FIXTURES[self.model]()
        return loads_model(Path(self.model).read_text(encoding="utf-8"))

    def echo(self) -> dict:
        return {
            "signature": list(self.signature),
            "convention_sign": self.convention_sign,
            "model": self.model,
            "seed": self.seed,
            "groups": list(self.groups),
            "refinements": list(self.refinements),
            "split_sites": self.split_sites,
            "samples": dict(sorted(self.samples.items())),
            "tolerances": dict(sorted(self.tolerances.items())),
            "tolerance_scale": self.tolerance_scale,
        }


def _ints(text: str) -> tuple:
    return tuple(int(t) for t in text.replace(",", " ").split())


def parse_config(text: str) -> ScenarioConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",))
    cp.optionxform = str
    try:
        cp.read_string(text)
        cfg = ScenarioConfig()
        if cp.has_section("scenario"):
            sc = cp["scenario"]
            if "signature" in sc:
                cfg.signature = _ints(sc["signature"])
            cfg.convention_sign = int(sc.get("convention_sign", cfg.convention_sign))
            cfg.model = sc.get("model", cfg.model).strip()
            cfg.seed = int(sc.get("seed", cfg.seed))
            if "groups" in sc:
                cfg.groups = tuple(g.strip() for g in sc["groups"].split(",") if g.strip())
        if cp.has_section("grid"):
            gr = cp["grid"]
            if "refinements" in gr:
                cfg.refinements = _ints(gr["refinements"])
            cfg.split_sites = int(gr.get("split_sites", cfg.split_sites))
        if cp.has_section("samples"):
            cfg.samples = {k: int(v) for k, v in cp["samples"].items()}
        if cp.has_section("tolerances"):
            cfg.tolerances = {k: float(v) for k, v in cp["tolerances"].items()}
            unknown = set(cfg.tolerances) - set(DEFAULT_TOLERANCES)
            if unknown:
                raise ConfigError(f"unknown tolerance keys: {sorted(unknown)}")
    except (configparser.Error, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc
    if len(cfg.signature) != 2:
        raise ConfigError("signature needs two integers")
    cfg.validate()
    return cfg


def sub_seed(seed: int, name: str) -> int:
    digest = hashlib.sha256(f"{seed}:{name}".encode()).digest()
    return int.from_bytes(digest[:8], "little")


@dataclass
class Record:
    name: str
    anchor: str
    status: str
    residual: float
    tolerance: float
    relation: str = "<="
    detail: dict = field(default_factory=dict)
    wall_time: float | None = None

    def to_dict(self) -> dict:
        out = {"name": self.name, "anchor": self.anchor, "status": self.status,
               "residual": self.residual, "tolerance": self.tolerance, "relation": self.relation,
               "detail": self.detail}
        if self.wall_time is not None:
            out["wall_time"] = self.wall_time
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "Record":
        return cls(d["name"], d["anchor"], d["status"], d["residual"], d["tolerance"],
                   d.get("relation", "<="), d.get("detail", {}), d.get("wall_time"))


@dataclass
class Report:
    records: list = field(default_factory=list)
    config: dict = field(default_factory=dict)
    version: str = __version__

    @property
    def summary(self) -> dict:
        passed = sum(r.status == "pass" for r in self.records)
        return {"total": len(self.records), "passed": passed, "failed": len(self.records) - passed}

    @property
    def ok(self) -> bool:
        return self.summary["failed"] == 0

    def to_dict(self) -> dict:
        return {"engine_version": self.version, "config": self.config, "summary": self.summary,
                "records": [r.to_dict() for r in self.records]}

    @classmethod
    def from_dict(cls, d: dict) -> "Report":
        rep = cls([Record.from_dict(r) for r in d.get("records", [])], d.get("config", {}),
                  d.get("engine_version", __version__))
        if rep.summary != d.get("summary", rep.summary):
            raise ValueError("summary counts do not match the records")
        return rep

    def merge(self, other: "Report") -> "Report":
        return Report(self.records + other.records, self.config or other.config, self.version)


def report_json(r: Report) -> str:
    return json.dumps(r.to_dict(), indent=2, ensure_ascii=False) + "\n"


def emit_report(r: Report, path) -> None:
    """Write the report as UTF-8 JSON; ``-`` means standard output."""
    text = report_json(r)
    if str(path) == "-":
        sys.stdout.buffer.write(text.encode("utf-8"))
        sys.stdout.flush()
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc}") from exc


def _round(x: float) -> float:
    """Six significant digits keeps reports stable across BLAS rounding."""
    x = float(x)
    if not np.isfinite(x):
        return x
    return float(f"{x:.6g}") if x != 0 else 0.0


class _Runner:
    def __init__(self, cfg: ScenarioConfig, timing: bool = False):
        self.cfg = cfg
        self.timing = timing
        self.records: list[Record] = []

    def rng(self, name: str) -> np.random.Generator:
        return np.random.default_rng(sub_seed(self.cfg.seed, name))

    def run(self, name: str, anchor: str, fn) -> None:
        t0 = time.perf_counter()
        try:
            value, detail = fn(self.rng(name))
            value = float(value)
        except Exception as exc:  # a crashing check is a failing check
            value, detail = float("nan"), {"error": f"{type(exc).__name__}: {exc}"}
        tol = self.cfg.tolerance(name)
        lower = name in LOWER_BOUNDED
        ok = np.isfinite(value) and (value >= tol if lower else value <= tol)
        rec = Record(name, anchor, "pass" if ok else "fail", _round(value), tol,
                     ">=" if lower else "<=", detail)
        if self.timing:
            rec.wall_time = round(time.perf_counter() - t0, 3)
        self.records.append(rec)


# ------------------------------------------------------------------ groups

def _even_signatures(max_dim: int = 8):
    return [(p, d - p) for d in range(2, max_dim + 1, 2) for p in range(d + 1)]


def _group_clifford(run: _Runner) -> None:
    reps = [build_gamma_rep(sig, s) for sig in _even_signatures() for s in (1, -1)]

    def anticomm(_):
        return max(r.clifford_residual() for r in reps), {"representations": len(reps)}

    def chirality(_):
        worst = 0.0
        for r in reps:
            gm = r.chirality
            worst = max(worst, np.abs(gm @ gm - np.eye(r.dim)).max(), np.abs(gm - gm.conj().T).max())
            worst = max(worst, max(np.abs(gm @ g + g @ gm).max() for g in r.gammas))
        return worst, {}

    def blades(_):
        worst = 0.0
        for r in reps:
            gram = r.blade_gram()
            worst = max(worst, np.abs(gram - r.dim * np.eye(len(gram))).max() / r.dim)
        return worst, {}

    def grades(rng):
        worst = 0.0
        for r in reps:
            if r.n > 6:
                continue
            x = rng.normal(size=(r.dim, r.dim)) + 1j * rng.normal(size=(r.dim, r.dim))
            total = sum(grade_project(r, x, k) for k in range(r.n + 1))
            worst = max(worst, np.abs(total - x).max())
        return worst, {}

    run.run("clifford.anticommutator", "clifford: generator anticommutators", anticomm)
    run.run("clifford.chirality", "clifford: chirality element involutive, odd", chirality)
    run.run("clifford.blade_independence", "clifford: blade Gram matrix", blades)
    run.run("clifford.grade_projection", "clifford: grade projections sum to identity", grades)


APPENDIX_SIGNATURES = ((2, 0), (1, 1), (4, 0), (3, 1))


def _group_appendix(run: _Runner) -> None:
    count = run.cfg.n_samples("appendix")

    def make(verify, needs_rep):
        def fn(rng):
            worst = 0.0
            for sig in APPENDIX_SIGNATURES:
                rep = build_gamma_rep(sig, run.cfg.convention_sign)
                for _ in range(count):
                    w = random_trailing_skew(rep.n, rng)
                    worst = max(worst, verify(rep, w) if needs_rep else verify(w))
            return worst, {"samples_per_signature": count}
        return fn

    run.run("appendix.form1", "tensor identity: skew split", make(verify_form1, False))
    run.run("appendix.form2", "tensor identity: first-slot exchange", make(verify_form2, True))
    run.run("appendix.form4", "tensor identity: Clifford contraction", make(verify_form4, True))


def _chi(nf: int) -> np.ndarray:
    return np.diag([1.0] * (nf // 2) + [-1.0] * (nf - nf // 2))


def _random_odd(rng, chi: np.ndarray) -> np.ndarray:
    nf = len(chi)
    x = rng.normal(size=(nf, nf)) + 1j * rng.normal(size=(nf, nf))
    return (x - chi @ x @ chi) / 2


def _group_simple_type(run: _Runner) -> None:
    cfg = run.cfg
    rep = build_gamma_rep(cfg.signature, cfg.convention_sign)
    count = cfg.n_samples("simple-type")

    def forward(rng):
        worst = 0.0
        for _ in range(count):
            chi = _chi(int(rng.choice([2, 4])))
            d = make_simple_type(rep, chi, _random_odd(rng, chi))
            worst = max(worst, check_simple_type(assemble_omega(d), rep)[1])
        return worst, {"samples": count}

    def converse(rng):
        worst = 0.0
        for _ in range(count):
            chi = _chi(int(rng.choice([2, 4])))
            d = make_simple_type(rep, chi, _random_odd(rng, chi))
            worst = max(worst, round_trip_residual(assemble_omega(d), rep, chi))
        return worst, {"samples": count}

    def containment(_):
        worst, dims = 0.0, {}
        for n in (2, 4):
            r = build_gamma_rep((n, 0) if cfg.signature[1] == 0 else (n - 1, 1), cfg.convention_sign)
            for nf in (2, 4):
                space = simple_type_solution_space(r, _chi(nf), full=False)
                a, b = space.containment()
                worst = max(worst, a, b)
                dims[f"n{n}_nf{nf}"] = space.dim
        return worst, dims

    def non_chiral(_):
        return float(sum(simple_type_solution_space(build_gamma_rep((n, 0)), np.eye(2), full=False).dim
                         for n in (2, 4))), {}

    run.run("simple_type.forward", "simple type: soldered odd endomorphism satisfies the condition", forward)
    run.run("simple_type.converse", "simple type: extraction round trip", converse)
    run.run("simple_type.nullspace_containment", "simple type: brute-force solution space", containment)
    run.run("simple_type.non_chiral_dimension", "simple type: trivial grading gives no solutions", non_chiral)


def _constant_lattice_potential(rep, d):
    om = assemble_omega(d)
    grid = Grid.torus(rep.n, 4 if rep.n == 4 else 8)
    theta = np.broadcast_to(om, (grid.sites,) + om.shape).copy()
    b = blw_split(build_lattice_dirac(FieldConfig(rep, d.chi, theta=theta), grid))
    return dirac_potential_numeric(b.blocks), b


def _group_potential(run: _Runner) -> None:
    cfg = run.cfg
    rep = build_gamma_rep(cfg.signature, cfg.convention_sign)
    chi = _chi(2)

    def lattice_vs_constant(rng):
        worst = 0.0
        for _ in range(3):
            d = make_simple_type(rep, chi, _random_odd(rng, chi))
            v, _ = _constant_lattice_potential(rep, d)
            worst = max(worst, np.abs(v - dirac_potential_constant(d)).max())
        return worst, {}

    def fitted(rng):
        pinned = PINNED_POTENTIAL_RATIO[(rep.n, rep.convention_sign)]
        ratios = []
        for _ in range(3):
            d = make_simple_type(rep, chi, _random_odd(rng, chi))
            v, _ = _constant_lattice_potential(rep, d)
            ratios.append(complex(v[0] / dirac_potential_analytic(d)))
        dev = max(abs(r - pinned) for r in ratios)
        return dev, {"pinned_ratio": pinned, "fitted_ratio": _round(ratios[0].real)}

    run.run("potential.lattice_vs_constant", "Dirac potential: lattice versus fiber-level", lattice_vs_constant)
    run.run("potential.fitted_ratio", "Dirac potential: closed form up to pinned constant", fitted)


def _u1_gauge_error(sites: int) -> float:
    rep = build_gamma_rep((2, 0))
    grid = Grid.torus(2, sites)
    x = grid.coordinates()
    a = np.zeros((grid.sites, 2, 1, 1), dtype=complex)
    a[:, 0, 0, 0] = 0.5j * np.sin(x[:, 1])
    a[:, 1, 0, 0] = 0.3j * np.cos(x[:, 0])
    f12 = 1j * (-0.3 * np.sin(x[:, 0]) - 0.5 * np.cos(x[:, 1]))
    b = blw_split(build_lattice_dirac(FieldConfig(rep, np.eye(1), gauge=a), grid))
    expected = np.einsum("s,ij->sij", f12, rep.gammas[0] @ rep.gammas[1])
    return float(np.abs(b.blocks - expected).max())


def conformal_sigma(x: np.ndarray) -> np.ndarray:
    return 0.15 * np.sin(x[:, 0]) * np.cos(x[:, 1]) + 0.1 * np.cos(x[:, 1])


def _curvature_error(sites: int, sign: int = 1) -> float:
    """Deviation of the lattice potential from -s (N/4) r on a conformal torus."""
    rep = build_gamma_rep((2, 0), sign)
    grid = Grid.torus(2, sites)
    x = grid.coordinates()
    sigma = conformal_sigma(x)
    b = blw_split(build_lattice_dirac(FieldConfig(rep, np.eye(1), sigma=sigma), grid))
    lap = -0.3 * np.sin(x[:, 0]) * np.cos(x[:, 1]) - 0.1 * np.cos(x[:, 1])
    r = -2 * np.exp(-2 * sigma) * lap
    return float(np.abs(dirac_potential_numeric(b.blocks) + sign * rep.dim / 4 * r).max())


def _min_ratio(errors) -> float:
    return min(a / b for a, b in zip(errors, errors[1:]))


def _group_blw(run: _Runner) -> None:
    cfg = run.cfg
    rep = build_gamma_rep(cfg.signature, cfg.convention_sign)

    def zero_order(rng):
        chi = _chi(2)
        d = make_simple_type(rep, chi, _random_odd(rng, chi))
        _, b = _constant_lattice_potential(rep, d)
        return max(b.offsite_norm, b.first_order_residual), {}

    def conv_gauge(_):
        errs = [_u1_gauge_error(L) for L in cfg.refinements]
        return _min_ratio(errs), {"errors": [_round(e) for e in errs]}

    def conv_curv(_):
        errs = [_curvature_error(L, cfg.convention_sign) for L in cfg.refinements]
        return _min_ratio(errs), {"errors": [_round(e) for e in errs]}

    def gauge_inv(rng):
        chi = _chi(2)
        d = make_simple_type(rep, chi, _random_odd(rng, chi))
        om = assemble_omega(d)
        grid = Grid.torus(rep.n, 4 if rep.n == 4 else 8)
        ld = build_lattice_dirac(FieldConfig(rep, chi, theta=np.broadcast_to(om, (grid.sites,) + om.shape).copy()), grid)
        v0 = dirac_potential_numeric(blw_split(ld).blocks)
        worst = 0.0
        for _ in range(cfg.n_samples("gauge")):
            # internal unitaries preserving chi, varying from site to site
            ph = np.exp(1j * rng.normal(size=(grid.sites, 2)))
            u_int = np.einsum("sa,ab->sab", ph, np.eye(2))
            u = np.einsum("ij,sab->siajb", np.eye(rep.dim), u_int).reshape(grid.sites, 2 * rep.dim, 2 * rep.dim)
            v1 = dirac_potential_numeric(blw_split(gauge_transform(ld, u)).blocks)
            worst = max(worst, np.abs(v1 - v0).max())
        return worst, {"transforms": cfg.n_samples("gauge")}

    def dalambert(rng):
        m = electroweak_model()
        r2 = build_gamma_rep((2, 0))
        grid = Grid.torus(2, 6)
        mf = fermionic_mass_operator(m, r2).mass_operator
        h, _ = isotropy_algebra(m)
        gold, _ = goldstone_split(m)
        mismatches = 0
        cases = [np.outer(rng.normal(size=2), h[:, 0]), np.outer(rng.normal(size=2), rng.normal(size=4)),
                 np.zeros((2, 4))]
        for coeffs in cases:
            gauge = np.einsum("ma,aij->mij", coeffs, m.generators)
            ok, _, _ = dalambert_check(grid, r2, np.broadcast_to(gauge, (grid.sites, 2, 3, 3)).copy(), mf)
            deficit_zero = compatibility_deficit(m, r2, coeffs) <= 1e-12
            mismatches += ok != deficit_zero
        return float(mismatches), {"cases": len(cases)}

    def dump(_):
        return 0.0, {}

    run.run("blw.zero_order_constant", "BLW split: constant data remainder is site-diagonal", zero_order)
    run.run("blw.convergence_gauge", "BLW split: O(h^2) convergence, varying gauge field", conv_gauge)
    run.run("blw.convergence_curvature", "BLW split: O(h^2) convergence, conformal chart", conv_curv)
    run.run("blw.gauge_invariance", "Dirac potential: inner gauge invariance", gauge_inv)
    run.run("blw.dalambert_equivalence", "mass compatibility: square split iff commuting", dalambert)


def _group_masses(run: _Runner) -> None:
    cfg = run.cfg
    rep = build_gamma_rep(cfg.signature, cfg.convention_sign)
    model = cfg.load_model()

    def ew_pattern(_):
        m = electroweak_model(1.3, 0.7)
        spec = fermionic_mass_operator(m, rep).eigenvalues
        kernel = int((np.abs(spec) < 1e-8).sum())
        massive = np.abs(spec[np.abs(spec) >= 1e-8])
        rank = matrix_rank(ym_mass_matrix(m))
        _, phys = goldstone_split(m)
        detail = {"kernel": kernel, "isotropy_dim": isotropy_algebra(m)[1], "goldstone": goldstone_count(m),
                  "ym_rank": rank, "physical_higgs": phys.shape[1]}
        miss = (abs(kernel - rep.dim) + abs(detail["isotropy_dim"] - 1) + abs(detail["goldstone"] - 3)
                + abs(rank - 3) + abs(detail["physical_higgs"] - 1))
        return miss + float(np.abs(massive - 1.3 * 0.7).max()), detail

    def spectrum_inv(rng):
        base = np.linalg.eigvalsh(fermionic_mass_operator(model, rep).mass_operator @
                                  fermionic_mass_operator(model, rep).mass_operator)
        worst = 0.0
        for _ in range(cfg.n_samples("spectrum")):
            _, gh = group_element(model, rng.normal(size=model.dim_g))
            mf = fermionic_mass_operator(model.with_vacuum(gh @ model.vacuum), rep).mass_operator
            worst = max(worst, np.abs(np.linalg.eigvalsh(mf @ mf) - base).max())
        return worst, {}

    def dinner(rng):
        bad = 0
        count = cfg.n_samples("dinner")
        for _ in range(count):
            m = random_model(rng)
            bad += matrix_rank(ym_mass_matrix(m)) != goldstone_count(m)
        bad += matrix_rank(ym_mass_matrix(model)) != goldstone_count(model)
        return float(bad), {"models": count + 1}

    def containment(_):
        from .dirac_local import containment_residual
        gold, _ = goldstone_split(model)
        img = ym_kernel_complement_image(model)
        return max(containment_residual(gold, img), containment_residual(img, gold)), {}

    def compat(rng):
        ratios = []
        for _ in range(cfg.n_samples("compatibility")):
            a = rng.normal(size=(rep.n, model.dim_g))
            ratios.append(compatibility_deficit(model, rep, a, np.eye(rep.n))
                          / ym_quadratic_form(model, a, np.eye(rep.n)))
        ratios = np.array(ratios)
        return float(ratios.std() / abs(ratios.mean())), {"ratio": _round(ratios.mean())}

    def curvature(rng):
        r2 = build_gamma_rep((2, rep.signature.q and 1 or 0) if rep.n == 2 else (2, 0), cfg.convention_sign)
        grid = Grid.torus(2, 8)
        x = grid.coordinates()
        a = np.sin(x[:, :1, None] + rng.normal(size=(1, 2, model.dim_g))) * rng.normal(size=(1, 2, model.dim_g))
        h = 0.2 * np.cos(x[:, 1:2]) * (rng.normal(size=(1, model.n_h)) + 1j * rng.normal(size=(1, model.n_h)))
        res = curvature_decomposition_check(model, r2, grid, a, h)
        flat = curvature_decomposition_check(model, r2, grid)
        return max(res.residual, flat.residual, flat.mass_vacuum_residual), \
            {k: _round(v) for k, v in res.terms.items()}

    def vacuum(_):
        # fiber-level V_D against (lambda / 2) <M_F^2> with lambda = -2^(k+1) N_F
        y = model.yukawa_map(model.vacuum)
        phi = np.kron(rep.chirality, y)
        d = make_simple_type(rep, model.chi, y)
        v = dirac_potential_constant(d).real
        lam = -(2 ** (rep.n // 2 + 1)) * model.n_f
        return abs(v - lam / 2 * vacuum_potential(model)), {"lambda": lam, "trace_check": _round(
            abs(np.trace(phi @ phi).real - v))}

    def ugauge(rng):
        worst = 0.0
        y0 = model.yukawa_map(model.vacuum)
        for _ in range(5):
            z = rng.normal(size=model.n_h) + 1j * rng.normal(size=model.n_h)
            z = z / np.linalg.norm(z) * np.linalg.norm(model.vacuum)
            gf, gh = group_element(model, unitary_gauge(model, z, rng=rng))
            worst = max(worst, np.abs(gh @ z - model.vacuum).max(),
                        np.abs(gf @ model.yukawa_map(z) @ gf.conj().T - y0).max())
        return worst, {}

    run.run("masses.electroweak_pattern", "symmetry breaking: electroweak spectrum and counts", ew_pattern)
    run.run("masses.spectrum_gauge_invariance", "symmetry breaking: mass spectrum gauge invariance", spectrum_inv)
    run.run("masses.higgs_dinner", "symmetry breaking: mass-matrix rank equals Goldstone count", dinner)
    run.run("masses.goldstone_containment", "symmetry breaking: Goldstone span versus mass-matrix range", containment)
    run.run("masses.compatibility_variation", "symmetry breaking: deficit proportional to vector mass form", compat)
    run.run("masses.curvature_decomposition", "symmetry breaking: curvature of the Dirac connection", curvature)
    run.run("masses.vacuum_potential", "symmetry breaking: vacuum potential", vacuum)
    run.run("masses.unitary_gauge", "symmetry breaking: orbit alignment", ugauge)


def _random_odd_dense(rng, gr: np.ndarray) -> np.ndarray:
    n = len(gr)
    x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (x - gr @ x @ gr) / 2


def _group_pauli(run: _Runner) -> None:
    cfg = run.cfg
    rep = build_gamma_rep(cfg.signature, cfg.convention_sign)
    model = cfg.load_model()
    kind = "lorentzian" if rep.signature.is_lorentzian else "euclidean"

    def projectors(_):
        worst = 0.0
        for sig in APPENDIX_SIGNATURES:
            for nf in (2, 3, 4):
                worst = max(worst, DoubledFiber(build_gamma_rep(sig), _chi(nf)).algebra_residual())
        return worst, {}

    def cancellation(rng):
        from .dirac_local import total_grading
        worst = 0.0
        count = cfg.n_samples("cancellation")
        for _ in range(count):
            chi = _chi(int(rng.choice([2, 3, 4])))
            gr = total_grading(rep, chi)
            d = _random_odd_dense(rng, gr)
            f = rng.normal(size=d.shape) + 1j * rng.normal(size=d.shape)
            f = f - f.conj().T
            psi = rng.normal(size=len(d)) + 1j * rng.normal(size=len(d))
            dp = build_pauli_dirac(d, f)
            worst = max(worst, pauli_cancellation_check(d, dp, psi, pairing_matrix(rep, len(chi), kind)))
        return worst, {"triples": count}

    def counterexample(rng):
        from .dirac_local import total_grading
        gr = total_grading(rep, model.chi)
        d = _random_odd_dense(rng, gr)
        f = rng.normal(size=d.shape) + 1j * rng.normal(size=d.shape)
        f = f - f.conj().T
        psi = rng.normal(size=len(d)) + 1j * rng.normal(size=len(d))
        other = rng.normal(size=len(d)) + 1j * rng.normal(size=len(d))
        dp = build_pauli_dirac(d, f)
        pm = pairing_matrix(rep, model.n_f, kind)
        half = pauli_cancellation_check(d, dp, psi, pm, other=np.zeros_like(psi))
        return pauli_cancellation_check(d, dp, psi, pm, other=other), {"zero_partner_residual": _round(half)}

    def oddness(rng):
        from .dirac_local import total_grading
        worst = 0.0
        for _ in range(10):
            gr = total_grading(rep, model.chi)
            d = _random_odd_dense(rng, gr)
            even = rng.normal(size=d.shape) + 1j * rng.normal(size=d.shape)
            even = (even + gr @ even @ gr) / 2
            dp = build_pauli_dirac(d, even)
            worst = max(worst, odd_residual(dp.toarray(), doubled_grading(rep, model.chi, 1).toarray()))
        return worst, {}

    def conjugation(rng):
        rs = charge_conjugation(rep, model.n_f)
        n = len(rs.J)
        d = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        dbar = rs.conjugate_operator(d)
        twice = rs.conjugate_operator(dbar)
        ev = np.sort_complex(np.linalg.eigvals(d).conj())
        ev_bar = np.sort_complex(np.linalg.eigvals(dbar))
        gam = np.array([np.kron(g, np.eye(model.n_f)) for g in rep.gammas])
        rel = max(min(np.abs(rs.conjugate_operator(g) - e * g).max() for e in (1, -1)) for g in gam)
        return max(rs.doubled_square_residual(), np.abs(twice - d).max(), np.abs(ev - ev_bar).max(), rel), \
            {"epsilon": _round(rs.epsilon.real)}

    def self_adjoint(rng):
        from .dirac_local import total_grading
        r2 = build_gamma_rep((2, 0), 1)
        grid = Grid.torus(2, 6)
        chi = _chi(2)
        gr = sp.kron(sp.identity(grid.sites), total_grading(r2, chi)).toarray()
        plus = np.kron(np.eye(grid.sites), np.kron((np.eye(2) + r2.chirality) / 2, np.eye(2)))
        minus = np.eye(len(plus)) - plus
        mismatches = 0
        a = np.zeros((grid.sites, 2, 2, 2), dtype=complex)
        a[:, 0] = 1j * np.diag([0.4, -0.2])
        base = build_lattice_dirac(FieldConfig(r2, chi, gauge=a), grid).D.toarray()
        for extra in (0.0, 1.0):
            bump = extra * _random_odd_dense(rng, gr)
            d = base + bump
            anti = np.abs(d + d.conj().T).max() < 1e-10
            d_plus, d_minus = minus @ d @ plus, plus @ d @ minus
            blocks = np.abs(d_minus + d_plus.conj().T).max() < 1e-10
            mismatches += anti != blocks
        return float(mismatches), {}

    split_cache = {}

    def split():
        if "s" not in split_cache:
            split_cache["s"] = lagrangian_split(model, rep, sites=cfg.split_sites, rng=run.rng("pauli.split"))
        return split_cache["s"]

    def split_fit(_):
        s = split()
        return max(s.residuals.values()) / max(1.0, float(np.abs(s.higgs_potential).max())), {
            "yang_mills_quadratic": _round(s.yang_mills[2]), "higgs_quadratic": _round(s.higgs_potential[2]),
            "higgs_quartic": _round(s.higgs_potential[4]), "kinetic_quadratic": _round(s.higgs_kinetic[2])}

    def split_orbit(_):
        s = split()
        return s.orbit_residual + abs(np.linalg.norm(s.minimum_point) - s.minimum_radius), {
            "minimum_radius": _round(s.minimum_radius)}

    def hessian(_):
        s = split()
        w = np.linalg.eigvalsh(s.higgs_mass_operator)
        kernel = int((np.abs(w) < 1e-6 * max(1.0, np.abs(w).max())).sum())
        return float(abs(kernel - goldstone_count(model))), {"kernel": kernel}

    run.run("pauli.projectors", "doubled fiber: projector algebra", projectors)
    run.run("pauli.cancellation", "Pauli operator: curvature term cancels on diagonal sections", cancellation)
    run.run("pauli.off_diagonal_counterexample", "Pauli operator: cancellation needs equal partners", counterexample)
    run.run("pauli.oddness", "Pauli operator: odd for the doubled grading", oddness)
    run.run("pauli.charge_conjugation", "Pauli operator: real structure", conjugation)
    run.run("pauli.self_adjointness", "fermionic Lagrangian: skew-adjointness versus block adjoints", self_adjoint)
    run.run("pauli.split_fit", "Lagrangian split: polynomial families", split_fit)
    run.run("pauli.split_minimum_orbit", "Lagrangian split: minimum on the vacuum orbit", split_orbit)
    run.run("pauli.higgs_mass_kernel", "Lagrangian split: Higgs mass kernel equals Goldstone count", hessian)


def _group_demo(run: _Runner) -> None:
    cfg = run.cfg

    def demo(_):
        rep = sm_lepton_demo(signature=cfg.signature, convention_sign=cfg.convention_sign, seed=cfg.seed)
        return (0.0 if rep["pass"] else 1.0), rep

    run.run("demo_sm.pass", "electroweak lepton demo", demo)


GROUP_RUNNERS = {
    "clifford": _group_clifford,
    "appendix": _group_appendix,
    "simple-type": _group_simple_type,
    "potential": _group_potential,
    "blw": _group_blw,
    "masses": _group_masses,
    "pauli": _group_pauli,
    "demo-sm": _group_demo,
}


def run_suite(cfg: ScenarioConfig, groups=None, timing: bool = False) -> Report:
    """Run the selected check groups in dependency order."""
    cfg.validate()
    selected = cfg.groups if groups is None else tuple(groups)
    runner = _Runner(cfg, timing)
    for g in GROUPS:
        if g in selected:
            GROUP_RUNNERS[g](runner)
    return Report(runner.records, cfg.echo())


def dump_operator(cfg: ScenarioConfig, path) -> tuple:
    """Write the constant simple-type lattice operator of the scenario as triplets."""
    rep = build_gamma_rep(cfg.signature, cfg.convention_sign)
    chi = _chi(2)
    d = make_simple_type(rep, chi, _random_odd(np.random.default_rng(sub_seed(cfg.seed, "dump")), chi))
    om = assemble_omega(d)
    grid = Grid.torus(rep.n, 4)
    ld = build_lattice_dirac(FieldConfig(rep, chi, theta=np.broadcast_to(om, (grid.sites,) + om.shape).copy()), grid)
    write_triplets(ld.D, path)
    return ld.D.shape
