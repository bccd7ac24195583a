"""Acceptance criteria 1-10 at full sample counts.

Each test appends one ``criterion N: PASS|FAIL ...`` line to the terminal
summary.  Run standalone with ``python3 tests/test_acceptance.py``.
"""

import subprocess
import sys
from functools import lru_cache

import numpy as np
import pytest

from diracgauge.suite import ScenarioConfig, run_suite

SIGNATURES = ((2, 0), (1, 1), (4, 0), (3, 1))
FULL_SAMPLES = {"appendix": 1000, "simple-type": 500, "gauge": 50, "dinner": 100,
                "compatibility": 20, "cancellation": 500}


@lru_cache(maxsize=None)
def _records(groups, signature=(3, 1), sign=1, seed=0):
    cfg = ScenarioConfig(signature=signature, convention_sign=sign, seed=seed, samples=dict(FULL_SAMPLES))
    return {r.name: r for r in run_suite(cfg, groups).records}


def _verdict(log, number, records, label):
    failed = [r for r in records if r.status != "pass"]
    worst = ", ".join(f"{r.name}={r.residual:.3g}{r.relation}{r.tolerance:.3g}" for r in (failed or records)[:4])
    line = f"criterion {number:>2}: {'FAIL' if failed else 'PASS'}  {label}  [{worst}]"
    log.append(line)
    print(line)
    assert not failed, line


def test_criterion_01_clifford(acceptance_log):
    recs = _records(("clifford",))
    _verdict(acceptance_log, 1, list(recs.values()), "Clifford identities, even p+q <= 8")


def test_criterion_02_tensor_identities(acceptance_log):
    recs = _records(("appendix",))
    assert all(r.detail["samples_per_signature"] >= 1000 for r in recs.values())
    _verdict(acceptance_log, 2, list(recs.values()), "form1/form2/form4, 1000 tensors per signature")


def test_criterion_03_simple_type(acceptance_log):
    recs = []
    for sig in SIGNATURES:
        r = _records(("simple-type",), sig)
        assert r["simple_type.forward"].detail["samples"] >= 500
        recs += list(r.values())
    _verdict(acceptance_log, 3, recs, "simple-type equivalence and nullspace, four signatures")


def test_criterion_04_blw(acceptance_log):
    recs = []
    for sig in SIGNATURES:
        for s in (1, -1):
            recs += list(_records(("potential",), sig, s).values())
    blw = _records(("blw",))
    recs += [blw["blw.zero_order_constant"], blw["blw.convergence_gauge"], blw["blw.convergence_curvature"]]
    _verdict(acceptance_log, 4, recs, "zero-order remainder, O(h^2) convergence, pinned potential")


def test_criterion_05_gauge_invariance(acceptance_log):
    recs = [_records(("blw",), sig)["blw.gauge_invariance"] for sig in SIGNATURES]
    assert all(r.detail["transforms"] >= 50 for r in recs)
    _verdict(acceptance_log, 5, recs, "potential invariant under 50 inner gauge transforms")


def test_criterion_06_symmetry_breaking(acceptance_log):
    recs = _records(("masses",))
    picked = [recs["masses.electroweak_pattern"], recs["masses.higgs_dinner"]]
    assert recs["masses.higgs_dinner"].detail["models"] >= 100
    _verdict(acceptance_log, 6, picked, "electroweak pattern, Higgs dinner on 100 random models")


def test_criterion_07_compatibility(acceptance_log):
    picked = [_records(("blw",))["blw.dalambert_equivalence"], _records(("masses",))["masses.compatibility_variation"]]
    _verdict(acceptance_log, 7, picked, "square split iff commuting, deficit ratio stable over 20 A")


def test_criterion_08_pauli_cancellation(acceptance_log):
    recs = [_records(("pauli",), sig)["pauli.cancellation"] for sig in SIGNATURES]
    assert all(r.detail["triples"] >= 500 for r in recs)
    _verdict(acceptance_log, 8, recs, "Pauli term cancels, 500 triples per signature")


def test_criterion_09_lagrangian_split(acceptance_log):
    recs = _records(("pauli",))
    picked = [recs["pauli.split_fit"], recs["pauli.split_minimum_orbit"], recs["pauli.higgs_mass_kernel"]]
    assert recs["pauli.split_minimum_orbit"].detail["minimum_radius"] > 0
    _verdict(acceptance_log, 9, picked, "polynomial split, sphere of minima on the vacuum orbit")


def test_criterion_10_determinism(acceptance_log, tmp_path):
    outs = []
    for i in range(2):
        path = tmp_path / f"report{i}.json"
        proc = subprocess.run([sys.executable, "-m", "diracgauge", "suite", "--seed", "7", "--out", str(path)],
                              capture_output=True, text=True)
        assert proc.returncode in (0, 1), proc.stderr
        outs.append(path.read_bytes())
    ok = outs[0] == outs[1]
    line = f"criterion 10: {'PASS' if ok else 'FAIL'}  byte-identical suite reports  [{len(outs[0])} bytes]"
    acceptance_log.append(line)
    print(line)
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
