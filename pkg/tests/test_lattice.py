import numpy as np
import pytest

from diracgauge.clifford import build_gamma_rep
from diracgauge.lattice import (ConformalChart, FieldConfig, FlatChart, Grid, LatticeError, blw_split,
                                build_lattice_dirac, dalambert_check, gauge_transform, read_triplets,
                                scalar_curvature, write_triplets)
from diracgauge.suite import _curvature_error, _u1_gauge_error


def test_free_operator_spectrum():
    rep = build_gamma_rep((2, 0))
    grid = Grid.torus(2, 8)
    d = build_lattice_dirac(FieldConfig(rep, np.eye(1)), grid).D.toarray()
    assert np.allclose(d, -d.conj().T)
    ev = np.sort(np.abs(np.linalg.eigvals(d)))
    k = np.sin(2 * np.pi * np.fft.fftfreq(8) * 8 / 8) / grid.spacing[0]
    expected = np.sort(np.repeat(np.sqrt(k[:, None] ** 2 + k[None] ** 2).ravel(), 2))
    assert np.allclose(ev, expected, atol=1e-10)


def test_free_remainder_vanishes():
    rep = build_gamma_rep((4, 0))
    b = blw_split(build_lattice_dirac(FieldConfig(rep, np.eye(1)), Grid.torus(4, 4)))
    assert np.abs(b.blocks).max() < 1e-12 and b.offsite_norm < 1e-12


def test_memory_cap_enforced():
    rep = build_gamma_rep((2, 0))
    with pytest.raises(LatticeError):
        build_lattice_dirac(FieldConfig(rep, np.eye(1)), Grid.torus(2, 8), memory_cap=10)


@pytest.mark.slow
def test_second_order_convergence():
    errs = [_u1_gauge_error(L) for L in (8, 16, 32)]
    assert min(a / b for a, b in zip(errs, errs[1:])) >= 3.5
    errs = [_curvature_error(L) for L in (8, 16, 32)]
    assert min(a / b for a, b in zip(errs, errs[1:])) >= 3.5


def test_scalar_curvature_of_sphere_chart():
    # e^{2 sigma} with sigma = -log((1 + r^2)/2) is the unit sphere: R = 2
    chart = ConformalChart(lambda x: -np.log((1 + x @ x) / 2))
    assert abs(scalar_curvature(chart, np.array([0.3, -0.2])) - 2) < 1e-5
    assert scalar_curvature(FlatChart(), np.zeros(2)) == 0.0


def test_gauge_transform_conjugates_operator():
    rep = build_gamma_rep((2, 0))
    grid = Grid.torus(2, 6)
    ld = build_lattice_dirac(FieldConfig(rep, np.eye(1)), grid)
    u = np.exp(1j * np.random.default_rng(0).normal(size=grid.sites))[:, None, None] * np.eye(2)
    d2 = gauge_transform(ld, u).D.toarray()
    # both operators are skew-Hermitian, so compare the sorted imaginary spectra
    assert np.allclose(np.sort(np.linalg.eigvals(d2).imag), np.sort(np.linalg.eigvals(ld.D.toarray()).imag),
                       atol=1e-9)


def test_dalambert_detects_noncommuting_mass():
    rep = build_gamma_rep((2, 0))
    grid = Grid.torus(2, 4)
    a = np.zeros((grid.sites, 2, 2, 2), dtype=complex)
    a[:, 0] = 1j * np.array([[0, 1], [1, 0]])
    ok, _, _ = dalambert_check(grid, rep, a, np.kron(rep.chirality, np.diag([1.0, 2.0])))
    assert not ok
    ok, norm, _ = dalambert_check(grid, rep, a, np.kron(rep.chirality, np.eye(2)))
    assert ok and norm < 1e-12


def test_triplet_round_trip(tmp_path):
    rep = build_gamma_rep((2, 0))
    d = build_lattice_dirac(FieldConfig(rep, np.eye(1)), Grid.torus(2, 4)).D
    write_triplets(d, tmp_path / "d.txt")
    assert abs(read_triplets(tmp_path / "d.txt", d.shape) - d).max() == 0
