import numpy as np
import pytest

from diracgauge.clifford import build_gamma_rep
from diracgauge.dirac_local import total_grading
from diracgauge.pauli import (DoubledFiber, build_pauli_dirac, charge_conjugation, chiral_expansion,
                              doubled_grading, fermionic_lagrangian, lagrangian_split, odd_residual,
                              pairing_matrix, pauli_cancellation_check, sm_lepton_demo)
from diracgauge.symmetry import electroweak_model, group_element

CHI = np.diag([1.0, -1.0])


def _odd_pair(rep, chi, rng):
    gr = total_grading(rep, chi)
    n = len(gr)
    d = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    f = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (d - gr @ d @ gr) / 2, f - f.conj().T


@pytest.mark.parametrize("sig", [(2, 0), (1, 1), (4, 0), (3, 1)])
def test_doubled_projector_algebra(sig):
    assert DoubledFiber(build_gamma_rep(sig), CHI).algebra_residual() < 1e-12


@pytest.mark.parametrize("sig,kind", [((4, 0), "euclidean"), ((3, 1), "lorentzian")])
def test_pauli_term_cancels_on_diagonal_sections(sig, kind):
    rep = build_gamma_rep(sig)
    rng = np.random.default_rng(0)
    d, f = _odd_pair(rep, CHI, rng)
    psi = rng.normal(size=len(d)) + 1j * rng.normal(size=len(d))
    dp = build_pauli_dirac(d, f)
    pm = pairing_matrix(rep, 2, kind)
    assert pauli_cancellation_check(d, dp, psi, pm) < 1e-10
    other = rng.normal(size=len(d)) + 1j * rng.normal(size=len(d))
    assert pauli_cancellation_check(d, dp, psi, pm, other=other) > 1e-6


def test_pauli_operator_is_odd():
    rep = build_gamma_rep((3, 1))
    rng = np.random.default_rng(1)
    d, _ = _odd_pair(rep, CHI, rng)
    gr = total_grading(rep, CHI)
    even = rng.normal(size=d.shape)
    even = (even + gr @ even @ gr) / 2
    dp = build_pauli_dirac(d, even)
    assert odd_residual(dp.toarray(), doubled_grading(rep, CHI, 1).toarray()) < 1e-12


def test_chiral_expansion_sums_to_lagrangian():
    rep = build_gamma_rep((3, 1))
    rng = np.random.default_rng(2)
    d, _ = _odd_pair(rep, CHI, rng)
    psi = rng.normal(size=len(d)) + 1j * rng.normal(size=len(d))
    parts = chiral_expansion(d, psi, rep, CHI, "lorentzian")
    total = fermionic_lagrangian(d, psi, rep, CHI, "lorentzian")
    assert abs(sum(parts.values()) - total) < 1e-10


@pytest.mark.parametrize("sig", [(2, 0), (1, 1), (4, 0), (3, 1)])
def test_charge_conjugation(sig):
    rep = build_gamma_rep(sig)
    rs = charge_conjugation(rep, 2)
    assert rs.doubled_square_residual() < 1e-12
    d = np.random.default_rng(3).normal(size=(len(rs.J),) * 2)
    assert np.allclose(rs.conjugate_operator(rs.conjugate_operator(d)), d)


def test_lagrangian_split_in_two_dimensions():
    m = electroweak_model()
    s = lagrangian_split(m, build_gamma_rep((2, 0)))
    assert np.isclose(s.yang_mills[2], -2) and np.isclose(s.higgs_potential[2], -8)
    assert np.isclose(s.higgs_potential[4], 2) and np.isclose(s.minimum_radius, np.sqrt(2))
    assert s.orbit_residual < 1e-6
    assert int((np.abs(np.linalg.eigvalsh(s.higgs_mass_operator)) < 1e-6).sum()) == 3


def test_einstein_hilbert_coefficient_scales_with_curvature():
    m = electroweak_model()
    rep = build_gamma_rep((2, 0))
    s = lagrangian_split(m, rep, r_M=1.0)
    assert np.isclose(s.einstein_hilbert, -0.25 * 2 * rep.dim * m.n_f)


def test_demo_gauge_independent():
    m = electroweak_model()
    _, gh = group_element(m, np.array([0.4, 0.1, -0.9, 0.3]))
    a = sm_lepton_demo(run_split=False)
    b = sm_lepton_demo(vacuum=gh @ m.vacuum, run_split=False)
    assert a == b and a["pass"]
