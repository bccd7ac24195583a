import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from diracgauge.clifford import build_gamma_rep
from diracgauge.symmetry import (FermionModel, ModelError, abelian_model, compatibility_deficit,
                                 curvature_decomposition_check, dumps_model, eigenbundle_split,
                                 electroweak_model, fermionic_mass_operator, goldstone_count, goldstone_split,
                                 group_element, isotropy_algebra, loads_model, matrix_rank, random_model,
                                 su2_doublet_model, unitary_gauge, ym_mass_matrix, ym_quadratic_form)
from diracgauge.lattice import Grid

REP = build_gamma_rep((3, 1))


def test_electroweak_breaking_pattern():
    m = electroweak_model(1.3, 0.7)
    ev = fermionic_mass_operator(m, REP).eigenvalues
    massive = np.abs(ev[np.abs(ev) > 1e-8])
    assert int((np.abs(ev) < 1e-8).sum()) == REP.dim  # the neutrino block
    assert np.allclose(massive, 1.3 * 0.7)
    assert isotropy_algebra(m)[1] == 1
    assert goldstone_count(m) == 3
    assert matrix_rank(ym_mass_matrix(m)) == 3
    assert goldstone_split(m)[1].shape[1] == 1


def test_ym_mass_matrix_is_positive_semidefinite():
    w = np.linalg.eigvalsh(ym_mass_matrix(electroweak_model()))
    assert w.min() > -1e-12


def test_abelian_model_eats_one_goldstone():
    m = abelian_model()
    assert goldstone_count(m) == 1 and matrix_rank(ym_mass_matrix(m)) == 1


def test_su2_doublet_fully_broken():
    m = su2_doublet_model()
    assert isotropy_algebra(m)[1] == 0 and goldstone_count(m) == 3


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_higgs_dinner_on_random_models(seed):
    m = random_model(np.random.default_rng(seed))
    assert matrix_rank(ym_mass_matrix(m)) == goldstone_count(m)


def test_non_equivariant_yukawa_rejected():
    m = electroweak_model()
    bad = m.yukawa.copy()
    bad[0] = bad[0] + np.array([[0, 1, 0], [0, 0, 0], [0, 0, 0]])
    with pytest.raises(ModelError):
        FermionModel(m.generators, m.higgs_generators, m.chi, bad, m.vacuum)


def test_spectrum_invariant_under_gauge_rotation():
    m = electroweak_model()
    _, gh = group_element(m, np.array([0.3, -1.1, 0.7, 0.2]))
    a = np.sort(fermionic_mass_operator(m, REP).eigenvalues.imag)
    b = np.sort(fermionic_mass_operator(m.with_vacuum(gh @ m.vacuum), REP).eigenvalues.imag)
    assert np.allclose(a, b, atol=1e-10)


def test_eigenbundle_projectors_resolve_identity():
    mf = fermionic_mass_operator(electroweak_model(), REP).mass_operator
    parts = eigenbundle_split(mf)
    assert [round(w, 8) for w, _ in parts] == [0.0, 1.0]
    assert np.allclose(sum(p for _, p in parts), np.eye(len(mf)))


def test_compatibility_deficit_ratio_is_constant():
    m = electroweak_model()
    rng = np.random.default_rng(4)
    ratios = []
    for _ in range(5):
        a = rng.normal(size=(4, m.dim_g))
        ratios.append(compatibility_deficit(m, REP, a, np.eye(4)) / ym_quadratic_form(m, a, np.eye(4)))
    assert np.allclose(ratios, 2.0)  # 2^(k-1) with k = n/2


def test_unitary_gauge_aligns_with_vacuum():
    m = electroweak_model()
    rng = np.random.default_rng(5)
    z = rng.normal(size=2) + 1j * rng.normal(size=2)
    z /= np.linalg.norm(z)
    gf, gh = group_element(m, unitary_gauge(m, z, rng=rng))
    assert np.allclose(gh @ z, m.vacuum, atol=1e-9)


def test_curvature_decomposition_is_exact():
    m = electroweak_model()
    rep = build_gamma_rep((2, 0))
    grid = Grid.torus(2, 6)
    x = grid.coordinates()
    a = 0.3 * np.sin(x[:, :1, None]) * np.ones((1, 2, m.dim_g))
    h = 0.2 * np.cos(x[:, 1:2]) * np.array([[0.5, 1.0]])
    res = curvature_decomposition_check(m, rep, grid, a, h)
    assert res.residual < 1e-10
    assert set(res.terms) == {"yang_mills", "goldstone", "higgs", "mass"}


def test_model_serialization_round_trip():
    m = random_model(np.random.default_rng(6))
    text = dumps_model(m)
    m2 = loads_model(text)
    assert dumps_model(m2) == text
    assert np.array_equal(m2.yukawa, m.yukawa)


def test_malformed_model_file_rejected():
    with pytest.raises(ModelError):
        loads_model("not a model")
