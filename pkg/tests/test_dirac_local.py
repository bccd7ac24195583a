import numpy as np
import pytest

from diracgauge.clifford import build_gamma_rep
from diracgauge.dirac_local import (GradingError, NotSimpleType, SolderingForm, assemble_omega, check_simple_type,
                                    dirac_potential_analytic, dirac_potential_constant, extract_phi,
                                    make_simple_type, round_trip_residual, simple_type_solution_space,
                                    soldering_contract, total_grading)

CHI = np.diag([1.0, -1.0])


def odd(rng, chi=CHI):
    n = len(chi)
    x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (x - chi @ x @ chi) / 2


@pytest.mark.parametrize("sig", [(2, 0), (1, 1), (4, 0), (3, 1)])
@pytest.mark.parametrize("s", [1, -1])
def test_soldering_form_is_right_inverse(sig, s):
    rep = build_gamma_rep(sig, s)
    t = np.random.default_rng(0).normal(size=(2 * rep.dim, 2 * rep.dim))
    assert np.allclose(soldering_contract(SolderingForm(rep), t), t)


@pytest.mark.parametrize("sig", [(2, 0), (3, 1)])
def test_simple_type_round_trip(sig):
    rep = build_gamma_rep(sig)
    rng = np.random.default_rng(1)
    phi = odd(rng)
    om = assemble_omega(make_simple_type(rep, CHI, phi))
    ok, res = check_simple_type(om, rep)
    assert ok and res < 1e-10
    assert np.allclose(extract_phi(om, rep, CHI), phi)
    assert round_trip_residual(om, rep, CHI) < 1e-10


def test_even_phi_rejected():
    rep = build_gamma_rep((2, 0))
    with pytest.raises(GradingError):
        make_simple_type(rep, CHI, np.eye(2))


def test_generic_connection_is_not_simple_type():
    rep = build_gamma_rep((2, 0))
    rng = np.random.default_rng(2)
    om = rng.normal(size=(2, 4, 4)) + 1j * rng.normal(size=(2, 4, 4))
    ok, res = check_simple_type(om, rep)
    assert not ok and res > 1e-3
    with pytest.raises(NotSimpleType):
        extract_phi(om, rep, CHI)


@pytest.mark.parametrize("n", [2, 4])
def test_solution_space_matches_construction(n):
    rep = build_gamma_rep((n, 0))
    space = simple_type_solution_space(rep, CHI, full=False)
    assert space.dim == 2  # odd 2x2 blocks
    assert max(space.containment()) < 1e-8


def test_non_chiral_solution_space_is_empty():
    assert simple_type_solution_space(build_gamma_rep((2, 0)), np.eye(2), full=False).dim == 0


def test_total_grading_anticommutes_with_gammas():
    rep = build_gamma_rep((3, 1))
    gr = total_grading(rep, CHI)
    for g in rep.gammas:
        big = np.kron(g, np.eye(2))
        assert np.allclose(gr @ big + big @ gr, 0)


@pytest.mark.parametrize("sig,s,ratio", [((2, 0), 1, 4 / 3), ((2, 0), -1, 0.8), ((4, 0), 1, 8 / 11),
                                         ((4, 0), -1, 8 / 13)])
def test_constant_potential_ratio_to_closed_form(sig, s, ratio):
    rep = build_gamma_rep(sig, s)
    d = make_simple_type(rep, CHI, odd(np.random.default_rng(3)))
    from diracgauge.lattice import FieldConfig, Grid, blw_split, build_lattice_dirac, dirac_potential_numeric
    om = assemble_omega(d)
    grid = Grid.torus(rep.n, 4)
    theta = np.broadcast_to(om, (grid.sites,) + om.shape).copy()
    v = dirac_potential_numeric(blw_split(build_lattice_dirac(FieldConfig(rep, CHI, theta=theta), grid)).blocks)
    assert np.allclose(v, dirac_potential_constant(d), atol=1e-10)
    assert abs(v[0] / dirac_potential_analytic(d) - ratio) < 1e-10
