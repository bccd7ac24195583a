import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from diracgauge.clifford import (CliffordElement, CliffordError, Signature, build_gamma_rep, frame_gammas,
                                 gamma_of_blade, grade_project)


@pytest.mark.parametrize("sig", [(2, 0), (1, 1), (0, 2), (4, 0), (3, 1), (1, 3), (6, 0), (4, 4)])
@pytest.mark.parametrize("s", [1, -1])
def test_anticommutators_follow_convention_sign(sig, s):
    rep = build_gamma_rep(sig, s)
    g = rep.gammas
    eta = Signature(*sig).eta
    for a in range(rep.n):
        for b in range(rep.n):
            target = 2 * s * (eta[a] if a == b else 0) * np.eye(rep.dim)
            assert np.allclose(g[a] @ g[b] + g[b] @ g[a], target, atol=1e-12)


def test_dimension_is_two_to_half_n():
    assert build_gamma_rep((3, 1)).dim == 4
    assert build_gamma_rep((6, 2)).dim == 16


def test_odd_dimension_rejected():
    with pytest.raises(CliffordError):
        build_gamma_rep((3, 0))


def test_bad_convention_sign_rejected():
    with pytest.raises(CliffordError):
        build_gamma_rep((2, 0), 2)


@pytest.mark.parametrize("sig", [(2, 0), (1, 1), (3, 1), (4, 0)])
def test_chirality_is_hermitian_involution(sig):
    rep = build_gamma_rep(sig)
    gm = rep.chirality
    assert np.allclose(gm @ gm, np.eye(rep.dim))
    assert np.allclose(gm, gm.conj().T)
    assert abs(np.trace(gm)) < 1e-12


def test_blade_gram_is_diagonal():
    rep = build_gamma_rep((3, 1))
    assert np.allclose(rep.blade_gram(), rep.dim * np.eye(2**rep.n))


def test_blade_requires_increasing_indices():
    rep = build_gamma_rep((4, 0))
    assert np.allclose(gamma_of_blade(rep, (0, 1)), rep.gammas[0] @ rep.gammas[1])
    with pytest.raises(CliffordError):
        gamma_of_blade(rep, (1, 0))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([(2, 0), (1, 1), (4, 0), (3, 1)]))
def test_coefficients_round_trip(seed, sig):
    rep = build_gamma_rep(sig)
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(rep.dim, rep.dim)) + 1j * rng.normal(size=(rep.dim, rep.dim))
    assert np.allclose(rep.from_coefficients(rep.coefficients(x)), x)
    assert np.allclose(sum(grade_project(rep, x, k) for k in range(rep.n + 1)), x)


def test_grades_of_product_of_vectors():
    rep = build_gamma_rep((4, 0))
    a = CliffordElement(rep, rep.gammas[0])
    b = CliffordElement(rep, rep.gammas[1] + rep.gammas[0])
    assert (a * b).grades_present() == [0, 2]


def test_frame_gammas_for_diagonal_metric():
    rep = build_gamma_rep((2, 0))
    g = np.diag([4.0, 9.0])
    fg = frame_gammas(rep, g)
    inv = np.linalg.inv(g)
    for m in range(2):
        for n in range(2):
            assert np.allclose(fg[m] @ fg[n] + fg[n] @ fg[m], 2 * inv[m, n] * np.eye(2))
