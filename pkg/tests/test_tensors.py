import numpy as np
import pytest

from diracgauge.clifford import build_gamma_rep
from diracgauge.tensors import (IndexedTensor, SymmetryError, antisymmetrize, levi_civita, permutation_sign,
                                random_trailing_skew, verify_form1, verify_form2, verify_form4)


def test_permutation_signs():
    assert permutation_sign([0, 1, 2]) == 1
    assert permutation_sign([1, 0, 2]) == -1
    assert levi_civita([0, 0, 1]) == 0


def test_antisymmetrize_is_projection():
    rng = np.random.default_rng(1)
    x = rng.normal(size=(3, 3, 3))
    a = antisymmetrize(x, (1, 2))
    assert np.allclose(a, -np.swapaxes(a, 1, 2))
    assert np.allclose(antisymmetrize(a, (1, 2)), a)


def test_random_tensor_has_declared_symmetry():
    t = random_trailing_skew(4, np.random.default_rng(2))
    assert t.symmetry_residual() < 1e-14


def test_mismatched_index_lengths_rejected():
    with pytest.raises(SymmetryError):
        IndexedTensor(np.zeros((2, 3, 3)), rank=3)


@pytest.mark.parametrize("sig", [(2, 0), (1, 1), (4, 0), (3, 1)])
@pytest.mark.parametrize("s", [1, -1])
def test_identities_hold(sig, s):
    rep = build_gamma_rep(sig, s)
    rng = np.random.default_rng(3)
    for _ in range(20):
        t = random_trailing_skew(rep.n, rng)
        assert verify_form1(t) < 1e-10
        assert verify_form2(rep, t) < 1e-10
        assert verify_form4(rep, t) < 1e-10


def test_identity_rejects_non_admissible_tensor():
    rng = np.random.default_rng(4)
    t = IndexedTensor(rng.normal(size=(4, 4, 4)), rank=3, skew_from=None)
    with pytest.raises(SymmetryError):
        verify_form1(t)
