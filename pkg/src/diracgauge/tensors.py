"""Index gymnastics for rank-n tensors with a trailing skew block.

Tensors are dense arrays whose first ``rank`` axes run over 0..n-1;
any further axes hold the value of each component (scalars, or matrices
when the entries are endomorphism valued).  Antisymmetrization uses the
1/m! normalization, so it is idempotent.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .clifford import GammaRep


class SymmetryError(ValueError):
    """A declared index symmetry does not hold."""


def permutation_sign(seq) -> int:
    """Sign of the permutation sorting ``seq``; 0 if an entry repeats."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def levi_civita(indices) -> int:
    """Totally antisymmetric symbol, +1 on increasing order."""
    return permutation_sign(indices)


@dataclass
class IndexedTensor:
    """Dense tensor with ``rank`` index axes of length ``n``.

    ``skew_from`` marks that the tensor is antisymmetric in index axes
    ``skew_from, ..., rank-1``; ``None`` means no declared symmetry.
    """

    data: np.ndarray
    rank: int
    skew_from: int | None = None

    def __post_init__(self):
        self.data = np.asarray(self.data)
        shape = self.data.shape[: self.rank]
        if len(shape) != self.rank or len(set(shape)) > 1:
            raise SymmetryError(f"index axes must share one length, got {shape}")

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def value_shape(self) -> tuple[int, ...]:
        return self.data.shape[self.rank :]

    def symmetry_residual(self) -> float:
        if self.skew_from is None or self.rank - self.skew_from < 2:
            return 0.0
        axes = tuple(range(self.skew_from, self.rank))
        return float(np.abs(self.data - antisymmetrize(self.data, axes)).max(initial=0.0))

    def check(self, tol: float = 1e-10) -> None:
        res = self.symmetry_residual()
        if res > tol:
            raise SymmetryError(f"declared skew symmetry violated by {res:.3e}")


def antisymmetrize(data: np.ndarray, axes) -> np.ndarray:
    """Average over signed permutations of the given axes (1/m! convention)."""
    data = np.asarray(data)
    axes = tuple(axes)
    if len(set(axes)) != len(axes) or any(not 0 <= a < data.ndim for a in axes):
        raise SymmetryError(f"invalid index subset {axes}")
    if len(axes) < 2:
        return data.copy()
    out = np.zeros_like(data, dtype=np.result_type(data, float))
    base = list(range(data.ndim))
    for perm in itertools.permutations(range(len(axes))):
        order = base.copy()
        for slot, src in zip(axes, perm):
            order[slot] = axes[src]
        out += permutation_sign(perm) * np.transpose(data, order)
    return out / math.factorial(len(axes))


def random_trailing_skew(n: int, rng: np.random.Generator, value_shape=()) -> IndexedTensor:
    """Random complex rank-n tensor, skew in its trailing n-1 indices."""
    shape = (n,) * n + tuple(value_shape)
    raw = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return IndexedTensor(antisymmetrize(raw, range(1, n)), n, skew_from=1)


def _admissible(omega: IndexedTensor, tol: float) -> IndexedTensor:
    if omega.rank != omega.n:
        raise SymmetryError(f"need rank equal to dimension, got rank {omega.rank}, n {omega.n}")
    omega = IndexedTensor(omega.data, omega.rank, skew_from=1)
    omega.check(tol)
    return omega


def form1_rhs(omega: IndexedTensor) -> np.ndarray:
    """Full antisymmetric part plus the first-slot exchange corrections."""
    w = omega.data
    n = omega.n
    out = antisymmetrize(w, range(n))
    for j in range(1, n):
        swapped = np.swapaxes(w, 0, j)
        out = out + (w + swapped) / n
    return out


def verify_form1(omega: IndexedTensor, tol: float = 1e-10) -> float:
    """Max-norm residual of splitting w into its skew part plus corrections."""
    omega = _admissible(omega, tol)
    return float(np.abs(omega.data - form1_rhs(omega)).max(initial=0.0))


def gamma_products(gam: np.ndarray, m: int) -> np.ndarray:
    """Array P[i1..im] = g^{i1} ... g^{im} of shape (n,)*m + (d, d)."""
    n, d = gam.shape[0], gam.shape[1]
    out = np.broadcast_to(np.eye(d, dtype=complex), (d, d)).copy()
    for _ in range(m):
        out = np.einsum("...ij,ajk->...aik", out, gam)
    return out.reshape((n,) * m + (d, d))


def _contract(products: np.ndarray, data: np.ndarray, m: int) -> np.ndarray:
    """Sum over the first m index axes of ``data`` against gamma products."""
    n = products.shape[0]
    d = products.shape[-1]
    p = products.reshape(n**m, d, d)
    w = data.reshape((n**m,) + data.shape[m:])
    return np.tensordot(w, p, axes=([0], [0])) if w.ndim > 1 else np.einsum("a,aij->ij", w, p)


def _frame(rep: GammaRep, metric):
    from .clifford import frame_gammas

    g = rep.metric if metric is None else np.asarray(metric, dtype=float)
    return frame_gammas(rep, g), np.linalg.inv(g)


def form2_sides(rep: GammaRep, omega: IndexedTensor, metric=None):
    """Both sides of the first-slot exchange identity, one matrix per mu.

    Values must be scalar.  Returns (lhs, rhs), each of shape (n, d, d).
    """
    w = omega.data
    n = omega.n
    if omega.value_shape:
        raise SymmetryError("form2 is evaluated on scalar-valued tensors")
    gam, ginv = _frame(rep, metric)
    s = rep.convention_sign
    wa = antisymmetrize(w, range(n))
    prods = gamma_products(gam, n - 1)
    lhs = np.empty((n, rep.dim, rep.dim), dtype=complex)
    rhs = np.empty_like(lhs)
    for mu in range(n):
        # w_{i1 mu i3..in} -> axes (i1, i3..in)
        lhs[mu] = _contract(prods, np.take(w, mu, axis=1), n - 1)
        skew = _contract(prods, np.take(wa, mu, axis=0), n - 1)
        plain = _contract(prods, np.take(w, mu, axis=0), n - 1)
        trace_term = np.zeros((rep.dim, rep.dim), dtype=complex)
        if n >= 3:
            # g^{ab} w_{a b mu i4..in}
            traced = np.einsum("ab,ab...->...", ginv, np.take(w, mu, axis=2))
            trace_term = _contract(gamma_products(gam, n - 3), traced, n - 3)
        rhs[mu] = -n / (n - 1) * skew + plain / (n - 1) - s * (n - 2) * trace_term
    return lhs, rhs


def verify_form2(rep: GammaRep, omega: IndexedTensor, metric=None, tol: float = 1e-10) -> float:
    omega = _admissible(omega, tol)
    lhs, rhs = form2_sides(rep, omega, metric)
    return float(np.abs(lhs - rhs).max())


def contract_form4(rep: GammaRep, omega: IndexedTensor, metric=None, tol: float = 1e-10):
    """Full Clifford contraction versus its skew part plus a trace term.

    Returns (lhs, rhs) as matrices: lhs is the naive iterated product
    g^{i1}..g^{in} w_{i1..in}; rhs is the skew contraction plus
    (n-1) s g^{ab} g^{i3}..g^{in} w_{a b i3..in}.
    """
    omega = _admissible(omega, tol)
    if omega.value_shape:
        raise SymmetryError("form4 is evaluated on scalar-valued tensors")
    w = omega.data
    n = omega.n
    gam, ginv = _frame(rep, metric)
    lhs = _contract(gamma_products(gam, n), w, n)
    skew = _contract(gamma_products(gam, n), antisymmetrize(w, range(n)), n)
    traced = np.einsum("ab,ab...->...", ginv, w)
    trace_term = _contract(gamma_products(gam, n - 2), traced, n - 2)
    rhs = skew + rep.convention_sign * (n - 1) * trace_term
    return lhs, rhs


def verify_form4(rep: GammaRep, omega: IndexedTensor, metric=None, tol: float = 1e-10) -> float:
    lhs, rhs = contract_form4(rep, omega, metric, tol)
    return float(np.abs(lhs - rhs).max())


def best_scale(lhs: np.ndarray, rhs: np.ndarray) -> complex:
    """Least-squares factor c with lhs ~ c * rhs, to expose constant mismatches."""
    den = np.vdot(rhs, rhs)
    return complex(np.vdot(rhs, lhs) / den) if abs(den) > 0 else 1.0 + 0j
