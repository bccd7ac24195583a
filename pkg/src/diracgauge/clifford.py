"""Gamma-matrix representations of real Clifford algebras Cl(p, q).

The representation is built from iterated tensor products of Pauli
matrices, which gives unitary generators in dimension 2**(n/2).  Indices
are zero-based throughout: a blade is a strictly increasing tuple of
generator indices, and ``()`` is the identity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

_CHIRALITY_PHASES = (1.0 + 0j, 1j, -1.0 + 0j, -1j)


class CliffordError(ValueError):
    """Raised for unsupported signatures or malformed blades."""


@dataclass(frozen=True)
class Signature:
    """Metric signature: ``p`` directions squaring to +1, then ``q`` to -1."""

    p: int
    q: int

    def __post_init__(self):
        if self.p < 0 or self.q < 0:
            raise CliffordError(f"negative signature entry ({self.p}, {self.q})")

    @property
    def dim(self) -> int:
        return self.p + self.q

    @property
    def eta(self) -> np.ndarray:
        """Diagonal metric as a 1-d array of +-1."""
        return np.array([1.0] * self.p + [-1.0] * self.q)

    @property
    def metric(self) -> np.ndarray:
        return np.diag(self.eta)

    @property
    def is_lorentzian(self) -> bool:
        return min(self.p, self.q) == 1


def _kron_all(factors):
    out = np.eye(1, dtype=complex)
    for f in factors:
        out = np.kron(out, f)
    return out


def euclidean_generators(n: int) -> list[np.ndarray]:
    """Hermitian, pairwise anticommuting, involutive generators for even ``n``."""
    if n % 2 or n <= 0:
        raise CliffordError(f"need a positive even dimension, got {n}")
    k = n // 2
    gens = []
    for j in range(k):
        for s in (SIGMA_X, SIGMA_Y):
            gens.append(_kron_all([SIGMA_Z] * j + [s] + [np.eye(2)] * (k - j - 1)))
    return gens


def all_blades(n: int) -> list[tuple[int, ...]]:
    """Blades ordered by grade, then lexicographically."""
    return [b for m in range(n + 1) for b in itertools.combinations(range(n), m)]


@dataclass(frozen=True, eq=False)
class GammaRep:
    """Matrix representation of Cl(p, q) with {g_a, g_b} = 2 s eta_ab.

    Here ``s`` is ``convention_sign``.  Generators are unitary; those whose
    square must be -1 carry a factor of i.
    """

    signature: Signature
    convention_sign: int = 1
    gammas: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.convention_sign not in (1, -1):
            raise CliffordError("convention_sign must be +1 or -1")
        base = euclidean_generators(self.signature.dim)
        squares = self.convention_sign * self.signature.eta
        gam = np.array([g if sq > 0 else 1j * g for g, sq in zip(base, squares)])
        gam.setflags(write=False)
        object.__setattr__(self, "gammas", gam)

    @property
    def n(self) -> int:
        return self.signature.dim

    @property
    def dim(self) -> int:
        """Matrix size 2**(n/2)."""
        return self.gammas.shape[1]

    @property
    def metric(self) -> np.ndarray:
        return self.signature.metric

    @cached_property
    def blades(self) -> list[tuple[int, ...]]:
        return all_blades(self.n)

    @cached_property
    def blade_index(self) -> dict[tuple[int, ...], int]:
        return {b: i for i, b in enumerate(self.blades)}

    @cached_property
    def blade_matrices(self) -> np.ndarray:
        """Stack of all 2**n blade matrices, in ``blades`` order."""
        mats = np.array([self._product(b) for b in self.blades])
        mats.setflags(write=False)
        return mats

    def _product(self, indices) -> np.ndarray:
        out = np.eye(self.dim, dtype=complex)
        for i in indices:
            out = out @ self.gammas[i]
        return out

    def product(self, indices) -> np.ndarray:
        """Ordered product of generators; repeated indices are allowed."""
        for i in indices:
            if not 0 <= i < self.n:
                raise CliffordError(f"generator index {i} out of range")
        return self._product(indices)

    @cached_property
    def chirality_phase(self) -> complex:
        top = self.blade_matrices[-1]
        eye = np.eye(self.dim)
        for c in _CHIRALITY_PHASES:
            if np.allclose((c * top) @ (c * top), eye, atol=1e-12):
                return c
        raise CliffordError("no unit phase makes the top blade an involution")

    @cached_property
    def chirality(self) -> np.ndarray:
        gm = self.chirality_phase * self.blade_matrices[-1]
        gm.setflags(write=False)
        return gm

    @cached_property
    def dirac_conjugation(self) -> np.ndarray:
        """Hermitian involution beta with beta g^a^dagger beta = +-g^a.

        Only defined for Lorentzian signatures, where beta is (a phase
        times) the single generator of minority sign.  It anticommutes with
        the chirality element.
        """
        if not self.signature.is_lorentzian:
            raise CliffordError("Dirac conjugation needs a Lorentzian signature")
        squares = self.convention_sign * self.signature.eta
        minority = np.flatnonzero(squares > 0) if (squares > 0).sum() == 1 else np.flatnonzero(squares < 0)
        g = self.gammas[minority[0]]
        return g if np.allclose(g, g.conj().T) else 1j * g

    def clifford_residual(self) -> float:
        """Max deviation from {g_a, g_b} = 2 s eta_ab."""
        eye = np.eye(self.dim)
        worst = 0.0
        for a in range(self.n):
            for b in range(a, self.n):
                ga, gb = self.gammas[a], self.gammas[b]
                target = 2 * self.convention_sign * self.metric[a, b] * eye
                worst = max(worst, np.abs(ga @ gb + gb @ ga - target).max())
        return float(worst)

    def blade_gram(self) -> np.ndarray:
        """Frobenius Gram matrix of the blade basis (2**n square)."""
        flat = self.blade_matrices.reshape(len(self.blades), -1)
        return flat.conj() @ flat.T

    def coefficients(self, x: np.ndarray) -> np.ndarray:
        """Blade coefficients of a matrix, in ``blades`` order.

        Uses tr(B^-1 B') = dim * delta, valid because every non-identity
        blade is traceless in even dimension.  Works on trailing-axis stacks
        of shape (..., dim, dim).
        """
        inv = np.conj(np.swapaxes(self.blade_matrices, -1, -2))
        return np.einsum("bij,...ji->...b", inv, x) / self.dim

    def from_coefficients(self, coeffs: np.ndarray) -> np.ndarray:
        return np.einsum("...b,bij->...ij", coeffs, self.blade_matrices)


def build_gamma_rep(signature: Signature | tuple[int, int], convention_sign: int = 1) -> GammaRep:
    """Gamma representation for an even total dimension p + q."""
    if not isinstance(signature, Signature):
        signature = Signature(*signature)
    if signature.dim % 2 or signature.dim == 0:
        raise CliffordError(f"p+q must be positive and even, got {signature.dim}")
    return GammaRep(signature, convention_sign)


def _normalize_blade(indices) -> tuple[int, ...]:
    blade = tuple(int(i) for i in indices)
    if any(a >= b for a, b in zip(blade, blade[1:])):
        raise CliffordError(f"blade indices must be strictly increasing: {blade}")
    return blade


def gamma_of_blade(rep: GammaRep, indices) -> np.ndarray:
    """Matrix of the blade g^{i1} ... g^{ik} for increasing indices."""
    blade = _normalize_blade(indices)
    if blade and not 0 <= blade[-1] < rep.n:
        raise CliffordError(f"blade {blade} out of range for n={rep.n}")
    return rep.blade_matrices[rep.blade_index[blade]].copy()


def chirality_element(rep: GammaRep) -> np.ndarray:
    return rep.chirality.copy()


def grade_project(rep: GammaRep, x: np.ndarray, grade: int) -> np.ndarray:
    """Grade-``grade`` part of a matrix expressed in the blade basis."""
    if not 0 <= grade <= rep.n:
        raise CliffordError(f"grade {grade} out of range")
    coeffs = rep.coefficients(x)
    mask = np.array([len(b) == grade for b in rep.blades])
    return rep.from_coefficients(np.where(mask, coeffs, 0))


@dataclass(frozen=True, eq=False)
class CliffordElement:
    """A matrix in the representation together with its blade coefficients."""

    rep: GammaRep
    matrix: np.ndarray
    coefficients: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (self.rep.dim, self.rep.dim):
            raise CliffordError(f"expected {self.rep.dim}x{self.rep.dim} matrix, got {m.shape}")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "coefficients", self.rep.coefficients(m))

    def grade(self, m: int) -> "CliffordElement":
        return CliffordElement(self.rep, grade_project(self.rep, self.matrix, m))

    def grades_present(self, tol: float = 1e-12) -> list[int]:
        present = {len(b) for b, c in zip(self.rep.blades, self.coefficients) if abs(c) > tol}
        return sorted(present)

    def __mul__(self, other: "CliffordElement") -> "CliffordElement":
        return CliffordElement(self.rep, self.matrix @ other.matrix)

    def __add__(self, other: "CliffordElement") -> "CliffordElement":
        return CliffordElement(self.rep, self.matrix + other.matrix)


def frame_gammas(rep: GammaRep, metric: np.ndarray) -> np.ndarray:
    """Coordinate gammas g^mu = e^mu_a g^a for a general symmetric metric.

    The frame satisfies g^{mu nu} = e^mu_a eta^{ab} e^nu_b, so the returned
    matrices obey {g^mu, g^nu} = 2 s g^{mu nu}.  The metric must have the
    same signature as the representation.
    """
    g = np.asarray(metric, dtype=float)
    if g.shape != (rep.n, rep.n) or not np.allclose(g, g.T):
        raise CliffordError("metric must be a symmetric n x n matrix")
    if np.allclose(g, rep.metric):
        return rep.gammas.copy()
    lam, vecs = np.linalg.eigh(np.linalg.inv(g))
    eta = rep.signature.eta
    pos, neg = np.flatnonzero(lam > 0), np.flatnonzero(lam < 0)
    if len(pos) != (eta > 0).sum() or len(neg) != (eta < 0).sum():
        raise CliffordError("metric signature does not match the representation")
    order = np.empty(rep.n, dtype=int)
    order[eta > 0] = pos
    order[eta < 0] = neg
    frame = vecs[:, order] * np.sqrt(np.abs(lam[order]))
    return np.einsum("ma,aij->mij", frame, rep.gammas)
