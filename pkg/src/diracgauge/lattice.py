"""Sparse lattice realizations of Dirac-type operators on periodic grids.

An operator D = G^mu(x) (d_mu + w_mu(x)) is discretized with central
differences.  The matching connection Laplacian is built from the same
difference operators, so that for constant coefficients D^2 - Laplacian
is exactly site-diagonal.  Per-site remainders E(x) are read off by
applying D^2 - Laplacian to constant sections, which converges at O(h^2)
for smooth varying fields.

Vectors are indexed by ``site * F + f`` where sites follow C order on
the grid and F is the fiber dimension.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.sparse as sp

from .clifford import GammaRep
from .dirac_local import bochner_connection, clifford_contract, fiber_gammas

DEFAULT_MEMORY_CAP = 2_000_000


class LatticeError(ValueError):
    pass


@dataclass(frozen=True)
class Grid:
    """Periodic grid with ``shape[mu]`` sites and spacing ``spacing[mu]``."""

    shape: tuple
    spacing: tuple
    periodic: bool = field(default=True, init=False)

    def __post_init__(self):
        if len(self.shape) != len(self.spacing):
            raise LatticeError("shape and spacing must have the same length")
        if min(self.shape) < 4:
            raise LatticeError("need at least 4 sites per direction")

    @classmethod
    def torus(cls, n: int, sites: int, length: float = 2 * np.pi) -> "Grid":
        return cls((sites,) * n, (length / sites,) * n)

    @property
    def n(self) -> int:
        return len(self.shape)

    @property
    def sites(self) -> int:
        return int(np.prod(self.shape))

    def coordinates(self) -> np.ndarray:
        """Site coordinates x_mu = i_mu h_mu, shape (sites, n)."""
        axes = [np.arange(L) * h for L, h in zip(self.shape, self.spacing)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    def center(self) -> int:
        return int(np.ravel_multi_index(tuple(L // 2 for L in self.shape), self.shape))

    def shift(self, mu: int, step: int = 1) -> sp.csr_matrix:
        """Matrix S with (S f)(x) = f(x + step h e_mu), periodic."""
        idx = np.arange(self.sites).reshape(self.shape)
        target = np.roll(idx, -step, axis=mu).ravel()
        return sp.csr_matrix((np.ones(self.sites), (np.arange(self.sites), target)),
                             shape=(self.sites, self.sites))

    def central_difference(self, mu: int) -> sp.csr_matrix:
        return ((self.shift(mu, 1) - self.shift(mu, -1)) / (2 * self.spacing[mu])).tocsr()

    def field_difference(self, values: np.ndarray, mu: int) -> np.ndarray:
        """Central difference of per-site values (leading axis = sites)."""
        arr = values.reshape(self.shape + values.shape[1:])
        d = (np.roll(arr, -1, axis=mu) - np.roll(arr, 1, axis=mu)) / (2 * self.spacing[mu])
        return d.reshape(values.shape)

    def field_second_difference(self, values: np.ndarray, mu: int) -> np.ndarray:
        arr = values.reshape(self.shape + values.shape[1:])
        d = (np.roll(arr, -1, axis=mu) - 2 * arr + np.roll(arr, 1, axis=mu)) / self.spacing[mu] ** 2
        return d.reshape(values.shape)


def site_blocks(blocks: np.ndarray) -> sp.csr_matrix:
    """Block-diagonal sparse matrix from per-site blocks (sites, F, F)."""
    sites, f, _ = blocks.shape
    base = np.arange(sites)[:, None, None] * f
    rows = np.broadcast_to(base + np.arange(f)[None, :, None], blocks.shape).ravel()
    cols = np.broadcast_to(base + np.arange(f)[None, None, :], blocks.shape).ravel()
    return sp.csr_matrix((blocks.ravel(), (rows, cols)), shape=(sites * f, sites * f))


def lift(op: sp.spmatrix, fiber: int) -> sp.csr_matrix:
    return sp.kron(op, sp.identity(fiber, format="csr"), format="csr")


@dataclass
class LatticeDirac:
    """A lattice Dirac-type operator together with its connection Laplacian."""

    grid: Grid
    fiber: int
    D: sp.csr_matrix
    laplacian: sp.csr_matrix
    omega: np.ndarray | None = None
    bochner: np.ndarray | None = None


def _conformal_bochner(gammas, omega, dsigma, sign):
    """Bochner connection for G^mu = e^-sigma g^mu on a 2D conformal chart.

    The Christoffel trace g^{mu nu} Gamma^l_{mu nu} vanishes in two
    dimensions, so only the derivative of the frame enters.
    """
    gw = np.einsum("mij,smjk->sik", gammas, omega)
    frame = -np.einsum("sm,mij,ljk->slik", dsigma, gammas, gammas)
    c = frame + np.einsum("lij,sjk->slik", gammas, gw) + np.einsum("sij,ljk->slik", gw, gammas)
    return sign / 2 * c


def lattice_dirac(grid: Grid, gammas: np.ndarray, omega: np.ndarray, metric: np.ndarray,
                  sign: int = 1, sigma: np.ndarray | None = None,
                  memory_cap: int = DEFAULT_MEMORY_CAP) -> LatticeDirac:
    """Assemble D and its connection Laplacian from per-site coefficients.

    gammas: constant frame gammas on the fiber, shape (n, F, F).
    omega: per-site connection coefficients, shape (sites, n, F, F).
    metric: constant diagonal frame metric.  ``sigma`` (sites,) turns on a
    2D conformal factor e^{2 sigma}, with G^mu = e^-sigma g^mu.
    """
    n, f = gammas.shape[0], gammas.shape[1]
    if grid.n != n:
        raise LatticeError("grid and gamma dimensions differ")
    if grid.sites * f > memory_cap:
        raise LatticeError(f"{grid.sites * f} degrees of freedom exceed cap {memory_cap}")
    if omega.shape != (grid.sites, n, f, f):
        raise LatticeError(f"omega must have shape {(grid.sites, n, f, f)}, got {omega.shape}")
    if not np.allclose(metric, np.diag(np.diag(metric))):
        raise LatticeError("lattice operators need a diagonal frame metric")
    eta = np.diag(metric)

    if sigma is None:
        scale = np.ones(grid.sites)
        wb = bochner_connection(gammas, omega, metric, sign)
    else:
        if n != 2:
            raise LatticeError("conformal charts are supported in two dimensions only")
        scale = np.exp(-sigma)
        dsigma = np.stack([grid.field_difference(sigma, mu) for mu in range(n)], axis=-1)
        c = _conformal_bochner(gammas, omega, dsigma, sign)
        wb = np.einsum("l,slik->slik", eta, c)

    diffs = [lift(grid.central_difference(mu), f) for mu in range(n)]
    d_op = sp.csr_matrix((grid.sites * f, grid.sites * f), dtype=complex)
    lap = sp.csr_matrix((grid.sites * f, grid.sites * f), dtype=complex)
    for mu in range(n):
        frame = site_blocks(np.einsum("s,ij->sij", scale, gammas[mu]))
        cov = diffs[mu] + site_blocks(omega[:, mu])
        d_op = d_op + frame @ cov
        cov_b = diffs[mu] + site_blocks(wb[:, mu])
        ginv = sign / eta[mu] * scale**2
        lap = lap + lift(sp.diags(ginv), f) @ cov_b @ cov_b
    return LatticeDirac(grid, f, d_op.tocsr(), lap.tocsr(), omega, wb)


@dataclass
class FieldConfig:
    """Per-site fields on a grid.

    gauge: (sites, n, N_F, N_F) anti-Hermitian gauge potential.
    theta: (sites, n, D, D) Dirac-form coefficients on the full fiber.
    sigma: (sites,) conformal factor for 2D curved charts.
    """

    rep: GammaRep
    chi: np.ndarray
    gauge: np.ndarray | None = None
    theta: np.ndarray | None = None
    sigma: np.ndarray | None = None
    max_gradient: float | None = None

    @property
    def n_internal(self) -> int:
        return self.chi.shape[0]

    def omega(self, grid: Grid) -> np.ndarray:
        rep, nf = self.rep, self.n_internal
        d = rep.dim * nf
        out = np.zeros((grid.sites, rep.n, d, d), dtype=complex)
        if self.gauge is not None:
            out += np.einsum("ij,smab->smiajb", np.eye(rep.dim), self.gauge).reshape(out.shape)
        if self.theta is not None:
            out += self.theta
        if self.sigma is not None:
            gam = rep.gammas
            ds = np.stack([grid.field_difference(self.sigma, mu) for mu in range(rep.n)], axis=-1)
            # w_a = (1/4) d_b sigma [g_a, g_b] in an orthonormal frame
            comm = np.einsum("aij,bjk->abik", gam, gam) - np.einsum("bij,ajk->abik", gam, gam)
            eta = rep.signature.eta
            spin = 0.25 * np.einsum("sb,b,abik->saik", ds, eta, comm)
            out += np.einsum("saik,bc->saibkc", spin, np.eye(nf)).reshape(out.shape)
        return out

    def check_smooth(self, grid: Grid) -> None:
        if self.max_gradient is None:
            return
        for arr in (self.gauge, self.theta, self.sigma):
            if arr is None:
                continue
            for mu in range(grid.n):
                if np.abs(grid.field_difference(arr, mu)).max() > self.max_gradient:
                    raise LatticeError("field gradient exceeds the configured bound")


def build_lattice_dirac(fields: FieldConfig, grid: Grid, memory_cap: int = DEFAULT_MEMORY_CAP) -> LatticeDirac:
    fields.check_smooth(grid)
    rep = fields.rep
    gam = fiber_gammas(rep, fields.n_internal)
    return lattice_dirac(grid, gam, fields.omega(grid), rep.metric, rep.convention_sign,
                         fields.sigma, memory_cap)


@dataclass
class BLWSplit:
    """Remainder of D^2 minus its connection Laplacian."""

    remainder: sp.csr_matrix
    blocks: np.ndarray
    offsite_norm: float
    first_order_residual: float


def _offsite_norm(m: sp.csr_matrix, f: int) -> float:
    coo = m.tocoo()
    mask = (coo.row // f) != (coo.col // f)
    return float(np.abs(coo.data[mask]).max(initial=0.0))


def constant_sections(sites: int, f: int) -> np.ndarray:
    return np.kron(np.ones((sites, 1)), np.eye(f))


def blw_split(ld: LatticeDirac) -> BLWSplit:
    """Split D^2 = Laplacian + E and measure how far E is from zero order.

    ``blocks[x]`` is E(x) read off from constant sections.  The first-order
    residual max |E(f psi) - f E(psi)| over lowest Fourier modes f vanishes
    for a genuinely zero-order remainder.
    """
    grid, f = ld.grid, ld.fiber
    if ld.D.shape != ld.laplacian.shape:
        raise LatticeError("operator and Laplacian shapes differ")
    rem = (ld.D @ ld.D - ld.laplacian).tocsr()
    const = constant_sections(grid.sites, f)
    blocks = np.asarray(rem @ const).reshape(grid.sites, f, f)
    x = grid.coordinates()
    worst = 0.0
    for mu in range(grid.n):
        period = grid.shape[mu] * grid.spacing[mu]
        wave = np.exp(2j * np.pi * x[:, mu] / period)
        lhs = np.asarray(rem @ (np.repeat(wave, f)[:, None] * const)).reshape(grid.sites, f, f)
        worst = max(worst, float(np.abs(lhs - wave[:, None, None] * blocks).max()))
    return BLWSplit(rem, blocks, _offsite_norm(rem, f), worst)


def site_remainder(ld: LatticeDirac, site: int) -> np.ndarray:
    """E at one site, computing only that row block of D^2 - Laplacian."""
    f = ld.fiber
    rows = slice(site * f, (site + 1) * f)
    block = ld.D[rows] @ ld.D - ld.laplacian[rows]
    return np.asarray(block @ constant_sections(ld.grid.sites, f))


def dirac_potential_numeric(blocks: np.ndarray) -> np.ndarray:
    """Per-site trace of the remainder."""
    return np.einsum("sii->s", blocks)


def gauge_transform(ld: LatticeDirac, u: np.ndarray, gammas: np.ndarray | None = None,
                    tol: float = 1e-10) -> LatticeDirac:
    """Conjugate D and its Laplacian by per-site unitaries u(x).

    ``u`` has shape (sites, F, F).  When ``gammas`` is given, u(x) must
    commute with them.
    """
    f = ld.fiber
    if u.shape != (ld.grid.sites, f, f):
        raise LatticeError(f"gauge field must have shape {(ld.grid.sites, f, f)}")
    eye = np.eye(f)
    if np.abs(np.einsum("sij,skj->sik", u, u.conj()) - eye).max() > tol:
        raise LatticeError("gauge field is not unitary")
    if gammas is not None:
        comm = np.einsum("sij,mjk->smik", u, gammas) - np.einsum("mij,sjk->smik", gammas, u)
        if np.abs(comm).max() > tol:
            raise LatticeError("gauge field does not commute with the Clifford action")
    big = site_blocks(u)
    inv = site_blocks(np.conj(np.swapaxes(u, -1, -2)))
    return LatticeDirac(ld.grid, f, (big @ ld.D @ inv).tocsr(), (big @ ld.laplacian @ inv).tocsr())


def connection_curvature(grid: Grid, conn: np.ndarray) -> np.ndarray:
    """F_{mu nu}(x) = d_mu A_nu - d_nu A_mu + [A_mu, A_nu] by central differences.

    conn has shape (sites, n, F, F); returns (sites, n, n, F, F).
    """
    n = grid.n
    d = np.stack([grid.field_difference(conn, mu) for mu in range(n)], axis=1)
    comm = conn[:, :, None] @ conn[:, None]
    return d - np.swapaxes(d, 1, 2) + comm - np.swapaxes(comm, 1, 2)


def dirac_connection(ld: LatticeDirac, gammas: np.ndarray, soldering: np.ndarray) -> np.ndarray:
    """Per-site Dirac connection w^B + T (g(w) - g(w^B)) on a flat chart."""
    diff = clifford_contract(gammas, ld.omega) - clifford_contract(gammas, ld.bochner)
    return ld.bochner + soldering[None] @ diff[:, None]


@dataclass(frozen=True)
class ConformalChart:
    """2D metric e^{2 sigma(x)} delta with sigma given as a function."""

    sigma: Callable[[np.ndarray], np.ndarray]
    h: float = 1e-3


@dataclass(frozen=True)
class FlatChart:
    metric: np.ndarray | None = None


def scalar_curvature(chart, point) -> float:
    """Scalar curvature at a point; -2 e^{-2 sigma} Laplacian(sigma) in 2D."""
    if isinstance(chart, FlatChart):
        return 0.0
    if not isinstance(chart, ConformalChart):
        raise LatticeError(f"unsupported chart {type(chart).__name__}")
    x = np.asarray(point, dtype=float)
    if x.shape != (2,):
        raise LatticeError("conformal charts are two dimensional")
    h = chart.h
    s0 = chart.sigma(x)
    lap = sum(chart.sigma(x + h * e) - 2 * s0 + chart.sigma(x - h * e) for e in np.eye(2)) / h**2
    return float(-2 * np.exp(-2 * s0) * lap)


def scalar_curvature_field(grid: Grid, sigma: np.ndarray) -> np.ndarray:
    """Per-site scalar curvature of e^{2 sigma} from sampled sigma values."""
    lap = sum(grid.field_second_difference(sigma, mu) for mu in range(grid.n))
    return -2 * np.exp(-2 * sigma) * lap


def dalambert_check(grid: Grid, rep: GammaRep, gauge: np.ndarray, mass: np.ndarray,
                    tol: float = 1e-8):
    """Does (D_A + i M)^2 equal D_A^2 - M^2 on the lattice?

    Returns (holds, deficit norm, deficit operator).
    """
    nf = gauge.shape[-1]
    fields = FieldConfig(rep, np.eye(nf), gauge=gauge)
    ld = build_lattice_dirac(fields, grid)
    m = site_blocks(np.broadcast_to(mass, (grid.sites,) + mass.shape).astype(complex))
    d_full = ld.D + 1j * m
    deficit = (d_full @ d_full - (ld.D @ ld.D - m @ m)).tocsr()
    norm = float(np.abs(deficit.data).max(initial=0.0))
    return norm <= tol, norm, deficit


def write_triplets(matrix: sp.spmatrix, path) -> None:
    """Dump a sparse matrix as 'row col re im' lines."""
    coo = matrix.tocoo()
    with open(path, "w") as fh:
        for r, c, v in zip(coo.row, coo.col, coo.data):
            fh.write(f"{r} {c} {v.real:.17g} {v.imag:.17g}\n")


def read_triplets(path, shape) -> sp.csr_matrix:
    data = np.loadtxt(path, ndmin=2)
    if data.size == 0:
        return sp.csr_matrix(shape, dtype=complex)
    return sp.csr_matrix((data[:, 2] + 1j * data[:, 3], (data[:, 0].astype(int), data[:, 1].astype(int))),
                         shape=shape)
