"""Yukawa models, fermionic masses and the Higgs mechanism at one fiber.

Gauge generators are anti-Hermitian.  The Higgs fiber C^{N_H} is treated
as a real vector space with coordinates (Re z_0, Im z_0, Re z_1, ...);
the Yukawa map is real-linear and stored as one N_F x N_F matrix per real
coordinate.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
from scipy.optimize import least_squares

from .clifford import GammaRep
from .dirac_local import SolderingForm, fiber_gammas
from .lattice import Grid, connection_curvature, dirac_connection, lattice_dirac

FORMAT_HEADER = "fermion-model-format 1"


class ModelError(ValueError):
    pass


def realify(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    return np.stack([z.real, z.imag], axis=-1).reshape(z.shape[:-1] + (2 * z.shape[-1],))


def complexify(r: np.ndarray) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    pairs = r.reshape(r.shape[:-1] + (r.shape[-1] // 2, 2))
    return pairs[..., 0] + 1j * pairs[..., 1]


def _null_real(a: np.ndarray, tol: float) -> np.ndarray:
    """Orthonormal basis (columns) of the real nullspace of ``a``."""
    _, s, vt = np.linalg.svd(a)
    rank = int((s > tol).sum())
    return vt[rank:].T


def _range_real(a: np.ndarray, tol: float) -> np.ndarray:
    u, s, _ = np.linalg.svd(a, full_matrices=True)
    rank = int((s > tol).sum())
    return u[:, :rank], u[:, rank:]


@dataclass
class FermionModel:
    """Gauge generators, Higgs representation, Yukawa map and vacuum."""

    generators: np.ndarray
    higgs_generators: np.ndarray
    chi: np.ndarray
    yukawa: np.ndarray
    vacuum: np.ndarray
    name: str = ""
    tol: float = 1e-10
    structure_constants: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.generators = np.asarray(self.generators, dtype=complex)
        self.higgs_generators = np.asarray(self.higgs_generators, dtype=complex)
        self.chi = np.asarray(self.chi, dtype=complex)
        self.yukawa = np.asarray(self.yukawa, dtype=complex)
        self.vacuum = np.asarray(self.vacuum, dtype=complex)
        if len(self.generators) != len(self.higgs_generators):
            raise ModelError("fermion and Higgs representations need the same number of generators")
        if self.yukawa.shape != (2 * self.n_h, self.n_f, self.n_f):
            raise ModelError(f"yukawa must have shape {(2 * self.n_h, self.n_f, self.n_f)}")
        for name, gens in (("fermion", self.generators), ("Higgs", self.higgs_generators)):
            if np.abs(gens + np.conj(np.swapaxes(gens, -1, -2))).max(initial=0) > self.tol:
                raise ModelError(f"{name} generators must be anti-Hermitian")
        self.structure_constants, res = self._structure_constants()
        if res > self.tol:
            raise ModelError(f"generators do not close under commutators (residual {res:.2e})")
        res = self.equivariance_residual()
        if res > self.tol:
            raise ModelError(f"Yukawa map is not equivariant (residual {res:.2e})")

    @property
    def dim_g(self) -> int:
        return len(self.generators)

    @property
    def n_f(self) -> int:
        return self.chi.shape[0]

    @property
    def n_h(self) -> int:
        return self.vacuum.shape[0]

    def _structure_constants(self):
        g = self.dim_g
        if g == 0:
            return np.zeros((0, 0, 0)), 0.0
        basis = realify(self.generators.reshape(g, -1)).T
        comm = np.einsum("aij,bjk->abik", self.generators, self.generators)
        comm = comm - np.swapaxes(comm, 0, 1)
        target = realify(comm.reshape(g * g, -1)).T
        coef, *_ = np.linalg.lstsq(basis, target, rcond=None)
        res = np.abs(basis @ coef - target).max(initial=0.0)
        return coef.T.reshape(g, g, g), float(res)

    def yukawa_map(self, z) -> np.ndarray:
        """G_Y(z) for a complex Higgs vector z."""
        return np.einsum("r,rij->ij", realify(z), self.yukawa)

    def rho_h(self, coeffs) -> np.ndarray:
        return np.einsum("a,aij->ij", coeffs, self.higgs_generators)

    def rho_f(self, coeffs) -> np.ndarray:
        return np.einsum("a,aij->ij", coeffs, self.generators)

    def equivariance_residual(self) -> float:
        """max |G_Y(rho_H(X) v) - [rho_F(X), G_Y(v)]| over generators and basis v."""
        worst = 0.0
        for r in np.eye(2 * self.n_h):
            v = complexify(r)
            y = self.yukawa_map(v)
            for tf, th in zip(self.generators, self.higgs_generators):
                lhs = self.yukawa_map(th @ v)
                worst = max(worst, float(np.abs(lhs - (tf @ y - y @ tf)).max()))
        return worst

    def with_vacuum(self, vacuum) -> "FermionModel":
        return FermionModel(self.generators, self.higgs_generators, self.chi, self.yukawa,
                            vacuum, self.name, self.tol)


@dataclass
class MassSpectrum:
    mass_operator: np.ndarray
    eigenvalues: np.ndarray


def fermionic_mass_operator(m: FermionModel, rep: GammaRep, tol: float = 1e-10) -> MassSpectrum:
    """M_F = -i g_M (x) G_Y(V) and its sorted spectrum."""
    y = m.yukawa_map(m.vacuum)
    if np.abs(y + y.conj().T).max() > tol:
        raise ModelError("Yukawa image is not anti-Hermitian")
    if np.abs(m.chi @ y @ m.chi + y).max() > tol:
        raise ModelError("Yukawa image is not odd with respect to chi")
    mf = -1j * np.kron(rep.chirality, y)
    return MassSpectrum(mf, np.linalg.eigvalsh(mf))


def eigenbundle_split(mass_operator: np.ndarray, tol: float = 1e-8):
    """Orthogonal projectors onto the eigenspaces of M_F^2.

    Returns a list of (eigenvalue of M_F^2, projector) in increasing order;
    eigenvalues closer than ``tol`` (absolute) are merged.
    """
    w, u = np.linalg.eigh(mass_operator @ mass_operator)
    blocks, start = [], 0
    for i in range(1, len(w) + 1):
        if i == len(w) or w[i] - w[start] > tol:
            vecs = u[:, start:i]
            blocks.append((float(w[start:i].mean()), vecs @ vecs.conj().T))
            start = i
    return blocks


def orbit_map(m: FermionModel, z=None) -> np.ndarray:
    """Real matrix whose columns are rho_H(T_a) z."""
    z = m.vacuum if z is None else np.asarray(z, dtype=complex)
    return realify(np.einsum("aij,j->ai", m.higgs_generators, z)).T


def isotropy_algebra(m: FermionModel, tol: float = 1e-8):
    """Basis of {X : rho_H(X) V = 0} as coefficient columns, and its dimension."""
    basis = _null_real(orbit_map(m), tol)
    return basis, basis.shape[1]


def goldstone_count(m: FermionModel, tol: float = 1e-8) -> int:
    return m.dim_g - isotropy_algebra(m, tol)[1]


def yukawa_norm(m: FermionModel) -> float:
    """Operator norm of G_Y on the unit vacuum direction."""
    v = np.linalg.norm(m.vacuum)
    if v == 0:
        return 0.0
    return float(np.linalg.norm(m.yukawa_map(m.vacuum / v), 2))


def ym_mass_matrix(m: FermionModel) -> np.ndarray:
    """2 |G_Y|^2 <V, [t_a, t_b]_+ V> with Hermitian generators t_a = i T_a."""
    t = 1j * m.higgs_generators
    anti = np.einsum("aij,bjk->abik", t, t)
    anti = anti + np.swapaxes(anti, 0, 1)
    expect = np.einsum("i,abij,j->ab", m.vacuum.conj(), anti, m.vacuum)
    return 2 * yukawa_norm(m) ** 2 * expect.real


def matrix_rank(a: np.ndarray, tol: float = 1e-8) -> int:
    if a.size == 0:
        return 0
    return int((np.linalg.svd(a, compute_uv=False) > tol).sum())


def goldstone_split(m: FermionModel, tol: float = 1e-8):
    """Orthonormal real bases of the Goldstone and physical Higgs directions."""
    if np.linalg.norm(m.vacuum) == 0:
        raise ModelError("Goldstone split needs a non-zero vacuum")
    return _range_real(orbit_map(m), tol)


def ym_kernel_complement_image(m: FermionModel, tol: float = 1e-8) -> np.ndarray:
    """rho_H(X) V for X spanning the complement of ker M_YM^2."""
    w, u = np.linalg.eigh(ym_mass_matrix(m))
    scale = max(1.0, np.abs(w).max(initial=0.0))
    return orbit_map(m) @ u[:, w > tol * scale]


def lifted_potential(m: FermionModel, rep: GammaRep, coeffs: np.ndarray) -> np.ndarray:
    """1 (x) rho_F(A) on the full fiber."""
    return np.kron(np.eye(rep.dim), m.rho_f(coeffs))


def compatibility_deficit(m: FermionModel, rep: GammaRep, gauge: np.ndarray, metric=None) -> float:
    """sum g^{mu nu} tr([A_mu, M_F]^dagger [A_nu, M_F]) for A in generator coefficients.

    ``gauge`` has shape (n, dim G).
    """
    g = rep.metric if metric is None else np.asarray(metric)
    mf = fermionic_mass_operator(m, rep).mass_operator
    comms = []
    for coeffs in gauge:
        a = lifted_potential(m, rep, coeffs)
        comms.append(a @ mf - mf @ a)
    ginv = np.linalg.inv(g)
    total = sum(ginv[i, j] * np.vdot(comms[i], comms[j]) for i in range(len(comms)) for j in range(len(comms)))
    return float(np.real(total))


def ym_quadratic_form(m: FermionModel, gauge: np.ndarray, metric=None, n: int | None = None) -> float:
    """M_YM^2(A, A) = sum g^{mu nu} A^a_mu M_ab A^b_nu."""
    n = gauge.shape[0] if n is None else n
    g = np.eye(n) if metric is None else np.asarray(metric)
    return float(np.einsum("mn,ma,ab,nb->", np.linalg.inv(g), gauge, ym_mass_matrix(m), gauge))


def vacuum_potential(m: FermionModel) -> float:
    """<M_F^2> = (1/N_F) sum of squared internal masses."""
    y = m.yukawa_map(m.vacuum)
    masses_sq = np.linalg.eigvalsh(-(y @ y))
    return float(masses_sq.sum() / m.n_f)


def group_element(m: FermionModel, coeffs):
    """(rho_F(g), rho_H(g)) for g = exp(sum c_a T_a)."""
    return sla.expm(m.rho_f(coeffs)), sla.expm(m.rho_h(coeffs))


def is_transitive_on_sphere(m: FermionModel, z, tol: float = 1e-8) -> bool:
    return matrix_rank(orbit_map(m, z), tol) == 2 * m.n_h - 1


def unitary_gauge(m: FermionModel, z, rng=None, tol: float = 1e-10, attempts: int = 8):
    """Coefficients X with exp(rho_H(X)) z/|z| = V/|V|.

    Requires the group to act transitively on the unit sphere through z.
    """
    z = np.asarray(z, dtype=complex)
    if not is_transitive_on_sphere(m, z):
        raise ModelError("group does not act transitively on the orbit sphere")
    zhat = z / np.linalg.norm(z)
    vhat = m.vacuum / np.linalg.norm(m.vacuum)
    rng = np.random.default_rng(0) if rng is None else rng

    def resid(x):
        return realify(sla.expm(m.rho_h(x)) @ zhat - vhat)

    best = None
    for _ in range(attempts):
        sol = least_squares(resid, rng.normal(size=m.dim_g) * np.pi, xtol=1e-15, ftol=1e-15, gtol=1e-15)
        err = float(np.abs(resid(sol.x)).max())
        if best is None or err < best[1]:
            best = (sol.x, err)
        if err <= tol:
            break
    if best[1] > max(tol, 1e-9):
        raise ModelError(f"orbit alignment failed (residual {best[1]:.2e})")
    return best[0]


def _hessian_fd(potential, point, step):
    k = len(point)
    eye = np.eye(k) * step
    hess = np.empty((k, k))
    for i in range(k):
        for j in range(i, k):
            val = (potential(point + eye[i] + eye[j]) - potential(point + eye[i] - eye[j])
                   - potential(point - eye[i] + eye[j]) + potential(point - eye[i] - eye[j])) / (4 * step**2)
            hess[i, j] = hess[j, i] = val
    return hess


def higgs_mass_operator(potential, point: np.ndarray, step: float = 1e-2) -> np.ndarray:
    """Hessian of a real potential in real Higgs coordinates.

    Central differences at steps h and 2h combined by Richardson
    extrapolation, which is exact up to rounding for quartic potentials.
    """
    point = np.asarray(point, dtype=float)
    return (4 * _hessian_fd(potential, point, step) - _hessian_fd(potential, point, 2 * step)) / 3


@dataclass
class CurvatureDecomposition:
    """Lattice curvature of the Dirac connection against its analytic pieces.

    ``terms`` maps each family to its max-norm size; ``residual`` is the max
    norm of F_D minus their sum; ``mass_vacuum_residual`` compares the mass
    term with the Theta ^ Theta M_F(V)^2 form it takes when phi_H = 0.
    """

    residual: float
    terms: dict
    mass_vacuum_residual: float
    curvature: np.ndarray = field(repr=False)


def _wedge_commutator(theta: np.ndarray) -> np.ndarray:
    prod = theta[:, None] @ theta[None]
    return prod - np.swapaxes(prod, 0, 1)


def curvature_decomposition_check(m: FermionModel, rep: GammaRep, grid: Grid,
                                  gauge: np.ndarray | None = None,
                                  higgs: np.ndarray | None = None) -> CurvatureDecomposition:
    """Split the curvature of D = d-slash_A + g_M (x) Y(V + phi_H) on a flat torus.

    gauge: generator coefficients, shape (n, dim G) or per site (sites, n, dim G).
    higgs: Higgs fluctuation, shape (sites, N_H).  The chart is flat, so
    the Riemannian term is absent.
    """
    if grid.n != rep.n:
        raise ModelError("grid dimension must match the Clifford representation")
    sites, n, nf = grid.sites, rep.n, m.n_f
    d = rep.dim * nf
    a_coef = np.zeros((sites, n, m.dim_g)) if gauge is None else np.asarray(gauge, dtype=float)
    a_coef = np.broadcast_to(a_coef, (sites, n, m.dim_g))
    phi_h = np.zeros((sites, m.n_h), dtype=complex) if higgs is None else np.asarray(higgs, dtype=complex)
    if phi_h.shape != (sites, m.n_h):
        raise ModelError(f"Higgs field must have shape {(sites, m.n_h)}")

    a_int = np.einsum("sma,aij->smij", a_coef, m.generators)
    a_full = np.einsum("pq,smij->smpiqj", np.eye(rep.dim), a_int).reshape(sites, n, d, d)
    y = np.einsum("sr,rij->sij", realify(m.vacuum[None, :] + phi_h), m.yukawa)
    phi = np.einsum("pq,sij->spiqj", rep.chirality, y).reshape(sites, d, d)
    theta = SolderingForm(rep).lifted(nf)
    omega = a_full + theta[None] @ phi[:, None]

    gam = fiber_gammas(rep, nf)
    ld = lattice_dirac(grid, gam, omega, rep.metric, rep.convention_sign)
    f_d = connection_curvature(grid, dirac_connection(ld, gam, theta))

    f_ym = connection_curvature(grid, a_full)
    comm = a_full @ phi[:, None] - phi[:, None] @ a_full
    cross = theta[None, None] @ comm[:, :, None]
    f_g = cross - np.swapaxes(cross, 1, 2)
    dphi = np.stack([grid.field_difference(phi, mu) for mu in range(n)], axis=1)
    grad = theta[None, None] @ dphi[:, :, None]
    f_h = grad - np.swapaxes(grad, 1, 2)
    mf_sq = -(phi @ phi)
    tt = _wedge_commutator(theta)
    f_mass = tt[None] @ mf_sq[:, None, None]

    terms = {"yang_mills": f_ym, "goldstone": f_g, "higgs": f_h, "mass": f_mass}
    total = sum(terms.values())
    phi_v = np.kron(rep.chirality, m.yukawa_map(m.vacuum))
    mass_v = tt @ -(phi_v @ phi_v)
    return CurvatureDecomposition(
        residual=float(np.abs(f_d - total).max()),
        terms={k: float(np.abs(v).max()) for k, v in terms.items()},
        mass_vacuum_residual=float(np.abs(f_mass - mass_v[None]).max()),
        curvature=f_d,
    )


# ---------------------------------------------------------------- fixtures

def _su2():
    pauli = np.array([[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]], dtype=complex)
    return -0.5j * pauli


def doublet_yukawa(n_h_doublet: np.ndarray | None, left_dim: int, right_dim: int, coupling: float,
                   tensor_right: bool = False) -> np.ndarray:
    """Real-coordinate Yukawa blocks Y(z) = y [[0, B(z)], [-B(z)^dagger, 0]].

    Without ``tensor_right``, B(z) = z as a (left_dim x 1) column; with it,
    B(z) = z (x) 1_right so the left space is Higgs (x) right.
    """
    n_h = left_dim if not tensor_right else left_dim // right_dim
    n_f = left_dim + right_dim
    blocks = []
    for r in np.eye(2 * n_h):
        z = complexify(r)
        b = np.kron(z[:, None], np.eye(right_dim)) if tensor_right else z[:, None]
        y = np.zeros((n_f, n_f), dtype=complex)
        y[:left_dim, left_dim:] = coupling * b
        y[left_dim:, :left_dim] = -coupling * b.conj().T
        blocks.append(y)
    return np.array(blocks)


def electroweak_model(coupling: float = 1.0, vev: float = 1.0) -> FermionModel:
    """Lepton sector: left doublet (Y = -1), right electron (Y = -2), Higgs (Y = +1).

    Internal ordering (nu_L, e_L, e_R); chi = -1 on the left block.
    """
    su2 = _su2()
    gens_f = np.zeros((4, 3, 3), dtype=complex)
    gens_h = np.zeros((4, 2, 2), dtype=complex)
    gens_f[:3, :2, :2] = su2
    gens_h[:3] = su2
    gens_f[3] = -0.5j * np.diag([-1.0, -1.0, -2.0])
    gens_h[3] = -0.5j * np.eye(2)
    chi = np.diag([-1.0, -1.0, 1.0])
    yuk = doublet_yukawa(None, 2, 1, coupling)
    return FermionModel(gens_f, gens_h, chi, yuk, np.array([0.0, vev]), name="electroweak")


def abelian_model(charge: float = 1.0, coupling: float = 1.0, vev: float = 1.0) -> FermionModel:
    """U(1) with one charged scalar; left fermion charge q, right fermion neutral."""
    gens_f = np.array([-1j * charge * np.diag([1.0, 0.0])])
    gens_h = np.array([[[-1j * charge]]])
    chi = np.diag([-1.0, 1.0])
    yuk = doublet_yukawa(None, 1, 1, coupling)
    return FermionModel(gens_f, gens_h, chi, yuk, np.array([vev]), name="abelian")


def su2_doublet_model(coupling: float = 1.0, vev=(0.0, 1.0)) -> FermionModel:
    su2 = _su2()
    gens_f = np.zeros((3, 3, 3), dtype=complex)
    gens_f[:, :2, :2] = su2
    chi = np.diag([-1.0, -1.0, 1.0])
    return FermionModel(gens_f, su2, chi, doublet_yukawa(None, 2, 1, coupling), np.array(vev), name="su2")


def random_model(rng: np.random.Generator, max_nf: int = 6) -> FermionModel:
    """Random compact-group model with a Yukawa map equivariant by construction.

    The group is SU(2) (optional) times U(1)^r.  Left fermions carry
    Higgs (x) right, so B(z) = z (x) 1 intertwines.  Random unitary basis
    changes on the Higgs, left and right spaces hide the tensor structure.
    """
    use_su2 = bool(rng.integers(0, 2))
    n_u1 = int(rng.integers(1, 3))
    n_h = 2 if use_su2 else int(rng.integers(1, 3))
    n_r = 1 if n_h * 2 + 2 > max_nf else int(rng.integers(1, 3))
    n_l = n_h * n_r
    dim_g = 3 * use_su2 + n_u1
    gens_h = np.zeros((dim_g, n_h, n_h), dtype=complex)
    gens_r = np.zeros((dim_g, n_r, n_r), dtype=complex)
    if use_su2:
        gens_h[:3] = _su2()
    for a in range(3 * use_su2, dim_g):
        gens_h[a] = -1j * np.diag(rng.integers(-2, 3, size=n_h).astype(float))
        gens_r[a] = -1j * np.diag(rng.integers(-2, 3, size=n_r).astype(float))
    gens_l = np.einsum("aij,kl->aikjl", gens_h, np.eye(n_r)).reshape(dim_g, n_l, n_l)
    gens_l = gens_l + np.einsum("ij,akl->aikjl", np.eye(n_h), gens_r).reshape(dim_g, n_l, n_l)

    def haar(k):
        q, r = np.linalg.qr(rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k)))
        return q * (np.diag(r) / np.abs(np.diag(r)))

    uh, ul, ur = haar(n_h), haar(n_l), haar(n_r)
    gens_h = uh @ gens_h @ uh.conj().T
    gens_l = ul @ gens_l @ ul.conj().T
    gens_r = ur @ gens_r @ ur.conj().T
    n_f = n_l + n_r
    gens_f = np.zeros((dim_g, n_f, n_f), dtype=complex)
    gens_f[:, :n_l, :n_l] = gens_l
    gens_f[:, n_l:, n_l:] = gens_r
    coupling = float(rng.uniform(0.5, 2.0))
    blocks = []
    for r in np.eye(2 * n_h):
        z = uh.conj().T @ complexify(r)
        b = ul @ np.kron(z[:, None], np.eye(n_r)) @ ur.conj().T
        y = np.zeros((n_f, n_f), dtype=complex)
        y[:n_l, n_l:] = coupling * b
        y[n_l:, :n_l] = -coupling * b.conj().T
        blocks.append(y)
    chi = np.diag([-1.0] * n_l + [1.0] * n_r)
    vacuum = rng.normal(size=n_h) + 1j * rng.normal(size=n_h)
    return FermionModel(gens_f, gens_h, chi, np.array(blocks), vacuum, name="random")


# ---------------------------------------------------------- serialization

def _fmt(values) -> str:
    arr = np.asarray(values, dtype=complex).ravel()
    return " ".join(f"{float(x.real)!r} {float(x.imag)!r}" for x in arr)


def _parse(text: str, shape) -> np.ndarray:
    nums = np.array([float(t) for t in text.split()])
    return (nums[0::2] + 1j * nums[1::2]).reshape(shape)


def dumps_model(m: FermionModel) -> str:
    cp = configparser.ConfigParser()
    cp["meta"] = {"name": m.name, "dim_g": str(m.dim_g), "n_f": str(m.n_f), "n_h": str(m.n_h)}
    cp["generators"] = {str(a): _fmt(t) for a, t in enumerate(m.generators)}
    cp["higgs_generators"] = {str(a): _fmt(t) for a, t in enumerate(m.higgs_generators)}
    cp["yukawa"] = {str(r): _fmt(y) for r, y in enumerate(m.yukawa)}
    cp["grading"] = {"chi": _fmt(m.chi)}
    cp["vacuum"] = {"v": _fmt(m.vacuum)}
    lines = [FORMAT_HEADER]
    for section in cp.sections():
        lines.append(f"[{section}]")
        lines.extend(f"{k} = {v}" for k, v in cp[section].items())
    return "\n".join(lines) + "\n"


def loads_model(text: str) -> FermionModel:
    head, _, body = text.partition("\n")
    if head.strip() != FORMAT_HEADER:
        raise ModelError(f"unsupported model format header {head.strip()!r}")
    cp = configparser.ConfigParser()
    try:
        cp.read_string(body)
        meta = cp["meta"]
        g, nf, nh = int(meta["dim_g"]), int(meta["n_f"]), int(meta["n_h"])
        gens = np.array([_parse(cp["generators"][str(a)], (nf, nf)) for a in range(g)]).reshape(g, nf, nf)
        hgens = np.array([_parse(cp["higgs_generators"][str(a)], (nh, nh)) for a in range(g)]).reshape(g, nh, nh)
        yuk = np.array([_parse(cp["yukawa"][str(r)], (nf, nf)) for r in range(2 * nh)])
        chi = _parse(cp["grading"]["chi"], (nf, nf))
        vac = _parse(cp["vacuum"]["v"], (nh,))
    except (KeyError, ValueError, configparser.Error) as exc:
        raise ModelError(f"malformed model file: {exc}") from exc
    return FermionModel(gens, hgens, chi, yuk, vac, name=meta.get("name", ""))
