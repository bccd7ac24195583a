"""Doubled fibers, fermionic pairings, charge conjugation and Pauli-type operators.

The doubled fiber is C^2 (x) E with E = spinors (x) internal space, so a
doubled vector is (psi_1, psi_2) stacked.  On a lattice the doubled
operator is ordered site-major like every other lattice operator; the
helpers ``to_doubled`` and ``from_doubled`` convert between the two
orderings for per-site vectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.optimize import minimize

from .clifford import GammaRep
from .dirac_local import SolderingForm, fiber_gammas, total_grading
from .lattice import (Grid, blw_split, site_remainder, connection_curvature, dirac_connection,
                      dirac_potential_numeric, lattice_dirac)
from .symmetry import (FermionModel, ModelError, complexify, higgs_mass_operator,
                       is_transitive_on_sphere, realify, unitary_gauge)

# I = [[0, -1], [1, 0]] couples the two copies through the curvature
DOUBLING_UNIT = np.array([[0.0, -1.0], [1.0, 0.0]])
EH_COEFFICIENT = -0.25


class PairingError(ValueError):
    pass


class ParityError(ValueError):
    pass


class DecompositionFailure(RuntimeError):
    pass


@dataclass
class DoubledFiber:
    """Chirality and internal-grading projectors on spinors (x) internal space."""

    rep: GammaRep
    chi: np.ndarray
    proj: dict = field(init=False, repr=False)

    def __post_init__(self):
        nf = self.chi.shape[0]
        eye_c, eye_i = np.eye(self.rep.dim), np.eye(nf)
        gm = np.kron(self.rep.chirality, eye_i)
        ch = np.kron(eye_c, np.asarray(self.chi, dtype=complex))
        one = np.eye(self.dim)
        p = {"pi_R": (one + gm) / 2, "pi_L": (one - gm) / 2,
             "rho_R": (one + ch) / 2, "rho_L": (one - ch) / 2}
        for a in "LR":
            for b in "LR":
                p[f"pi_{a}{b}"] = p[f"pi_{a}"] @ p[f"rho_{b}"]
        p["pi_plus"] = p["pi_RR"] + p["pi_LL"]
        p["pi_minus"] = p["pi_RL"] + p["pi_LR"]
        self.proj = p

    @property
    def dim(self) -> int:
        return self.rep.dim * self.chi.shape[0]

    def __getitem__(self, name: str) -> np.ndarray:
        return self.proj[name]

    def algebra_residual(self) -> float:
        """Worst violation of idempotence, mutual orthogonality and completeness."""
        names = ["pi_LL", "pi_RR", "pi_RL", "pi_LR"]
        worst = 0.0
        for a in names + ["pi_R", "pi_L", "rho_R", "rho_L", "pi_plus"]:
            p = self.proj[a]
            worst = max(worst, np.abs(p @ p - p).max(), np.abs(p - p.conj().T).max())
        for i, a in enumerate(names):
            for b in names[i + 1:]:
                worst = max(worst, np.abs(self.proj[a] @ self.proj[b]).max())
        worst = max(worst, np.abs(sum(self.proj[a] for a in names) - np.eye(self.dim)).max())
        return float(worst)


def pairing_matrix(rep: GammaRep, n_internal: int, kind: str) -> np.ndarray:
    """Matrix B with <z, z'> = z^dagger B z'.

    Euclidean pairs equal chiralities; Lorentzian uses the Dirac conjugate,
    which pairs opposite chiralities.
    """
    if kind == "euclidean":
        return np.eye(rep.dim * n_internal, dtype=complex)
    if kind == "lorentzian":
        return np.kron(rep.dirac_conjugation, np.eye(n_internal))
    raise PairingError(f"unknown signature kind {kind!r}")


def pairing(z1, z2, rep: GammaRep, n_internal: int, kind: str) -> complex:
    b = pairing_matrix(rep, n_internal, kind)
    z1, z2 = np.asarray(z1), np.asarray(z2)
    sites = z1.size // b.shape[0]
    return complex(np.vdot(z1, sp.kron(sp.identity(sites), b) @ z2))


def lattice_grading(rep: GammaRep, chi: np.ndarray, sites: int) -> sp.csr_matrix:
    return sp.kron(sp.identity(sites), total_grading(rep, chi), format="csr")


def odd_residual(op, grading) -> float:
    res = grading @ op @ grading + op
    return float(np.abs(res.data if sp.issparse(res) else res).max(initial=0.0))


def fermionic_lagrangian(D, psi, rep: GammaRep, chi: np.ndarray, kind: str,
                         volume: float = 1.0, tol: float = 1e-10) -> complex:
    """<psi, D psi> times the cell volume, for D odd in the total grading."""
    sites = np.asarray(psi).size // (rep.dim * chi.shape[0])
    if odd_residual(D, lattice_grading(rep, chi, sites)) > tol:
        raise ParityError("operator is not odd with respect to the total grading")
    return volume * pairing(psi, D @ psi, rep, chi.shape[0], kind)


def chiral_expansion(D, psi, rep: GammaRep, chi: np.ndarray, kind: str) -> dict:
    """Four terms <rho_a psi, D rho_b psi> for internal chiralities a, b in {L, R}.

    For simple-type operators LL and RR carry the kinetic part and LR, RL
    the Yukawa coupling; the four sum to the full Lagrangian.
    """
    fib = DoubledFiber(rep, chi)
    sites = np.asarray(psi).size // fib.dim
    lift = {a: sp.kron(sp.identity(sites), fib[f"rho_{a}"], format="csr") for a in "LR"}
    return {a + b: pairing(lift[a] @ psi, D @ (lift[b] @ psi), rep, chi.shape[0], kind)
            for a in "LR" for b in "LR"}


def sector_expansion(D, psi, rep: GammaRep, chi: np.ndarray, kind: str, sectors: dict) -> dict:
    """<P_a psi, D P_b psi> for internal projectors P given by index lists."""
    nf = chi.shape[0]
    sites = np.asarray(psi).size // (rep.dim * nf)
    lifts = {}
    for name, idx in sectors.items():
        p = np.zeros((nf, nf))
        p[idx, idx] = 1.0
        lifts[name] = sp.kron(sp.identity(sites), np.kron(np.eye(rep.dim), p), format="csr")
    return {(a, b): pairing(lifts[a] @ psi, D @ (lifts[b] @ psi), rep, nf, kind)
            for a in sectors for b in sectors}


@dataclass
class RealStructure:
    """Antilinear map z -> J conj(z) on the fiber."""

    J: np.ndarray

    def __post_init__(self):
        self.J = np.asarray(self.J, dtype=complex)

    @property
    def epsilon(self) -> complex:
        """J conj(J) as a scalar; +1 or -1 for the standard choices."""
        return complex(np.trace(self.J @ self.J.conj()) / len(self.J))

    def apply(self, z):
        z = np.asarray(z)
        sites = z.size // len(self.J)
        return (sp.kron(sp.identity(sites), self.J) @ z.conj().ravel()).reshape(z.shape)

    def conjugate_operator(self, D):
        """J conj(D) J^-1, applied site by site for lattice operators."""
        sites = D.shape[0] // len(self.J)
        j = sp.kron(sp.identity(sites), self.J, format="csr")
        jinv = sp.kron(sp.identity(sites), np.linalg.inv(self.J), format="csr")
        out = j @ (D.conj() if sp.issparse(D) else np.conj(D)) @ jinv
        return out.tocsr() if sp.issparse(out) else np.asarray(out)

    def doubled(self) -> np.ndarray:
        """Matrix of the doubled map (a, b) -> (J conj b, conj(J)^-1 conj a); squares to one."""
        k = len(self.J)
        m = np.zeros((2 * k, 2 * k), dtype=complex)
        m[:k, k:] = self.J
        m[k:, :k] = np.linalg.inv(self.J.conj())
        return m

    def doubled_square_residual(self) -> float:
        m = self.doubled()
        return float(np.abs(m @ m.conj() - np.eye(len(m))).max())


def charge_conjugation(rep: GammaRep, n_internal: int = 1) -> RealStructure:
    """Unitary J with J conj(g^a) J^-1 = eta g^a, eta = +1 tried first.

    The internal factor is the identity, so internal representations are
    mapped to their complex conjugates.
    """
    d = rep.dim
    eye = np.eye(d)
    for eta in (1, -1):
        # J conj(g) - eta g J = 0, linear in the entries of J (row-major)
        rows = [np.kron(eye, g.conj().T) - eta * np.kron(g, eye) for g in rep.gammas]
        _, s, vh = np.linalg.svd(np.vstack(rows))
        if s[-1] < 1e-10 * max(1.0, s[0]):
            j = vh[-1].conj().reshape(d, d)
            j = j / np.sqrt(np.abs(np.trace(j @ j.conj().T)) / d)
            return RealStructure(np.kron(j, np.eye(n_internal)))
    raise ModelError("no charge-conjugation matrix found")


def charge_conjugate(D, rs: RealStructure):
    return rs.conjugate_operator(D)


def gamma_of_two_form(gammas: np.ndarray, F: np.ndarray) -> np.ndarray:
    """(1/2) g^mu g^nu F_{mu nu}; F has shape (..., n, n, N, N)."""
    gg = np.einsum("mij,njk->mnik", gammas, gammas)
    n, d = gg.shape[0], gg.shape[-1]
    flat = F.reshape(F.shape[:-4] + (n * n,) + F.shape[-2:])
    return 0.5 * (gg.reshape(n * n, d, d) @ flat).sum(axis=-3)


def to_doubled(sites: int, fiber: int, blocks) -> sp.csr_matrix:
    """Site-major doubled operator from a 2x2 block of site-major operators."""
    perm = np.arange(2 * sites * fiber).reshape(2, sites, fiber).transpose(1, 0, 2).ravel()
    big = sp.bmat(blocks, format="csr")
    p = sp.csr_matrix((np.ones(len(perm)), (np.arange(len(perm)), perm)))
    return (p @ big @ p.T).tocsr()


def doubled_grading(rep: GammaRep, chi: np.ndarray, sites: int) -> sp.csr_matrix:
    """Gamma_2F = sigma_3 (x) Gamma on each site."""
    return sp.kron(sp.identity(sites), np.kron(np.diag([1.0, -1.0]), total_grading(rep, chi)), format="csr")


def build_pauli_dirac(D, gamma_f, sites: int = 1):
    """D_P = 1_2 (x) D + I (x) g(F) in the diagonal-grading picture.

    ``gamma_f`` is g(F_D) as a site-major operator or a dense fiber matrix.
    The result is site-major on C^2 (x) fiber.
    """
    D = sp.csr_matrix(D)
    gf = sp.csr_matrix(gamma_f)
    if D.shape != gf.shape:
        raise ValueError(f"shape mismatch: D {D.shape}, g(F) {gf.shape}")
    fiber = D.shape[0] // sites
    return to_doubled(sites, fiber, [[D, -gf], [gf, D]])


def diagonal_section(psi, other=None, fiber: int | None = None) -> np.ndarray:
    """Site-major (psi, other)/sqrt 2; ``other`` defaults to psi."""
    psi = np.asarray(psi, dtype=complex)
    other = psi if other is None else np.asarray(other, dtype=complex)
    fiber = psi.size if fiber is None else fiber
    a = psi.reshape(-1, 1, fiber)
    b = other.reshape(-1, 1, fiber)
    return np.concatenate([a, b], axis=1).ravel() / np.sqrt(2)


def pauli_cancellation_check(D, D_P, psi, pairing_mat: np.ndarray, other=None) -> float:
    """|<Psi, D_P Psi> - <psi, D psi>| for Psi = (psi, other)/sqrt 2."""
    f = len(pairing_mat)
    sites = np.asarray(psi).size // f
    b1 = sp.kron(sp.identity(sites), pairing_mat, format="csr")
    b2 = sp.kron(sp.identity(sites), np.kron(np.eye(2), pairing_mat), format="csr")
    big = diagonal_section(psi, other, f)
    lhs = np.vdot(big, b2 @ (D_P @ big))
    rhs = np.vdot(psi, b1 @ (D @ psi))
    return float(abs(lhs - rhs))


# --------------------------------------------------------- Lagrangian split

@dataclass
class PauliLattice:
    """Pauli-type lattice operator and the objects it was built from."""

    D: sp.csr_matrix
    D_P: sp.csr_matrix
    gamma_f: np.ndarray
    potential: np.ndarray
    grid: Grid


def _model_fields(m: FermionModel, rep: GammaRep, a_coef: np.ndarray, higgs: np.ndarray):
    sites, n = a_coef.shape[:2]
    d = rep.dim * m.n_f
    a_int = np.einsum("sma,aij->smij", a_coef, m.generators)
    a_full = np.einsum("pq,smij->smpiqj", np.eye(rep.dim), a_int).reshape(sites, n, d, d)
    y = np.einsum("sr,rij->sij", realify(higgs), m.yukawa)
    phi = np.einsum("pq,sij->spiqj", rep.chirality, y).reshape(sites, d, d)
    return a_full, phi


def pauli_lattice(m: FermionModel, rep: GammaRep, grid: Grid, gauge: np.ndarray,
                  higgs: np.ndarray, site: int | None = None) -> PauliLattice:
    """Pauli-type operator of D = d-slash_A + g_M (x) Y(phi) on a flat torus.

    gauge: (sites, n, dim G) generator coefficients; higgs: (sites, N_H)
    full Higgs field.  F_D is the curvature of the Dirac connection
    w^B + T (g(w) - g(w^B)), read off on the lattice.  The doubled
    operator is assembled as a lattice Dirac-type operator with gammas
    1_2 (x) g and connection 1_2 (x) w + T (I (x) g(F_D)), so its own
    Bochner split is available.  With ``site`` only that site's potential
    is computed.
    """
    a_full, phi = _model_fields(m, rep, gauge, higgs)
    theta = SolderingForm(rep).lifted(m.n_f)
    omega = a_full + theta[None] @ phi[:, None]
    gam = fiber_gammas(rep, m.n_f)
    s = rep.convention_sign
    ld = lattice_dirac(grid, gam, omega, rep.metric, s)
    f_d = connection_curvature(grid, dirac_connection(ld, gam, theta))
    gf = gamma_of_two_form(gam, f_d)

    gam2 = np.array([np.kron(np.eye(2), g) for g in gam])
    pauli = np.einsum("ab,sij->saibj", DOUBLING_UNIT, gf).reshape(grid.sites, 2 * len(gam[0]), -1)
    theta2 = np.array([np.kron(np.eye(2), t) for t in theta])
    omega2 = np.einsum("ab,smij->smaibj", np.eye(2), omega).reshape(grid.sites, rep.n, 2 * len(gam[0]), -1)
    omega2 = omega2 + theta2[None] @ pauli[:, None]
    ld2 = lattice_dirac(grid, gam2, omega2, rep.metric, s)
    if site is None:
        pot = dirac_potential_numeric(blw_split(ld2).blocks).real
    else:
        pot = np.array([np.trace(site_remainder(ld2, site)).real])
    return PauliLattice(ld.D, ld2.D, gf, pot, grid)


def _fit(xs, ys, degree: int):
    coeffs = np.polynomial.polynomial.polyfit(xs, ys, degree)
    resid = float(np.abs(np.polynomial.polynomial.polyval(xs, coeffs) - ys).max())
    return coeffs, resid


def _linear_gauge(grid: Grid, generator: int, dim_g: int, amplitude: float) -> np.ndarray:
    """A = (s/2)(-y, x) T relative to the grid center: constant F_12 = s T."""
    x = grid.coordinates() - grid.coordinates()[grid.center()]
    a = np.zeros((grid.sites, grid.n, dim_g))
    a[:, 0, generator] = -0.5 * amplitude * x[:, 1]
    a[:, 1, generator] = 0.5 * amplitude * x[:, 0]
    return a


def constant_pauli_potential(m: FermionModel, rep: GammaRep, z) -> float:
    """V_D(D_P) for constant Higgs value z, A = 0, from the fiber-level split."""
    from .dirac_local import constant_coefficient_remainder

    d = rep.dim * m.n_f
    y = m.yukawa_map(z)
    phi = np.kron(rep.chirality, y)
    theta = SolderingForm(rep).lifted(m.n_f)
    gam = fiber_gammas(rep, m.n_f)
    tt = np.einsum("mij,njk->mnik", theta, theta)
    f_d = (tt - np.swapaxes(tt, 0, 1)) @ (-(phi @ phi))
    gf = gamma_of_two_form(gam, f_d)
    gam2 = np.array([np.kron(np.eye(2), g) for g in gam])
    theta2 = np.array([np.kron(np.eye(2), t) for t in theta])
    omega = np.einsum("mij,jk->mik", theta, phi)
    omega2 = np.array([np.kron(np.eye(2), w) for w in omega])
    omega2 = omega2 + np.einsum("mij,jk->mik", theta2, np.kron(DOUBLING_UNIT, gf))
    e = constant_coefficient_remainder(gam2, omega2, rep.metric, rep.convention_sign)
    assert e.shape == (2 * d, 2 * d)
    return float(np.trace(e).real)


@dataclass
class LagrangianSplit:
    """Fitted polynomial coefficients of V_D(D_P) along each field family."""

    einstein_hilbert: float
    yang_mills: np.ndarray
    higgs_potential: np.ndarray
    higgs_kinetic: np.ndarray
    residuals: dict
    minimum_radius: float
    minimum_point: np.ndarray
    orbit_residual: float
    higgs_mass_operator: np.ndarray
    lattice_constant_check: float


def lagrangian_split(m: FermionModel, rep: GammaRep, sites: int = 8, r_M: float = 0.0,
                     generator: int = 0, fit_tol: float = 1e-8, rng=None) -> LagrangianSplit:
    """Evaluate V_D(D_P) on the gauge, constant-Higgs and linear-Higgs families.

    The Einstein-Hilbert part enters through ``r_M`` with the pinned
    coefficient -s/4 per unit rank of the doubled fiber.  Signs of the
    fitted coefficients are reported, not assumed.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    n = rep.n
    # field families vary along the first two directions only
    h = 2 * np.pi / sites
    grid = Grid((sites, sites) + (4,) * (n - 2), (h,) * n)
    c = grid.center()
    fiber2 = 2 * rep.dim * m.n_f
    eh = EH_COEFFICIENT * rep.convention_sign * fiber2 * r_M
    zero_h = np.zeros((grid.sites, m.n_h), dtype=complex)

    amps = np.linspace(-1.0, 1.0, 7)
    ym = [pauli_lattice(m, rep, grid, _linear_gauge(grid, generator, m.dim_g, s), zero_h, c).potential[0]
          for s in amps]
    ym_coef, ym_res = _fit(amps, np.array(ym), 4)

    vhat = m.vacuum / np.linalg.norm(m.vacuum)
    ts = np.linspace(-1.5, 1.5, 9)
    hp = np.array([constant_pauli_potential(m, rep, t * vhat) for t in ts])
    hp_coef, hp_res = _fit(ts, hp, 6)
    zero_a = np.zeros((grid.sites, n, m.dim_g))
    lat = pauli_lattice(m, rep, grid, zero_a, np.broadcast_to(0.8 * vhat, (grid.sites, m.n_h))).potential
    lattice_check = float(np.abs(lat - constant_pauli_potential(m, rep, 0.8 * vhat)).max())

    x = grid.coordinates() - grid.coordinates()[c]
    kin = []
    for k in amps:
        field_h = np.outer(k * x[:, 0], vhat)
        kin.append(pauli_lattice(m, rep, grid, zero_a, field_h, c).potential[0])
    kin_coef, kin_res = _fit(amps, np.array(kin), 4)

    residuals = {"yang_mills": ym_res, "higgs_potential": hp_res, "higgs_kinetic": kin_res,
                 "yang_mills_odd_and_quartic": float(max(abs(ym_coef[1]), abs(ym_coef[3]), abs(ym_coef[4]))),
                 "higgs_odd_and_sextic": float(max(abs(hp_coef[1]), abs(hp_coef[3]), abs(hp_coef[5]), abs(hp_coef[6]))),
                 "kinetic_odd_and_quartic": float(max(abs(kin_coef[1]), abs(kin_coef[3]), abs(kin_coef[4])))}
    scale = max(1.0, float(np.abs(hp).max()))
    bad = {k: v for k, v in residuals.items() if v > fit_tol * scale}
    if bad:
        raise DecompositionFailure(f"polynomial fits failed: {bad}")

    a2, a4 = hp_coef[2], hp_coef[4]
    if not (a4 > 0 and a2 < 0):
        raise DecompositionFailure("constant-Higgs family has no sphere of nontrivial minima")
    radius = float(np.sqrt(-a2 / (2 * a4)))

    def pot(r):
        return constant_pauli_potential(m, rep, complexify(r))

    start = realify(rng.normal(size=m.n_h) + 1j * rng.normal(size=m.n_h))
    start = start / np.linalg.norm(start) * radius * 0.7
    res = minimize(pot, start, method="BFGS", options={"gtol": 1e-12})
    zmin = complexify(res.x)
    orbit = orbit_distance(m, zmin)
    hess = higgs_mass_operator(pot, realify(radius * vhat))
    return LagrangianSplit(eh, ym_coef, hp_coef, kin_coef, residuals, radius, zmin, orbit, hess, lattice_check)


def orbit_distance(m: FermionModel, z) -> float:
    """Distance of z/|z| from the group orbit of V/|V| on the unit sphere."""
    z = np.asarray(z, dtype=complex)
    if not is_transitive_on_sphere(m, z):
        raise ModelError("orbit distance needs a transitive action")
    from .symmetry import group_element

    x = unitary_gauge(m, z, tol=1e-12)
    rotated = group_element(m, x)[1] @ (z / np.linalg.norm(z))
    return float(np.linalg.norm(rotated - m.vacuum / np.linalg.norm(m.vacuum)))


def _sig(x: float, digits: int = 9, floor: float = 1e-12) -> float:
    """Round to ``digits`` significant digits; magnitudes below ``floor`` become 0."""
    return float(f"{x:.{digits}g}") if abs(x) >= floor else 0.0


def sm_lepton_demo(coupling: float = 1.0, vev: float = 1.0, signature=(3, 1), convention_sign: int = 1,
                   vacuum=None, run_split: bool = True, seed: int = 0) -> dict:
    """End-to-end electroweak lepton run: masses, breaking pattern, Pauli and split checks.

    ``vacuum`` replaces the default (0, vev), e.g. by a gauge-rotated copy.
    Values are rounded to nine significant digits so that gauge-equivalent
    inputs give identical reports.
    """
    from .clifford import build_gamma_rep
    from .symmetry import (electroweak_model, fermionic_mass_operator, goldstone_count,
                           goldstone_split, isotropy_algebra, matrix_rank, ym_mass_matrix)

    rep = build_gamma_rep(signature, convention_sign)
    m = electroweak_model(coupling, vev)
    if vacuum is not None:
        m = m.with_vacuum(vacuum)
    rng = np.random.default_rng(seed)
    spec = fermionic_mass_operator(m, rep)
    y = m.yukawa_map(m.vacuum)
    internal = np.sort(np.linalg.svd(y, compute_uv=False))
    kernel = int((np.abs(spec.eigenvalues) < 1e-8).sum())
    ym = ym_mass_matrix(m)
    gold, phys = goldstone_split(m)

    n = rep.n
    grid = Grid((4,) * n, (2 * np.pi / 4,) * n)
    x = grid.coordinates()
    gauge = 0.2 * np.sin(x[:, :1, None] + rng.normal(size=(1, n, m.dim_g)))
    higgs = np.broadcast_to(m.vacuum, (grid.sites, m.n_h)) + 0.1 * np.cos(x[:, :1]) * rng.normal(size=(1, m.n_h))
    pl = pauli_lattice(m, rep, grid, gauge, higgs, site=grid.center())
    kind = "lorentzian" if rep.signature.is_lorentzian else "euclidean"
    pm = pairing_matrix(rep, m.n_f, kind)
    psi = rng.normal(size=pl.D.shape[0]) + 1j * rng.normal(size=pl.D.shape[0])
    gf = site_gamma_f(pl.gamma_f)
    d_p = build_pauli_dirac(pl.D, gf, grid.sites)
    cancel = pauli_cancellation_check(pl.D, d_p, psi, pm)

    report = {
        "signature": list(signature),
        "convention_sign": convention_sign,
        "internal_masses": [_sig(v) for v in np.sort(internal)],
        "mass_operator_kernel": kernel,
        "massless_internal_states": int((internal < 1e-8).sum()),
        "isotropy_dim": isotropy_algebra(m)[1],
        "goldstone_count": goldstone_count(m),
        "physical_higgs_dim": phys.shape[1],
        "ym_mass_rank": matrix_rank(ym),
        "ym_mass_eigenvalues": [_sig(v) for v in np.linalg.eigvalsh(ym)],
        "pauli_cancellation_pass": bool(cancel <= 1e-10),
    }
    if run_split:
        split = lagrangian_split(m, rep, rng=rng)
        report["split"] = {
            "einstein_hilbert_per_unit_curvature": EH_COEFFICIENT * rep.convention_sign * 2 * rep.dim * m.n_f,
            "yang_mills_quadratic": _sig(split.yang_mills[2]),
            "higgs_quadratic": _sig(split.higgs_potential[2]),
            "higgs_quartic": _sig(split.higgs_potential[4]),
            "higgs_kinetic_quadratic": _sig(split.higgs_kinetic[2]),
            "minimum_radius": _sig(split.minimum_radius),
            "higgs_mass_kernel": int((np.abs(np.linalg.eigvalsh(split.higgs_mass_operator)) < 1e-6).sum()),
        }
    report["pass"] = bool(
        report["massless_internal_states"] == 1 and report["isotropy_dim"] == 1
        and report["goldstone_count"] == 3 and report["ym_mass_rank"] == 3 and cancel <= 1e-10
        and (not run_split or report["split"]["higgs_mass_kernel"] == 3)
    )
    return report


def site_gamma_f(gamma_f: np.ndarray) -> sp.csr_matrix:
    """Site-major block-diagonal operator from per-site g(F) blocks."""
    from .lattice import site_blocks

    return site_blocks(np.asarray(gamma_f))
