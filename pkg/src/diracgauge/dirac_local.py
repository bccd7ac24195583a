"""Chart-level data of Dirac-type operators D = g^mu (d_mu + w_mu).

The full fiber is spinors tensor internal space, ordered as
``np.kron(clifford_matrix, internal_matrix)``.  One-forms are arrays of
shape (n, D, D) holding the coefficient matrices w_mu at a point.

Grading convention: the total grading is G = g_M (x) chi.  A one-form
whose coefficients commute with G is odd in the total grading (form
degree plus endomorphism degree), which is what makes g^mu w_mu an odd
zero-order operator.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .clifford import CliffordError, GammaRep, frame_gammas


class GradingError(ValueError):
    """Assembled data do not have the required parity."""


class NotSimpleType(ValueError):
    """The simple-type condition fails for the given one-form."""


class DegenerateMetric(ValueError):
    pass


def _check_metric(rep: GammaRep, metric) -> np.ndarray:
    g = rep.metric if metric is None else np.asarray(metric, dtype=float)
    if g.shape != (rep.n, rep.n):
        raise DegenerateMetric(f"metric must be {rep.n}x{rep.n}")
    scale = max(np.abs(g).max(), 1.0) ** rep.n
    if abs(np.linalg.det(g)) < 1e-10 * scale:
        raise DegenerateMetric("metric is degenerate")
    return g


def fiber_gammas(rep: GammaRep, n_internal: int, metric=None) -> np.ndarray:
    """Coordinate gammas lifted to the full fiber, shape (n, D, D)."""
    g = _check_metric(rep, metric)
    gam = frame_gammas(rep, g)
    eye = np.eye(n_internal)
    return np.array([np.kron(x, eye) for x in gam])


def total_grading(rep: GammaRep, chi: np.ndarray) -> np.ndarray:
    return np.kron(rep.chirality, chi)


def clifford_contract(gammas: np.ndarray, one_form: np.ndarray) -> np.ndarray:
    """Clifford action g(w) = g^mu w_mu of a one-form."""
    return (gammas @ one_form).sum(axis=-3)


def split_clifford(rep: GammaRep, x: np.ndarray, n_internal: int) -> np.ndarray:
    """Coefficients c_I with x = sum_I blade_I (x) c_I, shape (2**n, N, N)."""
    d = rep.dim
    blocks = x.reshape(d, n_internal, d, n_internal)
    inv = np.conj(np.swapaxes(rep.blade_matrices, -1, -2))
    return np.einsum("bji,iajc->bac", inv, blocks) / d


def join_clifford(rep: GammaRep, coeffs: np.ndarray) -> np.ndarray:
    d, nf = rep.dim, coeffs.shape[-1]
    out = np.einsum("bij,bac->iajc", rep.blade_matrices, coeffs)
    return out.reshape(d * nf, d * nf)


@dataclass
class SolderingForm:
    """The one-form T_mu = (s/n) g_{mu nu} g^nu with g(ext_T(x)) = x.

    The sign factor s is the Clifford convention sign, so the right-inverse
    property holds in either convention.
    """

    rep: GammaRep
    metric: np.ndarray | None = None
    coefficients: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        g = _check_metric(self.rep, self.metric)
        self.metric = g
        gam = frame_gammas(self.rep, g)
        s = self.rep.convention_sign
        self.coefficients = s / self.rep.n * np.einsum("mn,nij->mij", g, gam)

    def lifted(self, n_internal: int) -> np.ndarray:
        eye = np.eye(n_internal)
        return np.array([np.kron(t, eye) for t in self.coefficients])

    def ext(self, x: np.ndarray) -> np.ndarray:
        """Exterior multiplication by the soldering form: x -> (T_mu x)_mu."""
        nf = x.shape[0] // self.rep.dim
        return np.einsum("mij,jk->mik", self.lifted(nf), x)


def soldering_contract(theta: SolderingForm, t: np.ndarray) -> np.ndarray:
    """g(ext_T(t)); the identity on fiber matrices."""
    nf = t.shape[0] // theta.rep.dim
    gam = fiber_gammas(theta.rep, nf, theta.metric)
    return clifford_contract(gam, theta.ext(t))


@dataclass
class LocalDiracData:
    """Chart data of a Dirac-type operator at one point.

    ``theta`` maps (mu, blade) to the N_F x N_F coefficient of that blade in
    the Dirac-form coefficient theta_mu.  ``spin_connection[mu, a, b]`` is
    skew in (a, b) and gives w^Cl_mu = (1/4) w_{mu ab} g^a g^b.
    """

    rep: GammaRep
    chi: np.ndarray
    gauge_potential: np.ndarray | None = None
    theta: dict = field(default_factory=dict)
    metric: np.ndarray | None = None
    spin_connection: np.ndarray | None = None
    r_M: float = 0.0

    def __post_init__(self):
        self.chi = np.asarray(self.chi, dtype=complex)
        nf = self.chi.shape[0]
        if not np.allclose(self.chi @ self.chi, np.eye(nf), atol=1e-12):
            raise GradingError("chi must be an involution")
        self.metric = _check_metric(self.rep, self.metric)
        if self.gauge_potential is None:
            self.gauge_potential = np.zeros((self.rep.n, nf, nf), dtype=complex)
        a = np.asarray(self.gauge_potential, dtype=complex)
        if not np.allclose(a, -np.conj(np.swapaxes(a, -1, -2)), atol=1e-12):
            raise GradingError("gauge potential must be anti-Hermitian")
        self.gauge_potential = a

    @property
    def n_internal(self) -> int:
        return self.chi.shape[0]

    @property
    def fiber_dim(self) -> int:
        return self.rep.dim * self.n_internal

    def gammas(self) -> np.ndarray:
        return fiber_gammas(self.rep, self.n_internal, self.metric)

    def grading(self) -> np.ndarray:
        return total_grading(self.rep, self.chi)

    def theta_forms(self) -> np.ndarray:
        """Assembled Dirac-form coefficients theta_mu on the full fiber."""
        n, nf = self.rep.n, self.n_internal
        coeffs = np.zeros((n, len(self.rep.blades), nf, nf), dtype=complex)
        for (mu, blade), c in self.theta.items():
            coeffs[mu, self.rep.blade_index[tuple(blade)]] += c
        return np.array([join_clifford(self.rep, coeffs[mu]) for mu in range(n)])

    def clifford_connection(self) -> np.ndarray:
        n, nf = self.rep.n, self.n_internal
        out = np.array([np.kron(np.eye(self.rep.dim), a) for a in self.gauge_potential])
        if self.spin_connection is not None:
            gam = frame_gammas(self.rep, self.metric)
            w = np.einsum("mab,aij,bjk->mik", self.spin_connection, gam, gam) / 4
            out = out + np.array([np.kron(x, np.eye(nf)) for x in w])
        return out


def theta_from_blades(rep: GammaRep, blade_coeffs: dict, metric=None, sign: int = 1) -> dict:
    """Expand (sign/n) g_{mu nu} g^nu g^I (x) theta_I into (mu, blade) entries."""
    g = _check_metric(rep, metric)
    gam = frame_gammas(rep, g)
    n = rep.n
    out = {}
    for blade, c in blade_coeffs.items():
        c = np.asarray(c, dtype=complex)
        for mu in range(n):
            m = sign / n * np.einsum("n,nij->ij", g[mu], gam) @ rep.product(blade)
            for b, coef in zip(rep.blades, rep.coefficients(m)):
                if abs(coef) > 1e-14:
                    out[(mu, b)] = out.get((mu, b), 0) + coef * c
    return out


def _theta_dict(rep: GammaRep, forms: np.ndarray, nf: int) -> dict:
    out = {}
    for mu, x in enumerate(forms):
        coeffs = split_clifford(rep, x, nf)
        for b, c in zip(rep.blades, coeffs):
            if np.abs(c).max() > 1e-14:
                out[(mu, b)] = c
    return out


def assemble_omega(d: LocalDiracData, tol: float = 1e-10) -> np.ndarray:
    """Connection one-form w^Cl (x) 1 + 1 (x) A + theta on the full fiber.

    Every coefficient must commute with the total grading.
    """
    omega = d.clifford_connection() + d.theta_forms()
    gr = d.grading()
    for mu, w in enumerate(omega):
        if np.abs(gr @ w @ gr - w).max() > tol:
            raise GradingError(f"coefficient {mu} does not commute with the total grading")
    return omega


def _check_odd(phi: np.ndarray, chi: np.ndarray, tol: float = 1e-10) -> None:
    if np.abs(chi @ phi @ chi + phi).max() > tol:
        raise GradingError("phi must anticommute with chi")


def simple_type_forms(rep: GammaRep, phi: np.ndarray, metric=None) -> np.ndarray:
    """theta_mu = T_mu (g_M (x) phi) for the soldering form T."""
    sold = SolderingForm(rep, metric)
    return sold.ext(np.kron(rep.chirality, phi))


def make_simple_type(rep: GammaRep, chi: np.ndarray, phi: np.ndarray, metric=None,
                     gauge_potential=None) -> LocalDiracData:
    """Data whose Dirac form is T ^ (g_M (x) phi), phi odd with respect to chi."""
    phi = np.asarray(phi, dtype=complex)
    chi = np.asarray(chi, dtype=complex)
    _check_odd(phi, chi)
    forms = simple_type_forms(rep, phi, metric)
    theta = _theta_dict(rep, forms, phi.shape[0])
    return LocalDiracData(rep, chi, gauge_potential=gauge_potential, theta=theta, metric=metric)


def simcon_residual(gammas: np.ndarray, omega: np.ndarray, metric: np.ndarray, sign: int) -> np.ndarray:
    """2 s g^{ij} w_j + g^j [w_j, g^i] for each i; zero iff the one-form
    leaves the Bochner connection unchanged."""
    ginv = np.linalg.inv(metric)
    a = 2 * sign * np.einsum("ij,...jkl->...ikl", ginv, omega)
    gw = np.einsum("jab,...jbc->...ac", gammas, omega)
    # g^j w_j g^i - g^j g^i w_j
    b = np.einsum("...ac,icd->...iad", gw, gammas)
    c = np.einsum("jab,ibc,...jcd->...iad", gammas, gammas, omega)
    return a + b - c


def check_simple_type(omega: np.ndarray, rep: GammaRep, metric=None, tol: float = 1e-10):
    """Return (holds, residual) for the simple-type condition on a Dirac form."""
    g = _check_metric(rep, metric)
    omega = np.asarray(omega, dtype=complex)
    nf = omega.shape[-1] // rep.dim
    res = simcon_residual(fiber_gammas(rep, nf, g), omega, g, rep.convention_sign)
    r = float(np.abs(res).max(initial=0.0))
    return r <= tol, r


def extract_phi(omega: np.ndarray, rep: GammaRep, chi: np.ndarray, metric=None, tol: float = 1e-10):
    """The odd phi with g(w) = g_M (x) phi, for a simple-type Dirac form."""
    ok, r = check_simple_type(omega, rep, metric, tol)
    if not ok:
        raise NotSimpleType(f"simple-type residual {r:.3e} exceeds {tol:.1e}")
    nf = chi.shape[0]
    contracted = clifford_contract(fiber_gammas(rep, nf, metric), omega)
    blocks = (np.kron(rep.chirality, np.eye(nf)) @ contracted).reshape(rep.dim, nf, rep.dim, nf)
    phi = np.einsum("iaic->ac", blocks) / rep.dim
    if np.abs(contracted - np.kron(rep.chirality, phi)).max() > tol * max(1.0, np.abs(omega).max()):
        raise NotSimpleType("Clifford contraction is not of the form g_M (x) phi")
    _check_odd(phi, np.asarray(chi), tol * max(1.0, np.abs(phi).max()))
    return phi


def round_trip_residual(omega: np.ndarray, rep: GammaRep, chi: np.ndarray, metric=None) -> float:
    """Operator-level round trip: |g(w) - g(theta(extract_phi(w)))|.

    One-forms differing by an element of ker g define the same operator,
    so the comparison is made after Clifford contraction.
    """
    phi = extract_phi(omega, rep, chi, metric)
    gam = fiber_gammas(rep, chi.shape[0], metric)
    rebuilt = simple_type_forms(rep, phi, metric)
    return float(np.abs(clifford_contract(gam, omega) - clifford_contract(gam, rebuilt)).max())


def _grading_blocks(gr: np.ndarray):
    w, u = np.linalg.eigh(gr)
    return u[:, w > 0], u[:, w < 0]


def even_basis(gr: np.ndarray) -> np.ndarray:
    """Orthonormal basis of matrices commuting with an involution."""
    p, m = _grading_blocks(gr)
    return np.array([np.outer(b[:, i], b[:, j].conj()) for b in (p, m)
                     for i in range(b.shape[1]) for j in range(b.shape[1])])


def odd_basis(gr: np.ndarray) -> np.ndarray:
    """Orthonormal basis of matrices anticommuting with an involution."""
    p, m = _grading_blocks(gr)
    return np.array([np.outer(x[:, i], y[:, j].conj()) for x, y in ((p, m), (m, p))
                     for i in range(x.shape[1]) for j in range(y.shape[1])])


def _nullspace(a: np.ndarray, rel_tol: float = 1e-8) -> np.ndarray:
    if a.shape[1] == 0:
        return np.zeros((0, 0))
    _, s, vh = np.linalg.svd(a)
    if s.size == 0 or s[0] == 0:
        return np.eye(a.shape[1], dtype=complex)
    rank = int((s > rel_tol * s[0]).sum())
    return vh[rank:].conj().T


def _orth(vectors: np.ndarray, rel_tol: float = 1e-10, abs_tol: float = 0.0) -> np.ndarray:
    if vectors.shape[1] == 0:
        return vectors
    u, s, _ = np.linalg.svd(vectors, full_matrices=False)
    cut = max(rel_tol * s[0], abs_tol)
    if s[0] <= cut:
        return u[:, :0]
    return u[:, : int((s > cut).sum())]


def containment_residual(a: np.ndarray, b: np.ndarray) -> float:
    """Largest distance of a unit column of ``a`` from span(b)."""
    if a.shape[1] == 0:
        return 0.0
    qb = _orth(b)
    a = a / np.linalg.norm(a, axis=0)
    return float(np.linalg.norm(a - qb @ (qb.conj().T @ a), axis=0).max())


@dataclass
class SolutionSpace:
    """Solutions of the simple-type condition.

    ``basis`` spans the solutions of the form T ^ Phi (columns are flattened
    one-forms, orthonormal).  ``full_dim`` counts all solutions among
    grading-even one-forms; ``image_rank`` is the rank of their Clifford
    contraction, which equals ``basis.shape[1]`` when every further
    solution lies in ker g.
    """

    basis: np.ndarray
    expected: np.ndarray
    full_dim: int
    image_rank: int
    shape: tuple

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def forms(self) -> np.ndarray:
        return self.basis.T.reshape((-1,) + self.shape)

    def containment(self) -> tuple[float, float]:
        return containment_residual(self.basis, self.expected), containment_residual(self.expected, self.basis)


def simple_type_solution_space(rep: GammaRep, chi: np.ndarray, metric=None, full: bool = True) -> SolutionSpace:
    """Dense nullspace of the simple-type condition.

    Solved over one-forms T ^ Phi with Phi odd, which are representatives of
    all one-forms modulo ker g.  With ``full`` the unrestricted system over
    grading-even one-forms is also solved to count the ker g directions.
    """
    chi = np.asarray(chi, dtype=complex)
    nf = chi.shape[0]
    if rep.n > 4 or nf > 4:
        raise CliffordError("brute-force solution space limited to n <= 4, N_F <= 4")
    g = _check_metric(rep, metric)
    gam = fiber_gammas(rep, nf, g)
    gr = total_grading(rep, chi)
    s = rep.convention_sign
    sold = SolderingForm(rep, g)
    n, dd = rep.n, rep.dim * nf

    odd = odd_basis(gr)
    forms = np.array([sold.ext(x) for x in odd])
    cols = simcon_residual(gam, forms, g, s).reshape(len(odd), -1).T
    coeffs = _nullspace(cols)
    basis = _orth(forms.reshape(len(odd), -1).T @ coeffs)

    odd_internal = odd_basis(chi)
    expected = np.array([sold.ext(np.kron(rep.chirality, phi)).ravel() for phi in odd_internal]).T
    if expected.size == 0:
        expected = np.zeros((n * dd * dd, 0), dtype=complex)

    full_dim, image_rank = basis.shape[1], basis.shape[1]
    if full:
        even = even_basis(gr)
        eye_forms = np.zeros((n * len(even), n, dd, dd), dtype=complex)
        for mu in range(n):
            eye_forms[mu * len(even):(mu + 1) * len(even), mu] = even
        cols = simcon_residual(gam, eye_forms, g, s).reshape(len(eye_forms), -1).T
        null = _nullspace(cols)
        full_dim = null.shape[1]
        contracted = np.einsum("mij,fmjk->fik", gam, eye_forms).reshape(len(eye_forms), -1).T
        image = contracted @ null
        image_rank = _orth(image, 1e-8, abs_tol=1e-8).shape[1] if image.size else 0
    return SolutionSpace(basis, expected, full_dim, image_rank, (n, dd, dd))


def bochner_connection(gammas: np.ndarray, omega: np.ndarray, metric: np.ndarray, sign: int) -> np.ndarray:
    """Connection whose Laplacian matches the first-order part of D^2.

    For constant coefficients, 2 s g^{mu nu} w^_nu = g^mu g(w) + g(w) g^mu.
    Leading axes of ``omega`` before (n, F, F) are treated as a batch.
    """
    gw = clifford_contract(gammas, omega)
    gw = gw[..., None, :, :]
    c = gammas @ gw + gw @ gammas
    return sign / 2 * np.einsum("nl,...lik->...nik", metric, c)


def constant_coefficient_remainder(gammas: np.ndarray, omega: np.ndarray, metric: np.ndarray,
                                   sign: int) -> np.ndarray:
    """E = D^2 - Delta for D = g^mu (d_mu + w_mu) with constant w on flat space."""
    gw = clifford_contract(gammas, omega)
    wb = bochner_connection(gammas, omega, metric, sign)
    ginv = np.linalg.inv(metric)
    return gw @ gw - sign * np.einsum("mn,mij,njk->ik", ginv, wb, wb)


def dirac_potential_constant(d: LocalDiracData) -> complex:
    """tr(D^2 - Delta_D) for constant data on a flat chart (no curvature term)."""
    omega = assemble_omega(d)
    e = constant_coefficient_remainder(d.gammas(), omega, d.metric, d.rep.convention_sign)
    return complex(np.trace(e))


def dirac_form_deviation(gammas: np.ndarray, omega: np.ndarray, metric: np.ndarray, sign: int,
                         soldering: np.ndarray) -> np.ndarray:
    """Xi = T ^ (g(w) - g(w^)): Dirac connection minus Bochner connection."""
    wb = bochner_connection(gammas, omega, metric, sign)
    diff = clifford_contract(gammas, omega) - clifford_contract(gammas, wb)
    return np.einsum("mij,jk->mik", soldering, diff)


def dirac_potential_analytic(d: LocalDiracData) -> complex:
    """Closed-form local potential in terms of the metric, gammas and theta.

    (N/2) r + (1/2) tr([g^i,g^j][t_i,t_j])
        + (1/8) g_ij tr(g^k [t_k, g^i] g^l [t_l, g^j]),
    with t the Dirac-form part only, so the gauge potential drops out.
    """
    gam = d.gammas()
    th = d.theta_forms()
    g = d.metric
    big_n = d.fiber_dim
    comm_g = np.einsum("iab,jbc->ijac", gam, gam) - np.einsum("jab,ibc->ijac", gam, gam)
    comm_t = np.einsum("iab,jbc->ijac", th, th) - np.einsum("jab,ibc->ijac", th, th)
    first = 0.5 * np.einsum("ijab,ijba->", comm_g, comm_t)
    # u^i = g^k [t_k, g^i]
    tg = np.einsum("kab,ibc->kiac", th, gam) - np.einsum("iab,kbc->kiac", gam, th)
    u = np.einsum("kab,kibc->iac", gam, tg)
    second = 0.125 * np.einsum("ij,iab,jba->", g, u, u)
    return complex(big_n / 2 * d.r_M + first + second)
