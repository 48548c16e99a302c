"""Two-level pseudo-Hermitian impurity block and its spectral diagnostics.

The impurity Hamiltonian is ``H = eps*1 + i*beta*sz + gamma_eff*sx`` with
``gamma_eff = sqrt(gamma^2 + (J/2)^2)``.  Its spectrum, biorthogonal
eigensystem, projectors, Jordan data at the defective point, discrete
symmetries, and resolvent/pseudospectrum scalings are all computed here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics import opnorm

__all__ = [
    "ImpurityParams",
    "SpectralData",
    "JordanData",
    "SymmetryReport",
    "EPDegeneracyError",
    "SX",
    "SY",
    "SZ",
    "ID2",
    "build_himp",
    "verify_pseudo_hermiticity",
    "spectral_data",
    "projectors",
    "jordan_data",
    "ep_locus",
    "detect_ep_beta",
    "kondo_scale",
    "symmetry_report",
    "su2_generators",
    "pseudospectrum_radius",
    "pseudospectrum_radius_matrix",
    "resolvent_curve",
    "resolvent_pole_order",
]

SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SY = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SZ = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
ID2 = np.eye(2, dtype=complex)

EP_TOL = 1e-10  # |s_eff| below this counts as the defective point


class EPDegeneracyError(ArithmeticError):
    """Requested object diverges or is undefined at the exceptional point."""


@dataclass(frozen=True)
class ImpurityParams:
    """Impurity level, gain-loss amplitude, hybridization, exchange coupling."""

    epsilon: float = 0.0
    beta: float = 0.0
    gamma: float = 1.0
    j_coupling: float = 0.0

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")
        if self.beta < 0:
            raise ValueError("beta must be non-negative")
        if self.j_coupling < 0:
            raise ValueError("j_coupling must be non-negative")

    @property
    def gamma_eff(self) -> float:
        return float(np.hypot(self.gamma, 0.5 * self.j_coupling))

    @property
    def s_eff(self) -> complex:
        """Spectral half-splitting on the principal branch.

        Real and positive in the unbroken phase; ``i*s'`` with ``s' > 0``
        in the broken phase.
        """
        disc = self.gamma_eff**2 - self.beta**2
        return complex(np.sqrt(complex(disc)))

    @property
    def control_delta(self) -> float:
        """Distance gamma_eff - beta to the defectiveness onset."""
        return self.gamma_eff - self.beta

    @property
    def phase_label(self) -> str:
        s = self.s_eff
        if abs(s) <= EP_TOL:
            return "exceptional"
        return "unbroken" if abs(s.imag) <= abs(s.real) * 1e-12 else "broken"


def build_himp(p: ImpurityParams) -> np.ndarray:
    """Assemble the 2x2 impurity block eps*1 + i*beta*sz + gamma_eff*sx."""
    return p.epsilon * ID2 + 1j * p.beta * SZ + p.gamma_eff * SX


def verify_pseudo_hermiticity(h) -> float:
    """Operator-norm defect of H^dagger = sx H sx."""
    h = np.asarray(h, dtype=complex)
    return opnorm(h.conj().T - SX @ h @ SX)


@dataclass(frozen=True)
class SpectralData:
    """Biorthogonal eigensystem of the impurity block."""

    params: ImpurityParams
    s_eff: complex
    energies: tuple
    right_vectors: tuple            # unnormalized, components (±s+i beta, gamma_eff)
    left_covectors: tuple           # scaled so <l_a|r_b> = delta_ab
    raw_overlaps: tuple             # <l|r> before normalization, = ±2 s gamma_eff
    phase_label: str


def spectral_data(p: ImpurityParams) -> SpectralData:
    """Eigenvalues and the biorthogonal right/left system.

    Left covectors carry all the normalization (the right vectors keep
    their fixed component form).  At the exceptional point the
    normalization diverges; callers must use :func:`jordan_data` there.
    """
    s = p.s_eff
    ge = p.gamma_eff
    label = p.phase_label
    if label == "exceptional":
        raise EPDegeneracyError(
            "biorthogonal normalization diverges at the exceptional point; "
            "use jordan_data")
    r_plus = np.array([s + 1j * p.beta, ge], dtype=complex)
    r_minus = np.array([-s + 1j * p.beta, ge], dtype=complex)
    l_plus = np.array([ge, s - 1j * p.beta], dtype=complex)
    l_minus = np.array([ge, -s - 1j * p.beta], dtype=complex)
    ov_plus = l_plus @ r_plus      # = 2 s gamma_eff
    ov_minus = l_minus @ r_minus   # = -2 s gamma_eff
    return SpectralData(
        params=p,
        s_eff=s,
        energies=(p.epsilon + s, p.epsilon - s),
        right_vectors=(r_plus, r_minus),
        left_covectors=(l_plus / ov_plus, l_minus / ov_minus),
        raw_overlaps=(ov_plus, ov_minus),
        phase_label=label,
    )


def projectors(p: ImpurityParams) -> tuple:
    """Spectral projectors P± = |r±><l±| with biorthonormal covectors."""
    sd = spectral_data(p)
    p_plus = np.outer(sd.right_vectors[0], sd.left_covectors[0])
    p_minus = np.outer(sd.right_vectors[1], sd.left_covectors[1])
    return p_plus, p_minus


@dataclass(frozen=True)
class JordanData:
    """Jordan chain of the traceless block at the defective point."""

    ep_eigenvector: np.ndarray
    chain_vector: np.ndarray
    transform: np.ndarray
    nilpotent: np.ndarray
    similarity_residual: float


def jordan_data(p: ImpurityParams, ep_tol: float = EP_TOL) -> JordanData:
    """Eigenvector, chain vector (gauge c = 0), transform and nilpotent.

    The eigenvector is returned in the PT-self-conjugate gauge
    ``(e^{i pi/4}, e^{-i pi/4})/sqrt(2)`` (proportional to both published
    component forms); the chain vector satisfies ``(H - eps) v = r``.
    """
    if abs(p.gamma_eff - p.beta) > ep_tol:
        raise ValueError(
            f"not at the defective point: |gamma_eff - beta| = "
            f"{abs(p.gamma_eff - p.beta):.3e} > {ep_tol:.1e}")
    mu = np.exp(-0.25j * np.pi)
    r = mu * np.array([1j, 1.0], dtype=complex) / np.sqrt(2.0)
    v = mu * np.array([1.0, 0.0], dtype=complex) / (p.beta * np.sqrt(2.0))
    transform = np.column_stack([r, v])
    nilpotent = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    h0 = build_himp(p) - p.epsilon * ID2
    residual = opnorm(np.linalg.solve(transform, h0 @ transform) - nilpotent)
    return JordanData(ep_eigenvector=r, chain_vector=v, transform=transform,
                      nilpotent=nilpotent, similarity_residual=residual)


def ep_locus(gamma: float, j: float) -> float:
    """Gain-loss amplitude at which the block becomes defective."""
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    if j < 0:
        raise ValueError("j must be non-negative")
    return float(np.hypot(gamma, 0.5 * j))


def detect_ep_beta(gamma: float, j: float, bracket=(0.0, None),
                   tol: float = 1e-12) -> float:
    """Locate the defectiveness onset by bisection on the discriminant.

    Uses only the assembled matrix (through ``det(H - eps*1)``), so it is
    an independent numerical detection of the locus rather than the
    closed form.
    """
    lo, hi = bracket
    if hi is None:
        hi = 2.0 * (gamma + j)

    def disc(beta):
        h0 = build_himp(ImpurityParams(0.0, beta, gamma, j)) - 0.0 * ID2
        # det(H0) = -(gamma_eff^2 - beta^2); sign flips at the onset
        return -np.linalg.det(h0).real

    flo, fhi = disc(lo), disc(hi)
    if not (flo > 0 > fhi):
        raise ValueError("bracket does not straddle the defectiveness onset")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if disc(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def kondo_scale(p: ImpurityParams, prefactor: float = 1.0) -> float:
    """Exchange-enhanced binding scale prefactor * exp(-|eps|/gamma_eff)."""
    ge = p.gamma_eff
    if ge <= 0:
        raise ValueError("gamma_eff must be positive")
    return float(prefactor * np.exp(-abs(p.epsilon) / ge))


@dataclass(frozen=True)
class SymmetryReport:
    pt_holds: bool
    pt_residual: float
    t_broken: bool
    t_residual: float
    c_maps_to_adjoint: bool
    c_residual: float
    gamma_action_residual: float
    class_label: str = "non-Hermitian class D"
    ep_eigenvector_pt_eigenvalue: complex | None = None
    ep_chain_pt_eigenvalue: complex | None = None
    ep_chain_c_eigenvalue: complex | None = None
    ep_pt_residuals: tuple | None = None


def symmetry_report(p: ImpurityParams, tol: float = 1e-12) -> SymmetryReport:
    """Discrete symmetry residuals; at the EP also the chain PT data.

    The antiunitary test at the defective point uses the PT-canonical
    Jordan pair: the eigenvector gauge of :func:`jordan_data` (PT
    eigenvalue +1) and the PT-odd chain vector
    ``(e^{i pi/4}, e^{3 i pi/4})/sqrt(2)`` (eigenvalue -1).
    """
    h = build_himp(p)
    h0 = h - p.epsilon * ID2
    pt_res = opnorm(SX @ h.conj() @ SX - h)
    t_res = opnorm(SY @ h.conj() @ SY - h)
    c_res = opnorm(SX @ h.T @ SX - h.conj().T)
    gamma_res = opnorm(SZ @ h0 @ SZ + h0)
    report = dict(
        pt_holds=pt_res <= tol,
        pt_residual=pt_res,
        t_broken=t_res > tol and p.gamma_eff != 0,
        t_residual=t_res,
        c_maps_to_adjoint=c_res <= tol,
        c_residual=c_res,
        gamma_action_residual=gamma_res,
    )
    if abs(p.gamma_eff - p.beta) <= EP_TOL:
        r_pt = np.array([np.exp(0.25j * np.pi), np.exp(-0.25j * np.pi)]) / np.sqrt(2)
        v_pt = np.array([np.exp(0.25j * np.pi), np.exp(0.75j * np.pi)]) / np.sqrt(2)
        res_r = float(np.linalg.norm(SX @ r_pt.conj() - r_pt))
        res_v = float(np.linalg.norm(SX @ v_pt.conj() + v_pt))
        i_max = int(np.argmax(np.abs(v_pt)))
        report.update(
            ep_eigenvector_pt_eigenvalue=1.0 + 0.0j if res_r <= tol else None,
            ep_chain_pt_eigenvalue=-1.0 + 0.0j if res_v <= tol else None,
            ep_chain_c_eigenvalue=complex((SX @ v_pt.conj())[i_max] / v_pt[i_max]),
            ep_pt_residuals=(res_r, res_v),
        )
    return SymmetryReport(**report)


@dataclass(frozen=True)
class Su2Generators:
    s_plus: np.ndarray
    s_minus: np.ndarray
    s_z: np.ndarray
    commutator_residuals: tuple
    projector_residual: float
    contraction_matrix: np.ndarray


def su2_generators(p: ImpurityParams) -> Su2Generators:
    """Raising/lowering/Cartan triple adapted to the impurity block.

    The pair is normalized asymmetrically so that the su(2) commutators
    close exactly *and* ``s * S+`` contracts to ``(i gamma_eff / 2) N`` as
    s -> 0.  The published symmetric display cannot satisfy both (its
    ``[S+, S-]`` equals ``(gamma_eff^2/4s^2) * 2 Sz``), so the closing
    normalization is used and the projector identity is verified in the
    equivalent exact form.
    """
    s = p.s_eff
    if abs(s) <= EP_TOL:
        raise EPDegeneracyError("generators contract at the defective point")
    ge = p.gamma_eff
    s_plus = np.array([[0.0, (s + 1j * p.beta) / (2 * s)], [0.0, 0.0]])
    s_minus = np.array([[0.0, 0.0], [2 * s * (s - 1j * p.beta) / ge**2, 0.0]])
    s_z = 0.5 * SZ
    comm = (
        opnorm((s_z @ s_plus - s_plus @ s_z) - s_plus),
        opnorm((s_z @ s_minus - s_minus @ s_z) + s_minus),
        opnorm((s_plus @ s_minus - s_minus @ s_plus) - 2 * s_z),
    )
    # P+ = 1/2 + (i beta / s) Sz + (gamma_eff / 2s) sx, re-expressed through
    # the returned generators.
    sigma_plus = (2 * s / (s + 1j * p.beta)) * s_plus
    sigma_minus = (ge**2 / (2 * s * (s - 1j * p.beta))) * s_minus
    recon = (0.5 * ID2 + (1j * p.beta / s) * s_z
             + (ge / (2 * s)) * (sigma_plus + sigma_minus))
    proj_res = opnorm(recon - projectors(p)[0])
    return Su2Generators(s_plus=s_plus, s_minus=s_minus, s_z=s_z,
                         commutator_residuals=comm,
                         projector_residual=proj_res,
                         contraction_matrix=s * s_plus)


def _smin(h, z):
    m = h - z * ID2
    return float(np.linalg.svd(m, compute_uv=False)[-1])


def pseudospectrum_radius_matrix(h, z0: complex, eps_levels, ray: complex = 1.0,
                                 rtol: float = 1e-12):
    """Radii where s_min(H - (z0 + r*ray)) crosses each eps level."""
    h = np.asarray(h, dtype=complex)
    ray = ray / abs(ray)
    out = []
    for eps in eps_levels:
        hi = max(abs(eps), 1e-14)
        while _smin(h, z0 + hi * ray) < eps:
            hi *= 2.0
            if hi > 1e6:
                raise ArithmeticError("pseudospectrum bracket failure")
        lo = 0.0
        while hi - lo > rtol * hi:
            mid = 0.5 * (lo + hi)
            if _smin(h, z0 + mid * ray) < eps:
                lo = mid
            else:
                hi = mid
        out.append((float(eps), 0.5 * (lo + hi)))
    return out


def pseudospectrum_radius(p: ImpurityParams, eps_levels=None,
                          ray: complex = 1.0 + 0.0j):
    """Pseudospectrum radii around E+ plus the fitted log-log exponent."""
    if eps_levels is None:
        eps_levels = np.logspace(-5, -9, 9)
    e_plus = p.epsilon + p.s_eff
    pairs = pseudospectrum_radius_matrix(build_himp(p), e_plus, eps_levels, ray)
    eps = np.array([e for e, _ in pairs])
    rad = np.array([r for _, r in pairs])
    slope = float(np.polyfit(np.log(eps), np.log(rad), 1)[0])
    return pairs, slope


def resolvent_curve(p: ImpurityParams, distances=None,
                    ray: complex = 1.0 + 0.0j):
    """||(z-H)^{-1}|| along a ray from E+, via the closed-form 2x2 inverse."""
    if distances is None:
        distances = np.logspace(-7, -4, 10)
    h = build_himp(p)
    e_plus = p.epsilon + p.s_eff
    ray = ray / abs(ray)
    norms = []
    for r in distances:
        z = e_plus + r * ray
        a, b = z - h[0, 0], -h[0, 1]
        c, d = -h[1, 0], z - h[1, 1]
        det = a * d - b * c
        inv = np.array([[d, -b], [-c, a]]) / det
        norms.append(opnorm(inv))
    return np.asarray(distances, dtype=float), np.array(norms)


def resolvent_pole_order(p: ImpurityParams, distances=None,
                         ray: complex = 1.0 + 0.0j) -> float:
    """Fitted slope of log ||(z-H)^-1|| versus log |z - E+| on a ray.

    Approximately -2 at the defective point, -1 for a simple eigenvalue.
    """
    dist, norms = resolvent_curve(p, distances, ray)
    return float(np.polyfit(np.log(dist), np.log(norms), 1)[0])
