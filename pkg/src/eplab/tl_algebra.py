"""Contact algebra, Baxterized R-matrices, and the transfer hierarchy.

The two-particle contact generator is the rank-one antisymmetrizer built
from the biorthogonal impurity eigensystem.  Its matrix is universal (the
eigenvector prefactors cancel between ket and dual), which is exactly what
the verification suites in this module pin down numerically, phase by
phase.  Baxterization with f(u) = u/(1-u) then yields the R-matrix, Lax
operators, monodromy and commuting transfer matrices on short chains.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import impurity
from .numerics import (MatrixPolynomial, interpolate_matrix_polynomial, kron,
                       opnorm, partial_trace_first, permutation_operator,
                       two_site_embed)

__all__ = [
    "ContactGenerator",
    "BaxterizedR",
    "ChainAlgebra",
    "ChargeSeries",
    "PoleProximityError",
    "UNIVERSAL_CONTACT",
    "build_contact_generator",
    "build_ep_contact_generator",
    "verify_tl_relations",
    "baxterized_r",
    "ybe_residual",
    "unitarity_check",
    "rll_residual",
    "build_chain",
    "rtt_residual",
    "transfer_commutator",
    "extract_charges",
    "ep_rescaled_generator",
    "ep_linear_baxterization",
    "jordan_pair_nilpotent",
]

POLE_GUARD = 1e-8  # radius around the f(u) pole at u = 1

UNIVERSAL_CONTACT = np.array(
    [[0, 0, 0, 0],
     [0, 1, -1, 0],
     [0, -1, 1, 0],
     [0, 0, 0, 0]], dtype=complex)

PI4 = permutation_operator(2)


class PoleProximityError(ArithmeticError):
    """Spectral parameter too close to the Baxterization pole."""


@dataclass(frozen=True)
class ContactGenerator:
    """Rank-one two-particle contact operator |Omega><Omega~|."""

    matrix: np.ndarray
    omega: np.ndarray
    omega_dual: np.ndarray
    normalization: complex
    basis: str


def build_contact_generator(p: impurity.ImpurityParams,
                            basis: str = "spin") -> ContactGenerator:
    """Antisymmetrized two-particle generator in the requested basis.

    ``basis="spin"`` keeps the fixed product basis; ``basis="biorthogonal"``
    transforms to the eigenbasis, where the matrix is the universal
    antisymmetrizer with loop weight 2 regardless of parameters.
    """
    if basis not in ("spin", "biorthogonal"):
        raise ValueError(f"unknown basis {basis!r}")
    sd = impurity.spectral_data(p)
    r_p, r_m = sd.right_vectors
    l_p, l_m = sd.left_covectors
    omega = np.kron(r_p, r_m) - np.kron(r_m, r_p)
    omega_dual = np.kron(l_p, l_m) - np.kron(l_m, l_p)
    matrix = np.outer(omega, omega_dual)
    norm = complex(omega_dual @ omega)
    if basis == "biorthogonal":
        right = np.column_stack([r_p, r_m])
        left = np.vstack([l_p, l_m])
        to_bio = kron(left, left)
        from_bio = kron(right, right)
        matrix = to_bio @ matrix @ from_bio
        omega = to_bio @ omega
        omega_dual = omega_dual @ from_bio
    return ContactGenerator(matrix=matrix, omega=omega, omega_dual=omega_dual,
                            normalization=norm, basis=basis)


def build_ep_contact_generator(p: impurity.ImpurityParams) -> ContactGenerator:
    """Contact generator at the defective point from the Jordan pair.

    The antisymmetrized eigenvector/chain pair replaces the eigenvector
    pair; the dual is built from the inverse-transform rows.  No
    additional normalization is imposed (none is published); the result
    carries its raw pairing, which evaluates to 2.
    """
    jd = impurity.jordan_data(p)
    r, v = jd.ep_eigenvector, jd.chain_vector
    dual = np.linalg.inv(jd.transform)
    wr, wv = dual[0], dual[1]
    omega = np.kron(r, v) - np.kron(v, r)
    omega_dual = np.kron(wr, wv) - np.kron(wv, wr)
    return ContactGenerator(matrix=np.outer(omega, omega_dual), omega=omega,
                            omega_dual=omega_dual,
                            normalization=complex(omega_dual @ omega),
                            basis="spin")


def _site_generators(e12: np.ndarray, n_sites: int):
    return [two_site_embed(e12, n_sites, i, i + 1) for i in range(n_sites - 1)]


def verify_tl_relations(p: impurity.ImpurityParams, n_sites: int = 3) -> dict:
    """Max residuals of the contact-algebra relations on n sites."""
    if n_sites < 3:
        raise ValueError("mixed relation needs at least 3 sites")
    e12 = build_contact_generator(p, basis="spin").matrix
    es = _site_generators(e12, n_sites)
    quad = max(opnorm(e @ e - 2 * e) for e in es)
    mixed = 0.0
    for i in range(len(es) - 1):
        mixed = max(mixed,
                    opnorm(es[i] @ es[i + 1] @ es[i] - es[i]),
                    opnorm(es[i + 1] @ es[i] @ es[i + 1] - es[i + 1]))
    distant = 0.0
    for i in range(len(es)):
        for j in range(i + 2, len(es)):
            distant = max(distant, opnorm(es[i] @ es[j] - es[j] @ es[i]))
    return {"quadratic": quad, "mixed": mixed, "distant": distant}


def spectral_fn(u: complex) -> complex:
    """Rational Baxterization weight f(u) = u / (1 - u)."""
    if abs(1.0 - u) < POLE_GUARD:
        raise PoleProximityError(f"u = {u} within {POLE_GUARD} of the pole")
    return u / (1.0 - u)


@dataclass(frozen=True)
class BaxterizedR:
    """Spectral-parameter family built on a contact generator."""

    e12: np.ndarray

    def braid_form(self, u: complex) -> np.ndarray:
        return np.eye(4, dtype=complex) + spectral_fn(u) * self.e12

    def ordinary_form(self, u: complex) -> np.ndarray:
        return PI4 @ self.braid_form(u)


def baxterized_r(p: impurity.ImpurityParams) -> BaxterizedR:
    return BaxterizedR(e12=build_contact_generator(p, basis="spin").matrix)


def ybe_residual(r: BaxterizedR, u: complex, v: complex) -> float:
    """||R12(u-v) R13(u) R23(v) - R23(v) R13(u) R12(u-v)|| on three factors."""
    r12 = two_site_embed(r.ordinary_form(u - v), 3, 0, 1)
    r13 = two_site_embed(r.ordinary_form(u), 3, 0, 2)
    r23 = two_site_embed(r.ordinary_form(v), 3, 1, 2)
    return opnorm(r12 @ r13 @ r23 - r23 @ r13 @ r12)


def unitarity_check(r: BaxterizedR, u: complex) -> float:
    """||Rcheck(u) Rcheck(-u) - 1||."""
    return opnorm(r.braid_form(u) @ r.braid_form(-u) - np.eye(4))


def rll_residual(p: impurity.ImpurityParams, u: complex, v: complex) -> float:
    """8x8 exchange-relation residual with the Lax operator L = R."""
    r = baxterized_r(p)
    r12 = two_site_embed(r.ordinary_form(u - v), 3, 0, 1)
    l1 = two_site_embed(r.ordinary_form(u), 3, 0, 2)
    l2 = two_site_embed(r.ordinary_form(v), 3, 1, 2)
    return opnorm(r12 @ l1 @ l2 - l2 @ l1 @ r12)


@dataclass(frozen=True)
class ChainAlgebra:
    """Monodromy/transfer objects for an N-site chain."""

    n_sites: int
    r: BaxterizedR

    @property
    def metric(self) -> np.ndarray:
        m = impurity.SX
        for _ in range(self.n_sites - 1):
            m = kron(m, impurity.SX)
        return m

    def lax(self, site: int, u: complex) -> np.ndarray:
        """R acting on (auxiliary, q_site) inside the (N+1)-factor space."""
        return two_site_embed(self.r.ordinary_form(u), self.n_sites + 1, 0,
                              1 + site)

    def monodromy(self, u: complex) -> np.ndarray:
        t = self.lax(self.n_sites - 1, u)
        for site in range(self.n_sites - 2, -1, -1):
            t = t @ self.lax(site, u)
        return t

    def transfer(self, u: complex) -> np.ndarray:
        return partial_trace_first(self.monodromy(u))


def build_chain(p: impurity.ImpurityParams, n_sites: int) -> ChainAlgebra:
    if not 1 <= n_sites <= 6:
        raise ValueError("chain length must be between 1 and 6")
    return ChainAlgebra(n_sites=n_sites, r=baxterized_r(p))


def rtt_residual(chain: ChainAlgebra, u: complex, v: complex) -> float:
    """Exchange relation for the monodromy on two auxiliary spaces."""
    n = chain.n_sites
    nf = n + 2   # a1, a2, q_1..q_N

    def mono(aux: int, w: complex) -> np.ndarray:
        t = two_site_embed(chain.r.ordinary_form(w), nf, aux, 2 + n - 1)
        for site in range(n - 2, -1, -1):
            t = t @ two_site_embed(chain.r.ordinary_form(w), nf, aux, 2 + site)
        return t

    r12 = two_site_embed(chain.r.ordinary_form(u - v), nf, 0, 1)
    t1, t2 = mono(0, u), mono(1, v)
    return opnorm(r12 @ t1 @ t2 - t2 @ t1 @ r12)


def transfer_commutator(chain: ChainAlgebra, samples) -> float:
    """Max ||[t(u), t(v)]|| over the sample pairs."""
    worst = 0.0
    for u, v in samples:
        tu, tv = chain.transfer(u), chain.transfer(v)
        worst = max(worst, opnorm(tu @ tv - tv @ tu))
    return worst


@dataclass(frozen=True)
class ChargeSeries:
    charges: tuple
    base_point: complex
    polynomial: MatrixPolynomial

    def pairwise_commutator_norm(self) -> float:
        worst = 0.0
        qs = self.charges
        for i in range(len(qs)):
            for j in range(i + 1, len(qs)):
                worst = max(worst, opnorm(qs[i] @ qs[j] - qs[j] @ qs[i]))
        return worst


def extract_charges(chain: ChainAlgebra, max_order: int = 4) -> ChargeSeries:
    """Commuting charges from the logarithm of the rescaled transfer matrix.

    t_hat(u) = (1-u)^N t(u) is a matrix polynomial of degree <= N,
    reconstructed by interpolation; the charges are the Taylor
    coefficients of log(t_hat(u) t_hat(0)^{-1}) at u = 0 through the
    truncated matrix-log series.
    """
    n = chain.n_sites
    nodes = [0.0] + [-0.3 + 0.55 * k / n for k in range(1, n + 1)]
    samples = [(u, (1.0 - u) ** n * chain.transfer(u)) for u in nodes]
    poly = interpolate_matrix_polynomial(samples, degree=n)
    t0 = poly.coefficients[0]
    t0_inv = np.linalg.inv(t0)
    dim = t0.shape[0]
    order = max_order
    # power-series coefficients of X(u) = t_hat(u) t_hat(0)^{-1} - 1
    x = [np.zeros((dim, dim), dtype=complex) for _ in range(order + 1)]
    for m in range(1, min(n, order) + 1):
        x[m] = poly.coefficients[m] @ t0_inv
    log_c = [np.zeros((dim, dim), dtype=complex) for _ in range(order + 1)]
    power = list(x)
    sign = 1.0
    for kk in range(1, order + 1):
        if kk > 1:
            new = [np.zeros((dim, dim), dtype=complex) for _ in range(order + 1)]
            for a in range(1, order + 1):
                for b in range(1, order + 1 - a):
                    new[a + b] += power[a] @ x[b]
            power = new
        for m in range(order + 1):
            log_c[m] = log_c[m] + sign * power[m] / kk
        sign = -sign
    return ChargeSeries(charges=tuple(log_c[1:order + 1]), base_point=0.0,
                        polynomial=poly)


def ep_rescaled_generator(gamma: float, s_values) -> dict:
    """Rescaled generators s^2 e12(s) along a splitting ramp toward zero.

    Returns per-s matrices, the residual to the published center-block
    form at this gamma, and the quadratic-identity residuals
    ||(s^2 e)^2 - 2 s^2 (s^2 e)||.
    """
    out = {"s": [], "rescaled": [], "center_block_residual": [],
           "nilpotency_residual": [], "quadratic_rate": []}
    for s in s_values:
        if not 0 < s <= gamma:
            raise ValueError("s values must satisfy 0 < s <= gamma")
        beta = float(np.sqrt(gamma**2 - s**2))
        p = impurity.ImpurityParams(0.0, beta, gamma, 0.0)
        e12 = build_contact_generator(p, basis="spin").matrix
        resc = s**2 * e12
        target = s**2 * UNIVERSAL_CONTACT
        out["s"].append(s)
        out["rescaled"].append(resc)
        out["center_block_residual"].append(
            float(np.max(np.abs(resc - target))))
        out["nilpotency_residual"].append(
            opnorm(resc @ resc - 2 * s**2 * resc))
        out["quadratic_rate"].append(opnorm(resc @ resc) / max(opnorm(resc), 1e-300))
    return out


def jordan_pair_nilpotent(gamma: float) -> np.ndarray:
    """Two-site nilpotent built from the one-site Jordan nilpotent.

    (i gamma/2)N on each factor; the square vanishes because N^2 = 0.
    """
    n1 = (0.5j * gamma) * np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    return kron(n1, n1)


def ep_linear_baxterization(c: float, u: complex, v: complex,
                            nilpotent) -> dict:
    """Linear Baxterization checks for a nilpotent contact operator.

    For g(u) = c*u: additivity g(u+v) = g(u) + g(v), det(1 + g(u) E) = 1,
    and the braid exchange relation for Rcheck(u) = 1 + g(u) E on three
    factors.
    """
    e = np.asarray(nilpotent, dtype=complex)
    if opnorm(e @ e) > 1e-12 * max(1.0, opnorm(e)) ** 2:
        raise ValueError("input is not nilpotent of order two")

    def g(w):
        return c * w

    def rcheck(w):
        return np.eye(4, dtype=complex) + g(w) * e

    additivity = abs(g(u + v) - g(u) - g(v))
    det_residual = abs(np.linalg.det(rcheck(u)) - 1.0)
    r_i = two_site_embed(rcheck(u), 3, 0, 1)
    r_ii = two_site_embed(rcheck(u + v), 3, 1, 2)
    r_iii = two_site_embed(rcheck(v), 3, 0, 1)
    lhs = r_i @ r_ii @ r_iii
    r_j = two_site_embed(rcheck(v), 3, 1, 2)
    r_jj = two_site_embed(rcheck(u + v), 3, 0, 1)
    r_jjj = two_site_embed(rcheck(u), 3, 1, 2)
    rhs = r_j @ r_jj @ r_jjj
    return {"additivity": additivity, "det_residual": det_residual,
            "braid_residual": opnorm(lhs - rhs)}
