"""Dense complex linear-algebra substrate for small systems.

Everything here operates on plain ``numpy`` complex arrays.  Matrices are
kept dense on purpose: the largest objects in the package are the
monodromy operators on a short chain (dimension 2**(N+2) with N <= 6) and
Gaudin matrices with at most a few dozen rows, so sparse or iterative
machinery would only add failure modes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "SVDResult",
    "MatrixPolynomial",
    "NumericsError",
    "as_cmatrix",
    "kron",
    "permutation_operator",
    "svd",
    "interpolate_matrix_polynomial",
    "two_site_embed",
    "partial_trace_first",
    "opnorm",
]

DEFAULT_TOL_SMALL = 1e-12   # identity residuals, dimension <= 16
DEFAULT_TOL_LARGE = 1e-10   # identity residuals, larger operators


class NumericsError(ValueError):
    """Raised on contract violations (bad shapes, duplicate nodes, ...)."""


def as_cmatrix(m) -> np.ndarray:
    """Return ``m`` as a 2-d complex array, validating finiteness."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise NumericsError(f"expected a matrix, got ndim={a.ndim}")
    if not np.all(np.isfinite(a)):
        raise NumericsError("matrix contains non-finite entries")
    return a


def kron(a, b) -> np.ndarray:
    """Kronecker product with the row-major convention of ``numpy.kron``."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.size == 0 or b.size == 0:
        raise NumericsError("kron of empty operand")
    return np.kron(a, b)


def permutation_operator(d: int) -> np.ndarray:
    """Swap operator on C^d x C^d: Pi (v ⊗ w) = w ⊗ v."""
    if d < 1:
        raise NumericsError("local dimension must be >= 1")
    pi = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            pi[j * d + i, i * d + j] = 1.0
    return pi


@dataclass(frozen=True)
class SVDResult:
    """Singular values in descending order plus a condition estimate."""

    singular_values: np.ndarray
    condition: float

    @property
    def smallest(self) -> float:
        return float(self.singular_values[-1])

    @property
    def largest(self) -> float:
        return float(self.singular_values[0])


def svd(m) -> SVDResult:
    """Singular values of ``m`` (descending).  Non-convergence raises."""
    a = as_cmatrix(m)
    try:
        s = np.linalg.svd(a, compute_uv=False)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK hiccup
        raise NumericsError(f"SVD did not converge on shape {a.shape}") from exc
    smin = float(s[-1])
    cond = float(s[0] / smin) if smin > 0 else np.inf
    return SVDResult(singular_values=s, condition=cond)


@dataclass(frozen=True)
class MatrixPolynomial:
    """Matrix-valued polynomial sum_n coefficients[n] * u**n."""

    coefficients: tuple

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, u: complex) -> np.ndarray:
        acc = np.zeros_like(self.coefficients[0])
        for c in reversed(self.coefficients):
            acc = acc * u + c
        return acc


def interpolate_matrix_polynomial(samples, degree: int) -> MatrixPolynomial:
    """Entrywise least-squares polynomial interpolation.

    ``samples`` is a sequence of ``(node, matrix)`` pairs; at least
    ``degree + 1`` distinct nodes are required.  With exactly degree+1
    nodes this is Lagrange interpolation; with more it is a least-squares
    fit (used nowhere in anger, but harmless).
    """
    nodes = np.array([u for u, _ in samples], dtype=complex)
    if degree < 0:
        raise NumericsError("degree must be non-negative")
    if len(nodes) < degree + 1:
        raise NumericsError(
            f"need at least {degree + 1} nodes for degree {degree}, got {len(nodes)}")
    for i in range(len(nodes)):
        for j in range(i + 1, len(nodes)):
            if abs(nodes[i] - nodes[j]) < 1e-14 * max(1.0, abs(nodes[i])):
                raise NumericsError("duplicate interpolation nodes")
    mats = [as_cmatrix(m) for _, m in samples]
    shape = mats[0].shape
    if any(m.shape != shape for m in mats):
        raise NumericsError("inconsistent sample shapes")
    vander = np.vander(nodes, degree + 1, increasing=True)
    rhs = np.array([m.ravel() for m in mats])
    coeffs, *_ = np.linalg.lstsq(vander, rhs, rcond=None)
    out = tuple(coeffs[n].reshape(shape) for n in range(degree + 1))
    return MatrixPolynomial(coefficients=out)


def two_site_embed(op4, n_factors: int, i: int, j: int) -> np.ndarray:
    """Embed a 4x4 operator acting on qubit factors (i, j) of n factors.

    Factor 0 is the most significant index (matching ``kron`` order).  The
    first tensor slot of ``op4`` acts on factor ``i``, the second on ``j``.
    """
    op = as_cmatrix(op4)
    if op.shape != (4, 4):
        raise NumericsError("two_site_embed expects a 4x4 operator")
    if i == j or not (0 <= i < n_factors) or not (0 <= j < n_factors):
        raise NumericsError(f"bad factor indices ({i}, {j}) for n={n_factors}")
    t = op.reshape(2, 2, 2, 2)
    dim = 2 ** n_factors
    wi = 2 ** (n_factors - 1 - i)
    wj = 2 ** (n_factors - 1 - j)
    out = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        bi = (col // wi) & 1
        bj = (col // wj) & 1
        base = col - bi * wi - bj * wj
        for a in range(2):
            for b in range(2):
                amp = t[a, b, bi, bj]
                if amp != 0.0:
                    out[base + a * wi + b * wj, col] += amp
    return out


def partial_trace_first(m, first_dim: int = 2) -> np.ndarray:
    """Trace out the leading tensor factor of an operator."""
    a = as_cmatrix(m)
    rest = a.shape[0] // first_dim
    if first_dim * rest != a.shape[0] or a.shape[0] != a.shape[1]:
        raise NumericsError("shape incompatible with requested partial trace")
    r = a.reshape(first_dim, rest, first_dim, rest)
    return np.einsum("aiaj->ij", r)


def opnorm(m) -> float:
    """Spectral norm (largest singular value)."""
    return float(np.linalg.norm(np.asarray(m, dtype=complex), 2))
