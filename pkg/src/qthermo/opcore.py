"""Dense complex Hermitian linear algebra for small dimensions, Bloch-vector
conversions, and entropy functionals.

Conventions used throughout the package: hbar = 1 and k_B = 1; energies are
expressed in units of the base qubit frequency unless stated otherwise, so
temperatures come out in units of (base frequency)/k_B.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-10
EIGENVALUE_CLIP = 1e-10
JACOBI_OFFDIAG_TOL = 1e-13
MAX_DIM = 8
SUPPORT_TOL = 1e-12
LOG_CLIP = 1e-300

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
PAULI = (SIGMA_X, SIGMA_Y, SIGMA_Z)


def as_operator(M) -> np.ndarray:
    """Coerce input to a square complex matrix (copy)."""
    A = np.array(M, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    return A


def check_hermitian(M: np.ndarray, tol: float = HERMITICITY_TOL,
                    name: str = "operator") -> np.ndarray:
    A = as_operator(M)
    scale = max(1.0, float(np.max(np.abs(A))))
    if np.max(np.abs(A - A.conj().T)) > tol * scale:
        raise ValueError(f"{name} is not Hermitian within tolerance {tol}")
    return A


def check_density(rho, trace_tol: float = TRACE_TOL,
                  eig_tol: float = EIGENVALUE_CLIP) -> np.ndarray:
    """Validate a density operator: Hermitian, unit trace, positive semidefinite."""
    A = check_hermitian(rho, name="density operator")
    tr = float(np.trace(A).real)
    if abs(tr - 1.0) > trace_tol:
        raise ValueError(f"density operator trace {tr} deviates from 1")
    vals = eig_hermitian(A).values
    if vals[0] < -eig_tol:
        raise ValueError(f"density operator has eigenvalue {vals[0]} < 0")
    return A


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues and orthonormal eigenvectors (columns), sorted per `order`."""

    values: np.ndarray     # (d,) real
    vectors: np.ndarray    # (d, d) complex, vectors[:, n] belongs to values[n]
    order: str             # 'ascending' | 'descending'

    @property
    def dim(self) -> int:
        return self.values.shape[0]

    def reconstruct(self) -> np.ndarray:
        """Sum of values[n] * |v_n><v_n|."""
        return (self.vectors * self.values) @ self.vectors.conj().T

    def projector(self, n: int) -> np.ndarray:
        v = self.vectors[:, n]
        return np.outer(v, v.conj())


def _eig2(M: np.ndarray):
    """Closed-form eigendecomposition of a 2x2 Hermitian matrix (ascending)."""
    a = M[0, 0].real
    c = M[1, 1].real
    b = M[0, 1]
    mean = 0.5 * (a + c)
    p = 0.5 * (a - c)
    babs = abs(b)
    radius = math.hypot(p, babs)
    values = np.array([mean - radius, mean + radius])
    if babs < 1e-15 * max(1.0, abs(a), abs(c)):
        # (near-)diagonal: standard basis, ordered by the diagonal
        if a <= c:
            vectors = np.eye(2, dtype=complex)
        else:
            vectors = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
        return values, vectors
    # eigenvector of mean+radius is (b, radius - p); of mean-radius is (b, -(radius + p))
    v_plus = np.array([b, radius - p], dtype=complex)
    v_minus = np.array([b, -(radius + p)], dtype=complex)
    v_plus /= np.linalg.norm(v_plus)
    v_minus /= np.linalg.norm(v_minus)
    vectors = np.column_stack([v_minus, v_plus])
    return values, vectors


def _jacobi(M: np.ndarray, offdiag_tol: float = JACOBI_OFFDIAG_TOL,
            max_sweeps: int = 60):
    """Cyclic Jacobi rotations for a complex Hermitian matrix.

    Returns (values, vectors) in the order produced by the sweeps (unsorted).
    Convergence: off-diagonal Frobenius norm below offdiag_tol relative to
    the matrix scale.
    """
    A = M.copy()
    n = A.shape[0]
    V = np.eye(n, dtype=complex)
    scale = max(1.0, float(np.max(np.abs(A))))
    for _ in range(max_sweeps):
        off = math.sqrt(float(np.sum(np.abs(A - np.diag(np.diag(A))) ** 2)))
        if off < offdiag_tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) < 1e-300:
                    continue
                phase = apq / abs(apq)
                theta = (A[p, p].real - A[q, q].real) / (2.0 * abs(apq))
                if theta >= 0.0:
                    t = -1.0 / (theta + math.hypot(theta, 1.0))
                else:
                    t = 1.0 / (-theta + math.hypot(theta, 1.0))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # column update: A <- A G with G the (p, q) plane rotation
                ap = A[:, p].copy()
                aq = A[:, q].copy()
                A[:, p] = c * ap - s * phase.conjugate() * aq
                A[:, q] = s * phase * ap + c * aq
                # row update: A <- G^dagger A
                rp = A[p, :].copy()
                rq = A[q, :].copy()
                A[p, :] = c * rp - s * phase * rq
                A[q, :] = s * phase.conjugate() * rp + c * rq
                # accumulate eigenvectors: V <- V G
                vp = V[:, p].copy()
                vq = V[:, q].copy()
                V[:, p] = c * vp - s * phase.conjugate() * vq
                V[:, q] = s * phase * vp + c * vq
    values = np.real(np.diag(A)).copy()
    return values, V


def eig_hermitian(M, order: str = "ascending") -> Spectrum:
    """Eigendecomposition of a Hermitian matrix with a fixed ordering.

    Uses a closed form for d = 2 and cyclic Jacobi rotations for
    3 <= d <= 8.  Deterministic for a fixed input; degenerate values keep
    the stable order of the raw output.
    """
    if order not in ("ascending", "descending"):
        raise ValueError(f"unknown order {order!r}")
    A = check_hermitian(M)
    d = A.shape[0]
    if d > MAX_DIM:
        raise ValueError(f"dimension {d} exceeds the supported maximum {MAX_DIM}")
    if d == 2:
        values, vectors = _eig2(A)
    else:
        values, vectors = _jacobi(A)
    if order == "ascending":
        idx = np.argsort(values, kind="stable")
    else:
        idx = np.argsort(-values, kind="stable")
    return Spectrum(values=values[idx], vectors=vectors[:, idx], order=order)


def bloch_to_density(r) -> np.ndarray:
    """Qubit state (1 + r.sigma)/2 from a Bloch vector."""
    r = np.asarray(r, dtype=float)
    if r.shape != (3,):
        raise ValueError("Bloch vector must have three real components")
    norm = float(np.linalg.norm(r))
    if norm > 1.0 + 1e-10:
        raise ValueError(f"Bloch vector norm {norm} exceeds 1")
    rho = 0.5 * (np.eye(2, dtype=complex)
                 + r[0] * SIGMA_X + r[1] * SIGMA_Y + r[2] * SIGMA_Z)
    return rho


def density_to_bloch(rho) -> np.ndarray:
    """Bloch vector r_k = tr[rho sigma_k] of a qubit state."""
    A = as_operator(rho)
    if A.shape != (2, 2):
        raise ValueError("Bloch conversion requires a 2x2 density operator")
    return np.array([float(np.trace(A @ P).real) for P in PAULI])


def field_to_hamiltonian(h) -> np.ndarray:
    """Qubit Hamiltonian H = -h.sigma from a local field vector."""
    h = np.asarray(h, dtype=float)
    if h.shape != (3,):
        raise ValueError("field vector must have three real components")
    return -(h[0] * SIGMA_X + h[1] * SIGMA_Y + h[2] * SIGMA_Z)


def spherical_to_bloch(r0: float, theta0: float, phi0: float) -> np.ndarray:
    return np.array([
        r0 * math.sin(theta0) * math.cos(phi0),
        r0 * math.sin(theta0) * math.sin(phi0),
        r0 * math.cos(theta0),
    ])


def gibbs_state(H, beta: float) -> np.ndarray:
    """Canonical Gibbs state exp(-beta H)/Z."""
    spec = eig_hermitian(H)
    w = np.exp(-beta * (spec.values - spec.values.min()))
    w /= w.sum()
    return (spec.vectors * w) @ spec.vectors.conj().T


def _clipped_log(p: np.ndarray) -> np.ndarray:
    return np.log(np.clip(p, LOG_CLIP, None))


def von_neumann_entropy(rho) -> float:
    """S = -sum_n p_n ln p_n (k_B = 1), with 0 ln 0 = 0."""
    vals = eig_hermitian(rho).values
    p = np.clip(vals, 0.0, None)
    nz = p[p > 0.0]
    return float(-np.sum(nz * np.log(nz)))


def relative_entropy(rho, sigma) -> float:
    """S(rho||sigma) = tr[rho (ln rho - ln sigma)] (k_B = 1).

    Returns math.inf when rho has support outside the support of sigma.
    """
    sr = eig_hermitian(rho)
    ss = eig_hermitian(sigma)
    if sr.dim != ss.dim:
        raise ValueError("dimension mismatch in relative entropy")
    r = np.clip(sr.values, 0.0, None)
    s = np.clip(ss.values, 0.0, None)
    overlap = np.abs(sr.vectors.conj().T @ ss.vectors) ** 2  # overlap[i, j]
    weight_on_kernel = r @ overlap[:, s < SUPPORT_TOL]
    if weight_on_kernel.size and float(np.sum(weight_on_kernel)) > 1e-10:
        return math.inf
    nz = r > 0.0
    term_rho = float(np.sum(r[nz] * np.log(r[nz])))
    term_sigma = float(r @ (overlap @ _clipped_log(s)))
    return term_rho - term_sigma


def covariance(X, Y) -> float:
    """Cov(X, Y) = tr[XY]/d - tr[X] tr[Y]/d^2 for Hermitian X, Y."""
    A = check_hermitian(X, name="X")
    B = check_hermitian(Y, name="Y")
    if A.shape != B.shape:
        raise ValueError("dimension mismatch in covariance")
    d = A.shape[0]
    return float((np.trace(A @ B) / d
                  - np.trace(A) * np.trace(B) / d ** 2).real)
