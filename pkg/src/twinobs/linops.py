"""Dense complex linear algebra primitives.

All operators are plain complex numpy arrays.  The composite index
convention is i = i_plus * d_minus + i_minus throughout the package,
which matches ``numpy.kron(A_plus, A_minus)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    ConvergenceFailureError,
    DimensionMismatchError,
    NonHermitianError,
    NotPositiveError,
)


@dataclass(frozen=True)
class Tolerances:
    """Numerical policy knobs.

    rank_tol is relative to the largest eigenvalue when deciding
    range/null splits; the remaining tolerances are absolute.
    """

    rank_tol: float = 1e-10
    residual_tol: float = 1e-8
    cluster_tol: float = 1e-8
    herm_tol: float = 1e-8

    def __post_init__(self):
        for name in ("rank_tol", "residual_tol", "cluster_tol", "herm_tol"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")


DEFAULT_TOL = Tolerances()


def as_matrix(m) -> np.ndarray:
    """Coerce to a complex 2-d array and reject non-finite entries."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise DimensionMismatchError(f"expected a matrix, got ndim={a.ndim}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError("matrix contains NaN or Inf entries")
    return a


def max_norm(M) -> float:
    M = np.asarray(M)
    return 0.0 if M.size == 0 else float(np.max(np.abs(M)))


def hermitize(M, herm_tol: float = DEFAULT_TOL.herm_tol) -> np.ndarray:
    """Symmetrize (M + M†)/2, rejecting matrices that are not Hermitian
    within herm_tol to begin with."""
    M = as_matrix(M)
    if M.shape[0] != M.shape[1]:
        raise DimensionMismatchError(f"operator must be square, got {M.shape}")
    dev = max_norm(M - M.conj().T)
    if dev > herm_tol:
        raise NonHermitianError(f"Hermiticity deviation {dev:.3e} > {herm_tol:.3e}")
    return (M + M.conj().T) / 2


def _fix_phases(V: np.ndarray) -> np.ndarray:
    """Make the first nonzero component of each column real positive."""
    V = V.copy()
    for k in range(V.shape[1]):
        col = V[:, k]
        nz = np.flatnonzero(np.abs(col) > 1e-12)
        if nz.size:
            pivot = col[nz[0]]
            V[:, k] = col * (np.conj(pivot) / abs(pivot))
    return V


def eigh(H, herm_tol: float = DEFAULT_TOL.herm_tol):
    """Eigendecomposition of a Hermitian operator.

    Returns (eigenvalues ascending, eigenvector matrix) with a
    deterministic phase convention for the eigenvectors.
    """
    H = hermitize(H, herm_tol)
    try:
        vals, vecs = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise ConvergenceFailureError(str(exc)) from exc
    return vals, _fix_phases(vecs)


def kernel_basis(M, tol: float = DEFAULT_TOL.rank_tol) -> np.ndarray:
    """Orthonormal basis (columns) of the numerical null space of M.

    A singular value s is treated as zero when s <= tol * s_max.
    """
    M = as_matrix(M)
    if M.size == 0:
        return np.eye(M.shape[1], dtype=complex)
    _, s, vh = np.linalg.svd(M)
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > tol * smax)) if smax > 0 else 0
    return vh[rank:].conj().T


def kron(A, B) -> np.ndarray:
    """Tensor product with the composite index i = i_plus*d_minus + i_minus."""
    return np.kron(as_matrix(A), as_matrix(B))


def partial_trace(M, d_plus: int, d_minus: int, side: str) -> np.ndarray:
    """Trace out one tensor factor of an operator on H_plus ⊗ H_minus.

    side='-' returns the operator left on H_plus (trace over the minus
    factor); side='+' the operator left on H_minus.
    """
    M = as_matrix(M)
    dim = d_plus * d_minus
    if M.shape != (dim, dim):
        raise DimensionMismatchError(
            f"operator shape {M.shape} does not match {d_plus}x{d_minus} factors"
        )
    T = M.reshape(d_plus, d_minus, d_plus, d_minus)
    if side == "-":
        return np.trace(T, axis1=1, axis2=3)
    if side == "+":
        return np.trace(T, axis1=0, axis2=2)
    raise ValueError(f"side must be '+' or '-', got {side!r}")


def range_null_projectors(H, tol: float = DEFAULT_TOL.rank_tol):
    """Projectors (R, N) onto the range and null space of a PSD operator.

    Eigenvalues above tol * lambda_max count as the range.
    """
    vals, vecs = eigh(H)
    lam_max = max(vals[-1], 0.0) if vals.size else 0.0
    cut = tol * lam_max if lam_max > 0 else tol
    if vals.size and vals[0] < -max(cut, tol):
        raise NotPositiveError(f"eigenvalue {vals[0]:.3e} below -{cut:.3e}")
    pos = vals > cut
    V = vecs[:, pos]
    R = V @ V.conj().T
    N = np.eye(H.shape[0], dtype=complex) - R
    return R, N


def range_basis(H, tol: float = DEFAULT_TOL.rank_tol) -> np.ndarray:
    """Orthonormal columns spanning the range of a PSD operator,
    ordered by ascending eigenvalue."""
    vals, vecs = eigh(H)
    lam_max = max(vals[-1], 0.0) if vals.size else 0.0
    cut = tol * lam_max if lam_max > 0 else tol
    return vecs[:, vals > cut]


def null_basis(H, tol: float = DEFAULT_TOL.rank_tol) -> np.ndarray:
    vals, vecs = eigh(H)
    lam_max = max(vals[-1], 0.0) if vals.size else 0.0
    cut = tol * lam_max if lam_max > 0 else tol
    return vecs[:, vals <= cut]


def hermitian_basis(d: int) -> list[np.ndarray]:
    """Orthonormal basis of the real space of Hermitian d x d matrices
    under the Hilbert-Schmidt inner product.

    Ordering: diagonal units first, then for each i<j (row-major) the
    symmetric pair (E_ij + E_ji)/sqrt(2) followed by the antisymmetric
    pair (-i E_ij + i E_ji)/sqrt(2).
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    basis = []
    for i in range(d):
        E = np.zeros((d, d), dtype=complex)
        E[i, i] = 1.0
        basis.append(E)
    s = 1 / np.sqrt(2)
    for i in range(d):
        for j in range(i + 1, d):
            S = np.zeros((d, d), dtype=complex)
            S[i, j] = s
            S[j, i] = s
            basis.append(S)
            A = np.zeros((d, d), dtype=complex)
            A[i, j] = -1j * s
            A[j, i] = 1j * s
            basis.append(A)
    return basis


def pair_to_coords(a_plus: np.ndarray, a_minus: np.ndarray) -> np.ndarray:
    """Real coordinates of (A_plus, A_minus) over hermitian_basis(d_plus)
    followed by hermitian_basis(d_minus)."""
    coords = []
    for A in (a_plus, a_minus):
        for G in hermitian_basis(A.shape[0]):
            coords.append(np.real(np.trace(G.conj().T @ A)))
    return np.array(coords)


def coords_to_pair(x: np.ndarray, d_plus: int, d_minus: int):
    """Inverse of pair_to_coords."""
    x = np.asarray(x, dtype=float)
    np_, nm = d_plus**2, d_minus**2
    if x.shape != (np_ + nm,):
        raise DimensionMismatchError("coordinate vector has wrong length")
    bp = hermitian_basis(d_plus)
    bm = hermitian_basis(d_minus)
    a_plus = sum(c * G for c, G in zip(x[:np_], bp))
    a_minus = sum(c * G for c, G in zip(x[np_:], bm))
    return np.asarray(a_plus, dtype=complex), np.asarray(a_minus, dtype=complex)
