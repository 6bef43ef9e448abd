"""Bipartite density matrices, their reductions and range/null geometry."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linops
from .errors import NotNormalizedError, NotPositiveError, WeightError
from .linops import DEFAULT_TOL, Tolerances, max_norm


@dataclass(frozen=True)
class BipartiteState:
    """A density matrix rho on H_plus ⊗ H_minus.

    rho is symmetrized on ingestion; the trace must be 1 within 1e-6
    (it is renormalized to exactly 1) and the spectrum nonnegative
    within rank_tol.
    """

    d_plus: int
    d_minus: int
    rho: np.ndarray
    tol: Tolerances = field(default=DEFAULT_TOL)

    def __post_init__(self):
        dim = self.d_plus * self.d_minus
        rho = linops.hermitize(self.rho, self.tol.herm_tol)
        if rho.shape != (dim, dim):
            raise linops.DimensionMismatchError(
                f"rho shape {rho.shape} does not match dims {self.d_plus}x{self.d_minus}"
            )
        tr = float(np.real(np.trace(rho)))
        if abs(tr - 1.0) > 1e-6:
            raise NotNormalizedError(f"trace(rho) = {tr}, not 1 within 1e-6")
        # renormalize only a genuine deviation; a trace within rounding of 1
        # is left untouched so re-ingesting a state is bitwise stable
        if abs(tr - 1.0) > 1e-13:
            rho = rho / tr
        vals = np.linalg.eigvalsh(rho)
        if vals[0] < -self.tol.rank_tol * max(vals[-1], 1.0):
            raise NotPositiveError(f"rho has negative eigenvalue {vals[0]:.3e}")
        rho.flags.writeable = False
        object.__setattr__(self, "rho", rho)

    @property
    def dim(self) -> int:
        return self.d_plus * self.d_minus

    def reduce(self) -> "SubsystemPair":
        """Partial traces rho_plus = Tr_- rho and rho_minus = Tr_+ rho."""
        rp = linops.partial_trace(self.rho, self.d_plus, self.d_minus, "-")
        rm = linops.partial_trace(self.rho, self.d_plus, self.d_minus, "+")
        return SubsystemPair(rho_plus=rp, rho_minus=rm)

    def projectors(self) -> "SubspaceProjectors":
        """Range/null projectors of rho and of both reductions."""
        sub = self.reduce()
        R, N = linops.range_null_projectors(self.rho, self.tol.rank_tol)
        Rp, Np = linops.range_null_projectors(sub.rho_plus, self.tol.rank_tol)
        Rm, Nm = linops.range_null_projectors(sub.rho_minus, self.tol.rank_tol)
        return SubspaceProjectors(R=R, N=N, R_plus=Rp, N_plus=Np, R_minus=Rm, N_minus=Nm)

    def range_basis(self) -> np.ndarray:
        return linops.range_basis(self.rho, self.tol.rank_tol)


@dataclass(frozen=True)
class SubsystemPair:
    rho_plus: np.ndarray
    rho_minus: np.ndarray


@dataclass(frozen=True)
class SubspaceProjectors:
    R: np.ndarray
    N: np.ndarray
    R_plus: np.ndarray
    N_plus: np.ndarray
    R_minus: np.ndarray
    N_minus: np.ndarray


@dataclass(frozen=True)
class PureDecomposition:
    """A convex decomposition rho = sum_i w_i |phi_i><phi_i|."""

    weights: tuple
    vectors: tuple  # unit vectors on the composite space

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if len(self.weights) != len(self.vectors) or len(self.vectors) == 0:
            raise WeightError("weights and vectors must be nonempty and equal length")
        if np.any(w <= 0):
            raise WeightError("weights must be positive")
        if abs(w.sum() - 1.0) > 1e-10:
            raise WeightError(f"weights sum to {w.sum()}, not 1")
        vecs = []
        for v in self.vectors:
            v = np.asarray(v, dtype=complex).ravel()
            n = np.linalg.norm(v)
            if abs(n - 1.0) > 1e-10:
                raise NotNormalizedError(f"component norm {n}, not 1 within 1e-10")
            vecs.append(v)
        object.__setattr__(self, "weights", tuple(float(x) for x in w))
        object.__setattr__(self, "vectors", tuple(vecs))


def from_pure(phi, d_plus: int, d_minus: int, tol: Tolerances = DEFAULT_TOL) -> BipartiteState:
    """Rank-1 state |phi><phi| from a unit vector."""
    phi = np.asarray(phi, dtype=complex).ravel()
    if phi.size != d_plus * d_minus:
        raise linops.DimensionMismatchError(
            f"vector length {phi.size} does not match dims {d_plus}x{d_minus}"
        )
    n = np.linalg.norm(phi)
    if abs(n - 1.0) > 1e-10:
        raise NotNormalizedError(f"norm {n}, not 1 within 1e-10")
    rho = np.outer(phi, phi.conj())
    return BipartiteState(d_plus=d_plus, d_minus=d_minus, rho=rho, tol=tol)


def mix(dec: PureDecomposition, d_plus: int, d_minus: int,
        tol: Tolerances = DEFAULT_TOL) -> BipartiteState:
    """State built from a pure decomposition."""
    dim = d_plus * d_minus
    rho = np.zeros((dim, dim), dtype=complex)
    for w, v in zip(dec.weights, dec.vectors):
        if v.size != dim:
            raise linops.DimensionMismatchError("component vector has wrong length")
        rho += w * np.outer(v, v.conj())
    return BipartiteState(d_plus=d_plus, d_minus=d_minus, rho=rho, tol=tol)


@dataclass(frozen=True)
class GeometryReport:
    """Max-norm residuals of the range/null-space relations between the
    composite state and its reductions."""

    residuals: dict
    tolerance: float

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values())

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance


def verify_subspace_geometry(state: BipartiteState) -> GeometryReport:
    """Check R = R(R_plus ⊗ R_minus), R = (R_s ⊗ 1)R, N_s-inclusions and
    the annihilation of rho by null vectors of a reduction."""
    p = state.projectors()
    Ip = np.eye(state.d_plus)
    Im = np.eye(state.d_minus)
    RpRm = linops.kron(p.R_plus, p.R_minus)
    Rp1 = linops.kron(p.R_plus, Im)
    R1m = linops.kron(Ip, p.R_minus)
    Np1 = linops.kron(p.N_plus, Im)
    N1m = linops.kron(Ip, p.N_minus)
    residuals = {
        "R_eq_R_RpRm": max_norm(p.R - p.R @ RpRm),
        "R_eq_Rp1_R": max_norm(p.R - Rp1 @ p.R),
        "R_eq_1Rm_R": max_norm(p.R - R1m @ p.R),
        "Np1_N_eq_Np1": max_norm(Np1 @ p.N - Np1),
        "1Nm_N_eq_1Nm": max_norm(N1m @ p.N - N1m),
        "rho_annihilates_null_plus": max_norm(state.rho @ Np1),
    }
    return GeometryReport(residuals=residuals, tolerance=state.tol.residual_tol)


@dataclass(frozen=True)
class RelevantRestriction:
    """rho restricted to the product of the subsystem ranges, together
    with the embedding bases in both directions."""

    rho_prime: np.ndarray
    basis_plus: np.ndarray   # d_plus x r_plus, orthonormal columns
    basis_minus: np.ndarray  # d_minus x r_minus

    @property
    def composite_basis(self) -> np.ndarray:
        return linops.kron(self.basis_plus, self.basis_minus)

    def embed(self, X: np.ndarray) -> np.ndarray:
        """Operator on R_plus ⊗ R_minus -> operator on the full space."""
        B = self.composite_basis
        return B @ X @ B.conj().T

    def restrict(self, X: np.ndarray) -> np.ndarray:
        """Operator on the full space -> compression to R_plus ⊗ R_minus."""
        B = self.composite_basis
        return B.conj().T @ X @ B


def restrict_to_relevant(state: BipartiteState) -> RelevantRestriction:
    """Compress rho to R_plus ⊗ R_minus; lossless because the range of
    rho lies inside that product subspace."""
    sub = state.reduce()
    Bp = linops.range_basis(sub.rho_plus, state.tol.rank_tol)
    Bm = linops.range_basis(sub.rho_minus, state.tol.rank_tol)
    B = linops.kron(Bp, Bm)
    rho_prime = B.conj().T @ state.rho @ B
    return RelevantRestriction(rho_prime=rho_prime, basis_plus=Bp, basis_minus=Bm)
