"""Solver for the real vector space of twin observable pairs.

A pair of subsystem observables (A_plus, A_minus) is a twin pair for a
state rho when (A_plus ⊗ 1 - 1 ⊗ A_minus) rho = 0.  The solver turns
this into a real-linear kernel problem over coordinates in a
Hilbert-Schmidt-orthonormal Hermitian operator basis of both sides.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import linops
from .errors import DimensionMismatchError
from .linops import max_norm
from .states import BipartiteState, from_pure


@dataclass(frozen=True)
class ObservablePair:
    """A candidate or solved twin pair of Hermitian subsystem operators."""

    a_plus: np.ndarray
    a_minus: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "a_plus", linops.hermitize(self.a_plus))
        object.__setattr__(self, "a_minus", linops.hermitize(self.a_minus))

    @property
    def d_plus(self) -> int:
        return self.a_plus.shape[0]

    @property
    def d_minus(self) -> int:
        return self.a_minus.shape[0]

    def difference_operator(self) -> np.ndarray:
        """A_plus ⊗ 1 - 1 ⊗ A_minus on the composite space."""
        return linops.kron(self.a_plus, np.eye(self.d_minus)) - linops.kron(
            np.eye(self.d_plus), self.a_minus
        )

    def scaled(self, alpha: float) -> "ObservablePair":
        return ObservablePair(alpha * self.a_plus, alpha * self.a_minus)

    def coords(self) -> np.ndarray:
        return linops.pair_to_coords(self.a_plus, self.a_minus)


def scalar_pair(d_plus: int, d_minus: int) -> ObservablePair:
    return ObservablePair(np.eye(d_plus, dtype=complex), np.eye(d_minus, dtype=complex))


@dataclass(frozen=True)
class TwinSpace:
    """Orthonormal basis (sum of HS inner products on the two sides) of
    all twin pairs of a state, with dimension bookkeeping.

    dim_total = dim_detectable + n_plus^2 + n_minus^2 where n_s is the
    null-space dimension of rho_s: observables supported on a subsystem
    null space are twins regardless of the other side.
    """

    basis: tuple
    dim_total: int
    dim_detectable: int
    dim_undetectable_plus: int
    dim_undetectable_minus: int

    def coordinate_matrix(self) -> np.ndarray:
        """Columns are hermitian_basis coordinates of the basis pairs."""
        return np.column_stack([p.coords() for p in self.basis])


def is_twin_pair(state: BipartiteState, pair: ObservablePair):
    """Residual test of the twin relation A_plus rho = A_minus rho.

    Returns (verdict, residual) with residual the max-norm of
    (A_plus ⊗ 1 - 1 ⊗ A_minus) rho.
    """
    if pair.d_plus != state.d_plus or pair.d_minus != state.d_minus:
        raise DimensionMismatchError(
            f"pair dims ({pair.d_plus},{pair.d_minus}) do not match state "
            f"({state.d_plus},{state.d_minus})"
        )
    residual = max_norm(pair.difference_operator() @ state.rho)
    return residual <= state.tol.residual_tol, residual


def _constraint_matrix(state: BipartiteState, columns: np.ndarray) -> np.ndarray:
    """Real matrix of the map (x_plus, x_minus) -> (A_plus ⊗ 1 - 1 ⊗ A_minus) C
    stacked as real and imaginary parts, over hermitian_basis coordinates."""
    dp, dm = state.d_plus, state.d_minus
    Ip, Im = np.eye(dp), np.eye(dm)
    cols = []
    for G in linops.hermitian_basis(dp):
        img = linops.kron(G, Im) @ columns
        cols.append(np.concatenate([img.real.ravel(), img.imag.ravel()]))
    for G in linops.hermitian_basis(dm):
        img = -linops.kron(Ip, G) @ columns
        cols.append(np.concatenate([img.real.ravel(), img.imag.ravel()]))
    return np.column_stack(cols)


def solve_twin_space(state: BipartiteState) -> TwinSpace:
    """Compute an orthonormal basis of all Hermitian twin pairs of rho.

    The twin constraint is imposed on a column basis of range(rho) only,
    which is equivalent to imposing it on rho itself and keeps the
    linear system small.
    """
    C = state.range_basis()
    M = _constraint_matrix(state, C)
    K = linops.kernel_basis(M, tol=1e-10).real
    pairs = []
    for k in range(K.shape[1]):
        ap, am = linops.coords_to_pair(K[:, k], state.d_plus, state.d_minus)
        pairs.append(ObservablePair(ap, am))

    sub = state.reduce()
    n_plus = state.d_plus - linops.range_basis(sub.rho_plus, state.tol.rank_tol).shape[1]
    n_minus = state.d_minus - linops.range_basis(sub.rho_minus, state.tol.rank_tol).shape[1]

    dim_detectable = _detectable_rank(state, pairs)
    return TwinSpace(
        basis=tuple(pairs),
        dim_total=len(pairs),
        dim_detectable=dim_detectable,
        dim_undetectable_plus=n_plus**2,
        dim_undetectable_minus=n_minus**2,
    )


def _detectable_rank(state: BipartiteState, pairs) -> int:
    """Rank of the twin basis projected onto the detectable blocks
    (conjugation by the subsystem range bases)."""
    if not pairs:
        return 0
    sub = state.reduce()
    Bp = linops.range_basis(sub.rho_plus, state.tol.rank_tol)
    Bm = linops.range_basis(sub.rho_minus, state.tol.rank_tol)
    rows = []
    for p in pairs:
        app = Bp.conj().T @ p.a_plus @ Bp
        amm = Bm.conj().T @ p.a_minus @ Bm
        rows.append(
            np.concatenate([app.real.ravel(), app.imag.ravel(),
                            amm.real.ravel(), amm.imag.ravel()])
        )
    A = np.vstack(rows)
    s = np.linalg.svd(A, compute_uv=False)
    return int(np.sum(s > 1e-8 * max(s[0], 1.0)))


def subspace_distance(coords_a: np.ndarray, coords_b: np.ndarray) -> float:
    """Largest principal-angle sine between two coordinate subspaces
    (columns spanning each)."""
    if coords_a.shape[1] != coords_b.shape[1]:
        return 1.0
    if coords_a.shape[1] == 0:
        return 0.0
    angles = scipy.linalg.subspace_angles(coords_a, coords_b)
    return float(np.max(np.sin(angles))) if angles.size else 0.0


def additive_twins(state: BipartiteState, b_plus, b_minus):
    """Twin pair from an additive observable B = B_plus ⊗ 1 + 1 ⊗ B_minus
    that has a sharp value b in rho: (B_plus - b/2, -B_minus + b/2).

    Returns None when B has no sharp value.
    """
    from .measurement import certainty_test

    b_plus = linops.hermitize(b_plus, state.tol.herm_tol)
    b_minus = linops.hermitize(b_minus, state.tol.herm_tol)
    B = linops.kron(b_plus, np.eye(state.d_minus)) + linops.kron(
        np.eye(state.d_plus), b_minus
    )
    b = certainty_test(state, B)
    if b is None:
        return None
    pair = ObservablePair(
        b_plus - (b / 2) * np.eye(state.d_plus),
        -b_minus + (b / 2) * np.eye(state.d_minus),
    )
    ok, residual = is_twin_pair(state, pair)
    if not ok:  # pragma: no cover - guaranteed by the sharp-value relation
        raise AssertionError(f"additive construction failed twin check, residual {residual}")
    return pair


@dataclass(frozen=True)
class ConsequenceReport:
    """Checks that twins are range-determined: every twin of rho is a
    twin of every pure state in the range (C1), and a second state with
    the same range has the same twin space (C3)."""

    c1_max_residual: float
    c3_subspace_distance: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return (
            self.c1_max_residual <= self.tolerance
            and self.c3_subspace_distance <= self.tolerance
        )


def twins_restrict_to_range_vectors(
    state: BipartiteState, twin_space: TwinSpace, seed: int = 0
) -> ConsequenceReport:
    vals, vecs = linops.eigh(state.rho)
    cut = state.tol.rank_tol * max(vals[-1], 0.0)
    eigvecs = [vecs[:, i] for i in range(len(vals)) if vals[i] > cut]

    c1 = 0.0
    for v in eigvecs:
        pure = from_pure(v, state.d_plus, state.d_minus, state.tol)
        for pair in twin_space.basis:
            _, residual = is_twin_pair(pure, pair)
            c1 = max(c1, residual)

    # Second state on the same range: fresh random positive weights.
    rng = np.random.default_rng(seed)
    w = rng.uniform(0.2, 1.0, size=len(eigvecs))
    w /= w.sum()
    rho2 = sum(wi * np.outer(v, v.conj()) for wi, v in zip(w, eigvecs))
    state2 = BipartiteState(state.d_plus, state.d_minus, rho2, state.tol)
    space2 = solve_twin_space(state2)
    c3 = subspace_distance(twin_space.coordinate_matrix(), space2.coordinate_matrix())
    return ConsequenceReport(
        c1_max_residual=c1,
        c3_subspace_distance=c3,
        tolerance=state.tol.residual_tol,
    )


def states_admitting_twins(pair: ObservablePair, candidate_state: BipartiteState) -> bool:
    """True iff range(rho) lies in the kernel of A_plus ⊗ 1 - 1 ⊗ A_minus,
    which is equivalent to the twin property (C4)."""
    D = pair.difference_operator()
    R, _ = linops.range_null_projectors(candidate_state.rho, candidate_state.tol.rank_tol)
    if max_norm(D @ R) > candidate_state.tol.residual_tol:
        return False
    # Every positive-weight eigencomponent must lie in the kernel too.
    vals, vecs = linops.eigh(candidate_state.rho)
    cut = candidate_state.tol.rank_tol * max(vals[-1], 0.0)
    for i in range(len(vals)):
        if vals[i] > cut and np.linalg.norm(D @ vecs[:, i]) > candidate_state.tol.residual_tol:
            return False
    return True
