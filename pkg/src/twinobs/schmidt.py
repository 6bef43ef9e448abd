"""Canonical forms built from complete twins.

A complete twin pair forces the density matrix, written in the matched
characteristic product basis, to vanish outside the doubly-diagonal
entries <a,a|rho|b,b>.  For pure states this reduces to the Schmidt
biorthogonal expansion; for decompositions of a mixed state it yields
simultaneous generalized Schmidt expansions with complex coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linops
from .errors import NotPureError, OffDiagonalLeakError, SparsityViolationError
from .linops import max_norm
from .spectral import MatchedBases, matched_bases_from_pair
from .states import BipartiteState, PureDecomposition
from .twins import ObservablePair


@dataclass(frozen=True)
class SparsityReport:
    max_forbidden: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_forbidden <= self.tolerance


def _product_vector(mb: MatchedBases, a: int, b: int) -> np.ndarray:
    return np.kron(mb.basis_plus[:, a], mb.basis_minus[:, b])


def simplified_matrix(state: BipartiteState, mb: MatchedBases):
    """Compress rho to the matrix M[a,b] = <a,a|rho|b,b> over the matched
    bases of a complete twin pair.

    Raises SparsityViolation when a forbidden element <a,c|rho|b,d> with
    a != c or b != d exceeds residual_tol, which signals that the input
    bases do not come from complete twins of this state.
    """
    r = len(mb.sigma_prime)
    vecs = [[_product_vector(mb, a, b) for b in range(r)] for a in range(r)]
    max_forbidden = 0.0
    M = np.zeros((r, r), dtype=complex)
    for a in range(r):
        for c in range(r):
            lhs = vecs[a][c].conj() @ state.rho
            for b in range(r):
                for d in range(r):
                    val = lhs @ vecs[b][d]
                    if a == c and b == d:
                        M[a, b] = val
                    else:
                        max_forbidden = max(max_forbidden, abs(val))
    if max_forbidden > state.tol.residual_tol:
        raise SparsityViolationError(
            f"forbidden matrix element {max_forbidden:.3e} exceeds "
            f"{state.tol.residual_tol:.3e}"
        )
    return M, SparsityReport(max_forbidden=max_forbidden, tolerance=state.tol.residual_tol)


def _pure_vector(state: BipartiteState) -> np.ndarray:
    vals, vecs = linops.eigh(state.rho)
    if vals[-1] < 1.0 - 1e-8 or (len(vals) > 1 and vals[-2] > 1e-8):
        raise NotPureError(f"state is not pure: top eigenvalues {vals[-2:]}")
    return vecs[:, -1]


def _pinv_sqrt(H: np.ndarray, rank_tol: float) -> np.ndarray:
    """Inverse square root on the range of a PSD operator, zero on its
    null space."""
    vals, vecs = linops.eigh(H)
    cut = rank_tol * max(vals[-1], 0.0)
    out = np.zeros_like(np.asarray(H, dtype=complex))
    for i in range(len(vals)):
        if vals[i] > cut:
            v = vecs[:, i]
            out += vals[i] ** -0.5 * np.outer(v, v.conj())
    return out


def partial_inner(u_plus: np.ndarray, phi: np.ndarray, d_plus: int, d_minus: int) -> np.ndarray:
    """Partial scalar product <u|_+ |phi>: the minus-side vector with
    components sum_i conj(u_plus[i]) phi[i*d_minus + j]."""
    return phi.reshape(d_plus, d_minus).T @ u_plus.conj()


def pure_schmidt(state: BipartiteState, complete_pair: ObservablePair):
    """Schmidt canonical form of a pure state from a complete twin pair.

    The minus-side basis is recomputed through the phase rule
    |a>_- = normalize(rho_-^{-1/2} <a|_+ |phi>), making every expansion
    coefficient real nonnegative.  Returns (coefficients, basis_plus,
    basis_minus) with phi = sum_a coeff_a |a>_+ |a>_-.
    """
    phi = _pure_vector(state)
    mb = matched_bases_from_pair(complete_pair, state)
    rho_minus = state.reduce().rho_minus
    inv_sqrt = _pinv_sqrt(rho_minus, state.tol.rank_tol)
    r = len(mb.sigma_prime)
    basis_minus = np.zeros_like(mb.basis_minus)
    coeffs = np.zeros(r)
    for a in range(r):
        w = inv_sqrt @ partial_inner(mb.basis_plus[:, a], phi, state.d_plus, state.d_minus)
        n = np.linalg.norm(w)
        if n < 1e-12:  # pragma: no cover - excluded by completeness on the range
            raise NotPureError("matched basis vector has no overlap with the state")
        basis_minus[:, a] = w / n
        c = np.kron(mb.basis_plus[:, a], basis_minus[:, a]).conj() @ phi
        coeffs[a] = max(float(c.real), 0.0)
    recon = sum(
        coeffs[a] * np.kron(mb.basis_plus[:, a], basis_minus[:, a]) for a in range(r)
    )
    if np.linalg.norm(recon - phi) > 1e-9:
        raise SparsityViolationError(
            "Schmidt reconstruction failed: pair is not complete for this state"
        )
    return coeffs, mb.basis_plus, basis_minus


@dataclass(frozen=True)
class GeneralizedSchmidtExpansion:
    """Per-component complex coefficients over the matched diagonal
    product basis |a>|a>, plus the induced subsystem eigenvalues."""

    alphas: np.ndarray        # n_components x r
    subsystem_eigenvalues: np.ndarray  # |alpha|^2, same shape


def simultaneous_expansion(dec: PureDecomposition, mb: MatchedBases,
                           state: BipartiteState) -> GeneralizedSchmidtExpansion:
    """Expand every component of a decomposition over the diagonal
    matched product vectors |a>|a>.

    Raises OffDiagonalLeak when a component has weight outside the
    diagonal span, which contradicts the common-twins property of the
    admixed states."""
    r = len(mb.sigma_prime)
    diag = np.column_stack([_product_vector(mb, a, a) for a in range(r)])
    alphas = np.zeros((len(dec.vectors), r), dtype=complex)
    for i, phi in enumerate(dec.vectors):
        alpha = diag.conj().T @ phi
        leak = np.linalg.norm(phi - diag @ alpha)
        if leak > state.tol.residual_tol:
            raise OffDiagonalLeakError(
                f"component {i} leaks {leak:.3e} outside the diagonal span"
            )
        alphas[i] = alpha
    return GeneralizedSchmidtExpansion(
        alphas=alphas, subsystem_eigenvalues=np.abs(alphas) ** 2
    )


def compatibility_report(dec: PureDecomposition, mb: MatchedBases,
                         state: BipartiteState) -> dict:
    """Commutator residuals among {A_s, rho_s^(i), rho_s} per side.

    A_s is reconstructed as sum_a sigma'_a |a>_s <a|_s; all operators are
    simultaneously diagonal in the matched basis for a valid input."""
    dp, dm = state.d_plus, state.d_minus
    A = {
        "+": mb.basis_plus @ np.diag(mb.sigma_prime) @ mb.basis_plus.conj().T,
        "-": mb.basis_minus @ np.diag(mb.sigma_prime) @ mb.basis_minus.conj().T,
    }
    comps = {"+": [], "-": []}
    for phi in dec.vectors:
        rho_i = np.outer(phi, phi.conj())
        comps["+"].append(linops.partial_trace(rho_i, dp, dm, "-"))
        comps["-"].append(linops.partial_trace(rho_i, dp, dm, "+"))
    sub = state.reduce()
    totals = {"+": sub.rho_plus, "-": sub.rho_minus}

    def comm(X, Y):
        return max_norm(X @ Y - Y @ X)

    report = {}
    for s in ("+", "-"):
        ops = [("A", A[s])] + [
            (f"rho^({i})", r) for i, r in enumerate(comps[s])
        ] + [("rho", totals[s])]
        for i in range(len(ops)):
            for j in range(i + 1, len(ops)):
                report[f"[{ops[i][0]}, {ops[j][0]}]_{s}"] = comm(ops[i][1], ops[j][1])
    return report
