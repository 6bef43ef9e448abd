"""Spectral theory of twin pairs.

Covers the detectable/undetectable block decomposition of a twin pair,
equality of the detectable spectra, characteristic-projector twins,
closure under operator functions and symmetric polynomials, and the
search for complete twins (nondegenerate detectable spectra).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import linops
from .errors import (
    DegenerateSpectrumCollisionError,
    NotReducibleError,
    NotSymmetricError,
    SpectraMismatchError,
)
from .linops import max_norm
from .states import BipartiteState, restrict_to_relevant
from .twins import ObservablePair, TwinSpace, is_twin_pair


@dataclass(frozen=True)
class SpectralData:
    """Clustered eigenvalues of a Hermitian operator with multiplicities
    and characteristic projectors."""

    values: np.ndarray
    multiplicities: np.ndarray
    projectors: tuple

    def projector_at(self, a: float, cluster_tol: float) -> np.ndarray:
        for v, P in zip(self.values, self.projectors):
            if abs(v - a) <= cluster_tol:
                return P
        raise KeyError(f"{a} is not a characteristic value")


def spectral_data(H, cluster_tol: float = linops.DEFAULT_TOL.cluster_tol) -> SpectralData:
    """Eigendecompose H and group eigenvalues that lie within cluster_tol
    of each other into one characteristic value (cluster mean)."""
    vals, vecs = linops.eigh(H)
    clusters = []
    start = 0
    for i in range(1, len(vals) + 1):
        if i == len(vals) or vals[i] - vals[i - 1] > cluster_tol:
            clusters.append((start, i))
            start = i
    values, mults, projs = [], [], []
    for lo, hi in clusters:
        V = vecs[:, lo:hi]
        values.append(float(np.mean(vals[lo:hi])))
        mults.append(hi - lo)
        projs.append(V @ V.conj().T)
    return SpectralData(
        values=np.array(values),
        multiplicities=np.array(mults, dtype=int),
        projectors=tuple(projs),
    )


def commutation_check(pair: ObservablePair, state: BipartiteState) -> dict:
    """Max-norm residuals of [A_s, rho_s] and [A_s, R_s]; all vanish for
    a genuine twin pair (necessary, not sufficient)."""
    sub = state.reduce()
    Rp, _ = linops.range_null_projectors(sub.rho_plus, state.tol.rank_tol)
    Rm, _ = linops.range_null_projectors(sub.rho_minus, state.tol.rank_tol)

    def comm(A, B):
        return max_norm(A @ B - B @ A)

    return {
        "a_plus_rho_plus": comm(pair.a_plus, sub.rho_plus),
        "a_minus_rho_minus": comm(pair.a_minus, sub.rho_minus),
        "a_plus_R_plus": comm(pair.a_plus, Rp),
        "a_minus_R_minus": comm(pair.a_minus, Rm),
    }


@dataclass(frozen=True)
class DetectableSplit:
    """Blocks of a twin pair with respect to the range/null decomposition
    of the subsystem states: primed blocks act on the ranges, double
    primed blocks on the null spaces."""

    a_prime_plus: np.ndarray
    a_prime_minus: np.ndarray
    a_dprime_plus: np.ndarray
    a_dprime_minus: np.ndarray
    range_basis_plus: np.ndarray
    range_basis_minus: np.ndarray
    null_basis_plus: np.ndarray
    null_basis_minus: np.ndarray

    def reassemble(self):
        """Embed the blocks back: must reproduce the original pair."""
        a_plus = (
            self.range_basis_plus @ self.a_prime_plus @ self.range_basis_plus.conj().T
            + self.null_basis_plus @ self.a_dprime_plus @ self.null_basis_plus.conj().T
        )
        a_minus = (
            self.range_basis_minus @ self.a_prime_minus @ self.range_basis_minus.conj().T
            + self.null_basis_minus @ self.a_dprime_minus @ self.null_basis_minus.conj().T
        )
        return a_plus, a_minus

    def detectable_lifted(self) -> ObservablePair:
        """The pair A'_s ⊕ 0''_s on the full subsystem spaces."""
        ap = self.range_basis_plus @ self.a_prime_plus @ self.range_basis_plus.conj().T
        am = self.range_basis_minus @ self.a_prime_minus @ self.range_basis_minus.conj().T
        return ObservablePair(ap, am)

    def undetectable_lifted(self) -> ObservablePair:
        """The pair 0'_s ⊕ A''_s on the full subsystem spaces."""
        ap = self.null_basis_plus @ self.a_dprime_plus @ self.null_basis_plus.conj().T
        am = self.null_basis_minus @ self.a_dprime_minus @ self.null_basis_minus.conj().T
        return ObservablePair(ap, am)


def split_detectable(pair: ObservablePair, state: BipartiteState) -> DetectableSplit:
    """Block decomposition A_s = A'_s ⊕ A''_s over range(rho_s) ⊕ null(rho_s).

    Raises NotReducible when the off-block norms exceed residual_tol,
    i.e. when [A_s, R_s] != 0.
    """
    sub = state.reduce()
    Bp = linops.range_basis(sub.rho_plus, state.tol.rank_tol)
    Bm = linops.range_basis(sub.rho_minus, state.tol.rank_tol)
    Np = linops.null_basis(sub.rho_plus, state.tol.rank_tol)
    Nm = linops.null_basis(sub.rho_minus, state.tol.rank_tol)
    off_p = max_norm(Np.conj().T @ pair.a_plus @ Bp) if Np.size and Bp.size else 0.0
    off_m = max_norm(Nm.conj().T @ pair.a_minus @ Bm) if Nm.size and Bm.size else 0.0
    if max(off_p, off_m) > state.tol.residual_tol:
        raise NotReducibleError(
            f"pair does not reduce over range/null split: off-block norms "
            f"({off_p:.3e}, {off_m:.3e})"
        )
    return DetectableSplit(
        a_prime_plus=Bp.conj().T @ pair.a_plus @ Bp,
        a_prime_minus=Bm.conj().T @ pair.a_minus @ Bm,
        a_dprime_plus=Np.conj().T @ pair.a_plus @ Np,
        a_dprime_minus=Nm.conj().T @ pair.a_minus @ Nm,
        range_basis_plus=Bp,
        range_basis_minus=Bm,
        null_basis_plus=Np,
        null_basis_minus=Nm,
    )


def detectable_spectra(split: DetectableSplit,
                       cluster_tol: float = linops.DEFAULT_TOL.cluster_tol):
    """Common characteristic values of the detectable parts.

    Returns (sigma_prime, multiplicities_plus, multiplicities_minus);
    the value lists must agree (twins have equal detectable spectra)
    while the multiplicities may differ.
    """
    sp = spectral_data(split.a_prime_plus, cluster_tol)
    sm = spectral_data(split.a_prime_minus, cluster_tol)
    if len(sp.values) != len(sm.values) or (
        len(sp.values) and np.max(np.abs(sp.values - sm.values)) > 10 * cluster_tol
    ):
        raise SpectraMismatchError(
            f"detectable spectra differ: {sp.values} vs {sm.values} "
            "(the input pair is not a twin pair)"
        )
    sigma = (sp.values + sm.values) / 2
    return sigma, sp.multiplicities, sm.multiplicities


def characteristic_projector_twins(split: DetectableSplit, state: BipartiteState):
    """Characteristic projectors of the detectable parts via the Lagrange
    product over the common spectrum; each projector pair is itself a
    twin pair for rho'.

    Returns a list of (value, P'_plus, P'_minus, twin_residual).
    """
    sigma, _, _ = detectable_spectra(split, state.tol.cluster_tol)
    for i in range(len(sigma)):
        for j in range(i + 1, len(sigma)):
            if abs(sigma[i] - sigma[j]) <= state.tol.cluster_tol:
                raise DegenerateSpectrumCollisionError(
                    f"characteristic values {sigma[i]} and {sigma[j]} collide"
                )
    restriction = restrict_to_relevant(state)
    rho_prime = restriction.rho_prime
    rp = split.a_prime_plus.shape[0]
    rm = split.a_prime_minus.shape[0]
    out = []
    for a in sigma:
        Pp = np.eye(rp, dtype=complex)
        Pm = np.eye(rm, dtype=complex)
        for b in sigma:
            if b == a:
                continue
            Pp = Pp @ (split.a_prime_plus - b * np.eye(rp)) / (a - b)
            Pm = Pm @ (split.a_prime_minus - b * np.eye(rm)) / (a - b)
        diff = linops.kron(Pp, np.eye(rm)) - linops.kron(np.eye(rp), Pm)
        residual = max_norm(diff @ rho_prime)
        out.append((float(a), Pp, Pm, residual))
    return out


def apply_function(pair: ObservablePair, f,
                   cluster_tol: float = linops.DEFAULT_TOL.cluster_tol) -> ObservablePair:
    """Spectral calculus F(A_s) = sum_a f(a) P_s(a) on both sides.

    f is evaluated on the clustered characteristic values of each full
    subsystem operator; twins map to twins under any such function.
    """
    def apply_side(A):
        data = spectral_data(A, cluster_tol)
        out = np.zeros_like(np.asarray(A, dtype=complex))
        for a, P in zip(data.values, data.projectors):
            out += float(f(a)) * P
        return out

    return ObservablePair(apply_side(pair.a_plus), apply_side(pair.a_minus))


def symmetric_polynomial(pairs, poly: dict, state: BipartiteState) -> ObservablePair:
    """Evaluate a symmetric real polynomial on a list of twin pairs,
    symmetrizing each monomial over all operator orderings.

    poly maps exponent tuples (one exponent per pair) to real
    coefficients, e.g. {(1, 1): 1.0} for x*y.  Raises NotSymmetric when
    the coefficients are not invariant under permuting the variables.
    """
    k = len(pairs)
    if any(len(e) != k for e in poly):
        raise ValueError("each exponent tuple must have one entry per pair")
    canon = {tuple(e): c for e, c in poly.items()}
    for e, c in canon.items():
        for perm in itertools.permutations(range(k)):
            pe = tuple(e[p] for p in perm)
            if not math.isclose(canon.get(pe, 0.0), c, abs_tol=1e-12):
                raise NotSymmetricError(
                    f"coefficient of {e} differs from its permutation {pe}"
                )

    def eval_side(ops, dim):
        total = np.zeros((dim, dim), dtype=complex)
        for e, c in canon.items():
            if c == 0.0:
                continue
            word = []
            for var, exp in enumerate(e):
                word.extend([var] * exp)
            if not word:
                total += c * np.eye(dim)
                continue
            orderings = set(itertools.permutations(word))
            acc = np.zeros((dim, dim), dtype=complex)
            for order in orderings:
                prod = np.eye(dim, dtype=complex)
                for var in order:
                    prod = prod @ ops[var]
                acc += prod
            total += c * acc / len(orderings)
        return total

    a_plus = eval_side([p.a_plus for p in pairs], state.d_plus)
    a_minus = eval_side([p.a_minus for p in pairs], state.d_minus)
    return ObservablePair(a_plus, a_minus)


@dataclass(frozen=True)
class MatchedBases:
    """Characteristic bases of a complete twin pair, index-aligned by
    characteristic value.  Vectors live on the full subsystem spaces and
    span the subsystem ranges."""

    sigma_prime: np.ndarray
    basis_plus: np.ndarray   # d_plus x r, column a belongs to sigma_prime[a]
    basis_minus: np.ndarray  # d_minus x r


def matched_bases_from_pair(pair: ObservablePair, state: BipartiteState) -> MatchedBases:
    """Matched characteristic bases of a complete twin pair, sorted by
    ascending characteristic value on both sides."""
    split = split_detectable(pair, state)
    sigma, mp, mm = detectable_spectra(split, state.tol.cluster_tol)
    if np.any(mp != 1) or np.any(mm != 1):
        raise DegenerateSpectrumCollisionError(
            "pair is not complete: detectable spectrum is degenerate"
        )
    vals_p, vecs_p = linops.eigh(split.a_prime_plus)
    vals_m, vecs_m = linops.eigh(split.a_prime_minus)
    return MatchedBases(
        sigma_prime=np.sort(sigma),
        basis_plus=split.range_basis_plus @ vecs_p,
        basis_minus=split.range_basis_minus @ vecs_m,
    )


def find_complete_twins(twin_space: TwinSpace, state: BipartiteState,
                        seed: int = 0, attempts: int = 64):
    """Search the detectable subspace of a solved twin space for a pair
    with nondegenerate detectable spectra on both sides.

    Deterministic seeded random combinations of the basis pairs; absence
    after the attempt budget is reported as None (not a nonexistence
    proof).  Returns (pair, MatchedBases) on success, the pair being the
    detectable part lifted with zero undetectable blocks.
    """
    sub = state.reduce()
    r_plus = linops.range_basis(sub.rho_plus, state.tol.rank_tol).shape[1]
    r_minus = linops.range_basis(sub.rho_minus, state.tol.rank_tol).shape[1]
    if r_plus != r_minus:
        return None

    rng = np.random.default_rng(seed)
    n = len(twin_space.basis)
    for _ in range(attempts):
        c = rng.standard_normal(n)
        ap = sum(ci * p.a_plus for ci, p in zip(c, twin_space.basis))
        am = sum(ci * p.a_minus for ci, p in zip(c, twin_space.basis))
        candidate = split_detectable(ObservablePair(ap, am), state).detectable_lifted()
        split = split_detectable(candidate, state)
        vals_p = np.linalg.eigvalsh(split.a_prime_plus)
        vals_m = np.linalg.eigvalsh(split.a_prime_minus)
        if len(vals_p) > 1 and np.min(np.diff(vals_p)) <= state.tol.cluster_tol:
            continue
        if len(vals_m) > 1 and np.min(np.diff(vals_m)) <= state.tol.cluster_tol:
            continue
        return candidate, matched_bases_from_pair(candidate, state)
    return None
