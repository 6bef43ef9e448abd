import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from twinobs import linops
from twinobs.errors import DimensionMismatchError, NonHermitianError, NotPositiveError

from conftest import random_hermitian

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)


class TestEigh:
    def test_identity(self):
        vals, vecs = linops.eigh(np.eye(2))
        np.testing.assert_allclose(vals, [1, 1])
        np.testing.assert_allclose(vecs, np.eye(2))

    def test_diagonal(self):
        vals, _ = linops.eigh(np.diag([-1.0, 3.0]))
        np.testing.assert_allclose(vals, [-1, 3])

    def test_pauli_x(self):
        # characteristic polynomial lambda^2 - 1
        vals, vecs = linops.eigh(PAULI_X)
        np.testing.assert_allclose(vals, [-1, 1], atol=1e-12)
        s = 1 / np.sqrt(2)
        np.testing.assert_allclose(np.abs(vecs), [[s, s], [s, s]], atol=1e-12)
        # phase convention: first nonzero component real positive
        assert vecs[0, 0].real > 0 and vecs[0, 1].real > 0

    def test_rejects_non_hermitian(self):
        with pytest.raises(NonHermitianError):
            linops.eigh(np.array([[0, 1], [0, 0]], dtype=complex))

    @given(st.integers(0, 10**6), st.integers(2, 9))
    @settings(max_examples=40, deadline=None)
    def test_round_trip(self, seed, d):
        H = random_hermitian(np.random.default_rng(seed), d)
        vals, vecs = linops.eigh(H)
        recon = vecs @ np.diag(vals) @ vecs.conj().T
        assert linops.max_norm(recon - H) <= 1e-10 * d * max(1.0, linops.max_norm(H))
        assert linops.max_norm(vecs.conj().T @ vecs - np.eye(d)) <= 1e-10


class TestKernelBasis:
    def test_zero_matrix(self):
        K = linops.kernel_basis(np.zeros((2, 2)))
        assert K.shape == (2, 2)

    def test_identity_has_empty_kernel(self):
        assert linops.kernel_basis(np.eye(3)).shape == (3, 0)

    def test_rank_one(self):
        K = linops.kernel_basis(np.ones((2, 2)))
        assert K.shape == (2, 1)
        expected = np.array([1, -1]) / np.sqrt(2)
        overlap = abs(np.vdot(expected, K[:, 0]))
        assert overlap == pytest.approx(1.0, abs=1e-12)

    @given(st.integers(0, 10**6))
    @settings(max_examples=30, deadline=None)
    def test_kernel_vectors_annihilated_and_complete(self, seed):
        rng = np.random.default_rng(seed)
        m, n, r = 5, 6, rng.integers(0, 4)
        M = (rng.standard_normal((m, r)) @ rng.standard_normal((r, n))
             + 1j * rng.standard_normal((m, r)) @ rng.standard_normal((r, n)))
        K = linops.kernel_basis(M, tol=1e-10)
        smax = np.linalg.svd(M, compute_uv=False)[0] if M.size else 0.0
        for k in range(K.shape[1]):
            assert np.linalg.norm(M @ K[:, k]) <= 1e-9 * max(smax, 1.0)
        # row space basis + kernel basis forms a complete orthonormal set
        row_basis = np.linalg.svd(M)[2][: n - K.shape[1]].conj().T
        full = np.column_stack([row_basis, K])
        assert linops.max_norm(full.conj().T @ full - np.eye(n)) <= 1e-9


class TestKron:
    def test_identity(self):
        np.testing.assert_allclose(linops.kron(np.eye(2), np.eye(2)), np.eye(4))

    def test_index_convention(self):
        # i = i_plus * d_minus + i_minus
        out = linops.kron(np.diag([1.0, -1.0]), np.eye(2))
        np.testing.assert_allclose(out, np.diag([1, 1, -1, -1]))

    @given(st.integers(0, 10**6))
    @settings(max_examples=30, deadline=None)
    def test_partial_trace_adjointness(self, seed):
        rng = np.random.default_rng(seed)
        A = random_hermitian(rng, 2)
        M = random_hermitian(rng, 6)
        lhs = np.trace(linops.kron(A, np.eye(3)) @ M)
        rhs = np.trace(A @ linops.partial_trace(M, 2, 3, "-"))
        assert abs(lhs - rhs) <= 1e-10

    def test_kron_then_trace_out(self):
        rng = np.random.default_rng(5)
        A = random_hermitian(rng, 2)
        B = random_hermitian(rng, 3)
        out = linops.partial_trace(linops.kron(A, B), 2, 3, "-")
        np.testing.assert_allclose(out, A * np.trace(B), atol=1e-12)


class TestPartialTrace:
    def test_product_state(self):
        # |up down>, composite index 0*2 + 1 = 1
        rho = np.zeros((4, 4), dtype=complex)
        rho[1, 1] = 1.0
        np.testing.assert_allclose(
            linops.partial_trace(rho, 2, 2, "-"), np.diag([1.0, 0.0])
        )

    def test_singlet(self):
        phi = np.array([0, 1, -1, 0]) / np.sqrt(2)
        rho = np.outer(phi, phi)
        for side in "+-":
            np.testing.assert_allclose(
                linops.partial_trace(rho, 2, 2, side), np.eye(2) / 2, atol=1e-12
            )

    def test_example1_mixture(self):
        rho = np.diag([0.0, 0.5, 0.5, 0.0]).astype(complex)
        np.testing.assert_allclose(
            linops.partial_trace(rho, 2, 2, "-"), np.eye(2) / 2
        )

    def test_trace_preserved(self):
        rng = np.random.default_rng(0)
        M = random_hermitian(rng, 6)
        out = linops.partial_trace(M, 2, 3, "+")
        assert abs(np.trace(out) - np.trace(M)) <= 1e-12

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            linops.partial_trace(np.eye(5), 2, 2, "-")


class TestRangeNullProjectors:
    def test_identity(self):
        R, N = linops.range_null_projectors(np.eye(3))
        np.testing.assert_allclose(R, np.eye(3))
        np.testing.assert_allclose(N, np.zeros((3, 3)))

    def test_exact_zeros(self):
        R, N = linops.range_null_projectors(np.diag([0.5, 0.5, 0.0, 0.0]))
        np.testing.assert_allclose(R, np.diag([1, 1, 0, 0]), atol=1e-12)

    def test_rank_one(self):
        v = np.array([1, 1]) / np.sqrt(2)
        P = np.outer(v, v)
        R, N = linops.range_null_projectors(P)
        np.testing.assert_allclose(R, P, atol=1e-12)
        w = np.array([1, -1]) / np.sqrt(2)
        np.testing.assert_allclose(N, np.outer(w, w), atol=1e-12)

    def test_rejects_negative(self):
        with pytest.raises(NotPositiveError):
            linops.range_null_projectors(np.diag([1.0, -0.5]))

    @given(st.integers(0, 10**6))
    @settings(max_examples=30, deadline=None)
    def test_projector_identities_and_compression(self, seed):
        rng = np.random.default_rng(seed)
        d, r = 5, int(rng.integers(1, 5))
        V = rng.standard_normal((d, r)) + 1j * rng.standard_normal((d, r))
        H = V @ V.conj().T
        R, N = linops.range_null_projectors(H)
        assert linops.max_norm(R + N - np.eye(d)) <= 1e-10
        assert linops.max_norm(R @ R - R) <= 1e-10
        assert linops.max_norm(N @ N - N) <= 1e-10
        assert linops.max_norm(R @ N) <= 1e-10
        assert linops.max_norm(H - R @ H @ R) <= 1e-10 * linops.max_norm(H)


class TestHermitianBasis:
    def test_d1(self):
        basis = linops.hermitian_basis(1)
        assert len(basis) == 1
        np.testing.assert_allclose(basis[0], [[1.0]])

    @pytest.mark.parametrize("d", [1, 2, 3, 4])
    def test_count_and_orthonormality(self, d):
        basis = linops.hermitian_basis(d)
        assert len(basis) == d * d
        for i, A in enumerate(basis):
            assert linops.max_norm(A - A.conj().T) <= 1e-15
            for j, B in enumerate(basis):
                ip = np.trace(A.conj().T @ B).real
                assert ip == pytest.approx(1.0 if i == j else 0.0, abs=1e-12)

    def test_spans_hermitian_space(self):
        rng = np.random.default_rng(7)
        H = random_hermitian(rng, 3)
        basis = linops.hermitian_basis(3)
        recon = sum(np.trace(G.conj().T @ H).real * G for G in basis)
        np.testing.assert_allclose(recon, H, atol=1e-12)

    def test_coords_round_trip(self):
        rng = np.random.default_rng(11)
        ap = random_hermitian(rng, 2)
        am = random_hermitian(rng, 3)
        x = linops.pair_to_coords(ap, am)
        bp, bm = linops.coords_to_pair(x, 2, 3)
        np.testing.assert_allclose(bp, ap, atol=1e-12)
        np.testing.assert_allclose(bm, am, atol=1e-12)
