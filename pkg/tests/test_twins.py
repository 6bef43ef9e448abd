import numpy as np
import pytest

from twinobs import (
    BipartiteState,
    ObservablePair,
    additive_twins,
    from_pure,
    is_twin_pair,
    scalar_pair,
    solve_twin_space,
    states_admitting_twins,
    twins_restrict_to_range_vectors,
)
from twinobs.errors import DimensionMismatchError
from twinobs.linops import pair_to_coords
from twinobs.spin import coupled_basis, spin_z
from twinobs.twins import subspace_distance

from conftest import oracle_twin_coords, random_state

SZ_HALF = np.diag([0.5, -0.5]).astype(complex)
SZ_ONE = np.diag([1.0, 0.0, -1.0]).astype(complex)


def analytic_span(pairs):
    """Orthonormalized coordinate matrix of a list of (a_plus, a_minus)."""
    M = np.column_stack([pair_to_coords(ap, am) for ap, am in pairs])
    q, _ = np.linalg.qr(M)
    return q


class TestIsTwinPair:
    def test_scalar_pair_exact(self, example1):
        ok, residual = is_twin_pair(example1, scalar_pair(2, 2))
        assert ok and residual == 0.0

    def test_sz_minus_sz_is_twin(self, example1):
        ok, residual = is_twin_pair(example1, ObservablePair(SZ_HALF, -SZ_HALF))
        assert ok and residual <= 1e-12

    def test_sz_plus_sz_is_not(self, example1):
        ok, residual = is_twin_pair(example1, ObservablePair(SZ_HALF, SZ_HALF))
        assert not ok
        assert residual == pytest.approx(0.5, abs=1e-12)

    def test_dimension_mismatch(self, example1):
        with pytest.raises(DimensionMismatchError):
            is_twin_pair(example1, ObservablePair(np.eye(3), np.eye(2)))


class TestSolveTwinSpace:
    def test_example1_dimension_and_span(self, example1):
        space = solve_twin_space(example1)
        assert space.dim_total == 2
        expected = analytic_span([
            (np.eye(2), np.eye(2)),
            (SZ_HALF, -SZ_HALF),
        ])
        assert subspace_distance(space.coordinate_matrix(), expected) <= 1e-8

    def test_nonsingular_only_scalars(self):
        st = BipartiteState(2, 2, np.eye(4) / 4)
        space = solve_twin_space(st)
        assert space.dim_total == 1
        pair = space.basis[0]
        # proportional to the scalar pair
        off = pair.a_plus - np.trace(pair.a_plus) / 2 * np.eye(2)
        assert np.max(np.abs(off)) <= 1e-10

    def test_example2_ms1_dimension_and_containment(self, example2_ms1):
        space = solve_twin_space(example2_ms1)
        assert space.dim_total == 4
        coords = space.coordinate_matrix()
        P = coords @ coords.T
        listed = [
            (np.eye(3), np.eye(3)),
            (SZ_ONE - 0.5 * np.eye(3), -SZ_ONE + 0.5 * np.eye(3)),
            (SZ_ONE @ SZ_ONE - SZ_ONE, SZ_ONE @ SZ_ONE - SZ_ONE),
        ]
        for ap, am in listed:
            x = pair_to_coords(ap, am)
            x /= np.linalg.norm(x)
            assert np.linalg.norm(P @ x - x) <= 1e-8

    def test_scalar_pair_always_contained(self):
        rng = np.random.default_rng(17)
        for dims in [(2, 2), (2, 3), (3, 3)]:
            st = random_state(rng, *dims, rank=int(rng.integers(1, dims[0] * dims[1])))
            space = solve_twin_space(st)
            coords = space.coordinate_matrix()
            x = scalar_pair(*dims).coords()
            x /= np.linalg.norm(x)
            assert np.linalg.norm(coords @ (coords.T @ x) - x) <= 1e-8

    def test_range_projector_pair_is_twin(self):
        rng = np.random.default_rng(23)
        for dims in [(2, 2), (2, 3), (3, 3)]:
            for _ in range(5):
                st = random_state(rng, *dims, rank=int(rng.integers(1, dims[0] * dims[1])))
                p = st.projectors()
                ok, residual = is_twin_pair(st, ObservablePair(p.R_plus, p.R_minus))
                assert ok, residual

    def test_dimension_bookkeeping(self):
        rng = np.random.default_rng(31)
        for dims in [(2, 2), (2, 3), (3, 3)]:
            for _ in range(5):
                st = random_state(rng, *dims, rank=int(rng.integers(1, dims[0] * dims[1] + 1)))
                space = solve_twin_space(st)
                assert space.dim_total == (
                    space.dim_detectable
                    + space.dim_undetectable_plus
                    + space.dim_undetectable_minus
                )

    def test_singularity_not_sufficient(self, example1_insufficient):
        space = solve_twin_space(example1_insufficient)
        assert space.dim_detectable == 1

    def test_every_basis_pair_satisfies_residual(self, example2_ms1):
        space = solve_twin_space(example2_ms1)
        for pair in space.basis:
            ok, residual = is_twin_pair(example2_ms1, pair)
            assert ok, residual

    def test_basis_orthonormal(self, example2_ms1):
        coords = solve_twin_space(example2_ms1).coordinate_matrix()
        gram = coords.T @ coords
        np.testing.assert_allclose(gram, np.eye(coords.shape[1]), atol=1e-10)

    def test_scaling_closure(self, example1):
        rng = np.random.default_rng(5)
        space = solve_twin_space(example1)
        for pair in space.basis:
            alpha = float(rng.uniform(-3, 3))
            ok, _ = is_twin_pair(example1, pair.scaled(alpha))
            assert ok


class TestOracleEquivalence:
    @pytest.mark.parametrize("dims", [(2, 2), (2, 3), (3, 3)])
    def test_matches_brute_force(self, dims):
        rng = np.random.default_rng(hash(dims) % 2**32)
        dp, dm = dims
        for _ in range(5):
            rank = int(rng.integers(1, dp * dm + 1))
            st = random_state(rng, dp, dm, rank=rank)
            space = solve_twin_space(st)
            oracle = oracle_twin_coords(st)
            assert space.dim_total == oracle.shape[1]
            assert subspace_distance(space.coordinate_matrix(), oracle) <= 1e-8

    def test_example2_ms1_brute_force(self, example2_ms1):
        oracle = oracle_twin_coords(example2_ms1)
        assert oracle.shape[1] == 4


class TestAdditiveTwins:
    def test_example1_sz(self, example1):
        pair = additive_twins(example1, SZ_HALF, SZ_HALF)
        assert pair is not None
        np.testing.assert_allclose(pair.a_plus, SZ_HALF, atol=1e-10)
        np.testing.assert_allclose(pair.a_minus, -SZ_HALF, atol=1e-10)

    def test_example2_ms1_sz(self, example2_ms1):
        pair = additive_twins(example2_ms1, SZ_ONE, SZ_ONE)
        assert pair is not None
        np.testing.assert_allclose(pair.a_plus, SZ_ONE - 0.5 * np.eye(3), atol=1e-10)
        np.testing.assert_allclose(pair.a_minus, -SZ_ONE + 0.5 * np.eye(3), atol=1e-10)

    def test_maximally_mixed_has_no_sharp_value(self):
        st = BipartiteState(2, 2, np.eye(4) / 4)
        assert additive_twins(st, SZ_HALF, SZ_HALF) is None


class TestRangeConsequences:
    def test_example1_report(self, example1):
        space = solve_twin_space(example1)
        report = twins_restrict_to_range_vectors(example1, space)
        assert report.passed

    def test_pure_state_has_more_twins(self, example1):
        # twins of rho are contained in the twins of |1,0> alone, strictly
        U, labels = coupled_basis(0.5, 0.5)
        triplet0 = U[:, labels.index((1.0, 0.0))]
        pure = from_pure(triplet0, 2, 2)
        space_rho = solve_twin_space(example1)
        space_pure = solve_twin_space(pure)
        assert space_pure.dim_total > space_rho.dim_total
        coords = space_pure.coordinate_matrix()
        P = coords @ coords.T
        for pair in space_rho.basis:
            x = pair.coords()
            assert np.linalg.norm(P @ x - x) <= 1e-8

    def test_same_range_same_twins(self):
        # two different-weight mixtures on the Example-1 range
        from twinobs.spin import SpinScenario, build_scenario
        a = build_scenario(SpinScenario("example1_range10_00", weights=(0.5, 0.5)))
        b = build_scenario(SpinScenario("example1_range10_00", weights=(0.9, 0.1)))
        sa = solve_twin_space(a)
        sb = solve_twin_space(b)
        assert sa.dim_total == sb.dim_total
        assert subspace_distance(sa.coordinate_matrix(), sb.coordinate_matrix()) <= 1e-8

    def test_rank_one_trivial(self):
        st = from_pure(np.array([0, 1, 0, 0], dtype=complex), 2, 2)
        report = twins_restrict_to_range_vectors(st, solve_twin_space(st))
        assert report.passed


class TestStatesAdmittingTwins:
    def test_example1_admits_sz_pair(self, example1):
        assert states_admitting_twins(ObservablePair(SZ_HALF, -SZ_HALF), example1)

    def test_m1_state_does_not(self):
        # |1, M=1> = |up up>, S_z value 1 not 0
        st = from_pure(np.array([1, 0, 0, 0], dtype=complex), 2, 2)
        assert not states_admitting_twins(ObservablePair(SZ_HALF, -SZ_HALF), st)

    def test_scalar_pair_admitted_everywhere(self):
        rng = np.random.default_rng(77)
        for _ in range(5):
            st = random_state(rng, 2, 3, rank=int(rng.integers(1, 7)))
            assert states_admitting_twins(scalar_pair(2, 3), st)

    def test_agrees_with_is_twin_pair(self):
        rng = np.random.default_rng(78)
        for _ in range(10):
            st = random_state(rng, 2, 2, rank=int(rng.integers(1, 5)))
            space = solve_twin_space(st)
            for pair in space.basis:
                assert states_admitting_twins(pair, st)
