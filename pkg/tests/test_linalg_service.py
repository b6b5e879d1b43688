"""Tests for eigenvalues, exact rank, additive compounds and subset sums."""

from itertools import combinations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from lapbound.core.exceptions import CapacityExceededError, NumericalError, ValidationError
from lapbound.models.matrix import IntegerMatrix, SymmetricMatrix
from lapbound.services.laplacian_service import graph_laplacian, graph_laplacian_plus_J
from lapbound.services.linalg_service import (
    _rank_fraction_free,
    additive_compound,
    count_subset_sums_at_most,
    count_subset_sums_with_ties,
    enumerate_subset_sums,
    gershgorin_upper,
    integer_rank,
    iter_subset_sums,
    s_stat,
    smallest_subset_sums,
    subsets_index,
    sym_eigenvalues,
    transfer_sign,
)
from strategies import symmetric_matrices


def random_symmetric(rng, n):
    A = rng.standard_normal((n, n))
    return SymmetricMatrix((A + A.T) / 2.0)


class TestSymEigenvalues:
    """Dense symmetric eigenvalues with a residual certificate."""

    def test_scaled_identity(self):
        spectrum = sym_eigenvalues(SymmetricMatrix(3.0 * np.eye(3)))
        assert list(spectrum.eigenvalues) == pytest.approx([3.0, 3.0, 3.0])
        assert spectrum.residual_tol <= 1e-12

    def test_triangle_graph_laplacian(self, triangle_graph):
        """L(K3) has spectrum (0, 3, 3)."""
        spectrum = sym_eigenvalues(graph_laplacian(triangle_graph))
        assert list(spectrum.eigenvalues) == pytest.approx([0.0, 3.0, 3.0], abs=1e-12)

    def test_ascending_order(self, rng):
        spectrum = sym_eigenvalues(random_symmetric(rng, 7))
        assert np.all(np.diff(spectrum.eigenvalues) >= 0)

    def test_zero_matrix(self):
        spectrum = sym_eigenvalues(SymmetricMatrix(np.zeros((2, 2))))
        assert spectrum.residual_tol == 0.0
        assert spectrum.nullity(0.0, 1e-8) == 2

    def test_non_finite_entries(self):
        """Infinite entries are a numerical error, not a silent NaN spectrum."""
        M = SymmetricMatrix(np.array([[1.0, np.inf], [np.inf, 1.0]]))
        with pytest.raises(NumericalError, match="non-finite"):
            sym_eigenvalues(M)

    def test_order_cap(self, override_settings):
        """Orders above MAX_DENSE_ORDER are refused."""
        override_settings(MAX_DENSE_ORDER=2)
        with pytest.raises(CapacityExceededError):
            sym_eigenvalues(SymmetricMatrix(np.eye(3)))

    def test_non_positive_tolerance(self):
        with pytest.raises(ValidationError):
            sym_eigenvalues(SymmetricMatrix(np.eye(2)), tol=0.0)


class TestIntegerRank:
    """Exact rank over the rationals."""

    def test_small_matrices(self):
        assert integer_rank(IntegerMatrix(np.eye(3, dtype=np.int64))) == 3
        assert integer_rank(IntegerMatrix(np.ones((4, 4), dtype=np.int64))) == 1
        assert integer_rank(IntegerMatrix(np.zeros((0, 3), dtype=np.int64))) == 0

    def test_hollow_triangle_boundary(self):
        """d_1 of the hollow triangle has rank 2."""
        d1 = np.array([[-1, -1, 0], [1, 0, -1], [0, 1, 1]], dtype=np.int64)
        assert integer_rank(IntegerMatrix(d1)) == 2

    @given(
        arrays(
            np.int64,
            st.tuples(st.integers(1, 6), st.integers(1, 6)),
            elements=st.integers(min_value=-2, max_value=2),
        )
    )
    def test_matches_floating_rank_on_small_integers(self, A):
        assert integer_rank(IntegerMatrix(A)) == np.linalg.matrix_rank(A.astype(float))

    def test_fraction_free_elimination(self):
        A = np.array([[1, 2, 3], [2, 4, 6], [1, 0, 1]], dtype=np.int64)
        assert _rank_fraction_free(A) == 2

    def test_disagreeing_primes_fall_back_to_exact(self, mocker):
        """A modular mismatch is resolved by fraction-free elimination."""
        mocker.patch(
            "lapbound.services.linalg_service._rank_mod_p", side_effect=[1, 2]
        )
        A = np.array([[1, 2, 3], [2, 4, 6], [1, 0, 1]], dtype=np.int64)
        assert integer_rank(IntegerMatrix(A)) == 2


class TestAdditiveCompound:
    """k-th additive compound matrices."""

    def test_subsets_index_order(self):
        assert subsets_index(3, 2) == [(0, 1), (0, 2), (1, 2)]

    def test_transfer_sign(self):
        assert transfer_sign((1, 2, 3), 1) == 1
        assert transfer_sign((1, 2, 3), 2) == -1
        assert transfer_sign((1, 2, 3), 3) == 1

    def test_diagonal_matrix(self):
        """The compound of a diagonal matrix is diagonal with subset sums."""
        C = additive_compound(SymmetricMatrix(np.diag([1.0, 2.0, 3.0])), 2)
        assert np.array_equal(C.entries, np.diag([3.0, 4.0, 5.0]))

    def test_first_compound_is_the_matrix(self, rng):
        M = random_symmetric(rng, 4)
        assert additive_compound(M, 1).equals(M)

    @given(symmetric_matrices(max_order=6), st.data())
    def test_spectrum_is_subset_sums(self, M, data):
        """Eigenvalues of M^[k] are the k-subset sums of eigenvalues of M."""
        n = M.order
        k = data.draw(st.integers(min_value=1, max_value=n))
        eigs = sym_eigenvalues(M).eigenvalues
        got = sym_eigenvalues(additive_compound(M, k)).eigenvalues
        want = sorted(sum(eigs[list(s)]) for s in combinations(range(n), k))
        assert list(got) == pytest.approx(want, abs=1e-8 * max(1.0, M.frobenius_norm))

    def test_order_out_of_range(self):
        with pytest.raises(ValidationError):
            additive_compound(SymmetricMatrix(np.eye(3)), 4)

    def test_compound_cap(self, override_settings):
        override_settings(MAX_COMPOUND_ORDER=5)
        with pytest.raises(CapacityExceededError):
            additive_compound(SymmetricMatrix(np.eye(4)), 2)


class TestGershgorin:
    """Row-sum upper bound on the largest eigenvalue."""

    def test_values(self):
        assert gershgorin_upper(SymmetricMatrix(np.diag([1.0, 5.0]))) == 5.0
        assert gershgorin_upper(SymmetricMatrix(np.ones((3, 3)))) == 3.0

    @given(symmetric_matrices())
    def test_bounds_lambda_max(self, M):
        assert gershgorin_upper(M) >= sym_eigenvalues(M).eigenvalues[-1] - 1e-9


class TestSubsetSums:
    """S_{k,i} and counting of small subset sums."""

    def test_ties_are_kept(self):
        """(3, 3, 3) has three pair sums, all equal to 6."""
        assert [s_stat([3, 3, 3], 2, i) for i in (1, 2, 3)] == [6.0, 6.0, 6.0]

    def test_multiset_order(self):
        """Pair sums of (0, 1, 2, 3) are 1, 2, 3, 3, 4, 5."""
        assert list(enumerate_subset_sums([0, 1, 2, 3], 2)) == [1, 2, 3, 3, 4, 5]
        assert s_stat([0, 1, 2, 3], 2, 3) == 3.0
        assert s_stat([0, 1, 2, 3], 2, 4) == 3.0

    def test_path_graph_plus_J(self, path_graph):
        """L(P3) + J has spectrum (1, 3, 3), so S_{2,1} = 4."""
        eigs = sym_eigenvalues(graph_laplacian_plus_J(path_graph)).eigenvalues
        assert list(eigs) == pytest.approx([1.0, 3.0, 3.0], abs=1e-12)
        assert s_stat(eigs, 2, 1) == pytest.approx(4.0)

    def test_input_order_does_not_matter(self):
        assert s_stat([3, 0, 2, 1], 2, 1) == 1.0

    @given(
        st.lists(
            st.floats(min_value=-2.0, max_value=5.0, allow_nan=False), min_size=1, max_size=8
        )
    )
    def test_heap_matches_enumeration(self, eigs):
        for k in range(1, len(eigs) + 1):
            full = enumerate_subset_sums(eigs, k)
            heap = smallest_subset_sums(eigs, k, full.size, method="heap")
            assert np.allclose(heap, full, atol=1e-12)

    def test_heap_yields_nondecreasing_sums(self, rng):
        sums = list(iter_subset_sums(rng.uniform(0.0, 1.0, size=8), 3))
        assert len(sums) == 56
        assert all(a <= b for a, b in zip(sums, sums[1:]))

    def test_rank_out_of_range(self):
        with pytest.raises(ValidationError):
            s_stat([1, 2, 3], 2, 4)
        with pytest.raises(ValidationError):
            s_stat([1, 2, 3], 4, 1)

    def test_unknown_method(self):
        with pytest.raises(ValidationError, match="unknown subset-sum method"):
            smallest_subset_sums([1, 2, 3], 2, 1, method="sorted")

    def test_count_at_most(self):
        assert count_subset_sums_at_most([3, 3, 3], 2, 6.0) == 3
        assert count_subset_sums_at_most([3, 3, 3], 2, 5.9) == 0
        assert count_subset_sums_at_most([0, 1, 2, 3], 2, 3.0) == 4

    def test_near_ties_reported(self):
        """Sums equal to the threshold are counted and flagged as ties."""
        count, near = count_subset_sums_with_ties([3, 3, 3], 2, 6.0)
        assert (count, near) == (3, 3)
        count, near = count_subset_sums_with_ties([0, 1, 2, 3], 2, 3.0)
        assert (count, near) == (4, 2)
