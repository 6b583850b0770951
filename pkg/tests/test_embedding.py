import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import correlation_matrix
from shrflow import (
    AllRowsDegenerateError,
    InconsistentModelsError,
    InnovationSeries,
    LaggedDataMatrix,
    LocalArModel,
    TooShortError,
    build_locked_matrix,
    build_stationary_matrix,
    normalize_rows,
)


def innovations_from(values, q):
    values = np.asarray(values, dtype=float)
    return InnovationSeries(values=values, global_order=q, max_order=q)


class TestBuildStationary:
    def test_single_channel_transcription(self):
        # innovations for frames 2..5 of a 5-frame series, order 1
        v = np.array([[2.0, 3.0, 4.0, 5.0]])
        matrix = build_stationary_matrix(innovations_from(v, 1))
        np.testing.assert_array_equal(
            matrix.values, [[3.0, 4.0, 5.0], [2.0, 3.0, 4.0]]
        )

    def test_shape_formula(self):
        v = np.zeros((2, 8))  # N_T = 10, Q = 2 -> innovations 2 x 8
        v[:] = np.arange(16).reshape(2, 8)
        matrix = build_stationary_matrix(innovations_from(v, 2))
        assert matrix.values.shape == (6, 6)

    @pytest.mark.parametrize("q,nv,cols", [(1, 1, 6), (2, 3, 9), (3, 2, 11)])
    def test_block_bookkeeping_exhaustive(self, q, nv, cols):
        rng = np.random.default_rng(q * 100 + nv)
        v = rng.standard_normal((nv, cols))
        matrix = build_stationary_matrix(innovations_from(v, q))
        m = cols - q
        for b in range(q + 1):
            for i in range(nv):
                for col in range(m):
                    assert matrix.values[b * nv + i, col] == v[i, q + col - b]

    def test_too_short(self):
        with pytest.raises(TooShortError):
            build_stationary_matrix(innovations_from(np.zeros((1, 3)), 2))

    def test_block_accessor(self):
        v = np.arange(10.0)[None, :]
        matrix = build_stationary_matrix(innovations_from(v, 2))
        np.testing.assert_array_equal(matrix.block(0), v[:, 2:])
        np.testing.assert_array_equal(matrix.block(2), v[:, :-2])


def local_model(channel, tau, q, innovations):
    innovations = np.asarray(innovations, dtype=float)
    return LocalArModel(
        channel=channel,
        target_time=tau,
        order=q,
        coefficients=np.zeros(q),
        innovations=innovations,
    )


class TestBuildLocked:
    def test_single_channel_transcription(self):
        # rows ascending local time: tau-1 then tau
        model = local_model(0, tau=5, q=1, innovations=[[1.0, 2.0], [3.0, 4.0]])
        matrix = build_locked_matrix([model])
        np.testing.assert_array_equal(matrix.values, [[3.0, 4.0], [1.0, 2.0]])

    def test_mismatched_target_times_rejected(self):
        a = local_model(0, tau=5, q=1, innovations=np.zeros((2, 3)))
        b = local_model(1, tau=6, q=1, innovations=np.zeros((2, 3)))
        with pytest.raises(InconsistentModelsError):
            build_locked_matrix([a, b])

    def test_channel_order_enforced(self):
        a = local_model(1, tau=5, q=1, innovations=np.zeros((2, 3)))
        with pytest.raises(InconsistentModelsError):
            build_locked_matrix([a])

    def test_shape_formula(self):
        models = [
            local_model(i, tau=9, q=2, innovations=np.zeros((3, 50))) for i in range(3)
        ]
        assert build_locked_matrix(models).values.shape == (9, 50)


def raw_matrix(values, q=1, nv=None):
    values = np.asarray(values, dtype=float)
    nv = nv if nv is not None else values.shape[0] // (q + 1)
    return LaggedDataMatrix(values=values, global_order=q, n_channels=nv)


class TestNormalizeRows:
    def test_three_point_row(self):
        matrix = normalize_rows(raw_matrix([[1.0, 2.0, 3.0], [0.0, 1.0, -1.0]]))
        np.testing.assert_allclose(
            matrix.values[0], [-1.22474487, 0.0, 1.22474487], atol=1e-8
        )

    def test_constant_row_zeroed_and_flagged(self):
        matrix = normalize_rows(raw_matrix([[5.0, 5.0, 5.0, 5.0], [0.0, 1.0, 2.0, 3.0]]))
        np.testing.assert_array_equal(matrix.values[0], np.zeros(4))
        assert matrix.row_degenerate.tolist() == [True, False]

    def test_normalized_rows_have_unit_population_variance(self):
        rng = np.random.default_rng(4)
        matrix = normalize_rows(raw_matrix(rng.standard_normal((4, 25)), q=1, nv=2))
        for row in matrix.values:
            assert abs(row.mean()) < 1e-10
            assert abs(np.var(row) - 1.0) < 1e-8

    def test_gram_matrix_is_sample_correlation(self):
        rng = np.random.default_rng(12)
        values = rng.standard_normal((6, 40)) * rng.uniform(0.5, 3.0, size=(6, 1))
        matrix = normalize_rows(raw_matrix(values, q=2, nv=2))
        gram = matrix.values @ matrix.values.T / matrix.n_columns
        np.testing.assert_allclose(gram, correlation_matrix(values), atol=1e-10)

    def test_all_rows_degenerate(self):
        with pytest.raises(AllRowsDegenerateError):
            normalize_rows(raw_matrix([[1.0, 1.0, 1.0], [2.0, 2.0, 2.0]]))

    def test_too_few_columns(self):
        with pytest.raises(TooShortError):
            normalize_rows(raw_matrix([[1.0], [2.0]]))

    def test_idempotent(self):
        rng = np.random.default_rng(7)
        once = normalize_rows(raw_matrix(rng.standard_normal((2, 30))))
        twice = normalize_rows(once)
        np.testing.assert_allclose(twice.values, once.values, atol=1e-12)

    def test_degenerate_rows_contribute_nothing_to_gram(self):
        values = np.vstack([np.full(10, 3.0), np.random.default_rng(1).standard_normal(10)])
        matrix = normalize_rows(raw_matrix(values))
        gram = matrix.values @ matrix.values.T
        assert gram[0, 0] == 0.0 and gram[0, 1] == 0.0

    def test_degenerate_channels_require_all_blocks(self):
        # channel 1 constant in every block -> degenerate; channel 0 alive
        rng = np.random.default_rng(3)
        inn = np.vstack([rng.standard_normal(12), np.full(12, 2.0)])
        matrix = normalize_rows(build_stationary_matrix(innovations_from(inn, 2)))
        assert matrix.degenerate_channels == (1,)


@settings(max_examples=30, deadline=None)
@given(
    scale=st.floats(min_value=1e-3, max_value=1e3),
    seed=st.integers(min_value=0, max_value=2**31 - 1),
)
def test_positive_row_scaling_leaves_normalization_unchanged(scale, seed):
    rng = np.random.default_rng(seed)
    values = rng.standard_normal((4, 20))
    base = normalize_rows(raw_matrix(values, q=1, nv=2))
    scaled = normalize_rows(raw_matrix(values * scale, q=1, nv=2))
    np.testing.assert_allclose(scaled.values, base.values, atol=1e-9)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**31 - 1))
def test_normalize_is_idempotent_property(seed):
    rng = np.random.default_rng(seed)
    once = normalize_rows(raw_matrix(rng.standard_normal((6, 15)), q=2, nv=2))
    twice = normalize_rows(once)
    np.testing.assert_allclose(twice.values, once.values, atol=1e-12)
    np.testing.assert_array_equal(twice.row_degenerate, once.row_degenerate)
