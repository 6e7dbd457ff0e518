import numpy as np
import pytest
from hypothesis import given, strategies as st

from specnorm.structured import (
    DISTRIBUTIONS,
    FAMILIES,
    MatrixSpec,
    ResourceLimitError,
    build_symbol,
    dense_materialize,
    draw_entries,
    embedding_size,
    matvec,
    projection_entry,
    replicate_stream,
    rmatvec,
    symbol_from_values,
)


class StubStream:
    """Generator stand-in handing out prescribed gaussian draws."""

    def __init__(self, values):
        self.values = np.asarray(values, dtype=float)

    def standard_normal(self, count):
        assert count == self.values.size
        return self.values


def all_specs(p, n, seed=0):
    return [
        MatrixSpec(family, p=p, n=n, symmetric=symmetric, seed=seed)
        for family in FAMILIES
        for symmetric in (False, True)
    ]


def test_delta_symbol_gives_flat_diagonal():
    spec = MatrixSpec("toeplitz", p=2, n=3)
    stub = StubStream([1, 0, 0, 0, 0])
    sym = build_symbol(spec, stub)
    np.testing.assert_allclose(sym.diag, np.full(5, 1 / np.sqrt(5)), atol=1e-14)


def test_delta_symbol_circulant():
    spec = MatrixSpec("circulant", p=2, n=4)
    sym = build_symbol(spec, StubStream([1, 0, 0, 0]))
    np.testing.assert_allclose(sym.diag, np.full(4, 0.5), atol=1e-14)


def test_real_symbol_conjugate_symmetry():
    spec = MatrixSpec("toeplitz", p=400, n=624, seed=9)  # embedding size 2**10
    sym = build_symbol(spec)
    n = sym.size
    assert n == 2**10
    j = np.arange(n)
    err = np.abs(sym.diag[(n - j) % n] - np.conj(sym.diag[j]))
    assert err.max() < 1e-12


def test_diagonal_component_variances():
    # half-spectrum real/imaginary parts each carry variance 1/2
    n = 2**14
    spec = MatrixSpec("circulant", p=n, n=n, seed=31415)
    sym = build_symbol(spec)
    interior = sym.diag[1 : n // 2]
    assert abs(np.var(interior.real) - 0.5) < 0.05
    assert abs(np.var(interior.imag) - 0.5) < 0.05


def test_diagonal_components_uncorrelated():
    draws = 10_000
    n = 64
    rng = replicate_stream(777)
    a = rng.standard_normal((draws, n))
    d1 = np.fft.ifft(a, axis=1)[:, 1] * np.sqrt(n)
    corr = np.corrcoef(d1.real, d1.imag)[0, 1]
    assert abs(corr) < 0.05


def test_toeplitz_fixture_matrix():
    # symbol (a_0, a_1, a_2, a_{-2}, a_{-1}) = (1, 2, 3, 0, 4)
    spec = MatrixSpec("toeplitz", p=2, n=3)
    sym = symbol_from_values([1, 2, 3, 0, 4], spec)
    np.testing.assert_allclose(dense_materialize(sym, spec), [[1, 2, 3], [4, 1, 2]])
    np.testing.assert_allclose(matvec(sym, spec, [1, 0, 0]), [1, 4], atol=1e-12)


def test_circulant_fixture_row_sums():
    spec = MatrixSpec("circulant", p=2, n=3)
    sym = symbol_from_values([1, 2, 3], spec)
    np.testing.assert_allclose(dense_materialize(sym, spec), [[1, 2, 3], [3, 1, 2]])
    np.testing.assert_allclose(matvec(sym, spec, [1, 1, 1]), [6, 6], atol=1e-12)


def test_symmetric_circulant_row():
    spec = MatrixSpec("circulant", p=1, n=4, symmetric=True)
    sym = build_symbol(spec, StubStream([10.0, 20.0, 30.0]))
    np.testing.assert_allclose(dense_materialize(sym, spec), [[10, 20, 30, 20]])


def test_symmetric_toeplitz_pattern():
    spec = MatrixSpec("toeplitz", p=2, n=3, symmetric=True)
    a = np.array([1.0, 2.0, 3.0, 4.0])  # a_0..a_n with n = 3
    sym = build_symbol(spec, StubStream(a))
    np.testing.assert_allclose(dense_materialize(sym, spec), [[1, 2, 3], [2, 1, 2]])


def test_hankel_is_column_reversed_toeplitz():
    t_spec = MatrixSpec("toeplitz", p=2, n=3, seed=5)
    h_spec = MatrixSpec("hankel", p=2, n=3, seed=5)
    sym = build_symbol(t_spec)
    t = dense_materialize(sym, t_spec)
    h = dense_materialize(sym, h_spec)
    np.testing.assert_allclose(h, t[:, ::-1])


def test_hankel_toeplitz_share_singular_values():
    t_spec = MatrixSpec("toeplitz", p=17, n=41, seed=8)
    h_spec = MatrixSpec("hankel", p=17, n=41, seed=8)
    sym = build_symbol(t_spec)
    st_ = np.linalg.svd(dense_materialize(sym, t_spec), compute_uv=False)
    sh = np.linalg.svd(dense_materialize(sym, h_spec), compute_uv=False)
    np.testing.assert_allclose(st_, sh, rtol=1e-12, atol=1e-12)


def test_fast_matches_dense_fixed_size():
    rng = np.random.default_rng(97)
    spec = MatrixSpec("toeplitz", p=40, n=97, seed=12)
    sym = build_symbol(spec)
    dense = dense_materialize(sym, spec)
    for _ in range(100):
        x = rng.standard_normal(97)
        ref = dense @ x
        err = np.linalg.norm(matvec(sym, spec, x) - ref) / np.linalg.norm(ref)
        assert err < 1e-10


@pytest.mark.parametrize("spec", all_specs(p=11, n=28, seed=3), ids=str)
def test_fast_matches_dense_all_families(spec):
    rng = np.random.default_rng(spec.seed + hash(spec.family) % 1000)
    sym = build_symbol(spec)
    dense = dense_materialize(sym, spec)
    for _ in range(10):
        x = rng.standard_normal(spec.n)
        ref = dense @ x
        assert np.linalg.norm(matvec(sym, spec, x) - ref) <= 1e-10 * np.linalg.norm(ref)


@pytest.mark.parametrize("spec", all_specs(p=9, n=20, seed=21), ids=str)
def test_rmatvec_is_adjoint(spec):
    rng = np.random.default_rng(55)
    sym = build_symbol(spec)
    for _ in range(10):
        x = rng.standard_normal(spec.n)
        y = rng.standard_normal(spec.p)
        lhs = float(np.dot(matvec(sym, spec, x), y))
        rhs = float(np.dot(x, rmatvec(sym, spec, y)))
        assert abs(lhs - rhs) <= 1e-11 * max(1.0, abs(lhs))


def test_draw_entries_moments():
    rng = replicate_stream(2024)
    for dist in DISTRIBUTIONS:
        x = draw_entries(rng, dist, 200_000)
        assert abs(x.mean()) < 0.02
        assert abs(x.var() - 1.0) < 0.02


def test_replicate_stream_reproducible_and_split():
    a = replicate_stream(5, 7).standard_normal(4)
    b = replicate_stream(5, 7).standard_normal(4)
    c = replicate_stream(5, 8).standard_normal(4)
    np.testing.assert_array_equal(a, b)
    assert not np.allclose(a, c)


def test_projection_entry_diagonal():
    assert projection_entry(3, 8, 4, 4) == pytest.approx(0.375)


def test_projection_row_norm():
    p, n = 5, 12
    for k in range(n):
        row = sum(abs(projection_entry(p, n, k, l)) ** 2 for l in range(n))
        assert abs(row - p / n) < 1e-12


def test_projection_entry_bound():
    p, n = 7, 19
    for k in range(n):
        for l in range(n):
            if k == l:
                continue
            bound = abs(np.sin(np.pi * (l - k) * p / n)) / (2 * min(abs(l - k), n - abs(l - k)))
            assert abs(projection_entry(p, n, k, l)) <= bound + 1e-12


def test_projection_entry_range_checks():
    with pytest.raises(ValueError):
        projection_entry(0, 8, 0, 0)
    with pytest.raises(ValueError):
        projection_entry(3, 8, 8, 0)


def test_embedding_sizes():
    assert embedding_size(MatrixSpec("toeplitz", p=3, n=5)) == 8
    assert embedding_size(MatrixSpec("toeplitz", p=3, n=5, symmetric=True)) == 10
    assert embedding_size(MatrixSpec("circulant", p=3, n=5)) == 5
    assert embedding_size(MatrixSpec("reverse_circulant", p=3, n=5, symmetric=True)) == 5


def test_spec_validation():
    with pytest.raises(ValueError):
        MatrixSpec("toeplitz", p=10, n=5)
    with pytest.raises(ValueError):
        MatrixSpec("toeplitz", p=0, n=5)
    with pytest.raises(ValueError):
        MatrixSpec("butterfly", p=2, n=5)
    with pytest.raises(ValueError):
        MatrixSpec("toeplitz", p=2, n=5, dist="cauchy")


def test_matvec_shape_checks():
    spec = MatrixSpec("toeplitz", p=2, n=3)
    sym = build_symbol(spec)
    with pytest.raises(ValueError):
        matvec(sym, spec, [1.0, 2.0])
    with pytest.raises(ValueError):
        rmatvec(sym, spec, [1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        symbol_from_values([1.0, 2.0], spec)


def test_dense_size_guard():
    spec = MatrixSpec("circulant", p=20_000, n=20_000)
    sym = symbol_from_values(np.zeros(20_000), spec)
    with pytest.raises(ResourceLimitError):
        dense_materialize(sym, spec)


@given(st.integers(0, 2**32 - 1))
def test_symbol_round_trip_through_diag(seed):
    spec = MatrixSpec("toeplitz", p=4, n=9, seed=seed)
    sym = build_symbol(spec)
    # diag is the unitary transform of the symbol row
    back = np.fft.fft(sym.diag) / np.sqrt(sym.size)
    np.testing.assert_allclose(back.real, sym.values, atol=1e-10)
