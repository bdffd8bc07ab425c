import numpy as np
import pytest
from scipy.special import ndtr, ndtri

from marketgen import preprocess as pp
from marketgen.errors import ConstantColumn, DomainError, OutOfBounds
from marketgen.frames import frame_from_columns


def _frame(*cols):
    return frame_from_columns({f"c{i}": c for i, c in enumerate(cols)})


# ---------------------------------------------------------------------------
# minmax
# ---------------------------------------------------------------------------

def test_minmax_endpoints():
    f = _frame([0.0, 5.0, 10.0])
    spec = pp.fit_minmax(f)
    out = pp.transform(f, spec)
    np.testing.assert_allclose(out.data.ravel(), [0.0, 0.5, 1.0])


def test_minmax_roundtrip():
    rng = np.random.default_rng(0)
    f = _frame(rng.normal(size=200), rng.uniform(-3, 9, size=200))
    spec = pp.fit_minmax(f)
    back = pp.inverse_transform(pp.transform(f, spec), spec)
    np.testing.assert_allclose(back.data, f.data, atol=1e-12)


def test_minmax_constant_column():
    with pytest.raises(ConstantColumn):
        pp.fit_minmax(_frame([2.0, 2.0, 2.0]))


# ---------------------------------------------------------------------------
# zscore
# ---------------------------------------------------------------------------

def test_zscore_symmetric_pair():
    f = _frame([-1.0, 1.0])
    out = pp.transform(f, pp.fit_zscore(f))
    np.testing.assert_allclose(out.data.ravel(), [-1.0, 1.0])


def test_zscore_population_convention():
    f = _frame([0.0, 2.0])
    out = pp.transform(f, pp.fit_zscore(f))
    np.testing.assert_allclose(out.data.ravel(), [-1.0, 1.0])


def test_zscore_roundtrip():
    rng = np.random.default_rng(1)
    f = _frame(rng.normal(3.0, 2.5, size=500))
    spec = pp.fit_zscore(f)
    back = pp.inverse_transform(pp.transform(f, spec), spec)
    np.testing.assert_allclose(back.data, f.data, atol=1e-12)


def test_zscore_zero_variance():
    with pytest.raises(ConstantColumn):
        pp.fit_zscore(_frame([1.0, 1.0]))


# ---------------------------------------------------------------------------
# normal score
# ---------------------------------------------------------------------------

def test_normal_score_three_values():
    f = _frame([10.0, 30.0, 20.0])
    spec = pp.fit_normal_score(f)
    out = pp.normal_score(f, spec)
    expected = [ndtri(1 / 6), ndtri(5 / 6), 0.0]
    np.testing.assert_allclose(out.data.ravel(), expected, atol=1e-12)


def test_normal_score_median_is_zero_for_odd_T():
    rng = np.random.default_rng(2)
    x = rng.normal(size=101)
    f = _frame(x)
    out = pp.normal_score(f, pp.fit_normal_score(f))
    median_pos = np.argsort(x)[50]
    assert out.data[median_pos, 0] == 0.0


def test_normal_score_roundtrip_on_fit_data():
    rng = np.random.default_rng(3)
    f = _frame(rng.standard_t(df=4, size=400))
    spec = pp.fit_normal_score(f)
    back = pp.inverse_normal_score(pp.normal_score(f, spec), spec)
    np.testing.assert_allclose(back.data, f.data, atol=1e-9)


def test_normal_score_preserves_ranks():
    rng = np.random.default_rng(4)
    x = rng.exponential(size=300)
    f = _frame(x)
    out = pp.normal_score(f, pp.fit_normal_score(f))
    assert np.array_equal(np.argsort(x), np.argsort(out.data[:, 0]))


def test_normal_score_ties_first_occurrence():
    f = _frame([5.0, 5.0, 1.0])
    out = pp.normal_score(f, pp.fit_normal_score(f))
    # first occurrence of 5.0 ranks below the second
    assert out.data[0, 0] < out.data[1, 0]


def test_normal_score_reference_map_interpolates():
    f = _frame([0.0, 1.0, 2.0, 3.0])
    spec = pp.fit_normal_score(f)
    mid = pp.normal_score_from_reference(_frame([1.5]), spec)
    assert abs(mid.data[0, 0]) < 1e-12  # midpoint maps to the median score


def test_normal_score_constant_column():
    with pytest.raises(ConstantColumn):
        pp.fit_normal_score(_frame([1.0, 1.0, 1.0]))


# ---------------------------------------------------------------------------
# inverse normal CDF
# ---------------------------------------------------------------------------

def test_inv_norm_cdf_half():
    assert pp.inv_norm_cdf(0.5) == 0.0


def test_inv_norm_cdf_975():
    assert abs(pp.inv_norm_cdf(0.975) - 1.959964) < 1e-6


def test_inv_norm_cdf_roundtrip_extreme():
    x = pp.inv_norm_cdf(1e-12)
    assert np.isfinite(x) and x < 0
    assert abs(ndtr(x) - 1e-12) <= 1e-9


def test_inv_norm_cdf_roundtrip_grid():
    u = np.linspace(1e-9, 1 - 1e-9, 1001)
    x = pp.inv_norm_cdf(u)
    assert np.max(np.abs(ndtr(x) - u)) <= 1e-9


def test_inv_norm_cdf_domain():
    for bad in (0.0, 1.0, -0.1, 1.1):
        with pytest.raises(DomainError):
            pp.inv_norm_cdf(bad)


# ---------------------------------------------------------------------------
# binarize16
# ---------------------------------------------------------------------------

def test_binarize_bounds():
    f = _frame([0.0, 1.0])
    spec = pp.fit_binarize16(f, epsilon=0.0)
    bits = pp.binarize16(f, spec)
    assert np.all(bits[0] == 0)  # x_min -> integer 0
    assert np.all(bits[1] == 1)  # x_max -> 65535


def test_binarize_roundtrip_within_step():
    rng = np.random.default_rng(5)
    f = _frame(rng.uniform(-2, 7, size=10000))
    spec = pp.fit_binarize16(f, epsilon=0.0)
    back = pp.debinarize16(pp.binarize16(f, spec), spec)
    step = (spec.hi[0] - spec.lo[0]) / 65535
    assert np.max(np.abs(back.data - f.data)) <= step


def test_binarize_matches_reference_algorithm():
    # independent re-statement of the encode/decode recipe
    rng = np.random.default_rng(6)
    x = rng.uniform(-1, 1, size=50)
    f = _frame(x)
    spec = pp.fit_binarize16(f, epsilon=0.0)
    bits = pp.binarize16(f, spec)
    lo, hi = spec.lo[0], spec.hi[0]
    for value, row in zip(x, bits):
        integer = int(65535 * (value - lo) / (hi - lo))
        expected = [(integer >> (15 - i)) & 1 for i in range(16)]
        assert list(row) == expected
        rebuilt = sum(2 ** (i - 1) * int(row[16 - i]) for i in range(1, 17))
        assert rebuilt == integer


def test_binarize_integer_stage_monotone():
    f = _frame(np.linspace(-3, 3, 500))
    spec = pp.fit_binarize16(f, epsilon=0.0)
    ints = pp.binarize16(f, spec).reshape(500, 16) @ (2 ** np.arange(15, -1, -1.0))
    assert np.all(np.diff(ints) >= 0)


def test_binarize_out_of_bounds():
    f = _frame([0.0, 1.0])
    spec = pp.fit_binarize16(f, epsilon=0.0)
    with pytest.raises(OutOfBounds):
        pp.binarize16(_frame([1.5]), spec)


def test_binarize_multicolumn_width():
    f = _frame([0.0, 1.0], [2.0, 3.0])
    spec = pp.fit_binarize16(f)
    assert pp.binarize16(f, spec).shape == (2, 32)


# ---------------------------------------------------------------------------
# ewma / returns
# ---------------------------------------------------------------------------

def test_ewma_span_one_is_identity():
    f = _frame([1.0, 4.0, 2.0])
    np.testing.assert_array_equal(pp.ewma_prices(f, 1).data, f.data)


def test_ewma_constant_fixed_point():
    f = _frame([3.0] * 10)
    np.testing.assert_allclose(pp.ewma_prices(f, 5).data, f.data)


def test_ewma_span_three():
    f = _frame([1.0, 2.0])
    np.testing.assert_allclose(pp.ewma_prices(f, 3).data.ravel(), [1.0, 1.5])


def test_ewma_convex_combination():
    rng = np.random.default_rng(7)
    f = _frame(rng.uniform(10, 20, size=100))
    s = pp.ewma_prices(f, 7).data[:, 0]
    running_min = np.minimum.accumulate(f.data[:, 0])
    running_max = np.maximum.accumulate(f.data[:, 0])
    assert np.all(s >= running_min - 1e-12) and np.all(s <= running_max + 1e-12)


def test_returns_simple():
    f = _frame([100.0, 110.0])
    np.testing.assert_allclose(pp.returns_from_prices(f).data.ravel(), [0.10])


def test_returns_roundtrip():
    rng = np.random.default_rng(8)
    prices = _frame(100 * np.exp(np.cumsum(rng.normal(0, 0.01, size=300))))
    r = pp.returns_from_prices(prices)
    back = pp.prices_from_returns(r, prices.data[0])
    np.testing.assert_allclose(back.data, prices.data, rtol=1e-10)


def test_zero_returns_constant_prices():
    r = _frame([0.0, 0.0, 0.0])
    out = pp.prices_from_returns(r, 50.0)
    np.testing.assert_allclose(out.data, 50.0)


def test_returns_reject_nonpositive():
    from marketgen.errors import InvalidValue

    with pytest.raises(InvalidValue):
        pp.returns_from_prices(_frame([1.0, 0.0]))
