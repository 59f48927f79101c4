import json

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from fairaudit import ols
from fairaudit.core import Dataset
from fairaudit.errors import (
    ArityMismatch,
    RankDeficient,
    SensitiveForbidden,
    SensitiveRequired,
    Underdetermined,
)
from fairaudit.ols import LinearModel

from conftest import random_dataset


def test_table1_omitted_fit_matches_rounded_values(table1):
    m = ols.fit(table1, include_sensitive=False)
    assert m.intercept == pytest.approx(602, abs=0.5)
    assert m.coefficients[0] == pytest.approx(128, abs=0.5)
    assert not m.includes_sensitive


def test_table1_omitted_fit_exact(table1, table1_fractions):
    x, _, y = table1_fractions
    n = len(x)
    xm, ym = sum(x) / n, sum(y) / n
    slope = sum((a - xm) * (b - ym) for a, b in zip(x, y)) / sum((a - xm) ** 2 for a in x)
    intercept = ym - slope * xm
    m = ols.fit(table1)
    assert m.coefficients[0] == pytest.approx(float(slope), abs=1e-9)
    assert m.intercept == pytest.approx(float(intercept), abs=1e-9)
    assert float(slope) == pytest.approx(127.9931, abs=1e-4)
    assert float(intercept) == pytest.approx(601.6365, abs=1e-4)


def test_table1_full_fit_recovers_generator(table1):
    m = ols.fit(table1, include_sensitive=True)
    assert m.intercept == pytest.approx(1000, abs=1e-6)
    assert m.coefficients[0] == pytest.approx(100, abs=1e-6)
    assert m.sensitive_coefficient == pytest.approx(-500, abs=1e-6)
    assert m.trained_on == {"n": 10, "k": 1, "includes_sensitive": True}
    assert m.condition_estimate >= 1


def test_identical_columns_rank_deficient():
    X = np.column_stack([np.arange(6.0), np.arange(6.0)])
    d = Dataset(X, [0, 1, 0, 1, 0, 1], np.arange(6.0) * 2, ("a", "b"))
    with pytest.raises(RankDeficient):
        ols.fit(d)


def test_sensitive_collinear_with_feature_rank_deficient():
    s = np.array([0, 1, 0, 1, 1.0])
    d = Dataset(s[:, None], s, [1, 2, 3, 4, 5.0], ("x",))
    with pytest.raises(RankDeficient):
        ols.fit(d, include_sensitive=True)


def test_underdetermined():
    d = Dataset([[1.0], [2.0]], [0, 1], [3.0, 4.0], ("x",))
    with pytest.raises(Underdetermined):
        ols.fit(d, include_sensitive=True)


def test_predict_examples():
    full = LinearModel(1000, [100], -500)
    assert ols.predict(full, [1], sensitive=1) == 600
    assert ols.predict(LinearModel(602, [128]), [0]) == 602
    assert ols.predict(LinearModel(750, [100]), [6]) == 1350


def test_predict_errors():
    full = LinearModel(1000, [100], -500)
    with pytest.raises(SensitiveRequired):
        ols.predict(full, [1])
    with pytest.raises(SensitiveForbidden):
        ols.predict(LinearModel(602, [128]), [1], sensitive=0)
    with pytest.raises(ArityMismatch):
        ols.predict(LinearModel(602, [128]), [1, 2])


def test_predict_matrix():
    m = LinearModel(1, [2, 3])
    np.testing.assert_array_equal(ols.predict(m, [[0, 0], [1, 1]]), [1, 6])


def test_residuals_table1(table1):
    full = ols.fit(table1, include_sensitive=True)
    np.testing.assert_allclose(ols.residuals(full, table1), 0, atol=1e-6)

    omitted = ols.fit(table1)
    r = ols.residuals(omitted, table1)
    assert abs(r.sum()) <= 1e-6
    # hand arithmetic: group means of y minus fitted line at group means of x
    ref_mean = 1660 - (601.6365202 + 127.9931094 * 6.6)
    assert ref_mean == pytest.approx(213.609, abs=1e-3)
    assert r[table1.sensitive == 0].mean() == pytest.approx(ref_mean, abs=1e-5)
    assert r[table1.sensitive == 1].mean() == pytest.approx(-ref_mean, abs=1e-5)


def test_residuals_arity(table1):
    with pytest.raises(ArityMismatch):
        ols.residuals(LinearModel(0, [1, 2]), table1)


def test_model_json_round_trip():
    m = LinearModel(1000.5, [100, -2.25], -500, feature_names=("a", "b"))
    data = json.loads(m.to_json())
    assert data == {"intercept": 1000.5, "coefficients": [100, -2.25],
                    "sensitive_coefficient": -500, "feature_names": ["a", "b"]}
    back = LinearModel.from_json(m.to_json())
    assert back.intercept == m.intercept and back.sensitive_coefficient == -500
    np.testing.assert_array_equal(back.coefficients, m.coefficients)
    assert LinearModel.from_dict({"intercept": 1, "coefficients": [2],
                                  "sensitive_coefficient": None}).includes_sensitive is False


seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=100)
@given(seeds, st.integers(1, 4), st.booleans())
def test_normal_equation_optimality(seed, k, with_s):
    rng = np.random.default_rng(seed)
    d = random_dataset(rng, n=int(rng.integers(k + 3, 80)), k=k)
    try:
        m = ols.fit(d, include_sensitive=with_s)
    except RankDeficient:
        assume(False)
    A = ols.design_matrix(d, with_s)
    r = ols.residuals(m, d)
    scale = np.abs(A).max(axis=0) * max(1.0, np.abs(d.target).max())
    assert np.all(np.abs(A.T @ r) <= 1e-6 * d.n * scale)


@settings(max_examples=100)
@given(seeds, st.integers(1, 4))
def test_exact_recovery_noise_free(seed, k):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(k + 2, 100))
    X = rng.uniform(-10, 10, size=(n, k))
    s = (rng.uniform(size=n) < 0.5).astype(float)
    s[:2] = [0, 1]
    b0, b, beta = rng.uniform(-100, 100), rng.uniform(-50, 50, size=k), rng.uniform(-100, 100)
    d = Dataset(X, s, b0 + X @ b + beta * s, tuple(f"x{j}" for j in range(k)))
    try:
        m = ols.fit(d, include_sensitive=True)
    except RankDeficient:
        assume(False)
    assume(m.condition_estimate < 1e4)
    assert m.intercept == pytest.approx(b0, abs=1e-6)
    np.testing.assert_allclose(m.coefficients, b, atol=1e-6)
    assert m.sensitive_coefficient == pytest.approx(beta, abs=1e-6)


finite = st.floats(-1e3, 1e3, allow_nan=False)


@given(finite, st.lists(finite, min_size=1, max_size=4), st.floats(-100, 100), st.data())
def test_prediction_linearity(b0, coef, alpha, data):
    x = np.array(data.draw(st.lists(finite, min_size=len(coef), max_size=len(coef))))
    m = LinearModel(b0, coef)
    base = ols.predict(m, np.zeros(len(coef)))
    lhs = ols.predict(m, alpha * x) - base
    rhs = alpha * (ols.predict(m, x) - base)
    scale = 1 + abs(b0) + abs(alpha) * float(np.abs(coef) @ np.abs(x))
    assert abs(lhs - rhs) <= 1e-9 * scale


@settings(max_examples=100)
@given(seeds, st.sampled_from([-1000.0, -3.0, 0.01, 7.5, 250.0]))
def test_scaling_covariance(seed, c):
    rng = np.random.default_rng(seed)
    d = random_dataset(rng, n=40, k=2)
    m = ols.fit(d)
    X2 = d.features.copy()
    X2[:, 0] *= c
    d2 = Dataset(X2, d.sensitive, d.target, d.feature_names)
    m2 = ols.fit(d2)
    assert m2.coefficients[0] == pytest.approx(m.coefficients[0] / c, rel=1e-6)
    np.testing.assert_allclose(ols.predict(m2, X2), ols.predict(m, d.features), atol=1e-6)
