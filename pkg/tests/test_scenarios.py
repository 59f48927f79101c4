import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fairaudit import ols
from fairaudit.bias import bias_report
from fairaudit.core import summarize, to_csv_text
from fairaudit.errors import InvalidSpec
from fairaudit.measures import mean_difference
from fairaudit.scenarios import (
    FeatureDistribution,
    ScenarioSpec,
    generate,
    table1_fixture,
    table1_spec,
)

U = FeatureDistribution.uniform
N = FeatureDistribution.normal


def make_spec(**overrides):
    base = dict(
        true_intercept=1000.0,
        true_coefficients=(100.0,),
        true_beta=-500.0,
        noise_std=10.0,
        n_reference=50,
        n_protected=50,
        feature_distributions={"reference": [U(4, 12)], "protected": [U(0, 8)]},
        pathologies=frozenset({"label_bias"}),
        seed=7,
    )
    base.update(overrides)
    return ScenarioSpec(**base)


def test_table1_fixture_rows():
    d = table1_fixture()
    assert (d.features[0, 0], d.sensitive[0], d.target[0]) == (1, 1, 600)
    assert (d.features[5, 0], d.sensitive[5], d.target[5]) == (1, 0, 1100)
    assert summarize(d).sensitive_mean == 0.5
    assert (d.feature_names, d.sensitive_name, d.target_name) == (("education",), "ethnicity", "salary")


def test_table1_spec_regenerates_fixture():
    d, ref = generate(table1_spec()), table1_fixture()
    np.testing.assert_array_equal(d.features, ref.features)
    np.testing.assert_array_equal(d.sensitive, ref.sensitive)
    np.testing.assert_array_equal(d.target, ref.target)
    assert to_csv_text(d) == to_csv_text(ref)


def test_beta_zero_mean_difference():
    spec = make_spec(true_beta=0.0, noise_std=0.0)
    d = generate(spec)
    x = d.features[:, 0]
    expected = 100 * (x[d.sensitive == 0].mean() - x[d.sensitive == 1].mean())
    assert mean_difference(d.target, d.sensitive) == pytest.approx(expected, abs=1e-9)


def test_large_correlated_scenario_bias_report():
    spec = make_spec(
        true_coefficients=(100.0, 20.0),
        noise_std=50.0,
        n_reference=5000,
        n_protected=5000,
        feature_distributions={
            "reference": [N(12, 3), U(0, 10)],
            "protected": [N(9, 3), U(2, 12)],
        },
    )
    d = generate(spec)
    rep = bias_report(d)
    assert rep.agreement <= 1e-6
    # single-feature view: Delta from the moment formula vs the fitted difference
    one = type(d)(d.features[:, :1], d.sensitive, d.target, ("x1",))
    rep1 = bias_report(one)
    st_ = summarize(one)
    moment_delta = rep1.beta * st_.cov_feature_sensitive[0] / st_.feature_variances[0]
    fitted_delta = rep1.empirical_omitted_coefficients[0] - ols.fit(one, True).coefficients[0]
    assert fitted_delta == pytest.approx(moment_delta, abs=1e-2)


def test_determinism_and_seed_sensitivity():
    a, b = generate(make_spec()), generate(make_spec())
    assert to_csv_text(a) == to_csv_text(b)
    c = generate(make_spec(seed=8))
    assert not np.array_equal(a.target, c.target)


def test_omit_sensitive_at_export():
    d = generate(make_spec(pathologies=frozenset({"label_bias", "omit_sensitive_at_export"})))
    assert d.sensitive_hidden
    assert set(d.sensitive) == {0.0, 1.0}
    assert to_csv_text(d).splitlines()[0] == "x1,y"


def test_label_bias_off_removes_direct_effect():
    d = generate(make_spec(pathologies=frozenset(), noise_std=0.0))
    m = ols.fit(d, include_sensitive=True)
    assert abs(m.sensitive_coefficient) <= 1e-6


def test_sample_skew():
    d = generate(make_spec(n_reference=80, n_protected=20, pathologies=frozenset({"label_bias", "sample_skew"})))
    assert (d.sensitive == 1).sum() == 20
    with pytest.raises(InvalidSpec, match="sample_skew"):
        generate(make_spec(n_reference=80, n_protected=20))
    with pytest.raises(InvalidSpec, match="sample_skew"):
        generate(make_spec(pathologies=frozenset({"sample_skew"})))


def test_single_group_needs_flag():
    with pytest.raises(InvalidSpec):
        generate(make_spec(n_protected=0, pathologies=frozenset({"sample_skew"})))
    d = generate(make_spec(n_protected=0, pathologies=frozenset({"sample_skew"}), allow_single_group=True))
    assert d.n == 50 and not d.sensitive.any()


@pytest.mark.parametrize(
    "overrides",
    [
        {"noise_std": -1.0},
        {"n_reference": 1, "n_protected": 0, "allow_single_group": True, "pathologies": frozenset({"sample_skew"})},
        {"true_coefficients": (1.0, 2.0)},
        {"feature_distributions": {"reference": [U(5, 1)], "protected": [U(0, 8)]}},
        {"feature_distributions": {"reference": [N(0, -1)], "protected": [U(0, 8)]}},
        {"feature_distributions": {"reference": [FeatureDistribution.fixed([1, 2])], "protected": [U(0, 8)]}},
        {"feature_distributions": {"reference": [{"kind": "poisson"}], "protected": [U(0, 8)]}},
        {"pathologies": frozenset({"drift"})},
        {"row_order": "shuffled"},
        {"feature_names": ("y",)},
    ],
)
def test_invalid_specs(overrides):
    with pytest.raises(InvalidSpec):
        generate(make_spec(**overrides))


def test_spec_json_round_trip():
    spec = make_spec(feature_distributions={"reference": [N(1, 2)], "protected": [FeatureDistribution.fixed([1.0] * 50)]})
    back = ScenarioSpec.from_json(spec.to_json())
    assert back == spec
    assert to_csv_text(generate(back)) == to_csv_text(generate(spec))
    assert json.loads(spec.to_json())["pathologies"] == ["label_bias"]


def test_spec_from_json_rejects_garbage():
    with pytest.raises(InvalidSpec):
        ScenarioSpec.from_json("{not json")
    with pytest.raises(InvalidSpec):
        ScenarioSpec.from_json('{"bogus": 1}')
    with pytest.raises(InvalidSpec):
        ScenarioSpec.from_json('{"true_intercept": 1}')


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**31), st.integers(1, 3), st.floats(-100, 100), st.integers(5, 60))
def test_generative_consistency(seed, k, beta, n_each):
    rng = np.random.default_rng(seed)
    spec = make_spec(
        true_intercept=float(rng.uniform(-100, 100)),
        true_coefficients=tuple(rng.uniform(-10, 10, size=k)),
        true_beta=beta,
        noise_std=0.0,
        n_reference=n_each,
        n_protected=n_each,
        feature_distributions={
            "reference": [U(0, 10)] * k,
            "protected": [N(3, 2)] * k,
        },
        seed=seed,
    )
    d = generate(spec)
    m = ols.fit(d, include_sensitive=True)
    assert m.intercept == pytest.approx(spec.true_intercept, abs=1e-6)
    np.testing.assert_allclose(m.coefficients, spec.true_coefficients, atol=1e-6)
    assert m.sensitive_coefficient == pytest.approx(beta, abs=1e-6)

    st_ = summarize(d)
    assert np.all(st_.cov_feature_sensitive**2 <= st_.feature_variances * st_.sensitive_variance + 1e-9)
