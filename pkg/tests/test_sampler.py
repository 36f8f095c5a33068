import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from grapheff.metrics import pearson
from grapheff.sampler import (CorrelatedTable, CorrelationSpec, Gaussian, PropertySpec,
                              SpecError, Uniform, compose_label_variable,
                              discretize_labels, three_property_spec, generate_correlated_table,
                              realize_properties, sample_latents, single_property_spec,
                              validate_spec)


def spec_with(rs, families=None, n=4096, classes=2):
    families = families or [Gaussian(0.0, 1.0)] * len(rs)
    return CorrelationSpec(tuple(PropertySpec(f, r) for f, r in zip(families, rs)),
                           classes, 1.0, n)


@pytest.mark.parametrize("rs", [(0.6, 0.8), (-0.7, 0.1, 0.7), (0.0,), (1.0,)])
def test_validate_accepts(rs):
    assert validate_spec(spec_with(rs)) is not None


@pytest.mark.parametrize("rs", [(0.8, 0.8), (1.1,), (0.5, 0.5, 0.5, 0.6)])
def test_validate_rejects_correlations(rs):
    with pytest.raises(SpecError, match="correlation|outside"):
        validate_spec(spec_with(rs))


@pytest.mark.parametrize("family", [Gaussian(0, 0), Gaussian(1, -1), Uniform(3, 3), Uniform(4, 1)])
def test_validate_rejects_distributions(family):
    with pytest.raises(SpecError):
        validate_spec(spec_with((0.5,), [family]))


def test_validate_rejects_counts():
    with pytest.raises(SpecError, match="label_classes"):
        validate_spec(spec_with((0.5,), classes=1))
    with pytest.raises(SpecError, match="sample_count"):
        validate_spec(spec_with((0.5,), n=1))


def test_latents_have_unit_variance():
    lat = sample_latents(spec_with((0.3, 0.3), n=100_000), seed=1)
    assert lat.shape == (3, 100_000)
    for row in lat:
        assert 0.97 <= row.var() <= 1.03


def test_uniform_latents_are_bounded():
    lat = sample_latents(spec_with((0.5,), [Uniform(0, 1)], n=10_000), seed=2)
    assert np.all(np.abs(lat[1]) <= math.sqrt(3))
    assert 0.97 <= lat[1].var() <= 1.03


def test_latents_deterministic():
    s = three_property_spec()
    assert np.array_equal(sample_latents(s, 5), sample_latents(s, 5))
    assert not np.array_equal(sample_latents(s, 5), sample_latents(s, 6))


def test_latents_pairwise_uncorrelated():
    lat = sample_latents(three_property_spec(), seed=0)
    for i in range(lat.shape[0]):
        for j in range(i + 1, lat.shape[0]):
            assert abs(pearson(lat[i], lat[j])) <= 0.05


def test_realize_gaussian():
    s = spec_with((0.0,), [Gaussian(5, 2)], n=3)
    lat = np.array([[0.0, 0.0, 0.0], [0.0, 1.0, -1.0]])
    assert realize_properties(s, lat)[0].tolist() == [5.0, 7.0, 3.0]


def test_realize_uniform_moments():
    s = spec_with((0.0,), [Uniform(0, 12)], n=100_000)
    p = realize_properties(s, sample_latents(s, 3))[0]
    assert p.min() >= 0 and p.max() <= 12
    assert p.mean() == pytest.approx(6.0, rel=0.02)
    assert p.std() == pytest.approx(12 / math.sqrt(12), rel=0.02)


def test_label_variable_exact_for_unit_correlation():
    s = CorrelationSpec((PropertySpec(Gaussian(0, 1), 1.0),), 2, 2.5, 100)
    lat = sample_latents(s, 0)
    assert np.allclose(compose_label_variable(s, lat), 2.5 * lat[1])


def test_label_variable_variance():
    s = CorrelationSpec((PropertySpec(Uniform(0, 1), 0.6), PropertySpec(Gaussian(0, 1), -0.3)),
                        2, 3.0, 100_000)
    y = compose_label_variable(s, sample_latents(s, 4))
    assert y.var() / 9.0 == pytest.approx(1.0, abs=0.03)


def test_zero_correlation_gives_uncorrelated_label():
    s = spec_with((0.0,))
    t = generate_correlated_table(s, 11)
    assert abs(pearson(t.property_targets[0], t.continuous_label)) <= 0.05
    assert abs(pearson(t.property_targets[0], t.labels)) <= 0.05


def test_three_property_correlations_over_seeds():
    s = three_property_spec()
    bound = 3 / math.sqrt(s.sample_count)
    for seed in range(20):
        t = generate_correlated_table(s, seed)
        for k, r in enumerate(s.targets):
            assert abs(pearson(t.property_targets[k], t.continuous_label) - r) <= bound


def test_discretize_examples():
    assert discretize_labels([0, 0.5, 1], 2).tolist() == [0, 1, 1]
    with pytest.raises(SpecError):
        discretize_labels([3.0, 3.0, 3.0], 2)
    t = generate_correlated_table(three_property_spec(classes=11), 0)
    assert t.labels.min() == 0 and t.labels.max() == 10


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-1e6, 1e6), min_size=2, max_size=200), st.integers(2, 20))
def test_discretize_range(values, classes):
    y = np.array(values)
    if y.max() == y.min():
        return
    lab = discretize_labels(y, classes)
    assert lab.min() == 0 and lab.max() == classes - 1
    # order preserving
    order = np.argsort(y, kind="stable")
    assert np.all(np.diff(lab[order]) >= 0)


def test_binary_label_attenuation_frozen():
    # frozen from a measured run; close to 0.9 * sqrt(2 / pi) = 0.718 for a
    # Gaussian split at its midpoint
    t = generate_correlated_table(single_property_spec(Gaussian(0, 1), 0.9, 2, 4096), 0)
    r = pearson(t.property_targets[0], t.labels)
    assert r > 0.6
    assert r == pytest.approx(0.7129, abs=1e-3)


def test_table_deterministic_and_csv_roundtrip():
    s = three_property_spec(n=50)
    a, b = generate_correlated_table(s, 9), generate_correlated_table(s, 9)
    assert np.array_equal(a.labels, b.labels)
    assert np.array_equal(a.property_targets, b.property_targets)
    text = a.to_csv()
    assert text.splitlines()[0] == "p_1,p_2,p_3,y_cont,label"
    back = CorrelatedTable.from_csv(text)
    assert np.array_equal(back.property_targets, a.property_targets)
    assert np.array_equal(back.continuous_label, a.continuous_label)
    assert np.array_equal(back.labels, a.labels)


def test_spec_dict_roundtrip():
    s = three_property_spec()
    assert CorrelationSpec.from_dict(s.to_dict()) == s


def test_three_property_trends_by_label():
    # per-label medians follow the sign of each target correlation
    t = generate_correlated_table(three_property_spec(classes=11), 0)
    med = lambda k: [np.median(t.property_targets[k][t.labels == c])
                     for c in range(2, 9)]   # well-populated middle classes
    assert np.all(np.diff(med(0)) < 0)
    assert np.all(np.diff(med(2)) > 0)
