import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from condent import DomainError, entropy, validate
from condent.asymptotics import (
    bound_constant,
    bound_normalizer,
    confidence_interval,
    covariance_matrix,
    gradient,
    profile,
    sup_deviation,
    variance_delta,
    variance_paper,
    variance_total_paper,
)
from condent.exact import Direction, Family

from .conftest import strict_pmfs

ALPHAS = (0.25, 0.5, 2.0, 3.0, 10.0)
CONDITIONAL = [(Family.SHANNON, None)] + [(f, a) for f in (Family.RENYI, Family.TSALLIS) for a in ALPHAS]


def uniform(r, s):
    return validate([1.0 / (r * s)] * (r * s), r, s)


def test_bound_constant_uniform_shannon():
    assert bound_constant(uniform(2, 3), "shannon") == pytest.approx(6 * abs(1 - math.log(6)), abs=1e-12)
    assert bound_constant(uniform(2, 3), "shannon") == pytest.approx(4.7505568153683300049, abs=1e-12)


def test_bound_constant_zipf_shannon(zipf):
    assert bound_constant(zipf, "shannon") == pytest.approx(10.757333727933674479, abs=1e-12)


def test_bound_constant_uniform_renyi():
    assert bound_constant(uniform(2, 2), "renyi", 2, "yx") == pytest.approx(12.0, abs=1e-12)


def test_bound_constant_tsallis_brute_force(zipf):
    p, a = zipf.probs, 0.5
    m = zipf.table.sum(axis=1)
    sz, sm = sum(x**a for x in p), sum(x**a for x in m)
    want = a / (0.5 * sm) * (sz / sm * sum(x ** (a - 1) for x in m) + sum(x ** (a - 1) for x in p))
    assert bound_constant(zipf, "tsallis", a, "yx") == pytest.approx(want, rel=1e-13)


@pytest.mark.parametrize("family, direction, name", [
    ("shannon", "yx", "a_Z"), ("renyi", "yx", "a_X"), ("renyi", "xy", "a_Y"), ("tsallis", "xy", "a_Z"),
])
def test_bound_normalizer(family, direction, name):
    assert bound_normalizer(family, direction) == name


def test_paper_variance_uniform_closed_form():
    m, c = 6, 1 - math.log(6)
    want = c**2 * (m - 1) * (m - 2) / m**2
    assert variance_total_paper(uniform(2, 3), "shannon", None, "yx") == pytest.approx(want, abs=1e-12)
    assert want == pytest.approx(0.34826836506238409652, abs=1e-15)


def test_paper_variance_renyi_joint_component(zipf):
    # pinned from a 40-digit evaluation of the printed joint component
    parts = variance_paper(zipf, "renyi", 2, "yx")
    assert parts.joint == pytest.approx(-2.3215458257120732209, abs=1e-12)
    assert parts.total == pytest.approx(parts.marginal + parts.joint + 2 * parts.cross, abs=1e-15)


@settings(max_examples=100, deadline=None)
@given(strict_pmfs())
def test_paper_shannon_first_term_nonnegative(pmf):
    p = pmf.probs
    assert float(np.sum(p * (1 - p) * (1 + np.log(p)) ** 2)) >= 0


def test_variance_delta_zipf(zipf):
    p = zipf.probs
    h = -np.sum(p * np.log(p))
    assert variance_delta(zipf, "shannon", None, "joint") == pytest.approx(np.sum(p * np.log(p) ** 2) - h**2, abs=1e-13)
    assert variance_delta(zipf, "shannon", None, "joint") == pytest.approx(1.0783668015414299081, abs=1e-13)
    cond = zipf.table / zipf.table.sum(axis=1, keepdims=True)
    h_yx = entropy(zipf, "shannon", None, "yx").value
    want = np.sum(zipf.table * np.log(cond) ** 2) - h_yx**2
    assert variance_delta(zipf, "shannon", None, "yx") == pytest.approx(want, abs=1e-13)
    assert variance_delta(zipf, "shannon", None, "yx") == pytest.approx(0.27153401366819473091, abs=1e-13)


@pytest.mark.parametrize("r, s", [(2, 3), (4, 4)])
def test_variance_delta_uniform_joint_is_zero(r, s):
    assert abs(variance_delta(uniform(r, s), "shannon", None, "joint")) <= 1e-12


def test_uniform_formulas_disagree():
    assert variance_total_paper(uniform(2, 3), "shannon") > 0.3
    assert abs(variance_delta(uniform(2, 3), "shannon", None, "yx")) <= 1e-12


def _functional(pmf, family, alpha, direction):
    def f(q):
        t = validate(q / q.sum(), pmf.r, pmf.s)
        return entropy(t, family, alpha, direction).value
    return f


@settings(max_examples=40, deadline=None)
@given(strict_pmfs(max_dim=4), st.sampled_from(CONDITIONAL + [(Family.RENYI, 2.0)]), st.sampled_from(list(Direction)))
def test_delta_variance_matches_finite_differences(pmf, fam_alpha, direction):
    family, alpha = fam_alpha
    f = _functional(pmf, family, alpha, direction)
    p = pmf.probs.copy()
    h = 1e-6
    # derivative along each cell, renormalising so the path stays on the simplex
    fd = np.array([(f(p + h * e) - f(p - h * e)) / (2 * h) for e in np.eye(p.size)])
    c = covariance_matrix(pmf).multinomial
    want = float(fd @ c @ fd)
    assert variance_delta(pmf, family, alpha, direction) == pytest.approx(want, rel=1e-5, abs=1e-8)


@settings(max_examples=60, deadline=None)
@given(strict_pmfs(), st.sampled_from(CONDITIONAL), st.sampled_from(["yx", "xy"]))
def test_delta_variance_equals_explicit_quadratic_form(pmf, fam_alpha, direction):
    family, alpha = fam_alpha
    g = gradient(pmf, family, alpha, direction)
    c = covariance_matrix(pmf).multinomial
    v = variance_delta(pmf, family, alpha, direction)
    assert v == pytest.approx(float(g @ c @ g), rel=1e-9, abs=1e-12)
    assert v >= -1e-12


@settings(max_examples=60, deadline=None)
@given(strict_pmfs(), st.sampled_from(CONDITIONAL))
def test_x_given_y_is_y_given_x_of_transpose(pmf, fam_alpha):
    family, alpha = fam_alpha
    t = pmf.transpose()
    assert variance_delta(pmf, family, alpha, "xy") == pytest.approx(
        variance_delta(t, family, alpha, "yx"), rel=1e-10, abs=1e-13)
    assert variance_total_paper(pmf, family, alpha, "xy") == pytest.approx(
        variance_total_paper(t, family, alpha, "yx"), rel=1e-10, abs=1e-12)
    assert bound_constant(pmf, family, alpha, "xy") == pytest.approx(
        bound_constant(t, family, alpha, "yx"), rel=1e-12)


def test_covariance_matrix_shape(zipf):
    c = covariance_matrix(zipf)
    assert c.dimension == 6
    np.testing.assert_allclose(c.multinomial.sum(axis=1), 0, atol=1e-15)
    np.testing.assert_allclose(np.diag(c.normalized), 1 - zipf.probs)


def test_confidence_interval_examples():
    assert confidence_interval(0.3, 0.0, 50, 0.9) == (0.3, 0.3)
    lo, hi = confidence_interval(0.0, 1.0, 10000, 0.95)
    assert hi == pytest.approx(0.019599639845400542355, abs=1e-12) and lo == -hi
    lo, hi = confidence_interval(1.0, 4.0, 4, 0.5)
    assert hi - 1.0 == pytest.approx(0.67448975019608174320, abs=1e-12)


@pytest.mark.parametrize("args", [(0, 1, 10, 1.5), (0, 1, 10, 0), (0, -1, 10, 0.9), (0, 1, 0, 0.9)])
def test_confidence_interval_rejects(args):
    with pytest.raises(DomainError):
        confidence_interval(*args)


def test_sup_deviation_examples(uniform22, zipf):
    assert sup_deviation(uniform22, uniform22) == (0.0, 0.0, 0.0)
    emp = validate([0.5, 0.5, 0, 0], 2, 2, mode="empirical")
    assert sup_deviation(emp, uniform22) == (0.25, 0.5, 0.0)
    with pytest.raises(DomainError):
        sup_deviation(zipf, uniform22)


def test_sup_deviation_zipf_draws(zipf):
    from condent import empirical_joint, sample

    emp = empirical_joint(sample(zipf, 30000, 11))
    assert sup_deviation(emp, zipf)[0] < 0.01


def test_strict_zero_cell_is_rejected():
    pmf = validate([0.5, 0.5, 0, 0], 2, 2, mode="empirical")
    object.__setattr__(pmf, "mode", pmf.mode.__class__("strict"))
    with pytest.raises(DomainError):
        variance_delta(pmf, "shannon")


def test_profile(zipf):
    prof = profile(zipf, "renyi", 2, "yx")
    assert prof.bound_normalizer == "a_X"
    assert prof.variance_delta > 0 and prof.variance_paper < 0
    d = prof.to_dict()
    assert d["family"] == "renyi" and d["components"]["joint"] == prof.components.joint
    with pytest.raises(DomainError):
        profile(zipf, "shannon", None, "joint")
