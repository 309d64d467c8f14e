import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from condent import DomainError, Direction, Family, check_identities, entropy, validate
from condent.exact import (
    check_alpha,
    conditional_renyi,
    conditional_shannon,
    conditional_tsallis,
    power_sum,
    renyi,
    shannon,
    tsallis,
)
from condent.pmf import Axis, marginal

from .conftest import ZIPF_WEIGHTS, oracle_conditional_shannon, oracle_power_ratio, oracle_table, strict_pmfs

ALPHAS = (0.25, 0.5, 2.0, 3.0, 10.0)

# 40-digit reference values for the Zipf(2, 6) table laid out 3x2
H_JOINT = 1.065056537297602988
S2_JOINT = 0.48606406520798936771
H_YX = 0.52623136355032540501
H_XY = 0.52801103096026378113


def test_shannon_uniform6():
    assert shannon([1 / 6] * 6) == pytest.approx(math.log(6), abs=1e-15)


def test_shannon_point_mass():
    assert shannon([0, 1, 0]) == 0.0


def test_shannon_zipf_flat(zipf):
    assert shannon(zipf.probs) == pytest.approx(H_JOINT, abs=1e-14)


def test_power_sum_examples(zipf):
    assert power_sum(zipf.probs, 1.0) == pytest.approx(1.0, abs=1e-15)
    assert power_sum([0.25] * 4, 3.0) == pytest.approx(4.0 ** -2, abs=1e-16)
    assert power_sum(zipf.probs, 2.0) == pytest.approx(S2_JOINT, abs=1e-15)
    # exact rational check: sum w^2 / 5369^2
    assert power_sum(zipf.probs, 2.0) == pytest.approx(sum(w * w for w in ZIPF_WEIGHTS) / 5369**2, rel=1e-14)


def test_power_sum_rejects_nonpositive_alpha():
    with pytest.raises(DomainError):
        power_sum([0.5, 0.5], 0.0)


def test_conditional_zipf_reference(zipf):
    assert conditional_shannon(zipf, "yx") == pytest.approx(0.52623, abs=1e-4)
    assert conditional_renyi(zipf, 2, "yx") == pytest.approx(0.39027, abs=1e-4)
    assert conditional_tsallis(zipf, 2, "yx") == pytest.approx(0.32312, abs=1e-4)
    assert conditional_renyi(zipf, 2, "xy") == pytest.approx(0.28723, abs=1e-4)
    assert conditional_tsallis(zipf, 2, "xy") == pytest.approx(0.24966, abs=1e-4)


def test_conditional_shannon_matches_brute_force(zipf):
    table = oracle_table(zipf)
    assert conditional_shannon(zipf, "yx") == pytest.approx(H_YX, abs=1e-14)
    assert conditional_shannon(zipf, "xy") == pytest.approx(H_XY, abs=1e-14)
    assert conditional_shannon(zipf, "xy") == pytest.approx(oracle_conditional_shannon(table, "Y"), abs=1e-14)


def test_x_given_y_is_not_the_quoted_0_64150(zipf):
    assert abs(conditional_shannon(zipf, "xy") - 0.64150) > 0.1


def test_independent_product_gives_marginal_entropy():
    px, py = np.array([0.2, 0.3, 0.5]), np.array([0.1, 0.6, 0.3])
    pmf = validate(np.outer(px, py).ravel(), 3, 3)
    assert conditional_shannon(pmf, "yx") == pytest.approx(shannon(py), abs=1e-14)
    assert conditional_renyi(pmf, 2, "yx") == pytest.approx(renyi(py, 2), abs=1e-14)


def test_alpha_one_is_rejected(zipf):
    with pytest.raises(DomainError, match="alpha=1: request Shannon"):
        conditional_renyi(zipf, 1.0)
    with pytest.raises(DomainError, match="alpha=1"):
        entropy(zipf, "tsallis", 1, "yx")


@pytest.mark.parametrize("alpha", [0, -1, math.inf, math.nan])
def test_check_alpha_rejects(alpha):
    with pytest.raises(DomainError):
        check_alpha(alpha)


@pytest.mark.parametrize("delta", [1e-4, -1e-4])
def test_renyi_near_one_approaches_shannon(zipf, delta):
    assert abs(conditional_renyi(zipf, 1 + delta) - conditional_shannon(zipf)) < 1e-3


def test_entropy_dispatch(zipf):
    ev = entropy(zipf, "shannon", 2.0, "joint")
    assert ev.alpha is None and ev.family is Family.SHANNON
    assert float(ev) == pytest.approx(H_JOINT, abs=1e-14)
    assert entropy(zipf, "renyi", 2, "x").value == pytest.approx(renyi(marginal(zipf, Axis.X), 2))
    assert entropy(zipf, "tsallis", 2, Direction.MARGINAL_Y).value == pytest.approx(
        tsallis(marginal(zipf, Axis.Y), 2))


def test_identities_zipf(zipf):
    rep = check_identities(zipf, 2)
    assert rep.max_residual() <= 1e-12
    assert rep.monotonicity_slack >= 0


def test_identities_uniform(uniform22):
    assert check_identities(uniform22, 0.5).max_residual() <= 1e-12


def test_identities_random_4x5():
    rng = np.random.default_rng(20240611)
    for _ in range(20):
        w = rng.uniform(0.01, 1, 20)
        pmf = validate(w / w.sum(), 4, 5)
        assert check_identities(pmf, 3).max_residual() <= 1e-10


def test_empirical_zero_cells_are_skipped():
    pmf = validate([0.5, 0.0, 0.25, 0.25, 0.0, 0.0], 3, 2, mode="empirical")
    assert conditional_shannon(pmf, "yx") == pytest.approx(0.5 * math.log(2))
    assert conditional_renyi(pmf, 2, "yx") == pytest.approx(-math.log(0.375 / 0.5))


@settings(max_examples=200, deadline=None)
@given(strict_pmfs(), st.sampled_from(ALPHAS))
def test_chain_rules(pmf, alpha):
    mx = marginal(pmf, Axis.X)
    assert abs(conditional_shannon(pmf) - (shannon(pmf.probs) - shannon(mx))) <= 1e-12
    assert abs(conditional_renyi(pmf, alpha) - (renyi(pmf.probs, alpha) - renyi(mx, alpha))) <= 1e-12


@settings(max_examples=200, deadline=None)
@given(strict_pmfs(), st.sampled_from(ALPHAS))
def test_pseudo_additivity_and_transform(pmf, alpha):
    rep = check_identities(pmf, alpha)
    assert abs(rep.pseudo_additivity) <= 1e-12
    assert abs(rep.tsallis_renyi) <= 1e-12


@settings(max_examples=200, deadline=None)
@given(strict_pmfs())
def test_monotonicity_and_range(pmf):
    hx, hy = shannon(marginal(pmf, Axis.X)), shannon(marginal(pmf, Axis.Y))
    h_yx, h_xy = conditional_shannon(pmf, "yx"), conditional_shannon(pmf, "xy")
    assert h_xy <= hx + 1e-12 and h_yx <= hy + 1e-12
    assert -1e-12 <= h_yx <= math.log(pmf.s) + 1e-12
    assert -1e-12 <= h_xy <= math.log(pmf.r) + 1e-12


@settings(max_examples=100, deadline=None)
@given(strict_pmfs(), st.randoms(use_true_random=False), st.sampled_from(ALPHAS))
def test_row_permutation_invariance(pmf, rnd, alpha):
    order = list(range(pmf.r))
    rnd.shuffle(order)
    perm = validate(pmf.table[order].ravel(), pmf.r, pmf.s)
    for d in ("yx", "xy"):
        assert abs(conditional_shannon(perm, d) - conditional_shannon(pmf, d)) <= 1e-12
        assert abs(conditional_renyi(perm, alpha, d) - conditional_renyi(pmf, alpha, d)) <= 1e-12
        assert abs(conditional_tsallis(perm, alpha, d) - conditional_tsallis(pmf, alpha, d)) <= 1e-12


@settings(max_examples=100, deadline=None)
@given(strict_pmfs(), st.sampled_from(ALPHAS))
def test_matches_loop_oracle(pmf, alpha):
    table = oracle_table(pmf)
    for given_axis, d in (("X", "yx"), ("Y", "xy")):
        assert conditional_shannon(pmf, d) == pytest.approx(oracle_conditional_shannon(table, given_axis), abs=1e-12)
        ratio = oracle_power_ratio(table, alpha, given_axis)
        assert conditional_tsallis(pmf, alpha, d) == pytest.approx((ratio - 1) / (1 - alpha), abs=1e-11)


@settings(max_examples=100, deadline=None)
@given(strict_pmfs())
def test_renyi_is_continuous_at_one(pmf):
    h = conditional_shannon(pmf)
    for eps in (1e-3, 1e-4, -1e-4, -1e-3):
        # first-order: the gap shrinks linearly in |alpha - 1|
        assert abs(conditional_renyi(pmf, 1 + eps) - h) <= 50 * abs(eps)


@settings(max_examples=100, deadline=None)
@given(strict_pmfs(), st.sampled_from(ALPHAS))
def test_values_are_nonnegative(pmf, alpha):
    for fam in Family:
        for d in Direction:
            assert entropy(pmf, fam, alpha, d).value >= -1e-12
