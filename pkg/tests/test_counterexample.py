import numpy as np
import pytest

from helpers import dina_core, random_core, random_gdina_reg
from lcmid.counterexample import (
    CounterexampleError,
    analytic_direction,
    choose_target,
    construct_pair,
    finite_difference_direction,
    verify_distribution_equality,
)
from lcmid.matrices import build_jacobian
from lcmid.model import CoreParams, QMatrix, attribute_profiles, enumerate_patterns, zero_covariate_params

P1_Q = QMatrix(np.array([[1, 0], [0, 1], [0, 1]]))
MIXED_Q = QMatrix(np.array([[1, 0], [0, 1], [0, 1], [1, 1]]))


def test_e_equal_one_is_identity():
    params = dina_core(P1_Q)
    pair = construct_pair(params, P1_Q, 1.0)
    np.testing.assert_array_equal(pair.perturbed.eta, params.eta)
    for a, b in zip(pair.perturbed.theta, params.theta):
        np.testing.assert_array_equal(a, b)


def test_p1_example_three_items():
    params = dina_core(P1_Q)
    pair = construct_pair(params, P1_Q, 1.1)
    assert pair.lone_attribute == 0 and pair.lone_item == 0
    ok, dev = verify_distribution_equality(pair.original, pair.perturbed, tol=1e-12)
    assert ok and dev < 1e-12
    assert pair.theta_deviation >= 0.005
    # all class pairs differing in attribute 0 are used
    assert pair.class_pairs == ((0, 2), (1, 3))


def test_equal_theta_moves_only_eta():
    Q = P1_Q
    params = dina_core(Q, guess=0.3, slip=0.7)  # 1 - slip == guess: item 0 cannot tell the classes apart
    pair = construct_pair(params, Q, 1.1)
    for a, b in zip(pair.perturbed.theta, params.theta):
        np.testing.assert_allclose(a, b, atol=1e-15)
    assert pair.eta_deviation > 0
    assert verify_distribution_equality(pair.original, pair.perturbed)[0]


def test_mixed_q_uses_only_admissible_pair():
    params = dina_core(MIXED_Q)
    k, j, pairs = choose_target(params, MIXED_Q)
    assert (k, j) == (0, 0)
    assert pairs == [(0, 2)]
    pair = construct_pair(params, MIXED_Q, 1.1)
    np.testing.assert_array_equal(pair.perturbed.eta[[1, 3]], params.eta[[1, 3]])


def test_e_grid_equality_and_monotone_distance():
    params = dina_core(P1_Q, eta=[0.1, 0.2, 0.3, 0.4])
    grid = [0.9, 0.95, 1.05, 1.1]
    dist = {}
    for E in grid:
        pair = construct_pair(params, P1_Q, E)
        assert verify_distribution_equality(pair.original, pair.perturbed, tol=1e-12)[0]
        dist[E] = pair.theta_deviation + pair.eta_deviation
    assert dist[0.95] < dist[0.9]
    assert dist[1.05] < dist[1.1]


def test_direction_is_jacobian_null_vector():
    params = dina_core(MIXED_Q, eta=[0.1, 0.2, 0.3, 0.4])
    d = finite_difference_direction(params, MIXED_Q)
    np.testing.assert_allclose(d, analytic_direction(params, MIXED_Q), atol=1e-8)
    J = build_jacobian(params, enumerate_patterns(params.levels)).values
    assert np.linalg.norm(J @ d) / np.linalg.norm(d) < 1e-6


def test_gdina_restriction_preserved():
    Q = QMatrix(np.array([[1, 0, 0], [0, 1, 0], [0, 1, 1], [0, 0, 1], [0, 1, 1]]))
    reg = random_gdina_reg(np.random.default_rng(3), Q)
    params = zero_covariate_params(reg)
    pair = construct_pair(params, Q, 1.05)
    j, k = pair.lone_item, pair.lone_attribute
    profiles = attribute_profiles(3)
    t = pair.perturbed.theta[j]
    for c in range(8):
        for d in range(8):
            if profiles[c, k] == profiles[d, k]:
                np.testing.assert_allclose(t[c], t[d], atol=1e-14)
    assert verify_distribution_equality(pair.original, pair.perturbed, tol=1e-12)[0]


def test_inadmissible_e():
    params = dina_core(P1_Q, eta=[0.05, 0.05, 0.45, 0.45])
    with pytest.raises(CounterexampleError, match="E out of admissible neighborhood"):
        construct_pair(params, P1_Q, 1.5)


def test_automatic_halving():
    # eta_bar[c0] = eta[c0] + (1 - E) eta[c1] needs E < 1 + eta[c0] / eta[c1] = 1.02
    params = dina_core(P1_Q, eta=[0.01, 0.01, 0.49, 0.49])
    pair = construct_pair(params, P1_Q)
    assert 1.0 < pair.E < 1.02
    assert pair.E == pytest.approx(1 + 0.1 / 2**3)


def test_no_admissible_attribute():
    Q = QMatrix(np.array([[1, 1], [1, 1], [1, 1]]))
    params = random_core(np.random.default_rng(0), (2, 2, 2), 4)
    with pytest.raises(CounterexampleError):
        construct_pair(params, Q, 1.1)


def test_independent_perturbation_is_detected():
    params = dina_core(P1_Q)
    theta = list(params.theta)
    theta[1] = np.array(theta[1]) + np.array([[0.01, -0.01]] * 4)
    other = CoreParams(params.eta, tuple(theta))
    ok, dev = verify_distribution_equality(params, other, tol=1e-12)
    assert not ok and dev > 1e-6


def test_identical_inputs():
    params = dina_core(P1_Q)
    assert verify_distribution_equality(params, params) == (True, 0.0)
