import math

import numpy as np
import pytest

import isingfit as isf
from isingfit.core import IsingSpec
from isingfit.errors import DimensionTooLarge
from isingfit.sampler import (
    GlauberConfig,
    empirical_distribution,
    enumerate_distribution,
    exact_sample,
    glauber_sample_many,
    log_partition,
    make_rng,
    spin_table,
)
from tests.test_core import random_spec


def test_enumerate_uniform():
    spec = IsingSpec.zero_field(np.zeros((3, 3)))
    dist = enumerate_distribution(spec)
    assert np.allclose(dist.probs, 1 / 8)
    assert dist.log_partition == pytest.approx(0.0, abs=1e-12)


def test_enumerate_two_spin_closed_form():
    for beta in (0.3, 0.7, -1.1):
        J = np.zeros((2, 2))
        J[0, 1] = J[1, 0] = beta
        spec = IsingSpec.zero_field(J)
        dist = enumerate_distribution(spec)
        # states (+,+),(−,+),(+,−),(−,−) carry weights e^b, e^-b, e^-b, e^b
        Z = 2 * math.exp(beta) + 2 * math.exp(-beta)
        assert dist.log_partition == pytest.approx(math.log(math.cosh(beta)))
        assert dist.probs[0] == pytest.approx(math.exp(beta) / Z)
        assert dist.probs[1] == pytest.approx(math.exp(-beta) / Z)


def test_enumerate_single_spin_logistic():
    h = 0.9
    spec = IsingSpec(np.zeros((1, 1)), np.array([h]))
    dist = enumerate_distribution(spec)
    Z = math.exp(h) + math.exp(-h)
    # index 0 is spin +1 by the canonical bit order
    assert dist.probs[0] == pytest.approx(math.exp(h) / Z)
    assert dist.probs[1] == pytest.approx(math.exp(-h) / Z)


def test_probs_normalized():
    spec = random_spec(8, 1.5, seed=1, with_field=True)
    dist = enumerate_distribution(spec)
    assert abs(dist.probs.sum() - 1.0) <= 1e-12


def test_enumeration_guard():
    with pytest.raises(DimensionTooLarge):
        enumerate_distribution(IsingSpec.zero_field(np.zeros((23, 23))))


def test_log_partition_zero():
    assert log_partition(IsingSpec.zero_field(np.zeros((4, 4)))) == pytest.approx(0.0)


def test_log_partition_convex_along_line():
    spec = random_spec(6, 1.0, seed=2)
    ts = np.linspace(-1.5, 1.5, 5)
    d = 1e-3
    for t in ts:
        Fs = [log_partition(IsingSpec.zero_field(s * spec.J))
              for s in (t - d, t, t + d)]
        second = (Fs[0] - 2 * Fs[1] + Fs[2]) / d ** 2
        assert second >= -1e-8


def test_log_partition_monotone_in_line_scale():
    spec = random_spec(8, 1.0, seed=3)
    vals = [log_partition(IsingSpec.zero_field(t * spec.J))
            for t in (0.0, 0.3, 0.9, 1.8)]
    assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))
    assert vals[0] == pytest.approx(0.0, abs=1e-12)


def test_global_flip_symmetry_zero_field():
    spec = random_spec(6, 1.2, seed=4)
    dist = enumerate_distribution(spec)
    flipped = dist.probs[::-1]  # index complement == global spin flip
    assert np.allclose(dist.probs, flipped, atol=1e-12)


def test_exact_sample_deterministic():
    spec = random_spec(5, 1.0, seed=5)
    dist = enumerate_distribution(spec)
    x1 = exact_sample(dist, make_rng(99))
    x2 = exact_sample(dist, make_rng(99))
    assert np.array_equal(x1, x2)


def test_exact_sample_degenerate_table():
    dist = enumerate_distribution(IsingSpec.zero_field(np.zeros((3, 3))))
    forced = dist.__class__(3, dist.log_weights, dist.log_partition,
                            np.eye(8)[5])
    for seed in range(5):
        x = exact_sample(forced, make_rng(seed))
        assert np.array_equal(x, spin_table(3, 5, 6)[0].astype(int))


def test_exact_sample_uniform_frequencies():
    spec = IsingSpec.zero_field(np.zeros((4, 4)))
    dist = enumerate_distribution(spec)
    X = exact_sample(dist, make_rng(7), count=10_000)
    emp = empirical_distribution(X, 4)
    p = 1 / 16
    sigma = math.sqrt(p * (1 - p) / 10_000)
    assert np.all(np.abs(emp - p) <= 4 * sigma)


def test_glauber_independent_spins_match_field():
    n = 5
    h = np.array([0.0, 0.4, -0.8, 1.2, -0.2])
    spec = IsingSpec(np.zeros((n, n)), h)
    X = glauber_sample_many(spec, 10_000, GlauberConfig(5, seed=11))
    means = X.mean(axis=0)
    for i in range(n):
        sigma = math.sqrt((1 - math.tanh(h[i]) ** 2) / 10_000)
        assert abs(means[i] - math.tanh(h[i])) <= 4 * sigma + 1e-9


def test_glauber_detailed_balance():
    spec = random_spec(5, 1.3, seed=12, with_field=True)
    for idx in range(1 << 5):
        x = spin_table(5, idx, idx + 1)[0]
        w_x = 0.5 * x @ spec.J @ x + spec.h @ x
        for i in range(5):
            y = x.copy()
            y[i] = -x[i]
            w_y = 0.5 * y @ spec.J @ y + spec.h @ y
            p_flip_from_x = 0.5 * (1 - x[i] * math.tanh(isf.local_field(spec, x, i)))
            p_flip_from_y = 0.5 * (1 - y[i] * math.tanh(isf.local_field(spec, y, i)))
            lhs = math.exp(w_x) * p_flip_from_x
            rhs = math.exp(w_y) * p_flip_from_y
            assert lhs == pytest.approx(rhs, rel=1e-12)


def test_glauber_chain_probabilities_interior():
    spec = random_spec(6, 2.0, seed=13, with_field=True)
    rng = make_rng(14)
    for _ in range(50):
        x = 1.0 - 2.0 * rng.integers(0, 2, size=6)
        i = int(rng.integers(6))
        p = isf.conditional_prob_plus(spec, x, i)
        assert 1e-300 < p < 1 - 1e-300


def test_glauber_config_validation():
    with pytest.raises(ValueError):
        GlauberConfig(0)
    with pytest.raises(ValueError):
        GlauberConfig(10, init="bogus")


def test_glauber_deterministic_given_seed():
    spec = random_spec(6, 0.5, seed=15)
    cfg = GlauberConfig(20, seed=123)
    a = glauber_sample_many(spec, 4, cfg)
    b = glauber_sample_many(spec, 4, cfg)
    assert np.array_equal(a, b)
