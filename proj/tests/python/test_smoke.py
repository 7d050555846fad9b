import math

import numpy as np
import pytest

import dmimo


def test_svd_reconstructs():
    rng = np.random.default_rng(7)
    a = rng.normal(size=(3, 5)) + 1j * rng.normal(size=(3, 5))
    u, s, v = dmimo.svd(a)
    rec = u @ np.diag(s) @ v.conj().T
    assert np.allclose(rec, a, atol=1e-9)
    assert all(s[i] >= s[i + 1] for i in range(len(s) - 1))


def test_water_fill_matches_capacity():
    out = dmimo.water_fill([2.0, 1.0], 1.0, 1.0)
    assert out["water_level"] == pytest.approx(1.25)
    assert out["rate"] == pytest.approx(1.1394, abs=1e-4)
    h = np.diag([math.sqrt(2.0), 1.0]).astype(complex)
    assert dmimo.mimo_capacity(h, 1.0) == pytest.approx(out["rate"])
    assert dmimo.rate_derivative(h, 1.0) == pytest.approx(0.8)


def test_effective_capacity_and_exponent():
    theta = dmimo.qos_exponent(1.0, 1.0, math.exp(-1.0))
    assert theta == pytest.approx(1.0)
    cap = dmimo.effective_capacity([0.0, 2.0], 1.0)
    assert cap == pytest.approx(-math.log((1 + math.exp(-2)) / 2))
    assert dmimo.constraint_residual([0.0, 2.0], 1.0, cap) == pytest.approx(0.0, abs=1e-12)


def test_envelope_and_theorem1():
    env = dmimo.rate_envelope([0.0, 1.0, 1.5, 2.2])
    assert env["usage"] == [0, 1, 3]
    assert env["slope"] == pytest.approx([1.0, 0.6])
    alpha = dmimo.usage_to_alpha([0.0, 1.0, 1.5, 2.2], 2.0)
    assert alpha == pytest.approx([0.0, 0.5, 0.0, 0.5])
    assert dmimo.theorem1_usage([0.0, 1.0, 1.5, 2.2], 1.0, 3.0) == pytest.approx(1.0)


def test_bd_precoders_null_interference():
    rng = np.random.default_rng(3)
    h1 = rng.normal(size=(2, 4)) + 1j * rng.normal(size=(2, 4))
    h2 = rng.normal(size=(2, 4)) + 1j * rng.normal(size=(2, 4))
    users = dmimo.bd_precoders([h1, h2])
    assert not users[0]["skipped"]
    g = np.asarray(users[0]["precoder"])
    assert np.linalg.norm(h2 @ g) <= 1e-9


def test_tdma_shares_sum_to_one():
    shares, delta = dmimo.tdma_time_alloc([1.0, 2.0], [1.0, 1.0], [1.0, 1.0])
    assert sum(shares) == pytest.approx(1.0, abs=1e-9)
    assert delta == pytest.approx(0.6469, abs=1e-3)


def test_queue_simulation():
    stats = dmimo.simulate_queue(1.0, [2.0] * 2000, 3.0)
    assert stats["violation_prob"] == 0.0
    assert stats["stable"]


def test_run_experiment_smoke():
    config = """
deployment = single-user-5bs
scheme = ibs-ts
seed = 7
train_frames = 120
eval_frames = 120
power.reference = 4
power.kappa = 2.4
user.1.load_kbps = 700
tracker.step = 0.5
tracker.budget = 20000
tracker.tolerance = 1e-3
"""
    out = dmimo.run_experiment(config)
    assert not out["infeasible"]
    assert 0.0 <= out["avg_bs_usage"] <= 5.0
    assert out["csv"].startswith("scheme,axis,axis_value,avg_bs_usage")
    assert "single-user-5bs" in dmimo.scenario_listing()
    assert "pbs-bd-pt" in dmimo.scheme_names()


def test_semi_random_is_deterministic():
    a = dmimo.semi_random_select(5, 2, 42, 17)
    b = dmimo.semi_random_select(5, 2, 42, 17)
    assert a == b and len(a) == 2
