import math

import pytest

import mwadv

INV_E = math.exp(-1.0)


def params(n, mu=0.5, rho0=0.5):
    return mwadv.ModelParams(epsilon=INV_E, mu=mu, horizon=n, rho0=rho0)


def test_weight_maps():
    assert mwadv.weight_update_g(0.5, INV_E) == pytest.approx(0.268941, abs=1e-6)
    assert mwadv.weight_update_g_inv(0.5, INV_E) == pytest.approx(0.731059, abs=1e-6)
    assert mwadv.weight_power(2, 0.5, INV_E) == pytest.approx(0.119203, abs=1e-6)


def test_anchor_values():
    p = params(2)
    assert mwadv.value_false(2, 0.5, p) == pytest.approx(1.442235, abs=1e-6)
    assert mwadv.value_policy("FT", p) == pytest.approx(1.057765, abs=1e-6)
    assert mwadv.brute_force_value("FT", p) == pytest.approx(mwadv.value_policy("FT", p), abs=1e-12)
    assert mwadv.optimal_value(p) == pytest.approx(1.442236, abs=1e-6)


def test_policies():
    p = params(8)
    ratio = mwadv.ratio_policy(p)
    assert str(ratio) == "FTFTFFFF"
    assert ratio.blocks() == [(1, 1), (1, 1), (4, 0)]
    assert len(mwadv.random_policy(30, 0.5, 4)) == 30
    policy, value = mwadv.offline_optimum(params(10))
    assert value >= mwadv.value_policy(mwadv.false_policy(10), params(10)) - 1e-12
    assert len(policy) == 10


def test_offset_distribution():
    d = mwadv.offset_distribution(1, 1, 0.5)
    assert d == pytest.approx({-1: 0.25, 0: 0.5, 1: 0.25})


def test_online_table():
    p = params(30)
    table = mwadv.solve_two_expert(p)
    assert table.bellman_updates == 900
    assert table.action(0, 0) in ("lie", "truth")
    mc = mwadv.simulate_online(p, 20000, 5)
    assert abs(mc["mean"] - table.root_value) <= 4 * mc["stderr"]


def test_k_expert():
    two = mwadv.optimal_value(params(8, rho0=0.3))
    assert mwadv.solve_k_expert(INV_E, 8, [0.5], [0.3, 0.7]) == pytest.approx(two, abs=1e-9)
    a = mwadv.monte_carlo_k_expert(INV_E, 10, [0.5] * 4, [1.0] * 5, 30, 2)
    b = mwadv.monte_carlo_k_expert(INV_E, 10, [0.5] * 4, [1.0] * 5, 30, 2)
    assert a == b
    with pytest.raises(mwadv.GuardViolation):
        mwadv.solve_k_expert(INV_E, 61, [0.5], [1.0, 1.0])


def test_errors():
    with pytest.raises(mwadv.DomainError):
        params(5, mu=1.5)
    with pytest.raises(ValueError):
        mwadv.value_policy("FXT", params(3))


def test_compare_rows():
    rows = mwadv.compare([10, 30], offline_max_n=10)
    assert rows[0]["v_offline_opt"] is not None
    assert rows[1]["v_offline_opt"] is None
    for r in rows:
        assert r["v_online"] >= r["v_false"] - 1e-9
        assert r["v_no_adversary"] == pytest.approx(r["N"] * 0.5)
