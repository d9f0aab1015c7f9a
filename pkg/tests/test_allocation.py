import itertools

import numpy as np
import pytest

from irsec.allocation import (ConfigurationError, CostMatrix,
                              InfeasibleMatchingError, Matching, Server, Task,
                              band_masked, bidding_allocate, build_cost_matrix,
                              dissatisfaction, ecm_allocate, energy_matrix,
                              group_allocate, km_solve, max_dissatisfaction,
                              offload_energy, proposed_allocate, rank_desc,
                              rank_sensors, rank_servers, with_band)
from irsec.streams import substream


def brute_force_min(cost):
    n = cost.shape[0]
    best = np.inf
    for perm in itertools.permutations(range(n)):
        total = sum(cost[i, perm[i]] for i in range(n))
        best = min(best, total)
    return best


def random_population(rng, n_sensors, n_servers):
    tasks = [Task(data_bits=rng.uniform(5e6, 1.5e7), gas=rng.uniform(1.5e6, 2e6),
                  power_w=0.01, ergodic_rate=rng.uniform(0.5, 5.0))
             for _ in range(n_sensors)]
    servers = [Server(cycles_per_sec=rng.uniform(40e9, 80e9), cycles_per_bit=10.0,
                      energy_coeff=1e-27) for _ in range(n_servers)]
    return tasks, servers


# --- energy model ------------------------------------------------------------

def test_offload_energy_worked_example():
    task = Task(data_bits=8e6, gas=1.0, power_w=0.01, ergodic_rate=2.0)
    server = Server(cycles_per_sec=5e10, cycles_per_bit=10.0, energy_coeff=1e-27)
    got = offload_energy(task, server, bandwidth_hz=3e5)
    assert got == pytest.approx(200.0 + 2.0 / 15.0, rel=1e-12)


def test_offload_energy_zero_bits():
    task = Task(data_bits=0.0, gas=1.0, power_w=0.01, ergodic_rate=2.0)
    server = Server(cycles_per_sec=5e10, cycles_per_bit=10.0, energy_coeff=1e-27)
    assert offload_energy(task, server, 3e5) == 0.0


def test_offload_energy_zero_rate_is_infinite():
    task = Task(data_bits=8e6, gas=1.0, power_w=0.01, ergodic_rate=0.0)
    server = Server(cycles_per_sec=5e10, cycles_per_bit=10.0, energy_coeff=1e-27)
    assert offload_energy(task, server, 3e5) == np.inf


def test_energy_matrix_matches_scalar_op():
    rng = substream(50, "em")
    tasks, servers = random_population(rng, 5, 5)
    entries = energy_matrix([t.data_bits for t in tasks],
                            [t.power_w for t in tasks],
                            [t.ergodic_rate for t in tasks],
                            [s.cycles_per_sec for s in servers],
                            [s.cycles_per_bit for s in servers],
                            [s.energy_coeff for s in servers], 3e5)
    for i, t in enumerate(tasks):
        for k, s in enumerate(servers):
            assert entries[i, k] == pytest.approx(offload_energy(t, s, 3e5),
                                                  rel=1e-12)


# --- ranking -----------------------------------------------------------------

def test_rank_sensors_by_gas():
    tasks = [Task(1e6, gas, 0.01, 1.0) for gas in (5.0, 9.0, 7.0)]
    assert list(rank_sensors(tasks)) == [1, 2, 0]


def test_rank_stable_under_ties():
    values = [3.0, 5.0, 5.0, 1.0, 5.0]
    assert list(rank_desc(values)) == [1, 2, 4, 0, 3]


def test_rank_servers_truncates_weakest():
    rng = substream(51, "rk")
    _, servers = random_population(rng, 3, 5)
    full = rank_servers(servers)
    kept = rank_servers(servers, n_keep=3)
    assert list(kept) == list(full[:3])
    powers = [servers[i].computing_power for i in full]
    assert all(a >= b for a, b in zip(powers, powers[1:]))


def test_rank_servers_too_few():
    rng = substream(52, "rk")
    _, servers = random_population(rng, 2, 2)
    with pytest.raises(ConfigurationError):
        rank_servers(servers, n_keep=3)


def test_dissatisfaction_cases():
    assert dissatisfaction(1, 3, True) == 2
    assert dissatisfaction(4, 4, True) == 0
    assert dissatisfaction(1, 3, False) == 0


# --- cost matrix -------------------------------------------------------------

def test_band_mask_counts():
    rng = substream(53, "cm")
    tasks, servers = random_population(rng, 3, 4)
    diag_only = build_cost_matrix(tasks, servers, 3e5, epsilon=0)
    assert np.isfinite(diag_only.entries).sum() == 3
    unmasked = build_cost_matrix(tasks, servers, 3e5, epsilon=2)
    assert np.isfinite(unmasked.entries).all()
    tri = build_cost_matrix(tasks, servers, 3e5, epsilon=1)
    assert np.isfinite(tri.entries).sum() == 7
    assert (tri.entries[np.isfinite(tri.entries)] > 0).all()


def test_with_band_narrows_only():
    rng = substream(54, "cm")
    tasks, servers = random_population(rng, 4, 4)
    wide = build_cost_matrix(tasks, servers, 3e5, epsilon=3)
    narrow = with_band(wide, 1)
    assert narrow.epsilon == 1
    assert np.isfinite(narrow.entries).sum() == 4 + 2 * 3
    with pytest.raises(ValueError):
        with_band(narrow, 3)


def test_build_cost_matrix_epsilon_domain():
    rng = substream(55, "cm")
    tasks, servers = random_population(rng, 3, 3)
    with pytest.raises(ValueError):
        build_cost_matrix(tasks, servers, 3e5, epsilon=3)


# --- KM solver ---------------------------------------------------------------

def test_km_two_by_two_example():
    costs = CostMatrix(entries=np.array([[1.0, 2.0], [3.0, 1.0]]),
                       row_order=np.arange(2), col_order=np.arange(2), epsilon=1)
    m = km_solve(costs)
    assert list(m.assignment) == [0, 1]
    assert m.total_energy == 2.0


def test_km_identity_forced_by_zero_band():
    rng = substream(56, "km")
    tasks, servers = random_population(rng, 5, 6)
    m = km_solve(build_cost_matrix(tasks, servers, 3e5, epsilon=0))
    assert list(m.assignment) == list(range(5))


def test_km_matches_brute_force_random():
    rng = substream(57, "km")
    for _ in range(200):
        n = int(rng.integers(2, 8))
        entries = rng.exponential(10.0, (n, n))
        mask = rng.random((n, n)) < 0.25
        np.fill_diagonal(mask, False)
        entries[mask] = np.inf
        costs = CostMatrix(entries=entries, row_order=np.arange(n),
                           col_order=np.arange(n), epsilon=n - 1)
        m = km_solve(costs)
        assert m.total_energy == pytest.approx(brute_force_min(entries), rel=1e-12)


def test_km_infeasible_raises():
    entries = np.array([[np.inf, np.inf], [1.0, 2.0]])
    costs = CostMatrix(entries=entries, row_order=np.arange(2),
                       col_order=np.arange(2), epsilon=1)
    with pytest.raises(InfeasibleMatchingError):
        km_solve(costs)


# --- allocation schemes ------------------------------------------------------

def test_bidding_is_ranked_identity():
    rng = substream(58, "sc")
    tasks, servers = random_population(rng, 6, 8)
    m = bidding_allocate(tasks, servers, 3e5)
    assert list(m.assignment) == list(range(6))
    assert max_dissatisfaction(m) == 0
    costs = build_cost_matrix(tasks, servers, 3e5, epsilon=5)
    assert m.total_energy == pytest.approx(float(np.trace(costs.entries)),
                                           rel=1e-12)
    forced = km_solve(build_cost_matrix(tasks, servers, 3e5, epsilon=0))
    assert m.total_energy == forced.total_energy


def test_group_singleton_equals_bidding():
    rng = substream(59, "sc")
    tasks, servers = random_population(rng, 5, 5)
    g = group_allocate(tasks, servers, 3e5, n_groups=5)
    b = bidding_allocate(tasks, servers, 3e5)
    assert list(g.assignment) == list(b.assignment)
    assert g.total_energy == pytest.approx(b.total_energy, rel=1e-12)


def test_group_single_block_equals_ecm():
    rng = substream(60, "sc")
    tasks, servers = random_population(rng, 5, 5)
    g = group_allocate(tasks, servers, 3e5, n_groups=1)
    e = ecm_allocate(tasks, servers, 3e5)
    assert g.total_energy == pytest.approx(e.total_energy, rel=1e-12)


def test_group_blocked_brute_force():
    rng = substream(61, "sc")
    tasks, servers = random_population(rng, 4, 4)
    costs = build_cost_matrix(tasks, servers, 3e5, epsilon=3)
    g = group_allocate(tasks, servers, 3e5, n_groups=2)
    expect = (brute_force_min(costs.entries[:2, :2])
              + brute_force_min(costs.entries[2:, 2:]))
    assert g.total_energy == pytest.approx(expect, rel=1e-12)
    e = ecm_allocate(tasks, servers, 3e5)
    b = bidding_allocate(tasks, servers, 3e5)
    assert e.total_energy <= g.total_energy <= b.total_energy


def test_group_remainder_absorbed_by_last():
    rng = substream(62, "sc")
    tasks, servers = random_population(rng, 7, 7)
    g = group_allocate(tasks, servers, 3e5, n_groups=3)
    # blocks are [0,1], [2,3], [4,5,6]
    assert set(g.assignment[:2]) == {0, 1}
    assert set(g.assignment[2:4]) == {2, 3}
    assert set(g.assignment[4:]) == {4, 5, 6}


def test_ecm_is_global_minimum():
    rng = substream(63, "sc")
    for _ in range(20):
        tasks, servers = random_population(rng, 6, 7)
        costs = build_cost_matrix(tasks, servers, 3e5, epsilon=5)
        e = ecm_allocate(tasks, servers, 3e5)
        assert e.total_energy == pytest.approx(brute_force_min(costs.entries),
                                               rel=1e-12)
        for eps in range(6):
            p = proposed_allocate(tasks, servers, 3e5, epsilon=eps)
            b = bidding_allocate(tasks, servers, 3e5)
            assert e.total_energy <= p.total_energy + 1e-9
            assert p.total_energy <= b.total_energy + 1e-9
            assert max_dissatisfaction(p) <= eps


def test_scheme_boundary_identities_exact():
    rng = substream(64, "sc")
    for _ in range(10):
        tasks, servers = random_population(rng, 8, 9)
        p0 = proposed_allocate(tasks, servers, 3e5, epsilon=0)
        b = bidding_allocate(tasks, servers, 3e5)
        assert p0.total_energy == b.total_energy
        p_full = proposed_allocate(tasks, servers, 3e5, epsilon=7)
        e = ecm_allocate(tasks, servers, 3e5)
        assert p_full.total_energy == e.total_energy


def test_total_energy_non_increasing_in_epsilon():
    rng = substream(65, "sc")
    tasks, servers = random_population(rng, 9, 12)
    totals = [proposed_allocate(tasks, servers, 3e5, epsilon=eps).total_energy
              for eps in range(9)]
    assert all(a >= b - 1e-12 for a, b in zip(totals, totals[1:]))


def test_ecm_can_reach_maximal_dissatisfaction():
    # separable costs D_i * w_k with gas increasing alongside the payload:
    # the cheapest matching pairs the largest payload with the weakest
    # server, exactly reversing the Gas ranking
    n = 5
    tasks = [Task(data_bits=1e6 * (10 + i), gas=1.5e6 + i * 1e4, power_w=0.01,
                  ergodic_rate=1e9) for i in range(n)]
    servers = [Server(cycles_per_sec=4e10 + k * 1e10, cycles_per_bit=10.0,
                      energy_coeff=1e-27) for k in range(n)]
    e = ecm_allocate(tasks, servers, 3e5)
    assert max_dissatisfaction(e) == n - 1
    assert list(e.assignment) == [n - 1 - i for i in range(n)]


def test_max_dissatisfaction_empty():
    assert max_dissatisfaction(Matching(assignment=np.empty(0, np.int64),
                                        total_energy=0.0)) == 0
