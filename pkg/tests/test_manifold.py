import numpy as np
import pytest

from irsec.channels import Dimensions, complex_normal, sample_channel_set
from irsec.manifold import (EffectiveChannel, OptimizerSettings,
                            analytic_optimum_miso, channel_gain,
                            effective_channel, euclidean_grad, objective,
                            optimize_phases, project_tangent, retract,
                            riemannian_grad, transport)
from irsec.streams import substream


def random_instance(seed, n_irs, n_bs):
    ch = sample_channel_set(substream(seed, "mf", n_irs, n_bs), Dimensions(n_irs, n_bs, 1))
    return effective_channel(ch.A, ch.h, ch.l)


def unit_phases(rng, n):
    return np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, n))


# --- effective_channel -------------------------------------------------------

def test_effective_channel_diag_scaling():
    ec = effective_channel(np.eye(2), np.array([2.0, 3.0j]))
    assert np.allclose(ec.theta, np.array([[2.0, 0.0], [0.0, 3.0j]]))
    assert np.allclose(ec.l, 0.0)


def test_effective_channel_zero_h():
    ec = effective_channel(np.ones((3, 4)), np.zeros(4))
    assert np.all(ec.theta == 0.0)


def test_effective_channel_columnwise():
    rng = substream(2, "cols")
    A = complex_normal(rng, (3, 5))
    h = complex_normal(rng, 5)
    ec = effective_channel(A, h)
    for k in range(5):
        assert np.allclose(ec.theta[:, k], A[:, k] * h[k])


def test_effective_channel_shape_errors():
    with pytest.raises(ValueError):
        effective_channel(np.ones((2, 3)), np.ones(4))
    with pytest.raises(ValueError):
        effective_channel(np.ones((2, 3)), np.ones(3), l=np.ones(3))


# --- objective / gain --------------------------------------------------------

def test_objective_direct_link_only():
    l = np.array([1.0 + 2.0j, -1.0j])
    ec = EffectiveChannel(theta=np.zeros((2, 3), complex), l=l)
    q = unit_phases(substream(3, "q"), 3)
    assert objective(q, ec) == pytest.approx(-6.0, rel=1e-12)


def test_objective_identity_theta():
    n = 5
    ec = EffectiveChannel(theta=np.eye(n, dtype=complex), l=np.zeros(n, complex))
    q = unit_phases(substream(4, "q"), n)
    assert objective(q, ec) == pytest.approx(-float(n), rel=1e-12)


def test_objective_matches_quadratic_expansion():
    # independent evaluation through the expanded quadratic form
    for seed in range(5):
        ec = random_instance(seed, 6, 3)
        q = unit_phases(substream(seed, "qq"), 6)
        th, l = ec.theta, ec.l
        expanded = -(np.vdot(q, th.conj().T @ th @ q) + np.vdot(l, l)
                     + np.vdot(l, th @ q) + np.vdot(th @ q, l)).real
        assert objective(q, ec) == pytest.approx(float(expanded), rel=1e-10)
        assert channel_gain(q, ec) == pytest.approx(-objective(q, ec), rel=1e-15)


def test_objective_dimension_mismatch():
    ec = random_instance(0, 4, 2)
    with pytest.raises(ValueError):
        objective(np.ones(5, complex), ec)


# --- euclidean gradient ------------------------------------------------------

def test_euclidean_grad_zero_theta():
    ec = EffectiveChannel(theta=np.zeros((2, 4), complex), l=np.ones(2, complex))
    q = unit_phases(substream(5, "g"), 4)
    assert np.allclose(euclidean_grad(q, ec), 0.0)


def test_euclidean_grad_unitary_theta():
    # theta^H theta = I and l = 0 collapse the gradient to -2q
    rng = substream(6, "uni")
    m = complex_normal(rng, (4, 4))
    qmat, _ = np.linalg.qr(m)
    ec = EffectiveChannel(theta=qmat, l=np.zeros(4, complex))
    q = unit_phases(rng, 4)
    assert np.allclose(euclidean_grad(q, ec), -2.0 * q, atol=1e-12)


def test_euclidean_grad_finite_differences():
    # directional derivative along coordinate perturbations, step 1e-6
    ec = random_instance(7, 8, 3)
    q = unit_phases(substream(7, "fd"), 8)
    g = euclidean_grad(q, ec)
    eps = 1e-6
    scale = np.abs(g).max()
    for k in range(8):
        for delta in (np.eye(8)[k], 1j * np.eye(8)[k]):
            fd = (objective(q + eps * delta, ec)
                  - objective(q - eps * delta, ec)) / (2 * eps)
            expect = float(np.vdot(g, delta).real)
            assert abs(fd - expect) <= 1e-5 * max(abs(expect), 1e-3 * scale)


# --- tangent-space operations ------------------------------------------------

def test_project_tangent_radial_annihilated():
    q = unit_phases(substream(8, "p"), 6)
    assert np.allclose(project_tangent(q, q), 0.0, atol=1e-15)


def test_project_tangent_rotational_unchanged():
    q = unit_phases(substream(9, "p"), 6)
    v = 1j * q
    assert np.allclose(project_tangent(v, q), v, atol=1e-15)


def test_project_tangent_idempotent_and_tangent():
    rng = substream(10, "p")
    q = unit_phases(rng, 12)
    v = complex_normal(rng, 12)
    t = project_tangent(v, q)
    assert np.allclose(project_tangent(t, q), t, atol=1e-12)
    assert np.abs((t * q.conj()).real).max() <= 1e-12


def test_retract_examples():
    out = retract(np.array([2.0, 2.0j]))
    assert np.allclose(out, [1.0, 1.0j])
    out = retract(np.array([1.0 + 1.0j, -3.0]))
    assert np.allclose(out, [(1 + 1j) / np.sqrt(2.0), -1.0])
    q = unit_phases(substream(11, "r"), 5)
    assert np.allclose(retract(q), q, atol=1e-15)
    with pytest.raises(ValueError):
        retract(np.array([1.0, 0.0]))


def test_transport_properties():
    rng = substream(12, "t")
    q = unit_phases(rng, 9)
    assert np.allclose(transport(np.zeros(9, complex), q), 0.0)
    p = project_tangent(complex_normal(rng, 9), q)
    assert np.allclose(transport(p, q), p, atol=1e-12)
    p2 = complex_normal(rng, 9)
    moved = transport(p2, q)
    assert np.abs((moved * q.conj()).real).max() <= 1e-12


def test_riemannian_grad_is_projected_euclidean():
    ec = random_instance(13, 7, 2)
    q = unit_phases(substream(13, "rg"), 7)
    assert np.allclose(riemannian_grad(q, ec),
                       project_tangent(euclidean_grad(q, ec), q), atol=1e-12)


# --- optimizer ---------------------------------------------------------------

def grid_search_two_element_gain(l, a_row, h, steps=360):
    th = np.linspace(0.0, 2.0 * np.pi, steps, endpoint=False)
    t1, t2 = np.meshgrid(th, th, indexing="ij")
    terms = a_row * h
    field = l + terms[0] * np.exp(1j * t1) + terms[1] * np.exp(1j * t2)
    return float((np.abs(field) ** 2).max())


def test_optimizer_matches_grid_oracle():
    a_row = np.array([1.0, 1.0j])
    h = np.array([1.0, 1.0])
    ec = effective_channel(a_row[np.newaxis, :], h, l=np.array([1.0 + 0j]))
    grid_best = grid_search_two_element_gain(1.0 + 0j, a_row, h)
    assert grid_best == pytest.approx(9.0, abs=1e-3)
    res = optimize_phases(ec, rng=substream(14, "o"))
    assert res.gain == pytest.approx(9.0, rel=1e-6)
    # analytic alignment agrees: q* = (1, -i)
    q_star, gain = analytic_optimum_miso(1.0 + 0j, a_row, h)
    assert gain == pytest.approx(9.0, rel=1e-15)
    assert np.allclose(q_star, [1.0, -1.0j], atol=1e-12)


def test_optimizer_zero_theta_returns_direct_gain():
    l = np.array([3.0, 4.0j])
    ec = EffectiveChannel(theta=np.zeros((2, 6), complex), l=l)
    res = optimize_phases(ec, rng=substream(15, "o"))
    assert res.gain == pytest.approx(25.0, rel=1e-12)


def test_optimizer_no_irs_degenerate():
    ec = EffectiveChannel(theta=np.zeros((2, 0), complex),
                          l=np.array([1.0, 1.0j]))
    res = optimize_phases(ec, rng=substream(16, "o"))
    assert res.gain == pytest.approx(2.0, rel=1e-12)
    assert res.q.shape == (0,)
    assert res.converged


def test_optimizer_reaches_miso_alignment_bound():
    for seed in range(30):
        rng = substream(17, "miso", seed)
        a_row = complex_normal(rng, 12)
        h = complex_normal(rng, 12)
        l = complex_normal(rng, 1)
        ec = effective_channel(a_row[np.newaxis, :], h, l=l)
        _, bound = analytic_optimum_miso(l[0], a_row, h)
        res = optimize_phases(ec, rng=rng)
        assert res.gain >= 0.999 * bound
        assert res.gain <= bound * (1 + 1e-9)  # triangle-inequality upper bound


def test_analytic_miso_bound_dominates_random_phases():
    rng = substream(18, "bound")
    a_row = complex_normal(rng, 10)
    h = complex_normal(rng, 10)
    l = complex_normal(rng, 1)
    ec = effective_channel(a_row[np.newaxis, :], h, l=l)
    _, bound = analytic_optimum_miso(l[0], a_row, h)
    for _ in range(1000):
        q = unit_phases(rng, 10)
        assert channel_gain(q, ec) <= bound * (1 + 1e-12)


def test_iterates_stay_on_manifold_and_gain_monotone():
    for seed in range(5):
        ec = random_instance(40 + seed, 16, 4)
        res = optimize_phases(ec, rng=substream(19, "tr", seed), trace=True)
        traj = res.trajectory
        assert traj.shape[0] == res.iterations + 1
        assert np.abs(np.abs(traj) - 1.0).max() <= 1e-12
        gains = [channel_gain(traj[s], ec) for s in range(traj.shape[0])]
        assert all(b >= a - 1e-9 for a, b in zip(gains, gains[1:]))
        assert gains[-1] == pytest.approx(res.gain, rel=1e-12)


def test_optimized_beats_random_phases_for_n_ge_4():
    wins_total = 0
    for seed in range(50):
        ec = random_instance(70 + seed, 8, 4)
        rng = substream(20, "dom", seed)
        q0 = retract(complex_normal(rng, 8))
        res = optimize_phases(ec, q0=q0)
        wins_total += res.gain > channel_gain(q0, ec)
    assert wins_total == 50


def test_settings_validation():
    with pytest.raises(ValueError):
        OptimizerSettings(grad_tol=0.0)
    with pytest.raises(ValueError):
        OptimizerSettings(armijo_shrink=1.0)
    with pytest.raises(ValueError):
        OptimizerSettings(armijo_slope=0.0)
    with pytest.raises(ValueError):
        OptimizerSettings(initial_step=-1.0)
    with pytest.raises(ValueError):
        OptimizerSettings(max_iters=0)


def test_optimizer_requires_start_point_source():
    ec = random_instance(21, 4, 2)
    with pytest.raises(ValueError):
        optimize_phases(ec)
