import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from huberfused.prox import (
    DifferenceOperator,
    HuberFusedConfig,
    empirical_huber,
    fused_conjugate_prox,
    fused_penalty_value,
    fused_prox,
    huber_conjugate,
    huber_derivative,
    huber_value,
    in_fused_dual_domain,
    project_inf_ball,
    soft_threshold,
    tv1d_prox,
)

from conftest import fused_objective, fused_prox_oracle

finite = st.floats(-50, 50, allow_nan=False, allow_infinity=False)
vectors = arrays(np.float64, st.integers(1, 40), elements=finite)


def test_config_validation():
    with pytest.raises(ValueError):
        HuberFusedConfig(tau=0.0)
    with pytest.raises(ValueError):
        HuberFusedConfig(lambda1=-1.0)
    with pytest.raises(ValueError):
        HuberFusedConfig(lambda2=-0.1)
    cfg = HuberFusedConfig(1.0, 0.2, 0.3).scaled(2.0)
    assert (cfg.lambda1, cfg.lambda2, cfg.tau) == (0.4, 0.6, 1.0)


def test_difference_operator_matches_dense():
    rng = np.random.default_rng(0)
    p = 7
    D = DifferenceOperator(p)
    dense = np.diff(np.eye(p), axis=0)
    b = rng.normal(size=p)
    z = rng.normal(size=p - 1)
    assert D.shape == (6, 7)
    np.testing.assert_allclose(D @ b, dense @ b)
    np.testing.assert_allclose(D.adjoint(z), dense.T @ z)
    assert (D @ b)[2] == b[3] - b[2]


class TestHuber:
    def test_values(self):
        assert huber_value(0.0, 1.0) == 0.0
        assert huber_value(1.0, 1.0) == 0.5
        assert huber_value(3.0, 1.0) == 2.5
        assert huber_value(-3.0, 1.0) == 2.5

    def test_knot_continuity(self):
        tau = 0.7
        quad = 0.5 * tau ** 2
        lin = tau * tau - 0.5 * tau ** 2
        assert quad == pytest.approx(lin)
        assert huber_value(np.nextafter(tau, 10), tau) == pytest.approx(quad)

    def test_rejects_bad_tau(self):
        with pytest.raises(ValueError):
            huber_value(1.0, 0.0)
        with pytest.raises(ValueError):
            huber_value(1.0, -1.0)

    def test_derivative_matches_finite_differences(self):
        tau = 0.8
        xs = np.linspace(-3, 3, 601)
        xs = xs[np.abs(np.abs(xs) - tau) > 1e-3]
        h = 1e-6
        fd = (huber_value(xs + h, tau) - huber_value(xs - h, tau)) / (2 * h)
        np.testing.assert_allclose(fd, huber_derivative(xs, tau), atol=1e-6)
        assert np.all(np.abs(huber_derivative(xs, tau)) <= tau)

    @given(finite, finite, st.floats(0.01, 10), st.floats(0, 1))
    def test_convex_and_even(self, a, b, tau, t):
        m = t * a + (1 - t) * b
        assert huber_value(m, tau) <= (t * huber_value(a, tau)
                                       + (1 - t) * huber_value(b, tau) + 1e-9)
        assert huber_value(-a, tau) == huber_value(a, tau)

    def test_empirical(self):
        assert empirical_huber([0.0, 0.0], 1.0) == 0.0
        assert empirical_huber([1.0, 3.0], 1.0) == 1.5
        assert empirical_huber([0.3], 0.5) == pytest.approx(0.045)
        with pytest.raises(ValueError):
            empirical_huber([], 1.0)

    def test_conjugate(self):
        assert huber_conjugate(np.zeros(3), 1.0) == 0.0
        assert huber_conjugate([0.3, 0.4], 1.0) == pytest.approx(0.25)
        assert huber_conjugate([0.6, 0.0], 1.0) == np.inf

    def test_fenchel_young(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            n = int(rng.integers(1, 20))
            tau = rng.uniform(0.1, 3)
            z = rng.normal(scale=2, size=n)
            u = rng.uniform(-tau / n, tau / n, size=n)
            lhs = empirical_huber(z, tau) + huber_conjugate(u, tau)
            assert lhs >= u @ z - 1e-12
            u_star = np.clip(z, -tau, tau) / n
            eq = empirical_huber(z, tau) + huber_conjugate(u_star, tau)
            assert eq == pytest.approx(u_star @ z, abs=1e-12)


class TestSimpleProx:
    def test_soft_threshold(self):
        np.testing.assert_array_equal(soft_threshold([3.0, -3.0], 1.0), [2.0, -2.0])
        np.testing.assert_array_equal(soft_threshold([0.5], 1.0), [0.0])
        x = np.array([1.5, -0.2])
        np.testing.assert_array_equal(soft_threshold(x, 0.0), x)
        with pytest.raises(ValueError):
            soft_threshold(x, -1.0)

    @given(vectors, st.floats(0.01, 10))
    def test_soft_threshold_is_complement_of_projection(self, x, mu):
        np.testing.assert_allclose(soft_threshold(x, mu), x - project_inf_ball(x, mu),
                                   atol=1e-12)

    def test_projection(self):
        np.testing.assert_array_equal(project_inf_ball([0.2, -0.1], 0.5), [0.2, -0.1])
        np.testing.assert_array_equal(project_inf_ball([2.0, -3.0], 1.0), [1.0, -1.0])
        with pytest.raises(ValueError):
            project_inf_ball([1.0], 0.0)

    @given(vectors, st.floats(0.01, 10))
    def test_projection_idempotent(self, x, r):
        once = project_inf_ball(x, r)
        np.testing.assert_array_equal(project_inf_ball(once, r), once)

    def test_projection_nonexpansive(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            x, y = rng.normal(scale=3, size=(2, 10))
            r = rng.uniform(0.1, 2)
            d = np.linalg.norm(project_inf_ball(x, r) - project_inf_ball(y, r))
            assert d <= np.linalg.norm(x - y) + 1e-12


def tv_certificate(y, b):
    return np.cumsum(y - b)


class TestTV:
    def test_constant_unchanged(self):
        y = np.full(9, 2.5)
        np.testing.assert_array_equal(tv1d_prox(y, 3.0), y)

    def test_two_point(self):
        b = tv1d_prox(np.array([0.0, 2.0]), 0.5)
        np.testing.assert_allclose(b, [0.5, 1.5])
        # stationarity: b1 - y1 - lam = 0, b2 - y2 + lam = 0
        assert b[0] - 0.0 - 0.5 == pytest.approx(0.0)
        assert b[1] - 2.0 + 0.5 == pytest.approx(0.0)

    @pytest.mark.parametrize("lam", [1.0, 1.5, 10.0])
    def test_two_point_fused(self, lam):
        y = np.array([0.0, 2.0])
        b = tv1d_prox(y, lam)
        np.testing.assert_allclose(b, [1.0, 1.0])
        assert abs(tv_certificate(y, b)[0]) <= lam

    def test_zero_lambda_and_errors(self):
        y = np.array([3.0, -1.0, 2.0])
        np.testing.assert_array_equal(tv1d_prox(y, 0.0), y)
        np.testing.assert_array_equal(tv1d_prox([4.0], 2.0), [4.0])
        with pytest.raises(ValueError):
            tv1d_prox(y, -0.1)

    def test_certificate_random(self):
        rng = np.random.default_rng(11)
        for i in range(3000):
            p = int(rng.integers(2, 60))
            lam = rng.uniform(0, 3)
            if i % 3 == 0:
                y = rng.integers(-3, 4, size=p).astype(float)
            else:
                y = rng.normal(scale=rng.uniform(0.1, 5), size=p)
            b = tv1d_prox(y, lam)
            s = tv_certificate(y, b)
            assert np.max(np.abs(s)) <= lam + 1e-10
            assert abs(s[-1]) <= 1e-10
            assert b.mean() == pytest.approx(y.mean(), abs=1e-10)
            d = np.diff(b)
            jump = np.abs(d) > 1e-9
            # complementary slackness on every jump
            np.testing.assert_allclose(s[:-1][jump], -lam * np.sign(d[jump]), atol=1e-9)

    @settings(max_examples=200, deadline=None)
    @given(vectors, st.floats(0, 20))
    def test_certificate_hypothesis(self, y, lam):
        b = tv1d_prox(y, lam)
        s = tv_certificate(y, b)
        scale = 1 + np.max(np.abs(y))
        assert np.max(np.abs(s)) <= lam + 1e-10 * scale * y.size
        assert abs(s[-1]) <= 1e-10 * scale * y.size


class TestFusedProx:
    def test_composition_example(self):
        cfg = HuberFusedConfig(1.0, 0.5, 0.5)
        np.testing.assert_allclose(fused_prox([0.0, 2.0], cfg, 1.0), [0.0, 1.0])

    def test_identity_without_penalty(self):
        x = np.array([1.0, -2.0, 0.3])
        np.testing.assert_array_equal(fused_prox(x, HuberFusedConfig(1.0, 0.0, 0.0)), x)

    def test_matches_oracle(self):
        rng = np.random.default_rng(2)
        for _ in range(300):
            p = int(rng.integers(1, 31))
            x = rng.normal(scale=2, size=p)
            l1, l2 = rng.uniform(0, 1, 2)
            t = rng.uniform(0.1, 3)
            b = fused_prox(x, HuberFusedConfig(1.0, l1, l2), t)
            ref = fused_prox_oracle(x, t * l1, t * l2)
            assert fused_objective(b, x, t * l1, t * l2) == pytest.approx(
                fused_objective(ref, x, t * l1, t * l2), abs=1e-8)
            np.testing.assert_allclose(b, ref, atol=1e-6)

    def test_subgradient_optimality(self):
        rng = np.random.default_rng(4)
        for _ in range(300):
            p = int(rng.integers(2, 40))
            x = rng.normal(scale=2, size=p)
            l1, l2 = rng.uniform(0.01, 1, 2)
            b = fused_prox(x, HuberFusedConfig(1.0, l1, l2))
            # 0 in b - x + l1 * sign(b) + D^T z with |z| <= l2 and z = l2 sign(Db) on jumps
            g = x - b
            a = np.where(np.abs(b) > 1e-10, l1 * np.sign(b), 0.0)
            free = np.abs(b) <= 1e-10
            # free ell-1 coordinates leave a_j in [-l1, l1], so check exact membership
            assert in_fused_dual_domain(g, HuberFusedConfig(1.0, l1, l2), atol=1e-8)
            d = np.diff(b)
            jumps = np.abs(d) > 1e-9
            s = np.cumsum(g - a)[:-1]
            fixed_prefix = np.cumsum(free)[:-1] == 0
            mask = jumps & fixed_prefix
            np.testing.assert_allclose(-s[mask], l2 * np.sign(d[mask]), atol=1e-8)

    def test_moreau_identity(self):
        rng = np.random.default_rng(6)
        for _ in range(300):
            p = int(rng.integers(1, 40))
            x = rng.normal(scale=3, size=p)
            mu = rng.uniform(0.05, 5)
            cfg = HuberFusedConfig(1.0, *rng.uniform(0, 2, 2))
            lhs = fused_conjugate_prox(x, cfg, mu) + mu * fused_prox(x / mu, cfg, 1 / mu)
            np.testing.assert_allclose(lhs, x, atol=1e-12)

    def test_conjugate_prox_cases(self):
        cfg = HuberFusedConfig(1.0, 0.3, 0.2)
        np.testing.assert_array_equal(fused_conjugate_prox(np.zeros(5), cfg, 2.0), 0.0)
        x = np.array([0.4, -1.2, 3.0])
        big = HuberFusedConfig(1.0, 1e6, 1e6)
        np.testing.assert_allclose(fused_conjugate_prox(x, big, 1.5), x)

    def test_conjugate_prox_lands_in_dual_domain(self):
        rng = np.random.default_rng(8)
        for _ in range(200):
            x = rng.normal(scale=5, size=int(rng.integers(1, 30)))
            cfg = HuberFusedConfig(1.0, *rng.uniform(0, 1, 2))
            v = fused_conjugate_prox(x, cfg, rng.uniform(0.1, 3))
            assert in_fused_dual_domain(v, cfg, atol=1e-9)


def test_penalty_value():
    cfg = HuberFusedConfig(1.0, 1.0, 1.0)
    assert fused_penalty_value(np.zeros(4), cfg) == 0.0
    assert fused_penalty_value([1.0, 1.0], cfg) == 2.0
    assert fused_penalty_value([1.0, -1.0], HuberFusedConfig(1.0, 0.0, 1.0)) == 2.0


def test_dual_domain_membership():
    cfg = HuberFusedConfig(1.0, 0.1, 0.5)
    assert in_fused_dual_domain(np.zeros(6), cfg)
    assert in_fused_dual_domain([0.1, -0.1], cfg)
    # D^T z with z = 0.5 gives (-0.5, 0.5)
    assert in_fused_dual_domain([-0.5, 0.5], cfg)
    assert not in_fused_dual_domain([-0.7, 0.7], cfg)
    # sum of v must be within p * lambda1
    assert not in_fused_dual_domain([0.2, 0.2], HuberFusedConfig(1.0, 0.05, 10.0))
