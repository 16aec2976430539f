import numpy as np
import pytest

import oracles
from godunovlab import riemann
from godunovlab.errors import NoConvergence, NonPhysicalStar, VacuumGenerated
from godunovlab.euler import GasModel, sound_speed
from godunovlab.riemann import (
    WaveKind,
    pressure_function_side,
    sample_fan,
    sample_linearised,
    solve_star_exact,
    solve_star_linearised,
    star_function,
    vacuum_check,
)

AIR = GasModel(1.4)
SOD_L, SOD_R = (1.0, 0.0, 1.0), (0.125, 0.0, 0.1)
# bisection oracle (tests/oracles.py)
SOD_P_STAR = 0.3031301780506465
SOD_U_STAR = 0.9274526200489497
# closed-form linearised star state for Sod, frozen on first evaluation
SOD_LINEARISED = (0.19050436353163594, 0.6841486813454064, 0.42178883109402565, 0.20580746743896067)


def random_pairs(rng, n, spread=2.0):
    pairs = []
    while len(pairs) < n:
        wl = np.array([10 ** rng.uniform(-spread, spread), rng.uniform(-5, 5),
                       10 ** rng.uniform(-spread, spread)])
        wr = np.array([10 ** rng.uniform(-spread, spread), rng.uniform(-5, 5),
                       10 ** rng.uniform(-spread, spread)])
        if vacuum_check(wl, wr, AIR):
            pairs.append((wl, wr))
    return pairs


def test_oracle_reproduces_frozen_sod_values():
    p, u = oracles.bisection_star(SOD_L, SOD_R, 1.4)
    assert p == pytest.approx(SOD_P_STAR, abs=1e-14)
    assert u == pytest.approx(SOD_U_STAR, abs=1e-14)


class TestPressureFunction:
    def test_vanishes_at_side_pressure(self):
        for w in ((1.0, 0.3, 1.0), (0.125, 0.0, 0.1), (3.0, -1.0, 7.0)):
            value, _ = pressure_function_side(w[2], w, AIR)
            assert value == 0.0

    def test_derivative_matches_central_difference(self):
        rng = np.random.default_rng(3)
        for _ in range(500):
            w = np.array([10 ** rng.uniform(-2, 2), 0.0, 10 ** rng.uniform(-2, 2)])
            p = w[2] * 10 ** rng.uniform(-2, 2)
            if abs(p - w[2]) < 1e-4 * w[2]:
                continue  # keep the stencil on one branch
            h = 1e-6 * p
            f_plus, _ = pressure_function_side(p + h, w, AIR)
            f_minus, _ = pressure_function_side(p - h, w, AIR)
            _, df = pressure_function_side(p, w, AIR)
            fd = (f_plus - f_minus) / (2 * h)
            assert abs(df - fd) <= 1e-6 * abs(fd)

    def test_sod_root(self):
        f, _ = star_function(SOD_P_STAR, SOD_L, SOD_R, AIR)
        assert abs(f) <= 1e-10


class TestVacuumCheck:
    def test_cases(self):
        assert vacuum_check((1, 0, 1), (1, 0, 1), AIR)
        assert not vacuum_check((1, -100, 0.4), (1, 100, 0.4), AIR)

    def test_boundary_counts_as_vacuum(self):
        w = np.array([1.0, 0.0, 0.4])
        critical = 2.0 / (AIR.gamma - 1.0) * (sound_speed(w, AIR) + sound_speed(w, AIR))
        wr = np.array([1.0, critical, 0.4])
        assert not vacuum_check(w, wr, AIR)
        with pytest.raises(VacuumGenerated):
            solve_star_exact(w, wr, AIR)


class TestExactSolver:
    def test_identity_data(self):
        fan = solve_star_exact((1, 0, 1), (1, 0, 1), AIR)
        assert fan.p_star == pytest.approx(1.0, rel=1e-15)
        assert fan.u_star == 0.0
        assert fan.rho_star_left == pytest.approx(1.0, rel=1e-15)
        assert fan.rho_star_right == pytest.approx(1.0, rel=1e-15)

    def test_sod(self):
        fan = solve_star_exact(SOD_L, SOD_R, AIR)
        assert fan.p_star == pytest.approx(SOD_P_STAR, abs=1e-12)
        assert fan.u_star == pytest.approx(SOD_U_STAR, abs=1e-12)
        assert fan.left_wave is WaveKind.RAREFACTION
        assert fan.right_wave is WaveKind.SHOCK
        assert fan.rho_star_left == pytest.approx(0.4263194281784949, rel=1e-12)

    def test_mirror_symmetric(self):
        fan = solve_star_exact((1, -2, 0.4), (1, 2, 0.4), AIR)
        p, _ = oracles.bisection_star((1, -2, 0.4), (1, 2, 0.4), 1.4)
        assert fan.u_star == 0.0
        assert fan.p_star == pytest.approx(p, abs=1e-10)

    def test_residual_and_oracle_on_random_pairs(self):
        pairs = random_pairs(np.random.default_rng(11), 200)
        wl = np.stack([a for a, _ in pairs], axis=1)
        wr = np.stack([b for _, b in pairs], axis=1)
        fan = solve_star_exact(wl, wr, AIR)
        f, _ = star_function(fan.p_star, wl, wr, AIR)
        assert np.all(np.abs(f) <= 1e-12 * np.maximum(1.0, fan.p_star))
        for k, (a, b) in enumerate(pairs):
            p, u = oracles.bisection_star(tuple(a), tuple(b), 1.4)
            assert abs(fan.p_star[k] - p) <= 1e-10 * max(1.0, p)
            assert abs(fan.u_star[k] - u) <= 1e-9 * max(1.0, abs(u), sound_speed(a, AIR))

    def test_vectorised_equals_scalar(self):
        pairs = random_pairs(np.random.default_rng(5), 20)
        wl = np.stack([a for a, _ in pairs], axis=1)
        wr = np.stack([b for _, b in pairs], axis=1)
        fan = solve_star_exact(wl, wr, AIR)
        for k, (a, b) in enumerate(pairs):
            single = solve_star_exact(a, b, AIR)
            assert single.p_star == pytest.approx(fan.p_star[k], rel=1e-14)

    def test_swap_symmetry(self):
        for a, b in random_pairs(np.random.default_rng(2), 100):
            fan = solve_star_exact(a, b, AIR)
            ma = np.array([b[0], -b[1], b[2]])
            mb = np.array([a[0], -a[1], a[2]])
            mirror = solve_star_exact(ma, mb, AIR)
            assert mirror.p_star == pytest.approx(fan.p_star, rel=1e-13)
            assert mirror.u_star == pytest.approx(-fan.u_star, rel=1e-13, abs=1e-13)

    def test_iteration_cap(self, monkeypatch):
        monkeypatch.setattr(riemann, "MAX_ITER", 1)
        with pytest.raises(NoConvergence):
            solve_star_exact((1, 0, 1000), (1, 0, 0.01), AIR)

    def test_speed_ordering(self):
        for a, b in random_pairs(np.random.default_rng(9), 100):
            fan = solve_star_exact(a, b, AIR)
            assert fan.left_head <= fan.left_tail <= fan.u_star
            assert fan.u_star <= fan.right_tail <= fan.right_head
            assert fan.p_star > 0 and fan.rho_star_left > 0 and fan.rho_star_right > 0


class TestSampling:
    def test_outside_fan(self):
        fan = solve_star_exact(SOD_L, SOD_R, AIR)
        assert np.array_equal(sample_fan(fan, 10.0), np.array(SOD_R))
        assert np.array_equal(sample_fan(fan, -10.0), np.array(SOD_L))

    def test_identity_everywhere(self):
        fan = solve_star_exact((1, 0, 1), (1, 0, 1), AIR)
        w = sample_fan(fan, np.linspace(-3, 3, 61))
        np.testing.assert_allclose(w, np.tile([[1.0], [0.0], [1.0]], 61), rtol=1e-15, atol=1e-15)

    def test_sod_at_interface(self):
        fan = solve_star_exact(SOD_L, SOD_R, AIR)
        w = sample_fan(fan, 0.0)
        assert w[0] == pytest.approx((SOD_P_STAR / 1.0) ** (1 / 1.4), rel=1e-12)
        assert w[1] == pytest.approx(SOD_U_STAR, rel=1e-12)
        assert w[2] == pytest.approx(SOD_P_STAR, rel=1e-12)

    def test_matches_oracle_across_fan(self):
        for a, b in [(SOD_L, SOD_R), ((1, -2, 0.4), (1, 2, 0.4)), ((1, 0, 1000), (1, 0, 0.01)),
                     ((5.99924, 19.5975, 460.894), (5.99242, -6.19633, 46.095))]:
            fan = solve_star_exact(a, b, AIR)
            for xi in np.linspace(-40, 40, 401):
                expected = oracles.exact_state(a, b, 1.4, xi)
                np.testing.assert_allclose(sample_fan(fan, xi), expected, rtol=1e-9, atol=1e-12)

    def test_pressure_stays_in_fan_range(self):
        for a, b in random_pairs(np.random.default_rng(4), 50):
            fan = solve_star_exact(a, b, AIR)
            xi = np.linspace(fan.left_head - 1, fan.right_head + 1, 500)
            below = xi[xi < fan.left_head]
            assert np.array_equal(sample_fan(fan, below), np.broadcast_to(a[:, None], (3, below.size)))
            p = sample_fan(fan, xi)[2]
            lo = min(a[2], b[2], fan.p_star)
            hi = max(a[2], b[2], fan.p_star)
            assert np.all((p >= lo * (1 - 1e-14)) & (p <= hi * (1 + 1e-14)))

    def test_tie_goes_right(self):
        fan = solve_star_exact(SOD_L, SOD_R, AIR)
        at_contact = sample_fan(fan, fan.u_star)
        assert at_contact[0] == pytest.approx(fan.rho_star_right, rel=1e-15)


class TestLinearised:
    def test_identity(self):
        est = solve_star_linearised((1.0, 0.3, 2.0), (1.0, 0.3, 2.0), AIR)
        assert est.p_star == pytest.approx(2.0, rel=1e-15)
        assert est.u_star == pytest.approx(0.3, rel=1e-15)
        assert est.rho_star_left == pytest.approx(1.0, rel=1e-15)
        assert est.rho_star_right == pytest.approx(1.0, rel=1e-15)

    def test_sod_regression(self):
        est = solve_star_linearised(SOD_L, SOD_R, AIR)
        got = (est.p_star, est.u_star, est.rho_star_left, est.rho_star_right)
        assert got == pytest.approx(SOD_LINEARISED, rel=1e-14)

    def test_second_order_agreement(self):
        ratios = []
        for eps in (1e-3, 1e-4, 1e-5):
            wl, wr = (1.0, 0.0, 1.0), (1.0 + eps, 0.0, 1.0 + eps)
            lin = solve_star_linearised(wl, wr, AIR).p_star
            exact = solve_star_exact(wl, wr, AIR).p_star
            ratios.append(abs(lin - exact) / eps ** 2)
        assert max(ratios) < 1.0
        # roughly constant ratio: the gap really is quadratic
        assert ratios[0] == pytest.approx(ratios[1], rel=0.1)

    def test_non_physical_star(self):
        with pytest.raises(NonPhysicalStar):
            solve_star_linearised((1, -2, 0.4), (1, 2, 0.4), AIR)

    def test_swap_symmetry(self):
        for a, b in random_pairs(np.random.default_rng(8), 100):
            est = solve_star_linearised(a, b, AIR, check=False)
            mirror = solve_star_linearised([b[0], -b[1], b[2]], [a[0], -a[1], a[2]], AIR, check=False)
            assert mirror.p_star == pytest.approx(est.p_star, rel=1e-13, abs=1e-13)
            assert mirror.u_star == pytest.approx(-est.u_star, rel=1e-13, abs=1e-13)

    def test_sampling_zones(self):
        est = solve_star_linearised(SOD_L, SOD_R, AIR)
        assert np.array_equal(sample_linearised(est, SOD_L, SOD_R, AIR, -5.0), SOD_L)
        assert np.array_equal(sample_linearised(est, SOD_L, SOD_R, AIR, 5.0), SOD_R)
        at_zero = sample_linearised(est, SOD_L, SOD_R, AIR, 0.0)
        assert tuple(at_zero) == pytest.approx((SOD_LINEARISED[2], SOD_LINEARISED[1], SOD_LINEARISED[0]))
        w = (1.0, 0.0, 1.0)
        same = solve_star_linearised(w, w, AIR)
        right_of_contact = sample_linearised(same, w, w, AIR, np.nextafter(float(same.u_star), 1.0))
        np.testing.assert_allclose(right_of_contact, w, rtol=1e-15)
