import math

import numpy as np
import pytest

from fdcell import analytic, closedform
from fdcell.model import NetworkParams, Scenario
from fdcell.quadrature import QuadratureConfig
from fdcell.simulate import (
    NetworkRealization,
    SimConfig,
    SimMode,
    estimate_outage,
    sample_realization,
    simulate_sinr,
    trial_rng,
    window_radius,
)

DEFAULTS = NetworkParams()
QUAD = QuadratureConfig()


def make_realization(bs, users=(), h=1.0, g=None, k=None, li=0.0):
    bs = np.asarray(bs, dtype=float).reshape(-1, 2)
    users = np.asarray(users, dtype=float).reshape(-1, 2)
    return NetworkRealization(
        bs_points=bs,
        user_points=users,
        serving_distance=float(np.hypot(bs[:, 0], bs[:, 1]).min()),
        serving_fading=h,
        bs_fadings=np.ones(len(bs)) if g is None else np.asarray(g, dtype=float),
        user_fadings=np.ones(len(users)) if k is None else np.asarray(k, dtype=float),
        li_gain=li,
    )


class TestSimConfig:
    def test_defaults(self):
        sim = SimConfig()
        assert sim.trials == 100_000 and sim.window_factor == 12.0
        assert sim.mode is SimMode.MATCHED

    @pytest.mark.parametrize("bad", [
        {"trials": 0}, {"window_factor": 4.0}, {"seed": -1}, {"seed": 2 ** 64},
    ])
    def test_validation(self, bad):
        with pytest.raises(ValueError):
            SimConfig(**bad)


class TestSampleRealization:
    SIM = SimConfig(trials=10, seed=123)

    def test_deterministic_per_trial(self):
        a = sample_realization(DEFAULTS, Scenario.TWO_NODE_FD, self.SIM, 7)
        b = sample_realization(DEFAULTS, Scenario.TWO_NODE_FD, self.SIM, 7)
        assert np.array_equal(a.bs_points, b.bs_points)
        assert np.array_equal(a.user_points, b.user_points)
        assert a.serving_fading == b.serving_fading
        assert a.li_gain == b.li_gain

    def test_trials_differ(self):
        a = sample_realization(DEFAULTS, Scenario.TWO_NODE_FD, self.SIM, 0)
        b = sample_realization(DEFAULTS, Scenario.TWO_NODE_FD, self.SIM, 1)
        assert len(a.bs_points) != len(b.bs_points) or \
            not np.array_equal(a.bs_points, b.bs_points)

    def test_half_duplex_has_no_users(self):
        real = sample_realization(DEFAULTS, Scenario.HALF_DUPLEX, self.SIM, 3)
        assert len(real.user_points) == 0
        assert real.li_gain == 0.0

    def test_serving_distance_is_minimum(self):
        real = sample_realization(DEFAULTS, Scenario.THREE_NODE_FD, self.SIM, 5)
        d = np.hypot(real.bs_points[:, 0], real.bs_points[:, 1])
        assert real.serving_distance == d.min()

    def test_mean_bs_count_matches_window(self):
        # lam*pi*R^2 = window_factor^2 = 144 at defaults
        sim = SimConfig(trials=2000, seed=11)
        mean_expected = sim.window_factor ** 2
        assert DEFAULTS.lam * math.pi * window_radius(DEFAULTS, sim) ** 2 == \
            pytest.approx(mean_expected)
        counts = [len(sample_realization(DEFAULTS, Scenario.HALF_DUPLEX, sim, i).bs_points)
                  for i in range(2000)]
        tol = 4.0 * math.sqrt(mean_expected / len(counts))
        assert abs(np.mean(counts) - mean_expected) < tol

    def test_matched_mode_keeps_disk_empty(self):
        # all matched-mode users lie beyond the physically possible positions
        # of a plain PPP arbitrarily close to the origin; check the hole is
        # statistically visible via the minimum user distance over trials
        sim = SimConfig(trials=400, seed=21)
        nearest = []
        for i in range(400):
            real = sample_realization(DEFAULTS, Scenario.TWO_NODE_FD, sim, i)
            if len(real.user_points):
                nearest.append(np.hypot(real.user_points[:, 0],
                                        real.user_points[:, 1]).min())
        # matched mode: nearest interferer at >= rho with rho ~ Rayleigh; the
        # chance of a single observation under 1.0 is lam*pi*1^2 ~ 3e-3 per
        # trial for the plain process but ~0 here
        assert min(nearest) > 0.5

    def test_no_loop_gain_for_three_node(self):
        p = NetworkParams(sigma_l2=1e-3)
        real = sample_realization(p, Scenario.THREE_NODE_FD, self.SIM, 2)
        assert real.li_gain == 0.0
        real = sample_realization(p, Scenario.TWO_NODE_FD, self.SIM, 2)
        assert real.li_gain > 0.0


class TestSinrOfRealization:
    def test_single_bs_no_interference(self):
        real = make_realization([[3.0, 4.0]], h=2.0)
        p = NetworkParams(p_b=5.0, sigma_n2=1.0)
        expected = 5.0 * 2.0 * 5.0 ** -4.0
        assert sinr(real, p, Scenario.HALF_DUPLEX) == pytest.approx(expected)

    def test_two_equidistant_bs_equal_fading_is_unity(self):
        real = make_realization([[10.0, 0.0], [0.0, 10.0]], h=1.0, g=[1.0, 1.0])
        assert sinr(real, DEFAULTS, Scenario.HALF_DUPLEX) == pytest.approx(1.0)

    def test_single_user_term(self):
        p = NetworkParams(p_u=2.0, sigma_n2=1.0)
        clean = make_realization([[3.0, 4.0]], h=1.0)
        with_user = make_realization([[3.0, 4.0]], users=[[6.0, 8.0]], h=1.0,
                                     k=[0.5])
        base = sinr(clean, p, Scenario.THREE_NODE_FD)
        loaded = sinr(with_user, p, Scenario.THREE_NODE_FD)
        expected_term = 2.0 * 0.5 * 10.0 ** -4.0
        assert 1.0 / loaded - 1.0 / base == \
            pytest.approx(expected_term / (p.p_b * 1.0 * 5.0 ** -4.0))

    def test_loop_interference_only_in_two_node(self):
        real = make_realization([[3.0, 4.0]], h=1.0, li=0.5)
        p = NetworkParams(p_u=2.0, sigma_n2=1.0)
        two = sinr(real, p, Scenario.TWO_NODE_FD)
        three = sinr(real, p, Scenario.THREE_NODE_FD)
        assert two < three
        assert 1.0 / two - 1.0 / three == \
            pytest.approx(2.0 * 0.5 / (p.p_b * 5.0 ** -4.0))

    def test_interference_free_zero_noise_is_infinite(self):
        real = make_realization([[1.0, 0.0]])
        assert sinr(real, NetworkParams(), Scenario.HALF_DUPLEX) == math.inf


def sinr(real, params, scenario):
    from fdcell.simulate import sinr_of_realization

    return sinr_of_realization(real, params, scenario)


class TestEstimateOutage:
    def test_zero_rate_is_exactly_zero(self):
        sim = SimConfig(trials=500, seed=1)
        est = estimate_outage(DEFAULTS, Scenario.THREE_NODE_FD, 0.0, sim)
        assert est.value == 0.0 and est.stderr == 0.0

    def test_parallel_schedules_are_bitwise_identical(self):
        sim = SimConfig(trials=4000, seed=3)
        serial = estimate_outage(DEFAULTS, Scenario.TWO_NODE_FD, 1.0, sim)
        threaded = estimate_outage(DEFAULTS, Scenario.TWO_NODE_FD, 1.0, sim,
                                   workers=4)
        assert serial.value == threaded.value
        rerun = estimate_outage(DEFAULTS, Scenario.TWO_NODE_FD, 1.0, sim,
                                workers=2)
        assert serial.value == rerun.value

    def test_sinr_samples_reusable_across_rates(self):
        sim = SimConfig(trials=2000, seed=5)
        samples = simulate_sinr(DEFAULTS, Scenario.THREE_NODE_FD, sim)
        direct = estimate_outage(DEFAULTS, Scenario.THREE_NODE_FD, 1.5, sim)
        shared = estimate_outage(DEFAULTS, Scenario.THREE_NODE_FD, 1.5, sim,
                                 sinr=samples)
        assert direct.value == shared.value

    def test_matches_closed_form_three_node(self):
        sim = SimConfig(trials=30_000, seed=17)
        est = estimate_outage(DEFAULTS, Scenario.THREE_NODE_FD, 1.0, sim)
        ref = closedform.three_node_outage(1.0).value
        assert abs(est.value - ref) < 3.0 * est.stderr

    def test_matches_quadrature_two_node_matched(self):
        sim = SimConfig(trials=30_000, seed=29)
        p = NetworkParams(sigma_l2=1e-3)
        est = estimate_outage(p, Scenario.TWO_NODE_FD, 1.0, sim)
        ref = analytic.two_node_outage(p, 1.0, QUAD).value
        assert abs(est.value - ref) < 3.0 * est.stderr

    def test_metadata(self):
        sim = SimConfig(trials=100, seed=9)
        est = estimate_outage(DEFAULTS, Scenario.TWO_NODE_FD, 0.5, sim)
        assert est.meta["scenario"] == "two-node"
        assert est.meta["trials"] == 100 and est.meta["mode"] == "matched"


class TestPhysicalVersusMatched:
    """The exclusion-averaged analytic construction thins near-field
    interferers relative to a plain PPP; the simulator exposes the size of
    that modeling approximation rather than hiding it."""

    def test_gap_is_real_and_matches_analysis(self, capsys):
        rate = 1.0
        trials = 30_000
        matched = estimate_outage(DEFAULTS, Scenario.TWO_NODE_FD, rate,
                                  SimConfig(trials=trials, seed=41))
        physical = estimate_outage(
            DEFAULTS, Scenario.TWO_NODE_FD, rate,
            SimConfig(trials=trials, seed=41, mode=SimMode.PHYSICAL))
        # with no loop interference, a plain-PPP uplink process gives the
        # two-node downlink exactly the three-node interference statistics
        assert abs(physical.value - closedform.three_node_outage(rate).value) \
            < 3.0 * physical.stderr
        assert abs(matched.value
                   - analytic.two_node_outage(DEFAULTS, rate, QUAD).value) \
            < 3.0 * matched.stderr
        gap = physical.value - matched.value
        noise = math.hypot(physical.stderr, matched.stderr)
        print(f"physical-vs-matched two-node outage gap at R={rate}: "
              f"{gap:+.4f} ({gap / noise:.1f}x the MC noise)")
        assert gap > 3.0 * noise
