"""General outage probabilities by nested adaptive quadrature.

The downlink outage of each architecture is an expectation over the serving
distance r of a conditional coverage probability that factors into a noise
term, a residual loop-interference term (two-node only) and Laplace transforms
of the BS- and uplink-generated interference.  The transforms' semi-infinite
integrals decay only polynomially, so they are mapped onto finite domains with
explicit changes of variable rather than truncated; only the Gaussian-weighted
radial integrals (serving distance r, exclusion radius rho) are truncated,
where exp(-lam*pi*r^2) falls below the configured tail cut.

The fading rate mu is normalized to 1 throughout this module: it cancels in
every interference term, so the expressions depend only on the threshold, the
distances and the power ratio.
"""

from __future__ import annotations

import math

from .model import Method, NetworkParams, OutageEstimate, Scenario, threshold_from_rate
from .quadrature import QuadratureConfig, gaussian_tail_radius, integrate

__all__ = [
    "bs_interference_laplace",
    "uplink_laplace_full",
    "uplink_laplace_excluded",
    "two_node_outage",
    "three_node_outage",
    "half_duplex_outage",
]


def bs_interference_laplace(r: float, threshold: float, params: NetworkParams,
                            quad: QuadratureConfig | None = None) -> float:
    """Laplace transform of the interference from all BSs beyond the serving
    one, evaluated at the conditional SINR threshold:

        exp(-2*pi*lam * integral_r^inf  T/(T + (x/r)^alpha1) * x dx).

    Scaling t = x/r and folding the tail with t = 1/v gives the finite form
    r^2 * integral_0^1  T*v^(alpha1-3) / (1 + T*v^alpha1) dv, integrable for
    alpha1 > 2.
    """
    _check_radial_args(r, threshold)
    if threshold == 0.0:
        return 1.0
    quad = quad or QuadratureConfig()
    t, a1 = threshold, params.alpha1

    def mapped(v: float) -> float:
        return t * v ** (a1 - 3.0) / (1.0 + t * v ** a1)

    j = integrate(mapped, 0.0, 1.0, quad.rel_tol_inner, quad)
    return math.exp(-2.0 * math.pi * params.lam * r * r * j)


def uplink_laplace_full(r: float, threshold: float, params: NetworkParams,
                        quad: QuadratureConfig | None = None) -> float:
    """Laplace transform of the uplink interference when interferers form an
    unrestricted plane PPP (three-node architecture):

        exp(-2*pi*lam * integral_0^inf  a/(a + y^alpha2 / r^alpha1) * y dy)

    with a = (p_u/p_b)*T.  Scaling by y* = (a*r^alpha1)^(1/alpha2) splits the
    integral at 1; the [1, inf) part folds to (0, 1] through u = 1/v.
    """
    _check_radial_args(r, threshold)
    a = params.p_u / params.p_b * threshold
    if a == 0.0:
        return 1.0
    quad = quad or QuadratureConfig()
    ystar2 = (a * r ** params.alpha1) ** (2.0 / params.alpha2)
    c_all = _unit_head(params.alpha2, quad) + _unit_tail(params.alpha2, quad)
    return math.exp(-2.0 * math.pi * params.lam * ystar2 * c_all)


def uplink_laplace_excluded(r: float, threshold: float, params: NetworkParams,
                            quad: QuadratureConfig | None = None) -> float:
    """Laplace transform of the uplink interference with the nearest
    interferer held outside a disk of random radius rho (two-node
    architecture): the full-plane transform's inner integral starts at rho
    instead of 0, and rho is averaged over the nearest-neighbor distance law.

    Always at least as large as :func:`uplink_laplace_full` at identical
    arguments, since excluding a disk removes interference.
    """
    _check_radial_args(r, threshold)
    a = params.p_u / params.p_b * threshold
    if a == 0.0:
        return 1.0
    quad = quad or QuadratureConfig()
    a2 = params.alpha2
    ystar2 = (a * r ** params.alpha1) ** (2.0 / a2)
    ystar = math.sqrt(ystar2)
    tail1 = _unit_tail(a2, quad)
    tol = quad.rel_tol_inner

    def excess(c: float) -> float:
        # integral_c^inf u/(1+u^alpha2) du in the scaled variable
        if c <= 1.0:
            head = integrate(lambda u: u / (1.0 + u ** a2), c, 1.0, tol, quad) \
                if c < 1.0 else 0.0
            return head + tail1
        return c ** (2.0 - a2) * integrate(
            lambda v: v ** (a2 - 3.0) / (1.0 + (v / c) ** a2), 0.0, 1.0, tol, quad)

    lam = params.lam
    lam_pi = lam * math.pi
    two_pi_lam = 2.0 * math.pi * lam

    def integrand(rho: float) -> float:
        w = two_pi_lam * rho * math.exp(-lam_pi * rho * rho)
        if w == 0.0:
            return 0.0
        return w * math.exp(-two_pi_lam * ystar2 * excess(rho / ystar))

    rho_max = gaussian_tail_radius(lam, quad)
    # the integrand is bounded by the exclusion-radius pdf, so the value is
    # a probability-like quantity in (0, 1]
    return integrate(integrand, 0.0, rho_max, tol, quad, abs_tol=tol)


def two_node_outage(params: NetworkParams, rate_r: float,
                    quad: QuadratureConfig | None = None) -> OutageEstimate:
    """Downlink outage of the two-node architecture: both ends are
    full-duplex, so the user suffers residual loop interference but no
    same-cell uplink interferer."""
    t = threshold_from_rate(rate_r, Scenario.TWO_NODE_FD)
    li_coef = params.p_u / params.p_b * params.sigma_l2 * t
    return _radial_outage(params, Scenario.TWO_NODE_FD, rate_r, t,
                          quad or QuadratureConfig(),
                          li_coef=li_coef, uplink=uplink_laplace_excluded)


def three_node_outage(params: NetworkParams, rate_r: float,
                      quad: QuadratureConfig | None = None) -> OutageEstimate:
    """Downlink outage of the three-node architecture: only the BS is
    full-duplex; the downlink user sees the whole uplink user process but no
    loop interference."""
    t = threshold_from_rate(rate_r, Scenario.THREE_NODE_FD)
    return _radial_outage(params, Scenario.THREE_NODE_FD, rate_r, t,
                          quad or QuadratureConfig(),
                          li_coef=0.0, uplink=uplink_laplace_full)


def half_duplex_outage(params: NetworkParams, rate_r: float,
                       quad: QuadratureConfig | None = None) -> OutageEstimate:
    """Half-duplex baseline in the RF-chain-conserved comparison: no uplink
    interference, no loop interference, and the doubled-rate threshold."""
    t = threshold_from_rate(rate_r, Scenario.HALF_DUPLEX)
    return _radial_outage(params, Scenario.HALF_DUPLEX, rate_r, t,
                          quad or QuadratureConfig(),
                          li_coef=0.0, uplink=None)


def _radial_outage(params: NetworkParams, scenario: Scenario, rate_r: float,
                   t: float, quad: QuadratureConfig,
                   li_coef: float, uplink) -> OutageEstimate:
    meta = {"scenario": scenario.value, "rate": rate_r, "params": params.as_dict()}
    if t == 0.0:
        # the coverage integrand is exactly the serving-distance pdf
        return OutageEstimate(0.0, Method.ANALYTIC_GENERAL, meta=meta)
    lam_pi = params.lam * math.pi
    noise_coef = t * params.sigma_n2 / params.p_b
    a1 = params.alpha1

    def integrand(r: float) -> float:
        ra = r ** a1
        w = 2.0 * lam_pi * r * math.exp(-lam_pi * r * r - noise_coef * ra)
        if li_coef:
            w /= 1.0 + li_coef * ra
        if w == 0.0:
            return 0.0
        w *= bs_interference_laplace(r, t, params, quad)
        if uplink is not None:
            w *= uplink(r, t, params, quad)
        return w

    r_max = gaussian_tail_radius(params.lam, quad)
    cover = integrate(integrand, 0.0, r_max, quad.rel_tol_outer, quad,
                      abs_tol=quad.rel_tol_outer)
    return OutageEstimate(1.0 - cover, Method.ANALYTIC_GENERAL, meta=meta)


def _check_radial_args(r: float, threshold: float) -> None:
    if not r > 0:
        raise ValueError(f"serving distance must be > 0, got {r}")
    if threshold < 0:
        raise ValueError(f"threshold must be >= 0, got {threshold}")


def _unit_head(alpha2: float, quad: QuadratureConfig) -> float:
    """integral_0^1 u/(1+u^alpha2) du."""
    return integrate(lambda u: u / (1.0 + u ** alpha2), 0.0, 1.0,
                     quad.rel_tol_inner, quad)


def _unit_tail(alpha2: float, quad: QuadratureConfig) -> float:
    """integral_1^inf u/(1+u^alpha2) du folded to (0, 1] via u = 1/v."""
    return integrate(lambda v: v ** (alpha2 - 3.0) / (1.0 + v ** alpha2), 0.0, 1.0,
                     quad.rel_tol_inner, quad)
