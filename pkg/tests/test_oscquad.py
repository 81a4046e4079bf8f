import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from selfrecip.oscquad import (DEFAULT_EPSILON_POLICY, DEFAULT_TRUNCATION_POLICY, ConvergenceError,
                               RegularizationPolicy, bound_ratio, calibrate_bound, epsilon_regularized,
                               extrapolate, log_grid_weights, panel_moments, product_weights,
                               regularized_limit, truncated, truncated_profile)
from selfrecip.special import FAMILIES, StripError, closed_form_power_integral

# mpmath: closed form of the damped integral, 80-digit power series for the truncated one
DAMPED = [
    (0.3 + 2j, 0.5, 0.04461698663832901 - 0.41978592344692994j, 0.4125722915279827 + 0.03772099325661461j),
    (0.3 + 2j, 0.01, 0.19953854604444135 - 1.0539292958781135j, 1.0521223176978265 + 0.19578602595097372j),
    (0.5 - 4j, 0.5, 0.15759684067072738 - 0.09790716728591274j, -0.09785457162568577 - 0.15760169973702223j),
    (0.5 - 4j, 0.01, 0.8602324538259926 - 0.8425908683415527j, -0.8425843054408894 - 0.8602387547410784j),
]
TRUNCATED = [
    (0.3 + 2j, 0.05, 0.08569782698592118 - 0.1819993780829054j, 0.006509449751132376 - 0.00551420226082902j),
    (0.3 + 2j, 3.0, 0.17757404518011335 - 0.7714597341974926j, 0.6557457182078017 + 0.4272859308631726j),
    (0.3 + 2j, 40.0, 0.22874975537920667 - 1.0258999466462078j, 1.094079114938176 + 0.24205977871308737j),
    (0.5 - 4j, 0.05, 0.03601056927177803 + 0.042121284350358563j, 0.002116040616371265 + 0.0015386340925533327j),
    (0.5 - 4j, 3.0, 0.49999053335248655 - 0.11711605418663289j, -0.22537639212985408 - 0.27595074056168545j),
    (0.5 - 4j, 40.0, 0.8379343307770052 - 0.976567415111413j, -0.9435679784704811 - 0.9778141593853789j),
]
MOMENTS = {
    0.3: [1.9701347110755971, 0.19820577608128376j, 0.6487628705337054, 0.11871877783301418j,
          0.3872176733020746, 0.08471796086387028j],
    7.0: [0.18771045677679687, -0.18858486455854462j, 0.24159184665066677, -0.11186128124780127j,
          0.2516311889183976, -0.035664080584945884j],
    12.0: [-0.08942881966673916, -0.1480947280943103j, -0.06474636498435411, -0.15682891770150387j,
           -0.03715251376623787, -0.15612254052468114j],
    150.0: [-0.009531685728388861, -0.009386888657900928j, -0.009406527212950183, -0.009511474630637338j,
            -0.0092780464049052, -0.009632612299875176j],
}

strip = st.builds(complex, st.floats(0.1, 0.9), st.floats(-5, 5))


@pytest.mark.parametrize("zeta, eps, c_ref, s_ref", DAMPED)
def test_epsilon_regularized_frozen(zeta, eps, c_ref, s_ref):
    assert abs(epsilon_regularized("cosine", zeta, eps) - c_ref) < 1e-11
    assert abs(epsilon_regularized("sine", zeta, eps) - s_ref) < 1e-11


@pytest.mark.parametrize("zeta, R, c_ref, s_ref", TRUNCATED)
def test_truncated_frozen(zeta, R, c_ref, s_ref):
    assert abs(truncated("cosine", zeta, R) - c_ref) < 1e-11
    assert abs(truncated("sine", zeta, R) - s_ref) < 1e-11


def test_truncated_at_zero_and_profile_end():
    assert truncated("cosine", 0.4, 0.0) == 0
    edges, vals = truncated_profile("sine", 0.4 + 1j, 30.0)
    assert edges[-1] == 30.0
    assert vals[-1] == pytest.approx(truncated("sine", 0.4 + 1j, 30.0), abs=1e-14)
    assert np.all(np.diff(edges) > 0)


@pytest.mark.parametrize("kernel", FAMILIES)
@pytest.mark.parametrize("policy", [DEFAULT_EPSILON_POLICY, DEFAULT_TRUNCATION_POLICY], ids=["eps", "trunc"])
@pytest.mark.parametrize("zeta", [0.5, 0.2 + 3j, 0.8 - 5j, 0.1 + 0.5j])
def test_regularized_limit_closed_form(kernel, policy, zeta):
    value, err = regularized_limit(kernel, zeta, policy)
    ref = closed_form_power_integral(kernel, zeta)
    assert abs(value - ref) < 1e-6 * max(1, abs(ref))
    assert err > 0


@pytest.mark.parametrize("bad", [
    ("tangent", 0.5, DEFAULT_EPSILON_POLICY),
])
def test_regularized_limit_rejects_kernel(bad):
    with pytest.raises(ValueError):
        regularized_limit(*bad)


@pytest.mark.parametrize("zeta", [0.0, 1.0, 1.2, -0.5 + 1j])
def test_off_strip_rejected(zeta):
    with pytest.raises(StripError):
        truncated("cosine", zeta, 1.0)


def test_epsilon_must_be_positive():
    with pytest.raises(ValueError):
        epsilon_regularized("cosine", 0.5, 0.0)


@pytest.mark.parametrize("kind, sched, order", [
    ("epsilon", (0.1, 0.2, 0.3), 1),        # not decreasing
    ("truncation", (3.0, 2.0, 1.0), 1),     # not increasing
    ("epsilon", (0.3, 0.2), 1),             # too short
    ("epsilon", (0.3, 0.2, 0.1), 3),        # order too high
    ("truncation", (-1.0, 1.0, 2.0), 1),    # nonpositive
    ("other", (1.0, 2.0, 3.0), 1),
])
def test_policy_validation(kind, sched, order):
    with pytest.raises(ValueError):
        RegularizationPolicy(kind, sched, order)


def test_diverging_schedule_raises():
    # a truncation schedule off the periods of cos leaves large oscillating corrections
    policy = RegularizationPolicy("truncation", (0.5, 1.3, 2.2, 3.9, 4.4, 8.0), 3)
    with pytest.raises(ConvergenceError):
        regularized_limit("cosine", 0.9 + 0.5j, policy)


@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(-5, 5))
def test_extrapolate_exact_on_model(limit, b1, b2):
    xs = np.array([0.5, 0.25, 0.125, 0.0625, 0.03125])
    vals = limit + b1 * xs + b2 * xs ** 2
    est = extrapolate(xs, vals, [1, 2], 2)
    assert np.allclose(est, limit, rtol=0, atol=1e-10 * (1 + abs(b1) + abs(b2)))


@pytest.mark.parametrize("theta", MOMENTS)
@pytest.mark.parametrize("order", [4, 6])
def test_panel_moments_frozen(theta, order):
    mu = panel_moments(np.array([theta, -theta]), order)
    ref = np.array(MOMENTS[theta][:order])
    assert np.abs(mu[0] - ref).max() < 1e-13
    assert np.abs(mu[1] - np.conj(ref)).max() < 1e-13


@given(st.floats(-200, 200), st.sampled_from([4, 6]), st.integers(0, 5))
def test_product_weights_exact_on_low_degree(omega, order, deg):
    # polynomials below the stencil order are integrated exactly at any frequency
    deg = min(deg, order - 1)
    x = np.sort(np.concatenate([[0.0, 2.0], np.linspace(0.1, 1.9, 9) + 0.03 * np.sin(np.arange(9))]))
    w = product_weights(x, np.array([omega]), order=order)[0]
    f = lambda s: s ** deg
    if omega == 0:
        exact = 2.0 ** (deg + 1) / (deg + 1)
    else:
        re = quad(f, 0, 2, weight="cos", wvar=omega, epsabs=1e-14, epsrel=1e-13)[0]
        im = quad(f, 0, 2, weight="sin", wvar=omega, epsabs=1e-14, epsrel=1e-13)[0]
        exact = re + 1j * im
    assert abs(w @ x ** deg - exact) < 1e-12 * 2.0 ** deg


@pytest.mark.parametrize("order", [4, 6])
def test_log_grid_weights_match_direct(order):
    u_min, h, n = -6.0, 0.05, 300
    t = np.exp(u_min + h * np.arange(n))
    fast = log_grid_weights(u_min, h, n, order)
    slow = product_weights(t, t, order=order)
    assert np.abs(fast - slow).max() < 1e-12 * np.abs(slow).max()


def test_product_weights_need_enough_nodes():
    with pytest.raises(ValueError):
        product_weights(np.linspace(0, 1, 4), np.array([1.0]))
    with pytest.raises(ValueError):
        product_weights(np.linspace(0, 1, 20), np.array([1.0]), order=5)


def test_bound_ratio_is_scale_free():
    z = 0.5 + 3j
    r = bound_ratio("cosine", z, 200.0)
    assert 0 < r < 5
    assert r >= abs(truncated("cosine", z, 200.0)) * np.exp(-1.5 * np.pi) - 1e-15


def test_calibrate_bound_small():
    const = calibrate_bound(0.25, 2.0, 50.0, n_re=2, n_tau=3, eps_schedule=(0.5,))
    assert 1.0 < const < 10.0
    with pytest.raises(ValueError):
        calibrate_bound(0.6, 1.0, 10.0)
