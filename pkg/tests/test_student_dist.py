import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heavytail.student_dist import (PHI_COMPOSE_CUTOFF, cdf, density, make_law,
                                    normal_quantile,
                                    normal_quantile_sq_expansion,
                                    phi_inv_compose_s, quantile_tail, sample,
                                    s_inv_compose_phi_log, survival,
                                    tail_constant, upper_quantile)

# frozen 40-digit evaluations of Gamma((alpha+1)/2)/(sqrt(pi alpha) Gamma(alpha/2))
K_S_ORACLE = {
    1.0: 0.31830988618379067154,
    1.5: 0.34073498128869363995,
    2.0: 0.35355339059327376220,
    5.0: 0.37960668982249443119,
    10.0: 0.38910838396603105062,
}

# frozen 40-digit limits of x^alpha (1 - S_alpha(x))
TAIL_CONST_ORACLE = {
    1.0: 0.31830988618379067154,
    2.0: 0.5,
    5.0: 9.4901672455623607797,
}


def test_k_s_against_frozen_oracle():
    for alpha, want in K_S_ORACLE.items():
        got = make_law(alpha).k_s
        assert got == pytest.approx(want, rel=1e-14)


def test_tail_constant_against_frozen_oracle():
    for alpha, want in TAIL_CONST_ORACLE.items():
        got = tail_constant(make_law(alpha))
        assert got == pytest.approx(want, rel=1e-14)


def test_density_and_cdf_frozen_points():
    law = make_law(5.0)
    # 40-digit evaluations at alpha = 5
    assert density(law, 2.0) == pytest.approx(0.065090310326216466253, rel=1e-13)
    assert cdf(law, 3.0) == pytest.approx(0.98495037605126871308, rel=1e-13)


def test_cauchy_closed_forms():
    # alpha = 1 is the standard Cauchy law
    law = make_law(1.0)
    for x in (-3.0, -0.5, 0.0, 1.0, 7.5):
        assert density(law, x) == pytest.approx(1.0 / (math.pi * (1.0 + x * x)),
                                                rel=1e-13)
        assert cdf(law, x) == pytest.approx(0.5 + math.atan(x) / math.pi,
                                            rel=1e-13)


def test_make_law_rejects_bad_alpha():
    for alpha in (0.0, -1.0, math.nan, math.inf):
        with pytest.raises(ValueError):
            make_law(alpha)


@given(alpha=st.floats(0.1, 20.0), x=st.floats(-50.0, 50.0))
@settings(max_examples=200, deadline=None)
def test_cdf_symmetry_and_range(alpha, x):
    law = make_law(alpha)
    left = cdf(law, -x)
    right = cdf(law, x)
    assert abs(left + right - 1.0) < 1e-12
    assert 0.0 <= left <= 1.0
    assert survival(law, x) == pytest.approx(1.0 - right, abs=1e-12)


@given(alpha=st.floats(0.1, 20.0),
       x=st.floats(-30.0, 30.0), y=st.floats(-30.0, 30.0))
@settings(max_examples=200, deadline=None)
def test_cdf_monotone(alpha, x, y):
    law = make_law(alpha)
    lo, hi = min(x, y), max(x, y)
    assert cdf(law, lo) <= cdf(law, hi) + 1e-15


def test_survival_no_cancellation_far_out():
    # naive 1 - S(x) would round to 0 long before x = 1e200
    law = make_law(1.0)
    s = survival(law, 1e200)
    assert s == pytest.approx(1.0 / (math.pi * 1e200), rel=1e-10)


def test_quantile_tail_first_order():
    # alpha = 2: exact upper quantile at u = 1e-6, frozen from a 40-digit solve
    law = make_law(2.0)
    exact = upper_quantile(law, 1e-6)
    assert exact == pytest.approx(707.10572052593380253, rel=1e-12)
    approx = quantile_tail(law, 1e-6)
    assert approx == pytest.approx(exact, rel=1e-5)
    # the first-order error shrinks as u -> 0
    err = [abs(quantile_tail(law, u) / upper_quantile(law, u) - 1.0)
           for u in (1e-3, 1e-5, 1e-7)]
    assert err[0] > err[1] > err[2]


@given(alpha=st.floats(0.5, 10.0), log_u=st.floats(-12.0, -1.0))
@settings(max_examples=100, deadline=None)
def test_upper_quantile_inverts_survival(alpha, log_u):
    law = make_law(alpha)
    u = 10.0 ** log_u
    q = upper_quantile(law, u)
    assert survival(law, q) == pytest.approx(u, rel=1e-9)


def test_normal_quantile_frozen_point():
    # 40-digit two-sided 97.5% point of the standard normal law
    assert normal_quantile(0.975) == pytest.approx(1.9599639845400542355,
                                                   rel=1e-14)
    assert normal_quantile(0.5) == 0.0
    with pytest.raises(ValueError):
        normal_quantile(0.0)
    with pytest.raises(ValueError):
        normal_quantile(1.0)


def test_normal_quantile_sq_expansion_converges():
    gaps = []
    for u in (1e-4, 1e-8, 1e-16, 1e-32):
        exact_sq = normal_quantile(u) ** 2  # Phi_inv(u)^2 = Phi_inv(1-u)^2
        gaps.append(abs(exact_sq - normal_quantile_sq_expansion(u)))
    assert gaps[0] > gaps[1] > gaps[2] > gaps[3]
    # the o(1) rest decays like (log log(1/u))^2 / log(1/u), so slowly
    assert gaps[3] < 5e-2


def test_phi_inv_compose_s_expansion():
    law = make_law(1.0)
    exact, expansion, ok = phi_inv_compose_s(law, 1e6)
    assert ok
    assert abs(exact - expansion) <= 5e-3
    # gap decreases along the grid
    gaps = [abs(e - a) for e, a, _ in
            (phi_inv_compose_s(law, x) for x in (1e3, 1e6, 1e9, 1e12))]
    assert gaps == sorted(gaps, reverse=True)


def test_phi_inv_compose_s_exact_roundtrip():
    from scipy.special import ndtr

    law = make_law(2.5)
    for x in (0.5, 3.0, 40.0, 1e4):
        exact, _, _ = phi_inv_compose_s(law, x)
        assert ndtr(exact) == pytest.approx(cdf(law, x), rel=1e-10)


def test_phi_inv_compose_s_below_cutoff():
    law = make_law(1.0)
    exact, expansion, ok = phi_inv_compose_s(law, 1.5)
    assert not ok
    assert math.isnan(expansion)
    assert math.isfinite(exact)
    assert 1.5 < PHI_COMPOSE_CUTOFF < 3.0


def test_s_inv_compose_phi_log_expansion():
    law = make_law(5.0)
    exact, expansion = s_inv_compose_phi_log(law, 8.0)
    assert abs(exact - expansion) <= 2e-2
    gaps = [abs(e - a) for e, a in
            (s_inv_compose_phi_log(law, x) for x in (8.0, 16.0, 30.0))]
    assert gaps == sorted(gaps, reverse=True)
    with pytest.raises(ValueError):
        s_inv_compose_phi_log(law, 0.0)
    with pytest.raises(ValueError):
        s_inv_compose_phi_log(law, 100.0)  # Phi(x) rounds to 1


def test_sample_deterministic_and_distributed():
    law = make_law(1.0)
    a = sample(law, np.random.default_rng(123), size=1000)
    b = sample(law, np.random.default_rng(123), size=1000)
    assert np.array_equal(a, b)
    # Cauchy draws: median near 0, quartiles near +-1
    big = sample(law, np.random.default_rng(7), size=200_000)
    q1, q2, q3 = np.quantile(big, [0.25, 0.5, 0.75])
    assert abs(q2) < 0.02
    assert abs(q1 + 1.0) < 0.02
    assert abs(q3 - 1.0) < 0.02


def test_sample_general_alpha_matches_cdf():
    # Kolmogorov-Smirnov style check of the alpha = 5 sampler against cdf
    law = make_law(5.0)
    draws = np.sort(sample(law, np.random.default_rng(42), size=100_000))
    grid = np.linspace(0.001, 0.999, 999)
    emp = np.quantile(draws, grid)
    gap = np.max(np.abs(cdf(law, emp) - grid))
    assert gap < 0.01


def test_sample_scalar_mode():
    law = make_law(2.0)
    one = sample(law, np.random.default_rng(0))
    assert isinstance(one, float)
