"""Student-like innovation law with tail index alpha.

The density is

    s_alpha(x) = k_s * (1 + x^2/alpha)^(-(alpha+1)/2),
    k_s        = Gamma((alpha+1)/2) / (sqrt(pi*alpha) * Gamma(alpha/2)),

a symmetric law whose upper tail satisfies

    x^alpha * (1 - S_alpha(x)) -> k_s * alpha^((alpha-1)/2)    (x -> oo).

Besides density / CDF / quantile / sampling, the module carries the large-x
expansions of the compositions Phi_inv(S_alpha(x)) and log S_alpha_inv(Phi(x))
(Phi is the standard normal CDF) that the tail formulas rely on.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import special
from scipy.optimize import brentq

# below this x the large-x expansion of Phi_inv(S_alpha(x)) is not usable
# (it takes log log x, which needs x > e to be positive)
PHI_COMPOSE_CUTOFF = math.e


@dataclass(frozen=True)
class StudentLaw:
    """Tail index alpha > 0 and the normalizing constant k_s of the density."""

    alpha: float
    k_s: float


def make_law(alpha):
    """Build the law with tail index alpha.

    k_s is evaluated through log-Gamma, so large alpha does not overflow.
    """
    alpha = float(alpha)
    if not math.isfinite(alpha) or alpha <= 0.0:
        raise ValueError("need finite alpha > 0")
    log_ks = (math.lgamma((alpha + 1.0) / 2.0) - math.lgamma(alpha / 2.0)
              - 0.5 * math.log(math.pi * alpha))
    return StudentLaw(alpha=alpha, k_s=math.exp(log_ks))


def density(law, x):
    """Density s_alpha(x); symmetric, unimodal, maximal at 0."""
    x = np.asarray(x, dtype=float)
    out = law.k_s * (1.0 + x * x / law.alpha) ** (-(law.alpha + 1.0) / 2.0)
    return out if out.ndim else float(out)


def survival(law, x):
    """Upper tail 1 - S_alpha(x), without cancellation for large x.

    For x >= 0 the tail equals I_y(alpha/2, 1/2) / 2 with y = alpha/(alpha+x^2)
    and I the regularized incomplete beta function; x < 0 goes through symmetry.
    """
    x = np.asarray(x, dtype=float)
    with np.errstate(over="ignore"):
        y = law.alpha / (law.alpha + x * x)
    half_tail = 0.5 * special.betainc(law.alpha / 2.0, 0.5, y)
    out = np.where(x >= 0.0, half_tail, 1.0 - half_tail)
    return out if out.ndim else float(out)


def cdf(law, x):
    """CDF S_alpha(x); equals survival(law, -x) by symmetry."""
    x = np.asarray(x, dtype=float)
    out = survival(law, -x)
    return out


def tail_constant(law):
    """Limit of x^alpha * (1 - S_alpha(x)), namely k_s * alpha^((alpha-1)/2)."""
    return law.k_s * law.alpha ** ((law.alpha - 1.0) / 2.0)


def quantile_tail(law, u):
    """First-order upper quantile: (1 - S_alpha)^{-1}(u) ~ (tail_constant/u)^(1/alpha).

    Intended for small u; the relative error vanishes as u -> 0.
    """
    u = float(u)
    if not 0.0 < u < 1.0:
        raise ValueError("need 0 < u < 1")
    return (tail_constant(law) / u) ** (1.0 / law.alpha)


def upper_quantile(law, u):
    """Exact solution q of 1 - S_alpha(q) = u for 0 < u < 1/2.

    Bracket around the first-order quantile, then Brent refinement on the
    cancellation-free survival function.
    """
    u = float(u)
    if not 0.0 < u < 0.5:
        raise ValueError("need 0 < u < 1/2")
    lo = hi = quantile_tail(law, u)
    while survival(law, hi) > u:
        hi *= 2.0
    while survival(law, lo) < u:
        lo /= 2.0
    if lo == hi:
        return lo
    return float(brentq(lambda q: survival(law, q) - u, lo, hi, rtol=8.9e-16))


def normal_quantile(u):
    """Standard normal quantile Phi_inv(u), exact."""
    u = float(u)
    if not 0.0 < u < 1.0:
        raise ValueError("need 0 < u < 1")
    return float(special.ndtri(u))


def normal_quantile_sq_expansion(u):
    """Small-u expansion of the squared upper normal quantile:

        Phi_inv(1-u)^2 = 2 log(1/u) - log log(1/u) - 2 log(2 sqrt(pi)) + o(1).
    """
    u = float(u)
    if not 0.0 < u < 1.0:
        raise ValueError("need 0 < u < 1")
    big_l = math.log(1.0 / u)
    return 2.0 * big_l - math.log(big_l) - 2.0 * math.log(2.0 * math.sqrt(math.pi))


def phi_inv_compose_s(law, x):
    """Exact Phi_inv(S_alpha(x)) next to its three-term large-x expansion.

    Returns (exact, expansion, expansion_ok).  The expansion is

        sqrt(2 alpha log x) - log log x / (2 sqrt(2 alpha log x))
                            - log(k_s alpha^(alpha/2) 2 sqrt(pi)) / sqrt(2 alpha log x)

    and is only meaningful for x > PHI_COMPOSE_CUTOFF; below the cutoff the
    expansion slot is NaN and expansion_ok is False.  The exact branch goes
    through the upper tail, so it stays accurate far beyond the range where
    1 - S_alpha(x) would round to 0 in double precision.
    """
    x = float(x)
    u = survival(law, abs(x))
    exact = -math.copysign(1.0, x) * float(special.ndtri(u)) if x != 0.0 else 0.0
    if x <= PHI_COMPOSE_CUTOFF:
        return exact, math.nan, False
    big_l = math.log(x)
    lead = math.sqrt(2.0 * law.alpha * big_l)
    shift = (math.log(law.k_s) + 0.5 * law.alpha * math.log(law.alpha)
             + math.log(2.0 * math.sqrt(math.pi)))
    expansion = lead - math.log(big_l) / (2.0 * lead) - shift / lead
    return exact, expansion, True


def s_inv_compose_phi_log(law, x):
    """log S_alpha_inv(Phi(x)) for x > 0, next to its large-x expansion

        x^2/(2 alpha) + (1/alpha) log x
                      + (1/alpha) log(k_s alpha^((alpha-1)/2) sqrt(2 pi)) + o(1).

    Returns (exact_log, expansion).  The exact branch inverts the Student
    upper tail at u = 1 - Phi(x), so it needs Phi(x) < 1 in double precision
    (x below about 38).
    """
    x = float(x)
    if x <= 0.0:
        raise ValueError("need x > 0")
    u = float(special.ndtr(-x))
    if u == 0.0:
        raise ValueError("need x small enough that 1 - Phi(x) > 0 in double precision")
    exact = math.log(upper_quantile(law, u)) if u < 0.5 else math.log(1.0)
    shift = (math.log(law.k_s) + 0.5 * (law.alpha - 1.0) * math.log(law.alpha)
             + 0.5 * math.log(2.0 * math.pi))
    expansion = x * x / (2.0 * law.alpha) + math.log(x) / law.alpha + shift / law.alpha
    return exact, expansion


def sample(law, stream, size=None):
    """Draw from the law using the numpy Generator `stream`.

    alpha = 1 is the tangent transform of a uniform; other alpha divide a
    standard normal by sqrt(chisquare(alpha)/alpha).  Both are exact in
    distribution, and the draws are a pure function of the generator state.
    """
    if law.alpha == 1.0:
        u = stream.random(size)
        out = np.tan(np.pi * (u - 0.5))
    else:
        z = stream.standard_normal(size)
        v = stream.chisquare(law.alpha, size)
        out = z / np.sqrt(v / law.alpha)
    return out if size is not None else float(out)
