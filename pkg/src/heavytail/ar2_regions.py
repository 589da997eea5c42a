"""Parameter-plane analysis for AR(2) models X_r = a X_{r-1} + b X_{r-2} + eps_r.

The first column of the trajectory matrix A follows

    A_{1,1} = 1,   A_{2,1} = a,   A_{j,1} = a A_{j-1,1} + b A_{j-2,1},

and the k-th-from-last diagonal entry of C = A^T B A is independent of the
path length:

    d_k = C_{n-k,n-k} = sum_{j=1}^{k} A_{j+1,1} A_{j,1}    (k <= n - 2).

Some d_k > 0 puts the upper tail of n gamma_n(1) in the t^(-alpha/2) regime;
all d_k <= 0 leaves the degenerate t^(-alpha) log t regime.  This module
provides the membership scan over k, low-order polynomial forms of d_k, a
trigonometric closed form on the negative-discriminant half-plane, the
sufficient condition for coverage, the stability triangle, and the tail
classification on the stable region.
"""

import cmath
import math

import numpy as np

from .ar_quadform import ArModel, autocov_matrix
from .tail_formulas import (POWER_HALF, POWER_LOG, TailLaw, classify,
                            coef_degenerate_case, coef_positive_case)

# entry magnitude that triggers a uniform positive rescale of the scan state
_RESCALE_AT = 1e100


def a_col(a, b, jmax):
    """First trajectory column (A_{1,1}, ..., A_{jmax,1})."""
    jmax = int(jmax)
    if jmax < 1:
        raise ValueError("need jmax >= 1")
    a = float(a)
    b = float(b)
    col = np.empty(jmax)
    col[0] = 1.0
    if jmax > 1:
        col[1] = a
    for j in range(2, jmax):
        col[j] = a * col[j - 1] + b * col[j - 2]
    return col


def diag_seq(a, b, kmax):
    """The sequence (d_1, ..., d_kmax) of n-free diagonal entries."""
    kmax = int(kmax)
    if kmax < 1:
        raise ValueError("need kmax >= 1")
    col = a_col(a, b, kmax + 1)
    return np.cumsum(col[1:] * col[:-1])


def region_membership(a, b, kmax=200):
    """Smallest k in [2, kmax] whose region contains (a, b), meaning
    d_{k-1} > 0 strictly; None when no region up to kmax covers the point.

    The scan tracks a uniformly rescaled copy of the recursion (a positive
    rescale preserves every sign), so explosive parameter points cannot
    overflow.
    """
    if int(kmax) < 2:
        raise ValueError("need kmax >= 2")
    a = float(a)
    b = float(b)
    prev, cur = 1.0, a  # A_{1,1}, A_{2,1}, possibly rescaled
    d = 0.0
    for k in range(2, int(kmax) + 1):
        d += cur * prev  # now a positive multiple of d_{k-1}
        if d > 0.0:
            return k
        prev, cur = cur, a * cur + b * prev
        m = max(abs(prev), abs(cur))
        if m > _RESCALE_AT:
            s = 1.0 / m
            prev *= s
            cur *= s
            d *= s * s
    return None


def region_polynomials(a, b):
    """The first three d_k as polynomials in (a, b):

        d_1 = a
        d_2 = a (a^2 + b + 1)
        d_3 = a (2 b^2 + b (3 a^2 + 1) + a^4 + a^2 + 1).
    """
    a = float(a)
    b = float(b)
    d1 = a
    d2 = a * (a * a + b + 1.0)
    d3 = a * (2.0 * b * b + b * (3.0 * a * a + 1.0) + a ** 4 + a * a + 1.0)
    return d1, d2, d3


def closed_form_diag(r, phi, k):
    """d_{k-1} = C_{n-k+1,n-k+1} at a = -2 r cos(phi), b = -r^2 in closed form:

        r * [ -2 (1 - r^(2k)) cos(phi) sin^2(phi)
              + r^(2(k-1)) (1 - r^2) sin(k phi)
                * (sin((k+1) phi) - r^2 sin((k-1) phi)) ]
        / [ (1 - r^2) ((1 - r^2)^2 + 4 r^2 sin^2(phi)) sin^2(phi) ]

    for r >= 0, r != 1 (removable singularity; use the recursion there) and
    0 < phi < pi.  k = 1 returns 0.
    """
    r = float(r)
    phi = float(phi)
    k = int(k)
    if k < 1:
        raise ValueError("need k >= 1")
    if r < 0.0:
        raise ValueError("need r >= 0")
    if r == 1.0:
        raise ValueError("need r != 1 (removable singularity of the closed form)")
    if not 0.0 < phi < math.pi:
        raise ValueError("need 0 < phi < pi")
    s = math.sin(phi)
    c = math.cos(phi)
    one = 1.0 - r * r
    num = r * (-2.0 * (1.0 - r ** (2 * k)) * c * s * s
               + r ** (2 * (k - 1)) * one * math.sin(k * phi)
               * (math.sin((k + 1) * phi) - r * r * math.sin((k - 1) * phi)))
    den = one * (one * one + 4.0 * r * r * s * s) * s * s
    return num / den


def theorem_region_test(a, b):
    """True when (a, b) is in the proven-coverage region: a > 0, or a <= 0
    with b < -a^2 - 1, or a <= 0 with b < min(-a^2/4, a - 1).

    On the line a = 0 every d_k vanishes, so those points sit in the
    closure of the regions while no strict region contains them; everywhere
    else membership at some finite k follows.
    """
    a = float(a)
    b = float(b)
    if a > 0.0:
        return True
    return b < -a * a - 1.0 or b < min(-a * a / 4.0, a - 1.0)


def stability_check(a, b):
    """True when both roots of z^2 - a z - b lie strictly inside the unit disk."""
    a = float(a)
    b = float(b)
    root = cmath.sqrt(complex(a * a + 4.0 * b))
    top = max(abs((a + root) / 2.0), abs((a - root) / 2.0))
    return top < 1.0


def stable_tail_class(a, b, n, alpha):
    """TailLaw of P{n gamma_n(1) >= t} for a stable AR(2) model.

    On the stable region the regime depends only on the sign of a:
    PowerHalf for a > 0 and PowerLog for a < 0 (no diagonal entry is then
    positive, so the degenerate-case coefficient applies); a = 0 falls back
    to the general classifier.
    """
    a = float(a)
    b = float(b)
    n = int(n)
    if n < 3:
        raise ValueError("need n >= 3")
    if not stability_check(a, b):
        raise ValueError("need a stable pair (a, b)")
    c = autocov_matrix(ArModel((a, b), n), 1)
    if a > 0.0:
        return TailLaw(POWER_HALF, float(alpha), coef=coef_positive_case(c, alpha))
    if a < 0.0:
        return TailLaw(POWER_LOG, float(alpha), coef=coef_degenerate_case(c, alpha))
    return classify(c, alpha)[1]


def region_grid(a_min, a_max, b_min, b_max, steps, kmax=200):
    """Scan an inclusive steps x steps lattice of the (a, b) plane.

    Returns one row per point, in row-major order with a outermost:

        (a, b, stable, first_covering_k, in_theorem_region, regime)

    where first_covering_k is None when no region up to kmax covers the
    point, and regime is the n-free dichotomy: PowerHalf when some region
    covers the point, PowerLog otherwise.
    """
    steps = int(steps)
    if steps < 2:
        raise ValueError("need steps >= 2")
    if not (float(a_min) < float(a_max) and float(b_min) < float(b_max)):
        raise ValueError("need a_min < a_max and b_min < b_max")
    rows = []
    for a in np.linspace(float(a_min), float(a_max), steps):
        for b in np.linspace(float(b_min), float(b_max), steps):
            first = region_membership(a, b, kmax=kmax)
            rows.append((float(a), float(b), stability_check(a, b), first,
                         theorem_region_test(a, b),
                         POWER_HALF if first is not None else POWER_LOG))
    return rows


def write_region_csv(rows, fh, header_lines=()):
    """Write region_grid rows as CSV: booleans as 1/0, missing k as an empty
    field, reals with 17 significant digits, LF line endings."""
    for line in header_lines:
        fh.write("# %s\n" % line)
    fh.write("a,b,stable,first_covering_k,in_theorem_region,regime\n")
    for a, b, stable, first, covered, regime in rows:
        fh.write("%s,%s,%d,%s,%d,%s\n"
                 % (format(a, ".17g"), format(b, ".17g"), int(stable),
                    "" if first is None else str(int(first)), int(covered), regime))
