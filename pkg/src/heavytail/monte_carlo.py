"""Reproducible Monte Carlo oracle for the tail approximations.

Replica r draws its innovations from an independent substream keyed by
(seed, r), so every statistic is a pure function of (seed, r) and results
are bit-identical for any worker count and any chunk schedule.  The
empirical survival function comes from one sort of the replica statistics;
theory curves are the first-order coefficients evaluated on the same
threshold grid.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .ar_quadform import ArModel, autocov_matrix, test_matrix
from .student_dist import StudentLaw, make_law, sample
from .tail_formulas import (COEF_REGIMES, POWER_LOG, ZERO, classify,
                            critical_value, evaluate, test_stat_tail)

# risk-calibration grid: dense around the unit root, coarser in the wings
DEFAULT_A_GRID = (
    0.500, 0.552, 0.605, 0.657, 0.710, 0.762, 0.815, 0.868, 0.920,
    0.930, 0.939, 0.948, 0.957, 0.966, 0.975, 0.984, 0.993,
    1.000, 1.002, 1.011, 1.019, 1.028, 1.037, 1.046, 1.055, 1.064,
    1.073, 1.082, 1.091, 1.100,
    1.150, 1.200, 1.250, 1.300, 1.350, 1.400, 1.450, 1.500,
)

TAIL_CSV_COLUMNS = ("t", "log10_t", "p_emp", "log10_p_emp",
                    "p_theory", "log10_p_theory", "se", "raw_p_theory")
RISK_CSV_COLUMNS = ("a", "t_eta", "risk_hat", "se")


@dataclass(frozen=True)
class McConfig:
    """One tail experiment: which statistic, how many replicas, which grid.

    Exactly one of lag k (autocovariance statistic n gamma_n(k)) and
    reference a0 (test statistic n (gamma_n(1) - a0 hat_gamma_n(0)), order-1
    models only) must be set.
    """

    model: ArModel
    law: StudentLaw
    k: int = None
    a0: float = None
    replicas: int = 100_000
    seed: int = 0
    t_min: float = 1e2
    t_max: float = 1e8
    points: int = 61

    def __post_init__(self):
        if (self.k is None) == (self.a0 is None):
            raise ValueError("need exactly one of lag k and reference a0")
        if self.k is not None and int(self.k) < 0:
            raise ValueError("need k >= 0")
        if self.a0 is not None and self.model.p != 1:
            raise ValueError("need an order-1 model with a reference a0")
        if int(self.replicas) < 1:
            raise ValueError("need replicas >= 1")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError("need a 64-bit unsigned seed")
        if not 0.0 < float(self.t_min) < float(self.t_max):
            raise ValueError("need 0 < t_min < t_max")
        if int(self.points) < 2:
            raise ValueError("need points >= 2")


@dataclass(frozen=True)
class McEstimate:
    """Threshold grid with empirical and first-order survival curves.

    p_theory is clamped to [0, 1]; raw_theory keeps the unclamped value.
    Both are None when the classified regime carries no coefficient.
    """

    t: np.ndarray
    p_emp: np.ndarray
    p_theory: np.ndarray
    raw_theory: np.ndarray
    se: np.ndarray
    replicas: int
    seed: int
    tail: object


@dataclass(frozen=True)
class RiskRow:
    """One calibration row: alternative a, threshold t_eta, estimated risk.

    Rows with a <= a0 cannot be calibrated and come back skipped, with NaN
    in the numeric slots.
    """

    a: float
    t_eta: float
    risk_hat: float
    se: float
    skipped: bool = False


def worker_count():
    """Worker cap: HEAVYTAIL_THREADS when set, else the machine's CPU count."""
    env = os.environ.get("HEAVYTAIL_THREADS")
    if env is not None and env.strip():
        workers = int(env)
        if workers < 1:
            raise ValueError("need HEAVYTAIL_THREADS >= 1")
        return workers
    return os.cpu_count() or 1


def _replica_rng(seed, r):
    """Independent substream for replica r: seed material mixed from (seed, r)."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(r)]))


def _draw_block(law, n, seed, lo, hi):
    """Innovation rows for replica indices [lo, hi)."""
    block = np.empty((hi - lo, n))
    for r in range(lo, hi):
        block[r - lo] = sample(law, _replica_rng(seed, r), size=n)
    return block


def _stat_block(entries, law, n, seed, lo, hi):
    """Statistics eps_r^T C eps_r for replica indices [lo, hi)."""
    out = np.empty(hi - lo)
    for r in range(lo, hi):
        eps = sample(law, _replica_rng(seed, r), size=n)
        out[r - lo] = eps @ entries @ eps
    return out


def _spans(replicas, workers):
    """Contiguous index spans covering range(replicas) for the worker pool."""
    chunk = max(1, -(-replicas // max(1, workers * 8)))
    return [(lo, min(lo + chunk, replicas)) for lo in range(0, replicas, chunk)]


def _run_chunked(fn, spans, workers):
    """Run fn over spans, in parallel when asked, concatenated in span order;
    the per-replica substreams make the outcome independent of the schedule."""
    if workers <= 1 or len(spans) <= 1:
        parts = [fn(lo, hi) for lo, hi in spans]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda span: fn(span[0], span[1]), spans))
    return np.concatenate(parts)


def collect_stats(entries, law, n, seed, replicas, workers=None):
    """Vector of all replica statistics, in replica-index order."""
    workers = worker_count() if workers is None else int(workers)
    spans = _spans(int(replicas), workers)
    return _run_chunked(lambda lo, hi: _stat_block(entries, law, n, seed, lo, hi),
                        spans, workers)


def run_tail_experiment(cfg, workers=None):
    """Monte Carlo tail experiment for one configuration.

    Classifies the configured quadratic form, draws all replica statistics,
    and returns the empirical survival curve on a log-spaced threshold grid
    next to the first-order theory curve (absent when the regime has no
    coefficient).  The PowerLog approximation needs every threshold above e.
    """
    if cfg.k is not None:
        form = autocov_matrix(cfg.model, int(cfg.k))
        tail = classify(form, cfg.law.alpha)[1]
    else:
        form = test_matrix(cfg.model.theta[0], float(cfg.a0), cfg.model.n)
        tail = test_stat_tail(cfg.model.theta[0], float(cfg.a0),
                              cfg.model.n, cfg.law.alpha)
    t = np.logspace(math.log10(float(cfg.t_min)), math.log10(float(cfg.t_max)),
                    int(cfg.points))
    if tail.regime == POWER_LOG and not float(cfg.t_min) > math.e:
        raise ValueError("need t_min > e in the PowerLog regime")

    stats = collect_stats(form.entries, cfg.law, cfg.model.n, int(cfg.seed),
                          int(cfg.replicas), workers=workers)
    stats = np.sort(stats)
    replicas = int(cfg.replicas)
    exceed = replicas - np.searchsorted(stats, t, side="left")
    p_emp = exceed / replicas
    se = np.sqrt(p_emp * (1.0 - p_emp) / replicas)

    if tail.regime in COEF_REGIMES or tail.regime == ZERO:
        raw = np.array([evaluate(tail, ti) for ti in t])
        p_theory = np.clip(raw, 0.0, 1.0)
    else:
        raw = None
        p_theory = None
    return McEstimate(t=t, p_emp=p_emp, p_theory=p_theory, raw_theory=raw,
                      se=se, replicas=replicas, seed=int(cfg.seed), tail=tail)


def calibrate_risk(a_grid, a0, n, alpha, eta, replicas=100_000, seed=0, workers=None):
    """Estimated rejection risk along a grid of alternatives a.

    One shared innovation sample (common random numbers) is reused for every
    grid value: for each a > a0 the threshold t_eta comes from
    critical_value and risk_hat is the fraction of replicas whose statistic
    eps^T C_a eps reaches it.  Grid values with a <= a0 come back skipped.
    """
    a0 = float(a0)
    n = int(n)
    replicas = int(replicas)
    if replicas < 1:
        raise ValueError("need replicas >= 1")
    if not 0 <= int(seed) < 2 ** 64:
        raise ValueError("need a 64-bit unsigned seed")
    law = make_law(alpha)
    workers = worker_count() if workers is None else int(workers)
    spans = _spans(replicas, workers)
    eps = _run_chunked(lambda lo, hi: _draw_block(law, n, int(seed), lo, hi),
                       spans, workers)

    rows = []
    for a in a_grid:
        a = float(a)
        if not a > a0:
            rows.append(RiskRow(a=a, t_eta=math.nan, risk_hat=math.nan,
                                se=math.nan, skipped=True))
            continue
        t_eta = critical_value(a, a0, n, law.alpha, eta)
        entries = test_matrix(a, a0, n).entries
        stats = np.einsum("ri,ij,rj->r", eps, entries, eps)
        risk = float(np.count_nonzero(stats >= t_eta)) / replicas
        rows.append(RiskRow(a=a, t_eta=t_eta,
                            risk_hat=risk,
                            se=math.sqrt(risk * (1.0 - risk) / replicas)))
    return rows


def _fmt(x):
    """17-significant-digit decimal form; round-trips every finite double."""
    return format(float(x), ".17g")


def _log10_or_ninf(p):
    return -math.inf if p <= 0.0 else math.log10(p)


def write_tail_csv(est, fh, header_lines=()):
    """CSV dump of a tail experiment.

    Columns: t, log10_t, p_emp, log10_p_emp, p_theory, log10_p_theory, se,
    raw_p_theory.  The theory columns are NaN when the classified regime
    carries no coefficient; p_theory is clamped to [0, 1] while raw_p_theory
    keeps the unclamped approximation.  '#'-prefixed header lines come
    first, reals carry 17 significant digits, line endings are LF.
    """
    for line in header_lines:
        fh.write("# %s\n" % line)
    coef = "none" if est.tail.coef is None else _fmt(est.tail.coef)
    fh.write("# replicas=%d seed=%d regime=%s coef=%s\n"
             % (est.replicas, est.seed, est.tail.regime, coef))
    if est.p_theory is None:
        fh.write("# p_theory=unavailable (%s)\n" % (est.tail.note or est.tail.regime))
    fh.write(",".join(TAIL_CSV_COLUMNS) + "\n")
    for i, t in enumerate(est.t):
        p_emp = float(est.p_emp[i])
        if est.p_theory is None:
            p_th = raw = math.nan
            log_th = math.nan
        else:
            p_th = float(est.p_theory[i])
            raw = float(est.raw_theory[i])
            log_th = _log10_or_ninf(p_th)
        fh.write(",".join(_fmt(v) for v in (
            t, math.log10(t), p_emp, _log10_or_ninf(p_emp),
            p_th, log_th, float(est.se[i]), raw)) + "\n")


def write_risk_csv(rows, fh, header_lines=()):
    """CSV dump of a calibration run: columns a, t_eta, risk_hat, se, with
    NaN slots on skipped rows; '#' header lines first, 17 significant
    digits, LF line endings."""
    skipped = [row.a for row in rows if row.skipped]
    for line in header_lines:
        fh.write("# %s\n" % line)
    if skipped:
        fh.write("# skipped (need a > a0): %s\n"
                 % " ".join(_fmt(a) for a in skipped))
    fh.write(",".join(RISK_CSV_COLUMNS) + "\n")
    for row in rows:
        fh.write(",".join(_fmt(v) for v in (row.a, row.t_eta, row.risk_hat, row.se))
                 + "\n")
