"""Critical-line zeta evaluation and growth scans.

The approximate-functional-equation main sum S(t) = sum_{n <= sqrt(t/2pi)}
n^{-1/2+it} witnesses the one-sided bound |zeta(1/2+it)| <= 2|S(t)| + O(1);
the O(1) is unquantified, so every check here is one-sided consistency with
a configurable slack, never equality. The independent oracle is
Euler-Maclaurin with explicit truncation control; growth scans tabulate
|zeta(1/2+it)| / t^{13/84} as a consistency artifact (the asymptotic bound
itself is not falsifiable at finite t).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import GuardError
from .numerics import MACHINE_EPS

CRITICAL_GROWTH_EXPONENT = 13.0 / 84.0

SCAN_MIN_T = 10.0
SCAN_MAX_T = 1.0e6

DEFAULT_BERNOULLI_TERMS = 8
DEFAULT_SLACK = 2.0

# B_{2k} for k = 1..10
_BERNOULLI = (
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
)


@dataclass(frozen=True)
class ZetaValue:
    """A zeta (or partial-sum) value with an absolute error estimate that
    combines the truncation bound with a rounding model."""

    re: float
    im: float
    abs_err: float

    def __post_init__(self):
        if self.abs_err < 0:
            raise ValueError("abs_err must be nonnegative")

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)

    def __abs__(self) -> float:
        return abs(self.value)


def zeta_euler_maclaurin(
    s: complex, terms: int, bernoulli_terms: int = DEFAULT_BERNOULLI_TERMS
) -> ZetaValue:
    """zeta(s) by Euler-Maclaurin with `terms` head terms and the given number
    of Bernoulli corrections.

    Valid for Re(s) > 0, s != 1. Requires terms >= 10 + |Im s|/2 so the
    correction series decreases; abs_err adds the classical truncation bound
    (|s+2K+1|/(sigma+2K+1) times the first omitted term) to a conservative
    rounding model for the head sum.
    """
    s = complex(s)
    if s == 1:
        raise ValueError("zeta has a pole at s = 1")
    sigma, t = s.real, abs(s.imag)
    if sigma <= 0:
        raise ValueError("Euler-Maclaurin route requires Re(s) > 0")
    if terms < 10 + t / 2:
        raise ValueError(f"terms={terms} insufficient; need at least 10 + |t|/2 = {10 + t / 2:.1f}")
    K = bernoulli_terms
    if not 1 <= K <= len(_BERNOULLI) - 1:
        raise ValueError(f"bernoulli_terms must lie in [1, {len(_BERNOULLI) - 1}]")
    M = int(terms)
    n = np.arange(1, M, dtype=np.float64)
    head = np.exp(-s * np.log(n))
    total = complex(math.fsum(head.real.tolist()), math.fsum(head.imag.tolist()))
    log_m = math.log(M)
    total += cmath.exp((1 - s) * log_m) / (s - 1)
    m_pow = cmath.exp(-s * log_m)  # M^{-s}
    total += 0.5 * m_pow

    # corrections: B_{2k}/(2k)! * s(s+1)...(s+2k-2) * M^{-s-2k+1}
    rising = s
    scale = m_pow / M  # M^{-s-1}
    fact = 2.0
    for k in range(1, K + 1):
        total += (_BERNOULLI[k - 1] / fact) * rising * scale
        rising *= (s + 2 * k - 1) * (s + 2 * k)
        scale /= M * M
        fact *= (2 * k + 1) * (2 * k + 2)
    # after the loop: rising = s...(s+2K), scale = M^{-s-2K-1}, fact = (2K+2)!,
    # which is exactly the first omitted correction term.
    next_term = abs((_BERNOULLI[K] / fact) * rising * scale)
    trunc = next_term * abs(s + 2 * K + 1) / (sigma + 2 * K + 1)

    sum_abs = float((n ** (-sigma)).sum()) + abs(cmath.exp((1 - s) * log_m) / (s - 1)) + abs(m_pow)
    rounding = MACHINE_EPS * sum_abs * (4.0 + 4.0 * t * math.log(M + 1.0))
    return ZetaValue(total.real, total.imag, trunc + rounding)


def default_oracle_terms(t: float) -> int:
    return int(abs(t) / 2) + 40


def zeta_em_oracle(t: float, terms: int | None = None) -> ZetaValue:
    """zeta(1/2 + i t) via Euler-Maclaurin; terms defaults to ~ t/2 + 40."""
    if terms is None:
        terms = default_oracle_terms(t)
    return zeta_euler_maclaurin(complex(0.5, t), terms)


def afe_main_sum(t: float) -> ZetaValue:
    """Main sum S(t) = sum_{n <= sqrt(t/2pi)} n^{-1/2 + it}.

    Bound witness only: |zeta(1/2+it)| <= 2|S(t)| + C with C an unquantified
    constant (slack handled by the consistency checks). abs_err covers
    rounding of this sum, nothing else. Requires t >= 2*pi so the sum is
    nonempty.
    """
    if not math.isfinite(t) or t < 2 * math.pi:
        raise ValueError("t must be at least 2*pi (the main sum is empty below)")
    cutoff = math.sqrt(t / (2 * math.pi))
    m = int(cutoff + 1e-12)
    n = np.arange(1, m + 1, dtype=np.float64)
    cycles = t / (2 * math.pi)
    phase = (cycles * np.log(n)) % 1.0
    weights = n**-0.5
    vals = weights * np.exp((2j * np.pi) * phase)
    re = math.fsum(vals.real.tolist())
    im = math.fsum(vals.imag.tolist())
    sum_abs = float(weights.sum())
    err = MACHINE_EPS * sum_abs * (2.0 + 3.0 * abs(t) * math.log(m + 1.0))
    return ZetaValue(re, im, err)


def afe_upper_bound(t: float, slack: float = DEFAULT_SLACK) -> float:
    """2|S(t)| + slack."""
    return 2.0 * abs(afe_main_sum(t)) + slack


def afe_consistency_scan(
    t_min: float = 10.0,
    t_max: float = 1.0e4,
    points: int = 200,
    slack: float = DEFAULT_SLACK,
):
    """Check 2|S(t)| + slack >= |zeta(t)| - abs_err on a log-spaced grid.

    Returns (rows, violations); rows are (t, bound, oracle_floor). Violations
    are reported, never silently swallowed.
    """
    if points < 2:
        raise ValueError("points must be >= 2")
    ts = np.exp(np.linspace(math.log(t_min), math.log(t_max), points))
    rows = []
    violations = []
    for t in ts.tolist():
        bound = afe_upper_bound(t, slack)
        em = zeta_em_oracle(t)
        floor = abs(em.value) - em.abs_err
        rows.append((t, bound, floor))
        if bound < floor:
            violations.append((t, bound, floor))
    return rows, violations


def siegel_theta(t: float) -> float:
    """The rotation angle theta(t) making e^{i theta} zeta(1/2+it) real,
    by the standard asymptotic series (ample accuracy for t >= 10)."""
    if t <= 0:
        raise ValueError("siegel_theta requires t > 0")
    return (
        0.5 * t * math.log(t / (2.0 * math.pi))
        - 0.5 * t
        - math.pi / 8.0
        + 1.0 / (48.0 * t)
        + 7.0 / (5760.0 * t**3)
        + 31.0 / (80640.0 * t**5)
    )


def z_function(t: float, terms: int | None = None) -> float:
    """Z(t) = Re(e^{i theta(t)} zeta(1/2 + i t)), real up to evaluation error."""
    zv = zeta_em_oracle(t, terms)
    return (cmath.exp(1j * siegel_theta(t)) * zv.value).real


def zero_bracket(lo: float, hi: float) -> bool:
    """True when Z changes sign on [lo, hi] (a zero of zeta is bracketed)."""
    return z_function(lo) * z_function(hi) < 0


@dataclass(frozen=True)
class GrowthScan:
    """Rows (t, |zeta|, |zeta|/t^{13/84}, abs_err) on a jittered log grid."""

    t_min: float
    t_max: float
    points: int
    seed: int
    rows: tuple
    running_max: float

    def __post_init__(self):
        ts = [r[0] for r in self.rows]
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ValueError("scan grid must be strictly increasing")


def growth_scan(
    t_min: float,
    t_max: float,
    points: int,
    seed: int = 0,
    constant_mode: bool = False,
) -> GrowthScan:
    """Tabulate |zeta(1/2+it)| / t^{13/84} with the running maximum.

    The grid is log-spaced with seeded jitter inside each cell (hence still
    strictly increasing, and bit-reproducible for a fixed seed).
    `constant_mode` replaces |zeta| by 1 to exercise the pipeline against the
    closed form t^{-13/84}.
    """
    if not (SCAN_MIN_T <= t_min < t_max <= SCAN_MAX_T):
        raise GuardError(
            "zeta.scan.range",
            f"need {SCAN_MIN_T} <= t_min < t_max <= {SCAN_MAX_T:g}, got [{t_min}, {t_max}]",
        )
    if points < 2:
        raise ValueError("points must be >= 2")
    rng = np.random.default_rng(seed)
    edges = np.linspace(math.log(t_min), math.log(t_max), points + 1)
    ts = np.exp(edges[:-1] + rng.random(points) * np.diff(edges))
    rows = []
    running = 0.0
    for t in ts.tolist():
        if constant_mode:
            az, err = 1.0, 0.0
        else:
            em = zeta_em_oracle(t)
            az, err = abs(em.value), em.abs_err
        ratio = az / t**CRITICAL_GROWTH_EXPONENT
        running = max(running, ratio)
        rows.append((t, az, ratio, err))
    return GrowthScan(t_min, t_max, points, seed, tuple(rows), running)
