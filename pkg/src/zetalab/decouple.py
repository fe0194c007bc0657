"""Numerical probes of decoupling-type inequalities.

For the discrete parabola (n/N, n^2/N^2) the normalized sixth-moment average
over the period box equals the Vinogradov-type count exactly for unit
coefficients, which anchors every statistical estimate here. The
four-dimensional bilinear probe for the curve (t, t^2, t^{3/2}, t^{1/2}) is
exploratory: it averages over the centered N-cube rather than the full
period domain, so only a wide-tolerance slope consistency check is claimed.

Sampling is randomized low-discrepancy (Halton points under independent
uniform shifts), which keeps estimators unbiased while the replicate spread
yields an honest stderr; everything is deterministic for a fixed seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import GuardError
from .meanvalue import vinogradov_count
from .numerics import fit_loglog, halton

BILINEAR_MAX_N = 64
DEFAULT_REPLICATES = 8

ENSEMBLE_ONES = "ones"
ENSEMBLE_SIGNS = "random_signs"
ENSEMBLE_PHASE = "random_phase"
ENSEMBLES = (ENSEMBLE_ONES, ENSEMBLE_SIGNS, ENSEMBLE_PHASE)


def default_intervals(N: int) -> tuple[tuple[int, int], tuple[int, int]]:
    """Two well-separated index ranges in {1..N}: the first and last quarter."""
    q = max(N // 4, 1)
    return (1, q), (N - q + 1, N)


@dataclass(frozen=True)
class DecouplingExperiment:
    """Configuration of one probe: dimension, size, curve, coefficient
    ensemble, sampling budget and seed, and (for d=4) the two intervals."""

    d: int
    N: int
    curve: str = "parabola"
    ensemble: str = ENSEMBLE_ONES
    samples: int = 1 << 14
    seed: int = 0
    intervals: tuple[tuple[int, int], tuple[int, int]] | None = None

    def __post_init__(self):
        if self.d not in (2, 4):
            raise ValueError("d must be 2 or 4")
        if self.N < 4:
            raise ValueError("N must be >= 4")
        if self.curve not in ("parabola", "quadruple"):
            raise ValueError(f"unknown curve {self.curve!r}")
        if self.ensemble not in ENSEMBLES:
            raise ValueError(f"unknown ensemble {self.ensemble!r}")
        if self.d == 4:
            iv = self.intervals if self.intervals is not None else default_intervals(self.N)
            (a1, b1), (a2, b2) = iv
            if not (1 <= a1 <= b1 < a2 <= b2 <= self.N):
                raise ValueError("intervals must be ordered subranges of {1..N}")
            if a2 - b1 < self.N // 4:
                raise ValueError("intervals must be separated by a positive fraction of N")
            object.__setattr__(self, "intervals", iv)

    def coefficients(self) -> np.ndarray:
        """Deterministic coefficient vector for the configured ensemble."""
        if self.ensemble == ENSEMBLE_ONES:
            return np.ones(self.N, dtype=np.complex128)
        rng = np.random.default_rng((self.seed, self.N, ENSEMBLES.index(self.ensemble)))
        if self.ensemble == ENSEMBLE_SIGNS:
            return rng.choice([-1.0, 1.0], size=self.N).astype(np.complex128)
        return np.exp((2j * np.pi) * rng.random(self.N))


def qmc_mean(f, dim: int, samples: int, seed: int, replicates: int = DEFAULT_REPLICATES):
    """Unbiased randomized-QMC mean of f over [0,1)^dim.

    One Halton block is reused under `replicates` independent uniform shifts;
    the estimate is the replicate average and the stderr the replicate
    spread over sqrt(replicates).
    """
    rng = np.random.default_rng(seed)
    per = max(samples // replicates, 1)
    base = halton(dim, per)
    means = []
    for _ in range(replicates):
        shift = rng.random(dim)
        means.append(float(np.mean(f((base + shift) % 1.0))))
    est = math.fsum(means) / replicates
    var = math.fsum((m - est) ** 2 for m in means) / (replicates - 1)
    return est, math.sqrt(var / replicates)


def _parabola_sixth_power(a: np.ndarray):
    N = a.size
    n = np.arange(1, N + 1, dtype=np.float64)
    n2 = n * n

    def f(pts: np.ndarray) -> np.ndarray:
        u = pts[:, 0]
        v = pts[:, 1]
        s = np.zeros(pts.shape[0], dtype=np.complex128)
        for j in range(N):
            phase = ((n[j] * u) % 1.0 + (n2[j] * v) % 1.0) % 1.0
            s += a[j] * np.exp((2j * np.pi) * phase)
        return (s.real**2 + s.imag**2) ** 3

    return f


def parabola_l6_lhs(coeffs, exact: bool = False, samples: int = 1 << 14, seed: int = 0):
    """Normalized L^6 average of |sum_n a_n e(n u + n^2 v)| over one period.

    By periodicity this equals the average over the anisotropic box
    [0,N] x [0,N^2] of the parabola extension |sum a_n e(x.(n/N, n^2/N^2))|.
    With unit coefficients and exact=True the sixth power is the exact
    Vinogradov-type count J_{3,2}(N). Returns (value, stderr).
    """
    a = np.asarray(coeffs, dtype=np.complex128)
    N = a.size
    if N == 0:
        raise ValueError("coefficients must be nonempty")
    if exact:
        if not np.all(a == 1.0):
            raise ValueError("exact mode requires unit coefficients")
        j = vinogradov_count(N, 3)
        return float(j.value) ** (1.0 / 6.0), 0.0
    mean, stderr = qmc_mean(_parabola_sixth_power(a), 2, samples, seed)
    if mean <= 0.0:
        return 0.0, 0.0
    value = mean ** (1.0 / 6.0)
    return value, stderr / (6.0 * mean ** (5.0 / 6.0))


def parabola_rhs(coeffs) -> float:
    """The l^2 norm of the coefficients (the decoupled side)."""
    a = np.asarray(coeffs, dtype=np.complex128)
    if a.size == 0:
        raise ValueError("coefficients must be nonempty")
    return float(np.linalg.norm(a))


@dataclass(frozen=True)
class BilinearResult:
    lhs: float
    stderr: float
    benchmark: float  # sqrt(N) * max|a|

    @property
    def ratio(self) -> float:
        return self.lhs / self.benchmark


def bilinear_d4_ratio(exp: DecouplingExperiment) -> BilinearResult:
    """L^12 average over the centered N-cube of the geometric mean of the two
    interval sums on the curve (t, t^2, t^{3/2}, t^{1/2}), reported against
    the sqrt(N) * max|a| benchmark. Exploratory probe (the sharp statement
    lives on a much larger domain); wide tolerance only."""
    if exp.d != 4:
        raise ValueError("the bilinear probe requires d=4")
    if exp.N > BILINEAR_MAX_N:
        raise GuardError(
            "decouple.bilinear.N", f"N={exp.N} exceeds the bilinear guard {BILINEAR_MAX_N}"
        )
    a = exp.coefficients()
    (a1, b1), (a2, b2) = exp.intervals
    N = exp.N
    t = np.arange(1, N + 1, dtype=np.float64) / N
    phi = np.stack([t, t**2, t**1.5, np.sqrt(t)], axis=1)

    def f(pts: np.ndarray) -> np.ndarray:
        x = (pts - 0.5) * N
        s1 = np.zeros(pts.shape[0], dtype=np.complex128)
        s2 = np.zeros(pts.shape[0], dtype=np.complex128)
        for n in range(a1, b1 + 1):
            s1 += a[n - 1] * np.exp((2j * np.pi) * ((x @ phi[n - 1]) % 1.0))
        for n in range(a2, b2 + 1):
            s2 += a[n - 1] * np.exp((2j * np.pi) * ((x @ phi[n - 1]) % 1.0))
        return (s1.real**2 + s1.imag**2) ** 3 * (s2.real**2 + s2.imag**2) ** 3

    mean, stderr = qmc_mean(f, 4, exp.samples, exp.seed)
    benchmark = math.sqrt(N) * float(np.max(np.abs(a)))
    if mean <= 0.0:
        return BilinearResult(0.0, 0.0, benchmark)
    lhs = mean ** (1.0 / 12.0)
    return BilinearResult(lhs, stderr / (12.0 * mean ** (11.0 / 12.0)), benchmark)


@dataclass(frozen=True)
class RatioRow:
    N: int
    lhs: float
    rhs: float
    ratio: float
    stderr: float


@dataclass(frozen=True)
class RatioReport:
    """Per-N left/right sides with the fitted slope of log(ratio) vs log(N)."""

    rows: tuple[RatioRow, ...]
    slope: float
    slope_stderr: float
    ensemble: str
    samples: int
    seed: int

    def __post_init__(self):
        for row in self.rows:
            if not (row.lhs > 0 and row.rhs > 0):
                raise ValueError("report rows must have positive sides")


def ratio_scan(
    Ns,
    ensemble: str = ENSEMBLE_ONES,
    trials: int = 1,
    seed: int = 0,
    samples: int = 1 << 14,
) -> RatioReport:
    """Parabola decoupling-ratio scan over several N.

    With the unit ensemble both sides are exact (the lhs via the count
    identity); random ensembles average `trials` deterministic draws of the
    randomized-QMC estimate.
    """
    ns = [int(N) for N in Ns]
    if len(ns) < 3:
        raise ValueError("need at least 3 values of N")
    if len(set(ns)) != len(ns):
        raise ValueError("N values must be distinct")
    if ensemble not in ENSEMBLES:
        raise ValueError(f"unknown ensemble {ensemble!r}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rows = []
    for N in sorted(ns):
        if ensemble == ENSEMBLE_ONES:
            lhs, err = parabola_l6_lhs(np.ones(N, dtype=np.complex128), exact=True)
            rhs = math.sqrt(N)
            rows.append(RatioRow(N, lhs, rhs, lhs / rhs, err))
            continue
        # unit-modulus ensembles share rhs = sqrt(N) across draws
        rhs = math.sqrt(N)
        ratios = []
        errs = []
        for trial in range(trials):
            exp = DecouplingExperiment(2, N, "parabola", ensemble, samples, seed + trial)
            lhs, err = parabola_l6_lhs(exp.coefficients(), samples=samples, seed=(seed + trial))
            ratios.append(lhs / rhs)
            errs.append(err / rhs)
        mean_ratio = math.fsum(ratios) / trials
        if trials > 1:
            spread = math.fsum((x - mean_ratio) ** 2 for x in ratios) / (trials - 1) / trials
        else:
            spread = 0.0
        stderr = math.sqrt(spread + (math.fsum(errs) / trials) ** 2)
        rows.append(RatioRow(N, mean_ratio * rhs, rhs, mean_ratio, stderr))
    slope, slope_err = fit_loglog([r.N for r in rows], [r.ratio for r in rows])
    return RatioReport(tuple(rows), slope, slope_err, ensemble, samples, seed)


def bilinear_scan(Ns, samples: int = 1 << 14, seed: int = 0, ensemble: str = ENSEMBLE_ONES):
    """Bilinear d=4 probe across several N: rows plus the slope of
    log(lhs / sqrt(N)) against log(N)."""
    ns = sorted(int(N) for N in Ns)
    if len(ns) < 2:
        raise ValueError("need at least 2 values of N")
    results = []
    for N in ns:
        exp = DecouplingExperiment(4, N, "quadruple", ensemble, samples, seed)
        results.append((N, bilinear_d4_ratio(exp)))
    slope, slope_err = fit_loglog([n for n, _ in results], [r.ratio for _, r in results])
    return results, slope, slope_err
