"""Numerically stable evaluation of the exponential sums used across the
package: quadruple-phase sums, dyadic-block sums with log or monomial phase,
and generic sampled-curve sums.

Conventions. e(z) = exp(2*pi*i*z). Phase arguments are reduced mod 1 before
evaluating e(.); for the polynomial part n*x1 + n^2*x2 the reduction is done
in exact head/tail form so no precision is lost up to the size guard
N <= 2**26 (beyond that an extended-precision path would be required, which
is out of scope). Summation is compensated (Neumaier); the reported `err`
is the summation contract bound 2 * machine_eps * sum(|a_n|).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import GuardError
from .numerics import MACHINE_EPS, frac_poly_phase, neumaier_sum

MAX_QUADRUPLE_N = 1 << 26

PHASE_KINDS = ("quadruple", "log", "monomial", "curve")


@dataclass(frozen=True)
class ComplexValue:
    """A complex sum with an absolute bound on accumulated rounding error."""

    re: float
    im: float
    err: float

    def __post_init__(self):
        if self.err < 0:
            raise ValueError("err must be nonnegative")

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)

    def __abs__(self) -> float:
        return abs(self.value)

    def __add__(self, other: "ComplexValue") -> "ComplexValue":
        return ComplexValue(self.re + other.re, self.im + other.im, self.err + other.err)


@dataclass(frozen=True)
class PhaseSpec:
    """Parameter record for one of the supported phase families.

    kind "quadruple": frequencies x against (n, n^2, sqrt(N) n^{3/2},
    sqrt(N) n^{1/2}) for 1 <= n <= N.
    kind "log" / "monomial": f(m) = T*F(m/M) over the dyadic block
    (M/2, M]; T is in cycle units (the radian convention is t = 2*pi*T).
    kind "curve": x against explicitly sampled curve points.
    """

    kind: str
    x: tuple[float, ...] = (0.0, 0.0, 0.0, 0.0)
    N: int | None = None
    T: float | None = None
    M: int | None = None
    exponent: Fraction | None = None
    samples: tuple[tuple[float, ...], ...] | None = None

    def __post_init__(self):
        if self.kind not in PHASE_KINDS:
            raise ValueError(f"unknown phase kind {self.kind!r}")
        if self.kind == "quadruple":
            if self.N is None or self.N < 1:
                raise ValueError("quadruple phase requires N >= 1")
            if len(self.x) != 4:
                raise ValueError("quadruple phase requires a 4-vector x")
        elif self.kind in ("log", "monomial"):
            if self.M is None or self.M < 2:
                raise ValueError("dyadic phase requires M >= 2")
            if self.T is None or not math.isfinite(self.T):
                raise ValueError("dyadic phase requires finite T")
            if self.kind == "monomial" and self.exponent is None:
                raise ValueError("monomial phase requires an exponent")
        else:
            if not self.samples:
                raise ValueError("curve phase requires sample points")

    def evaluate(self, coeffs=None) -> ComplexValue:
        if self.kind == "quadruple":
            return eval_quadruple_sum(self.N, self.x, coeffs)
        if self.kind in ("log", "monomial"):
            return eval_dyadic_sum(self.T, self.M, self.kind, self.exponent)
        n = len(self.samples)
        a = coeffs if coeffs is not None else [1.0] * n
        return eval_curve_sum(a, self.samples, self.x)


def _sum_terms(values: np.ndarray, weight: float) -> ComplexValue:
    re = neumaier_sum(values.real.tolist())
    im = neumaier_sum(values.imag.tolist())
    return ComplexValue(re, im, 2.0 * MACHINE_EPS * weight)


def eval_quadruple_sum(N: int, x: Sequence[float], coeffs=None) -> ComplexValue:
    """Sum_{1<=n<=N} a_n e(n x1 + n^2 x2 + sqrt(N) n^{3/2} x3 + sqrt(N) n^{1/2} x4).

    Coefficients default to a_n = 1 and must have length N otherwise. The
    polynomial phases are reduced mod 1 exactly; the half-integer power
    phases are double precision (adequate below the N <= 2**26 guard).
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if N > MAX_QUADRUPLE_N:
        raise GuardError(
            "expsum.quadruple.N",
            f"N={N} exceeds the double-precision guard {MAX_QUADRUPLE_N}",
        )
    x1, x2, x3, x4 = (float(v) for v in x)
    if not all(math.isfinite(v) for v in (x1, x2, x3, x4)):
        raise ValueError("phase frequencies must be finite")
    n = np.arange(1, N + 1, dtype=np.int64)
    nf = n.astype(np.float64)
    sqrt_n = np.sqrt(nf)
    root_n = math.sqrt(N)
    phase = frac_poly_phase(n, x1, x2)
    phase = (phase + ((x3 * root_n) * (nf * sqrt_n)) % 1.0 + ((x4 * root_n) * sqrt_n) % 1.0) % 1.0
    values = np.exp((2j * math.pi) * phase)
    if coeffs is not None:
        a = np.asarray(coeffs, dtype=np.complex128)
        if a.shape != (N,):
            raise ValueError(f"coeffs must have length {N}, got shape {a.shape}")
        values = values * a
        weight = float(np.abs(a).sum())
    else:
        weight = float(N)
    return _sum_terms(values, weight)


def eval_dyadic_sum(T: float, M: int, kind: str = "log", exponent=None) -> ComplexValue:
    """Sum_{M/2 < m <= M} e(T * F(m/M)) with F = log or the monomial u^exponent.

    T is in cycle units: e(T log(m/M)) = (m/M)^{it} with t = 2*pi*T.
    """
    if not math.isfinite(T):
        raise ValueError("T must be finite")
    if M < 2:
        raise ValueError("M must be >= 2")
    m = np.arange(M // 2 + 1, M + 1, dtype=np.float64)
    ratio = m / M
    if kind == "log":
        f = np.log(ratio)
    elif kind == "monomial":
        if exponent is None:
            raise ValueError("monomial phase requires an exponent")
        f = ratio ** float(Fraction(exponent))
    else:
        raise ValueError(f"unknown dyadic phase kind {kind!r}")
    phase = (T * f) % 1.0
    values = np.exp((2j * math.pi) * phase)
    return _sum_terms(values, float(m.size))


def eval_curve_sum(coeffs, curve_samples, x) -> ComplexValue:
    """Sum_n a_n e(x . Phi_n) for explicitly sampled curve points Phi_n.

    Linear in the coefficients; raises on length mismatch.
    """
    a = np.asarray(coeffs, dtype=np.complex128)
    phi = np.asarray(curve_samples, dtype=np.float64)
    xv = np.asarray(x, dtype=np.float64)
    if phi.ndim != 2:
        raise ValueError("curve samples must be a list of vectors")
    if xv.shape != (phi.shape[1],):
        raise ValueError(f"frequency vector must have length {phi.shape[1]}")
    if a.shape != (phi.shape[0],):
        raise ValueError(
            f"coefficients and curve samples must have the same length "
            f"({a.shape[0]} vs {phi.shape[0]})"
        )
    if not np.all(np.isfinite(phi)) or not np.all(np.isfinite(xv)):
        raise ValueError("curve samples and frequencies must be finite")
    phase = (phi @ xv) % 1.0
    values = a * np.exp((2j * math.pi) * phase)
    return _sum_terms(values, float(np.abs(a).sum()))
