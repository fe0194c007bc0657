"""Mean-value counts and integrals against brute-force enumeration oracles."""

import itertools
import math

import numpy as np
import pytest

from zetalab.errors import GuardError
from zetalab.meanvalue import (
    CountResult,
    MeanValueSpec,
    count_windowed,
    fit_growth_exponent,
    moment_kernel_sum,
    moment_monte_carlo,
    vinogradov_count,
)

# ------------------------------------------------------------------- oracles


def brute_windowed(N, w3, w4):
    """Full enumeration over ordered 12-tuples (as all pairs of ordered
    6-tuples), counting the two exact equalities and two windowed defects."""
    grids = np.meshgrid(*[np.arange(1, N + 1)] * 6, indexing="ij")
    tup = np.stack([g.ravel() for g in grids], axis=1).astype(np.float64)
    s1 = tup.sum(1)
    s2 = (tup**2).sum(1)
    d3 = (tup**1.5).sum(1)
    d4 = np.sqrt(tup).sum(1)
    total = 0
    for a in range(0, s1.size, 512):
        b = min(a + 512, s1.size)
        ok = (
            (s1[a:b, None] == s1[None, :])
            & (s2[a:b, None] == s2[None, :])
            & (np.abs(d3[a:b, None] - d3[None, :]) <= w3)
            & (np.abs(d4[a:b, None] - d4[None, :]) <= w4)
        )
        total += int(ok.sum())
    return total


def brute_vinogradov(N, s):
    """Naive 2s-fold loop for J_{s,2}(N)."""
    total = 0
    for left in itertools.product(range(1, N + 1), repeat=s):
        for right in itertools.product(range(1, N + 1), repeat=s):
            if sum(left) == sum(right) and sum(v * v for v in left) == sum(v * v for v in right):
                total += 1
    return total


def brute_kernel(N, r, delta, Delta):
    """Direct expansion of the moment integral over all ordered r-tuple pairs."""
    scale3 = 1.0 / (delta * N**1.5)
    scale4 = 1.0 / (Delta * N**0.5)

    def kernel(theta):
        return 2.0 * np.sinc(2.0 * theta)

    total = 0.0
    tuples = list(itertools.product(range(1, N + 1), repeat=r))
    for p in tuples:
        for q in tuples:
            if sum(p) != sum(q) or sum(v * v for v in p) != sum(v * v for v in q):
                continue
            t3 = (sum(v**1.5 for v in p) - sum(v**1.5 for v in q)) * scale3
            t4 = (sum(math.sqrt(v) for v in p) - sum(math.sqrt(v) for v in q)) * scale4
            total += float(kernel(t3) * kernel(t4))
    return total


# ------------------------------------------------------------ windowed count


def test_windowed_single_point():
    res = count_windowed(1)
    assert res.integer_value == 1
    assert res.exact and res.stderr == 0.0


@pytest.mark.parametrize("N", [2, 3, 4])
def test_windowed_matches_full_enumeration(N):
    w = N**-0.5
    assert count_windowed(N).integer_value == brute_windowed(N, w, w)


def test_windowed_matches_enumeration_asymmetric_windows(N=4):
    assert count_windowed(N, 0.05, 0.9).integer_value == brute_windowed(N, 0.05, 0.9)


def test_windowed_infinite_windows_equal_two_constraint_count():
    # with both windows removed only the two exact equalities remain
    for N in (2, 3, 4):
        inf_count = count_windowed(N, math.inf, math.inf).integer_value
        assert inf_count == brute_windowed(N, math.inf, math.inf)


def test_windowed_diagonal_lower_bound():
    for N in (4, 8, 12):
        assert count_windowed(N).integer_value >= N**6


def test_windowed_monotone_in_windows():
    base = count_windowed(6, 0.2, 0.2).integer_value
    assert count_windowed(6, 0.4, 0.2).integer_value >= base
    assert count_windowed(6, 0.2, 0.4).integer_value >= base


def test_windowed_half_swap_symmetry():
    # swapping the tuple halves transposes the pair relation, which is
    # symmetric; verified on the enumerated relation matrix
    N, w = 3, 3**-0.5
    grids = np.meshgrid(*[np.arange(1, N + 1)] * 6, indexing="ij")
    tup = np.stack([g.ravel() for g in grids], axis=1).astype(np.float64)
    s1 = tup.sum(1)
    s2 = (tup**2).sum(1)
    d3 = (tup**1.5).sum(1)
    d4 = np.sqrt(tup).sum(1)
    rel = (
        (s1[:, None] == s1[None, :])
        & (s2[:, None] == s2[None, :])
        & (np.abs(d3[:, None] - d3[None, :]) <= w)
        & (np.abs(d4[:, None] - d4[None, :]) <= w)
    )
    assert (rel == rel.T).all()


def test_windowed_guard_and_validation():
    with pytest.raises(GuardError) as exc:
        count_windowed(49)
    assert exc.value.guard == "meanvalue.windowed.N"
    with pytest.raises(ValueError):
        count_windowed(4, -0.1)
    with pytest.raises(ValueError):
        count_windowed(0)


# --------------------------------------------------------------- kernel sums


def test_kernel_r1_is_4n():
    for N in (2, 3, 100, 10_000):
        res = moment_kernel_sum(MeanValueSpec(N, 1))
        assert res.exact
        assert abs(res.value - 4.0 * N) <= 1e-9 * 4.0 * N


def test_kernel_r1_n3_value():
    assert moment_kernel_sum(MeanValueSpec(3, 1)).value == pytest.approx(12.0)


@pytest.mark.parametrize("N,r", [(2, 3), (3, 3), (4, 3), (2, 6), (3, 6)])
def test_kernel_matches_direct_expansion(N, r):
    spec = MeanValueSpec(N, r)
    direct = brute_kernel(N, r, spec.delta, spec.Delta)
    fast = moment_kernel_sum(spec).value
    assert fast == pytest.approx(direct, rel=1e-11)


def test_kernel_nondefault_scales_match_direct():
    spec = MeanValueSpec(3, 3, delta=0.5, Delta=0.75)
    assert moment_kernel_sum(spec).value == pytest.approx(
        brute_kernel(3, 3, 0.5, 0.75), rel=1e-11
    )


def test_kernel_guards():
    with pytest.raises(ValueError):
        moment_kernel_sum(MeanValueSpec(4, 2))
    with pytest.raises(GuardError) as exc:
        moment_kernel_sum(MeanValueSpec(13, 6))
    assert exc.value.guard == "meanvalue.kernel.N"


# ---------------------------------------------------------------- quadrature


def test_quadrature_r1_converges_to_4n():
    spec = MeanValueSpec(5, 1)
    res = moment_monte_carlo(spec, 60_000, seed=11)
    assert not res.exact and res.stderr > 0
    assert abs(res.value - 20.0) <= 3.0 * res.stderr


def test_quadrature_agrees_with_kernel_r6_n6():
    spec = MeanValueSpec(6, 6)
    kernel = moment_kernel_sum(spec).value
    mc = moment_monte_carlo(spec, 200_000, seed=5)
    assert abs(mc.value - kernel) <= 3.0 * mc.stderr


def test_quadrature_agrees_with_kernel_r3():
    spec = MeanValueSpec(8, 3)
    kernel = moment_kernel_sum(spec).value
    mc = moment_monte_carlo(spec, 150_000, seed=8)
    assert abs(mc.value - kernel) <= 3.0 * mc.stderr


def test_monte_carlo_integrand_matches_expsum():
    # the quadrature integrand is |eval_quadruple_sum|^{2r} after rescaling
    # the half-power frequencies: x3' = x3/(delta N^2), x4' = x4/(Delta N)
    from zetalab.expsum import eval_quadruple_sum

    N, r = 6, 3
    spec = MeanValueSpec(N, r, delta=0.25, Delta=0.5)
    x = (0.31, 0.77, -0.45, 0.9)
    n = np.arange(1, N + 1, dtype=np.float64)
    phases = (
        n * x[0]
        + n * n * x[1]
        + (n / N) ** 1.5 / spec.delta * x[2]
        + np.sqrt(n / N) / spec.Delta * x[3]
    )
    direct = abs(np.exp(2j * np.pi * phases).sum()) ** (2 * r)
    mapped = (x[0], x[1], x[2] / (spec.delta * N**2), x[3] / (spec.Delta * N))
    via_expsum = abs(eval_quadruple_sum(N, mapped)) ** (2 * r)
    assert direct == pytest.approx(via_expsum, rel=1e-10)


def test_quadrature_deterministic_under_seed():
    spec = MeanValueSpec(4, 6)
    a = moment_monte_carlo(spec, 5000, seed=3)
    b = moment_monte_carlo(spec, 5000, seed=3)
    assert a.value == b.value and a.stderr == b.stderr


def test_quadrature_validation():
    with pytest.raises(ValueError):
        moment_monte_carlo(MeanValueSpec(4, 1), 100)


def test_mean_value_spec_validation():
    with pytest.raises(ValueError):
        MeanValueSpec(1, 6)
    with pytest.raises(ValueError):
        MeanValueSpec(4, 0)
    with pytest.raises(ValueError):
        MeanValueSpec(4, 6, delta=2.0)
    with pytest.raises(ValueError):
        MeanValueSpec(4, 6, delta=1e-3)  # below N^-2 = 1/16
    with pytest.raises(ValueError):
        MeanValueSpec(4, 6, Delta=0.01)
    with pytest.raises(ValueError):
        MeanValueSpec(4, 6, window3=0.0)
    spec = MeanValueSpec(4, 6)
    assert spec.delta == pytest.approx(1 / 16)
    assert spec.Delta == pytest.approx(1 / 4)
    assert spec.window3 == pytest.approx(0.5)


# ------------------------------------------------------------------ J counts


def test_vinogradov_small_values():
    assert vinogradov_count(1, 3).integer_value == 1
    assert vinogradov_count(2, 3).integer_value == 20


@pytest.mark.parametrize("N", [2, 3, 4, 5, 6])
def test_vinogradov_matches_naive_loops(N):
    assert vinogradov_count(N, 3).integer_value == brute_vinogradov(N, 3)
    assert vinogradov_count(N, 2).integer_value == brute_vinogradov(N, 2)


def test_vinogradov_diagonal_bound():
    for N in (4, 16, 64):
        assert vinogradov_count(N, 3).integer_value >= N**3


def test_vinogradov_growth_slope():
    pts = [(N, vinogradov_count(N, 3).value) for N in (16, 32, 64, 128)]
    slope, _ = fit_growth_exponent(pts)
    assert 3.0 <= slope <= 3.4


def test_vinogradov_validation():
    with pytest.raises(ValueError):
        vinogradov_count(4, 4)
    with pytest.raises(GuardError):
        vinogradov_count(257, 3)


# ---------------------------------------------------------------- slope fits


def test_fit_exact_power():
    pts = [(N, float(N**6)) for N in (4, 8, 16, 32)]
    slope, err = fit_growth_exponent(pts)
    assert slope == pytest.approx(6.0, abs=1e-12)
    assert err == pytest.approx(0.0, abs=1e-12)


def test_fit_scaled_cubic():
    pts = [(N, 7.5 * N**3) for N in (3, 9, 27)]
    slope, _ = fit_growth_exponent(pts)
    assert slope == pytest.approx(3.0, abs=1e-12)


def test_fit_validation():
    with pytest.raises(ValueError):
        fit_growth_exponent([(2, 4.0), (4, 16.0)])
    with pytest.raises(ValueError):
        fit_growth_exponent([(2, 4.0), (2, 4.0), (4, 16.0)])
    with pytest.raises(ValueError):
        fit_growth_exponent([(2, -4.0), (3, 9.0), (4, 16.0)])


def test_count_result_validation():
    with pytest.raises(ValueError):
        CountResult(-1.0, True, 0.0, "windowed")
    with pytest.raises(ValueError):
        CountResult(1.0, True, 0.5, "windowed")
