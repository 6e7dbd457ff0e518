"""Extreme-value side of the Gaussian circulant norm.

Contains the aspect-ratio-dependent location shift of the limiting shifted
Gumbel law, its CDF/quantile, the square-root quantile transform used to
compare against scaled norms, and the computable lower-bound statistic
built from the DFT diagonal of one Gaussian circulant draw.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .structured import projection_entry

__all__ = [
    "GumbelModel",
    "BStatistic",
    "ProbeCheck",
    "DominanceReport",
    "theta_c",
    "gumbel_model",
    "gumbel_cdf",
    "gumbel_quantile",
    "g_c_quantile",
    "b_kernel",
    "b_statistic",
    "dominance_check",
]

_CHUNK = 1 << 21


@dataclass(frozen=True)
class GumbelModel:
    """Location shift and aspect ratio of the shifted Gumbel limit."""

    theta: float
    c: float

    def __post_init__(self):
        if not 0 < self.c <= 1:
            raise ValueError(f"aspect ratio must lie in (0, 1], got {self.c}")
        if self.theta < 0:
            raise ValueError("theta must be nonnegative")


@lru_cache(maxsize=512)
def theta_c(c: float, tol: float = 1e-10) -> float:
    """Location shift theta(c) = -2 sum_{j>=1} log(1 - (sin(c pi j)/(c pi j))^2).

    The sum is truncated at J terms and completed analytically: the linear
    part of the tail has the closed form

        sum_{j>J} (sin(c pi j)/(c pi j))^2 = (1-c)/(2c) - (partial sum),

    so only the quadratic-and-higher remainder needs bounding. Each term
    obeys -log(1-x) - x <= x^2/(1-x) with x <= 1/(c pi j)^2, giving a
    remainder below 2/(3 (c pi)^4 J^3); J is chosen so this is under tol/2.
    Accuracy is limited to ~1e-12 by double-precision summation.
    """
    if not 0 < c <= 1:
        raise ValueError(f"aspect ratio must lie in (0, 1], got {c}")
    if tol <= 0:
        raise ValueError("tol must be positive")

    cpi = c * math.pi
    j_tail = math.ceil((4.0 / (3.0 * cpi**4 * tol)) ** (1.0 / 3.0))
    big_j = max(math.ceil(10.0 / c), j_tail, 8)

    head = 0.0
    linear = 0.0
    lo = 1
    while lo <= big_j:
        hi = min(lo + _CHUNK - 1, big_j)
        j = np.arange(lo, hi + 1, dtype=float)
        arg = cpi * j
        x = (np.sin(arg) / arg) ** 2
        head += -2.0 * float(np.sum(np.log1p(-x)))
        linear += float(np.sum(x))
        lo = hi + 1

    tail = max((1.0 - c) / (2.0 * c) - linear, 0.0)
    return head + 2.0 * tail


def gumbel_model(c: float, tol: float = 1e-10) -> GumbelModel:
    return GumbelModel(theta=theta_c(c, tol), c=c)


def gumbel_cdf(x, model: GumbelModel):
    """CDF exp(-e^{-(x - theta)}); accepts scalars or arrays."""
    return np.exp(-np.exp(-(np.asarray(x, dtype=float) - model.theta)))


def gumbel_quantile(q: float, model: GumbelModel) -> float:
    """Inverse CDF theta - log(-log q) on (0, 1)."""
    if not 0 < q < 1:
        raise ValueError(f"quantile level must lie in (0, 1), got {q}")
    return model.theta - math.log(-math.log(q))


def g_c_quantile(q: float, c: float, n: int, tol: float = 1e-10) -> float:
    """Quantile of sqrt((shifted Gumbel + log(n/2)) / log n) at level q.

    This is the distribution the scaled circulant norm is compared against;
    a negative radicand (possible far in the lower tail) raises instead of
    propagating a NaN.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    model = gumbel_model(c, tol)
    radicand = (gumbel_quantile(q, model) + math.log(n / 2.0)) / math.log(n)
    if radicand < 0:
        raise ValueError(
            f"quantile transform undefined at q={q}: radicand {radicand} is negative"
        )
    return math.sqrt(radicand)


def b_kernel(p: int, n: int) -> np.ndarray:
    """Moving-average weights of the quadratic forms along projection columns.

    w[0] = p and w[k] = sin^2(pi k p / n) / (p sin^2(pi k / n)) otherwise;
    identical to n^2/p times the squared modulus of the projection entries
    in row 0.
    """
    if not 1 <= p <= n:
        raise ValueError(f"need 1 <= p <= n, got p={p}, n={n}")
    k = np.arange(1, n, dtype=float)
    den = np.sin(np.pi * k / n)
    assert np.all(den > 0.0), "interior grid angles cannot hit a sine zero"
    w = np.empty(n)
    w[0] = p
    w[1:] = (np.sin(np.pi * k * p / n) / den) ** 2 / p
    return w


@dataclass(frozen=True)
class BStatistic:
    value: float  # max quadratic form divided by p
    argmax_j: int
    centered: float  # value - log(n/2)


def b_statistic(diag, p: int) -> BStatistic:
    """Lower-bound statistic for the squared norm of a Gaussian circulant draw.

    Evaluates all n quadratic forms as one circular convolution of |diag|^2
    with the fixed kernel (O(n log n)), then maximizes over j = 0..n/2;
    forms at j and n-j coincide because |diag| is even.
    """
    d = np.asarray(diag)
    n = d.size
    if n % 2 != 0:
        raise ValueError(f"even embedding size required, got n={n}")
    if not 1 <= p <= n:
        raise ValueError(f"need 1 <= p <= n, got p={p}, n={n}")
    power = np.abs(d) ** 2
    w = b_kernel(p, n)
    forms = np.fft.irfft(np.fft.rfft(w) * np.fft.rfft(power), n)
    half = forms[: n // 2 + 1]
    j = int(np.argmax(half))
    value = float(half[j] / p)
    return BStatistic(value=value, argmax_j=j, centered=value - math.log(n / 2.0))


@dataclass(frozen=True)
class ProbeCheck:
    x: float
    empirical_cdf: float
    gumbel_cdf: float
    diff: float
    flag: bool


@dataclass(frozen=True)
class DominanceReport:
    probes: tuple[ProbeCheck, ...]
    n_samples: int

    @property
    def violations(self) -> int:
        return sum(1 for row in self.probes if row.flag)


def dominance_check(samples, model: GumbelModel, probes, n_se: float = 3.0) -> DominanceReport:
    """One-sided stochastic-dominance check of samples against the model.

    Dominance predicts the empirical CDF stays at or below the shifted
    Gumbel CDF, so a probe is flagged only when the empirical value exceeds
    the model by more than `n_se` binomial standard errors.
    """
    s = np.sort(np.asarray(samples, dtype=float))
    m = s.size
    if m < 500:
        raise ValueError(f"need at least 500 samples, got {m}")
    rows = []
    for x in probes:
        xf = float(x)
        emp = float(np.searchsorted(s, xf, side="right")) / m
        ref = float(gumbel_cdf(xf, model))
        se = math.sqrt(ref * (1.0 - ref) / m)
        diff = emp - ref
        rows.append(
            ProbeCheck(x=xf, empirical_cdf=emp, gumbel_cdf=ref, diff=diff, flag=diff > n_se * se)
        )
    return DominanceReport(probes=tuple(rows), n_samples=m)


def kernel_from_projection(p: int, n: int) -> np.ndarray:
    """Same weights as :func:`b_kernel`, assembled entry-wise (cross-check path)."""
    return np.array(
        [n * n / p * abs(projection_entry(p, n, 0, k)) ** 2 for k in range(n)]
    )
