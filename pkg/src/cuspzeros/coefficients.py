"""Fourier coefficients of level-one Hecke eigenforms and derived sequences.

Supported weights are exactly those k with dim S_k(SL2(Z)) = 1; the unique
normalized eigenform is delta times an Eisenstein series. All a_f(n) are
exact integers; lambda_f(n) = a_f(n) n^{-(k-1)/2} and its Dirichlet inverse
mu_f(n) are binary64.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from ._exactpoly import eta24_series, series_mul
from .errors import (
    CuspZerosError,
    TableTooSmallError,
    UnsupportedWeightError,
    UsageError,
)

#: Weights with a one-dimensional cusp-form space.
SUPPORTED_WEIGHTS = (12, 16, 18, 20, 22, 26)

#: Desk-scale cap on coefficient tables.
MAX_N = 100_000

# Bernoulli numbers B_4..B_14 as exact rationals; the Eisenstein series
# E_j = 1 - (2j/B_j) sum sigma_{j-1}(n) q^n needs j = k - 12 <= 14.
_BERNOULLI = {
    4: Fraction(-1, 30),
    6: Fraction(1, 42),
    8: Fraction(-1, 30),
    10: Fraction(5, 66),
    14: Fraction(7, 6),
}


@dataclass(frozen=True)
class EigenformSpec:
    """Selects the unique normalized eigenform of weight k."""

    weight: int

    def __post_init__(self):
        if self.weight not in SUPPORTED_WEIGHTS:
            raise UnsupportedWeightError(
                f"weight {self.weight} does not give a one-dimensional cusp-form "
                f"space; supported weights: {SUPPORTED_WEIGHTS}"
            )


@dataclass(frozen=True)
class CoefficientTable:
    """Immutable coefficient data for one eigenform, indexed 1..n_max.

    `a` is a tuple of exact ints with a[0] = 0 unused; `lam` and `mu` are
    read-only float64 arrays with the same indexing.
    """

    spec: EigenformSpec
    n_max: int
    a: tuple[int, ...]
    lam: np.ndarray
    mu: np.ndarray

    @property
    def weight(self) -> int:
        return self.spec.weight

    def require(self, n: int) -> None:
        if n > self.n_max:
            raise TableTooSmallError(
                f"table for weight {self.weight} covers n <= {self.n_max}, "
                f"need n <= {n}"
            )


def _check_n_max(n_max: int) -> None:
    if not isinstance(n_max, int) or n_max < 1:
        raise UsageError(f"n_max must be a positive integer, got {n_max!r}")
    if n_max > MAX_N:
        raise UsageError(f"n_max {n_max} exceeds the desk-scale cap {MAX_N}")


def tau_series(n_max: int) -> list[int]:
    """Ramanujan tau(1..n_max) as exact integers; index 0 is unused (0).

    Delta = q prod(1-q^m)^24; the eta product is expanded by pentagonal
    numbers and raised to the 24th power by repeated exact squaring.
    """
    _check_n_max(n_max)
    p24 = eta24_series(n_max)  # coefficient of q^j, j = n-1
    out = [0] * (n_max + 1)
    out[1 : n_max + 1] = p24[:n_max]
    return out


def _sigma_series(power: int, n_max: int) -> list[int]:
    """sum_{d|n} d^power for n = 1..n_max by a divisor sieve (exact ints)."""
    sig = [0] * (n_max + 1)
    for d in range(1, n_max + 1):
        dp = d**power
        for m in range(d, n_max + 1, d):
            sig[m] += dp
    return sig


def eisenstein_series(weight: int, n_max: int) -> list[int]:
    """Integer q-expansion of E_weight for weight in {4,6,8,10,14}; index = q-power."""
    if weight not in _BERNOULLI:
        raise UsageError(f"Eisenstein weight {weight} not needed or supported")
    c = Fraction(-2 * weight, 1) / _BERNOULLI[weight]
    if c.denominator != 1:
        raise UsageError(f"E_{weight} constant {c} is not integral")
    mult = int(c)
    sig = _sigma_series(weight - 1, n_max - 1) if n_max > 1 else [0]
    out = [0] * n_max
    out[0] = 1
    for n in range(1, n_max):
        out[n] = mult * sig[n]
    return out


def eigenform_coeffs(spec: EigenformSpec | int, n_max: int) -> list[int]:
    """a_f(1..n_max) of the normalized eigenform of the given weight.

    Built as Delta * E_{k-12} (E_0 = 1) with exact integer series arithmetic.
    Index 0 of the returned list is unused (0).
    """
    if isinstance(spec, int):
        spec = EigenformSpec(spec)
    _check_n_max(n_max)
    k = spec.weight
    tau = tau_series(n_max)
    if k == 12:
        a = tau
    else:
        delta = tau[1:]  # coefficient of q^(j+1)
        eis = eisenstein_series(k - 12, n_max)
        prod = series_mul(delta, eis, n_max)
        a = [0] * (n_max + 1)
        a[1 : n_max + 1] = prod[:n_max]
    if a[1] != 1:
        raise UsageError(f"eigenform of weight {k} not normalized: a(1) = {a[1]}")
    return a


def _lambda_from_a(a: list[int] | tuple[int, ...], weight: int) -> np.ndarray:
    n_max = len(a) - 1
    lam = np.zeros(n_max + 1)
    e = -(weight - 1) / 2.0
    for n in range(1, n_max + 1):
        lam[n] = float(a[n]) * n**e
    lam.setflags(write=False)
    return lam


def _smallest_prime_factors(n_max: int) -> np.ndarray:
    spf = np.arange(n_max + 1, dtype=np.int64)
    for p in range(2, int(n_max**0.5) + 1):
        if spf[p] == p:
            sl = spf[p * p :: p]
            sl[sl == np.arange(p * p, n_max + 1, p)] = p
    return spf


def _mu_from_lambda(lam: np.ndarray) -> np.ndarray:
    """Dirichlet inverse of lambda from its prime values.

    Multiplicative with mu(p) = -lambda(p), mu(p^2) = 1, mu(p^r) = 0 for r >= 3.
    """
    n_max = len(lam) - 1
    spf = _smallest_prime_factors(n_max)
    mu = np.zeros(n_max + 1)
    mu[1] = 1.0
    for n in range(2, n_max + 1):
        p = int(spf[n])
        m, r = n, 0
        while m % p == 0:
            m //= p
            r += 1
        if r >= 3:
            mu[n] = 0.0
        else:
            local = -lam[p] if r == 1 else 1.0
            mu[n] = local * mu[m]
    mu.setflags(write=False)
    return mu


def normalize(table: CoefficientTable) -> np.ndarray:
    """lambda_f(n) = a_f(n) n^{-(k-1)/2} as float64 (index 0 unused)."""
    return _lambda_from_a(table.a, table.weight)


def mu_coeffs(table: CoefficientTable) -> np.ndarray:
    """mu_f(n), the Dirichlet-convolution inverse of lambda_f (index 0 unused)."""
    return _mu_from_lambda(table.lam)


@lru_cache(maxsize=8)
def divisor_counts(n_max: int, order: int = 2) -> np.ndarray:
    """d(n) for order=2 or d_4(n) = (d*d)(n) for order=4, n = 1..n_max."""
    _check_n_max(n_max)
    if order not in (2, 4):
        raise UsageError(f"order must be 2 or 4, got {order}")
    d = np.zeros(n_max + 1, dtype=np.int64)
    for k in range(1, n_max + 1):
        d[k::k] += 1
    if order == 2:
        d.setflags(write=False)
        return d
    d4 = np.zeros(n_max + 1, dtype=np.int64)
    for k in range(1, n_max + 1):
        top = n_max // k
        d4[k :: k] += d[k] * d[1 : top + 1]
    d4.setflags(write=False)
    return d4


@lru_cache(maxsize=None)
def build_table(weight: int, n_max: int) -> CoefficientTable:
    """Memoized immutable table of a, lambda, mu for one weight.

    Construction asserts the Deligne bounds |lambda| <= d and |mu| <= d on
    the whole range before the table is published.
    """
    spec = EigenformSpec(weight)
    a = tuple(eigenform_coeffs(spec, n_max))
    lam = _lambda_from_a(a, weight)
    mu = _mu_from_lambda(lam)
    d = divisor_counts(n_max, 2)[1:].astype(float) + 1e-9
    if not (np.all(np.abs(lam[1:]) <= d) and np.all(np.abs(mu[1:]) <= d)):
        raise CuspZerosError(
            f"Deligne bound violated for weight {weight}: coefficient bug"
        )
    return CoefficientTable(spec=spec, n_max=n_max, a=a, lam=lam, mu=mu)


def table_to_csv(table: CoefficientTable) -> str:
    """CSV `n,a,lambda,mu` with exact integer a and 15-significant-digit floats."""
    buf = io.StringIO()
    buf.write("n,a,lambda,mu\n")
    for n in range(1, table.n_max + 1):
        buf.write(f"{n},{table.a[n]},{table.lam[n]:.15g},{table.mu[n]:.15g}\n")
    return buf.getvalue()
