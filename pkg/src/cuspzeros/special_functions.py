"""Complex log-gamma, the functional-equation factor chi_f, the rotation
phase theta_f, and the upper incomplete gamma function.

log_gamma uses a fixed 15-term Lanczos rational approximation (g = 607/128,
coefficients frozen here; see scripts/gen_lanczos_check.py for the
regeneration/validation script). The incomplete gamma is a continued
fraction for x >= |w| + 4 and the lower-gamma power series otherwise; the
same algorithm runs in binary64 and, via a pluggable context, in gmpy2
multiprecision for the high-accuracy evaluation paths.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import gmpy2
import numpy as np

from .errors import DomainError, NumericError, PhaseStepError

LOG_2PI = math.log(2.0 * math.pi)
_HALF_LOG_2PI = 0.5 * LOG_2PI

# Lanczos g = 607/128, 15 terms (Godfrey's table). Relative accuracy of the
# rational part is ~1e-15 on Re z >= 0.5.
_LANCZOS_G = 607.0 / 128.0
_LANCZOS_C0 = 0.99999999999999709182
_LANCZOS_C = (
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)


def _near_nonpositive_integer(z: complex, tol: float = 1e-13) -> bool:
    if abs(z.imag) > tol:
        return False
    r = round(z.real)
    return r <= 0 and abs(z.real - r) <= tol


# extended-precision constants for the dominant Stirling-like terms
_HALF_LOG_2PI_L = np.longdouble("0.91893853320467274178032973640561764")
_G_HALF_L = np.longdouble(607) / np.longdouble(128) + np.longdouble("0.5")


def _lanczos_core(z: complex) -> complex:
    """Principal log Gamma for Re z >= 0.5.

    The rational series is binary64; all large terms accumulate in extended
    precision so the absolute error stays ~1e-13 even where |log Gamma| is
    several thousand.
    """
    ser = _LANCZOS_C0
    for j, c in enumerate(_LANCZOS_C, start=1):
        ser += c / (z + j)
    # Gamma(z) = sqrt(2 pi) * t^(z+1/2) * e^(-t) * ser(z) / z,  t = z + g + 1/2
    zl = np.clongdouble(z)
    tl = zl + _G_HALF_L
    res = (
        (zl + np.longdouble("0.5")) * np.log(tl)
        - tl
        + _HALF_LOG_2PI_L
        + np.log(np.clongdouble(ser))
        - np.log(zl)
    )
    return complex(res)


def log_gamma(z: complex) -> complex:
    """Principal branch of log Gamma(z).

    Absolute error <= 1e-12 for |z| <= 1e3. Raises DomainError at the poles.
    Arguments left of Re z = 1/2 are shifted right by the recurrence
    log Gamma(z) = log Gamma(z+n) - sum_j Log(z+j), which preserves the
    principal branch off the real axis; on the negative real axis this
    yields the conventional continuation from above (signed zeros select
    the side of the cut).
    """
    z = complex(z)
    if _near_nonpositive_integer(z):
        raise DomainError(f"log_gamma pole at z = {z}")
    if z.real >= 0.5:
        return _lanczos_core(z)
    n = int(math.ceil(0.5 - z.real))
    shift = 0.0j
    for j in range(n):
        shift += cmath.log(z + j)
    return _lanczos_core(z + n) - shift


def gamma(z: complex) -> complex:
    """Gamma(z) = exp(log_gamma(z))."""
    return cmath.exp(log_gamma(z))


def chi_f(s: complex, weight: int) -> complex:
    """Functional-equation factor: L_f(s) = chi_f(s) L_f(1-s).

    chi_f(s) = (-1)^(k/2) (2 pi)^(2s-1) Gamma(1-s+(k-1)/2) / Gamma(s+(k-1)/2).
    """
    if weight % 2:
        raise DomainError(f"weight must be even, got {weight}")
    s = complex(s)
    h = (weight - 1) / 2.0
    sign = -1.0 if (weight // 2) % 2 else 1.0
    num = log_gamma((1.0 - s) + h)
    den = log_gamma(s + h)
    return sign * cmath.exp((2.0 * s - 1.0) * LOG_2PI + num - den)


@dataclass
class PhaseState:
    """Tracks successive rotation-phase evaluations along a t-sweep.

    `theta` stays continuous along any monotone sequence of t values with
    steps <= 0.5 (the closed-form evaluation is continuous in t regardless;
    the state enforces the documented stepping contract and keeps the last
    evaluation for callers that scan).
    """

    t: float | None = None
    theta: float = 0.0
    last_t: float | None = None


def theta_f(t: float, weight: int, state: PhaseState | None = None) -> float:
    """Continuous rotation phase with e^{2 i theta(t)} = chi~(1/2+it)^{-1}.

    chi~ is the chi factor with the root number (-1)^{k/2} removed, so
    theta(0) = 0 for every supported weight; weights k = 2 mod 4 need an
    extra factor i in the rotated function (applied by the Z evaluator).
    Closed form: theta(t) = Im log Gamma(k/2 + i t) - t log(2 pi).
    """
    if state is not None and state.t is not None:
        if abs(t - state.t) > 0.5 + 1e-12:
            raise PhaseStepError(
                f"phase step {abs(t - state.t):.3f} from t = {state.t} exceeds 0.5; "
                "evaluate on a finer grid"
            )
    th = log_gamma(complex(weight / 2.0, t)).imag - t * LOG_2PI
    if state is not None:
        state.last_t = state.t
        state.t = t
        state.theta = th
    return th


# --------------------------------------------------------------------------
# Incomplete gamma: one algorithm, two numeric contexts.


class _F64Ctx:
    """binary64 context over Python complex."""

    eps = 2.0**-52
    tiny = 1e-300

    @staticmethod
    def mkc(z):
        return complex(z)

    @staticmethod
    def mkr(x):
        return float(x)

    exp = staticmethod(cmath.exp)
    log = staticmethod(cmath.log)

    @staticmethod
    def gamma(w):
        return gamma(w)

    @staticmethod
    def to_complex(z):
        return complex(z)


class HPCtx:
    """gmpy2 multiprecision context; use inside `gmpy2.local_context`."""

    def __init__(self, prec: int):
        self.prec = prec
        self.eps = float(gmpy2.mpfr(2) ** (3 - prec))
        self.tiny = gmpy2.mpfr(2) ** (-prec * 8)
        self._gamma_cache: dict = {}

    @staticmethod
    def mkc(z):
        z = complex(z)
        return gmpy2.mpc(z.real, z.imag)

    @staticmethod
    def mkr(x):
        return gmpy2.mpfr(x)

    exp = staticmethod(gmpy2.exp)
    log = staticmethod(gmpy2.log)

    def gamma(self, w):
        key = (w.real, w.imag)
        val = self._gamma_cache.get(key)
        if val is None:
            val = gmpy2.exp(log_gamma_hp(w, self.prec))
            self._gamma_cache[key] = val
        return val

    @staticmethod
    def to_complex(z):
        return complex(z)


def _lower_gamma_series(w, x, ctx, max_terms=20000):
    """gamma_lower(w, x) = x^w e^-x sum_j x^j / (w (w+1) ... (w+j))."""
    term = 1 / w
    acc = term
    peak = abs(term)
    j = 0
    while j < max_terms:
        j += 1
        term = term * x / (w + j)
        acc = acc + term
        a = abs(term)
        if a > peak:
            peak = a
        if a < ctx.eps * max(abs(acc), peak) * 0.25:
            break
    else:
        raise NumericError(f"lower-gamma series did not converge at w={w}, x={x}")
    return ctx.exp(w * ctx.log(x) - x) * acc


def _upper_gamma_cf(w, x, ctx, max_iters=100000):
    """Continued fraction (modified Lentz) for Gamma(w, x), x >= ~|w|."""
    tiny = ctx.tiny
    b = x + 1 - w
    c = b if abs(b) > 0 else b + tiny
    d = ctx.mkc(0.0)
    f = c
    for i in range(1, max_iters):
        a = i * (w - i)
        b = b + 2
        d = b + a * d
        if abs(d) == 0:
            d = d + tiny
        c = b + a / c
        if abs(c) == 0:
            c = c + tiny
        d = 1 / d
        delta = c * d
        f = f * delta
        if abs(delta - 1) < ctx.eps:
            return ctx.exp(w * ctx.log(x) - x) / f
    raise NumericError(f"incomplete-gamma continued fraction stalled at w={w}, x={x}")


def _upper_gamma_ctx(w, x, ctx):
    if abs(x) >= abs(w) + 4:
        return _upper_gamma_cf(w, x, ctx)
    return ctx.gamma(w) - _lower_gamma_series(w, x, ctx)


def upper_gamma(w: complex, x: float) -> complex:
    """Gamma(w, x) = integral_x^inf e^-u u^(w-1) du for x > 0, complex w.

    Continued fraction for x >= |w| + 4, lower-series complement otherwise.
    Absolute error ~1e-13 relative to the natural scale e^-x x^Re(w).
    """
    if not x > 0:
        raise DomainError(f"upper_gamma needs x > 0, got x = {x}")
    ctx = _F64Ctx
    return _upper_gamma_ctx(ctx.mkc(w), ctx.mkr(x), ctx)


def lower_gamma(w: complex, x: float) -> complex:
    """gamma(w, x) = integral_0^x e^-u u^(w-1) du (power series)."""
    if not x > 0:
        raise DomainError(f"lower_gamma needs x > 0, got x = {x}")
    ctx = _F64Ctx
    return _lower_gamma_series(ctx.mkc(w), ctx.mkr(x), ctx)


# --------------------------------------------------------------------------
# High-precision log-gamma (Stirling with exact Bernoulli numbers), used by
# the multiprecision evaluation context.

_bernoulli_cache: list[Fraction] = [Fraction(1), Fraction(-1, 2)]


def _bernoulli(n: int) -> Fraction:
    """Exact Bernoulli number B_n (B_1 = -1/2 convention)."""
    while len(_bernoulli_cache) <= n:
        m = len(_bernoulli_cache)
        acc = Fraction(0)
        binom = 1
        for j in range(m):
            acc += binom * _bernoulli_cache[j]
            binom = binom * (m + 1 - j) // (j + 1)
        _bernoulli_cache.append(-acc / (m + 1))
    return _bernoulli_cache[n]


def log_gamma_hp(z, prec: int):
    """log Gamma at `prec` bits via Stirling series with argument shifting.

    Accepts and returns gmpy2 mpc/mpfr (runs under the caller's gmpy2
    context). Branch is continuous for Re z > 0, which is the only region
    the package evaluates in.
    """
    z = gmpy2.mpc(z)
    # Stirling remainder decays like e^(-2 pi |z|); shift until adequate.
    need = (prec + 25) / 9.06
    shift = 0
    zr = gmpy2.mpfr(z.real)
    if abs(z) < need or zr < 1:
        shift = int(math.ceil(max(need - float(zr), 1 - float(zr)))) + 1
    zs = z + shift
    half = gmpy2.mpfr(1) / 2
    two_pi = 2 * gmpy2.const_pi()
    res = (zs - half) * gmpy2.log(zs) - zs + gmpy2.log(two_pi) / 2
    zs2 = zs * zs
    zpow = zs
    tol = gmpy2.mpfr(2) ** (-prec - 6) * (abs(res) + 1)
    prev = None
    j = 1
    while True:
        b = _bernoulli(2 * j)
        coef = gmpy2.mpq(b.numerator, b.denominator * (2 * j) * (2 * j - 1))
        term = gmpy2.mpfr(coef.numerator) / gmpy2.mpfr(coef.denominator) / zpow
        res = res + term
        a = abs(term)
        if a < tol:
            break
        if prev is not None and a > prev:
            raise NumericError(f"Stirling series diverged for z={z} at prec {prec}")
        prev = a
        zpow = zpow * zs2
        j += 1
        if j > 4 * prec:
            raise NumericError(f"Stirling series too slow for z={z} at prec {prec}")
    for m in range(shift):
        res = res - gmpy2.log(z + m)
    return res
