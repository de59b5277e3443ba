"""Evaluation of L_f(s) three ways.

* Dirichlet series (Re s > 1) with a monotone-comparison tail bound,
* approximate functional equation (critical strip, sharp cutoff at
  y = |t|/(2 pi)),
* incomplete-gamma series for the completed function (the "exact" oracle,
  valid at any s; automatically escalates to multiprecision where binary64
  would lose the value to cancellation).

The exact route expands the Mellin integral of the completed function,
split at y = 1 and reflected by modularity:

    Lambda(s) = sum_n a(n) [ Gamma(w, 2 pi n) / (2 pi n)^w
                            + (-1)^(k/2) Gamma(w', 2 pi n) / (2 pi n)^w' ]

with w = s + (k-1)/2, w' = (1-s) + (k-1)/2, and
L(s) = (2 pi)^w Lambda(s) / Gamma(w).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import gmpy2

from ._kahan import KahanSum
from .coefficients import CoefficientTable, build_table
from .errors import DomainError, NumericError, TableTooSmallError
from .special_functions import (
    LOG_2PI,
    HPCtx,
    _F64Ctx,
    _upper_gamma_ctx,
    chi_f,
    log_gamma,
    log_gamma_hp,
    theta_f,
)

TWO_PI = 2.0 * math.pi

#: t below which the rotated line value is computed from the exact series.
Z_EXACT_T_MAX = 60.0

DIRICHLET = "dirichlet"
AFE = "afe"
EXACT = "exact"


@dataclass(frozen=True)
class EvalResult:
    """One L-function evaluation.

    `est_error` is a rigorous-style tail-plus-roundoff bound for the exact
    method, a monotone-comparison tail bound for the Dirichlet series, and
    the heuristic scale |t|^(1/2 - sigma) for the approximate functional
    equation (the underlying big-O constant is not specified; treat it as a
    scale, not a bound).
    """

    value: complex
    method: str
    est_error: float
    terms_used: int


@dataclass(frozen=True)
class ZDetail:
    """Rotated line value with the discarded imaginary part as diagnostic."""

    value: float
    im_residual: float
    method: str


def _dirichlet_tail_bound(n: int, sigma: float) -> float:
    """Upper bound for sum_{m>n} d(m) m^-sigma via D(x) <= x (log x + 1)."""
    if sigma <= 1.0:
        return math.inf
    u = sigma - 1.0
    return sigma * n**-u * ((math.log(n) + 1.0) / u + 1.0 / (u * u) + 1.0 / u)


class LFunction:
    """L-function of the normalized Hecke eigenform of one supported weight.

    Immutable once constructed; all evaluation methods are pure and safe to
    call from parallel grid sweeps.
    """

    def __init__(self, weight: int, n_max: int = 10_000):
        self.table: CoefficientTable = build_table(weight, n_max)
        self.weight = weight
        self._h = (weight - 1) / 2.0
        self._sign = -1.0 if (weight // 2) % 2 else 1.0

    # -- Dirichlet series ---------------------------------------------------

    def dirichlet_eval(self, s: complex, n_terms: int | None = None) -> EvalResult:
        """Partial sum of sum lambda(n) n^-s for Re s > 1, compensated."""
        s = complex(s)
        if s.real <= 1.0:
            raise DomainError(
                f"Dirichlet series not used at Re s = {s.real} <= 1; "
                "use afe_eval or exact_eval"
            )
        n = self.table.n_max if n_terms is None else int(n_terms)
        if n < 1 or n > self.table.n_max:
            raise TableTooSmallError(
                f"n_terms = {n} outside 1..{self.table.n_max}"
            )
        lam = self.table.lam
        acc = KahanSum(0.0j)
        for m in range(1, n + 1):
            acc.add(lam[m] * cmath.exp(-s * math.log(m)))
        return EvalResult(acc.value, DIRICHLET, _dirichlet_tail_bound(n, s.real), n)

    # -- approximate functional equation ------------------------------------

    def afe_eval(self, s: complex) -> EvalResult:
        """Sharp-cutoff approximate functional equation at y = |t|/(2 pi).

        sum_{n<=y} lambda(n) n^-s + chi_f(s) sum_{n<=y} lambda(n) n^-(1-s).
        Nominal domain is the critical strip; evaluation is allowed for
        -0.5 <= Re s <= 1.6 (accuracy just outside the strip is checked
        empirically in the test suite). The cutoff is the strict n <= floor(y);
        the jump across integer y is part of the observed error term.
        """
        s = complex(s)
        t = abs(s.imag)
        if t < TWO_PI:
            raise DomainError(
                f"|Im s| = {t:.3f} < 2 pi gives an empty main sum; use exact_eval"
            )
        if not -0.5 <= s.real <= 1.6:
            raise DomainError(f"afe_eval supports -0.5 <= Re s <= 1.6, got {s.real}")
        y = t / TWO_PI
        cut = int(math.floor(y))
        self.table.require(cut)
        lam = self.table.lam
        main = KahanSum(0.0j)
        dual = KahanSum(0.0j)
        for n in range(1, cut + 1):
            ln = math.log(n)
            main.add(lam[n] * cmath.exp(-s * ln))
            dual.add(lam[n] * cmath.exp(-(1.0 - s) * ln))
        value = main.value + chi_f(s, self.weight) * dual.value
        return EvalResult(value, AFE, t ** (0.5 - s.real), 2 * cut)

    # -- exact (incomplete-gamma) series ------------------------------------

    def _cancellation_bits(self, t: float) -> float:
        """a-priori bits lost to cancellation in the exact series at height t."""
        a = self.weight / 2.0
        nats = (
            (a - 0.5) * LOG_2PI
            + math.pi * t / 2.0
            - TWO_PI
            - (a + 0.5) * math.log(max(t, TWO_PI))
        )
        return max(0.0, 1.4427 * nats)

    def _tail_bound(self, m: int, rew: float, rewp: float) -> float:
        """Bound on the Lambda-series tail from term m on, using d(j) <= j.

        |Gamma(w,x)/x^w| <= e^-x q(x, Re w) with q = 1/x for Re w <= 1 and
        1/(x - Re w + 1) otherwise (valid for x > Re w - 1).
        """

        def logterm(j: float) -> float:
            x = TWO_PI * j
            q = 0.0
            for r in (rew, rewp):
                q += 1.0 / x if r <= 1.0 else 1.0 / (x - r + 1.0)
            return (self._h + 1.0) * math.log(j) - x + math.log(q)

        lt = logterm(m)
        ratio = math.exp(min(logterm(m + 1) - lt, -0.1))
        if lt < -700.0:
            return 0.0
        return math.exp(lt) / (1.0 - ratio)

    def _series_ctx(self, s: complex, ctx, prec_bits: int,
                    stop_abs: float, stop_rel: float, lgw=None):
        """Lambda series summed under a numeric context.

        Returns (lambda_value, tail_bound, roundoff_est, terms, log_gamma_w)
        with the tail and roundoff estimates on the Lambda scale.
        """
        a = self.table.a
        t = abs(complex(s).imag)
        h = self._h
        rew = complex(s).real + h
        rewp = (1.0 - complex(s).real) + h
        n_cap = int(math.ceil(t / TWO_PI)) + 40
        self.table.require(n_cap)

        s_c = ctx.mkc(s)
        w = s_c + ctx.mkr(h)
        wp = (1 - s_c) + ctx.mkr(h)
        sign = ctx.mkr(self._sign)
        if isinstance(ctx, HPCtx):
            two_pi = 2 * gmpy2.const_pi()
            if lgw is None:
                lgw = log_gamma_hp(w, prec_bits)
        else:
            two_pi = TWO_PI
            if lgw is None:
                lgw = log_gamma(complex(w))
        eps = ctx.eps

        acc = KahanSum(ctx.mkc(0.0))
        peak = 0.0
        tail = math.inf
        terms = 0
        for n in range(1, n_cap + 1):
            x = two_pi * n
            lx = ctx.log(x)
            term = a[n] * (
                _upper_gamma_ctx(w, x, ctx) * ctx.exp(-w * lx)
                + sign * _upper_gamma_ctx(wp, x, ctx) * ctx.exp(-wp * lx)
            )
            acc.add(term)
            terms = n
            mag = float(abs(term))
            if mag > peak:
                peak = mag
            if n >= 3:
                tail = self._tail_bound(n + 1, rew, rewp)
                if tail <= max(stop_abs, stop_rel * float(abs(acc.value))):
                    break
        roundoff = eps * peak * max(terms, 1) * 2.0
        return acc.value, tail, roundoff, terms, lgw

    def _pick_ctx(self, t: float, tol_bits: float):
        cancel = self._cancellation_bits(t)
        if cancel + 12.0 + tol_bits <= 52.0:
            return _F64Ctx, 53
        prec = int(64 + cancel + tol_bits + 16)
        return HPCtx(prec), prec

    def completed_eval(self, s: complex, rel_tol: float = 1e-12) -> EvalResult:
        """Completed-function value Lambda(s) with a tail + roundoff bound.

        `rel_tol` is relative to |Lambda(s)| (the natural scale decays like
        e^(-pi |t| / 2), so an absolute tolerance would be meaningless).
        est_error is absolute, tail plus roundoff.
        """
        s = complex(s)
        t = abs(s.imag)
        tol_bits = max(0.0, -math.log2(rel_tol)) + 8.0
        ctx, prec = self._pick_ctx(t, tol_bits)

        def run(ctx, prec):
            lam, tail, roundoff, terms, _ = self._series_ctx(
                s, ctx, prec, stop_abs=0.0, stop_rel=rel_tol * 0.25
            )
            return ctx.to_complex(lam), tail + roundoff, terms

        if isinstance(ctx, HPCtx):
            with gmpy2.context(precision=prec):
                value, err, terms = run(ctx, prec)
        else:
            value, err, terms = run(ctx, prec)
        if err > rel_tol * abs(value) and abs(value) > 0:
            raise NumericError(
                f"completed_eval could not reach rel_tol={rel_tol} at s={s}",
                value=value,
                est_error=err,
            )
        return EvalResult(value, EXACT, err, terms)

    @staticmethod
    def _scaled_err(err_lambda: float, logf: float) -> float:
        """err_lambda * e^logf without overflow/underflow artifacts."""
        if err_lambda <= 0.0:
            return 0.0
        return math.exp(min(math.log(err_lambda) + logf, 700.0))

    def exact_eval(self, s: complex, tol: float = 1e-10) -> EvalResult:
        """L_f(s) from the incomplete-gamma series, est_error < tol (absolute).

        Valid at any s; the working precision is raised automatically with
        |Im s| (the series loses ~pi |t| / 2 ln 2 bits to cancellation), so
        heights well past the documented desk scale |Im s| <= 60 work, just
        slowly.
        """
        s = complex(s)
        t = abs(s.imag)
        tol_bits = max(0.0, -math.log2(max(tol, 1e-300)))
        ctx, prec = self._pick_ctx(t, tol_bits)

        def run(ctx, prec):
            # normalization F = (2 pi)^w / Gamma(w); tolerances transfer to
            # the Lambda scale through log |F|.
            rew = s.real + self._h
            if isinstance(ctx, HPCtx):
                w = ctx.mkc(s) + ctx.mkr(self._h)
                lgw = log_gamma_hp(w, prec)
                logf = rew * LOG_2PI - float(lgw.real)
                stop = tol * math.exp(max(-logf, -700.0)) / 4.0
                lam, tail, roundoff, terms, _ = self._series_ctx(
                    s, ctx, prec, stop_abs=stop, stop_rel=0.0, lgw=lgw
                )
                fac = ctx.exp(w * ctx.log(2 * gmpy2.const_pi()) - lgw)
                value = ctx.to_complex(lam * fac)
            else:
                w = complex(s) + self._h
                lgw = log_gamma(w)
                logf = rew * LOG_2PI - lgw.real
                stop = tol * math.exp(max(-logf, -700.0)) / 4.0
                lam, tail, roundoff, terms, _ = self._series_ctx(
                    s, ctx, prec, stop_abs=stop, stop_rel=0.0, lgw=lgw
                )
                value = lam * cmath.exp(w * LOG_2PI - lgw)
            err = self._scaled_err(tail + roundoff, logf)
            return value, err, terms

        if isinstance(ctx, HPCtx):
            with gmpy2.context(precision=prec):
                value, err, terms = run(ctx, prec)
        else:
            value, err, terms = run(ctx, prec)
        if err > tol:
            raise NumericError(
                f"exact_eval could not reach tol={tol} at s={s} "
                f"(best bound {err:.3e})",
                value=value,
                est_error=err,
            )
        return EvalResult(value, EXACT, err, terms)

    # -- rotated line value ---------------------------------------------------

    def z_detail(self, t: float, tol: float = 1e-10) -> ZDetail:
        """Real rotated value Z(t) = Re[e^{i theta(t)} L(1/2 + it)] with the
        discarded imaginary part recorded as a diagnostic.

        Exact series for t <= 60, approximate functional equation above.
        Weights k = 2 mod 4 rotate by an extra factor i so Z is again real.
        """
        if t < 0:
            raise DomainError(f"z_function needs t >= 0, got {t}")
        s = complex(0.5, t)
        if t <= Z_EXACT_T_MAX:
            r = self.exact_eval(s, tol=tol)
        else:
            r = self.afe_eval(s)
        rot = cmath.exp(1j * theta_f(t, self.weight)) * r.value
        if self.weight % 4 == 2:
            rot *= 1j
        return ZDetail(rot.real, abs(rot.imag), r.method)

    def z_function(self, t: float) -> float:
        return self.z_detail(t).value
