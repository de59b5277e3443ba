"""Mollifier apparatus and zero-density bookkeeping.

The mollifier M_X(s) = sum_{m<=X} mu_f(m) m^-s is the truncated Dirichlet
inverse, so L M_X - 1 is small; multiplying the approximate functional
equation by M_X leaves a convolution tail sum_{X<l<=Xy} c(l) l^-s plus a
chi-weighted product of short polynomials. Splitting everything into dyadic
blocks gives, at each zero rho, a family S_nu(rho) whose absolute values
must sum to at least 1/2 (up to the AFE error); this module builds the
blocks, measures the margin, selects well-spaced zero subsets, forms the
power-convolution coefficients used to amplify block sums, and tabulates
the zero-density exponent consistency report.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from ._kahan import KahanSum
from .coefficients import CoefficientTable
from .errors import DomainError, UsageError
from .lfunction import TWO_PI, LFunction
from .special_functions import chi_f
from .zeros import ZeroRecord, count_zeros_rect, scan_zeros

C_BLOCK = "c_block"
PRODUCT_BLOCK = "product_block"


@dataclass(frozen=True)
class MollifierConfig:
    """Window top t1 (zeros taken from (t1/2, t1]) and mollifier length
    x = t1^(1/delta)."""

    t1: float
    delta: int
    x: float = field(init=False)

    def __post_init__(self):
        if self.t1 < 4:
            raise UsageError(f"need t1 >= 4, got {self.t1}")
        if int(self.delta) != self.delta or self.delta < 1:
            raise UsageError(f"delta must be a positive integer, got {self.delta}")
        object.__setattr__(self, "x", self.t1 ** (1.0 / self.delta))


@dataclass(frozen=True)
class DyadicBlock:
    """Interval (lo, hi] with hi <= 2 lo. For product blocks, lo/hi is the
    m-range and `indices` carries ((m_lo, m_hi), (n_lo, n_hi))."""

    lo: float
    hi: float
    kind: str = C_BLOCK
    indices: tuple[tuple[float, float], tuple[float, float]] | None = None

    def __post_init__(self):
        if not self.lo < self.hi <= 2 * self.lo:
            raise UsageError(f"not a dyadic block: ({self.lo}, {self.hi}]")


def dyadic_blocks(a: float, b: float) -> list[DyadicBlock]:
    """Blocks (Z, min(2Z, b)] tiling (a, b] exactly, at most ceil(log2(b/a))."""
    if not 1 <= a < b:
        raise DomainError(f"need 1 <= a < b, got ({a}, {b})")
    out = []
    lo = a
    while lo < b:
        hi = min(2 * lo, b)
        out.append(DyadicBlock(lo, hi))
        lo = hi
    return out


def _ints_in(lo: float, hi: float) -> range:
    """Integers in (lo, hi]."""
    return range(int(math.floor(lo)) + 1, int(math.floor(hi)) + 1)


def mollifier_eval(table: CoefficientTable, s: complex, config: MollifierConfig) -> complex:
    """M_X(s) = sum_{m <= X} mu_f(m) m^-s, compensated summation."""
    s = complex(s)
    m_top = int(math.floor(config.x))
    table.require(max(m_top, 1))
    acc = KahanSum(0.0j)
    for m in range(1, m_top + 1):
        acc.add(table.mu[m] * cmath.exp(-s * math.log(m)))
    return acc.value


def conv_coeffs(table: CoefficientTable, config: MollifierConfig, y: float) -> np.ndarray:
    """c(l) = sum_{l = m n, m <= X, n <= y} mu_f(m) lambda_f(n), l <= floor(X y).

    c(1) = 1 and c(l) = 0 for 2 <= l <= X whenever y >= X (the convolution
    inverse cancels every short product).
    """
    x = config.x
    m_top = int(math.floor(x))
    n_top = int(math.floor(y))
    if n_top < 1 or m_top < 1:
        raise DomainError(f"empty convolution range: X = {x}, y = {y}")
    table.require(max(m_top, n_top))
    size = int(math.floor(x * y))
    c = np.zeros(size + 1)
    for m in range(1, m_top + 1):
        keep = min(n_top, size // m)
        c[m :: m][:keep] += table.mu[m] * table.lam[1 : keep + 1]
    c.setflags(write=False)
    return c


def _blocks_from_one(top: float) -> list[DyadicBlock]:
    """Dyadic tiling of [1, top]: a (1/2, 1] block for the leading term plus
    the (1, top] tiling; integer-free blocks are dropped."""
    blocks = [DyadicBlock(0.5, 1.0)]
    if top > 1.0:
        blocks.extend(dyadic_blocks(1.0, top))
    return [b for b in blocks if len(_ints_in(b.lo, b.hi)) > 0]


def block_sums(
    lf: LFunction, rho: ZeroRecord | complex, config: MollifierConfig
) -> list[tuple[DyadicBlock, complex]]:
    """Every dyadic block sum S_nu(rho) of L M_X - 1 at a zero rho.

    Convolution blocks are sum_{L<l<=L'} c(l) l^-rho over (X, Xy]; product
    blocks are chi(rho) (sum mu m^-rho)(sum lambda n^-(1-rho)) over the
    dyadic (m, n) grid, y = gamma / (2 pi).
    """
    if isinstance(rho, ZeroRecord):
        s = complex(rho.beta, rho.gamma)
    else:
        s = complex(rho)
    gamma = s.imag
    if not config.t1 / 2 < gamma <= config.t1:
        raise DomainError(
            f"zero ordinate {gamma} outside the window ({config.t1 / 2}, {config.t1}]"
        )
    y = gamma / TWO_PI
    x = config.x
    table = lf.table
    c = conv_coeffs(table, config, y)

    out: list[tuple[DyadicBlock, complex]] = []
    for blk in dyadic_blocks(x, x * y):
        acc = KahanSum(0.0j)
        for l in _ints_in(blk.lo, blk.hi):
            if l < len(c) and c[l] != 0.0:
                acc.add(c[l] * cmath.exp(-s * math.log(l)))
        out.append((blk, acc.value))

    chi = chi_f(s, lf.weight)
    m_blocks = _blocks_from_one(x)
    n_blocks = _blocks_from_one(y)
    for mb in m_blocks:
        macc = KahanSum(0.0j)
        for m in _ints_in(mb.lo, mb.hi):
            macc.add(table.mu[m] * cmath.exp(-s * math.log(m)))
        for nb in n_blocks:
            nacc = KahanSum(0.0j)
            for n in _ints_in(nb.lo, nb.hi):
                nacc.add(table.lam[n] * cmath.exp(-(1.0 - s) * math.log(n)))
            blk = DyadicBlock(
                mb.lo, mb.hi, PRODUCT_BLOCK, ((mb.lo, mb.hi), (nb.lo, nb.hi))
            )
            out.append((blk, chi * macc.value * nacc.value))
    return out


def reconstruction_residual(
    lf: LFunction, rho: ZeroRecord | complex, config: MollifierConfig
) -> float:
    """|1 + sum_nu S_nu(rho) - afe(rho) M_X(rho)|: the blocks must retile the
    mollified approximate functional equation exactly (float-level check)."""
    s = complex(rho.beta, rho.gamma) if isinstance(rho, ZeroRecord) else complex(rho)
    total = 1.0 + sum(v for _, v in block_sums(lf, rho, config))
    afe = lf.afe_eval(s).value
    mx = mollifier_eval(lf.table, s, config)
    return abs(total - afe * mx)


def select_spaced_zeros(
    zeros: list[ZeroRecord], config: MollifierConfig
) -> list[ZeroRecord]:
    """Subset with pairwise ordinate gaps >= 1, by the unit-interval/parity
    construction (n0-th zero of every second unit interval, the (n0, parity)
    pair chosen to maximize the subset)."""
    return _select_spaced(zeros, config)[0]


def select_spaced_report(
    zeros: list[ZeroRecord], config: MollifierConfig
) -> tuple[list[ZeroRecord], dict]:
    return _select_spaced(zeros, config)


def _select_spaced(zeros, config):
    zs = sorted(zeros, key=lambda r: r.gamma)
    for r in zs:
        if not config.t1 / 2 < r.gamma <= config.t1:
            raise DomainError(
                f"zero {r.gamma} outside ({config.t1 / 2}, {config.t1}]"
            )
    base = config.t1 / 2
    buckets: dict[int, list[ZeroRecord]] = {}
    for r in zs:
        m = int(math.floor(r.gamma - base))
        buckets.setdefault(m, []).append(r)
    max_count = max((len(v) for v in buckets.values()), default=0)
    report = {
        "input_size": len(zs),
        "max_per_interval": max_count,
        "already_spaced": False,
        "n0": None,
        "j0": None,
        "c_reported": None,
    }
    if len(zs) <= 1:
        report["already_spaced"] = True
        report["c_reported"] = 2
        return list(zs), report
    if all(b.gamma - a.gamma >= 1.0 for a, b in zip(zs[:-1], zs[1:])):
        # input already satisfies the spacing: both parity classes together
        report["already_spaced"] = True
        report["c_reported"] = 2
        return list(zs), report
    best: list[ZeroRecord] = []
    best_key = None
    for n0 in range(1, max_count + 1):
        for j0 in (0, 1):
            sel = [
                buckets[m][n0 - 1]
                for m in sorted(buckets)
                if m % 2 == j0 and len(buckets[m]) >= n0
            ]
            if len(sel) > len(best):
                best = sel
                best_key = (n0, j0)
    report["n0"], report["j0"] = best_key
    report["c_reported"] = max_count
    return best, report


def power_coeffs(
    c, lo: float, hi: float, alpha: int
) -> np.ndarray:
    """A_alpha(l) = sum_{l = l_1 ... l_alpha, lo < l_i <= hi} c(l_1) ... c(l_alpha).

    Repeated restricted Dirichlet convolution; the result is indexed up to
    floor(hi)^alpha. |A_alpha(l)| <= d_{4 alpha}(l) when |c| <= d_4.
    """
    if alpha < 1 or int(alpha) != alpha:
        raise UsageError(f"alpha must be a positive integer, got {alpha}")
    top = int(math.floor(hi))
    if top < 1:
        raise DomainError(f"empty factor range ({lo}, {hi}]")
    size = top**alpha
    if size > 20_000_000:
        raise UsageError(
            f"power-coefficient range floor(hi)^alpha = {size} too large"
        )
    if len(c) <= top:
        raise DomainError(f"coefficient table covers l <= {len(c) - 1}, need {top}")
    factors = list(_ints_in(lo, hi))
    base = np.zeros(top + 1)
    for l in factors:
        base[l] = c[l]
    acc = base
    cur_top = top
    for _ in range(alpha - 1):
        new_top = cur_top * top
        nxt = np.zeros(new_top + 1)
        for l in factors:
            cl = c[l]
            if cl == 0.0:
                continue
            keep = min(cur_top, new_top // l)
            nxt[l :: l][:keep] += cl * acc[1 : keep + 1]
        acc = nxt
        cur_top = new_top
    return acc


def density_exponent(sigma: float) -> float:
    """Zero-density exponent e(sigma): 4(1-s)/(3-2s) up to 3/4, 2(1-s)/s after."""
    if not 0.5 - 1e-9 <= sigma <= 1.0 + 1e-9:
        raise DomainError(f"exponent defined on [1/2, 1], got {sigma}")
    sigma = min(max(sigma, 0.5), 1.0)
    if sigma <= 0.75:
        return 4.0 * (1.0 - sigma) / (3.0 - 2.0 * sigma)
    return 2.0 * (1.0 - sigma) / sigma


def density_report(lf: LFunction, sigmas: list[float], t: float) -> list[dict]:
    """Rows (sigma, N(sigma, T), e(sigma), T^e(sigma), consistent).

    sigma = 1 is zero-free (edge of the strip), counted as 0 directly.
    """
    if t > 100 + 1e-9:
        raise DomainError(f"desk-scale report capped at T = 100, got {t}")
    rows = []
    for sigma in sigmas:
        e = density_exponent(sigma)
        if sigma >= 1.0 - 1e-12:
            count, residual = 0, 0.0
        else:
            rc = count_zeros_rect(lf, sigma, 0.0, t)
            count, residual = rc.count, rc.winding_residual
        bound = t**e
        rows.append(
            {
                "sigma": sigma,
                "count": count,
                "exponent": e,
                "bound": bound,
                "consistent": count <= bound,
                "winding_residual": residual,
            }
        )
    return rows


def mollifier_survey(
    lf: LFunction,
    config: MollifierConfig,
    zeros: list[ZeroRecord] | None = None,
    step: float = 0.25,
) -> dict:
    """Per-zero block-sum survey over the window (t1/2, t1].

    For every zero: the block count D, sum_nu |S_nu|, its margin over 1/2,
    and the reconstruction residual |1 + sum S_nu - L(rho) M_X(rho)| with
    its bound measured_afe_error * |M_X(rho)| (L(rho) from the exact
    evaluator; at a true zero L M_X = 0, so the residual is the block
    decomposition's AFE error scaled by the mollifier).
    """
    if zeros is None:
        zeros = scan_zeros(lf, config.t1 / 2, config.t1, step)
    per_zero = []
    d_max = 0
    for rec in zeros:
        s = complex(rec.beta, rec.gamma)
        blocks = block_sums(lf, rec, config)
        d = len(blocks)
        d_max = max(d_max, d)
        total = 1.0 + sum(v for _, v in blocks)
        sum_abs = sum(abs(v) for _, v in blocks)
        mx = mollifier_eval(lf.table, s, config)
        exact = lf.exact_eval(s, tol=1e-9).value
        afe = lf.afe_eval(s).value
        measured_afe_err = abs(afe - exact)
        residual = abs(total - exact * mx)
        bound = measured_afe_err * abs(mx) * (1.0 + 1e-9) + 1e-10
        per_zero.append(
            {
                "gamma": rec.gamma,
                "d_blocks": d,
                "sum_abs_blocks": sum_abs,
                "margin": sum_abs - 0.5,
                "reconstruction_residual": residual,
                "bound": bound,
                "within_bound": residual <= bound,
                "abs_mollifier": abs(mx),
                "measured_afe_error": measured_afe_err,
            }
        )
    log_t1_sq = math.log(config.t1) ** 2
    return {
        "t1": config.t1,
        "delta": config.delta,
        "x": config.x,
        "zero_count": len(zeros),
        "d_max": d_max,
        "d_over_log2": d_max / log_t1_sq if log_t1_sq > 0 else float("nan"),
        "per_zero": per_zero,
    }


def sequence_to_csv(values, column: str) -> str:
    """CSV `l,<column>` for a coefficient sequence indexed from 1."""
    lines = [f"l,{column}"]
    for l in range(1, len(values)):
        lines.append(f"{l},{values[l]:.15g}")
    return "\n".join(lines) + "\n"


def build_density_report(
    lf: LFunction,
    config: MollifierConfig,
    sigmas: list[float],
    t: float,
    step: float = 0.25,
) -> dict:
    """Full JSON-ready report: config, per-zero margins, spaced-subset
    membership, and the density-exponent table."""
    zeros = scan_zeros(lf, config.t1 / 2, config.t1, step)
    survey = mollifier_survey(lf, config, zeros=zeros)
    selected, sel_report = select_spaced_report(zeros, config)
    sel_gammas = {r.gamma for r in selected}
    members = [
        {"gamma": r.gamma, "selected": r.gamma in sel_gammas} for r in zeros
    ]
    return {
        "schema": 1,
        "weight": lf.weight,
        "config": {"t1": config.t1, "delta": config.delta, "x": config.x},
        "survey": survey,
        "selection": {**sel_report, "members": members},
        "density_table": density_report(lf, sigmas, t),
    }
