"""Zero location on the critical line and zero counting in rectangles.

Line zeros come from sign changes of the rotated real function Z refined by
bisection; rectangle counts come from the argument principle, integrating
the phase increment of L around the rectangle with adaptive panels.

Contour evaluation policy (every edge sits where some evaluator is strong):
the right half of the strip and beyond (Re s >= 0.2) uses the exact series
for small |t| and the approximate functional equation above; Re s < 0.2 is
mapped through the functional equation L(s) = chi_f(s) L(1-s). For
sigma0 <= 1/2 the rectangle [-0.3, 1.3] counts the full strip (the zeros
are symmetric about Re s = 1/2, and below the requested sigma0 the strip is
zero-free at desk scale); for sigma0 > 1/2 the right edge sits at 1.5.
"""

from __future__ import annotations

import cmath
import io
import math
from dataclasses import dataclass

from .errors import ContourError, DomainError, ZeroDiscrepancyError
from .lfunction import TWO_PI, Z_EXACT_T_MAX, LFunction
from .special_functions import chi_f, theta_f

SIGN_CHANGE = "sign_change"
CONTOUR = "contour"

#: |t| below which contour evaluation uses the exact series (binary64 range).
_T_EXACT_EDGE = 13.0

#: bisection target half-width for sign-change zeros
_ZERO_RADIUS = 1e-6


@dataclass(frozen=True)
class ZeroRecord:
    """A located zero rho = beta + i gamma with localization radius."""

    gamma: float
    beta: float
    radius: float
    method: str


@dataclass(frozen=True)
class RectCount:
    """Argument-principle count over [t0, t1] with the winding residual
    (distance of the total phase increment from the nearest multiple of
    2 pi, in radians)."""

    sigma0: float
    t0: float
    t1: float
    count: int
    winding_residual: float


def max_scan_step(t1: float) -> float:
    """Largest permitted scan step: below the mean zero gap at height t1."""
    return math.pi / math.log(max(t1, 10.0) / TWO_PI)


def nf_main_term(t: float) -> float:
    """Smooth main term of the zero-counting function: (T/pi) log(T/(2 pi e))."""
    if t <= 0:
        raise DomainError(f"main term needs T > 0, got {t}")
    return (t / math.pi) * math.log(t / (TWO_PI * math.e))


# --------------------------------------------------------------------------
# line scan


def _z_exact(lf: LFunction, t: float) -> float:
    """Rotated line value forced through the exact evaluator (slow path)."""
    r = lf.exact_eval(complex(0.5, t), tol=1e-9)
    rot = cmath.exp(1j * theta_f(t, lf.weight)) * r.value
    if lf.weight % 4 == 2:
        rot *= 1j
    return rot.real


def _afe_jumps_between(ta: float, tb: float) -> list[float]:
    """Discontinuities of the line evaluator inside (ta, tb): AFE cutoffs at
    t = 2 pi m plus the exact/AFE switch height."""
    lo = int(math.floor(ta / TWO_PI)) + 1
    hi = int(math.floor(tb / TWO_PI))
    jumps = [TWO_PI * m for m in range(lo, hi + 1)]
    if ta < Z_EXACT_T_MAX < tb:
        jumps.append(Z_EXACT_T_MAX)
    return sorted(jumps)


def _bisect(zfun, ta, tb, za, zb) -> tuple[float, float]:
    while (tb - ta) / 2.0 > _ZERO_RADIUS:
        tm = 0.5 * (ta + tb)
        zm = zfun(tm)
        if zm == 0.0:
            return tm, (tb - ta) / 4.0
        if (za < 0) != (zm < 0):
            tb, zb = tm, zm
        else:
            ta, za = tm, zm
    return 0.5 * (ta + tb), (tb - ta) / 2.0


def _refine_bracket(lf: LFunction, ta, tb, za, zb) -> ZeroRecord | None:
    """Bisect a sign-change bracket; brackets straddling an AFE jump are
    re-examined with the exact evaluator (a jump can fake or hide a zero)."""
    zfun = lf.z_function
    if tb > Z_EXACT_T_MAX:
        jumps = _afe_jumps_between(ta, tb)
        if jumps:
            eps = 1e-9
            segs = []
            lo = ta
            for j in jumps:
                segs.append((lo, j - eps))
                lo = j + eps
            segs.append((lo, tb))
            for (a, b) in segs:
                va, vb = zfun(a), zfun(b)
                if (va < 0) != (vb < 0):
                    t, r = _bisect(zfun, a, b, va, vb)
                    return ZeroRecord(t, 0.5, r, SIGN_CHANGE)
            # sign change only across the cutoff jump: decide with the
            # exact series (slow, rare)
            va, vb = _z_exact(lf, ta), _z_exact(lf, tb)
            if (va < 0) == (vb < 0):
                return None
            t, r = _bisect(lambda u: _z_exact(lf, u), ta, tb, va, vb)
            return ZeroRecord(t, 0.5, r, SIGN_CHANGE)
    t, r = _bisect(zfun, ta, tb, za, zb)
    return ZeroRecord(t, 0.5, r, SIGN_CHANGE)


def scan_zeros(lf: LFunction, t0: float, t1: float, step: float) -> list[ZeroRecord]:
    """All sign-change zeros of Z on (t0, t1], bisected to radius <= 1e-6.

    The step must stay below the mean zero gap pi / log(t1 / 2 pi).
    """
    if not 0 <= t0 < t1:
        raise DomainError(f"need 0 <= t0 < t1, got ({t0}, {t1})")
    cap = max_scan_step(t1)
    if step <= 0 or step > cap:
        raise DomainError(
            f"step {step} above the mean-gap cap {cap:.4f} for t1 = {t1}; "
            "zeros could be skipped"
        )
    start = t0
    if t0 == 0.0 and lf.weight % 4 == 2:
        start = 0.01  # central zero at t = 0 is excluded by definition
    ts = [start]
    while ts[-1] < t1:
        ts.append(min(ts[-1] + step, t1))
    zs = [lf.z_function(t) for t in ts]
    out: list[ZeroRecord] = []
    for i in range(len(ts) - 1):
        za, zb = zs[i], zs[i + 1]
        if za == 0.0:
            continue  # grid point exactly on a zero is handled by neighbors
        if zb == 0.0:
            out.append(ZeroRecord(ts[i + 1], 0.5, _ZERO_RADIUS, SIGN_CHANGE))
            continue
        if (za < 0) != (zb < 0):
            rec = _refine_bracket(lf, ts[i], ts[i + 1], za, zb)
            if rec is not None and t0 < rec.gamma <= t1:
                out.append(rec)
    return sorted(out, key=lambda r: r.gamma)


# --------------------------------------------------------------------------
# rectangle counts


#: |value| below which a vertical-edge AFE sample is recomputed exactly
#: (the AFE error must never flip the curve around the origin)
_EXACT_UPGRADE_ABS = 0.4


def _edge_eval(lf: LFunction, s: complex) -> complex:
    """Vertical-edge evaluator: exact series at small |t| or wherever the
    value dips; AFE elsewhere; functional-equation mapping left of
    Re s = 0.2."""
    if s.real < 0.2:
        mirrored = complex(1.0 - s.real, s.imag)
        return chi_f(s, lf.weight) * _edge_eval(lf, mirrored).conjugate()
    t = abs(s.imag)
    if t <= _T_EXACT_EDGE:
        return lf.exact_eval(s, tol=1e-8).value
    v = lf.afe_eval(s).value
    if abs(v) < _EXACT_UPGRADE_ABS:
        v = lf.exact_eval(s, tol=1e-8).value
    return v


def _edge_eval_exact(lf: LFunction, s: complex) -> complex:
    """Horizontal-edge evaluator: always the exact series (the edges are
    short, and they are the ones that can pass arbitrarily close to zeros)."""
    return lf.exact_eval(s, tol=1e-8).value


def _walk_edge(lf, p0: complex, p1: complex, coarse: int, max_dphi: float,
               evaluator=None) -> tuple[float, complex, complex]:
    """Phase increment of L along the segment p0 -> p1, adaptive panels.

    Returns (dphi_total, value at p0, value at p1) so the caller can close
    the loop across evaluator switches at the corners.
    """
    vals = {}
    if evaluator is None:
        evaluator = _edge_eval

    def val(u: float) -> complex:
        v = vals.get(u)
        if v is None:
            v = evaluator(lf, p0 + u * (p1 - p0))
            vals[u] = v
        return v

    total = 0.0
    # seed a coarse grid so oscillation inside one panel is unlikely
    seeds = [i / coarse for i in range(coarse + 1)]
    segments = list(zip(seeds[:-1], seeds[1:]))
    for lo, hi in segments:
        work = [(lo, hi)]
        while work:
            a, b = work.pop()
            va, vb = val(a), val(b)
            if va == 0 or vb == 0:
                raise ContourError(
                    f"contour passes through a zero near {p0 + a * (p1 - p0)}"
                )
            dphi = cmath.phase(vb / va)
            if abs(dphi) < max_dphi:
                total += dphi
                continue
            if (b - a) < 1e-7:
                raise ContourError(
                    f"argument jump {dphi:.3f} persists on a 1e-7 panel near "
                    f"{p0 + a * (p1 - p0)}; contour too close to a zero"
                )
            m = 0.5 * (a + b)
            work.append((m, b))
            work.append((a, m))
    return total, val(0.0), val(1.0)


def _min_abs_on_edge(lf, p0: complex, p1: complex, n: int = 33) -> float:
    return min(
        abs(_edge_eval_exact(lf, p0 + (i / (n - 1)) * (p1 - p0))) for i in range(n)
    )


def count_zeros_rect(lf: LFunction, sigma0: float, t0: float, t1: float) -> RectCount:
    """Winding-number count of zeros with t0 < Im rho <= t1.

    For sigma0 <= 1/2 this is the full-strip count (rectangle [-0.3, 1.3]);
    for sigma0 > 1/2 the rectangle is [sigma0, 1.5]. Horizontal edges are
    nudged by at most 0.01 when |L| < 1e-6 on them (e.g. the central zero of
    the weight = 2 mod 4 forms at t = 0).
    """
    if not 0 <= sigma0 < 1:
        raise DomainError(f"need 0 <= sigma0 < 1, got {sigma0}")
    if t1 < t0:
        raise DomainError(f"need t0 <= t1, got ({t0}, {t1})")
    if t1 == t0:
        return RectCount(sigma0, t0, t1, 0, 0.0)
    if sigma0 <= 0.5:
        lo_s, hi_s = -0.3, 1.3
    else:
        lo_s, hi_s = sigma0, 1.5

    def nudge(t_edge: float) -> float:
        for bump in (0.0, 0.005, 0.01):
            cand = t_edge + bump
            if _min_abs_on_edge(lf, complex(lo_s, cand), complex(hi_s, cand)) > 1e-6:
                return cand
        raise ContourError(
            f"|L| < 1e-6 on the t = {t_edge} edge even after nudging by 0.01"
        )

    b0, b1 = nudge(t0), nudge(t1)

    corners = [
        complex(lo_s, b0),
        complex(hi_s, b0),
        complex(hi_s, b1),
        complex(lo_s, b1),
        complex(lo_s, b0),
    ]
    for max_dphi, fine in ((math.pi / 2, 1.0), (math.pi / 4, 2.0)):
        total = 0.0
        end_vals = []
        for p0, p1 in zip(corners[:-1], corners[1:]):
            horizontal = p0.imag == p1.imag
            seg_len = abs(p1 - p0)
            coarse = max(4, int(seg_len / (0.2 / fine)) + 1)
            dphi, v0, v1 = _walk_edge(
                lf, p0, p1, coarse, max_dphi,
                evaluator=_edge_eval_exact if horizontal else _edge_eval,
            )
            total += dphi
            end_vals.append((v0, v1))
        # close the loop: evaluator switches at the corners leave small value
        # mismatches whose connector chords belong to the winding sum
        for i in range(4):
            v_out = end_vals[i][1]
            v_in = end_vals[(i + 1) % 4][0]
            total += cmath.phase(v_in / v_out)
        winding = total / TWO_PI
        count = round(winding)
        residual = abs(total - TWO_PI * count)
        if residual <= 0.1:
            if count < 0:
                raise ContourError(f"negative winding {count}: evaluator failure")
            return RectCount(sigma0, t0, t1, count, residual)
    raise ContourError(
        f"winding residual {residual:.3f} > 0.1 over [{t0}, {t1}]; "
        "contour needs finer panels than the refinement cap"
    )


def short_interval_count(lf: LFunction, sigma: float, t: float) -> int:
    """N(sigma, T+1) - N(sigma, T) via two rectangle counts."""
    if t < 2:
        raise DomainError(f"short-interval count needs T >= 2, got {t}")
    hi = count_zeros_rect(lf, sigma, 0.0, t + 1.0).count
    lo = count_zeros_rect(lf, sigma, 0.0, t).count
    return hi - lo


def verify_line_vs_rect(
    lf: LFunction, t0: float, t1: float, step: float = 0.25
) -> dict:
    """Cross-check the sign-change inventory against the contour count.

    Raises ZeroDiscrepancyError on mismatch (a sign-change miss paired with
    a contour surplus is reported, never silently repaired).
    """
    records = scan_zeros(lf, t0, t1, step)
    rect = count_zeros_rect(lf, 0.0, t0, t1)
    if len(records) != rect.count:
        raise ZeroDiscrepancyError(
            f"scan found {len(records)} zeros on ({t0}, {t1}] but the contour "
            f"counts {rect.count} (residual {rect.winding_residual:.3g})"
        )
    return {
        "t0": t0,
        "t1": t1,
        "scan_count": len(records),
        "contour_count": rect.count,
        "winding_residual": rect.winding_residual,
        "records": records,
    }


def zeros_to_csv(records: list[ZeroRecord]) -> str:
    buf = io.StringIO()
    buf.write("gamma,beta,radius,method\n")
    for r in records:
        buf.write(f"{r.gamma:.15g},{r.beta:.15g},{r.radius:.3g},{r.method}\n")
    return buf.getvalue()
