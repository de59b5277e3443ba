"""Exact integer power-series arithmetic for q-expansions.

Series are plain Python lists of ints indexed by the q-power. Truncated
products are computed exactly by Kronecker substitution: coefficients are
packed into fixed-width slots of one huge integer so that a single GMP
multiplication performs the whole convolution. Signed series are split into
positive and negative parts; the three-product identity

    a*b = (U + V) - (W - U - V),   U = a+*b+,  V = a-*b-,  W = (a+ + a-)(b+ + b-)

keeps every packed slot nonnegative, so unpacking needs no borrow handling.
"""

from __future__ import annotations

import gmpy2


def _split(coeffs: list[int]) -> tuple[list[int], list[int]]:
    pos = [c if c > 0 else 0 for c in coeffs]
    neg = [-c if c < 0 else 0 for c in coeffs]
    return pos, neg


def _pack(coeffs: list[int], width: int) -> gmpy2.mpz:
    raw = b"".join(c.to_bytes(width, "little") for c in coeffs)
    return gmpy2.mpz(int.from_bytes(raw, "little"))


def _unpack(value: gmpy2.mpz, width: int, count: int) -> list[int]:
    v = int(value)
    nbytes = max((v.bit_length() + 7) // 8, width * count)
    raw = v.to_bytes(nbytes, "little")
    return [
        int.from_bytes(raw[i * width : (i + 1) * width], "little")
        for i in range(count)
    ]


def series_mul(a: list[int], b: list[int], n_terms: int) -> list[int]:
    """Exact product of two integer series, truncated to `n_terms` coefficients."""
    a = a[:n_terms]
    b = b[:n_terms]
    if not a or not b:
        return [0] * n_terms
    max_a = max(abs(c) for c in a)
    max_b = max(abs(c) for c in b)
    if max_a == 0 or max_b == 0:
        return [0] * n_terms
    # Slot width: every convolution sum of |a_i||b_j| must fit.
    bits = max_a.bit_length() + max_b.bit_length() + min(len(a), len(b)).bit_length() + 1
    width = (bits + 7) // 8

    ap, an = _split(a)
    bp, bn = _split(b)
    pa = _pack(ap, width)
    na = _pack(an, width)
    pb = _pack(bp, width)
    nb = _pack(bn, width)

    u = pa * pb
    v = na * nb
    w = (pa + na) * (pb + nb)

    pos = _unpack(u + v, width, n_terms)
    neg = _unpack(w - u - v, width, n_terms)
    return [p - q for p, q in zip(pos, neg)]


def eta_series(n_terms: int) -> list[int]:
    """Coefficients of prod_{m>=1}(1 - q^m) by the pentagonal-number expansion."""
    out = [0] * n_terms
    if n_terms > 0:
        out[0] = 1
    m = 1
    while True:
        g1 = m * (3 * m - 1) // 2
        g2 = m * (3 * m + 1) // 2
        if g1 >= n_terms and g2 >= n_terms:
            break
        s = -1 if m % 2 else 1
        if g1 < n_terms:
            out[g1] = s
        if g2 < n_terms:
            out[g2] = s
        m += 1
    return out


def eta24_series(n_terms: int) -> list[int]:
    """Coefficients of prod(1 - q^m)^24, by repeated squaring of the eta series."""
    p1 = eta_series(n_terms)
    p2 = series_mul(p1, p1, n_terms)
    p4 = series_mul(p2, p2, n_terms)
    p8 = series_mul(p4, p4, n_terms)
    p16 = series_mul(p8, p8, n_terms)
    return series_mul(p16, p8, n_terms)
