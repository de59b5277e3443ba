import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cuspzeros import coefficients as co
from cuspzeros.errors import TableTooSmallError, UnsupportedWeightError, UsageError


def naive_eta_power(n_terms: int, power: int, m_cap: int | None = None) -> list[int]:
    """Schoolbook prod_{m<=cap}(1-q^m)^power, truncated; independent oracle."""
    cap = m_cap if m_cap is not None else n_terms
    acc = [0] * n_terms
    acc[0] = 1
    for _ in range(power):
        for m in range(1, cap + 1):
            # multiply by (1 - q^m) in place: c[i] -= c[i-m]
            for i in range(n_terms - 1, m - 1, -1):
                acc[i] -= acc[i - m]
    return acc


def naive_tau(n_max: int) -> list[int]:
    p24 = naive_eta_power(n_max, 24)
    out = [0] * (n_max + 1)
    out[1:] = p24[: n_max]
    return out


class TestTau:
    def test_normalization(self):
        assert co.tau_series(1) == [0, 1]

    def test_small_values_against_truncated_product(self):
        # product over m <= 16 truncated at q^8 determines tau(n), n <= 9
        p24 = naive_eta_power(9, 24, m_cap=16)
        assert p24[1] == -24  # tau(2)
        assert p24[5] == -6048  # tau(6)
        tau = co.tau_series(9)
        assert tau[2] == -24
        assert tau[6] == -6048
        assert tau[6] == tau[2] * tau[3]

    def test_against_naive_oracle(self):
        n = 300
        assert co.tau_series(n) == naive_tau(n)

    def test_bad_n_max(self):
        with pytest.raises(UsageError):
            co.tau_series(0)
        with pytest.raises(UsageError):
            co.tau_series(co.MAX_N + 1)


class TestEigenforms:
    def test_weight_12_is_tau(self):
        assert co.eigenform_coeffs(co.EigenformSpec(12), 10) == co.tau_series(10)

    def test_weight_16_second_coefficient(self):
        # Delta * E4 truncated at q^3: (q - 24 q^2)(1 + 240 q) has 216 q^2
        a = co.eigenform_coeffs(co.EigenformSpec(16), 2)
        assert a[2] == 216

    def test_weight_16_hecke_multiplicativity(self):
        a = co.eigenform_coeffs(co.EigenformSpec(16), 50)
        assert a[2] * a[3] == a[6]
        assert a[2] * a[5] == a[10]
        assert a[3] * a[5] == a[15]

    def test_unsupported_weight(self):
        with pytest.raises(UnsupportedWeightError):
            co.EigenformSpec(14)
        with pytest.raises(UnsupportedWeightError):
            co.build_table(13, 10)

    @pytest.mark.parametrize("weight", co.SUPPORTED_WEIGHTS)
    def test_hecke_recursion_exact(self, weight):
        # a(p) a(p^r) = a(p^(r+1)) + p^(k-1) a(p^(r-1)), exact integers
        table = co.build_table(weight, 2500)
        a = table.a
        for p in (2, 3, 5, 7):
            for r in range(1, 4):
                if p ** (r + 1) > table.n_max:
                    continue
                lhs = a[p] * a[p**r]
                rhs = a[p ** (r + 1)] + p ** (weight - 1) * a[p ** (r - 1)]
                assert lhs == rhs

    def test_memoized(self):
        assert co.build_table(12, 500) is co.build_table(12, 500)


class TestNormalize:
    def test_lambda_one(self):
        t = co.build_table(12, 100)
        assert t.lam[1] == 1.0

    def test_lambda_two_frozen(self):
        # -24 * 2^(-11/2) = -3 sqrt(2) / 8, evaluated at 30+ digits and frozen
        t = co.build_table(12, 100)
        assert abs(t.lam[2] - (-0.5303300858899106433)) < 5e-16

    def test_deligne_bound_desk(self):
        t = co.build_table(12, 10_000)
        d = co.divisor_counts(10_000, 2)
        assert np.all(np.abs(t.lam[1:]) <= d[1:] + 1e-12)

    def test_normalize_matches_table(self):
        t = co.build_table(16, 200)
        assert np.array_equal(co.normalize(t), t.lam)


class TestMu:
    def test_small_values(self):
        t = co.build_table(12, 100)
        assert t.mu[1] == 1.0
        assert t.mu[8] == 0.0  # p^3
        assert t.mu[4] == 1.0  # p^2
        assert t.mu[2] == -t.lam[2]

    def test_against_forward_substitution_inverse(self):
        # b(1) = 1, b(n) = -sum_{d | n, d > 1} lambda(d) b(n/d)
        t = co.build_table(12, 200)
        b = np.zeros(201)
        b[1] = 1.0
        for n in range(2, 201):
            s = 0.0
            for d in range(2, n + 1):
                if n % d == 0:
                    s += t.lam[d] * b[n // d]
            b[n] = -s
        assert np.max(np.abs(t.mu[1:] - b[1:])) < 1e-12
        assert abs(t.mu[12] - t.mu[4] * t.mu[3]) < 1e-14
        assert abs(t.mu[12] - (-t.lam[3])) < 1e-14

    def test_dirichlet_inverse_identity(self):
        n_max = 2000
        t = co.build_table(12, n_max)
        conv = np.zeros(n_max + 1)
        for d in range(1, n_max + 1):
            keep = n_max // d
            conv[d :: d][:keep] += t.lam[d] * t.mu[1 : keep + 1]
        assert abs(conv[1] - 1.0) < 1e-10
        assert np.max(np.abs(conv[2:])) < 1e-10

    def test_mu_bounded_by_divisor_count(self):
        t = co.build_table(12, 5000)
        d = co.divisor_counts(5000, 2)
        assert np.all(np.abs(t.mu[1:]) <= d[1:] + 1e-12)


class TestDivisorCounts:
    def test_small(self):
        d = co.divisor_counts(20, 2)
        assert d[1] == 1
        assert d[12] == 6

    def test_d4_by_enumeration(self):
        # count ordered factorizations n = l1 l2 l3 l4
        def d4_brute(n):
            total = 0
            for a in range(1, n + 1):
                if n % a:
                    continue
                for b in range(1, n // a + 1):
                    if (n // a) % b:
                        continue
                    for c in range(1, n // (a * b) + 1):
                        if (n // (a * b)) % c == 0:
                            total += 1
            return total

        d4 = co.divisor_counts(50, 4)
        assert d4[2] == 4
        for n in range(1, 51):
            assert d4[n] == d4_brute(n)

    def test_bad_order(self):
        with pytest.raises(UsageError):
            co.divisor_counts(10, 3)


@settings(max_examples=60, derandomize=True, deadline=None)
@given(
    m=st.integers(min_value=1, max_value=70),
    n=st.integers(min_value=1, max_value=70),
)
def test_lambda_multiplicative_on_coprime_pairs(m, n):
    if math.gcd(m, n) != 1:
        return
    t = co.build_table(12, 4900)
    lhs = t.lam[m * n]
    rhs = t.lam[m] * t.lam[n]
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))
    # and exactly over the integers
    assert t.a[m * n] == t.a[m] * t.a[n]


class TestTableContracts:
    def test_immutable_arrays(self):
        t = co.build_table(12, 50)
        with pytest.raises((ValueError, RuntimeError)):
            t.lam[3] = 0.0

    def test_require(self):
        t = co.build_table(12, 50)
        with pytest.raises(TableTooSmallError):
            t.require(51)

    def test_csv_export(self):
        t = co.build_table(12, 3)
        lines = co.table_to_csv(t).strip().splitlines()
        assert lines[0] == "n,a,lambda,mu"
        assert lines[2].startswith("2,-24,")
        assert len(lines) == 4
