import cmath
import math

import gmpy2
import mpmath as mp
import numpy as np
import pytest
import scipy.integrate
import scipy.special

from cuspzeros import special_functions as sf
from cuspzeros.errors import DomainError, PhaseStepError


def stirling_shift_oracle(z: complex, shifts: int = 20) -> complex:
    """Independent log-gamma: Stirling series after `shifts` recurrence steps."""
    zs = z + shifts
    res = (
        (zs - 0.5) * cmath.log(zs)
        - zs
        + 0.5 * math.log(2 * math.pi)
    )
    # Bernoulli terms B_2 .. B_16
    bern = [
        (2, 1 / 6),
        (4, -1 / 30),
        (6, 1 / 42),
        (8, -1 / 30),
        (10, 5 / 66),
        (12, -691 / 2730),
        (14, 7 / 6),
        (16, -3617 / 510),
    ]
    for (k, b) in bern:
        res += b / (k * (k - 1) * zs ** (k - 1))
    for j in range(shifts):
        res -= cmath.log(z + j)
    return res


class TestLogGamma:
    def test_gamma_one(self):
        assert abs(sf.log_gamma(1.0)) < 1e-14

    def test_gamma_half(self):
        assert abs(sf.log_gamma(0.5) - math.log(math.sqrt(math.pi))) < 1e-14

    def test_stirling_shift_oracle(self):
        z = complex(6.0, 30.0)
        assert abs(sf.log_gamma(z) - stirling_shift_oracle(z)) < 1e-12

    def test_poles(self):
        for z in (0.0, -1.0, -7.0):
            with pytest.raises(DomainError):
                sf.log_gamma(z)

    def test_recurrence(self):
        rng = np.random.default_rng(42)
        for _ in range(100):
            z = complex(rng.uniform(0.5, 50.0), rng.uniform(-50.0, 50.0))
            lhs = sf.log_gamma(z + 1.0)
            rhs = sf.log_gamma(z) + cmath.log(z)
            assert abs(lhs - rhs) < 1e-12

    def test_against_scipy_grid(self):
        rng = np.random.default_rng(7)
        worst = 0.0
        for _ in range(300):
            z = complex(rng.uniform(0.5, 900.0), rng.uniform(-900.0, 900.0))
            if abs(z) > 1e3:
                continue
            worst = max(worst, abs(sf.log_gamma(z) - scipy.special.loggamma(z)))
        assert worst < 2e-12

    def test_left_halfplane(self):
        for z in (complex(-3.2, 4.0), complex(-0.4, -17.0), -4.3, 0.2):
            ref = complex(mp.loggamma(mp.mpc(z)))
            assert abs(sf.log_gamma(z) - ref) < 1e-12


class TestChi:
    def test_central_value(self):
        assert abs(sf.chi_f(0.5, 12) - 1.0) < 1e-14

    @pytest.mark.parametrize("t", [5.0, 20.0, 100.0])
    def test_unit_modulus_on_line(self, t):
        assert abs(abs(sf.chi_f(complex(0.5, t), 12)) - 1.0) < 1e-10

    def test_stirling_modulus(self):
        # |chi(sigma + it)| tracks (t / 2 pi)^(1 - 2 sigma) within 5/t
        s = complex(0.7, 100.0)
        target = (100.0 / (2 * math.pi)) ** (1 - 2 * 0.7)
        rel = abs(abs(sf.chi_f(s, 12)) - target) / target
        assert rel <= 5.0 / 100.0

    def test_reciprocal_identity(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            s = complex(rng.uniform(0.0, 1.0), rng.uniform(-200.0, 200.0))
            assert abs(sf.chi_f(s, 12) * sf.chi_f(1 - s, 12) - 1.0) < 1e-9

    def test_conjugate_symmetry(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            s = complex(rng.uniform(0.0, 1.0), rng.uniform(-100.0, 100.0))
            lhs = sf.chi_f(s.conjugate(), 16)
            rhs = sf.chi_f(s, 16).conjugate()
            assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(rhs))

    def test_odd_weight_rejected(self):
        with pytest.raises(DomainError):
            sf.chi_f(0.5, 13)


class TestTheta:
    def test_zero_at_origin(self):
        assert sf.theta_f(0.0, 12) == 0.0

    def test_continuity(self):
        prev = sf.theta_f(0.0, 12)
        t = 0.1
        while t <= 100.0:
            cur = sf.theta_f(t, 12)
            assert abs(cur - prev) <= 2.0
            prev = cur
            t += 0.1

    def test_rotation_inverts_chi(self):
        # e^{2 i theta} chi~(1/2 + it) = 1; chi~ = chi for weights 0 mod 4
        for t in (5.0, 20.0, 100.0):
            th = sf.theta_f(t, 12)
            val = cmath.exp(2j * th) * sf.chi_f(complex(0.5, t), 12)
            assert abs(val - 1.0) < 1e-9
        for t in (5.0, 20.0):
            th = sf.theta_f(t, 18)
            val = cmath.exp(2j * th) * (-sf.chi_f(complex(0.5, t), 18))
            assert abs(val - 1.0) < 1e-9

    def test_phase_state_tracking(self):
        state = sf.PhaseState()
        th1 = sf.theta_f(10.0, 12, state)
        assert state.t == 10.0 and state.theta == th1
        th2 = sf.theta_f(10.4, 12, state)
        assert state.last_t == 10.0
        assert abs(th2 - th1) < 2.0

    def test_phase_step_too_large(self):
        state = sf.PhaseState()
        sf.theta_f(10.0, 12, state)
        with pytest.raises(PhaseStepError):
            sf.theta_f(11.0, 12, state)


def quad_upper_gamma(w: complex, x: float) -> complex:
    """Adaptive quadrature of the defining integral along the real ray."""
    top = x + 80.0  # e^-80 tail is far below the tolerance

    def integrand(u, part):
        v = cmath.exp(-u + (w - 1) * cmath.log(u))
        return v.real if part == "re" else v.imag

    re, _ = scipy.integrate.quad(integrand, x, top, args=("re",), limit=800,
                                 epsabs=1e-13, epsrel=1e-13)
    im, _ = scipy.integrate.quad(integrand, x, top, args=("im",), limit=800,
                                 epsabs=1e-13, epsrel=1e-13)
    return complex(re, im)


class TestUpperGamma:
    @pytest.mark.parametrize("x", [0.5, 2.3, 20.0])
    def test_exponential_closed_form(self, x):
        assert abs(sf.upper_gamma(1.0, x) - math.exp(-x)) < 1e-14

    def test_additivity(self):
        w, x = complex(5.5, 3.0), 7.0
        total = sf.upper_gamma(w, x) + sf.lower_gamma(w, x)
        assert abs(total - sf.gamma(w)) < 1e-12

    def test_against_quadrature(self):
        w, x = complex(5.5, 20.0), 12.566
        ours = sf.upper_gamma(w, x)
        ref = quad_upper_gamma(w, x)
        assert abs(ours - ref) < 1e-11

    def test_domain(self):
        with pytest.raises(DomainError):
            sf.upper_gamma(1.0, 0.0)
        with pytest.raises(DomainError):
            sf.lower_gamma(1.0, -2.0)

    def test_high_precision_context(self):
        from cuspzeros.special_functions import HPCtx, _upper_gamma_ctx

        prec = 200
        w, x = complex(6.0, 45.0), 30.0
        with gmpy2.context(precision=prec):
            ctx = HPCtx(prec)
            ours = _upper_gamma_ctx(ctx.mkc(w), ctx.mkr(x), ctx)
            ours_str = (str(ours.real), str(ours.imag))
        with mp.workprec(prec + 10):
            ref = mp.gammainc(mp.mpc(w), a=x, b=mp.inf)
            got = mp.mpc(mp.mpf(ours_str[0]), mp.mpf(ours_str[1]))
            assert abs(got - ref) / abs(ref) < mp.mpf(2) ** (20 - prec)


class TestHighPrecisionLogGamma:
    @pytest.mark.parametrize(
        "prec,z", [(150, 6 + 30j), (300, 12.5 + 199j), (200, 2.0 + 0.7j)]
    )
    def test_against_mpmath(self, prec, z):
        with gmpy2.context(precision=prec):
            ours = sf.log_gamma_hp(gmpy2.mpc(z.real, z.imag), prec)
            ours_str = (str(ours.real), str(ours.imag))
        with mp.workprec(prec + 10):
            ref = mp.loggamma(mp.mpc(z))
            got = mp.mpc(mp.mpf(ours_str[0]), mp.mpf(ours_str[1]))
            assert abs(got - ref) < mp.mpf(2) ** (20 - prec) * abs(ref)
