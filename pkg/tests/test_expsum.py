import cmath
import json
import math
import random

import pytest

from cuspzeros import expsum as ex
from cuspzeros.density import MollifierConfig, conv_coeffs
from cuspzeros.errors import DomainError, UsageError
from cuspzeros.zeros import scan_zeros


class TestPhaseInstances:
    def test_derivative_validation_passes(self):
        ex.validate_derivatives(ex.log_phase(-60.0, 20.0, 40.0))
        ex.validate_derivatives(ex.quadratic_phase(50.0, 55.0, 195.0))

    def test_derivative_validation_catches_errors(self):
        inst = ex.log_phase(-60.0, 20.0, 40.0)
        inst.f1 = lambda x: -60.0 / (2 * math.pi * x) * 1.01  # 1% wrong
        with pytest.raises(UsageError):
            ex.validate_derivatives(inst)


class TestDiscreteMean:
    def test_single_point_unit(self):
        rep = ex.discrete_mean_check([3.7], [1], [1.0])
        assert rep["lhs"] == pytest.approx(1.0)
        assert rep["rhs"] >= rep["lhs"] - 1e-12
        assert rep["passed"]

    def test_unit_spaced_random_signs(self):
        rng = random.Random(17)
        ns = [4, 5, 6]
        coeffs = [rng.choice((-1.0, 1.0)) for _ in ns]
        pts = [float(i) for i in range(10)]
        rep = ex.discrete_mean_check(pts, ns, coeffs)
        assert rep["passed"]
        assert rep["lhs"] <= rep["rhs"]

    def test_monotone_points_required(self):
        with pytest.raises(DomainError):
            ex.discrete_mean_check([0.0, 1.0, 0.5], [2], [1.0])

    def test_pipeline_with_convolution_coefficients(self, lf12):
        # zero ordinates as sample points, mollifier convolution as weights
        cfg = MollifierConfig(100.0, 8)
        zs = scan_zeros(lf12, 50.0, 60.0, 0.25)
        pts = [r.gamma for r in zs]
        c = conv_coeffs(lf12.table, cfg, 60.0 / (2 * math.pi))
        ns = list(range(2, len(c)))
        coeffs = [c[n] for n in ns]
        rep = ex.discrete_mean_check(pts, ns, coeffs)
        assert rep["passed"]


class TestMeanValue:
    def test_zero_coefficients(self):
        rep = ex.mean_value_check(3, 6, [0.0, 0.0, 0.0], 10.0, 18.0)
        assert rep["integral"] == pytest.approx(0.0, abs=1e-15)
        assert rep["passed"]

    def test_closed_form_equals_quadrature(self):
        ns = [4, 5, 6]
        coeffs = [1.0, 1.0, 1.0]
        closed = ex.mean_square_integral(ns, coeffs, 10.0, 18.0)
        quadv = ex._quad_mean_square(ns, coeffs, 10.0, 18.0)
        assert abs(closed - quadv) <= 1e-8 * abs(closed)

    def test_parameter_validation(self):
        with pytest.raises(DomainError):
            ex.mean_value_check(3, 6, [1.0] * 3, 10.0, 25.0)  # X1 > 2X
        with pytest.raises(DomainError):
            ex.mean_value_check(2, 4, [1.0] * 2, 10.0, 18.0)  # N < 3
        with pytest.raises(UsageError):
            ex.mean_value_check(3, 6, [1.0] * 2, 10.0, 18.0)  # wrong length

    def test_monte_carlo_sweep(self):
        rng = random.Random(99)
        worst = 0.0
        for _ in range(100):
            n_lo = rng.randrange(3, 129)
            n_hi = rng.randrange(n_lo + 1, 2 * n_lo + 1)
            x = rng.uniform(4.0, 512.0)
            x1 = rng.uniform(x * 1.01, 2 * x)
            coeffs = [rng.gauss(0, 1) for _ in range(n_hi - n_lo)]
            rep = ex.mean_value_check(n_lo, n_hi, coeffs, x, x1)
            worst = max(worst, rep["ratio"])
            assert rep["passed"]
        assert worst <= ex.MEAN_VALUE_CAP


class TestSumVsIntegral:
    def test_flat_phase(self):
        rep = ex.sum_vs_integral_check(ex.linear_phase(0.0, 0.0, 10.5))
        assert rep["sum"] == pytest.approx(10.0)
        assert rep["integral"].real == pytest.approx(10.5, abs=1e-9)
        assert rep["diff"] <= 1.0 * rep["H"]

    def test_linear_third(self):
        rep = ex.sum_vs_integral_check(ex.linear_phase(1.0 / 3.0, 1.0, 50.0), kappa_cap=2.0)
        assert rep["passed"]

    def test_zero_difference_phase(self):
        # the C_{gamma,gamma1} shape: |f'| = 60/(2 pi x) < 0.48 on (20, 40]
        inst = ex.log_phase(60.0, 20.0, 40.0)
        rep = ex.sum_vs_integral_check(inst, kappa_cap=2.0)
        assert rep["C"] < 1.0
        assert rep["passed"]

    def test_slope_hypothesis_enforced(self):
        with pytest.raises(DomainError):
            ex.sum_vs_integral_check(ex.linear_phase(1.2, 0.0, 10.0))


class TestStationaryPhase:
    def test_quadratic_reference(self):
        rep = ex.stationary_phase_check(ex.quadratic_phase(50.0, 55.0, 195.0), kappa_cap=0.35)
        assert rep["passed"]
        assert rep["saddle_range"] == (2, 3)
        for n, x in rep["roots"]:
            assert abs(x / 50.0 - n) <= 1e-12

    def test_empty_saddle_range(self):
        # f' in [1.1, 1.45]: no integer inside
        rep = ex.stationary_phase_check(ex.quadratic_phase(100.0, 110.0, 145.0))
        assert rep["saddle_range"] == (2, 1)
        assert rep["dual"] == 0
        assert rep["residual"] <= 1.0 * rep["bound_factor"]

    def test_integer_boundary_weights(self):
        rep = ex.stationary_phase_check(ex.quadratic_phase(32.0, 32.0, 96.0))
        assert rep["saddle_range"] == (1, 3)
        assert rep["kappa"] <= 0.1

    def test_positive_curvature_required(self):
        with pytest.raises(DomainError):
            ex.stationary_phase_check(ex.log_phase(60.0, 20.0, 40.0))

    def test_dual_sum_identity(self):
        # phase -(v/2pi) log x on (20, 40], v = 500: the dual sum is the
        # classical rotation e^{i(pi/4 - v log(v/(2 pi e)))} sqrt(v/2pi)
        # sum n^{iv} / n over [v/(2 pi 40), v/(2 pi 20)]
        v = 500.0
        a, b = 20.0, 40.0
        inst = ex.log_phase(-v, a, b)
        rep = ex.stationary_phase_check(inst)
        n1 = v / (2 * math.pi * b)
        n2 = v / (2 * math.pi * a)
        closed = (
            cmath.exp(1j * (math.pi / 4 - v * math.log(v / (2 * math.pi * math.e))))
            * math.sqrt(v / (2 * math.pi))
            * sum(
                cmath.exp(1j * v * math.log(n)) / n
                for n in range(math.ceil(n1), math.floor(n2) + 1)
            )
        )
        assert abs(rep["dual"] - closed) < 1e-9
        # residual within the stated L/sqrt(V) scale, measured constant < 3
        assert rep["residual"] <= 3.0 * a / math.sqrt(v)

    def test_newton_roots_accurate(self):
        rep = ex.stationary_phase_check(ex.log_phase(-500.0, 20.0, 40.0))
        for n, x in rep["roots"]:
            assert abs(inst_f1(x) - n) <= 1e-12


def inst_f1(x):
    return -500.0 / (2 * math.pi * x)


class TestCorpus:
    def test_default_corpus_runs_green(self):
        rep = ex.run_corpus()
        assert rep["all_passed"]
        assert len(rep["instances"]) >= 12
        lemmas = {r["lemma"] for r in rep["instances"]}
        assert lemmas == {
            "discrete_mean",
            "mean_value",
            "sum_vs_integral",
            "stationary_phase",
        }

    def test_quadrature_agreement(self):
        rep = ex.run_corpus()
        for r in rep["instances"]:
            if "quad_rel_diff" in r:
                assert r["quad_rel_diff"] <= 1e-8

    def test_bit_identical_reruns(self):
        def normalize(rep):
            return json.dumps(
                rep,
                default=lambda z: [z.real, z.imag] if isinstance(z, complex) else str(z),
                sort_keys=True,
            )

        assert normalize(ex.run_corpus()) == normalize(ex.run_corpus())

    def test_parse_rejects_bad_lines(self):
        with pytest.raises(UsageError):
            ex.parse_corpus("name=x lemma=6 badtoken\n")
        with pytest.raises(UsageError):
            ex.parse_corpus("lemma=6 family=linear\n")
