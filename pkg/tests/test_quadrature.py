import math
import threading

import numpy as np
import pytest
from scipy.integrate import quad as scipy_quad

from trigof import quadrature as Q
from trigof.errors import DomainError, QuadratureError

TWO_PI = 2.0 * math.pi


class TestIntegrate:
    def test_exponential(self):
        val = Q.integrate_domain(Q.Integrand("0,inf", lambda v: np.exp(-v)))
        assert val == pytest.approx(1.0, abs=1e-12)

    def test_integrable_endpoint_singularity(self):
        val = Q.integrate_domain(Q.Integrand("0,1", lambda v: v ** -0.5, pow_lo=-0.5))
        assert val == pytest.approx(2.0, abs=1e-12)

    def test_oscillatory_exact_zero(self):
        # substitute u = 1 - e^-v: the integral of cos(2 pi u) over (0,1)
        val = Q.integrate_domain(Q.Integrand(
            "0,inf", lambda v: np.cos(TWO_PI * (1.0 - np.exp(-v))) * np.exp(-v)))
        assert val == pytest.approx(0.0, abs=1e-12)

    def test_one_to_infinity(self):
        val = Q.integrate_domain(Q.Integrand("1,inf", lambda v: np.exp(1.0 - v)))
        assert val == pytest.approx(1.0, abs=1e-11)

    def test_determinism(self):
        f = Q.Integrand("0,1", lambda v: np.sin(13.0 * v) * np.log(v))
        assert Q.integrate_domain(f) == Q.integrate_domain(f)

    def test_nonconvergence_raises_with_estimate(self):
        with pytest.raises(QuadratureError) as err:
            Q.integrate(lambda v: v ** -0.995, 0.0, 1.0, 1e-12, 1e-12)
        assert err.value.estimate is not None
        assert err.value.bound is not None

    def test_bad_tolerances(self):
        with pytest.raises(DomainError):
            Q.integrate(lambda v: v, 0.0, 1.0, abs_tol=0.0)

    def test_bad_domain_tag(self):
        with pytest.raises(DomainError):
            Q.Integrand("2,inf", lambda v: v)


class TestHValues:
    def test_arity(self):
        assert Q.h_arity(6) == 3
        assert Q.h_arity(25) == 2
        assert Q.h_arity(1) == 1
        with pytest.raises(DomainError):
            Q.h(6, 1.0)
        with pytest.raises(DomainError):
            Q.h(38)

    def test_h6_h7_against_pit_form(self):
        # u = gamma-cdf(v) turns h6(1,2,1) into int cos(2 pi u)(-ln(1-u)) du
        ref6 = scipy_quad(lambda u: math.cos(TWO_PI * u) * -math.log1p(-u),
                          0.0, 1.0, epsabs=1e-12, epsrel=1e-12)[0]
        ref7 = scipy_quad(lambda u: math.sin(TWO_PI * u) * -math.log1p(-u),
                          0.0, 1.0, epsabs=1e-12, epsrel=1e-12)[0]
        assert Q.h(6, 1.0, 2.0, 1.0) == pytest.approx(ref6, abs=1e-9)
        assert Q.h(7, 1.0, 2.0, 1.0) == pytest.approx(ref7, abs=1e-9)

    def test_h10_h11_against_pit_form(self):
        ref10 = scipy_quad(lambda u: math.cos(TWO_PI * u) * math.log(-math.log1p(-u)),
                           0.0, 1.0, epsabs=1e-12, limit=200)[0]
        ref11 = scipy_quad(lambda u: math.sin(TWO_PI * u) * math.log(-math.log1p(-u)),
                           0.0, 1.0, epsabs=1e-12, limit=200)[0]
        assert Q.h(10, 1.0) == pytest.approx(ref10, abs=1e-9)
        assert Q.h(11, 1.0) == pytest.approx(ref11, abs=1e-9)

    def test_epd_uniform_limit(self):
        assert Q.h(1, 1e6) == pytest.approx(1.0, abs=1e-3)
        assert Q.h(2, 1e6) == pytest.approx(0.0, abs=1e-3)

    def test_memoization_bit_identical(self):
        Q.clear_h_cache()
        a = Q.h(6, 1.3, 2.3, 1.0)
        b = Q.h(6, 1.3, 2.3, 1.0)
        assert a == b and np.float64(a).tobytes() == np.float64(b).tobytes()

    def test_memo_thread_safety(self):
        Q.clear_h_cache()
        results = []

        def worker():
            results.append(Q.h(8, 2.7))

        threads = [threading.Thread(target=worker) for _ in range(8)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert len(set(results)) == 1

    def test_student_integrals_small_shape_bound(self):
        # documented viability bound: shape >= 0.2 works, far below errors out
        assert np.isfinite(Q.h(12, 0.2))
        with pytest.raises(DomainError):
            Q.h(12, 0.05)
        with pytest.raises(DomainError):
            Q.h(16, 0.8)  # needs shape > 1

    @pytest.mark.parametrize("idx,args", [
        (3, (1.7,)), (8, (0.6,)), (19, (0.4,)), (25, (0.4, 0.3)),
        (29, (1.0, 2.0)), (33, (0.5,)), (37, (2.5,)),
    ])
    def test_h_finite_across_regimes(self, idx, args):
        assert np.isfinite(Q.h(idx, *args))


class TestLogisticConstants:
    def test_against_tabulated(self):
        c_cos, c_sin, m_cos, m_sin = Q.logistic_constants()
        assert c_cos == pytest.approx(0.698397593884459, abs=1e-10)
        assert c_sin == pytest.approx(-1.0 / math.pi, abs=1e-10)
        assert m_cos == pytest.approx(0.4909114316, abs=1e-8)
        assert m_sin == pytest.approx(-0.235854187, abs=1e-8)
