import math

import numpy as np
import pytest

from edmfit import (
    ClassId,
    DomainError,
    OracleCapError,
    PrecisionError,
    SingularParametersError,
    VarianceParams,
    coefficients,
    h_coefficient,
    h_deriv_scaled,
    kernel_mu_oracle,
    kernel_table,
    q_vector,
)
from edmfit.series import _DoubleStream, h_zero_residual, iter_scaled_kernel

from conftest import grid_params

ABM21 = VarianceParams(ClassId.ABM, 2, 1.0)


class TestVarianceParams:
    def test_abm_requires_r_at_least_two(self):
        with pytest.raises(DomainError):
            VarianceParams(ClassId.ABM, 1, 1.0)

    def test_lms_and_lmns_allow_r_one(self):
        VarianceParams(ClassId.LMS, 1, 2.0, 1.0)
        VarianceParams(ClassId.LMNS, 1, 2.0)

    def test_positive_p_required(self):
        with pytest.raises(DomainError):
            VarianceParams(ClassId.ABM, 2, 0.0)

    def test_lms_needs_positive_b(self):
        with pytest.raises(DomainError):
            VarianceParams(ClassId.LMS, 1, 2.0)
        with pytest.raises(DomainError):
            VarianceParams(ClassId.LMS, 1, 2.0, -1.0)

    def test_lms_rejects_equal_p_b(self):
        with pytest.raises(SingularParametersError):
            VarianceParams(ClassId.LMS, 2, 1.5, 1.5)

    def test_b_forbidden_outside_lms(self):
        with pytest.raises(DomainError):
            VarianceParams(ClassId.ABM, 2, 1.0, 1.0)

    def test_integer_power_required(self):
        with pytest.raises(DomainError):
            VarianceParams(ClassId.ABM, 2.0, 1.0)


class TestCoefficients:
    def test_abm_r2_p1_hand_values(self):
        cs = coefficients(ABM21)
        assert cs.c == (1.0, -1.0)
        assert cs.d == (-1.0,)
        assert cs.c0 == -1.0  # -psi0~(0) with psi0~(0) = 1
        assert cs.d0 == 1.0  # -psi1~(0) with psi1~(0) = -1

    def test_abm_general_closed_forms(self):
        r, p = 5, 2.0
        cs = coefficients(VarianceParams(ClassId.ABM, r, p))
        for i in range(1, r):
            assert cs.c[i - 1] == pytest.approx(p**i / i, rel=1e-15)
        assert cs.c[r - 1] == -1.0
        assert cs.d[r - 2] == pytest.approx(-(p**r) / (r - 1), rel=1e-15)
        harmonic = sum(1.0 / i for i in range(1, r))
        assert cs.c0 == pytest.approx(math.log(p) - harmonic, rel=1e-15)
        assert cs.d0 == pytest.approx(p / (r - 1), rel=1e-15)

    def test_lmns_r1_p2_hand_values(self):
        cs = coefficients(VarianceParams(ClassId.LMNS, 1, 2.0))
        assert cs.c == (-0.5,)
        assert cs.d == (-0.25,)
        assert cs.c0 == 0.0
        assert cs.d0 == 1.0  # p/(r+1)

    def test_lms_singular_band(self):
        with pytest.raises(SingularParametersError):
            coefficients(VarianceParams(ClassId.LMS, 2, 1.0, 1.0 + 1e-9))
        coefficients(VarianceParams(ClassId.LMS, 2, 1.0, 1.0 + 1e-3))

    def test_lms_band_threshold_configurable(self):
        params = VarianceParams(ClassId.LMS, 2, 1.0, 1.001)
        with pytest.raises(SingularParametersError):
            coefficients(params, singular_tol=1e-2)


class TestQVector:
    def test_abm_r2_p1_n2(self):
        assert q_vector(ABM21, 2).q == (3.0, -3.0, 0.0)

    def test_abm_r2_p1_n3(self):
        assert q_vector(ABM21, 3).q == (4.0, -4.0, 1.0)

    def test_abm_low_indices_scale_with_n(self):
        params = VarianceParams(ClassId.ABM, 5, 2.0)
        cs = coefficients(params)
        for n in (1, 4, 9):
            qv = q_vector(params, n)
            for i in range(1, params.r - 1):
                assert qv.q[i] == pytest.approx(-n * cs.c[i - 1], rel=1e-15)

    def test_lmns_log_coefficient_is_r(self):
        params = VarianceParams(ClassId.LMNS, 1, 2.0)
        assert q_vector(params, 1).q[3] == 1.0
        params = VarianceParams(ClassId.LMNS, 4, 3.0)
        assert q_vector(params, 7).q[6] == 4.0

    def test_n_must_be_positive(self):
        with pytest.raises(DomainError):
            q_vector(ABM21, 0)

    @pytest.mark.parametrize("params", grid_params())
    def test_h_at_zero_vanishes(self, params):
        for n in (1, 2, 5, 17, 50):
            residual, scale = h_zero_residual(params, q_vector(params, n))
            assert abs(residual) <= 1e-10 * max(1.0, scale)


class TestHCoefficient:
    def test_abm_power_branch(self):
        assert h_coefficient(ABM21, 1, 1) == -1.0

    def test_abm_log_branch(self):
        assert h_coefficient(ABM21, 2, 2) == -0.5

    def test_lms_second_log_branch(self):
        params = VarianceParams(ClassId.LMS, 2, 1.0, 4.0)
        assert h_coefficient(params, 3, 1) == pytest.approx(0.25)
        assert h_coefficient(params, 3, 2) == pytest.approx(-1.0 / 32.0)

    def test_lmns_monomial_branch(self):
        params = VarianceParams(ClassId.LMNS, 3, 2.0)
        for j in (1, 2, 3, 4):
            assert h_coefficient(params, 2, j) == (1.0 if j == 2 else 0.0)

    def test_lmns_power_branch_truncates(self):
        params = VarianceParams(ClassId.LMNS, 1, 2.0)
        assert h_coefficient(params, 2, 3) == 0.0
        assert h_coefficient(params, 2, 2) == pytest.approx(1.0)  # C(2,2)*p^0
        assert h_coefficient(params, 2, 1) == pytest.approx(-4.0)  # -C(2,1)*p^1

    def test_lmns_log_branch(self):
        params = VarianceParams(ClassId.LMNS, 1, 2.0)
        assert h_coefficient(params, 3, 2) == pytest.approx(-1.0 / 8.0)

    def test_range_validation(self):
        with pytest.raises(DomainError):
            h_coefficient(ABM21, 3, 1)
        with pytest.raises(DomainError):
            h_coefficient(ABM21, 1, 0)


class TestHDerivScaled:
    def test_abm_r2_p1_n2(self):
        assert h_deriv_scaled(ABM21, 2).values == (3.0,)

    def test_abm_r2_p1_n3(self):
        got = h_deriv_scaled(ABM21, 3).values
        assert got[0] == pytest.approx(5.0, rel=1e-14)
        assert got[1] == pytest.approx(-4.5, rel=1e-14)

    @pytest.mark.parametrize(
        "params",
        [ABM21, VarianceParams(ClassId.LMS, 2, 3.0, 1.0), VarianceParams(ClassId.LMNS, 2, 4.0)],
    )
    def test_n2_gives_single_entry(self, params):
        assert len(h_deriv_scaled(params, 2).values) == 1

    @pytest.mark.parametrize(
        "params",
        [
            VarianceParams(ClassId.ABM, 4, 2.5),
            VarianceParams(ClassId.LMS, 3, 2.0, 5.0),
            VarianceParams(ClassId.LMNS, 3, 6.0),
        ],
    )
    def test_matches_q_dot_h(self, params):
        n = 7
        qv = q_vector(params, n)
        got = h_deriv_scaled(params, n).values
        for j in range(1, n):
            direct = sum(
                qv.q[i] * h_coefficient(params, i, j)
                for i in range(1, params.basis_size + 1)
            )
            assert got[j - 1] == pytest.approx(direct, rel=1e-12, abs=1e-12)

    @pytest.mark.parametrize(
        "params",
        [
            VarianceParams(ClassId.ABM, 4, 2.5),
            VarianceParams(ClassId.LMS, 3, 2.0, 5.0),
            VarianceParams(ClassId.LMNS, 3, 6.0),
        ],
    )
    def test_production_series_route_agrees(self, params):
        # kernel production path derives the same numbers from the Taylor
        # series of psi1' instead of the partial-fraction closed forms
        n = 9
        stream = _DoubleStream(params, 1.0)
        stream._extend(n - 1)
        b_stream = stream.v1[1:n] + n * stream.v2[1:n]
        b_direct = h_deriv_scaled(params, n).values
        np.testing.assert_allclose(b_stream, b_direct, rtol=1e-11, atol=1e-11)


class TestKernelOracle:
    def test_trivial_terms(self):
        for params in (ABM21, VarianceParams(ClassId.LMNS, 2, 3.0)):
            assert kernel_mu_oracle(params, 0) == 1.0
            assert kernel_mu_oracle(params, 1) == 1.0

    def test_abm_r2_p1_hand_values(self):
        assert kernel_mu_oracle(ABM21, 2) == pytest.approx(1.5, rel=1e-14)
        assert kernel_mu_oracle(ABM21, 3) == pytest.approx(8.0 / 3.0, rel=1e-14)

    def test_cap(self):
        with pytest.raises(OracleCapError):
            kernel_mu_oracle(ABM21, 21)
        kernel_mu_oracle(ABM21, 21, cap=21)


class TestKernelTable:
    def test_abm_r2_p1(self):
        kt = kernel_table(ABM21, 3)
        np.testing.assert_allclose(kt.mu, [1.0, 1.0, 1.5, 8.0 / 3.0], rtol=1e-12)

    def test_short_tables(self):
        np.testing.assert_array_equal(kernel_table(ABM21, 1).mu, [1.0, 1.0])
        np.testing.assert_array_equal(kernel_table(ABM21, 0).mu, [1.0])

    def test_lms_oracle_equivalence_example(self):
        params = VarianceParams(ClassId.LMS, 1, 2.0, 1.0)
        kt = kernel_table(params, 12)
        for n in range(13):
            oracle = kernel_mu_oracle(params, n)
            assert abs(kt.mu[n] - oracle) / max(1.0, abs(oracle)) <= 1e-8

    @pytest.mark.parametrize(
        "params",
        [
            VarianceParams(ClassId.ABM, 3, 0.5),
            VarianceParams(ClassId.ABM, 4, 5.0),
            VarianceParams(ClassId.LMS, 2, 0.5, 2.0),
            VarianceParams(ClassId.LMS, 4, 5.0, 0.5),
            VarianceParams(ClassId.LMNS, 2, 0.5),
            VarianceParams(ClassId.LMNS, 4, 20.0),
        ],
    )
    def test_oracle_equivalence_sample(self, params):
        kt = kernel_table(params, 12)
        for n in range(13):
            oracle = kernel_mu_oracle(params, n)
            assert abs(kt.mu[n] - oracle) / max(1.0, abs(oracle)) <= 1e-8

    def test_extended_matches_double(self):
        params = VarianceParams(ClassId.LMS, 2, 2.0, 0.5)
        a = kernel_table(params, 15).mu
        b = kernel_table(params, 15, precision="extended").mu
        np.testing.assert_allclose(a, b, rtol=1e-12)

    def test_negative_length_rejected(self):
        with pytest.raises(DomainError):
            kernel_table(ABM21, -1)

    def test_unknown_precision_rejected(self):
        with pytest.raises(DomainError):
            kernel_table(ABM21, 3, precision="quad")


class TestScaledStream:
    def test_positivity_loss_raises_and_extended_rescues(self):
        # deep scaled tail for small p cancels catastrophically in doubles
        params = VarianceParams(ClassId.ABM, 2, 0.5)
        scale = 0.17  # roughly exp(psi(1)) for these parameters
        gen = iter_scaled_kernel(params, scale)
        with pytest.raises(PrecisionError) as err:
            for _ in range(400):
                next(gen)
        n_fail = err.value.n
        assert n_fail is not None and n_fail > 50
        assert "extended" in str(err.value)
        gen_ext = iter_scaled_kernel(params, scale, precision="extended")
        vals = [next(gen_ext) for _ in range(n_fail + 5)]
        assert all(v > 0 for v in vals)

    def test_scaled_values_match_mu_times_power(self):
        params = VarianceParams(ClassId.LMNS, 2, 5.0)
        scale = 0.6
        gen = iter_scaled_kernel(params, scale)
        vals = [next(gen) for _ in range(10)]
        mu = kernel_table(params, 9).mu
        np.testing.assert_allclose(vals, mu * scale ** np.arange(10), rtol=1e-12)
