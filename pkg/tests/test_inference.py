import math

import numpy as np
import pytest

from edmfit import (
    Baseline,
    ClassId,
    CountDataset,
    DomainError,
    FitConfig,
    ModelSpec,
    NonConvergenceError,
    PoolingRule,
    VarianceParams,
    empirical_stats,
    fit_baseline,
    fit_mle,
    loglikelihood,
    numeric_moments,
    pmf_table,
    psi_functions,
    select_model,
)
from edmfit.datasets import BUILTINS
from edmfit.inference import _loglik_from_probs

SET1 = BUILTINS["set1"].data
SET4 = BUILTINS["set4"].data
SET6 = BUILTINS["set6"].data
CFG1 = FitConfig(pooling=PoolingRule(explicit_cut=5))
CFG4 = FitConfig(pooling=PoolingRule(explicit_cut=7))


class TestCountDataset:
    def test_validation(self):
        with pytest.raises(DomainError):
            CountDataset("x", ())
        with pytest.raises(DomainError):
            CountDataset("x", (1, -2))
        with pytest.raises(DomainError):
            CountDataset("x", (0, 0))

    def test_from_pairs_contiguity(self):
        ds = CountDataset.from_pairs("x", [(0, 5), (1, 3)])
        assert ds.frequencies == (5, 3)
        with pytest.raises(DomainError):
            CountDataset.from_pairs("x", [(0, 5), (2, 3)])

    def test_totals(self):
        assert SET1.n_obs == 119853
        assert SET1.k_max == 6


class TestEmpiricalStats:
    def test_set1_published_values(self):
        s = empirical_stats(SET1)
        assert s.zero_fraction == pytest.approx(0.8653, abs=5e-5)
        assert s.dispersion == pytest.approx(1.156, abs=5e-4)

    def test_set4_published_values(self):
        s = empirical_stats(SET4)
        assert s.zero_fraction == pytest.approx(0.4666, abs=1e-4)
        assert s.dispersion == pytest.approx(1.983, abs=5e-4)

    def test_degenerate_single_value(self):
        s = empirical_stats(CountDataset("x", (0, 10)))
        assert s.mean == 1.0
        assert s.variance == 0.0
        assert s.dispersion == 0.0

    def test_open_tail_with_observations_refused(self):
        with pytest.raises(DomainError):
            empirical_stats(CountDataset("x", (5, 3, 2), open_tail=True))

    def test_open_tail_with_zero_tail_allowed(self):
        s = empirical_stats(SET6)
        assert s.zero_fraction == pytest.approx(0.9094, abs=5e-5)

    def test_too_few_observations(self):
        with pytest.raises(DomainError):
            empirical_stats(CountDataset("x", (1,)))


class TestLoglikelihood:
    def test_all_mass_at_zero_reduces_to_psi1(self):
        ds = CountDataset("zeros", (250, 0))
        spec = ModelSpec(VarianceParams(ClassId.ABM, 2, 1.0), 0.4)
        psi1 = psi_functions(spec)[2]
        f0_term = 250 * math.log(math.exp(-psi1))
        got = loglikelihood(spec, ds)
        # second category contributes nothing (frequency zero)
        assert got == pytest.approx(f0_term, rel=1e-12)

    def test_zero_probability_sentinel(self):
        probs = np.array([0.5, 0.0, 0.25])
        ds = CountDataset("x", (1, 1, 1))
        assert _loglik_from_probs(probs, ds) == -math.inf

    def test_open_tail_complement_term(self):
        probs = np.array([0.6, 0.3, 0.05])
        ds = CountDataset("x", (6, 3, 1), open_tail=True)
        expected = 6 * math.log(0.6) + 3 * math.log(0.3) + 1 * math.log(1 - 0.9)
        assert _loglik_from_probs(probs, ds) == pytest.approx(expected, rel=1e-12)

    def test_published_value_for_fitted_lmns(self):
        fit = fit_mle(ClassId.LMNS, 1, SET1, CFG1)
        assert fit.loglik == pytest.approx(-54609.75, abs=0.1)
        direct = loglikelihood(fit.spec, SET1)
        assert direct == pytest.approx(fit.loglik, rel=1e-12)

    def test_published_value_for_lms_on_open_tail(self):
        cfg = FitConfig()
        fit = fit_mle(ClassId.LMS, 3, SET6, cfg)
        assert fit.loglik == pytest.approx(-969.06, abs=0.1)


class TestFitMle:
    def test_deterministic(self):
        a = fit_mle(ClassId.ABM, 2, SET4, CFG4)
        b = fit_mle(ClassId.ABM, 2, SET4, CFG4)
        assert a.spec.params.p == b.spec.params.p
        assert a.loglik == b.loglik

    @pytest.mark.parametrize(
        "family,r,cfg,data",
        [
            (ClassId.ABM, 2, CFG4, SET4),
            (ClassId.LMNS, 1, CFG1, SET1),
            (ClassId.LMS, 1, CFG4, SET4),
        ],
    )
    def test_local_maximum(self, family, r, cfg, data):
        fit = fit_mle(family, r, data, cfg)
        params = fit.spec.params
        for dp in (1 - 1e-3, 1 + 1e-3):
            candidates = [(params.p * dp, params.b)]
            if params.b is not None:
                candidates.append((params.p, params.b * dp))
            for p_, b_ in candidates:
                spec = ModelSpec(VarianceParams(family, r, p_, b_), fit.spec.m)
                assert loglikelihood(spec, data) <= fit.loglik + 1e-6

    def test_mean_is_sample_mean_exactly(self):
        stats = empirical_stats(SET4)
        fit = fit_mle(ClassId.ABM, 2, SET4, CFG4)
        assert fit.spec.m == stats.mean
        table = pmf_table(fit.spec, eps=1e-12, max_terms=2000)
        mean, _ = numeric_moments(table)
        assert mean == pytest.approx(stats.mean, abs=1e-6)

    def test_expected_counts_sum_below_total(self):
        fit = fit_mle(ClassId.ABM, 2, SET4, CFG4)
        assert fit.expected.sum() <= SET4.n_obs + 1e-6

    def test_open_tail_expected_aggregates_complement(self):
        fit = fit_mle(ClassId.LMNS, 1, SET6, FitConfig())
        assert fit.expected.sum() == pytest.approx(SET6.n_obs, abs=1e-8)

    def test_nonconvergence_carries_incumbent(self):
        # underdispersed data: likelihood rises monotonically toward p = inf
        ds = CountDataset("under", (1, 60, 1))
        with pytest.raises(NonConvergenceError) as err:
            fit_mle(ClassId.ABM, 2, ds, FitConfig())
        assert err.value.incumbent is not None
        assert err.value.incumbent.converged is False

    def test_result_reports_evaluations(self):
        fit = fit_mle(ClassId.ABM, 2, SET4, CFG4)
        assert fit.evaluations > 10
        assert fit.converged


class TestSelectModel:
    def test_set1_lmns_selects_one(self):
        fit = select_model(ClassId.LMNS, SET1, CFG1)
        assert fit.spec.params.r == 1

    def test_set4_abm_selects_two(self):
        fit = select_model(ClassId.ABM, SET4, CFG4)
        assert fit.spec.params.r == 2

    def test_rmax_validation(self):
        with pytest.raises(DomainError):
            select_model(ClassId.ABM, SET4, FitConfig(r_max=1))

    def test_rmax_bounds_the_scan(self):
        fit = select_model(ClassId.ABM, SET4, FitConfig(r_max=3, pooling=PoolingRule(explicit_cut=7)))
        assert fit.spec.params.r in (2, 3)


class TestBaselineFits:
    def test_poisson_has_one_parameter(self):
        fit = fit_baseline(Baseline.POISSON, SET4, CFG4)
        assert fit.gof.n_params == 1
        assert fit.converged

    def test_nb_beats_poisson_on_overdispersed_data(self):
        cfg = CFG4
        poisson = fit_baseline(Baseline.POISSON, SET4, cfg)
        nb = fit_baseline(Baseline.NEG_BINOMIAL, SET4, cfg)
        assert nb.loglik > poisson.loglik
        assert nb.gof.n_params == 2
