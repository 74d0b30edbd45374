"""Dispersion relation, Taylor remainders, classification, sigma fits."""

import math

import numpy as np
import pytest

import latticewaves as lw
from latticewaves.dispersion import taylor_remainders


class TestThetaLambda:
    def test_theta_vanishes_at_zero(self, cm4, nnn1):
        assert lw.dispersion_relation(cm4, 0.0) == 0.0
        assert lw.dispersion_relation(nnn1, 0.0) == 0.0

    def test_theta_cm4_at_pi(self, cm4):
        # series, closed form, and the zeta identity 80*(1-2^-6)*zeta(6)
        series = lw.dispersion_relation(cm4, np.pi)
        assert series == pytest.approx(np.pi ** 6 / 12.0, abs=1e-8)
        assert lw.theta_power4_closed(np.pi) == pytest.approx(np.pi ** 6 / 12.0, abs=1e-10)

    def test_theta_cm4_closed_form_everywhere(self, cm4):
        k = np.linspace(-np.pi, 3.0 * np.pi, 257)
        assert np.max(np.abs(lw.dispersion_relation(cm4, k)
                             - lw.theta_power4_closed(k))) < 1e-8

    def test_theta_nnn_two_term(self, nnn1):
        assert lw.dispersion_relation(nnn1, np.pi) == pytest.approx(4.0, abs=1e-12)

    def test_evenness_and_periodicity(self, cm4, rng):
        k = rng.uniform(-10.0, 10.0, 1000)
        th_p = lw.dispersion_relation(cm4, k)
        th_m = lw.dispersion_relation(cm4, -k)
        assert np.max(np.abs(th_p - th_m)) < 1e-12
        th_shift = lw.dispersion_relation(cm4, k + 2.0 * np.pi)
        assert np.max(np.abs(th_shift - th_p)) < 1e-11
        lam_p = lw.phase_speed_sq(cm4, k)
        lam_m = lw.phase_speed_sq(cm4, -k)
        assert np.max(np.abs(lam_p - lam_m)) < 1e-12

    def test_lambda_is_theta_over_ksq(self, cm4, nnn1, rng):
        k = rng.uniform(0.1, 10.0, 200)
        for model in (cm4, nnn1):
            lam = lw.phase_speed_sq(model, k)
            ratio = lw.dispersion_relation(model, k) / k ** 2
            assert np.max(np.abs(lam - ratio) / np.abs(ratio)) < 1e-10

    def test_lambda_at_zero_is_certified_sound_speed(self, cm4, nnn1):
        assert lw.phase_speed_sq(cm4, 0.0) == pytest.approx(
            2.0 * np.pi ** 4 / 9.0, abs=1e-10)
        for g in (-1.0 / 32.0, 0.25, 1.0):
            m = lw.build_model(lw.PotentialSpec.nnn(g))
            assert lw.phase_speed_sq(m, 0.0) == pytest.approx(1.0 + 4.0 * g, abs=1e-12)

    def test_lambda_below_sound_speed_for_nonneg_alpha(self, cm4, rng):
        k = rng.uniform(0.05, 12.0, 500)
        lam = lw.phase_speed_sq(cm4, k)
        assert np.all(lam < cm4.sum_alpha_m2)


class TestCurvature:
    def test_nnn_closed_form(self):
        for g in (-1.0 / 32.0, 0.25, 1.0):
            m = lw.build_model(lw.PotentialSpec.nnn(g))
            assert lw.long_wave_curvature(m) == pytest.approx(
                -1.0 / 6.0 - 8.0 * g / 3.0, abs=1e-12)

    def test_cm_zeta_form(self, cm4, cm35):
        assert lw.long_wave_curvature(cm4) == pytest.approx(
            -20.0 * lw.zeta(2.0) / 6.0, abs=1e-12)
        assert lw.long_wave_curvature(cm35) == pytest.approx(
            -3.5 * 4.5 * lw.zeta(1.5) / 6.0, abs=1e-12)

    def test_classical_single_term(self):
        m = lw.build_model(lw.PotentialSpec.classical_fput(alpha1=1.0, beta1=1.0))
        assert lw.long_wave_curvature(m) == pytest.approx(-1.0 / 6.0, abs=1e-15)
        assert lw.long_wave_curvature_fd(m) == pytest.approx(-1.0 / 6.0, rel=1e-6)

    def test_fd_cross_check_smooth_families(self, nnn1):
        # central differencing matches the series formula to 1e-6 relative
        # whenever lambda is smooth (finite range)
        fd = lw.long_wave_curvature_fd(nnn1)
        assert fd == pytest.approx(lw.long_wave_curvature(nnn1), rel=1e-6)

    def test_fd_cross_check_power_law(self, cm4, cm35):
        # for the power-law family lambda'' is only Holder-sigma continuous,
        # so the stencil converges like h^sigma; tolerance reflects that
        h = 1e-4
        for model, sigma in ((cm4, 1.0), (cm35, 0.5)):
            fd = lw.long_wave_curvature_fd(model, h=h)
            exact = lw.long_wave_curvature(model)
            assert abs(fd - exact) / abs(exact) < 10.0 * h ** sigma


class TestTaylorRemainders:
    def test_t2_even_and_zero_at_origin(self, cm35):
        tr = taylor_remainders(cm35)
        k = np.array([0.0, 0.3, -0.3, 1.7, -1.7])
        t2 = tr.t2(k)
        assert t2[0] == 0.0
        assert t2[1] == pytest.approx(t2[2], rel=1e-12)
        assert t2[3] == pytest.approx(t2[4], rel=1e-12)

    def test_matches_direct_formula_at_moderate_k(self, nnn1, cm4):
        # T2 = lambda - lambda(0) - lambda''(0) k^2/2, formed naively, is
        # accurate enough at k ~ 1 to validate the series evaluation
        tr_n = taylor_remainders(nnn1)
        for model, tr in ((nnn1, tr_n), (cm4, taylor_remainders(cm4))):
            for k in (0.7, 1.3, 2.1):
                direct = (lw.phase_speed_sq(model, k) - model.sum_alpha_m2
                          - 0.5 * lw.long_wave_curvature(model) * k ** 2)
                assert tr.t2(np.array([k]))[0] == pytest.approx(direct, rel=1e-7, abs=1e-9)


class TestCoefficientsFromDispersion:
    def test_single_mode(self):
        k = np.linspace(0.0, 2.0 * np.pi, 32, endpoint=False)
        alpha = lw.coefficients_from_dispersion(4.0 * np.sin(k / 2.0) ** 2, 4)
        assert alpha[0] == pytest.approx(1.0, abs=1e-12)
        assert np.max(np.abs(alpha[1:])) < 1e-12

    def test_half_angle_identity(self):
        # 1 - cos(2k) = 2 sin^2(k) corresponds to alpha_2 = 1/2 alone
        k = np.linspace(0.0, 2.0 * np.pi, 64, endpoint=False)
        alpha = lw.coefficients_from_dispersion(1.0 - np.cos(2.0 * k), 6)
        assert alpha[1] == pytest.approx(0.5, abs=1e-12)
        assert abs(alpha[0]) < 1e-12 and np.max(np.abs(alpha[2:])) < 1e-12

    def test_degree8_roundtrip(self, rng):
        alpha_true = rng.uniform(-1.0, 1.0, 8)
        k = np.linspace(0.0, 2.0 * np.pi, 64, endpoint=False)
        theta = np.zeros_like(k)
        for m, al in enumerate(alpha_true, start=1):
            theta += 4.0 * al * np.sin(0.5 * m * k) ** 2
        alpha = lw.coefficients_from_dispersion(theta, 8)
        assert np.max(np.abs(alpha - alpha_true)) < 1e-12
        model = lw.build_model(lw.PotentialSpec.custom(
            alpha=alpha, beta=np.ones(8), gamma=np.zeros(8)))
        theta_rec = lw.dispersion_relation(model, k)
        assert np.max(np.abs(theta_rec - theta)) < 1e-10

    def test_rejects_nonvanishing_origin(self):
        k = np.linspace(0.0, 2.0 * np.pi, 32, endpoint=False)
        with pytest.raises(lw.DomainError):
            lw.coefficients_from_dispersion(1.0 + np.cos(k), 4)

    def test_rejects_odd_samples(self):
        k = np.linspace(0.0, 2.0 * np.pi, 32, endpoint=False)
        with pytest.raises(lw.DomainError):
            lw.coefficients_from_dispersion(np.sin(k), 4)

    def test_needs_enough_samples(self):
        with pytest.raises(lw.DomainError):
            lw.coefficients_from_dispersion(np.zeros(8), 4)


class TestCertification:
    def test_nnn_certified_sigma2(self, prof_nnn1):
        assert prof_nnn1.type1_certified
        assert prof_nnn1.sigma == pytest.approx(2.0, abs=0.05)
        assert prof_nnn1.lambda_dd0 < 0.0
        assert prof_nnn1.sup_outside < prof_nnn1.c0_sq

    def test_cm35_certified_sigma_half(self, prof_cm35):
        assert prof_cm35.type1_certified
        assert prof_cm35.sigma == pytest.approx(0.5, abs=0.05)

    def test_cm6_certified_sigma2(self, prof_cm6):
        assert prof_cm6.type1_certified
        assert prof_cm6.sigma == pytest.approx(2.0, abs=0.1)

    def test_finite_range_nonneg_alpha_certified(self):
        m = lw.build_model(lw.PotentialSpec.finite_range(
            alpha=[1.0, 0.0, 0.3], beta=[1.0, 0.0, 0.0]))
        prof = lw.certify_type1(m)
        assert prof.type1_certified
        assert prof.lambda_lower >= 0.0

    def test_nnn_wrong_type_not_certified(self):
        m = lw.build_model(lw.PotentialSpec.nnn(-0.2))
        prof = lw.certify_type1(m)
        assert not prof.type1_certified
        assert not prof.conditions["negative_curvature"]
        assert lw.long_wave_curvature(m) == pytest.approx(
            -1.0 / 6.0 + 8.0 * 0.2 / 3.0, abs=1e-12)

    def test_certificate_feasibility(self, prof_cm4):
        # one constant must serve both condition (iii) inequalities
        assert 0.0 < prof_cm4.mu_star <= prof_cm4.mu_quad
        assert prof_cm4.k_star in (0.5, 1.0, 1.5, 2.0)

    def test_preconditions(self, cm4):
        with pytest.raises(lw.DomainError):
            lw.certify_type1(cm4, n_samples=1000)
        with pytest.raises(lw.DomainError):
            lw.certify_type1(cm4, k_max=2.0)

    def test_to_dict_roundtrippable(self, prof_cm4):
        import json
        d = prof_cm4.to_dict()
        json.dumps(d)
        assert d["type1"] is True


class TestSigmaEstimate:
    def test_cm35(self, cm35):
        assert lw.estimate_sigma(cm35, (0.01, 0.5)) == pytest.approx(0.5, abs=0.05)

    def test_cm6(self, cm6):
        assert lw.estimate_sigma(cm6, (0.01, 0.5)) == pytest.approx(2.0, abs=0.1)

    def test_nnn(self, nnn1):
        assert lw.estimate_sigma(nnn1, (0.01, 0.5)) == pytest.approx(2.0, abs=0.05)

    def test_preconditions(self, cm35):
        with pytest.raises(lw.DomainError):
            lw.estimate_sigma(cm35, (0.5, 0.1))
        with pytest.raises(lw.DomainError):
            lw.estimate_sigma(cm35, (0.01, 0.5), n=10)
