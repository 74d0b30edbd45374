"""Wave solver: leading order, contraction, Petviashvili oracle, sweeps."""

import numpy as np
import pytest

import latticewaves as lw
from latticewaves.spectral import derivative, sobolev_norm


class TestLeadingOrder:
    def test_amplitude_cm4(self, ctx_cm4):
        w0 = lw.kdv_profile(ctx_cm4)
        amp = float(np.min(w0.values))
        assert amp == pytest.approx(-5.0 / (8.0 * np.pi ** 2), abs=1e-10)

    def test_kdv_equation_residual(self, ctx_cm4, ctx_nnn1, grid):
        # the sech^2(x/2) profile solves the limit equation exactly; the
        # discrete residual is pure spectral roundoff
        for ctx in (ctx_cm4, ctx_nnn1):
            w0 = lw.kdv_profile(ctx)
            lhs = -0.5 * ctx.lambda_dd0 * (w0 - derivative(w0, 2))
            rhs = lw.Field(grid, ctx.b * w0.values ** 2, even=True)
            assert sobolev_norm(lhs - rhs, 0.0) <= 1e-10

    def test_parity(self, ctx_cm4):
        assert lw.kdv_profile(ctx_cm4).is_even(1e-14)


class TestWaveSpeed:
    def test_zero_eps_is_sound_speed(self, prof_cm4, grid):
        ctx = lw.LongWaveOperators(prof_cm4, grid, 0.0)
        assert lw.wave_speed_sq(ctx) == pytest.approx(prof_cm4.c0_sq, abs=1e-14)

    def test_cm4_value(self, ctx_cm4):
        expect = 2.0 * np.pi ** 4 / 9.0 + np.pi ** 2 / 360.0
        assert lw.wave_speed_sq(ctx_cm4) == pytest.approx(expect, abs=1e-10)

    def test_nnn_value(self, ctx_nnn1):
        expect = 5.0 + (17.0 / 12.0) * 0.01
        assert lw.wave_speed_sq(ctx_nnn1) == pytest.approx(expect, abs=1e-12)


class TestContraction:
    def test_cm4_converges(self, sol_cm4):
        assert sol_cm4.method == "contraction"
        assert sol_cm4.residual_H1 <= 1e-8
        assert sol_cm4.iterations < 50

    def test_nnn_converges(self, sol_nnn1):
        assert sol_nnn1.residual_H1 <= 1e-8

    def test_ansatz_identity(self, sol_cm4, ctx_cm4):
        # W = W0 + eps^sigma V holds pointwise by construction
        recon = ctx_cm4.background + sol_cm4.eps ** sol_cm4.sigma * sol_cm4.V
        assert np.max(np.abs(recon.values - sol_cm4.W.values)) < 1e-14

    def test_residual_recomputation(self, sol_cm4, ctx_cm4):
        assert lw.residual(ctx_cm4, sol_cm4.W) == pytest.approx(
            sol_cm4.residual_H1, abs=1e-12)

    def test_speed_identity(self, sol_cm4, prof_cm4):
        expect = prof_cm4.c0_sq - 0.5 * prof_cm4.lambda_dd0 * sol_cm4.eps ** 2
        assert sol_cm4.c_eps_sq == pytest.approx(expect, abs=1e-14)

    def test_parity(self, sol_cm4, sol_nnn1):
        for sol in (sol_cm4, sol_nnn1):
            assert sol.W.is_even(1e-10)
            assert sol.V.is_even(1e-10)

    def test_monotone_contraction(self, sol_cm4, sol_nnn1):
        # increments shrink geometrically once the iteration settles
        for sol in (sol_cm4, sol_nnn1):
            inc = sol.increments
            assert all(b < a for a, b in zip(inc[2:], inc[3:]))

    def test_correction_bounded_across_eps(self, prof_nnn1, grid):
        norms = []
        for eps in (0.2, 0.15, 0.1, 0.05, 0.025):
            ctx = lw.LongWaveOperators(prof_nnn1, grid, eps)
            norms.append(lw.solve_contraction(ctx).correction_norm)
        assert max(norms) < 5.0 * min(norms)

    def test_profile_converges_to_leading_order(self, prof_nnn1, grid):
        diffs = []
        for eps in (0.2, 0.1, 0.05):
            ctx = lw.LongWaveOperators(prof_nnn1, grid, eps)
            sol = lw.solve_contraction(ctx)
            diffs.append(sobolev_norm(sol.W - ctx.background, 1.0))
        assert diffs[0] > diffs[1] > diffs[2]

    def test_max_iter_error(self, ctx_nnn1):
        with pytest.raises(lw.SolverError, match="did not converge"):
            lw.solve_contraction(ctx_nnn1, tol=1e-15, max_iter=2)

    def test_negative_profile_power_law(self, sol_cm4):
        # power-law waves are depression waves; checked, not asserted fatal
        assert np.all(sol_cm4.W.values <= 1e-12)


class TestPetviashvili:
    def test_converges_cm4(self, ctx_cm4):
        sol = lw.solve_petviashvili(ctx_cm4, tol=1e-12)
        assert sol.residual_H1 <= 1e-8
        assert sol.method == "petviashvili"

    def test_agreement_with_contraction(self, ctx_cm4, ctx_nnn1, sol_cm4, sol_nnn1):
        for ctx, sol in ((ctx_cm4, sol_cm4), (ctx_nnn1, sol_nnn1)):
            orac = lw.solve_petviashvili(ctx, tol=1e-12)
            assert sobolev_norm(orac.W - sol.W, 1.0) <= 1e-6

    def test_limit_recovers_leading_order(self, prof_cm4, grid):
        # with eps = 0 the iteration solves the KdV-type limit equation and
        # must return its known sech^2 solution
        ctx0 = lw.LongWaveOperators(prof_cm4, grid, 0.0)
        sol = lw.solve_petviashvili(ctx0, tol=1e-13)
        assert sobolev_norm(sol.W - ctx0.background, 1.0) <= 1e-9


class TestScalingSweep:
    def test_nnn_slope(self, prof_nnn1, grid):
        rep = lw.scaling_sweep(prof_nnn1, grid, [0.4, 0.28, 0.2, 0.14, 0.1])
        assert not any(rep.failures)
        assert abs(rep.slope - 2.0) <= 0.5
        assert rep.sigma_expected == pytest.approx(2.0, abs=0.05)
        assert len(rep.rows()) == 5

    def test_partial_report_on_failures(self, prof_nnn1, grid):
        rep = lw.scaling_sweep(prof_nnn1, grid, [0.4, 0.28, 0.2, 0.14, 0.1],
                               tol=1e-15, max_iter=1)
        assert all(rep.failures)
        assert np.isnan(rep.slope)

    def test_needs_five_values(self, prof_nnn1, grid):
        with pytest.raises(lw.SolverError):
            lw.scaling_sweep(prof_nnn1, grid, [0.2, 0.1])


class TestGridInsensitivity:
    def test_box_doubling(self, prof_nnn1, grid, sol_nnn1):
        # periodization must be invisible: double L at fixed dx
        wide = grid.widen()
        sol2 = lw.solve_contraction(lw.LongWaveOperators(prof_nnn1, wide, 0.1))
        assert abs(sol2.residual_H1 - sol_nnn1.residual_H1) < 1e-8
        assert abs(sol2.correction_norm - sol_nnn1.correction_norm) < 1e-8

    def test_refinement(self, prof_nnn1, grid, sol_nnn1):
        fine = grid.refine()
        sol2 = lw.solve_contraction(lw.LongWaveOperators(prof_nnn1, fine, 0.1))
        assert abs(sobolev_norm(sol2.W, 1.0) - sobolev_norm(sol_nnn1.W, 1.0)) < 1e-9
