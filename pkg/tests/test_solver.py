"""Propagator, exponential integrators, Duhamel quadrature, rescaling."""

import numpy as np
import pytest

from dnls_lab.errors import (BlowUpError, EdgeDecayError, ParameterError,
                             TimeRangeError, WrongDomainError)
from dnls_lab.fields import Domain, GridFunction, SpectralField, Trajectory
from dnls_lab.nonlinear import NonlinearityConfig
from dnls_lab.sampling import (gaussian_packet, plane_wave,
                               random_band_field, scaled_to_h1)
from dnls_lab.solver import (SolverConfig, _phi, duhamel_apply,
                             free_trajectory, linear_propagate, picard_iterate,
                             rescale, solve, solve_two_sided)

TORUS = Domain("torus", 64)


def small_cfg(dom=TORUS, lam=0.0, k=0, gauged=False, dt=1e-3, T=0.05,
              integrator="etdrk4"):
    return SolverConfig(dom, NonlinearityConfig(lam, k, gauged), dt, T,
                        integrator)


class TestPhiFunctions:
    def test_series_matches_closed_form_at_boundary(self):
        # evaluate on a ring just outside the series radius and compare with
        # the series evaluated inside by continuity of the coefficients
        z = np.array([0.49j, -0.49j, 0.3 + 0.3j, 0.51j, 1.0j, -2.0j])
        for k in (1, 2, 3):
            vals = _phi(z, k)
            import math
            series = sum(z ** j / math.factorial(j + k) for j in range(40))
            assert np.max(np.abs(vals - series)) < 1e-13

    def test_phi_at_zero(self):
        import math
        for k in (1, 2, 3):
            assert _phi(np.array([0.0j]), k)[0] == pytest.approx(
                1.0 / math.factorial(k))


class TestLinearPropagate:
    def test_identity_at_zero(self):
        f = SpectralField.unit_mass(TORUS, 3.0)
        assert np.allclose(linear_propagate(f, 0.0).coeffs, f.coeffs)

    def test_mode_two_quarter_pi(self):
        f = SpectralField.unit_mass(TORUS, 2.0)
        out = linear_propagate(f, np.pi / 4.0)
        idx = int(np.argmin(np.abs(TORUS.xi - 2)))
        assert out.coeffs[idx] == pytest.approx(-1.0, abs=1e-14)

    def test_unitary(self):
        rng = np.random.default_rng(0)
        f = random_band_field(TORUS, rng, band=16.0)
        assert linear_propagate(f, 0.37).l2_norm() == pytest.approx(
            f.l2_norm(), rel=1e-14)

    def test_reversible(self):
        rng = np.random.default_rng(1)
        f = random_band_field(TORUS, rng, band=16.0)
        back = linear_propagate(linear_propagate(f, 0.21), -0.21)
        assert np.max(np.abs(back.coeffs - f.coeffs)) < 1e-13

    def test_semigroup(self):
        rng = np.random.default_rng(2)
        f = random_band_field(TORUS, rng, band=16.0)
        a = linear_propagate(linear_propagate(f, 0.1), 0.15)
        b = linear_propagate(f, 0.25)
        assert np.max(np.abs(a.coeffs - b.coeffs)) < 1e-13


def plane_wave_error(dt, n=256, A=0.5, lam=0.0, k=0, T=0.1,
                     integrator="etdrk4"):
    dom = Domain("torus", n)
    cfg = SolverConfig(dom, NonlinearityConfig(lam, k, False), dt, T, integrator)
    traj = solve(plane_wave(dom, A, 1), cfg)
    omega = 1 - A ** 2 + lam * A ** (2 * k)
    exact = A * np.exp(1j * (dom.x - omega * T))
    diff = traj.values[-1] - exact
    return float(np.sqrt(np.sum(np.abs(diff) ** 2) * dom.dx)
                 / (A * np.sqrt(2 * np.pi)))


class TestSolve:
    def test_zero_data(self):
        traj = solve(GridFunction.zero(TORUS), small_cfg())
        assert np.all(traj.values == 0)

    def test_plane_wave_exactness(self):
        assert plane_wave_error(1e-3) < 1e-10

    def test_plane_wave_with_power_term(self):
        assert plane_wave_error(1e-3, lam=0.8, k=1) < 1e-10

    def test_fourth_order_convergence(self):
        errs = [plane_wave_error(dt, T=0.1) for dt in (0.05, 0.025, 0.0125)]
        assert errs[1] <= errs[0] / 8.0
        assert errs[2] <= errs[1] / 8.0

    def test_ifrk4_agrees(self):
        assert plane_wave_error(1e-3, integrator="ifrk4") < 1e-9

    def test_small_amplitude_cubic_scaling(self):
        # || solve - free || = O(eps^3): halving eps gains a factor ~8
        dom = TORUS
        rng = np.random.default_rng(3)
        base = random_band_field(dom, rng, band=8.0).to_grid()
        base = scaled_to_h1(base, 1.0)
        devs = []
        for eps in (0.2, 0.1):
            u0 = eps * base
            traj = solve(u0, small_cfg(T=0.04, dt=5e-4))
            lin = linear_propagate(u0.to_spectral(), 0.04).to_grid()
            devs.append((traj.slice_function(-1) - lin).l2_norm())
        ratio = devs[0] / devs[1]
        assert 6.0 < ratio < 10.0

    def test_mass_conservation(self):
        rng = np.random.default_rng(4)
        u0 = scaled_to_h1(random_band_field(TORUS, rng, band=8.0).to_grid(), 0.3)
        for gauged in (False, True):
            traj = solve(u0, small_cfg(lam=1.0, k=1, gauged=gauged))
            m = traj.mass()
            assert np.max(np.abs(m - m[0])) / m[0] < 1e-9

    def test_determinism(self):
        rng = np.random.default_rng(5)
        u0 = scaled_to_h1(random_band_field(TORUS, rng, band=8.0).to_grid(), 0.2)
        a = solve(u0, small_cfg(lam=1.0, k=1))
        b = solve(u0, small_cfg(lam=1.0, k=1))
        assert np.array_equal(a.values, b.values)

    def test_blow_up_detected(self):
        u0 = plane_wave(TORUS, 200.0, 1)
        with pytest.raises(BlowUpError):
            solve(u0, small_cfg(dt=0.01, T=1.0))

    def test_line_edge_decay_enforced(self):
        dom = Domain("line", 128, 2)
        u0 = plane_wave(dom, 0.5, 1)
        with pytest.raises(EdgeDecayError):
            solve(u0, small_cfg(dom=dom))

    def test_two_sided(self):
        rng = np.random.default_rng(6)
        u0 = scaled_to_h1(random_band_field(TORUS, rng, band=8.0).to_grid(), 0.2)
        traj = solve_two_sided(u0, small_cfg(T=0.02, dt=1e-3))
        assert traj.times[0] == pytest.approx(-0.02)
        assert traj.times[-1] == pytest.approx(0.02)
        mid = traj.index_of_time(0.0)
        assert np.array_equal(traj.values[mid], u0.values)

    def test_config_validation(self):
        with pytest.raises(ParameterError):
            SolverConfig(TORUS, NonlinearityConfig(), 0.1, 0.05)
        with pytest.raises(ParameterError):
            SolverConfig(TORUS, NonlinearityConfig(), 1e-3, 1.5)
        with pytest.raises(ParameterError):
            SolverConfig(TORUS, NonlinearityConfig(), 1e-3, 0.05,
                         integrator="euler")
        with pytest.raises(ParameterError):
            SolverConfig(TORUS, NonlinearityConfig(), 3e-4, 0.05)


class TestDuhamel:
    def test_zero_forcing(self):
        times = 1e-3 * np.arange(11)
        w = Trajectory(TORUS, times, np.zeros((11, 64), complex))
        out = duhamel_apply(w, 0.01)
        assert np.all(out.values == 0)

    def test_free_wave_forcing_closed_form(self):
        rng = np.random.default_rng(7)
        g = random_band_field(TORUS, rng, band=8.0).to_grid()
        times = 1e-3 * np.arange(51)
        w = free_trajectory(g, times)
        out = duhamel_apply(w, 0.05)
        expect = 0.05 * linear_propagate(g.to_spectral(), 0.05).to_grid()
        assert np.max(np.abs(out.values - expect.values)) < 1e-10

    def test_second_order_quadrature(self):
        # forcing U_{t'} e^{i alpha t'} g integrates to U_t g (e^{i alpha t}-1)/(i alpha)
        rng = np.random.default_rng(8)
        g = random_band_field(TORUS, rng, band=8.0).to_grid()
        alpha, T = 11.0, 0.5
        errs = []
        for n_steps in (50, 100):
            times = (T / n_steps) * np.arange(n_steps + 1)
            vals = np.stack([
                np.exp(1j * alpha * t)
                * linear_propagate(g.to_spectral(), t).to_grid().values
                for t in times])
            w = Trajectory(TORUS, times, vals)
            out = duhamel_apply(w, T)
            expect = ((np.exp(1j * alpha * T) - 1.0) / (1j * alpha)) \
                * linear_propagate(g.to_spectral(), T).to_grid().values
            errs.append(np.max(np.abs(out.values - expect)))
        assert 3.0 < errs[0] / errs[1] < 5.0

    def test_time_outside_span(self):
        times = 1e-3 * np.arange(11)
        w = Trajectory(TORUS, times, np.zeros((11, 64), complex))
        with pytest.raises(TimeRangeError):
            duhamel_apply(w, 0.02)


class TestPicard:
    def test_zero_data(self):
        res = picard_iterate(GridFunction.zero(TORUS), small_cfg(), 4)
        assert np.all(res.trajectory.values == 0)

    def test_contraction_and_agreement(self):
        dom = Domain("torus", 128)
        rng = np.random.default_rng(9)
        u0 = scaled_to_h1(random_band_field(dom, rng, band=8.0).to_grid(), 0.1)
        cfg = small_cfg(dom=dom, lam=1.0, k=1, dt=1e-3, T=0.05)
        res = picard_iterate(u0, cfg, 8)
        assert res.contracted
        ratios = [res.diff_norms[i + 1] / res.diff_norms[i]
                  for i in range(2) if res.diff_norms[i] > 0]
        assert all(r < 0.5 for r in ratios)
        ref = solve(u0, cfg)
        diff = np.sqrt(np.sum(np.abs(res.trajectory.values - ref.values) ** 2,
                              axis=1) * dom.dx)
        assert np.max(diff) < 1e-6

    def test_longer_window_weakens_contraction(self):
        dom = Domain("torus", 128)
        rng = np.random.default_rng(10)
        med_ratios = []
        for T in (0.0125, 0.025, 0.05):
            ratios = []
            for _ in range(5):
                u0 = scaled_to_h1(random_band_field(dom, rng, band=8.0).to_grid(),
                                  0.3)
                res = picard_iterate(u0, small_cfg(dom=dom, lam=1.0, k=1,
                                                   dt=T / 40, T=T), 4)
                if res.diff_norms[0] > 0:
                    ratios.append(res.diff_norms[1] / res.diff_norms[0])
            med_ratios.append(np.median(ratios))
        assert med_ratios[0] < med_ratios[1] < med_ratios[2]


class TestRescale:
    def _line_traj(self):
        dom = Domain("line", 256, 4)
        u0 = scaled_to_h1(gaussian_packet(dom, 1.0, 1.3, mode=1), 0.3)
        return solve(u0, small_cfg(dom=dom, dt=1e-3, T=0.05))

    def test_identity(self):
        traj = self._line_traj()
        out = rescale(traj, 1)
        assert np.array_equal(out.values, traj.values)

    def test_mass_matching(self):
        traj = self._line_traj()
        for sigma in (2, 4):
            out = rescale(traj, sigma)
            assert np.allclose(out.times, sigma ** 2 * traj.times)
            assert np.max(np.abs(out.mass() - traj.mass())) < 1e-12

    def test_rescaled_data_solves_equation(self):
        traj = self._line_traj()
        out = rescale(traj, 2)
        cfg2 = SolverConfig(out.domain, NonlinearityConfig(0.0, 0, False),
                            4e-3, 0.2)
        re_solved = solve(out.slice_function(0), cfg2)
        rel = np.sqrt(np.sum(np.abs(re_solved.values - out.values) ** 2, axis=1)
                      / np.sum(np.abs(out.values) ** 2, axis=1))
        assert np.max(rel) < 1e-8

    def test_torus_rejected(self):
        times = 1e-3 * np.arange(3)
        traj = Trajectory(TORUS, times, np.zeros((3, 64), complex))
        with pytest.raises(WrongDomainError):
            rescale(traj, 2)

    def test_sigma_validation(self):
        traj = self._line_traj()
        with pytest.raises(ParameterError):
            rescale(traj, 3)
