"""Right-hand sides, their Fourier-side oracles, and dealiasing."""

import numpy as np
import pytest

from dnls_lab.errors import ParameterError, SizeLimitError
from dnls_lab.fields import Domain, GridFunction, SpectralField
from dnls_lab.nonlinear import (NonlinearityConfig, ConvolutionConstraint,
                                power_nonlinearity, quintic_Q_fourier,
                                quintic_Q_general, quintic_Q_physical,
                                rhs_gauged, rhs_original, trilinear_T_fourier,
                                trilinear_T_physical)
from dnls_lab.sampling import plane_wave, random_band_field


def random_small_field(n, seed, band=None, kind="torus", scale=1):
    dom = Domain(kind, n, scale)
    rng = np.random.default_rng(seed)
    band = band if band is not None else dom.xi_max / 2
    return random_band_field(dom, rng, band=band).to_grid()


class TestRhsOriginal:
    def test_zero(self):
        dom = Domain("torus", 64)
        out = rhs_original(GridFunction.zero(dom), NonlinearityConfig())
        assert np.all(out.values == 0)

    def test_single_mode(self):
        dom = Domain("torus", 64)
        A, lam, k = 0.8 - 0.1j, 0.7, 1
        u = plane_wave(dom, A, 1)
        out = rhs_original(u, NonlinearityConfig(lam, k, False))
        # i d_x(|A|^2 u) = -|A|^2 u for mode 1; plus lam |A|^(2k) u
        expected = (-abs(A) ** 2 + lam * abs(A) ** (2 * k)) * u.values
        assert np.max(np.abs(out.values - expected)) < 1e-12

    def test_plane_wave_residual(self):
        # u = A e^{i(x - omega t)} with omega = 1 - |A|^2 + lam |A|^(2k)
        # satisfies i u_t + u_xx = rhs; at t = 0 check the algebraic identity
        dom = Domain("torus", 64)
        A, lam, k = 0.5, 0.3, 2
        omega = 1 - A ** 2 + lam * A ** (2 * k)
        u = plane_wave(dom, A, 1)
        # i u_t = omega u, u_xx = -u
        lhs = omega * u.values - u.values
        rhs_v = rhs_original(u, NonlinearityConfig(lam, k, False)).values
        assert np.max(np.abs(lhs - rhs_v)) < 1e-12

    def test_gauged_config_rejected(self):
        dom = Domain("torus", 64)
        with pytest.raises(ParameterError):
            rhs_original(GridFunction.zero(dom),
                         NonlinearityConfig(0.0, 0, True))


class TestTrilinear:
    def test_constant_field_torus(self):
        dom = Domain("torus", 64)
        v = GridFunction(dom, 0.4 * np.ones(64, complex))
        out = trilinear_T_physical(v, v, v.conj())
        assert np.max(np.abs(out.values)) < 1e-13

    def test_single_mode_torus(self):
        dom = Domain("torus", 64)
        A = 0.9 - 0.3j
        v = plane_wave(dom, A, 1)
        out = trilinear_T_physical(v, v, v.conj())
        # v^2 d_x conj(v) = -i |A|^2 v; the mean correction adds 2i |A|^2 v
        expected = 1j * abs(A) ** 2 * v.values
        assert np.max(np.abs(out.values - expected)) < 1e-12

    def test_single_mode_line_keeps_raw_sign(self):
        dom = Domain("line", 64, 1)
        # line variant: no mean correction
        dom = Domain("line", 64, 2)
        A = 0.9 - 0.3j
        v = GridFunction(dom, A * np.exp(1j * dom.x))  # xi = 1 is on the lattice
        out = trilinear_T_physical(v, v, v.conj())
        expected = -1j * abs(A) ** 2 * v.values
        assert np.max(np.abs(out.values - expected)) < 1e-12

    def test_oracle_zero(self):
        dom = Domain("torus", 32)
        z = SpectralField.zero(dom)
        assert np.all(trilinear_T_fourier(z, z, z).coeffs == 0)

    def test_oracle_single_mode_diagonal_term(self):
        dom = Domain("torus", 32)
        A = 0.6 + 0.2j
        v = plane_wave(dom, A, 1).to_spectral()
        out = trilinear_T_fourier(v, v, v.conj_flip())
        expected = trilinear_T_physical(plane_wave(dom, A, 1),
                                        plane_wave(dom, A, 1),
                                        plane_wave(dom, A, 1).conj()).to_spectral()
        assert np.max(np.abs(out.coeffs - expected.coeffs)) < 1e-12

    @pytest.mark.parametrize("kind,scale", [("torus", 1), ("line", 2)])
    def test_oracle_equivalence_random(self, kind, scale):
        dom = Domain(kind, 32, scale)
        rng = np.random.default_rng(42)
        for _ in range(5):
            v = random_band_field(dom, rng, band=dom.xi_max / 2).to_grid()
            sv = v.to_spectral()
            fast = trilinear_T_physical(v, v, v.conj()).to_spectral()
            oracle = trilinear_T_fourier(sv, sv, sv.conj_flip())
            scale_ = max(np.max(np.abs(fast.coeffs)), 1.0)
            assert np.max(np.abs(fast.coeffs - oracle.coeffs)) < 1e-10 * scale_

    def test_oracle_size_limit(self):
        dom = Domain("torus", 128)
        z = SpectralField.zero(dom)
        with pytest.raises(SizeLimitError):
            trilinear_T_fourier(z, z, z)

    def test_constraint_metadata(self):
        c = ConvolutionConstraint.trilinear(Domain("torus", 32))
        assert c.diagonal_term and len(c.excluded) == 2
        c = ConvolutionConstraint.trilinear(Domain("line", 32, 2))
        assert not c.diagonal_term and c.excluded == ()


class TestQuintic:
    def test_zero(self):
        dom = Domain("torus", 32)
        out = quintic_Q_physical(GridFunction.zero(dom))
        assert np.all(out.values == 0)

    def test_single_mode_torus_annihilates(self):
        dom = Domain("torus", 32)
        v = plane_wave(dom, 0.8, 1)
        out = quintic_Q_physical(v)
        assert np.max(np.abs(out.values)) < 1e-12

    def test_line_is_plain_quintic(self):
        # band * 5 must stay inside the lattice for the pointwise comparison
        dom = Domain("line", 128, 2)
        rng = np.random.default_rng(0)
        v = random_band_field(dom, rng, band=3.0).to_grid()
        out = quintic_Q_general(
            [v, v.conj(), v, v.conj(), v])
        expected = np.abs(v.values) ** 4 * v.values
        assert np.max(np.abs(out.values - expected)) < 1e-10

    def test_mean_subtraction_is_exact(self):
        # the xi = 0 coefficient of (|v|^4 - mean) vanishes identically
        dom = Domain("torus", 32)
        rng = np.random.default_rng(1)
        v = random_band_field(dom, rng, band=8.0).to_grid()
        q = quintic_Q_physical(v)
        # reconstruct the scalar-subtracted factor indirectly: Q + 2mu(...)v
        # has zero mean against conj(v)-free content; directly test the
        # simplest invariant: mean of |v|^4 - (1/2pi) int |v|^4 is zero
        nf = 4 * dom.n_points
        from dnls_lab.fields import SQRT_2PI, _pad_indices
        cpad = np.zeros(nf, complex)
        cpad[_pad_indices(dom.n_points, nf)] = v.to_spectral().coeffs
        vf = np.fft.ifft(cpad) * (SQRT_2PI / (dom.period / nf))
        dens = np.abs(vf) ** 4
        m4 = np.sum(dens) * (dom.period / nf) / (2 * np.pi)
        assert np.sum(dens - m4) * (dom.period / nf) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("kind,scale", [("torus", 1), ("line", 2)])
    def test_oracle_equivalence_random(self, kind, scale):
        dom = Domain(kind, 16, scale)
        rng = np.random.default_rng(7)
        for _ in range(3):
            v = random_band_field(dom, rng, band=dom.xi_max / 2).to_grid()
            sv = v.to_spectral()
            fast = quintic_Q_physical(v).to_spectral()
            oracle = quintic_Q_fourier(
                [sv, sv.conj_flip(), sv, sv.conj_flip(), sv])
            scale_ = max(np.max(np.abs(fast.coeffs)), 1.0)
            assert np.max(np.abs(fast.coeffs - oracle.coeffs)) < 1e-9 * scale_

    def test_oracle_size_limit(self):
        dom = Domain("torus", 64)
        z = SpectralField.zero(dom)
        with pytest.raises(SizeLimitError):
            quintic_Q_fourier([z] * 5)


class TestPowerNonlinearity:
    def test_k0_is_scaling(self):
        dom = Domain("torus", 32)
        rng = np.random.default_rng(2)
        v = random_band_field(dom, rng, band=8.0).to_grid()
        out = power_nonlinearity(v, -1.3, 0)
        assert np.max(np.abs(out.values + 1.3 * v.values)) < 1e-14

    def test_constant_two(self):
        dom = Domain("torus", 32)
        v = GridFunction(dom, 2.0 * np.ones(32, complex))
        out = power_nonlinearity(v, 1.0, 1)
        assert np.max(np.abs(out.values - 8.0)) < 1e-12

    def test_pointwise_modulus_law(self):
        # degree-5 output must stay inside the lattice: band <= xi_max / 5
        dom = Domain("torus", 64)
        rng = np.random.default_rng(3)
        v = random_band_field(dom, rng, band=6.0).to_grid()
        out = power_nonlinearity(v, -2.0, 2)
        expected = 2.0 * np.abs(v.values) ** 5
        assert np.max(np.abs(np.abs(out.values) - expected)) < 1e-10


class TestRhsGauged:
    def test_zero(self):
        dom = Domain("torus", 32)
        out = rhs_gauged(GridFunction.zero(dom), NonlinearityConfig(0, 0, True))
        assert np.all(out.values == 0)

    def test_single_mode_lambda_zero(self):
        dom = Domain("torus", 64)
        A = 0.8 + 0.1j
        v = plane_wave(dom, A, 1)
        out = rhs_gauged(v, NonlinearityConfig(0.0, 0, True))
        # -i (i |A|^2 v) - 0 = |A|^2 v
        expected = abs(A) ** 2 * v.values
        assert np.max(np.abs(out.values - expected)) < 1e-12

    def test_linearity_in_lambda(self):
        dom = Domain("torus", 64)
        rng = np.random.default_rng(4)
        v = random_band_field(dom, rng, band=8.0).to_grid()
        a = rhs_gauged(v, NonlinearityConfig(2.0, 1, True))
        b = rhs_gauged(v, NonlinearityConfig(0.5, 1, True))
        diff = a.values - b.values
        expected = power_nonlinearity(v, 1.5, 1).values
        assert np.max(np.abs(diff - expected)) < 1e-11

    def test_original_config_rejected(self):
        dom = Domain("torus", 32)
        with pytest.raises(ParameterError):
            rhs_gauged(GridFunction.zero(dom), NonlinearityConfig(0, 0, False))

    def test_scalar_pieces_phase_invariant(self):
        dom = Domain("torus", 64)
        rng = np.random.default_rng(5)
        v = random_band_field(dom, rng, band=8.0).to_grid()
        w = GridFunction(dom, v.values * np.exp(0.81j))
        a = rhs_gauged(v, NonlinearityConfig(1.0, 1, True))
        b = rhs_gauged(w, NonlinearityConfig(1.0, 1, True))
        # the whole rhs is equivariant: rhs(e^{i theta} v) = e^{i theta} rhs(v)
        assert np.max(np.abs(b.values - np.exp(0.81j) * a.values)) < 1e-11
