"""Right-hand-side nonlinearities and their Fourier-side oracles.

Physical-space evaluation is the fast path: pointwise products are
dealiased by zero padding (see fields.dealiased_product_coeffs) and
derivatives act spectrally.  The Fourier-side forms evaluate the same
operations as explicit constrained convolution sums; they are brute-force
cross-checks meant to catch sign or constraint transcription errors, so
they are deliberately written index-by-index and limited to small grids.

With the package's transform conventions the discrete convolution
constants are (2 pi)^-1 * dxi^2 for the trilinear form and
(2 pi)^-2 * dxi^4 for the quintic form; both are pinned by the
single-mode tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, SizeLimitError
from .fields import (Domain, GridFunction, SpectralField,
                     dealiased_product_coeffs)

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class NonlinearityConfig:
    """lam * |u|^(2 k_power) u strength plus the gauged/original switch."""

    lam: float = 0.0
    k_power: int = 0
    gauged: bool = False

    def __post_init__(self):
        if self.k_power < 0 or int(self.k_power) != self.k_power:
            raise ParameterError("k_power must be a nonnegative integer")


@dataclass(frozen=True)
class ConvolutionConstraint:
    """Hyperplanes excluded from a torus convolution sum (empty on the line)."""

    excluded: tuple[str, ...]
    diagonal_term: bool

    @classmethod
    def trilinear(cls, domain: Domain) -> "ConvolutionConstraint":
        if domain.kind == "torus":
            return cls(("xi1 != xi", "xi2 != xi"), diagonal_term=True)
        return cls((), diagonal_term=False)

    @classmethod
    def quintic(cls, domain: Domain) -> "ConvolutionConstraint":
        if domain.kind == "torus":
            return cls(("xi1+xi2+xi3+xi4 != 0", "xi1+xi2 != 0", "xi3+xi4 != 0"),
                       diagonal_term=False)
        return cls((), diagonal_term=False)


def _deriv_mult(dom: Domain) -> np.ndarray:
    m = 1j * dom.xi.copy()
    m[dom.n_points // 2] = 0.0
    return m


def _integrals_of_pair(dom: Domain, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # int a*b dx over the box; exact for combined band < n, which holds for
    # pairs of lattice fields away from Nyquist
    return np.sum(a * b, axis=-1) * dom.dx


# ---------------------------------------------------------------------------
# trilinear derivative term
# ---------------------------------------------------------------------------

def trilinear_T_slices(dom: Domain, v1: np.ndarray, v2: np.ndarray, v3: np.ndarray,
                       pad_factor: int = 4) -> np.ndarray:
    """General trilinear derivative form on arrays of time slices (..., n).

    Line:  v1 * v2 * d_x v3.
    Torus: the same minus the two mean corrections
           (1/2pi) (int v2 d_x v3) v1 + (1/2pi) (int v1 d_x v3) v2,
    which is the physical-space counterpart of excluding the xi1 = xi and
    xi2 = xi hyperplanes from the convolution sum.
    """
    c1 = np.fft.fft(v1, axis=-1) * (dom.dx / np.sqrt(TWO_PI))
    c2 = np.fft.fft(v2, axis=-1) * (dom.dx / np.sqrt(TWO_PI))
    c3 = np.fft.fft(v3, axis=-1) * (dom.dx / np.sqrt(TWO_PI))
    d3 = _deriv_mult(dom) * c3
    cube = dealiased_product_coeffs(dom, [c1, c2, d3], pad_factor=pad_factor)
    out = np.fft.ifft(cube, axis=-1) * (np.sqrt(TWO_PI) / dom.dx)
    if dom.kind == "torus":
        dxv3 = np.fft.ifft(d3, axis=-1) * (np.sqrt(TWO_PI) / dom.dx)
        i23 = _integrals_of_pair(dom, v2, dxv3)
        i13 = _integrals_of_pair(dom, v1, dxv3)
        out = out - (i23[..., None] * v1 + i13[..., None] * v2) / TWO_PI
    return out


def trilinear_T_physical(v1: GridFunction, v2: GridFunction, v3: GridFunction,
                         pad_factor: int = 4) -> GridFunction:
    """Trilinear derivative term for one time slice; the diagonal call is
    trilinear_T_physical(v, v, v.conj())."""
    v1.domain.require_same(v2.domain)
    v1.domain.require_same(v3.domain)
    out = trilinear_T_slices(v1.domain, v1.values, v2.values, v3.values, pad_factor)
    return GridFunction(v1.domain, out)


def trilinear_T_fourier(f1: SpectralField, f2: SpectralField, f3: SpectralField,
                        size_limit: int = 64) -> SpectralField:
    """Constrained-convolution oracle for the trilinear term.

    Torus: sum over k1+k2+k3 = k with k1, k2 != k, plus the diagonal term
    f1(k) f2(k) (i xi(k)) f3(-k).  Line: the plain convolution sum.  Cost
    is O(n^2) per output mode, hence the size limit.
    """
    dom = f1.domain
    dom.require_same(f2.domain)
    dom.require_same(f3.domain)
    n = dom.n_points
    if n > size_limit:
        raise SizeLimitError(f"trilinear oracle limited to n <= {size_limit}")
    k = np.rint(np.fft.fftfreq(n, d=1.0 / n)).astype(int)  # integer mode index
    kmin, kmax = k.min(), k.max()
    pos = np.argsort(k)          # position of mode value k in ascending order
    sorted_k = k[pos]

    def fetch(arr, kk):
        # coefficient at integer mode kk (0 outside the lattice)
        inside = (kk >= kmin) & (kk <= kmax)
        kk_idx = np.mod(kk, n)
        vals = arr[kk_idx]
        return np.where(inside, vals, 0.0)

    c1, c2, c3 = f1.coeffs, f2.coeffs, f3.coeffs
    xi3_of = lambda kk: kk * dom.dxi
    K1, K2 = np.meshgrid(k, k, indexing="ij")
    out = np.zeros(n, dtype=np.complex128)
    constrained = dom.kind == "torus"
    for i, kk in enumerate(k):
        K3 = kk - K1 - K2
        mask = (K3 >= kmin) & (K3 <= kmax)
        if constrained:
            mask &= (K1 != kk) & (K2 != kk)
        term = (c1[np.mod(K1, n)] * c2[np.mod(K2, n)]
                * (1j * xi3_of(K3)) * fetch(c3, K3))
        acc = np.sum(np.where(mask, term, 0.0))
        if constrained and -kk >= kmin and -kk <= kmax:
            acc += c1[i] * c2[i] * (1j * kk * dom.dxi) * c3[np.mod(-kk, n)]
        out[i] = acc
    out *= dom.dxi ** 2 / TWO_PI
    out[n // 2] = 0.0  # the fold mode is outside both paths' contract
    return SpectralField(dom, out)


# ---------------------------------------------------------------------------
# quintic term
# ---------------------------------------------------------------------------

def quintic_Q_general_slices(dom: Domain, w: list[np.ndarray],
                             pad_factor: int = 4) -> np.ndarray:
    """General five-factor form on arrays of time slices (..., n).

    Line:  w1 w2 w3 w4 w5.
    Torus: the inclusion-exclusion complement of the hyperplanes
    k1+k2+k3+k4 = 0, k1+k2 = 0, k3+k4 = 0:
        P - (1/2pi)(int w1 w2 w3 w4) w5
          - (1/2pi)(int w1 w2) w3 w4 w5 - (1/2pi)(int w3 w4) w1 w2 w5
          + 2 (1/2pi)^2 (int w1 w2)(int w3 w4) w5.
    """
    if len(w) != 5:
        raise ValueError("need exactly five factors")
    cs = [np.fft.fft(v, axis=-1) * (dom.dx / np.sqrt(TWO_PI)) for v in w]
    to_phys = lambda c: np.fft.ifft(c, axis=-1) * (np.sqrt(TWO_PI) / dom.dx)
    full = to_phys(dealiased_product_coeffs(dom, cs, pad_factor=pad_factor))
    if dom.kind == "line":
        return full
    i12 = _integrals_of_pair(dom, w[0], w[1])
    i34 = _integrals_of_pair(dom, w[2], w[3])
    # int w1 w2 w3 w4 dx: the truncation keeps the zero mode exact, so the
    # grid sum of the alias-free quadruple product integrates it exactly
    quad = to_phys(dealiased_product_coeffs(dom, cs[:4], pad_factor=pad_factor))
    i1234 = np.sum(quad, axis=-1) * dom.dx
    t345 = to_phys(dealiased_product_coeffs(dom, cs[2:], pad_factor=pad_factor))
    t125 = to_phys(dealiased_product_coeffs(dom, [cs[0], cs[1], cs[4]],
                                            pad_factor=pad_factor))
    return (full
            - (i1234[..., None] * w[4]) / TWO_PI
            - (i12[..., None] * t345 + i34[..., None] * t125) / TWO_PI
            + 2.0 * (i12 * i34)[..., None] * w[4] / TWO_PI ** 2)


def quintic_Q_physical(v: GridFunction, pad_factor: int = 4) -> GridFunction:
    """Diagonal quintic term: |v|^4 v on the line; on the torus the
    mean-subtracted combination, via the general form with (v, conj v,
    v, conj v, v)."""
    vb = np.conj(v.values)
    out = quintic_Q_general_slices(v.domain, [v.values, vb, v.values, vb, v.values],
                                   pad_factor)
    return GridFunction(v.domain, out)


def quintic_Q_general(factors: list[GridFunction], pad_factor: int = 4) -> GridFunction:
    dom = factors[0].domain
    for f in factors[1:]:
        dom.require_same(f.domain)
    out = quintic_Q_general_slices(dom, [f.values for f in factors], pad_factor)
    return GridFunction(dom, out)


def quintic_Q_fourier(fs: list[SpectralField], size_limit: int = 32) -> SpectralField:
    """Constrained-convolution oracle for the quintic term.

    Torus: sum over k1+..+k5 = k excluding k1+k2+k3+k4 = 0, k1+k2 = 0 and
    k3+k4 = 0.  Line: the plain sum.  O(n^4) per output mode.
    """
    if len(fs) != 5:
        raise ValueError("need exactly five factors")
    dom = fs[0].domain
    for f in fs[1:]:
        dom.require_same(f.domain)
    n = dom.n_points
    if n > size_limit:
        raise SizeLimitError(f"quintic oracle limited to n <= {size_limit}")
    k = np.rint(np.fft.fftfreq(n, d=1.0 / n)).astype(int)
    kmin, kmax = k.min(), k.max()
    c = [f.coeffs for f in fs]
    K1 = k[:, None, None, None]
    K2 = k[None, :, None, None]
    K3 = k[None, None, :, None]
    K4 = k[None, None, None, :]
    a = (c[0][:, None, None, None] * c[1][None, :, None, None]
         * c[2][None, None, :, None] * c[3][None, None, None, :])
    ksum = K1 + K2 + K3 + K4
    base_mask = np.ones(ksum.shape, dtype=bool)
    if dom.kind == "torus":
        base_mask &= (ksum != 0) & ((K1 + K2) != 0) & ((K3 + K4) != 0)
    out = np.zeros(n, dtype=np.complex128)
    for i, kk in enumerate(k):
        K5 = kk - ksum
        mask = base_mask & (K5 >= kmin) & (K5 <= kmax)
        term = a * c[4][np.mod(K5, n)]
        out[i] = np.sum(np.where(mask, term, 0.0))
    out *= dom.dxi ** 4 / TWO_PI ** 2
    out[n // 2] = 0.0  # the fold mode is outside both paths' contract
    return SpectralField(dom, out)


# ---------------------------------------------------------------------------
# power term and assembled right-hand sides
# ---------------------------------------------------------------------------

def power_nonlinearity(v: GridFunction, lam: float, k: int,
                       pad_factor: int = 4) -> GridFunction:
    """lam |v|^(2k) v, dealiased at the degree-(2k+1) product."""
    if k < 0:
        raise ParameterError("k must be >= 0")
    if lam == 0.0:
        return GridFunction(v.domain, np.zeros_like(v.values))
    if k == 0:
        return GridFunction(v.domain, lam * v.values)
    c = v.to_spectral().coeffs
    coeffs = [c] * (2 * k + 1)
    conj = [False, True] * k + [False]
    out = dealiased_product_coeffs(v.domain, coeffs, conj, pad_factor)
    vals = np.fft.ifft(out) * (np.sqrt(TWO_PI) / v.domain.dx)
    return GridFunction(v.domain, lam * vals)


def rhs_original(u: GridFunction, cfg: NonlinearityConfig,
                 pad_factor: int = 4) -> GridFunction:
    """i d_x(|u|^2 u) + lam |u|^(2k) u."""
    if cfg.gauged:
        raise ParameterError("rhs_original requires cfg.gauged = False")
    c = u.to_spectral().coeffs
    cube = dealiased_product_coeffs(u.domain, [c, c, c], [False, False, True],
                                    pad_factor)
    dcube = _deriv_mult(u.domain) * cube
    vals = 1j * np.fft.ifft(dcube) * (np.sqrt(TWO_PI) / u.domain.dx)
    out = GridFunction(u.domain, vals)
    if cfg.lam != 0.0:
        out = out + power_nonlinearity(u, cfg.lam, cfg.k_power, pad_factor)
    return out


def rhs_gauged(v: GridFunction, cfg: NonlinearityConfig,
               pad_factor: int = 4) -> GridFunction:
    """-i T(v) - Q(v)/2 + lam |v|^(2k) v with the domain-correct T, Q."""
    if not cfg.gauged:
        raise ParameterError("rhs_gauged requires cfg.gauged = True")
    tri = trilinear_T_slices(v.domain, v.values, v.values, np.conj(v.values),
                             pad_factor)
    quint = quintic_Q_physical(v, pad_factor).values
    vals = -1j * tri - 0.5 * quint
    out = GridFunction(v.domain, vals)
    if cfg.lam != 0.0:
        out = out + power_nonlinearity(v, cfg.lam, cfg.k_power, pad_factor)
    return out


def rhs(u: GridFunction, cfg: NonlinearityConfig, pad_factor: int = 4) -> GridFunction:
    return rhs_gauged(u, cfg, pad_factor) if cfg.gauged else rhs_original(u, cfg, pad_factor)
