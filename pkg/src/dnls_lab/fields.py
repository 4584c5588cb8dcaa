"""Uniform periodic grids and the discrete fields living on them.

Transform conventions, fixed here once and used by every other module:

* spatial:   coeff(xi) = dx/sqrt(2 pi) * sum_j exp(-i x_j xi) f(x_j),
  inverted by f(x_j) = sqrt(2 pi)/dx * ifft(coeffs).  With this scaling
  sum_j |f_j|^2 dx == sum_k |coeff_k|^2 dxi  (discrete Plancherel), where
  dxi = 2 pi / period, so dxi == 1 on the 2 pi torus and the spectral sum
  is a plain counting-measure sum there.
* space-time: uhat(xi, tau) = dt/sqrt(2 pi) * sum_l exp(-i t_l tau) * fhat_l(xi),
  i.e. the kernel is exp(-i (x xi + t tau)) with the same symmetric
  normalization on the time axis.

The real line is approximated by a torus of period 2 pi * domain_scale
("line" kind); data must decay well inside the box for the approximation
to be meaningful.  Operations that rely on the decay check it explicitly.

Spectral coefficient arrays are stored in FFT index order (0, 1, ...,
n/2-1, -n/2, ..., -1); ``Domain.xi`` gives the frequency values in the
same order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import DomainMismatchError, TimeRangeError

SQRT_2PI = np.sqrt(2.0 * np.pi)


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Domain:
    """Uniform periodic spatial grid.

    kind          -- "torus" (period 2 pi, integer frequencies) or "line"
                     (period 2 pi * domain_scale, frequencies k/domain_scale).
    n_points      -- number of grid points, a power of two >= 8.
    domain_scale  -- power-of-two box enlargement, 1 for the torus.
    """

    kind: str
    n_points: int
    domain_scale: int = 1

    def __post_init__(self):
        if self.kind not in ("torus", "line"):
            raise ValueError(f"unknown domain kind {self.kind!r}")
        if not (_is_power_of_two(self.n_points) and self.n_points >= 8):
            raise ValueError("n_points must be a power of two >= 8")
        if not _is_power_of_two(self.domain_scale):
            raise ValueError("domain_scale must be a power of two")
        if self.kind == "torus" and self.domain_scale != 1:
            raise ValueError("torus domains have domain_scale == 1")

    @property
    def period(self) -> float:
        return 2.0 * np.pi * self.domain_scale

    @property
    def dx(self) -> float:
        return self.period / self.n_points

    @property
    def dxi(self) -> float:
        return 2.0 * np.pi / self.period

    @cached_property
    def x(self) -> np.ndarray:
        """Grid points: [0, 2 pi) on the torus, [-L/2, L/2) on the line."""
        x0 = 0.0 if self.kind == "torus" else -0.5 * self.period
        return x0 + self.dx * np.arange(self.n_points)

    @cached_property
    def xi(self) -> np.ndarray:
        """Lattice frequencies in FFT order."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.dx)

    @property
    def xi_max(self) -> float:
        return float(np.abs(self.xi).max())

    def require_same(self, other: "Domain"):
        if self != other:
            raise DomainMismatchError(f"domains differ: {self} vs {other}")


class GridFunction:
    """Complex samples of a spatial field on a Domain grid (one time slice)."""

    __slots__ = ("domain", "values")

    def __init__(self, domain: Domain, values: np.ndarray):
        values = np.asarray(values, dtype=np.complex128)
        if values.shape != (domain.n_points,):
            raise ValueError("values shape does not match the grid")
        self.domain = domain
        self.values = values

    @classmethod
    def zero(cls, domain: Domain) -> "GridFunction":
        return cls(domain, np.zeros(domain.n_points, dtype=np.complex128))

    def to_spectral(self) -> "SpectralField":
        coeffs = np.fft.fft(self.values) * (self.domain.dx / SQRT_2PI)
        return SpectralField(self.domain, coeffs)

    def l2_norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.domain.dx))

    def linf_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    def integral(self) -> complex:
        return complex(np.sum(self.values) * self.domain.dx)

    def conj(self) -> "GridFunction":
        return GridFunction(self.domain, np.conj(self.values))

    def copy(self) -> "GridFunction":
        return GridFunction(self.domain, self.values.copy())

    def __add__(self, other: "GridFunction") -> "GridFunction":
        self.domain.require_same(other.domain)
        return GridFunction(self.domain, self.values + other.values)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        self.domain.require_same(other.domain)
        return GridFunction(self.domain, self.values - other.values)

    def __mul__(self, scalar) -> "GridFunction":
        return GridFunction(self.domain, self.values * scalar)

    __rmul__ = __mul__


class SpectralField:
    """Complex Fourier coefficients on the lattice dual to a Domain grid."""

    __slots__ = ("domain", "coeffs")

    def __init__(self, domain: Domain, coeffs: np.ndarray):
        coeffs = np.asarray(coeffs, dtype=np.complex128)
        if coeffs.shape != (domain.n_points,):
            raise ValueError("coeffs shape does not match the lattice")
        self.domain = domain
        self.coeffs = coeffs

    @classmethod
    def zero(cls, domain: Domain) -> "SpectralField":
        return cls(domain, np.zeros(domain.n_points, dtype=np.complex128))

    @classmethod
    def unit_mass(cls, domain: Domain, xi: float) -> "SpectralField":
        """Coefficient 1 at the lattice frequency closest to xi, 0 elsewhere."""
        coeffs = np.zeros(domain.n_points, dtype=np.complex128)
        coeffs[int(np.argmin(np.abs(domain.xi - xi)))] = 1.0
        return cls(domain, coeffs)

    @property
    def xi(self) -> np.ndarray:
        return self.domain.xi

    def to_grid(self) -> GridFunction:
        values = np.fft.ifft(self.coeffs) * (SQRT_2PI / self.domain.dx)
        return GridFunction(self.domain, values)

    def l2_norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.coeffs) ** 2) * self.domain.dxi))

    def conj_flip(self) -> "SpectralField":
        """Coefficients of the complex conjugate: (conj u)^(xi) = conj(u^(-xi))."""
        return SpectralField(self.domain, _conj_reverse(self.coeffs))

    def copy(self) -> "SpectralField":
        return SpectralField(self.domain, self.coeffs.copy())

    def __add__(self, other: "SpectralField") -> "SpectralField":
        self.domain.require_same(other.domain)
        return SpectralField(self.domain, self.coeffs + other.coeffs)

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        self.domain.require_same(other.domain)
        return SpectralField(self.domain, self.coeffs - other.coeffs)

    def __mul__(self, scalar) -> "SpectralField":
        return SpectralField(self.domain, self.coeffs * scalar)

    __rmul__ = __mul__


def _conj_reverse(coeffs: np.ndarray) -> np.ndarray:
    """conj(c[-k]) on an FFT-ordered axis (index 0 and Nyquist map to themselves)."""
    n = coeffs.shape[-1]
    idx = (-np.arange(n)) % n
    return np.conj(coeffs[..., idx])


def spectral_derivative(f):
    """d/dx via multiplication by i xi; the Nyquist mode is zeroed.

    Accepts and returns either a GridFunction or a SpectralField.
    """
    if isinstance(f, GridFunction):
        return spectral_derivative(f.to_spectral()).to_grid()
    dom = f.domain
    mult = 1j * dom.xi.copy()
    mult[dom.n_points // 2] = 0.0
    return SpectralField(dom, mult * f.coeffs)


def _min_pad_factor(degree: int) -> int:
    """Smallest power-of-two pad factor that keeps a degree-m product
    alias-free on the retained band (the coarse Nyquist mode, which the
    truncation zeroes, may still be touched)."""
    p = 1
    while 2 * p < degree + 1:
        p *= 2
    return max(p, 2) if degree > 1 else 1


def _pad_indices(n: int, n_fine: int) -> np.ndarray:
    """Positions of the coarse FFT-ordered modes inside the fine lattice."""
    k = np.fft.fftfreq(n, d=1.0 / n).astype(int)  # 0..n/2-1, -n/2..-1
    return np.mod(k, n_fine)


def dealiased_product_coeffs(
    domain: Domain,
    coeff_arrays: Sequence[np.ndarray],
    conjugate: Sequence[bool] | None = None,
    pad_factor: int = 4,
) -> np.ndarray:
    """Alias-free pointwise product, vectorized over leading axes.

    Inputs and output are FFT-ordered spectral coefficient arrays of shape
    (..., n_points).  Every factor is zero-padded in frequency to pad_factor
    times the base resolution (raised automatically if the polynomial degree
    demands it), multiplied pointwise on the fine grid, and truncated back.
    The coarse Nyquist mode of the result is zeroed; it is the one mode a
    borderline pad factor can contaminate.
    """
    if not coeff_arrays:
        raise ValueError("no factors")
    if conjugate is None:
        conjugate = [False] * len(coeff_arrays)
    n = domain.n_points
    p = max(pad_factor, _min_pad_factor(len(coeff_arrays)))
    nf = p * n
    dxf = domain.period / nf
    idx = _pad_indices(n, nf)

    prod = None
    for c, cj in zip(coeff_arrays, conjugate):
        c = np.asarray(c, dtype=np.complex128)
        cpad = np.zeros(c.shape[:-1] + (nf,), dtype=np.complex128)
        cpad[..., idx] = c
        vals = np.fft.ifft(cpad, axis=-1) * (SQRT_2PI / dxf)
        if cj:
            vals = np.conj(vals)
        prod = vals if prod is None else prod * vals

    cfine = np.fft.fft(prod, axis=-1) * (dxf / SQRT_2PI)
    out = cfine[..., idx]
    out[..., n // 2] = 0.0
    return out


def dealiased_product(
    factors: Sequence,
    conjugate: Sequence[bool] | None = None,
    pad_factor: int = 4,
) -> GridFunction:
    """Alias-free pointwise product of GridFunction/SpectralField factors."""
    dom = factors[0].domain
    coeffs = []
    for f in factors:
        dom.require_same(f.domain)
        coeffs.append(f.coeffs if isinstance(f, SpectralField) else f.to_spectral().coeffs)
    out = dealiased_product_coeffs(dom, coeffs, conjugate, pad_factor)
    return SpectralField(dom, out).to_grid()


@dataclass
class Trajectory:
    """Time-ordered solution samples: values[l] is the slice at times[l].

    times are uniformly spaced and strictly increasing; diagnostics carries
    solver metadata (per-slice mass, integrator info, ...).
    """

    domain: Domain
    times: np.ndarray
    values: np.ndarray  # (n_slices, n_points) complex physical samples
    config: object = None
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.values = np.asarray(self.values, dtype=np.complex128)
        if self.values.shape != (self.times.size, self.domain.n_points):
            raise ValueError("trajectory shape mismatch")
        if self.times.size >= 2:
            steps = np.diff(self.times)
            if np.any(steps <= 0):
                raise ValueError("times must be strictly increasing")
            if not np.allclose(steps, steps[0], rtol=1e-9, atol=1e-12):
                raise ValueError("times must be uniformly spaced")

    @property
    def n_slices(self) -> int:
        return self.times.size

    @property
    def dt(self) -> float:
        if self.times.size < 2:
            raise ValueError("trajectory has fewer than two slices")
        return float(self.times[1] - self.times[0])

    def slice_function(self, l: int) -> GridFunction:
        return GridFunction(self.domain, self.values[l])

    def index_of_time(self, t: float) -> int:
        j = int(np.argmin(np.abs(self.times - t)))
        if abs(self.times[j] - t) > 1e-9 * max(1.0, abs(t)):
            raise TimeRangeError(f"t={t} is not a slice time of the trajectory")
        return j

    def mass(self) -> np.ndarray:
        """L2 norm of every slice."""
        return np.sqrt(np.sum(np.abs(self.values) ** 2, axis=1) * self.domain.dx)

    def map_slices(self, fn) -> "Trajectory":
        out = np.stack([fn(GridFunction(self.domain, v)).values for v in self.values])
        return Trajectory(self.domain, self.times.copy(), out,
                          config=self.config, diagnostics=dict(self.diagnostics))


@dataclass(frozen=True)
class ModulationLattice:
    """(xi, tau) lattice dual to a uniformly sampled time span.

    dtau = 2 pi / (n_t * dt) and tau_max = pi / dt are fixed by discrete
    Fourier duality; tau values run over dtau * {-n_t/2, ..., n_t/2 - 1}
    in FFT order.  t0 is the first sample time of the underlying span.
    """

    domain: Domain
    n_t: int
    dt: float
    t0: float

    def __post_init__(self):
        if self.n_t < 2 or self.dt <= 0:
            raise ValueError("need n_t >= 2 and dt > 0")

    @property
    def span(self) -> float:
        return self.n_t * self.dt

    @property
    def dtau(self) -> float:
        return 2.0 * np.pi / self.span

    @property
    def tau_max(self) -> float:
        return np.pi / self.dt

    @cached_property
    def tau(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.n_t, d=self.dt)

    @cached_property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.n_t)


class SpaceTimeField:
    """Coefficients on a ModulationLattice; coeffs[k, m] sits at (xi_k, tau_m).

    window records the time window used to build the field, when any.
    """

    __slots__ = ("lattice", "coeffs", "window")

    def __init__(self, lattice: ModulationLattice, coeffs: np.ndarray, window=None):
        coeffs = np.asarray(coeffs, dtype=np.complex128)
        if coeffs.shape != (lattice.domain.n_points, lattice.n_t):
            raise ValueError("coeffs shape does not match the lattice")
        self.lattice = lattice
        self.coeffs = coeffs
        self.window = window

    @property
    def domain(self) -> Domain:
        return self.lattice.domain

    @classmethod
    def zero(cls, lattice: ModulationLattice) -> "SpaceTimeField":
        return cls(lattice, np.zeros((lattice.domain.n_points, lattice.n_t),
                                     dtype=np.complex128))

    @classmethod
    def from_time_values(cls, domain: Domain, times: np.ndarray,
                         values: np.ndarray, window=None) -> "SpaceTimeField":
        """Build from physical samples values[l, j] = u(x_j, t_l)."""
        times = np.asarray(times, dtype=float)
        values = np.asarray(values, dtype=np.complex128)
        dt = float(times[1] - times[0])
        lat = ModulationLattice(domain, times.size, dt, float(times[0]))
        # spatial transform slice-by-slice, then the tau transform along time
        slices_hat = np.fft.fft(values, axis=1) * (domain.dx / SQRT_2PI)
        g = slices_hat.T  # (n_points, n_t)
        ghat = np.fft.fft(g, axis=1) * (dt / SQRT_2PI)
        phase = np.exp(-1j * lat.t0 * lat.tau)
        return cls(lat, ghat * phase[None, :], window=window)

    def to_time_values(self) -> np.ndarray:
        """Physical samples u(x_j, t_l), shape (n_t, n_points)."""
        lat = self.lattice
        phase = np.exp(1j * lat.t0 * lat.tau)
        g = np.fft.ifft(self.coeffs * phase[None, :], axis=1) * (SQRT_2PI / lat.dt)
        slices_hat = g.T
        return np.fft.ifft(slices_hat, axis=1) * (SQRT_2PI / self.domain.dx)

    def conj(self) -> "SpaceTimeField":
        """Coefficients of conj(u): conj of the value at (-xi, -tau)."""
        c = _conj_reverse(self.coeffs)          # flip tau axis
        n = self.coeffs.shape[0]
        idx = (-np.arange(n)) % n               # flip xi axis (already conjugated)
        return SpaceTimeField(self.lattice, c[idx, :], window=self.window)

    def l2_norm(self) -> float:
        w = self.domain.dxi * self.lattice.dtau
        return float(np.sqrt(np.sum(np.abs(self.coeffs) ** 2) * w))

    def lp_norm(self, p: float) -> float:
        """Space-time Lebesgue norm from the physical samples."""
        vals = self.to_time_values()
        w = self.domain.dx * self.lattice.dt
        return float((np.sum(np.abs(vals) ** p) * w) ** (1.0 / p))

    def scaled(self, factor: complex) -> "SpaceTimeField":
        return SpaceTimeField(self.lattice, self.coeffs * factor, window=self.window)

    def __add__(self, other: "SpaceTimeField") -> "SpaceTimeField":
        if self.lattice != other.lattice:
            raise DomainMismatchError("space-time lattices differ")
        return SpaceTimeField(self.lattice, self.coeffs + other.coeffs)

    def __sub__(self, other: "SpaceTimeField") -> "SpaceTimeField":
        if self.lattice != other.lattice:
            raise DomainMismatchError("space-time lattices differ")
        return SpaceTimeField(self.lattice, self.coeffs - other.coeffs)
