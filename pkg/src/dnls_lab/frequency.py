"""Smooth cutoffs, dyadic projections, Bessel potentials, modulation weights.

The master bump chi is the concrete C-infinity cutoff
    chi(xi) = 1                                   for |xi| <= 1,
    chi(xi) = g(2-|xi|) / (g(2-|xi|) + g(|xi|-1)) for 1 < |xi| < 2,
    chi(xi) = 0                                   for |xi| >= 2,
with g(x) = exp(-1/x) for x > 0 and 0 otherwise.  It is radially
non-increasing and the scaled family chi_T(xi) = chi(xi/T) - chi(2 xi/T)
tiles frequency space: chi_{<=1} + sum_{N>1 dyadic} chi_N == 1.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidDyadicIndexError, InvalidIntervalError
from .fields import SpaceTimeField, SpectralField


def bracket(a):
    """Japanese bracket (1 + a^2)^(1/2); accepts scalars or arrays."""
    a = np.asarray(a, dtype=float)
    out = np.sqrt(1.0 + a * a)
    return float(out) if out.ndim == 0 else out


def _bump_ratio(s: np.ndarray) -> np.ndarray:
    # g(s)/(g(s)+g(1-s)) for s strictly inside (0,1): 0 at s=0+, 1 at s=1-.
    a = np.exp(-1.0 / s)
    b = np.exp(-1.0 / (1.0 - s))
    return a / (a + b)


def smooth_cutoff(xi):
    """The master bump chi; scalar in, scalar out (arrays pass through)."""
    arr = np.atleast_1d(np.asarray(xi, dtype=float))
    t = np.abs(arr)
    out = np.zeros_like(t)
    out[t <= 1.0] = 1.0
    mid = (t > 1.0) & (t < 2.0)
    if np.any(mid):
        out[mid] = _bump_ratio(2.0 - t[mid])
    return float(out[0]) if np.isscalar(xi) or np.ndim(xi) == 0 else out.reshape(np.shape(xi))


def cutoff_low(xi, scale: float):
    """chi_{<=T}(xi) = chi(xi / T)."""
    return smooth_cutoff(np.asarray(xi, dtype=float) / scale)


def cutoff_annulus(xi, scale: float):
    """chi_T(xi) = chi(xi/T) - chi(2 xi/T); supported on T/2 < |xi| < 2T."""
    xi = np.asarray(xi, dtype=float)
    return smooth_cutoff(xi / scale) - smooth_cutoff(2.0 * xi / scale)


def unit_interval_cutoff(x):
    """Smoothed indicator of [0,1]: equals 1 there, vanishes outside (-1, 2)."""
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros_like(arr)
    out[(arr >= 0.0) & (arr <= 1.0)] = 1.0
    rise = (arr > -1.0) & (arr < 0.0)
    if np.any(rise):
        out[rise] = _bump_ratio(arr[rise] + 1.0)
    fall = (arr > 1.0) & (arr < 2.0)
    if np.any(fall):
        out[fall] = _bump_ratio(2.0 - arr[fall])
    return float(out[0]) if np.ndim(x) == 0 else out.reshape(np.shape(x))


def check_dyadic(N) -> int:
    """Validate membership in {1, 2, 4, 8, ...}."""
    n = int(N)
    if n != N or n < 1 or (n & (n - 1)) != 0:
        raise InvalidDyadicIndexError(f"{N!r} is not a dyadic index >= 1")
    return n


def dyadic_range(max_xi: float) -> list[int]:
    """All dyadic blocks that can be active on a lattice with |xi| <= max_xi.

    The list ends at the first power of two >= max_xi; higher blocks vanish
    identically on the lattice, so the returned blocks partition unity there.
    """
    ns = [1]
    while ns[-1] < max_xi:
        ns.append(2 * ns[-1])
    return ns


def dyadic_multiplier(xi: np.ndarray, N) -> np.ndarray:
    """chi_N(xi) for N > 1, chi_{<=1}(xi) for N == 1."""
    n = check_dyadic(N)
    if n == 1:
        return cutoff_low(xi, 1.0)
    return cutoff_annulus(xi, float(n))


def dyadic_projection(f: SpectralField, N) -> SpectralField:
    """Littlewood-Paley block P_N f."""
    mult = dyadic_multiplier(f.domain.xi, N)
    return SpectralField(f.domain, mult * f.coeffs)


def dyadic_projection_spacetime(u: SpaceTimeField, N) -> SpaceTimeField:
    """P_N acting in xi only on a space-time field."""
    mult = dyadic_multiplier(u.domain.xi, N)
    return SpaceTimeField(u.lattice, mult[:, None] * u.coeffs, window=u.window)


def bessel_potential(f: SpectralField, s: float) -> SpectralField:
    """J^s: multiply coefficients by <xi>^s."""
    return SpectralField(f.domain, bracket(f.domain.xi) ** s * f.coeffs)


def bessel_potential_spacetime(u: SpaceTimeField, s: float) -> SpaceTimeField:
    w = bracket(u.domain.xi) ** s
    return SpaceTimeField(u.lattice, w[:, None] * u.coeffs, window=u.window)


def modulation_weight(u: SpaceTimeField, s: float, sign: int) -> SpaceTimeField:
    """Multiply by <tau +/- xi^2>^s on the modulation lattice (sign = +1 or -1)."""
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    xi = u.domain.xi[:, None]
    tau = u.lattice.tau[None, :]
    w = bracket(tau + sign * xi ** 2) ** s
    return SpaceTimeField(u.lattice, w * u.coeffs, window=u.window)


def interval_projection(f: SpectralField, a: float, b: float) -> SpectralField:
    """P_{[a,b]}: multiply by the smoothed indicator of [a, b].

    Equals 1 on [a, b] and vanishes outside (2a - b, 2b - a).
    """
    if not a < b:
        raise InvalidIntervalError(f"need a < b, got [{a}, {b}]")
    mult = unit_interval_cutoff((f.domain.xi - a) / (b - a))
    return SpectralField(f.domain, mult * f.coeffs)
