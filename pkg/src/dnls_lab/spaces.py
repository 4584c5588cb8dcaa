"""Norm evaluation on discrete fields.

Spatial norms (Sobolev, Besov) act on SpectralField; space-time norms
(X/Y/Z families and their dyadic-sup variants) act on SpaceTimeField.
All mixed norms use Riemann quadrature weights dxi and dtau; on the
2 pi torus dxi == 1 and the xi sums are counting-measure sums.

Restriction norms over a finite time interval are handled through one
canonical windowed extension (window_trajectory): multiply the trajectory
by a smooth time window and transform; the resulting value is an upper
bound for the infimum over all extensions, which suffices for every
monotone check performed here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ExtensionError
from .fields import SpaceTimeField, SpectralField, Trajectory
from .frequency import (bracket, cutoff_low, dyadic_multiplier, dyadic_range,
                        smooth_cutoff)


def sobolev_norm(f: SpectralField, s: float) -> float:
    """H^s norm: the L2 norm of <xi>^s fhat on the lattice."""
    w = bracket(f.domain.xi) ** (2.0 * s)
    return float(np.sqrt(np.sum(w * np.abs(f.coeffs) ** 2) * f.domain.dxi))


def _block_l2_norms(f: SpectralField) -> tuple[list[int], np.ndarray]:
    ns = dyadic_range(f.domain.xi_max)
    mags = np.abs(f.coeffs) ** 2 * f.domain.dxi
    norms = np.array([
        np.sqrt(np.sum(dyadic_multiplier(f.domain.xi, n) ** 2 * mags)) for n in ns
    ])
    return ns, norms


def besov_norm(f: SpectralField, s: float, q: float = np.inf) -> float:
    """B^s_{2,q} norm with q in {2, inf}: low block plus the weighted tail.

    q = inf takes the sup of N^s ||P_N f|| over dyadic N > 1; q = 2 takes
    the l2 sum of the same numbers.
    """
    if q not in (2, np.inf):
        raise ValueError("q must be 2 or inf")
    ns, norms = _block_l2_norms(f)
    low = norms[0]
    if len(ns) == 1:
        return float(low)
    weighted = np.array([n ** s for n in ns[1:]]) * norms[1:]
    tail = np.max(weighted) if q == np.inf else np.sqrt(np.sum(weighted ** 2))
    return float(low + tail)


def _xsb_weight(u: SpaceTimeField, s: float, b: float, sign: int) -> np.ndarray:
    xi = u.domain.xi[:, None]
    tau = u.lattice.tau[None, :]
    return bracket(xi) ** s * bracket(tau + sign * xi ** 2) ** b


def xsb_norm(u: SpaceTimeField, s: float, b: float, sign: int = +1) -> float:
    """X^{s,b,+/-} norm: weighted L2 over the (xi, tau) lattice."""
    w = _xsb_weight(u, s, b, sign)
    quad = u.domain.dxi * u.lattice.dtau
    return float(np.sqrt(np.sum((w * np.abs(u.coeffs)) ** 2) * quad))


def ysb_norm(u: SpaceTimeField, s: float, b: float) -> float:
    """Y^{s,b} norm: inner L1 in tau, outer L2 in xi (sign + weight)."""
    w = _xsb_weight(u, s, b, +1)
    inner = np.sum(w * np.abs(u.coeffs), axis=1) * u.lattice.dtau
    return float(np.sqrt(np.sum(inner ** 2) * u.domain.dxi))


def zs_norm(u: SpaceTimeField, s: float) -> float:
    """Z^s = X^{s,1/2} + Y^{s,0}."""
    return xsb_norm(u, s, 0.5, +1) + ysb_norm(u, s, 0.0)


def _blockwise(u: SpaceTimeField, norm_fn: Callable[[SpaceTimeField], float]) -> float:
    """Low-block norm plus the sup over the higher dyadic blocks."""
    ns = dyadic_range(u.domain.xi_max)
    xi = u.domain.xi
    vals = []
    for n in ns:
        mult = dyadic_multiplier(xi, n)
        block = SpaceTimeField(u.lattice, mult[:, None] * u.coeffs)
        vals.append(norm_fn(block))
    if len(vals) == 1:
        return float(vals[0])
    return float(vals[0] + max(vals[1:]))


def frak_x_norm(u: SpaceTimeField, s: float, b: float, sign: int = +1) -> float:
    """||P_1 u||_{X^{s,b,sign}} + sup_{N>1} ||P_N u||_{X^{s,b,sign}}."""
    return _blockwise(u, lambda v: xsb_norm(v, s, b, sign))


def cal_y_norm(u: SpaceTimeField, s: float, b: float) -> float:
    return _blockwise(u, lambda v: ysb_norm(v, s, b))


def cal_z_norm(u: SpaceTimeField, s: float) -> float:
    return _blockwise(u, lambda v: zs_norm(v, s))


def intersection_norm(u: SpaceTimeField, s: float, b: float) -> float:
    """max of the dyadic-sup X^{s,b} norm and the dyadic-sup Y^{s,-1} norm."""
    return max(frak_x_norm(u, s, b, +1), cal_y_norm(u, s, -1.0))


def xy_embedding_constant(u: SpaceTimeField, b1: float, b2: float) -> float:
    """Exact Cauchy-Schwarz constant with Y^{s,b1} <= C X^{s,b2,+} on u's lattice.

    C = max_xi sqrt(sum_tau <tau + xi^2>^{2(b1-b2)} dtau); the inequality
    then holds verbatim for every field on the lattice.
    """
    if not b2 > b1 + 0.5:
        raise ValueError("need b2 > b1 + 1/2")
    xi = u.domain.xi[:, None]
    tau = u.lattice.tau[None, :]
    s = np.sum(bracket(tau + xi ** 2) ** (2.0 * (b1 - b2)), axis=1) * u.lattice.dtau
    return float(np.sqrt(np.max(s)))


@dataclass(frozen=True)
class TimeWindow:
    """Smooth time cutoff w(t) with known support (t_lo, t_hi)."""

    fn: Callable[[np.ndarray], np.ndarray]
    t_lo: float
    t_hi: float
    label: str

    def __call__(self, t):
        return self.fn(np.asarray(t, dtype=float))

    @classmethod
    def bump(cls, scale: float = 1.0) -> "TimeWindow":
        """chi(t / scale): plateau |t| <= scale, support |t| < 2 scale."""
        return cls(lambda t: smooth_cutoff(t / scale), -2.0 * scale, 2.0 * scale,
                   f"chi(t/{scale:g})")

    @classmethod
    def plateau(cls, t_support: float) -> "TimeWindow":
        """chi(2t / T): equals 1 for |t| <= T/2, vanishes for |t| >= T."""
        return cls(lambda t: cutoff_low(t, 0.5 * t_support), -t_support, t_support,
                   f"chi(2t/{t_support:g})")

    @classmethod
    def annulus(cls, scale: float) -> "TimeWindow":
        """chi_T(t): supported on T/2 < |t| < 2T."""
        from .frequency import cutoff_annulus
        return cls(lambda t: cutoff_annulus(t, scale), -2.0 * scale, 2.0 * scale,
                   f"chi_{scale:g}(t)")


def window_trajectory(traj: Trajectory, window: TimeWindow) -> SpaceTimeField:
    """Multiply a trajectory by a time window and transform to (xi, tau).

    The window support must lie inside the trajectory's time span; the
    result is one admissible extension of the restricted solution, hence
    an upper bound representative for restriction norms.
    """
    t0, t1 = traj.times[0], traj.times[-1]
    if window.t_lo < t0 - 1e-12 or window.t_hi > t1 + float(traj.times[1] - traj.times[0]) + 1e-12:
        raise ExtensionError(
            f"window support ({window.t_lo:g}, {window.t_hi:g}) exceeds the "
            f"trajectory span [{t0:g}, {t1:g}]")
    w = window(traj.times)
    vals = traj.values * np.asarray(w)[:, None]
    return SpaceTimeField.from_time_values(traj.domain, traj.times, vals, window=window)
