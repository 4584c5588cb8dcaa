"""Sampling-based verification of the estimate inequalities.

Inequalities with unspecified constants cannot be pass/fail on a single
grid, so every probe reports an empirical sup constant together with a
refinement-stability verdict: stable means the sup moves by less than a
factor of two when the sampling box, resolution or ensemble doubles.
Ratio probes are homogeneous of degree zero in the field amplitudes, so
the reported constants do not depend on the sampler's scale.

The T-refinement probes reuse the same base fields for every window size;
the reported sup-ratio trend across T then reflects the window effect
alone and not sampling noise.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError
from .fields import (Domain, SpaceTimeField, SpectralField, Trajectory,
                     dealiased_product_coeffs)
from .frequency import dyadic_multiplier, dyadic_range
from .multipliers import (REGIME_LABELS, domination_ratio_arrays, sample_points)
from .nonlinear import quintic_Q_general_slices, trilinear_T_slices
from .sampling import random_band_field, random_mode_sum_values
from .spaces import (TimeWindow, besov_norm, cal_y_norm, frak_x_norm,
                     window_trajectory, xsb_norm)
from .solver import free_trajectory


def worker_count() -> int:
    """Worker cap from DNLS_LAB_THREADS (default 1 = serial)."""
    try:
        return max(1, int(os.environ.get("DNLS_LAB_THREADS", "1")))
    except ValueError:
        return 1


def _map_samples(fn, seeds):
    """Deterministic map over pre-drawn seeds, optionally threaded."""
    w = worker_count()
    if w <= 1:
        return [fn(s) for s in seeds]
    with ThreadPoolExecutor(max_workers=w) as pool:
        return list(pool.map(fn, seeds))


@dataclass
class ProbeReport:
    """Outcome of one sampling probe."""

    name: str
    samples: int
    sup_ratio: float
    refinement_stable: bool | None
    params: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.samples <= 0:
            raise ValueError("sample count must be positive")
        if not np.isfinite(self.sup_ratio):
            raise ValueError("empirical constant must be finite")

    def to_json(self) -> dict:
        return {"name": self.name, "samples": self.samples,
                "sup_ratio": self.sup_ratio,
                "refinement_stable": self.refinement_stable,
                "params": self.params, "details": self.details}


def _stable(a: float, b: float, factor: float = 2.0) -> bool:
    hi, lo = max(a, b), min(a, b)
    if lo == 0.0:
        return hi == 0.0
    return hi / lo <= factor


# ---------------------------------------------------------------------------
# multiplier domination
# ---------------------------------------------------------------------------

def _domination_pass(family: str, box: float, n: int, lattice: str,
                     rng: np.random.Generator, delta: float):
    per_case: dict[str, float] = {}
    overall = 0.0
    argmax_point = None
    case2_sup = 0.0
    per_regime = max(1, n // len(REGIME_LABELS))
    for regime in REGIME_LABELS:
        pts = sample_points(rng, per_regime, box, lattice, regime)
        r = domination_ratio_arrays(family, *pts, delta=delta)
        j = int(np.argmax(r))
        per_case[regime] = float(r[j])
        if r[j] > overall:
            overall = float(r[j])
            argmax_point = {"xi": [float(p[j]) for p in pts[:3]],
                            "tau": [float(p[j]) for p in pts[3:]],
                            "regime": regime}
        xi1, xi2, xi3 = pts[0], pts[1], pts[2]
        xi = xi1 + xi2 + xi3
        case2 = (np.abs(xi) <= 2 * np.abs(xi1)) & (np.abs(xi) <= 2 * np.abs(xi2))
        if np.any(case2):
            from .multipliers import eval_multiplier_arrays
            num = eval_multiplier_arrays(family, *pts, delta=delta)
            den = eval_multiplier_arrays("M4" if family == "M" else "Mt4",
                                         *pts, delta=delta)
            ratios = np.where(num == 0, 0.0, num / den)[case2]
            case2_sup = max(case2_sup, float(np.max(ratios)))
    return overall, per_case, argmax_point, case2_sup


def domination_scan(family: str = "M", box: float = 100.0, n: int = 10 ** 5,
                    lattice: str = "Z", delta: float = 1.0 / 24.0,
                    rng: np.random.Generator | None = None) -> ProbeReport:
    """Empirical sup of |M| / sum_j M_j (or the Mt family) over case-labeled
    samples, with a doubled-box stability check."""
    if n < 10 ** 4:
        raise ParameterError("need at least 1e4 samples")
    rng = rng or np.random.default_rng(0)
    sup1, per_case, argmax_point, case2 = _domination_pass(
        family, box, n, lattice, rng, delta)
    sup2, _, _, _ = _domination_pass(family, 2.0 * box, n, lattice, rng, delta)
    return ProbeReport(
        name=f"domination-{family}-{lattice}",
        samples=2 * n,
        sup_ratio=max(sup1, sup2),
        refinement_stable=_stable(sup1, sup2),
        params={"box": box, "lattice": lattice, "delta": delta,
                "sampling": "log-uniform magnitudes, case-labeled regimes"},
        details={"sup_box": sup1, "sup_box_doubled": sup2,
                 "per_case": per_case, "argmax": argmax_point,
                 "case_ii_over_M4": case2})


# ---------------------------------------------------------------------------
# Strichartz probe
# ---------------------------------------------------------------------------

def _strichartz_ratio(u: SpaceTimeField, b: float) -> float:
    den = xsb_norm(u, 0.0, b, +1)
    return u.lp_norm(4.0) / den if den > 0 else 0.0


def _strichartz_ensemble(dom: Domain, n_t: int, dt: float, b: float,
                         ensemble: int, rng: np.random.Generator) -> float:
    times = -0.5 * n_t * dt + dt * np.arange(n_t)
    window = TimeWindow.plateau(min(1.0, 0.45 * n_t * dt))
    sup = 0.0
    band = min(8.0, dom.xi_max / 2)
    for i in range(ensemble):
        if i % 2 == 0:
            vals = random_mode_sum_values(dom, times, rng, band=band)
            traj = Trajectory(dom, times, vals)
        else:
            u0 = random_band_field(dom, rng, band=band).to_grid()
            traj = free_trajectory(u0, times)
        u = window_trajectory(traj, window)
        sup = max(sup, _strichartz_ratio(u, b))
    return sup


def strichartz_probe(b: float = 0.5, ensemble: int = 100,
                     dom: Domain | None = None, n_t: int = 256, dt: float = 0.02,
                     rng: np.random.Generator | None = None) -> ProbeReport:
    """sup of ||u||_{L^4_{t,x}} / ||u||_{X^{0,b,+}} over random windowed
    fields and windowed free evolutions; requires b > 3/8."""
    if not b > 3.0 / 8.0:
        raise ParameterError("the L^4 bound needs b > 3/8")
    rng = rng or np.random.default_rng(0)
    dom = dom or Domain("torus", 32)
    sup1 = _strichartz_ensemble(dom, n_t, dt, b, ensemble, rng)
    sup2 = _strichartz_ensemble(dom, 2 * n_t, dt / 2, b, ensemble, rng)
    return ProbeReport(
        name="strichartz-L4", samples=2 * ensemble,
        sup_ratio=max(sup1, sup2), refinement_stable=_stable(sup1, sup2),
        params={"b": b, "n_points": dom.n_points, "n_t": n_t, "dt": dt},
        details={"sup_coarse": sup1, "sup_refined": sup2})


def strichartz_single_mode_ratio(dom: Domain, mode: float, b: float,
                                 n_t: int = 512, dt: float = 0.01) -> float:
    """Ratio for the windowed free evolution of one Fourier mode."""
    times = -0.5 * n_t * dt + dt * np.arange(n_t)
    u0 = SpectralField.unit_mass(dom, mode).to_grid()
    traj = free_trajectory(u0, times)
    u = window_trajectory(traj, TimeWindow.bump(1.0))
    return _strichartz_ratio(u, b)


# ---------------------------------------------------------------------------
# trilinear / multilinear probes
# ---------------------------------------------------------------------------

def _base_times(dt: float = 1.0 / 128.0, half_span: float = 4.0) -> np.ndarray:
    n_t = int(round(2 * half_span / dt))
    return -half_span + dt * np.arange(n_t)


def _mode_wave(dom: Domain, times: np.ndarray, k: float, char_sign: int = +1,
               amp: complex = 1.0) -> np.ndarray:
    """Travelling wave amp exp(i(k x - char_sign k^2 t)) on the time grid."""
    return amp * np.exp(1j * (k * dom.x[None, :]
                              - char_sign * k * k * np.asarray(times)[:, None]))


def _nested_sups(raw: dict) -> dict:
    """Cumulative max over window scales <= T.

    A field supported in [-T', T'] with T' <= T is admissible for window
    size T, so the empirical sup for T includes every smaller-window
    sample; this mirrors the nesting that makes the true sup constant
    monotone in T.
    """
    ts = sorted(raw, reverse=True)
    out, running = {}, 0.0
    for t in reversed(ts):
        running = max(running, raw[t])
        out[t] = running
    return out


_QUINTIC_TUPLES: list[tuple[int, ...]] | None = None


def _quintic_resonant_tuples() -> list[tuple[int, ...]]:
    """Integer mode tuples (x1..x5) whose conjugate-alternating quintic
    output lands exactly on the characteristic while respecting the torus
    constraints x1 != x2, x3 != x4, x1 - x2 + x3 - x4 != 0."""
    global _QUINTIC_TUPLES
    if _QUINTIC_TUPLES is None:
        found = []
        rng5 = range(-4, 5)
        for x1 in rng5:
            for x2 in rng5:
                if x1 == x2:
                    continue
                for x3 in rng5:
                    for x4 in rng5:
                        if x3 == x4 or x1 - x2 + x3 - x4 == 0:
                            continue
                        for x5 in rng5:
                            out = x1 - x2 + x3 - x4 + x5
                            nu = (x1 ** 2 - x2 ** 2 + x3 ** 2
                                  - x4 ** 2 + x5 ** 2)
                            if out * out == nu:
                                found.append((x1, x2, x3, x4, x5))
        _QUINTIC_TUPLES = found
    return _QUINTIC_TUPLES


def _corollary_rhs(fields: list[SpaceTimeField], s: float,
                   signs: list[int]) -> float:
    """sum_k ||u_k||_{frak X^{s,1/2,sk}} prod_{j!=k} ||u_j||_{frak X^{1/2,1/2,sj}}."""
    half = [frak_x_norm(u, 0.5, 0.5, sg) for u, sg in zip(fields, signs)]
    top = [frak_x_norm(u, s, 0.5, sg) for u, sg in zip(fields, signs)]
    total = 0.0
    for k in range(len(fields)):
        prod = top[k]
        for j in range(len(fields)):
            if j != k:
                prod *= half[j]
        total += prod
    return total


def trilinear_probe(s: float = 0.5, t_values: tuple = (1.0, 0.5, 0.25, 0.125),
                    ensemble: int = 100, dom: Domain | None = None,
                    rng: np.random.Generator | None = None,
                    dt: float = 1.0 / 128.0) -> ProbeReport:
    """Sup ratios of the trilinear derivative estimates across window sizes.

    For each sample a triple of base fields on [-2, 2) is drawn once; for
    every T it is supported in [-T, T] by the plateau window and the two
    ratios  ||T(u1,u2,u3)||_{frak X^{s,-1/2}} / RHS  and
    ||T(u1,u2,u3)||_{cal Y^{s,-1}} / RHS  are evaluated, RHS being the
    s >= 1/2 corollary right-hand side with the minus sign on the third
    slot.  Sups over the ensemble are reported per T.
    """
    if not s >= 0.5:
        raise ParameterError("need s >= 1/2")
    if not all(0 < T <= 1 for T in t_values):
        raise ParameterError("window sizes must lie in (0, 1]")
    rng = rng or np.random.default_rng(0)
    dom = dom or Domain("torus", 32)
    times = _base_times(dt)
    seeds = rng.integers(0, 2 ** 63 - 1, size=ensemble)

    def one(seed):
        r = np.random.default_rng(seed)
        pick = r.random()
        if pick < 0.25:
            # minimal-modulation single-mode tuple: with xi1+xi3 = a and
            # xi2+xi3 = b the output modulation is exactly 2ab, the
            # smallest the excluded hyperplanes allow
            kk = int(r.integers(2, 7))
            a = int(r.integers(1, 3))
            b = int(r.integers(1, 3))
            amps = r.normal(size=3) + 1j * r.normal(size=3)
            base = [_mode_wave(dom, times, kk + a, +1, amps[0]),
                    _mode_wave(dom, times, kk + b, +1, amps[1]),
                    _mode_wave(dom, times, -kk, -1, amps[2])]
        elif pick < 0.5:
            # conjugate pairing puts the output near the first factor's
            # characteristic
            u1 = random_mode_sum_values(dom, times, r)
            u2 = random_mode_sum_values(dom, times, r)
            base = [u1, u2, np.conj(u2)]
        else:
            base = [random_mode_sum_values(dom, times, r),
                    random_mode_sum_values(dom, times, r),
                    random_mode_sum_values(dom, times, r, char_sign=-1)]
        out = {}
        for T in t_values:
            w = TimeWindow.plateau(T)(times)[:, None]
            v1, v2, v3 = (b_ * w for b_ in base)
            tri = trilinear_T_slices(dom, v1, v2, v3)
            lhs = SpaceTimeField.from_time_values(dom, times, tri)
            u = [SpaceTimeField.from_time_values(dom, times, v) for v in (v1, v2, v3)]
            den = _corollary_rhs(u, s, signs=[+1, +1, -1])
            out[T] = (frak_x_norm(lhs, s, -0.5, +1) / den,
                      cal_y_norm(lhs, s, -1.0) / den)
        return out

    results = _map_samples(one, seeds)
    raw_x = {T: max(r[T][0] for r in results) for T in t_values}
    raw_y = {T: max(r[T][1] for r in results) for T in t_values}
    sup_x, sup_y = _nested_sups(raw_x), _nested_sups(raw_y)
    return ProbeReport(
        name="trilinear", samples=ensemble,
        sup_ratio=max(max(sup_x.values()), max(sup_y.values())),
        refinement_stable=None,
        params={"s": s, "t_values": list(t_values), "dt": dt,
                "n_points": dom.n_points, "kind": dom.kind},
        details={"sup_x_by_T": {str(T): v for T, v in sup_x.items()},
                 "sup_y_by_T": {str(T): v for T, v in sup_y.items()},
                 "window_sup_x": {str(T): v for T, v in raw_x.items()},
                 "window_sup_y": {str(T): v for T, v in raw_y.items()}})


def multilinear_probe(k: int = 1, s: float = 0.5,
                      t_values: tuple = (1.0, 0.5, 0.25, 0.125),
                      ensemble: int = 50, dom: Domain | None = None,
                      delta: float = 1.0 / 16.0, quintic: bool = False,
                      rng: np.random.Generator | None = None,
                      dt: float = 1.0 / 128.0) -> ProbeReport:
    """Sup ratios for the power-nonlinearity estimate (k+1 plain factors) or
    the constrained quintic form (quintic=True, five factors with slots 2
    and 4 conjugated)."""
    if k not in (0, 1, 2):
        raise ParameterError("k must be 0, 1 or 2")
    if not 0 < delta < 1.0 / 8.0:
        raise ParameterError("delta must lie in (0, 1/8)")
    if not all(0 < T <= 1 for T in t_values):
        raise ParameterError("window sizes must lie in (0, 1]")
    rng = rng or np.random.default_rng(0)
    dom = dom or Domain("torus", 32)
    times = _base_times(dt)
    n_factors = 5 if quintic else k + 1
    b_out = -3.0 / 8.0 - delta
    seeds = rng.integers(0, 2 ** 63 - 1, size=ensemble)

    def one(seed):
        r = np.random.default_rng(seed)
        pick = r.random()
        if quintic and pick < 0.25:
            modes = _quintic_resonant_tuples()[
                int(r.integers(0, len(_quintic_resonant_tuples())))]
            amps = r.normal(size=5) + 1j * r.normal(size=5)
            base = [_mode_wave(dom, times, m, +1, a)
                    for m, a in zip(modes, amps)]
        elif quintic and pick < 0.5:
            # conjugate-paired saturator: slots (1,2) and (3,4) share a field
            f1 = random_mode_sum_values(dom, times, r)
            f3 = random_mode_sum_values(dom, times, r)
            f5 = random_mode_sum_values(dom, times, r)
            base = [f1, f1, f3, f3, f5]
        elif not quintic and k >= 1 and pick < 0.25:
            # exactly resonant plain-product modes: (a, 0) for two factors,
            # (2a, -a, 2a) for three
            a = int(r.integers(1, 4))
            modes = [a, 0] if k == 1 else [2 * a, -a, 2 * a]
            amps = r.normal(size=k + 1) + 1j * r.normal(size=k + 1)
            base = [_mode_wave(dom, times, m, +1, c)
                    for m, c in zip(modes, amps)]
        elif not quintic and k >= 1 and pick < 0.5:
            # near-DC saturator: all but one factor concentrated at low modes
            base = [random_mode_sum_values(dom, times, r)]
            base += [random_mode_sum_values(dom, times, r, band=2.0)
                     for _ in range(n_factors - 1)]
        else:
            base = [random_mode_sum_values(dom, times, r)
                    for _ in range(n_factors)]
        out = {}
        for T in t_values:
            w = TimeWindow.plateau(T)(times)[:, None]
            vs = [b * w for b in base]
            if quintic:
                args = [vs[0], np.conj(vs[1]), vs[2], np.conj(vs[3]), vs[4]]
                prod = quintic_Q_general_slices(dom, args)
            else:
                prod = vs[0].copy()
                for v in vs[1:]:
                    cs = [np.fft.fft(a, axis=-1) * (dom.dx / np.sqrt(2 * np.pi))
                          for a in (prod, v)]
                    pc = dealiased_product_coeffs(dom, cs)
                    prod = np.fft.ifft(pc, axis=-1) * (np.sqrt(2 * np.pi) / dom.dx)
            lhs = SpaceTimeField.from_time_values(dom, times, prod)
            u = [SpaceTimeField.from_time_values(dom, times, v) for v in vs]
            den = _corollary_rhs(u, s, signs=[+1] * n_factors)
            out[T] = (frak_x_norm(lhs, s, b_out, +1) / den,
                      cal_y_norm(lhs, s, -1.0) / den)
        return out

    results = _map_samples(one, seeds)
    raw_x = {T: max(r[T][0] for r in results) for T in t_values}
    raw_y = {T: max(r[T][1] for r in results) for T in t_values}
    sup_x, sup_y = _nested_sups(raw_x), _nested_sups(raw_y)
    return ProbeReport(
        name="quintic" if quintic else f"multilinear-k{k}", samples=ensemble,
        sup_ratio=max(max(sup_x.values()), max(sup_y.values())),
        refinement_stable=None,
        params={"k": k, "s": s, "delta": delta, "quintic": quintic,
                "t_values": list(t_values), "dt": dt, "kind": dom.kind},
        details={"sup_x_by_T": {str(T): v for T, v in sup_x.items()},
                 "sup_y_by_T": {str(T): v for T, v in sup_y.items()},
                 "window_sup_x": {str(T): v for T, v in raw_x.items()},
                 "window_sup_y": {str(T): v for T, v in raw_y.items()}})


# ---------------------------------------------------------------------------
# dyadic summation checks
# ---------------------------------------------------------------------------

def dyadic_sum_check(u: SpaceTimeField, delta: float = 0.25, s: float = 0.5,
                     b: float = 0.5, similarity: int = 8,
                     small_k: int = 8) -> ProbeReport:
    """Verify the four block-summation inequalities with explicit constants.

    (X)   sum_N N^(-delta) ||P_N u||_X <= (1 + sum_{N>1} N^(-delta)) frak(u)
    (Y)   sum_N ||P_N u||_{X^{s}} <= (1 + 2^delta sum_{N>1} N^(-delta)) frak^{s+delta}(u)
    (XX)  sum_{N1 ~ N} ||P_{N1} u||_X <= (2 floor(log2 C) + 1) frak(u)
    (XXX) sum_{N <= k} ||P_N u||_X <= (floor(log2 k) + 1) frak(u)
    """
    if delta <= 0:
        raise ParameterError("delta must be positive")
    ns = dyadic_range(u.domain.xi_max)
    xi = u.domain.xi
    block = {}
    block_s_plus = {}
    for n in ns:
        m = dyadic_multiplier(xi, n)[:, None]
        bu = SpaceTimeField(u.lattice, m * u.coeffs)
        block[n] = xsb_norm(bu, s, b, +1)
        block_s_plus[n] = xsb_norm(bu, s + delta, b, +1)
    frak = block[1] + (max(block[n] for n in ns[1:]) if len(ns) > 1 else 0.0)
    frak_plus = block_s_plus[1] + (max(block_s_plus[n] for n in ns[1:])
                                   if len(ns) > 1 else 0.0)

    c_x = 1.0 + sum(float(n) ** (-delta) for n in ns[1:])
    lhs_x = sum(float(n) ** (-delta) * block[n] for n in ns)
    ok_x = lhs_x <= c_x * frak * (1 + 1e-12)

    c_y = 1.0 + 2.0 ** delta * sum(float(n) ** (-delta) for n in ns[1:])
    lhs_y = sum(block[n] for n in ns)
    ok_y = lhs_y <= c_y * frak_plus * (1 + 1e-12)

    n_mid = ns[len(ns) // 2]
    sim = [n for n in ns if n_mid / similarity <= n <= n_mid * similarity]
    c_xx = 2 * int(np.floor(np.log2(similarity))) + 1
    lhs_xx = sum(block[n] for n in sim)
    ok_xx = lhs_xx <= c_xx * frak * (1 + 1e-12) and len(sim) <= c_xx

    low = [n for n in ns if n <= small_k]
    c_xxx = int(np.floor(np.log2(small_k))) + 1
    lhs_xxx = sum(block[n] for n in low)
    ok_xxx = lhs_xxx <= c_xxx * frak * (1 + 1e-12) and len(low) <= c_xxx

    all_ok = ok_x and ok_y and ok_xx and ok_xxx
    worst = max(lhs_x / (c_x * frak) if frak else 0.0,
                lhs_y / (c_y * frak_plus) if frak_plus else 0.0,
                lhs_xx / (c_xx * frak) if frak else 0.0,
                lhs_xxx / (c_xxx * frak) if frak else 0.0)
    return ProbeReport(
        name="dyadic-sums", samples=1, sup_ratio=float(worst),
        refinement_stable=None,
        params={"delta": delta, "s": s, "b": b,
                "similarity": similarity, "small_k": small_k},
        details={"ok_X": bool(ok_x), "ok_Y": bool(ok_y),
                 "ok_XX": bool(ok_xx), "ok_XXX": bool(ok_xxx),
                 "all_ok": bool(all_ok),
                 "constants": {"X": c_x, "Y": c_y, "XX": c_xx, "XXX": c_xxx}})


# ---------------------------------------------------------------------------
# Besov product probe
# ---------------------------------------------------------------------------

def _smult_ensemble(dom: Domain, s, s1, s2, ensemble, rng) -> float:
    from .fields import dealiased_product
    sup = 0.0
    for _ in range(ensemble):
        f1 = random_band_field(dom, rng, band=dom.xi_max / 4)
        f2 = random_band_field(dom, rng, band=dom.xi_max / 4)
        prod = dealiased_product([f1, f2]).to_spectral()
        den = besov_norm(f1, s1, np.inf) * besov_norm(f2, s2, np.inf)
        if den > 0:
            sup = max(sup, besov_norm(prod, s, np.inf) / den)
    return sup


def sobolev_mult_probe(s: float = 0.5, s1: float = 0.5, s2: float = 0.75,
                       ensemble: int = 100, n_points: int = 256,
                       kind: str = "torus",
                       rng: np.random.Generator | None = None) -> ProbeReport:
    """sup of ||f1 f2||_{B^s} / (||f1||_{B^{s1}} ||f2||_{B^{s2}}) over random
    pairs, at two resolutions; needs s >= 0, s1, s2 >= s, s1 + s2 - s > 1/2."""
    if s < 0 or s1 < s or s2 < s or not (s1 + s2 - s > 0.5):
        raise ParameterError("need s >= 0, s1, s2 >= s and s1 + s2 - s > 1/2")
    rng = rng or np.random.default_rng(0)
    dom1 = Domain(kind, n_points)
    dom2 = Domain(kind, 2 * n_points)
    sup1 = _smult_ensemble(dom1, s, s1, s2, ensemble, rng)
    sup2 = _smult_ensemble(dom2, s, s1, s2, ensemble, rng)
    return ProbeReport(
        name="besov-product", samples=2 * ensemble,
        sup_ratio=max(sup1, sup2), refinement_stable=_stable(sup1, sup2),
        params={"s": s, "s1": s1, "s2": s2, "n_points": n_points, "kind": kind},
        details={"sup_coarse": sup1, "sup_fine": sup2})
