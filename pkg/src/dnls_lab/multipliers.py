"""Trilinear convolution multipliers and the resonance identity.

Points live on the convolution hyperplane xi1+xi2+xi3 = xi,
tau1+tau2+tau3 = tau; they are constructed from the free coordinates so
the constraint holds exactly.  The modulation magnitudes

    A = {|tau + xi^2|, |tau1 + xi1^2|, |tau2 + xi2^2|, |tau3 - xi3^2|}

satisfy the algebraic identity

    tau + xi^2 - (tau1 + xi1^2 + tau2 + xi2^2 + tau3 - xi3^2)
        = 2 (xi - xi1)(xi - xi2),   |(xi-xi1)(xi-xi2)| = |xi1+xi3||xi2+xi3|,

so 4 max A >= 2 |xi1+xi3||xi2+xi3|: far from the characteristic at least
one factor carries a large modulation.  The multiplier family M, M0..M4
splits the trilinear symbol by which element of A is maximal (ties go to
the lowest index, making the indicator sets a true partition); the "Mt"
family is the same divided by <tau + xi^2>^(1/2), with Mt0 carrying the
delta-dependent weights used near the resonant set.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .frequency import bracket

REGIME_LABELS = ("uniform", "I", "IIa", "IIb1+", "IIb1-", "IIb2",
                 "IIIa1", "IIIa2", "IIIb", "IIIc")

MULTIPLIER_TAGS = ("M", "M0", "M1", "M2", "M3", "M4",
                   "Mt", "Mt0", "Mt1", "Mt2", "Mt3", "Mt4")


@dataclass(frozen=True)
class MultiplierPoint:
    """One point on the convolution hyperplane; xi and tau are derived."""

    xi_vec: tuple[float, float, float]
    tau_vec: tuple[float, float, float]

    @property
    def xi(self) -> float:
        return float(sum(self.xi_vec))

    @property
    def tau(self) -> float:
        return float(sum(self.tau_vec))


@dataclass(frozen=True)
class MultiplierKind:
    tag: str
    delta: float = 1.0 / 24.0

    def __post_init__(self):
        if self.tag not in MULTIPLIER_TAGS:
            raise ValueError(f"unknown multiplier tag {self.tag!r}")
        if not 0.0 < self.delta < 1.0 / 6.0:
            raise ValueError("delta must lie in (0, 1/6)")


def modulation_magnitudes(xi1, xi2, xi3, tau1, tau2, tau3):
    """The four modulation magnitudes, stacked along a new leading axis."""
    xi = xi1 + xi2 + xi3
    tau = tau1 + tau2 + tau3
    return np.stack([
        np.abs(tau + xi ** 2),
        np.abs(tau1 + xi1 ** 2),
        np.abs(tau2 + xi2 ** 2),
        np.abs(tau3 - xi3 ** 2),
    ])


def classify_max_region(xi1, xi2, xi3, tau1, tau2, tau3) -> np.ndarray:
    """Index (0..3) of the maximal modulation; ties resolve to the lowest."""
    return np.argmax(modulation_magnitudes(xi1, xi2, xi3, tau1, tau2, tau3), axis=0)


def resonance_residuals(xi1, xi2, xi3, tau1, tau2, tau3):
    """Residuals of the two resonance identities plus the max-A lower bound.

    Returns (r1, r2, gap) with
      r1  = |combination - 2 (xi-xi1)(xi-xi2)|,
      r2  = | 2|(xi-xi1)(xi-xi2)| - 2|xi1+xi3||xi2+xi3| |,
      gap = 4 max A - 2 |xi1+xi3||xi2+xi3|  (nonnegative up to roundoff).
    """
    xi = xi1 + xi2 + xi3
    tau = tau1 + tau2 + tau3
    combo = (tau + xi ** 2) - (tau1 + xi1 ** 2 + tau2 + xi2 ** 2 + tau3 - xi3 ** 2)
    prod = 2.0 * (xi - xi1) * (xi - xi2)
    r1 = np.abs(combo - prod)
    rhs = 2.0 * np.abs(xi1 + xi3) * np.abs(xi2 + xi3)
    r2 = np.abs(np.abs(prod) - rhs)
    gap = 4.0 * np.max(modulation_magnitudes(xi1, xi2, xi3, tau1, tau2, tau3),
                       axis=0) - rhs
    return r1, r2, gap


def resonance_scale(xi1, xi2, xi3, tau1, tau2, tau3):
    """Magnitude scale of the quantities entering the identity."""
    xi = xi1 + xi2 + xi3
    tau = tau1 + tau2 + tau3
    return np.max(np.stack([
        np.abs(tau), np.abs(tau1), np.abs(tau2), np.abs(tau3),
        xi ** 2, xi1 ** 2, xi2 ** 2, xi3 ** 2,
    ]), axis=0)


def resonance_check(p: MultiplierPoint) -> tuple[float, float]:
    """Residuals (r1, r2) for a single point."""
    r1, r2, _ = resonance_residuals(*p.xi_vec, *p.tau_vec)
    return float(r1), float(r2)


def eval_multiplier_arrays(tag: str, xi1, xi2, xi3, tau1, tau2, tau3,
                           delta: float = 1.0 / 24.0) -> np.ndarray:
    """|multiplier| evaluated vectorized over point arrays."""
    xi = xi1 + xi2 + xi3
    tau = tau1 + tau2 + tau3
    b_out = bracket(tau + xi ** 2)
    b1 = bracket(tau1 + xi1 ** 2)
    b2 = bracket(tau2 + xi2 ** 2)
    b3 = bracket(tau3 - xi3 ** 2)
    g = bracket(xi)
    g1 = bracket(xi1)
    g2 = bracket(xi2)
    g3 = bracket(xi3)
    region = classify_max_region(xi1, xi2, xi3, tau1, tau2, tau3)

    def ind(j):
        return (region == j).astype(float)

    if tag in ("M", "Mt"):
        out = (g ** 0.5 * np.abs(xi3)
               / (b_out ** 0.5 * b1 ** 0.5 * b2 ** 0.5 * b3 ** 0.5
                  * g1 ** 0.5 * g2 ** 0.5 * g3 ** 0.5))
    elif tag in ("M0",):
        out = ind(0) / (b1 ** 0.5 * b2 ** 0.5 * b3 ** 0.5 * g1 ** 0.5 * g2 ** 0.5)
    elif tag in ("M1", "Mt1"):
        out = ind(1) / (b_out ** 0.5 * b2 ** 0.5 * b3 ** 0.5 * g1 ** 0.5 * g2 ** 0.5)
    elif tag in ("M2", "Mt2"):
        out = ind(2) / (b_out ** 0.5 * b1 ** 0.5 * b3 ** 0.5 * g1 ** 0.5 * g2 ** 0.5)
    elif tag in ("M3", "Mt3"):
        out = ind(3) / (b_out ** 0.5 * b1 ** 0.5 * b2 ** 0.5 * g1 ** 0.5 * g2 ** 0.5)
    elif tag in ("M4", "Mt4"):
        out = 1.0 / (b_out ** (7.0 / 16.0) * b1 ** (7.0 / 16.0)
                     * b2 ** (7.0 / 16.0) * b3 ** (7.0 / 16.0))
    elif tag == "Mt0":
        e = 0.5 + delta
        return ind(0) / (b1 ** e * b2 ** e * b3 ** e
                         * g ** (0.5 - 3.0 * delta) * g1 ** 0.5 * g2 ** 0.5
                         * g3 ** (0.5 - 3.0 * delta))
    else:
        raise ValueError(f"unknown multiplier tag {tag!r}")

    if tag in ("Mt", "Mt1", "Mt2", "Mt3", "Mt4"):
        out = out / b_out ** 0.5
    return out


def eval_multiplier(kind: MultiplierKind, p: MultiplierPoint) -> float:
    vals = eval_multiplier_arrays(kind.tag,
                                  *(np.asarray([c]) for c in p.xi_vec),
                                  *(np.asarray([c]) for c in p.tau_vec),
                                  delta=kind.delta)
    return float(vals[0])


def domination_ratio_arrays(family: str, xi1, xi2, xi3, tau1, tau2, tau3,
                            delta: float = 1.0 / 24.0) -> np.ndarray:
    """|M| / sum_j M_j (family "M") or the Mt analogue; 0/0 counts as 0.

    The denominator is strictly positive away from nothing (the j=4 piece
    never vanishes), so the ratio is always finite.
    """
    if family not in ("M", "Mt"):
        raise ValueError("family must be 'M' or 'Mt'")
    args = (xi1, xi2, xi3, tau1, tau2, tau3)
    num = eval_multiplier_arrays(family, *args, delta=delta)
    den = sum(eval_multiplier_arrays(f"{family}{j}" if family == "M" else f"Mt{j}",
                                     *args, delta=delta)
              for j in range(5))
    return np.where(num == 0.0, 0.0, num / den)


# ---------------------------------------------------------------------------
# samplers
# ---------------------------------------------------------------------------

def _log_uniform(rng: np.random.Generator, n: int, lo: float, hi: float) -> np.ndarray:
    return np.exp(rng.uniform(np.log(lo), np.log(hi), size=n))


def _signs(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.choice([-1.0, 1.0], size=n)


def _round_lattice(x: np.ndarray, lattice: str) -> np.ndarray:
    return np.rint(x) if lattice == "Z" else x


def _draw_taus(rng, mags, tau_box):
    """Half near-characteristic (tau_j ~ -/+ xi_j^2 up to a small jitter),
    half broadband log-uniform up to the tau box."""
    n = mags[0].size
    broad = [_signs(rng, n) * _log_uniform(rng, n, 1e-3, max(tau_box, 1.0))
             for _ in range(3)]
    jit = [_signs(rng, n) * _log_uniform(rng, n, 1e-3, 10.0) for _ in range(3)]
    near = rng.random(n) < 0.5
    tau1 = np.where(near, -mags[0] ** 2 + jit[0], broad[0])
    tau2 = np.where(near, -mags[1] ** 2 + jit[1], broad[1])
    tau3 = np.where(near, +mags[2] ** 2 + jit[2], broad[2])
    return tau1, tau2, tau3


def _int_between(rng, lo, hi, n):
    return rng.integers(lo, np.maximum(hi, lo + 1), size=n)


def sample_points(rng: np.random.Generator, n: int, box: float,
                  lattice: str = "Z", regime: str = "uniform"):
    """Draw n hyperplane points with magnitudes shaped by the regime label.

    "uniform" draws all six free coordinates log-uniformly up to the box
    bound (random signs); the dyadic regimes fix the relative sizes of the
    block magnitudes N1 <= N2 vs N3 so the proof's case tree is exercised:
        I      N1 <= N2 << N3
        IIa    N1 ~ N2 ~ N3
        IIb1+- N  <~ N1 << N2 ~ N3 (with |xi2+xi3| >= resp. < N3^(-1/2))
        IIb2   N1 << N and N1 << N2 ~ N3
        IIIa1  N2 >> N1 >> N3
        IIIa2  N1 ~ N2 >> N3
        IIIb   N2 >> N1 ~ N3
        IIIc   N2 >> N3 >> N1
    Returns xi1, xi2, xi3, tau1, tau2, tau3 arrays.  Uniform sampling almost
    never lands near the resonant sets, hence the regime-driven magnitudes
    and the near-characteristic tau mixture.
    """
    if lattice not in ("Z", "R"):
        raise ValueError("lattice must be 'Z' or 'R'")
    if regime not in REGIME_LABELS:
        raise ValueError(f"unknown regime {regime!r}")
    lo = 1.0 if lattice == "Z" else 1e-2
    tau_box = box ** 2

    if regime == "uniform":
        m1, m2, m3 = (_log_uniform(rng, n, lo, box) for _ in range(3))
    else:
        emax = int(np.floor(np.log2(max(box, 8.0))))
        gap = 4  # "<<" separation in dyadic exponents (factor 16)

        def shell(e):
            mag = 2.0 ** e * (1.0 + rng.random(n))
            return np.minimum(mag, box)

        if regime == "I":
            e3 = _int_between(rng, gap + 1, emax + 1, n)
            e2 = np.maximum(e3 - gap - rng.integers(0, 3, size=n), 0)
            e1 = rng.integers(0, np.maximum(e2, 1))
        elif regime == "IIa":
            e3 = _int_between(rng, 0, emax + 1, n)
            e2 = e3
            e1 = e3
        elif regime in ("IIb1+", "IIb1-", "IIb2"):
            e2 = _int_between(rng, gap + 1, emax + 1, n)
            e3 = e2
            e1 = np.maximum(e2 - gap - rng.integers(0, 3, size=n), 0)
        elif regime == "IIIa1":
            e2 = _int_between(rng, 2 * gap + 1, emax + 1, n)
            e1 = np.maximum(e2 - gap, 0)
            e3 = np.maximum(e1 - gap, 0)
        elif regime == "IIIa2":
            e2 = _int_between(rng, gap + 1, emax + 1, n)
            e1 = e2
            e3 = np.maximum(e2 - gap - rng.integers(0, 3, size=n), 0)
        elif regime == "IIIb":
            e2 = _int_between(rng, gap + 1, emax + 1, n)
            e1 = np.maximum(e2 - gap - rng.integers(0, 3, size=n), 0)
            e3 = e1
        else:  # IIIc
            e2 = _int_between(rng, 2 * gap + 1, emax + 1, n)
            e3 = np.maximum(e2 - gap, 0)
            e1 = np.maximum(e3 - gap, 0)
        m1, m2, m3 = shell(e1), shell(e2), shell(e3)

    xi1 = _round_lattice(_signs(rng, n) * m1, lattice)
    xi2 = _round_lattice(_signs(rng, n) * m2, lattice)
    xi3 = _round_lattice(_signs(rng, n) * m3, lattice)

    if regime == "IIb1+":
        # keep |xi - xi1| = |xi2 + xi3| comfortably above N3^(-1/2)
        same = np.sign(xi2) == -np.sign(xi3)
        xi3 = np.where(same, -xi3, xi3)
    elif regime == "IIb1-":
        if lattice == "R":
            # |xi2 + xi3| < N3^(-1/2): pin xi3 just off -xi2
            xi3 = -xi2 + rng.uniform(-1.0, 1.0, size=n) / np.sqrt(np.abs(m3) + 1.0)
        else:
            # empty configuration on the integer lattice; fall back to +
            same = np.sign(xi2) == -np.sign(xi3)
            xi3 = np.where(same, -xi3, xi3)

    tau1, tau2, tau3 = _draw_taus(rng, (xi1, xi2, xi3), tau_box)
    return xi1, xi2, xi3, tau1, tau2, tau3
