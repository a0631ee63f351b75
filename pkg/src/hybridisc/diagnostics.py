"""Numerical probes of the two-scale coefficient analysis.

``decay_profile`` measures the weighted sups sup_j j^k |coef_j| that the
decay estimates are phrased in.  ``cutoff_phi`` is the smooth cut-off used
to split boundary data into a gap part and a far part, and
``hybrid_split_w21`` carries out that split for the logarithmic boundary
function of the canonical pair: the far part becomes a power series in the
annulus variable, the gap part a power series in s/(z - d), and the two
cosine series reconstruct the original boundary data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .conformal import AnnulusMap, theta_to_nu
from .errors import InvalidInput

__all__ = [
    "DecayProfile",
    "CutoffSpec",
    "decay_profile",
    "cutoff_phi",
    "w21_on_unit_circle",
    "hybrid_split_w21",
    "eval_omega1_boundary",
    "eval_omega2_boundary",
]


@dataclass(frozen=True, eq=False)
class DecayProfile:
    """Coefficients together with their weighted sups: sups[k] holds
    sup_j j^k |coef_j| for k = 0..k_max (j counts from 1)."""

    coefficients: np.ndarray
    sups: np.ndarray
    T: float


def decay_profile(coefficients, T: float, k_max: int) -> DecayProfile:
    """Measure sup_j j^k |coef_j| for k = 0..k_max.  No interpretation is
    applied; scaling claims live in the tests that compare profiles across
    geometries."""
    coefs = np.asarray(coefficients)
    if coefs.size == 0:
        raise InvalidInput("decay_profile needs at least one coefficient")
    if k_max < 0:
        raise InvalidInput(f"k_max must be >= 0, got {k_max}")
    js = np.arange(1, coefs.size + 1, dtype=float)
    mags = np.abs(coefs)
    sups = np.array([float(np.max(js**k * mags)) for k in range(k_max + 1)])
    return DecayProfile(coefficients=coefs, sups=sups, T=T)


@dataclass(frozen=True)
class CutoffSpec:
    """Smooth even cut-off: identically 1 on |nu| <= delta, identically 0 on
    |nu| >= 2 delta, C-infinity in between (exponential-bump transition).
    ``k_smooth`` scales the bump exponent; larger is steeper mid-transition.
    """

    delta: float
    k_smooth: float = 1.0

    def __post_init__(self):
        if not 0 < self.delta < math.pi / 2:
            raise InvalidInput(f"delta must be in (0, pi/2), got {self.delta}")
        if not self.k_smooth > 0:
            raise InvalidInput(f"k_smooth must be positive, got {self.k_smooth}")


def _bump(x: np.ndarray, k: float) -> np.ndarray:
    """exp(-k/x) for x > 0, 0 otherwise; the standard C-infinity mollifier leg."""
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = np.exp(-k / x[pos])
    return out


def cutoff_phi(spec: CutoffSpec | None, nu) -> np.ndarray:
    """Evaluate the cut-off at angles nu (any shape); spec=None means the
    degenerate all-off cut-off (identically zero), used when the split is
    collapsed onto the annulus series alone."""
    a = np.abs(np.asarray(nu, dtype=float))
    if spec is None:
        return np.zeros_like(a)
    t = (a - spec.delta) / spec.delta
    up = _bump(1.0 - t, spec.k_smooth)
    down = _bump(t, spec.k_smooth)
    mid = up / (up + down + np.finfo(float).tiny)
    return np.where(a <= spec.delta, 1.0, np.where(a >= 2.0 * spec.delta, 0.0, mid))


def w21_on_unit_circle(amap: AnnulusMap, nu) -> np.ndarray:
    """Real boundary values, on |zeta| = 1 parametrized zeta = -e^{i nu}, of
    the log factor log((z - A)/(z - d)) = log(1 + sqrt(rho) s/(z - d)); in the
    annulus variable this is -log((d+A)/(2A)) - log(1 - sqrt(rho) e^{i nu})."""
    nu = np.asarray(nu, dtype=float)
    sr = amap.sqrt_rho
    return (-math.log((amap.d + amap.A) / (2.0 * amap.A))
            - np.log(np.abs(1.0 - sr * np.exp(1j * nu))))


def hybrid_split_w21(
    amap: AnnulusMap,
    spec: CutoffSpec | None,
    j_max: int,
    n_samples: int = 2**14,
) -> tuple[np.ndarray, np.ndarray]:
    """Split the log factor into an annulus-series part and a disc-series part.

    Returns (a, b), both real of length j_max + 1:
      * omega1(zeta) = sum_j a_j zeta^j, pinned by Re omega1(-e^{i nu}) =
        (1 - Phi(nu)) * (boundary data) and Im omega1(0) = 0;
      * omega2 = sum_j b_j (s/(z-d))^j, pinned by the complementary piece
        Phi(nu(theta)) * (boundary data) re-parametrized by the physical
        angle theta.

    Coefficients come from FFT cosine analysis of the two even boundary
    functions on n_samples equispaced angles; j_max must stay below
    n_samples/4 to keep aliasing negligible.  With spec=None the split
    collapses: b = 0 and a is the plain series of the log factor.
    """
    if j_max < 64:
        raise InvalidInput(f"j_max must be >= 64, got {j_max}")
    if n_samples < 4 * j_max:
        raise InvalidInput(f"n_samples={n_samples} too small for j_max={j_max}")
    grid = 2.0 * math.pi * np.arange(n_samples) / n_samples
    wrapped = np.angle(np.exp(1j * grid))  # same points, in (-pi, pi]

    # Far part, sampled in the annulus angle nu.
    H = (1.0 - cutoff_phi(spec, wrapped)) * w21_on_unit_circle(amap, wrapped)
    h = np.fft.rfft(H).real / n_samples
    cos_h = np.concatenate(([h[0]], 2.0 * h[1:j_max + 1]))
    signs = (-1.0) ** np.arange(j_max + 1)
    a = signs * cos_h  # Re omega1(-e^{i nu}) = sum (-1)^j a_j cos(j nu)

    # Gap part, sampled in the physical angle theta: on |z - d| = s the log
    # factor is log(1 + sqrt(rho) e^{i theta}).
    theta = wrapped
    nu_of_theta = theta_to_nu(amap, theta)
    H2 = cutoff_phi(spec, nu_of_theta) * np.log(
        np.abs(1.0 + amap.sqrt_rho * np.exp(1j * theta))
    )
    h2 = np.fft.rfft(H2).real / n_samples
    b = np.concatenate(([h2[0]], 2.0 * h2[1:j_max + 1]))
    return a, b


def eval_omega1_boundary(a: np.ndarray, nu) -> np.ndarray:
    """Re omega1 on |zeta| = 1 from its series coefficients."""
    nu = np.asarray(nu, dtype=float)
    js = np.arange(a.size)
    return np.cos(np.outer(nu, js)) @ (a * (-1.0) ** js)


def eval_omega2_boundary(b: np.ndarray, theta) -> np.ndarray:
    """Re omega2 on |z - d| = s from its series coefficients."""
    theta = np.asarray(theta, dtype=float)
    js = np.arange(b.size)
    return np.cos(np.outer(theta, js)) @ b
