"""Moebius map between the canonical two-disc exterior and a concentric annulus.

For equal discs of radius s centred at -d, +d (0 < s < d) the exterior is
conformally equivalent to the annulus rho < |zeta| < 1 via

    z(zeta) = A (zeta - sqrt(rho)) / (zeta + sqrt(rho)),

with modulus rho and scale A fixed by (d, s).  The point zeta = -sqrt(rho)
maps to physical infinity; |zeta| = 1 maps onto the circle |z - d| = s and
|zeta| = rho onto |z + d| = s.  T = log(1/rho) / pi is the small parameter
of the near-touching regime (T -> 0 as s -> d).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidGeometry, PoleAtInfinity, PoleInDisc

_A_CONSISTENCY_RTOL = 1e-13


@dataclass(frozen=True)
class AnnulusMap:
    """Map data for one canonical disc pair: half-distance d, radius s,
    annulus modulus rho, map scale A = sqrt(d^2 - s^2), and T = log(1/rho)/pi."""

    d: float
    s: float
    rho: float
    A: float
    T: float

    @property
    def sqrt_rho(self) -> float:
        return math.sqrt(self.rho)


def annulus_map(d: float, s: float) -> AnnulusMap:
    """Build the annulus map for discs of radius s centred at -d, +d.

    rho and T are computed through q = sqrt(d^2 - s^2)/d = sqrt((d-s)(d+s))/d,
    which keeps full relative precision on 1 - rho even for separations down
    to 1e-7 where the naive 1 - (s/d)^2 would cancel.
    """
    if not s > 0:
        raise InvalidGeometry(f"radius must be positive, got {s}")
    if not s < d:
        raise InvalidGeometry(f"need s < d for an exterior pair, got s={s}, d={d}")
    q = math.sqrt((d - s) * (d + s)) / d
    rho = (1.0 - q) / (1.0 + q)
    one_minus_rho = 2.0 * q / (1.0 + q)
    T = -math.log1p(-one_minus_rho) / math.pi
    A = d * q
    alt = d * one_minus_rho / (1.0 + rho)
    if abs(A - alt) > _A_CONSISTENCY_RTOL * A:
        raise InvalidGeometry(
            f"inconsistent map scale: sqrt(d^2-s^2)={A} vs d(1-rho)/(1+rho)={alt}"
        )
    return AnnulusMap(d=d, s=s, rho=rho, A=A, T=T)


def to_physical(amap: AnnulusMap, zeta):
    """z(zeta) = A (zeta - sqrt(rho)) / (zeta + sqrt(rho)).

    Raises PoleAtInfinity if zeta hits -sqrt(rho) exactly (the preimage of
    physical infinity).
    """
    zeta = np.asarray(zeta, dtype=complex)
    sr = amap.sqrt_rho
    if np.any(zeta == -sr):
        raise PoleAtInfinity("zeta = -sqrt(rho) maps to infinity")
    return amap.A * (zeta - sr) / (zeta + sr)


def to_annulus(amap: AnnulusMap, z):
    """Inverse map zeta(z) = sqrt(rho) (A + z) / (A - z).

    Raises PoleInDisc if z hits A exactly (A lies strictly inside the disc
    at +d, so this never fires for points of the closed exterior).
    """
    z = np.asarray(z, dtype=complex)
    if np.any(z == amap.A):
        raise PoleInDisc("z = A maps to annulus infinity")
    return amap.sqrt_rho * (amap.A + z) / (amap.A - z)


def theta_to_nu(amap: AnnulusMap, theta):
    """Boundary angle relation theta -> nu.

    theta parametrizes the physical circles (z = d + s e^{-i theta} on the
    outer image, z = -d - s e^{i theta} on the inner one) and nu the annulus
    circles (zeta = -e^{i nu}, -rho e^{i nu}).  Monotone and odd;
    implemented with atan2 so the endpoints +-pi map to +-pi exactly.
    """
    theta = np.asarray(theta, dtype=float)
    sr = amap.sqrt_rho
    return 2.0 * np.arctan2((1.0 - sr) * np.sin(theta / 2.0),
                            (1.0 + sr) * np.cos(theta / 2.0))


def nu_to_theta(amap: AnnulusMap, nu):
    """Inverse of :func:`theta_to_nu`."""
    nu = np.asarray(nu, dtype=float)
    sr = amap.sqrt_rho
    return 2.0 * np.arctan2((1.0 + sr) * np.sin(nu / 2.0),
                            (1.0 - sr) * np.cos(nu / 2.0))


def limit_points(c1: complex, c2: complex, s: float) -> tuple[complex, complex]:
    """Accumulation points of the successive circle reflections of two equal
    disc centres; for the canonical pair these coincide with -A, +A.

    With hd = |c2 - c1| - 2s the points are
    (c1+c2)/2 -+ sqrt(s*hd + hd^2/4) * (c2-c1)/|c2-c1|.
    """
    span = c2 - c1
    dist = abs(span)
    hd = dist - 2.0 * s
    if hd <= 0:
        raise InvalidGeometry("discs overlap or touch; no exterior limit points")
    off = math.sqrt(s * hd + hd * hd / 4.0) * span / dist
    mid = (c1 + c2) / 2.0
    return mid - off, mid + off
