"""Special functions behind the exact two-disc solution.

The building blocks are the prime-function-type product

    P(zeta) = (1 - zeta) * prod_{k>=1} (1 - rho^{2k} zeta)(1 - rho^{2k}/zeta)

and its logarithmic derivative K(zeta) = zeta P'(zeta)/P(zeta), which obeys

    K(rho^2 zeta) = K(zeta) - 1,      K(1/zeta) = 1 - K(zeta).

Two evaluation routes are provided.  ``K_sum`` is the partial-fraction sum in
powers of rho^2 (fast for moderate rho).  ``K_modular`` is the dual series in
mu = exp(-2 pi / T), the modular counterpart obtained by viewing K as a
quasi-periodic function of xi = log(zeta)/pi with periods 2T and 2i; its
terms decay like exp(-pi/T) per step, so it stays accurate arbitrarily close
to rho = 1 where the product/sum forms become useless.  ``K`` dispatches on
rho.  Every routine is vectorized over its complex argument and safe against
overflow: the modular terms are evaluated as exp() of exponents whose real
part is provably negative for principal-branch arguments, so the raw factor
chi = exp(i pi xi / T), whose modulus reaches exp(pi/T), is never formed.

On top of K sit the exact potential W for uniform flow past the canonical
disc pair, the derivative field ``omega_field`` with the uniform and
logarithmic parts removed, its boundary Laurent coefficients
(``omega_coeffs``), and the explicit logarithmic part ``w2_log_part``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .conformal import AnnulusMap, to_annulus
from .errors import ConvergenceFailure, InvalidInput

__all__ = [
    "KEvalSettings",
    "DEFAULT_SETTINGS",
    "ExactSolution",
    "prime_P",
    "K_sum",
    "K_modular",
    "K",
    "K_prime",
    "exact_W",
    "exact_w",
    "omega_field",
    "omega_coeffs",
    "w2_log_part",
]


@dataclass(frozen=True)
class KEvalSettings:
    """Truncation controls for the series/product evaluators.

    ``rho_switch`` picks the representation in :func:`K`: the rho^2-power sum
    below it, the modular series above it.  Both are accurate on a wide band
    around the default 0.8; the switch only matters for speed.
    """

    tol: float = 1e-14
    rho_switch: float = 0.8
    max_terms: int = 10**6

    def __post_init__(self):
        if not 0 < self.tol < 1e-6:
            raise InvalidInput(f"tol must be in (0, 1e-6), got {self.tol}")
        if not 0 < self.rho_switch < 1:
            raise InvalidInput(f"rho_switch must be in (0, 1), got {self.rho_switch}")


DEFAULT_SETTINGS = KEvalSettings()


def _check_rho(rho: float):
    if not 0 < rho < 1:
        raise InvalidInput(f"rho must lie in (0, 1), got {rho}")


def _T_of_rho(rho: float) -> float:
    # log(rho) via log1p(rho - 1): rho - 1 is exact for rho near 1, so T keeps
    # full relative precision in the near-touching regime.
    return -math.log1p(rho - 1.0) / math.pi


def prime_P(zeta, rho: float, settings: KEvalSettings = DEFAULT_SETTINGS):
    """Truncated product P(zeta); factors are dropped once their distance
    from 1 falls below settings.tol.

    Near rho = 1 the product needs ~log(tol)/(2 log rho) factors and
    ConvergenceFailure is raised when that exceeds max_terms; callers should
    be on the modular route for K long before that point.
    """
    _check_rho(rho)
    z = np.asarray(zeta, dtype=complex)
    if np.any(z == 0):
        raise InvalidInput("prime_P is singular at zeta = 0")
    scale = float(np.max(np.abs(z) + 1.0 / np.abs(z)))
    out = 1.0 - z
    r2 = rho * rho
    rk = r2
    terms = 0
    while rk * scale > settings.tol:
        out = out * (1.0 - rk * z) * (1.0 - rk / z)
        rk *= r2
        terms += 1
        if terms > settings.max_terms:
            raise ConvergenceFailure(
                f"prime_P needs more than {settings.max_terms} factors at rho={rho}"
            )
    return out if out.ndim else complex(out)


def K_sum(zeta, rho: float, settings: KEvalSettings = DEFAULT_SETTINGS):
    """K via the partial-fraction sum in powers of rho^2:

        K = -zeta/(1-zeta) + sum_k [ -rho^{2k} zeta/(1-rho^{2k} zeta)
                                     + rho^{2k}/(zeta-rho^{2k}) ].

    Terms decay like rho^{2k} (|zeta| + 1/|zeta|); the sum is truncated when
    that bound drops below settings.tol.
    """
    _check_rho(rho)
    z = np.asarray(zeta, dtype=complex)
    scale = float(np.max(np.abs(z) + 1.0 / np.abs(z)))
    out = -z / (1.0 - z)
    r2 = rho * rho
    rk = r2
    terms = 0
    while rk * scale > settings.tol:
        out = out - rk * z / (1.0 - rk * z) + rk / (z - rk)
        rk *= r2
        terms += 1
        if terms > settings.max_terms:
            raise ConvergenceFailure(
                f"K_sum needs more than {settings.max_terms} terms at rho={rho}"
            )
    return out if out.ndim else complex(out)


def _modular_pieces(z: np.ndarray, T: float):
    """Shared setup for the modular series: xi, v = i*pi*xi/T, and the
    decaying exponential ev = chi or 1/chi, whichever has modulus <= 1
    (chi = e^v; Re v = -arg(zeta)/T can reach +-pi/T, far beyond
    floating-point range for small T, so chi itself is never formed)."""
    lz = np.log(np.abs(z))
    az = np.angle(z)
    xi = (lz + 1j * az) / math.pi
    v = (1j * lz - az) / T
    grow = v.real > 0
    ev = np.exp(np.where(grow, -v, v))
    return xi, v, ev, grow


def K_modular(zeta, rho: float, settings: KEvalSettings = DEFAULT_SETTINGS):
    """K via the modular series

        K = xi/(2T) + 1/2 - i/(2T) + (i/T) chi/(chi-1)
            + (i/T) sum_m [ mu^m/chi / (1 - mu^m/chi) - mu^m chi / (1 - mu^m chi) ]

    with xi = log(zeta)/pi (principal branch), T = log(1/rho)/pi,
    mu = exp(-2 pi / T), chi = exp(i pi xi / T).  Each summand is formed as
    exp() of an exponent with real part <= -pi/T, so nothing overflows and
    for small T the sum is empty; the series converges for every rho but is
    the representation of choice near rho = 1.
    """
    _check_rho(rho)
    z = np.asarray(zeta, dtype=complex)
    T = _T_of_rho(rho)
    xi, v, ev, grow = _modular_pieces(z, T)
    # chi/(chi-1) = 1/(1 - 1/chi); use the side with the decaying exponential.
    lead = np.where(grow, 1.0 / (1.0 - ev), ev / (ev - 1.0))
    step = 2.0 * math.pi / T
    ssum = lead.astype(complex)
    m = 1
    while True:
        g = np.exp(-v - m * step)   # mu^m / chi
        h = np.exp(v - m * step)    # mu^m * chi
        term = g / (1.0 - g) - h / (1.0 - h)
        ssum = ssum + term
        if float(np.max(np.abs(term))) < settings.tol:
            break
        m += 1
        if m > settings.max_terms:
            raise ConvergenceFailure(
                f"K_modular needs more than {settings.max_terms} terms at rho={rho}"
            )
    out = xi / (2.0 * T) + (0.5 - 0.5j / T) + (1j / T) * ssum
    return out if out.ndim else complex(out)


def K(zeta, rho: float, settings: KEvalSettings = DEFAULT_SETTINGS):
    """K(zeta, rho) through whichever representation converges faster."""
    if rho <= settings.rho_switch:
        return K_sum(zeta, rho, settings)
    return K_modular(zeta, rho, settings)


def _K_prime_sum(z: np.ndarray, rho: float, settings: KEvalSettings):
    scale = float(np.max(np.abs(z) + 1.0 / np.abs(z)))
    out = -1.0 / (1.0 - z) ** 2
    r2 = rho * rho
    rk = r2
    terms = 0
    while rk * scale > settings.tol:
        out = out - rk / (1.0 - rk * z) ** 2 - rk / (z - rk) ** 2
        rk *= r2
        terms += 1
        if terms > settings.max_terms:
            raise ConvergenceFailure(
                f"K_prime needs more than {settings.max_terms} terms at rho={rho}"
            )
    return out


def _K_prime_modular(z: np.ndarray, rho: float, settings: KEvalSettings):
    T = _T_of_rho(rho)
    _, v, ev, _ = _modular_pieces(z, T)
    # chi/(chi-1)^2 is invariant under chi -> 1/chi, so the decaying
    # exponential works on both sides of |chi| = 1.
    dsum = (ev / (1.0 - ev) ** 2).astype(complex)
    step = 2.0 * math.pi / T
    m = 1
    while True:
        g = np.exp(-v - m * step)
        h = np.exp(v - m * step)
        term = g / (1.0 - g) ** 2 + h / (1.0 - h) ** 2
        dsum = dsum + term
        if float(np.max(np.abs(term))) < settings.tol:
            break
        m += 1
        if m > settings.max_terms:
            raise ConvergenceFailure(
                f"K_prime needs more than {settings.max_terms} terms at rho={rho}"
            )
    dK_dxi = 1.0 / (2.0 * T) + (math.pi / T**2) * dsum
    return dK_dxi / (math.pi * z)


def K_prime(zeta, rho: float, settings: KEvalSettings = DEFAULT_SETTINGS):
    """dK/dzeta, with the same dual-representation dispatch as :func:`K`."""
    _check_rho(rho)
    z = np.asarray(zeta, dtype=complex)
    if rho <= settings.rho_switch:
        out = _K_prime_sum(z, rho, settings)
    else:
        out = _K_prime_modular(z, rho, settings)
    return out if out.ndim else complex(out)


@dataclass(frozen=True)
class ExactSolution:
    """Exact uniform-flow potential past the canonical disc pair,
    normalized so that W(-1) = 0.  ``U0`` is the far-field slope in the
    canonical frame."""

    map: AnnulusMap
    U0: complex
    settings: KEvalSettings = DEFAULT_SETTINGS


def exact_W(sol: ExactSolution, zeta):
    """W(zeta) = -2 A U0 [K(1/sr) - K(-zeta/sr)] + 2 A conj(U0) [K(sr) - K(-zeta sr)]
    with sr = sqrt(rho).  Satisfies Im W = const on |zeta| = 1 and rho, and
    W(-1) = 0 identically."""
    m = sol.map
    sr = m.sqrt_rho
    st = sol.settings
    z = np.asarray(zeta, dtype=complex)
    k_out = K(np.asarray(1.0 / sr, dtype=complex), m.rho, st)
    k_in = K(np.asarray(sr, dtype=complex), m.rho, st)
    out = (-2.0 * m.A * sol.U0 * (k_out - K(-z / sr, m.rho, st))
           + 2.0 * m.A * np.conj(sol.U0) * (k_in - K(-z * sr, m.rho, st)))
    return out if np.ndim(zeta) else complex(out)


def exact_w(sol: ExactSolution, z):
    """The exact potential as a function of the physical coordinate."""
    return exact_W(sol, to_annulus(sol.map, z))


def _dW_dzeta(sol: ExactSolution, zeta: np.ndarray):
    m = sol.map
    sr = m.sqrt_rho
    st = sol.settings
    return (-2.0 * m.A * sol.U0 / sr * K_prime(-zeta / sr, m.rho, st)
            + 2.0 * m.A * np.conj(sol.U0) * sr * K_prime(-zeta * sr, m.rho, st))


def omega_field(sol: ExactSolution, z):
    """dW/dz with the uniform part and the logarithmic pole pair removed:

        omega(z) = dW/dz - U0 + 2 A^2 (U0 - conj U0) / (pi T (z^2 - A^2)).

    Analytic on the closed two-disc exterior (the points +-A sit strictly
    inside the discs) and -> 0 as z -> infinity.
    """
    m = sol.map
    zz = np.asarray(z, dtype=complex)
    zeta = to_annulus(m, zz)
    z_zeta = 2.0 * m.A * m.sqrt_rho / (zeta + m.sqrt_rho) ** 2
    dWdz = _dW_dzeta(sol, zeta) / z_zeta
    U0 = sol.U0
    out = dWdz - U0 + 2.0 * m.A**2 * (U0 - np.conj(U0)) / (
        math.pi * m.T * (zz * zz - m.A**2)
    )
    return out if out.ndim else complex(out)


def omega_coeffs(sol: ExactSolution, j_max: int, n_quad: int | None = None):
    """Laurent coefficients (c_j, d_j), j = 1..j_max, of

        omega(z) = sum_j c_j s^j/(z-d)^j + sum_j d_j s^j/(z+d)^j,

    by trapezoid quadrature of the boundary integrals (spectrally accurate
    for these periodic integrands):

        c_j = (1/2pi) int omega(d + s e^{-i th}) e^{-i j th} dth,
        d_j = ((-1)^j/2pi) int omega(-d - s e^{i th}) e^{i j th} dth.

    The j = 1 pair has the closed form s c_1 = A (U0 - conj U0)/(pi T) = -s d_1.
    """
    if j_max < 1:
        raise InvalidInput(f"j_max must be >= 1, got {j_max}")
    n = n_quad if n_quad is not None else max(1024, 8 * j_max)
    if n < 4 * j_max:
        raise InvalidInput(f"n_quad={n} too small for j_max={j_max}")
    m = sol.map
    th = 2.0 * math.pi * np.arange(n) / n
    js = np.arange(1, j_max + 1)
    om_plus = omega_field(sol, m.d + m.s * np.exp(-1j * th))
    c = np.fft.fft(om_plus)[1:j_max + 1] / n
    om_minus = omega_field(sol, -m.d - m.s * np.exp(1j * th))
    d = np.fft.ifft(om_minus)[1:j_max + 1] * (-1.0) ** js
    return c, d


def w2_log_part(sol: ExactSolution, z):
    """The logarithmic part of the exact potential,

        W2(z) = (A/(pi T))(U0 - conj U0) [ log((z-d)/(z-A)) + log((z+A)/(z+d)) ],

    written as log(1 + sqrt(rho) s/(z -+ d)) so the log arguments stay in the
    right half plane for every exterior z (branch cuts confined to the
    discs).  Vanishes identically for real U0 and tends to 0 as z -> inf.
    """
    m = sol.map
    zz = np.asarray(z, dtype=complex)
    pref = m.A * (sol.U0 - np.conj(sol.U0)) / (math.pi * m.T)
    srs = m.sqrt_rho * m.s
    out = pref * (-np.log(1.0 + srs / (zz - m.d)) + np.log(1.0 - srs / (zz + m.d)))
    return out if out.ndim else complex(out)
