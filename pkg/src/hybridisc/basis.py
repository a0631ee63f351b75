"""Basis families and truncated-expansion evaluation for the three schemes.

A truncated representation of the complex potential has the form

    w(z) = U0 z + C + sum over disc families  a_k^{(j)} (s_j/(z - c_j))^k
                    + sum over pair families  c_k^{(p)} zeta_p(z)^k
                                            + d_k^{(p)} (rho_p / zeta_p(z))^k

with every sum truncated at the same order N.  The scheme decides which
families are active: the disc (Fourier-Laurent) families alone, the pair
(annulus) families alone, or both ("hybrid", deliberately overcomplete).

The scalings s^k and rho^k are part of the basis: they keep every basis
function at modulus <= 1 on the boundary circles, which is what keeps the
collocation matrix well scaled.

Basis ordering contract (used by rows/columns, coefficient vectors and the
plain-text serialization): entry 0 is the constant 1; then the disc families
disc-by-disc (k = 1..N each); then the pair families pair-by-pair, positive
powers zeta^k first, then rho^k zeta^{-k}.
"""

from __future__ import annotations

import enum
import hashlib
import math
from dataclasses import dataclass, field

import numpy as np

from .conformal import AnnulusMap, annulus_map, to_annulus
from .errors import DomainViolation, InvalidInput
from .geometry import Disc, PairFrame, pair_frame

__all__ = [
    "SchemeKind",
    "PairMap",
    "Expansion",
    "pair_map",
    "n_basis",
    "basis_matrix",
    "basis_row",
    "evaluate",
    "far_field_dipole",
    "dipole_quadrature",
    "save_expansion",
    "load_expansion",
    "geometry_digest",
]


class SchemeKind(enum.Enum):
    Z = "z"
    ZETA = "zeta"
    HYBRID = "hybrid"

    @property
    def has_disc_families(self) -> bool:
        return self in (SchemeKind.Z, SchemeKind.HYBRID)

    @property
    def has_pair_families(self) -> bool:
        return self in (SchemeKind.ZETA, SchemeKind.HYBRID)


@dataclass(frozen=True)
class PairMap:
    """A close pair's canonical frame together with its annulus map."""

    frame: PairFrame
    amap: AnnulusMap

    def zeta_of(self, z):
        """The pair's annulus variable as a Moebius function of physical z."""
        return to_annulus(self.amap, self.frame.to_frame(z))


def pair_map(a: Disc, b: Disc, index_pair: tuple[int, int] = (0, 1)) -> PairMap:
    frame = pair_frame(a, b, index_pair)
    return PairMap(frame=frame, amap=annulus_map(frame.half_distance, frame.radius))


@dataclass(frozen=True, eq=False)
class Expansion:
    """Truncated coefficient set for one scheme over a fixed geometry.

    ``disc_coeffs[j][k-1]`` multiplies (s_j/(z-c_j))^k; ``pair_coeffs[p]``
    is the (positive-power, negative-power) array pair for pair p, the
    negative-power entry multiplying rho_p^k zeta_p^{-k}.  Families that are
    inactive for the scheme are empty tuples.
    """

    scheme: SchemeKind
    U0: complex
    constant: complex
    N: int
    discs: tuple[Disc, ...]
    pairs: tuple[PairMap, ...]
    disc_coeffs: tuple[np.ndarray, ...] = ()
    pair_coeffs: tuple[tuple[np.ndarray, np.ndarray], ...] = ()

    def __post_init__(self):
        if self.scheme.has_disc_families:
            if len(self.disc_coeffs) != len(self.discs):
                raise InvalidInput("one coefficient array per disc is required")
            for arr in self.disc_coeffs:
                if len(arr) != self.N:
                    raise InvalidInput("disc coefficient arrays must have length N")
        elif self.disc_coeffs:
            raise InvalidInput(f"{self.scheme} carries no disc families")
        if self.scheme.has_pair_families:
            if len(self.pair_coeffs) != len(self.pairs):
                raise InvalidInput("one coefficient pair per pair map is required")
            for pos, neg in self.pair_coeffs:
                if len(pos) != self.N or len(neg) != self.N:
                    raise InvalidInput("pair coefficient arrays must have length N")
        elif self.pair_coeffs:
            raise InvalidInput(f"{self.scheme} carries no pair families")


def _laurent_discs(scheme: SchemeKind, discs: tuple[Disc, ...]) -> tuple[Disc, ...]:
    return discs if scheme.has_disc_families else ()


def _active_pairs(scheme: SchemeKind, pairs: tuple[PairMap, ...]) -> tuple[PairMap, ...]:
    return pairs if scheme.has_pair_families else ()


def n_basis(scheme: SchemeKind, n_discs: int, n_pairs: int, N: int) -> int:
    """Number of complex basis functions, constant included."""
    n = 1
    if scheme.has_disc_families:
        n += n_discs * N
    if scheme.has_pair_families:
        n += 2 * n_pairs * N
    return n


def _check_exterior(discs: tuple[Disc, ...], z: np.ndarray):
    for j, disc in enumerate(discs):
        if np.any(disc.contains(z)):
            raise DomainViolation(f"evaluation point inside disc {j}")


def basis_matrix(
    scheme: SchemeKind,
    discs: tuple[Disc, ...],
    pairs: tuple[PairMap, ...],
    N: int,
    z,
) -> np.ndarray:
    """Complex matrix of basis values, shape (len(z), n_basis), in the
    documented basis order.  Raises DomainViolation for points strictly
    inside any disc (boundary points are fine)."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    _check_exterior(discs, z)
    cols = np.empty((z.size, n_basis(scheme, len(discs), len(pairs), N)), dtype=complex)
    cols[:, 0] = 1.0
    idx = 1
    for disc in _laurent_discs(scheme, discs):
        base = disc.radius / (z - disc.center)
        acc = np.ones_like(z)
        for _ in range(N):
            acc = acc * base
            cols[:, idx] = acc
            idx += 1
    for pm in _active_pairs(scheme, pairs):
        zeta = pm.zeta_of(z)
        for base in (zeta, pm.amap.rho / zeta):
            acc = np.ones_like(z)
            for _ in range(N):
                acc = acc * base
                cols[:, idx] = acc
                idx += 1
    if not np.all(np.isfinite(cols)):
        raise DomainViolation("non-finite basis value; point too close to a pole")
    return cols


def basis_row(expansion: Expansion, z: complex) -> np.ndarray:
    """Basis values at one point, in the documented order."""
    return basis_matrix(
        expansion.scheme, expansion.discs, expansion.pairs, expansion.N, z
    )[0]


def _packed_coeffs(expansion: Expansion) -> np.ndarray:
    """Coefficients in basis order, constant excluded."""
    parts = list(expansion.disc_coeffs)
    for pos, neg in expansion.pair_coeffs:
        parts.extend((pos, neg))
    if not parts:
        return np.zeros(0, dtype=complex)
    return np.concatenate([np.asarray(p, dtype=complex) for p in parts])


def evaluate(expansion: Expansion, z):
    """w(z) = U0 z + constant + (coefficients . basis row); linear in the
    coefficients by construction."""
    zz = np.atleast_1d(np.asarray(z, dtype=complex))
    B = basis_matrix(expansion.scheme, expansion.discs, expansion.pairs, expansion.N, zz)
    out = expansion.U0 * zz + expansion.constant + B[:, 1:] @ _packed_coeffs(expansion)
    return out if np.ndim(z) else complex(out[0])


def far_field_dipole(expansion: Expansion) -> complex:
    """Coefficient of 1/z in the large-z expansion of w(z) - U0 z - const.

    Disc families contribute s_j a_1^{(j)}.  For a pair family, expanding the
    Moebius variable about infinity (zeta_p -> -sqrt(rho_p)) gives

        zeta_p^k   = (-sqrt(rho))^k  (1 + 2 k A r / z + O(1/z^2)),
        rho^k zeta_p^{-k} = (-1)^k rho^{k/2} (1 - 2 k A r / z + O(1/z^2)),

    with r the pair-frame rotation, so the 1/z weight of order k is
    2 k A r (-1)^k rho^{k/2} (c_k - d_k).
    """
    dip = 0.0 + 0.0j
    for disc, coeffs in zip(expansion.discs, expansion.disc_coeffs):
        dip += disc.radius * coeffs[0]
    ks = np.arange(1, expansion.N + 1)
    for pm, (pos, neg) in zip(expansion.pairs, expansion.pair_coeffs):
        fac = (2.0 * ks * pm.amap.A * pm.frame.rotation
               * (-1.0) ** ks * pm.amap.rho ** (ks / 2.0))
        dip += np.sum(fac * (pos - neg))
    return complex(dip)


def _geometry_extent(discs: tuple[Disc, ...]) -> float:
    return max(abs(d.center) + d.radius for d in discs)


def dipole_quadrature(expansion: Expansion, R: float | None = None, n: int = 256) -> complex:
    """(1/2 pi i) contour integral of (w(z) - U0 z) over |z| = R by the
    trapezoid rule; exponentially convergent in n since every singularity
    sits inside the discs.  Independent cross-check of far_field_dipole."""
    if n < 64:
        raise InvalidInput(f"need n >= 64 quadrature points, got {n}")
    extent = _geometry_extent(expansion.discs)
    if R is None:
        R = 4.0 * extent
    if R < 2.0 * extent:
        raise DomainViolation(f"contour radius {R} below 2x geometry extent {extent}")
    phi = 2.0 * math.pi * np.arange(n) / n
    zq = R * np.exp(1j * phi)
    w = evaluate(expansion, zq)
    return complex(np.mean((w - expansion.U0 * zq) * zq))


# ---------------------------------------------------------------------------
# plain-text serialization: header lines, then one coefficient per line as
# "family index re im" (families: const, disc<j>, pair<p>+, pair<p>-).
# ---------------------------------------------------------------------------

_FORMAT_TAG = "hybridisc-expansion v1"


def geometry_digest(discs: tuple[Disc, ...], pairs: tuple[PairMap, ...]) -> str:
    """Stable hash of the geometry an expansion's coefficients belong to."""
    h = hashlib.sha256()
    for d in discs:
        h.update(f"disc {d.center.real:.17g} {d.center.imag:.17g} {d.radius:.17g};".encode())
    for pm in pairs:
        f = pm.frame
        h.update(
            f"pair {f.index_pair[0]} {f.index_pair[1]} "
            f"{f.half_distance:.17g} {f.radius:.17g};".encode()
        )
    return h.hexdigest()


def save_expansion(expansion: Expansion, path) -> None:
    lines = [
        f"# {_FORMAT_TAG}",
        f"scheme {expansion.scheme.value}",
        f"N {expansion.N}",
        f"u0 {expansion.U0.real:.17g} {expansion.U0.imag:.17g}",
        f"geometry {geometry_digest(expansion.discs, expansion.pairs)}",
        f"const 0 {expansion.constant.real:.17g} {expansion.constant.imag:.17g}",
    ]
    for j, coeffs in enumerate(expansion.disc_coeffs):
        for k, c in enumerate(coeffs, start=1):
            lines.append(f"disc{j} {k} {c.real:.17g} {c.imag:.17g}")
    for p, (pos, neg) in enumerate(expansion.pair_coeffs):
        for tag, arr in ((f"pair{p}+", pos), (f"pair{p}-", neg)):
            for k, c in enumerate(arr, start=1):
                lines.append(f"{tag} {k} {c.real:.17g} {c.imag:.17g}")
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def load_expansion(path, discs: tuple[Disc, ...], pairs: tuple[PairMap, ...]) -> Expansion:
    """Read a coefficient file back against a known geometry; the stored
    geometry hash must match."""
    header: dict[str, str] = {}
    rows: list[tuple[str, int, complex]] = []
    with open(path, encoding="ascii") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if parts[0] in ("scheme", "N", "geometry"):
                header[parts[0]] = parts[1]
            elif parts[0] == "u0":
                header["u0"] = f"{parts[1]} {parts[2]}"
            else:
                rows.append((parts[0], int(parts[1]), float(parts[2]) + 1j * float(parts[3])))
    try:
        scheme = SchemeKind(header["scheme"])
        N = int(header["N"])
        u0re, u0im = header["u0"].split()
        U0 = float(u0re) + 1j * float(u0im)
    except KeyError as exc:
        raise InvalidInput(f"missing expansion header field: {exc}") from exc
    if header.get("geometry") != geometry_digest(discs, pairs):
        raise InvalidInput("geometry hash mismatch: coefficients belong to another geometry")

    constant = 0.0 + 0.0j
    disc_coeffs = [np.zeros(N, dtype=complex) for _ in discs] if scheme.has_disc_families else []
    pair_coeffs = (
        [(np.zeros(N, dtype=complex), np.zeros(N, dtype=complex)) for _ in pairs]
        if scheme.has_pair_families
        else []
    )
    for family, k, value in rows:
        if family == "const":
            constant = value
        elif family.startswith("disc"):
            disc_coeffs[int(family[4:])][k - 1] = value
        elif family.startswith("pair"):
            p = int(family[4:-1])
            pos, neg = pair_coeffs[p]
            (pos if family.endswith("+") else neg)[k - 1] = value
        else:
            raise InvalidInput(f"unknown coefficient family {family!r}")
    return Expansion(
        scheme=scheme,
        U0=U0,
        constant=constant,
        N=N,
        discs=tuple(discs),
        pairs=tuple(pairs),
        disc_coeffs=tuple(disc_coeffs),
        pair_coeffs=tuple(pair_coeffs),
    )
