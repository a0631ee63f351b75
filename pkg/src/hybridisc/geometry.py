"""Disc configurations, pairwise canonical frames, and close-pair detection.

A :class:`PairFrame` carries the rigid motion that sends a pair of equal
discs to the canonical position (centres at -d and +d on the real axis),
which is the geometry every conformal-map and exact-solution routine works
in.  Multi-disc representations attach one frame per close pair.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidGeometry, UnsupportedGeometry

#: Default gap below which a pair of discs is treated as close-to-touching.
DEFAULT_CLOSE_THRESHOLD = 1e-2

_RADIUS_RTOL = 1e-12


class BCKind(enum.Enum):
    """Which component of the complex potential the boundary condition pins."""

    FLOW = "flow"                  # Im w = const on each circle
    ELECTROSTATIC = "electrostatic"  # Re w = const on each circle


@dataclass(frozen=True)
class Disc:
    """A circular disc: ``center`` in the complex plane, ``radius > 0``."""

    center: complex
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise InvalidGeometry(f"disc radius must be positive, got {self.radius}")

    def contains(self, z, rtol: float = 1e-9):
        """True where ``z`` lies strictly inside the disc (boundary excluded)."""
        return np.abs(np.asarray(z) - self.center) < self.radius * (1.0 - rtol)


@dataclass(frozen=True)
class DiscConfiguration:
    """A set of non-overlapping discs plus the ambient uniform field.

    ``far_field`` is the complex slope of w at infinity (U0 for flow, E0 for
    the electrostatic problem).  ``reference_index`` names the circle whose
    boundary constant is pinned to zero; the constants on the other circles
    are solved for.
    """

    discs: tuple[Disc, ...]
    far_field: complex
    bc_kind: BCKind = BCKind.FLOW
    reference_index: int = 0

    def __post_init__(self):
        object.__setattr__(self, "discs", tuple(self.discs))
        if not self.discs:
            raise InvalidGeometry("configuration needs at least one disc")
        if not 0 <= self.reference_index < len(self.discs):
            raise InvalidGeometry(
                f"reference_index {self.reference_index} out of range for "
                f"{len(self.discs)} discs"
            )
        for (i, a), (j, b) in itertools.combinations(enumerate(self.discs), 2):
            if abs(b.center - a.center) <= a.radius + b.radius:
                raise InvalidGeometry(f"discs {i} and {j} overlap or touch")


@dataclass(frozen=True)
class PairFrame:
    """Rigid motion sending two equal discs to centres -d_pair, +d_pair.

    ``rotation`` is the unit complex number along the pair axis (from the
    first disc of ``index_pair`` to the second); applying the frame is
    ``Z = (z - midpoint) / rotation`` and the first centre lands on
    ``-half_distance``, the second on ``+half_distance``.
    """

    index_pair: tuple[int, int]
    midpoint: complex
    rotation: complex
    half_distance: float
    radius: float

    def to_frame(self, z):
        """Physical coordinates -> canonical pair coordinates."""
        return (np.asarray(z, dtype=complex) - self.midpoint) / self.rotation

    def from_frame(self, zc):
        """Canonical pair coordinates -> physical coordinates."""
        return self.midpoint + self.rotation * np.asarray(zc, dtype=complex)


def pair_frame(a: Disc, b: Disc, index_pair: tuple[int, int] = (0, 1)) -> PairFrame:
    """Canonical frame for a pair of equal discs.

    Raises UnsupportedGeometry for unequal radii (no canonical two-disc map
    is provided for those) and InvalidGeometry for overlapping discs.
    """
    if abs(a.radius - b.radius) > _RADIUS_RTOL * max(a.radius, b.radius):
        raise UnsupportedGeometry(
            f"pair frames require equal radii, got {a.radius} and {b.radius}"
        )
    span = b.center - a.center
    dist = abs(span)
    if dist <= a.radius + b.radius:
        raise InvalidGeometry("discs overlap or touch; no exterior pair frame")
    return PairFrame(
        index_pair=index_pair,
        midpoint=(a.center + b.center) / 2.0,
        rotation=span / dist,
        half_distance=dist / 2.0,
        radius=a.radius,
    )


def close_pairs(config: DiscConfiguration, threshold: float = DEFAULT_CLOSE_THRESHOLD) -> list[PairFrame]:
    """Frames for every unordered pair with boundary gap below ``threshold``.

    The gap is |c_i - c_j| - r_i - r_j; pairs are returned ordered by
    (i, j).  A disc may appear in several returned frames.
    """
    if not threshold > 0:
        raise InvalidGeometry(f"threshold must be positive, got {threshold}")
    frames = []
    for (i, a), (j, b) in itertools.combinations(enumerate(config.discs), 2):
        gap = abs(b.center - a.center) - a.radius - b.radius
        if gap < threshold:
            frames.append(pair_frame(a, b, index_pair=(i, j)))
    return frames


def two_disc_config(
    d: float,
    s: float,
    far_field: complex,
    bc_kind: BCKind = BCKind.FLOW,
) -> DiscConfiguration:
    """The canonical benchmark pair: equal discs of radius s centred at -d, +d.

    The reference circle (zero boundary constant) is the disc at +d, matching
    the normalization of the exact two-disc solution.
    """
    return DiscConfiguration(
        discs=(Disc(center=-d, radius=s), Disc(center=d, radius=s)),
        far_field=far_field,
        bc_kind=bc_kind,
        reference_index=1,
    )
