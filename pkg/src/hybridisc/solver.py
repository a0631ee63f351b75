"""Collocation, least-squares solve, and error metrics against the exact pair solution.

The boundary conditions Im w = gamma_j (flow) or Re w = gamma_j
(electrostatic) are enforced at collocation points and solved in the
least-squares sense.  One real row per point; each complex coefficient
contributes two real columns.  Two exact null directions are removed before
factoring ("gauge fixing"): the part of the additive constant the boundary
conditions never see (its real part for flow, imaginary for electrostatic)
is pinned to zero by omitting its column, and the reference circle's gamma
is pinned to zero.

The hybrid basis is overcomplete by design, so the matrix may be numerically
rank-deficient at large truncations; the solve uses a rank-revealing
complete-orthogonal factorization (LAPACK gelsy) and returns the
minimum-norm solution among the minimizers, discarding directions below
rank_tol times the leading one.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .basis import Expansion, PairMap, SchemeKind, basis_matrix, evaluate, n_basis, pair_map
from .conformal import to_annulus, to_physical
from .errors import (
    DegenerateSystem,
    InvalidInput,
    UnderdeterminedSystem,
    UnsupportedGeometry,
)
from .geometry import BCKind, DiscConfiguration
from .special import DEFAULT_SETTINGS, ExactSolution, KEvalSettings, exact_W

__all__ = [
    "CollocationPoints",
    "CollocationSystem",
    "SolveReport",
    "canonical_pair",
    "collocation_points",
    "assemble",
    "assemble_from_points",
    "solve_least_squares",
    "exact_solution_for",
    "boundary_error",
    "modes_for_accuracy",
]

DEFAULT_RANK_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class CollocationPoints:
    """Boundary sample points with their metadata: the physical circle each
    point sits on, the parameter angle that generated it, and whether it came
    from an annulus-circle parametrization (True) or a physical one."""

    z: np.ndarray
    circle: np.ndarray
    angle: np.ndarray
    via_map: np.ndarray


@dataclass(eq=False)
class CollocationSystem:
    """Assembled real overdetermined system plus everything needed to turn a
    solution vector back into an Expansion.

    Column layout: column 0 is the free part of the additive constant
    (imaginary part for flow, real for electrostatic); then two columns
    (real, imaginary part) per complex coefficient in basis order; then one
    gamma column per non-reference disc in ascending disc index.
    """

    matrix: np.ndarray
    rhs: np.ndarray
    points: CollocationPoints
    config: DiscConfiguration
    scheme: SchemeKind
    N: int
    pairs: tuple[PairMap, ...]
    gamma_discs: tuple[int, ...]

    @property
    def n_complex(self) -> int:
        return n_basis(self.scheme, len(self.config.discs), len(self.pairs), self.N) - 1


@dataclass(eq=False)
class SolveReport:
    """Solved expansion with solve diagnostics.  ``gammas`` holds one entry
    per disc (zero at the reference index).  ``max_boundary_error`` is filled
    by :func:`boundary_error`."""

    expansion: Expansion
    gammas: np.ndarray
    residual_norm: float
    rank_estimate: int
    wall_time: float
    max_boundary_error: float | None = None


def canonical_pair(config: DiscConfiguration) -> PairMap:
    """The single pair map of a two-disc configuration (first disc maps to
    -d, second to +d)."""
    if len(config.discs) != 2:
        raise UnsupportedGeometry(
            "annulus-variable schemes need exactly two discs; "
            "use the multidisc module for more"
        )
    return pair_map(config.discs[0], config.discs[1], index_pair=(0, 1))


def _pairs_for(config: DiscConfiguration, scheme: SchemeKind) -> tuple[PairMap, ...]:
    return (canonical_pair(config),) if scheme.has_pair_families else ()


def collocation_points(
    config: DiscConfiguration,
    scheme: SchemeKind,
    N: int,
    n_colloc: int,
) -> CollocationPoints:
    """Collocation points for the two-disc schemes.

    n_colloc points per circle: equispaced in angle on each physical circle
    (disc-family schemes), and the physical images of equispaced points on
    each annulus circle |zeta| = 1, rho (pair-family schemes).  The hybrid
    scheme takes the union, so all four circles carry points; the
    annulus-sourced ones crowd into the gap where they are needed.
    """
    if n_colloc < 2 * N + 2:
        raise UnderdeterminedSystem(
            f"need at least 2N+2 = {2 * N + 2} points per circle, got {n_colloc}"
        )
    th = 2.0 * math.pi * np.arange(n_colloc) / n_colloc
    zs, circles, angles, via = [], [], [], []

    def add(z, circle_index, from_map):
        zs.append(z)
        circles.append(np.full(n_colloc, circle_index))
        angles.append(th)
        via.append(np.full(n_colloc, from_map))

    if scheme.has_disc_families:
        for j, disc in enumerate(config.discs):
            add(disc.center + disc.radius * np.exp(1j * th), j, False)
    if scheme.has_pair_families:
        pm = canonical_pair(config)
        outer = pm.frame.from_frame(to_physical(pm.amap, np.exp(1j * th)))
        inner = pm.frame.from_frame(to_physical(pm.amap, pm.amap.rho * np.exp(1j * th)))
        add(outer, pm.frame.index_pair[1], True)   # |zeta| = 1 -> disc at +d
        add(inner, pm.frame.index_pair[0], True)   # |zeta| = rho -> disc at -d
    return CollocationPoints(
        z=np.concatenate(zs),
        circle=np.concatenate(circles),
        angle=np.concatenate(angles),
        via_map=np.concatenate(via),
    )


def assemble_from_points(
    config: DiscConfiguration,
    scheme: SchemeKind,
    pairs: tuple[PairMap, ...],
    N: int,
    points: CollocationPoints,
) -> CollocationSystem:
    """One real boundary-condition row per collocation point.

    The U0 z far-field term is moved to the right-hand side; gamma unknowns
    enter with -1 on their own circle's rows; the gauge-fixed entries are
    omitted (see module docstring).
    """
    B = basis_matrix(scheme, config.discs, pairs, N, points.z)
    n_pts, n_cols = B.shape
    gamma_discs = tuple(
        j for j in range(len(config.discs)) if j != config.reference_index
    )
    n_real = 1 + 2 * (n_cols - 1) + len(gamma_discs)
    if n_pts < n_real:
        raise UnderdeterminedSystem(f"{n_pts} rows for {n_real} unknowns")
    M = np.zeros((n_pts, n_real))
    if config.bc_kind is BCKind.FLOW:
        # Im[(p + iq)(Br + iBi)] = p Bi + q Br ; Im[i C_free] = C_free
        M[:, 0] = 1.0
        M[:, 1:n_real - len(gamma_discs):2] = B[:, 1:].imag
        M[:, 2:n_real - len(gamma_discs):2] = B[:, 1:].real
        rhs = -np.imag(config.far_field * points.z)
    else:
        # Re[(p + iq)(Br + iBi)] = p Br - q Bi ; Re[C_free] = C_free
        M[:, 0] = 1.0
        M[:, 1:n_real - len(gamma_discs):2] = B[:, 1:].real
        M[:, 2:n_real - len(gamma_discs):2] = -B[:, 1:].imag
        rhs = -np.real(config.far_field * points.z)
    for col, j in enumerate(gamma_discs):
        M[:, n_real - len(gamma_discs) + col] = -(points.circle == j).astype(float)
    if not (np.all(np.isfinite(M)) and np.all(np.isfinite(rhs))):
        raise InvalidInput("non-finite entry in collocation system")
    return CollocationSystem(
        matrix=M,
        rhs=rhs,
        points=points,
        config=config,
        scheme=scheme,
        N=N,
        pairs=pairs,
        gamma_discs=gamma_discs,
    )


def assemble(
    config: DiscConfiguration,
    scheme: SchemeKind,
    N: int,
    n_colloc: int | None = None,
) -> CollocationSystem:
    """Assemble the two-disc collocation system; n_colloc defaults to 4N per
    circle (the solve is insensitive to this factor)."""
    if n_colloc is None:
        n_colloc = 4 * N
    pairs = _pairs_for(config, scheme)
    points = collocation_points(config, scheme, N, n_colloc)
    return assemble_from_points(config, scheme, pairs, N, points)


def _expansion_from_vector(system: CollocationSystem, x: np.ndarray) -> tuple[Expansion, np.ndarray]:
    flow = system.config.bc_kind is BCKind.FLOW
    constant = 1j * x[0] if flow else complex(x[0])
    nc = system.n_complex
    # real/imag columns are interleaved as (p, q) with p = Re, q = Im in both
    # BC kinds; the BC kind only changes the matrix entries, not the packing.
    coef = x[1:1 + 2 * nc:2] + 1j * x[2:2 + 2 * nc:2]
    gammas = np.zeros(len(system.config.discs))
    for col, j in enumerate(system.gamma_discs):
        gammas[j] = x[1 + 2 * nc + col]
    discs = system.config.discs
    N = system.N
    idx = 0
    disc_coeffs: tuple[np.ndarray, ...] = ()
    if system.scheme.has_disc_families:
        disc_coeffs = tuple(coef[i * N:(i + 1) * N] for i in range(len(discs)))
        idx = len(discs) * N
    pair_coeffs: tuple[tuple[np.ndarray, np.ndarray], ...] = ()
    if system.scheme.has_pair_families:
        pair_coeffs = tuple(
            (coef[idx + 2 * p * N: idx + (2 * p + 1) * N],
             coef[idx + (2 * p + 1) * N: idx + (2 * p + 2) * N])
            for p in range(len(system.pairs))
        )
    expansion = Expansion(
        scheme=system.scheme,
        U0=system.config.far_field,
        constant=constant,
        N=N,
        discs=discs,
        pairs=system.pairs,
        disc_coeffs=disc_coeffs,
        pair_coeffs=pair_coeffs,
    )
    return expansion, gammas


def solve_least_squares(
    system: CollocationSystem,
    rank_tol: float = DEFAULT_RANK_TOL,
) -> SolveReport:
    """Minimum-norm least-squares solution of the assembled system.

    Directions with (pivoted-R) magnitude below rank_tol times the leading
    one are discarded, which is what keeps the overcomplete hybrid basis
    coefficients bounded.  Deterministic for fixed inputs.
    """
    t0 = time.perf_counter()
    x, _, rank, _ = scipy.linalg.lstsq(
        system.matrix, system.rhs, cond=rank_tol, lapack_driver="gelsy"
    )
    wall = time.perf_counter() - t0
    if rank == 0:
        raise DegenerateSystem("all directions below rank tolerance")
    residual = float(np.linalg.norm(system.matrix @ x - system.rhs))
    expansion, gammas = _expansion_from_vector(system, x)
    return SolveReport(
        expansion=expansion,
        gammas=gammas,
        residual_norm=residual,
        rank_estimate=int(rank),
        wall_time=wall,
    )


def exact_solution_for(
    config: DiscConfiguration,
    settings: KEvalSettings = DEFAULT_SETTINGS,
) -> ExactSolution:
    """Exact two-disc solution matching a configuration, in the canonical
    pair frame (far-field slope transforms by the frame rotation)."""
    pm = canonical_pair(config)
    return ExactSolution(
        map=pm.amap,
        U0=config.far_field * pm.frame.rotation,
        settings=settings,
    )


def boundary_error(
    report: SolveReport,
    exact: ExactSolution | None = None,
    n_test: int = 2048,
) -> float:
    """Max |w_num - w_exact| over n_test equispaced angles per circle, after
    removing the physically irrelevant additive constant.

    The gauge constant is w_num(z_ref) - W_exact(-1) with z_ref the physical
    image of zeta = -1, where the exact solution is normalized to zero.
    Stores the result on the report and returns it.
    """
    expansion = report.expansion
    pm = expansion.pairs[0] if expansion.pairs else pair_map(*expansion.discs)
    if exact is None:
        exact = ExactSolution(
            map=pm.amap,
            U0=expansion.U0 * pm.frame.rotation,
        )
    th = 2.0 * math.pi * np.arange(n_test) / n_test
    z_ref = pm.frame.from_frame(to_physical(pm.amap, np.asarray(-1.0 + 0.0j)))
    gauge = evaluate(expansion, complex(z_ref))
    err = 0.0
    for disc in expansion.discs:
        zc = disc.center + disc.radius * np.exp(1j * th)
        w_num = evaluate(expansion, zc)
        w_ex = exact_W(exact, to_annulus(pm.amap, pm.frame.to_frame(zc)))
        err = max(err, float(np.max(np.abs(w_num - gauge - w_ex))))
    report.max_boundary_error = err
    return err


def modes_for_accuracy(
    config: DiscConfiguration,
    scheme: SchemeKind,
    target: float,
    N_max: int,
    N_step: int = 5,
    n_colloc_factor: int = 4,
    n_test: int = 2048,
    rank_tol: float = DEFAULT_RANK_TOL,
    reports: list[SolveReport] | None = None,
) -> int | None:
    """Smallest truncation on the grid {N_step, 2 N_step, ...} <= N_max whose
    boundary error meets ``target``; None when the grid is exhausted
    (the NotReached outcome).  Solved reports are appended to ``reports``
    when a list is supplied."""
    if not target > 0:
        raise InvalidInput(f"target must be positive, got {target}")
    exact = exact_solution_for(config)
    for N in range(N_step, N_max + 1, N_step):
        report = solve_least_squares(
            assemble(config, scheme, N, n_colloc_factor * N), rank_tol
        )
        err = boundary_error(report, exact, n_test)
        if reports is not None:
            reports.append(report)
        if err <= target:
            return N
    return None
