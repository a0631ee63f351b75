"""Hybrid-basis collocation for potentials exterior to close-to-touching discs.

The complex potential outside a set of circular discs is represented by
Fourier-Laurent series about the disc centres, optionally augmented, for each
close-to-touching pair, by a Laurent series in the Moebius variable that maps
the pair's exterior onto a concentric annulus.  Coefficients are fit by
least-squares collocation on the boundary circles.  An exact special-function
solution for the two-disc case provides the error oracle.
"""

from .basis import (
    Expansion,
    PairMap,
    SchemeKind,
    basis_row,
    dipole_quadrature,
    evaluate,
    far_field_dipole,
    load_expansion,
    pair_map,
    save_expansion,
)
from .conformal import (
    AnnulusMap,
    annulus_map,
    limit_points,
    nu_to_theta,
    theta_to_nu,
    to_annulus,
    to_physical,
)
from .diagnostics import (
    CutoffSpec,
    DecayProfile,
    cutoff_phi,
    decay_profile,
    hybrid_split_w21,
)
from .errors import (
    ConvergenceFailure,
    DegenerateSystem,
    DomainViolation,
    HybridiscError,
    InvalidGeometry,
    InvalidInput,
    PoleAtInfinity,
    PoleInDisc,
    UnderdeterminedSystem,
    UnsupportedGeometry,
)
from .geometry import (
    BCKind,
    Disc,
    DiscConfiguration,
    PairFrame,
    close_pairs,
    pair_frame,
    two_disc_config,
)
from .multidisc import (
    MultiDiscProblem,
    build_representation,
    modes_vs_separation,
    nine_disc_config,
    nine_disc_problem,
    solve_multidisc,
)
from .solver import (
    CollocationSystem,
    SolveReport,
    assemble,
    boundary_error,
    collocation_points,
    exact_solution_for,
    modes_for_accuracy,
    solve_least_squares,
)
from .special import (
    DEFAULT_SETTINGS,
    ExactSolution,
    K,
    KEvalSettings,
    K_modular,
    K_prime,
    K_sum,
    exact_W,
    exact_w,
    omega_coeffs,
    omega_field,
    prime_P,
    w2_log_part,
)

__version__ = "0.1.0"
