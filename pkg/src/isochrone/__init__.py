"""Symbolic-numeric toolkit for uniformly isochronous planar polynomial systems.

Exact rational polynomial and Fourier algebra decide center existence,
Darboux invariants, reversibility and polynomial-commutant structure; an
independent adaptive Runge-Kutta route cross-checks the quadrature solution,
boundary radii and classification throughout.
"""

from .errors import (
    BlowUpError,
    EmptyRadialError,
    IdenticallyZeroError,
    IdentityViolationError,
    IsochroneError,
    NonHomogeneousError,
    NonzeroMeanError,
    NotACenterError,
    OutsideValidIntervalError,
    SpecParseError,
    ZeroInputError,
    ZeroRadialError,
    ZeroTopPartError,
)
from .polyalg import (
    ONE,
    R2,
    X,
    Y,
    BivarPoly,
    circle_harmonic,
    evaluate,
    homogeneous_components,
    homogeneous_part,
    partials,
    poly_from_text,
    poly_from_triples,
    poly_to_text,
    rotational_derivative,
)
from .trig import (
    TrigPoly,
    antiderivative,
    degree3_axis_criterion,
    global_maxima,
    mean_is_zero,
    restrict_to_circle,
    symmetry_axes,
    symmetry_axes_of_polynomial,
    zeros_on_period,
)
from .system import (
    DarbouxReport,
    FactoredSystem,
    PolyVectorField,
    UniformSystem,
    apply_field,
    build_eq2,
    build_thm2,
    counterexample_system,
    darboux_report,
    divergence,
    invariant_circles,
    vector_field,
)
from .centerlab import (
    CenterReport,
    ConservedQuantity,
    RadialQuadrature,
    boundary_radius,
    boundary_radius_by_escape,
    cartesian_trajectory,
    classify,
    conserved_quantity,
    is_center,
    isochronicity_check,
    polar_rhs,
    polar_trajectory,
    return_map,
)
from .commutant import (
    CommutantBasis,
    FormCheckResult,
    NonPolynomialCommuter,
    admissible_top_degrees,
    check_form7,
    check_form8,
    commutant_nullspace,
    lie_bracket,
    predicts_polynomial_commuter,
    radial_commuter,
)

__version__ = "0.1.0"
