"""Circumcenter of mass of simplicial chains, with the power-of-a-simplex identities behind it."""
from .chain import (
    Chain,
    WeightedCenter,
    boundary,
    canonicalize,
    ccm,
    ccm_cycle_boundary,
    centroid_of_mass,
    cone_fill,
    cycle_moment_residuals,
    euler_point,
    facet_edge_square_sums,
    facet_radius_form,
    fill,
    is_cycle,
    minkowski_residual,
)
from .errors import (
    DegenerateCone,
    DegenerateSimplex,
    DimensionMismatch,
    GeometryError,
    OrientationError,
    ParseError,
    SingularMatrix,
    UnsupportedDimension,
    ValidationError,
)
from .geom import gram_measure, signed_volume, solve_linear
from .io import Report, dump_chain, parse_chain, parse_report, serialize_report
from .simplex import (
    PowEstimate,
    Simplex,
    Sphere,
    centroid,
    circumsphere,
    hyperfaces_with_normals,
    lemma_residual,
    pow_simplex_circum,
    pow_simplex_edges,
    pow_simplex_mc,
    power_of_point,
)
from .spherical import (
    SphericalMass,
    SphericalSimplex,
    chordal_mass_identity,
    lift,
    spherical_ccm,
    spherical_cycle_residual,
    spherical_volume,
    spherical_weighted_circumcenter,
)

__version__ = "0.1.0"
