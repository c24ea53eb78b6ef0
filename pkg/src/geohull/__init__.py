"""Approximate geodesic convex hulls via iterated segment sampling.

Highlights: hyperbolic half-plane geometry with a vertical metric
extension, the Kantorovich hull iteration over any geodesic space, the
three-point configuration whose iterated hull is not convex, and sampled
convex separators.
"""

from .counterexample import (EPS1, EPS2, DropGapReport, ExoticConfiguration,
                             IncidenceReport, compute_epsilons,
                             crossing_consistency, exotic_configuration,
                             verify_drop_gap, verify_incidences)
from .errors import (CoincidentPointsError, ConfigError, GeometryError,
                     ResourceLimitError, SnapRadiusError)
from .extension import (EQUAL_BASE_TOL, EPoint, dist_ext, geod_ext,
                        reconstruct_height, ruler_ext)
from .halfplane import (Arc, HPoint, KleinPoint, Vertical, dist, foot_param,
                        from_klein, geod, geodesic_through, is_between,
                        param_of, point_at, point_to_geodesic_distance,
                        segment_intersection, to_klein)
from .hull import (DEFAULT_MAX_POINTS, GridIndex, PointCloud, covers,
                   drop_set, generator_witness, hausdorff, kantorovich_hull,
                   min_dist, read_cloud_csv, read_slice_csv, slice_cloud,
                   write_cloud_csv, write_slice_csv)
from .separator import (SampledFunction, SeparatorReport, SeparatorResult,
                        build_separator, check_sep1_euclidean, check_sep2,
                        read_function_csv, verify_separator,
                        write_function_csv)
from .spaces import (AxiomReport, EuclideanSpace, HalfPlaneSpace, Line,
                     VerticalExtension, check_betweenness_axioms,
                     check_incidence, check_ruler, lines_close, make_space,
                     run_axiom_suite)

__version__ = "0.1.0"

__all__ = [
    "EPS1", "EPS2", "EQUAL_BASE_TOL", "DEFAULT_MAX_POINTS",
    "Arc", "AxiomReport", "CoincidentPointsError", "ConfigError",
    "DropGapReport", "EPoint", "EuclideanSpace", "ExoticConfiguration",
    "GeometryError", "GridIndex", "HPoint", "HalfPlaneSpace",
    "IncidenceReport", "KleinPoint", "Line", "PointCloud",
    "ResourceLimitError", "SampledFunction", "SeparatorReport",
    "SeparatorResult", "SnapRadiusError", "Vertical", "VerticalExtension",
    "build_separator", "check_betweenness_axioms", "check_incidence",
    "check_ruler", "check_sep1_euclidean", "check_sep2", "compute_epsilons",
    "covers", "crossing_consistency", "dist", "dist_ext", "drop_set",
    "exotic_configuration", "foot_param", "from_klein", "generator_witness",
    "geod", "geod_ext", "geodesic_through", "hausdorff", "is_between",
    "kantorovich_hull", "lines_close", "make_space", "min_dist", "param_of",
    "point_at",
    "point_to_geodesic_distance", "read_cloud_csv", "read_function_csv",
    "read_slice_csv", "reconstruct_height", "ruler_ext", "run_axiom_suite",
    "segment_intersection", "slice_cloud", "to_klein", "verify_drop_gap",
    "verify_incidences", "verify_separator", "write_cloud_csv",
    "write_function_csv", "write_slice_csv",
]
