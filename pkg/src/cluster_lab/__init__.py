"""Planar-cluster laboratory.

Representations of finite planar clusters, classical / anisotropic /
fractional perimeter functionals, example packings (Apollonian gasket,
square gasket, fat-Cantor cluster) and a grid annealer approximating
minimal N-clusters.
"""

from .annealing import (
    AnnealConfig,
    ClusterAnnealer,
    MinimizeResult,
    competitor_bound,
    minimize_n_cluster,
    p_sequence,
)
from .areaspec import AreaSpec, parse_area_spec
from .bubbles import (
    double_bubble_perimeter,
    double_bubble_radius,
    standard_double_bubble,
)
from .cluster import Cluster, cluster_perimeter, measures, truncate, union_perimeter
from .errors import (
    ClusterLabError,
    EmptyBoundaryError,
    HypothesisViolatedError,
    InsufficientDepthError,
    InvalidArgumentError,
    InvalidClusterError,
    InvalidRegionError,
    MalformedMeshError,
    NotFatError,
    UnsupportedRepresentationError,
)
from .functionals import (
    EuclideanNorm,
    ManhattanNorm,
    Norm,
    PolygonalNorm,
    anisotropic_cluster_perimeter,
    anisotropic_perimeter,
    fractional_cluster_perimeter,
    fractional_perimeter_disk,
    fractional_perimeter_mc,
    wulff_lower_bound,
)
from .grid import (
    GridCluster,
    boundary_connectivity,
    boundary_diameter,
    boundary_hausdorff_distance,
    edge_count_perimeter,
    locality_check,
    mask_contour_length,
    triple_point_count,
)
from .mesh import BoundaryMesh, MeshSegment, build_mesh, diameter_of_boundary, interface_length
from .packings import (
    CANONICAL_SEED,
    ApollonianNode,
    CantorCluster,
    ExponentEstimate,
    build_cantor_cluster,
    build_square_gasket,
    estimate_packing_exponent,
    gasket_radius_power_sums,
    generate_apollonian,
    generate_apollonian_nodes,
    generate_apollonian_quadruples,
    radius_partial_sums,
    square_gasket_areas,
)
from .regions import (
    ArcEdge,
    ArcPolygon,
    AxisRect,
    Disk,
    PixelMask,
    SegmentEdge,
    area,
    diameter,
    region_perimeter,
)

__version__ = "0.1.0"
