"""Leader-follower coverage control simulator."""

from lfcov._core import (
    ELONGATION_LIMIT,
    Homography,
    LeaderState,
    MsdParams,
    Rect,
    Scenario,
    SimulationError,
    VirtualDomain,
    aggregate_error,
    apply,
    bounded_voronoi,
    build_grid_topology,
    centroids,
    distance_point_to_polyline,
    homography_from_quads,
    invert,
    jacobian,
    locational_cost,
    make_rest_grid,
    make_virtual_domain,
    max_elongation,
    msd_step,
    parse_scenario,
    plan_path,
    polygon_area,
    polygon_centroid,
    reference_scenario,
    run_check_suite,
    run_scenario,
    serialize_scenario,
    system_energy,
    virtual_control,
    voronoi_neighbors,
)

__all__ = [
    "ELONGATION_LIMIT",
    "Homography",
    "LeaderState",
    "MsdParams",
    "Rect",
    "Scenario",
    "SimulationError",
    "VirtualDomain",
    "aggregate_error",
    "apply",
    "bounded_voronoi",
    "build_grid_topology",
    "centroids",
    "distance_point_to_polyline",
    "homography_from_quads",
    "invert",
    "jacobian",
    "locational_cost",
    "make_rest_grid",
    "make_virtual_domain",
    "max_elongation",
    "msd_step",
    "parse_scenario",
    "plan_path",
    "polygon_area",
    "polygon_centroid",
    "reference_scenario",
    "run_check_suite",
    "run_scenario",
    "serialize_scenario",
    "system_energy",
    "virtual_control",
    "voronoi_neighbors",
]
