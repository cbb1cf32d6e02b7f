#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "lfcov/coverage.hpp"
#include "lfcov/scenario.hpp"
#include "lfcov/selfcheck.hpp"
#include "lfcov/simulator.hpp"

namespace py = pybind11;
using namespace lfcov;

namespace pybind11::detail {

// Vec2 <-> (x, y)
template <>
struct type_caster<Vec2> {
    PYBIND11_TYPE_CASTER(Vec2, const_name("tuple[float, float]"));

    bool load(handle src, bool) {
        if (!py::isinstance<py::sequence>(src)) return false;
        const auto seq = py::reinterpret_borrow<py::sequence>(src);
        if (seq.size() != 2) return false;
        value.x = seq[0].cast<double>();
        value.y = seq[1].cast<double>();
        return true;
    }

    static handle cast(Vec2 v, return_value_policy, handle) {
        return py::make_tuple(v.x, v.y).release();
    }
};

}  // namespace pybind11::detail

namespace {

std::vector<std::vector<double>> matrix_rows(const Eigen::MatrixXd& m) {
    std::vector<std::vector<double>> rows(m.rows());
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        rows[i].assign(m.row(i).begin(), m.row(i).end());
    }
    return rows;
}

py::dict summary_dict(const RunSummary& s) {
    py::dict d;
    d["steps"] = s.steps;
    d["min_obstacle_distance"] =
        s.min_obstacle_distance ? py::object(py::float_(*s.min_obstacle_distance))
                                : py::object(py::none());
    d["max_elongation"] = s.max_elongation;
    d["final_e_gamma"] = s.final_e_gamma;
    d["mean_e_c_last_10pct"] = s.mean_e_c_last_10pct;
    d["total_projections"] = s.total_projections;
    d["follower_steps"] = s.follower_steps;
    d["completed"] = s.completed;
    if (s.fault) {
        py::dict f;
        f["type"] = s.fault->type;
        f["message"] = s.fault->message;
        f["t"] = s.fault->time;
        d["fault"] = f;
    } else {
        d["fault"] = py::none();
    }
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Leader-follower coverage control simulator";

    py::register_exception<Error>(m, "SimulationError");

    py::class_<Rect>(m, "Rect")
        .def(py::init([](Vec2 min_corner, double width, double height) {
                 return Rect{min_corner, width, height};
             }),
             py::arg("min_corner"), py::arg("width"), py::arg("height"))
        .def_readonly("min_corner", &Rect::min_corner)
        .def_readonly("width", &Rect::width)
        .def_readonly("height", &Rect::height);

    py::class_<Homography>(m, "Homography")
        .def_property_readonly("matrix",
                               [](const Homography& H) { return matrix_rows(H.h); })
        .def("__repr__", [](const Homography& H) {
            std::ostringstream out;
            out << "Homography(" << H.h << ")";
            return out.str();
        });

    m.def(
        "homography_from_quads",
        [](const std::vector<Vec2>& src, const std::vector<Vec2>& dst) {
            if (src.size() != 4 || dst.size() != 4) {
                throw py::value_error("expected 4 source and 4 destination vertices");
            }
            ConvexQuad s, d;
            std::copy(src.begin(), src.end(), s.v.begin());
            std::copy(dst.begin(), dst.end(), d.v.begin());
            return homography_from_quads(s, d);
        },
        py::arg("src"), py::arg("dst"));
    m.def("apply", [](const Homography& H, Vec2 p) { return apply(H, p); }, py::arg("h"),
          py::arg("p"));
    m.def("invert", [](const Homography& H) { return invert(H); }, py::arg("h"));
    m.def(
        "jacobian",
        [](const Homography& H, Vec2 p) { return matrix_rows(jacobian(H, p)); }, py::arg("h"),
        py::arg("p"));

    m.def(
        "bounded_voronoi",
        [](const std::vector<Vec2>& points, const Rect& domain) {
            std::vector<std::vector<Vec2>> cells;
            for (const Polygon& cell : bounded_voronoi(points, domain)) {
                cells.push_back(cell.v);
            }
            return cells;
        },
        py::arg("points"), py::arg("domain"));
    m.def(
        "voronoi_neighbors",
        [](const std::vector<Vec2>& points, const Rect& domain) {
            return bounded_voronoi_tessellation(points, domain).neighbors;
        },
        py::arg("points"), py::arg("domain"));
    m.def(
        "polygon_area",
        [](const std::vector<Vec2>& vertices) { return polygon_area(Polygon{vertices}); },
        py::arg("vertices"));
    m.def(
        "polygon_centroid",
        [](const std::vector<Vec2>& vertices) { return polygon_centroid(Polygon{vertices}); },
        py::arg("vertices"));
    m.def("distance_point_to_polyline", &distance_point_to_polyline, py::arg("p"),
          py::arg("polyline"));

    py::class_<MsdParams>(m, "MsdParams")
        .def(py::init([](double mass, double damping, double stiffness, double rest_length,
                         int leader_count) {
                 return MsdParams{mass, damping, stiffness, rest_length, leader_count};
             }),
             py::arg("mass") = 1.0, py::arg("damping") = 1.0, py::arg("stiffness") = 10.0,
             py::arg("rest_length") = 1.0, py::arg("leader_count") = 10)
        .def_readonly("mass", &MsdParams::m)
        .def_readonly("damping", &MsdParams::c)
        .def_readonly("stiffness", &MsdParams::kappa)
        .def_readonly("rest_length", &MsdParams::rest_length)
        .def_readonly("leader_count", &MsdParams::leader_count);

    py::class_<LeaderState>(m, "LeaderState")
        .def_readonly("positions", &LeaderState::positions)
        .def_readonly("velocities", &LeaderState::velocities)
        .def_readonly("time", &LeaderState::time);

    m.attr("ELONGATION_LIMIT") = kElongationLimit;
    m.def(
        "build_grid_topology",
        [](const MsdParams& params) {
            std::vector<std::tuple<int, int, double>> out;
            for (const SpringEdge& e : build_grid_topology(params)) {
                out.emplace_back(e.k, e.l, e.rest);
            }
            return out;
        },
        py::arg("params"));
    m.def("make_rest_grid", &make_rest_grid, py::arg("params"), py::arg("head_mid"),
          py::arg("heading"));
    m.def(
        "msd_step",
        [](const LeaderState& state, const std::vector<Vec2>& external,
           const MsdParams& params, double dt) {
            return step(state, external, build_grid_topology(params), params, dt);
        },
        py::arg("state"), py::arg("external"), py::arg("params"), py::arg("dt"));
    m.def(
        "system_energy",
        [](const LeaderState& state, const MsdParams& params) {
            return system_energy(state, build_grid_topology(params), params);
        },
        py::arg("state"), py::arg("params"));
    m.def(
        "max_elongation",
        [](const LeaderState& state, const MsdParams& params) {
            return elongation_report(state, build_grid_topology(params), params).max_ratio;
        },
        py::arg("state"), py::arg("params"));

    py::class_<VirtualDomain>(m, "VirtualDomain")
        .def_readonly("rectangle", &VirtualDomain::rectangle)
        .def_readonly("mesh_count", &VirtualDomain::mesh_count)
        .def_readonly("virtual_vertices", &VirtualDomain::virtual_vertices);
    m.def("make_virtual_domain", &make_virtual_domain, py::arg("leader_count"),
          py::arg("cell_width"), py::arg("cell_height"));

    m.def(
        "locational_cost",
        [](const std::vector<Vec2>& followers, const VirtualDomain& vd) {
            return locational_cost(followers, vd, DensityField::uniform());
        },
        py::arg("virtual_followers"), py::arg("virtual_domain"));
    m.def(
        "centroids",
        [](const std::vector<Vec2>& followers, const VirtualDomain& vd) {
            return centroids(followers, vd, DensityField::uniform());
        },
        py::arg("virtual_followers"), py::arg("virtual_domain"));
    m.def(
        "virtual_control",
        [](const std::vector<Vec2>& followers, const VirtualDomain& vd, double K,
           const std::string& law) {
            CoverageGains gains;
            gains.K = K;
            if (law == "lloyd") {
                gains.law = CoverageLaw::lloyd;
            } else if (law == "exact") {
                gains.law = CoverageLaw::exact;
            } else if (law == "decentralized") {
                gains.law = CoverageLaw::decentralized;
            } else {
                throw py::value_error("law must be lloyd, exact or decentralized");
            }
            return virtual_control(followers, vd, DensityField::uniform(), gains);
        },
        py::arg("virtual_followers"), py::arg("virtual_domain"), py::arg("K") = 1.0,
        py::arg("law") = "exact");
    m.def(
        "aggregate_error",
        [](const std::vector<Vec2>& followers, const VirtualDomain& vd) {
            return aggregate_error(followers, vd, DensityField::uniform());
        },
        py::arg("virtual_followers"), py::arg("virtual_domain"));

    m.def(
        "plan_path",
        [](Vec2 start, Vec2 goal, double clearance, double v_ref) {
            PlannerParams params;
            params.clearance = clearance;
            const ReferencePath path =
                plan_potential_field(start, goal, {}, params, v_ref);
            return path.samples;
        },
        py::arg("start"), py::arg("goal"), py::arg("clearance") = 0.5, py::arg("v_ref") = 0.5);

    m.def("parse_scenario", &parse_scenario, py::arg("json_text"));
    m.def("serialize_scenario", &serialize_scenario, py::arg("scenario"));
    py::class_<Scenario>(m, "Scenario")
        .def_property_readonly("follower_count",
                               [](const Scenario& sc) { return sc.follower_count; })
        .def_property_readonly("leader_count",
                               [](const Scenario& sc) { return sc.msd.leader_count; })
        .def_property_readonly("duration", [](const Scenario& sc) { return sc.duration; })
        .def("validate", &Scenario::validate);
    m.def("reference_scenario", &reference_scenario);

    m.def(
        "run_scenario",
        [](const Scenario& scenario, bool with_records) {
            const RunResult result = run(scenario);
            py::dict out;
            out["summary"] = summary_dict(result.summary);
            if (with_records) {
                py::list records;
                for (const StepRecord& r : result.records) {
                    py::dict rec;
                    rec["t"] = r.time;
                    rec["leaders"] = r.leaders;
                    rec["followers"] = r.followers;
                    rec["followers_virtual"] = r.followers_virtual;
                    rec["e_gamma"] = r.e_gamma;
                    rec["e_c"] = r.e_c;
                    rec["max_elong"] = r.max_elongation;
                    rec["seam"] = r.seam;
                    records.append(rec);
                }
                out["records"] = records;
            }
            return out;
        },
        py::arg("scenario"), py::arg("with_records") = false);

    m.def(
        "run_check_suite",
        [](const std::string& suite) {
            py::list out;
            for (const CheckResult& r : run_check_suite(suite)) {
                py::dict d;
                d["name"] = r.name;
                d["pass"] = r.pass;
                d["detail"] = r.detail;
                out.append(d);
            }
            return out;
        },
        py::arg("suite") = "all");
}
