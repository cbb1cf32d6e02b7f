#include "lfcov/plot.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lfcov/coverage.hpp"

namespace lfcov {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

struct Mapper {
    double x0, y0, x1, y1;        // world box
    double px, py, pw, ph;        // pixel box
    Vec2 operator()(Vec2 w) const {
        const double sx = pw / (x1 - x0);
        const double sy = ph / (y1 - y0);
        const double s = std::min(sx, sy);  // isotropic
        const double cx = px + pw / 2.0, cy = py + ph / 2.0;
        const double wx = (x0 + x1) / 2.0, wy = (y0 + y1) / 2.0;
        return {cx + (w.x - wx) * s, cy - (w.y - wy) * s};
    }
};

void polyline(std::ostringstream& svg, const std::vector<Vec2>& pts, const Mapper& map,
              const std::string& style) {
    if (pts.size() < 2) return;
    svg << "<polyline fill=\"none\" " << style << " points=\"";
    for (const Vec2& p : pts) {
        const Vec2 q = map(p);
        svg << fmt(q.x) << "," << fmt(q.y) << " ";
    }
    svg << "\"/>\n";
}

void axis_panel(std::ostringstream& svg, const std::vector<double>& t,
                const std::vector<double>& v, double px, double py, double pw, double ph,
                const std::string& label, const std::string& color) {
    double vmax = 1e-12;
    for (double x : v) vmax = std::max(vmax, x);
    const double tmax = t.empty() ? 1.0 : t.back();
    svg << "<rect x=\"" << fmt(px) << "\" y=\"" << fmt(py) << "\" width=\"" << fmt(pw)
        << "\" height=\"" << fmt(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
    // ticks
    for (int k = 0; k <= 4; ++k) {
        const double tx = px + pw * k / 4.0;
        svg << "<line x1=\"" << fmt(tx) << "\" y1=\"" << fmt(py + ph) << "\" x2=\"" << fmt(tx)
            << "\" y2=\"" << fmt(py + ph + 4) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << fmt(tx) << "\" y=\"" << fmt(py + ph + 16)
            << "\" font-size=\"10\" text-anchor=\"middle\">" << fmt(tmax * k / 4.0)
            << "</text>\n";
        const double ty = py + ph - ph * k / 4.0;
        svg << "<text x=\"" << fmt(px - 6) << "\" y=\"" << fmt(ty + 3)
            << "\" font-size=\"10\" text-anchor=\"end\">" << fmt(vmax * k / 4.0) << "</text>\n";
    }
    svg << "<text x=\"" << fmt(px + pw / 2) << "\" y=\"" << fmt(py - 6)
        << "\" font-size=\"12\" text-anchor=\"middle\">" << label << "</text>\n";
    std::ostringstream pts;
    for (size_t i = 0; i < t.size(); ++i) {
        pts << fmt(px + pw * (tmax > 0 ? t[i] / tmax : 0.0)) << ","
            << fmt(py + ph - ph * (v[i] / vmax)) << " ";
    }
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\""
        << pts.str() << "\"/>\n";
}

}  // namespace

std::string render_metrics_svg(const std::vector<StepRecord>& records) {
    std::vector<double> t, eg, ec;
    for (const StepRecord& r : records) {
        t.push_back(r.time);
        eg.push_back(r.e_gamma);
        ec.push_back(r.e_c);
    }
    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
           "viewBox=\"0 0 640 480\">\n"
        << "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
    axis_panel(svg, t, eg, 60, 30, 540, 180, "tracking error", "#1f77b4");
    axis_panel(svg, t, ec, 60, 270, 540, 180, "aggregate coverage error", "#d62728");
    svg << "</svg>\n";
    return svg.str();
}

std::string render_frame_svg(const StepRecord& record, const FrameContext& ctx) {
    const int M = static_cast<int>(record.leaders.size());
    double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
    auto grow = [&](Vec2 p) {
        x0 = std::min(x0, p.x);
        y0 = std::min(y0, p.y);
        x1 = std::max(x1, p.x);
        y1 = std::max(y1, p.y);
    };
    for (const Vec2& p : record.leaders) grow(p);
    for (const Vec2& p : record.followers) grow(p);
    if (ctx.path) {
        for (const Vec2& p : ctx.path->samples) grow(p);
    }
    if (ctx.scenario) {
        for (const Obstacle& ob : ctx.scenario->obstacles) {
            if (const auto* c = std::get_if<CircleObstacle>(&ob)) {
                grow(c->center + Vec2{c->radius, c->radius});
                grow(c->center - Vec2{c->radius, c->radius});
            } else {
                for (const Vec2& p : std::get<PolygonObstacle>(ob).vertices) grow(p);
            }
        }
    }
    const double margin = 0.06 * std::max(x1 - x0, y1 - y0) + 0.2;
    x0 -= margin; y0 -= margin; x1 += margin; y1 += margin;

    const bool inset = ctx.scenario != nullptr;
    const double width = 800;
    const double main_h = inset ? 420 : 560;
    const double height = inset ? 600 : 600;
    const Mapper map{x0, y0, x1, y1, 10, 10, width - 20, main_h};

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
        << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

    if (ctx.scenario) {
        for (const Obstacle& ob : ctx.scenario->obstacles) {
            if (const auto* c = std::get_if<CircleObstacle>(&ob)) {
                const Vec2 q = map(c->center);
                const double r = (map({c->center.x + c->radius, c->center.y}) - q).norm();
                svg << "<circle cx=\"" << fmt(q.x) << "\" cy=\"" << fmt(q.y) << "\" r=\""
                    << fmt(r) << "\" fill=\"#d62728\" fill-opacity=\"0.8\"/>\n";
            } else {
                const auto& verts = std::get<PolygonObstacle>(ob).vertices;
                svg << "<polygon fill=\"#d62728\" fill-opacity=\"0.8\" points=\"";
                for (const Vec2& p : verts) {
                    const Vec2 q = map(p);
                    svg << fmt(q.x) << "," << fmt(q.y) << " ";
                }
                svg << "\"/>\n";
            }
        }
    }
    if (ctx.path) {
        polyline(svg, ctx.path->samples, map,
                 "stroke=\"black\" stroke-width=\"1\" stroke-dasharray=\"6,4\"");
    }
    polyline(svg, ctx.head_trajectory, map, "stroke=\"#1f77b4\" stroke-width=\"1.5\"");

    // springs
    if (M >= 4 && M % 2 == 0) {
        MsdParams topo;
        topo.leader_count = M;
        for (const SpringEdge& e : build_grid_topology(topo)) {
            const Vec2 a = map(record.leaders[e.k]);
            const Vec2 b = map(record.leaders[e.l]);
            svg << "<line x1=\"" << fmt(a.x) << "\" y1=\"" << fmt(a.y) << "\" x2=\"" << fmt(b.x)
                << "\" y2=\"" << fmt(b.y) << "\" stroke=\"#999999\" stroke-width=\"1\"/>\n";
        }
    }
    for (const Vec2& p : record.leaders) {
        const Vec2 q = map(p);
        svg << "<circle cx=\"" << fmt(q.x) << "\" cy=\"" << fmt(q.y)
            << "\" r=\"5\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n";
    }
    for (const Vec2& p : record.followers) {
        const Vec2 q = map(p);
        svg << "<circle cx=\"" << fmt(q.x) << "\" cy=\"" << fmt(q.y)
            << "\" r=\"2.5\" fill=\"black\"/>\n";
    }
    svg << "<text x=\"16\" y=\"24\" font-size=\"14\">t = " << fmt(record.time) << " s</text>\n";

    if (inset) {
        const Scenario& sc = *ctx.scenario;
        const VirtualDomain vd =
            make_virtual_domain(sc.msd.leader_count, sc.cell_width(), sc.cell_height());
        const Rect& rect = vd.rectangle;
        const Mapper vmap{rect.min_corner.x, rect.min_corner.y, rect.min_corner.x + rect.width,
                          rect.min_corner.y + rect.height, 10, main_h + 30, width - 20,
                          height - main_h - 40};
        svg << "<text x=\"16\" y=\"" << fmt(main_h + 22)
            << "\" font-size=\"12\">virtual domain</text>\n";
        const Vec2 a = vmap(rect.min_corner);
        const Vec2 b = vmap(rect.max_corner());
        svg << "<rect x=\"" << fmt(std::min(a.x, b.x)) << "\" y=\"" << fmt(std::min(a.y, b.y))
            << "\" width=\"" << fmt(std::abs(b.x - a.x)) << "\" height=\""
            << fmt(std::abs(b.y - a.y)) << "\" fill=\"none\" stroke=\"black\"/>\n";
        if (!record.followers_virtual.empty()) {
            try {
                for (const Polygon& cell :
                     bounded_voronoi(record.followers_virtual, vd.rectangle)) {
                    svg << "<polygon fill=\"none\" stroke=\"#2ca02c\" points=\"";
                    for (const Vec2& p : cell.v) {
                        const Vec2 q = vmap(p);
                        svg << fmt(q.x) << "," << fmt(q.y) << " ";
                    }
                    svg << "\"/>\n";
                }
            } catch (const Error&) {
                // followers of a faulted record may violate Voronoi
                // preconditions; draw the dots only
            }
            for (const Vec2& p : record.followers_virtual) {
                const Vec2 q = vmap(p);
                svg << "<circle cx=\"" << fmt(q.x) << "\" cy=\"" << fmt(q.y)
                    << "\" r=\"2.5\" fill=\"black\"/>\n";
            }
        }
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace lfcov
