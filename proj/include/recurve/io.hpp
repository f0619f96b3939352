#pragma once

// File formats of the command-line tool: point CSV, edge lists, curve JSON,
// report JSON, and SVG plots. Writes go to a temporary file beside the
// target followed by a rename, so failed runs leave no partial outputs.
// Numbers serialize in shortest round-trip decimal form.

#include <array>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include <recurve/curve.hpp>
#include <recurve/gadget.hpp>
#include <recurve/geometry.hpp>
#include <recurve/graph.hpp>
#include <recurve/sample.hpp>
#include <recurve/sampling.hpp>

namespace recurve {

inline std::string format_double(double v) {
    std::array<char, 40> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (res.ec != std::errc()) throw std::runtime_error("failed to format a number");
    return std::string(buf.data(), res.ptr);
}

namespace iodetail {

inline double parse_double_field(std::string_view field, const std::string& path, int line) {
    std::size_t b = field.find_first_not_of(" \t");
    std::size_t e = field.find_last_not_of(" \t");
    if (b == std::string_view::npos)
        throw std::runtime_error(path + ":" + std::to_string(line) + ": empty field");
    field = field.substr(b, e - b + 1);
    double out = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), out);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size())
        throw std::runtime_error(path + ":" + std::to_string(line) + ": bad number '" +
                                 std::string(field) + "'");
    return out;
}

inline std::vector<std::string_view> split_fields(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t c = s.find(',', start);
        if (c == std::string_view::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, c - start));
        start = c + 1;
    }
}

inline const char* coord_names = "xyzwv";

}  // namespace iodetail

// Writes content to a temporary file in the target directory and renames it
// over the destination, so readers never observe partial files.
inline void atomic_write_file(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path dir = target.parent_path().empty() ? fs::path(".") : target.parent_path();
    const fs::path tmp = dir / (target.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out.flush()) throw std::runtime_error("failed writing " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::runtime_error("failed to move " + tmp.string() + " into place: " +
                                 ec.message());
    }
}

// Point CSV: one point per line, coordinates first, then the component index
// and curve parameter when the set is tagged. A `# columns:` header records
// the layout; plain numeric files read back as untagged coordinates.
inline std::string points_csv_string(const SampleSet& sample) {
    std::string out;
    const bool tagged = sample.has_tags();
    const int dim = sample.points.empty() ? 2 : sample.points[0].dim;
    out += "# columns: ";
    for (int k = 0; k < dim; ++k) {
        if (k) out += ',';
        out += iodetail::coord_names[k];
    }
    if (tagged) out += ",component,param";
    out += '\n';
    for (std::size_t i = 0; i < sample.points.size(); ++i) {
        const Point& p = sample.points[i];
        for (int k = 0; k < p.dim; ++k) {
            if (k) out += ',';
            out += format_double(p[k]);
        }
        if (tagged) {
            out += ',';
            out += std::to_string(sample.tags[i].component);
            out += ',';
            out += format_double(sample.tags[i].param);
        }
        out += '\n';
    }
    return out;
}

inline void write_points_csv(const std::string& path, const SampleSet& sample) {
    atomic_write_file(path, points_csv_string(sample));
}

inline SampleSet read_points_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    PointList pts;
    std::vector<SampleTag> tags;
    bool tagged = false, saw_header = false;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view sv(line);
        if (!sv.empty() && sv.back() == '\r') sv.remove_suffix(1);
        const std::size_t hash = sv.find('#');
        if (hash != std::string_view::npos) {
            const std::string_view comment = sv.substr(hash + 1);
            if (!saw_header && comment.find("columns:") != std::string_view::npos) {
                saw_header = true;
                tagged = comment.find("component") != std::string_view::npos;
            }
            sv = sv.substr(0, hash);
        }
        if (sv.find_first_not_of(" \t") == std::string_view::npos) continue;
        const auto fields = iodetail::split_fields(sv);
        const int ncols = static_cast<int>(fields.size());
        const int ncoord = tagged ? ncols - 2 : ncols;
        if (ncoord < 2 || ncoord > 5)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected 2 to 5 coordinates, got " +
                                     std::to_string(ncoord));
        std::vector<double> coords(std::size_t(ncoord), 0.0);
        for (int k = 0; k < ncoord; ++k)
            coords[std::size_t(k)] =
                iodetail::parse_double_field(fields[std::size_t(k)], path, lineno);
        pts.push_back(Point::from_coords(coords));
        if (tagged) {
            const double comp =
                iodetail::parse_double_field(fields[std::size_t(ncols - 2)], path, lineno);
            const double param =
                iodetail::parse_double_field(fields[std::size_t(ncols - 1)], path, lineno);
            tags.push_back(SampleTag{static_cast<int>(comp), param});
        }
    }
    if (tagged) return SampleSet(std::move(pts), std::move(tags));
    return SampleSet(std::move(pts));
}

// Edge file: "i j" per line with i < j, lines in ascending lexicographic
// order (the natural iteration order of the edge set).
inline std::string edges_string(const ReconGraph& g) {
    std::string out;
    for (const auto& [i, j] : g.edges) {
        out += std::to_string(i);
        out += ' ';
        out += std::to_string(j);
        out += '\n';
    }
    return out;
}

inline void write_edge_file(const std::string& path, const ReconGraph& g) {
    atomic_write_file(path, edges_string(g));
}

inline ReconGraph read_edge_file(const std::string& path, int vertices) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    ReconGraph g(vertices);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ss(line);
        int i = 0, j = 0;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (!(ss >> i >> j))
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected 'i j'");
        g.add_edge(i, j);
    }
    return g;
}

namespace iodetail {

inline nlohmann::json point_json(const Point& p) {
    nlohmann::json a = nlohmann::json::array();
    for (int k = 0; k < p.dim; ++k) a.push_back(p[k]);
    return a;
}

inline Point point_from_json(const nlohmann::json& a) {
    return Point::from_coords(a.get<std::vector<double>>());
}

inline nlohmann::json segment_json(const Segment& s) {
    nlohmann::json j;
    if (const auto* l = std::get_if<LineSeg>(&s)) {
        j["type"] = "line";
        j["a"] = point_json(l->a);
        j["b"] = point_json(l->b);
    } else if (const auto* c = std::get_if<CircArc>(&s)) {
        j["type"] = "arc";
        j["center"] = point_json(c->center);
        j["radius"] = c->radius;
        j["angle0"] = c->angle0;
        j["angle1"] = c->angle1;
    } else if (const auto* e = std::get_if<EllipseArc>(&s)) {
        j["type"] = "ellipse-arc";
        j["center"] = point_json(e->center);
        j["rx"] = e->rx;
        j["ry"] = e->ry;
        j["t0"] = e->t0;
        j["t1"] = e->t1;
    } else {
        const BentArc& b = std::get<BentArc>(s);
        j["type"] = "bent-arc";
        j["flat"] = std::visit([](const auto& f) { return segment_json(Segment(f)); }, b.flat);
        j["bend_radius"] = b.bend_radius;
        j["radial_sign"] = b.radial_sign;
    }
    return j;
}

inline Segment segment_from_json(const nlohmann::json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "line") return LineSeg{point_from_json(j.at("a")), point_from_json(j.at("b"))};
    if (type == "arc")
        return CircArc{point_from_json(j.at("center")), j.at("radius").get<double>(),
                       j.at("angle0").get<double>(), j.at("angle1").get<double>()};
    if (type == "ellipse-arc")
        return EllipseArc{point_from_json(j.at("center")), j.at("rx").get<double>(),
                          j.at("ry").get<double>(), j.at("t0").get<double>(),
                          j.at("t1").get<double>()};
    if (type == "bent-arc") {
        const Segment flat = segment_from_json(j.at("flat"));
        BentArc b;
        if (const auto* l = std::get_if<LineSeg>(&flat)) b.flat = *l;
        else if (const auto* c = std::get_if<CircArc>(&flat)) b.flat = *c;
        else throw std::runtime_error("bent-arc flat part must be a line or arc");
        b.bend_radius = j.at("bend_radius").get<double>();
        b.radial_sign = j.at("radial_sign").get<double>();
        return b;
    }
    throw std::runtime_error("unknown segment type '" + type + "'");
}

}  // namespace iodetail

inline nlohmann::json curve_json(const CurveModel& model) {
    nlohmann::json comps = nlohmann::json::array();
    for (const CurveComponent& c : model.components) {
        nlohmann::json jc;
        jc["closed"] = c.closed();
        nlohmann::json segs = nlohmann::json::array();
        for (std::size_t i = 0; i < c.segment_count(); ++i)
            segs.push_back(iodetail::segment_json(c.segment(i)));
        jc["segments"] = std::move(segs);
        comps.push_back(std::move(jc));
    }
    return nlohmann::json{{"components", std::move(comps)}};
}

// Rebuilds the model from JSON; the feature-size callback is left empty and
// can be supplied numerically when needed.
inline CurveModel curve_from_json(const nlohmann::json& j) {
    CurveModel model;
    for (const nlohmann::json& jc : j.at("components")) {
        std::vector<Segment> segs;
        for (const nlohmann::json& js : jc.at("segments"))
            segs.push_back(iodetail::segment_from_json(js));
        model.components.push_back(CurveComponent(std::move(segs), jc.at("closed").get<bool>()));
    }
    return model;
}

inline void write_curve_json(const std::string& path, const CurveModel& model) {
    atomic_write_file(path, curve_json(model).dump(2) + "\n");
}

inline CurveModel read_curve_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json j;
    in >> j;
    return curve_from_json(j);
}

inline nlohmann::json sampling_report_json(const SamplingReport& r) {
    nlohmann::json j;
    j["eps_star"] = r.eps_star;
    j["eps_star_corrected"] = r.eps_star_corrected;
    j["witness"] = iodetail::point_json(r.witness);
    j["witness_component"] = r.witness_component;
    j["witness_param"] = r.witness_param;
    j["density"] = r.density;
    return j;
}

inline nlohmann::json gadget_report_json(const GadgetReport& r) {
    nlohmann::json margins = nlohmann::json::array();
    for (const MidpointMargin& m : r.margins) {
        margins.push_back(nlohmann::json{{"variant", m.variant},
                                         {"component", m.component},
                                         {"t", iodetail::point_json(m.t)},
                                         {"d_t", m.d_t},
                                         {"required", m.required},
                                         {"clearance", m.clearance},
                                         {"margin", m.margin}});
    }
    nlohmann::json j;
    j["margins"] = std::move(margins);
    j["eps_star"] = r.eps_star;
    j["min_margin"] = r.min_margin;
    j["max_eps_star"] = r.max_eps_star;
    j["ok"] = r.ok;
    return j;
}

inline nlohmann::json construction_log_json(const ConstructionLog& log) {
    nlohmann::json j;
    j["circles"] = nlohmann::json::array();
    for (const NamedCircle& c : log.circles)
        j["circles"].push_back(nlohmann::json{
            {"name", c.name}, {"center", iodetail::point_json(c.center)}, {"radius", c.radius}});
    j["points"] = nlohmann::json::array();
    for (const NamedPoint& p : log.points)
        j["points"].push_back(nlohmann::json{{"name", p.name}, {"p", iodetail::point_json(p.p)}});
    j["values"] = nlohmann::json::array();
    for (const NamedValue& v : log.values)
        j["values"].push_back(nlohmann::json{{"name", v.name}, {"value", v.value}});
    j["notes"] = log.notes;
    return j;
}

struct SvgOptions {
    double size = 800.0;    // canvas width and height in pixels
    double stroke = 1.0;    // edge stroke width in pixels
    int curve_steps = 512;  // polyline resolution per curve component
};

// Standalone SVG plot: curve components as polyline paths, edges as lines,
// points as circles. Output bytes are a pure function of the input.
inline std::string svg_string(const PointList& points,
                              const std::set<std::pair<int, int>>& edges,
                              const CurveModel* curve, const SvgOptions& opt = SvgOptions()) {
    for (const Point& p : points)
        if (p.dim != 2) throw std::invalid_argument("svg output needs 2-D points");

    double lo_x = std::numeric_limits<double>::max(), lo_y = lo_x;
    double hi_x = -lo_x, hi_y = -lo_x;
    auto grow = [&](const Point& p) {
        lo_x = std::min(lo_x, p.x());
        hi_x = std::max(hi_x, p.x());
        lo_y = std::min(lo_y, p.y());
        hi_y = std::max(hi_y, p.y());
    };
    for (const Point& p : points) grow(p);
    std::vector<std::vector<Point>> polylines;
    if (curve) {
        for (const CurveComponent& c : curve->components) {
            std::vector<Point> poly;
            const int steps = std::max(2, opt.curve_steps);
            for (int i = 0; i <= steps; ++i) {
                const Point p = c.point_at(c.length() * double(i) / double(steps));
                if (p.dim != 2) throw std::invalid_argument("svg output needs 2-D curves");
                poly.push_back(p);
                grow(p);
            }
            polylines.push_back(std::move(poly));
        }
    }
    if (points.empty() && polylines.empty()) {
        lo_x = lo_y = 0.0;
        hi_x = hi_y = 1.0;
    }
    const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-12});
    const double margin = 0.05 * opt.size;
    const double scale = (opt.size - 2.0 * margin) / span;
    auto sx = [&](double x) { return margin + (x - lo_x) * scale; };
    auto sy = [&](double y) { return opt.size - margin - (y - lo_y) * scale; };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + format_double(opt.size) +
           "\" height=\"" + format_double(opt.size) + "\" viewBox=\"0 0 " +
           format_double(opt.size) + " " + format_double(opt.size) + "\">\n";
    for (const auto& poly : polylines) {
        out += "<path fill=\"none\" stroke=\"#2060c0\" stroke-width=\"" +
               format_double(opt.stroke) + "\" d=\"";
        for (std::size_t i = 0; i < poly.size(); ++i) {
            out += i == 0 ? "M" : " L";
            out += format_double(sx(poly[i].x())) + " " + format_double(sy(poly[i].y()));
        }
        out += "\"/>\n";
    }
    for (const auto& [i, j] : edges) {
        if (i < 0 || j < 0 || std::size_t(i) >= points.size() || std::size_t(j) >= points.size())
            throw std::invalid_argument("svg edge endpoint out of range");
        out += "<line stroke=\"#c03020\" stroke-width=\"" + format_double(opt.stroke) +
               "\" x1=\"" + format_double(sx(points[std::size_t(i)].x())) + "\" y1=\"" +
               format_double(sy(points[std::size_t(i)].y())) + "\" x2=\"" +
               format_double(sx(points[std::size_t(j)].x())) + "\" y2=\"" +
               format_double(sy(points[std::size_t(j)].y())) + "\"/>\n";
    }
    const double r = std::max(1.5, 1.5 * opt.stroke);
    for (const Point& p : points)
        out += "<circle fill=\"#202020\" r=\"" + format_double(r) + "\" cx=\"" +
               format_double(sx(p.x())) + "\" cy=\"" + format_double(sy(p.y())) + "\"/>\n";
    out += "</svg>\n";
    return out;
}

inline void emit_svg(const std::string& path, const PointList& points,
                     const std::set<std::pair<int, int>>& edges, const CurveModel* curve,
                     const SvgOptions& opt = SvgOptions()) {
    atomic_write_file(path, svg_string(points, edges, curve, opt));
}

}  // namespace recurve
