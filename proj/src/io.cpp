#include "tilescope/io.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace tilescope::io {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
    const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    const Eigen::Index cols = rows ? static_cast<Eigen::Index>(j[0].size()) : 0;
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = j[i][c].get<double>();
    return m;
}

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
    nlohmann::json out = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

Eigen::VectorXd vector_from_json(const nlohmann::json& j) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = j[i].get<double>();
    return v;
}

} // namespace

nlohmann::json to_json(const Isometry& g) {
    return {{"ortho", matrix_to_json(g.ortho())}, {"trans", vector_to_json(g.trans())}};
}

Isometry isometry_from_json(const nlohmann::json& j) {
    return Isometry(matrix_from_json(j.at("ortho")), vector_from_json(j.at("trans")));
}

nlohmann::json to_json(const Polygon& p) {
    nlohmann::json verts = nlohmann::json::array();
    for (const auto& v : p.vertices()) verts.push_back(vector_to_json(v));
    return {{"vertices", verts}};
}

Polygon polygon_from_json(const nlohmann::json& j) {
    std::vector<Eigen::VectorXd> verts;
    for (const auto& v : j.at("vertices")) verts.push_back(vector_from_json(v));
    return Polygon(std::move(verts));
}

nlohmann::json to_json(const InflationSystem& sys) {
    nlohmann::json prototiles = nlohmann::json::array();
    for (const auto& t : sys.prototiles) {
        prototiles.push_back({{"id", t.id}, {"label", t.label}, {"support", to_json(t.support)}});
    }
    nlohmann::json rules = nlohmann::json::array();
    for (const auto& rule : sys.rules) {
        nlohmann::json placements = nlohmann::json::array();
        for (const auto& pl : rule) {
            placements.push_back({{"isometry", to_json(pl.map)}, {"child", pl.child}});
        }
        rules.push_back(placements);
    }
    nlohmann::json pg;
    if (sys.point_group.empty()) {
        pg = nullptr;
    } else {
        pg = nlohmann::json::array();
        for (const auto& g : sys.point_group) pg.push_back(matrix_to_json(g));
    }
    return {{"name", sys.name},   {"dim", sys.dim},
            {"scale", sys.scale}, {"prototiles", prototiles},
            {"rules", rules},     {"point_group", pg},
            {"pure_point", sys.pure_point_asserted}};
}

InflationSystem system_from_json(const nlohmann::json& j) {
    InflationSystem sys;
    sys.name = j.value("name", "user-system");
    sys.dim = j.at("dim").get<int>();
    sys.scale = j.at("scale").get<double>();
    for (const auto& t : j.at("prototiles")) {
        sys.prototiles.push_back({t.at("id").get<int>(), t.value("label", ""),
                                  polygon_from_json(t.at("support"))});
    }
    for (const auto& rule : j.at("rules")) {
        std::vector<inflation::Placement> placements;
        for (const auto& pl : rule) {
            placements.push_back({isometry_from_json(pl.at("isometry")), pl.at("child").get<int>()});
        }
        sys.rules.push_back(std::move(placements));
    }
    if (j.contains("point_group") && !j.at("point_group").is_null()) {
        for (const auto& g : j.at("point_group")) sys.point_group.push_back(matrix_from_json(g));
    }
    sys.pure_point_asserted = j.value("pure_point", false);
    sys.check();
    return sys;
}

nlohmann::json to_json(const spectral::UniformityReport& rep) {
    nlohmann::json j;
    j["d"] = rep.dim;
    j["lambda"] = rep.scale;
    j["rho2"] = rep.rho2;
    if (std::isinf(rep.h_bound)) {
        j["h_bound"] = "inf";
    } else {
        j["h_bound"] = rep.h_bound;
    }
    auto verdict = [](spectral::Verdict v) {
        return v == spectral::Verdict::proved ? "proved" : "inconclusive";
    };
    j["hyperuniform"] = verdict(rep.hyperuniform);
    j["number_rigid"] = verdict(rep.number_rigid);
    j["irreducible"] = rep.irreducible ? nlohmann::json(*rep.irreducible) : nlohmann::json(nullptr);
    j["pisot"] = rep.pisot ? nlohmann::json(*rep.pisot) : nlohmann::json(nullptr);
    j["pure_point"] = rep.pure_point_asserted;
    return j;
}

nlohmann::json to_json(const Patch& p) {
    nlohmann::json tiles = nlohmann::json::array();
    for (const auto& t : p.tiles) {
        tiles.push_back({{"isometry", to_json(t.pose)}, {"prototile", t.color}});
    }
    nlohmann::json j = {{"system", p.system}, {"tiles", tiles}};
    if (p.support) j["support"] = to_json(*p.support);
    return j;
}

std::string point_set_csv(const ColoredPointSet& points) {
    std::ostringstream out;
    out << "color_index";
    for (int k = 0; k < points.dim; ++k) out << ",x" << (k + 1);
    for (int r = 0; r < points.dim; ++r)
        for (int c = 0; c < points.dim; ++c) out << ",ortho" << r << c;
    out << ",weight\n";
    for (std::size_t color = 0; color < points.colors.size(); ++color) {
        for (const auto& pt : points.colors[color]) {
            out << color;
            for (int k = 0; k < points.dim; ++k) out << "," << fmt17(pt.point(k));
            for (int r = 0; r < points.dim; ++r)
                for (int c = 0; c < points.dim; ++c) out << "," << fmt17(pt.ortho(r, c));
            out << "," << fmt17(pt.weight) << "\n";
        }
    }
    return out.str();
}

std::string spectrum_csv(const empirical::SpectrumEstimate& est,
                         const std::vector<double>* residuals) {
    std::ostringstream out;
    out << "# window_radius=" << fmt17(est.window_radius)
        << " angular_samples=" << est.sample_count << "\n";
    const Eigen::Index l = est.values.empty() ? 0 : est.values.front().rows();
    out << "r";
    for (Eigen::Index i = 0; i < l; ++i)
        for (Eigen::Index j = 0; j < l; ++j) out << ",re" << i << j << ",im" << i << j;
    if (residuals) out << ",renormalization_residual";
    out << "\n";
    for (std::size_t g = 0; g < est.r_grid.size(); ++g) {
        out << fmt17(est.r_grid[g]);
        for (Eigen::Index i = 0; i < l; ++i) {
            for (Eigen::Index j = 0; j < l; ++j) {
                out << "," << fmt17(est.values[g](i, j).real()) << ","
                    << fmt17(est.values[g](i, j).imag());
            }
        }
        if (residuals) {
            if (g < residuals->size()) {
                out << "," << fmt17((*residuals)[g]);
            } else {
                out << ",";
            }
        }
        out << "\n";
    }
    return out.str();
}

std::string variance_csv(const empirical::VarianceCurve& curve) {
    std::ostringstream out;
    out << "# seed=" << curve.seed << "\n";
    out << "R,variance,samples\n";
    for (std::size_t i = 0; i < curve.radii.size(); ++i) {
        out << fmt17(curve.radii[i]) << "," << fmt17(curve.variances[i]) << ","
            << curve.sample_counts[i] << "\n";
    }
    return out.str();
}

namespace {

const char* palette_color(int idx) {
    static const char* colors[] = {"#4477aa", "#ee6677", "#228833", "#ccbb44",
                                   "#66ccee", "#aa3377", "#bbbbbb", "#222255"};
    return colors[idx % 8];
}

} // namespace

std::string render_svg(const InflationSystem& sys, const Patch& p, double stroke_width) {
    if (sys.dim > 2) throw std::invalid_argument("render_svg: unsupported dimension");
    std::ostringstream body;
    double min_x = std::numeric_limits<double>::infinity(), min_y = min_x;
    double max_x = -min_x, max_y = -min_y;
    for (const auto& tile : p.tiles) {
        const Polygon poly = sys.prototiles[tile.color].support.transformed(tile.pose);
        std::vector<std::pair<double, double>> pts;
        if (sys.dim == 1) {
            // render intervals as unit-height bars
            const double a = std::min(poly.vertices()[0](0), poly.vertices()[1](0));
            const double b = std::max(poly.vertices()[0](0), poly.vertices()[1](0));
            pts = {{a, 0}, {b, 0}, {b, 1}, {a, 1}};
        } else {
            for (const auto& v : poly.vertices()) pts.emplace_back(v(0), v(1));
        }
        body << "<polygon points=\"";
        for (const auto& [x, y] : pts) {
            body << fmt17(x) << "," << fmt17(y) << " ";
            min_x = std::min(min_x, x);
            max_x = std::max(max_x, x);
            min_y = std::min(min_y, y);
            max_y = std::max(max_y, y);
        }
        body << "\" fill=\"" << palette_color(tile.color) << "\" stroke=\"black\" stroke-width=\""
             << fmt17(stroke_width) << "\"/>\n";
    }
    std::ostringstream out;
    if (p.tiles.empty()) {
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1 1\"></svg>\n";
        return out.str();
    }
    const double margin = 0.02 * std::max(max_x - min_x, max_y - min_y);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << fmt17(min_x - margin) << " "
        << fmt17(min_y - margin) << " " << fmt17(max_x - min_x + 2 * margin) << " "
        << fmt17(max_y - min_y + 2 * margin) << "\">\n"
        << body.str() << "</svg>\n";
    return out.str();
}

} // namespace tilescope::io
