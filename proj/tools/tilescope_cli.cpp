// tilescope: inflation tilings, point-set generation, and hyperuniformity
// diagnostics from the command line.

#include "tilescope/empirical.hpp"
#include "tilescope/io.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace tilescope;

constexpr int kExitOk = 0;
constexpr int kExitUnknownSystem = 1;
constexpr int kExitNonPrimitive = 2;
constexpr int kExitSizeCap = 3;
constexpr int kExitWindow = 4;
constexpr int kExitRenderDim = 5;

struct UnknownSystemError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

bool is_name(const std::string& s, const std::vector<std::string>& names) {
    return std::find(names.begin(), names.end(), s) != names.end();
}

inflation::InflationSystem load_geometric(const std::string& source) {
    if (is_name(source, inflation::builtin_names())) return inflation::builtin(source);
    std::ifstream file(source);
    if (!file) throw UnknownSystemError("unknown system '" + source + "'");
    nlohmann::json j;
    file >> j;
    return io::system_from_json(j);
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
    } else {
        std::ofstream out(path);
        out << content;
    }
}

std::vector<double> parse_rgrid(const std::string& spec, bool snap_to_scale, double scale) {
    std::istringstream in(spec);
    std::string kind;
    std::getline(in, kind, ':');
    if (kind != "geometric") {
        throw std::invalid_argument("--rgrid: expected geometric:start:stop:count");
    }
    std::string a, b, c;
    std::getline(in, a, ':');
    std::getline(in, b, ':');
    std::getline(in, c, ':');
    const double start = std::stod(a), stop = std::stod(b);
    const int count = std::stoi(c);
    if (start <= 0 || stop <= start || count < 2) {
        throw std::invalid_argument("--rgrid: need 0 < start < stop and count >= 2");
    }
    std::vector<double> grid;
    if (snap_to_scale) {
        // lambda-closed grid: stop, stop/lambda, ... down to start
        for (double r = stop; r >= start * (1 - 1e-9); r /= scale) grid.push_back(r);
        std::reverse(grid.begin(), grid.end());
    } else {
        const double ratio = std::pow(stop / start, 1.0 / (count - 1));
        double r = start;
        for (int i = 0; i < count; ++i, r *= ratio) grid.push_back(r);
    }
    return grid;
}

std::vector<double> parse_list(const std::string& spec) {
    std::vector<double> out;
    std::istringstream in(spec);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(std::stod(item));
    return out;
}

int cmd_analyze(const std::string& source, bool full_orientations, const std::string& output) {
    nlohmann::json j;
    if (is_name(source, inflation::profile_names())) {
        const auto profile = inflation::matrix_only_profile(source);
        auto rep = spectral::uniformity_bound(profile.dim, profile.scale, profile.rho2,
                                              profile.pure_point_asserted);
        j = io::to_json(rep);
        j["system"] = profile.name;
        j["geometry"] = "matrix-profile";
    } else {
        const auto sys = load_geometric(source);
        const Eigen::MatrixXd a = inflation::inflation_matrix(sys);
        if (!inflation::is_primitive(a)) {
            std::cerr << "error: inflation matrix of '" << source << "' is not primitive\n";
            return kExitNonPrimitive;
        }
        const auto spec = inflation::pf_analysis(a);
        auto rep = spectral::uniformity_bound(sys.dim, sys.scale, spec.rho2,
                                              sys.pure_point_asserted);
        if (sys.colors() <= 6) {
            const auto [irr, pisot] = spectral::irreducible_pisot_check(a, spec.pf_value);
            rep.irreducible = irr;
            rep.pisot = pisot;
        }
        j = io::to_json(rep);
        j["system"] = sys.name;
        j["geometry"] = "geometric";
        j["lambda_pf"] = spec.pf_value;
        if (full_orientations) {
            const auto full = inflation::expand_orientations(sys);
            const auto full_spec = inflation::spectral_summary(inflation::inflation_matrix(full));
            const auto full_rep = spectral::uniformity_bound(sys.dim, sys.scale, full_spec.rho2,
                                                             sys.pure_point_asserted);
            nlohmann::json fj = io::to_json(full_rep);
            fj["prototiles"] = full.colors();
            if (full_rep.h_bound < rep.h_bound - 1e-9) fj["note"] = "insufficient";
            j["full_orientations"] = fj;
        }
    }
    write_output(output, j.dump(2) + "\n");
    return kExitOk;
}

int cmd_generate(const std::string& source, int levels, int seed_tile, std::size_t cap,
                 const std::string& output, const std::string& patch_json) {
    const auto sys = load_geometric(source);
    const auto patch = generation::supertile(sys, seed_tile, levels, cap);
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(sys.colors());
    for (const auto& t : patch.tiles) counts(t.color) += 1;
    for (int i = 0; i < sys.colors(); ++i) {
        std::cout << sys.prototiles[i].label << ": " << static_cast<long long>(counts(i)) << "\n";
    }
    std::cout << "total: " << patch.tiles.size() << "\n";
    if (!output.empty()) write_output(output, io::point_set_csv(generation::centers(patch)));
    if (!patch_json.empty()) write_output(patch_json, io::to_json(patch).dump(2) + "\n");
    return kExitOk;
}

int cmd_spectrum(const std::string& source, int levels, int seed_tile, const std::string& rgrid,
                 int angular_samples, bool check_renorm, const std::string& output) {
    const auto sys = load_geometric(source);
    const auto grid = parse_rgrid(rgrid, check_renorm, sys.scale);
    const auto points = generation::centers(generation::supertile(sys, seed_tile, levels));
    const auto est = empirical::powder_spectrum(points, grid, angular_samples);
    std::optional<std::vector<double>> residuals;
    if (check_renorm) residuals = empirical::renormalization_residual(sys, est);
    write_output(output, io::spectrum_csv(est, residuals ? &*residuals : nullptr));
    return kExitOk;
}

int cmd_variance(const std::string& source, int levels, int seed_tile, const std::string& radii,
                 int samples, std::uint64_t seed, double poisson_intensity, double box,
                 int dim, const std::string& output) {
    const auto R_list = parse_list(radii);
    generation::ColoredPointSet points;
    if (poisson_intensity > 0) {
        const Eigen::VectorXd lo = Eigen::VectorXd::Constant(dim, -box / 2);
        const Eigen::VectorXd hi = Eigen::VectorXd::Constant(dim, box / 2);
        points = empirical::poisson_sample(poisson_intensity, lo, hi, seed);
    } else {
        const auto sys = load_geometric(source);
        points = generation::centers(generation::supertile(sys, seed_tile, levels));
    }
    const Eigen::VectorXd weights = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(points.colors.size()));
    const auto curve = empirical::number_variance(points, weights, R_list, samples, seed);
    write_output(output, io::variance_csv(curve));
    return kExitOk;
}

int cmd_render(const std::string& source, int levels, int seed_tile, double stroke,
               const std::string& output) {
    const auto sys = load_geometric(source);
    if (sys.dim > 2) {
        std::cerr << "error: rendering supports d <= 2 only\n";
        return kExitRenderDim;
    }
    const auto patch = generation::supertile(sys, seed_tile, levels);
    write_output(output, io::render_svg(sys, patch, stroke));
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"inflation tilings: generation and hyperuniformity diagnostics"};
    app.require_subcommand(1);

    std::string source, output, patch_json, rgrid = "geometric:0.05:0.5:24",
                radii = "10,20,40,80";
    int levels = 5, seed_tile = 0, angular_samples = 64, samples = 2000, dim = 1;
    std::uint64_t seed = 7;
    std::size_t cap = 50'000'000;
    double poisson_intensity = 0, box = 1000, stroke = 0.02;
    bool full_orientations = false, check_renorm = false;

    auto* analyze = app.add_subcommand("analyze", "spectral analysis and uniformity bound");
    analyze->add_option("system", source, "builtin name, matrix profile, or JSON path")->required();
    analyze->add_flag("--full-orientations", full_orientations,
                      "also analyze the translation-only expansion");
    analyze->add_option("-o,--output", output, "output file (default stdout)");

    auto* generate = app.add_subcommand("generate", "inflate a seed tile and emit centers");
    generate->add_option("system", source)->required();
    generate->add_option("--levels", levels);
    generate->add_option("--seed-tile", seed_tile);
    generate->add_option("--cap", cap);
    generate->add_option("-o,--output", output, "point-set CSV path");
    generate->add_option("--patch-json", patch_json);

    auto* spectrum = app.add_subcommand("spectrum", "powder structure factor estimate");
    spectrum->add_option("system", source)->required();
    spectrum->add_option("--levels", levels);
    spectrum->add_option("--seed-tile", seed_tile);
    spectrum->add_option("--rgrid", rgrid, "geometric:start:stop:count");
    spectrum->add_option("--angular-samples", angular_samples);
    spectrum->add_flag("--check-renormalization", check_renorm);
    spectrum->add_option("-o,--output", output);

    auto* variance = app.add_subcommand("variance", "number variance curve");
    variance->add_option("system", source);
    variance->add_option("--levels", levels);
    variance->add_option("--seed-tile", seed_tile);
    variance->add_option("--radii", radii, "comma-separated R list");
    variance->add_option("--samples", samples);
    variance->add_option("--seed", seed);
    variance->add_option("--poisson", poisson_intensity, "Poisson baseline intensity");
    variance->add_option("--box", box, "Poisson box side length");
    variance->add_option("--dim", dim, "Poisson box dimension");
    variance->add_option("-o,--output", output);

    auto* render = app.add_subcommand("render", "SVG rendering of a supertile patch");
    render->add_option("system", source)->required();
    render->add_option("--levels", levels);
    render->add_option("--seed-tile", seed_tile);
    render->add_option("--stroke-width", stroke);
    render->add_option("-o,--output", output)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) return cmd_analyze(source, full_orientations, output);
        if (generate->parsed()) return cmd_generate(source, levels, seed_tile, cap, output, patch_json);
        if (spectrum->parsed()) {
            return cmd_spectrum(source, levels, seed_tile, rgrid, angular_samples, check_renorm,
                                output);
        }
        if (variance->parsed()) {
            if (poisson_intensity <= 0 && source.empty()) {
                std::cerr << "error: variance needs a system or --poisson\n";
                return kExitUnknownSystem;
            }
            return cmd_variance(source, levels, seed_tile, radii, samples, seed, poisson_intensity,
                                box, dim, output);
        }
        if (render->parsed()) return cmd_render(source, levels, seed_tile, stroke, output);
    } catch (const UnknownSystemError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUnknownSystem;
    } catch (const std::length_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSizeCap;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        // window/geometry problems in the estimators
        return (variance->parsed() || spectrum->parsed()) ? kExitWindow : kExitUnknownSystem;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUnknownSystem;
    }
    return kExitOk;
}
