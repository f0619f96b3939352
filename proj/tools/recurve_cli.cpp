// Command-line front end: reconstruction from point files, sample generation,
// sample validation, counterexample emission, benchmarking, and SVG plots.

#include <CLI11.hpp>

#include <recurve/gadget.hpp>
#include <recurve/io.hpp>
#include <recurve/medial.hpp>
#include <recurve/recon.hpp>
#include <recurve/sampling.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <memory>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace {

using namespace recurve;

struct RunConfig {
    std::string algorithm = "nn-compatible";
    double epsilon = 0.66;
    double density = 1e-3;
    double oracle_density = 0.005;
    std::uint64_t seed = 1;
    std::vector<std::string> inputs;
    std::string out;
    std::string curve_out;
    std::string svg;
    double svg_size = 800.0;
    double svg_stroke = 1.0;
    std::string family;
    int bench_reps = 5;
    std::vector<int> bench_sizes{2500, 5000, 10000, 20000};

    void check() const {
        if (!(epsilon > 0.0) || !(epsilon < std::numbers::sqrt2))
            throw std::invalid_argument("epsilon must lie in (0, sqrt(2))");
        if (!(density > 0.0)) throw std::invalid_argument("density must be positive");
        if (!(oracle_density > 0.0))
            throw std::invalid_argument("oracle density must be positive");
    }
};

void require_readable(const std::string& path) {
    if (!std::filesystem::exists(path))
        throw std::invalid_argument("input file does not exist: " + path);
}

ReconGraph run_algorithm(const std::string& algorithm, const SampleSet& sample,
                         const CompatParams& params) {
    if (algorithm == "nn-compatible") return nn_compatible(sample, params);
    if (algorithm == "compatible-crust") {
        if (!sample.points.empty() && sample.points[0].dim != 2)
            throw std::invalid_argument("compatible-crust needs 2-D points");
        return compatible_crust(sample, params);
    }
    if (algorithm == "nn-crust") return nn_crust_baseline(sample);
    throw std::invalid_argument("unknown algorithm '" + algorithm + "'");
}

void attach_numeric_lfs(CurveModel& model, double density) {
    auto oracle = std::make_shared<TangentBallOracle>(model, density);
    model.lfs = [oracle](const Point& p) { return oracle->lfs(p); };
}

CurveModel family_model(const std::string& family) {
    if (family == "circle") return make_circle(1.0);
    if (family == "ellipse") return make_ellipse(Point(0.0, 0.0), 2.0, 1.0);
    if (family == "nested-circles") return make_concentric_circles(1.0, 3.0);
    if (family == "strip-loop") return strip_loop(1);
    throw std::invalid_argument(
        "unknown family '" + family +
        "' (expected circle, ellipse, nested-circles, or strip-loop)");
}

int cmd_reconstruct(const RunConfig& cfg) {
    if (cfg.inputs.size() != 1)
        throw std::invalid_argument("reconstruct needs exactly one --in point file");
    if (cfg.out.empty()) throw std::invalid_argument("reconstruct needs --out");
    require_readable(cfg.inputs[0]);
    const SampleSet sample = read_points_csv(cfg.inputs[0]);
    const CompatParams params(cfg.epsilon);
    const ReconGraph g = run_algorithm(cfg.algorithm, sample, params);
    write_edge_file(cfg.out, g);
    std::cout << "vertices " << g.n << "\n";
    std::cout << "edges " << g.edges.size() << "\n";
    std::cout << "flagged " << (g.flagged ? 1 : 0);
    for (int v : g.flagged_vertices) std::cout << " " << v;
    std::cout << "\n";
    if (!cfg.svg.empty()) {
        SvgOptions opt;
        opt.size = cfg.svg_size;
        opt.stroke = cfg.svg_stroke;
        emit_svg(cfg.svg, sample.points, g.edges, nullptr, opt);
    }
    return g.flagged ? 2 : 0;
}

int cmd_generate(const RunConfig& cfg) {
    if (cfg.out.empty()) throw std::invalid_argument("generate needs --out");
    CurveModel model;
    if (!cfg.inputs.empty()) {
        if (cfg.inputs.size() != 1)
            throw std::invalid_argument("generate takes at most one --in curve file");
        require_readable(cfg.inputs[0]);
        model = read_curve_json(cfg.inputs[0]);
        attach_numeric_lfs(model, cfg.oracle_density);
    } else if (!cfg.family.empty()) {
        model = family_model(cfg.family);
    } else {
        throw std::invalid_argument("generate needs --in curve.json or --family");
    }
    const SampleSet sample = greedy_sample(model, cfg.epsilon, cfg.seed);
    write_points_csv(cfg.out, sample);
    const std::string curve_path =
        cfg.curve_out.empty() ? cfg.out + ".curve.json" : cfg.curve_out;
    write_curve_json(curve_path, model);
    std::cout << "samples " << sample.size() << "\n";
    std::cout << "curve " << curve_path << "\n";
    if (!cfg.svg.empty()) {
        SvgOptions opt;
        opt.size = cfg.svg_size;
        opt.stroke = cfg.svg_stroke;
        emit_svg(cfg.svg, sample.points, {}, &model, opt);
    }
    return 0;
}

int cmd_validate(const RunConfig& cfg) {
    if (cfg.inputs.size() != 2)
        throw std::invalid_argument(
            "validate needs two inputs: --in samples.csv --in curve.json");
    require_readable(cfg.inputs[0]);
    require_readable(cfg.inputs[1]);
    const SampleSet sample = read_points_csv(cfg.inputs[0]);
    if (!sample.has_tags())
        throw std::invalid_argument("validate needs a tagged sample CSV");
    CurveModel model = read_curve_json(cfg.inputs[1]);
    attach_numeric_lfs(model, cfg.oracle_density);

    const SamplingReport re = epsilon_star(model, sample, cfg.density);
    const SamplingReport rr = rho_star(model, sample, cfg.density);
    nlohmann::json j;
    j["epsilon"] = cfg.epsilon;
    j["eps_report"] = sampling_report_json(re);
    j["rho_report"] = sampling_report_json(rr);
    j["eps_star"] = re.eps_star;
    j["rho_star"] = rr.eps_star;
    j["verdict"] = re.verdict(cfg.epsilon);
    if (!cfg.out.empty()) atomic_write_file(cfg.out, j.dump(2) + "\n");
    std::cout << "eps_star " << format_double(re.eps_star) << "\n";
    std::cout << "rho_star " << format_double(rr.eps_star) << "\n";
    std::cout << "verdict " << (re.verdict(cfg.epsilon) ? "pass" : "fail") << "\n";
    return re.verdict(cfg.epsilon) ? 0 : 2;
}

int cmd_counterexample(const RunConfig& cfg) {
    if (cfg.out.empty()) throw std::invalid_argument("counterexample needs --out DIR");
    std::filesystem::create_directories(cfg.out);
    const std::filesystem::path dir(cfg.out);

    const Gadget& g = tied_annuli_gadget();
    write_points_csv((dir / "points.csv").string(), g.points);
    for (std::size_t v = 0; v < g.variants.size(); ++v) {
        const std::string n = std::to_string(v + 1);
        write_curve_json((dir / ("variant" + n + ".curve.json")).string(), g.variants[v]);
        const ReconGraph gt = ground_truth_graph(g.variants[v], g.tagged[v]);
        write_edge_file((dir / ("variant" + n + ".edges.txt")).string(), gt);
        if (!cfg.svg.empty()) {
            SvgOptions opt;
            opt.size = cfg.svg_size;
            opt.stroke = cfg.svg_stroke;
            emit_svg((dir / ("variant" + n + ".svg")).string(), g.points.points, gt.edges,
                     &g.variants[v], opt);
        }
    }

    const GadgetReport rep = verify_gadget(g, 0.72, cfg.density);
    nlohmann::json j;
    j["report"] = gadget_report_json(rep);
    j["construction_log"] = construction_log_json(g.construction_log);
    nlohmann::json counts = nlohmann::json::array();
    for (const CurveModel& m : g.variants) counts.push_back(m.components.size());
    j["component_counts"] = std::move(counts);
    atomic_write_file((dir / "report.json").string(), j.dump(2) + "\n");

    std::cout << "points " << g.points.size() << "\n";
    std::cout << "component_counts";
    for (const CurveModel& m : g.variants) std::cout << " " << m.components.size();
    std::cout << "\n";
    std::cout << "min_margin " << format_double(rep.min_margin) << "\n";
    std::cout << "max_eps_star " << format_double(rep.max_eps_star) << "\n";
    std::cout << "ok " << (rep.ok ? 1 : 0) << "\n";
    return rep.ok ? 0 : 2;
}

PointList bench_circle_points(int n, std::uint64_t seed) {
    // equally spaced points with a deterministic sub-nanometer radial jitter
    // so no four points are exactly cocircular
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> jitter(-1e-9, 1e-9);
    PointList pts;
    pts.reserve(std::size_t(n));
    for (int i = 0; i < n; ++i) {
        const double a = 2.0 * std::numbers::pi * double(i) / double(n);
        const double r = 1.0 + jitter(rng);
        pts.push_back(Point(r * std::cos(a), r * std::sin(a)));
    }
    return pts;
}

double median_seconds(const std::function<void()>& fn, int reps) {
    fn();  // warm caches before timing
    std::vector<double> times;
    times.reserve(std::size_t(reps));
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        times.push_back(std::chrono::duration<double>(t1 - t0).count());
    }
    std::sort(times.begin(), times.end());
    return times[times.size() / 2];
}

int cmd_bench(const RunConfig& cfg) {
    if (cfg.out.empty()) throw std::invalid_argument("bench needs --out");
    std::vector<std::string> algorithms;
    if (cfg.algorithm == "all") algorithms = {"nn-compatible", "compatible-crust"};
    else algorithms = {cfg.algorithm};

    std::string csv = "n,algorithm,seconds\n";
    const CompatParams params(cfg.epsilon);
    for (const std::string& alg : algorithms) {
        for (int n : cfg.bench_sizes) {
            const SampleSet sample(bench_circle_points(n, cfg.seed));
            const double sec = median_seconds(
                [&] { (void)run_algorithm(alg, sample, params); }, cfg.bench_reps);
            csv += std::to_string(n) + "," + alg + "," + format_double(sec) + "\n";
            std::cout << n << " " << alg << " " << format_double(sec) << "\n";
        }
    }
    atomic_write_file(cfg.out, csv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"curve reconstruction and counterexample toolkit"};
    app.require_subcommand(1);

    RunConfig cfg;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--algorithm", cfg.algorithm,
                        "nn-compatible | compatible-crust | nn-crust");
        sub->add_option("--epsilon", cfg.epsilon, "sampling ratio parameter");
        sub->add_option("--density", cfg.density, "validation grid density");
        sub->add_option("--oracle-density", cfg.oracle_density,
                        "discretization step of the numeric feature-size oracle");
        sub->add_option("--seed", cfg.seed, "random seed");
        sub->add_option("--in", cfg.inputs, "input path (repeatable)");
        sub->add_option("--out", cfg.out, "output path");
        sub->add_option("--curve-out", cfg.curve_out, "curve JSON output path");
        sub->add_option("--svg", cfg.svg, "SVG plot output path");
        sub->add_option("--svg-size", cfg.svg_size, "SVG canvas size in pixels");
        sub->add_option("--svg-stroke", cfg.svg_stroke, "SVG stroke width");
    };

    CLI::App* rec = app.add_subcommand("reconstruct", "reconstruct a curve from points");
    add_common(rec);
    CLI::App* gen = app.add_subcommand("generate", "greedy-sample a curve model");
    add_common(gen);
    gen->add_option("--family", cfg.family, "circle | ellipse | nested-circles | strip-loop");
    CLI::App* val = app.add_subcommand("validate", "measure sample quality against a curve");
    add_common(val);
    CLI::App* cex = app.add_subcommand("counterexample", "emit the tied-annuli construction");
    add_common(cex);
    CLI::App* ben = app.add_subcommand("bench", "time the reconstruction algorithms");
    add_common(ben);
    ben->add_option("--sizes", cfg.bench_sizes, "sample sizes to sweep");
    ben->add_option("--reps", cfg.bench_reps, "timed repetitions per size");

    CLI11_PARSE(app, argc, argv);

    try {
        cfg.check();
        if (rec->parsed()) return cmd_reconstruct(cfg);
        if (gen->parsed()) return cmd_generate(cfg);
        if (val->parsed()) return cmd_validate(cfg);
        if (cex->parsed()) return cmd_counterexample(cfg);
        if (ben->parsed()) {
            if (ben->count("--algorithm") == 0) cfg.algorithm = "all";
            return cmd_bench(cfg);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
