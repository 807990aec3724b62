// Command-line front end: generate synthetic point clouds, compute
// barcodes and subsample barcode distributions, run hypothesis tests and
// confidence intervals, and re-run the bundled experiment configs.
//
// Exit codes: 0 success, 1 analysis-level failure (e.g. a degenerate test
// statistic or the simplex-count guard), 2 I/O or configuration error.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tda/barcode.hpp"
#include "tda/barcode_stats.hpp"
#include "tda/filtration.hpp"
#include "tda/inference.hpp"
#include "tda/metric_space.hpp"
#include "tda/persistence.hpp"
#include "tda/point_io.hpp"
#include "tda/rng.hpp"
#include "tda/samplers.hpp"

using nlohmann::json;
using namespace tda;

namespace {

// Raised around the compute phase so failures there exit with code 1
// rather than the config-error code 2; validation errors thrown before
// any computation keep their std::exception types.
struct AnalysisError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <typename F>
auto analysis(F&& f) {
    try {
        return f();
    } catch (const std::exception& e) {
        throw AnalysisError(e.what());
    }
}

struct GlobalOptions {
    std::uint64_t seed = 0;
    bool seed_given = false;
    int threads = 1;
    std::string out;
    std::string format = "text";
};

// shortest decimal form that round-trips the double
std::string num(double v) { return json(v).dump(); }

void emit(const GlobalOptions& global, const std::string& text) {
    if (global.out.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(global.out);
    if (!out) throw std::runtime_error("cannot write " + global.out);
    out << text;
    if (!out) throw std::runtime_error("write failure for " + global.out);
}

std::string render_points(const PointCloud& points, const std::string& format) {
    if (format == "json") return json(points).dump() + "\n";
    std::ostringstream out;  // csv and text render identically
    for (const auto& p : points) {
        for (std::size_t d = 0; d < p.size(); ++d) {
            if (d) out << ',';
            out << num(p[d]);
        }
        out << '\n';
    }
    return out.str();
}

// --- reference barcode grammar: "m x [a,b)", e.g. "5x[0,2)" ---

const std::regex kRefPattern(
    R"(^\s*(\d+)\s*x\s*\[\s*([-+]?[0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)\s*,\s*([-+]?[0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)\s*\)\s*$)");

Barcode parse_reference_one(const std::string& spec) {
    std::smatch m;
    if (!std::regex_match(spec, m, kRefPattern))
        throw std::runtime_error("--ref: cannot parse '" + spec +
                                 "' (expected e.g. 5x[0,2))");
    const std::size_t count = std::stoull(m[1]);
    const double a = std::stod(m[2]);
    const double b = std::stod(m[3]);
    std::vector<Interval> bars(count, Interval{a, b});
    return Barcode(std::move(bars));
}

Barcode parse_reference(const std::vector<std::string>& specs) {
    std::vector<Interval> bars;
    for (const auto& spec : specs) {
        const Barcode one = parse_reference_one(spec);
        bars.insert(bars.end(), one.intervals.begin(), one.intervals.end());
    }
    return Barcode(std::move(bars));
}

// --- point-cloud / metric-space inputs shared by several commands ---

struct SpaceInput {
    std::string path;
    std::string format = "csv";
    bool skip_header = false;
    std::size_t circle = 0;  // metric circle point count, 0 = off
    double ell = 1.0;
};

void add_space_options(CLI::App* cmd, SpaceInput& in) {
    auto* input = cmd->add_option("--input", in.path, "point cloud file");
    cmd->add_option("--input-format", in.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_flag("--skip-header", in.skip_header,
                  "skip one CSV header row");
    auto* circle = cmd->add_option(
        "--circle", in.circle,
        "use the metric circle on this many points instead of a file");
    cmd->add_option("--ell", in.ell, "metric circle edge length");
    input->excludes(circle);
}

FiniteMetricSpace load_space(const SpaceInput& in) {
    if (in.circle > 0) return metric_circle(in.circle, in.ell, true);
    if (in.path.empty())
        throw std::runtime_error("either --input or --circle is required");
    const auto format =
        in.format == "json" ? PointFormat::Json : PointFormat::Csv;
    return from_points(load_point_cloud(in.path, format, in.skip_header));
}

// --- synthetic shapes and noise models ---

struct ShapeSpec {
    std::string shape;
    std::size_t count = 0;
    double inner = 0.8, outer = 1.2;  // annulus
    double radius = 1.0;              // sphere
    double minor = 0.5, major = 1.0;  // torus
    double low = -2.0, high = 2.0;    // box
    std::size_t dim = 2;              // box
};

PointCloud make_shape(const ShapeSpec& spec, Rng& rng) {
    if (spec.count == 0) throw std::runtime_error("--count must be >= 1");
    if (spec.shape == "annulus")
        return sample_annulus(spec.count, spec.inner, spec.outer, rng);
    if (spec.shape == "two_circles")
        return sample_two_circles(spec.count, rng);
    if (spec.shape == "sphere")
        return sample_sphere(spec.count, spec.radius, rng);
    if (spec.shape == "torus")
        return sample_torus(spec.count, spec.minor, spec.major, rng);
    if (spec.shape == "box") {
        const std::vector<std::pair<double, double>> bounds(
            spec.dim, {spec.low, spec.high});
        return sample_box(spec.count, bounds, rng);
    }
    throw std::runtime_error("--shape: unknown value '" + spec.shape +
                             "' (annulus, two_circles, sphere, torus, box)");
}

void require_keys(const json& obj, const std::set<std::string>& allowed,
                  const std::string& where) {
    for (const auto& [key, value] : obj.items())
        if (!allowed.count(key))
            throw std::runtime_error("unknown key '" + key + "' in " + where);
}

ShapeSpec shape_from_json(const json& obj) {
    require_keys(obj,
                 {"shape", "count", "inner", "outer", "radius", "minor",
                  "major", "low", "high", "dim"},
                 "shape");
    ShapeSpec spec;
    spec.shape = obj.at("shape").get<std::string>();
    spec.count = obj.at("count").get<std::size_t>();
    spec.inner = obj.value("inner", spec.inner);
    spec.outer = obj.value("outer", spec.outer);
    spec.radius = obj.value("radius", spec.radius);
    spec.minor = obj.value("minor", spec.minor);
    spec.major = obj.value("major", spec.major);
    spec.low = obj.value("low", spec.low);
    spec.high = obj.value("high", spec.high);
    spec.dim = obj.value("dim", spec.dim);
    return spec;
}

// level means: gaussian -> sigma2, uniform-replace -> fraction,
// uniform-add -> point count, linkage-add -> fraction of the base count.
PointCloud apply_noise(PointCloud points, const std::string& kind, double level,
                       double low, double high, Rng& rng) {
    if (kind == "none" || level == 0.0) return points;
    if (kind == "gaussian") return add_gaussian_noise(points, level, rng);
    if (kind == "uniform-replace") {
        const std::vector<std::pair<double, double>> bounds(
            points.at(0).size(), {low, high});
        return replace_uniform_noise(points, level, bounds, rng);
    }
    if (kind == "uniform-add") {
        const std::vector<std::pair<double, double>> bounds(
            points.at(0).size(), {low, high});
        const auto extra =
            sample_box(static_cast<std::size_t>(std::llround(level)), bounds, rng);
        points.insert(points.end(), extra.begin(), extra.end());
        return points;
    }
    if (kind == "linkage-add") {
        const auto count = static_cast<std::size_t>(
            std::llround(level * static_cast<double>(points.size())));
        return add_diameter_linkage(points, count, rng);
    }
    throw std::runtime_error("unknown noise kind '" + kind + "'");
}

// --- report rendering ---

std::string render_report(const TestReport& report,
                          const std::string& format) {
    if (format == "json") return to_json(report) + "\n";
    std::ostringstream out;
    out << "method     " << report.method << '\n';
    out << "statistic  " << num(report.statistic) << '\n';
    if (report.p_value) out << "p_value    " << num(*report.p_value) << '\n';
    out << "reject 90% " << (report.reject_90 ? "yes" : "no") << '\n';
    out << "reject 95% " << (report.reject_95 ? "yes" : "no") << '\n';
    out << "reject 99% " << (report.reject_99 ? "yes" : "no") << '\n';
    for (const auto& [key, value] : report.params)
        out << "  " << key << " = " << num(value) << '\n';
    return out.str();
}

std::string render_ci(const ConfidenceInterval& ci, const std::string& format) {
    if (format == "json") return to_json(ci) + "\n";
    std::ostringstream out;
    out << "method     " << ci.method << '\n';
    out << "level      " << num(ci.level) << '\n';
    out << "interval   [" << num(ci.low) << ", " << num(ci.high) << "]\n";
    for (const auto& [key, value] : ci.params)
        out << "  " << key << " = " << num(value) << '\n';
    return out.str();
}

// ====================== sample ======================

struct SampleOptions {
    ShapeSpec shape;
    double gaussian_sigma2 = 0.0;
    double uniform_fraction = 0.0;
    double noise_low = -2.0, noise_high = 2.0;
    std::size_t linkage = 0;
};

int run_sample(const GlobalOptions& global, const SampleOptions& opt) {
    Rng rng(global.seed);
    // validate the shape name before drawing anything
    PointCloud points = [&] {
        Rng shape_rng = rng.split(0);
        return make_shape(opt.shape, shape_rng);
    }();
    if (opt.gaussian_sigma2 > 0.0) {
        Rng noise_rng = rng.split(1);
        points = add_gaussian_noise(points, opt.gaussian_sigma2, noise_rng);
    }
    if (opt.uniform_fraction > 0.0) {
        Rng noise_rng = rng.split(2);
        const std::vector<std::pair<double, double>> bounds(
            points.at(0).size(), {opt.noise_low, opt.noise_high});
        points = replace_uniform_noise(points, opt.uniform_fraction, bounds,
                                       noise_rng);
    }
    if (opt.linkage > 0) {
        Rng noise_rng = rng.split(3);
        points = add_diameter_linkage(points, opt.linkage, noise_rng);
    }
    emit(global, render_points(points, global.format));
    return 0;
}

// ====================== barcode ======================

struct BarcodeOptions {
    SpaceInput input;
    int k = 1;
    double cutoff = 0.0;
    std::string complex = "rips";
    std::vector<std::size_t> landmarks;
    std::size_t cap = kDefaultSimplexCap;
    bool reduced = false;
};

int run_barcode(const GlobalOptions& global, const BarcodeOptions& opt) {
    const auto space = load_space(opt.input);
    const auto kind = complex_kind_from_string(opt.complex);
    if (kind == ComplexKind::Witness && opt.landmarks.empty())
        throw std::runtime_error("--landmarks is required for witness complexes");
    const Barcode barcode = analysis([&] {
        const auto complex =
            kind == ComplexKind::Rips
                ? vietoris_rips(space, opt.k + 1, opt.cutoff, opt.cap)
                : weak_witness(space, opt.landmarks, opt.k + 1, opt.cutoff,
                               opt.cap);
        return compute_barcode(complex, opt.k, {.reduced_h0 = opt.reduced});
    });
    if (global.format == "json")
        emit(global, to_json(barcode) + "\n");
    else
        emit(global, to_text(barcode));
    return 0;
}

// ====================== phi ======================

struct PhiCliOptions {
    SpaceInput input;
    std::size_t n = 0;
    int k = 1;
    std::size_t K = 0;
    double cutoff = 0.0;
    std::string complex = "rips";
    bool without_replacement = false;
    std::size_t stage_pool = 0;  // two-stage first-stage size, 0 = off
};

int run_phi(const GlobalOptions& global, const PhiCliOptions& opt) {
    const auto space = load_space(opt.input);
    const auto kind = complex_kind_from_string(opt.complex);
    const PhiOptions phi_options{!opt.without_replacement, global.threads};
    const Rng rng(global.seed);
    auto dist = analysis([&] {
        return opt.stage_pool > 0
                   ? phi_estimate_two_stage(space, opt.stage_pool, opt.n,
                                            opt.k, opt.K, opt.cutoff, kind,
                                            rng, phi_options)
                   : phi_estimate(space, opt.n, opt.k, opt.K, opt.cutoff,
                                  kind, rng, phi_options);
    });
    dist.meta.seed = global.seed;
    emit(global, to_json(dist) + "\n");
    return 0;
}

// ====================== stat ======================

struct StatOptions {
    std::string dist_path;
    std::string dist2_path;
    std::string statistic;
    std::vector<std::string> refs;
    bool on_d2 = false;
    double alpha = 0.1;
    std::size_t m = 1;
    std::size_t m_max = 5;
};

BarcodeDistribution load_distribution(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return distribution_from_json(text.str());
}

int run_stat(const GlobalOptions& global, const StatOptions& opt) {
    const auto dist = load_distribution(opt.dist_path);
    json result;
    result["statistic"] = opt.statistic;
    if (opt.statistic == "mhd" || opt.statistic == "trimmed-mhd") {
        if (opt.refs.empty() && !opt.on_d2)
            throw std::runtime_error("--ref is required");
        const Barcode ref = parse_reference(opt.refs);
        result["value"] = analysis([&] {
            return opt.statistic == "mhd" ? mhd(dist, ref, opt.on_d2)
                                          : trimmed_mhd(dist, ref, opt.alpha);
        });
    } else if (opt.statistic == "gap-median") {
        result["m"] = opt.m;
        result["value"] = analysis([&] { return gap_median(dist, opt.m); });
    } else if (opt.statistic == "gap-max") {
        const auto [arg, value] =
            analysis([&] { return gap_max(dist, opt.m_max); });
        result["m"] = arg;
        result["value"] = value;
    } else if (opt.statistic == "hd") {
        if (opt.dist2_path.empty())
            throw std::runtime_error("--dist2 is required for hd");
        const auto reference = load_distribution(opt.dist2_path);
        result["value"] = analysis([&] { return hd(dist, reference); });
    } else {
        throw std::runtime_error("--statistic: unknown value '" +
                                 opt.statistic + "'");
    }
    if (global.format == "json") {
        emit(global, result.dump() + "\n");
    } else {
        std::ostringstream out;
        for (const auto& [key, value] : result.items())
            out << key << " = " << value.dump() << '\n';
        emit(global, out.str());
    }
    return 0;
}

// ====================== test ======================

struct TestOptions {
    std::string method;
    std::string dist_path;
    std::string dist2_path;
    std::string on = "d2";
    std::size_t pairs = 1000;
    std::vector<std::string> refs;
    std::size_t bins = 25;
    std::vector<double> range;
    double eps = 0.05;
    double alpha = 0.05;
    double threshold = 0.0;
    std::size_t min_bars = 1;
};

std::pair<RealDistribution, RealDistribution> real_samples(
    const GlobalOptions& global, const TestOptions& opt,
    const BarcodeDistribution& d1, const BarcodeDistribution& d2) {
    if (opt.on == "db") {
        if (opt.refs.empty())
            throw std::runtime_error("--ref is required with --on db");
        const Barcode ref = parse_reference(opt.refs);
        return {distance_distribution_db(d1, ref),
                distance_distribution_db(d2, ref)};
    }
    const Rng rng(global.seed);
    Rng r1 = rng.split(1);
    Rng r2 = rng.split(2);
    return {distance_distribution_d2(d1, opt.pairs, r1),
            distance_distribution_d2(d2, opt.pairs, r2)};
}

int run_test(const GlobalOptions& global, const TestOptions& opt) {
    TestReport report;
    if (opt.method == "ks" || opt.method == "chi2") {
        if (opt.dist2_path.empty())
            throw std::runtime_error("--dist2 is required for two-sample tests");
        if (opt.method == "chi2" && opt.bins < 2)
            throw std::runtime_error("--bins must be >= 2");
        std::optional<std::pair<double, double>> range;
        if (!opt.range.empty()) {
            if (opt.range.size() != 2 || !(opt.range[0] < opt.range[1]))
                throw std::runtime_error("--range expects LO HI with LO < HI");
            range = {opt.range[0], opt.range[1]};
        }
        const auto d1 = load_distribution(opt.dist_path);
        const auto d2 = load_distribution(opt.dist2_path);
        const auto [s1, s2] = analysis([&] {
            return real_samples(global, opt, d1, d2);
        });
        report = analysis([&] {
            return opt.method == "ks" ? ks_two_sample(s1, s2)
                                      : chi2_histogram(s1, s2, opt.bins, range);
        });
    } else if (opt.method == "chi2-ref") {
        if (opt.dist2_path.empty())
            throw std::runtime_error("--dist2 is required for two-sample tests");
        if (opt.refs.empty())
            throw std::runtime_error("--ref is required for chi2-ref");
        std::vector<Barcode> refs;
        for (const auto& spec : opt.refs)
            refs.push_back(parse_reference_one(spec));
        const auto d1 = load_distribution(opt.dist_path);
        const auto d2 = load_distribution(opt.dist2_path);
        report =
            analysis([&] { return chi2_reference_barcodes(d1, d2, refs); });
    } else if (opt.method == "mass") {
        if (opt.threshold <= 0.0)
            throw std::runtime_error("--threshold must be > 0 for mass tests");
        const auto dist = load_distribution(opt.dist_path);
        const auto in_S = [&](const Barcode& b) {
            return long_bar_count(b, opt.threshold) >= opt.min_bars;
        };
        report = analysis([&] {
            return mass_hypothesis_test(dist, in_S, opt.eps, opt.alpha);
        });
    } else {
        throw std::runtime_error("--method: unknown value '" + opt.method +
                                 "'");
    }
    emit(global, render_report(report, global.format));
    return 0;
}

// ====================== ci ======================

struct CiOptions {
    std::string method;
    std::string values_path;
    double alpha = 0.05;
    // mhd pipeline
    SpaceInput input;
    std::size_t n = 0;
    int k = 1;
    std::size_t K = 0;
    double cutoff = 0.0;
    std::string complex = "rips";
    std::vector<std::string> refs;
    std::size_t samples = 100;
    bool on_d2 = false;
};

std::vector<double> load_values(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<double> values;
    double v = 0.0;
    while (in >> v) values.push_back(v);
    if (values.empty()) throw std::runtime_error("no values in " + path);
    return values;
}

int run_ci(const GlobalOptions& global, const CiOptions& opt) {
    ConfidenceInterval ci;
    if (opt.method == "median") {
        if (opt.values_path.empty())
            throw std::runtime_error("--values is required for median CIs");
        const RealDistribution samples(load_values(opt.values_path));
        ci = analysis(
            [&] { return median_confidence_interval(samples, opt.alpha); });
    } else if (opt.method == "mhd") {
        if (opt.refs.empty() && !opt.on_d2)
            throw std::runtime_error("--ref is required");
        const auto space = load_space(opt.input);
        const auto kind = complex_kind_from_string(opt.complex);
        const Barcode ref =
            opt.refs.empty() ? Barcode{} : parse_reference(opt.refs);
        const PhiOptions phi_options{true, global.threads};
        const Rng rng(global.seed);
        ci = analysis([&] {
            std::vector<double> values(opt.samples);
            for (std::size_t s = 0; s < opt.samples; ++s) {
                const auto dist =
                    phi_estimate(space, opt.n, opt.k, opt.K, opt.cutoff, kind,
                                 rng.split(s), phi_options);
                values[s] = mhd(dist, ref, opt.on_d2);
            }
            return median_confidence_interval(RealDistribution(values),
                                              opt.alpha);
        });
    } else {
        throw std::runtime_error("--method: unknown value '" + opt.method +
                                 "'");
    }
    emit(global, render_ci(ci, global.format));
    return 0;
}

// ====================== reproduce ======================

struct ReproduceOptions {
    std::string id;
    bool list = false;
    double scale = 1.0;
    std::size_t repetitions = 0;  // 0 = use the config value
    std::string dir = "experiments";
};

std::vector<std::string> experiment_ids(const std::string& dir) {
    std::vector<std::string> ids;
    std::error_code ec;
    for (const auto& entry : std::filesystem::directory_iterator(dir, ec))
        if (entry.path().extension() == ".json")
            ids.push_back(entry.path().stem().string());
    std::sort(ids.begin(), ids.end());
    return ids;
}

std::size_t scaled(std::size_t value, double scale, std::size_t floor_at = 1) {
    const auto s = static_cast<std::size_t>(
        std::llround(static_cast<double>(value) * scale));
    return std::max(floor_at, s);
}

Barcode reference_from_json(const json& spec) {
    // either a grammar string ("1x[0,0.375)") or [m, a, b]
    if (spec.is_string()) return parse_reference_one(spec.get<std::string>());
    const auto m = spec.at(0).get<std::size_t>();
    std::vector<Interval> bars(
        m, Interval{spec.at(1).get<double>(), spec.at(2).get<double>()});
    return Barcode(std::move(bars));
}

struct NoiseSpec {
    std::string kind = "none";
    std::vector<double> levels{0.0};
    double low = -2.0, high = 2.0;
};

NoiseSpec noise_from_json(const json& obj) {
    require_keys(obj, {"kind", "levels", "low", "high"}, "noise");
    NoiseSpec spec;
    spec.kind = obj.at("kind").get<std::string>();
    spec.levels = obj.at("levels").get<std::vector<double>>();
    spec.low = obj.value("low", spec.low);
    spec.high = obj.value("high", spec.high);
    return spec;
}

std::string within(double v, double lo, double hi) {
    return v >= lo && v <= hi ? "yes" : "no";
}

// Optional per-experiment distance scale: a factor of 0.5 expresses the
// filtration in ball radii (an edge appears when the balls around its
// endpoints touch) instead of interpoint distances.
PointCloud scale_points(PointCloud points, double factor) {
    if (factor != 1.0)
        for (auto& point : points)
            for (auto& coordinate : point) coordinate *= factor;
    return points;
}

// Rejection-rate tables: per noise level, the fraction of repetitions in
// which each test rejects at the 99/95/90 levels, for the pairwise
// distance distribution and optionally for distances to a reference
// barcode.
std::string run_two_sample_family(const json& cfg, std::uint64_t seed,
                                  int threads, double scale,
                                  std::size_t reps_override) {
    if (cfg.contains("groups")) {
        require_keys(cfg, {"family", "description", "seed", "repetitions",
                           "distance_scale", "groups"},
                     "config");
        std::ostringstream out;
        std::size_t index = 0;
        for (const auto& group : cfg.at("groups")) {
            json sub = group;
            sub["family"] = cfg.at("family");
            if (!sub.contains("repetitions") && cfg.contains("repetitions"))
                sub["repetitions"] = cfg.at("repetitions");
            if (!sub.contains("distance_scale") &&
                cfg.contains("distance_scale"))
                sub["distance_scale"] = cfg.at("distance_scale");
            out << "# group: " << group.value("label", std::to_string(index))
                << '\n';
            out << run_two_sample_family(sub, seed + index, threads, scale,
                                         reps_override);
            ++index;
        }
        return out.str();
    }
    require_keys(cfg,
                 {"family", "description", "label", "seed", "repetitions",
                  "distance_scale", "shape", "noise", "pipeline", "blocks",
                  "reference_barcode", "reference"},
                 "config");
    const double distance_scale = cfg.value("distance_scale", 1.0);
    const auto shape = shape_from_json(cfg.at("shape"));
    const auto noise = noise_from_json(cfg.at("noise"));
    const auto& pipe = cfg.at("pipeline");
    require_keys(pipe, {"n", "k", "K", "cutoff", "pairs", "bins"}, "pipeline");
    const auto n = pipe.at("n").get<std::size_t>();
    const int k = pipe.at("k").get<int>();
    const auto K = scaled(pipe.at("K").get<std::size_t>(), scale, 10);
    const double cutoff = pipe.at("cutoff").get<double>();
    const auto pairs = scaled(pipe.at("pairs").get<std::size_t>(), scale, 10);
    const auto bins = pipe.at("bins").get<std::size_t>();
    const auto blocks = cfg.at("blocks").get<std::vector<std::string>>();
    const Barcode ref = cfg.contains("reference_barcode")
                            ? reference_from_json(cfg.at("reference_barcode"))
                            : Barcode{};
    const std::size_t reps =
        reps_override > 0
            ? reps_override
            : scaled(cfg.value("repetitions", std::size_t{20}), scale, 1);
    const PhiOptions phi_options{true, threads};

    // reject_counts[block][level][test(chi2=0,ks=1)][conf(99,95,90)]
    std::map<std::string, std::vector<std::array<std::array<int, 3>, 2>>>
        rejects;
    for (const auto& block : blocks)
        rejects[block].resize(noise.levels.size());

    const Rng root(seed);
    for (std::size_t rep = 0; rep < reps; ++rep) {
        const Rng rep_rng = root.split(rep);
        Rng shape_rng = rep_rng.split(0);
        const auto base_points = make_shape(shape, shape_rng);
        const auto base_space =
            from_points(scale_points(base_points, distance_scale));
        const auto base_phi =
            phi_estimate(base_space, n, k, K, cutoff, ComplexKind::Rips,
                         rep_rng.split(1), phi_options);
        Rng base_pairs_rng = rep_rng.split(2);
        const auto base_d2 =
            distance_distribution_d2(base_phi, pairs, base_pairs_rng);
        const auto base_db = blocks.size() > 1 || blocks[0] == "db"
                                 ? distance_distribution_db(base_phi, ref)
                                 : RealDistribution{};
        for (std::size_t j = 0; j < noise.levels.size(); ++j) {
            Rng noise_rng = rep_rng.split(10 + 4 * j);
            const auto variant_points =
                apply_noise(base_points, noise.kind, noise.levels[j],
                            noise.low, noise.high, noise_rng);
            const auto variant_space =
                from_points(scale_points(variant_points, distance_scale));
            const auto variant_phi =
                phi_estimate(variant_space, n, k, K, cutoff,
                             ComplexKind::Rips, rep_rng.split(11 + 4 * j),
                             phi_options);
            for (const auto& block : blocks) {
                RealDistribution s1, s2;
                if (block == "d2") {
                    s1 = base_d2;
                    Rng pair_rng = rep_rng.split(12 + 4 * j);
                    s2 = distance_distribution_d2(variant_phi, pairs,
                                                  pair_rng);
                } else {
                    s1 = base_db;
                    s2 = distance_distribution_db(variant_phi, ref);
                }
                // two identical point masses leave a single nonzero bin;
                // that is a vacuous comparison, never a rejection
                const auto chi2 = [&] {
                    try {
                        return chi2_histogram(s1, s2, bins);
                    } catch (const std::invalid_argument&) {
                        return TestReport{};
                    }
                }();
                const auto ks = ks_two_sample(s1, s2);
                auto& cell = rejects[block][j];
                cell[0][0] += chi2.reject_99;
                cell[0][1] += chi2.reject_95;
                cell[0][2] += chi2.reject_90;
                cell[1][0] += ks.reject_99;
                cell[1][1] += ks.reject_95;
                cell[1][2] += ks.reject_90;
            }
        }
    }

    std::ostringstream out;
    out << "block,noise,chi2_99,chi2_95,chi2_90,ks_99,ks_95,ks_90\n";
    const auto fraction = [&](int count) {
        return static_cast<double>(count) / static_cast<double>(reps);
    };
    for (const auto& block : blocks)
        for (std::size_t j = 0; j < noise.levels.size(); ++j) {
            const auto& cell = rejects[block][j];
            out << block << ',' << num(noise.levels[j]);
            for (int test = 0; test < 2; ++test)
                for (int conf = 0; conf < 3; ++conf)
                    out << ',' << num(fraction(cell[test][conf]));
            out << '\n';
        }
    if (cfg.contains("reference")) {
        out << "# comparison against stored reference ranges\n";
        out << "block,noise,test,conf,observed,expected_low,expected_high,"
               "within\n";
        for (const auto& row : cfg.at("reference")) {
            require_keys(row, {"block", "noise", "chi2", "ks", "tol"},
                         "reference row");
            const auto block = row.at("block").get<std::string>();
            const double level = row.at("noise").get<double>();
            const double tol = row.at("tol").get<double>();
            const auto j = static_cast<std::size_t>(
                std::find(noise.levels.begin(), noise.levels.end(), level) -
                noise.levels.begin());
            if (j == noise.levels.size())
                throw std::runtime_error("reference row for unknown level");
            static const char* conf_names[3] = {"99", "95", "90"};
            for (int test = 0; test < 2; ++test) {
                const auto name = test == 0 ? "chi2" : "ks";
                const auto expected =
                    row.at(name).get<std::vector<double>>();
                for (int conf = 0; conf < 3; ++conf) {
                    const double lo = std::max(0.0, expected[conf] - tol);
                    const double hi = std::min(1.0, expected[conf] + tol);
                    const double v = fraction(rejects[block][j][test][conf]);
                    out << block << ',' << num(level) << ',' << name << ','
                        << conf_names[conf] << ',' << num(v) << ',' << num(lo)
                        << ',' << num(hi) << ',' << within(v, lo, hi) << '\n';
                }
            }
        }
    }
    return out.str();
}

// Long-bar histograms: one subsample distribution per noise level, with
// the weight broken down by the number of bars longer than the threshold.
std::string run_histogram_family(const json& cfg, std::uint64_t seed,
                                 int threads, double scale,
                                 std::size_t /*reps_override*/) {
    require_keys(cfg,
                 {"family", "description", "seed", "distance_scale", "shape",
                  "noise", "pipeline", "reference"},
                 "config");
    const double distance_scale = cfg.value("distance_scale", 1.0);
    const auto shape = shape_from_json(cfg.at("shape"));
    const auto noise = noise_from_json(cfg.at("noise"));
    const auto& pipe = cfg.at("pipeline");
    require_keys(pipe, {"n", "k", "K", "cutoff", "threshold", "max_bars"},
                 "pipeline");
    const auto n = pipe.at("n").get<std::size_t>();
    const int k = pipe.at("k").get<int>();
    const auto K = scaled(pipe.at("K").get<std::size_t>(), scale, 10);
    const double cutoff = pipe.at("cutoff").get<double>();
    const double threshold = pipe.at("threshold").get<double>();
    const auto max_bars = pipe.at("max_bars").get<std::size_t>();
    const PhiOptions phi_options{true, threads};

    std::vector<std::vector<std::size_t>> table;
    const Rng root(seed);
    for (std::size_t j = 0; j < noise.levels.size(); ++j) {
        const Rng level_rng = root.split(j);
        Rng shape_rng = level_rng.split(0);
        auto points = make_shape(shape, shape_rng);
        Rng noise_rng = level_rng.split(1);
        points = apply_noise(std::move(points), noise.kind, noise.levels[j],
                             noise.low, noise.high, noise_rng);
        const auto dist = phi_estimate(
            from_points(scale_points(std::move(points), distance_scale)), n,
            k, K, cutoff, ComplexKind::Rips, level_rng.split(2), phi_options);
        std::vector<std::size_t> counts(max_bars + 1, 0);
        for (const auto& [barcode, count] : dist.atoms)
            counts[std::min(long_bar_count(barcode, threshold), max_bars)] +=
                count;
        table.push_back(std::move(counts));
    }

    std::ostringstream out;
    out << "noise";
    for (std::size_t b = 0; b <= max_bars; ++b)
        out << ",bars_" << b << (b == max_bars ? "_or_more" : "");
    out << ",total\n";
    for (std::size_t j = 0; j < noise.levels.size(); ++j) {
        out << num(noise.levels[j]);
        for (const auto count : table[j]) out << ',' << count;
        out << ',' << K << '\n';
    }
    if (cfg.contains("reference")) {
        out << "# comparison against stored reference ranges\n";
        out << "noise,bars,observed_fraction,expected_low,expected_high,"
               "within\n";
        for (const auto& row : cfg.at("reference")) {
            require_keys(row, {"level", "counts", "tol"}, "reference row");
            const double level = row.at("level").get<double>();
            const double tol = row.at("tol").get<double>();
            const auto expected = row.at("counts").get<std::vector<double>>();
            const auto j = static_cast<std::size_t>(
                std::find(noise.levels.begin(), noise.levels.end(), level) -
                noise.levels.begin());
            if (j == noise.levels.size())
                throw std::runtime_error("reference row for unknown level");
            double expected_total = 0.0;
            for (const auto e : expected) expected_total += e;
            for (std::size_t b = 0; b < expected.size() && b <= max_bars;
                 ++b) {
                const double want = expected[b] / expected_total;
                const double lo = std::max(0.0, want - tol);
                const double hi = std::min(1.0, want + tol);
                const double got = static_cast<double>(table[j][b]) /
                                   static_cast<double>(K);
                out << num(level) << ',' << b << ',' << num(got) << ','
                    << num(lo) << ',' << num(hi) << ',' << within(got, lo, hi)
                    << '\n';
            }
        }
    }
    return out.str();
}

// Median homological distance with order-statistic confidence intervals,
// per noise level and per reference-barcode hypothesis.
std::string run_mhd_family(const json& cfg, std::uint64_t seed, int threads,
                           double scale, std::size_t /*reps_override*/) {
    require_keys(cfg,
                 {"family", "description", "seed", "distance_scale", "shape",
                  "noise", "pipeline", "hypotheses", "reference"},
                 "config");
    const double distance_scale = cfg.value("distance_scale", 1.0);
    const auto shape = shape_from_json(cfg.at("shape"));
    const auto noise = noise_from_json(cfg.at("noise"));
    const auto& pipe = cfg.at("pipeline");
    require_keys(pipe, {"n", "K", "cutoff", "samples", "alpha"}, "pipeline");
    const auto n = pipe.at("n").get<std::size_t>();
    const auto K = scaled(pipe.at("K").get<std::size_t>(), scale, 10);
    const double cutoff = pipe.at("cutoff").get<double>();
    const auto samples =
        scaled(pipe.at("samples").get<std::size_t>(), scale, 10);
    const double alpha = pipe.at("alpha").get<double>();
    const PhiOptions phi_options{true, threads};

    struct Row {
        double level;
        int k;
        std::size_t m;
        double median, lo, hi;
    };
    std::vector<Row> rows;
    const Rng root(seed);
    std::size_t row_index = 0;
    for (std::size_t j = 0; j < noise.levels.size(); ++j) {
        for (const auto& hyp : cfg.at("hypotheses")) {
            require_keys(hyp, {"k", "m", "ref"}, "hypothesis");
            const int k = hyp.at("k").get<int>();
            const auto interval = hyp.at("ref").get<std::vector<double>>();
            for (const auto m : hyp.at("m").get<std::vector<std::size_t>>()) {
                const std::vector<Interval> bars(
                    m, Interval{interval.at(0), interval.at(1)});
                const Barcode ref{std::vector<Interval>(bars)};
                const Rng row_rng = root.split(row_index++);
                std::vector<double> values(samples);
                for (std::size_t s = 0; s < samples; ++s) {
                    const Rng sample_rng = row_rng.split(s);
                    Rng shape_rng = sample_rng.split(0);
                    auto points = make_shape(shape, shape_rng);
                    Rng noise_rng = sample_rng.split(1);
                    points = apply_noise(std::move(points), noise.kind,
                                         noise.levels[j], noise.low,
                                         noise.high, noise_rng);
                    const auto dist = phi_estimate(
                        from_points(
                            scale_points(std::move(points), distance_scale)),
                        n, k, K, cutoff, ComplexKind::Rips,
                        sample_rng.split(2), phi_options);
                    values[s] = mhd(dist, ref);
                }
                const RealDistribution sample_dist(values);
                const auto ci =
                    median_confidence_interval(sample_dist, alpha);
                rows.push_back({noise.levels[j], k, m,
                                median_lower(sample_dist), ci.low, ci.high});
            }
        }
    }

    std::ostringstream out;
    out << "noise,k,m,median,ci_low,ci_high\n";
    for (const auto& row : rows)
        out << num(row.level) << ',' << row.k << ',' << row.m << ','
            << num(row.median) << ',' << num(row.lo) << ',' << num(row.hi)
            << '\n';
    if (cfg.contains("reference")) {
        out << "# comparison against stored reference ranges\n";
        out << "noise,k,m,observed_median,expected_low,expected_high,within\n";
        for (const auto& ref_row : cfg.at("reference")) {
            require_keys(ref_row, {"level", "k", "m", "median_range"},
                         "reference row");
            const double level = ref_row.at("level").get<double>();
            const int k = ref_row.at("k").get<int>();
            const auto m = ref_row.at("m").get<std::size_t>();
            const auto range =
                ref_row.at("median_range").get<std::vector<double>>();
            for (const auto& row : rows)
                if (row.level == level && row.k == k && row.m == m)
                    out << num(level) << ',' << k << ',' << m << ','
                        << num(row.median) << ',' << num(range.at(0)) << ','
                        << num(range.at(1)) << ','
                        << within(row.median, range.at(0), range.at(1))
                        << '\n';
        }
    }
    return out.str();
}

int run_reproduce(const GlobalOptions& global, const ReproduceOptions& opt) {
    const auto ids = experiment_ids(opt.dir);
    if (opt.list) {
        std::ostringstream out;
        for (const auto& id : ids) out << id << '\n';
        emit(global, out.str());
        return 0;
    }
    if (std::find(ids.begin(), ids.end(), opt.id) == ids.end()) {
        std::ostringstream msg;
        msg << "unknown experiment id '" << opt.id << "'; valid ids:";
        for (const auto& id : ids) msg << "\n  " << id;
        if (ids.empty()) msg << " (none found under " << opt.dir << ")";
        throw std::runtime_error(msg.str());
    }
    if (!(opt.scale > 0.0 && opt.scale <= 1.0))
        throw std::runtime_error("--scale must be in (0, 1]");
    const auto path = opt.dir + "/" + opt.id + ".json";
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json cfg;
    try {
        in >> cfg;
    } catch (const json::exception& e) {
        throw std::runtime_error("JSON parse failure in " + path + ": " +
                                 e.what());
    }
    const auto family = cfg.at("family").get<std::string>();
    const std::uint64_t seed = global.seed_given
                                   ? global.seed
                                   : cfg.value("seed", std::uint64_t{0});
    const std::string table = analysis([&] {
        if (family == "two-sample-tests")
            return run_two_sample_family(cfg, seed, global.threads, opt.scale,
                                         opt.repetitions);
        if (family == "long-bar-histogram")
            return run_histogram_family(cfg, seed, global.threads, opt.scale,
                                        opt.repetitions);
        if (family == "mhd-confidence")
            return run_mhd_family(cfg, seed, global.threads, opt.scale,
                                  opt.repetitions);
        throw std::runtime_error("unknown experiment family '" + family + "'");
    });
    emit(global, table);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Statistical inference on persistent homology of sampled spaces"};
    app.require_subcommand(1);
    app.fallthrough(true);  // accept the global flags after the subcommand

    GlobalOptions global;
    app.add_option("--seed", global.seed, "master random seed")
        ->each([&](const std::string&) { global.seed_given = true; });
    app.add_option("--threads", global.threads, "worker threads")
        ->check(CLI::PositiveNumber);
    app.add_option("--out", global.out, "output file (default stdout)");
    app.add_option("--format", global.format, "output format")
        ->check(CLI::IsMember({"json", "csv", "text"}));

    SampleOptions sample;
    auto* cmd_sample =
        app.add_subcommand("sample", "draw points from a synthetic shape");
    cmd_sample->add_option("--shape", sample.shape.shape,
                           "annulus, two_circles, sphere, torus, or box")
        ->required();
    cmd_sample->add_option("--count", sample.shape.count, "number of points")
        ->required()
        ->check(CLI::PositiveNumber);
    cmd_sample->add_option("--inner", sample.shape.inner, "annulus inner radius");
    cmd_sample->add_option("--outer", sample.shape.outer, "annulus outer radius");
    cmd_sample->add_option("--radius", sample.shape.radius, "sphere radius");
    cmd_sample->add_option("--minor", sample.shape.minor, "torus minor radius");
    cmd_sample->add_option("--major", sample.shape.major, "torus major radius");
    cmd_sample->add_option("--low", sample.shape.low, "box lower bound");
    cmd_sample->add_option("--high", sample.shape.high, "box upper bound");
    cmd_sample->add_option("--dim", sample.shape.dim, "box dimension");
    cmd_sample->add_option("--gaussian-sigma2", sample.gaussian_sigma2,
                           "add Gaussian noise with this variance");
    cmd_sample->add_option("--uniform-fraction", sample.uniform_fraction,
                           "replace this fraction of points with box noise");
    cmd_sample->add_option("--noise-low", sample.noise_low,
                           "noise box lower bound");
    cmd_sample->add_option("--noise-high", sample.noise_high,
                           "noise box upper bound");
    cmd_sample->add_option("--linkage", sample.linkage,
                           "append this many diameter points");

    BarcodeOptions barcode;
    auto* cmd_barcode = app.add_subcommand(
        "barcode", "persistent homology barcode of a point cloud");
    add_space_options(cmd_barcode, barcode.input);
    cmd_barcode->add_option("--k", barcode.k, "homology degree")
        ->check(CLI::NonNegativeNumber);
    cmd_barcode->add_option("--cutoff", barcode.cutoff, "scale cutoff")
        ->required()
        ->check(CLI::PositiveNumber);
    cmd_barcode->add_option("--complex", barcode.complex, "rips or witness")
        ->check(CLI::IsMember({"rips", "witness"}));
    cmd_barcode->add_option("--landmarks", barcode.landmarks,
                            "witness landmark indices");
    cmd_barcode->add_option("--cap", barcode.cap, "simplex-count guard");
    cmd_barcode->add_flag("--reduced", barcode.reduced,
                          "drop the essential H0 bar");

    PhiCliOptions phi;
    auto* cmd_phi = app.add_subcommand(
        "phi", "subsample barcode distribution estimate");
    add_space_options(cmd_phi, phi.input);
    cmd_phi->add_option("--n", phi.n, "subsample size")
        ->required()
        ->check(CLI::PositiveNumber);
    cmd_phi->add_option("--k", phi.k, "homology degree")
        ->check(CLI::NonNegativeNumber);
    cmd_phi->add_option("--K", phi.K, "number of subsamples")
        ->required()
        ->check(CLI::PositiveNumber);
    cmd_phi->add_option("--cutoff", phi.cutoff, "scale cutoff")
        ->required()
        ->check(CLI::PositiveNumber);
    cmd_phi->add_option("--complex", phi.complex, "rips or witness")
        ->check(CLI::IsMember({"rips", "witness"}));
    cmd_phi->add_flag("--without-replacement", phi.without_replacement,
                      "draw subsamples without replacement");
    cmd_phi->add_option("--stage-pool", phi.stage_pool,
                        "two-stage estimation: first-stage sample size");

    StatOptions stat;
    auto* cmd_stat =
        app.add_subcommand("stat", "summary statistic of a distribution");
    cmd_stat->add_option("--dist", stat.dist_path, "distribution JSON file")
        ->required();
    cmd_stat->add_option("--dist2", stat.dist2_path,
                         "second distribution (for hd)");
    cmd_stat
        ->add_option("--statistic", stat.statistic,
                     "mhd, trimmed-mhd, gap-median, gap-max, or hd")
        ->required();
    cmd_stat->add_option("--ref", stat.refs,
                         "reference barcode, e.g. 5x[0,2)");
    cmd_stat->add_flag("--on-d2", stat.on_d2,
                       "median over pairwise distances instead");
    cmd_stat->add_option("--alpha", stat.alpha, "trim fraction");
    cmd_stat->add_option("--m", stat.m, "gap index");
    cmd_stat->add_option("--m-max", stat.m_max, "gap scan bound");

    TestOptions test;
    auto* cmd_test = app.add_subcommand("test", "hypothesis test");
    cmd_test
        ->add_option("--method", test.method,
                     "ks, chi2, chi2-ref, or mass")
        ->required();
    cmd_test->add_option("--dist", test.dist_path, "distribution JSON file")
        ->required();
    cmd_test->add_option("--dist2", test.dist2_path, "second distribution");
    cmd_test->add_option("--on", test.on, "compare d2 or db distances")
        ->check(CLI::IsMember({"d2", "db"}));
    cmd_test->add_option("--pairs", test.pairs, "d2 sample size");
    cmd_test->add_option("--ref", test.refs,
                         "reference barcode(s), e.g. 1x[0,0.375)");
    cmd_test->add_option("--bins", test.bins, "histogram bins");
    cmd_test->add_option("--range", test.range, "histogram range LO HI")
        ->expected(2);
    cmd_test->add_option("--eps", test.eps, "mass-test threshold weight");
    cmd_test->add_option("--alpha", test.alpha, "mass-test level");
    cmd_test->add_option("--threshold", test.threshold,
                         "long-bar length threshold");
    cmd_test->add_option("--min-bars", test.min_bars,
                         "mass test: barcodes with at least this many long bars");

    CiOptions ci;
    auto* cmd_ci = app.add_subcommand("ci", "confidence interval");
    cmd_ci->add_option("--method", ci.method, "median or mhd")->required();
    cmd_ci->add_option("--values", ci.values_path,
                       "file of sample values, one per line");
    cmd_ci->add_option("--alpha", ci.alpha, "1 - confidence level");
    add_space_options(cmd_ci, ci.input);
    cmd_ci->add_option("--n", ci.n, "subsample size");
    cmd_ci->add_option("--k", ci.k, "homology degree")
        ->check(CLI::NonNegativeNumber);
    cmd_ci->add_option("--K", ci.K, "subsamples per estimate");
    cmd_ci->add_option("--cutoff", ci.cutoff, "scale cutoff");
    cmd_ci->add_option("--complex", ci.complex, "rips or witness")
        ->check(CLI::IsMember({"rips", "witness"}));
    cmd_ci->add_option("--ref", ci.refs, "reference barcode");
    cmd_ci->add_option("--samples", ci.samples,
                       "independent statistic samples");
    cmd_ci->add_flag("--on-d2", ci.on_d2,
                     "median over pairwise distances instead");

    ReproduceOptions repro;
    auto* cmd_repro =
        app.add_subcommand("reproduce", "re-run a bundled experiment");
    cmd_repro->add_option("--id", repro.id, "experiment id");
    cmd_repro->add_flag("--list", repro.list, "list available experiments");
    cmd_repro->add_option("--scale", repro.scale,
                          "shrink K and repetitions by this factor");
    cmd_repro->add_option("--repetitions", repro.repetitions,
                          "override the repetition count");
    cmd_repro->add_option("--experiments-dir", repro.dir,
                          "directory holding experiment configs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(cmd_sample)) return run_sample(global, sample);
        if (app.got_subcommand(cmd_barcode))
            return run_barcode(global, barcode);
        if (app.got_subcommand(cmd_phi)) return run_phi(global, phi);
        if (app.got_subcommand(cmd_stat)) return run_stat(global, stat);
        if (app.got_subcommand(cmd_test)) return run_test(global, test);
        if (app.got_subcommand(cmd_ci)) return run_ci(global, ci);
        if (app.got_subcommand(cmd_repro))
            return run_reproduce(global, repro);
    } catch (const AnalysisError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
