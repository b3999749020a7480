#include "tpcc/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "tpcc/errors.hpp"
#include "tpcc/signature.hpp"

namespace tpcc {

namespace {

int scaled(int count, double scale) {
    return std::max(1, static_cast<int>(std::lround(count * scale)));
}

ShapeSpec shape(ShapeKind kind, int count, std::vector<double> center) {
    ShapeSpec s;
    s.kind = kind;
    s.count = count;
    s.center = std::move(center);
    return s;
}

ShapeSpec segment(int count, std::vector<double> from, std::vector<double> to) {
    ShapeSpec s = shape(ShapeKind::kLineSegment, count, std::move(from));
    s.end = std::move(to);
    return s;
}

Dataset toy(double scale, double noise, std::uint64_t seed) {
    std::vector<ShapeSpec> specs;
    for (double x : {0.0, 5.0}) {
        ShapeSpec torus = shape(ShapeKind::kTorus4d, scaled(5000, scale), {x, 0, 0, 0});
        torus.sampling = Sampling::kGrid;
        torus.dropout = 0.2;
        specs.push_back(torus);
    }
    const int line = scaled(300, scale);
    specs.push_back(segment(line, {1, 0, 1, 0}, {4, 0, 1, 0}));
    specs.push_back(segment(line, {1, 0, -1, 0}, {4, 0, -1, 0}));
    specs.push_back(segment(line, {2.5, 0, 1, 0}, {2.5, 0, -1, 0}));
    for (double y : {-4.0, 4.0}) {
        ShapeSpec cube = shape(ShapeKind::kCube, scaled(200, scale), {2.5, y, 0, 0});
        cube.side = 0.8;
        specs.push_back(cube);
    }
    for (auto& s : specs) {
        s.noise = noise;
    }
    Dataset d{"toy", generate(specs, seed), {}};
    // below 0.6 the dropout holes open extra loops and kill the torus voids
    d.config.epsilon = 0.6;
    d.config.max_dim = 2;
    // the segment loops leak onto the tori, so one edge cluster per torus keeps it whole
    d.config.clusters_per_dim = {3, 3, 2};
    d.config.final_k = 10;
    d.config.seed = seed;
    return d;
}

Dataset sphere_in_circle(double scale, double noise, std::uint64_t seed) {
    std::vector<ShapeSpec> specs;
    specs.push_back(shape(ShapeKind::kSphere, scaled(300, scale), {0, 0, 0}));
    // radius 3 keeps the noisy circle clear of the sphere up to noise 0.3
    ShapeSpec circle = shape(ShapeKind::kCircle, scaled(150, scale), {0, 0, 0});
    circle.radius = 3.0;
    specs.push_back(circle);
    specs.push_back(segment(scaled(30, scale), {1, 0, 0}, {3, 0, 0}));
    for (auto& s : specs) {
        s.sampling = Sampling::kGrid;
        s.noise = noise;
    }
    Dataset d{"sphere_in_circle", generate(specs, seed), {}};
    d.config.max_dim = 2;
    // noise thickens the sphere shell, so its void is born later
    d.config.max_eps = 0.8 + noise * 2.0 / 3.0;
    d.config.persistence_fraction = 0.5;
    d.config.final_k = 3;
    d.config.seed = seed;
    return d;
}

Dataset circle_line(double scale, double noise, std::uint64_t seed) {
    std::vector<ShapeSpec> specs;
    specs.push_back(shape(ShapeKind::kCircle, scaled(120, scale), {0, 0}));
    specs.push_back(segment(scaled(40, scale), {0, -1}, {0, 1}));
    for (auto& s : specs) {
        s.noise = noise;
    }
    PointCloud raw = generate(specs, seed);
    // the chord splits the circle into a left and a right arc
    std::vector<int> labels = raw.labels();
    for (Eigen::Index i = 0; i < raw.size(); ++i) {
        auto& l = labels[static_cast<std::size_t>(i)];
        l = l == 1 ? 2 : (raw.point(i)(0) < 0.0 ? 0 : 1);
    }
    Dataset d{"circle_line", PointCloud(raw.coords(), labels), {}};
    d.config.max_dim = 1;
    d.config.max_eps = 0.6;
    d.config.clusters_per_dim = {0, 3};
    d.config.final_k = 3;
    d.config.seed = seed;
    return d;
}

Dataset two_spheres_two_circles(double scale, double noise, std::uint64_t seed) {
    std::vector<ShapeSpec> specs;
    specs.push_back(shape(ShapeKind::kSphere, scaled(400, scale), {0, 0, 0}));
    ShapeSpec c1 = shape(ShapeKind::kCircle, scaled(100, scale), {2, 0, 0});
    c1.basis = {{1, 0, 0}, {0, 0, 1}};
    specs.push_back(c1);
    specs.push_back(shape(ShapeKind::kSphere, scaled(400, scale), {4, 0, 0}));
    ShapeSpec c2 = shape(ShapeKind::kCircle, scaled(100, scale), {6, 0, 0});
    c2.basis = {{1, 0, 0}, {0, 0, 1}};
    specs.push_back(c2);
    for (auto& s : specs) {
        s.noise = noise;
        s.sampling = Sampling::kGrid;
    }
    Dataset d{"two_spheres_two_circles", generate(specs, seed), {}};
    d.config.max_dim = 2;
    d.config.max_eps = 0.6;
    // each circle's flow spills onto the caps of the spheres it touches
    d.config.clusters_per_dim = {0, 4, 2};
    d.config.final_k = 4;
    d.config.seed = seed;
    return d;
}

Dataset wedge(const std::string& name, std::vector<int> parts, std::uint64_t seed) {
    Dataset d{name, wedge_of_spheres(parts), {}};
    d.config.epsilon = 1.2;
    d.config.max_dim = 2;
    d.config.final_k = static_cast<int>(parts.size()) + 1;
    d.config.seed = seed;
    return d;
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

nlohmann::ordered_json config_json(const TpccConfig& c) {
    nlohmann::ordered_json j;
    j["epsilon"] = c.epsilon ? nlohmann::ordered_json(*c.epsilon) : nlohmann::ordered_json("auto");
    j["max_dim"] = c.max_dim ? nlohmann::ordered_json(*c.max_dim) : nlohmann::ordered_json("auto");
    j["clusters_per_dim"] = c.clusters_per_dim;
    j["final_k"] = c.final_k;
    j["final_method"] = c.final_method == FinalMethod::kKMeans ? "kmeans" : "spectral";
    j["kernel_tol"] = c.kernel_tol;
    j["subsample_cap"] = c.subsample_cap;
    j["trivial_threshold"] = c.trivial_threshold;
    j["dim_candidates"] = c.dim_candidates;
    j["knn"] = c.knn;
    j["restarts"] = c.restarts;
    j["persistence_fraction"] = c.persistence_fraction;
    j["max_eps"] = c.max_eps ? nlohmann::ordered_json(*c.max_eps) : nlohmann::ordered_json("auto");
    j["simplex_cap"] = c.simplex_cap;
    j["landmarks"] = c.landmark_count ? nlohmann::ordered_json(*c.landmark_count)
                                      : nlohmann::ordered_json(nullptr);
    return j;
}

void summarize(MethodScores& m) {
    const auto n = static_cast<double>(m.ari.size());
    if (m.ari.empty()) {
        return;
    }
    m.mean = std::accumulate(m.ari.begin(), m.ari.end(), 0.0) / n;
    double var = 0.0;
    for (double a : m.ari) {
        var += (a - m.mean) * (a - m.mean);
    }
    m.stddev = m.ari.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
    std::vector<double> sorted = m.ari;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t h = sorted.size() / 2;
    m.median = sorted.size() % 2 ? sorted[h] : 0.5 * (sorted[h - 1] + sorted[h]);
}

struct CaseSpec {
    std::string dataset;
    double noise;
};

std::vector<CaseSpec> cases_of(const std::string& name) {
    if (name == "toy") return {{"toy", 0.0}};
    if (name == "sphere_in_circle") return {{"sphere_in_circle", 0.0}, {"sphere_in_circle", 0.3}};
    if (name == "noise_sweep") {
        return {{"sphere_in_circle", 0.0},
                {"sphere_in_circle", 0.1},
                {"sphere_in_circle", 0.2},
                {"sphere_in_circle", 0.3}};
    }
    if (name == "circle_line") return {{"circle_line", 0.0}};
    if (name == "two_spheres_two_circles") return {{"two_spheres_two_circles", 0.0}};
    if (name == "wedge") return {{"wedge_s1_s1", 0.0}, {"wedge_s1_s2", 0.0}, {"wedge_s1_s1_s2", 0.0}};
    throw ArgumentError("unknown experiment '" + name + "'");
}

std::string number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

Dataset make_dataset(const std::string& name, double scale, double noise, std::uint64_t seed) {
    if (!(scale > 0.0)) {
        throw ArgumentError("scale must be > 0");
    }
    if (noise < 0.0) {
        throw ArgumentError("noise must be >= 0");
    }
    if (name == "toy") return toy(scale, noise, seed);
    if (name == "sphere_in_circle") return sphere_in_circle(scale, noise, seed);
    if (name == "circle_line") return circle_line(scale, noise, seed);
    if (name == "two_spheres_two_circles") return two_spheres_two_circles(scale, noise, seed);
    if (name == "wedge_s1_s1") return wedge(name, {1, 1}, seed);
    if (name == "wedge_s1_s2") return wedge(name, {1, 2}, seed);
    if (name == "wedge_s1_s1_s2") return wedge(name, {1, 1, 2}, seed);
    throw ArgumentError("unknown dataset '" + name + "'");
}

const MethodScores& scores(const CaseReport& report, const std::string& method) {
    for (const auto& m : report.methods) {
        if (m.method == method) {
            return m;
        }
    }
    throw ArgumentError("no scores for method '" + method + "'");
}

ExperimentReport run_experiment(const std::string& name, double scale,
                                const std::vector<std::uint64_t>& seeds) {
    const std::vector<CaseSpec> specs = cases_of(name);
    if (seeds.empty()) {
        throw ArgumentError("at least one seed is required");
    }
    ExperimentReport report;
    report.name = name;
    report.scale = scale;
    report.seeds = seeds;

    nlohmann::ordered_json fingerprint;
    fingerprint["name"] = name;
    fingerprint["scale"] = scale;
    fingerprint["seeds"] = seeds;
    for (const CaseSpec& spec : specs) {
        CaseReport cr;
        cr.dataset = spec.dataset;
        cr.noise = spec.noise;
        MethodScores ours{"tpcc", {}, 0, 0, 0};
        MethodScores spectral{"spectral_vr", {}, 0, 0, 0};
        for (std::uint64_t seed : seeds) {
            const Dataset data = make_dataset(spec.dataset, scale, spec.noise, seed);
            if (seed == seeds.front()) {
                nlohmann::ordered_json entry;
                entry["dataset"] = spec.dataset;
                entry["noise"] = spec.noise;
                entry["config"] = config_json(data.config);
                fingerprint["cases"].push_back(std::move(entry));
            }
            const TpccResult result = run_tpcc(data.cloud, data.config);
            const auto& truth = data.cloud.labels();
            ours.ari.push_back(adjusted_rand_index(truth, result.labels));
            const int k = data.config.final_k;
            spectral.ari.push_back(adjusted_rand_index(
                truth, baseline_spectral_vr(data.cloud, result.diagnostics.epsilon, k, seed)));
            cr.betti.push_back(result.diagnostics.betti_numbers());
            cr.epsilon.push_back(result.diagnostics.epsilon);
            cr.betti_matches_persistence =
                cr.betti_matches_persistence && result.diagnostics.betti_matches_persistence();
            for (const auto& d : result.diagnostics.dims) {
                if (d.kernel_scale > 0.0) {
                    cr.max_kernel_residual =
                        std::max(cr.max_kernel_residual, d.kernel_residual / d.kernel_scale);
                }
            }
        }
        summarize(ours);
        summarize(spectral);
        cr.methods = {std::move(ours), std::move(spectral)};
        report.cases.push_back(std::move(cr));
    }
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx",
                  static_cast<unsigned long long>(fnv1a(fingerprint.dump())));
    report.config_hash = hash;
    return report;
}

std::string report_to_json(const ExperimentReport& report) {
    nlohmann::ordered_json j;
    j["experiment"] = report.name;
    j["scale"] = report.scale;
    j["seeds"] = report.seeds;
    j["config_hash"] = report.config_hash;
    auto cases = nlohmann::ordered_json::array();
    for (const auto& c : report.cases) {
        nlohmann::ordered_json e;
        e["dataset"] = c.dataset;
        e["noise"] = c.noise;
        for (const auto& m : c.methods) {
            nlohmann::ordered_json s;
            s["mean"] = m.mean;
            s["stddev"] = m.stddev;
            s["median"] = m.median;
            s["ari"] = m.ari;
            e["methods"][m.method] = std::move(s);
        }
        e["betti"] = c.betti;
        e["epsilon"] = c.epsilon;
        e["max_kernel_residual"] = c.max_kernel_residual;
        e["betti_matches_persistence"] = c.betti_matches_persistence;
        cases.push_back(std::move(e));
    }
    j["cases"] = std::move(cases);
    return j.dump(2) + "\n";
}

std::string report_to_csv(const ExperimentReport& report) {
    std::ostringstream os;
    os << "dataset,noise,method,seed,ari\n";
    for (const auto& c : report.cases) {
        for (const auto& m : c.methods) {
            for (std::size_t i = 0; i < m.ari.size(); ++i) {
                os << c.dataset << ',' << number(c.noise) << ',' << m.method << ','
                   << report.seeds[i] << ',' << number(m.ari[i]) << '\n';
            }
        }
    }
    return os.str();
}

}  // namespace tpcc
