#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tpcc/errors.hpp"
#include "tpcc/experiments.hpp"
#include "tpcc/filtration.hpp"
#include "tpcc/io.hpp"
#include "tpcc/pipeline.hpp"
#include "tpcc/pointcloud.hpp"

namespace fs = std::filesystem;

namespace {

/// "0..19" or "1,4,7" or a mix of both.
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    std::size_t pos = 0;
    auto parse = [](const std::string& s) {
        std::uint64_t v = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size()) {
            throw tpcc::ArgumentError("invalid seed '" + s + "'");
        }
        return v;
    };
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        const std::string item = text.substr(pos, comma - pos);
        const std::size_t dots = item.find("..");
        if (dots == std::string::npos) {
            seeds.push_back(parse(item));
        } else {
            const std::uint64_t lo = parse(item.substr(0, dots));
            const std::uint64_t hi = parse(item.substr(dots + 2));
            if (hi < lo) {
                throw tpcc::ArgumentError("empty seed range '" + item + "'");
            }
            for (std::uint64_t s = lo; s <= hi; ++s) {
                seeds.push_back(s);
            }
        }
        pos = comma + 1;
    }
    return seeds;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw tpcc::Error("cannot open " + path.string() + " for writing");
    }
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Topological point cloud clustering"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "cluster the points of a CSV file");
    std::string input;
    std::string output;
    std::optional<double> epsilon;
    bool auto_epsilon = false;
    std::optional<int> max_dim;
    int final_k = 2;
    std::vector<int> clusters_per_dim;
    std::optional<Eigen::Index> landmarks;
    std::uint64_t seed = 0;
    std::string features_dir;
    std::string diagnostics_path;
    bool label_column = false;
    std::optional<double> max_eps;
    run->add_option("--input", input, "points CSV")->required()->check(CLI::ExistingFile);
    auto* eps_opt = run->add_option("--epsilon", epsilon, "Rips scale");
    auto* auto_opt = run->add_flag("--auto-epsilon", auto_epsilon, "choose the scale by persistence");
    eps_opt->excludes(auto_opt);
    run->add_option("--max-eps", max_eps, "filtration cut-off for --auto-epsilon");
    run->add_option("--max-dim", max_dim, "highest homology dimension");
    run->add_option("--final-k", final_k, "number of point clusters");
    run->add_option("--clusters-per-dim", clusters_per_dim, "subspace clusters per dimension")
        ->delimiter(',');
    run->add_option("--landmarks", landmarks, "run on this many min-max landmarks");
    run->add_option("--seed", seed, "random seed");
    run->add_option("--output", output, "labels CSV")->required();
    run->add_option("--emit-features", features_dir, "directory for feature and signature CSVs");
    run->add_option("--emit-diagnostics", diagnostics_path, "diagnostics JSON");
    run->add_flag("--label-column", label_column, "last input column holds labels");

    // experiment
    auto* experiment = app.add_subcommand("experiment", "reproduce a synthetic experiment");
    std::string name;
    double scale = 1.0;
    std::string seeds_text = "0";
    std::string report_path;
    std::string csv_path;
    experiment->add_option("--name", name, "experiment name")->required();
    experiment->add_option("--scale", scale, "point count scale factor");
    experiment->add_option("--seeds", seeds_text, "seeds, e.g. 0..19 or 1,2,3");
    experiment->add_option("--output", report_path, "report JSON")->required();
    experiment->add_option("--csv", csv_path, "per-seed scores CSV");

    // persistence
    auto* persistence = app.add_subcommand("persistence", "persistence diagram of the Rips filtration");
    std::string p_input;
    std::string p_output;
    double p_max_eps = 1.0;
    int p_max_dim = 1;
    bool p_label_column = false;
    persistence->add_option("--input", p_input, "points CSV")->required()->check(CLI::ExistingFile);
    persistence->add_option("--max-eps", p_max_eps, "filtration cut-off")->required();
    persistence->add_option("--max-dim", p_max_dim, "highest homology dimension");
    persistence->add_option("--output", p_output, "diagram CSV")->required();
    persistence->add_flag("--label-column", p_label_column, "last input column holds labels");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            const tpcc::PointCloud cloud = [&] {
                try {
                    return tpcc::load_point_cloud(input, {label_column});
                } catch (const tpcc::StageError&) {
                    throw;
                } catch (const tpcc::Error& e) {
                    throw tpcc::StageError("input", e.what());
                }
            }();
            tpcc::TpccConfig config;
            if (!auto_epsilon) {
                config.epsilon = epsilon;
            }
            if (!epsilon && !auto_epsilon) {
                throw tpcc::StageError("config", "give --epsilon or --auto-epsilon");
            }
            config.max_eps = max_eps;
            config.max_dim = max_dim;
            config.final_k = final_k;
            config.clusters_per_dim = clusters_per_dim;
            config.landmark_count = landmarks;
            config.seed = seed;
            const tpcc::TpccResult result = tpcc::run_tpcc(cloud, config);
            tpcc::write_labels_csv(output, result.labels);
            if (!features_dir.empty()) {
                fs::create_directories(features_dir);
                for (std::size_t k = 0; k < result.features.size(); ++k) {
                    tpcc::write_features_csv(fs::path(features_dir) /
                                                 ("features_dim" + std::to_string(k) + ".csv"),
                                             result.complex, result.features[k],
                                             result.simplex_labels[k]);
                }
                tpcc::write_signatures_csv(fs::path(features_dir) / "signatures.csv",
                                           result.signatures);
            }
            if (!diagnostics_path.empty()) {
                write_text(diagnostics_path, tpcc::diagnostics_to_json(result.diagnostics) + "\n");
            }
            if (cloud.has_labels()) {
                std::cerr << "ARI vs input labels: "
                          << tpcc::adjusted_rand_index(cloud.labels(), result.labels) << "\n";
            }
        } else if (*experiment) {
            const auto seeds = parse_seeds(seeds_text);
            const tpcc::ExperimentReport report = tpcc::run_experiment(name, scale, seeds);
            write_text(report_path, tpcc::report_to_json(report));
            if (!csv_path.empty()) {
                write_text(csv_path, tpcc::report_to_csv(report));
            }
            for (const auto& c : report.cases) {
                std::cout << c.dataset << " noise=" << c.noise;
                for (const auto& m : c.methods) {
                    std::cout << "  " << m.method << " mean=" << m.mean << " sd=" << m.stddev;
                }
                std::cout << "\n";
            }
        } else if (*persistence) {
            const tpcc::PointCloud cloud = tpcc::load_point_cloud(p_input, {p_label_column});
            const tpcc::PersistenceDiagram pd = tpcc::vr_persistence(cloud, p_max_eps, p_max_dim);
            tpcc::write_diagram_csv(p_output, pd);
        }
    } catch (const tpcc::StageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << app.get_subcommands().front()->get_name() << ": " << e.what()
                  << "\n";
        return 1;
    }
    return 0;
}
