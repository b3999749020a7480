#include "tpcc/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "tpcc/errors.hpp"

namespace tpcc {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot open " + path.string() + " for writing");
    }
    out << std::setprecision(17);
    return out;
}

}  // namespace

std::string complex_to_json(const SimplicialComplex& sc) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (int d = 0; d <= sc.max_dim(); ++d) {
        auto level = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < sc.count(d); ++i) {
            const auto s = sc.simplex(d, i);
            level.push_back(std::vector<VertexId>(s.begin(), s.end()));
        }
        j[std::to_string(d)] = std::move(level);
    }
    return j.dump();
}

void write_diagram_csv(const std::filesystem::path& path, const PersistenceDiagram& diagram) {
    auto out = open_output(path);
    out << "dim,birth,death\n";
    for (int d = 0; d <= diagram.max_dim(); ++d) {
        for (const PersistencePair& p : diagram.bars[static_cast<std::size_t>(d)]) {
            out << d << ',' << p.birth << ',';
            if (p.is_infinite()) {
                out << "inf";
            } else {
                out << p.death;
            }
            out << '\n';
        }
    }
}

void write_labels_csv(const std::filesystem::path& path, const std::vector<int>& labels) {
    auto out = open_output(path);
    out << "index,label\n";
    for (std::size_t i = 0; i < labels.size(); ++i) {
        out << i << ',' << labels[i] << '\n';
    }
}

void write_features_csv(const std::filesystem::path& path, const SimplicialComplex& sc,
                        const FeatureSpace& fs, const std::vector<int>& labels) {
    auto out = open_output(path);
    const int d = fs.dim;
    for (int v = 0; v <= d; ++v) {
        out << 'v' << v << ',';
    }
    for (Eigen::Index c = 0; c < fs.rows.cols(); ++c) {
        out << 'e' << c << ',';
    }
    out << "label\n";
    for (std::size_t i = 0; i < sc.count(d); ++i) {
        for (VertexId v : sc.simplex(d, i)) {
            out << v << ',';
        }
        for (Eigen::Index c = 0; c < fs.rows.cols(); ++c) {
            out << fs.rows(static_cast<Eigen::Index>(i), c) << ',';
        }
        out << labels[i] << '\n';
    }
}

void write_signatures_csv(const std::filesystem::path& path, const SignatureTable& table) {
    auto out = open_output(path);
    out << "index";
    for (std::size_t k = 0; k < table.cluster_count.size(); ++k) {
        for (int c = 0; c <= table.cluster_count[k]; ++c) {
            out << ",d" << k << "c" << c;
        }
    }
    out << '\n';
    for (Eigen::Index i = 0; i < table.rows.rows(); ++i) {
        out << i;
        for (Eigen::Index c = 0; c < table.rows.cols(); ++c) {
            out << ',' << table.rows(i, c);
        }
        out << '\n';
    }
}

std::string diagnostics_to_json(const Diagnostics& diagnostics) {
    nlohmann::ordered_json j;
    j["epsilon"] = diagnostics.epsilon;
    j["epsilon_source"] = diagnostics.epsilon_source;
    j["epsilon_sample"] = diagnostics.epsilon_sample;
    j["max_dim"] = diagnostics.max_dim;
    j["point_count"] = diagnostics.point_count;
    j["landmark_count"] = diagnostics.landmark_count;
    j["betti"] = diagnostics.betti_numbers();
    j["betti_matches_persistence"] = diagnostics.betti_matches_persistence();
    auto dims = nlohmann::ordered_json::array();
    for (const auto& d : diagnostics.dims) {
        nlohmann::ordered_json e;
        e["dim"] = d.dim;
        e["simplices"] = d.simplex_count;
        e["betti"] = d.betti;
        e["persistence_betti"] = d.persistence_betti;
        e["clusters"] = d.clusters;
        e["kernel_scale"] = d.kernel_scale;
        e["kernel_residual"] = d.kernel_residual;
        if (std::isfinite(d.next_eigenvalue)) {
            e["next_eigenvalue"] = d.next_eigenvalue;
        } else {
            e["next_eigenvalue"] = nullptr;
        }
        e["gap_check_failed"] = d.gap_check_failed;
        dims.push_back(std::move(e));
    }
    j["dimensions"] = std::move(dims);
    auto timings = nlohmann::ordered_json::object();
    for (const auto& [stage, seconds] : diagnostics.timings) {
        timings[stage] = seconds;
    }
    j["timings_seconds"] = std::move(timings);
    return j.dump(2);
}

}  // namespace tpcc
