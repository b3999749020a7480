#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tpcc/complex.hpp"
#include "tpcc/filtration.hpp"
#include "tpcc/pipeline.hpp"
#include "tpcc/signature.hpp"
#include "tpcc/simplex_clustering.hpp"

namespace tpcc {

/// {"0": [[0], [1], ...], "1": [[0, 1], ...], ...}
std::string complex_to_json(const SimplicialComplex& sc);

/// Rows "dim,birth,death" with "inf" for infinite deaths.
void write_diagram_csv(const std::filesystem::path& path, const PersistenceDiagram& diagram);

/// Rows "index,label".
void write_labels_csv(const std::filesystem::path& path, const std::vector<int>& labels);

/// One row per simplex: vertex ids, then harmonic coordinates, then the cluster label.
void write_features_csv(const std::filesystem::path& path, const SimplicialComplex& sc,
                        const FeatureSpace& fs, const std::vector<int>& labels);

/// One row per point: index, then the signature blocks.
void write_signatures_csv(const std::filesystem::path& path, const SignatureTable& table);

std::string diagnostics_to_json(const Diagnostics& diagnostics);

}  // namespace tpcc
