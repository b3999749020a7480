#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tpcc/pipeline.hpp"
#include "tpcc/pointcloud.hpp"

namespace tpcc {

/// A generated point cloud with ground-truth labels and the configuration used on it.
struct Dataset {
    std::string name;
    PointCloud cloud;
    TpccConfig config;
};

/// Builds one experiment dataset.
///
///   toy                     two tori in R^4 joined by three segments, plus two cubes
///   sphere_in_circle        unit sphere inside a radius-3 circle, joined by a segment
///   circle_line             unit circle split by a chord; labels left arc / right arc / chord
///   two_spheres_two_circles sphere, circle, sphere, circle touching in a chain
///   wedge_s1_s1, wedge_s1_s2, wedge_s1_s1_s2
///                           bouquets of circles and 2-spheres with exact triangulations
///
/// `scale` multiplies the point counts of the sampled shapes (wedges ignore it).
/// Throws ArgumentError for unknown names.
Dataset make_dataset(const std::string& name, double scale, double noise, std::uint64_t seed);

struct MethodScores {
    std::string method;
    std::vector<double> ari;
    double mean = 0.0;
    double stddev = 0.0;
    double median = 0.0;
};

struct CaseReport {
    std::string dataset;
    double noise = 0.0;
    std::vector<MethodScores> methods;
    std::vector<std::vector<int>> betti;
    std::vector<double> epsilon;
    /// Largest ||L v|| / max-diagonal over all kernel vectors of all runs.
    double max_kernel_residual = 0.0;
    bool betti_matches_persistence = true;
};

struct ExperimentReport {
    std::string name;
    double scale = 1.0;
    std::vector<std::uint64_t> seeds;
    std::vector<CaseReport> cases;
    std::string config_hash;
};

/// Runs TPCC and the Rips spectral baseline on every case of the experiment.
///
/// Names: toy, sphere_in_circle (noise 0 and 0.3), noise_sweep (noise 0 to 0.3),
/// circle_line, two_spheres_two_circles, wedge. Throws ArgumentError for others.
ExperimentReport run_experiment(const std::string& name, double scale,
                                const std::vector<std::uint64_t>& seeds);

std::string report_to_json(const ExperimentReport& report);
/// Rows "dataset,noise,method,seed,ari".
std::string report_to_csv(const ExperimentReport& report);

const MethodScores& scores(const CaseReport& report, const std::string& method);

}  // namespace tpcc
