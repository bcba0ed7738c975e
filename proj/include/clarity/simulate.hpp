#pragma once

#include <string>
#include <vector>

#include "clarity/distributions.hpp"
#include "clarity/estimation.hpp"
#include "clarity/posterior.hpp"
#include "json.hpp"

namespace clarity {

struct ExperimentConfig {
    SignalDistribution prior = SignalDistribution::point_mass(0.0);
    std::size_t n = 10000;
    std::vector<std::uint64_t> seeds = {0};
    double grid_lo = -4.0;
    double grid_hi = 4.0;
    std::size_t grid_count = 401;
    std::vector<EstimatorMethod> methods = {EstimatorMethod::SincKernel};
    std::string outputs = ".";

    static ExperimentConfig from_json(const nlohmann::json& spec);
    nlohmann::json to_json() const;
    std::vector<double> grid() const;
};

struct MethodErrorSummary {
    std::uint64_t seed = 0;
    EstimatorMethod method = EstimatorMethod::SincKernel;
    double eta1_hat = 0.0;
    double sup_to_clar = 0.0, mean_to_clar = 0.0;
    double sup_to_lnsr = 0.0, mean_to_lnsr = 0.0;
    double sup_to_lfsr = 0.0, mean_to_lfsr = 0.0;
    std::size_t flagged_points = 0;
};

struct ExperimentResult {
    std::vector<double> y_grid;
    PosteriorCurves truth;
    std::vector<MethodErrorSummary> summaries;
    std::vector<std::string> files;  // everything written, truth first
};

/// The estimator-comparison experiment: per-seed fits of each method against
/// the exact curves, with CSV and JSON artifacts in cfg.outputs.
ExperimentResult run_fig3_experiment(const ExperimentConfig& cfg);

struct PerturbationRow {
    double xi = 0.0;
    double lnsr_base = 0.0;
    double lnsr_perturbed = 0.0;
    double clar_base = 0.0;
    double clar_perturbed = 0.0;
    double tv_proxy = 0.0;  // (1/2) integral |marginal difference|
};

/// Splits the atom at 0 into +-xi halves: marginals converge while the null
/// posterior probability collapses to 0 for every xi.
std::vector<PerturbationRow> run_perturbation_demo(const SignalDistribution& P_base,
                                                   const std::vector<double>& xi_seq,
                                                   double y);

/// Writes the two-groups decomposition CSVs (null/non-null and
/// inactive/active contributions to the marginal) for P over the grid.
std::vector<std::string> emit_decomposition_figures(const SignalDistribution& P,
                                                    const std::vector<double>& grid,
                                                    const std::string& out_dir);

/// Serializes rows to path atomically (write temp, rename); 17 significant
/// digits throughout.
void write_csv_atomic(const std::string& path, const std::string& header,
                      const std::vector<std::vector<double>>& rows);

}  // namespace clarity
