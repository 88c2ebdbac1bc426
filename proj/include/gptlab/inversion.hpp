#pragma once

#include "gptlab/gpt.hpp"
#include "gptlab/sensitivity.hpp"

#include <vector>

namespace gptlab {

struct StageConfig {
    int order;         // GPT orders active in this stage
    int radial_nodes;  // profile resolution
    int max_iter;
    double tol;        // stage stops once eps_M over active orders drops below
};

struct ReconstructionConfig {
    int max_order = 6;
    double step_size = 0.1;
    double lambda_min = 0.1;
    /// Weight for the (m, n) pair; empty means 1 / (m n R^{2(m+n)}).
    Eigen::MatrixXd weights;
    std::vector<StageConfig> schedule;  // empty means default_schedule(max_order)
    /// Forward solver used inside the iteration (cheaper than the default).
    RadialSolveOptions solver{800, false, 1e-6};
    /// Plateau rule: stage ends when eps_M improves by less than this over 50
    /// iterations.
    double plateau = 1e-12;

    static std::vector<StageConfig> default_schedule(int max_order);
    double weight(int m, int n, double R) const;
};

struct IterationRecord {
    int k;
    int stage_order;
    double eps_M;
    double eps_sigma;  // NaN when no ground truth is supplied
};

/// Current iterate of the radial reconstruction.
struct ReconstructionState {
    RadialProfile profile;
    std::vector<double> targets;  // y_n, 1-based order n = index + 1
    int active_order = 1;
    double step = 0.1;
    int iteration = 0;
    double radius = 1.0;

    // Forward data for the current profile (filled by landweber_step).
    std::vector<double> gpts;
    double functional = 0.0;
    bool forward_valid = false;
};

struct ReconstructionResult {
    RadialProfile profile;
    std::vector<IterationRecord> history;
    double eps_M = 0.0;
    double eps_sigma = std::numeric_limits<double>::quiet_NaN();
    int iterations = 0;
};

/// sigma_0 = (2|B| + M1) / (2|B| - M1).
double initial_guess(double M1, double area);

/// Diagonal targets y_n of a radial table; rejects tables whose cs/sc blocks
/// or off-diagonal entries are not numerically zero.
std::vector<double> radial_targets(const ContractedGPTTable& table);

/// Weighted half-sum of squared residuals over orders m = n <= active_order.
double discrepancy_functional(const ConductivityField& sigma, const std::vector<double>& targets,
                              int active_order, double R, const ReconstructionConfig& config);

/// One Landweber update with backtracking on the functional; updates the
/// iterate in place.
void landweber_step(ReconstructionState& state, const ReconstructionConfig& config);

ReconstructionResult recursive_reconstruct(const ContractedGPTTable& targets, double R,
                                           const ReconstructionConfig& config = {},
                                           const ConductivityField* ground_truth = nullptr);

/// (eps_M, eps_sigma): GPT residual sum over n <= N and the normalized
/// L2 conductivity error.  eps_sigma is NaN without ground truth.
std::pair<double, double> discrepancies(const ConductivityField& sigma,
                                        const std::vector<double>& targets, int N, double R,
                                        const ConductivityField* ground_truth = nullptr,
                                        const RadialSolveOptions& opts = {});

/// Non-radial variant: sigma parametrized on polar cell centers, forward maps
/// through the FEM NtD assembly.  Considerably heavier per iteration; meant
/// for low orders and coarse meshes.
struct GriddedReconstructionConfig {
    int max_order = 2;
    int nr = 12;
    int ntheta = 48;
    int max_iter = 60;
    double step_size = 0.05;
    double lambda_min = 0.1;
    FemOptions fem{24, 96, false};
};

struct GriddedReconstructionResult {
    ConductivityField sigma;
    std::vector<double> residual_history;  // Frobenius norm of the table residual
    int iterations = 0;
};

GriddedReconstructionResult gridded_reconstruct(const ContractedGPTTable& targets, double R,
                                                const GriddedReconstructionConfig& config = {});

}  // namespace gptlab
