// SPDX-License-Identifier: Apache-2.0

#ifndef HESTON_FISHER_HPP
#define HESTON_FISHER_HPP

#include "heston/calibration.hpp"
#include "heston/greeks.hpp"

#include <Eigen/Dense>

#include <array>
#include <string>
#include <vector>

namespace heston {

// Fisher information of the Gaussian observation model, labeled by
// parameter. Entries carry the 1/noise-variance scale.
struct FisherMatrix {
    std::vector<std::string> labels;
    Eigen::MatrixXd entries;
};

// Default five-parameter label set (sigma0, kappa, sqrt_theta, sigma, rho).
std::vector<std::string> standard_labels();

// Rank-one information of a single option: grad * grad^T / noise_variance.
FisherMatrix fisher_single(const GreekVector& grad, double noise_variance);

// Entrywise sum; labels must agree. An empty list yields the 5x5 zero
// matrix with standard labels.
FisherMatrix fisher_aggregate(const std::vector<FisherMatrix>& list);

// Full parameter vector of the panel likelihood: per-day volatilities
// concatenated with the shared (kappa, sqrt_theta, sigma, rho).
struct TimeSeriesTheta {
    std::vector<double> sigmas;
    std::array<double, 4> shared;
};

// How per-day information is accumulated. SummedChain treats the sum of a
// day's option prices as a single composite observation and squares its
// gradient; PerOption sums the outer product of each option's gradient.
// The two differ whenever a day has more than one quote; both are exposed
// and reported so the discrepancy is visible in diagnostics.
enum class FisherMode { SummedChain, PerOption };

// Arrow-shaped information matrix of the panel: day-diagonal block a11,
// day/shared coupling a12, shared block a22, all scaled by 1/v-hat when
// assembled densely.
struct BlockFisher {
    Eigen::VectorXd a11;  // length m
    Eigen::MatrixXd a12;  // m x 4
    Eigen::Matrix4d a22;
    double noise_variance = 1.0;

    Eigen::Index days() const { return a11.size(); }
    Eigen::MatrixXd dense() const;
};

// Per-option price gradients of one day, order (sigma0, kappa, sqrt_theta,
// sigma, rho) with sigma0 the day's own volatility coordinate.
struct DayGradients {
    std::vector<GreekVector> per_option;
};

// Gradients of every quote in the chain at the day's fitted variance.
// Quotes whose strikes sit on the transform grid are read from batched
// sensitivity grids; the rest fall back to adaptive quadrature.
DayGradients chain_gradients(const DayChain& chain, const ModelParams& p, double v,
                             const FrftConfig& cfg, double node_tol = 1e-9);

BlockFisher assemble_block_fisher(const std::vector<DayGradients>& days, double noise_variance,
                                  FisherMode mode);

BlockFisher assemble_block_fisher(const std::vector<DayChain>& days,
                                  const std::vector<double>& variances, const ModelParams& p,
                                  double noise_variance, FisherMode mode, const FrftConfig& cfg);

// Diagonal of the inverse information matrix, computed through the Schur
// complement of the day block; O(m) and never materializes the full
// inverse. Days with zero information carry +inf entries.
struct DiagInverse {
    std::vector<double> day;
    std::array<double, 4> shared;
    bool shared_reliable = true;
    double schur_condition = 0.0;
};

DiagInverse invert_block_diagonal_entries(const BlockFisher& bf);

// Two-standard-error bands: beta_t = 2 * sqrt(diag entry), plus relative
// bands beta_t / sigma_t and the shared-parameter standard errors.
struct CredibilityBand {
    std::vector<double> beta;
    std::vector<double> relative;
    std::array<double, 4> shared_se;
    bool shared_reliable = true;
};

CredibilityBand credibility_bands(const DiagInverse& di, const std::vector<double>& sigmas);

// Both sides of the diagonal-inverse inequality J^{-1}_ii >= 1 / J_ii.
// When J is singular only the cheap reciprocal side is available.
struct LemmaBound {
    std::vector<double> inverse_diag;
    std::vector<double> reciprocal_diag;
    bool inverse_available = true;
};

LemmaBound lemma_lower_bound(const FisherMatrix& J);

// Largest relative asymmetry and smallest eigenvalue (relative to the
// largest) of a symmetric candidate; used by validity checks.
bool is_psd(const Eigen::MatrixXd& m, double tol_rel = 1e-10);

} // namespace heston

#endif // HESTON_FISHER_HPP
