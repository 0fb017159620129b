// SPDX-License-Identifier: Apache-2.0

#ifndef HESTON_VARIANCE_SWAP_HPP
#define HESTON_VARIANCE_SWAP_HPP

#include "heston/fisher.hpp"
#include "heston/types.hpp"

#include <Eigen/Dense>

#include <vector>

namespace heston {

// Swap horizon bundled with the variance-process parameters; the VIX-style
// strike uses T = 30/365.
struct SwapParams {
    double horizon;
    ModelParams params;

    SwapParams(double horizon, ModelParams params) : horizon(horizon), params(params) {
        if (!(horizon > 0.0)) throw ConfigError("horizon must be > 0");
    }
};

// Conditional expectation of the variance at time t given v0 at time 0.
double expected_variance(double v0, double t, const ModelParams& p);

// Expected total variance over [0, t]: the time integral of
// expected_variance.
double integrated_variance(double v0, double t, const ModelParams& p);

// Fair strike volatility of a variance swap over horizon T:
// K_var^2 = (v0 - theta) * (1 - e^{-kappa T}) / (kappa T) + theta.
double kvar(double v0, const ModelParams& p, double T);

// Inverse map: the v0 whose swap strike equals k.
double kvar_inverse(double k, const ModelParams& p, double T);

// Jacobian of the change of coordinates from (K_var,t per day) + shared to
// (sigma_t per day) + shared. Block upper-triangular: the day block is
// diagonal, shared coordinates map to themselves, and sigma_t depends on
// the shared (kappa, sqrt_theta) through the inverse strike map.
struct KvarJacobian {
    Eigen::VectorXd diag;  // d sigma_t / d K_var,t
    Eigen::MatrixXd cross; // m x 4: d sigma_t / d (kappa, sqrt_theta, sigma, rho)
    std::vector<char> singular; // days with sigma_t = 0

    Eigen::Index days() const { return diag.size(); }
    Eigen::MatrixXd dense() const; // [[diag, cross], [0, I]]
};

KvarJacobian kvar_jacobian(const std::vector<double>& sigmas, const ModelParams& p, double T);

// Per-day swap strikes with their uncertainty bands in strike units.
struct VarSwapSeries {
    std::vector<double> kvar;
    std::vector<double> beta;
    std::vector<double> relative; // beta / kvar
    std::array<double, 4> shared_se;
    bool shared_reliable = true;
};

// Transforms the panel information matrix into swap-strike coordinates
// (J -> D^T J D) exploiting the arrow structure on both sides, then
// inverts through the same Schur path and emits bands.
VarSwapSeries transform_fisher(const BlockFisher& bf, const KvarJacobian& D,
                               const std::vector<double>& sigmas, const SwapParams& sp);

// The transformed BlockFisher itself, for dense cross-checking.
BlockFisher transform_block(const BlockFisher& bf, const KvarJacobian& D);

} // namespace heston

#endif // HESTON_VARIANCE_SWAP_HPP
