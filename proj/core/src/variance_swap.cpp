// SPDX-License-Identifier: Apache-2.0

#include "heston/variance_swap.hpp"

#include "heston/errors.hpp"

#include <cmath>
#include <limits>

namespace heston {

namespace {

// (1 - e^{-kappa t}) / (kappa t), the averaging weight; in (0, 1) for
// kappa, t > 0 and -> 1 as kappa t -> 0.
double decay_weight(double kappa, double t) {
    const double kt = kappa * t;
    return -std::expm1(-kt) / kt;
}

} // namespace

double expected_variance(double v0, double t, const ModelParams& p) {
    if (!(v0 >= 0.0)) throw ConfigError("v0 must be >= 0");
    if (!(t >= 0.0)) throw ConfigError("t must be >= 0");
    return (v0 - p.theta) * std::exp(-p.kappa * t) + p.theta;
}

double integrated_variance(double v0, double t, const ModelParams& p) {
    if (!(v0 >= 0.0)) throw ConfigError("v0 must be >= 0");
    if (!(t >= 0.0)) throw ConfigError("t must be >= 0");
    return -(v0 - p.theta) * std::expm1(-p.kappa * t) / p.kappa + p.theta * t;
}

double kvar(double v0, const ModelParams& p, double T) {
    if (!(T > 0.0)) throw ConfigError("horizon must be > 0");
    if (!(v0 >= 0.0)) throw ConfigError("v0 must be >= 0");
    const double k2 = (v0 - p.theta) * decay_weight(p.kappa, T) + p.theta;
    if (!(k2 >= 0.0)) throw DomainError("negative squared swap strike", v0, 0.0);
    return std::sqrt(k2);
}

double kvar_inverse(double k, const ModelParams& p, double T) {
    if (!(T > 0.0)) throw ConfigError("horizon must be > 0");
    if (!(k >= 0.0)) throw ConfigError("strike must be >= 0");
    const double v0 = (k * k - p.theta) / decay_weight(p.kappa, T) + p.theta;
    if (!(v0 >= 0.0))
        throw DomainError("strike is below the attainable range", k, 0.0);
    return v0;
}

KvarJacobian kvar_jacobian(const std::vector<double>& sigmas, const ModelParams& p, double T) {
    if (!(T > 0.0)) throw ConfigError("horizon must be > 0");
    const Eigen::Index m = static_cast<Eigen::Index>(sigmas.size());
    KvarJacobian D;
    D.diag = Eigen::VectorXd::Zero(m);
    D.cross = Eigen::MatrixXd::Zero(m, 4);
    D.singular.assign(sigmas.size(), 0);

    const double kt = p.kappa * T;
    const double em = std::exp(-kt);
    const double one_em = -std::expm1(-kt); // 1 - e^{-kT}

    for (Eigen::Index i = 0; i < m; ++i) {
        const double s = sigmas[static_cast<std::size_t>(i)];
        if (!(s > 0.0)) {
            D.singular[static_cast<std::size_t>(i)] = 1;
            continue;
        }
        const double K = kvar(s * s, p, T);
        const double K2 = K * K;
        D.diag(i) = (1.0 / s) * K * kt / one_em;
        D.cross(i, 0) =
            ((K2 - p.theta) * T / (2.0 * s)) * (1.0 - (1.0 + kt) * em) / (one_em * one_em);
        D.cross(i, 1) = (std::sqrt(p.theta) / s) * (1.0 - kt / one_em);
    }
    return D;
}

Eigen::MatrixXd KvarJacobian::dense() const {
    const Eigen::Index m = days();
    Eigen::MatrixXd full = Eigen::MatrixXd::Zero(m + 4, m + 4);
    full.topLeftCorner(m, m).diagonal() = diag;
    full.topRightCorner(m, 4) = cross;
    full.bottomRightCorner(4, 4) = Eigen::Matrix4d::Identity();
    return full;
}

BlockFisher transform_block(const BlockFisher& bf, const KvarJacobian& D) {
    if (bf.days() != D.days()) throw ConfigError("day counts do not match");
    const Eigen::Index m = bf.days();

    // With J = [[diag(a), B], [B^T, A22]] and D = [[g, H], [0, I]],
    // D^T J D keeps the arrow shape:
    //   day diagonal  g_i^2 a_i
    //   coupling rows g_i (a_i H_i + B_i)
    //   shared block  H^T diag(a) H + H^T B + B^T H + A22.
    BlockFisher out;
    out.noise_variance = bf.noise_variance;
    out.a11 = Eigen::VectorXd::Zero(m);
    out.a12 = Eigen::MatrixXd::Zero(m, 4);
    out.a22 = bf.a22;

    for (Eigen::Index i = 0; i < m; ++i) {
        const double g = D.diag(i);
        const double a = bf.a11(i);
        const Eigen::RowVector4d B = bf.a12.row(i);
        const Eigen::RowVector4d H = D.cross.row(i);
        out.a11(i) = g * g * a;
        out.a12.row(i) = g * (a * H + B);
        out.a22 += a * H.transpose() * H + H.transpose() * B + B.transpose() * H;
    }
    return out;
}

VarSwapSeries transform_fisher(const BlockFisher& bf, const KvarJacobian& D,
                               const std::vector<double>& sigmas, const SwapParams& sp) {
    if (static_cast<Eigen::Index>(sigmas.size()) != bf.days())
        throw ConfigError("day count does not match fitted volatility count");
    const BlockFisher tf = transform_block(bf, D);
    const DiagInverse di = invert_block_diagonal_entries(tf);
    constexpr double inf = std::numeric_limits<double>::infinity();

    VarSwapSeries out;
    out.shared_reliable = di.shared_reliable;
    out.kvar.resize(sigmas.size());
    out.beta.resize(sigmas.size());
    out.relative.resize(sigmas.size());
    for (std::size_t i = 0; i < sigmas.size(); ++i) {
        out.kvar[i] = kvar(sigmas[i] * sigmas[i], sp.params, sp.horizon);
        out.beta[i] = std::isfinite(di.day[i]) ? 2.0 * std::sqrt(di.day[i]) : inf;
        out.relative[i] = (out.kvar[i] > 0.0) ? out.beta[i] / out.kvar[i] : inf;
    }
    for (int c = 0; c < 4; ++c)
        out.shared_se[c] = std::isfinite(di.shared[c]) ? std::sqrt(di.shared[c]) : inf;
    return out;
}

} // namespace heston
