// SPDX-License-Identifier: Apache-2.0

#include "heston/fisher.hpp"

#include "heston/errors.hpp"
#include "heston/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace heston {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSchurCondLimit = 1e12;

} // namespace

std::vector<std::string> standard_labels() {
    std::vector<std::string> out;
    for (int t = 0; t < static_cast<int>(kGreekCount); ++t)
        out.emplace_back(greek_label(static_cast<Greek>(t)));
    return out;
}

FisherMatrix fisher_single(const GreekVector& grad, double noise_variance) {
    if (!(noise_variance > 0.0)) throw ConfigError("noise variance must be > 0");
    FisherMatrix out;
    out.labels = standard_labels();
    out.entries.resize(kGreekCount, kGreekCount);
    for (std::size_t i = 0; i < kGreekCount; ++i)
        for (std::size_t j = 0; j < kGreekCount; ++j)
            out.entries(i, j) = grad[i] * grad[j] / noise_variance;
    return out;
}

FisherMatrix fisher_aggregate(const std::vector<FisherMatrix>& list) {
    FisherMatrix out;
    out.labels = standard_labels();
    out.entries = Eigen::MatrixXd::Zero(kGreekCount, kGreekCount);
    for (const FisherMatrix& f : list) {
        if (f.labels != out.labels) throw ConfigError("information labels do not match");
        out.entries += f.entries;
    }
    return out;
}

DayGradients chain_gradients(const DayChain& chain, const ModelParams& p, double v,
                             const FrftConfig& cfg, double node_tol) {
    DayGradients out;
    out.per_option.resize(chain.quotes.size());

    // Bucket quote indices by (epsilon, maturity) so each bucket costs one
    // batch of five transforms regardless of its strike count.
    struct Key {
        int epsilon;
        double tau;
        bool operator==(const Key& o) const { return epsilon == o.epsilon && tau == o.tau; }
    };
    std::vector<Key> keys;
    std::vector<std::vector<std::size_t>> members;
    for (std::size_t qi = 0; qi < chain.quotes.size(); ++qi) {
        const Key k{chain.quotes[qi].spec.epsilon, chain.quotes[qi].spec.maturity};
        auto it = std::find(keys.begin(), keys.end(), k);
        if (it == keys.end()) {
            keys.push_back(k);
            members.emplace_back();
            it = keys.end() - 1;
        }
        members[static_cast<std::size_t>(it - keys.begin())].push_back(qi);
    }

    for (std::size_t bk = 0; bk < keys.size(); ++bk) {
        const auto grids = greek_grids(keys[bk].epsilon, keys[bk].tau, cfg, p, chain.state, v);
        for (std::size_t qi : members[bk]) {
            const OptionSpec& spec = chain.quotes[qi].spec;
            if (grids[0].grid.node_distance(spec.log_strike) < node_tol) {
                const std::size_t u = grids[0].grid.nearest_index(spec.log_strike);
                for (std::size_t t = 0; t < kGreekCount; ++t)
                    out.per_option[qi][t] = grids[t].values[u];
            } else {
                out.per_option[qi] = greeks_direct(spec, p, chain.state, v, cfg.alpha,
                                                   QuadratureConfig::for_spot(chain.state.spot));
            }
        }
    }
    return out;
}

BlockFisher assemble_block_fisher(const std::vector<DayGradients>& days, double noise_variance,
                                  FisherMode mode) {
    if (!(noise_variance > 0.0)) throw ConfigError("noise variance must be > 0");
    const Eigen::Index m = static_cast<Eigen::Index>(days.size());
    BlockFisher bf;
    bf.noise_variance = noise_variance;
    bf.a11 = Eigen::VectorXd::Zero(m);
    bf.a12 = Eigen::MatrixXd::Zero(m, 4);
    bf.a22 = Eigen::Matrix4d::Zero();

    for (Eigen::Index i = 0; i < m; ++i) {
        const auto& opts = days[static_cast<std::size_t>(i)].per_option;
        if (opts.empty()) throw DayError("empty option chain in information assembly",
                                         "day index " + std::to_string(i));
        if (mode == FisherMode::SummedChain) {
            GreekVector sum{};
            for (const GreekVector& g : opts)
                for (std::size_t t = 0; t < kGreekCount; ++t) sum[t] += g[t];
            bf.a11(i) = sum[0] * sum[0];
            for (int c = 0; c < 4; ++c) bf.a12(i, c) = sum[0] * sum[c + 1];
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 4; ++c) bf.a22(r, c) += sum[r + 1] * sum[c + 1];
        } else {
            for (const GreekVector& g : opts) {
                bf.a11(i) += g[0] * g[0];
                for (int c = 0; c < 4; ++c) bf.a12(i, c) += g[0] * g[c + 1];
                for (int r = 0; r < 4; ++r)
                    for (int c = 0; c < 4; ++c) bf.a22(r, c) += g[r + 1] * g[c + 1];
            }
        }
    }
    return bf;
}

BlockFisher assemble_block_fisher(const std::vector<DayChain>& days,
                                  const std::vector<double>& variances, const ModelParams& p,
                                  double noise_variance, FisherMode mode, const FrftConfig& cfg) {
    if (days.size() != variances.size())
        throw ConfigError("day count does not match fitted variance count");
    std::vector<DayGradients> grads(days.size());
    parallel_for(days.size(), [&](std::size_t d) {
        if (days[d].quotes.empty())
            throw DayError("empty option chain in information assembly", days[d].state.date.iso());
        grads[d] = chain_gradients(days[d], p, variances[d], cfg);
    });
    return assemble_block_fisher(grads, noise_variance, mode);
}

Eigen::MatrixXd BlockFisher::dense() const {
    const Eigen::Index m = days();
    Eigen::MatrixXd full = Eigen::MatrixXd::Zero(m + 4, m + 4);
    full.topLeftCorner(m, m).diagonal() = a11;
    full.topRightCorner(m, 4) = a12;
    full.bottomLeftCorner(4, m) = a12.transpose();
    full.bottomRightCorner(4, 4) = a22;
    return full / noise_variance;
}

DiagInverse invert_block_diagonal_entries(const BlockFisher& bf) {
    const Eigen::Index m = bf.days();
    const double vh = bf.noise_variance;
    DiagInverse out;
    out.day.assign(static_cast<std::size_t>(m), kInf);
    out.shared = {kInf, kInf, kInf, kInf};

    // Schur complement of the day-diagonal block; zero-information days
    // contribute nothing (their coupling rows vanish identically).
    Eigen::Matrix4d S = bf.a22;
    for (Eigen::Index i = 0; i < m; ++i) {
        if (bf.a11(i) <= 0.0) continue;
        const Eigen::RowVector4d b = bf.a12.row(i);
        S -= b.transpose() * b / bf.a11(i);
    }

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(S);
    const double lmin = es.eigenvalues().minCoeff();
    const double lmax = es.eigenvalues().maxCoeff();
    out.schur_condition = (lmin > 0.0) ? lmax / lmin : kInf;
    out.shared_reliable = lmin > 0.0 && out.schur_condition <= kSchurCondLimit;

    if (!out.shared_reliable) {
        for (Eigen::Index i = 0; i < m; ++i)
            if (bf.a11(i) > 0.0) out.day[static_cast<std::size_t>(i)] = vh / bf.a11(i);
        return out;
    }

    const Eigen::Matrix4d Sinv = S.inverse();
    for (int c = 0; c < 4; ++c) out.shared[c] = vh * Sinv(c, c);
    for (Eigen::Index i = 0; i < m; ++i) {
        if (bf.a11(i) <= 0.0) continue;
        const double a = bf.a11(i);
        const Eigen::RowVector4d b = bf.a12.row(i);
        out.day[static_cast<std::size_t>(i)] = vh * (1.0 / a + (b * Sinv * b.transpose())(0) / (a * a));
    }
    return out;
}

CredibilityBand credibility_bands(const DiagInverse& di, const std::vector<double>& sigmas) {
    if (di.day.size() != sigmas.size())
        throw ConfigError("day count does not match fitted volatility count");
    CredibilityBand out;
    out.shared_reliable = di.shared_reliable;
    out.beta.resize(di.day.size());
    out.relative.resize(di.day.size());
    for (std::size_t i = 0; i < di.day.size(); ++i) {
        out.beta[i] = std::isfinite(di.day[i]) ? 2.0 * std::sqrt(di.day[i]) : kInf;
        out.relative[i] = (sigmas[i] > 0.0) ? out.beta[i] / sigmas[i] : kInf;
    }
    for (int c = 0; c < 4; ++c)
        out.shared_se[c] = std::isfinite(di.shared[c]) ? std::sqrt(di.shared[c]) : kInf;
    return out;
}

LemmaBound lemma_lower_bound(const FisherMatrix& J) {
    const Eigen::Index n = J.entries.rows();
    if (J.entries.cols() != n) throw ConfigError("information matrix must be square");
    LemmaBound out;
    out.reciprocal_diag.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        out.reciprocal_diag[static_cast<std::size_t>(i)] =
            (J.entries(i, i) > 0.0) ? 1.0 / J.entries(i, i) : kInf;

    Eigen::FullPivLU<Eigen::MatrixXd> lu(J.entries);
    if (!lu.isInvertible()) {
        out.inverse_available = false;
        return out;
    }
    const Eigen::MatrixXd inv = lu.inverse();
    out.inverse_diag.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        out.inverse_diag[static_cast<std::size_t>(i)] = inv(i, i);
    return out;
}

bool is_psd(const Eigen::MatrixXd& m, double tol_rel) {
    if (m.rows() != m.cols()) return false;
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    const double scale = std::max(m.cwiseAbs().maxCoeff(), 1e-300);
    if (asym > 1e-12 * scale) return false;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()));
    const double lmax = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
    return es.eigenvalues().minCoeff() >= -tol_rel * lmax;
}

} // namespace heston
