// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
//
// Enhanced (degraded) noise covariances built from a KKT certificate, the
// five-property verification, the degraded extension that also covers
// zero-weight users, and the touching-point test against random search.

#pragma once

#include "boundary.hpp"

#include <array>

namespace secrecy
{

struct EnhancedNoise
{
    std::vector<Matrix> sigmas_tilde; ///< one per positive-weight user, ascending weight
    Permutation positive_users;       ///< user index of each sigmas_tilde entry
    Permutation zero_users;           ///< users with zero weight
    std::vector<double> alphas;       ///< scale of sigmas_tilde[0] for each zero-weight user
};

/// Multipliers with a slightly negative spectrum are projected; anything below
/// this threshold (absolute) rejects the certificate.
inline constexpr double multiplier_psd_slack = 1e-9;

namespace detail
{
inline Matrix checked_multiplier(const Matrix &m, const char *name)
{
    const double lo = min_eigenvalue(m);
    if (lo < -multiplier_psd_slack)
        throw PreconditionError(std::string("enhance: multiplier ") + name + " is indefinite (min eigenvalue " +
                                std::to_string(lo) + ")");
    return lo < 0.0 ? project_psd(m) : symmetrize(m);
}
} // namespace detail

inline EnhancedNoise enhance(const AlignedChannel &ch, const CovariancePartition &p, const KktCertificate &cert,
                             const Weights &mu)
{
    const detail::PositionView v = detail::positions(ch, p, mu);
    const std::size_t m = v.mu.size();
    require_dims(cert.m.size() == m, "certificate multipliers vs positive-weight users");

    EnhancedNoise out;
    out.positive_users = v.order.pi_prime;
    for (std::size_t u : v.order.pi)
        if (mu[u] == 0.0)
            out.zero_users.push_back(u);

    for (std::size_t j = 0; j < m; ++j)
    {
        const Matrix mj = detail::checked_multiplier(cert.m[j], "M_j");
        const Matrix inner = spd_inverse(v.prefix[j] + v.sigmas[j]) + mj / v.mu[j];
        Eigen::LLT<Matrix> llt(symmetrize(inner));
        if (llt.info() != Eigen::Success)
            throw NumericalError("enhance: intermediate matrix is not positive definite");
        out.sigmas_tilde.push_back(symmetrize(spd_inverse(inner) - v.prefix[j]));
    }
    if (!PsdMatrix::trusted(out.sigmas_tilde.front()).is_positive_definite())
        throw NumericalError("enhance: first enhanced noise is not strictly positive definite");

    for (std::size_t u : out.zero_users)
        out.alphas.push_back(std::min(1.0, generalized_min_eigenvalue(ch.sigmas[u], out.sigmas_tilde.front())));
    return out;
}

struct EnhancementReport
{
    /// Residual of each property: Loewner violations for the first two,
    /// Frobenius norms of the matrix identities for the rest.
    std::array<double, 5> residual{};

    double max_residual() const { return *std::max_element(residual.begin(), residual.end()); }
};

inline EnhancementReport verify_enhancement(const AlignedChannel &ch, const CovariancePartition &p,
                                            const KktCertificate &cert, const Weights &mu, const EnhancedNoise &enh)
{
    const detail::PositionView v = detail::positions(ch, p, mu);
    const std::size_t m = v.mu.size();
    require_dims(enh.sigmas_tilde.size() == m && cert.m.size() == m, "enhanced noises vs positive-weight users");
    const Eigen::Index n = ch.dim();
    for (const auto &st : enh.sigmas_tilde)
        require_dims(st.rows() == n && st.cols() == n, "enhanced noise dimension");
    const auto &t = enh.sigmas_tilde;
    auto violation = [](double margin) { return std::max(0.0, -margin); };

    EnhancementReport r;
    for (std::size_t j = 0; j < m; ++j)
        r.residual[0] = std::max(r.residual[0], violation(loewner_margin(t[j], v.sigmas[j])));

    r.residual[1] = violation(min_eigenvalue(t.front()));
    for (std::size_t j = 0; j + 1 < m; ++j)
        r.residual[1] = std::max(r.residual[1], violation(loewner_margin(t[j], t[j + 1])));
    r.residual[1] = std::max(r.residual[1], violation(loewner_margin(t.back(), ch.sigma_z)));

    for (std::size_t j = 0; j < m; ++j)
    {
        const Matrix &pj = v.prefix[j + 1];
        Matrix e;
        if (j + 1 < m)
            e = v.mu[j] * spd_inverse(pj + t[j]) + (v.mu[j + 1] - v.mu[j]) * spd_inverse(pj + v.sigma_z) -
                v.mu[j + 1] * spd_inverse(pj + t[j + 1]);
        else
            e = v.mu[j] * spd_inverse(pj + t[j]) - v.mu[j] * spd_inverse(pj + v.sigma_z) - cert.m_z;
        r.residual[2] = std::max(r.residual[2], e.norm());
    }

    for (std::size_t j = 0; j < m; ++j)
    {
        const Matrix lhs = spd_inverse(v.prefix[j + 1] + t[j]) * (v.prefix[j] + t[j]);
        const Matrix rhs = spd_inverse(v.prefix[j + 1] + v.sigmas[j]) * (v.prefix[j] + v.sigmas[j]);
        r.residual[3] = std::max(r.residual[3], (lhs - rhs).norm());
    }

    const Matrix &pm = v.prefix[m];
    const Matrix lhs = (ch.s + t.back()) * spd_inverse(pm + t.back());
    const Matrix rhs = (ch.s + ch.sigma_z) * spd_inverse(pm + ch.sigma_z);
    r.residual[4] = (lhs - rhs).norm();
    return r;
}

/// Degraded channel whose receivers are the zero-weight users (scaled copies of
/// the first enhanced noise, ascending scale) followed by the positive-weight
/// users in ascending weight. `users` maps each receiver back to its user.
struct DegradedExtension
{
    DegradedChannel channel;
    Permutation users;

    /// Partition rearranged into receiver order.
    CovariancePartition arrange(const CovariancePartition &p) const
    {
        CovariancePartition out;
        for (std::size_t u : users)
            out.parts.push_back(p.parts[u]);
        return out;
    }

    /// sum mu_k R_k on the degraded channel, receiver rates mapped back to users.
    double weighted_sum(const CovariancePartition &p, const Weights &mu) const
    {
        const RatePoint rp = degraded_rates(channel, arrange(p));
        double s = 0.0;
        for (std::size_t r = 0; r < users.size(); ++r)
            s += mu[users[r]] * rp.rates[r];
        return s;
    }
};

inline DegradedExtension build_degraded_extension(const AlignedChannel &ch, const EnhancedNoise &enh)
{
    require(!enh.sigmas_tilde.empty(), "build_degraded_extension: no enhanced noises");
    require_dims(enh.alphas.size() == enh.zero_users.size(), "one scale per zero-weight user");
    for (double a : enh.alphas)
        if (!(a > 0.0))
            throw NumericalError("build_degraded_extension: no feasible scale for a zero-weight user");

    std::vector<std::size_t> idx(enh.zero_users.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return enh.alphas[a] < enh.alphas[b]; });

    DegradedExtension out;
    std::vector<Matrix> sig;
    for (std::size_t i : idx)
    {
        sig.push_back(enh.alphas[i] * enh.sigmas_tilde.front());
        out.users.push_back(enh.zero_users[i]);
    }
    for (std::size_t j = 0; j < enh.sigmas_tilde.size(); ++j)
    {
        sig.push_back(enh.sigmas_tilde[j]);
        out.users.push_back(enh.positive_users[j]);
    }
    out.channel = make_degraded(ch.s, std::move(sig), ch.sigma_z);
    return out;
}

struct TouchingReport
{
    double aligned_value = 0.0;  ///< sum mu_k R_k on the original channel
    double degraded_value = 0.0; ///< the same partition on the enhanced degraded channel
    double search_value = 0.0;   ///< best random partition on the enhanced degraded channel
    double equality_gap = 0.0;   ///< |degraded_value - aligned_value|
    double search_gap = 0.0;     ///< search_value - degraded_value (positive means exceeded)
    bool ok = false;
};

struct SearchOptions
{
    std::size_t samples = 100000;
    std::uint64_t seed = 0x70c4ULL;
    double search_tol = 1e-4;
};

inline TouchingReport touching_point_check(const AlignedChannel &ch, const CovariancePartition &p, const Weights &mu,
                                           const EnhancedNoise &enh, const SearchOptions &opts = {},
                                           const Tolerance &tol = {})
{
    const DegradedExtension ext = build_degraded_extension(ch, enh);
    TouchingReport r;
    r.aligned_value = weighted_objective(ch, p, mu);
    r.degraded_value = ext.weighted_sum(p, mu);
    r.equality_gap = std::abs(r.degraded_value - r.aligned_value);

    const WeightOrder wo = weight_permutation(mu);
    NormalSource g(opts.seed);
    r.search_value = -std::numeric_limits<double>::infinity();
    CovariancePartition cand = CovariancePartition::zeros(ch.users(), ch.dim());
    for (std::size_t i = 0; i < opts.samples; ++i)
    {
        const std::vector<Matrix> parts = sample_partition(ch.s, wo.m, g);
        for (std::size_t j = 0; j < wo.m; ++j)
            cand.parts[wo.pi_prime[j]] = parts[j];
        r.search_value = std::max(r.search_value, ext.weighted_sum(cand, mu));
    }
    r.search_gap = r.search_value - r.degraded_value;
    r.ok = r.equality_gap <= tol.residual_tol && r.search_gap <= opts.search_tol;
    return r;
}

} // namespace secrecy
