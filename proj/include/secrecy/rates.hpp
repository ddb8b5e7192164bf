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
// Secrecy-rate evaluation. All rates are in nats.
//
// Orders are 0-based permutations: order[k] is the user placed at position k.
// Position 0 is encoded last and sees no interference; the user at position k
// treats the signals at positions 0..k-1 as noise.

#pragma once

#include "channel.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <vector>

namespace secrecy
{

using Permutation = std::vector<std::size_t>;

struct CovariancePartition
{
    std::vector<Matrix> parts;

    std::size_t size() const { return parts.size(); }

    Matrix total(Eigen::Index n) const
    {
        Matrix sum = Matrix::Zero(n, n);
        for (const auto &k : parts)
            sum += k;
        return sum;
    }

    static CovariancePartition zeros(std::size_t users, Eigen::Index n)
    {
        return {std::vector<Matrix>(users, Matrix::Zero(n, n))};
    }
};

/// Checks K_i >= 0 and sum K_i <= S; returns violations instead of throwing.
inline Diagnostics validate_partition(const CovariancePartition &p, const Matrix &s, std::size_t users,
                                      const Tolerance &tol = {})
{
    Diagnostics d;
    const Eigen::Index n = s.rows();
    if (p.size() != users)
    {
        d.violations.push_back({"partition has " + std::to_string(p.size()) + " parts, expected " +
                                    std::to_string(users),
                                0.0});
        return d;
    }
    for (std::size_t k = 0; k < p.size(); ++k)
    {
        if (p.parts[k].rows() != n || p.parts[k].cols() != n)
        {
            d.violations.push_back({"K[" + std::to_string(k + 1) + "] dimension differs from S", 0.0});
            return d;
        }
        const double lo = min_eigenvalue(p.parts[k]);
        if (lo < -tol.psd_tol * (1.0 + max_abs_eigenvalue(p.parts[k])))
            d.violations.push_back({"K[" + std::to_string(k + 1) + "] is not positive semi-definite", lo});
    }
    const Matrix sum = p.total(n);
    if (!loewner_leq(sum, s, tol))
        d.violations.push_back({"sum of K exceeds S", loewner_margin(sum, s)});
    return d;
}

struct RatePoint
{
    std::vector<double> rates;                       ///< indexed by user
    std::optional<std::vector<double>> dummy_rates;  ///< indexed by user
    Permutation order;

    double weighted_sum(const std::vector<double> &mu) const
    {
        double s = 0.0;
        for (std::size_t k = 0; k < rates.size(); ++k)
            s += mu[k] * rates[k];
        return s;
    }
};

inline Permutation identity_order(std::size_t users)
{
    Permutation p(users);
    std::iota(p.begin(), p.end(), std::size_t{0});
    return p;
}

inline void require_permutation(const Permutation &pi, std::size_t users)
{
    if (pi.size() != users)
        throw PreconditionError("order must list each of the " + std::to_string(users) + " users once");
    std::vector<bool> seen(users, false);
    for (std::size_t u : pi)
    {
        if (u >= users || seen[u])
            throw PreconditionError("order is not a permutation");
        seen[u] = true;
    }
}

inline std::pair<double, double> siso_rates(const SisoChannel &ch, double alpha)
{
    require(alpha >= 0.0 && alpha <= 1.0, "siso_rates: alpha must lie in [0,1]");
    const double ap = alpha * ch.power;
    const double bp = (1.0 - alpha) * ch.power;
    const double r1 = 0.5 * std::log1p(ap / ch.sigma1_sq) - 0.5 * std::log1p(ap / ch.sigmaZ_sq);
    const double r2 = 0.5 * std::log1p(bp / (ap + ch.sigma2_sq)) - 0.5 * std::log1p(bp / (ap + ch.sigmaZ_sq));
    return {r1, r2};
}

namespace detail
{
// Effective covariance H P H^T + Sigma; H empty means identity gain.
inline Matrix received(const Matrix &h, const Matrix &prefix, const Matrix &sigma)
{
    if (h.size() == 0)
        return prefix + sigma;
    return h * prefix * h.transpose() + sigma;
}

// 1/2 log |H P_k H^T + Sigma| / |H P_{k-1} H^T + Sigma|
inline double increment(const Matrix &h, const Matrix &prev, const Matrix &next, const Matrix &sigma)
{
    return 0.5 * (logdet(received(h, next, sigma)) - logdet(received(h, prev, sigma)));
}

struct DpcTerms
{
    std::vector<double> decodable; // per user
    std::vector<double> leaked;    // per user: the eavesdropper increment (dummy rate)
};

inline DpcTerms dpc_terms(const Matrix &s, const std::vector<Matrix> &gains, const std::vector<Matrix> &sigmas,
                          const Matrix &gain_z, const Matrix &sigma_z, const CovariancePartition &p,
                          const Permutation &pi)
{
    const std::size_t users = sigmas.size();
    require_permutation(pi, users);
    require_dims(p.size() == users, "partition size vs number of users");
    const Eigen::Index n = s.rows();
    for (const auto &k : p.parts)
        require_dims(k.rows() == n && k.cols() == n, "partition part vs S");

    DpcTerms out{std::vector<double>(users, 0.0), std::vector<double>(users, 0.0)};
    Matrix prev = Matrix::Zero(n, n);
    for (std::size_t pos = 0; pos < users; ++pos)
    {
        const std::size_t u = pi[pos];
        const Matrix next = prev + p.parts[u];
        const Matrix &h = gains.empty() ? Matrix() : gains[u];
        out.decodable[u] = increment(h, prev, next, sigmas[u]);
        out.leaked[u] = increment(gain_z, prev, next, sigma_z);
        prev = next;
    }
    return out;
}

inline RatePoint assemble(const DpcTerms &t, const Permutation &pi)
{
    RatePoint rp;
    rp.order = pi;
    rp.rates.resize(t.decodable.size());
    for (std::size_t u = 0; u < rp.rates.size(); ++u)
        rp.rates[u] = t.decodable[u] - t.leaked[u];
    rp.dummy_rates = t.leaked;
    return rp;
}
} // namespace detail

/// Secrecy rates with the natural (strongest-first) superposition order.
inline RatePoint degraded_rates(const DegradedChannel &ch, const CovariancePartition &p, const Tolerance &tol = {})
{
    const Diagnostics d = validate_partition(p, ch.s, ch.users(), tol);
    if (!d.ok())
        throw PreconditionError("degraded_rates: " + d.violations.front().what);
    const Permutation pi = identity_order(ch.users());
    RatePoint rp = detail::assemble(detail::dpc_terms(ch.s, {}, ch.sigmas, Matrix(), ch.sigma_z, p, pi), pi);
    rp.dummy_rates.reset();
    return rp;
}

inline RatePoint dpc_rates_aligned(const AlignedChannel &ch, const CovariancePartition &p, const Permutation &pi)
{
    return detail::assemble(detail::dpc_terms(ch.s, {}, ch.sigmas, Matrix(), ch.sigma_z, p, pi), pi);
}

inline RatePoint dpc_rates_general(const GeneralChannel &ch, const CovariancePartition &p, const Permutation &pi)
{
    require_dims(ch.gains.size() == ch.users(), "one gain matrix per receiver");
    return detail::assemble(detail::dpc_terms(ch.s, ch.gains, ch.sigmas, ch.gain_z, ch.sigma_z, p, pi), pi);
}

inline std::vector<double> dummy_rates(const AlignedChannel &ch, const CovariancePartition &p, const Permutation &pi)
{
    return detail::dpc_terms(ch.s, {}, ch.sigmas, Matrix(), ch.sigma_z, p, pi).leaked;
}

inline std::vector<double> dummy_rates(const GeneralChannel &ch, const CovariancePartition &p, const Permutation &pi)
{
    return detail::dpc_terms(ch.s, ch.gains, ch.sigmas, ch.gain_z, ch.sigma_z, p, pi).leaked;
}

/// Rates each legitimate receiver can decode (secret plus dummy), per user.
inline std::vector<double> decodable_rates(const AlignedChannel &ch, const CovariancePartition &p,
                                           const Permutation &pi)
{
    return detail::dpc_terms(ch.s, {}, ch.sigmas, Matrix(), ch.sigma_z, p, pi).decodable;
}

inline std::vector<double> decodable_rates(const GeneralChannel &ch, const CovariancePartition &p,
                                           const Permutation &pi)
{
    return detail::dpc_terms(ch.s, ch.gains, ch.sigmas, ch.gain_z, ch.sigma_z, p, pi).decodable;
}

/// 1/2 log |H_Z (sum K) H_Z^T + Sigma_Z| / |Sigma_Z|: what the dummy rates must add up to.
inline double eavesdropper_total(const GeneralChannel &ch, const CovariancePartition &p)
{
    const Matrix sum = p.total(ch.dim());
    return 0.5 * (logdet(detail::received(ch.gain_z, sum, ch.sigma_z)) - logdet(ch.sigma_z));
}

inline double eavesdropper_total(const AlignedChannel &ch, const CovariancePartition &p)
{
    return 0.5 * (logdet(p.total(ch.dim()) + ch.sigma_z) - logdet(ch.sigma_z));
}

} // namespace secrecy
