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
// Monte Carlo machinery for vector mixtures: antithetic pair sampling,
// fixed-size chunks with derived seeds (so results do not depend on the
// thread count), and Welford moments merged in chunk order.

#pragma once

#include "mixture.hpp"
#include "rng.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace secrecy
{

using SmallVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;
using SmallMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;

/// Running mean and scatter of a feature vector (one entry per antithetic pair).
struct Moments
{
    Vector mean;
    Matrix m2;
    std::size_t n = 0;

    explicit Moments(Eigen::Index k = 0) : mean(Vector::Zero(k)), m2(Matrix::Zero(k, k)) {}

    void add(const Vector &f)
    {
        ++n;
        const Vector d = f - mean;
        mean += d / static_cast<double>(n);
        m2.noalias() += d * (f - mean).transpose();
    }

    void merge(const Moments &o)
    {
        if (o.n == 0)
            return;
        if (n == 0)
        {
            *this = o;
            return;
        }
        const double na = static_cast<double>(n), nb = static_cast<double>(o.n), nt = na + nb;
        const Vector d = o.mean - mean;
        mean += d * (nb / nt);
        m2 += o.m2 + d * d.transpose() * (na * nb / nt);
        n += o.n;
    }

    Matrix covariance() const { return n > 1 ? Matrix(m2 / static_cast<double>(n - 1)) : Matrix(m2 * 0.0); }

    /// Standard error of a^T mean.
    double stderr_of(const Vector &a) const
    {
        if (n < 2)
            return std::numeric_limits<double>::infinity();
        const double v = a.dot(covariance() * a);
        return std::sqrt(std::max(0.0, v) / static_cast<double>(n));
    }

    double stderr_at(Eigen::Index i) const
    {
        Vector a = Vector::Zero(mean.size());
        a(i) = 1.0;
        return stderr_of(a);
    }
};

inline constexpr std::size_t mc_chunk_pairs = 8192;

/// Runs `pair_fn(NormalSource&, Vector& features)` once per antithetic pair.
/// Chunks use seeds derived from (seed, chunk index) and merge in index order.
template <class PairFn>
Moments run_pairs(std::size_t samples, std::uint64_t seed, Eigen::Index features, const PairFn &pair_fn)
{
    const std::size_t pairs = std::max<std::size_t>(2, samples / 2);
    const std::size_t chunks = (pairs + mc_chunk_pairs - 1) / mc_chunk_pairs;
    std::vector<Moments> parts(chunks, Moments(features));
    auto work = [&](std::size_t c) {
        NormalSource g(derive_seed(seed, c));
        Vector f(features);
        const std::size_t lo = c * mc_chunk_pairs;
        const std::size_t hi = std::min(pairs, lo + mc_chunk_pairs);
        for (std::size_t i = lo; i < hi; ++i)
        {
            pair_fn(g, f);
            parts[c].add(f);
        }
    };
    const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t threads = std::min(hw, chunks);
    if (threads <= 1)
    {
        for (std::size_t c = 0; c < chunks; ++c)
            work(c);
    }
    else
    {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (std::size_t c = next++; c < chunks; c = next++)
                    work(c);
            });
        for (auto &th : pool)
            th.join();
    }
    Moments out(features);
    for (const auto &p : parts)
        out.merge(p);
    return out;
}

/// Draws antithetic pairs from a mixture: a shared branch and component, then
/// mean +/- F z with F the symmetric square root of the component covariance.
class MixtureSampler
{
  public:
    explicit MixtureSampler(const VectorMixture &x) : dim_(x.dim())
    {
        double acc = 0.0;
        for (const auto &b : x.branches)
        {
            acc += b.prob;
            branch_cum_.push_back(acc);
            std::vector<double> cum;
            std::vector<Comp> comps;
            double ac = 0.0;
            for (const auto &c : b.components)
            {
                ac += c.w;
                cum.push_back(ac);
                comps.push_back({SmallVec(c.mean), SmallMat(psd_sqrt(c.cov))});
            }
            comp_cum_.push_back(std::move(cum));
            comps_.push_back(std::move(comps));
        }
    }

    Eigen::Index dim() const { return dim_; }

    /// Returns the branch; fills x[0], x[1] (antithetic) and the standard normal draw z.
    std::size_t draw_pair(NormalSource &g, SmallVec (&x)[2]) const
    {
        const std::size_t u = pick(branch_cum_, g.uniform());
        const std::size_t c = pick(comp_cum_[u], g.uniform());
        const Comp &k = comps_[u][c];
        SmallVec z(dim_);
        for (Eigen::Index i = 0; i < dim_; ++i)
            z(i) = g();
        const SmallVec fz = k.factor * z;
        x[0] = k.mean + fz;
        x[1] = k.mean - fz;
        return u;
    }

  private:
    struct Comp
    {
        SmallVec mean;
        SmallMat factor;
    };

    static std::size_t pick(const std::vector<double> &cum, double u)
    {
        const double target = u * cum.back();
        const auto it = std::upper_bound(cum.begin(), cum.end(), target);
        return std::min<std::size_t>(static_cast<std::size_t>(it - cum.begin()), cum.size() - 1);
    }

    Eigen::Index dim_;
    std::vector<double> branch_cum_;
    std::vector<std::vector<double>> comp_cum_;
    std::vector<std::vector<Comp>> comps_;
};

/// Exact log-density and score of each branch of a mixture with a density.
class MixtureDensity
{
  public:
    explicit MixtureDensity(const VectorMixture &y, const Tolerance &tol = {}) : dim_(y.dim())
    {
        if (!y.has_density(tol))
            throw PreconditionError("degenerate density: a component covariance is singular");
        const double log2pi = std::log(2.0 * M_PI);
        for (const auto &b : y.branches)
        {
            std::vector<Comp> comps;
            for (const auto &c : b.components)
                comps.push_back({std::log(c.w) - 0.5 * (logdet(c.cov) + static_cast<double>(dim_) * log2pi),
                                 SmallVec(c.mean), SmallMat(spd_inverse(c.cov))});
            comps_.push_back(std::move(comps));
        }
    }

    Eigen::Index dim() const { return dim_; }

    /// log p(y | u); the score d/dy log p(y | u) is written when requested.
    double log_density(std::size_t u, const SmallVec &y, SmallVec *score = nullptr) const
    {
        const auto &comps = comps_[u];
        double top = -std::numeric_limits<double>::infinity();
        double exps[64];
        const std::size_t k = comps.size();
        std::vector<double> heap;
        double *e = exps;
        if (k > 64)
        {
            heap.resize(k);
            e = heap.data();
        }
        for (std::size_t i = 0; i < k; ++i)
        {
            const SmallVec d = y - comps[i].mean;
            e[i] = comps[i].log_norm - 0.5 * d.dot(comps[i].inv * d);
            top = std::max(top, e[i]);
        }
        double sum = 0.0;
        for (std::size_t i = 0; i < k; ++i)
        {
            e[i] = std::exp(e[i] - top);
            sum += e[i];
        }
        if (score)
        {
            score->setZero(dim_);
            for (std::size_t i = 0; i < k; ++i)
                *score -= (e[i] / sum) * (comps[i].inv * (y - comps[i].mean));
        }
        return top + std::log(sum);
    }

  private:
    struct Comp
    {
        double log_norm;
        SmallVec mean;
        SmallMat inv;
    };
    Eigen::Index dim_;
    std::vector<std::vector<Comp>> comps_;
};

/// Fisher information matrix estimate with per-entry scatter for error bars.
struct FisherEstimate
{
    Matrix value;
    Moments moments; ///< features: vec(rho rho^T) averaged over each pair

    /// Standard error of tr(A^T J) for a fixed matrix A.
    double stderr_of(const Matrix &a) const
    {
        return moments.stderr_of(Eigen::Map<const Vector>(a.data(), a.size()));
    }

    /// Standard error of v^T J v.
    double stderr_quadratic(const Vector &v) const { return stderr_of(v * v.transpose()); }
};

namespace detail
{
inline void require_vector_dim(const VectorMixture &x)
{
    if (static_cast<std::size_t>(x.dim()) > max_vector_dim)
        throw PreconditionError("vector estimators support dimension at most " + std::to_string(max_vector_dim));
}
} // namespace detail

/// h(Y | U) by Monte Carlo.
inline Estimate mc_entropy(const VectorMixture &y, const EstimatorConfig &cfg, std::uint64_t stream = 0)
{
    y.validate();
    cfg.validate();
    const MixtureSampler sampler(y);
    const MixtureDensity dens(y);
    const Moments m = run_pairs(cfg.mc_samples, derive_seed(cfg.seed, stream), 1, [&](NormalSource &g, Vector &f) {
        SmallVec x[2];
        const std::size_t u = sampler.draw_pair(g, x);
        f(0) = -0.5 * (dens.log_density(u, x[0]) + dens.log_density(u, x[1]));
    });
    return {m.mean(0), m.stderr_at(0)};
}

/// J(Y | U) = E[rho rho^T] by Monte Carlo with exact mixture scores.
inline FisherEstimate mc_fisher(const VectorMixture &y, const EstimatorConfig &cfg, std::uint64_t stream = 0)
{
    y.validate();
    cfg.validate();
    const MixtureSampler sampler(y);
    const MixtureDensity dens(y);
    const Eigen::Index d = y.dim();
    FisherEstimate out;
    out.moments = run_pairs(cfg.mc_samples, derive_seed(cfg.seed, stream), d * d, [&](NormalSource &g, Vector &f) {
        SmallVec x[2], s0, s1;
        const std::size_t u = sampler.draw_pair(g, x);
        dens.log_density(u, x[0], &s0);
        dens.log_density(u, x[1], &s1);
        const SmallMat o = 0.5 * (s0 * s0.transpose() + s1 * s1.transpose());
        f = Eigen::Map<const Vector>(o.data(), d * d);
    });
    out.value = symmetrize(Eigen::Map<const Matrix>(out.moments.mean.data(), d, d));
    return out;
}

} // namespace secrecy
