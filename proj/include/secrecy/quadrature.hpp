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
// Deterministic scalar estimators: Gauss-Hermite integration against each
// mixture component, closed-form posterior moments, and adaptive
// Gauss-Kronrod for integrals over the noise parameter.

#pragma once

#include "mixture.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <map>
#include <memory>
#include <mutex>

namespace secrecy
{

inline constexpr double half_log_2pi_e = 1.4189385332046727418; // 0.5 * ln(2 pi e)

/// Nodes and weights for the integral of exp(-x^2) f(x) over the real line.
struct GaussHermite
{
    Vector nodes;
    Vector weights;
};

/// Golub-Welsch: eigenvalues of the Jacobi matrix; results cached per size.
inline std::shared_ptr<const GaussHermite> gauss_hermite(std::size_t n)
{
    static std::mutex mu;
    static std::map<std::size_t, std::shared_ptr<const GaussHermite>> cache;
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(n); it != cache.end())
        return it->second;
    require(n >= 1, "gauss_hermite: need at least one node");
    const Eigen::Index k = static_cast<Eigen::Index>(n);
    Vector diag = Vector::Zero(k);
    Vector sub(k > 1 ? k - 1 : 0);
    for (Eigen::Index i = 1; i < k; ++i)
        sub(i - 1) = std::sqrt(0.5 * static_cast<double>(i));
    Eigen::SelfAdjointEigenSolver<Matrix> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    auto gh = std::make_shared<GaussHermite>();
    gh->nodes = es.eigenvalues();
    gh->weights = std::sqrt(M_PI) * es.eigenvectors().row(0).array().square().transpose();
    cache.emplace(n, gh);
    return gh;
}

namespace detail
{
inline double log_normal_pdf(double y, double mean, double var)
{
    const double d = y - mean;
    return -0.5 * (std::log(2.0 * M_PI * var) + d * d / var);
}

// log p(y) and p'(y)/p(y) of one branch, by log-sum-exp.
inline std::pair<double, double> log_density_and_score(const std::vector<ScalarComponent> &comps, double y)
{
    double top = -std::numeric_limits<double>::infinity();
    for (const auto &c : comps)
        top = std::max(top, std::log(c.w) + log_normal_pdf(y, c.mean, c.var));
    double sum = 0.0, dsum = 0.0;
    for (const auto &c : comps)
    {
        const double e = std::exp(std::log(c.w) + log_normal_pdf(y, c.mean, c.var) - top);
        sum += e;
        dsum += e * (-(y - c.mean) / c.var);
    }
    return {top + std::log(sum), dsum / sum};
}

// E[f(Y)] for Y drawn from one branch, one Gauss-Hermite rule per component.
template <class F> double branch_expectation(const std::vector<ScalarComponent> &comps, const GaussHermite &gh, F &&f)
{
    double total = 0.0;
    for (const auto &c : comps)
    {
        const double sd = std::sqrt(2.0 * c.var);
        double acc = 0.0;
        for (Eigen::Index i = 0; i < gh.nodes.size(); ++i)
        {
            if (gh.weights(i) == 0.0)
                continue;
            acc += gh.weights(i) * f(c.mean + sd * gh.nodes(i));
        }
        total += c.w * acc / std::sqrt(M_PI);
    }
    return total;
}

inline void require_density(const ScalarMixture &y)
{
    if (!y.has_density())
        throw PreconditionError("degenerate density: a component has zero variance and no added noise");
}
} // namespace detail

/// h(Y | U) for a scalar mixture with a density.
inline double scalar_entropy(const ScalarMixture &y, const EstimatorConfig &cfg = {})
{
    y.validate();
    detail::require_density(y);
    const auto gh = gauss_hermite(cfg.quad_nodes);
    double h = 0.0;
    for (const auto &b : y.branches)
        h -= b.prob * detail::branch_expectation(b.components, *gh, [&](double v) {
                 return detail::log_density_and_score(b.components, v).first;
             });
    return h;
}

/// J(Y | U) = E[(d/dy log p(Y | U))^2].
inline double scalar_fisher(const ScalarMixture &y, const EstimatorConfig &cfg = {})
{
    y.validate();
    detail::require_density(y);
    const auto gh = gauss_hermite(cfg.quad_nodes);
    double j = 0.0;
    for (const auto &b : y.branches)
        j += b.prob * detail::branch_expectation(b.components, *gh, [&](double v) {
                 const double s = detail::log_density_and_score(b.components, v).second;
                 return s * s;
             });
    return j;
}

/// E[(X - E[X | sqrt(t) X + N, U])^2] from exact mixture posteriors.
inline double scalar_mmse(const ScalarMixture &x, double t, const EstimatorConfig &cfg = {})
{
    x.validate();
    require(t >= 0.0, "mmse: t must be nonnegative");
    if (t == 0.0)
        return x.conditional_variance();
    const auto gh = gauss_hermite(cfg.quad_nodes);
    const double st = std::sqrt(t);
    double total = 0.0;
    for (const auto &b : x.branches)
    {
        // within-component posterior variance averages exactly
        double within = 0.0;
        std::vector<ScalarComponent> obs;
        for (const auto &c : b.components)
        {
            within += c.w * c.var / (t * c.var + 1.0);
            obs.push_back({c.w, st * c.mean, t * c.var + 1.0});
        }
        const double between = detail::branch_expectation(obs, *gh, [&](double y) {
            double top = -std::numeric_limits<double>::infinity();
            for (const auto &o : obs)
                top = std::max(top, std::log(o.w) + detail::log_normal_pdf(y, o.mean, o.var));
            double z = 0.0, m1 = 0.0, m2 = 0.0;
            for (std::size_t i = 0; i < obs.size(); ++i)
            {
                const auto &c = b.components[i];
                const double post = std::exp(std::log(obs[i].w) + detail::log_normal_pdf(y, obs[i].mean, obs[i].var) - top);
                const double mean = c.mean + st * c.var / (t * c.var + 1.0) * (y - st * c.mean);
                z += post;
                m1 += post * mean;
                m2 += post * mean * mean;
            }
            m1 /= z;
            m2 /= z;
            return std::max(0.0, m2 - m1 * m1);
        });
        total += b.prob * (within + between);
    }
    return total;
}

/// I(X; sqrt(t) X + N | U) in nats.
inline double scalar_mutual_information(const ScalarMixture &x, double t, const EstimatorConfig &cfg = {})
{
    require(t >= 0.0, "mutual information: t must be nonnegative");
    if (t == 0.0)
        return 0.0;
    return scalar_entropy(x.affine_noise(std::sqrt(t), 1.0), cfg) - half_log_2pi_e;
}

/// Adaptive 61-point Gauss-Kronrod integral of f over [a, b].
template <class F> double integrate(F &&f, double a, double b, double rel_tol = 1e-12)
{
    if (a == b)
        return 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, rel_tol);
}

} // namespace secrecy
