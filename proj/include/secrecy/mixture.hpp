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
// Finite Gaussian mixtures, optionally conditioned on a discrete U. Each
// branch is the law of X given U = u; an unconditional mixture has a single
// branch of probability one. Zero-variance components (point masses) are
// allowed; whatever needs a density of X itself rejects them.

#pragma once

#include "psd.hpp"

#include <cstdint>
#include <vector>

namespace secrecy
{

inline constexpr std::size_t max_vector_dim = 3;

struct EstimatorConfig
{
    std::size_t quad_nodes = 200;
    std::size_t mc_samples = 1000000;
    std::uint64_t seed = 1;
    double fd_step = 1e-4; ///< relative finite-difference step

    void validate() const
    {
        require(quad_nodes >= 2, "quad_nodes must be at least 2");
        require(mc_samples >= 4, "mc_samples must be at least 4");
        require(fd_step > 0.0 && fd_step < 0.5, "fd_step must lie in (0, 0.5)");
    }
};

/// Value with its Monte Carlo standard error (zero for quadrature).
struct Estimate
{
    double value = 0.0;
    double stderr_ = 0.0;
};

struct ScalarComponent
{
    double w = 1.0;
    double mean = 0.0;
    double var = 1.0;
};

struct ScalarBranch
{
    double prob = 1.0;
    std::vector<ScalarComponent> components;
};

struct ScalarMixture
{
    std::vector<ScalarBranch> branches;

    static ScalarMixture unconditional(std::vector<ScalarComponent> comps) { return {{{1.0, std::move(comps)}}}; }
    static ScalarMixture gaussian(double mean, double var) { return unconditional({{1.0, mean, var}}); }
    static ScalarMixture point_mass(double x) { return unconditional({{1.0, x, 0.0}}); }

    void validate() const
    {
        require(!branches.empty(), "mixture needs at least one branch");
        double pt = 0.0;
        for (const auto &b : branches)
        {
            require(b.prob > 0.0, "branch probabilities must be positive");
            require(!b.components.empty(), "every branch needs a component");
            pt += b.prob;
            double wt = 0.0;
            for (const auto &c : b.components)
            {
                require(c.w > 0.0, "component weights must be positive");
                require(c.var >= 0.0 && std::isfinite(c.var) && std::isfinite(c.mean),
                        "component variances must be finite and nonnegative");
                wt += c.w;
            }
            require(std::abs(wt - 1.0) <= 1e-9, "component weights must sum to one");
        }
        require(std::abs(pt - 1.0) <= 1e-9, "branch probabilities must sum to one");
    }

    bool has_density() const
    {
        for (const auto &b : branches)
            for (const auto &c : b.components)
                if (!(c.var > 0.0))
                    return false;
        return true;
    }

    /// a X + sqrt(t) N with N standard normal, independent of (X, U).
    ScalarMixture affine_noise(double a, double t) const
    {
        require(t >= 0.0, "noise variance must be nonnegative");
        ScalarMixture out = *this;
        for (auto &b : out.branches)
            for (auto &c : b.components)
            {
                c.mean *= a;
                c.var = a * a * c.var + t;
            }
        return out;
    }

    /// E[Var(X | U)].
    double conditional_variance() const
    {
        double v = 0.0;
        for (const auto &b : branches)
        {
            double m = 0.0, s = 0.0;
            for (const auto &c : b.components)
            {
                m += c.w * c.mean;
                s += c.w * (c.var + c.mean * c.mean);
            }
            v += b.prob * (s - m * m);
        }
        return v;
    }
};

struct VectorComponent
{
    double w = 1.0;
    Vector mean;
    Matrix cov;
};

struct VectorBranch
{
    double prob = 1.0;
    std::vector<VectorComponent> components;
};

struct VectorMixture
{
    std::vector<VectorBranch> branches;

    static VectorMixture unconditional(std::vector<VectorComponent> comps) { return {{{1.0, std::move(comps)}}}; }
    static VectorMixture gaussian(const Vector &mean, const Matrix &cov) { return unconditional({{1.0, mean, cov}}); }

    Eigen::Index dim() const { return branches.front().components.front().mean.size(); }

    void validate(const Tolerance &tol = {}) const
    {
        require(!branches.empty() && !branches.front().components.empty(), "mixture needs a component");
        const Eigen::Index d = dim();
        require(d >= 1, "mixture dimension must be positive");
        if (static_cast<std::size_t>(d) > max_vector_dim)
            throw PreconditionError("vector estimators support dimension at most " + std::to_string(max_vector_dim) +
                                    ", got " + std::to_string(d));
        double pt = 0.0;
        for (const auto &b : branches)
        {
            require(b.prob > 0.0, "branch probabilities must be positive");
            require(!b.components.empty(), "every branch needs a component");
            pt += b.prob;
            double wt = 0.0;
            for (const auto &c : b.components)
            {
                require(c.w > 0.0, "component weights must be positive");
                require_dims(c.mean.size() == d && c.cov.rows() == d && c.cov.cols() == d,
                             "mixture components must share one dimension");
                PsdMatrix::from(c.cov, tol);
                wt += c.w;
            }
            require(std::abs(wt - 1.0) <= 1e-9, "component weights must sum to one");
        }
        require(std::abs(pt - 1.0) <= 1e-9, "branch probabilities must sum to one");
    }

    bool has_density(const Tolerance &tol = {}) const
    {
        for (const auto &b : branches)
            for (const auto &c : b.components)
                if (!PsdMatrix::trusted(c.cov).is_positive_definite(tol))
                    return false;
        return true;
    }

    /// X + N with N ~ N(0, noise) independent of (X, U).
    VectorMixture plus_noise(const Matrix &noise) const
    {
        VectorMixture out = *this;
        for (auto &b : out.branches)
            for (auto &c : b.components)
                c.cov = symmetrize(c.cov + noise);
        return out;
    }

    VectorMixture scaled(double a) const
    {
        VectorMixture out = *this;
        for (auto &b : out.branches)
            for (auto &c : b.components)
            {
                c.mean *= a;
                c.cov *= a * a;
            }
        return out;
    }

    /// E[Cov(X | U)].
    Matrix conditional_covariance() const
    {
        const Eigen::Index d = dim();
        Matrix out = Matrix::Zero(d, d);
        for (const auto &b : branches)
        {
            Vector m = Vector::Zero(d);
            Matrix s = Matrix::Zero(d, d);
            for (const auto &c : b.components)
            {
                m += c.w * c.mean;
                s += c.w * (c.cov + c.mean * c.mean.transpose());
            }
            out += b.prob * (s - m * m.transpose());
        }
        return symmetrize(out);
    }

    /// Unconditional law of X (U marginalized out).
    VectorMixture marginal() const
    {
        VectorBranch all;
        for (const auto &b : branches)
            for (const auto &c : b.components)
                all.components.push_back({b.prob * c.w, c.mean, c.cov});
        return {{all}};
    }
};

/// X + Y given U for X, Y conditionally independent given U (same branch probabilities).
inline VectorMixture conditional_sum(const VectorMixture &x, const VectorMixture &y)
{
    require_dims(x.branches.size() == y.branches.size() && x.dim() == y.dim(), "conditional_sum operands");
    VectorMixture out;
    for (std::size_t u = 0; u < x.branches.size(); ++u)
    {
        require(std::abs(x.branches[u].prob - y.branches[u].prob) <= 1e-12,
                "conditional_sum: branch probabilities differ");
        VectorBranch b{x.branches[u].prob, {}};
        for (const auto &cx : x.branches[u].components)
            for (const auto &cy : y.branches[u].components)
                b.components.push_back({cx.w * cy.w, cx.mean + cy.mean, symmetrize(cx.cov + cy.cov)});
        out.branches.push_back(std::move(b));
    }
    return out;
}

inline VectorMixture to_vector(const ScalarMixture &s)
{
    VectorMixture out;
    for (const auto &b : s.branches)
    {
        VectorBranch vb{b.prob, {}};
        for (const auto &c : b.components)
            vb.components.push_back({c.w, Vector::Constant(1, c.mean), Matrix::Constant(1, 1, c.var)});
        out.branches.push_back(std::move(vb));
    }
    return out;
}

/// Markov chain V -> U -> X: p(v), p(u | v) as rows, and X given U.
struct MarkovChain
{
    std::vector<double> pv;
    Matrix transition; ///< |V| x |U|, rows sum to one
    VectorMixture x_given_u;

    /// Branch probabilities of x_given_u consistent with the chain.
    static std::vector<double> marginal_u(const std::vector<double> &pv, const Matrix &transition)
    {
        std::vector<double> pu(static_cast<std::size_t>(transition.cols()), 0.0);
        for (Eigen::Index v = 0; v < transition.rows(); ++v)
            for (Eigen::Index u = 0; u < transition.cols(); ++u)
                pu[static_cast<std::size_t>(u)] += pv[static_cast<std::size_t>(v)] * transition(v, u);
        return pu;
    }

    /// X given V: each branch mixes the X|U branches with weights p(u | v).
    VectorMixture x_given_v() const
    {
        require_dims(static_cast<std::size_t>(transition.rows()) == pv.size() &&
                         static_cast<std::size_t>(transition.cols()) == x_given_u.branches.size(),
                     "Markov chain shapes");
        VectorMixture out;
        for (std::size_t v = 0; v < pv.size(); ++v)
        {
            VectorBranch b{pv[v], {}};
            for (std::size_t u = 0; u < x_given_u.branches.size(); ++u)
            {
                const double tu = transition(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(u));
                if (tu <= 0.0)
                    continue;
                for (const auto &c : x_given_u.branches[u].components)
                    b.components.push_back({tu * c.w, c.mean, c.cov});
            }
            out.branches.push_back(std::move(b));
        }
        return out;
    }
};

} // namespace secrecy
