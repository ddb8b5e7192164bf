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
// Random instance generators shared by the unit and acceptance tests.

#pragma once

#include <secrecy/secrecy.hpp>

namespace secrecy::testing
{

inline Matrix random_gaussian(NormalSource &g, Eigen::Index rows, Eigen::Index cols)
{
    Matrix m(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r)
            m(r, c) = g();
    return m;
}

/// G G^T / n + floor I, well conditioned for small floors.
inline Matrix random_spd(NormalSource &g, Eigen::Index n, double floor = 0.1)
{
    const Matrix a = random_gaussian(g, n, n);
    return symmetrize(a * a.transpose() / static_cast<double>(n) + floor * Matrix::Identity(n, n));
}

/// Rank-deficient PSD matrix of the given rank.
inline Matrix random_psd(NormalSource &g, Eigen::Index n, Eigen::Index rank)
{
    const Matrix a = random_gaussian(g, n, rank);
    return symmetrize(a * a.transpose() / static_cast<double>(std::max<Eigen::Index>(rank, 1)));
}

inline double random_uniform(NormalSource &g, double lo, double hi)
{
    return lo + (hi - lo) * g.uniform();
}

inline AlignedChannel random_aligned(NormalSource &g, Eigen::Index n, std::size_t users)
{
    std::vector<Matrix> sig;
    for (std::size_t k = 0; k < users; ++k)
        sig.push_back(random_spd(g, n, 0.2));
    return make_aligned(random_spd(g, n, 0.5), sig, random_spd(g, n, 0.2));
}

/// Sigma_1 <= Sigma_2 <= ... <= Sigma_Z built from PSD increments.
inline DegradedChannel random_degraded(NormalSource &g, Eigen::Index n, std::size_t users)
{
    std::vector<Matrix> sig;
    Matrix cur = random_spd(g, n, 0.2);
    for (std::size_t k = 0; k < users; ++k)
    {
        sig.push_back(cur);
        cur = symmetrize(cur + random_psd(g, n, n) * 0.5);
    }
    return make_degraded(random_spd(g, n, 0.5), sig, cur);
}

inline ScalarMixture random_scalar_mixture(NormalSource &g, std::size_t branches, std::size_t comps)
{
    ScalarMixture x;
    std::vector<double> bp(branches);
    double tot = 0.0;
    for (auto &p : bp)
        tot += (p = random_uniform(g, 0.2, 1.0));
    for (std::size_t b = 0; b < branches; ++b)
    {
        ScalarBranch br{bp[b] / tot, {}};
        double wt = 0.0;
        for (std::size_t c = 0; c < comps; ++c)
        {
            const double w = random_uniform(g, 0.2, 1.0);
            wt += w;
            br.components.push_back({w, random_uniform(g, -1.5, 1.5), random_uniform(g, 0.05, 1.0)});
        }
        for (auto &c : br.components)
            c.w /= wt;
        x.branches.push_back(std::move(br));
    }
    return x;
}

inline VectorMixture random_vector_mixture(NormalSource &g, Eigen::Index d, std::size_t branches, std::size_t comps)
{
    VectorMixture x;
    std::vector<double> bp(branches);
    double tot = 0.0;
    for (auto &p : bp)
        tot += (p = random_uniform(g, 0.2, 1.0));
    for (std::size_t b = 0; b < branches; ++b)
    {
        VectorBranch br{bp[b] / tot, {}};
        double wt = 0.0;
        for (std::size_t c = 0; c < comps; ++c)
        {
            const double w = random_uniform(g, 0.2, 1.0);
            wt += w;
            br.components.push_back({w, random_gaussian(g, d, 1).col(0), random_spd(g, d, 0.05) * 0.5});
        }
        for (auto &c : br.components)
            c.w /= wt;
        x.branches.push_back(std::move(br));
    }
    return x;
}

} // namespace secrecy::testing
