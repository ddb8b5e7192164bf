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

#include "../support.hpp"

#include <gtest/gtest.h>

using namespace secrecy;
using namespace secrecy::testing;

namespace
{

// 1/2 log |H K H^T + Sigma| / |Sigma| by plain determinants.
double mi_det(const Matrix &h, const Matrix &k, const Matrix &sigma)
{
    return 0.5 * std::log((h * k * h.transpose() + sigma).determinant() / sigma.determinant());
}

GeneralChannel random_general(NormalSource &g, Eigen::Index t, std::vector<Eigen::Index> rx, Eigen::Index rz)
{
    std::vector<Matrix> gains, sigmas;
    for (Eigen::Index r : rx)
    {
        gains.push_back(random_gaussian(g, r, t));
        sigmas.push_back(random_spd(g, r, 0.3));
    }
    return make_general(random_spd(g, t, 0.5), gains, sigmas, random_gaussian(g, rz, t), random_spd(g, rz, 0.3));
}

} // namespace

TEST(Channel, SisoValidation)
{
    EXPECT_TRUE(validate(make_siso(1, 1, 2, 4)).ok());
    EXPECT_THROW(make_siso(1, 2, 1, 4), PreconditionError);
    EXPECT_THROW(make_siso(0, 1, 2, 4), PreconditionError);
    const Diagnostics d = validate(SisoChannel{1, 1, 5, 4});
    ASSERT_EQ(d.violations.size(), 1u);
    EXPECT_NE(d.violations[0].what.find("sigmaZ"), std::string::npos);
}

TEST(Channel, DegradedOrderingAndMargins)
{
    NormalSource g(21);
    const DegradedChannel ch = random_degraded(g, 2, 3);
    ASSERT_EQ(ch.ordering_margins.size(), 3u);
    for (double m : ch.ordering_margins)
        EXPECT_GE(m, -1e-12);
    // swapping two receivers breaks the order unless the increment is zero
    std::vector<Matrix> swapped = {ch.sigmas[1], ch.sigmas[0], ch.sigmas[2]};
    EXPECT_THROW(make_degraded(ch.s, swapped, ch.sigma_z), PreconditionError);
}

TEST(Channel, AlignedRejectsSingularNoise)
{
    Matrix s = Matrix::Identity(2, 2), sing(2, 2);
    sing << 1, 1, 1, 1;
    EXPECT_THROW(make_aligned(s, {sing}, s), PreconditionError);
    const Diagnostics d = validate(AlignedChannel{s, {s, Matrix::Identity(3, 3)}, s});
    EXPECT_FALSE(d.ok());
}

TEST(Channel, EmbeddingsKeepData)
{
    const AlignedChannel a = as_aligned(make_siso(2, 1, 3, 5));
    EXPECT_EQ(a.users(), 2u);
    EXPECT_DOUBLE_EQ(a.s(0, 0), 2.0);
    EXPECT_DOUBLE_EQ(a.sigmas[1](0, 0), 3.0);
    const GeneralChannel gch = as_general(a);
    EXPECT_TRUE(gch.gains[0].isIdentity());
    EXPECT_TRUE(validate(gch).ok());
}

TEST(Channel, PowerConstraints)
{
    Matrix s(2, 2);
    s << 1.0, 0.5, 0.5, 2.0;
    EXPECT_TRUE(total_power_constraint(3.0).admits(s));
    EXPECT_FALSE(total_power_constraint(2.9).admits(s));
    EXPECT_TRUE(per_antenna_constraint({1.0, 2.0}).admits(s));
    EXPECT_FALSE(per_antenna_constraint({0.9, 2.0}).admits(s));
    EXPECT_THROW(total_power_constraint(0.0), PreconditionError);
}

TEST(Channel, SquareReductionPreservesMutualInformation)
{
    NormalSource g(22);
    for (int i = 0; i < 20; ++i)
    {
        const GeneralChannel ch = random_general(g, 3, {1, 2}, 2);
        const SquareChannel sq = reduce_general_to_square(ch);
        const GeneralChannel hat = sq.as_general();
        EXPECT_EQ(sq.receivers[0].rank, 1);
        EXPECT_EQ(sq.receivers[1].rank, 2);
        for (int k = 0; k < 5; ++k)
        {
            const Matrix cov = random_psd(g, 3, 1 + k % 3);
            for (std::size_t u = 0; u < 2; ++u)
                EXPECT_NEAR(mi_det(ch.gains[u], cov, ch.sigmas[u]), mi_det(hat.gains[u], cov, hat.sigmas[u]), 1e-10);
            EXPECT_NEAR(mi_det(ch.gain_z, cov, ch.sigma_z), mi_det(hat.gain_z, cov, hat.sigma_z), 1e-10);
        }
    }
}

TEST(Channel, PerturbationConverges)
{
    NormalSource g(23);
    const GeneralChannel ch = random_general(g, 3, {2, 2}, 1);
    const SquareChannel sq = reduce_general_to_square(ch);
    const Matrix cov = random_spd(g, 3, 0.2);
    double prev = std::numeric_limits<double>::infinity();
    for (double alpha : {1e-1, 1e-2, 1e-3, 1e-4})
    {
        const AlignedChannel a = perturb_to_aligned(sq, alpha);
        EXPECT_TRUE(validate(a).ok());
        // whitened aligned noise: mutual information through identity gain
        const double err = std::abs(mi_det(Matrix::Identity(3, 3), cov, a.sigma_z) -
                                    mi_det(ch.gain_z, cov, ch.sigma_z));
        EXPECT_LT(err, prev);
        prev = err;
    }
    EXPECT_LT(prev, 1e-2);
    EXPECT_THROW(perturb_to_aligned(sq, 0.0), PreconditionError);
}

TEST(Channel, InputSupportRestriction)
{
    NormalSource g(24);
    GeneralChannel ch = random_general(g, 3, {2}, 2);
    ch.s = random_psd(g, 3, 2);
    const InputSupport sup = restrict_to_input_support(ch);
    EXPECT_EQ(sup.basis.cols(), 2);
    EXPECT_TRUE(PsdMatrix::from(sup.channel.s).is_positive_definite());
    EXPECT_LE((sup.lift(sup.channel.s) - ch.s).norm(), 1e-10);
    const Matrix k = random_psd(g, 2, 2) * 0.1;
    EXPECT_NEAR(mi_det(sup.channel.gains[0], k, ch.sigmas[0]), mi_det(ch.gains[0], sup.lift(k), ch.sigmas[0]), 1e-12);
}

TEST(Channel, GeneralValidationCatchesShapes)
{
    NormalSource g(25);
    GeneralChannel ch = random_general(g, 3, {2}, 2);
    ch.gains[0] = Matrix::Ones(3, 3);
    EXPECT_FALSE(validate(ch).ok());
    EXPECT_THROW(reduce_general_to_square(ch), DimensionError);
}
