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
using secrecy::testing::random_psd;
using secrecy::testing::random_spd;

namespace
{

// Closed-form 2x2 quantities used as independent references.
double det2(const Matrix &a) { return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0); }

double min_eig2(const Matrix &a)
{
    const double m = 0.5 * (a(0, 0) + a(1, 1));
    const double d = 0.5 * (a(0, 0) - a(1, 1));
    return m - std::sqrt(d * d + a(0, 1) * a(0, 1));
}

Matrix m2(double a, double b, double c, double d)
{
    Matrix m(2, 2);
    m << a, b, c, d;
    return m;
}

} // namespace

TEST(Psd, EigenvaluesMatchClosedForm2x2)
{
    NormalSource g(3);
    for (int i = 0; i < 50; ++i)
    {
        const Matrix a = symmetrize(secrecy::testing::random_gaussian(g, 2, 2));
        EXPECT_NEAR(min_eigenvalue(a), min_eig2(a), 1e-12);
    }
}

TEST(Psd, LogdetMatchesDeterminant)
{
    NormalSource g(4);
    for (int i = 0; i < 50; ++i)
    {
        const Matrix a = random_spd(g, 2);
        EXPECT_NEAR(logdet(a), std::log(det2(a)), 1e-12);
    }
    EXPECT_THROW(logdet(m2(1, 0, 0, 0)), NumericalError);
    EXPECT_THROW(logdet(m2(1, 0, 0, -1)), NumericalError);
    EXPECT_DOUBLE_EQ(logdet(Matrix(0, 0)), 0.0);
}

TEST(Psd, ProjectionIsIdempotentAndNearest)
{
    NormalSource g(5);
    for (int i = 0; i < 50; ++i)
    {
        const Matrix a = symmetrize(secrecy::testing::random_gaussian(g, 3, 3));
        const Matrix p = project_psd(a);
        EXPECT_GE(min_eigenvalue(p), -1e-12);
        EXPECT_LE((project_psd(p) - p).norm(), 1e-12);
        // no PSD matrix is closer
        for (int k = 0; k < 20; ++k)
        {
            const Matrix q = random_psd(g, 3, 2);
            EXPECT_LE((a - p).norm(), (a - q).norm() + 1e-12);
        }
    }
}

TEST(Psd, SquareRootAndInverse)
{
    NormalSource g(6);
    for (int i = 0; i < 20; ++i)
    {
        const Matrix a = random_spd(g, 3);
        const Matrix r = psd_sqrt(a);
        EXPECT_LE((r * r - a).norm(), 1e-12 * (1 + a.norm()));
        EXPECT_LE((spd_inverse(a) * a - Matrix::Identity(3, 3)).norm(), 1e-10);
    }
    EXPECT_THROW(spd_inverse(m2(1, 2, 2, 1)), NumericalError);
}

TEST(Psd, PsdMatrixValidation)
{
    EXPECT_NO_THROW(PsdMatrix::from(m2(2, 1, 1, 2)));
    EXPECT_THROW(PsdMatrix::from(m2(1, 2, 0, 1)), PreconditionError);
    EXPECT_THROW(PsdMatrix::from(m2(1, 0, 0, -1e-3)), PreconditionError);
    EXPECT_THROW(PsdMatrix::from(Matrix(2, 3)), DimensionError);
    // tiny negative eigenvalue inside the relative slack
    EXPECT_NO_THROW(PsdMatrix::from(m2(1, 0, 0, -1e-12)));
    EXPECT_TRUE(PsdMatrix::from(m2(2, 1, 1, 2)).is_positive_definite());
    EXPECT_FALSE(PsdMatrix::from(m2(1, 1, 1, 1)).is_positive_definite());
}

TEST(Psd, LoewnerOrder)
{
    const Matrix a = m2(1, 0, 0, 1), b = m2(2, 0, 0, 1);
    EXPECT_TRUE(loewner_leq(a, b));
    EXPECT_FALSE(loewner_leq(b, a));
    EXPECT_NEAR(loewner_margin(a, b), 0.0, 1e-15);
    EXPECT_FALSE(loewner_leq(m2(1, 0, 0, 2), m2(2, 0, 0, 1)));
    EXPECT_THROW(loewner_margin(a, Matrix::Identity(3, 3)), DimensionError);
}

TEST(Psd, GeneralizedMinEigenvalueMatchesQuadratic)
{
    NormalSource g(7);
    for (int i = 0; i < 30; ++i)
    {
        const Matrix a = random_spd(g, 2), b = random_spd(g, 2);
        // det(A - l B) = 0 as a quadratic in l
        const double qa = det2(b);
        const double qb = -(a(0, 0) * b(1, 1) + a(1, 1) * b(0, 0) - 2 * a(0, 1) * b(0, 1));
        const double qc = det2(a);
        const double disc = std::sqrt(qb * qb - 4 * qa * qc);
        EXPECT_NEAR(generalized_min_eigenvalue(a, b), (-qb - disc) / (2 * qa), 1e-10);
    }
}

TEST(Psd, SimultaneousDiagonalization)
{
    NormalSource g(8);
    for (int i = 0; i < 20; ++i)
    {
        const Matrix e = random_spd(g, 3), d = random_psd(g, 3, 2);
        const auto sd = simultaneous_diagonalize(e, d);
        const Matrix ce = sd.c.transpose() * e * sd.c, cd = sd.c.transpose() * d * sd.c;
        EXPECT_LE((ce - Matrix(ce.diagonal().asDiagonal())).norm(), 1e-10);
        EXPECT_LE((cd - Matrix(cd.diagonal().asDiagonal())).norm(), 1e-10);
        for (double t : {0.0, 0.3, 1.0})
            EXPECT_NEAR(sd.determinant_at(t) / (e + t * d).determinant(), 1.0, 1e-9);
    }
    EXPECT_THROW(simultaneous_diagonalize(m2(1, 0, 0, 0), m2(1, 0, 0, 1)), PreconditionError);
}

TEST(Psd, RatioMonotone)
{
    NormalSource g(9);
    for (int i = 0; i < 100; ++i)
    {
        const Matrix a = random_psd(g, 2, 2), b = random_spd(g, 2), d = random_psd(g, 2, 1 + i % 2);
        EXPECT_TRUE(ratio_monotone_check(a, b, d));
    }
}

TEST(Psd, RFunctionIsNonIncreasingAndInvertible)
{
    NormalSource g(10);
    for (int i = 0; i < 50; ++i)
    {
        const Matrix a = random_spd(g, 2), b = random_psd(g, 2, 2), d = random_psd(g, 2, 2);
        double prev = r_function(a, b, d, 0.0);
        for (int k = 1; k <= 20; ++k)
        {
            const double r = r_function(a, b, d, k / 20.0);
            EXPECT_LE(r, prev + 1e-14);
            prev = r;
        }
        const double r0 = r_function(a, b, d, 0.0), r1 = r_function(a, b, d, 1.0);
        const double target = r1 + 0.37 * (r0 - r1);
        const double t = solve_r_equals(a, b, d, target);
        EXPECT_NEAR(r_function(a, b, d, t), target, 1e-9);
        EXPECT_THROW(solve_r_equals(a, b, d, r0 + 1.0), PreconditionError);
    }
    // scalar closed form: r(t) = 1/2 log((a+b+t d)/(a+t d))
    EXPECT_NEAR(r_function(m2(1, 0, 0, 1).topLeftCorner(1, 1), Matrix::Constant(1, 1, 2.0),
                           Matrix::Constant(1, 1, 3.0), 0.5),
                0.5 * std::log(4.5 / 2.5), 1e-15);
}
