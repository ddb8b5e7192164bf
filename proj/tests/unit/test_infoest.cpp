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

#include <random>

using namespace secrecy;
using namespace secrecy::testing;

namespace
{

const double two_pi_e = 2.0 * M_PI * M_E;

// Plain-sampling oracles on an unconditional scalar mixture, with their own
// RNG and density code.
struct ScalarOracle
{
    std::vector<ScalarComponent> comps;

    double density(double y) const
    {
        double p = 0.0;
        for (const auto &c : comps)
            p += c.w * std::exp(-0.5 * (y - c.mean) * (y - c.mean) / c.var) / std::sqrt(2 * M_PI * c.var);
        return p;
    }
    double score(double y) const
    {
        double p = 0.0, dp = 0.0;
        for (const auto &c : comps)
        {
            const double e = c.w * std::exp(-0.5 * (y - c.mean) * (y - c.mean) / c.var) / std::sqrt(2 * M_PI * c.var);
            p += e;
            dp -= e * (y - c.mean) / c.var;
        }
        return dp / p;
    }
    template <class F> std::pair<double, double> mean_of(F &&f, std::size_t n, std::uint64_t seed) const
    {
        std::mt19937_64 eng(seed);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        std::normal_distribution<double> nor(0.0, 1.0);
        double s = 0.0, s2 = 0.0;
        for (std::size_t i = 0; i < n; ++i)
        {
            double u = uni(eng), acc = 0.0;
            std::size_t k = 0;
            while (k + 1 < comps.size() && (acc += comps[k].w) < u)
                ++k;
            const double y = comps[k].mean + std::sqrt(comps[k].var) * nor(eng);
            const double v = f(y);
            s += v;
            s2 += v * v;
        }
        const double m = s / static_cast<double>(n);
        return {m, std::sqrt((s2 / static_cast<double>(n) - m * m) / static_cast<double>(n))};
    }
};

// E[X | y] on a fine grid with the trapezoid rule: mmse = E[X^2] - int E[X|y]^2 p(y) dy.
double mmse_grid(const std::vector<ScalarComponent> &x, double t)
{
    const double st = std::sqrt(t);
    double ex2 = 0.0;
    for (const auto &c : x)
        ex2 += c.w * (c.var + c.mean * c.mean);
    double reach = 0.0;
    for (const auto &c : x)
        reach = std::max(reach, st * std::abs(c.mean) + 12.0 * std::sqrt(t * c.var + 1.0));
    const double lo = -reach, hi = reach;
    const int n = 200001;
    const double h = (hi - lo) / (n - 1);
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
    {
        const double y = lo + h * i;
        double p = 0.0, m = 0.0;
        for (const auto &c : x)
        {
            const double v = t * c.var + 1.0;
            const double e = c.w * std::exp(-0.5 * (y - st * c.mean) * (y - st * c.mean) / v) / std::sqrt(2 * M_PI * v);
            p += e;
            m += e * (c.mean + st * c.var / v * (y - st * c.mean));
        }
        if (p > 0)
            acc += (i == 0 || i == n - 1 ? 0.5 : 1.0) * h * m * m / p;
    }
    return ex2 - acc;
}

Matrix m2(double a, double b, double c, double d)
{
    Matrix m(2, 2);
    m << a, b, c, d;
    return m;
}

ScalarMixture binary(double a, double var) { return ScalarMixture::unconditional({{0.5, -a, var}, {0.5, a, var}}); }

EstimatorConfig mc(std::size_t n, std::uint64_t seed = 1)
{
    EstimatorConfig c;
    c.mc_samples = n;
    c.seed = seed;
    return c;
}

} // namespace

// ---- entropy ---------------------------------------------------------------------------

TEST(InfoEst, GaussianEntropy)
{
    for (double p : {0.5, 1.0, 3.0})
        for (double t : {0.0, 0.5, 2.0})
            EXPECT_NEAR(entropy_plus_noise(ScalarMixture::gaussian(0.3, p), t).value, 0.5 * std::log(two_pi_e * (p + t)),
                        1e-12);
    const Estimate pm = entropy_plus_noise(ScalarMixture::point_mass(0.0), 1.0);
    EXPECT_NEAR(pm.value, 0.5 * std::log(two_pi_e), 1e-14);
    EXPECT_EQ(pm.stderr_, 0.0);
    EXPECT_THROW(entropy_plus_noise(ScalarMixture::point_mass(0.0), 0.0), PreconditionError);
}

TEST(InfoEst, MixtureEntropyAgainstPlugIn)
{
    const ScalarMixture x = binary(1.0, 0.2);
    const ScalarMixture y = x.affine_noise(1.0, 0.5);
    const ScalarOracle o{y.branches[0].components};
    const auto [h, se] = o.mean_of([&](double v) { return -std::log(o.density(v)); }, 10000000, 7);
    EXPECT_NEAR(entropy_plus_noise(x, 0.5).value, h, 3 * se);
}

TEST(InfoEst, VectorEntropyMonteCarlo)
{
    const Matrix q = m2(1.0, 0.3, 0.3, 0.8);
    const VectorMixture g = VectorMixture::gaussian(Vector::Zero(2), q);
    const Estimate e = entropy_plus_noise(g, Matrix::Identity(2, 2) * 0.5, mc(400000));
    EXPECT_NEAR(e.value, 0.5 * logdet(two_pi_e * (q + 0.5 * Matrix::Identity(2, 2))), 4 * e.stderr_);
    EXPECT_GT(e.stderr_, 0.0);
    EXPECT_LT(e.stderr_, 0.01);
    // vector path in one dimension agrees with quadrature
    const ScalarMixture s = binary(1.0, 0.3);
    const Estimate v = entropy_plus_noise(to_vector(s), Matrix::Constant(1, 1, 0.4), mc(400000));
    EXPECT_NEAR(v.value, entropy_plus_noise(s, 0.4).value, 4 * v.stderr_);
}

TEST(InfoEst, DimensionCap)
{
    const VectorMixture g = VectorMixture::gaussian(Vector::Zero(4), Matrix::Identity(4, 4));
    EXPECT_THROW(entropy_plus_noise(g, Matrix::Identity(4, 4), mc(100)), PreconditionError);
}

// ---- mmse --------------------------------------------------------------------------------

TEST(InfoEst, GaussianMmse)
{
    for (double s2 : {0.3, 1.0, 4.0})
        for (double t : {0.0, 0.7, 5.0})
            EXPECT_NEAR(mmse(ScalarMixture::gaussian(1.0, s2), t), s2 / (s2 * t + 1), 1e-13);
}

TEST(InfoEst, MmseAtZeroIsConditionalVariance)
{
    const ScalarMixture x = binary(1.0, 0.2);
    EXPECT_NEAR(mmse(x, 0.0), 1.2, 1e-15);
    NormalSource g(61);
    const ScalarMixture c = random_scalar_mixture(g, 3, 2);
    EXPECT_NEAR(mmse(c, 0.0), c.conditional_variance(), 1e-15);
}

TEST(InfoEst, MmseMatchesGridOracleAndDecreases)
{
    NormalSource g(62);
    for (int i = 0; i < 10; ++i)
    {
        const ScalarMixture x = random_scalar_mixture(g, 1, 3);
        double prev = mmse(x, 0.0);
        for (double t : {0.1, 0.5, 1.0, 3.0, 10.0, 100.0})
        {
            const double v = mmse(x, t);
            EXPECT_NEAR(v, mmse_grid(x.branches[0].components, t), 1e-8);
            EXPECT_LE(v, prev + 1e-14);
            prev = v;
        }
        EXPECT_LT(mmse(x, 1e4), 1e-3);
    }
}

// ---- Fisher information -----------------------------------------------------------------

TEST(InfoEst, GaussianFisher)
{
    EXPECT_NEAR(fisher(ScalarMixture::gaussian(0.0, 2.5)), 0.4, 1e-13);
    const Matrix q = m2(1.0, 0.3, 0.3, 0.8);
    const FisherEstimate j = fisher(VectorMixture::gaussian(Vector::Zero(2), q), mc(400000));
    const Matrix ref = spd_inverse(q);
    for (Eigen::Index r = 0; r < 2; ++r)
        for (Eigen::Index c = 0; c < 2; ++c)
            EXPECT_NEAR(j.value(r, c), ref(r, c), 4 * j.moments.stderr_at(c * 2 + r));
}

TEST(InfoEst, FisherScaling)
{
    const ScalarMixture x = binary(0.8, 0.3);
    for (double a : {0.5, 2.0, 3.0})
        EXPECT_NEAR(fisher(x.affine_noise(a, 0.0)), fisher(x) / (a * a), 1e-10);
    NormalSource g(63);
    const VectorMixture v = random_vector_mixture(g, 2, 1, 2);
    const FisherEstimate j1 = fisher(v, mc(20000)), j2 = fisher(v.scaled(2.0), mc(20000));
    EXPECT_LE((j2.value * 4.0 - j1.value).norm(), 1e-10 * j1.value.norm());
}

TEST(InfoEst, ScalarFisherAgainstScoreOracle)
{
    const ScalarMixture y = binary(1.0, 0.2).affine_noise(1.0, 0.3);
    const ScalarOracle o{y.branches[0].components};
    const auto [j, se] = o.mean_of([&](double v) { return o.score(v) * o.score(v); }, 10000000, 8);
    EXPECT_NEAR(fisher(y), j, 3 * se);
}

TEST(InfoEst, VectorFisherAgainstScoreOracle)
{
    NormalSource g(64);
    const VectorMixture x = random_vector_mixture(g, 2, 1, 3);
    const FisherEstimate est = fisher(x, mc(400000));
    // independent estimate: own sampler, own density gradient
    std::mt19937_64 eng(99);
    std::normal_distribution<double> nor;
    std::uniform_real_distribution<double> uni;
    const auto &comps = x.branches[0].components;
    const std::size_t n = 2000000;
    Matrix sum = Matrix::Zero(2, 2), sum2 = Matrix::Zero(2, 2);
    for (std::size_t i = 0; i < n; ++i)
    {
        double u = uni(eng), acc = 0.0;
        std::size_t k = 0;
        while (k + 1 < comps.size() && (acc += comps[k].w) < u)
            ++k;
        const Eigen::LLT<Matrix> llt(comps[k].cov);
        Vector z(2);
        z << nor(eng), nor(eng);
        const Vector y = comps[k].mean + llt.matrixL() * z;
        double p = 0.0;
        Vector dp = Vector::Zero(2);
        for (const auto &c : comps)
        {
            const Matrix inv = c.cov.inverse();
            const Vector d = y - c.mean;
            const double e = c.w * std::exp(-0.5 * d.dot(inv * d)) / (2 * M_PI * std::sqrt(c.cov.determinant()));
            p += e;
            dp -= e * inv * d;
        }
        const Vector s = dp / p;
        const Matrix o = s * s.transpose();
        sum += o;
        sum2 += o.cwiseProduct(o);
    }
    const Matrix mean = sum / static_cast<double>(n);
    for (Eigen::Index r = 0; r < 2; ++r)
        for (Eigen::Index c = 0; c < 2; ++c)
        {
            const double se_o = std::sqrt((sum2(r, c) / n - mean(r, c) * mean(r, c)) / n);
            const double se = std::hypot(se_o, est.moments.stderr_at(c * 2 + r));
            EXPECT_NEAR(est.value(r, c), mean(r, c), 3.5 * se);
        }
}

// ---- identities ---------------------------------------------------------------------------

TEST(InfoEst, DeBruijnScalar)
{
    EXPECT_LE(check_de_bruijn(ScalarMixture::gaussian(0.0, 1.3), 0.7).residual, 1e-6);
    const IdentityCheck c = check_de_bruijn(binary(1.0, 0.2), 1.0);
    EXPECT_LE(c.residual, 1e-4);
    EXPECT_NEAR(c.lhs, c.rhs, 1e-4);
    NormalSource g(65);
    const IdentityCheck d = check_de_bruijn(random_scalar_mixture(g, 2, 2), 0.5);
    EXPECT_TRUE(d.within(1e-4));
}

TEST(InfoEst, DeBruijnVectorDirectional)
{
    NormalSource g(66);
    const VectorMixture x = random_vector_mixture(g, 2, 2, 2);
    const Matrix dir = random_psd(g, 2, 1 + 1);
    const IdentityCheck c = check_de_bruijn(x, Matrix::Identity(2, 2), dir, mc(200000));
    EXPECT_LE(c.residual, 3 * c.stderr_ + 1e-6);
    // Gaussian: both sides equal tr((Q + Sigma)^{-1} D) / 2
    const Matrix q = m2(1.0, 0.2, 0.2, 0.5);
    const IdentityCheck gc =
        check_de_bruijn(VectorMixture::gaussian(Vector::Zero(2), q), Matrix::Identity(2, 2), dir, mc(200000));
    EXPECT_NEAR(gc.lhs, 0.5 * (spd_inverse(q + Matrix::Identity(2, 2)) * dir).trace(), 0.02);
    EXPECT_LE(gc.residual, 3 * gc.stderr_ + 1e-6);
}

TEST(InfoEst, ImmseIdentity)
{
    const double p = 1.7;
    const IdentityCheck gc = check_immse(ScalarMixture::gaussian(0.0, p), 0.3, 2.0);
    EXPECT_NEAR(gc.lhs, 0.5 * std::log((2.0 * p + 1) / (0.3 * p + 1)), 1e-12);
    EXPECT_NEAR(gc.rhs, gc.lhs, 1e-10);
    EXPECT_EQ(check_immse(binary(1.0, 0.1), 0.5, 0.5).residual, 0.0);
    // mixture over [1 / sigma_Z^2, 1 / sigma_2^2]
    EXPECT_LE(check_immse(binary(1.0, 0.1), 0.25, 0.5).residual, 1e-4);
    EXPECT_THROW(check_immse(binary(1.0, 0.1), 1.0, 0.5), PreconditionError);
}

TEST(InfoEst, ComplementaryIdentity)
{
    const IdentityCheck z = check_complementary(binary(1.0, 0.2), 0.0);
    EXPECT_NEAR(z.lhs, 1.0, 1e-13);
    EXPECT_NEAR(z.rhs, 1.0, 1e-15);
    const double p = 2.0, t = 0.8;
    const IdentityCheck gc = check_complementary(ScalarMixture::gaussian(0.0, p), t);
    EXPECT_NEAR(gc.lhs, 1.0 / (t * p + 1), 1e-12);
    EXPECT_NEAR(gc.rhs, 1.0 / (t * p + 1), 1e-12);
    EXPECT_LE(check_complementary(binary(1.0, 0.2), 1.0).residual, 1e-4);
}

// ---- single crossing -------------------------------------------------------------------------

TEST(InfoEst, SingleCrossing)
{
    std::vector<double> grid;
    for (int i = 0; i < 1000; ++i)
        grid.push_back(0.02 * i);
    const CrossingReport gz = check_single_crossing(ScalarMixture::gaussian(0.5, 0.7), 0.7, grid);
    EXPECT_TRUE(gz.identically_zero);
    EXPECT_EQ(gz.sign_changes, 0u);
    for (double v : {0.3, 2.0})
    {
        const CrossingReport r = check_single_crossing(ScalarMixture::gaussian(0.0, v), 0.7, grid);
        EXPECT_LE(r.sign_changes, 1u);
        EXPECT_TRUE(r.ok);
    }
    const CrossingReport b = check_single_crossing(binary(1.0, 0.05), 1.05, grid);
    EXPECT_LE(b.sign_changes, 1u);
    EXPECT_TRUE(b.ok);
    // conditional Gaussian with per-branch variance sigma^2 and different means
    ScalarMixture cg{{{0.3, {{1.0, -1.0, 0.7}}}, {0.7, {{1.0, 2.0, 0.7}}}}};
    EXPECT_TRUE(check_single_crossing(cg, 0.7, grid).identically_zero);
}

// ---- worst-case noise ---------------------------------------------------------------------------

TEST(InfoEst, WorstNoise)
{
    const Matrix sigma = m2(1.0, 0.2, 0.2, 0.6);
    NormalSource g(67);
    const VectorMixture x = random_vector_mixture(g, 2, 1, 3);
    const Matrix kx = x.conditional_covariance();
    const auto rep = check_worst_noise(sigma, kx, {VectorMixture::gaussian(Vector::Zero(2), kx), x}, mc(200000));
    ASSERT_EQ(rep.size(), 2u);
    EXPECT_NEAR(rep[0].candidate.value, rep[0].gaussian, 4 * rep[0].candidate.stderr_);
    EXPECT_TRUE(rep[1].ok);
    EXPECT_GT(rep[1].candidate.value, rep[1].gaussian);
    // narrow two-point law: the Gaussian is strictly smaller
    const ScalarMixture two = binary(1.0, 0.01);
    const auto sc = check_worst_noise(Matrix::Identity(1, 1), Matrix::Constant(1, 1, 1.01), {to_vector(two)}, mc(200000));
    EXPECT_GT(sc[0].candidate.value - 3 * sc[0].candidate.stderr_, sc[0].gaussian);
    // exact two-point law has no density: infinite information
    const auto inf = check_worst_noise(Matrix::Identity(1, 1), Matrix::Identity(1, 1), {to_vector(binary(1.0, 0.0))}, mc(100));
    EXPECT_TRUE(std::isinf(inf[0].candidate.value));
    EXPECT_THROW(check_worst_noise(sigma, kx * 1.1, {x}, mc(100)), PreconditionError);
}

// ---- Fisher inequalities ---------------------------------------------------------------------------

TEST(InfoEst, FisherInequalitiesGaussianEquality)
{
    const Matrix qx = m2(1.0, 0.2, 0.2, 0.7), qy = m2(0.5, -0.1, -0.1, 0.9);
    FisherInputs in{VectorMixture::gaussian(Vector::Zero(2), qx), VectorMixture::gaussian(Vector::Ones(2), qy),
                    0.3 * Matrix::Identity(2, 2), 0.8 * Matrix::Identity(2, 2), std::nullopt};
    const FisherReport r = check_fisher_inequalities(in, mc(400000));
    EXPECT_TRUE(r.ok());
    EXPECT_LE(std::abs(r.cramer_rao.value), 4 * r.cramer_rao.stderr_ + 1e-9);
    EXPECT_LE(std::abs(r.convolution.value), 4 * r.convolution.stderr_ + 1e-9);
    EXPECT_LE(std::abs(r.shift.value), 4 * r.shift.stderr_ + 1e-9);
}

TEST(InfoEst, FisherInequalitiesMixtures)
{
    NormalSource g(68);
    for (int i = 0; i < 5; ++i)
    {
        const VectorMixture x = random_vector_mixture(g, 2, 2, 2);
        VectorMixture y = random_vector_mixture(g, 2, 2, 2);
        for (std::size_t b = 0; b < 2; ++b)
            y.branches[b].prob = x.branches[b].prob;
        Matrix pv(3, 2);
        pv << 0.9, 0.1, 0.5, 0.5, 0.2, 0.8;
        const std::vector<double> pvv = {0.3, 0.3, 0.4};
        VectorMixture xu = x;
        const auto pu = MarkovChain::marginal_u(pvv, pv);
        for (std::size_t b = 0; b < 2; ++b)
            xu.branches[b].prob = pu[b];
        FisherInputs in{x, y, 0.2 * Matrix::Identity(2, 2), random_spd(g, 2, 0.3),
                        MarkovChain{pvv, pv, xu}};
        const FisherReport r = check_fisher_inequalities(in, mc(100000, 1 + i));
        EXPECT_TRUE(r.ok()) << "instance " << i;
        EXPECT_TRUE(r.stein_mean.holds(1e-6));
        EXPECT_TRUE(r.stein_cross.holds(1e-6));
    }
}

// ---- K* -------------------------------------------------------------------------------------------

TEST(InfoEst, KStarGaussianRecoversCovariance)
{
    const Matrix q = m2(1.0, 0.3, 0.3, 0.8);
    const Matrix s1 = Matrix::Identity(2, 2), s2 = 2 * s1, sz = m2(4, 0.5, 0.5, 3);
    const KStarResult r = find_kstar(VectorMixture::gaussian(Vector::Zero(2), q), 2 * q, s1, s2, sz, mc(400000));
    EXPECT_TRUE(r.ok());
    EXPECT_LE((r.k_star - q).norm(), 0.05);
    EXPECT_GE(r.alpha.value, r.bound_low - 3 * r.alpha.stderr_);
    EXPECT_LE(r.alpha.value, r.bound_high + 3 * r.alpha.stderr_);
    EXPECT_NEAR(r.alpha.value, 0.5 * (logdet(q + sz) - logdet(q + s2)), 4 * r.alpha.stderr_ + 1e-12);
}

TEST(InfoEst, KStarPointMass)
{
    const Matrix s1 = Matrix::Identity(2, 2), s2 = m2(2, 0.2, 0.2, 1.5), sz = m2(4, 0.5, 0.5, 3);
    const VectorMixture pm = VectorMixture::gaussian(Vector::Ones(2), Matrix::Zero(2, 2));
    const KStarResult r = find_kstar(pm, s1, s1, s2, sz, mc(400000));
    // common random numbers make the entropy gap exact per sample
    EXPECT_NEAR(r.alpha.value, 0.5 * (logdet(sz) - logdet(s2)), 1e-12);
    EXPECT_LE(r.k_star.norm(), 0.05);
    EXPECT_TRUE(r.ok());
}

TEST(InfoEst, KStarScalarMixtureAndBounds)
{
    NormalSource g(69);
    for (int i = 0; i < 4; ++i)
    {
        const ScalarMixture x = random_scalar_mixture(g, 2, 2);
        const double s = x.conditional_variance() * 1.5;
        const KStarResult r = find_kstar(x, s, 0.5, 1.0, 2.5, mc(200000, 3 + i));
        EXPECT_TRUE(r.ok()) << "instance " << i;
        EXPECT_GE(r.alpha.value, r.bound_low - 3 * r.alpha.stderr_);
        EXPECT_LE(r.alpha.value, r.bound_high + 3 * r.alpha.stderr_);
        EXPECT_GE(r.inequality.value, -3 * r.inequality.stderr_);
    }
    EXPECT_THROW(find_kstar(binary(1.0, 0.1), 2.0, 1.0, 0.5, 2.0), PreconditionError);
    EXPECT_THROW(find_kstar(binary(1.0, 0.1), 0.5, 0.5, 1.0, 2.0), PreconditionError);
}

TEST(InfoEst, EstimatorsAreDeterministic)
{
    NormalSource g(70);
    const VectorMixture x = random_vector_mixture(g, 2, 2, 2);
    const Estimate a = entropy_plus_noise(x, Matrix::Identity(2, 2), mc(50000, 5));
    const Estimate b = entropy_plus_noise(x, Matrix::Identity(2, 2), mc(50000, 5));
    const Estimate c = entropy_plus_noise(x, Matrix::Identity(2, 2), mc(50000, 6));
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.stderr_, b.stderr_);
    EXPECT_NE(a.value, c.value);
}

TEST(InfoEst, StderrShrinksWithSamples)
{
    const ScalarMixture x = binary(1.0, 0.2);
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t n : {10000u, 100000u, 1000000u})
    {
        const Estimate e = entropy_plus_noise(to_vector(x), Matrix::Identity(1, 1), mc(n));
        EXPECT_LT(e.stderr_, prev / 2.5);
        EXPECT_NEAR(e.value, entropy_plus_noise(x, 1.0).value, 4 * e.stderr_);
        prev = e.stderr_;
    }
}

TEST(InfoEst, SampledComplementaryResidualShrinks)
{
    // J(sqrt(t) X + N) by Monte Carlo against 1 - t mmse by quadrature
    const ScalarMixture x = binary(1.0, 0.2);
    const double t = 1.0;
    const double target = 1.0 - t * mmse(x, t);
    double prev_se = std::numeric_limits<double>::infinity();
    for (std::size_t n : {10000u, 100000u, 1000000u})
    {
        const FisherEstimate j = fisher(to_vector(x.affine_noise(std::sqrt(t), 1.0)), mc(n, 11));
        const double se = j.moments.stderr_at(0);
        EXPECT_LE(std::abs(j.value(0, 0) - target), 3 * se);
        EXPECT_NEAR(prev_se / se, std::sqrt(10.0), std::isinf(prev_se) ? INFINITY : 1.0);
        prev_se = se;
    }
}
