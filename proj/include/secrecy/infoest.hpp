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
// Numerical checks of the entropy / Fisher information / MMSE identities and
// inequalities for Gaussian-mixture inputs, and the K* construction.
//
// Scalar inputs use quadrature (standard error reported as zero); vector
// inputs use Monte Carlo. Error bars of nonlinear functions of Monte Carlo
// means come from the delta method on the joint feature moments.

#pragma once

#include "montecarlo.hpp"
#include "quadrature.hpp"

#include <optional>

namespace secrecy
{

/// Both sides of an identity and its residual.
struct IdentityCheck
{
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
    double stderr_ = 0.0;

    bool within(double floor) const { return residual <= std::max(floor, 3.0 * stderr_); }
};

/// A quantity that should be nonnegative, with its standard error.
struct Margin
{
    double value = 0.0;
    double stderr_ = 0.0;

    bool holds(double tol) const { return value >= -(tol + 3.0 * stderr_); }
};

namespace detail
{
/// Standard error of fn(mean) by central differences on the feature means.
template <class F> double delta_stderr(const Moments &m, F &&fn)
{
    Vector f = m.mean;
    Vector grad(f.size());
    for (Eigen::Index i = 0; i < f.size(); ++i)
    {
        const double h = 1e-6 * (1.0 + std::abs(f(i)));
        const double keep = f(i);
        f(i) = keep + h;
        const double up = fn(f);
        f(i) = keep - h;
        const double dn = fn(f);
        f(i) = keep;
        grad(i) = (up - dn) / (2.0 * h);
    }
    return m.stderr_of(grad);
}

inline Matrix unvec(const Vector &f, Eigen::Index offset, Eigen::Index d)
{
    return symmetrize(Eigen::Map<const Matrix>(f.data() + offset, d, d));
}

inline std::pair<double, Vector> min_eigenpair(const Matrix &a)
{
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(a));
    return {es.eigenvalues()(0), es.eigenvectors().col(0)};
}

inline Matrix cholesky_factor(const Matrix &a)
{
    Eigen::LLT<Matrix> llt(symmetrize(a));
    if (llt.info() != Eigen::Success)
        throw PreconditionError("noise covariance must be positive definite");
    return llt.matrixL();
}
} // namespace detail

// ---- entropy, MMSE, Fisher information --------------------------------------

/// h(X + sqrt(t) N | U), scalar (quadrature).
inline Estimate entropy_plus_noise(const ScalarMixture &x, double t, const EstimatorConfig &cfg = {})
{
    require(t >= 0.0, "entropy_plus_noise: t must be nonnegative");
    return {scalar_entropy(x.affine_noise(1.0, t), cfg), 0.0};
}

/// h(X + N | U) with N ~ N(0, noise), vector (Monte Carlo).
inline Estimate entropy_plus_noise(const VectorMixture &x, const Matrix &noise, const EstimatorConfig &cfg = {},
                                   std::uint64_t stream = 0)
{
    x.validate();
    require_dims(noise.rows() == x.dim() && noise.cols() == x.dim(), "noise covariance vs mixture dimension");
    return mc_entropy(x.plus_noise(noise), cfg, stream);
}

inline double mmse(const ScalarMixture &x, double t, const EstimatorConfig &cfg = {})
{
    return scalar_mmse(x, t, cfg);
}

inline double fisher(const ScalarMixture &y, const EstimatorConfig &cfg = {})
{
    return scalar_fisher(y, cfg);
}

inline FisherEstimate fisher(const VectorMixture &y, const EstimatorConfig &cfg = {}, std::uint64_t stream = 0)
{
    return mc_fisher(y, cfg, stream);
}

// ---- identities ---------------------------------------------------------------

/// d/dt h(X + sqrt(t) N | U) against J(X + sqrt(t) N | U) / 2.
inline IdentityCheck check_de_bruijn(const ScalarMixture &x, double t, const EstimatorConfig &cfg = {})
{
    require(t > 0.0, "check_de_bruijn: t must be positive");
    cfg.validate();
    auto h = [&](double s) { return scalar_entropy(x.affine_noise(1.0, s), cfg); };
    const double step = cfg.fd_step * t;
    const double d1 = (h(t + step) - h(t - step)) / (2.0 * step);
    const double d2 = (h(t + 0.5 * step) - h(t - 0.5 * step)) / step;
    IdentityCheck c;
    c.lhs = (4.0 * d2 - d1) / 3.0;
    c.rhs = 0.5 * scalar_fisher(x.affine_noise(1.0, t), cfg);
    c.residual = std::abs(c.lhs - c.rhs);
    return c;
}

/// Directional form: d/de h(X + N_e | U) at e = 0 with Cov(N_e) = noise + e D,
/// against tr(J(X + N | U) D) / 2. Pathwise central differences with common
/// random numbers and Richardson extrapolation, one sample at a time.
inline IdentityCheck check_de_bruijn(const VectorMixture &x, const Matrix &noise, const Matrix &direction,
                                     const EstimatorConfig &cfg = {}, std::uint64_t stream = 0)
{
    x.validate();
    cfg.validate();
    const Eigen::Index d = x.dim();
    require_dims(noise.rows() == d && direction.rows() == d, "de Bruijn operands");
    PsdMatrix::from(direction);
    require(direction.trace() > 0.0, "check_de_bruijn: direction must be nonzero");
    const double step = cfg.fd_step * noise.trace() / direction.trace();

    const double eps[4] = {step, -step, 0.5 * step, -0.5 * step};
    std::vector<SmallMat> chol;
    std::vector<MixtureDensity> dens;
    for (double e : eps)
    {
        chol.emplace_back(detail::cholesky_factor(noise + e * direction));
        dens.emplace_back(x.plus_noise(noise + e * direction));
    }
    const SmallMat chol0 = detail::cholesky_factor(noise);
    const MixtureDensity dens0(x.plus_noise(noise));
    const SmallMat dir = direction;
    const MixtureSampler sampler(x);

    const Moments m = run_pairs(cfg.mc_samples, derive_seed(cfg.seed, stream), 3, [&](NormalSource &g, Vector &f) {
        SmallVec xs[2];
        const std::size_t u = sampler.draw_pair(g, xs);
        SmallVec z(d);
        for (Eigen::Index i = 0; i < d; ++i)
            z(i) = g();
        f.setZero();
        for (int a = 0; a < 2; ++a)
        {
            const SmallVec za = a == 0 ? z : SmallVec(-z);
            double v[4];
            for (int k = 0; k < 4; ++k)
                v[k] = -dens[static_cast<std::size_t>(k)].log_density(u, xs[a] + chol[static_cast<std::size_t>(k)] * za);
            const double d1 = (v[0] - v[1]) / (2.0 * step);
            const double d2 = (v[2] - v[3]) / step;
            const double lhs = (4.0 * d2 - d1) / 3.0;
            SmallVec rho;
            dens0.log_density(u, xs[a] + chol0 * za, &rho);
            const double rhs = 0.5 * rho.dot(dir * rho);
            f(0) += 0.5 * (lhs - rhs);
            f(1) += 0.5 * lhs;
            f(2) += 0.5 * rhs;
        }
    });
    IdentityCheck c;
    c.lhs = m.mean(1);
    c.rhs = m.mean(2);
    c.residual = std::abs(m.mean(0));
    c.stderr_ = m.stderr_at(0);
    return c;
}

/// I(X; sqrt(t2) X + N | U) - I(X; sqrt(t1) X + N | U) against half the
/// integral of mmse(X, t | U) over [t1, t2].
inline IdentityCheck check_immse(const ScalarMixture &x, double t1, double t2, const EstimatorConfig &cfg = {})
{
    require(t1 >= 0.0 && t1 <= t2, "check_immse: need 0 <= t1 <= t2");
    IdentityCheck c;
    c.lhs = scalar_mutual_information(x, t2, cfg) - scalar_mutual_information(x, t1, cfg);
    c.rhs = 0.5 * integrate([&](double t) { return scalar_mmse(x, t, cfg); }, t1, t2);
    c.residual = std::abs(c.lhs - c.rhs);
    return c;
}

/// J(sqrt(t) X + N | U) against 1 - t mmse(X, t | U).
inline IdentityCheck check_complementary(const ScalarMixture &x, double t, const EstimatorConfig &cfg = {})
{
    require(t >= 0.0, "check_complementary: t must be nonnegative");
    IdentityCheck c;
    c.lhs = scalar_fisher(x.affine_noise(std::sqrt(t), 1.0), cfg);
    c.rhs = 1.0 - t * scalar_mmse(x, t, cfg);
    c.residual = std::abs(c.lhs - c.rhs);
    return c;
}

struct CrossingReport
{
    std::vector<double> values; ///< f(t) on the grid
    std::size_t sign_changes = 0;
    bool negative_to_positive = true; ///< every change goes from - to +
    bool identically_zero = false;
    bool ok = false;
};

/// Sign pattern of f(t) = s / (s t + 1) - mmse(X, t | U); values within
/// zero_tol of zero carry no sign.
inline CrossingReport check_single_crossing(const ScalarMixture &x, double sigma_sq, const std::vector<double> &grid,
                                            const EstimatorConfig &cfg = {}, double zero_tol = 1e-10)
{
    require(sigma_sq > 0.0, "check_single_crossing: sigma^2 must be positive");
    require(!grid.empty(), "check_single_crossing: empty grid");
    for (std::size_t i = 0; i < grid.size(); ++i)
        require(grid[i] >= 0.0 && (i == 0 || grid[i] > grid[i - 1]), "grid must be increasing in [0, inf)");
    CrossingReport r;
    int last = 0;
    bool all_zero = true;
    for (double t : grid)
    {
        const double f = sigma_sq / (sigma_sq * t + 1.0) - scalar_mmse(x, t, cfg);
        r.values.push_back(f);
        if (std::abs(f) > 1e-8)
            all_zero = false;
        const int s = f > zero_tol ? 1 : (f < -zero_tol ? -1 : 0);
        if (s == 0)
            continue;
        if (last != 0 && s != last)
        {
            ++r.sign_changes;
            if (s < 0)
                r.negative_to_positive = false;
        }
        last = s;
    }
    r.identically_zero = all_zero;
    r.ok = r.sign_changes <= 1 && r.negative_to_positive;
    return r;
}

// ---- worst-case additive noise --------------------------------------------------

struct WorstNoiseEntry
{
    double gaussian = 0.0;  ///< I(N; N + X_G), closed form
    Estimate candidate;     ///< I(N; N + X), +inf when X has no density
    bool ok = false;        ///< gaussian <= candidate + 3 stderr
};

/// I(N; N + X) = h(N + X) - h(X) for N ~ N(0, sigma) and each candidate X with
/// Cov(X) = K_X; the Gaussian X with covariance K_X should be the smallest.
inline std::vector<WorstNoiseEntry> check_worst_noise(const Matrix &sigma, const Matrix &k_x,
                                                      const std::vector<VectorMixture> &candidates,
                                                      const EstimatorConfig &cfg = {})
{
    cfg.validate();
    const Eigen::Index d = sigma.rows();
    require_dims(sigma.cols() == d && k_x.rows() == d && k_x.cols() == d, "worst-noise operands");
    require(PsdMatrix::from(sigma).is_positive_definite(), "noise covariance must be positive definite");
    require(PsdMatrix::from(k_x).is_positive_definite(), "K_X must be positive definite");
    const double gaussian = 0.5 * (logdet(sigma + k_x) - logdet(k_x));
    const SmallMat lsig = detail::cholesky_factor(sigma);

    std::vector<WorstNoiseEntry> out;
    for (std::size_t i = 0; i < candidates.size(); ++i)
    {
        const VectorMixture xm = candidates[i].marginal();
        xm.validate();
        require_dims(xm.dim() == d, "candidate dimension");
        const Matrix cov = xm.conditional_covariance();
        const double scale = 1.0 + k_x.cwiseAbs().maxCoeff();
        if ((cov - k_x).cwiseAbs().maxCoeff() > 1e-8 * scale)
            throw PreconditionError("check_worst_noise: candidate " + std::to_string(i) +
                                    " covariance does not match K_X");
        WorstNoiseEntry e;
        e.gaussian = gaussian;
        if (!xm.has_density())
        {
            e.candidate = {std::numeric_limits<double>::infinity(), 0.0};
            e.ok = true;
            out.push_back(e);
            continue;
        }
        const MixtureSampler sampler(xm);
        const MixtureDensity px(xm);
        const MixtureDensity py(xm.plus_noise(sigma));
        const Moments m =
            run_pairs(cfg.mc_samples, derive_seed(cfg.seed, 100 + i), 1, [&](NormalSource &g, Vector &f) {
                SmallVec xs[2];
                const std::size_t u = sampler.draw_pair(g, xs);
                SmallVec z(d);
                for (Eigen::Index k = 0; k < d; ++k)
                    z(k) = g();
                const SmallVec n = lsig * z;
                f(0) = 0.5 * (-py.log_density(u, xs[0] + n) + px.log_density(u, xs[0]) - py.log_density(u, xs[1] - n) +
                              px.log_density(u, xs[1]));
            });
        e.candidate = {m.mean(0), m.stderr_at(0)};
        e.ok = e.gaussian <= e.candidate.value + 3.0 * e.candidate.stderr_;
        out.push_back(e);
    }
    return out;
}

// ---- Fisher information inequalities ------------------------------------------

/// Largest |entry| and the worst |entry| - 3 stderr over a vector of estimated
/// quantities that should vanish.
struct ZeroCheck
{
    double max_abs = 0.0;
    double worst_excess = 0.0;

    bool holds(double tol) const { return worst_excess <= tol; }
};

struct FisherInputs
{
    VectorMixture x; ///< X given U
    VectorMixture y; ///< Y given U, conditionally independent of X
    Matrix shift_sigma1;
    Matrix shift_sigma2; ///< shift_sigma1 <= shift_sigma2
    std::optional<MarkovChain> chain;
};

struct FisherReport
{
    ZeroCheck stein_mean;  ///< E[rho(X|U)] = 0
    ZeroCheck stein_cross; ///< E[X rho(X|U)^T] = -I
    Margin cramer_rao;     ///< lambda_min(J(X|U) - Cov(X|U)^{-1})
    Margin convolution;    ///< lambda_min([J(X|U)^{-1} + J(Y|U)^{-1}]^{-1} - J(X+Y|U))
    Margin shift;          ///< lambda_min(J(X+V2|U)^{-1} - S2 - J(X+V1|U)^{-1} + S1)
    std::optional<Margin> markov; ///< lambda_min(J(X|U) - J(X|V))

    bool ok(double tol = 1e-6) const
    {
        return stein_mean.holds(tol) && stein_cross.holds(tol) && cramer_rao.holds(tol) && convolution.holds(tol) &&
               shift.holds(tol) && (!markov || markov->holds(tol));
    }
};

namespace detail
{
inline ZeroCheck zero_check(const Moments &m, Eigen::Index offset, Eigen::Index count, const Vector &target)
{
    ZeroCheck z;
    z.worst_excess = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < count; ++i)
    {
        const double v = std::abs(m.mean(offset + i) - target(i));
        z.max_abs = std::max(z.max_abs, v);
        z.worst_excess = std::max(z.worst_excess, v - 3.0 * m.stderr_at(offset + i));
    }
    return z;
}
} // namespace detail

inline FisherReport check_fisher_inequalities(const FisherInputs &in, const EstimatorConfig &cfg = {})
{
    cfg.validate();
    in.x.validate();
    in.y.validate();
    const Eigen::Index d = in.x.dim();
    require_dims(in.y.dim() == d, "X and Y dimensions");
    require(in.x.has_density() && in.y.has_density(), "Fisher inequalities need X and Y with densities");
    require(loewner_leq(in.shift_sigma1, in.shift_sigma2), "shift covariances must be ordered");
    FisherReport r;

    // Stein identities: features rho (d) and vec(x rho^T) (d*d)
    {
        const MixtureSampler sampler(in.x);
        const MixtureDensity dens(in.x);
        const Moments m = run_pairs(cfg.mc_samples, derive_seed(cfg.seed, 11), d + d * d, [&](NormalSource &g, Vector &f) {
            SmallVec xs[2], s0, s1;
            const std::size_t u = sampler.draw_pair(g, xs);
            dens.log_density(u, xs[0], &s0);
            dens.log_density(u, xs[1], &s1);
            f.head(d) = 0.5 * (s0 + s1);
            const SmallMat o = 0.5 * (xs[0] * s0.transpose() + xs[1] * s1.transpose());
            f.tail(d * d) = Eigen::Map<const Vector>(o.data(), d * d);
        });
        r.stein_mean = detail::zero_check(m, 0, d, Vector::Zero(d));
        const Matrix minus_i = -Matrix::Identity(d, d);
        r.stein_cross = detail::zero_check(m, d, d * d, Eigen::Map<const Vector>(minus_i.data(), d * d));
    }

    const FisherEstimate jx = mc_fisher(in.x, cfg, 12);
    {
        const Matrix cov = in.x.conditional_covariance();
        const auto [lam, v] = detail::min_eigenpair(jx.value - spd_inverse(cov));
        r.cramer_rao = {lam, jx.stderr_quadratic(v)};
    }
    {
        const FisherEstimate jy = mc_fisher(in.y, cfg, 13);
        const FisherEstimate js = mc_fisher(conditional_sum(in.x, in.y), cfg, 14);
        const Matrix jxi = spd_inverse(jx.value), jyi = spd_inverse(jy.value);
        const Matrix w = spd_inverse(jxi + jyi);
        const auto [lam, v] = detail::min_eigenpair(w - js.value);
        const Vector a = jxi * w * v, b = jyi * w * v;
        const double se = std::hypot(std::hypot(jx.stderr_quadratic(a), jy.stderr_quadratic(b)), js.stderr_quadratic(v));
        r.convolution = {lam, se};
    }
    {
        const FisherEstimate j1 = mc_fisher(in.x.plus_noise(in.shift_sigma1), cfg, 15);
        const FisherEstimate j2 = mc_fisher(in.x.plus_noise(in.shift_sigma2), cfg, 16);
        const Matrix j1i = spd_inverse(j1.value), j2i = spd_inverse(j2.value);
        const auto [lam, v] = detail::min_eigenpair(j2i - in.shift_sigma2 - j1i + in.shift_sigma1);
        const double se = std::hypot(j2.stderr_quadratic(j2i * v), j1.stderr_quadratic(j1i * v));
        r.shift = {lam, se};
    }
    if (in.chain)
    {
        const FisherEstimate ju = mc_fisher(in.chain->x_given_u, cfg, 17);
        const FisherEstimate jv = mc_fisher(in.chain->x_given_v(), cfg, 18);
        const auto [lam, v] = detail::min_eigenpair(ju.value - jv.value);
        r.markov = Margin{lam, std::hypot(ju.stderr_quadratic(v), jv.stderr_quadratic(v))};
    }
    return r;
}

// ---- K* construction ----------------------------------------------------------

struct KStarResult
{
    Matrix k_star;
    double t_star = 0.0;
    Estimate alpha; ///< h(X + N_Z | U) - h(X + N_2 | U)
    Estimate beta;  ///< h(X + N_Z | U) - h(X + N_1 | U)
    Matrix j2;      ///< J(X + N_2 | U)
    Matrix jz;      ///< J(X + N_Z | U)
    double r0 = 0.0, r1 = 0.0;
    bool clamped = false;              ///< alpha was pulled into [r(1), r(0)]
    double delta_projection = 0.0;     ///< distance of Delta to the PSD cone
    IdentityCheck equality;            ///< 1/2 log |K*+S_Z| / |K*+S_2| against alpha
    Margin lower;                      ///< lambda_min(K*)
    Margin upper;                      ///< lambda_min(S - K*)
    Margin inequality;                 ///< beta - 1/2 log |K*+S_Z| / |K*+S_1|
    double bound_low = 0.0, bound_high = 0.0; ///< range alpha must fall in

    bool ok(double tol = 1e-8) const
    {
        return lower.holds(tol) && upper.holds(tol) && inequality.holds(tol) && equality.within(tol);
    }
};

namespace detail
{
struct KStarCore
{
    Matrix k;
    double t = 0.0, r0 = 0.0, r1 = 0.0, alpha = 0.0, alpha_used = 0.0, beta = 0.0;
    double delta_projection = 0.0;
};

// Features: [alpha, beta, vec J2, vec JZ].
inline KStarCore kstar_from_features(const Vector &f, Eigen::Index d, const Matrix &s1, const Matrix &s2,
                                     const Matrix &sz, const Tolerance &tol)
{
    (void)s1;
    KStarCore c;
    c.alpha = f(0);
    c.beta = f(1);
    const Matrix j2 = unvec(f, 2, d), jz = unvec(f, 2 + d * d, d);
    const Matrix a = spd_inverse(j2);
    const Matrix b = sz - s2;
    const Matrix delta_raw = symmetrize(spd_inverse(jz) + s2 - sz - a);
    const Matrix delta = project_psd(delta_raw);
    c.delta_projection = (delta - delta_raw).norm();
    c.r0 = r_function(a, b, delta, 0.0);
    c.r1 = r_function(a, b, delta, 1.0);
    c.alpha_used = std::clamp(c.alpha, c.r1, c.r0);
    c.t = solve_r_equals(a, b, delta, c.alpha_used, tol);
    c.k = symmetrize(a + c.t * delta - s2);
    return c;
}
} // namespace detail

/// Estimates the entropy gap and conditional Fisher information, solves
/// r(t*) = alpha and returns K* = A + t* Delta - Sigma_2 with its checks.
inline KStarResult find_kstar(const VectorMixture &x, const Matrix &s, const Matrix &sigma1, const Matrix &sigma2,
                              const Matrix &sigma_z, const EstimatorConfig &cfg = {}, const Tolerance &tol = {})
{
    x.validate();
    cfg.validate();
    const Eigen::Index d = x.dim();
    for (const Matrix *m : {&s, &sigma1, &sigma2, &sigma_z})
        require_dims(m->rows() == d && m->cols() == d, "find_kstar operands vs mixture dimension");
    require(PsdMatrix::from(sigma1, tol).is_positive_definite(tol), "Sigma_1 must be positive definite");
    require(loewner_leq(sigma1, sigma2, tol) && loewner_leq(sigma2, sigma_z, tol),
            "noise covariances must satisfy Sigma_1 <= Sigma_2 <= Sigma_Z");
    require(loewner_leq(x.conditional_covariance(), s, tol), "Cov(X | U) must not exceed S");

    const MixtureSampler sampler(x);
    const MixtureDensity p1(x.plus_noise(sigma1)), p2(x.plus_noise(sigma2)), pz(x.plus_noise(sigma_z));
    const SmallMat l1 = detail::cholesky_factor(sigma1), l2 = detail::cholesky_factor(sigma2),
                   lz = detail::cholesky_factor(sigma_z);
    const Eigen::Index nf = 2 + 2 * d * d;
    const Moments m = run_pairs(cfg.mc_samples, derive_seed(cfg.seed, 21), nf, [&](NormalSource &g, Vector &f) {
        SmallVec xs[2];
        const std::size_t u = sampler.draw_pair(g, xs);
        SmallVec z(d);
        for (Eigen::Index i = 0; i < d; ++i)
            z(i) = g();
        f.setZero();
        for (int a = 0; a < 2; ++a)
        {
            const SmallVec za = a == 0 ? z : SmallVec(-z);
            SmallVec r2, rz;
            const double hz = -pz.log_density(u, xs[a] + lz * za, &rz);
            const double h2 = -p2.log_density(u, xs[a] + l2 * za, &r2);
            const double h1 = -p1.log_density(u, xs[a] + l1 * za);
            f(0) += 0.5 * (hz - h2);
            f(1) += 0.5 * (hz - h1);
            const SmallMat o2 = 0.5 * r2 * r2.transpose(), oz = 0.5 * rz * rz.transpose();
            f.segment(2, d * d) += Eigen::Map<const Vector>(o2.data(), d * d);
            f.segment(2 + d * d, d * d) += Eigen::Map<const Vector>(oz.data(), d * d);
        }
    });

    auto core = [&](const Vector &f) { return detail::kstar_from_features(f, d, sigma1, sigma2, sigma_z, tol); };
    const detail::KStarCore c = core(m.mean);

    KStarResult r;
    r.k_star = c.k;
    r.t_star = c.t;
    r.alpha = {c.alpha, m.stderr_at(0)};
    r.beta = {c.beta, m.stderr_at(1)};
    r.j2 = detail::unvec(m.mean, 2, d);
    r.jz = detail::unvec(m.mean, 2 + d * d, d);
    r.r0 = c.r0;
    r.r1 = c.r1;
    r.delta_projection = c.delta_projection;
    r.bound_low = 0.5 * (logdet(s + sigma_z) - logdet(s + sigma2));
    r.bound_high = 0.5 * (logdet(sigma_z) - logdet(sigma2));

    // alpha must lie in [r(1), r(0)] up to estimator noise
    const double se_hi = detail::delta_stderr(m, [&](const Vector &f) { return f(0) - core(f).r0; });
    const double se_lo = detail::delta_stderr(m, [&](const Vector &f) { return core(f).r1 - f(0); });
    if (c.alpha > c.r0 + tol.residual_tol + 3.0 * se_hi || c.alpha < c.r1 - tol.residual_tol - 3.0 * se_lo)
        throw NumericalError("find_kstar: entropy gap " + std::to_string(c.alpha) + " outside [r(1), r(0)] = [" +
                             std::to_string(c.r1) + ", " + std::to_string(c.r0) + "] beyond estimator noise");
    r.clamped = c.alpha_used != c.alpha;

    auto gap_z2 = [&](const Matrix &k) { return 0.5 * (logdet(k + sigma_z) - logdet(k + sigma2)); };
    auto gap_z1 = [&](const Matrix &k) { return 0.5 * (logdet(k + sigma_z) - logdet(k + sigma1)); };
    r.equality.lhs = gap_z2(c.k);
    r.equality.rhs = c.alpha;
    r.equality.residual = std::abs(r.equality.lhs - r.equality.rhs);
    r.equality.stderr_ = detail::delta_stderr(m, [&](const Vector &f) { return gap_z2(core(f).k) - f(0); });

    r.lower = {min_eigenvalue(c.k), detail::delta_stderr(m, [&](const Vector &f) { return min_eigenvalue(core(f).k); })};
    r.upper = {min_eigenvalue(s - c.k),
               detail::delta_stderr(m, [&](const Vector &f) { return min_eigenvalue(s - core(f).k); })};
    r.inequality = {c.beta - gap_z1(c.k),
                    detail::delta_stderr(m, [&](const Vector &f) { return f(1) - gap_z1(core(f).k); })};
    return r;
}

inline KStarResult find_kstar(const ScalarMixture &x, double s, double sigma1_sq, double sigma2_sq, double sigmaZ_sq,
                              const EstimatorConfig &cfg = {}, const Tolerance &tol = {})
{
    auto one = [](double v) { return Matrix::Constant(1, 1, v); };
    return find_kstar(to_vector(x), one(s), one(sigma1_sq), one(sigma2_sq), one(sigmaZ_sq), cfg, tol);
}

} // namespace secrecy
