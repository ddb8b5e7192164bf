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
// Weighted secrecy sum-rate maximization on aligned channels, KKT multiplier
// recovery and residuals, and boundary sweeps.
//
// Positive-weight users are handled in ascending-weight order ("positions");
// zero-weight users get K = 0 and are placed ahead of them in the DPC order.
// Multipliers follow the convention in which the stationarity of user j reads
//     G_j + M_j = M_Z,
// where G_j is twice the gradient of the weighted sum with respect to K_j.

#pragma once

#include "rates.hpp"
#include "rng.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace secrecy
{

using Weights = std::vector<double>;

struct WeightOrder
{
    Permutation pi;       ///< all users, ascending weight, stable
    Permutation pi_prime; ///< positive-weight users, ascending weight
    std::size_t m = 0;
};

inline WeightOrder weight_permutation(const Weights &mu)
{
    require(!mu.empty(), "weights must not be empty");
    for (double w : mu)
        require(std::isfinite(w) && w >= 0.0, "weights must be finite and nonnegative");
    WeightOrder out;
    out.pi = identity_order(mu.size());
    std::stable_sort(out.pi.begin(), out.pi.end(), [&](std::size_t a, std::size_t b) { return mu[a] < mu[b]; });
    for (std::size_t u : out.pi)
        if (mu[u] > 0.0)
            out.pi_prime.push_back(u);
    out.m = out.pi_prime.size();
    require(out.m > 0, "at least one weight must be strictly positive");
    return out;
}

struct KktCertificate
{
    std::vector<Matrix> m; ///< one per position in pi_prime
    Matrix m_z;
    std::vector<double> stationarity; ///< m entries
    std::vector<double> slackness;    ///< m + 1 entries, the last one for M_Z
    std::vector<double> projection;   ///< PSD-projection distance of each M_j, then M_Z

    double max_stationarity() const
    {
        double r = 0.0;
        for (double v : stationarity)
            r = std::max(r, v);
        return r;
    }
    double max_slackness() const
    {
        double r = 0.0;
        for (double v : slackness)
            r = std::max(r, v);
        return r;
    }
    double max_residual() const { return std::max(max_stationarity(), max_slackness()); }
};

namespace detail
{
// Data of the weighted problem in position order.
struct PositionView
{
    WeightOrder order;
    std::vector<double> mu;        // ascending, positive
    std::vector<Matrix> sigmas;    // noise of each position
    std::vector<Matrix> k;         // partition part of each position
    std::vector<Matrix> prefix;    // P_j = base + K_1 + ... + K_j, j = 0..m (P_0 = base)
    Matrix sigma_z;
    Matrix s;
};

inline PositionView positions(const AlignedChannel &ch, const CovariancePartition &p, const Weights &mu)
{
    require_dims(mu.size() == ch.users(), "weights vs users");
    require_dims(p.size() == ch.users(), "partition vs users");
    PositionView v;
    v.order = weight_permutation(mu);
    const Eigen::Index n = ch.dim();
    Matrix base = Matrix::Zero(n, n);
    for (std::size_t u = 0; u < ch.users(); ++u)
    {
        require_dims(p.parts[u].rows() == n && p.parts[u].cols() == n, "partition part vs S");
        if (mu[u] == 0.0)
            base += p.parts[u];
    }
    v.prefix.push_back(base);
    for (std::size_t u : v.order.pi_prime)
    {
        v.mu.push_back(mu[u]);
        v.sigmas.push_back(ch.sigmas[u]);
        v.k.push_back(p.parts[u]);
        v.prefix.push_back(v.prefix.back() + p.parts[u]);
    }
    v.sigma_z = ch.sigma_z;
    v.s = ch.s;
    return v;
}

// G_j for every position (twice the gradient of sum mu_j R_j).
inline std::vector<Matrix> weighted_gradient(const PositionView &v)
{
    const std::size_t m = v.mu.size();
    std::vector<Matrix> own(m), cross(m);
    for (std::size_t k = 0; k < m; ++k)
    {
        own[k] = v.mu[k] * (spd_inverse(v.prefix[k + 1] + v.sigmas[k]) - spd_inverse(v.prefix[k + 1] + v.sigma_z));
        cross[k] = v.mu[k] * (spd_inverse(v.prefix[k] + v.sigmas[k]) - spd_inverse(v.prefix[k] + v.sigma_z));
    }
    std::vector<Matrix> g(m);
    Matrix acc = Matrix::Zero(v.s.rows(), v.s.rows());
    for (std::size_t j = m; j-- > 0;)
    {
        acc += own[j];
        if (j + 1 < m)
            acc -= cross[j + 1];
        g[j] = acc;
    }
    return g;
}
} // namespace detail

/// Sum of mu_k R_k with the ascending-weight DPC order.
inline double weighted_objective(const AlignedChannel &ch, const CovariancePartition &p, const Weights &mu)
{
    const WeightOrder wo = weight_permutation(mu);
    return dpc_rates_aligned(ch, p, wo.pi).weighted_sum(mu);
}

/// Residuals of the stationarity chain and complementary slackness.
inline KktCertificate kkt_residuals(const AlignedChannel &ch, const CovariancePartition &p, const Weights &mu,
                                    KktCertificate cert)
{
    const detail::PositionView v = detail::positions(ch, p, mu);
    const std::size_t m = v.mu.size();
    require_dims(cert.m.size() == m, "certificate carries one multiplier per positive-weight user");
    const Eigen::Index n = ch.dim();
    for (const auto &mj : cert.m)
        require_dims(mj.rows() == n && mj.cols() == n, "multiplier dimension");
    require_dims(cert.m_z.rows() == n && cert.m_z.cols() == n, "M_Z dimension");

    cert.stationarity.assign(m, 0.0);
    cert.slackness.assign(m + 1, 0.0);
    for (std::size_t j = 0; j < m; ++j)
    {
        const Matrix &pj = v.prefix[j + 1];
        Matrix r;
        if (j + 1 < m)
            r = v.mu[j] * spd_inverse(pj + v.sigmas[j]) + (v.mu[j + 1] - v.mu[j]) * spd_inverse(pj + v.sigma_z) +
                cert.m[j] - v.mu[j + 1] * spd_inverse(pj + v.sigmas[j + 1]) - cert.m[j + 1];
        else
            r = v.mu[j] * spd_inverse(pj + v.sigmas[j]) + cert.m[j] - v.mu[j] * spd_inverse(pj + v.sigma_z) -
                cert.m_z;
        cert.stationarity[j] = r.norm();
        cert.slackness[j] = (cert.m[j] * v.k[j]).norm();
    }
    cert.slackness[m] = (cert.m_z * (ch.s - v.prefix[m])).norm();
    return cert;
}

/// Closed-form multipliers from slackness: M_Z S = sum_j G_j K_j, then
/// M_j = M_Z - G_j; each is projected onto the PSD cone.
inline KktCertificate recover_multipliers(const AlignedChannel &ch, const CovariancePartition &p, const Weights &mu)
{
    const detail::PositionView v = detail::positions(ch, p, mu);
    const std::size_t m = v.mu.size();
    const std::vector<Matrix> g = detail::weighted_gradient(v);
    const Eigen::Index n = ch.dim();

    Matrix gk = Matrix::Zero(n, n);
    for (std::size_t j = 0; j < m; ++j)
        gk += g[j] * v.k[j];
    const Matrix mz_raw = symmetrize(gk * spd_inverse(ch.s));

    KktCertificate cert;
    cert.m_z = project_psd(mz_raw);
    for (std::size_t j = 0; j < m; ++j)
    {
        const Matrix raw = symmetrize(cert.m_z - g[j]);
        cert.m.push_back(project_psd(raw));
        cert.projection.push_back((cert.m.back() - raw).norm());
    }
    cert.projection.push_back((cert.m_z - mz_raw).norm());
    return kkt_residuals(ch, p, mu, std::move(cert));
}

struct OptimizerOptions
{
    std::size_t restarts = 8;        ///< random starts in addition to the equal split
    std::uint64_t seed = 0x5eedULL;
    std::size_t max_iterations = 10000; ///< Newton steps per start, all barrier stages together
    double gradient_tol = 1e-9;
    double barrier_start = 1.0; ///< relative to the largest weight
    double barrier_end = 1e-14;
    double barrier_shrink = 10.0;
    Tolerance tol;
};

struct BoundaryPoint
{
    Weights mu;
    CovariancePartition partition;
    RatePoint rates;
    KktCertificate certificate;
    double objective = 0.0;
    std::size_t iterations = 0;
    double gradient_norm = 0.0;
    bool converged = false;
    std::string status; ///< "ok", "not-converged" or an error message
};

namespace detail
{
// Smooth objective sum_t c_t logdet(C_t + sum_j s_tj K_j) in the variables
// K_1..K_m, parameterized in an orthonormal basis of symmetric matrices.
class LogdetProgram
{
  public:
    struct Term
    {
        double c;
        Matrix c0;
        std::vector<int> sel;
        bool barrier;
    };

    LogdetProgram(Eigen::Index n, std::size_t m) : n_(n), m_(m)
    {
        for (Eigen::Index a = 0; a < n; ++a)
            for (Eigen::Index b = a; b < n; ++b)
                basis_.emplace_back(a, b);
        d_ = static_cast<Eigen::Index>(basis_.size());
    }

    Eigen::Index size() const { return d_ * static_cast<Eigen::Index>(m_); }
    std::vector<Term> &terms() { return terms_; }

    Vector svec(const Matrix &x) const
    {
        Vector v(d_);
        for (Eigen::Index p = 0; p < d_; ++p)
        {
            const auto [a, b] = basis_[static_cast<std::size_t>(p)];
            v(p) = a == b ? x(a, a) : std::sqrt(2.0) * x(a, b);
        }
        return v;
    }

    Matrix unsvec(const Vector &x, std::size_t j) const
    {
        Matrix k(n_, n_);
        for (Eigen::Index p = 0; p < d_; ++p)
        {
            const auto [a, b] = basis_[static_cast<std::size_t>(p)];
            const double val = x(static_cast<Eigen::Index>(j) * d_ + p);
            if (a == b)
                k(a, a) = val;
            else
                k(a, b) = k(b, a) = val / std::sqrt(2.0);
        }
        return k;
    }

    Vector pack(const std::vector<Matrix> &ks) const
    {
        Vector x(size());
        for (std::size_t j = 0; j < m_; ++j)
            x.segment(static_cast<Eigen::Index>(j) * d_, d_) = svec(ks[j]);
        return x;
    }

    struct Eval
    {
        bool feasible = false;
        double value = 0.0;
        Vector grad;
        Matrix hess;
    };

    Eval evaluate(const Vector &x, double tau, bool second_order) const
    {
        Eval e;
        std::vector<Matrix> ks(m_);
        for (std::size_t j = 0; j < m_; ++j)
            ks[j] = unsvec(x, j);
        e.grad = Vector::Zero(size());
        if (second_order)
            e.hess = Matrix::Zero(size(), size());
        for (const Term &t : terms_)
        {
            const double c = t.barrier ? t.c * tau : t.c;
            Matrix a = t.c0;
            for (std::size_t j = 0; j < m_; ++j)
                if (t.sel[j] != 0)
                    a += t.sel[j] * ks[j];
            Eigen::LLT<Matrix> llt(a);
            if (llt.info() != Eigen::Success)
                return e;
            const double ld = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
            if (!std::isfinite(ld))
                return e;
            e.value += c * ld;
            const Matrix w = symmetrize(llt.solve(Matrix::Identity(n_, n_)));
            const Vector gw = svec(w);
            Matrix hw;
            if (second_order)
            {
                hw.resize(d_, d_);
                for (Eigen::Index p = 0; p < d_; ++p)
                {
                    const auto [a0, b0] = basis_[static_cast<std::size_t>(p)];
                    Matrix ep = Matrix::Zero(n_, n_);
                    if (a0 == b0)
                        ep(a0, a0) = 1.0;
                    else
                        ep(a0, b0) = ep(b0, a0) = 1.0 / std::sqrt(2.0);
                    hw.row(p) = svec(w * ep * w).transpose();
                }
            }
            for (std::size_t j = 0; j < m_; ++j)
            {
                if (t.sel[j] == 0)
                    continue;
                const Eigen::Index oj = static_cast<Eigen::Index>(j) * d_;
                e.grad.segment(oj, d_) += c * t.sel[j] * gw;
                if (!second_order)
                    continue;
                for (std::size_t l = 0; l < m_; ++l)
                {
                    if (t.sel[l] == 0)
                        continue;
                    const Eigen::Index ol = static_cast<Eigen::Index>(l) * d_;
                    e.hess.block(oj, ol, d_, d_) -= c * t.sel[j] * t.sel[l] * hw;
                }
            }
        }
        e.feasible = true;
        return e;
    }

  private:
    Eigen::Index n_;
    std::size_t m_;
    Eigen::Index d_ = 0;
    std::vector<std::pair<Eigen::Index, Eigen::Index>> basis_;
    std::vector<Term> terms_;
};

// Twice the weighted secrecy sum plus log barriers on every K_j and on S - sum K.
inline LogdetProgram build_program(const PositionView &v)
{
    const std::size_t m = v.mu.size();
    const Eigen::Index n = v.s.rows();
    LogdetProgram prog(n, m);
    auto sel_prefix = [m](std::size_t upto) {
        std::vector<int> s(m, 0);
        for (std::size_t i = 0; i < upto; ++i)
            s[i] = 1;
        return s;
    };
    for (std::size_t l = 0; l < m; ++l)
    {
        const double mu = v.mu[l];
        prog.terms().push_back({mu, v.sigmas[l], sel_prefix(l + 1), false});
        prog.terms().push_back({-mu, v.sigma_z, sel_prefix(l + 1), false});
        if (l > 0)
        {
            prog.terms().push_back({-mu, v.sigmas[l], sel_prefix(l), false});
            prog.terms().push_back({mu, v.sigma_z, sel_prefix(l), false});
        }
    }
    for (std::size_t j = 0; j < m; ++j)
    {
        std::vector<int> s(m, 0);
        s[j] = 1;
        prog.terms().push_back({1.0, Matrix::Zero(n, n), s, true});
    }
    prog.terms().push_back({1.0, v.s, std::vector<int>(m, -1), true});
    return prog;
}

struct RunResult
{
    std::vector<Matrix> k;
    double objective = -std::numeric_limits<double>::infinity();
    double gradient_norm = std::numeric_limits<double>::infinity();
    std::size_t iterations = 0;
    bool converged = false;
};

// Barrier path following with eigenvalue-modified Newton steps.
inline RunResult run_barrier(const LogdetProgram &prog, std::vector<Matrix> start, double mu_scale,
                             const OptimizerOptions &opt)
{
    RunResult res;
    Vector x = prog.pack(start);
    const double tau_end = opt.barrier_end * mu_scale;
    double tau = opt.barrier_start * mu_scale;
    bool last_stage = false;
    double gnorm = std::numeric_limits<double>::infinity();
    while (true)
    {
        if (tau <= tau_end)
        {
            tau = tau_end;
            last_stage = true;
        }
        for (std::size_t inner = 0; inner < 200 && res.iterations < opt.max_iterations; ++inner)
        {
            const auto e = prog.evaluate(x, tau, true);
            if (!e.feasible)
                throw NumericalError("barrier iterate left the feasible set");
            gnorm = e.grad.norm();
            if (gnorm <= opt.gradient_tol * mu_scale)
                break;
            Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(-e.hess));
            Vector lam = es.eigenvalues().cwiseAbs();
            const double floor = std::max(1e-14 * lam.maxCoeff(), 1e-300);
            lam = lam.cwiseMax(floor);
            const Vector dir = es.eigenvectors() * (es.eigenvectors().transpose() * e.grad).cwiseQuotient(lam);
            const double slope = e.grad.dot(dir);
            if (slope <= 1e-30)
                break;
            ++res.iterations;
            double step = 1.0;
            bool moved = false;
            for (int ls = 0; ls < 60; ++ls, step *= 0.5)
            {
                const Vector xn = x + step * dir;
                const auto en = prog.evaluate(xn, tau, false);
                if (!en.feasible)
                    continue;
                const bool armijo = en.value >= e.value + 1e-4 * step * slope;
                const bool flat = std::abs(en.value - e.value) <= 1e-13 * (1.0 + std::abs(e.value)) &&
                                  en.grad.norm() < gnorm;
                if (armijo || flat)
                {
                    x = xn;
                    moved = true;
                    break;
                }
            }
            if (!moved)
                break;
        }
        if (last_stage || res.iterations >= opt.max_iterations)
            break;
        tau /= opt.barrier_shrink;
    }
    const auto fin = prog.evaluate(x, tau_end, false);
    res.gradient_norm = fin.grad.norm();
    res.converged = res.gradient_norm <= opt.gradient_tol * mu_scale * 10.0 || res.iterations < opt.max_iterations;
    for (std::size_t j = 0; j < start.size(); ++j)
        res.k.push_back(prog.unsvec(x, j));
    return res;
}

// Strictly feasible start: random PD parts scaled to fill a fraction of S.
inline std::vector<Matrix> random_start(const Matrix &s, std::size_t m, std::uint64_t seed)
{
    NormalSource g(seed);
    const Eigen::Index n = s.rows();
    std::vector<Matrix> ks(m);
    Matrix sum = Matrix::Zero(n, n);
    for (auto &k : ks)
    {
        Matrix b(n, n);
        for (Eigen::Index i = 0; i < b.size(); ++i)
            b.data()[i] = g();
        k = b * b.transpose() + 0.05 * Matrix::Identity(n, n);
        k *= 0.05 + g.uniform();
        sum += k;
    }
    const double lam = generalized_min_eigenvalue(-sum, s); // -lambda_max(S^{-1} sum)
    const double fill = 0.3 + 0.65 * g.uniform();
    for (auto &k : ks)
        k = symmetrize(k * (fill / -lam));
    return ks;
}
} // namespace detail

/// Random partition with sum K <= S: K_j = S^{1/2} T^{-1/2} W_j T^{-1/2} S^{1/2},
/// T = W_0 + ... + W_m, where W_0 is the unused share and is zero half the time.
inline std::vector<Matrix> sample_partition(const Matrix &s, std::size_t m, NormalSource &g)
{
    const Eigen::Index n = s.rows();
    auto wishart = [&]() {
        const Eigen::Index r = 1 + static_cast<Eigen::Index>(g.uniform() * static_cast<double>(n));
        Matrix b(n, std::min(r, n));
        for (Eigen::Index i = 0; i < b.size(); ++i)
            b.data()[i] = g();
        return Matrix(b * b.transpose() * std::exp(1.5 * g()));
    };
    std::vector<Matrix> w;
    Matrix total = Matrix::Zero(n, n);
    const bool slack = g.uniform() < 0.5;
    const Matrix w0 = wishart();
    if (slack)
        total += w0;
    for (std::size_t j = 0; j < m; ++j)
    {
        w.push_back(wishart());
        total += w.back();
    }
    total += 1e-12 * total.trace() / static_cast<double>(n) * Matrix::Identity(n, n);
    const Matrix map = psd_sqrt(s) * detail::inverse_sqrt_spd(total);
    Matrix sum = Matrix::Zero(n, n);
    for (auto &wj : w)
    {
        wj = project_psd(map * wj * map.transpose());
        sum += wj;
    }
    // roundoff from an ill-conditioned T can push the sum just past S
    const double fill = -generalized_min_eigenvalue(-sum, s);
    if (fill > 1.0 - 1e-12)
        for (auto &wj : w)
            wj *= (1.0 - 1e-12) / fill;
    return w;
}

/// Maximizes sum mu_k R_k over partitions of S on an aligned channel.
inline BoundaryPoint maximize_weighted_secrecy(const AlignedChannel &ch, const Weights &mu,
                                               const OptimizerOptions &opt = {})
{
    opt.tol.validate();
    const Diagnostics d = validate(ch, opt.tol);
    if (!d.ok())
        throw PreconditionError("maximize_weighted_secrecy: " + d.violations.front().what);
    const Eigen::Index n = ch.dim();
    const CovariancePartition zero = CovariancePartition::zeros(ch.users(), n);
    detail::PositionView v = detail::positions(ch, zero, mu);
    const std::size_t m = v.mu.size();
    const double mu_scale = v.mu.back();
    const detail::LogdetProgram prog = detail::build_program(v);

    detail::RunResult best;
    for (std::size_t r = 0; r <= opt.restarts; ++r)
    {
        std::vector<Matrix> start;
        if (r == 0)
            start.assign(m, ch.s / static_cast<double>(m + 1));
        else
            start = detail::random_start(ch.s, m, derive_seed(opt.seed, r));
        detail::RunResult run;
        try
        {
            run = detail::run_barrier(prog, start, mu_scale, opt);
        }
        catch (const NumericalError &)
        {
            continue;
        }
        CovariancePartition p = zero;
        for (std::size_t j = 0; j < m; ++j)
            p.parts[v.order.pi_prime[j]] = run.k[j];
        run.objective = weighted_objective(ch, p, mu);
        if (best.k.empty() || run.objective > best.objective + 1e-13 * (1.0 + std::abs(best.objective)))
            best = run;
    }
    if (best.k.empty())
        throw NumericalError("maximize_weighted_secrecy: every start failed");

    BoundaryPoint out;
    out.mu = mu;
    out.partition = zero;
    for (std::size_t j = 0; j < m; ++j)
        out.partition.parts[v.order.pi_prime[j]] = best.k[j];
    out.rates = dpc_rates_aligned(ch, out.partition, v.order.pi);
    out.objective = out.rates.weighted_sum(mu);
    out.certificate = recover_multipliers(ch, out.partition, mu);
    out.iterations = best.iterations;
    out.gradient_norm = best.gradient_norm;
    out.converged = best.converged;
    out.status = best.converged ? "ok" : "not-converged";
    return out;
}

/// One boundary point per weight vector, in grid order; failures are recorded in status.
inline std::vector<BoundaryPoint> sweep_boundary(const AlignedChannel &ch, const std::vector<Weights> &grid,
                                                 const OptimizerOptions &opt = {})
{
    require(!grid.empty(), "sweep_boundary: empty weight grid");
    std::vector<BoundaryPoint> out;
    out.reserve(grid.size());
    for (const auto &mu : grid)
    {
        try
        {
            out.push_back(maximize_weighted_secrecy(ch, mu, opt));
        }
        catch (const Error &e)
        {
            BoundaryPoint bp;
            bp.mu = mu;
            bp.status = e.what();
            out.push_back(std::move(bp));
        }
    }
    return out;
}

/// Evenly spaced weights on the simplex for two users, or a grid over the
/// positive orthant simplex for K users with `resolution` points per edge.
inline std::vector<Weights> simplex_grid(std::size_t users, std::size_t resolution)
{
    require(users >= 1, "simplex_grid: need at least one user");
    require(resolution >= 2, "simplex_grid: resolution must be at least 2");
    std::vector<Weights> out;
    if (users == 1)
    {
        out.push_back({1.0});
        return out;
    }
    const std::size_t steps = resolution - 1;
    Weights cur(users, 0.0);
    std::vector<std::size_t> counts(users, 0);
    // enumerate compositions of `steps` into `users` parts
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t left) {
        if (i + 1 == users)
        {
            counts[i] = left;
            Weights w(users);
            for (std::size_t k = 0; k < users; ++k)
                w[k] = static_cast<double>(counts[k]) / static_cast<double>(steps);
            out.push_back(w);
            return;
        }
        for (std::size_t c = 0; c <= left; ++c)
        {
            counts[i] = c;
            rec(i + 1, left - c);
        }
    };
    rec(0, steps);
    return out;
}

} // namespace secrecy
