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
// Channel descriptions for the Gaussian multi-receiver wiretap channel and
// the general -> square -> aligned reductions.
//
// Every receiver k observes Y_k = H_k X + N_k with N_k ~ N(0, Sigma_k); the
// eavesdropper observes Z = H_Z X + N_Z. The input obeys E[X X^T] <= S.

#pragma once

#include "psd.hpp"

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace secrecy
{

struct SisoChannel
{
    double power = 1.0;
    double sigma1_sq = 1.0;
    double sigma2_sq = 1.0;
    double sigmaZ_sq = 1.0;
};

/// Noise ordering Sigma_1 <= ... <= Sigma_K <= Sigma_Z (Loewner).
struct DegradedChannel
{
    Matrix s;
    std::vector<Matrix> sigmas;
    Matrix sigma_z;
    /// lambda_min(Sigma_{k+1} - Sigma_k) for k = 1..K-1, then lambda_min(Sigma_Z - Sigma_K).
    std::vector<double> ordering_margins;

    std::size_t users() const { return sigmas.size(); }
    Eigen::Index dim() const { return s.rows(); }
};

/// Identity gains, strictly positive-definite noises, no ordering.
struct AlignedChannel
{
    Matrix s;
    std::vector<Matrix> sigmas;
    Matrix sigma_z;

    std::size_t users() const { return sigmas.size(); }
    Eigen::Index dim() const { return s.rows(); }
};

struct GeneralChannel
{
    Matrix s;                  ///< t x t, PSD (may be singular)
    std::vector<Matrix> gains; ///< r_k x t
    std::vector<Matrix> sigmas;
    Matrix gain_z; ///< r_Z x t
    Matrix sigma_z;

    std::size_t users() const { return sigmas.size(); }
    Eigen::Index dim() const { return s.rows(); }
};

/// One terminal of the square equivalent: H_hat = diag(lambda) * v, with the
/// first (t - rank) entries of lambda equal to zero.
struct SquareTerminal
{
    Matrix v;      ///< t x t orthonormal; rows are input-space directions
    Vector lambda; ///< t diagonal gains, zero block first
    Matrix sigma_hat;
    Eigen::Index rank = 0;

    Matrix gain() const { return lambda.asDiagonal() * v; }
};

struct SquareChannel
{
    Matrix s;
    std::vector<SquareTerminal> receivers;
    SquareTerminal eavesdropper;

    GeneralChannel as_general() const
    {
        GeneralChannel g;
        g.s = s;
        for (const auto &r : receivers)
        {
            g.gains.push_back(r.gain());
            g.sigmas.push_back(r.sigma_hat);
        }
        g.gain_z = eavesdropper.gain();
        g.sigma_z = eavesdropper.sigma_hat;
        return g;
    }
};

using ChannelSpec = std::variant<SisoChannel, DegradedChannel, AlignedChannel, GeneralChannel>;

struct Violation
{
    std::string what;
    double value = 0.0; ///< offending eigenvalue / margin
};

struct Diagnostics
{
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

namespace detail
{
inline double psd_slack(const Matrix &m, const Tolerance &tol)
{
    return -tol.psd_tol * (1.0 + max_abs_eigenvalue(m));
}

inline bool square(const Matrix &m, Eigen::Index n)
{
    return m.rows() == n && m.cols() == n;
}

inline void check_pd(Diagnostics &d, const Matrix &m, const std::string &name, const Tolerance &tol)
{
    if (m.rows() != m.cols() || m.rows() == 0)
    {
        d.violations.push_back({name + " is not a non-empty square matrix", 0.0});
        return;
    }
    // noises only need to be invertible; psd_tol is slack for PSD membership
    // and would reject the ill-conditioned noises of perturbed channels
    (void)tol;
    const double lo = min_eigenvalue(m);
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(m.rows());
    if (lo <= floor * max_abs_eigenvalue(m) || lo <= 0.0)
        d.violations.push_back({name + " is not strictly positive definite", lo});
}

inline void check_psd(Diagnostics &d, const Matrix &m, const std::string &name, const Tolerance &tol)
{
    if (m.rows() != m.cols() || m.rows() == 0)
    {
        d.violations.push_back({name + " is not a non-empty square matrix", 0.0});
        return;
    }
    const double lo = min_eigenvalue(m);
    if (lo < psd_slack(m, tol))
        d.violations.push_back({name + " is not positive semi-definite", lo});
}

inline void check_symmetric(Diagnostics &d, const Matrix &m, const std::string &name)
{
    if (m.rows() != m.cols() || m.size() == 0)
        return;
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * scale)
        d.violations.push_back({name + " is not symmetric", asym});
}

inline std::string idx(const std::string &base, std::size_t k)
{
    return base + "[" + std::to_string(k + 1) + "]";
}

inline void check_noise_family(Diagnostics &d, const Matrix &s, const std::vector<Matrix> &sigmas,
                               const Matrix &sigma_z, const Tolerance &tol)
{
    const Eigen::Index n = s.rows();
    if (sigmas.empty())
        d.violations.push_back({"at least one legitimate receiver is required", 0.0});
    check_symmetric(d, s, "S");
    check_pd(d, s, "S", tol);
    for (std::size_t k = 0; k < sigmas.size(); ++k)
    {
        if (!square(sigmas[k], n))
        {
            d.violations.push_back({idx("Sigma", k) + " dimension differs from S", 0.0});
            continue;
        }
        check_symmetric(d, sigmas[k], idx("Sigma", k));
        check_pd(d, sigmas[k], idx("Sigma", k), tol);
    }
    if (!square(sigma_z, n))
        d.violations.push_back({"SigmaZ dimension differs from S", 0.0});
    else
    {
        check_symmetric(d, sigma_z, "SigmaZ");
        check_pd(d, sigma_z, "SigmaZ", tol);
    }
}
} // namespace detail

inline Diagnostics validate(const SisoChannel &ch, const Tolerance & = {})
{
    Diagnostics d;
    if (!(ch.power > 0))
        d.violations.push_back({"P must be positive", ch.power});
    if (!(ch.sigma1_sq > 0))
        d.violations.push_back({"sigma1^2 must be positive", ch.sigma1_sq});
    if (!(ch.sigma1_sq <= ch.sigma2_sq))
        d.violations.push_back({"ordering sigma1^2 <= sigma2^2 violated", ch.sigma2_sq - ch.sigma1_sq});
    if (!(ch.sigma2_sq <= ch.sigmaZ_sq))
        d.violations.push_back({"ordering sigma2^2 <= sigmaZ^2 violated", ch.sigmaZ_sq - ch.sigma2_sq});
    return d;
}

inline Diagnostics validate(const DegradedChannel &ch, const Tolerance &tol = {})
{
    Diagnostics d;
    detail::check_noise_family(d, ch.s, ch.sigmas, ch.sigma_z, tol);
    if (!d.ok())
        return d;
    for (std::size_t k = 0; k + 1 < ch.sigmas.size(); ++k)
    {
        if (!loewner_leq(ch.sigmas[k], ch.sigmas[k + 1], tol))
            d.violations.push_back({"ordering " + detail::idx("Sigma", k) + " <= " + detail::idx("Sigma", k + 1) +
                                        " violated",
                                    loewner_margin(ch.sigmas[k], ch.sigmas[k + 1])});
    }
    if (!loewner_leq(ch.sigmas.back(), ch.sigma_z, tol))
        d.violations.push_back({"ordering " + detail::idx("Sigma", ch.sigmas.size() - 1) + " <= SigmaZ violated",
                                loewner_margin(ch.sigmas.back(), ch.sigma_z)});
    return d;
}

inline Diagnostics validate(const AlignedChannel &ch, const Tolerance &tol = {})
{
    Diagnostics d;
    detail::check_noise_family(d, ch.s, ch.sigmas, ch.sigma_z, tol);
    return d;
}

inline Diagnostics validate(const GeneralChannel &ch, const Tolerance &tol = {})
{
    Diagnostics d;
    const Eigen::Index t = ch.s.rows();
    detail::check_symmetric(d, ch.s, "S");
    detail::check_psd(d, ch.s, "S", tol);
    if (ch.sigmas.empty())
        d.violations.push_back({"at least one legitimate receiver is required", 0.0});
    if (ch.gains.size() != ch.sigmas.size())
        d.violations.push_back({"number of gain matrices differs from number of noise covariances", 0.0});
    for (std::size_t k = 0; k < ch.sigmas.size(); ++k)
    {
        detail::check_symmetric(d, ch.sigmas[k], detail::idx("Sigma", k));
        detail::check_pd(d, ch.sigmas[k], detail::idx("Sigma", k), tol);
        if (k < ch.gains.size() && (ch.gains[k].cols() != t || ch.gains[k].rows() != ch.sigmas[k].rows()))
            d.violations.push_back({detail::idx("H", k) + " must be r_k x t with r_k matching Sigma", 0.0});
    }
    detail::check_symmetric(d, ch.sigma_z, "SigmaZ");
    detail::check_pd(d, ch.sigma_z, "SigmaZ", tol);
    if (ch.gain_z.cols() != t || ch.gain_z.rows() != ch.sigma_z.rows())
        d.violations.push_back({"HZ must be r_Z x t with r_Z matching SigmaZ", 0.0});
    return d;
}

inline Diagnostics validate(const ChannelSpec &spec, const Tolerance &tol = {})
{
    return std::visit([&](const auto &ch) { return validate(ch, tol); }, spec);
}

namespace detail
{
template <class Channel> void throw_if_invalid(const Channel &ch, const Tolerance &tol, const char *kind)
{
    const Diagnostics d = validate(ch, tol);
    if (!d.ok())
        throw PreconditionError(std::string("invalid ") + kind + " channel: " + d.violations.front().what);
}
} // namespace detail

inline SisoChannel make_siso(double power, double sigma1_sq, double sigma2_sq, double sigmaZ_sq)
{
    SisoChannel ch{power, sigma1_sq, sigma2_sq, sigmaZ_sq};
    detail::throw_if_invalid(ch, {}, "SISO");
    return ch;
}

inline DegradedChannel make_degraded(Matrix s, std::vector<Matrix> sigmas, Matrix sigma_z,
                                     const Tolerance &tol = {})
{
    DegradedChannel ch{symmetrize(s), {}, symmetrize(sigma_z), {}};
    for (auto &m : sigmas)
        ch.sigmas.push_back(symmetrize(m));
    detail::throw_if_invalid(ch, tol, "degraded");
    for (std::size_t k = 0; k + 1 < ch.sigmas.size(); ++k)
        ch.ordering_margins.push_back(loewner_margin(ch.sigmas[k], ch.sigmas[k + 1]));
    ch.ordering_margins.push_back(loewner_margin(ch.sigmas.back(), ch.sigma_z));
    return ch;
}

inline AlignedChannel make_aligned(Matrix s, std::vector<Matrix> sigmas, Matrix sigma_z, const Tolerance &tol = {})
{
    AlignedChannel ch{symmetrize(s), {}, symmetrize(sigma_z)};
    for (auto &m : sigmas)
        ch.sigmas.push_back(symmetrize(m));
    detail::throw_if_invalid(ch, tol, "aligned");
    return ch;
}

inline GeneralChannel make_general(Matrix s, std::vector<Matrix> gains, std::vector<Matrix> sigmas, Matrix gain_z,
                                   Matrix sigma_z, const Tolerance &tol = {})
{
    GeneralChannel ch{symmetrize(s), std::move(gains), {}, std::move(gain_z), symmetrize(sigma_z)};
    for (auto &m : sigmas)
        ch.sigmas.push_back(symmetrize(m));
    detail::throw_if_invalid(ch, tol, "general");
    return ch;
}

/// A degraded channel viewed through the aligned lens (identical data).
inline AlignedChannel as_aligned(const DegradedChannel &ch)
{
    return AlignedChannel{ch.s, ch.sigmas, ch.sigma_z};
}

/// Scalar channel embedded as a 1x1 aligned channel with S = P.
inline AlignedChannel as_aligned(const SisoChannel &ch)
{
    auto one = [](double v) { return Matrix::Constant(1, 1, v); };
    return AlignedChannel{one(ch.power), {one(ch.sigma1_sq), one(ch.sigma2_sq)}, one(ch.sigmaZ_sq)};
}

/// Aligned channel as a general channel with identity gains.
inline GeneralChannel as_general(const AlignedChannel &ch)
{
    const Eigen::Index n = ch.dim();
    GeneralChannel g{ch.s, std::vector<Matrix>(ch.users(), Matrix::Identity(n, n)), ch.sigmas,
                     Matrix::Identity(n, n), ch.sigma_z};
    return g;
}

// ---- input-covariance constraint sets --------------------------------------

struct PowerConstraint
{
    enum class Kind
    {
        total,
        per_antenna
    };
    Kind kind = Kind::total;
    double total_power = 0.0;
    std::vector<double> antenna_powers;

    /// Membership of a candidate covariance cap S.
    bool admits(const Matrix &s, const Tolerance &tol = {}) const
    {
        if (s.rows() != s.cols() || min_eigenvalue(s) < detail::psd_slack(s, tol))
            return false;
        if (kind == Kind::total)
            return s.trace() <= total_power * (1.0 + tol.psd_tol);
        if (static_cast<std::size_t>(s.rows()) != antenna_powers.size())
            return false;
        for (Eigen::Index i = 0; i < s.rows(); ++i)
            if (s(i, i) > antenna_powers[static_cast<std::size_t>(i)] * (1.0 + tol.psd_tol))
                return false;
        return true;
    }
};

inline PowerConstraint total_power_constraint(double p)
{
    require(p > 0, "total power must be positive");
    return {PowerConstraint::Kind::total, p, {}};
}

inline PowerConstraint per_antenna_constraint(std::vector<double> powers)
{
    require(!powers.empty(), "per-antenna constraint needs at least one antenna");
    for (double p : powers)
        require(p > 0, "per-antenna powers must be positive");
    return {PowerConstraint::Kind::per_antenna, 0.0, std::move(powers)};
}

// ---- general -> square -> aligned ------------------------------------------

namespace detail
{
inline Matrix inverse_sqrt_spd(const Matrix &a)
{
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(a));
    if (es.eigenvalues().minCoeff() <= 0)
        throw NumericalError("inverse square root of a non-PD matrix");
    return es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
           es.eigenvectors().transpose();
}

// Whitens the noise, then rotates the gain onto its right singular basis; the
// null-space directions occupy the leading (t - rank) coordinates.
inline SquareTerminal square_terminal(const Matrix &gain, const Matrix &sigma, double rank_tol)
{
    const Eigen::Index t = gain.cols();
    const Matrix w = inverse_sqrt_spd(sigma) * gain;
    Eigen::JacobiSVD<Matrix> svd(w, Eigen::ComputeFullV);
    const Vector sv = svd.singularValues();
    const Matrix vfull = svd.matrixV(); // t x t, columns = right singular vectors
    const double smax = sv.size() > 0 ? sv(0) : 0.0;

    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (smax > 0 && sv(i) > rank_tol * smax)
            ++rank;

    SquareTerminal out;
    out.rank = rank;
    out.v = Matrix::Zero(t, t);
    out.lambda = Vector::Zero(t);
    const Eigen::Index nulls = t - rank;
    for (Eigen::Index i = 0; i < nulls; ++i)
        out.v.row(i) = vfull.col(rank + i).transpose();
    for (Eigen::Index i = 0; i < rank; ++i)
    {
        out.v.row(nulls + i) = vfull.col(i).transpose();
        out.lambda(nulls + i) = sv(i);
    }
    out.sigma_hat = Matrix::Identity(t, t);
    return out;
}
} // namespace detail

/// Equivalent channel where every terminal has t antennas, H_hat = Lambda_hat V
/// and block-diagonal noise; DPC rates of every partition are preserved.
inline SquareChannel reduce_general_to_square(const GeneralChannel &g, double rank_tol = 1e-12)
{
    const Diagnostics d = validate(g);
    if (!d.ok())
        throw DimensionError("reduce_general_to_square: " + d.violations.front().what);
    SquareChannel out;
    out.s = g.s;
    for (std::size_t k = 0; k < g.users(); ++k)
        out.receivers.push_back(detail::square_terminal(g.gains[k], g.sigmas[k], rank_tol));
    out.eavesdropper = detail::square_terminal(g.gain_z, g.sigma_z, rank_tol);
    return out;
}

/// Gains (Lambda_hat + alpha I_hat) V are invertible; the returned aligned channel
/// is the whitened equivalent with noise H_bar^{-1} Sigma_hat H_bar^{-T}.
inline AlignedChannel perturb_to_aligned(const SquareChannel &sq, double alpha)
{
    require(alpha > 0, "perturb_to_aligned: alpha must be positive");
    auto aligned_noise = [alpha](const SquareTerminal &term) {
        const Eigen::Index t = term.lambda.size();
        Vector d = term.lambda;
        for (Eigen::Index i = 0; i < t - term.rank; ++i)
            d(i) += alpha;
        const Matrix dinv = d.cwiseInverse().asDiagonal();
        const Matrix hinv = term.v.transpose() * dinv;
        return symmetrize(hinv * term.sigma_hat * hinv.transpose());
    };
    AlignedChannel out;
    out.s = sq.s;
    for (const auto &r : sq.receivers)
        out.sigmas.push_back(aligned_noise(r));
    out.sigma_z = aligned_noise(sq.eavesdropper);
    return out;
}

/// Restriction of a general channel with singular S to the support of S.
struct InputSupport
{
    GeneralChannel channel; ///< S restricted, gains H Q
    Matrix basis;           ///< t x t' orthonormal columns spanning range(S)

    Matrix lift(const Matrix &k_reduced) const { return basis * k_reduced * basis.transpose(); }
};

inline InputSupport restrict_to_input_support(const GeneralChannel &g, double rank_tol = 1e-12)
{
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(g.s));
    const double top = es.eigenvalues().cwiseAbs().maxCoeff();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) > rank_tol * top)
            keep.push_back(i);
    require(!keep.empty(), "input covariance cap S is zero");
    InputSupport out;
    out.basis = Matrix(g.dim(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j)
        out.basis.col(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(keep[j]);
    out.channel = g;
    out.channel.s = symmetrize(out.basis.transpose() * g.s * out.basis);
    for (auto &h : out.channel.gains)
        h = h * out.basis;
    out.channel.gain_z = g.gain_z * out.basis;
    return out;
}

} // namespace secrecy
