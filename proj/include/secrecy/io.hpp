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
// JSON and CSV plumbing: channel specs, mixture specs, partitions and
// boundary-point certificates. Matrices are row-major arrays of arrays; a
// bare number is accepted wherever a 1x1 matrix is expected.

#pragma once

#include "boundary.hpp"
#include "channel.hpp"
#include "enhancement.hpp"
#include "mixture.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace secrecy
{

using Json = nlohmann::ordered_json;

/// Malformed input document (wrong shape, missing key, not JSON).
class FormatError : public Error
{
  public:
    using Error::Error;
};

// ---- matrices -------------------------------------------------------------------

inline Matrix matrix_from_json(const Json &j, const std::string &what)
{
    if (j.is_number())
        return Matrix::Constant(1, 1, j.get<double>());
    if (!j.is_array() || j.empty())
        throw FormatError(what + ": expected a number or a non-empty array of rows");
    if (j.front().is_number())
    {
        // a flat list is a column vector
        Matrix m(static_cast<Eigen::Index>(j.size()), 1);
        for (std::size_t i = 0; i < j.size(); ++i)
        {
            if (!j[i].is_number())
                throw FormatError(what + ": mixed numbers and rows");
            m(static_cast<Eigen::Index>(i), 0) = j[i].get<double>();
        }
        return m;
    }
    const std::size_t rows = j.size();
    if (!j[0].is_array() || j[0].empty())
        throw FormatError(what + ": rows must be non-empty arrays");
    const std::size_t cols = j[0].size();
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r)
    {
        if (!j[r].is_array() || j[r].size() != cols)
            throw FormatError(what + ": ragged rows");
        for (std::size_t c = 0; c < cols; ++c)
        {
            if (!j[r][c].is_number())
                throw FormatError(what + ": entries must be numbers");
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].get<double>();
        }
    }
    return m;
}

inline Vector vector_from_json(const Json &j, const std::string &what)
{
    const Matrix m = matrix_from_json(j, what);
    if (m.cols() == 1)
        return m.col(0);
    if (m.rows() == 1)
        return m.row(0).transpose();
    throw FormatError(what + ": expected a vector");
}

inline Json matrix_to_json(const Matrix &m)
{
    Json out = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
    {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back(m(r, c));
        out.push_back(std::move(row));
    }
    return out;
}

inline Json vector_to_json(const std::vector<double> &v)
{
    Json out = Json::array();
    for (double x : v)
        out.push_back(x);
    return out;
}

namespace detail
{
inline const Json &field(const Json &j, const char *key)
{
    if (!j.is_object() || !j.contains(key))
        throw FormatError(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

inline std::vector<Matrix> matrix_list(const Json &j, const std::string &what)
{
    if (!j.is_array() || j.empty())
        throw FormatError(what + ": expected a non-empty list of matrices");
    std::vector<Matrix> out;
    for (std::size_t k = 0; k < j.size(); ++k)
        out.push_back(matrix_from_json(j[k], what + "[" + std::to_string(k + 1) + "]"));
    return out;
}

inline double scalar_of(const Matrix &m, const std::string &what)
{
    if (m.size() != 1)
        throw FormatError(what + ": expected a scalar");
    return m(0, 0);
}
} // namespace detail

inline Json parse_json_text(const std::string &text, const std::string &what)
{
    try
    {
        return Json::parse(text);
    }
    catch (const nlohmann::json::parse_error &e)
    {
        throw FormatError(what + ": " + e.what());
    }
}

inline Json read_json_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw FormatError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str(), path);
}

// ---- channels -------------------------------------------------------------------

/// Parses without validating; run validate() on the result.
inline ChannelSpec channel_from_json(const Json &j)
{
    const std::string type = detail::field(j, "type").get<std::string>();
    if (type == "siso")
    {
        const Json &sig = detail::field(j, "Sigma");
        if (!sig.is_array() || sig.size() != 2)
            throw FormatError("siso: Sigma must list two receiver noise variances");
        SisoChannel ch;
        ch.power = j.contains("P") ? j.at("P").get<double>()
                                   : detail::scalar_of(matrix_from_json(detail::field(j, "S"), "S"), "S");
        ch.sigma1_sq = detail::scalar_of(matrix_from_json(sig[0], "Sigma[1]"), "Sigma[1]");
        ch.sigma2_sq = detail::scalar_of(matrix_from_json(sig[1], "Sigma[2]"), "Sigma[2]");
        ch.sigmaZ_sq = detail::scalar_of(matrix_from_json(detail::field(j, "SigmaZ"), "SigmaZ"), "SigmaZ");
        return ch;
    }
    Matrix s;
    if (j.contains("S"))
        s = matrix_from_json(j.at("S"), "S");
    else if (j.contains("P"))
        s = Matrix::Constant(1, 1, j.at("P").get<double>());
    else
        throw FormatError("missing field \"S\"");
    std::vector<Matrix> sigmas = detail::matrix_list(detail::field(j, "Sigma"), "Sigma");
    Matrix sigma_z = matrix_from_json(detail::field(j, "SigmaZ"), "SigmaZ");
    if (type == "degraded" || type == "aligned")
    {
        const Eigen::Index n = s.rows();
        for (const auto &m : sigmas)
            require_dims(m.rows() == n && m.cols() == n, "noise covariances must match S");
        require_dims(sigma_z.rows() == n && sigma_z.cols() == n, "SigmaZ must match S");
        if (type == "aligned")
            return AlignedChannel{s, sigmas, sigma_z};
        DegradedChannel ch{s, sigmas, sigma_z, {}};
        for (std::size_t k = 0; k + 1 < sigmas.size(); ++k)
            ch.ordering_margins.push_back(loewner_margin(sigmas[k], sigmas[k + 1]));
        ch.ordering_margins.push_back(loewner_margin(sigmas.back(), sigma_z));
        return ch;
    }
    if (type == "general")
    {
        std::vector<Matrix> gains = detail::matrix_list(detail::field(j, "H"), "H");
        Matrix gain_z = matrix_from_json(detail::field(j, "HZ"), "HZ");
        if (gains.size() != sigmas.size())
            throw FormatError("general: H and Sigma list different user counts");
        return GeneralChannel{s, std::move(gains), std::move(sigmas), std::move(gain_z), std::move(sigma_z)};
    }
    throw FormatError("unknown channel type \"" + type + "\"");
}

inline Json channel_to_json(const ChannelSpec &spec)
{
    Json j;
    std::visit(
        [&](const auto &ch) {
            using T = std::decay_t<decltype(ch)>;
            if constexpr (std::is_same_v<T, SisoChannel>)
            {
                j["type"] = "siso";
                j["P"] = ch.power;
                j["Sigma"] = Json::array({ch.sigma1_sq, ch.sigma2_sq});
                j["SigmaZ"] = ch.sigmaZ_sq;
            }
            else
            {
                if constexpr (std::is_same_v<T, DegradedChannel>)
                    j["type"] = "degraded";
                else if constexpr (std::is_same_v<T, AlignedChannel>)
                    j["type"] = "aligned";
                else
                    j["type"] = "general";
                j["S"] = matrix_to_json(ch.s);
                j["Sigma"] = Json::array();
                for (const auto &m : ch.sigmas)
                    j["Sigma"].push_back(matrix_to_json(m));
                j["SigmaZ"] = matrix_to_json(ch.sigma_z);
                if constexpr (std::is_same_v<T, GeneralChannel>)
                {
                    j["H"] = Json::array();
                    for (const auto &m : ch.gains)
                        j["H"].push_back(matrix_to_json(m));
                    j["HZ"] = matrix_to_json(ch.gain_z);
                }
            }
        },
        spec);
    return j;
}

inline std::size_t channel_users(const ChannelSpec &spec)
{
    return std::visit(
        [](const auto &ch) -> std::size_t {
            if constexpr (std::is_same_v<std::decay_t<decltype(ch)>, SisoChannel>)
                return 2;
            else
                return ch.users();
        },
        spec);
}

/// Identity-gain view of every channel type except the general one.
inline std::optional<AlignedChannel> aligned_view(const ChannelSpec &spec)
{
    if (const auto *s = std::get_if<SisoChannel>(&spec))
        return as_aligned(*s);
    if (const auto *d = std::get_if<DegradedChannel>(&spec))
        return as_aligned(*d);
    if (const auto *a = std::get_if<AlignedChannel>(&spec))
        return *a;
    return std::nullopt;
}

inline GeneralChannel general_view(const ChannelSpec &spec)
{
    if (const auto *g = std::get_if<GeneralChannel>(&spec))
        return *g;
    return as_general(*aligned_view(spec));
}

inline Json diagnostics_to_json(const Diagnostics &d)
{
    Json out = Json::array();
    for (const auto &v : d.violations)
        out.push_back({{"what", v.what}, {"value", v.value}});
    return out;
}

// ---- partitions, weights, orders ------------------------------------------------

/// Accepts {"K": [...]} or a bare list of matrices.
inline CovariancePartition partition_from_json(const Json &j)
{
    const Json &list = j.is_object() ? detail::field(j, "K") : j;
    return {detail::matrix_list(list, "K")};
}

inline Json partition_to_json(const CovariancePartition &p)
{
    Json out = Json::array();
    for (const auto &k : p.parts)
        out.push_back(matrix_to_json(k));
    return out;
}

/// Comma-separated list of numbers, e.g. "1,2.5,3".
inline std::vector<double> parse_number_list(const std::string &text, const std::string &what)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        std::size_t used = 0;
        double v = 0.0;
        try
        {
            v = std::stod(item, &used);
        }
        catch (const std::exception &)
        {
            throw FormatError(what + ": cannot parse \"" + item + "\"");
        }
        if (item.find_first_not_of(" \t", used) != std::string::npos)
            throw FormatError(what + ": cannot parse \"" + item + "\"");
        out.push_back(v);
    }
    if (out.empty())
        throw FormatError(what + ": empty list");
    return out;
}

/// 1-based user list, e.g. "2,1,3", to a 0-based permutation.
inline Permutation parse_order(const std::string &text, std::size_t users)
{
    Permutation pi;
    for (double v : parse_number_list(text, "order"))
    {
        if (v < 1.0 || v != std::floor(v))
            throw FormatError("order: entries must be 1-based user indices");
        pi.push_back(static_cast<std::size_t>(v) - 1);
    }
    require_permutation(pi, users);
    return pi;
}

// ---- mixtures -------------------------------------------------------------------

namespace detail
{
inline VectorBranch branch_from_json(const Json &comps, double prob)
{
    if (!comps.is_array() || comps.empty())
        throw FormatError("components: expected a non-empty list");
    VectorBranch b{prob, {}};
    for (const auto &c : comps)
    {
        VectorComponent vc;
        vc.w = c.contains("w") ? c.at("w").get<double>() : 1.0;
        vc.mean = vector_from_json(field(c, "mean"), "mean");
        const Eigen::Index d = vc.mean.size();
        const Json &cov = field(c, "cov");
        vc.cov = matrix_from_json(cov, "cov");
        if (vc.cov.size() == 1 && d > 1)
            vc.cov = vc.cov(0, 0) * Matrix::Identity(d, d);
        require_dims(vc.cov.rows() == d && vc.cov.cols() == d, "component covariance vs mean dimension");
        b.components.push_back(std::move(vc));
    }
    return b;
}
} // namespace detail

/// {"components": [...]} or {"conditioning": [{"p": .., "components": [...]}, ...]}.
inline VectorMixture mixture_from_json(const Json &j)
{
    VectorMixture out;
    if (j.contains("conditioning"))
    {
        const Json &cond = j.at("conditioning");
        if (!cond.is_array() || cond.empty())
            throw FormatError("conditioning: expected a non-empty list of branches");
        for (const auto &b : cond)
            out.branches.push_back(detail::branch_from_json(detail::field(b, "components"), detail::field(b, "p").get<double>()));
    }
    else
    {
        out.branches.push_back(detail::branch_from_json(detail::field(j, "components"), 1.0));
    }
    return out;
}

inline ScalarMixture to_scalar(const VectorMixture &v)
{
    require_dims(v.dim() == 1, "scalar estimator needs a one-dimensional mixture");
    ScalarMixture out;
    for (const auto &b : v.branches)
    {
        ScalarBranch sb{b.prob, {}};
        for (const auto &c : b.components)
            sb.components.push_back({c.w, c.mean(0), c.cov(0, 0)});
        out.branches.push_back(std::move(sb));
    }
    return out;
}

// ---- certificates -----------------------------------------------------------------

/// Self-contained record of one boundary point of an aligned channel.
struct Certificate
{
    AlignedChannel channel;
    Weights mu;
    CovariancePartition partition;
    KktCertificate kkt;
    std::optional<EnhancedNoise> enhanced;
    std::optional<EnhancementReport> report;
};

inline Json certificate_to_json(const Certificate &c, double rate_scale = 1.0)
{
    Json j;
    j["channel"] = channel_to_json(c.channel);
    j["mu"] = vector_to_json(c.mu);
    j["partition"] = partition_to_json(c.partition);
    const WeightOrder order = weight_permutation(c.mu);
    Json pos = Json::array();
    for (std::size_t u : order.pi_prime)
        pos.push_back(u + 1);
    j["positive_users"] = pos;
    Json mult = Json::array();
    for (const auto &m : c.kkt.m)
        mult.push_back(matrix_to_json(m));
    j["multipliers"] = {{"M", mult}, {"MZ", matrix_to_json(c.kkt.m_z)}};
    j["residuals"] = {{"stationarity", vector_to_json(c.kkt.stationarity)},
                      {"slackness", vector_to_json(c.kkt.slackness)},
                      {"projection", vector_to_json(c.kkt.projection)},
                      {"max", c.kkt.max_residual()}};
    if (c.enhanced)
    {
        Json tilde = Json::array();
        for (const auto &m : c.enhanced->sigmas_tilde)
            tilde.push_back(matrix_to_json(m));
        Json zeros = Json::array();
        for (std::size_t u : c.enhanced->zero_users)
            zeros.push_back(u + 1);
        j["enhanced"] = {{"Sigma_tilde", tilde}, {"zero_users", zeros}, {"alpha", vector_to_json(c.enhanced->alphas)}};
    }
    if (c.report)
    {
        j["enhancement_residuals"] = vector_to_json({c.report->residual.begin(), c.report->residual.end()});
    }
    const RatePoint rp = dpc_rates_aligned(c.channel, c.partition, order.pi);
    std::vector<double> rates = rp.rates;
    for (double &r : rates)
        r /= rate_scale;
    j["rates"] = vector_to_json(rates);
    return j;
}

/// Reads channel, weights, partition and multipliers; derived fields are recomputed by callers.
inline Certificate certificate_from_json(const Json &j)
{
    Certificate c;
    const ChannelSpec spec = channel_from_json(detail::field(j, "channel"));
    const auto view = aligned_view(spec);
    if (!view)
        throw FormatError("certificate channel must be siso, degraded or aligned");
    c.channel = *view;
    for (const auto &v : detail::field(j, "mu"))
        c.mu.push_back(v.get<double>());
    c.partition = partition_from_json(detail::field(j, "partition"));
    const Json &mult = detail::field(j, "multipliers");
    const Json &ms = detail::field(mult, "M");
    if (!ms.is_array())
        throw FormatError("multipliers.M must be a list");
    for (std::size_t k = 0; k < ms.size(); ++k)
        c.kkt.m.push_back(matrix_from_json(ms[k], "M[" + std::to_string(k + 1) + "]"));
    c.kkt.m_z = matrix_from_json(detail::field(mult, "MZ"), "MZ");
    return c;
}

// ---- CSV ----------------------------------------------------------------------------

/// 17 significant digits round-trip every double.
inline std::string csv_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string csv_row(const std::vector<std::string> &cells)
{
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i)
    {
        if (i)
            out += ',';
        const bool quote = cells[i].find_first_of(",\"\n") != std::string::npos;
        if (!quote)
        {
            out += cells[i];
            continue;
        }
        out += '"';
        for (char ch : cells[i])
        {
            if (ch == '"')
                out += '"';
            out += ch;
        }
        out += '"';
    }
    return out + '\n';
}

} // namespace secrecy
