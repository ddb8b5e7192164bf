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
// secrecy: command-line front end.
//
//   siso      rate pairs of the scalar two-user channel over a power-split grid
//   sweep     weighted-sum boundary points of a channel, with certificates
//   rates     DPC secrecy rates of a given partition and encoding order
//   kkt       multipliers and KKT residuals of a partition
//   enhance   enhanced noises and their five checks from a certificate
//   estimate  entropy / MMSE / Fisher estimates and identity checks of a mixture
//   validate  channel diagnostics
//
// Exit codes: 0 success, 1 tolerance failure or invalid input values,
// 2 malformed input document.

#include <secrecy/secrecy.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace
{

using namespace secrecy;

constexpr int exit_tolerance = 1;
constexpr int exit_format = 2;

struct Common
{
    std::string out;
    std::uint64_t seed = 0;
    bool seed_given = false;
    bool bits = false;
    double tol_psd = Tolerance{}.psd_tol;
    double tol_residual = Tolerance{}.residual_tol;
    double tol_root = Tolerance{}.root_tol;

    Tolerance tolerance() const
    {
        Tolerance t;
        t.psd_tol = tol_psd;
        t.residual_tol = tol_residual;
        t.root_tol = tol_root;
        t.validate();
        return t;
    }

    double rate_scale() const { return bits ? std::log(2.0) : 1.0; }

    std::uint64_t resolved_seed(std::uint64_t fallback) const
    {
        if (seed_given)
            return seed;
        if (const char *env = std::getenv("SECRECY_SEED"))
        {
            try
            {
                return std::stoull(env, nullptr, 0);
            }
            catch (const std::exception &)
            {
                throw FormatError(std::string("SECRECY_SEED is not an integer: ") + env);
            }
        }
        return fallback;
    }
};

void add_common(CLI::App *cmd, Common &c)
{
    cmd->add_option("--out", c.out, "Output file (default: stdout)");
    cmd->add_option_function<std::uint64_t>(
        "--seed",
        [&c](const std::uint64_t &v) {
            c.seed = v;
            c.seed_given = true;
        },
        "Random seed (falls back to SECRECY_SEED)");
    cmd->add_flag("--bits", c.bits, "Report rates in bits instead of nats");
    cmd->add_option("--tol-psd", c.tol_psd, "Relative eigenvalue slack for PSD tests");
    cmd->add_option("--tol-residual", c.tol_residual, "Bound on residuals");
    cmd->add_option("--tol-root", c.tol_root, "Root-finding bracket width");
}

void emit(const Common &c, const std::string &text)
{
    if (c.out.empty())
    {
        std::cout << text;
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f)
        throw FormatError("cannot write " + c.out);
    f << text;
}

std::string dump(const Json &j) { return j.dump(2) + "\n"; }

ChannelSpec load_channel(const std::string &path)
{
    if (path.empty())
        throw FormatError("--channel is required");
    return channel_from_json(read_json_file(path));
}

AlignedChannel require_aligned(const ChannelSpec &spec, const Tolerance &tol)
{
    const auto view = aligned_view(spec);
    if (!view)
        throw PreconditionError("this command needs a siso, degraded or aligned channel");
    const Diagnostics d = validate(spec, tol);
    if (!d.ok())
        throw PreconditionError("invalid channel: " + d.violations.front().what);
    return *view;
}

Weights parse_weights(const std::string &text, std::size_t users)
{
    if (text.empty())
        return Weights(users, 1.0);
    Weights mu = parse_number_list(text, "weights");
    if (mu.size() != users)
        throw FormatError("weights: expected " + std::to_string(users) + " entries");
    return mu;
}

std::vector<double> scaled(std::vector<double> v, double s)
{
    for (double &x : v)
        x /= s;
    return v;
}

// ---- siso -----------------------------------------------------------------------

int cmd_siso(const Common &c, const std::string &channel, double power, std::vector<double> sig, std::size_t steps)
{
    SisoChannel ch;
    if (!channel.empty())
    {
        const ChannelSpec spec = load_channel(channel);
        const auto *s = std::get_if<SisoChannel>(&spec);
        if (!s)
            throw PreconditionError("siso: channel file must have type \"siso\"");
        ch = *s;
    }
    else
    {
        if (sig.size() != 3)
            throw FormatError("siso: --noise needs sigma1^2,sigma2^2,sigmaZ^2");
        ch = SisoChannel{power, sig[0], sig[1], sig[2]};
    }
    const Diagnostics d = validate(ch);
    if (!d.ok())
        throw PreconditionError("siso: " + d.violations.front().what);
    require(steps >= 2, "siso: --steps must be at least 2");

    std::string csv = csv_row({"alpha", "R1", "R2"});
    for (std::size_t i = 0; i < steps; ++i)
    {
        const double alpha = static_cast<double>(i) / static_cast<double>(steps - 1);
        const auto [r1, r2] = siso_rates(ch, alpha);
        csv += csv_row({csv_number(alpha), csv_number(r1 / c.rate_scale()), csv_number(r2 / c.rate_scale())});
    }
    emit(c, csv);
    return 0;
}

// ---- sweep ----------------------------------------------------------------------

std::vector<std::string> sweep_header(std::size_t users)
{
    std::vector<std::string> h;
    for (std::size_t k = 1; k <= users; ++k)
        h.push_back("mu_" + std::to_string(k));
    for (std::size_t k = 1; k <= users; ++k)
        h.push_back("R_" + std::to_string(k));
    h.insert(h.end(), {"weighted_sum", "kkt_residual", "status"});
    return h;
}

int cmd_sweep(const Common &c, const std::string &channel, std::size_t resolution, const std::string &ladder_text,
              const std::string &cert_dir)
{
    const Tolerance tol = c.tolerance();
    const ChannelSpec spec = load_channel(channel);
    const std::size_t users = channel_users(spec);
    const std::vector<Weights> grid = simplex_grid(users, resolution);
    OptimizerOptions opt;
    opt.tol = tol;
    opt.seed = c.resolved_seed(opt.seed);
    if (!cert_dir.empty())
        std::filesystem::create_directories(cert_dir);

    std::string csv = csv_row(sweep_header(users));
    auto row = [&](const Weights &mu, const std::vector<double> &rates, double wsum, double kkt,
                   const std::string &status) {
        std::vector<std::string> cells;
        for (double m : mu)
            cells.push_back(csv_number(m));
        for (std::size_t k = 0; k < users; ++k)
            cells.push_back(k < rates.size() ? csv_number(rates[k] / c.rate_scale()) : "nan");
        cells.push_back(csv_number(wsum / c.rate_scale()));
        cells.push_back(csv_number(kkt));
        cells.push_back(status);
        csv += csv_row(cells);
    };
    auto write_cert = [&](std::size_t i, const Certificate &cert) {
        if (cert_dir.empty())
            return;
        std::ofstream f(std::filesystem::path(cert_dir) / ("point_" + std::to_string(i + 1) + ".json"),
                        std::ios::binary);
        f << dump(certificate_to_json(cert, c.rate_scale()));
    };

    if (const auto aligned = aligned_view(spec))
    {
        const Diagnostics d = validate(spec, tol);
        if (!d.ok())
            throw PreconditionError("invalid channel: " + d.violations.front().what);
        const auto points = sweep_boundary(*aligned, grid, opt);
        for (std::size_t i = 0; i < points.size(); ++i)
        {
            const auto &bp = points[i];
            if (bp.partition.parts.empty())
            {
                row(bp.mu, {}, std::nan(""), std::nan(""), bp.status);
                continue;
            }
            Certificate cert{*aligned, bp.mu, bp.partition, bp.certificate, std::nullopt, std::nullopt};
            try
            {
                cert.enhanced = enhance(*aligned, bp.partition, bp.certificate, bp.mu);
                cert.report = verify_enhancement(*aligned, bp.partition, bp.certificate, bp.mu, *cert.enhanced);
            }
            catch (const Error &)
            {
                // the certificate still records partition and multipliers
            }
            write_cert(i, cert);
            row(bp.mu, bp.rates.rates, bp.objective, bp.certificate.max_residual(), bp.status);
        }
        emit(c, csv);
        return 0;
    }

    // general channel: square reduction, aligned perturbation down the alpha
    // ladder, rates of the smallest-alpha partition on the original channel
    const auto &g = std::get<GeneralChannel>(spec);
    const Diagnostics d = validate(g, tol);
    if (!d.ok())
        throw PreconditionError("invalid channel: " + d.violations.front().what);
    std::vector<double> ladder = parse_number_list(ladder_text, "alpha-ladder");
    std::sort(ladder.begin(), ladder.end(), std::greater<>());
    require(ladder.back() > 0.0, "alpha-ladder entries must be positive");
    // a singular S is handled on its range, partitions are lifted back
    std::optional<InputSupport> support;
    if (!PsdMatrix::from(g.s, tol).is_positive_definite(tol))
        support = restrict_to_input_support(g);
    const SquareChannel sq = reduce_general_to_square(support ? support->channel : g);
    std::vector<AlignedChannel> rungs;
    for (double a : ladder)
        rungs.push_back(perturb_to_aligned(sq, a));
    for (std::size_t i = 0; i < grid.size(); ++i)
    {
        const Weights &mu = grid[i];
        try
        {
            BoundaryPoint bp;
            for (const auto &rung : rungs)
                bp = maximize_weighted_secrecy(rung, mu, opt);
            const Permutation pi = weight_permutation(mu).pi;
            CovariancePartition lifted = bp.partition;
            if (support)
                for (auto &k : lifted.parts)
                    k = support->lift(k);
            const RatePoint rp = dpc_rates_general(g, lifted, pi);
            write_cert(i, Certificate{rungs.back(), mu, bp.partition, bp.certificate, std::nullopt, std::nullopt});
            row(mu, rp.rates, rp.weighted_sum(mu), bp.certificate.max_residual(), bp.status);
        }
        catch (const Error &e)
        {
            row(mu, {}, std::nan(""), std::nan(""), e.what());
        }
    }
    emit(c, csv);
    return 0;
}

// ---- rates / kkt / enhance -----------------------------------------------------------

int cmd_rates(const Common &c, const std::string &channel, const std::string &partition, const std::string &order)
{
    const Tolerance tol = c.tolerance();
    const ChannelSpec spec = load_channel(channel);
    const Diagnostics d = validate(spec, tol);
    if (!d.ok())
        throw PreconditionError("invalid channel: " + d.violations.front().what);
    const std::size_t users = channel_users(spec);
    if (partition.empty())
        throw FormatError("--partition is required");
    const CovariancePartition p = partition_from_json(read_json_file(partition));
    const GeneralChannel g = general_view(spec);
    const Diagnostics pd = validate_partition(p, g.s, users, tol);
    if (!pd.ok())
        throw PreconditionError("invalid partition: " + pd.violations.front().what);
    const Permutation pi = order.empty() ? identity_order(users) : parse_order(order, users);

    const RatePoint rp = dpc_rates_general(g, p, pi);
    Json j;
    Json ord = Json::array();
    for (std::size_t u : pi)
        ord.push_back(u + 1);
    j["order"] = ord;
    j["unit"] = c.bits ? "bits" : "nats";
    j["rates"] = vector_to_json(scaled(rp.rates, c.rate_scale()));
    j["dummy_rates"] = vector_to_json(scaled(dummy_rates(g, p, pi), c.rate_scale()));
    j["decodable_rates"] = vector_to_json(scaled(decodable_rates(g, p, pi), c.rate_scale()));
    j["eavesdropper_total"] = eavesdropper_total(g, p) / c.rate_scale();
    emit(c, dump(j));
    return 0;
}

int cmd_kkt(const Common &c, const std::string &channel, const std::string &partition, const std::string &weights,
            const std::string &certificate)
{
    const Tolerance tol = c.tolerance();
    Certificate cert;
    KktCertificate kkt;
    if (!certificate.empty())
    {
        cert = certificate_from_json(read_json_file(certificate));
        const Diagnostics d = validate(cert.channel, tol);
        if (!d.ok())
            throw PreconditionError("invalid channel: " + d.violations.front().what);
        kkt = kkt_residuals(cert.channel, cert.partition, cert.mu, cert.kkt);
    }
    else
    {
        cert.channel = require_aligned(load_channel(channel), tol);
        if (partition.empty())
            throw FormatError("--partition or --certificate is required");
        cert.partition = partition_from_json(read_json_file(partition));
        cert.mu = parse_weights(weights, cert.channel.users());
        kkt = recover_multipliers(cert.channel, cert.partition, cert.mu);
    }
    const Diagnostics pd = validate_partition(cert.partition, cert.channel.s, cert.channel.users(), tol);
    if (!pd.ok())
        throw PreconditionError("invalid partition: " + pd.violations.front().what);
    cert.kkt = kkt;
    Json j = certificate_to_json(cert, c.rate_scale());
    const bool ok = kkt.max_residual() <= tol.residual_tol;
    j["ok"] = ok;
    emit(c, dump(j));
    return ok ? 0 : exit_tolerance;
}

int cmd_enhance(const Common &c, const std::string &certificate, std::size_t samples)
{
    const Tolerance tol = c.tolerance();
    if (certificate.empty())
        throw FormatError("--certificate is required");
    Certificate cert = certificate_from_json(read_json_file(certificate));
    const Diagnostics d = validate(cert.channel, tol);
    if (!d.ok())
        throw PreconditionError("invalid channel: " + d.violations.front().what);
    cert.kkt = kkt_residuals(cert.channel, cert.partition, cert.mu, cert.kkt);
    cert.enhanced = enhance(cert.channel, cert.partition, cert.kkt, cert.mu);
    cert.report = verify_enhancement(cert.channel, cert.partition, cert.kkt, cert.mu, *cert.enhanced);
    Json j = certificate_to_json(cert, c.rate_scale());
    bool ok = cert.report->max_residual() <= tol.residual_tol;
    if (samples > 0)
    {
        SearchOptions so;
        so.samples = samples;
        so.seed = c.resolved_seed(so.seed);
        const TouchingReport tr = touching_point_check(cert.channel, cert.partition, cert.mu, *cert.enhanced, so, tol);
        j["touching"] = {{"aligned_value", tr.aligned_value},
                         {"degraded_value", tr.degraded_value},
                         {"search_value", tr.search_value},
                         {"equality_gap", tr.equality_gap},
                         {"search_gap", tr.search_gap},
                         {"ok", tr.ok}};
        ok = ok && tr.ok;
    }
    j["ok"] = ok;
    emit(c, dump(j));
    return ok ? 0 : exit_tolerance;
}

// ---- estimate ----------------------------------------------------------------------

struct EstimateArgs
{
    std::string mixture;
    std::string quantity = "entropy";
    double t = 1.0;
    double t2 = 2.0;
    double sigma_sq = 1.0;
    std::size_t samples = EstimatorConfig{}.mc_samples;
    std::size_t grid = 1000;
    double t_max = 10.0;
    std::string channel;
};

Json estimate_json(const Estimate &e) { return {{"value", e.value}, {"stderr", e.stderr_}}; }

Json identity_json(const IdentityCheck &ic)
{
    return {{"lhs", ic.lhs}, {"rhs", ic.rhs}, {"residual", ic.residual}, {"stderr", ic.stderr_}};
}

int cmd_estimate(const Common &c, const EstimateArgs &a)
{
    const Tolerance tol = c.tolerance();
    if (a.mixture.empty())
        throw FormatError("--mixture is required");
    const VectorMixture x = mixture_from_json(read_json_file(a.mixture));
    x.validate(tol);
    EstimatorConfig cfg;
    cfg.mc_samples = a.samples;
    cfg.seed = c.resolved_seed(cfg.seed);
    cfg.validate();
    const bool scalar = x.dim() == 1;
    const Eigen::Index d = x.dim();

    Json j;
    j["quantity"] = a.quantity;
    j["dimension"] = d;
    bool ok = true;
    auto residual_ok = [&](const IdentityCheck &ic) { return ic.within(tol.residual_tol); };

    if (a.quantity == "entropy")
    {
        j["t"] = a.t;
        j["result"] = estimate_json(scalar ? entropy_plus_noise(to_scalar(x), a.t, cfg)
                                           : entropy_plus_noise(x, a.t * Matrix::Identity(d, d), cfg));
    }
    else if (a.quantity == "mmse")
    {
        j["t"] = a.t;
        j["result"] = mmse(to_scalar(x), a.t, cfg);
    }
    else if (a.quantity == "fisher")
    {
        j["t"] = a.t;
        if (scalar)
            j["result"] = fisher(to_scalar(x).affine_noise(1.0, a.t), cfg);
        else
        {
            const FisherEstimate fe = fisher(x.plus_noise(a.t * Matrix::Identity(d, d)), cfg);
            Matrix se(d, d);
            for (Eigen::Index r = 0; r < d; ++r)
                for (Eigen::Index q = 0; q < d; ++q)
                    se(r, q) = fe.moments.stderr_at(q * d + r);
            j["result"] = {{"value", matrix_to_json(fe.value)}, {"stderr", matrix_to_json(se)}};
        }
    }
    else if (a.quantity == "de-bruijn")
    {
        j["t"] = a.t;
        const IdentityCheck ic = scalar ? check_de_bruijn(to_scalar(x), a.t, cfg)
                                        : check_de_bruijn(x, a.t * Matrix::Identity(d, d), Matrix::Identity(d, d), cfg);
        j["result"] = identity_json(ic);
        ok = residual_ok(ic) || (!scalar && ic.within(1e-4));
    }
    else if (a.quantity == "immse")
    {
        j["t1"] = a.t;
        j["t2"] = a.t2;
        const IdentityCheck ic = check_immse(to_scalar(x), a.t, a.t2, cfg);
        j["result"] = identity_json(ic);
        ok = residual_ok(ic);
    }
    else if (a.quantity == "complementary")
    {
        j["t"] = a.t;
        const IdentityCheck ic = check_complementary(to_scalar(x), a.t, cfg);
        j["result"] = identity_json(ic);
        ok = residual_ok(ic);
    }
    else if (a.quantity == "crossing")
    {
        require(a.grid >= 2 && a.t_max > 0.0, "crossing: need --grid >= 2 and --t-max > 0");
        std::vector<double> grid;
        for (std::size_t i = 0; i < a.grid; ++i)
            grid.push_back(a.t_max * static_cast<double>(i) / static_cast<double>(a.grid - 1));
        const CrossingReport cr = check_single_crossing(to_scalar(x), a.sigma_sq, grid, cfg);
        j["sigma_sq"] = a.sigma_sq;
        j["result"] = {{"sign_changes", cr.sign_changes},
                       {"negative_to_positive", cr.negative_to_positive},
                       {"identically_zero", cr.identically_zero}};
        ok = cr.ok;
    }
    else if (a.quantity == "kstar")
    {
        const ChannelSpec spec = load_channel(a.channel);
        const AlignedChannel ch = require_aligned(spec, tol);
        require(ch.users() == 2, "kstar: channel must have two receivers (Sigma_1, Sigma_2)");
        const KStarResult ks = find_kstar(x, ch.s, ch.sigmas[0], ch.sigmas[1], ch.sigma_z, cfg, tol);
        j["result"] = {{"K_star", matrix_to_json(ks.k_star)},
                       {"t_star", ks.t_star},
                       {"alpha", estimate_json(ks.alpha)},
                       {"beta", estimate_json(ks.beta)},
                       {"r0", ks.r0},
                       {"r1", ks.r1},
                       {"clamped", ks.clamped},
                       {"equality", identity_json(ks.equality)},
                       {"lower_margin", {{"value", ks.lower.value}, {"stderr", ks.lower.stderr_}}},
                       {"upper_margin", {{"value", ks.upper.value}, {"stderr", ks.upper.stderr_}}},
                       {"inequality_margin", {{"value", ks.inequality.value}, {"stderr", ks.inequality.stderr_}}}};
        ok = ks.ok(tol.residual_tol);
    }
    else
    {
        throw FormatError("unknown quantity \"" + a.quantity + "\"");
    }
    j["ok"] = ok;
    emit(c, dump(j));
    return ok ? 0 : exit_tolerance;
}

// ---- validate ------------------------------------------------------------------------

int cmd_validate(const Common &c, const std::string &channel)
{
    const ChannelSpec spec = load_channel(channel);
    const Diagnostics d = validate(spec, c.tolerance());
    Json j;
    j["channel"] = channel_to_json(spec);
    j["ok"] = d.ok();
    j["violations"] = diagnostics_to_json(d);
    emit(c, dump(j));
    return d.ok() ? 0 : exit_tolerance;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Secrecy capacity region tools for Gaussian MIMO broadcast channels"};
    app.require_subcommand(1);
    Common common;

    std::string channel, partition, order, weights, certificate;
    std::string ladder = "1e-1,1e-2,1e-3,1e-4";
    std::size_t steps = 51, resolution = 5, search = 0;
    double power = 1.0;
    std::vector<double> noise;
    EstimateArgs est;

    auto *siso = app.add_subcommand("siso", "Scalar two-user rate pairs over the power split");
    add_common(siso, common);
    siso->add_option("--channel", channel, "Channel JSON of type siso");
    siso->add_option("--power,-P", power, "Input power");
    siso->add_option("--noise", noise, "sigma1^2 sigma2^2 sigmaZ^2")->delimiter(',');
    siso->add_option("--steps", steps, "Number of alpha grid points");

    auto *sweep = app.add_subcommand("sweep", "Boundary points over a weight grid");
    add_common(sweep, common);
    sweep->add_option("--channel", channel, "Channel JSON")->required();
    sweep->add_option("--weights", resolution, "Grid points per simplex edge");
    sweep->add_option("--alpha-ladder", ladder, "Perturbation levels for general channels");
    sweep->add_option("--certificates", certificate, "Directory for per-point certificate JSON");

    auto *rates = app.add_subcommand("rates", "DPC secrecy rates of a partition");
    add_common(rates, common);
    rates->add_option("--channel", channel, "Channel JSON")->required();
    rates->add_option("--partition", partition, "Partition JSON")->required();
    rates->add_option("--order", order, "Encoding order, 1-based, e.g. 2,1");

    auto *kkt = app.add_subcommand("kkt", "KKT multipliers and residuals");
    add_common(kkt, common);
    kkt->add_option("--channel", channel, "Channel JSON");
    kkt->add_option("--partition", partition, "Partition JSON");
    kkt->add_option("--weights", weights, "Weights, e.g. 1,2");
    kkt->add_option("--certificate", certificate, "Check the multipliers of a certificate instead");

    auto *enh = app.add_subcommand("enhance", "Channel enhancement of a certified boundary point");
    add_common(enh, common);
    enh->add_option("--certificate", certificate, "Certificate JSON")->required();
    enh->add_option("--search", search, "Random partitions for the touching-point search (0 skips it)");

    auto *estimate = app.add_subcommand("estimate", "Information estimates of a Gaussian mixture");
    add_common(estimate, common);
    estimate->add_option("--mixture", est.mixture, "Mixture JSON")->required();
    estimate
        ->add_option("--quantity", est.quantity,
                     "entropy|mmse|fisher|de-bruijn|immse|complementary|crossing|kstar")
        ->capture_default_str();
    estimate->add_option("--t", est.t, "Noise level / SNR (t1 for immse)");
    estimate->add_option("--t2", est.t2, "Upper SNR for immse");
    estimate->add_option("--sigma-sq", est.sigma_sq, "Reference variance for crossing");
    estimate->add_option("--samples", est.samples, "Monte Carlo samples");
    estimate->add_option("--grid", est.grid, "Grid points for crossing");
    estimate->add_option("--t-max", est.t_max, "Grid end for crossing");
    estimate->add_option("--channel", est.channel, "Two-receiver channel for kstar");

    auto *val = app.add_subcommand("validate", "Channel diagnostics");
    add_common(val, common);
    val->add_option("--channel", channel, "Channel JSON")->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        return app.exit(e);
    }

    try
    {
        if (siso->parsed())
            return cmd_siso(common, channel, power, noise, steps);
        if (sweep->parsed())
            return cmd_sweep(common, channel, resolution, ladder, certificate);
        if (rates->parsed())
            return cmd_rates(common, channel, partition, order);
        if (kkt->parsed())
            return cmd_kkt(common, channel, partition, weights, certificate);
        if (enh->parsed())
            return cmd_enhance(common, certificate, search);
        if (estimate->parsed())
            return cmd_estimate(common, est);
        if (val->parsed())
            return cmd_validate(common, channel);
    }
    catch (const FormatError &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return exit_format;
    }
    catch (const nlohmann::json::exception &e)
    {
        std::cerr << "error: malformed input: " << e.what() << "\n";
        return exit_format;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return exit_tolerance;
    }
    return 0;
}
