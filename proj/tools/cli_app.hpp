// cli_app.hpp
// Command-line front end: analytic sweeps, bench simulation, protocol
// evaluation and chain-rate sweeps written as CSV or JSON.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rusq/chain_model.hpp"
#include "rusq/detector.hpp"
#include "rusq/optical_bench.hpp"
#include "rusq/protocol.hpp"
#include "rusq/swap_analytics.hpp"

namespace rusq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNonConvergence = 3;

struct UsageError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

/// Fixed 12-significant-digit decimal used for every CSV number.
inline std::string fmt_num(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

/// "x", "start:stop:step" (stop included when hit) or "x,y,z".
inline std::vector<double> parse_range(const std::string& text)
{
    auto to_double = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try
        {
            v = std::stod(s, &used);
        }
        catch (const std::exception&)
        {
            throw UsageError("bad number '" + s + "' in range '" + text + "'");
        }
        if (used != s.size() || !std::isfinite(v))
            throw UsageError("bad number '" + s + "' in range '" + text + "'");
        return v;
    };
    std::vector<std::string> parts;
    const char sep = text.find(':') != std::string::npos ? ':' : ',';
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, sep);)
        parts.push_back(item);
    if (text.empty() || parts.empty())
        throw UsageError("empty range");
    if (sep == ',')
    {
        std::vector<double> out;
        for (const auto& p : parts)
            out.push_back(to_double(p));
        return out;
    }
    if (parts.size() != 3)
        throw UsageError("range '" + text + "' must be start:stop:step");
    const double start = to_double(parts[0]);
    const double stop = to_double(parts[1]);
    const double step = to_double(parts[2]);
    if (!(step > 0.0) || stop < start)
        throw UsageError("range '" + text + "' needs step > 0 and stop >= start");
    const double span = (stop - start) / step;
    if (span > 1e6)
        throw UsageError("range '" + text + "' has too many points");
    const auto count = static_cast<long>(std::floor(span + 1e-9)) + 1;
    std::vector<double> out;
    for (long i = 0; i < count; ++i)
        out.push_back(i + 1 == count && std::abs(start + i * step - stop) < 1e-9 * step
                          ? stop
                          : start + static_cast<double>(i) * step);
    return out;
}

inline std::vector<BranchingDepth> parse_depths(const std::string& text)
{
    std::vector<BranchingDepth> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');)
    {
        try
        {
            out.push_back(BranchingDepth::parse(item));
        }
        catch (const std::invalid_argument& e)
        {
            throw UsageError(e.what());
        }
    }
    if (out.empty())
        throw UsageError("empty variant list");
    return out;
}

inline DetectorModel make_detector(const std::string& kind, double eta)
{
    if (kind == "threshold")
        return DetectorModel::threshold(eta);
    if (kind == "resolving")
        return DetectorModel::resolving(eta);
    throw UsageError("unknown detector kind '" + kind + "'");
}

/// key = value lines, '#' comments, blank lines ignored.
inline std::map<std::string, std::string> read_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot open config file '" + path + "'");
    std::map<std::string, std::string> out;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    int line_no = 0;
    for (std::string line; std::getline(in, line);)
    {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError(path + ":" + std::to_string(line_no) + ": expected key = value");
        out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return out;
}

struct RunConfig
{
    std::string eta = "";
    std::string mu = "0:1:0.1";
    std::string depths = "";
    std::string distance = "";
    std::string variant = "basic";
    std::string detector = "";
    std::string mode = "both";
    std::string format = "csv";
    std::string out_path;
    std::string config_path;
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    double attenuation = 25.0;
    double light_speed = 2e5;
    double prefactor = 0.1;
    int max_nesting = kDefaultMaxNesting;
    int max_rounds = kDefaultMaxRounds;
};

namespace detail {

inline void write_csv(std::ostream& out,
                      const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows)
{
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i)
            out << (i ? "," : "") << cells[i];
        out << '\n';
    };
    line(header);
    for (const auto& r : rows)
        line(r);
}

inline void write_table(std::ostream& out,
                        const std::string& format,
                        const std::vector<std::string>& header,
                        const std::vector<std::vector<std::string>>& rows)
{
    if (format == "csv")
    {
        write_csv(out, header, rows);
        return;
    }
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rows)
    {
        nlohmann::ordered_json obj;
        for (std::size_t i = 0; i < header.size(); ++i)
        {
            // Cells are produced by fmt_num or are labels.
            char* end = nullptr;
            const double v = std::strtod(r[i].c_str(), &end);
            if (end && *end == '\0' && !r[i].empty())
                obj[header[i]] = v;
            else
                obj[header[i]] = r[i];
        }
        arr.push_back(obj);
    }
    out << arr.dump(2) << '\n';
}

inline double single_value(const std::string& text, const char* what)
{
    const auto v = parse_range(text);
    if (v.size() != 1)
        throw UsageError(std::string(what) + " expects a single value");
    return v.front();
}

inline nlohmann::ordered_json exact_json(const ExactResult& r)
{
    nlohmann::ordered_json j;
    j["p_success"] = r.p_success;
    j["p_abort"] = r.p_abort;
    j["residual"] = r.residual;
    j["fidelity"] = r.fidelity;
    j["worst_fidelity"] = r.worst_fidelity;
    j["expected_rounds"] = r.expected_rounds;
    j["rounds_evaluated"] = r.rounds_evaluated;
    j["stationary"] = r.stationary;
    j["converged"] = r.converged;
    return j;
}

inline nlohmann::ordered_json mc_json(const McEstimate& e, std::uint64_t seed)
{
    nlohmann::ordered_json j;
    j["trials"] = e.trials;
    j["seed"] = seed;
    j["successes"] = e.successes;
    j["capped"] = e.capped;
    j["p_success"] = e.p_success;
    j["p_success_se"] = e.p_success_se;
    j["fidelity"] = e.fidelity;
    j["fidelity_se"] = e.fidelity_se;
    j["expected_rounds"] = e.expected_rounds;
    j["expected_rounds_se"] = e.expected_rounds_se;
    return j;
}

}  // namespace detail

//---------------------------------------------------------------------------//
// Subcommands
//---------------------------------------------------------------------------//

inline int cmd_probs(const RunConfig& c, std::ostream& out)
{
    std::vector<std::vector<std::string>> rows;
    for (double eta : parse_range(c.eta.empty() ? "0:1:0.1" : c.eta))
    {
        for (double mu : parse_range(c.mu))
        {
            if (eta < 0.0 || eta > 1.0 || mu < 0.0)
                throw UsageError("eta must lie in [0, 1] and mu in [0, eta]");
            if (mu > eta + 1e-12)
                continue;
            const auto p = outcome_probs(eta, std::min(mu, eta));
            rows.push_back({fmt_num(eta), fmt_num(mu), fmt_num(p.p11), fmt_num(p.p20),
                            fmt_num(p.p10_1), fmt_num(p.p10_2), fmt_num(p.p00)});
        }
    }
    detail::write_table(out, c.format, {"eta", "mu", "P11", "P20", "P10_1", "P10_2", "P00"}, rows);
    return kExitOk;
}

inline int cmd_fig5(const RunConfig& c, std::ostream& out)
{
    const auto etas = parse_range(c.eta.empty() ? "0:1:0.01" : c.eta);
    const auto depths = parse_depths(c.depths.empty() ? "0,1,2,3,4,inf" : c.depths);
    std::vector<std::vector<std::string>> rows;
    for (const auto& d : depths)
    {
        for (double eta : etas)
        {
            if (eta < 0.0 || eta > 1.0)
                throw UsageError("eta range must lie inside [0, 1]");
            rows.push_back({fmt_num(eta), d.to_string(), fmt_num(p_succ_branching(eta, d))});
        }
    }
    detail::write_table(out, c.format, {"eta", "N", "p_succ"}, rows);
    return kExitOk;
}

inline ChainConfig chain_base(const RunConfig& c)
{
    ChainConfig base;
    base.attenuation_km = c.attenuation;
    base.light_speed_km_s = c.light_speed;
    base.source_prefactor = c.prefactor;
    return base;
}

inline int cmd_fig7(const RunConfig& c, std::ostream& out)
{
    const double eta = detail::single_value(c.eta.empty() ? "0.93" : c.eta, "--eta");
    const auto distances = parse_range(c.distance.empty() ? "50:2500:50" : c.distance);
    const auto depths = parse_depths(c.depths.empty() ? "0,1,2,inf" : c.depths);
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : sweep_distance(distances, depths, eta, chain_base(c), c.max_nesting))
        rows.push_back({fmt_num(r.distance_km), variant_label(r.depth), std::to_string(r.nesting),
                        fmt_num(r.rate)});
    detail::write_table(out, c.format, {"L_km", "variant", "n_opt", "rate_per_s"}, rows);
    return kExitOk;
}

inline int cmd_chain(const RunConfig& c, std::ostream& out)
{
    const double eta = detail::single_value(c.eta.empty() ? "0.93" : c.eta, "--eta");
    const double distance = detail::single_value(c.distance.empty() ? "1000" : c.distance, "--L");
    const auto depths = parse_depths(c.depths.empty() ? "inf" : c.depths);
    if (depths.size() != 1)
        throw UsageError("chain expects a single --N");
    const ChainConfig tmpl = chain_for_branching(distance, eta, depths.front(), chain_base(c));
    const auto best = optimize_nesting(tmpl, c.max_nesting);
    std::vector<std::vector<std::string>> rows;
    for (int n = 0; n <= c.max_nesting; ++n)
    {
        ChainConfig cfg = tmpl;
        cfg.nesting = n;
        rows.push_back({std::to_string(n), fmt_num(cfg.segment_km()), fmt_num(cfg.source_success()),
                        fmt_num(cfg.swap_success), fmt_num(entanglement_rate(cfg)),
                        n == best.nesting ? "1" : "0"});
    }
    detail::write_table(out, c.format, {"n", "L0_km", "P_S", "p_succ", "rate_per_s", "optimal"},
                        rows);
    return kExitOk;
}

inline int cmd_bench(const RunConfig& c, std::ostream& out)
{
    const double eta = detail::single_value(c.eta.empty() ? "1" : c.eta, "--eta");
    const auto depths = parse_depths(c.depths.empty() ? "0" : c.depths);
    if (depths.size() != 1 || depths.front().is_infinite())
        throw UsageError("bench expects a single finite --N");
    const auto detector = make_detector(c.detector.empty() ? "resolving" : c.detector, eta);
    const HybridState encoded =
        double_encode(double_encode(initial_memory_state(), kQubitAp, kPathA), kQubitBp, kPathB);
    std::vector<std::vector<std::string>> rows;
    for (const auto& b : simulate_bench(encoded, build_mub_bench(depths.front().levels()), detector))
        rows.push_back({to_string(b.outcome), fmt_num(b.probability)});
    detail::write_table(out, c.format, {"outcome", "probability"}, rows);
    return kExitOk;
}

inline int cmd_swap(const RunConfig& c, std::ostream& out)
{
    if (c.format != "json")
        throw UsageError("swap writes a JSON report; use --format json");
    const double eta = detail::single_value(c.eta.empty() ? "0.9" : c.eta, "--eta");
    ProtocolVariant variant;
    std::string detector_kind = c.detector;
    if (c.variant == "basic")
    {
        variant = ProtocolVariant::basic();
        if (detector_kind.empty())
            detector_kind = "resolving";
    }
    else if (c.variant == "modified")
    {
        variant = ProtocolVariant::modified();
        if (detector_kind.empty())
            detector_kind = "threshold";
    }
    else if (c.variant == "branching")
    {
        const auto d = parse_depths(c.depths.empty() ? "2" : c.depths);
        if (d.size() != 1 || d.front().is_infinite())
            throw UsageError("branching expects a single finite --N (use basic with a "
                             "resolving detector for N = inf)");
        variant = ProtocolVariant::branching(d.front().levels());
        if (detector_kind.empty())
            detector_kind = "threshold";
    }
    else
    {
        throw UsageError("unknown variant '" + c.variant + "'");
    }
    if (c.mode != "mc" && c.mode != "exact" && c.mode != "both")
        throw UsageError("--mode must be mc, exact or both");
    const DetectorModel detector = make_detector(detector_kind, eta);
    try
    {
        validate(variant, detector);
    }
    catch (const std::invalid_argument& e)
    {
        throw UsageError(e.what());
    }
    const double mu = variant.kind == VariantKind::Branching
                          ? branching_resolution(eta, BranchingDepth(variant.levels))
                          : detector.resolution();

    nlohmann::ordered_json report;
    report["variant"] = c.variant;
    report["eta"] = eta;
    report["detector"] = detector.kind_name();
    report["N"] = variant.kind == VariantKind::Branching ? variant.levels : 0;
    report["mu"] = mu;

    const auto probs = outcome_probs(eta, mu);
    nlohmann::ordered_json closed;
    closed["P11"] = probs.p11;
    closed["P20"] = probs.p20;
    closed["P10_1"] = probs.p10_1;
    closed["P10_2"] = probs.p10_2;
    closed["P00"] = probs.p00;
    if (variant.kind == VariantKind::ModifiedErrors)
    {
        const auto m = modified_metrics(eta);
        closed["p_succ"] = m.p_succ;
        closed["p_error"] = m.p_error;
        closed["fidelity"] = m.fidelity;
    }
    else
    {
        closed["p_succ"] = p_succ_basic(eta, mu);
    }
    report["closed_form"] = closed;

    RoundKernel kernel(variant, detector);
    int status = kExitOk;
    std::optional<ExactResult> exact;
    if (c.mode != "mc")
    {
        exact = exact_markov_eval(kernel, {kDefaultTolerance, std::max(c.max_rounds, 1)});
        report["exact"] = detail::exact_json(*exact);
        if (!exact->converged)
            status = kExitNonConvergence;
    }
    if (c.mode != "exact")
        report["monte_carlo"] =
            detail::mc_json(mc_estimate(kernel, c.trials, c.seed, c.max_rounds), c.seed);

    if (variant.kind == VariantKind::ModifiedErrors)
    {
        const auto m = modified_metrics(eta);
        nlohmann::ordered_json disc;
        disc["printed"] = {{"p_succ", m.p_succ},
                           {"p_error", m.p_error},
                           {"qber", m.qber()},
                           {"fidelity", m.fidelity}};
        disc["literal_recursion"] = {{"p_succ", m.recursion_p_succ},
                                     {"fidelity", m.recursion_fidelity}};
        if (!exact)
            exact = exact_markov_eval(kernel, {kDefaultTolerance, std::max(c.max_rounds, 1)});
        disc["oracle"] = {{"p_success", exact->p_success},
                          {"fidelity", exact->fidelity},
                          {"converged", exact->converged}};
        report["discrepancy"] = disc;
    }
    out << report.dump(2) << '\n';
    return status;
}

//---------------------------------------------------------------------------//
// Entry point
//---------------------------------------------------------------------------//

namespace detail {

inline void add_common(CLI::App* sub, RunConfig& c)
{
    sub->add_option("--out", c.out_path, "Output file (default stdout)");
    sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--config", c.config_path, "key = value config file");
}

inline void add_chain_options(CLI::App* sub, RunConfig& c)
{
    sub->add_option("--Latt", c.attenuation, "Attenuation length (km)");
    sub->add_option("--c", c.light_speed, "Light speed in the channel (km/s)");
    sub->add_option("--prefactor", c.prefactor, "Source success prefactor");
    sub->add_option("--nmax", c.max_nesting, "Largest nesting level tried");
}

}  // namespace detail

/*!
 * Runs one invocation. Options come from the command line, then the
 * --config file, then built-in defaults.
 */
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err)
{
    RunConfig c;
    CLI::App app{"Repeat-until-success Bell-state measurement simulator"};
    app.require_subcommand(1);

    auto* probs = app.add_subcommand("probs", "Outcome probabilities over an (eta, mu) grid");
    probs->add_option("--eta", c.eta, "eta range start:stop:step");
    probs->add_option("--mu", c.mu, "mu range start:stop:step (rows with mu > eta skipped)");

    auto* fig5 = app.add_subcommand("fig5", "Success probability versus efficiency per branching depth");
    fig5->add_option("--eta", c.eta, "eta range");
    fig5->add_option("--N", c.depths, "Branching depths, e.g. 0,1,2,inf");

    auto* fig7 = app.add_subcommand("fig7", "Optimized chain rate versus distance");
    fig7->add_option("--L", c.distance, "Distance range (km)");
    fig7->add_option("--N", c.depths, "Branching depths; 0 is the non-RUS scheme");
    fig7->add_option("--eta", c.eta, "Detector efficiency");
    detail::add_chain_options(fig7, c);

    auto* chain = app.add_subcommand("chain", "Rate per nesting level at one distance");
    chain->add_option("--L", c.distance, "Distance (km)");
    chain->add_option("--N", c.depths, "Branching depth (0 = non-RUS, inf = resolving)");
    chain->add_option("--eta", c.eta, "Detector efficiency");
    detail::add_chain_options(chain, c);

    auto* bench = app.add_subcommand("bench", "Outcome distribution of one measurement round");
    bench->add_option("--eta", c.eta, "Detector efficiency");
    bench->add_option("--N", c.depths, "Splitter-tree depth in front of each detector");
    bench->add_option("--detector", c.detector, "threshold or resolving");

    auto* swap = app.add_subcommand("swap", "Evaluate a protocol variant");
    swap->add_option("--variant", c.variant, "basic, modified or branching")
        ->check(CLI::IsMember({"basic", "modified", "branching"}));
    swap->add_option("--eta", c.eta, "Detector efficiency");
    swap->add_option("--mu", c.mu, "Ignored; mu follows from the detector");
    swap->add_option("--N", c.depths, "Branching depth (branching variant)");
    swap->add_option("--detector", c.detector, "threshold or resolving");
    swap->add_option("--trials", c.trials, "Monte Carlo trials");
    swap->add_option("--seed", c.seed, "64-bit seed");
    swap->add_option("--mode", c.mode, "mc, exact or both")
        ->check(CLI::IsMember({"mc", "exact", "both"}));
    swap->add_option("--max-rounds", c.max_rounds, "Round cap per trajectory");

    for (auto* sub : {probs, fig5, fig7, chain, bench, swap})
        detail::add_common(sub, c);

    int status = kExitOk;
    try
    {
        // Config file values fill in options not given on the command line.
        for (std::size_t i = 0; i + 1 < args.size(); ++i)
        {
            if (args[i] != "--config")
                continue;
            CLI::App* target = app.get_subcommand_no_throw(args[0]);
            if (!target)
                break;
            for (const auto& [key, value] : read_config_file(args[i + 1]))
            {
                const std::string flag = "--" + key;
                if (!target->get_option_no_throw(flag))
                    throw UsageError("unknown config key '" + key + "'");
                if (std::find(args.begin(), args.end(), flag) == args.end())
                {
                    args.push_back(flag);
                    args.push_back(value);
                }
            }
            break;
        }
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));

        for (auto* sub : app.get_subcommands())
            for (const auto* opt : sub->get_options())
                for (const auto& value : opt->results())
                    if (value.empty())
                        throw UsageError("empty value for " + opt->get_name());

        std::ofstream file;
        std::ostream* sink = &out;
        if (!c.out_path.empty())
        {
            file.open(c.out_path, std::ios::binary);
            if (!file)
                throw UsageError("cannot open output '" + c.out_path + "'");
            sink = &file;
        }
        if (swap->parsed())
        {
            if (swap->count("--format") == 0)
                c.format = "json";
            status = cmd_swap(c, *sink);
        }
        else if (probs->parsed())
            status = cmd_probs(c, *sink);
        else if (fig5->parsed())
            status = cmd_fig5(c, *sink);
        else if (fig7->parsed())
            status = cmd_fig7(c, *sink);
        else if (chain->parsed())
            status = cmd_chain(c, *sink);
        else if (bench->parsed())
            status = cmd_bench(c, *sink);
    }
    catch (const CLI::CallForHelp&)
    {
        out << app.help();
        return kExitOk;
    }
    catch (const CLI::CallForAllHelp&)
    {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    }
    catch (const CLI::ParseError& e)
    {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    catch (const UsageError& e)
    {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    catch (const std::invalid_argument& e)
    {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return status;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(std::move(args), out, err);
}

}  // namespace rusq::cli
