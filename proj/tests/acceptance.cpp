// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cli_app.hpp"
#include "rusq/chain_model.hpp"
#include "rusq/optical_bench.hpp"
#include "rusq/protocol.hpp"
#include "rusq/swap_analytics.hpp"

using namespace rusq;

namespace {

const Complex kI{0.0, 1.0};

struct Check
{
    bool ok = true;
    std::ostringstream detail;

    void require(bool cond, const std::string& what)
    {
        if (!cond)
        {
            if (!ok)
                detail << "; ";
            detail << what;
            ok = false;
        }
    }
};

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

HybridState encoded_input()
{
    return double_encode(double_encode(initial_memory_state(), kQubitAp, kPathA), kQubitBp, kPathB);
}

HybridState memory_state(Complex c0101, Complex c0110, Complex c1001, Complex c1010)
{
    return make_state({kQubitA, kQubitAp, kQubitB, kQubitBp}, {},
                      {{"0101", {}, c0101}, {"0110", {}, c0110}, {"1001", {}, c1001},
                       {"1010", {}, c1010}});
}

std::string run_cli(const std::vector<std::string>& args, int* code = nullptr)
{
    std::ostringstream out;
    std::ostringstream err;
    const int c = cli::run(args, out, err);
    if (code)
        *code = c;
    return out.str();
}

//---------------------------------------------------------------------------//

Check criterion1()
{
    Check c;
    double worst = 0.0;
    for (int i = 0; i < 100; ++i)
    {
        const double eta = i / 99.0;
        for (int j = 0; j < 100; ++j)
        {
            const auto p = outcome_probs(eta, eta * j / 99.0);
            worst = std::max(worst, std::abs(p.total() - 1.0));
        }
    }
    c.require(worst <= 1e-12, "max |sum - 1| = " + num(worst));
    c.detail << (c.ok ? "max |sum - 1| = " + num(worst) : "");
    return c;
}

Check criterion2()
{
    Check c;
    double worst = 0.0;
    for (int k = 0; k <= 10; ++k)
    {
        const double eta = 0.5 + 0.05 * k;
        const auto r = exact_markov_eval(ProtocolVariant::basic(), DetectorModel::resolving(eta));
        worst = std::max(worst, std::abs(r.p_success - eta * eta / (2 - eta * eta)));
    }
    const double at09 =
        exact_markov_eval(ProtocolVariant::basic(), DetectorModel::resolving(0.9)).p_success;
    c.require(worst <= 1e-9, "max deviation " + num(worst));
    c.require(std::abs(at09 - 0.680672) <= 5e-7, "P(0.9) = " + num(at09));
    if (c.ok)
        c.detail << "max deviation " << num(worst) << ", P(0.9) = " << num(at09);
    return c;
}

Check criterion3()
{
    Check c;
    const auto out = simulate_bench(encoded_input(), build_mub_bench(0), DetectorModel::resolving(1.0));
    const HybridState expected[] = {memory_state(1, 1, 1, 1), memory_state(1, -1, -1, 1),
                                    memory_state(1, kI, -kI, -1), memory_state(1, -kI, kI, -1)};
    const OutcomeTag tags[] = {OutcomeTag::Chi1, OutcomeTag::Chi2, OutcomeTag::Chi3, OutcomeTag::Chi4};
    c.require(out.size() == 4, "expected four outcome classes, got " + std::to_string(out.size()));
    for (int i = 0; i < 4; ++i)
    {
        double p = 0.0;
        double f = 0.0;
        for (const auto& b : out)
            if (b.outcome.tag == tags[i])
            {
                p += b.probability;
                for (const auto& m : b.memory.members())
                    f += m.weight * fidelity(m.state, expected[i]);
            }
        c.require(std::abs(p - 0.25) <= 1e-9, "P(chi" + std::to_string(i + 1) + ") = " + num(p));
        c.require(f >= 1 - 1e-9, "fidelity chi" + std::to_string(i + 1) + " = " + num(f));
    }

    // Table 1 on the bare bench.
    const std::vector<std::string> modes{"a.H", "a.V", "b.H", "b.V"};
    const std::vector<JointTerm> phis[] = {
        {{"", {"a.H", "b.H"}, 1.0}},
        {{"", {"a.V", "b.V"}, 1.0}},
        {{"", {"a.H", "b.V"}, 1.0}, {"", {"a.V", "b.H"}, 1.0}},
        {{"", {"a.H", "b.V"}, 1.0}, {"", {"a.V", "b.H"}, -1.0}}};
    const std::map<ClickPattern, double> table[] = {
        {{{{2, 2}}, 0.5}, {{{4, 2}}, 0.5}},
        {{{{1, 2}}, 0.5}, {{{3, 2}}, 0.5}},
        {{{{1, 1}, {2, 1}}, 0.5}, {{{3, 1}, {4, 1}}, 0.5}},
        {{{{1, 1}, {4, 1}}, 0.5}, {{{2, 1}, {3, 1}}, 0.5}}};
    const Bench bsm = build_bsm_bench();
    for (int i = 0; i < 4; ++i)
    {
        std::map<ClickPattern, double> got;
        for (const auto& b : simulate_bench_patterns(WeightedEnsemble(make_state({}, modes, phis[i])),
                                                     bsm, DetectorModel::resolving(1.0)))
            got[b.pattern] += b.probability;
        bool match = got.size() == table[i].size();
        for (const auto& [pattern, p] : table[i])
            match = match && got.count(pattern) && std::abs(got[pattern] - p) <= 1e-12;
        c.require(match, "Table 1 row Phi" + std::to_string(i + 1) + " mismatch");
    }
    if (c.ok)
        c.detail << "four classes at 1/4 with matching memory states; Table 1 rows hold";
    return c;
}

Check criterion4()
{
    Check c;
    const double tol = 5e-4;
    const auto m9 = modified_metrics(0.9);
    const auto m95 = modified_metrics(0.95);
    const std::vector<std::tuple<std::string, double, double>> points{
        {"P00(0.9)", outcome_probs(0.9, 0.9).p00, 0.01},
        {"basic threshold P(0.9)", p_succ_basic(0.9, 0.0), 0.405},
        {"modified P(0.9)", m9.p_succ, 0.6923},
        {"modified F(0.9)", m9.fidelity, 0.8182},
        {"modified Perr/2(0.9)", m9.qber(), 0.0769},
        {"modified F(0.95)", m95.fidelity, 0.9048},
        {"modified Perr/2(0.95)", m95.qber(), 0.0435}};
    for (const auto& [name, value, target] : points)
        c.require(std::abs(value - target) <= tol, name + " = " + num(value));
    if (c.ok)
        c.detail << points.size() << " point values within " << tol;
    return c;
}

Check criterion5()
{
    Check c;
    const double inf = *threshold_eta(BranchingDepth::infinite());
    const double two = *threshold_eta(BranchingDepth(2));
    c.require(std::abs(inf - 0.8165) <= 5e-4, "eta*(inf) = " + num(inf));
    c.require(std::abs(two - 0.8528) <= 5e-4, "eta*(2) = " + num(two));
    double worst = 0.0;
    for (auto d : {BranchingDepth(1), BranchingDepth(2), BranchingDepth(3), BranchingDepth(8),
                   BranchingDepth::infinite()})
        worst = std::max(worst, std::abs(*threshold_eta(d) - *threshold_eta_bisection(d)));
    c.require(worst <= 1e-9, "closed form vs bisection " + num(worst));
    if (c.ok)
        c.detail << "eta*(inf) = " << num(inf) << ", eta*(2) = " << num(two)
                 << ", bisection gap " << num(worst);
    return c;
}

Check criterion6()
{
    Check c;
    double worst = 0.0;
    const HybridState input = encoded_input();
    const Bench flat = build_mub_bench(0);
    for (int n = 1; n <= 3; ++n)
    {
        const Bench tree = build_mub_bench(n);
        for (double eta : {0.7, 0.85, 0.93, 1.0})
        {
            std::map<SwapOutcome, double> full;
            std::map<SwapOutcome, double> model;
            for (const auto& b : simulate_bench(input, tree, DetectorModel::threshold(eta)))
                full[b.outcome] += b.probability;
            for (const auto& b : simulate_bench(input, flat, DetectorModel::tree(eta, BranchingDepth(n))))
                model[b.outcome] += b.probability;
            for (const auto& [k, v] : full)
                worst = std::max(worst, std::abs(v - model[k]));
            for (const auto& [k, v] : model)
                worst = std::max(worst, std::abs(v - full[k]));
        }
    }
    c.require(worst <= 1e-9, "max deviation " + num(worst));
    if (c.ok)
        c.detail << "max deviation " << num(worst) << " over N=1..3";
    return c;
}

Check criterion7()
{
    Check c;
    const double eta = 0.93;
    const double L = 1000.0;
    // Independent evaluation of P_S P^n c / 2L.
    auto rate = [&](double p, int n) {
        const double l0 = L / std::pow(2.0, n);
        return 0.1 * std::exp(-l0 / 25.0) * std::pow(p, n) * 2e5 / (2 * L);
    };
    const double anchor_conv = rate(eta * eta / 2, 5);
    const double anchor_rus = rate(eta * eta / (2 - eta * eta), 7);
    c.require(std::abs(anchor_conv - 0.0434) <= 5e-4, "anchor non-RUS " + num(anchor_conv));
    c.require(std::abs(anchor_rus - 1.09) <= 5e-3, "anchor N=inf " + num(anchor_rus));

    ChainConfig base;
    base.attenuation_km = 25.0;
    base.light_speed_km_s = 2e5;
    base.source_prefactor = 0.1;
    const std::vector<std::pair<BranchingDepth, int>> expected{
        {BranchingDepth(0), 5}, {BranchingDepth(1), 6}, {BranchingDepth(2), 6},
        {BranchingDepth::infinite(), 7}};
    double conv = 0.0;
    double rus = 0.0;
    for (const auto& [d, n] : expected)
    {
        const auto best = optimize_nesting(chain_for_branching(L, eta, d, base));
        c.require(best.nesting == n,
                  variant_label(d) + " n* = " + std::to_string(best.nesting));
        if (!d.is_infinite() && d.levels() == 0)
            conv = best.rate;
        if (d.is_infinite())
            rus = best.rate;
    }
    c.require(std::abs(conv - anchor_conv) <= 1e-12 * anchor_conv, "non-RUS rate " + num(conv));
    c.require(std::abs(rus - anchor_rus) <= 1e-12 * anchor_rus, "N=inf rate " + num(rus));
    const double ratio = rus / conv;
    c.require(ratio >= 10 && ratio <= 100, "ratio " + num(ratio));
    if (c.ok)
        c.detail << "n* = 5/6/6/7, rates " << num(conv) << " and " << num(rus) << ", ratio "
                 << num(ratio);
    return c;
}

Check criterion8()
{
    Check c;
    struct Case
    {
        std::string name;
        ProtocolVariant variant;
        bool resolving;
    };
    const std::vector<Case> cases{{"basic N=0", ProtocolVariant::basic(), false},
                                  {"basic N=inf", ProtocolVariant::basic(), true},
                                  {"modified", ProtocolVariant::modified(), false},
                                  {"branching N=2", ProtocolVariant::branching(2), false}};
    double worst_sigma = 0.0;
    int compared = 0;
    for (const auto& cs : cases)
    {
        for (double eta : {0.8, 0.9, 0.95})
        {
            const DetectorModel det =
                cs.resolving ? DetectorModel::resolving(eta) : DetectorModel::threshold(eta);
            RoundKernel kernel(cs.variant, det);
            const auto exact = exact_markov_eval(kernel);
            const auto mc = mc_estimate(kernel, 100000, 1);
            const std::string tag = cs.name + " eta=" + num(eta);
            auto compare = [&](const std::string& what, double est, double se, double ref) {
                const double gap = std::abs(est - ref);
                const double allowed = std::max(4 * se, 1e-9);
                c.require(gap <= allowed, tag + " " + what + " off by " + num(gap / std::max(se, 1e-300))
                                              + " se");
                if (se > 0)
                    worst_sigma = std::max(worst_sigma, gap / se);
                ++compared;
            };
            compare("p_success", mc.p_success, mc.p_success_se, exact.p_success);
            compare("fidelity", mc.fidelity, mc.fidelity_se, exact.fidelity);
            compare("rounds", mc.expected_rounds, mc.expected_rounds_se, exact.expected_rounds);
        }
    }
    const std::vector<std::string> args{"swap", "--variant", "modified", "--eta", "0.9",
                                        "--mode", "both", "--trials", "20000", "--seed", "99"};
    const std::string first = run_cli(args);
    const std::string second = run_cli(args);
    c.require(!first.empty() && first == second, "CLI output differs between identical runs");
    const std::vector<std::string> fig{"fig5", "--eta", "0:1:0.01"};
    c.require(run_cli(fig) == run_cli(fig), "fig5 output differs between identical runs");
    if (c.ok)
        c.detail << compared << " comparisons, worst " << num(worst_sigma)
                 << " se; CLI output byte-identical";
    return c;
}

Check criterion9()
{
    Check c;
    int code = -1;
    const std::string text = run_cli(
        {"swap", "--variant", "modified", "--eta", "0.9", "--mode", "both", "--trials", "20000"}, &code);
    c.require(code == 0, "exit code " + std::to_string(code));
    nlohmann::json j;
    try
    {
        j = nlohmann::json::parse(text);
    }
    catch (const std::exception& e)
    {
        c.require(false, std::string("report is not JSON: ") + e.what());
        return c;
    }
    const auto& d = j["discrepancy"];
    c.require(d.contains("printed") && d.contains("literal_recursion") && d.contains("oracle"),
              "missing value set");
    c.require(j.contains("exact") && j.contains("monte_carlo") && j.contains("closed_form"),
              "missing report block");
    if (!c.ok)
        return c;
    const double eta = 0.9;
    const double printed_p = d["printed"]["p_succ"].get<double>();
    const double printed_f = d["printed"]["fidelity"].get<double>();
    const double lit_p = d["literal_recursion"]["p_succ"].get<double>();
    const double lit_f = d["literal_recursion"]["fidelity"].get<double>();
    c.require(std::round(printed_p * 1000) == 692, "printed p_succ " + num(printed_p));
    c.require(std::round(printed_f * 1000) == 818, "printed fidelity " + num(printed_f));
    c.require(std::abs(lit_p - eta * eta / (2 - 4 * eta + 3 * eta * eta)) <= 1e-12,
              "literal p_succ " + num(lit_p));
    c.require(std::abs(lit_f - eta * eta / (2 - 2 * eta + eta * eta)) <= 1e-12,
              "literal fidelity " + num(lit_f));
    c.require(d["oracle"]["p_success"].is_number() && d["oracle"]["fidelity"].is_number(),
              "oracle values missing");
    if (c.ok)
        c.detail << "printed " << num(printed_p) << "/" << num(printed_f) << ", recursion "
                 << num(lit_p) << "/" << num(lit_f) << ", oracle "
                 << num(d["oracle"]["p_success"].get<double>()) << "/"
                 << num(d["oracle"]["fidelity"].get<double>());
    return c;
}

Check criterion10()
{
    Check c;
    double worst = 1.0;
    for (int k = 0; k <= 10; ++k)
    {
        const double eta = 0.5 + 0.05 * k;
        for (const auto& det : {DetectorModel::resolving(eta), DetectorModel::threshold(eta),
                                DetectorModel::tree(eta, BranchingDepth(2))})
        {
            const auto r = exact_markov_eval(ProtocolVariant::basic(), det);
            worst = std::min(worst, r.worst_fidelity);
        }
    }
    c.require(worst >= 1 - 1e-9, "worst success-branch fidelity " + num(worst));
    if (c.ok)
        c.detail << "worst success-branch fidelity " << num(worst);
    return c;
}

}  // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Check()>>> criteria{
        {"probability normalization", criterion1},
        {"exact basic oracle vs closed form", criterion2},
        {"ideal circuit ground truth", criterion3},
        {"point values", criterion4},
        {"efficiency thresholds", criterion5},
        {"branching equivalence", criterion6},
        {"chain rate optima", criterion7},
        {"Monte Carlo consistency", criterion8},
        {"modified-variant discrepancy report", criterion9},
        {"basic variant error-free", criterion10}};
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i)
    {
        const auto start = std::chrono::steady_clock::now();
        Check result;
        try
        {
            result = criteria[i].second();
        }
        catch (const std::exception& e)
        {
            result.ok = false;
            result.detail << "exception: " << e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failed += result.ok ? 0 : 1;
        std::printf("%s [%zu] %s: %s (%.1fs)\n", result.ok ? "PASS" : "FAIL", i + 1,
                    criteria[i].first.c_str(), result.detail.str().c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
                criteria.size());
    return failed;
}
