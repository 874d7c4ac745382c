// SPDX-License-Identifier: Apache-2.0
//
// gdof-lab: GDoF laboratory for the MISO broadcast channel with partial CSIT
// Copyright (C) 2026 The gdof-lab Authors
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

#include "gdof/cli/run.hpp"

#include <charconv>
#include <cmath>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gdof/ais.hpp"
#include "gdof/budget.hpp"
#include "gdof/cli/instance_io.hpp"
#include "gdof/cli/output.hpp"
#include "gdof/core.hpp"
#include "gdof/parallel.hpp"
#include "gdof/random.hpp"
#include "gdof/scheme.hpp"

namespace gdof::cli {

namespace {

using nlohmann::json;

// A computed result violated a checked property (exit 3).
class AssertionFailure : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct Common {
    std::string instance;
    std::optional<std::uint64_t> seed;
    int trials = 0;
    std::string p_grid;
    std::string out;
    std::string format;
    unsigned threads = 0;
};

std::vector<double> parse_list(const std::string& text, const std::string& field)
{
    std::vector<double> values;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        const auto first = item.find_first_not_of(" \t");
        const auto last = item.find_last_not_of(" \t");
        if (first == std::string::npos)
            throw ValidationError(field, "empty entry in list '" + text + "'");
        const std::string trimmed = item.substr(first, last - first + 1);
        double v = 0;
        const auto res = std::from_chars(trimmed.data(), trimmed.data() + trimmed.size(), v);
        if (res.ec != std::errc() || res.ptr != trimmed.data() + trimmed.size() || !std::isfinite(v))
            throw ValidationError(field, "'" + trimmed + "' is not a finite number");
        values.push_back(v);
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    return values;
}

std::vector<double> parse_grid(const std::string& text, const std::string& field, const std::string& fallback)
{
    const std::string& src = text.empty() ? fallback : text;
    if (src.empty())
        throw ValidationError(field, "grid is empty");
    auto values = parse_list(src, field);
    for (std::size_t i = 1; i < values.size(); ++i)
        if (!(values[i] > values[i - 1]))
            throw ValidationError(field, "grid must be strictly ascending");
    return values;
}

std::uint64_t require_seed(const Common& c)
{
    if (!c.seed)
        throw ValidationError("--seed", "required for stochastic commands");
    return *c.seed;
}

Instance require_instance(const Common& c, bool allow_alpha_only = false)
{
    if (c.instance.empty())
        throw ValidationError("--instance", "required");
    return load_instance(c.instance, allow_alpha_only);
}

ChannelSpec2 require_two_user(const Instance& inst)
{
    if (const auto* s = std::get_if<ChannelSpec2>(&inst.spec))
        return *s;
    throw ValidationError("--instance", "this command needs a two-user instance with alpha and beta matrices");
}

void emit(const Common& c, const std::string& content, std::ostream& out)
{
    if (c.out.empty())
        out << content;
    else
        write_atomic(c.out, content);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json mat_json(const Mat2& m)
{
    return json::array({json::array({json_number(m[0][0]), json_number(m[0][1])}),
                        json::array({json_number(m[1][0]), json_number(m[1][1])})});
}

json num_array(const std::vector<double>& v)
{
    json a = json::array();
    for (double x : v)
        a.push_back(json_number(x));
    return a;
}

// gdof2 ----------------------------------------------------------------------

int cmd_gdof2(const Common& c, std::ostream& out)
{
    const ChannelSpec2 spec = require_two_user(require_instance(c));
    const GdofBreakdown b = sum_gdof_two_user(spec);
    if (c.format == "json") {
        json j{{"D1", json_number(b.d1)},
               {"D2", json_number(b.d2)},
               {"d_sum", json_number(b.d_sum)},
               {"beta1", json_number(b.beta1)},
               {"beta2", json_number(b.beta2)},
               {"binding", std::string(to_string(b.binding))},
               {"regime", std::string(to_string(b.regime))}};
        emit(c, dump(j), out);
    } else if (c.format == "csv") {
        CsvTable t({"D1", "D2", "d_sum", "beta1", "beta2"});
        t.add_row(std::vector<double>{b.d1, b.d2, b.d_sum, b.beta1, b.beta2});
        emit(c, t.str(), out);
    } else {
        emit(c, "D1=" + format_fixed2(b.d1) + " D2=" + format_fixed2(b.d2) + " d_sum=" + format_fixed2(b.d_sum) + "\n",
             out);
    }
    return kExitOk;
}

// gdofk ----------------------------------------------------------------------

int cmd_gdofk(const Common& c, std::optional<int> users, std::optional<double> alpha, std::optional<double> beta,
              std::ostream& out)
{
    std::optional<SymmetricSpecK> spec;
    if (!c.instance.empty()) {
        const Instance inst = load_instance(c.instance);
        if (!inst.is_k_user())
            throw ValidationError("--instance", "gdofk needs an instance with K, alpha and beta");
        spec = std::get<SymmetricSpecK>(inst.spec);
    } else {
        if (!users)
            throw ValidationError("--K", "required without --instance");
        if (!alpha)
            throw ValidationError("--alpha", "required without --instance");
        if (!beta)
            throw ValidationError("--beta", "required without --instance");
        try {
            spec = SymmetricSpecK(*users, *alpha, *beta);
        } catch (const SpecError& e) {
            throw ValidationError("--" + e.field(), e.what());
        }
    }
    const double d = sum_gdof_k_symmetric(*spec);
    if (c.format == "json") {
        emit(c,
             dump(json{{"K", spec->users()},
                       {"alpha", json_number(spec->alpha())},
                       {"beta", json_number(spec->beta())},
                       {"d_sum", json_number(d)}}),
             out);
    } else if (c.format == "csv") {
        CsvTable t({"K", "alpha", "beta", "d_sum"});
        t.add_row(std::vector<double>{static_cast<double>(spec->users()), spec->alpha(), spec->beta(), d});
        emit(c, t.str(), out);
    } else {
        emit(c, "d_sum=" + format_number(d) + "\n", out);
    }
    return kExitOk;
}

// budget ---------------------------------------------------------------------

std::vector<double> default_budgets(const Mat2& alpha)
{
    const double total = alpha[0][0] + alpha[0][1] + alpha[1][0] + alpha[1][1];
    const auto n = static_cast<int>(std::ceil(total * 10.0 - 1e-9));
    std::vector<double> b;
    for (int i = 0; i <= n; ++i)
        b.push_back(i / 10.0);
    return b;
}

BudgetCurve run_budget_curve(const Common& c, const std::string& grid, double step, Instance& inst,
                             std::vector<double>& budgets)
{
    inst = require_instance(c, true);
    const Mat2 alpha = inst.alpha2();
    budgets = grid.empty() ? default_budgets(alpha) : parse_grid(grid, "--budgets", "");
    for (double b : budgets)
        if (b < 0)
            throw ValidationError("--budgets", "budgets must be >= 0");
    if (!(step > 0))
        throw ValidationError("--step", "must be positive");
    return budget_curve(alpha, budgets, step);
}

CsvTable budget_table(const BudgetCurve& curve)
{
    CsvTable t({"budget", "d_sum", "b11", "b12", "b21", "b22"});
    for (const auto& p : curve.points)
        t.add_row(std::vector<double>{p.budget, p.d_sum, p.beta[0][0], p.beta[0][1], p.beta[1][0], p.beta[1][1]});
    return t;
}

int cmd_budget(const Common& c, const std::string& grid, double step, std::ostream& out)
{
    Instance inst;
    std::vector<double> budgets;
    const BudgetCurve curve = run_budget_curve(c, grid, step, inst, budgets);
    if (c.format == "json") {
        json points = json::array();
        for (const auto& p : curve.points)
            points.push_back({{"budget", json_number(p.budget)}, {"d_sum", json_number(p.d_sum)}, {"beta", mat_json(p.beta)}});
        emit(c,
             dump(json{{"instance", to_json(inst)},
                       {"step", json_number(step)},
                       {"points", points},
                       {"breakpoints", num_array(curve.breakpoints)}}),
             out);
    } else {
        emit(c, budget_table(curve).str(), out);
    }
    return kExitOk;
}

// achieve --------------------------------------------------------------------

struct AchieveRun {
    SchemeLayout layout;
    SimResult result;
};

AchieveRun run_achieve(const Instance& inst, const std::vector<double>& grid, int trials, std::uint64_t seed,
                       unsigned threads)
{
    SimOptions opts;
    opts.workers = threads;
    const auto density = BoundedDensitySpec::uniform();
    AchieveRun r;
    if (const auto* s = std::get_if<ChannelSpec2>(&inst.spec)) {
        r.layout = build_layout(*s);
        r.result = estimate_gdof_slope(r.layout, SimInstance::from(*s), density, grid, trials, seed, opts);
    } else if (const auto* k = std::get_if<SymmetricSpecK>(&inst.spec)) {
        r.layout = build_layout_k(*k);
        r.result = estimate_gdof_slope(r.layout, SimInstance::from(*k), density, grid, trials, seed, opts);
    } else {
        throw ValidationError("beta", "achieve needs CSIT exponents");
    }
    return r;
}

CsvTable rate_table(const AchieveRun& r)
{
    std::vector<std::string> header{"P"};
    for (int k = 0; k < r.layout.users; ++k)
        header.push_back("rate_user" + std::to_string(k + 1));
    CsvTable t(header);
    for (std::size_t i = 0; i < r.result.p_grid.size(); ++i) {
        std::vector<double> row{r.result.p_grid[i]};
        for (double v : r.result.user_rates[i])
            row.push_back(v);
        t.add_row(row);
    }
    return t;
}

json layout_json(const SchemeLayout& L)
{
    json layers = json::array();
    for (const auto& l : L.layers) {
        json dec = json::array();
        for (const auto& d : l.decoded_by)
            dec.push_back({{"receiver", L.transform.user(d.receiver) + 1}, {"rank", d.rank}});
        json leak = json::array();
        for (const auto& d : l.leakage)
            leak.push_back({{"receiver", L.transform.user(d.receiver) + 1}, {"exponent", json_number(d.exponent)}});
        json lj{{"message", l.message.name()},
                {"owner", L.transform.user(l.owner) + 1},
                {"load", json_number(l.gdof_load)},
                {"power_exponent", json_number(l.power_exponent)},
                {"precoder", l.precoder.name()},
                {"reduced", l.reduced},
                {"decoded_by", dec},
                {"leakage", leak}};
        if (l.complement_exponent)
            lj["complement_exponent"] = json_number(*l.complement_exponent);
        layers.push_back(lj);
    }
    return json{{"case", std::string(to_string(L.case_id))},
                {"users", L.users},
                {"swap_users", L.transform.swap_users},
                {"swap_antennas", L.transform.swap_antennas},
                {"reduction", json_number(L.reduction)},
                {"m", json_number(L.m)},
                {"layers", layers},
                {"target", num_array(L.original_target())}};
}

json achieve_json(const Instance& inst, const AchieveRun& r, int trials, std::uint64_t seed)
{
    const auto& L = r.layout;
    const auto& res = r.result;
    json exps = json::array();
    for (std::size_t j = 0; j < L.layers.size(); ++j)
        for (int k = 0; k < L.users; ++k) {
            const auto rk = static_cast<std::size_t>(L.transform.user(k));
            exps.push_back({{"message", L.layers[j].message.name()},
                            {"receiver", rk + 1},
                            {"load", json_number(L.layers[j].gdof_load)},
                            {"sinr_exponent", json_number(res.sinr_exponent[j][rk])},
                            {"power_exponent", json_number(res.power_exponent[j][rk])},
                            {"decode_success", res.decode_success[j][rk]}});
        }
    json slopes = json::array();
    const auto target = L.original_target();
    for (std::size_t u = 0; u < res.slope_estimates.size(); ++u)
        slopes.push_back({{"user", u + 1}, {"slope", json_number(res.slope_estimates[u])}, {"target", json_number(target[u])}});
    return json{{"instance", to_json(inst)},
                {"seed", seed},
                {"trials", trials},
                {"redraws", res.redraws},
                {"layout", layout_json(L)},
                {"p_grid", num_array(res.p_grid)},
                {"per_layer_exponents", exps},
                {"per_user_slopes", slopes}};
}

constexpr const char* kDefaultPGrid = "1e6,1e8,1e10,1e12";

int cmd_achieve(const Common& c, bool check, double tolerance, std::ostream& out)
{
    const Instance inst = require_instance(c);
    const std::uint64_t seed = require_seed(c);
    const auto grid = parse_grid(c.p_grid, "--p-grid", kDefaultPGrid);
    if (grid.size() < 2 || std::log10(grid.back() / grid.front()) < 3.0 - 1e-9)
        throw ValidationError("--p-grid", "grid must span at least three decades");
    if (grid.front() <= 1.0)
        throw ValidationError("--p-grid", "P values must exceed 1");
    const AchieveRun r = run_achieve(inst, grid, c.trials, seed, c.threads);
    if (c.format == "json")
        emit(c, dump(achieve_json(inst, r, c.trials, seed)), out);
    else
        emit(c, rate_table(r).str(), out);

    if (check) {
        const auto target = r.layout.original_target();
        for (std::size_t u = 0; u < target.size(); ++u)
            if (std::abs(r.result.slope_estimates[u] - target[u]) > tolerance)
                throw AssertionFailure("user " + std::to_string(u + 1) + " slope " +
                                       format_number(r.result.slope_estimates[u]) + " misses target " +
                                       format_number(target[u]) + " by more than " + format_number(tolerance));
    }
    return kExitOk;
}

// ais-prob -------------------------------------------------------------------

int cmd_ais_prob(const Common& c, double p_bar, int pairs, std::ostream& out, std::ostream& err)
{
    const ChannelSpec2 spec = require_two_user(require_instance(c));
    const std::uint64_t seed = require_seed(c);
    if (!(p_bar > 1.0))
        throw ValidationError("--p-bar", "must exceed 1");
    if (pairs < 1)
        throw ValidationError("--pairs", "must be >= 1");
    const auto inst = DeterministicInstance::make(spec, p_bar);
    if (inst.x1_max == 0 && inst.x2_max == 0)
        throw ValidationError("--p-bar", "input alphabet has a single codeword");
    const auto density = BoundedDensitySpec::uniform();

    std::vector<CodewordPair> sampled;
    Rng rng = Rng::stream(seed, {2});
    const auto n1 = static_cast<std::uint64_t>(inst.x1_max + 1);
    const auto n2 = static_cast<std::uint64_t>(inst.x2_max + 1);
    while (sampled.size() < static_cast<std::size_t>(pairs)) {
        CodewordPair p;
        p.lambda1 = static_cast<std::int64_t>(rng.below(n1));
        p.lambda2 = static_cast<std::int64_t>(rng.below(n2));
        p.nu1 = static_cast<std::int64_t>(rng.below(n1));
        p.nu2 = static_cast<std::int64_t>(rng.below(n2));
        if (p.lambda1 != p.nu1 || p.lambda2 != p.nu2)
            sampled.push_back(p);
    }

    std::vector<AlignmentEstimate> est(sampled.size());
    parallel_for(
        sampled.size(),
        [&](std::size_t i) {
            est[i] = alignment_probability_mc(sampled[i], inst, density, c.trials,
                                              derive_seed(seed, {3, static_cast<std::uint64_t>(i)}), 1);
        },
        c.threads);

    bool all_pass = true;
    for (const auto& e : est)
        all_pass = all_pass && e.pass;

    if (c.format == "json") {
        json arr = json::array();
        for (std::size_t i = 0; i < est.size(); ++i)
            arr.push_back({{"lambda", {sampled[i].lambda1, sampled[i].lambda2}},
                           {"nu", {sampled[i].nu1, sampled[i].nu2}},
                           {"estimate", json_number(est[i].estimate)},
                           {"bound", json_number(est[i].bound)},
                           {"other_bound", json_number(est[i].other_bound)},
                           {"sigma", json_number(est[i].sigma)},
                           {"pass", est[i].pass}});
        emit(c,
             dump(json{{"instance", to_json(Instance{"", spec})},
                       {"p_bar", json_number(p_bar)},
                       {"seed", seed},
                       {"trials", c.trials},
                       {"pairs", arr},
                       {"all_pass", all_pass}}),
             out);
    } else {
        CsvTable t({"lambda1", "lambda2", "nu1", "nu2", "estimate", "bound", "sigma", "pass"});
        for (std::size_t i = 0; i < est.size(); ++i)
            t.add_row(std::vector<double>{static_cast<double>(sampled[i].lambda1), static_cast<double>(sampled[i].lambda2),
                                          static_cast<double>(sampled[i].nu1), static_cast<double>(sampled[i].nu2),
                                          est[i].estimate, est[i].bound, est[i].sigma, est[i].pass ? 1.0 : 0.0});
        emit(c, t.str(), out);
    }
    if (!all_pass) {
        err << "ais-prob: an alignment estimate exceeded its bound by more than 3 sigma\n";
        throw AssertionFailure("alignment probability bound violated");
    }
    return kExitOk;
}

// ais-size -------------------------------------------------------------------

int cmd_ais_size(const Common& c, int draws, double cap, double slack, const std::string& summary,
                 std::ostream& out, std::ostream& err)
{
    const ChannelSpec2 spec = require_two_user(require_instance(c));
    const std::uint64_t seed = require_seed(c);
    const auto grid = parse_grid(c.p_grid, "--p-grid", "8,16,32,64");
    if (grid.front() <= 1.0)
        throw ValidationError("--p-grid", "p_bar values must exceed 1");
    if (grid.size() < 2 || std::log2(grid.back() / grid.front()) < 3.0 - 1e-9)
        throw ValidationError("--p-grid", "grid must span at least three octaves");
    if (draws < 1)
        throw ValidationError("--draws", "must be >= 1");
    if (!(cap >= 1))
        throw ValidationError("--cap", "must be >= 1");

    ImageSetStats stats;
    try {
        stats = expected_size_curve(spec, grid, draws, seed, BoundedDensitySpec::uniform(),
                                    static_cast<std::uint64_t>(cap), slack, c.threads);
    } catch (const EnumerationCapExceeded& e) {
        throw ValidationError("--cap", e.what());
    }

    json sj{{"instance", to_json(Instance{"", spec})},
            {"seed", seed},
            {"draws", draws},
            {"p_bar_grid", num_array(stats.p_bar_grid)},
            {"mean_size", num_array(stats.mean_size)},
            {"fitted_exponent", json_number(stats.fitted_exponent)},
            {"bound_exponent", json_number(stats.bound_exponent)},
            {"slack", json_number(stats.slack)},
            {"pass", stats.pass}};

    if (c.format == "json") {
        emit(c, dump(sj), out);
    } else {
        CsvTable t({"p_bar", "mean_size", "draws"});
        for (std::size_t i = 0; i < grid.size(); ++i)
            t.add_row(std::vector<double>{grid[i], stats.mean_size[i], static_cast<double>(draws)});
        emit(c, t.str(), out);
        if (!summary.empty())
            write_atomic(summary, dump(sj));
        else
            err << sj.dump() << "\n";
    }
    if (!stats.pass)
        throw AssertionFailure("fitted exponent " + format_number(stats.fitted_exponent) + " exceeds bound " +
                               format_number(stats.bound_exponent) + " + " + format_number(slack));
    return kExitOk;
}

// sweep ----------------------------------------------------------------------

int cmd_sweep(const Common& c, const std::string& axis, const std::string& grid_text, double step, std::ostream& out)
{
    if (c.format == "json")
        throw ValidationError("--format", "sweep emits long-form CSV only");
    if (axis == "budget") {
        if (grid_text.empty())
            throw ValidationError("--grid", "grid is empty");
        Instance inst;
        std::vector<double> budgets;
        emit(c, budget_table(run_budget_curve(c, grid_text, step, inst, budgets)).str(), out);
        return kExitOk;
    }
    if (axis == "P") {
        const Instance inst = require_instance(c);
        const std::uint64_t seed = require_seed(c);
        const auto grid = parse_grid(grid_text.empty() ? c.p_grid : grid_text, "--grid", "");
        if (grid.front() <= 1.0)
            throw ValidationError("--grid", "P values must exceed 1");
        if (grid.size() < 2 || std::log10(grid.back() / grid.front()) < 3.0 - 1e-9)
            throw ValidationError("--grid", "P grid must span at least three decades");
        emit(c, rate_table(run_achieve(inst, grid, c.trials, seed, c.threads)).str(), out);
        return kExitOk;
    }
    if (axis != "beta" && axis != "alpha")
        throw ValidationError("--axis", "must be one of budget, beta, alpha, P");

    const Instance inst = require_instance(c);
    const auto grid = parse_grid(grid_text, "--grid", "");
    const bool two = inst.is_two_user();
    CsvTable t = two ? CsvTable({axis, "D1", "D2", "d_sum"}) : CsvTable({axis, "d_sum"});
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double v = grid[i];
        const std::string field = "--grid[" + std::to_string(i) + "]";
        try {
            if (two) {
                const auto& base = std::get<ChannelSpec2>(inst.spec);
                Mat2 a = base.alpha(), b = base.beta();
                if (axis == "beta")
                    b = Mat2{{{v, v}, {v, v}}};
                else
                    a[0][1] = a[1][0] = v;
                const GdofBreakdown g = sum_gdof_two_user(ChannelSpec2(a, b));
                t.add_row(std::vector<double>{v, g.d1, g.d2, g.d_sum});
            } else {
                const auto& base = std::get<SymmetricSpecK>(inst.spec);
                const SymmetricSpecK s(base.users(), axis == "alpha" ? v : base.alpha(), axis == "beta" ? v : base.beta());
                t.add_row(std::vector<double>{v, sum_gdof_k_symmetric(s)});
            }
        } catch (const SpecError& e) {
            throw ValidationError(field, std::string(e.what()) + " (" + e.field() + ")");
        }
    }
    emit(c, t.str(), out);
    return kExitOk;
}

void add_common(CLI::App* app, Common& c, bool stochastic, const std::string& default_format, int default_trials)
{
    c.format = default_format;
    c.trials = default_trials;
    app->add_option("--instance", c.instance, "Instance JSON file");
    app->add_option("--out", c.out, "Output path (default: stdout)");
    app->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"text", "csv", "json"}));
    app->add_option("--threads", c.threads, "Worker threads (default: GDOF_LAB_THREADS or all cores)");
    if (stochastic) {
        app->add_option("--seed", c.seed, "Root seed (u64)");
        app->add_option("--trials", c.trials, "Monte Carlo trials per point")->check(CLI::PositiveNumber);
        app->add_option("--p-grid", c.p_grid, "Comma-separated SNR grid");
    }
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"gdof_lab: GDoF laboratory for the two-user and symmetric K-user MISO broadcast channel"};
    app.require_subcommand(1);

    Common c_gdof2, c_gdofk, c_budget, c_achieve, c_prob, c_size, c_sweep;

    auto* gdof2 = app.add_subcommand("gdof2", "Sum GDoF of a two-user instance");
    add_common(gdof2, c_gdof2, false, "text", 0);

    auto* gdofk = app.add_subcommand("gdofk", "Sum GDoF of a symmetric K-user instance");
    add_common(gdofk, c_gdofk, false, "text", 0);
    std::optional<int> k_users;
    std::optional<double> k_alpha, k_beta;
    gdofk->add_option("--K", k_users, "User count");
    gdofk->add_option("--alpha", k_alpha, "Cross-link strength exponent");
    gdofk->add_option("--beta", k_beta, "CSIT exponent");

    auto* budget = app.add_subcommand("budget", "Optimal CSIT allocation over a budget grid");
    add_common(budget, c_budget, false, "csv", 0);
    std::string budgets;
    double step = kDefaultBudgetStep;
    budget->add_option("--budgets", budgets, "Comma-separated budgets (default 0, 0.1, ..., sum of alpha)");
    budget->add_option("--step", step, "Allocation grid step");

    auto* achieve = app.add_subcommand("achieve", "Simulate the layered scheme and fit rate slopes");
    add_common(achieve, c_achieve, true, "json", 200);
    bool check = false;
    double tolerance = 0.1;
    achieve->add_flag("--check", check, "Fail with exit 3 if a slope misses its target");
    achieve->add_option("--tolerance", tolerance, "Slope tolerance for --check");

    auto* prob = app.add_subcommand("ais-prob", "Alignment probabilities of sampled codeword pairs");
    add_common(prob, c_prob, true, "csv", 1000);
    double p_bar = 32;
    int pairs = 1000;
    prob->add_option("--p-bar", p_bar, "Quantization scale sqrt(P)");
    prob->add_option("--pairs", pairs, "Number of sampled codeword pairs");

    auto* size = app.add_subcommand("ais-size", "Aligned image set sizes and growth exponent");
    add_common(size, c_size, true, "csv", 0);
    int draws = 20;
    double cap = static_cast<double>(kDefaultEnumerationCap);
    double slack = kExponentSlack;
    std::string summary;
    size->add_option("--draws", draws, "Channel draws per p_bar");
    size->add_option("--cap", cap, "Enumeration cap on codeword pairs");
    size->add_option("--slack", slack, "Allowed excess of the fitted exponent");
    size->add_option("--summary", summary, "Path for the JSON summary (default: stderr)");

    auto* sweep = app.add_subcommand("sweep", "Long-form CSV along one parameter axis");
    add_common(sweep, c_sweep, true, "csv", 200);
    std::string axis, grid;
    double sweep_step = kDefaultBudgetStep;
    sweep->add_option("--axis", axis, "budget, beta, alpha or P")->required();
    sweep->add_option("--grid", grid, "Comma-separated axis values");
    sweep->add_option("--step", sweep_step, "Allocation grid step for the budget axis");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (gdof2->parsed())
            return cmd_gdof2(c_gdof2, out);
        if (gdofk->parsed())
            return cmd_gdofk(c_gdofk, k_users, k_alpha, k_beta, out);
        if (budget->parsed())
            return cmd_budget(c_budget, budgets, step, out);
        if (achieve->parsed())
            return cmd_achieve(c_achieve, check, tolerance, out);
        if (prob->parsed())
            return cmd_ais_prob(c_prob, p_bar, pairs, out, err);
        if (size->parsed())
            return cmd_ais_size(c_size, draws, cap, slack, summary, out, err);
        if (sweep->parsed())
            return cmd_sweep(c_sweep, axis, grid, sweep_step, out);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const SpecError& e) {
        err << "error: " << e.field() << ": " << e.what() << "\n";
        return kExitValidation;
    } catch (const EnumerationCapExceeded& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const AssertionFailure& e) {
        err << "assertion failed: " << e.what() << "\n";
        return kExitAssertion;
    } catch (const PowerConstraintViolation& e) {
        err << "assertion failed: " << e.what() << "\n";
        return kExitAssertion;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitValidation;
}

} // namespace gdof::cli
