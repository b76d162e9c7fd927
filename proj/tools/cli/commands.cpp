#include "cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ranges>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "offswitch/error.hpp"
#include "offswitch/io.hpp"
#include "offswitch/voi.hpp"

namespace offswitch::cli {

namespace {

using io::json;

constexpr double kReportTolerance = 1e-9;
constexpr double kReplayTolerance = 1e-10;

// Tables show 7 significant digits; JSON and CSV carry full precision.
std::string short_number(double x) { return fmt::format("{:.7g}", x); }
std::string full_number(double x) { return fmt::format("{}", x); }

double parse_double(std::string_view text, std::string_view what) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || text.empty())
        throw InvalidArgument(fmt::format("{}: '{}' is not a number", what, text));
    return value;
}

std::size_t parse_size(std::string_view text, std::string_view what) {
    std::size_t value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || text.empty())
        throw InvalidArgument(fmt::format("{}: '{}' is not a non-negative integer", what, text));
    return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const auto pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot read '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string describe(const UtilityDistribution& d) {
    if (const auto* u = d.as_uniform()) return fmt::format("uniform({}, {})", short_number(u->lo), short_number(u->hi));
    std::string s = "discrete{";
    bool first = true;
    for (const auto& a : d.atoms()) {
        s += fmt::format("{}({}, {})", first ? "" : ", ", short_number(a.value), short_number(a.weight));
        first = false;
    }
    return s + "}";
}

std::string threshold_text(const std::optional<double>& t) { return t ? short_number(*t) : "none"; }

struct LoadedScenario {
    io::ScenarioFile file;
};

LoadedScenario load_scenario(const std::string& name_or_path, std::optional<double> epsilon) {
    auto file = [&]() -> io::ScenarioFile {
        if (auto builtin = builtin_scenario(name_or_path)) return {std::move(*builtin), std::nullopt, std::nullopt};
        if (std::filesystem::is_regular_file(name_or_path))
            return io::parse_scenario_file(io::parse_text(read_file(name_or_path)));
        throw InvalidArgument("unknown scenario '" + name_or_path +
                              "': not a built-in (alice-basic, alice-confident, alice-noisy) and no such file");
    }();
    if (epsilon) {
        file.scenario.epsilon = *epsilon;
        file.scenario.validate();
    }
    return {std::move(file)};
}

// Learning value on the two-state embedding under the file's rule or updater.
std::optional<VoiReport> scenario_voi(const io::ScenarioFile& f) {
    if (!f.rule && !f.updater) return std::nullopt;
    const auto game = reduce_to_two_state(f.scenario.prior, f.scenario.epsilon);
    const auto& belief = game.problem.prior();
    if (f.updater) return value_of_learning_faulty(game.problem, belief, game.channel, *f.updater);
    return value_of_learning_rule(game.problem, belief, game.channel, *f.rule);
}

// ---------------------------------------------------------------------------
// scenario

int cmd_scenario(const std::string& name, std::optional<double> epsilon, bool as_json, std::ostream& out) {
    const auto loaded = load_scenario(name, epsilon);
    const auto& s = loaded.file.scenario;
    const auto report = best_option(s);
    const auto voi = scenario_voi(loaded.file);

    if (as_json) {
        json j = {{"scenario", io::to_json(loaded.file)}, {"report", io::to_json(report)}};
        if (voi) j["voi"] = io::to_json(*voi);
        out << j.dump(2) << '\n';
        return kSuccess;
    }
    const auto row = [&](std::string_view key, const std::string& value) {
        fmt::print(out, "{:<12}{}\n", key, value);
    };
    row("scenario", s.label);
    row("prior", describe(s.prior));
    row("epsilon", short_number(s.epsilon));
    row("eu_act", short_number(report.eu_act));
    row("eu_nothing", short_number(report.eu_nothing));
    row("eu_defer", short_number(report.eu_defer));
    row("eu_learn", short_number(report.eu_learn));
    row("delta", short_number(report.delta));
    row("best", std::string(to_string(report.best)));
    row("threshold", threshold_text(report.threshold_epsilon));
    if (voi) {
        row("rule", voi->rule);
        row("value_now", short_number(voi->value_now));
        row("value_learn", short_number(voi->value_learning));
        row("voi", short_number(voi->voi));
    }
    return kSuccess;
}

// ---------------------------------------------------------------------------
// sweep

int cmd_sweep(const std::string& name, double lo, double hi, std::size_t steps, const std::string& out_path,
              std::ostream& out) {
    if (!(lo >= 0.0 && lo < hi && hi <= 1.0)) throw InvalidArgument("sweep grid needs 0 <= lo < hi <= 1");
    if (steps < 2) throw InvalidArgument("sweep grid needs at least 2 steps");
    const auto loaded = load_scenario(name, std::nullopt);
    const auto& prior = loaded.file.scenario.prior;

    std::ostringstream csv;
    csv << "epsilon,eu_act,eu_defer,eu_learn,best\n";
    for (std::size_t i = 0; i < steps; ++i) {
        const double eps =
            i + 1 == steps ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
        const auto r = best_option(prior, eps);
        csv << fmt::format("{},{},{},{},{}\n", full_number(eps), full_number(r.eu_act), full_number(r.eu_defer),
                           full_number(r.eu_learn), to_string(r.best));
    }
    if (out_path.empty()) {
        out << csv.str();
    } else {
        std::ofstream file(out_path, std::ios::binary);
        if (!file) throw InvalidArgument("cannot write '" + out_path + "'");
        file << csv.str();
    }
    return kSuccess;
}

// ---------------------------------------------------------------------------
// check

int cmd_check(const std::string& theorem, const SearchConfig& config, std::ostream& out) {
    VerificationReport report;
    if (theorem == "good")
        report = verify_good(config);
    else if (theorem == "theorem1")
        report = verify_theorem1(config);
    else
        throw InvalidArgument("unknown theorem '" + theorem + "' (expected good or theorem1)");

    fmt::print(out, "check {}: trials={} violations={} seed={}\n", theorem, report.trials, report.violations.size(),
               config.seed);
    for (const auto& v : report.violations | std::views::take(10))
        fmt::print(out, "  trial {}: {} ({})\n", v.trial_index, v.detail, full_number(v.value));
    return report.passed() ? kSuccess : kCheckFailed;
}

// ---------------------------------------------------------------------------
// search

int cmd_search(const std::string& rule_text, SearchConfig config, const std::string& out_path, std::ostream& out,
               std::ostream& err) {
    config.rule = parse_search_rule(rule_text);
    const auto witnesses = find_information_aversion(config);

    json list = json::array();
    for (const auto& w : witnesses) list.push_back(io::to_json(w));

    const double min_voi = witnesses.empty() ? 0.0 : witnesses.front().voi;
    const std::string summary =
        fmt::format("search {}: trials={} witnesses={} hit_rate={} min_voi={} seed={}\n", rule_text, config.trials,
                    witnesses.size(), short_number(static_cast<double>(witnesses.size()) / static_cast<double>(config.trials)),
                    witnesses.empty() ? std::string("none") : full_number(min_voi), config.seed);
    if (out_path.empty()) {
        out << list.dump(2) << '\n';
        err << summary;
    } else {
        std::ofstream file(out_path, std::ios::binary);
        if (!file) throw InvalidArgument("cannot write '" + out_path + "'");
        file << list.dump(2) << '\n';
        out << summary;
    }
    return witnesses.empty() ? kNoWitness : kSuccess;
}

// ---------------------------------------------------------------------------
// verify-witness

int cmd_verify_witness(const std::string& path, std::ostream& out) {
    const json doc = io::parse_text(read_file(path));
    std::vector<Witness> witnesses;
    if (doc.is_array()) {
        for (std::size_t i = 0; i < doc.size(); ++i)
            witnesses.push_back(io::parse_witness(doc[i], "witness[" + std::to_string(i) + "]"));
    } else {
        witnesses.push_back(io::parse_witness(doc));
    }
    if (witnesses.empty()) throw InvalidArgument(path + ": no witnesses");

    std::size_t failures = 0;
    for (const auto& w : witnesses) {
        const double reproduced = evaluate_witness(w).voi;
        const bool ok = std::abs(reproduced - w.voi) <= kReplayTolerance;
        failures += ok ? 0 : 1;
        fmt::print(out, "trial {}: recorded voi {} reproduced {} {}\n", w.trial_index, full_number(w.voi),
                   full_number(reproduced), ok ? "ok" : "MISMATCH");
    }
    fmt::print(out, "verified {} of {} witnesses\n", witnesses.size() - failures, witnesses.size());
    return failures == 0 ? kSuccess : kCheckFailed;
}

// ---------------------------------------------------------------------------
// report

struct ReportRow {
    std::string quantity;
    std::string expected;
    std::string computed;
    bool pass;
};

ReportRow numeric_row(std::string quantity, double expected, double computed) {
    return {std::move(quantity), short_number(expected), short_number(computed),
            std::abs(expected - computed) <= kReportTolerance};
}

ReportRow label_row(std::string quantity, Option expected, Option computed) {
    return {std::move(quantity), std::string(to_string(expected)), std::string(to_string(computed)),
            expected == computed};
}

int cmd_report(std::ostream& out) {
    const auto basic = UtilityDistribution::uniform(-40.0, 60.0);
    const auto confident = UtilityDistribution::uniform(-10.0, 90.0);
    const auto basic_report = best_option(basic, 0.0);
    const auto confident_report = best_option(confident, 0.0);
    const auto noisy_report = best_option(confident, 0.02);
    const auto closed = defer_threshold(confident);
    const auto bisected = defer_threshold_bisection(confident);

    std::vector<ReportRow> rows = {
        numeric_row("alice-basic: expected utility of booking", 10.0, basic_report.eu_act),
        numeric_row("alice-basic: probability Alice approves", 0.6, prob_ge(basic, 0.0)),
        numeric_row("alice-basic: utility of booking given approval", 30.0, cond_mean_ge(basic, 0.0)),
        numeric_row("alice-basic: expected utility of deferring", 18.0, basic_report.eu_defer),
        numeric_row("alice-basic: delta", 8.0, delta(basic)),
        label_row("alice-basic: best option", Option::Defer, basic_report.best),
        numeric_row("alice-confident: expected utility of booking", 40.0, confident_report.eu_act),
        numeric_row("alice-confident: probability Alice approves", 0.9, prob_ge(confident, 0.0)),
        numeric_row("alice-confident: utility of booking given approval", 45.0, cond_mean_ge(confident, 0.0)),
        numeric_row("alice-confident: expected utility of deferring", 40.5, confident_report.eu_defer),
        numeric_row("alice-confident: delta", 0.5, delta(confident)),
        numeric_row("alice-noisy (eps 0.02): expected utility of deferring", 39.68, noisy_report.eu_defer),
        numeric_row("alice-noisy (eps 0.02): expected value of learning", 40.0, noisy_report.eu_learn),
        label_row("alice-noisy (eps 0.02): best option", Option::Act, noisy_report.best),
        numeric_row("threshold epsilon (closed form)", 0.5 / 41.0, closed.value_or(NAN)),
        numeric_row("threshold epsilon (bisection)", 0.5 / 41.0, bisected.value_or(NAN)),
    };

    out << "# Off-switch game reproduction\n\n";
    out << "| quantity | expected | computed | status |\n";
    out << "|---|---|---|---|\n";
    bool all = true;
    for (const auto& r : rows) {
        all = all && r.pass;
        fmt::print(out, "| {} | {} | {} | {} |\n", r.quantity, r.expected, r.computed, r.pass ? "pass" : "FAIL");
    }
    fmt::print(out, "\n{} of {} rows pass (tolerance {}).\n",
               std::ranges::count_if(rows, &ReportRow::pass), rows.size(), kReportTolerance);
    return all ? kSuccess : kCheckFailed;
}

// Runs a command body, mapping library errors to exit codes.
int guarded(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const RuleCannotBeAverse& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kUsageError;
    } catch (const Error& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kUsageError;
    }
}

} // namespace

std::optional<OffSwitchScenario> builtin_scenario(std::string_view name) {
    if (name == "alice-basic") return OffSwitchScenario{"alice-basic", UtilityDistribution::uniform(-40.0, 60.0), 0.0};
    if (name == "alice-confident")
        return OffSwitchScenario{"alice-confident", UtilityDistribution::uniform(-10.0, 90.0), 0.0};
    if (name == "alice-noisy") return OffSwitchScenario{"alice-noisy", UtilityDistribution::uniform(-10.0, 90.0), 0.02};
    return std::nullopt;
}

SearchRule parse_search_rule(std::string_view text) {
    const auto parts = split(text, ':');
    const auto bad = [&]() -> InvalidArgument {
        return InvalidArgument(fmt::format(
            "malformed rule '{}' (expected eu, reu:identity, reu:power:K, reu:table:P=R,..., gamma-maximin[:M], "
            "faulty:stay:Q or faulty:complement:Q)",
            text));
    };
    const auto& head = parts.front();
    if (head == "eu" && parts.size() == 1) return SearchRule::expected_utility();
    if (head == "reu") {
        if (parts.size() == 2 && parts[1] == "identity") return SearchRule::risk_weighted(RiskFunction::identity());
        if (parts.size() == 3 && parts[1] == "power")
            return SearchRule::risk_weighted(RiskFunction::power(parse_double(parts[2], "risk exponent")));
        if (parts.size() == 3 && parts[1] == "table") {
            std::vector<Knot> knots;
            for (auto knot : split(parts[2], ',')) {
                const auto pr = split(knot, '=');
                if (pr.size() != 2) throw bad();
                knots.push_back({parse_double(pr[0], "knot p"), parse_double(pr[1], "knot r")});
            }
            return SearchRule::risk_weighted(RiskFunction::table(std::move(knots)));
        }
        throw bad();
    }
    if (head == "gamma-maximin") {
        if (parts.size() == 1) return SearchRule::gamma_maximin(2);
        if (parts.size() == 2) return SearchRule::gamma_maximin(parse_size(parts[1], "credal members"));
        throw bad();
    }
    if (head == "faulty" && parts.size() == 3) {
        const double q = parse_double(parts[2], "misupdate probability");
        if (parts[1] == "stay") return SearchRule::faulty(Updater::make_faulty(q, Misupdate::stay_at_prior()));
        if (parts[1] == "complement") return SearchRule::faulty(Updater::make_faulty(q, Misupdate::complement()));
    }
    throw bad();
}

CountRange parse_count_range(std::string_view text) {
    const auto parts = split(text, '-');
    if (parts.size() == 1) {
        const auto n = parse_size(parts[0], "count");
        return {n, n};
    }
    if (parts.size() == 2) {
        const CountRange range{parse_size(parts[0], "count"), parse_size(parts[1], "count")};
        if (range.min > range.max) throw InvalidArgument(fmt::format("count range '{}' is empty", text));
        return range;
    }
    throw InvalidArgument(fmt::format("malformed count range '{}' (expected N or MIN-MAX)", text));
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Off-switch game and value-of-information laboratory", "offswitch-lab"};
    app.require_subcommand(1);

    std::string scenario_name;
    std::optional<double> scenario_epsilon;
    bool scenario_json = false;
    auto* scenario = app.add_subcommand("scenario", "Evaluate a built-in scenario or a scenario file");
    scenario->add_option("scenario", scenario_name, "alice-basic, alice-confident, alice-noisy, or a JSON file")
        ->required();
    scenario->add_option("--epsilon", scenario_epsilon, "Override the misleading-signal probability");
    scenario->add_flag("--json", scenario_json, "Emit JSON instead of a table");

    std::string sweep_name;
    double sweep_lo = 0.0;
    double sweep_hi = 0.05;
    std::size_t sweep_steps = 51;
    std::string sweep_out;
    auto* sweep = app.add_subcommand("sweep", "Tabulate the game over an epsilon grid as CSV");
    sweep->add_option("scenario", sweep_name, "Scenario name or file")->required();
    sweep->add_option("--lo", sweep_lo, "Smallest epsilon")->capture_default_str();
    sweep->add_option("--hi", sweep_hi, "Largest epsilon")->capture_default_str();
    sweep->add_option("--steps", sweep_steps, "Grid points, including both ends")->capture_default_str();
    sweep->add_option("--out", sweep_out, "Write CSV here instead of standard output");

    SearchConfig config;
    std::string states_range = "2-4", acts_range = "2-4", signals_range = "2-4";
    std::size_t check_trials = 10000;
    std::size_t search_trials = 100000;
    const auto add_search_options = [&](CLI::App* cmd, std::size_t& trials) {
        cmd->add_option("--trials", trials, "Number of random trials")->capture_default_str();
        cmd->add_option("--seed", config.seed, "Master seed")->capture_default_str();
        cmd->add_option("--threads", config.threads, "Worker threads (results do not depend on this)")
            ->capture_default_str();
        cmd->add_option("--states", states_range, "State count N or MIN-MAX")->capture_default_str();
        cmd->add_option("--acts", acts_range, "Act count N or MIN-MAX")->capture_default_str();
        cmd->add_option("--signals", signals_range, "Signal count N or MIN-MAX")->capture_default_str();
        cmd->add_option("--utility-lo", config.utility_lo, "Lower end of sampled utilities")->capture_default_str();
        cmd->add_option("--utility-hi", config.utility_hi, "Upper end of sampled utilities")->capture_default_str();
    };

    std::string theorem;
    auto* check = app.add_subcommand("check", "Property-run a theorem on random instances");
    check->add_option("theorem", theorem, "good or theorem1")->required();
    add_search_options(check, check_trials);

    std::string rule_text;
    std::string search_out;
    auto* search = app.add_subcommand("search", "Search for instances where free information has negative value");
    search->add_option("--rule", rule_text, "Rule under test, e.g. reu:power:2")->required();
    search->add_option("--out", search_out, "Write the witness list here instead of standard output");
    search->add_option("--tolerance", config.aversion_tolerance, "Minimum aversion in utility units")
        ->capture_default_str();
    add_search_options(search, search_trials);

    std::string witness_path;
    auto* verify = app.add_subcommand("verify-witness", "Re-evaluate a witness file produced by search");
    verify->add_option("file", witness_path, "Witness JSON")->required();

    app.add_subcommand("report", "Reproduce the worked examples as a markdown table");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kUsageError;
    }

    return guarded(err, [&]() -> int {
        if (scenario->parsed()) return cmd_scenario(scenario_name, scenario_epsilon, scenario_json, out);
        if (sweep->parsed()) return cmd_sweep(sweep_name, sweep_lo, sweep_hi, sweep_steps, sweep_out, out);
        if (verify->parsed()) return cmd_verify_witness(witness_path, out);
        if (app.got_subcommand("report")) return cmd_report(out);

        config.trials = check->parsed() ? check_trials : search_trials;
        config.states = parse_count_range(states_range);
        config.acts = parse_count_range(acts_range);
        config.signals = parse_count_range(signals_range);
        config.validate();
        if (check->parsed()) return cmd_check(theorem, config, out);
        return cmd_search(rule_text, config, search_out, out, err);
    });
}

} // namespace offswitch::cli
