#include "offswitch/io.hpp"

#include <algorithm>
#include <initializer_list>
#include <string>

#include "offswitch/error.hpp"

namespace offswitch::io {

namespace {

using namespace std::string_literals;

std::string join(std::string_view path, std::string_view key) { return std::string(path) + "." + std::string(key); }
std::string index(std::string_view path, std::size_t i) { return std::string(path) + "[" + std::to_string(i) + "]"; }

[[noreturn]] void fail(std::string_view path, std::string_view message) {
    throw InvalidArgument(std::string(path) + ": " + std::string(message));
}

const json& require_object(const json& j, std::string_view path, std::initializer_list<std::string_view> allowed) {
    if (!j.is_object()) fail(path, "expected an object");
    for (const auto& [key, _] : j.items())
        if (std::ranges::find(allowed, key) == allowed.end()) fail(join(path, key), "unknown field");
    return j;
}

const json& field(const json& j, std::string_view path, std::string_view key) {
    const auto it = j.find(key);
    if (it == j.end()) fail(join(path, key), "missing field");
    return *it;
}

double number(const json& j, std::string_view path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

std::string string(const json& j, std::string_view path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

std::size_t count(const json& j, std::string_view path) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
        fail(path, "expected a non-negative integer");
    return j.get<std::size_t>();
}

const json& array(const json& j, std::string_view path) {
    if (!j.is_array()) fail(path, "expected an array");
    return j;
}

std::vector<double> numbers(const json& j, std::string_view path) {
    std::vector<double> out;
    for (std::size_t i = 0; i < array(j, path).size(); ++i) out.push_back(number(j[i], index(path, i)));
    return out;
}

std::vector<std::vector<double>> matrix(const json& j, std::string_view path) {
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; i < array(j, path).size(); ++i) out.push_back(numbers(j[i], index(path, i)));
    return out;
}

std::vector<std::string> strings(const json& j, std::string_view path) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < array(j, path).size(); ++i) out.push_back(string(j[i], index(path, i)));
    return out;
}

// Type constructors throw InvalidArgument without a path; prefix it.
template <class F>
auto with_path(std::string_view path, F&& make) {
    try {
        return make();
    } catch (const InvalidArgument& e) {
        fail(path, e.what());
    } catch (const DimensionMismatch& e) {
        fail(path, e.what());
    }
}

json optional_number(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

} // namespace

// ---------------------------------------------------------------------------
// Encoders

json to_json(const UtilityDistribution& d) {
    if (const auto* u = d.as_uniform()) return {{"kind", "uniform"}, {"lo", u->lo}, {"hi", u->hi}};
    json atoms = json::array();
    for (const auto& a : d.atoms()) atoms.push_back({a.value, a.weight});
    return {{"kind", "discrete"}, {"atoms", atoms}};
}

json to_json(const DecisionProblem& p) {
    json acts = json::array();
    for (const auto& a : p.acts()) acts.push_back({{"name", a.name}, {"utilities", a.utilities}});
    return {{"states", p.states()}, {"prior", p.prior()}, {"acts", acts}};
}

json to_json(const SignalChannel& c) { return {{"signals", c.signals()}, {"likelihood", c.likelihood()}}; }

json to_json(const RiskFunction& r) {
    const auto& rep = r.representation();
    if (std::holds_alternative<RiskFunction::Identity>(rep)) return {{"kind", "identity"}};
    if (const auto* p = std::get_if<RiskFunction::Power>(&rep)) return {{"kind", "power"}, {"k", p->exponent}};
    json knots = json::array();
    for (const auto& k : std::get<RiskFunction::Table>(rep).knots) knots.push_back({k.p, k.r});
    return {{"kind", "table"}, {"knots", knots}};
}

json to_json(const CredalSet& c) { return {{"members", c.members()}}; }

json to_json(const Misupdate& m) {
    json j = {{"kind", to_string(m.kind)}};
    if (m.kind == MisupdateKind::CustomPosterior) j["posteriors"] = m.custom_posteriors;
    return j;
}

json to_json(const Updater& u) {
    if (!u.faulty) return {{"kind", "conditionalization"}};
    return {{"kind", "faulty"}, {"q", u.failure_probability}, {"misupdate", to_json(u.misupdate)}};
}

json to_json(const DecisionRule& r) {
    json j = {{"kind", to_string(r.kind)}};
    if (r.risk) j["risk"] = to_json(*r.risk);
    if (r.credal) j["credal"] = to_json(*r.credal);
    return j;
}

json to_json(const VoiReport& r) {
    json rows = json::array();
    for (const auto& s : r.per_signal) {
        json row = {{"signal", s.signal}, {"marginal", s.marginal}, {"act", s.act},
                    {"conditional_value", s.conditional_value}};
        if (s.misupdate_act) row["misupdate_act"] = *s.misupdate_act;
        rows.push_back(std::move(row));
    }
    return {{"value_now", r.value_now}, {"value_learning", r.value_learning}, {"voi", r.voi},
            {"rule", r.rule},           {"per_signal", rows}};
}

json to_json(const OffSwitchScenario& s) {
    return {{"label", s.label}, {"prior", to_json(s.prior)}, {"epsilon", s.epsilon}};
}

json to_json(const OffSwitchReport& r) {
    return {{"eu_act", r.eu_act},   {"eu_nothing", r.eu_nothing}, {"eu_defer", r.eu_defer},
            {"eu_learn", r.eu_learn}, {"delta", r.delta},         {"best", to_string(r.best)},
            {"threshold_epsilon", optional_number(r.threshold_epsilon)}};
}

json to_json(const Witness& w) {
    json rule = std::visit([](const auto& x) { return to_json(x); }, w.rule);
    return {{"trial_index", w.trial_index}, {"voi", w.voi},   {"problem", to_json(w.problem)},
            {"channel", to_json(w.channel)}, {"rule", rule}};
}

json to_json(const ScenarioFile& f) {
    json j = to_json(f.scenario);
    if (f.rule) j["rule"] = to_json(*f.rule);
    if (f.updater) j["updater"] = to_json(*f.updater);
    return j;
}

// ---------------------------------------------------------------------------
// Parsers

UtilityDistribution parse_distribution(const json& j, std::string_view path) {
    if (!j.is_object()) fail(path, "expected an object");
    const auto kind = string(field(j, path, "kind"), join(path, "kind"));
    if (kind == "uniform") {
        require_object(j, path, {"kind", "lo", "hi"});
        const double lo = number(field(j, path, "lo"), join(path, "lo"));
        const double hi = number(field(j, path, "hi"), join(path, "hi"));
        return with_path(path, [&] { return UtilityDistribution::uniform(lo, hi); });
    }
    if (kind == "discrete") {
        require_object(j, path, {"kind", "atoms"});
        const auto apath = join(path, "atoms");
        const auto& raw = array(field(j, path, "atoms"), apath);
        std::vector<Atom> atoms;
        for (std::size_t i = 0; i < raw.size(); ++i) {
            const auto pair = numbers(raw[i], index(apath, i));
            if (pair.size() != 2) fail(index(apath, i), "expected [value, weight]");
            atoms.push_back({pair[0], pair[1]});
        }
        return with_path(path, [&] { return UtilityDistribution::discrete(std::move(atoms)); });
    }
    fail(join(path, "kind"), "expected \"uniform\" or \"discrete\", got \"" + kind + "\"");
}

DecisionProblem parse_problem(const json& j, std::string_view path) {
    require_object(j, path, {"states", "prior", "acts"});
    auto states = strings(field(j, path, "states"), join(path, "states"));
    auto prior = numbers(field(j, path, "prior"), join(path, "prior"));
    const auto apath = join(path, "acts");
    const auto& raw = array(field(j, path, "acts"), apath);
    std::vector<Act> acts;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const auto p = index(apath, i);
        require_object(raw[i], p, {"name", "utilities"});
        acts.push_back({string(field(raw[i], p, "name"), join(p, "name")),
                        numbers(field(raw[i], p, "utilities"), join(p, "utilities"))});
    }
    return with_path(path, [&] { return DecisionProblem(std::move(states), std::move(prior), std::move(acts)); });
}

SignalChannel parse_channel(const json& j, std::string_view path) {
    require_object(j, path, {"signals", "likelihood"});
    auto signals = strings(field(j, path, "signals"), join(path, "signals"));
    auto rows = matrix(field(j, path, "likelihood"), join(path, "likelihood"));
    return with_path(path, [&] { return SignalChannel(std::move(signals), std::move(rows)); });
}

RiskFunction parse_risk(const json& j, std::string_view path) {
    if (!j.is_object()) fail(path, "expected an object");
    const auto kind = string(field(j, path, "kind"), join(path, "kind"));
    if (kind == "identity") {
        require_object(j, path, {"kind"});
        return RiskFunction::identity();
    }
    if (kind == "power") {
        require_object(j, path, {"kind", "k"});
        const double k = number(field(j, path, "k"), join(path, "k"));
        return with_path(path, [&] { return RiskFunction::power(k); });
    }
    if (kind == "table") {
        require_object(j, path, {"kind", "knots"});
        const auto kpath = join(path, "knots");
        std::vector<Knot> knots;
        for (const auto& row : matrix(field(j, path, "knots"), kpath)) {
            if (row.size() != 2) fail(kpath, "expected [p, r] pairs");
            knots.push_back({row[0], row[1]});
        }
        return with_path(path, [&] { return RiskFunction::table(std::move(knots)); });
    }
    fail(join(path, "kind"), "expected \"identity\", \"power\" or \"table\", got \"" + kind + "\"");
}

CredalSet parse_credal(const json& j, std::string_view path) {
    require_object(j, path, {"members"});
    auto members = matrix(field(j, path, "members"), join(path, "members"));
    return with_path(path, [&] { return CredalSet(std::move(members)); });
}

Misupdate parse_misupdate(const json& j, std::string_view path) {
    if (!j.is_object()) fail(path, "expected an object");
    const auto kind = string(field(j, path, "kind"), join(path, "kind"));
    if (kind == to_string(MisupdateKind::StayAtPrior)) {
        require_object(j, path, {"kind"});
        return Misupdate::stay_at_prior();
    }
    if (kind == to_string(MisupdateKind::ComplementConditionalization)) {
        require_object(j, path, {"kind"});
        return Misupdate::complement();
    }
    if (kind == to_string(MisupdateKind::CustomPosterior)) {
        require_object(j, path, {"kind", "posteriors"});
        auto table = matrix(field(j, path, "posteriors"), join(path, "posteriors"));
        return with_path(path, [&] { return Misupdate::custom(std::move(table)); });
    }
    fail(join(path, "kind"), "unknown misupdate kind \"" + kind + "\"");
}

Updater parse_updater(const json& j, std::string_view path) {
    if (!j.is_object()) fail(path, "expected an object");
    const auto kind = string(field(j, path, "kind"), join(path, "kind"));
    if (kind == "conditionalization") {
        require_object(j, path, {"kind"});
        return Updater::conditionalization();
    }
    if (kind == "faulty") {
        require_object(j, path, {"kind", "q", "misupdate"});
        const double q = number(field(j, path, "q"), join(path, "q"));
        auto m = parse_misupdate(field(j, path, "misupdate"), join(path, "misupdate"));
        return with_path(path, [&] { return Updater::make_faulty(q, std::move(m)); });
    }
    fail(join(path, "kind"), "expected \"conditionalization\" or \"faulty\", got \"" + kind + "\"");
}

DecisionRule parse_rule(const json& j, std::string_view path) {
    require_object(j, path, {"kind", "risk", "credal"});
    const auto kind = string(field(j, path, "kind"), join(path, "kind"));
    DecisionRule rule;
    if (kind == to_string(RuleKind::ExpectedUtility))
        rule.kind = RuleKind::ExpectedUtility;
    else if (kind == to_string(RuleKind::RiskWeighted))
        rule.kind = RuleKind::RiskWeighted;
    else if (kind == to_string(RuleKind::GammaMaximin))
        rule.kind = RuleKind::GammaMaximin;
    else
        fail(join(path, "kind"), "unknown decision rule \"" + kind + "\"");
    if (j.contains("risk")) rule.risk = parse_risk(j["risk"], join(path, "risk"));
    if (j.contains("credal")) rule.credal = parse_credal(j["credal"], join(path, "credal"));
    return rule;
}

VoiReport parse_voi_report(const json& j, std::string_view path) {
    require_object(j, path, {"value_now", "value_learning", "voi", "rule", "per_signal"});
    VoiReport r;
    r.value_now = number(field(j, path, "value_now"), join(path, "value_now"));
    r.value_learning = number(field(j, path, "value_learning"), join(path, "value_learning"));
    r.voi = number(field(j, path, "voi"), join(path, "voi"));
    r.rule = string(field(j, path, "rule"), join(path, "rule"));
    const auto spath = join(path, "per_signal");
    const auto& rows = array(field(j, path, "per_signal"), spath);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto p = index(spath, i);
        const auto& row = require_object(rows[i], p, {"signal", "marginal", "act", "conditional_value", "misupdate_act"});
        SignalOutcome s{count(field(row, p, "signal"), join(p, "signal")),
                        number(field(row, p, "marginal"), join(p, "marginal")),
                        count(field(row, p, "act"), join(p, "act")),
                        number(field(row, p, "conditional_value"), join(p, "conditional_value")), std::nullopt};
        if (row.contains("misupdate_act")) s.misupdate_act = count(row["misupdate_act"], join(p, "misupdate_act"));
        r.per_signal.push_back(s);
    }
    return r;
}

OffSwitchReport parse_offswitch_report(const json& j, std::string_view path) {
    require_object(j, path, {"eu_act", "eu_nothing", "eu_defer", "eu_learn", "delta", "best", "threshold_epsilon"});
    OffSwitchReport r;
    r.eu_act = number(field(j, path, "eu_act"), join(path, "eu_act"));
    r.eu_nothing = number(field(j, path, "eu_nothing"), join(path, "eu_nothing"));
    r.eu_defer = number(field(j, path, "eu_defer"), join(path, "eu_defer"));
    r.eu_learn = number(field(j, path, "eu_learn"), join(path, "eu_learn"));
    r.delta = number(field(j, path, "delta"), join(path, "delta"));
    const auto best = string(field(j, path, "best"), join(path, "best"));
    if (best == "act")
        r.best = Option::Act;
    else if (best == "defer")
        r.best = Option::Defer;
    else if (best == "nothing")
        r.best = Option::Nothing;
    else
        fail(join(path, "best"), "expected act, defer or nothing");
    const auto& t = field(j, path, "threshold_epsilon");
    if (!t.is_null()) r.threshold_epsilon = number(t, join(path, "threshold_epsilon"));
    return r;
}

Witness parse_witness(const json& j, std::string_view path) {
    require_object(j, path, {"trial_index", "voi", "problem", "channel", "rule"});
    Witness w{count(field(j, path, "trial_index"), join(path, "trial_index")),
              parse_problem(field(j, path, "problem"), join(path, "problem")),
              parse_channel(field(j, path, "channel"), join(path, "channel")),
              DecisionRule::expected_utility(),
              number(field(j, path, "voi"), join(path, "voi"))};
    const auto& rule = field(j, path, "rule");
    const auto rpath = join(path, "rule");
    if (rule.is_object() && rule.contains("kind") && rule["kind"].is_string() &&
        (rule["kind"] == "faulty" || rule["kind"] == "conditionalization"))
        w.rule = parse_updater(rule, rpath);
    else
        w.rule = parse_rule(rule, rpath);
    return w;
}

ScenarioFile parse_scenario_file(const json& j) {
    constexpr std::string_view path = "scenario";
    require_object(j, path, {"label", "prior", "epsilon", "rule", "updater"});
    ScenarioFile f{{string(field(j, path, "label"), "label"), parse_distribution(field(j, path, "prior"), "prior"),
                    number(field(j, path, "epsilon"), "epsilon")},
                   std::nullopt,
                   std::nullopt};
    with_path("epsilon", [&] {
        f.scenario.validate();
        return 0;
    });
    if (j.contains("rule")) f.rule = parse_rule(j["rule"], "rule");
    if (j.contains("updater")) f.updater = parse_updater(j["updater"], "updater");
    return f;
}

json parse_text(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidArgument(std::string("malformed JSON: ") + e.what());
    }
}

} // namespace offswitch::io
