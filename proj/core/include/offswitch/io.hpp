#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "offswitch/decision.hpp"
#include "offswitch/distributions.hpp"
#include "offswitch/game.hpp"
#include "offswitch/search.hpp"
#include "offswitch/voi.hpp"

// JSON encodings. Parsers reject unknown fields and report the offending
// field path in an InvalidArgument message.

namespace offswitch::io {

using nlohmann::json;

json to_json(const UtilityDistribution& d);
json to_json(const DecisionProblem& p);
json to_json(const SignalChannel& c);
json to_json(const RiskFunction& r);
json to_json(const CredalSet& c);
json to_json(const Misupdate& m);
json to_json(const Updater& u);
json to_json(const DecisionRule& r);
json to_json(const VoiReport& r);
json to_json(const OffSwitchScenario& s);
json to_json(const OffSwitchReport& r);
json to_json(const Witness& w);

UtilityDistribution parse_distribution(const json& j, std::string_view path = "prior");
DecisionProblem parse_problem(const json& j, std::string_view path = "problem");
SignalChannel parse_channel(const json& j, std::string_view path = "channel");
RiskFunction parse_risk(const json& j, std::string_view path = "risk");
CredalSet parse_credal(const json& j, std::string_view path = "credal");
Misupdate parse_misupdate(const json& j, std::string_view path = "misupdate");
Updater parse_updater(const json& j, std::string_view path = "updater");
DecisionRule parse_rule(const json& j, std::string_view path = "rule");
VoiReport parse_voi_report(const json& j, std::string_view path = "voi");
OffSwitchReport parse_offswitch_report(const json& j, std::string_view path = "report");
Witness parse_witness(const json& j, std::string_view path = "witness");

/// Scenario file: {label, prior, epsilon, optional rule, optional updater}.
struct ScenarioFile {
    OffSwitchScenario scenario;
    std::optional<DecisionRule> rule;
    std::optional<Updater> updater;
};

ScenarioFile parse_scenario_file(const json& j);
json to_json(const ScenarioFile& f);

/// Parses JSON text, mapping syntax errors to InvalidArgument.
json parse_text(std::string_view text);

} // namespace offswitch::io
