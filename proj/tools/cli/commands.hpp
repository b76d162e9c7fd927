#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "offswitch/game.hpp"
#include "offswitch/search.hpp"

namespace offswitch::cli {

enum ExitCode : int {
    kSuccess = 0,
    kCheckFailed = 1,
    kUsageError = 2,
    kNoWitness = 3,
};

/// Built-in scenarios: alice-basic, alice-confident, alice-noisy.
std::optional<OffSwitchScenario> builtin_scenario(std::string_view name);

/**
 * Parses a search rule:
 *   eu | reu:identity | reu:power:K | reu:table:P=R,P=R,...
 *   gamma-maximin[:MEMBERS] | faulty:stay:Q | faulty:complement:Q
 * Throws InvalidArgument on malformed input.
 */
SearchRule parse_search_rule(std::string_view text);

/// Parses "N" or "MIN-MAX" into a count range.
CountRange parse_count_range(std::string_view text);

/// Runs `offswitch-lab` with `args` (program name excluded). Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace offswitch::cli
