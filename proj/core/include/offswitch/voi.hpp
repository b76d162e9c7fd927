#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "offswitch/decision.hpp"

namespace offswitch {

struct SignalOutcome {
    std::size_t signal;
    double marginal;
    /// Act chosen after the signal (by the correct update for faulty updaters).
    std::size_t act;
    /// The rule's value of the chosen act under the signal's posterior. For a
    /// faulty updater this mixes the correct and the misupdated choice.
    double conditional_value;
    /// Act chosen after a failed update (faulty updaters only).
    std::optional<std::size_t> misupdate_act;

    friend bool operator==(const SignalOutcome&, const SignalOutcome&) = default;
};

/// Choose-now value against learn-then-choose value.
struct VoiReport {
    double value_now = 0.0;
    double value_learning = 0.0;
    double voi = 0.0; // value_learning - value_now
    std::string rule;
    std::vector<SignalOutcome> per_signal; // signals with zero marginal are omitted

    friend bool operator==(const VoiReport&, const VoiReport&) = default;
};

/// The rule's best-act value at the prior. Gamma-maximin ignores `belief` and uses its credal set.
double value_now(const DecisionProblem& problem, std::span<const double> belief, const DecisionRule& rule);

/// Good's learn-then-choose value under expected utility and conditionalization.
VoiReport value_of_learning_eu(const DecisionProblem& problem, std::span<const double> belief,
                               const SignalChannel& channel);

/**
 * Learning value under a non-EU rule.
 *
 * Risk-weighted: the agent picks the posterior-REU-best act after each
 * signal, and the resulting plan is scored once by REU over the joint
 * (state, signal) prospect. Gamma-maximin: the plan picks the Gamma-maximin
 * act of the member-wise conditioned credal set after each signal, and is
 * scored by its worst-case expected utility over the prior credal set.
 */
VoiReport value_of_learning_rule(const DecisionProblem& problem, std::span<const double> belief,
                                 const SignalChannel& channel, const DecisionRule& rule);

/**
 * Learning value for an agent that conditionalizes with probability 1 - q and
 * misupdates with probability q. The misupdated belief only picks the act;
 * payoffs are always scored under the correct posterior. When the misupdate
 * is undefined for a signal (null complement) the agent's choice falls back
 * to the correct posterior.
 */
VoiReport value_of_learning_faulty(const DecisionProblem& problem, std::span<const double> belief,
                                   const SignalChannel& channel, const Updater& updater);

} // namespace offswitch
