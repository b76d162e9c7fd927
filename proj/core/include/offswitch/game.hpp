#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "offswitch/decision.hpp"
#include "offswitch/distributions.hpp"

namespace offswitch {

/// A prior over U_a plus the probability that the human's signal is misleading.
struct OffSwitchScenario {
    std::string label;
    UtilityDistribution prior;
    double epsilon = 0.0;

    /// Throws InvalidArgument unless 0 <= epsilon <= 1.
    void validate() const;
};

enum class Option { Act, Defer, Nothing };

std::string_view to_string(Option option) noexcept;

struct OffSwitchReport {
    double eu_act = 0.0;
    double eu_nothing = 0.0;
    double eu_defer = 0.0; // E[w(a)] at the scenario's epsilon
    double eu_learn = 0.0; // learn the signal, then choose between act and nothing
    double delta = 0.0;    // eu_defer - max(eu_act, 0)
    Option best = Option::Defer;
    std::optional<double> threshold_epsilon;

    friend bool operator==(const OffSwitchReport&, const OffSwitchReport&) = default;
};

/// The off-switch game as a finite problem: states (prefer, disprefer),
/// acts (book, nothing), channel (approve, reject) garbled with epsilon.
struct TwoStateGame {
    DecisionProblem problem;
    SignalChannel channel;
    bool prefer_degenerate = false;    // P(U >= 0) = 0, book utility set to 0
    bool disprefer_degenerate = false; // P(U < 0) = 0, book utility set to 0
};

TwoStateGame reduce_to_two_state(const UtilityDistribution& prior, double epsilon);

/// Deference advantage E[max(U,0)] - max(E[U], 0).
double delta(const UtilityDistribution& prior);

struct Theorem1Check {
    double delta;
    bool nonneg;          // delta >= -1e-12
    bool strict_expected; // P(U > 0) > 0 and P(U < 0) > 0
    bool strict_observed; // delta > 1e-12

    bool holds() const noexcept { return nonneg && (!strict_expected || strict_observed); }
};

Theorem1Check theorem1_check(const UtilityDistribution& prior);

/// Expected utility of deferring when the approve/reject signal is flipped with probability epsilon.
double noisy_defer_value(const UtilityDistribution& prior, double epsilon);

/// Value of observing the garbled signal and then choosing between acting and doing nothing.
double noisy_learn_value(const UtilityDistribution& prior, double epsilon);

/**
 * Smallest epsilon at which deferring stops beating max(E[U], 0), in closed
 * form. nullopt when the denominator P(G)E[U|G] - P(B)E[U|B] is not positive
 * (all mass at zero) or the crossing lies outside [0, 1].
 */
std::optional<double> defer_threshold(const UtilityDistribution& prior);

/// Same crossing found numerically by bisection on noisy_defer_value.
std::optional<double> defer_threshold_bisection(const UtilityDistribution& prior, double tolerance = 1e-13);

/// Full report; best is the argmax of {eu_act, eu_defer, 0} with ties resolved defer > act > nothing.
OffSwitchReport best_option(const UtilityDistribution& prior, double epsilon);

inline OffSwitchReport best_option(const OffSwitchScenario& s) { return best_option(s.prior, s.epsilon); }

} // namespace offswitch
