#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace offswitch {

/// Probability vectors must sum to 1 within this tolerance.
inline constexpr double kProbabilityTolerance = 1e-12;

using Belief = std::vector<double>;

/// Throws InvalidArgument unless `p` is non-empty, finite, non-negative and sums to 1.
void validate_probability_vector(std::span<const double> p, std::string_view what);

struct Act {
    std::string name;
    std::vector<double> utilities; // one per state

    friend bool operator==(const Act&, const Act&) = default;
};

/// Finite decision problem: states, prior over states, acts as utility vectors.
class DecisionProblem {
public:
    DecisionProblem(std::vector<std::string> states, Belief prior, std::vector<Act> acts);

    std::size_t state_count() const noexcept { return states_.size(); }
    std::size_t act_count() const noexcept { return acts_.size(); }

    const std::vector<std::string>& states() const noexcept { return states_; }
    const Belief& prior() const noexcept { return prior_; }
    const std::vector<Act>& acts() const noexcept { return acts_; }
    const Act& act(std::size_t i) const { return acts_.at(i); }

    friend bool operator==(const DecisionProblem&, const DecisionProblem&) = default;

private:
    std::vector<std::string> states_;
    Belief prior_;
    std::vector<Act> acts_;
};

/// Row-stochastic likelihood table P(signal | state), one row per state.
class SignalChannel {
public:
    SignalChannel(std::vector<std::string> signals, std::vector<std::vector<double>> likelihood);

    /// Deterministic channel: state i emits signal cell_of_state[i].
    static SignalChannel partition(std::vector<std::string> signals,
                                   std::span<const std::size_t> cell_of_state);

    /// Two states, two signals; each state emits the "wrong" signal with probability epsilon.
    static SignalChannel binary_flip(double epsilon, std::string truthful = "approve",
                                     std::string flipped = "reject");

    std::size_t state_count() const noexcept { return likelihood_.size(); }
    std::size_t signal_count() const noexcept { return signals_.size(); }

    const std::vector<std::string>& signals() const noexcept { return signals_; }
    const std::vector<std::vector<double>>& likelihood() const noexcept { return likelihood_; }
    double likelihood(std::size_t state, std::size_t signal) const {
        return likelihood_.at(state).at(signal);
    }

    /// Throws InvalidArgument for an unknown label.
    std::size_t signal_index(std::string_view label) const;

    /// Every row has a single entry equal to 1.
    bool is_partition() const noexcept;
    /// Every row is identical, so observing a signal carries no information.
    bool is_uninformative() const noexcept;

    friend bool operator==(const SignalChannel&, const SignalChannel&) = default;

private:
    std::vector<std::string> signals_;
    std::vector<std::vector<double>> likelihood_;
};

struct Knot {
    double p;
    double r;

    friend bool operator==(const Knot&, const Knot&) = default;
};

/// Risk function r: [0,1] -> [0,1] with r(0) = 0, r(1) = 1, non-decreasing.
class RiskFunction {
public:
    struct Identity {
        friend bool operator==(const Identity&, const Identity&) = default;
    };
    struct Power {
        double exponent;
        friend bool operator==(const Power&, const Power&) = default;
    };
    struct Table {
        std::vector<Knot> knots; // sorted by p, includes (0,0) and (1,1)
        friend bool operator==(const Table&, const Table&) = default;
    };

    static RiskFunction identity() { return RiskFunction(Identity{}); }
    static RiskFunction power(double exponent);
    /// Knots are linearly interpolated; (0,0) and (1,1) are added when absent.
    static RiskFunction table(std::vector<Knot> knots);

    double operator()(double p) const;

    /// True when r(p) = p on [0,1] (Identity, Power{1}, or a diagonal table).
    bool is_identity() const noexcept;

    const std::variant<Identity, Power, Table>& representation() const noexcept { return rep_; }

    friend bool operator==(const RiskFunction&, const RiskFunction&) = default;

private:
    explicit RiskFunction(std::variant<Identity, Power, Table> rep) : rep_(std::move(rep)) {}

    std::variant<Identity, Power, Table> rep_;
};

/// Non-empty finite set of probability vectors over one state space.
class CredalSet {
public:
    explicit CredalSet(std::vector<Belief> members);

    std::size_t size() const noexcept { return members_.size(); }
    std::size_t state_count() const noexcept { return members_.front().size(); }
    const std::vector<Belief>& members() const noexcept { return members_; }

    friend bool operator==(const CredalSet&, const CredalSet&) = default;

private:
    std::vector<Belief> members_;
};

enum class MisupdateKind { StayAtPrior, ComplementConditionalization, CustomPosterior };

/// How a faulty updater lands when it fails to conditionalize.
struct Misupdate {
    MisupdateKind kind = MisupdateKind::StayAtPrior;
    /// Per-signal posterior, only for CustomPosterior. Indexed by signal.
    std::vector<Belief> custom_posteriors;

    static Misupdate stay_at_prior() { return {}; }
    static Misupdate complement() { return {MisupdateKind::ComplementConditionalization, {}}; }
    static Misupdate custom(std::vector<Belief> posteriors);

    friend bool operator==(const Misupdate&, const Misupdate&) = default;
};

/// Conditionalization, or conditionalization that fails with probability q.
struct Updater {
    bool faulty = false;
    double failure_probability = 0.0;
    Misupdate misupdate;

    static Updater conditionalization() { return {}; }
    static Updater make_faulty(double q, Misupdate kind);

    friend bool operator==(const Updater&, const Updater&) = default;
};

enum class RuleKind { ExpectedUtility, RiskWeighted, GammaMaximin };

std::string_view to_string(RuleKind kind) noexcept;
std::string_view to_string(MisupdateKind kind) noexcept;

/// Decision rule tag plus the auxiliary data it needs. Missing data is
/// reported as MissingRuleData when the rule is used.
struct DecisionRule {
    RuleKind kind = RuleKind::ExpectedUtility;
    std::optional<RiskFunction> risk;
    std::optional<CredalSet> credal;

    static DecisionRule expected_utility() { return {}; }
    static DecisionRule risk_weighted(RiskFunction r) { return {RuleKind::RiskWeighted, std::move(r), {}}; }
    static DecisionRule gamma_maximin(CredalSet c) { return {RuleKind::GammaMaximin, {}, std::move(c)}; }

    const RiskFunction& require_risk() const;
    const CredalSet& require_credal() const;

    friend bool operator==(const DecisionRule&, const DecisionRule&) = default;
};

struct Choice {
    std::size_t act;
    double value;
};

/// Utility and probability of one outcome of a prospect.
struct Outcome {
    double utility;
    double probability;
};

double expected_utility(const DecisionProblem& problem, std::size_t act, std::span<const double> belief);

/// Maximal expected utility; ties go to the lowest act index.
Choice best_act_eu(const DecisionProblem& problem, std::span<const double> belief);

double signal_marginal(std::span<const double> belief, const SignalChannel& channel, std::size_t signal);

/// Bayesian posterior after observing `signal`. Throws ZeroMarginal if P(signal) = 0.
Belief posterior(std::span<const double> belief, const SignalChannel& channel, std::size_t signal);

/**
 * Rank-dependent value of a prospect: with outcomes sorted ascending,
 * u_1 + sum_{i>=2} r(P(U >= u_i)) * (u_i - u_{i-1}).
 */
double rank_dependent_value(std::span<const Outcome> outcomes, const RiskFunction& r);

double risk_weighted_eu(const DecisionProblem& problem, std::size_t act, std::span<const double> belief,
                        const RiskFunction& r);

/// Lowest-index act with maximal risk-weighted expected utility.
Choice best_act_reu(const DecisionProblem& problem, std::span<const double> belief, const RiskFunction& r);

/// Worst-case expected utility of `act` across the credal set.
double lower_expected_utility(const DecisionProblem& problem, std::size_t act, const CredalSet& credal);

/// Act maximizing the worst-case expected utility; ties go to the lowest index.
Choice gamma_maximin(const DecisionProblem& problem, const CredalSet& credal);

/// Belief a faulty updater ends up with after observing `signal` when conditionalization fails.
Belief misupdate(std::span<const double> belief, const SignalChannel& channel, std::size_t signal,
                 const Misupdate& kind);

} // namespace offswitch
