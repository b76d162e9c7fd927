#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "offswitch/decision.hpp"
#include "offswitch/distributions.hpp"
#include "offswitch/voi.hpp"

namespace offswitch {

struct CountRange {
    std::size_t min = 2;
    std::size_t max = 4;
};

/// What a search evaluates: the rule under test plus how to generate its data.
struct SearchRule {
    enum class Kind { ExpectedUtility, RiskWeighted, GammaMaximin, Faulty };

    Kind kind = Kind::ExpectedUtility;
    std::optional<RiskFunction> risk;
    std::size_t credal_members = 2; // random members drawn per trial
    std::optional<Updater> updater;

    static SearchRule expected_utility() { return {}; }
    static SearchRule risk_weighted(RiskFunction r) { return {Kind::RiskWeighted, std::move(r), 2, {}}; }
    static SearchRule gamma_maximin(std::size_t members) { return {Kind::GammaMaximin, {}, members, {}}; }
    static SearchRule faulty(Updater u) { return {Kind::Faulty, {}, 2, std::move(u)}; }
};

struct SearchConfig {
    std::uint64_t seed = 0;
    std::size_t trials = 1000;
    CountRange states;
    CountRange acts;
    CountRange signals;
    double utility_lo = -10.0;
    double utility_hi = 10.0;
    SearchRule rule;
    double aversion_tolerance = 1e-6;
    /// Worker threads; results do not depend on this.
    unsigned threads = 1;

    /// Throws InvalidArgument on trials = 0, empty count ranges or lo >= hi.
    void validate() const;
};

struct Instance {
    DecisionProblem problem;
    SignalChannel channel;
};

/// Rule data attached to a witness: a non-EU decision rule or a faulty updater.
using WitnessRule = std::variant<DecisionRule, Updater>;

/// A concrete instance with negative value of information.
struct Witness {
    std::size_t trial_index = 0;
    DecisionProblem problem;
    SignalChannel channel;
    WitnessRule rule;
    double voi = 0.0;
};

/// Fully determined by (config.seed, trial_index). Priors and channel rows are
/// flat-Dirichlet draws, utilities uniform on [utility_lo, utility_hi).
Instance random_instance(const SearchConfig& config, std::size_t trial_index);

/// Random credal set for a trial, drawn from a stream independent of random_instance.
CredalSet random_credal(const SearchConfig& config, std::size_t trial_index, std::size_t state_count);

/// Random discrete prior over U_a for a trial: one to six atoms, sometimes
/// one-sided or with an atom exactly at zero.
UtilityDistribution random_discrete_prior(const SearchConfig& config, std::size_t trial_index);

/// Re-evaluates the witness through the voi module.
VoiReport evaluate_witness(const Witness& witness);

struct Violation {
    std::size_t trial_index;
    double value;
    std::string detail;
};

struct VerificationReport {
    std::size_t trials = 0;
    std::vector<Violation> violations;

    bool passed() const noexcept { return violations.empty(); }
};

/// Good's inequality on random instances: violations are voi < -1e-12.
VerificationReport verify_good(const SearchConfig& config);

/// Theorem 1 on random discrete priors (count ranges are ignored).
VerificationReport verify_theorem1(const SearchConfig& config);

struct AversionScan {
    std::size_t trials = 0;
    std::size_t hits = 0; // voi < -aversion_tolerance
    double min_voi = 0.0;
};

/// Counts aversion instances for any rule, without the searchability precondition.
AversionScan scan_aversion(const SearchConfig& config);

/**
 * All trials with voi < -aversion_tolerance, each re-verified, sorted by voi
 * ascending (trial index breaks ties). Throws RuleCannotBeAverse for expected
 * utility, identity risk functions, singleton credal sets and faulty updaters
 * that stay at the prior or never fail.
 */
std::vector<Witness> find_information_aversion(const SearchConfig& config);

/// Throws RuleCannotBeAverse when the rule provably has non-negative value of information.
void require_searchable(const SearchRule& rule);

} // namespace offswitch
