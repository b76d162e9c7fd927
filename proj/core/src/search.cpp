#include "offswitch/search.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "offswitch/error.hpp"
#include "offswitch/game.hpp"
#include "offswitch/random.hpp"

namespace offswitch {

namespace {

// Child-stream keys. The instance itself uses the trial stream directly.
constexpr std::uint64_t kCredalStream = 1;

std::vector<std::string> labels(char prefix, std::size_t n) {
    std::vector<std::string> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(std::string(1, prefix) + std::to_string(i));
    return out;
}

// Per-trial evaluation result used by every driver below.
struct TrialOutcome {
    std::size_t trial_index;
    double voi;
    std::optional<Witness> witness;
};

Witness make_witness(const SearchConfig& config, std::size_t trial) {
    auto [problem, channel] = random_instance(config, trial);
    const auto& rule = config.rule;
    WitnessRule data = DecisionRule::expected_utility();
    switch (rule.kind) {
    case SearchRule::Kind::ExpectedUtility:
        break;
    case SearchRule::Kind::RiskWeighted:
        if (!rule.risk) throw MissingRuleData("risk-weighted search needs a risk function");
        data = DecisionRule::risk_weighted(*rule.risk);
        break;
    case SearchRule::Kind::GammaMaximin:
        data = DecisionRule::gamma_maximin(random_credal(config, trial, problem.state_count()));
        break;
    case SearchRule::Kind::Faulty:
        if (!rule.updater) throw MissingRuleData("faulty-updater search needs an updater");
        data = *rule.updater;
        break;
    }
    return {trial, std::move(problem), std::move(channel), std::move(data), 0.0};
}

/// Runs `evaluate(trial)` for every trial on `threads` workers with static
/// striping, then restores trial order. Output is independent of scheduling.
template <class Result, class Evaluate>
std::vector<Result> run_trials(std::size_t trials, unsigned threads, Evaluate evaluate) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::size_t>(trials, 256))));
    std::vector<std::vector<Result>> partial(threads);
    auto worker = [&](unsigned id) {
        for (std::size_t t = id; t < trials; t += threads)
            if (auto r = evaluate(t)) partial[id].push_back(std::move(*r));
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned id = 0; id < threads; ++id) pool.emplace_back(worker, id);
    }
    std::vector<Result> merged;
    for (auto& p : partial) std::ranges::move(p, std::back_inserter(merged));
    std::ranges::sort(merged, {}, [](const Result& r) { return r.trial_index; });
    return merged;
}

void check_range(const CountRange& r, std::string_view what) {
    if (r.min < 1 || r.min > r.max) throw InvalidArgument(std::string(what) + " count range must satisfy 1 <= min <= max");
}

} // namespace

void SearchConfig::validate() const {
    if (trials < 1) throw InvalidArgument("trials must be at least 1");
    check_range(states, "state");
    check_range(acts, "act");
    check_range(signals, "signal");
    if (!(utility_lo < utility_hi) || !std::isfinite(utility_lo) || !std::isfinite(utility_hi))
        throw InvalidArgument("utility range must satisfy lo < hi");
    if (!(aversion_tolerance >= 0.0)) throw InvalidArgument("aversion tolerance must be non-negative");
}

Instance random_instance(const SearchConfig& config, std::size_t trial_index) {
    auto stream = RandomStream::for_trial(config.seed, trial_index);
    const std::size_t n_states = stream.between(config.states.min, config.states.max);
    const std::size_t n_acts = stream.between(config.acts.min, config.acts.max);
    const std::size_t n_signals = stream.between(config.signals.min, config.signals.max);

    Belief prior = stream.simplex(n_states);
    std::vector<Act> acts;
    acts.reserve(n_acts);
    for (std::size_t a = 0; a < n_acts; ++a) {
        std::vector<double> u(n_states);
        for (auto& x : u) x = stream.uniform(config.utility_lo, config.utility_hi);
        acts.push_back({"a" + std::to_string(a), std::move(u)});
    }
    std::vector<std::vector<double>> rows;
    rows.reserve(n_states);
    for (std::size_t w = 0; w < n_states; ++w) rows.push_back(stream.simplex(n_signals));

    return {DecisionProblem(labels('w', n_states), std::move(prior), std::move(acts)),
            SignalChannel(labels('s', n_signals), std::move(rows))};
}

CredalSet random_credal(const SearchConfig& config, std::size_t trial_index, std::size_t state_count) {
    auto stream = RandomStream::for_trial(config.seed, trial_index).split(kCredalStream);
    std::vector<Belief> members;
    members.reserve(config.rule.credal_members);
    for (std::size_t i = 0; i < std::max<std::size_t>(1, config.rule.credal_members); ++i)
        members.push_back(stream.simplex(state_count));
    return CredalSet(std::move(members));
}

UtilityDistribution random_discrete_prior(const SearchConfig& config, std::size_t trial_index) {
    auto stream = RandomStream::for_trial(config.seed, trial_index);
    const std::size_t n = stream.between(1, 6);
    const double span = std::max(std::abs(config.utility_lo), std::abs(config.utility_hi));
    // 0: mixed signs, 1: positive only, 2: negative only, 3: mixed with an atom at zero.
    const std::size_t shape = stream.index(4);
    const auto weights = stream.simplex(n);
    std::vector<Atom> atoms;
    atoms.reserve(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        double v = stream.uniform(config.utility_lo, config.utility_hi);
        if (shape == 1) v = stream.uniform(0.0, span) + 1e-9;
        if (shape == 2) v = -stream.uniform(0.0, span) - 1e-9;
        atoms.push_back({v, weights[i]});
    }
    if (shape == 3) {
        // Steal half of the first atom's mass for an atom at exactly zero.
        const double w = atoms.front().weight * 0.5;
        atoms.front().weight -= w;
        atoms.push_back({0.0, w});
    }
    // Simplex draws can miss 1 by a few ulps; absorb that into the largest weight.
    double total = 0.0;
    for (const auto& a : atoms) total += a.weight;
    std::ranges::max_element(atoms, {}, &Atom::weight)->weight += 1.0 - total;
    std::erase_if(atoms, [](const Atom& a) { return !(a.weight > 0.0); });
    return UtilityDistribution::discrete(std::move(atoms));
}

VoiReport evaluate_witness(const Witness& witness) {
    const auto& belief = witness.problem.prior();
    if (const auto* rule = std::get_if<DecisionRule>(&witness.rule))
        return value_of_learning_rule(witness.problem, belief, witness.channel, *rule);
    return value_of_learning_faulty(witness.problem, belief, witness.channel, std::get<Updater>(witness.rule));
}

VerificationReport verify_good(const SearchConfig& config) {
    config.validate();
    auto violations = run_trials<Violation>(config.trials, config.threads, [&](std::size_t t) -> std::optional<Violation> {
        const auto [problem, channel] = random_instance(config, t);
        const auto report = value_of_learning_eu(problem, problem.prior(), channel);
        if (report.voi < -1e-12) return Violation{t, report.voi, "negative value of information"};
        return std::nullopt;
    });
    return {config.trials, std::move(violations)};
}

VerificationReport verify_theorem1(const SearchConfig& config) {
    config.validate();
    auto violations = run_trials<Violation>(config.trials, config.threads, [&](std::size_t t) -> std::optional<Violation> {
        const auto check = theorem1_check(random_discrete_prior(config, t));
        if (!check.nonneg) return Violation{t, check.delta, "delta below zero"};
        if (check.strict_expected && !check.strict_observed)
            return Violation{t, check.delta, "mixed-sign prior without strict deference advantage"};
        return std::nullopt;
    });
    return {config.trials, std::move(violations)};
}

AversionScan scan_aversion(const SearchConfig& config) {
    config.validate();
    const auto outcomes = run_trials<TrialOutcome>(config.trials, config.threads, [&](std::size_t t) {
        const Witness w = make_witness(config, t);
        return std::optional<TrialOutcome>(TrialOutcome{t, evaluate_witness(w).voi, std::nullopt});
    });
    AversionScan scan{config.trials, 0, 0.0};
    for (const auto& o : outcomes) {
        if (o.voi < -config.aversion_tolerance) ++scan.hits;
        scan.min_voi = std::min(scan.min_voi, o.voi);
    }
    return scan;
}

void require_searchable(const SearchRule& rule) {
    switch (rule.kind) {
    case SearchRule::Kind::ExpectedUtility:
        throw RuleCannotBeAverse(
            "expected utility with conditionalization never values free information negatively (Good's theorem)");
    case SearchRule::Kind::RiskWeighted:
        if (!rule.risk) throw MissingRuleData("risk-weighted search needs a risk function");
        if (rule.risk->is_identity())
            throw RuleCannotBeAverse("an identity risk function reduces to expected utility (Good's theorem)");
        return;
    case SearchRule::Kind::GammaMaximin:
        if (rule.credal_members < 2)
            throw RuleCannotBeAverse("a singleton credal set reduces to expected utility (Good's theorem)");
        return;
    case SearchRule::Kind::Faulty:
        if (!rule.updater) throw MissingRuleData("faulty-updater search needs an updater");
        if (!rule.updater->faulty || rule.updater->failure_probability <= 0.0)
            throw RuleCannotBeAverse("an updater that never fails is plain conditionalization (Good's theorem)");
        if (rule.updater->misupdate.kind == MisupdateKind::StayAtPrior)
            throw RuleCannotBeAverse(
                "staying at the prior re-aggregates to the choose-now value, so it cannot make learning worse");
        return;
    }
}

std::vector<Witness> find_information_aversion(const SearchConfig& config) {
    config.validate();
    require_searchable(config.rule);
    auto outcomes = run_trials<TrialOutcome>(config.trials, config.threads, [&](std::size_t t) -> std::optional<TrialOutcome> {
        Witness w = make_witness(config, t);
        w.voi = evaluate_witness(w).voi;
        if (!(w.voi < -config.aversion_tolerance)) return std::nullopt;
        // Re-verify from a fresh evaluation before emitting.
        if (std::abs(evaluate_witness(w).voi - w.voi) > 1e-10) return std::nullopt;
        const double voi = w.voi;
        return TrialOutcome{t, voi, std::move(w)};
    });
    std::vector<Witness> witnesses;
    witnesses.reserve(outcomes.size());
    for (auto& o : outcomes) witnesses.push_back(std::move(*o.witness));
    std::ranges::sort(witnesses, [](const Witness& a, const Witness& b) {
        return a.voi != b.voi ? a.voi < b.voi : a.trial_index < b.trial_index;
    });
    return witnesses;
}

} // namespace offswitch
