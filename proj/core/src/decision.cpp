#include "offswitch/decision.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "offswitch/error.hpp"

namespace offswitch {

namespace {

void require_length(std::span<const double> v, std::size_t expected, std::string_view what) {
    if (v.size() != expected)
        throw DimensionMismatch(std::string(what) + " has " + std::to_string(v.size()) + " entries, expected " +
                                std::to_string(expected));
}

void require_signal(const SignalChannel& channel, std::size_t signal) {
    if (signal >= channel.signal_count())
        throw DimensionMismatch("signal index " + std::to_string(signal) + " out of range");
}

bool is_zero_or_one(double x) { return x == 0.0 || x == 1.0; }

} // namespace

void validate_probability_vector(std::span<const double> p, std::string_view what) {
    if (p.empty()) throw InvalidArgument(std::string(what) + " is empty");
    double total = 0.0;
    for (double x : p) {
        if (!std::isfinite(x) || x < 0.0)
            throw InvalidArgument(std::string(what) + " has a negative or non-finite entry");
        total += x;
    }
    if (std::abs(total - 1.0) > kProbabilityTolerance)
        throw InvalidArgument(std::string(what) + " sums to " + std::to_string(total) + ", not 1");
}

// ---------------------------------------------------------------------------
// Types

DecisionProblem::DecisionProblem(std::vector<std::string> states, Belief prior, std::vector<Act> acts)
    : states_(std::move(states)), prior_(std::move(prior)), acts_(std::move(acts)) {
    if (states_.empty()) throw InvalidArgument("decision problem needs at least one state");
    if (acts_.empty()) throw InvalidArgument("decision problem needs at least one act");
    require_length(prior_, states_.size(), "prior");
    validate_probability_vector(prior_, "prior");
    for (const auto& a : acts_) {
        require_length(a.utilities, states_.size(), "act '" + a.name + "'");
        for (double u : a.utilities)
            if (!std::isfinite(u)) throw InvalidArgument("act '" + a.name + "' has a non-finite utility");
    }
}

SignalChannel::SignalChannel(std::vector<std::string> signals, std::vector<std::vector<double>> likelihood)
    : signals_(std::move(signals)), likelihood_(std::move(likelihood)) {
    if (signals_.empty()) throw InvalidArgument("channel needs at least one signal");
    if (likelihood_.empty()) throw InvalidArgument("channel needs at least one state row");
    for (std::size_t i = 0; i < likelihood_.size(); ++i) {
        const std::string what = "likelihood row " + std::to_string(i);
        require_length(likelihood_[i], signals_.size(), what);
        validate_probability_vector(likelihood_[i], what);
    }
}

SignalChannel SignalChannel::partition(std::vector<std::string> signals, std::span<const std::size_t> cell_of_state) {
    std::vector<std::vector<double>> rows;
    rows.reserve(cell_of_state.size());
    for (std::size_t cell : cell_of_state) {
        if (cell >= signals.size()) throw InvalidArgument("partition cell index out of range");
        std::vector<double> row(signals.size(), 0.0);
        row[cell] = 1.0;
        rows.push_back(std::move(row));
    }
    return SignalChannel(std::move(signals), std::move(rows));
}

SignalChannel SignalChannel::binary_flip(double epsilon, std::string truthful, std::string flipped) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw InvalidArgument("epsilon must lie in [0, 1]");
    return SignalChannel({std::move(truthful), std::move(flipped)},
                         {{1.0 - epsilon, epsilon}, {epsilon, 1.0 - epsilon}});
}

std::size_t SignalChannel::signal_index(std::string_view label) const {
    const auto it = std::ranges::find(signals_, label);
    if (it == signals_.end()) throw InvalidArgument("unknown signal '" + std::string(label) + "'");
    return static_cast<std::size_t>(it - signals_.begin());
}

bool SignalChannel::is_partition() const noexcept {
    return std::ranges::all_of(likelihood_, [](const auto& row) {
        return std::ranges::all_of(row, is_zero_or_one) && std::ranges::count(row, 1.0) == 1;
    });
}

bool SignalChannel::is_uninformative() const noexcept {
    return std::ranges::all_of(likelihood_, [&](const auto& row) { return row == likelihood_.front(); });
}

RiskFunction RiskFunction::power(double exponent) {
    if (!(exponent > 0.0) || !std::isfinite(exponent)) throw InvalidArgument("risk exponent must be positive");
    return RiskFunction(Power{exponent});
}

RiskFunction RiskFunction::table(std::vector<Knot> knots) {
    std::ranges::sort(knots, {}, &Knot::p);
    if (knots.empty() || knots.front().p != 0.0) knots.insert(knots.begin(), Knot{0.0, 0.0});
    if (knots.back().p != 1.0) knots.push_back(Knot{1.0, 1.0});
    if (knots.front().r != 0.0 || knots.back().r != 1.0)
        throw InvalidArgument("risk table must satisfy r(0) = 0 and r(1) = 1");
    for (std::size_t i = 0; i < knots.size(); ++i) {
        const auto& k = knots[i];
        if (!(k.p >= 0.0 && k.p <= 1.0) || !(k.r >= 0.0 && k.r <= 1.0))
            throw InvalidArgument("risk table knots must lie in [0, 1] x [0, 1]");
        if (i > 0 && (k.p == knots[i - 1].p || k.r < knots[i - 1].r))
            throw InvalidArgument("risk table knots must be strictly increasing in p and non-decreasing in r");
    }
    return RiskFunction(Table{std::move(knots)});
}

double RiskFunction::operator()(double p) const {
    p = std::clamp(p, 0.0, 1.0);
    if (std::holds_alternative<Identity>(rep_)) return p;
    if (const auto* pw = std::get_if<Power>(&rep_)) return std::pow(p, pw->exponent);
    const auto& knots = std::get<Table>(rep_).knots;
    const auto hi = std::ranges::lower_bound(knots, p, {}, &Knot::p);
    if (hi == knots.begin()) return hi->r;
    const auto lo = std::prev(hi);
    const double w = (p - lo->p) / (hi->p - lo->p);
    return lo->r + w * (hi->r - lo->r);
}

bool RiskFunction::is_identity() const noexcept {
    if (std::holds_alternative<Identity>(rep_)) return true;
    if (const auto* pw = std::get_if<Power>(&rep_)) return pw->exponent == 1.0;
    return std::ranges::all_of(std::get<Table>(rep_).knots, [](const Knot& k) { return k.p == k.r; });
}

CredalSet::CredalSet(std::vector<Belief> members) : members_(std::move(members)) {
    if (members_.empty()) throw InvalidArgument("credal set needs at least one member");
    for (std::size_t i = 0; i < members_.size(); ++i) {
        const std::string what = "credal member " + std::to_string(i);
        require_length(members_[i], members_.front().size(), what);
        validate_probability_vector(members_[i], what);
    }
}

Misupdate Misupdate::custom(std::vector<Belief> posteriors) {
    for (std::size_t i = 0; i < posteriors.size(); ++i)
        validate_probability_vector(posteriors[i], "custom posterior " + std::to_string(i));
    return {MisupdateKind::CustomPosterior, std::move(posteriors)};
}

Updater Updater::make_faulty(double q, Misupdate kind) {
    if (!(q >= 0.0 && q <= 1.0)) throw InvalidArgument("misupdate probability must lie in [0, 1]");
    return {true, q, std::move(kind)};
}

std::string_view to_string(RuleKind kind) noexcept {
    switch (kind) {
    case RuleKind::ExpectedUtility: return "expected-utility";
    case RuleKind::RiskWeighted: return "risk-weighted";
    case RuleKind::GammaMaximin: return "gamma-maximin";
    }
    return "unknown";
}

std::string_view to_string(MisupdateKind kind) noexcept {
    switch (kind) {
    case MisupdateKind::StayAtPrior: return "stay-at-prior";
    case MisupdateKind::ComplementConditionalization: return "complement-conditionalization";
    case MisupdateKind::CustomPosterior: return "custom-posterior";
    }
    return "unknown";
}

const RiskFunction& DecisionRule::require_risk() const {
    if (!risk) throw MissingRuleData("risk-weighted rule needs a risk function");
    return *risk;
}

const CredalSet& DecisionRule::require_credal() const {
    if (!credal) throw MissingRuleData("gamma-maximin rule needs a credal set");
    return *credal;
}

// ---------------------------------------------------------------------------
// Operations

double expected_utility(const DecisionProblem& problem, std::size_t act, std::span<const double> belief) {
    require_length(belief, problem.state_count(), "belief");
    const auto& u = problem.act(act).utilities;
    return std::transform_reduce(belief.begin(), belief.end(), u.begin(), 0.0);
}

Choice best_act_eu(const DecisionProblem& problem, std::span<const double> belief) {
    Choice best{0, expected_utility(problem, 0, belief)};
    for (std::size_t a = 1; a < problem.act_count(); ++a) {
        const double v = expected_utility(problem, a, belief);
        if (v > best.value) best = {a, v};
    }
    return best;
}

double signal_marginal(std::span<const double> belief, const SignalChannel& channel, std::size_t signal) {
    require_length(belief, channel.state_count(), "belief");
    require_signal(channel, signal);
    double p = 0.0;
    for (std::size_t w = 0; w < belief.size(); ++w) p += belief[w] * channel.likelihood(w, signal);
    return p;
}

Belief posterior(std::span<const double> belief, const SignalChannel& channel, std::size_t signal) {
    const double marginal = signal_marginal(belief, channel, signal);
    if (!(marginal > 0.0))
        throw ZeroMarginal("signal '" + channel.signals()[signal] + "' has zero probability");
    Belief post(belief.size());
    for (std::size_t w = 0; w < belief.size(); ++w) post[w] = belief[w] * channel.likelihood(w, signal) / marginal;
    return post;
}

double rank_dependent_value(std::span<const Outcome> outcomes, const RiskFunction& r) {
    if (outcomes.empty()) throw InvalidArgument("prospect has no outcomes");
    std::vector<Outcome> sorted(outcomes.begin(), outcomes.end());
    std::ranges::stable_sort(sorted, {}, &Outcome::utility);

    // Suffix sums give the decumulative probabilities P(U >= u_i).
    std::vector<double> tail(sorted.size() + 1, 0.0);
    for (std::size_t i = sorted.size(); i-- > 0;) tail[i] = tail[i + 1] + sorted[i].probability;

    double value = sorted.front().utility;
    for (std::size_t i = 1; i < sorted.size(); ++i)
        value += r(tail[i]) * (sorted[i].utility - sorted[i - 1].utility);
    return value;
}

double risk_weighted_eu(const DecisionProblem& problem, std::size_t act, std::span<const double> belief,
                        const RiskFunction& r) {
    require_length(belief, problem.state_count(), "belief");
    const auto& u = problem.act(act).utilities;
    std::vector<Outcome> prospect(u.size());
    for (std::size_t w = 0; w < u.size(); ++w) prospect[w] = {u[w], belief[w]};
    return rank_dependent_value(prospect, r);
}

Choice best_act_reu(const DecisionProblem& problem, std::span<const double> belief, const RiskFunction& r) {
    Choice best{0, risk_weighted_eu(problem, 0, belief, r)};
    for (std::size_t a = 1; a < problem.act_count(); ++a) {
        const double v = risk_weighted_eu(problem, a, belief, r);
        if (v > best.value) best = {a, v};
    }
    return best;
}

double lower_expected_utility(const DecisionProblem& problem, std::size_t act, const CredalSet& credal) {
    double worst = expected_utility(problem, act, credal.members().front());
    for (const auto& m : credal.members()) worst = std::min(worst, expected_utility(problem, act, m));
    return worst;
}

Choice gamma_maximin(const DecisionProblem& problem, const CredalSet& credal) {
    if (credal.state_count() != problem.state_count())
        throw DimensionMismatch("credal set and decision problem disagree on the number of states");
    Choice best{0, lower_expected_utility(problem, 0, credal)};
    for (std::size_t a = 1; a < problem.act_count(); ++a) {
        const double v = lower_expected_utility(problem, a, credal);
        if (v > best.value) best = {a, v};
    }
    return best;
}

Belief misupdate(std::span<const double> belief, const SignalChannel& channel, std::size_t signal,
                 const Misupdate& kind) {
    require_length(belief, channel.state_count(), "belief");
    require_signal(channel, signal);
    switch (kind.kind) {
    case MisupdateKind::StayAtPrior:
        return Belief(belief.begin(), belief.end());
    case MisupdateKind::ComplementConditionalization: {
        Belief post(belief.size());
        double marginal = 0.0;
        for (std::size_t w = 0; w < belief.size(); ++w) {
            post[w] = belief[w] * (1.0 - channel.likelihood(w, signal));
            marginal += post[w];
        }
        if (!(marginal > 0.0))
            throw ZeroMarginal("complement of signal '" + channel.signals()[signal] + "' has zero probability");
        for (auto& x : post) x /= marginal;
        return post;
    }
    case MisupdateKind::CustomPosterior: {
        if (signal >= kind.custom_posteriors.size())
            throw MissingRuleData("no custom posterior for signal '" + channel.signals()[signal] + "'");
        const auto& post = kind.custom_posteriors[signal];
        require_length(post, belief.size(), "custom posterior");
        return post;
    }
    }
    return Belief(belief.begin(), belief.end());
}

} // namespace offswitch
