#include "offswitch/voi.hpp"

#include <algorithm>
#include <string>

#include "offswitch/error.hpp"

namespace offswitch {

namespace {

void require_compatible(const DecisionProblem& problem, std::span<const double> belief,
                        const SignalChannel& channel) {
    if (belief.size() != problem.state_count())
        throw DimensionMismatch("belief length does not match the decision problem");
    if (channel.state_count() != problem.state_count())
        throw DimensionMismatch("channel rows do not match the decision problem's states");
}

VoiReport finish(VoiReport report) {
    report.voi = report.value_learning - report.value_now;
    return report;
}

VoiReport learning_reu(const DecisionProblem& problem, std::span<const double> belief,
                       const SignalChannel& channel, const RiskFunction& r) {
    VoiReport report;
    report.rule = std::string(to_string(RuleKind::RiskWeighted));
    report.value_now = best_act_reu(problem, belief, r).value;

    // Joint (state, signal) prospect of the signal-contingent plan.
    std::vector<Outcome> joint;
    joint.reserve(problem.state_count() * channel.signal_count());
    for (std::size_t s = 0; s < channel.signal_count(); ++s) {
        const double marginal = signal_marginal(belief, channel, s);
        if (!(marginal > 0.0)) continue;
        const Belief post = posterior(belief, channel, s);
        const Choice choice = best_act_reu(problem, post, r);
        report.per_signal.push_back({s, marginal, choice.act, choice.value, std::nullopt});
        const auto& u = problem.act(choice.act).utilities;
        for (std::size_t w = 0; w < belief.size(); ++w) {
            const double p = belief[w] * channel.likelihood(w, s);
            if (p > 0.0) joint.push_back({u[w], p});
        }
    }
    report.value_learning = rank_dependent_value(joint, r);
    return finish(std::move(report));
}

VoiReport learning_gamma_maximin(const DecisionProblem& problem, const SignalChannel& channel,
                                 const CredalSet& credal) {
    if (credal.state_count() != problem.state_count() || channel.state_count() != problem.state_count())
        throw DimensionMismatch("credal set, channel and decision problem disagree on the number of states");

    VoiReport report;
    report.rule = std::string(to_string(RuleKind::GammaMaximin));
    report.value_now = gamma_maximin(problem, credal).value;

    // plan_value[m] accumulates sum_s P_m(s) E_{m(.|s)}[f_{a(s)}] = sum_{w,s} m(w) P(s|w) f_{a(s)}(w).
    std::vector<double> plan_value(credal.size(), 0.0);
    for (std::size_t s = 0; s < channel.signal_count(); ++s) {
        std::vector<Belief> conditioned;
        for (const auto& m : credal.members())
            if (signal_marginal(m, channel, s) > 0.0) conditioned.push_back(posterior(m, channel, s));
        if (conditioned.empty()) continue;

        const CredalSet post(std::move(conditioned));
        const Choice choice = gamma_maximin(problem, post);
        const auto& u = problem.act(choice.act).utilities;
        for (std::size_t i = 0; i < credal.size(); ++i) {
            const auto& m = credal.members()[i];
            for (std::size_t w = 0; w < m.size(); ++w) plan_value[i] += m[w] * channel.likelihood(w, s) * u[w];
        }
        // The reported marginal is taken under the first member with the signal in its support.
        double marginal = 0.0;
        for (const auto& m : credal.members()) {
            marginal = signal_marginal(m, channel, s);
            if (marginal > 0.0) break;
        }
        report.per_signal.push_back({s, marginal, choice.act, choice.value, std::nullopt});
    }
    report.value_learning = *std::ranges::min_element(plan_value);
    return finish(std::move(report));
}

} // namespace

double value_now(const DecisionProblem& problem, std::span<const double> belief, const DecisionRule& rule) {
    switch (rule.kind) {
    case RuleKind::ExpectedUtility: return best_act_eu(problem, belief).value;
    case RuleKind::RiskWeighted: return best_act_reu(problem, belief, rule.require_risk()).value;
    case RuleKind::GammaMaximin: return gamma_maximin(problem, rule.require_credal()).value;
    }
    throw InvalidArgument("unknown decision rule");
}

VoiReport value_of_learning_eu(const DecisionProblem& problem, std::span<const double> belief,
                               const SignalChannel& channel) {
    require_compatible(problem, belief, channel);
    VoiReport report;
    report.rule = std::string(to_string(RuleKind::ExpectedUtility));
    report.value_now = best_act_eu(problem, belief).value;
    for (std::size_t s = 0; s < channel.signal_count(); ++s) {
        const double marginal = signal_marginal(belief, channel, s);
        if (!(marginal > 0.0)) continue;
        const Choice choice = best_act_eu(problem, posterior(belief, channel, s));
        report.per_signal.push_back({s, marginal, choice.act, choice.value, std::nullopt});
        report.value_learning += marginal * choice.value;
    }
    return finish(std::move(report));
}

VoiReport value_of_learning_rule(const DecisionProblem& problem, std::span<const double> belief,
                                 const SignalChannel& channel, const DecisionRule& rule) {
    require_compatible(problem, belief, channel);
    switch (rule.kind) {
    case RuleKind::ExpectedUtility: return value_of_learning_eu(problem, belief, channel);
    case RuleKind::RiskWeighted: return learning_reu(problem, belief, channel, rule.require_risk());
    case RuleKind::GammaMaximin: return learning_gamma_maximin(problem, channel, rule.require_credal());
    }
    throw InvalidArgument("unknown decision rule");
}

VoiReport value_of_learning_faulty(const DecisionProblem& problem, std::span<const double> belief,
                                   const SignalChannel& channel, const Updater& updater) {
    require_compatible(problem, belief, channel);
    if (!updater.faulty) return value_of_learning_eu(problem, belief, channel);

    const double q = updater.failure_probability;
    VoiReport report;
    report.rule = "faulty:" + std::string(to_string(updater.misupdate.kind));
    report.value_now = best_act_eu(problem, belief).value;
    for (std::size_t s = 0; s < channel.signal_count(); ++s) {
        const double marginal = signal_marginal(belief, channel, s);
        if (!(marginal > 0.0)) continue;
        const Belief post = posterior(belief, channel, s);
        const Choice correct = best_act_eu(problem, post);

        std::size_t wrong_act = correct.act;
        try {
            wrong_act = best_act_eu(problem, misupdate(belief, channel, s, updater.misupdate)).act;
        } catch (const ZeroMarginal&) {
            // No complement to conditionalize on; the failure leaves the choice unchanged.
        }
        const double value = (1.0 - q) * correct.value + q * expected_utility(problem, wrong_act, post);
        report.per_signal.push_back({s, marginal, correct.act, value, wrong_act});
        report.value_learning += marginal * value;
    }
    return finish(std::move(report));
}

} // namespace offswitch
