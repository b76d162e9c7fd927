#include "offswitch/game.hpp"

#include <algorithm>

#include "offswitch/error.hpp"
#include "offswitch/roots.hpp"
#include "offswitch/voi.hpp"

namespace offswitch {

namespace {

void require_epsilon(double epsilon) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw InvalidArgument("epsilon must lie in [0, 1]");
}

// P(G) E[U|G] and P(B) E[U|B] for G = {U >= 0}, B = {U < 0}. Empty cells contribute 0.
struct CellMoments {
    double good;
    double bad;
};

CellMoments cell_moments(const UtilityDistribution& prior) {
    const double pg = prob_ge(prior, 0.0);
    const double pb = prob_lt(prior, 0.0);
    return {pg > 0.0 ? pg * cond_mean_ge(prior, 0.0) : 0.0, pb > 0.0 ? pb * cond_mean_lt(prior, 0.0) : 0.0};
}

} // namespace

void OffSwitchScenario::validate() const { require_epsilon(epsilon); }

std::string_view to_string(Option option) noexcept {
    switch (option) {
    case Option::Act: return "act";
    case Option::Defer: return "defer";
    case Option::Nothing: return "nothing";
    }
    return "unknown";
}

TwoStateGame reduce_to_two_state(const UtilityDistribution& prior, double epsilon) {
    require_epsilon(epsilon);
    const double pg = prob_ge(prior, 0.0);
    const double pb = prob_lt(prior, 0.0);
    const bool prefer_degenerate = !(pg > 0.0);
    const bool disprefer_degenerate = !(pb > 0.0);
    const double book_good = prefer_degenerate ? 0.0 : cond_mean_ge(prior, 0.0);
    const double book_bad = disprefer_degenerate ? 0.0 : cond_mean_lt(prior, 0.0);

    // The two cell probabilities are computed separately; renormalize so the
    // belief is a probability vector to the last bit.
    const double total = pg + pb;
    DecisionProblem problem({"prefer", "disprefer"}, {pg / total, pb / total},
                            {Act{"book", {book_good, book_bad}}, Act{"nothing", {0.0, 0.0}}});
    return {std::move(problem), SignalChannel::binary_flip(epsilon), prefer_degenerate, disprefer_degenerate};
}

// E[U+] - max(E[U], 0) = min(E[U+], E[U-]), which is non-negative by construction.
double delta(const UtilityDistribution& prior) {
    const auto m = cell_moments(prior);
    return std::min(m.good, -m.bad);
}

Theorem1Check theorem1_check(const UtilityDistribution& prior) {
    const double d = delta(prior);
    return {d, d >= -1e-12, prob_gt(prior, 0.0) > 0.0 && prob_lt(prior, 0.0) > 0.0, d > 1e-12};
}

double noisy_defer_value(const UtilityDistribution& prior, double epsilon) {
    require_epsilon(epsilon);
    // Approve implements the action, reject yields 0.
    const auto m = cell_moments(prior);
    return (1.0 - epsilon) * m.good + epsilon * m.bad;
}

double noisy_learn_value(const UtilityDistribution& prior, double epsilon) {
    const auto game = reduce_to_two_state(prior, epsilon);
    return value_of_learning_eu(game.problem, game.problem.prior(), game.channel).value_learning;
}

std::optional<double> defer_threshold(const UtilityDistribution& prior) {
    const auto m = cell_moments(prior);
    const double denominator = m.good - m.bad;
    if (!(denominator > 0.0)) return std::nullopt;
    const double threshold = delta(prior) / denominator;
    if (threshold < 0.0 || threshold > 1.0) return std::nullopt;
    return threshold;
}

std::optional<double> defer_threshold_bisection(const UtilityDistribution& prior, double tolerance) {
    const auto m = cell_moments(prior);
    if (!(m.good - m.bad > 0.0)) return std::nullopt;
    const double outright = std::max(m.good + m.bad, 0.0);
    return bisect_first_nonpositive(
        [&](double eps) { return noisy_defer_value(prior, eps) - outright; }, 0.0, 1.0, tolerance);
}

OffSwitchReport best_option(const UtilityDistribution& prior, double epsilon) {
    OffSwitchReport r;
    r.eu_act = mean(prior);
    r.eu_nothing = 0.0;
    r.eu_defer = noisy_defer_value(prior, epsilon);
    r.eu_learn = noisy_learn_value(prior, epsilon);
    r.delta = r.eu_defer - std::max(r.eu_act, 0.0);
    if (r.eu_defer >= r.eu_act && r.eu_defer >= r.eu_nothing)
        r.best = Option::Defer;
    else if (r.eu_act >= r.eu_nothing)
        r.best = Option::Act;
    else
        r.best = Option::Nothing;
    r.threshold_epsilon = defer_threshold(prior);
    return r;
}

} // namespace offswitch
