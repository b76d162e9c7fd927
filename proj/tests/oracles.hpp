#pragma once

// Test-only reference computations. These deliberately avoid the library's
// evaluation paths: plain loops, a layer-cake form of the rank-dependent
// value, and a bisection written against the approve/reject arithmetic.

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "offswitch/decision.hpp"
#include "offswitch/distributions.hpp"

namespace oracle {

using offswitch::Belief;
using offswitch::DecisionProblem;
using offswitch::RiskFunction;
using offswitch::SignalChannel;

inline double eu(const std::vector<double>& utilities, const std::vector<double>& belief) {
    double v = 0.0;
    for (std::size_t i = 0; i < utilities.size(); ++i) v += utilities[i] * belief[i];
    return v;
}

/// sum over distinct outcomes u of u * (r(P(U >= u)) - r(P(U > u))).
inline double layer_reu(const std::vector<std::pair<double, double>>& outcomes, const RiskFunction& r) {
    std::map<double, double> mass;
    for (const auto& [u, p] : outcomes) mass[u] += p;
    double total = 0.0;
    for (const auto& [u, p] : mass) total += p;
    double above = total; // P(U >= u) for the current u
    double value = 0.0;
    for (const auto& [u, p] : mass) {
        const double strictly_above = above - p;
        value += u * (r(above / total) - r(std::max(strictly_above, 0.0) / total));
        above = strictly_above;
    }
    return value;
}

inline Belief bayes(const std::vector<double>& belief, const SignalChannel& c, std::size_t s) {
    Belief joint(belief.size());
    double z = 0.0;
    for (std::size_t w = 0; w < belief.size(); ++w) {
        joint[w] = belief[w] * c.likelihood()[w][s];
        z += joint[w];
    }
    for (auto& x : joint) x /= z;
    return joint;
}

inline double marginal(const std::vector<double>& belief, const SignalChannel& c, std::size_t s) {
    double z = 0.0;
    for (std::size_t w = 0; w < belief.size(); ++w) z += belief[w] * c.likelihood()[w][s];
    return z;
}

template <class Score>
std::size_t argmax(const DecisionProblem& p, Score score) {
    std::size_t best = 0;
    double best_value = score(0);
    for (std::size_t a = 1; a < p.act_count(); ++a) {
        const double v = score(a);
        if (v > best_value) {
            best = a;
            best_value = v;
        }
    }
    return best;
}

inline double reu_of_act(const DecisionProblem& p, std::size_t a, const Belief& b, const RiskFunction& r) {
    std::vector<std::pair<double, double>> o;
    for (std::size_t w = 0; w < b.size(); ++w) o.emplace_back(p.acts()[a].utilities[w], b[w]);
    return layer_reu(o, r);
}

/// Learn-then-choose minus choose-now for a risk-weighted agent, plan scored on the joint prospect.
inline double reu_voi(const DecisionProblem& p, const Belief& b, const SignalChannel& c, const RiskFunction& r) {
    const std::size_t now = argmax(p, [&](std::size_t a) { return reu_of_act(p, a, b, r); });
    const double value_now = reu_of_act(p, now, b, r);
    std::vector<std::pair<double, double>> joint;
    for (std::size_t s = 0; s < c.signal_count(); ++s) {
        if (marginal(b, c, s) <= 0.0) continue;
        const Belief post = bayes(b, c, s);
        const std::size_t a = argmax(p, [&](std::size_t x) { return reu_of_act(p, x, post, r); });
        for (std::size_t w = 0; w < b.size(); ++w) joint.emplace_back(p.acts()[a].utilities[w], b[w] * c.likelihood()[w][s]);
    }
    return layer_reu(joint, r) - value_now;
}

inline double lower_eu(const DecisionProblem& p, std::size_t a, const std::vector<Belief>& members) {
    double worst = INFINITY;
    for (const auto& m : members) worst = std::min(worst, eu(p.acts()[a].utilities, m));
    return worst;
}

inline double gamma_voi(const DecisionProblem& p, const std::vector<Belief>& credal, const SignalChannel& c) {
    const std::size_t now = argmax(p, [&](std::size_t a) { return lower_eu(p, a, credal); });
    const double value_now = lower_eu(p, now, credal);
    // Enumerate the plan, then evaluate it member by member through per-signal posteriors.
    std::vector<std::size_t> plan(c.signal_count(), 0);
    for (std::size_t s = 0; s < c.signal_count(); ++s) {
        std::vector<Belief> post;
        for (const auto& m : credal)
            if (marginal(m, c, s) > 0.0) post.push_back(bayes(m, c, s));
        if (!post.empty()) plan[s] = argmax(p, [&](std::size_t a) { return lower_eu(p, a, post); });
    }
    double worst = INFINITY;
    for (const auto& m : credal) {
        double v = 0.0;
        for (std::size_t s = 0; s < c.signal_count(); ++s) {
            const double ps = marginal(m, c, s);
            if (ps > 0.0) v += ps * eu(p.acts()[plan[s]].utilities, bayes(m, c, s));
        }
        worst = std::min(worst, v);
    }
    return worst - value_now;
}

/// Complement-conditionalizing faulty updater, written out directly.
inline double complement_voi(const DecisionProblem& p, const Belief& b, const SignalChannel& c, double q) {
    const auto best_under = [&](const Belief& x) { return argmax(p, [&](std::size_t a) { return eu(p.acts()[a].utilities, x); }); };
    const double value_now = eu(p.acts()[best_under(b)].utilities, b);
    double learn = 0.0;
    for (std::size_t s = 0; s < c.signal_count(); ++s) {
        const double ps = marginal(b, c, s);
        if (ps <= 0.0) continue;
        const Belief post = bayes(b, c, s);
        Belief comp(b.size());
        double z = 0.0;
        for (std::size_t w = 0; w < b.size(); ++w) {
            comp[w] = b[w] * (1.0 - c.likelihood()[w][s]);
            z += comp[w];
        }
        std::size_t wrong = best_under(post);
        if (z > 0.0) {
            for (auto& x : comp) x /= z;
            wrong = best_under(comp);
        }
        learn += ps * ((1.0 - q) * eu(p.acts()[best_under(post)].utilities, post) + q * eu(p.acts()[wrong].utilities, post));
    }
    return learn - value_now;
}

/// Deference value from the approve/reject decomposition:
/// p(approve) * (p(prefer|approve) * E[U|prefer] + p(disprefer|approve) * E[U|disprefer]).
inline double defer_by_bayes(double p_prefer, double good, double bad, double eps) {
    const double p_approve = (1.0 - p_prefer) * eps + p_prefer * (1.0 - eps);
    if (p_approve <= 0.0) return 0.0;
    const double prefer_given_approve = p_prefer * (1.0 - eps) / p_approve;
    return p_approve * (prefer_given_approve * good + (1.0 - prefer_given_approve) * bad);
}

/// Plain bisection for the smallest eps in [0,1] with f(eps) <= 0; f positive before it.
template <class F>
double bisect(F f, double lo = 0.0, double hi = 1.0) {
    if (f(lo) <= 0.0) return lo;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 0.0 ? lo : hi) = mid;
    }
    return hi;
}

} // namespace oracle
