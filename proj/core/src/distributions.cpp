#include "offswitch/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "offswitch/decision.hpp"
#include "offswitch/error.hpp"
#include "offswitch/random.hpp"

namespace offswitch {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

} // namespace

UtilityDistribution UtilityDistribution::discrete(std::vector<Atom> atoms) {
    if (atoms.empty()) throw InvalidArgument("discrete distribution needs at least one atom");
    double total = 0.0;
    for (const auto& a : atoms) {
        if (!std::isfinite(a.value)) throw InvalidArgument("atom value must be finite");
        if (!(a.weight > 0.0) || !std::isfinite(a.weight))
            throw InvalidArgument("atom weight must be strictly positive, got " + std::to_string(a.weight));
        total += a.weight;
    }
    if (std::abs(total - 1.0) > kProbabilityTolerance)
        throw InvalidArgument("atom weights must sum to 1, got " + std::to_string(total));

    std::stable_sort(atoms.begin(), atoms.end(),
                     [](const Atom& a, const Atom& b) { return a.value < b.value; });
    std::vector<Atom> merged;
    merged.reserve(atoms.size());
    for (const auto& a : atoms) {
        if (!merged.empty() && merged.back().value == a.value)
            merged.back().weight += a.weight;
        else
            merged.push_back(a);
    }
    for (auto& a : merged) a.weight /= total;
    return UtilityDistribution(Discrete{std::move(merged)});
}

UtilityDistribution UtilityDistribution::uniform(double lo, double hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
        throw InvalidArgument("uniform distribution needs finite lo < hi");
    return UtilityDistribution(Uniform{lo, hi});
}

UtilityDistribution UtilityDistribution::point(double value) {
    return discrete({{value, 1.0}});
}

std::span<const Atom> UtilityDistribution::atoms() const noexcept {
    if (const auto* d = std::get_if<Discrete>(&rep_)) return d->atoms;
    return {};
}

bool operator==(const UtilityDistribution::Uniform& a, const UtilityDistribution::Uniform& b) {
    return a.lo == b.lo && a.hi == b.hi;
}

bool operator==(const UtilityDistribution& a, const UtilityDistribution& b) {
    if (a.rep_.index() != b.rep_.index()) return false;
    if (a.is_uniform()) return *a.as_uniform() == *b.as_uniform();
    return std::ranges::equal(a.atoms(), b.atoms());
}

double mean(const UtilityDistribution& d) {
    return std::visit(overloaded{
                          [](const UtilityDistribution::Uniform& u) { return 0.5 * (u.lo + u.hi); },
                          [](const UtilityDistribution::Discrete& x) {
                              double m = 0.0;
                              for (const auto& a : x.atoms) m += a.weight * a.value;
                              return m;
                          },
                      },
                      d.representation());
}

double variance(const UtilityDistribution& d) {
    return std::visit(overloaded{
                          [](const UtilityDistribution::Uniform& u) {
                              const double w = u.hi - u.lo;
                              return w * w / 12.0;
                          },
                          [&](const UtilityDistribution::Discrete& x) {
                              const double m = mean(d);
                              double v = 0.0;
                              for (const auto& a : x.atoms) v += a.weight * (a.value - m) * (a.value - m);
                              return v;
                          },
                      },
                      d.representation());
}

double prob_ge(const UtilityDistribution& d, double t) {
    return std::visit(overloaded{
                          [t](const UtilityDistribution::Uniform& u) {
                              return clamp01((u.hi - t) / (u.hi - u.lo));
                          },
                          [t](const UtilityDistribution::Discrete& x) {
                              double p = 0.0;
                              for (const auto& a : x.atoms)
                                  if (a.value >= t) p += a.weight;
                              return clamp01(p);
                          },
                      },
                      d.representation());
}

double prob_gt(const UtilityDistribution& d, double t) {
    if (d.is_uniform()) return prob_ge(d, t);
    double p = 0.0;
    for (const auto& a : d.atoms())
        if (a.value > t) p += a.weight;
    return clamp01(p);
}

double prob_lt(const UtilityDistribution& d, double t) {
    if (const auto* u = d.as_uniform()) return clamp01((t - u->lo) / (u->hi - u->lo));
    double p = 0.0;
    for (const auto& a : d.atoms())
        if (a.value < t) p += a.weight;
    return clamp01(p);
}

double cond_mean_ge(const UtilityDistribution& d, double t) {
    if (const auto* u = d.as_uniform()) {
        if (t >= u->hi) throw ConditioningOnNull("P(U >= t) = 0 for t = " + std::to_string(t));
        return 0.5 * (std::max(u->lo, t) + u->hi);
    }
    double mass = 0.0;
    double moment = 0.0;
    for (const auto& a : d.atoms()) {
        if (a.value >= t) {
            mass += a.weight;
            moment += a.weight * a.value;
        }
    }
    if (mass <= 0.0) throw ConditioningOnNull("P(U >= t) = 0 for t = " + std::to_string(t));
    return moment / mass;
}

double cond_mean_lt(const UtilityDistribution& d, double t) {
    if (const auto* u = d.as_uniform()) {
        if (t <= u->lo) throw ConditioningOnNull("P(U < t) = 0 for t = " + std::to_string(t));
        return 0.5 * (u->lo + std::min(u->hi, t));
    }
    double mass = 0.0;
    double moment = 0.0;
    for (const auto& a : d.atoms()) {
        if (a.value < t) {
            mass += a.weight;
            moment += a.weight * a.value;
        }
    }
    if (mass <= 0.0) throw ConditioningOnNull("P(U < t) = 0 for t = " + std::to_string(t));
    return moment / mass;
}

double expected_positive_part(const UtilityDistribution& d) {
    const double p = prob_ge(d, 0.0);
    if (p <= 0.0) return 0.0;
    return p * cond_mean_ge(d, 0.0);
}

double sample(const UtilityDistribution& d, RandomStream& stream) {
    if (const auto* u = d.as_uniform()) return stream.uniform(u->lo, u->hi);
    const auto atoms = d.atoms();
    const double x = stream.uniform();
    double cumulative = 0.0;
    for (const auto& a : atoms) {
        cumulative += a.weight;
        if (x < cumulative) return a.value;
    }
    return atoms.back().value;
}

} // namespace offswitch
