#pragma once

#include <span>
#include <variant>
#include <vector>

namespace offswitch {

class RandomStream;

struct Atom {
    double value;
    double weight;

    friend bool operator==(const Atom&, const Atom&) = default;
};

/**
 * Prior over the human's utility for a proposed action.
 *
 * Either a finite set of atoms or a continuous uniform interval. Discrete
 * atoms are stored canonically: sorted by value, duplicates merged, weights
 * renormalized.
 */
class UtilityDistribution {
public:
    struct Discrete {
        std::vector<Atom> atoms;
    };
    struct Uniform {
        double lo;
        double hi;
    };

    /// Weights must be strictly positive and sum to 1 within 1e-12; values finite.
    static UtilityDistribution discrete(std::vector<Atom> atoms);
    /// Requires finite lo < hi.
    static UtilityDistribution uniform(double lo, double hi);
    static UtilityDistribution point(double value);

    bool is_uniform() const noexcept { return std::holds_alternative<Uniform>(rep_); }
    bool is_discrete() const noexcept { return std::holds_alternative<Discrete>(rep_); }

    /// Atoms of a discrete distribution; empty for a uniform one.
    std::span<const Atom> atoms() const noexcept;
    const Uniform* as_uniform() const noexcept { return std::get_if<Uniform>(&rep_); }

    const std::variant<Discrete, Uniform>& representation() const noexcept { return rep_; }

    friend bool operator==(const UtilityDistribution& a, const UtilityDistribution& b);

private:
    explicit UtilityDistribution(std::variant<Discrete, Uniform> rep) : rep_(std::move(rep)) {}

    std::variant<Discrete, Uniform> rep_;
};

bool operator==(const UtilityDistribution::Uniform& a, const UtilityDistribution::Uniform& b);

double mean(const UtilityDistribution& d);
double variance(const UtilityDistribution& d);

/// P(U >= t).
double prob_ge(const UtilityDistribution& d, double t);
/// P(U > t).
double prob_gt(const UtilityDistribution& d, double t);
/// P(U < t).
double prob_lt(const UtilityDistribution& d, double t);

/// E[U | U >= t]. Throws ConditioningOnNull when P(U >= t) = 0.
double cond_mean_ge(const UtilityDistribution& d, double t);
/// E[U | U < t]. Throws ConditioningOnNull when P(U < t) = 0.
double cond_mean_lt(const UtilityDistribution& d, double t);

/// E[max(U, 0)]: the value of deferring to a human who approves iff U >= 0.
double expected_positive_part(const UtilityDistribution& d);

double sample(const UtilityDistribution& d, RandomStream& stream);

} // namespace offswitch
