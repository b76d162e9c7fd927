#pragma once

#include <stdexcept>

namespace offswitch {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value violates its type invariants (bad probability vector, lo >= hi, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Vector lengths disagree with the state or signal space.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// Conditional expectation requested on an event of probability zero.
class ConditioningOnNull : public Error {
public:
    using Error::Error;
};

/// Conditionalization on a signal whose marginal probability is zero.
class ZeroMarginal : public Error {
public:
    using Error::Error;
};

/// A decision rule or updater lacks the data it needs (risk function, credal set, posterior table).
class MissingRuleData : public Error {
public:
    using Error::Error;
};

/// Counterexample search requested for a rule that provably has non-negative value of information.
class RuleCannotBeAverse : public Error {
public:
    using Error::Error;
};

} // namespace offswitch
