#pragma once

#include <stdexcept>
#include <string>

namespace stochmatch {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error { using Error::Error; };
class ConfigError : public Error { using Error::Error; };
class IoError : public Error { using Error::Error; };

/// Exact solver asked to handle more vertices (or edges) than its cap.
class CapExceeded : public Error { using Error::Error; };

/// GreedyAlgorithm ran more iterations than 1/eps allows.
class IterationOverflow : public Error { using Error::Error; };

/// A parameter formula produced a value above its hard cap.
class ParameterOverflow : public Error { using Error::Error; };

/// Estimated Pr[v not in Z] fell below eps where h needs it as a divisor.
class DegenerateDenominator : public Error { using Error::Error; };

class InvalidWalk : public Error { using Error::Error; };
class RecursionBudgetExceeded : public Error { using Error::Error; };
class NoEligiblePairs : public Error { using Error::Error; };

/// A structural invariant failed at runtime.
class InvariantViolation : public Error { using Error::Error; };

}  // namespace stochmatch
