#pragma once

#include <stdexcept>
#include <string>

namespace morsehom {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// field
struct SingularPointError : Error { using Error::Error; };
struct BadCutoffError : Error { using Error::Error; };
struct BadParameterError : Error { using Error::Error; };

// critpoints
struct NotCriticalError : Error { using Error::Error; };
struct DegeneratePointError : Error { using Error::Error; };

// flow
struct StepUnderflowError : Error { using Error::Error; };

// moduli / counting
struct SaddleSaddleConnectionError : Error { using Error::Error; };
struct LocalityViolationError : Error { using Error::Error; };
struct UndecidedBranchError : Error { using Error::Error; };

// complex
struct DegenerateGeneratorError : Error { using Error::Error; };
struct NotAComplexError : Error { using Error::Error; };

// continuation
struct TransversalityFailureError : Error { using Error::Error; };
struct ShapeMismatchError : Error { using Error::Error; };

// lagrange
struct RootCountMismatchError : Error { using Error::Error; };
struct CensusMismatchError : Error { using Error::Error; };
struct IsolationLostError : Error { using Error::Error; };

// cli / orchestration
struct ConfigError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };
struct RetryExhaustedError : Error { using Error::Error; };

}  // namespace morsehom
