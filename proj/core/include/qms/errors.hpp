#pragma once

#include <stdexcept>
#include <string>

namespace qms {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotHermitian : Error { using Error::Error; };
struct ShapeMismatch : Error { using Error::Error; };
struct ConvergenceFailure : Error { using Error::Error; };
struct DegenerateCenter : Error { using Error::Error; };
struct ModelInvalid : Error { using Error::Error; };
struct NotAState : Error { using Error::Error; };
struct NotInvariant : Error { using Error::Error; };
struct NoFaithfulState : Error { using Error::Error; };
struct NonSemisimplePeripheral : Error { using Error::Error; };
struct BlockMismatch : Error { using Error::Error; };
struct CommutationFailure : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct SamplingExhausted : Error { using Error::Error; };

}  // namespace qms
