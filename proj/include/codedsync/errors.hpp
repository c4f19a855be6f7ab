#pragma once

#include <stdexcept>
#include <string>

namespace codedsync {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// field / arithmetic
struct NonPrimeModulus : Error { using Error::Error; };
struct ZeroInverse : Error { using Error::Error; };
struct MixedFields : Error { using Error::Error; };

// matrices
struct DuplicateNodes : Error { using Error::Error; };
struct FieldTooSmall : Error { using Error::Error; };
struct Singular : Error { using Error::Error; };
struct RankDeficient : Error { using Error::Error; };
struct IndexOutOfRange : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };

// codes
struct LengthMismatch : Error { using Error::Error; };
struct BadSubsetSize : Error { using Error::Error; };

// synchronization protocols
struct NonUniformEdits : Error { using Error::Error; };
struct NoPadSlack : Error { using Error::Error; };
struct MissingValue : Error { using Error::Error; };
struct InfeasibleBudget : Error { using Error::Error; };

// syndrome recovery
struct NoCandidate : Error { using Error::Error; };
struct AmbiguousRecovery : Error { using Error::Error; };
struct TooManyAffected : Error { using Error::Error; };

// analysis
struct TooLarge : Error { using Error::Error; };
struct NonConvergence : Error { using Error::Error; };

// command line front end
struct DemoMismatch : Error { using Error::Error; };

}  // namespace codedsync
