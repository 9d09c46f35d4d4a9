#ifndef SIRWAVE_ERRORS_HPP
#define SIRWAVE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sirwave {

// Base classes map onto the CLI exit codes: infeasible configuration -> 2,
// numerical failure -> 3.
struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ValidationError : InfeasibleError {
    using InfeasibleError::InfeasibleError;
};

struct NoEndemicState : InfeasibleError { using InfeasibleError::InfeasibleError; };
struct NonConvergence : NumericalError { using NumericalError::NumericalError; };
struct PqmVerificationFailed : NumericalError { using NumericalError::NumericalError; };
struct DomainViolation : NumericalError { using NumericalError::NumericalError; };

struct NoPositiveRoot : NumericalError { using NumericalError::NumericalError; };
struct ComplexRoots : NumericalError { using NumericalError::NumericalError; };
struct ContinuationFailed : NumericalError { using NumericalError::NumericalError; };
struct CertificateFailed : NumericalError { using NumericalError::NumericalError; };
struct BoundaryRoot : NumericalError { using NumericalError::NumericalError; };

struct NoCertificate : NumericalError { using NumericalError::NumericalError; };
struct QuadratureStalled : NumericalError { using NumericalError::NumericalError; };
struct GridMismatch : NumericalError { using NumericalError::NumericalError; };
struct FitFailed : NumericalError { using NumericalError::NumericalError; };

struct InfeasibleSolcond : InfeasibleError { using InfeasibleError::InfeasibleError; };
struct BreakNotFound : NumericalError { using NumericalError::NumericalError; };
struct CaseViolation : NumericalError { using NumericalError::NumericalError; };

struct MonotonicityViolation : NumericalError { using NumericalError::NumericalError; };
struct MaxIterExceeded : NumericalError { using NumericalError::NumericalError; };

struct BlowUp : NumericalError { using NumericalError::NumericalError; };
struct HistoryUnderflow : NumericalError { using NumericalError::NumericalError; };
struct NoFront : NumericalError { using NumericalError::NumericalError; };

} // namespace sirwave

#endif
