#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dgsp {

/// Failure class, used by the CLI to pick an exit code: invalid input
/// (bad files, bad dimensions, bad flags) exits 1, numerical failure
/// (solver did not converge, singular system, ...) exits 2.
enum class ErrorCategory { InvalidInput, Numerical };

class Error : public std::runtime_error {
public:
  Error(ErrorCategory cat, const std::string& what)
      : std::runtime_error(what), cat_(cat) {}
  ErrorCategory category() const { return cat_; }

private:
  ErrorCategory cat_;
};

#define DGSP_ERROR(Name, Cat)                              \
  struct Name : Error {                                    \
    explicit Name(const std::string& w)                    \
        : Error(ErrorCategory::Cat, std::string(#Name ": ") + w) {} \
  }

// graph_core
DGSP_ERROR(DuplicatePoints, InvalidInput);
DGSP_ERROR(SizeOverflow, InvalidInput);
DGSP_ERROR(ZeroDegreeVertex, InvalidInput);
DGSP_ERROR(NotSymmetric, InvalidInput);
DGSP_ERROR(IndexOutOfRange, InvalidInput);

// distrib
DGSP_ERROR(TooFewSamples, InvalidInput);
DGSP_ERROR(InvalidDistribution, InvalidInput);

// wasserstein
DGSP_ERROR(NotPSD, Numerical);
DGSP_ERROR(SupportTooLarge, InvalidInput);

// sags / operators
DGSP_ERROR(DimensionMismatch, InvalidInput);
DGSP_ERROR(FilterEvaluationFailed, Numerical);
DGSP_ERROR(NotConstantSags, InvalidInput);

// sampling_recovery
DGSP_ERROR(RankDeficient, Numerical);
DGSP_ERROR(NoMatch, Numerical);

// pipelines
DGSP_ERROR(SingularNormalEquations, Numerical);
DGSP_ERROR(EmptyClass, InvalidInput);

// cli
DGSP_ERROR(UnknownCommand, InvalidInput);
DGSP_ERROR(MissingSeed, InvalidInput);
DGSP_ERROR(MalformedInput, InvalidInput);

#undef DGSP_ERROR

/// Iterative solver gave up; carries the last residual (marginal violation
/// for transport, loss for filter learning).
struct NotConverged : Error {
  NotConverged(const std::string& w, double residual_)
      : Error(ErrorCategory::Numerical,
              "NotConverged: " + w + " (residual " + std::to_string(residual_) + ")"),
        residual(residual_) {}
  double residual;
};

/// Subspace identification matched more than one candidate.
struct Ambiguous : Error {
  Ambiguous(const std::string& w, std::vector<int> passing_)
      : Error(ErrorCategory::Numerical, "Ambiguous: " + w), passing(std::move(passing_)) {}
  std::vector<int> passing;
};

}  // namespace dgsp
