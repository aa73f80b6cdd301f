#ifndef INVOPT_ERROR_H_
#define INVOPT_ERROR_H_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace invopt {

enum class ErrorCode {
  kSchema,
  kUnsupportedForm,
  kObservationInfeasible,
  kObservationFractional,
  kNumericalFailure,
  kDegenerateBasis,
  kNotExtreme,
  kNotInterior,
  kDegenerateMatrix,
  kSizeLimit,
  kToleranceInfeasible,
  kCertificateMismatch,
  kInvalidShift,
  kNoScale,
  kInvalidCut,
  kBigMTooSmall,
  kMasterInfeasible,
  kInternal,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure the library reports carries one of the codes above. `index`
// names the offending row or column when there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<int> index = std::nullopt)
      : std::runtime_error(message), code_(code), index_(index) {}

  ErrorCode code() const { return code_; }
  std::optional<int> index() const { return index_; }

 private:
  ErrorCode code_;
  std::optional<int> index_;
};

}  // namespace invopt

#endif  // INVOPT_ERROR_H_
