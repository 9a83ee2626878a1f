#pragma once

#include <stdexcept>
#include <string>

namespace pseudocurve {

// Every failure carries a short kind name; the CLI maps kinds to exit codes.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what, bool usage = false)
      : std::runtime_error(what), kind_(std::move(kind)), usage_(usage) {}
  const std::string& kind() const { return kind_; }
  // Usage errors are malformed input (exit 2); the rest are computation failures (exit 1).
  bool usage() const { return usage_; }

 private:
  std::string kind_;
  bool usage_;
};

#define PSEUDOCURVE_ERROR(Name, is_usage)                                   \
  struct Name : Error {                                                     \
    explicit Name(const std::string& what) : Error(#Name, what, is_usage) {} \
  };

PSEUDOCURVE_ERROR(ValuationError, false)
PSEUDOCURVE_ERROR(UnitError, false)
PSEUDOCURVE_ERROR(ZeroGermError, false)
PSEUDOCURVE_ERROR(TruncationError, false)
PSEUDOCURVE_ERROR(ParityError, false)
PSEUDOCURVE_ERROR(OrthogonalityError, true)
PSEUDOCURVE_ERROR(LengthError, true)
PSEUDOCURVE_ERROR(EqualError, false)
PSEUDOCURVE_ERROR(GridTooCoarse, true)
PSEUDOCURVE_ERROR(SingularError, false)
PSEUDOCURVE_ERROR(DimensionError, true)
PSEUDOCURVE_ERROR(UnknownName, true)
PSEUDOCURVE_ERROR(DomainError, false)
PSEUDOCURVE_ERROR(DivergenceError, false)
PSEUDOCURVE_ERROR(ContractionError, false)
PSEUDOCURVE_ERROR(TransversalityError, false)
PSEUDOCURVE_ERROR(PoleError, false)
PSEUDOCURVE_ERROR(PrecisionError, false)
PSEUDOCURVE_ERROR(ExceptionalRadiusError, false)
PSEUDOCURVE_ERROR(DisjointnessError, false)
PSEUDOCURVE_ERROR(UnderdeterminedError, true)
PSEUDOCURVE_ERROR(UnknownFixture, true)
PSEUDOCURVE_ERROR(ParseError, true)

#undef PSEUDOCURVE_ERROR

}  // namespace pseudocurve
