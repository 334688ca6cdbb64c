#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace finsler {

enum class ErrorCode {
  ZeroDirection,
  InfeasibleInvariants,
  OutOfDomain,
  OrderUnsupported,
  SingularMetric,
  DegenerateSigma1,
  RiemannianPoint,
  NotSphericallySymmetric,
  RankDeficientFrame,
  DomainExit,
  ConfigError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroDirection: return "ZeroDirection";
    case ErrorCode::InfeasibleInvariants: return "InfeasibleInvariants";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::OrderUnsupported: return "OrderUnsupported";
    case ErrorCode::SingularMetric: return "SingularMetric";
    case ErrorCode::DegenerateSigma1: return "DegenerateSigma1";
    case ErrorCode::RiemannianPoint: return "RiemannianPoint";
    case ErrorCode::NotSphericallySymmetric: return "NotSphericallySymmetric";
    case ErrorCode::RankDeficientFrame: return "RankDeficientFrame";
    case ErrorCode::DomainExit: return "DomainExit";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace finsler
