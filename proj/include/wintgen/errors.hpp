#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wintgen {

enum class ErrorKind {
  InvalidInput,
  DimensionError,
  NotWintgenIdeal,
  FrameSearchFailure,
  RankDeficient,
  NoPrincipalNormal,
  NotRankTwo,
  NotElliptic,
  DimensionDrop,
  JetOrderExceeded,
  AtCenter,
  NearPole,
  GradientTooLarge,
  Irregular,
  IllConditioned,
  MinimalPoint,
  WrongDimension,
  DimensionTooSmall,
  NotAdapted,
  GradientBoundViolated,
  DegenerateEllipse,
  NotGeneric,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::DimensionError: return "DimensionError";
    case ErrorKind::NotWintgenIdeal: return "NotWintgenIdeal";
    case ErrorKind::FrameSearchFailure: return "FrameSearchFailure";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::NoPrincipalNormal: return "NoPrincipalNormal";
    case ErrorKind::NotRankTwo: return "NotRankTwo";
    case ErrorKind::NotElliptic: return "NotElliptic";
    case ErrorKind::DimensionDrop: return "DimensionDrop";
    case ErrorKind::JetOrderExceeded: return "JetOrderExceeded";
    case ErrorKind::AtCenter: return "AtCenter";
    case ErrorKind::NearPole: return "NearPole";
    case ErrorKind::GradientTooLarge: return "GradientTooLarge";
    case ErrorKind::Irregular: return "Irregular";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::MinimalPoint: return "MinimalPoint";
    case ErrorKind::WrongDimension: return "WrongDimension";
    case ErrorKind::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorKind::NotAdapted: return "NotAdapted";
    case ErrorKind::GradientBoundViolated: return "GradientBoundViolated";
    case ErrorKind::DegenerateEllipse: return "DegenerateEllipse";
    case ErrorKind::NotGeneric: return "NotGeneric";
  }
  return "Unknown";
}

/// Every recoverable failure in the library carries one of the kinds above.
class GeometryError : public std::runtime_error {
 public:
  GeometryError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), detail_(what) {}

  ErrorKind kind() const noexcept { return kind_; }
  // message without the kind prefix
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw GeometryError(kind, what);
}

}  // namespace wintgen
