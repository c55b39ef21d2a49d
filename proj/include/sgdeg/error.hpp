#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sgdeg {

enum class Errc {
  DimensionMismatch,
  AsymmetricWeights,
  NonpositiveMeasure,
  Disconnected,
  SelfLoop,
  NoEdges,
  NonFinite,
  Overflow,
  SingularJacobian,
  NoConvergence,
  Diverged,
  NotSubsolution,
  NotSupersolution,
  BoxEmpty,
  PreconditionFailed,
  NotSubsolutionAfterAll,
  BranchLost,
  NotTwoVertex,
  BothZero,
  ZeroH,
  RadiusUnstable,
  EmptyV0,
  SingularSystem,
  SingleVertex,
  ParseError,
  UnknownExample,
};

inline constexpr std::string_view to_string(Errc e) {
  switch (e) {
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::AsymmetricWeights: return "AsymmetricWeights";
    case Errc::NonpositiveMeasure: return "NonpositiveMeasure";
    case Errc::Disconnected: return "Disconnected";
    case Errc::SelfLoop: return "SelfLoop";
    case Errc::NoEdges: return "NoEdges";
    case Errc::NonFinite: return "NonFinite";
    case Errc::Overflow: return "Overflow";
    case Errc::SingularJacobian: return "SingularJacobian";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::Diverged: return "Diverged";
    case Errc::NotSubsolution: return "NotSubsolution";
    case Errc::NotSupersolution: return "NotSupersolution";
    case Errc::BoxEmpty: return "BoxEmpty";
    case Errc::PreconditionFailed: return "PreconditionFailed";
    case Errc::NotSubsolutionAfterAll: return "NotSubsolutionAfterAll";
    case Errc::BranchLost: return "BranchLost";
    case Errc::NotTwoVertex: return "NotTwoVertex";
    case Errc::BothZero: return "BothZero";
    case Errc::ZeroH: return "ZeroH";
    case Errc::RadiusUnstable: return "RadiusUnstable";
    case Errc::EmptyV0: return "EmptyV0";
    case Errc::SingularSystem: return "SingularSystem";
    case Errc::SingleVertex: return "SingleVertex";
    case Errc::ParseError: return "ParseError";
    case Errc::UnknownExample: return "UnknownExample";
  }
  return "Unknown";
}

/// Every failure in the library is reported as an Error carrying a code.
/// The message names the offending vertex or edge where one exists.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace sgdeg
