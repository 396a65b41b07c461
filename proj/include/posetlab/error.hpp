#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace posetlab {

enum class Errc {
  NotGraded,
  NoBottom,
  RankedTooHigh,
  UnreachableElement,
  UnknownElement,
  NotComparable,
  NoUniqueTop,
  NotALattice,
  NotExpressible,
  NotHomogeneous,
  NotEulerian,
  InvalidChain,
  ElementOutOfRange,
  SimplexNotFound,
  NotPure,
  BoundaryNotIdeal,
  BoundaryWrongRank,
  NotNearGorenstein,
  RankMismatch,
  SourceNotGorenstein,
  TargetNotGorenstein,
  NotGorensteinStar,
  NotASubdivision,
  DecompositionMismatch,
  BadSupport,
  NotSimplicial,
  NotCohenMacaulay,
  BadBase,
  SurjectivityFailed,
  ParseError,
  InvalidSheaf,
};

constexpr std::string_view errc_name(Errc e) {
  switch (e) {
    case Errc::NotGraded: return "NotGraded";
    case Errc::NoBottom: return "NoBottom";
    case Errc::RankedTooHigh: return "RankedTooHigh";
    case Errc::UnreachableElement: return "UnreachableElement";
    case Errc::UnknownElement: return "UnknownElement";
    case Errc::NotComparable: return "NotComparable";
    case Errc::NoUniqueTop: return "NoUniqueTop";
    case Errc::NotALattice: return "NotALattice";
    case Errc::NotExpressible: return "NotExpressible";
    case Errc::NotHomogeneous: return "NotHomogeneous";
    case Errc::NotEulerian: return "NotEulerian";
    case Errc::InvalidChain: return "InvalidChain";
    case Errc::ElementOutOfRange: return "ElementOutOfRange";
    case Errc::SimplexNotFound: return "SimplexNotFound";
    case Errc::NotPure: return "NotPure";
    case Errc::BoundaryNotIdeal: return "BoundaryNotIdeal";
    case Errc::BoundaryWrongRank: return "BoundaryWrongRank";
    case Errc::NotNearGorenstein: return "NotNearGorenstein";
    case Errc::RankMismatch: return "RankMismatch";
    case Errc::SourceNotGorenstein: return "SourceNotGorenstein";
    case Errc::TargetNotGorenstein: return "TargetNotGorenstein";
    case Errc::NotGorensteinStar: return "NotGorensteinStar";
    case Errc::NotASubdivision: return "NotASubdivision";
    case Errc::DecompositionMismatch: return "DecompositionMismatch";
    case Errc::BadSupport: return "BadSupport";
    case Errc::NotSimplicial: return "NotSimplicial";
    case Errc::NotCohenMacaulay: return "NotCohenMacaulay";
    case Errc::BadBase: return "BadBase";
    case Errc::SurjectivityFailed: return "SurjectivityFailed";
    case Errc::ParseError: return "ParseError";
    case Errc::InvalidSheaf: return "InvalidSheaf";
  }
  return "Unknown";
}

/// Every failure in the library is reported as an Error carrying a code.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace posetlab
