#include "mldp/error.hpp"

namespace mldp {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::NonPositiveEntry: return "NonPositiveEntry";
    case Errc::AllOnes: return "AllOnes";
    case Errc::NotPairwiseCoprime: return "NotPairwiseCoprime";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::BoxTooLarge: return "BoxTooLarge";
    case Errc::Overflow: return "Overflow";
    case Errc::BiasOutOfRange: return "BiasOutOfRange";
    case Errc::NonFiniteInput: return "NonFiniteInput";
    case Errc::InvalidProfile: return "InvalidProfile";
    case Errc::UnsupportedBias: return "UnsupportedBias";
    case Errc::UnsupportedDimension: return "UnsupportedDimension";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::NonConvergence: return "NonConvergence";
    case Errc::OutOfSpectrumDomain: return "OutOfSpectrumDomain";
    case Errc::MissingSite: return "MissingSite";
    case Errc::SupportTooLarge: return "SupportTooLarge";
    case Errc::InsufficientHits: return "InsufficientHits";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace mldp
