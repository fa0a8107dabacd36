#include "padyn/errors.hpp"

namespace padyn {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::NonPrime: return "NonPrime";
    case ErrorKind::ReducibleDefiningPolynomial: return "ReducibleDefiningPolynomial";
    case ErrorKind::UnsupportedDefiningPolynomial: return "UnsupportedDefiningPolynomial";
    case ErrorKind::PrecisionTooSmall: return "PrecisionTooSmall";
    case ErrorKind::DivisionByIndistinguishableZero: return "DivisionByIndistinguishableZero";
    case ErrorKind::FieldMismatch: return "FieldMismatch";
    case ErrorKind::HenselConditionFails: return "HenselConditionFails";
    case ErrorKind::RadiusNotInValueGroup: return "RadiusNotInValueGroup";
    case ErrorKind::IndeterminateAtPrecision: return "IndeterminateAtPrecision";
    case ErrorKind::PoleAtPoint: return "PoleAtPoint";
    case ErrorKind::PoleAtCenter: return "PoleAtCenter";
    case ErrorKind::ResidueSearchDepthExceeded: return "ResidueSearchDepthExceeded";
    case ErrorKind::OrbitUnresolved: return "OrbitUnresolved";
    case ErrorKind::PoleInDisk: return "PoleInDisk";
    case ErrorKind::ImageContainsInfinity: return "ImageContainsInfinity";
    case ErrorKind::NotCertifiedInjective: return "NotCertifiedInjective";
    case ErrorKind::UnequalWeierstrassDegrees: return "UnequalWeierstrassDegrees";
    case ErrorKind::PoleInAnnulus: return "PoleInAnnulus";
    case ErrorKind::CriticalPointInDisk: return "CriticalPointInDisk";
    case ErrorKind::NoSeedFound: return "NoSeedFound";
    case ErrorKind::PreimageEscapesL: return "PreimageEscapesL";
    case ErrorKind::UnresolvedBackwardOrbit: return "UnresolvedBackwardOrbit";
    case ErrorKind::NonRepellingLandingCycle: return "NonRepellingLandingCycle";
    case ErrorKind::CannotSeparateDisks: return "CannotSeparateDisks";
    case ErrorKind::ExpansionViolated: return "ExpansionViolated";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::OutsideDomain: return "OutsideDomain";
    case ErrorKind::SeriesDivergence: return "SeriesDivergence";
    case ErrorKind::BasePointPostcritical: return "BasePointPostcritical";
    case ErrorKind::FiberDeficient: return "FiberDeficient";
    case ErrorKind::DepthExceeded: return "DepthExceeded";
    case ErrorKind::SemiconjugacyViolated: return "SemiconjugacyViolated";
    case ErrorKind::PointNotCovered: return "PointNotCovered";
    case ErrorKind::OrbitLeavesCoveredRegion: return "OrbitLeavesCoveredRegion";
    case ErrorKind::NonSummableCorrelations: return "NonSummableCorrelations";
    case ErrorKind::PowerIterationStall: return "PowerIterationStall";
    case ErrorKind::EventNeverObserved: return "EventNeverObserved";
    case ErrorKind::ConfigParse: return "ConfigParse";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace padyn
