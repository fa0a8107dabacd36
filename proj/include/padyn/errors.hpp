#pragma once

#include <stdexcept>
#include <string>

namespace padyn {

enum class ErrorKind {
  NonPrime,
  ReducibleDefiningPolynomial,
  UnsupportedDefiningPolynomial,
  PrecisionTooSmall,
  DivisionByIndistinguishableZero,
  FieldMismatch,
  HenselConditionFails,
  RadiusNotInValueGroup,
  IndeterminateAtPrecision,
  PoleAtPoint,
  PoleAtCenter,
  ResidueSearchDepthExceeded,
  OrbitUnresolved,
  PoleInDisk,
  ImageContainsInfinity,
  NotCertifiedInjective,
  UnequalWeierstrassDegrees,
  PoleInAnnulus,
  CriticalPointInDisk,
  NoSeedFound,
  PreimageEscapesL,
  UnresolvedBackwardOrbit,
  NonRepellingLandingCycle,
  CannotSeparateDisks,
  ExpansionViolated,
  BudgetExceeded,
  OutsideDomain,
  SeriesDivergence,
  BasePointPostcritical,
  FiberDeficient,
  DepthExceeded,
  SemiconjugacyViolated,
  PointNotCovered,
  OrbitLeavesCoveredRegion,
  NonSummableCorrelations,
  PowerIterationStall,
  EventNeverObserved,
  ConfigParse,
  InvalidArgument,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace padyn
