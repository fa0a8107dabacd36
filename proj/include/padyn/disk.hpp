#pragma once

#include <optional>
#include <string>

#include "padyn/rational_map.hpp"

namespace padyn {

/// Disk of radius p^-t around center; a C_p disk, whose points in L are what the library enumerates.
struct Disk {
  PadicNumber center;
  Q t;
  bool closed = true;

  bool contains(const PadicNumber& z) const;
  /// The same set of L-points as a closed disk with radius in the value group.
  Disk closed_in_L() const;
  std::string str() const;
};

enum class DiskRelation { Disjoint, FirstInsideSecond, SecondInsideFirst, Equal };
DiskRelation disk_relation(const Disk& a, const Disk& b);

struct Annulus {
  PadicNumber center;
  Q t_inner;  // inner radius p^-t_inner
  Q t_outer;  // outer radius p^-t_outer, t_outer < t_inner
  Q modulus() const { return t_inner - t_outer; }
};

struct DiskImage {
  Disk image;         // radius = sup |phi(z) - phi(c)| over the L-points of D
  int degree = 0;     // Weierstrass degree
  Q cp_t;             // radius exponent of phi(D) as a C_p disk
};

DiskImage disk_image(const RationalMap& phi, const Disk& D);
/// C_p image only: image.t = cp_t, no L-realized radius. Cheap.
DiskImage disk_image_cp(const RationalMap& phi, const Disk& D);

struct InjectivityResult {
  bool injective = false;
  std::optional<Disk> witness;
};
InjectivityResult injectivity_check(const RationalMap& phi, const Disk& D1);

PPow derivative_via_diam(const RationalMap& phi, const Disk& D, const PadicNumber& x);

struct AnnulusImage {
  Annulus image;
  int degree = 0;
};
AnnulusImage annulus_image(const RationalMap& phi, const Annulus& A);

PPow derivative_lower_bound(const RationalMap& phi, const Disk& D, const PadicNumber& x);

}  // namespace padyn
