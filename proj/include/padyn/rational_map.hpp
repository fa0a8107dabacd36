#pragma once

#include <optional>
#include <string>
#include <vector>

#include "padyn/padic.hpp"
#include "padyn/poly.hpp"

namespace padyn {

/// A point of P^1(L).
struct Point {
  bool inf = false;
  PadicNumber z;

  static Point infinity() { return {true, {}}; }
  static Point at(const PadicNumber& z) { return {false, z}; }
  std::string str() const { return inf ? "inf" : z.str(); }
  bool same(const Point& o) const { return inf == o.inf && (inf || z.equals(o.z)); }
  /// Equality at precision, counted only when both points are known to at least min_abs p-adic digits.
  /// Exact points closer than p^-prec also count as equal.
  bool same_certain(const Point& o, long min_abs) const {
    if (inf || o.inf) return inf == o.inf;
    if (z.abs_prec() < min_abs || o.z.abs_prec() < min_abs) return false;
    PadicNumber d = z - o.z;
    return d.is_zero() || d.vpi() >= z.field()->prec * z.field()->e;
  }
  bool precise(long min_abs) const { return inf || z.abs_prec() >= min_abs; }
};

/// Absolute precision below which orbit points are no longer compared.
long orbit_precision_floor(const Field& F);

class RationalMap {
 public:
  RationalMap() = default;
  RationalMap(FieldPtr F, Poly num, Poly den);
  static RationalMap from_rationals(const FieldPtr& F, const std::vector<Q>& num, const std::vector<Q>& den);

  const FieldPtr& field() const { return F_; }
  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  int degree() const { return d_; }
  int deg_num() const { return dn_; }
  int deg_den() const { return dd_; }
  bool is_polynomial() const { return dd_ == 0; }
  /// num' den - num den'
  const Poly& wronskian() const { return W_; }

  Point eval(const Point& z) const;
  /// Finite image of a finite non-pole point.
  PadicNumber eval_finite(const PadicNumber& z) const;
  PadicNumber derivative(const PadicNumber& z) const;
  PPow deriv_abs(const PadicNumber& z) const;
  /// |phi'| read in the charts z or 1/z at source and target; valid at poles and at infinity.
  PPow chart_deriv_abs(const Point& z) const;
  /// c_0..c_order of phi(center + t).
  std::vector<PadicNumber> taylor(const PadicNumber& center, int order) const;

  RationalMap compose(const RationalMap& inner) const;  // this o inner
  RationalMap iterate(int m) const;
  std::string str() const;

 private:
  FieldPtr F_;
  Poly num_, den_, W_;
  int d_ = 0, dn_ = 0, dd_ = 0;
};

struct Preimage {
  Point z;
  int multiplicity = 1;
};

/// All solutions of phi(z) = w in P^1(L) with multiplicity.
std::vector<Preimage> preimages(const RationalMap& phi, const Point& w, int depth_cap = 8);

struct CriticalPoint {
  Point z;
  int local_degree = 2;
};

struct CriticalData {
  std::vector<CriticalPoint> points;
  int found = 0;        // multiplicity found in P^1(L)
  int expected = 0;     // 2d - 2
  int outside_L = 0;    // remaining multiplicity lying outside L
};

CriticalData critical_points(const RationalMap& phi, int depth_cap = 8);
/// deg_z phi for z in P^1(L).
int local_degree(const RationalMap& phi, const Point& z);

struct CriticalOrbit {
  Point c;
  int local_degree = 2;
  std::vector<Point> orbit;  // phi(c), phi^2(c), ...
  std::optional<int> preperiod;  // index into orbit of the first periodic point
  std::optional<int> period;
  PPow multiplier_abs = PPow::zero();
  bool escaping = false;
  bool resolved() const { return escaping || period.has_value(); }
};

struct PostcriticalData {
  CriticalData crit;
  std::vector<CriticalOrbit> orbits;
  bool all_resolved() const {
    for (auto& o : orbits)
      if (!o.resolved()) return false;
    return true;
  }
};

/// Escape radius exponent: |z| > p^R with R returned certifies the infinity basin (polynomial-like maps).
std::optional<Q> escape_radius(const RationalMap& phi);
bool certified_escaping(const RationalMap& phi, const Point& z);

/// Multiplier |(phi^n)'| along a cycle given by its points.
PPow cycle_multiplier(const RationalMap& phi, const std::vector<Point>& cycle);

PostcriticalData postcritical_set(const RationalMap& phi, int max_steps, bool throw_unresolved = true);

}  // namespace padyn
