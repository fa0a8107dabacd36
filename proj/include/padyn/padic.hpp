#pragma once

#include <gmpxx.h>

#include <climits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "padyn/errors.hpp"

namespace padyn {

using Z = mpz_class;
using Q = mpq_class;

long floor_div(long a, long b);
long ceil_div(long a, long b);
Q q_floor_to(const Q& x, long den);  // largest k/den <= x
Q q_ceil_to(const Q& x, long den);   // smallest k/den >= x
std::string q_str(const Q& x);
Q q_parse(const std::string& s);      // "a/b" or "a"

/// A value p^x with x rational, or the two extremes 0 and +inf.
struct PPow {
  enum class Kind : unsigned char { Zero, Finite, Inf };
  Kind kind = Kind::Finite;
  Q x = 0;

  static PPow zero() { return {Kind::Zero, 0}; }
  static PPow inf() { return {Kind::Inf, 0}; }
  static PPow one() { return {Kind::Finite, 0}; }
  static PPow of(const Q& x) { return {Kind::Finite, x}; }

  bool is_zero() const { return kind == Kind::Zero; }
  bool is_inf() const { return kind == Kind::Inf; }
  bool finite() const { return kind == Kind::Finite; }

  PPow operator*(const PPow& o) const;
  PPow operator/(const PPow& o) const;
  PPow pow(const Q& e) const;
  bool operator==(const PPow& o) const;
  bool operator!=(const PPow& o) const { return !(*this == o); }
  bool operator<(const PPow& o) const;
  bool operator<=(const PPow& o) const { return !(o < *this); }
  bool operator>(const PPow& o) const { return o < *this; }
  bool operator>=(const PPow& o) const { return !(*this < o); }

  long double value(long p) const;
  std::string str(long p) const;  // "p^(a/b)", "0" or "inf"
};

PPow parse_ppow(const std::string& s, long p);

struct Field {
  long p = 2;
  Z P = 2;
  int e = 1;
  int f = 1;
  int n = 1;
  long prec = 64;
  std::vector<Z> h;  // monic unramified polynomial in w, low to high (f > 1)
  std::vector<Z> g;  // monic Eisenstein polynomial in pi over Z, low to high (e > 1)
  std::vector<Q> defining;
  std::vector<Q> unram_spec;
  std::vector<Q> eis_spec;
  std::vector<Z> powers;  // p^0 .. p^(powers.size()-1)

  const Z& pw(long k) const;
  Z A() const;  // residue field cardinality p^f
  PPow uniformizer_abs() const { return PPow::of(Q(-1, e)); }
  std::string describe() const;
};
using FieldPtr = std::shared_ptr<const Field>;

/// Q_p when poly is empty; otherwise Q_p[x]/(poly), poly monic low-to-high.
FieldPtr field_create(long p, const std::vector<Q>& poly, long precision);
/// Unramified extension by `unramified` followed by an Eisenstein extension by `eisenstein`.
FieldPtr field_create_tower(long p, const std::vector<Q>& unramified, const std::vector<Q>& eisenstein,
                            long precision);
bool is_prime(long p);

/// Element p^shift * sum c[i + f*j] w^i pi^j of L, known modulo p^abs O_L.
class PadicNumber {
 public:
  static constexpr long kExact = LONG_MAX / 4;

  PadicNumber() = default;
  static PadicNumber zero(const FieldPtr& F);
  static PadicNumber from_int(const FieldPtr& F, long v);
  static PadicNumber from_rational(const FieldPtr& F, const Q& q);
  static PadicNumber from_coeffs(const FieldPtr& F, long shift, std::vector<Z> c, long abs);
  static PadicNumber uniformizer(const FieldPtr& F);
  static PadicNumber generator(const FieldPtr& F);
  static PadicNumber zero_at(const FieldPtr& F, long abs);

  const FieldPtr& field() const { return F_; }
  bool valid() const { return F_ != nullptr; }
  bool is_zero() const { return zero_; }
  bool is_exact_zero() const { return zero_ && abs_ >= kExact; }
  long abs_prec() const { return abs_; }
  long shift() const { return s_; }
  const std::vector<Z>& coeffs() const { return c_; }

  /// Valuation in units of 1/e; for zero-at-precision the known lower bound abs*e.
  long vpi() const { return vpi_; }
  Q valuation() const;
  PPow abs_val() const;
  Q norm_valuation() const;  // v_p(N_{L/Q_p}(x)) / [L:Q_p]

  PadicNumber operator+(const PadicNumber& o) const;
  PadicNumber operator-(const PadicNumber& o) const;
  PadicNumber operator*(const PadicNumber& o) const;
  PadicNumber operator/(const PadicNumber& o) const;
  PadicNumber operator-() const;
  PadicNumber inverse() const;
  PadicNumber pow(long k) const;
  PadicNumber mul_pi_pow(long k) const;  // x * pi^k, exact
  PadicNumber with_abs(long abs) const;  // lower the known precision

  /// Equal at the joint known precision.
  bool equals(const PadicNumber& o) const { return (*this - o).is_zero(); }
  /// Canonical representative of x + pi^n O_L; digits below valuation n/e kept.
  PadicNumber truncate_pi(long n) const;
  /// Residue class index in [0, p^f) of a unit or integral element (0 if valuation > 0).
  long residue_index() const;
  /// Total order used only for deterministic sorting.
  static bool canonical_less(const PadicNumber& a, const PadicNumber& b);
  std::string str() const;
  std::optional<Q> to_rational() const;  // only for Q_p: exact rational approximant u*p^s

 private:
  void normalize();
  FieldPtr F_;
  long s_ = 0;
  std::vector<Z> c_;
  long abs_ = kExact;
  bool zero_ = true;
  long vpi_ = 0;
};

enum class ArithOp { Add, Sub, Mul, Div };
PadicNumber arith(const PadicNumber& a, const PadicNumber& b, ArithOp op);

/// Residue field representatives sum a_i w^i, a_i in [0,p), ordered by index.
std::vector<PadicNumber> residue_representatives(const FieldPtr& F);

using Poly = std::vector<PadicNumber>;  // low to high

PadicNumber poly_eval(const Poly& P, const PadicNumber& z);
Poly poly_derivative(const Poly& P);
Poly poly_from_rationals(const FieldPtr& F, const std::vector<Q>& c);

/// Newton iteration from residue_root under the Hensel condition |P(r)| < |P'(r)|^2.
PadicNumber hensel_lift(const Poly& P, const PadicNumber& residue_root);

struct HaarMeasure {
  Q disk;
  Q sphere;
};
/// nu_L of the closed disk and sphere of radius |pi_L|^n (n in pi-units, must be integral).
HaarMeasure haar_disk_measure(const Field& F, const Q& n);

}  // namespace padyn
