#pragma once

#include <vector>

#include "padyn/padic.hpp"

namespace padyn {

/// Drop leading coefficients that are zero at precision.
Poly poly_trim(Poly P);
int poly_degree(const Poly& P);  // -1 for the zero polynomial

Poly poly_add(const Poly& a, const Poly& b);
Poly poly_sub(const Poly& a, const Poly& b);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_scale(const Poly& a, const PadicNumber& s);

/// Coefficients of P(c + t) in t.
Poly taylor_shift(const Poly& P, const PadicNumber& c);
/// Coefficients of P(c + pi^k t) in t.
Poly taylor_shift_scaled(const Poly& P, const PadicNumber& c, long k);

struct PolyRoot {
  PadicNumber z;
  int multiplicity = 1;
};

/// All roots of P lying in L, with multiplicity (Newton polygon + residue search + Newton).
/// Throws ResidueSearchDepthExceeded when a root cluster cannot be separated within depth_cap levels.
std::vector<PolyRoot> poly_roots(const Poly& P, int depth_cap = 8);

/// Weierstrass degree of P on the closed disk c + pi^k O_L, i.e. the number of roots in C_p there.
int weierstrass_degree(const Poly& P, const PadicNumber& c, long k);
/// Same with a rational radius exponent t (radius p^-t), a C_p disk.
int weierstrass_degree_q(const Poly& P, const PadicNumber& c, const Q& t);
/// Roots with |z - c| < p^-t.
int weierstrass_degree_open_q(const Poly& P, const PadicNumber& c, const Q& t);

}  // namespace padyn
