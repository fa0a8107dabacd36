#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "padyn/disk.hpp"
#include "padyn/orbit.hpp"

namespace padyn {

/// Combinatorial data of one point of P_J, enough to solve for the indices.
struct NodeSpec {
  int next = -1;       // index of phi(z_j); ignored when fixed
  bool fixed = false;  // repelling fixed point (anchor)
  int deg = 1;         // deg_{z_j} phi
  PPow a_abs;          // |phi'(z_j)|, or the leading Taylor coefficient when deg >= 2
  long alpha = 2;
};

struct IndexEntry {
  NodeSpec spec;
  PadicNumber z;  // invalid for synthetic structures
  Q xi;
  PPow beta;
  Q eps_t;  // Step-1 disk Dbar(z, p^-eps_t)
  Q u_t;    // theta disk Dbar(z, p^-u_t), u = min(eps, beta^(1/xi))
};

/// Disk around a Julia critical point outside P_J where theta = 1.
struct CritDisk {
  PadicNumber z;
  int deg = 2;
  PPow a_abs;
  int image = -1;  // node index of phi(z)
  Q t;
};

struct IndexAssignment {
  long p = 2;
  int e = 1;
  std::vector<IndexEntry> nodes;
  std::vector<CritDisk> crit;
  bool empty() const { return nodes.empty(); }
};

/// Steps 2 and 3 on an abstract structure, anchors at radius p^-anchor_t.
IndexAssignment solve_indices(const std::vector<NodeSpec>& specs, long p, int e, const Q& anchor_t);

/// Exact replay of every inequality family; returns the violated ones.
std::vector<std::string> check_inequalities(const IndexAssignment& A);

struct RegionCheck {
  std::string name;  // "R0", "R1", "j", "crit"
  int index = 0;
  PPow value;
  Q bound;  // value must exceed bound
  bool ok = false;
};
/// Closed-form lower bounds of D_theta phi on the regions of Steps 2, 3 and the critical disks.
std::vector<RegionCheck> region_certificates(const IndexAssignment& A);

/// p^x > r for rational r > 0, decided exactly.
bool ppow_greater(const PPow& a, const Q& r, long p);

struct ThetaWeight {
  RationalMap base;  // phi
  RationalMap map;   // phi^m, the map theta is built for
  int m = 1;
  IndexAssignment A;
};

ThetaWeight make_theta(const RationalMap& phi, const SubhyperbolicityReport& rep, int budget);

PPow theta_eval(const ThetaWeight& th, const Point& z);
/// D_theta of th.map at z, limit values at P_J points and Julia critical points.
PPow theta_derivative(const ThetaWeight& th, const Point& z);
/// Cumulative D_theta (phi^m)^k(z), k = 1..n; shorter when the orbit loses precision.
std::vector<PPow> theta_derivative_chain(const ThetaWeight& th, const Point& z, int n);

/// Points of Wbar: per_disk radii inside every assigned and critical disk.
std::vector<Point> wbar_samples(const ThetaWeight& th, int per_disk);

struct LocalExpansionReport {
  PPow C0;      // min over all samples
  PPow C0_hat;  // min over Wbar samples
  size_t checked = 0;
};
LocalExpansionReport verify_local_expansion(const ThetaWeight& th, const std::vector<Point>& wbar,
                                            const std::vector<Point>& julia);

struct IterationReport {
  int N = 1;  // for th.map
  int n_max = 1;
  PPow C0, C1;
  std::optional<int> N_bound;  // from C1^(N/n_max) C0^n_max > lambda
  int horizon = 0;             // largest n checked on every sample
};
IterationReport find_iteration_count(const ThetaWeight& th, const PPow& lambda, const std::vector<Point>& samples,
                                     int n_cap = 32);

// disk integrals already computed for one metric, keyed by (truncated center, n)
struct IntegralCache {
  std::mutex mu;
  std::map<std::pair<std::string, long>, long double> values;
};

struct RhoMetric {
  ThetaWeight theta;
  int N = 1;  // iterates of th.base
  PPow lambda;
  std::vector<PadicNumber> special;  // points of L where rho is not locally constant
  std::shared_ptr<IntegralCache> cache = std::make_shared<IntegralCache>();
};

RhoMetric make_rho(const ThetaWeight& th, int N, const PPow& lambda);

PPow rho_eval(const RhoMetric& M, const Point& z);

/// rho(z) = p^c0 |z - x|^-kappa on Dbar(x, p^(-n_valid/e)) minus x.
struct RadialModel {
  Q kappa;
  Q c0;
  long n_valid = 0;
};
std::optional<RadialModel> radial_model(const RhoMetric& M, const PadicNumber& x, long n);
/// Searches n = n0, n0+1, ... for a valid model.
RadialModel find_radial_model(const RhoMetric& M, const PadicNumber& x, long n0 = 1, long n_cap = 64);

/// Integral of rho over Dbar(c, |pi|^n) in L.
long double rho_integral(const RhoMetric& M, const PadicNumber& c, long n);
long double rho_distance(const RhoMetric& M, const PadicNumber& z, const PadicNumber& w);

/// Partial sums of the radial bound series B (A-1)/A sum_n (|pi|^-xi / A)^n at node j, and its limit.
struct SeriesSums {
  std::vector<long double> partial;
  long double limit = 0;
};
SeriesSums node_series(const IndexAssignment& A, int j, int f, int terms);

struct ExpansionSample {
  Point z;
  PPow ratio;  // rho(phi z) |phi'(z)| / rho(z)
  bool identity_ok = false;  // ratio == (D_theta phi^N(z))^(1/N)
};
struct ExpansionReport {
  std::vector<ExpansionSample> samples;
  PPow min_ratio = PPow::inf();
};
/// Throws ExpansionViolated with the first failing sample.
ExpansionReport verify_expansion(const RhoMetric& M, const std::vector<Point>& samples);
ExpansionSample expansion_at(const RhoMetric& M, const Point& z);

}  // namespace padyn
