#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "padyn/disk.hpp"
#include "padyn/metric.hpp"

namespace padyn {

struct CoverDisk {
  Disk disk;           // closed, radius in the value group, canonical center
  int image = -1;      // level n-1 disk containing phi(disk)
  int container = -1;  // level n-1 disk containing this one, -1 if none
  std::vector<int> children;  // level n+1 disks with container == this
};

struct CoverSequence {
  RationalMap map;
  std::vector<std::vector<CoverDisk>> levels;  // levels[0] = U_0
  int pruned = 0;  // preimage branches leaving L
  int n_levels() const { return static_cast<int>(levels.size()) - 1; }
};

/// U_0 = unit-radius disks around the samples; level n = maximal disks of phi^-1(level n-1).
CoverSequence build_cover(const RationalMap& phi, const std::vector<PadicNumber>& samples, int n_levels);
/// U_0 given explicitly.
CoverSequence build_cover_from(const RationalMap& phi, std::vector<Disk> base, int n_levels);

struct VisualMetric {
  CoverSequence cover;
  double Lambda = 0.5;
};

struct VisualDistance {
  double value = 1;
  int sep = 0;
  bool depth_limited = false;  // x and y share every built level
};

/// Indices of the disks holding z, level by level, until z leaves the cover.
std::vector<int> cover_path(const CoverSequence& C, const PadicNumber& z);
/// Largest level n with a common level-n disk, -1 when not even U_0 is shared.
int separation(const CoverSequence& C, const PadicNumber& x, const PadicNumber& y);
VisualDistance visual_distance(const VisualMetric& M, const PadicNumber& x, const PadicNumber& y);

/// Visual diameter of a level-n disk, probed on the centers of its level n+1 subdisks.
std::optional<double> cover_diameter(const VisualMetric& M, int n, int idx);

struct HolderFit {
  double slope = 0;      // log rho_inf = intercept + slope log rho_L
  double intercept = 0;
  double residual = 0;   // max abs residual
  size_t pairs = 0;
  size_t zero_pairs = 0;
};
HolderFit holder_bridge_check(const VisualMetric& V, const RhoMetric& R,
                              const std::vector<std::pair<PadicNumber, PadicNumber>>& pairs);

/// Words over {0..d-1}; index = sum alpha_i d^(i-1), alpha_1 least significant.
using Word = std::vector<int>;

struct CodingTree {
  RationalMap map;
  PadicNumber base;
  int d = 2;
  // levels[k][idx]: z_k of the word of length k+1 with index idx
  std::vector<std::vector<PadicNumber>> levels;
  int depth() const { return static_cast<int>(levels.size()); }
  const PadicNumber& node(int k, std::uint64_t idx) const { return levels[k][idx]; }
};

std::uint64_t word_index(const Word& a, int d, int len);
Word word_of(std::uint64_t idx, int d, int len);
/// 2^-min{j >= 1 : a_j != b_j}, 0 when equal on the common length.
double dist_sigma(const Word& a, const Word& b);

/// Base point: the first preimage of the repelling seed (canonical order) outside the postcritical set.
PadicNumber default_base_point(const RationalMap& phi, const std::vector<Point>& postcritical);

CodingTree build_coding_tree(const RationalMap& phi, const PadicNumber& w, int depth,
                             const std::vector<Point>& postcritical = {});

/// z_k(alpha), alpha needs length >= k+1.
PadicNumber h_approx(const CodingTree& T, const Word& alpha, int k);

/// Valuations (in pi-units) of z_{k+1}(alpha) - z_k(alpha), k = 0..depth-2.
std::vector<long> cauchy_steps(const CodingTree& T, const Word& alpha);

struct SemiconjugacyReport {
  size_t relations = 0;
  long min_truncation_vpi = 0;  // over phi(h_k(alpha)) - h_{k-1}(sigma alpha) on leaves
  std::optional<size_t> cover_disks;
  std::optional<size_t> cover_hit;
};
/// Throws SemiconjugacyViolated on the first node where the tree relation fails.
SemiconjugacyReport verify_semiconjugacy(const CodingTree& T, const CoverSequence* cover = nullptr);

}  // namespace padyn
