#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "padyn/disk.hpp"
#include "padyn/rational_map.hpp"

namespace padyn {

enum class Verdict { FatouCertified, JuliaCandidate, Unknown };
const char* to_string(Verdict v);

struct Classification {
  Point point;
  Verdict verdict = Verdict::Unknown;
  std::string reason;
  int budget_used = 0;
};

Classification classify_point(const RationalMap& phi, const Point& z, int budget);

/// Radius exponent (pi-units) of a disk around the cycle that phi^period maps strictly inside itself.
std::optional<long> attracting_certificate(const RationalMap& phi, const std::vector<Point>& cycle);

enum class SubhypVerdict { Subhyperbolic, NotSubhyperbolic, Undecided };
const char* to_string(SubhypVerdict v);

struct SubhyperbolicityReport {
  PostcriticalData post;
  std::vector<Classification> critical_verdicts;  // parallel to post.orbits
  std::vector<int> julia_critical;                // indices into post.orbits
  SubhypVerdict verdict = SubhypVerdict::Undecided;
  std::string note;
};

SubhyperbolicityReport is_subhyperbolic(const RationalMap& phi, int budget);

struct RepellingSeed {
  PadicNumber z;
  int period = 1;
  PPow multiplier;
};

/// Deterministic repelling periodic point of period <= max_period, avoiding the given points.
RepellingSeed find_repelling_seed(const RationalMap& phi, const std::vector<Point>& avoid, int max_period = 4);

/// Postcritical points P(phi) recorded in the resolved critical orbits.
std::vector<Point> postcritical_points(const PostcriticalData& pd);

struct JuliaSampleSet {
  RepellingSeed seed;
  std::vector<PadicNumber> points;
  int pruned = 0;  // preimage steps where fewer than d preimages lay in L
};

/// count random backward orbits of length depth from a repelling seed outside P(phi).
JuliaSampleSet julia_samples(const RationalMap& phi, int count, int depth, std::uint64_t seed,
                             const std::vector<Point>& avoid = {});

/// Abstract postcritical web: node i maps to node next[i]; alpha multiplies local degrees over
/// all nodes u with phi^k(u) = target for some k >= 1.
struct OrbitWeb {
  std::vector<int> local_degree;
  std::vector<int> next;
};
long alpha_web(const OrbitWeb& web, int target);

struct WebBuild {
  OrbitWeb web;
  std::vector<Point> nodes;
};
/// Web of critical points and their resolved orbits.
WebBuild build_web(const RationalMap& phi, const PostcriticalData& pd);
long alpha(const RationalMap& phi, const Point& z, const PostcriticalData& pd);

struct CandidateMap {
  RationalMap map;
  std::vector<Q> num;  // coefficients as entered
  SubhyperbolicityReport report;
};

/// Polynomials of the given degree with coefficients in the height-h rationals (|num|,|den| <= h).
std::vector<CandidateMap> find_subhyperbolic_candidates(int degree, long height, long p, int budget,
                                                        long precision = 64, size_t max_hits = 0);

}  // namespace padyn
