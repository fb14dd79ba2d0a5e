#pragma once

#include <cstdint>
#include <vector>

#include "gridroute/grid.hpp"
#include "gridroute/layer_assign.hpp"
#include "gridroute/rng.hpp"
#include "gridroute/route2d.hpp"

namespace gridroute {

/// A permutation of net indices; nets are layer-assigned in this order.
struct NetOrdering {
  std::vector<int> sequence;

  friend bool operator==(const NetOrdering&, const NetOrdering&) = default;
};

struct OrderingMetrics {
  long long total_overflow = 0;
  int max_overflow = 0;
  double wirelength = 0.0;
  double t_run = 0.0;
  double score = 0.0; // wirelength * (1 + t_run)
  int rank = 0;       // 1 = most optimal within a group

  friend bool operator==(const OrderingMetrics&, const OrderingMetrics&) = default;
};

/// Average net density: sum of demands over sum of capacities across the
/// tree's edges. Throws std::invalid_argument when the capacity sum is zero.
double avg_density(const RoutingTree& t, const std::vector<int>& demand_map,
                   const GridGraph& g1);

/// Heuristic net score alpha/l + beta*pins + gamma*density. A zero-edge tree
/// clamps l to 1 and density to 0.
double heuristic_score(const RoutingTree& t, double alpha, double beta,
                       double gamma, const CompressedSolution& s,
                       const GridGraph& g1);

/// Nets sorted by descending heuristic score; ties by ascending net id.
NetOrdering heuristic_order(const CompressedSolution& s, const GridGraph& g1,
                            double alpha, double beta, double gamma);

/// Uniform random permutation of {0..n-1} from the given stream.
NetOrdering random_order(int n, SplitMix64& rng);
NetOrdering random_order(int n, std::uint64_t seed);

enum class Dominance { ABetter, BBetter, Tie };

/// Lexicographic optimality: lower total overflow, then lower max overflow,
/// then lower score; exact ties compare as Tie.
Dominance compare_optimality(const OrderingMetrics& a, const OrderingMetrics& b);

struct RankedOrdering {
  NetOrdering ordering;
  OrderingMetrics metrics;

  friend bool operator==(const RankedOrdering&, const RankedOrdering&) = default;
};

/// Evaluates every permutation of s's nets (overflow-min assignment from a
/// fresh state) and ranks them 1..N!. Residual ties break by permutation
/// index, so ranks are total and reproducible. Entries are returned in
/// canonical (lexicographic) permutation order. With deterministic_time the
/// runtime term is forced to zero and score equals wirelength.
/// Refuses more than 8 nets.
std::vector<RankedOrdering> rank_orderings(const CompressedSolution& s,
                                           const GridGraph& gk,
                                           bool deterministic_time = true);

// Canonical permutation codec: index 0 is the identity, indices follow
// lexicographic order of the sequences (Lehmer code).
long long factorial(int n);
std::vector<int> permutation_at(int n, long long index);
long long permutation_index(const std::vector<int>& perm);

} // namespace gridroute
