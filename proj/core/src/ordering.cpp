#include "gridroute/ordering.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace gridroute {

double avg_density(const RoutingTree& t, const std::vector<int>& demand_map,
                   const GridGraph& g1) {
  long long d = 0, c = 0;
  for (int e : t.edges) {
    d += demand_map[static_cast<std::size_t>(e)];
    c += g1.edges[static_cast<std::size_t>(e)].capacity;
  }
  if (c == 0)
    throw std::invalid_argument("avg_density: zero capacity sum on tree edges");
  return static_cast<double>(d) / static_cast<double>(c);
}

double heuristic_score(const RoutingTree& t, double alpha, double beta,
                       double gamma, const CompressedSolution& s,
                       const GridGraph& g1) {
  const double l = t.edges.empty() ? 1.0 : t.wirelength(g1);
  const double rho = t.edges.empty() ? 0.0 : avg_density(t, s.demand_map, g1);

  int pins = 0;
  for (const Pin& p : g1.pins)
    if (p.net == t.net) ++pins;

  return alpha / l + beta * static_cast<double>(pins) + gamma * rho;
}

NetOrdering heuristic_order(const CompressedSolution& s, const GridGraph& g1,
                            double alpha, double beta, double gamma) {
  const int n = static_cast<int>(s.trees.size());
  std::vector<double> score(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m)
    score[static_cast<std::size_t>(m)] = heuristic_score(
        s.trees[static_cast<std::size_t>(m)], alpha, beta, gamma, s, g1);

  NetOrdering out;
  out.sequence.resize(static_cast<std::size_t>(n));
  std::iota(out.sequence.begin(), out.sequence.end(), 0);
  std::sort(out.sequence.begin(), out.sequence.end(), [&](int a, int b) {
    if (score[static_cast<std::size_t>(a)] != score[static_cast<std::size_t>(b)])
      return score[static_cast<std::size_t>(a)] > score[static_cast<std::size_t>(b)];
    return a < b;
  });
  return out;
}

NetOrdering random_order(int n, SplitMix64& rng) {
  if (n < 1) throw std::invalid_argument("random_order: n must be positive");
  NetOrdering out;
  out.sequence.resize(static_cast<std::size_t>(n));
  std::iota(out.sequence.begin(), out.sequence.end(), 0);
  rng.shuffle(out.sequence);
  return out;
}

NetOrdering random_order(int n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  return random_order(n, rng);
}

Dominance compare_optimality(const OrderingMetrics& a, const OrderingMetrics& b) {
  if (a.total_overflow != b.total_overflow)
    return a.total_overflow < b.total_overflow ? Dominance::ABetter
                                               : Dominance::BBetter;
  if (a.max_overflow != b.max_overflow)
    return a.max_overflow < b.max_overflow ? Dominance::ABetter
                                           : Dominance::BBetter;
  if (a.score != b.score)
    return a.score < b.score ? Dominance::ABetter : Dominance::BBetter;
  return Dominance::Tie;
}

std::vector<RankedOrdering> rank_orderings(const CompressedSolution& s,
                                           const GridGraph& gk,
                                           bool deterministic_time) {
  const int n = static_cast<int>(s.trees.size());
  if (n < 1) throw std::invalid_argument("rank_orderings: no nets");
  if (n > 8)
    throw std::invalid_argument(
        "rank_orderings: refusing to enumerate more than 8! orderings");

  const long long total = factorial(n);
  std::vector<RankedOrdering> out(static_cast<std::size_t>(total));
  for (long long h = 0; h < total; ++h) {
    RankedOrdering& r = out[static_cast<std::size_t>(h)];
    r.ordering.sequence = permutation_at(n, h);
    auto [solution, am] =
        assign_ordered(s, r.ordering.sequence, gk, AssignMode::OverflowMin,
                       !deterministic_time);
    r.metrics.total_overflow = am.total_overflow;
    r.metrics.max_overflow = am.max_overflow;
    r.metrics.wirelength = am.wirelength;
    r.metrics.t_run = deterministic_time ? 0.0 : am.t_run;
    r.metrics.score = am.wirelength * (1.0 + r.metrics.t_run);
  }

  std::vector<long long> order(static_cast<std::size_t>(total));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](long long a, long long b) {
    const Dominance d = compare_optimality(out[static_cast<std::size_t>(a)].metrics,
                                           out[static_cast<std::size_t>(b)].metrics);
    if (d != Dominance::Tie) return d == Dominance::ABetter;
    return a < b;
  });
  for (long long pos = 0; pos < total; ++pos)
    out[static_cast<std::size_t>(order[static_cast<std::size_t>(pos)])].metrics.rank =
        static_cast<int>(pos + 1);
  return out;
}

long long factorial(int n) {
  long long f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

std::vector<int> permutation_at(int n, long long index) {
  if (index < 0 || index >= factorial(n))
    throw std::invalid_argument("permutation_at: index out of range");
  std::vector<int> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<int> perm;
  perm.reserve(static_cast<std::size_t>(n));
  long long rem = index;
  for (int i = n; i >= 1; --i) {
    const long long f = factorial(i - 1);
    const long long digit = rem / f;
    rem %= f;
    perm.push_back(pool[static_cast<std::size_t>(digit)]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(digit));
  }
  return perm;
}

long long permutation_index(const std::vector<int>& perm) {
  const int n = static_cast<int>(perm.size());
  std::vector<int> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 0);
  long long index = 0;
  for (int i = 0; i < n; ++i) {
    auto it = std::find(pool.begin(), pool.end(), perm[static_cast<std::size_t>(i)]);
    if (it == pool.end())
      throw std::invalid_argument("permutation_index: not a permutation");
    index += (it - pool.begin()) * factorial(n - i - 1);
    pool.erase(it);
  }
  return index;
}

} // namespace gridroute
