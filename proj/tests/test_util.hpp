#pragma once
// Shared helpers for the test suites: seeded random instances and partitions,
// and small independent oracles kept deliberately naive.

#include <algorithm>
#include <set>
#include <vector>

#include "mmkp/core.hpp"
#include "mmkp/io.hpp"
#include "mmkp/rng.hpp"

namespace mmkp::test {

inline Instance random_instance(std::uint64_t seed, int n, int k, int m, Weight theta,
                                Weight wmin = -5, Weight wmax = 5, double density = 0.6) {
  GenParams params;
  params.n = n;
  params.k = k;
  params.m = m;
  params.theta = theta;
  params.wmin = wmin;
  params.wmax = wmax;
  params.density = density;
  params.seed = seed;
  return generate_instance(params);
}

/// Random complete partition of 1..n into k nonempty subsets.
inline Partition random_complete_partition(Rng& rng, int n, int k) {
  std::vector<NodeId> nodes(static_cast<std::size_t>(n));
  for (int v = 1; v <= n; ++v) nodes[static_cast<std::size_t>(v - 1)] = v;
  rng.shuffle(nodes);
  Partition p;
  p.subsets.assign(static_cast<std::size_t>(k), {});
  for (int i = 0; i < n; ++i) {
    std::size_t s = i < k ? static_cast<std::size_t>(i)
                          : static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(k)));
    p.subsets[s].push_back(nodes[static_cast<std::size_t>(i)]);
  }
  return canonicalize(p);
}

/// Independent partition-count oracle: enumerate all labelings (k symbols,
/// plus "unassigned" in incomplete mode), keep those using every subset
/// label, and dedupe by canonical form.
inline std::set<std::vector<std::vector<NodeId>>> label_oracle_partitions(int n, int k,
                                                                          bool incomplete) {
  std::set<std::vector<std::vector<NodeId>>> result;
  const int symbols = incomplete ? k + 1 : k;  // symbol k means unassigned
  std::vector<int> label(static_cast<std::size_t>(n), 0);
  for (;;) {
    std::vector<std::vector<NodeId>> subsets(static_cast<std::size_t>(k));
    for (int v = 0; v < n; ++v) {
      if (label[static_cast<std::size_t>(v)] < k) {
        subsets[static_cast<std::size_t>(label[static_cast<std::size_t>(v)])].push_back(v + 1);
      }
    }
    bool all_used = true;
    for (const auto& s : subsets) {
      if (s.empty()) all_used = false;
    }
    if (all_used) {
      Partition p;
      p.subsets = subsets;
      result.insert(canonicalize(p).subsets);
    }
    int pos = 0;
    while (pos < n && label[static_cast<std::size_t>(pos)] == symbols - 1) {
      label[static_cast<std::size_t>(pos)] = 0;
      ++pos;
    }
    if (pos == n) break;
    ++label[static_cast<std::size_t>(pos)];
  }
  return result;
}

}  // namespace mmkp::test
