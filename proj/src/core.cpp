#include "mmkp/core.hpp"

#include <algorithm>
#include <limits>

namespace mmkp {

namespace {

constexpr Weight kTotalWeightCap = (Weight{1} << 62) - 1;

void check_node_range(NodeId v, int n, const char* what) {
  if (v < 1 || v > n) {
    throw input_error(std::string(what) + ": node id " + std::to_string(v) +
                      " out of range 1.." + std::to_string(n));
  }
}

}  // namespace

std::string to_string(const ExtendedValue& v) {
  return v.is_finite() ? std::to_string(v.value()) : std::string("-inf");
}

Instance Instance::create(int n, int k, int m, Weight theta,
                          const std::vector<std::tuple<NodeId, NodeId, Weight>>& pairs,
                          std::vector<std::string>* warnings) {
  if (n < 1) throw input_error("instance: node count must be at least 1");
  if (k < 1 || k > n) {
    throw input_error("instance: subset count k=" + std::to_string(k) +
                      " must satisfy 1 <= k <= n=" + std::to_string(n));
  }
  if (m < 0 || m > n) {
    throw input_error("instance: attack budget m=" + std::to_string(m) +
                      " must satisfy 0 <= m <= n=" + std::to_string(n));
  }
  if (theta < -kTotalWeightCap || theta > kTotalWeightCap) {
    throw input_error("instance: |theta| must stay below 2^62");
  }
  if (warnings && (k < 2 || k >= n)) {
    warnings->push_back("instance: k=" + std::to_string(k) + " with n=" + std::to_string(n) +
                        " is outside the usual band 2 <= k < n; accepted");
  }

  Instance inst;
  inst.n_ = n;
  inst.k_ = k;
  inst.m_ = m;
  inst.theta_ = theta;
  inst.adj_.assign(static_cast<std::size_t>(n) + 1, {});

  Weight total_abs = 0;
  for (const auto& [i, j, w] : pairs) {
    check_node_range(i, n, "instance weight");
    check_node_range(j, n, "instance weight");
    if (i == j) {
      throw input_error("instance: self-loop weight w(" + std::to_string(i) + "," +
                        std::to_string(j) + ") is not allowed (w(i,i)=0 implicitly)");
    }
    if (w == 0) {
      throw input_error("instance: zero weight on pair {" + std::to_string(i) + "," +
                        std::to_string(j) + "} must be omitted");
    }
    Weight aw = w < 0 ? -w : w;
    if (aw > kTotalWeightCap - total_abs) {
      throw input_error("instance: total absolute weight exceeds 2^62");
    }
    total_abs += aw;
    inst.adj_[static_cast<std::size_t>(i)].emplace_back(j, w);
    inst.adj_[static_cast<std::size_t>(j)].emplace_back(i, w);
  }
  for (int v = 1; v <= n; ++v) {
    auto& row = inst.adj_[static_cast<std::size_t>(v)];
    std::sort(row.begin(), row.end());
    for (std::size_t idx = 1; idx < row.size(); ++idx) {
      if (row[idx].first == row[idx - 1].first) {
        throw input_error("instance: duplicate weight entry for pair {" + std::to_string(v) +
                          "," + std::to_string(row[idx].first) + "}");
      }
    }
  }
  inst.pair_count_ = pairs.size();
  return inst;
}

Weight Instance::weight(NodeId i, NodeId j) const {
  check_node_range(i, n_, "weight lookup");
  check_node_range(j, n_, "weight lookup");
  if (i == j) return 0;
  const auto& row = adj_[static_cast<std::size_t>(i)];
  auto it = std::lower_bound(row.begin(), row.end(), std::make_pair(j, std::numeric_limits<Weight>::min()));
  if (it != row.end() && it->first == j) return it->second;
  return 0;
}

const std::vector<std::pair<NodeId, Weight>>& Instance::neighbors(NodeId i) const {
  check_node_range(i, n_, "neighbor lookup");
  return adj_[static_cast<std::size_t>(i)];
}

std::vector<std::tuple<NodeId, NodeId, Weight>> Instance::pairs_sorted() const {
  std::vector<std::tuple<NodeId, NodeId, Weight>> out;
  out.reserve(pair_count_);
  for (int i = 1; i <= n_; ++i) {
    for (const auto& [j, w] : adj_[static_cast<std::size_t>(i)]) {
      if (j > i) out.emplace_back(i, j, w);
    }
  }
  return out;
}

AttackSet make_attack(std::vector<NodeId> nodes) {
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return AttackSet{std::move(nodes)};
}

Partition canonicalize(const Partition& p) {
  Partition out = p;
  std::vector<NodeId> seen;
  for (auto& subset : out.subsets) {
    std::sort(subset.begin(), subset.end());
    for (std::size_t idx = 1; idx < subset.size(); ++idx) {
      if (subset[idx] == subset[idx - 1]) {
        throw input_error("partition: node " + std::to_string(subset[idx]) +
                          " appears twice in one subset");
      }
    }
    seen.insert(seen.end(), subset.begin(), subset.end());
  }
  std::sort(seen.begin(), seen.end());
  for (std::size_t idx = 1; idx < seen.size(); ++idx) {
    if (seen[idx] == seen[idx - 1]) {
      throw input_error("partition: node " + std::to_string(seen[idx]) +
                        " appears in more than one subset");
    }
  }
  std::stable_sort(out.subsets.begin(), out.subsets.end(),
                   [](const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
                     if (a.empty() || b.empty()) return !a.empty() && b.empty();
                     return a.front() < b.front();
                   });
  return out;
}

Weight subset_weight(const Instance& inst, const std::vector<NodeId>& subset) {
  std::vector<char> in_subset(static_cast<std::size_t>(inst.n()) + 1, 0);
  for (NodeId v : subset) {
    check_node_range(v, inst.n(), "subset_weight");
    if (in_subset[static_cast<std::size_t>(v)]) {
      throw input_error("subset_weight: node " + std::to_string(v) + " listed twice");
    }
    in_subset[static_cast<std::size_t>(v)] = 1;
  }
  Weight total = 0;
  for (NodeId v : subset) {
    for (const auto& [u, w] : inst.neighbors(v)) {
      if (u > v && in_subset[static_cast<std::size_t>(u)]) total += w;
    }
  }
  return total;
}

ExtendedValue partition_value(const Instance& inst, const Partition& p) {
  if (static_cast<int>(p.subsets.size()) != inst.k()) {
    throw input_error("partition_value: expected " + std::to_string(inst.k()) +
                      " subsets, got " + std::to_string(p.subsets.size()));
  }
  std::vector<char> assigned(static_cast<std::size_t>(inst.n()) + 1, 0);
  for (const auto& subset : p.subsets) {
    for (NodeId v : subset) {
      check_node_range(v, inst.n(), "partition_value");
      if (assigned[static_cast<std::size_t>(v)]) {
        throw input_error("partition_value: node " + std::to_string(v) +
                          " appears in more than one subset");
      }
      assigned[static_cast<std::size_t>(v)] = 1;
    }
  }
  Weight total = 0;
  for (const auto& subset : p.subsets) {
    if (subset.empty()) return ExtendedValue::neg_infinity();
    total += subset_weight(inst, subset);
  }
  return ExtendedValue::finite(total);
}

Partition apply_attack(const Partition& p, const AttackSet& attack) {
  Partition out;
  out.subsets.reserve(p.subsets.size());
  for (const auto& subset : p.subsets) {
    std::vector<NodeId> kept;
    kept.reserve(subset.size());
    for (NodeId v : subset) {
      if (!std::binary_search(attack.nodes.begin(), attack.nodes.end(), v)) kept.push_back(v);
    }
    out.subsets.push_back(std::move(kept));
  }
  return canonicalize(out);
}

long long deficit(const Partition& p, int m) {
  long long total = 0;
  for (const auto& subset : p.subsets) {
    long long slack = static_cast<long long>(m) + 1 - static_cast<long long>(subset.size());
    if (slack > 0) total += slack;
  }
  return total;
}

}  // namespace mmkp
