#pragma once
// Data model for max-min k-partition instances: an undirected graph with
// symmetric integer pair weights, a subset count k, an attack budget m and an
// integer threshold theta, together with the evaluation semantics of
// (possibly incomplete) partitions under node removal.
//
// All values are exact 64-bit integers. A partition with an empty subset
// evaluates to negative infinity, modelled by ExtendedValue. Everything here
// is an immutable value type; all operations are pure functions.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace mmkp {

using NodeId = int;  // nodes are 1..n
using Weight = long long;

/// Input violates a documented precondition or file format.
class input_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A solver or oracle refuses an oversized search space instead of silently
/// truncating it. The message carries the size estimate.
class refusal_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An integer extended with a single NegInfinity value, totally ordered with
/// NegInfinity below every finite value.
class ExtendedValue {
 public:
  static constexpr ExtendedValue neg_infinity() { return ExtendedValue(false, 0); }
  static constexpr ExtendedValue finite(Weight v) { return ExtendedValue(true, v); }

  constexpr bool is_finite() const { return finite_; }
  /// Finite payload; calling this on NegInfinity is a logic error.
  constexpr Weight value() const { return v_; }

  friend constexpr bool operator==(const ExtendedValue& a, const ExtendedValue& b) {
    return a.finite_ == b.finite_ && a.v_ == b.v_;
  }
  friend constexpr bool operator!=(const ExtendedValue& a, const ExtendedValue& b) {
    return !(a == b);
  }
  friend constexpr bool operator<(const ExtendedValue& a, const ExtendedValue& b) {
    if (!a.finite_) return b.finite_;
    if (!b.finite_) return false;
    return a.v_ < b.v_;
  }
  friend constexpr bool operator>(const ExtendedValue& a, const ExtendedValue& b) { return b < a; }
  friend constexpr bool operator<=(const ExtendedValue& a, const ExtendedValue& b) { return !(b < a); }
  friend constexpr bool operator>=(const ExtendedValue& a, const ExtendedValue& b) { return !(a < b); }

  /// true iff finite and >= t (the usual threshold test; NegInfinity fails).
  constexpr bool at_least(Weight t) const { return finite_ && v_ >= t; }

 private:
  constexpr ExtendedValue(bool finite, Weight v) : finite_(finite), v_(finite ? v : 0) {}
  bool finite_;
  Weight v_;
};

std::string to_string(const ExtendedValue& v);  // "-inf" or decimal digits

/// A max-min k-partition instance <N, L, w, k, m, theta>.
///
/// Nodes are 1..n. Weights are stored symmetrically on unordered pairs; a
/// pair that is absent has weight zero, and zero weights are never stored.
/// Construction validates 1 <= k <= n, 0 <= m <= n and that the total
/// absolute weight stays below 2^62 so that every partition value fits in a
/// 64-bit integer. Values of k outside the usual 2 <= k < n band are accepted
/// with a warning: k=1 is meaningful for single-coalition verification and
/// k=n arises from the smallest gadget outputs.
class Instance {
 public:
  /// `pairs` holds (i, j, w) entries with i != j, each unordered pair at most
  /// once, w != 0. Warnings, if requested, receive human-readable notes about
  /// accepted-but-unusual parameters.
  static Instance create(int n, int k, int m, Weight theta,
                         const std::vector<std::tuple<NodeId, NodeId, Weight>>& pairs,
                         std::vector<std::string>* warnings = nullptr);

  int n() const { return n_; }
  int k() const { return k_; }
  int m() const { return m_; }
  Weight theta() const { return theta_; }

  /// w(i, j); zero when the pair is absent. i and j must be in range.
  Weight weight(NodeId i, NodeId j) const;

  /// Neighbors of i with nonzero weight, ascending by node id.
  const std::vector<std::pair<NodeId, Weight>>& neighbors(NodeId i) const;

  /// All stored pairs as (i, j, w) with i < j, ascending by (i, j).
  std::vector<std::tuple<NodeId, NodeId, Weight>> pairs_sorted() const;

  std::size_t pair_count() const { return pair_count_; }

 private:
  Instance() = default;
  int n_ = 0, k_ = 0, m_ = 0;
  Weight theta_ = 0;
  std::size_t pair_count_ = 0;
  std::vector<std::vector<std::pair<NodeId, Weight>>> adj_;  // index 1..n
};

/// A k-partition: pairwise-disjoint node subsets, possibly leaving nodes
/// unassigned. Canonical form: each subset sorted ascending, subsets ordered
/// by their minimum element, empty subsets last.
struct Partition {
  std::vector<std::vector<NodeId>> subsets;

  friend bool operator==(const Partition& a, const Partition& b) { return a.subsets == b.subsets; }
  friend bool operator!=(const Partition& a, const Partition& b) { return !(a == b); }
};

/// A set of nodes removed from every subset of a partition. Nodes are kept
/// sorted ascending and unique.
struct AttackSet {
  std::vector<NodeId> nodes;

  friend bool operator==(const AttackSet& a, const AttackSet& b) { return a.nodes == b.nodes; }
  friend bool operator!=(const AttackSet& a, const AttackSet& b) { return !(a == b); }
};

/// Sorts and deduplicates.
AttackSet make_attack(std::vector<NodeId> nodes);

/// Canonical form of p. Rejects overlapping or internally duplicated subsets.
/// Idempotent; two partitions equal as set collections canonicalize
/// identically.
Partition canonicalize(const Partition& p);

/// Sum of w(i, j) over unordered pairs {i, j} inside S. Node ids must be in
/// range and distinct.
Weight subset_weight(const Instance& inst, const std::vector<NodeId>& subset);

/// W(p): NegInfinity if any subset is empty, otherwise the sum of
/// subset_weight over all subsets. Unassigned nodes contribute nothing.
/// Rejects partitions whose subset count differs from inst.k() or whose
/// subsets overlap.
ExtendedValue partition_value(const Instance& inst, const Partition& p);

/// The remaining partition after removing the attack set from every subset,
/// in canonical form. Subset count is preserved; emptied subsets remain.
Partition apply_attack(const Partition& p, const AttackSet& attack);

/// Deficit count against budget m: sum over subsets of max(0, m+1 - |S|).
/// Zero iff every subset keeps at least one node under any attack of size m.
long long deficit(const Partition& p, int m);

}  // namespace mmkp
