#pragma once
// Exact attacker-side solvers: minimize the partition value over all attacks
// of size at most m, and decide the verification question W_{-m}(p) >= theta.
//
// Both attack solvers share one contract: among all minimizing attacks they
// return the one with the smallest cardinality, breaking remaining ties by
// lexicographic order on the sorted node list. This makes certificates
// reproducible byte for byte.

#include <functional>
#include <optional>

#include "mmkp/core.hpp"

namespace mmkp {

/// A witnessing attack together with the value it forces.
struct AttackResult {
  AttackSet attack;
  ExtendedValue value = ExtendedValue::neg_infinity();
};

/// Work counters, accumulated across calls when reused.
struct AttackStats {
  long long attacks_evaluated = 0;
};

/// Visits every attack M with |M| <= max_size, ordered by cardinality and
/// then lexicographically, with the exact value W(p_{-M}). Return false from
/// the visitor to stop early. Used by the exhaustive solver and by tests that
/// need the full attack landscape.
void enumerate_attacks(const Instance& inst, const Partition& p, int max_size,
                       const std::function<bool(const std::vector<NodeId>&, ExtendedValue)>& visit);

/// Plain minimization over every attack of size <= inst.m().
AttackResult best_attack_exhaustive(const Instance& inst, const Partition& p,
                                    AttackStats* stats = nullptr);

/// Branch-and-bound minimization with the same result contract as the
/// exhaustive solver. Attacks that can only empty a subset are answered
/// directly from the deficit count; the finite search explores removal
/// choices with an admissible bound (current value minus the sum of the r
/// largest removal gains among remaining candidates, r = remaining budget,
/// a node's gain being its positive in-subset incident weight), which is
/// valid for weights of arbitrary sign.
AttackResult best_attack_bnb(const Instance& inst, const Partition& p,
                             AttackStats* stats = nullptr);

/// Decision of the verification question, with a certificate on failure.
struct VerifyResult {
  bool holds = false;
  /// Present iff !holds: an attack with value(p_-M) <= theta - 1.
  AttackSet witness;
  ExtendedValue witness_value = ExtendedValue::neg_infinity();
};

/// Does W_{-m}(p) >= theta hold? On FAILS, returns the first witnessing
/// attack in (cardinality, lexicographic) search order; the witness value is
/// at most theta - 1 and re-checkable via apply_attack + partition_value.
VerifyResult verify(const Instance& inst, const Partition& p, AttackStats* stats = nullptr);

}  // namespace mmkp
