#pragma once
// Defender-side solvers for the two-level question: does some k-partition
// survive every attack of size at most m with value >= theta?
//
// Two algorithms are provided. The exhaustive solver walks every candidate
// partition in canonical order. The counterexample-guided solver (CCG)
// alternates a master search against a growing pool of attacks with an exact
// attacker oracle; with the exhaustive master it is a decision procedure,
// with the local-search master it may return UNKNOWN.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "mmkp/attacker.hpp"
#include "mmkp/core.hpp"

namespace mmkp {

enum class Algorithm { Exhaustive, Ccg };
enum class MasterMode { Exhaustive, LocalSearch };

struct SearchConfig {
  bool allow_incomplete = false;
  Algorithm algorithm = Algorithm::Exhaustive;
  MasterMode master = MasterMode::Exhaustive;
  /// Exhaustive algorithm / exhaustive master: maximum number of partitions
  /// that may be enumerated; oversize spaces are refused up front with the
  /// size estimate (never truncated mid-run). CCG with the local-search
  /// master: maximum number of master/oracle rounds before UNKNOWN.
  /// Zero selects the per-algorithm default.
  long long max_iterations = 0;
  std::uint64_t seed = 0;
};

enum class Answer { Yes, No, Unknown };

struct DefenderVerdict {
  Answer answer = Answer::Unknown;
  /// Present iff answer == Yes; always re-checked against the exact attacker
  /// before being returned.
  std::optional<Partition> certificate;
  long long attacks_examined = 0;    // attack evaluations across all attacker work
  long long partitions_examined = 0; // partitions enumerated or locally visited
};

/// For a NO answer from the exhaustive solver in debug mode: one failing
/// attack per enumerated deficit-free partition, re-validatable by direct
/// evaluation.
struct NoEvidence {
  Partition partition;
  AttackSet failing_attack;
};

/// Iteration trace of a CCG run: the master objective against the pool at
/// each round, which is non-increasing, and the final pool size.
struct CcgTrace {
  std::vector<ExtendedValue> master_values;
  std::size_t pool_size = 0;
};

/// Visits each canonical k-partition of 1..n exactly once, in the
/// lexicographic order of restricted growth strings (subsets labelled by
/// first appearance; in incomplete mode the extra "unassigned" label sorts
/// after every subset label). Complete mode yields partitions of 1..n into
/// exactly k nonempty subsets; incomplete mode additionally yields partitions
/// leaving nodes unassigned, still with all k subsets nonempty (a partition
/// with an empty subset can never reach a finite threshold). Return false
/// from the visitor to stop; the function then returns false.
bool enumerate_partitions(int n, int k, bool allow_incomplete,
                          const std::function<bool(const Partition&)>& visit);

/// Number of partitions the stream above would yield, saturating at 2^64-1.
std::uint64_t count_partitions(int n, int k, bool allow_incomplete);

/// Canonical-order first-witness search. Partitions with positive deficit are
/// pruned without attacker calls. Refuses (with the size estimate) when the
/// partition space exceeds the configured limit.
DefenderVerdict solve_exhaustive(const Instance& inst, const SearchConfig& cfg,
                                 std::vector<NoEvidence>* debug_no_evidence = nullptr);

/// Counterexample-guided solver. The attack pool starts at {empty attack};
/// each round the master maximizes the pool-minimum value and the exact
/// attacker either confirms the candidate (YES) or contributes a new attack.
/// The exhaustive master proves NO when its pool optimum drops below theta;
/// the seeded local-search master (single-node moves and pair swaps with
/// random restarts) cannot prove NO and returns UNKNOWN when the round budget
/// is exhausted.
DefenderVerdict solve_ccg(const Instance& inst, const SearchConfig& cfg,
                          CcgTrace* trace = nullptr);

}  // namespace mmkp
