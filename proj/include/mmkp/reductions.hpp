#pragma once
// Compilers from three source problems into max-min k-partition instances:
//
//   * single-coalition verification from minimum vertex cover (k = 1),
//   * the two-subset form from max-min vertex cover (k = 2, mixed-sign
//     weights), and
//   * the three-subset form from forall-exists 3SAT (k = 3, non-negative
//     weights), built from per-clause scenario tetrads.
//
// Each reduction emits a GadgetMap alongside the instance: node roles, the
// bonus links of weight lambda+1 ("one-links"), the derived parameters and a
// padding log, so that structural audits and the proper-partition helpers
// need no re-derivation.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mmkp/core.hpp"

namespace mmkp {

// ---------------------------------------------------------------------------
// Source problems.

/// Minimum vertex cover question: is there a cover of size <= budget?
struct VcInstance {
  int vertex_count = 0;
  std::vector<std::pair<int, int>> edges;  // unordered, no self-loops
  int budget = 0;
};

/// Validates ranges, forbids self-loops and duplicate edges, normalizes each
/// edge to (min, max) and sorts the list.
VcInstance make_vc_instance(int vertex_count, std::vector<std::pair<int, int>> edges, int budget);

/// Max-min vertex cover: vertices are split into indexed group pairs
/// (index i, sides 0/1, all groups the same size); for every side selection
/// p the induced subgraph must have a cover of size <= budget.
struct MmvcInstance {
  int index_count = 0;
  int group_size = 0;
  /// groups[i-1][side] lists the vertices of group (i, side), ascending.
  std::vector<std::array<std::vector<int>, 2>> groups;
  std::vector<std::pair<int, int>> edges;
  int budget = 0;

  int vertex_count() const { return index_count * group_size * 2; }
  int per_side_size() const { return index_count * group_size; }
};

/// Validates that the groups partition 1..2*|I|*size with equal sizes and
/// that no edge joins the two sides of one index (such edges never matter and
/// are rejected rather than silently dropped).
MmvcInstance make_mmvc_instance(int index_count, int group_size,
                                std::vector<std::array<std::vector<int>, 2>> groups,
                                std::vector<std::pair<int, int>> edges, int budget);

/// forall-exists 3SAT over universally quantified X and existentially
/// quantified Y. Literals are signed variable ids; every clause has exactly
/// three literals.
struct QSatClause {
  std::array<int, 3> lits{0, 0, 0};
};

struct QSatInstance {
  std::vector<int> x_vars;  // ascending, disjoint from y_vars
  std::vector<int> y_vars;  // ascending
  std::vector<QSatClause> clauses;

  bool is_x_var(int var) const;
  int x_literal_count(const QSatClause& c) const;
  /// Number of clauses whose three literals are all on X variables; such
  /// clauses pass normalization unchanged and are rejected by the k=3
  /// reduction (the oracle decides them directly).
  int pure_x_clause_count() const;
};

QSatInstance make_qsat_instance(std::vector<int> x_vars, std::vector<int> y_vars,
                                std::vector<QSatClause> clauses);

// ---------------------------------------------------------------------------
// Gadget bookkeeping.

enum class GadgetKind { Mm2p, Mm3p };

enum class NodeKind {
  tetrad_literal,  // carries a Y-literal (triangle member)
  tetrad_x,        // the X-scenario node of an X-clause tetrad
  tetrad_z,        // the filler node of a tetrad
  core_clique,     // member of the size-2m anchor clique
  half_anchor,     // one of the two half-subset anchor nodes
  source_vertex,   // k=2: image of an original vertex
};

struct NodeRole {
  NodeKind kind = NodeKind::source_vertex;
  int clause = 0;   // tetrad nodes: clause index, 1-based
  int side = -1;    // tetrad nodes / source vertices: side 0 or 1
  int slot = -1;    // tetrad nodes: position 0..3 inside the tetrad
  int literal = 0;  // tetrad_literal: the carried Y-literal
  int half = 0;     // half_anchor: 1 or 2
  int group = 0;    // source_vertex: group index, 1-based
};

/// Per-clause record of the k=3 construction, post-padding.
struct ClauseGadget {
  int x_lit = 0;                 // 0 for clauses without an X-literal
  std::vector<int> y_lits;       // 2 entries (X-clause) or 3 (Y-clause)
  bool y_clause = false;
  std::array<std::array<NodeId, 4>, 2> nodes{};  // [side][slot]
};

struct GadgetMap {
  GadgetKind kind = GadgetKind::Mm3p;
  int node_count = 0;
  std::vector<NodeRole> roles;  // index 1..node_count; index 0 unused
  std::vector<std::pair<NodeId, NodeId>> one_links;  // pairs of weight lambda+1, sorted
  long long lambda = 0;
  long long mu1 = 0;  // one-link count inside the first half subset
  long long mu2 = 0;  // one-link count inside the second half subset
  int alpha = 0;      // clause count after padding
  int per_side_n = 0; // k=2: per-side vertex count
  Weight theta = 0;
  int k = 0;
  int budget = 0;
  std::vector<ClauseGadget> clauses;      // k=3 only
  std::vector<int> x_vars;                // k=3: X variables after padding
  std::vector<std::string> padding_log;   // k=3: one entry per padding step
};

// ---------------------------------------------------------------------------
// Reductions.

/// Cover question as a single-coalition verification: unit weight per edge,
/// k=1, m=budget, theta=1, verified partition {1..n}. The source has a cover
/// of size <= m iff verification FAILS on the output.
struct VcReduction {
  Instance instance;
  Partition partition;
};
VcReduction reduce_vc_to_attacker(const VcInstance& src);

/// Number of in-subset pairs left in a balanced two-subset split (n nodes per
/// side) after x removals on one side and 2m-x on the other, computed by the
/// summation form. Strictly convex in x with the integer minimum at x = m.
/// Requires 0 <= x <= 2m <= n.
long long f_nm(int n, int m, int x);

/// Two-subset compilation: weight 2 on source edges, 1 on other cross pairs,
/// -lambda on every within-index cross-side pair (lambda = total node count
/// squared); budget doubles; theta = f_nm(n, m, m) + 1 with n the per-side
/// size. The source is a yes-instance iff the output is a NO-instance of the
/// two-subset question.
struct Mm2pReduction {
  Instance instance;
  GadgetMap gadget;
};
Mm2pReduction reduce_mmvc_to_mm2p(const MmvcInstance& src);

/// True iff p is complete and separates both sides of every index, i.e. p is
/// one of the 2^(|I|-1) side-selection partitions. Rejects partitions or
/// gadget maps that do not belong to the instance.
bool check_proper_2partition(const Instance& inst, const GadgetMap& gm, const Partition& p);

/// Rewrites every clause holding exactly two X-literals (x v x' v y) into
/// (x v z v y) and (x' v not-z v y) with a fresh Y-variable z, preserving the
/// forall-exists answer. Clauses with three X-literals pass unchanged (see
/// QSatInstance::pure_x_clause_count); everything else is untouched.
QSatInstance normalize_clauses(const QSatInstance& src);

/// Three-subset compilation from a normalized formula (at most one X-literal
/// per clause; three-X clauses are rejected by name). Clause list is
/// reordered with Y-clauses first and padded with duplicates until the clause
/// count alpha is even and Y-clauses number < alpha/2; a formula with no
/// X-clause first receives a fresh X-variable in a tautological clause.
/// Output: n = 10*alpha + 2 nodes, k = 3, m = 2*alpha, weights in
/// {0, lambda, lambda+1} with lambda = n^2, theta - 1 =
/// C(2m,2)*lambda + 2*C(m+1,2)*lambda + mu1 + mu2. The source is a
/// forall-exists yes-instance iff the output is a NO-instance.
struct Mm3pReduction {
  Instance instance;
  GadgetMap gadget;
};
Mm3pReduction reduce_qsat_to_mm3p(const QSatInstance& src);

/// The side-selection partition for a total assignment of the X variables:
/// the big subset (anchor clique plus the selected tetrad per clause) and the
/// two half subsets, with sizes 3m, m+1, m+1. Partial assignments are
/// rejected.
Partition proper_3partition_for(const GadgetMap& gm, const std::map<int, int>& p_assign);

}  // namespace mmkp
