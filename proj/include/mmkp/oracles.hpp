#pragma once
// Independent brute-force deciders for the three source problems, plus the
// cross-check harness that certifies each reduction's answer mapping against
// them. The oracles enumerate assignments directly and never call the solver
// modules they certify; hard size bounds refuse oversized inputs instead of
// sampling.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mmkp/reductions.hpp"

namespace mmkp {

/// Total 0/1 assignment of a declared variable set.
struct Assignment {
  std::map<int, int> values;
};

struct VcAnswer {
  bool yes = false;
  std::vector<int> cover;  // meaningful iff yes: lexicographically smallest minimum cover
};

/// Is there a vertex cover of size <= budget? Enumerates vertex subsets by
/// cardinality, then lexicographically. Refuses instances with more than 20
/// vertices unless the budget is at most 4.
VcAnswer solve_min_vertex_cover(const VcInstance& src);

struct MmvcAnswer {
  bool yes = false;
  std::map<int, int> falsifying_selection;  // meaningful iff !yes: index -> side
};

/// For every side selection, does the induced subgraph have a cover within
/// budget? Refuses more than 6 indices or per-side size above 12.
MmvcAnswer solve_mmvc(const MmvcInstance& src);

struct QSatAnswer {
  bool yes = false;
  Assignment falsifying_tx;  // meaningful iff !yes
};

/// For every assignment of X, is there an assignment of Y satisfying all
/// clauses? Refuses more than 12 variables on either side.
QSatAnswer solve_qsat2(const QSatInstance& src);

// ---------------------------------------------------------------------------
// Reduction cross-checks.

struct XcheckCase {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct XcheckReport {
  std::string kind;
  /// True when full two-level quantification is infeasible on the reduced
  /// instance and the check substitutes the documented restricted procedure.
  bool restricted = false;
  std::vector<XcheckCase> cases;

  bool all_pass() const;
};

/// Cover oracle vs. verification on the reduced instance, with witness
/// re-validation on both sides.
XcheckReport xcheck(const VcInstance& src);

/// Selection oracle vs. the exhaustive defender (incomplete mode) on the
/// reduced two-subset instance, plus structural audits of the weight table.
XcheckReport xcheck(const MmvcInstance& src);

/// Restricted certification of the three-subset reduction: structural audits,
/// defeat of every side-selection partition and of seeded improper samples by
/// the exhaustive attacker (yes-formulas), and recovery of a surviving
/// certificate by the counterexample-guided solver matched against the
/// oracle's falsifying assignments (no-formulas).
XcheckReport xcheck(const QSatInstance& src, std::uint64_t seed, int improper_samples = 200,
                    long long ccg_rounds = 600);

/// Hand-built formulas exercising both answers of the three-subset reduction
/// at its smallest size, with their independently derived answers frozen in.
struct QSatFixture {
  std::string name;
  QSatInstance instance;
  bool forall_exists_yes = false;
};
std::vector<QSatFixture> builtin_qsat_suite();

}  // namespace mmkp
