#include "mmkp/reductions.hpp"

#include <algorithm>
#include <cassert>
#include <set>

namespace mmkp {

namespace {

long long choose2(long long x) { return x * (x - 1) / 2; }

std::vector<int> sorted_unique(std::vector<int> v, const char* what) {
  std::sort(v.begin(), v.end());
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] == v[i - 1]) {
      throw input_error(std::string(what) + ": duplicate id " + std::to_string(v[i]));
    }
  }
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// Source-instance constructors.

VcInstance make_vc_instance(int vertex_count, std::vector<std::pair<int, int>> edges, int budget) {
  if (vertex_count < 1) throw input_error("vc: vertex count must be at least 1");
  if (budget < 0) throw input_error("vc: budget must be non-negative");
  std::set<std::pair<int, int>> seen;
  for (auto& [a, b] : edges) {
    if (a < 1 || a > vertex_count || b < 1 || b > vertex_count) {
      throw input_error("vc: edge endpoint out of range");
    }
    if (a == b) throw input_error("vc: self-loop on vertex " + std::to_string(a));
    if (a > b) std::swap(a, b);
    if (!seen.insert({a, b}).second) {
      throw input_error("vc: duplicate edge {" + std::to_string(a) + "," + std::to_string(b) + "}");
    }
  }
  std::sort(edges.begin(), edges.end());
  return VcInstance{vertex_count, std::move(edges), budget};
}

MmvcInstance make_mmvc_instance(int index_count, int group_size,
                                std::vector<std::array<std::vector<int>, 2>> groups,
                                std::vector<std::pair<int, int>> edges, int budget) {
  if (index_count < 1) throw input_error("mmvc: index count must be at least 1");
  if (group_size < 1) throw input_error("mmvc: group size must be at least 1");
  if (budget < 0) throw input_error("mmvc: budget must be non-negative");
  if (static_cast<int>(groups.size()) != index_count) {
    throw input_error("mmvc: expected " + std::to_string(index_count) + " group pairs");
  }
  const int n = index_count * group_size * 2;
  std::vector<std::pair<int, int>> owner(static_cast<std::size_t>(n) + 1, {0, -1});
  for (int i = 0; i < index_count; ++i) {
    for (int side = 0; side < 2; ++side) {
      auto& members = groups[static_cast<std::size_t>(i)][static_cast<std::size_t>(side)];
      if (static_cast<int>(members.size()) != group_size) {
        throw input_error("mmvc: group (" + std::to_string(i + 1) + "," + std::to_string(side) +
                          ") does not have the common size " + std::to_string(group_size));
      }
      members = sorted_unique(members, "mmvc group");
      for (int v : members) {
        if (v < 1 || v > n) throw input_error("mmvc: vertex " + std::to_string(v) + " out of range");
        if (owner[static_cast<std::size_t>(v)].first != 0) {
          throw input_error("mmvc: vertex " + std::to_string(v) + " is in two groups");
        }
        owner[static_cast<std::size_t>(v)] = {i + 1, side};
      }
    }
  }
  std::set<std::pair<int, int>> seen;
  for (auto& [a, b] : edges) {
    if (a < 1 || a > n || b < 1 || b > n) throw input_error("mmvc: edge endpoint out of range");
    if (a == b) throw input_error("mmvc: self-loop on vertex " + std::to_string(a));
    if (a > b) std::swap(a, b);
    if (!seen.insert({a, b}).second) {
      throw input_error("mmvc: duplicate edge {" + std::to_string(a) + "," + std::to_string(b) + "}");
    }
    const auto& oa = owner[static_cast<std::size_t>(a)];
    const auto& ob = owner[static_cast<std::size_t>(b)];
    if (oa.first == ob.first && oa.second != ob.second) {
      throw input_error("mmvc: edge {" + std::to_string(a) + "," + std::to_string(b) +
                        "} joins the two sides of index " + std::to_string(oa.first) +
                        "; such edges never matter and must be removed");
    }
  }
  std::sort(edges.begin(), edges.end());
  return MmvcInstance{index_count, group_size, std::move(groups), std::move(edges), budget};
}

bool QSatInstance::is_x_var(int var) const {
  return std::binary_search(x_vars.begin(), x_vars.end(), var);
}

int QSatInstance::x_literal_count(const QSatClause& c) const {
  int count = 0;
  for (int lit : c.lits) {
    if (is_x_var(lit < 0 ? -lit : lit)) ++count;
  }
  return count;
}

int QSatInstance::pure_x_clause_count() const {
  int count = 0;
  for (const auto& c : clauses) {
    if (x_literal_count(c) == 3) ++count;
  }
  return count;
}

QSatInstance make_qsat_instance(std::vector<int> x_vars, std::vector<int> y_vars,
                                std::vector<QSatClause> clauses) {
  QSatInstance inst;
  inst.x_vars = sorted_unique(std::move(x_vars), "qsat x-variables");
  inst.y_vars = sorted_unique(std::move(y_vars), "qsat y-variables");
  for (int v : inst.x_vars) {
    if (v < 1) throw input_error("qsat: variable ids must be positive");
    if (std::binary_search(inst.y_vars.begin(), inst.y_vars.end(), v)) {
      throw input_error("qsat: variable " + std::to_string(v) + " is both X and Y");
    }
  }
  for (int v : inst.y_vars) {
    if (v < 1) throw input_error("qsat: variable ids must be positive");
  }
  for (std::size_t ci = 0; ci < clauses.size(); ++ci) {
    for (int lit : clauses[ci].lits) {
      int var = lit < 0 ? -lit : lit;
      if (lit == 0 || (!inst.is_x_var(var) &&
                       !std::binary_search(inst.y_vars.begin(), inst.y_vars.end(), var))) {
        throw input_error("qsat: clause " + std::to_string(ci + 1) +
                          " uses an undeclared literal " + std::to_string(lit));
      }
    }
  }
  inst.clauses = std::move(clauses);
  return inst;
}

// ---------------------------------------------------------------------------
// Cover question -> single-coalition verification.

VcReduction reduce_vc_to_attacker(const VcInstance& src) {
  std::vector<std::tuple<NodeId, NodeId, Weight>> pairs;
  pairs.reserve(src.edges.size());
  for (const auto& [a, b] : src.edges) pairs.emplace_back(a, b, 1);
  // Attacks mean "at most m", so a budget beyond the vertex count is
  // equivalent to removing everything.
  int budget = std::min(src.budget, src.vertex_count);
  Instance inst = Instance::create(src.vertex_count, 1, budget, 1, pairs);
  Partition p;
  p.subsets.emplace_back();
  for (int v = 1; v <= src.vertex_count; ++v) p.subsets[0].push_back(v);
  return VcReduction{std::move(inst), std::move(p)};
}

// ---------------------------------------------------------------------------
// Two-subset compilation.

long long f_nm(int n, int m, int x) {
  if (m < 0 || x < 0 || x > 2 * m || 2 * m > n) {
    throw input_error("f_nm: need 0 <= x <= 2m <= n, got n=" + std::to_string(n) +
                      ", m=" + std::to_string(m) + ", x=" + std::to_string(x));
  }
  long long value = 2 * choose2(n);
  for (int i = 1; i <= x; ++i) value -= n - i;
  for (int j = 1; j <= 2 * m - x; ++j) value -= n - j;
  return value;
}

Mm2pReduction reduce_mmvc_to_mm2p(const MmvcInstance& src) {
  const int per_side = src.per_side_size();
  if (2 * src.budget > per_side) {
    throw input_error("mmvc reduction: need 2*budget <= per-side size, got budget=" +
                      std::to_string(src.budget) + ", per-side=" + std::to_string(per_side));
  }
  const int n = src.vertex_count();
  const long long lambda = static_cast<long long>(n) * n;

  std::vector<std::pair<int, int>> group_of(static_cast<std::size_t>(n) + 1, {0, -1});
  for (int i = 0; i < src.index_count; ++i) {
    for (int side = 0; side < 2; ++side) {
      for (int v : src.groups[static_cast<std::size_t>(i)][static_cast<std::size_t>(side)]) {
        group_of[static_cast<std::size_t>(v)] = {i + 1, side};
      }
    }
  }
  std::set<std::pair<int, int>> edge_set(src.edges.begin(), src.edges.end());

  std::vector<std::tuple<NodeId, NodeId, Weight>> pairs;
  pairs.reserve(static_cast<std::size_t>(choose2(n)));
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      const auto& gi = group_of[static_cast<std::size_t>(i)];
      const auto& gj = group_of[static_cast<std::size_t>(j)];
      Weight w;
      if (gi.first == gj.first && gi.second != gj.second) {
        w = -lambda;
      } else if (edge_set.count({i, j}) != 0) {
        w = 2;
      } else {
        w = 1;
      }
      pairs.emplace_back(i, j, w);
    }
  }
  const Weight theta = f_nm(per_side, src.budget, src.budget) + 1;
  Instance inst = Instance::create(n, 2, 2 * src.budget, theta, pairs);

  GadgetMap gm;
  gm.kind = GadgetKind::Mm2p;
  gm.node_count = n;
  gm.roles.assign(static_cast<std::size_t>(n) + 1, NodeRole{});
  for (int v = 1; v <= n; ++v) {
    NodeRole role;
    role.kind = NodeKind::source_vertex;
    role.group = group_of[static_cast<std::size_t>(v)].first;
    role.side = group_of[static_cast<std::size_t>(v)].second;
    gm.roles[static_cast<std::size_t>(v)] = role;
  }
  gm.lambda = lambda;
  gm.per_side_n = per_side;
  gm.theta = theta;
  gm.k = 2;
  gm.budget = 2 * src.budget;
  return Mm2pReduction{std::move(inst), std::move(gm)};
}

bool check_proper_2partition(const Instance& inst, const GadgetMap& gm, const Partition& p) {
  if (gm.kind != GadgetKind::Mm2p) {
    throw input_error("check_proper_2partition: gadget map is not a two-subset gadget");
  }
  if (inst.n() != gm.node_count || inst.k() != 2) {
    throw input_error("check_proper_2partition: instance does not match the gadget map");
  }
  if (p.subsets.size() != 2) {
    throw input_error("check_proper_2partition: expected a 2-partition");
  }
  std::vector<int> subset_of(static_cast<std::size_t>(inst.n()) + 1, -1);
  int assigned = 0;
  for (int s = 0; s < 2; ++s) {
    for (NodeId v : p.subsets[static_cast<std::size_t>(s)]) {
      if (v < 1 || v > inst.n()) throw input_error("check_proper_2partition: node out of range");
      subset_of[static_cast<std::size_t>(v)] = s;
      ++assigned;
    }
  }
  if (assigned != inst.n()) return false;  // proper partitions are complete

  int index_count = 0;
  for (int v = 1; v <= gm.node_count; ++v) {
    index_count = std::max(index_count, gm.roles[static_cast<std::size_t>(v)].group);
  }
  std::vector<std::array<std::vector<NodeId>, 2>> members(static_cast<std::size_t>(index_count));
  for (int v = 1; v <= gm.node_count; ++v) {
    const NodeRole& r = gm.roles[static_cast<std::size_t>(v)];
    members[static_cast<std::size_t>(r.group - 1)][static_cast<std::size_t>(r.side)].push_back(v);
  }
  for (const auto& pair : members) {
    for (NodeId i : pair[0]) {
      for (NodeId j : pair[1]) {
        if (subset_of[static_cast<std::size_t>(i)] == subset_of[static_cast<std::size_t>(j)]) {
          return false;
        }
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Clause normalization.

QSatInstance normalize_clauses(const QSatInstance& src) {
  int fresh = 0;
  for (int v : src.x_vars) fresh = std::max(fresh, v);
  for (int v : src.y_vars) fresh = std::max(fresh, v);

  std::vector<int> y_vars = src.y_vars;
  std::vector<QSatClause> out;
  out.reserve(src.clauses.size());
  for (const auto& c : src.clauses) {
    if (src.x_literal_count(c) != 2) {
      out.push_back(c);
      continue;
    }
    int x1 = 0, x2 = 0, y = 0;
    for (int lit : c.lits) {
      int var = lit < 0 ? -lit : lit;
      if (src.is_x_var(var)) {
        (x1 == 0 ? x1 : x2) = lit;
      } else {
        y = lit;
      }
    }
    int z = ++fresh;
    y_vars.push_back(z);
    out.push_back(QSatClause{{x1, z, y}});
    out.push_back(QSatClause{{x2, -z, y}});
  }
  return make_qsat_instance(src.x_vars, std::move(y_vars), std::move(out));
}

// ---------------------------------------------------------------------------
// Three-subset compilation.

namespace {

// Working clause form used during construction.
struct WorkClause {
  int x_lit = 0;            // 0 for clauses without an X-literal
  std::vector<int> y_lits;  // 2 (X-clause) or 3 (Y-clause) literals, clause order
  bool y_clause = false;
};

WorkClause split_clause(const QSatInstance& src, const QSatClause& c, std::size_t position) {
  int x_count = src.x_literal_count(c);
  if (x_count >= 2) {
    throw input_error("qsat reduction: clause " + std::to_string(position + 1) + " (" +
                      std::to_string(c.lits[0]) + " " + std::to_string(c.lits[1]) + " " +
                      std::to_string(c.lits[2]) + ") has " + std::to_string(x_count) +
                      " X-literals; normalize first (three-X clauses are decided by the oracle)");
  }
  WorkClause w;
  for (int lit : c.lits) {
    int var = lit < 0 ? -lit : lit;
    if (src.is_x_var(var)) {
      w.x_lit = lit;
    } else {
      w.y_lits.push_back(lit);
    }
  }
  w.y_clause = (w.x_lit == 0);
  return w;
}

int literal_side(int lit, const std::map<int, int>& assign) {
  int var = lit < 0 ? -lit : lit;
  auto it = assign.find(var);
  if (it == assign.end()) {
    throw input_error("proper partition: assignment misses X-variable " + std::to_string(var));
  }
  int value = it->second;
  if (value != 0 && value != 1) {
    throw input_error("proper partition: assignment values must be 0 or 1");
  }
  return lit < 0 ? 1 - value : value;
}

// Subsets in construction order: the big scenario subset, then the two half
// subsets. proper_3partition_for canonicalizes this.
std::array<std::vector<NodeId>, 3> proper_3partition_subsets(const GadgetMap& gm,
                                                             const std::map<int, int>& assign) {
  const int alpha = gm.alpha;
  std::array<std::vector<NodeId>, 3> subsets;
  for (int v = 1; v <= gm.node_count; ++v) {
    if (gm.roles[static_cast<std::size_t>(v)].kind == NodeKind::core_clique) {
      subsets[0].push_back(v);
    }
  }
  for (int i = 1; i <= alpha; ++i) {
    const ClauseGadget& cg = gm.clauses[static_cast<std::size_t>(i - 1)];
    int side = cg.x_lit == 0 ? 0 : literal_side(cg.x_lit, assign);
    int half = i <= alpha / 2 ? 1 : 2;
    for (NodeId v : cg.nodes[static_cast<std::size_t>(side)]) subsets[0].push_back(v);
    for (NodeId v : cg.nodes[static_cast<std::size_t>(1 - side)]) {
      subsets[static_cast<std::size_t>(half)].push_back(v);
    }
  }
  subsets[1].push_back(gm.node_count - 1);  // first half anchor
  subsets[2].push_back(gm.node_count);      // second half anchor
  return subsets;
}

}  // namespace

Mm3pReduction reduce_qsat_to_mm3p(const QSatInstance& src) {
  std::vector<std::string> log;
  std::vector<int> x_vars = src.x_vars;
  std::vector<int> y_vars = src.y_vars;

  // Working copy of the clause list; all validation of X-literal counts
  // happens while splitting.
  QSatInstance base = src;
  std::vector<WorkClause> work;
  work.reserve(src.clauses.size());
  for (std::size_t i = 0; i < src.clauses.size(); ++i) {
    work.push_back(split_clause(src, src.clauses[i], i));
  }

  // Clauses without an X-literal come first; the reorder is stable.
  std::stable_sort(work.begin(), work.end(),
                   [](const WorkClause& a, const WorkClause& b) { return a.y_clause && !b.y_clause; });

  int y_clause_count = 0;
  for (const auto& w : work) {
    if (w.y_clause) ++y_clause_count;
  }

  if (y_clause_count == static_cast<int>(work.size())) {
    // No X-clause to duplicate: introduce a fresh X-variable in a clause that
    // is true under every assignment, which changes nothing else.
    int fresh = 0;
    for (int v : x_vars) fresh = std::max(fresh, v);
    for (int v : y_vars) fresh = std::max(fresh, v);
    int x0 = ++fresh;
    x_vars.push_back(x0);
    int y;
    if (y_vars.empty()) {
      y = ++fresh;
      y_vars.push_back(y);
      log.push_back("added fresh Y-variable " + std::to_string(y) + " for the tautological clause");
    } else {
      y = y_vars.front();
    }
    WorkClause taut;
    taut.x_lit = x0;
    taut.y_lits = {y, -y};
    taut.y_clause = false;
    work.push_back(taut);
    log.push_back("added fresh X-variable " + std::to_string(x0) + " and tautological clause (" +
                  std::to_string(x0) + " " + std::to_string(y) + " " + std::to_string(-y) + ")");
  }

  // Duplicate an X-clause until the clause count is even and the clauses
  // without X-literals fill less than half of the first half.
  const WorkClause x_template = work[static_cast<std::size_t>(y_clause_count)];
  while (work.size() % 2 != 0 || 2 * y_clause_count >= static_cast<int>(work.size())) {
    work.push_back(x_template);
    log.push_back("duplicated clause (" + std::to_string(x_template.x_lit) + " " +
                  std::to_string(x_template.y_lits[0]) + " " + std::to_string(x_template.y_lits[1]) +
                  ") to balance the layout; clause count now " + std::to_string(work.size()));
  }

  const int alpha = static_cast<int>(work.size());
  const int m = 2 * alpha;
  const int n = 10 * alpha + 2;
  const long long lambda = static_cast<long long>(n) * n;

  GadgetMap gm;
  gm.kind = GadgetKind::Mm3p;
  gm.node_count = n;
  gm.alpha = alpha;
  gm.lambda = lambda;
  gm.k = 3;
  gm.budget = m;
  gm.x_vars = sorted_unique(x_vars, "qsat reduction x-variables");
  gm.padding_log = std::move(log);
  gm.roles.assign(static_cast<std::size_t>(n) + 1, NodeRole{});

  // Node layout: per clause the side-0 tetrad then the side-1 tetrad, slots
  // (x, y, y', z) or (y, y', y'', z); then the anchor clique; then the two
  // half anchors.
  gm.clauses.reserve(static_cast<std::size_t>(alpha));
  for (int i = 1; i <= alpha; ++i) {
    const WorkClause& w = work[static_cast<std::size_t>(i - 1)];
    ClauseGadget cg;
    cg.x_lit = w.x_lit;
    cg.y_lits = w.y_lits;
    cg.y_clause = w.y_clause;
    for (int side = 0; side < 2; ++side) {
      for (int slot = 0; slot < 4; ++slot) {
        NodeId v = 8 * (i - 1) + 4 * side + slot + 1;
        cg.nodes[static_cast<std::size_t>(side)][static_cast<std::size_t>(slot)] = v;
        NodeRole role;
        role.clause = i;
        role.side = side;
        role.slot = slot;
        if (slot == 3) {
          role.kind = NodeKind::tetrad_z;
        } else if (!w.y_clause && slot == 0) {
          role.kind = NodeKind::tetrad_x;
        } else {
          role.kind = NodeKind::tetrad_literal;
          role.literal = w.y_lits[static_cast<std::size_t>(w.y_clause ? slot : slot - 1)];
        }
        gm.roles[static_cast<std::size_t>(v)] = role;
      }
    }
    gm.clauses.push_back(cg);
  }
  for (NodeId v = 8 * alpha + 1; v <= 10 * alpha; ++v) {
    gm.roles[static_cast<std::size_t>(v)].kind = NodeKind::core_clique;
  }
  for (int h = 1; h <= 2; ++h) {
    NodeId v = 10 * alpha + h;
    gm.roles[static_cast<std::size_t>(v)].kind = NodeKind::half_anchor;
    gm.roles[static_cast<std::size_t>(v)].half = h;
  }

  auto clause_of = [&](const NodeRole& r) -> const WorkClause& {
    return work[static_cast<std::size_t>(r.clause - 1)];
  };
  auto half_of_clause = [&](int clause) { return clause <= alpha / 2 ? 1 : 2; };

  // Base link between two distinct tetrads: lambda or zero. Zero weights keep
  // inconsistent scenarios of one X-variable apart and separate the two
  // sides of a clause. For clauses without an X-literal the side-0 tetrad
  // (which always sits in the big subset) links every X-clause tetrad, while
  // the side-1 tetrad (which always sits in the first half subset) links
  // only the first-half X-clause tetrads it can share that subset with.
  auto tetrad_base = [&](const NodeRole& a, const NodeRole& b) -> long long {
    const WorkClause& ca = clause_of(a);
    const WorkClause& cb = clause_of(b);
    if (ca.y_clause && cb.y_clause) return a.side == b.side ? lambda : 0;
    if (ca.y_clause != cb.y_clause) {
      const NodeRole& yside = ca.y_clause ? a : b;
      const NodeRole& xside = ca.y_clause ? b : a;
      if (yside.side == 0) return lambda;
      return half_of_clause(xside.clause) == 1 ? lambda : 0;
    }
    if (a.clause == b.clause) return 0;  // the two scenarios of one clause
    if (ca.x_lit == cb.x_lit) return a.side == b.side ? lambda : 0;
    if (ca.x_lit == -cb.x_lit) return a.side != b.side ? lambda : 0;
    return lambda;
  };

  auto is_tetrad = [](const NodeRole& r) {
    return r.kind == NodeKind::tetrad_literal || r.kind == NodeKind::tetrad_x ||
           r.kind == NodeKind::tetrad_z;
  };

  auto pair_weight = [&](NodeId u, NodeId v) -> long long {
    const NodeRole& a = gm.roles[static_cast<std::size_t>(u)];
    const NodeRole& b = gm.roles[static_cast<std::size_t>(v)];
    const bool ta = is_tetrad(a), tb = is_tetrad(b);
    if (ta && tb) {
      if (a.clause == b.clause && a.side == b.side) {
        // Inside one tetrad: a triangle of one-links over the first three
        // slots; the filler z is plainly linked, except that the side-0
        // X-scenario node carries the extra one-link to z.
        if (a.slot != 3 && b.slot != 3) return lambda + 1;
        const NodeRole& other = a.slot == 3 ? b : a;
        if (other.kind == NodeKind::tetrad_x && a.side == 0) return lambda + 1;
        return lambda;
      }
      long long base = tetrad_base(a, b);
      if (base == 0) return 0;
      // Across linked tetrads, complementary Y-literals carry a one-link;
      // X-scenario and filler nodes never have outgoing one-links.
      if (a.kind == NodeKind::tetrad_literal && b.kind == NodeKind::tetrad_literal &&
          a.literal == -b.literal) {
        return lambda + 1;
      }
      return lambda;
    }
    if (a.kind == NodeKind::core_clique && b.kind == NodeKind::core_clique) return lambda;
    if ((a.kind == NodeKind::core_clique && tb) || (ta && b.kind == NodeKind::core_clique)) {
      const NodeRole& t = ta ? a : b;
      if (clause_of(t).y_clause && t.side == 1) return 0;
      return lambda;
    }
    if ((a.kind == NodeKind::half_anchor && tb) || (ta && b.kind == NodeKind::half_anchor)) {
      const NodeRole& h = a.kind == NodeKind::half_anchor ? a : b;
      const NodeRole& t = ta ? a : b;
      if (half_of_clause(t.clause) != h.half) return 0;
      if (clause_of(t).y_clause) return t.side == 1 ? lambda : 0;
      if (t.side == 1 && t.kind == NodeKind::tetrad_z) return lambda + 1;
      return lambda;
    }
    return 0;  // anchor-to-anchor and clique-to-anchor pairs
  };

  std::vector<std::tuple<NodeId, NodeId, Weight>> pairs;
  for (NodeId u = 1; u <= n; ++u) {
    for (NodeId v = u + 1; v <= n; ++v) {
      long long w = pair_weight(u, v);
      if (w != 0) pairs.emplace_back(u, v, w);
      if (w == lambda + 1) gm.one_links.emplace_back(u, v);
    }
  }

  // The two half subsets of a side-selection partition carry a one-link count
  // that does not depend on the selection; measure it on the all-zeros
  // assignment. (Constancy is property-tested.)
  std::map<int, int> zeros;
  for (int v : gm.x_vars) zeros[v] = 0;
  auto subsets = proper_3partition_subsets(gm, zeros);
  std::vector<int> which(static_cast<std::size_t>(n) + 1, -1);
  for (int s = 0; s < 3; ++s) {
    for (NodeId v : subsets[static_cast<std::size_t>(s)]) which[static_cast<std::size_t>(v)] = s;
  }
  gm.mu1 = gm.mu2 = 0;
  for (const auto& [u, v] : gm.one_links) {
    if (which[static_cast<std::size_t>(u)] == 1 && which[static_cast<std::size_t>(v)] == 1) ++gm.mu1;
    if (which[static_cast<std::size_t>(u)] == 2 && which[static_cast<std::size_t>(v)] == 2) ++gm.mu2;
  }

  gm.theta = choose2(2 * m) * lambda + 2 * choose2(m + 1) * lambda + gm.mu1 + gm.mu2 + 1;
  Instance inst = Instance::create(n, 3, m, gm.theta, pairs);
  return Mm3pReduction{std::move(inst), std::move(gm)};
}

Partition proper_3partition_for(const GadgetMap& gm, const std::map<int, int>& p_assign) {
  if (gm.kind != GadgetKind::Mm3p) {
    throw input_error("proper_3partition_for: gadget map is not a three-subset gadget");
  }
  for (int v : gm.x_vars) {
    if (p_assign.find(v) == p_assign.end()) {
      throw input_error("proper_3partition_for: assignment misses X-variable " + std::to_string(v));
    }
  }
  auto subsets = proper_3partition_subsets(gm, p_assign);
  Partition p;
  p.subsets.assign(subsets.begin(), subsets.end());
  return canonicalize(p);
}

}  // namespace mmkp
