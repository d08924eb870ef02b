#include "mmkp/attacker.hpp"

#include <algorithm>
#include <cassert>

namespace mmkp {

namespace {

// Per-partition evaluation scratch: subset membership, live subset sizes and
// same-subset adjacency, so that removing or restoring one node costs O(deg).
struct PartitionContext {
  int n = 0;
  int k = 0;
  Weight base_value = 0;                      // W(p) ignoring empty subsets
  int initially_empty = 0;                    // subsets empty before any attack
  std::vector<int> subset_of;                 // 1..n -> subset index or -1
  std::vector<int> live;                      // surviving node count per subset
  std::vector<std::vector<std::pair<NodeId, Weight>>> in_adj;  // same-subset edges
  std::vector<char> present;                  // 1..n

  static PartitionContext build(const Instance& inst, const Partition& p) {
    PartitionContext ctx;
    ctx.n = inst.n();
    ctx.k = static_cast<int>(p.subsets.size());
    if (ctx.k != inst.k()) {
      throw input_error("attacker: partition has " + std::to_string(ctx.k) +
                        " subsets, expected " + std::to_string(inst.k()));
    }
    ctx.subset_of.assign(static_cast<std::size_t>(ctx.n) + 1, -1);
    ctx.live.assign(static_cast<std::size_t>(ctx.k), 0);
    ctx.present.assign(static_cast<std::size_t>(ctx.n) + 1, 1);
    for (int s = 0; s < ctx.k; ++s) {
      for (NodeId v : p.subsets[static_cast<std::size_t>(s)]) {
        if (v < 1 || v > ctx.n) {
          throw input_error("attacker: node id " + std::to_string(v) + " out of range");
        }
        if (ctx.subset_of[static_cast<std::size_t>(v)] != -1) {
          throw input_error("attacker: node " + std::to_string(v) + " in two subsets");
        }
        ctx.subset_of[static_cast<std::size_t>(v)] = s;
        ++ctx.live[static_cast<std::size_t>(s)];
      }
      if (p.subsets[static_cast<std::size_t>(s)].empty()) ++ctx.initially_empty;
    }
    ctx.in_adj.assign(static_cast<std::size_t>(ctx.n) + 1, {});
    for (int v = 1; v <= ctx.n; ++v) {
      int sv = ctx.subset_of[static_cast<std::size_t>(v)];
      if (sv < 0) continue;
      for (const auto& [u, w] : inst.neighbors(v)) {
        if (ctx.subset_of[static_cast<std::size_t>(u)] == sv) {
          ctx.in_adj[static_cast<std::size_t>(v)].emplace_back(u, w);
          if (u > v) ctx.base_value += w;
        }
      }
    }
    return ctx;
  }

  // Removes v; returns the weight delta (sum of currently live in-subset
  // incident edges) and whether the removal emptied its subset.
  Weight remove(NodeId v, bool* emptied) {
    present[static_cast<std::size_t>(v)] = 0;
    Weight delta = 0;
    for (const auto& [u, w] : in_adj[static_cast<std::size_t>(v)]) {
      if (present[static_cast<std::size_t>(u)]) delta += w;
    }
    int s = subset_of[static_cast<std::size_t>(v)];
    *emptied = false;
    if (s >= 0) {
      if (--live[static_cast<std::size_t>(s)] == 0) *emptied = true;
    }
    return delta;
  }

  void restore(NodeId v) {
    present[static_cast<std::size_t>(v)] = 1;
    int s = subset_of[static_cast<std::size_t>(v)];
    if (s >= 0) ++live[static_cast<std::size_t>(s)];
  }

  // Positive in-subset incident weight over currently live neighbors: the
  // most this node's removal can lower the value.
  Weight gain(NodeId v) const {
    Weight g = 0;
    for (const auto& [u, w] : in_adj[static_cast<std::size_t>(v)]) {
      if (w > 0 && present[static_cast<std::size_t>(u)]) g += w;
    }
    return g;
  }
};

// The (cardinality, lex)-first attack forcing -inf: the whole of a smallest
// subset of size <= m, ties broken by lexicographic order of the node list.
// Pre: some subset has size <= m.
AttackSet emptying_attack(const Partition& p, int m) {
  const std::vector<NodeId>* best = nullptr;
  for (const auto& subset : p.subsets) {
    if (static_cast<int>(subset.size()) > m) continue;
    if (!best || subset.size() < best->size() ||
        (subset.size() == best->size() && subset < *best)) {
      best = &subset;
    }
  }
  assert(best != nullptr);
  return make_attack(*best);
}

// Shared finite-case search. Enumerates attacks by cardinality layer, then
// lexicographically inside a layer, over candidate nodes only (nodes with at
// least one positive in-subset edge; removing any other node never lowers the
// value, so the tie-break winner avoids them). Prunes a subtree when even the
// r best remaining removals cannot pull the value below `prune_at`.
//
// on_value is called for every evaluated attack; returning true stops the
// whole search (used by verify's early exit).
struct FiniteSearch {
  PartitionContext& ctx;
  int max_size;
  AttackStats* stats;
  std::vector<NodeId> cands;
  std::vector<NodeId> chosen;
  Weight current;

  FiniteSearch(PartitionContext& ctx_in, int max_size_in, AttackStats* stats_in)
      : ctx(ctx_in), max_size(max_size_in), stats(stats_in), current(ctx_in.base_value) {
    for (NodeId v = 1; v <= ctx.n; ++v) {
      if (ctx.subset_of[static_cast<std::size_t>(v)] < 0) continue;
      bool has_positive = false;
      for (const auto& [u, w] : ctx.in_adj[static_cast<std::size_t>(v)]) {
        (void)u;
        if (w > 0) { has_positive = true; break; }
      }
      if (has_positive) cands.push_back(v);
    }
  }

  // Lower bound on any value reachable from the current node by removing up
  // to `budget` more candidates at positions >= pos.
  Weight bound(std::size_t pos, int budget) const {
    std::vector<Weight> gains;
    gains.reserve(cands.size() - pos);
    for (std::size_t i = pos; i < cands.size(); ++i) gains.push_back(ctx.gain(cands[i]));
    std::sort(gains.begin(), gains.end(), std::greater<>());
    Weight total = 0;
    for (int i = 0; i < budget && i < static_cast<int>(gains.size()); ++i) total += gains[static_cast<std::size_t>(i)];
    return current - total;
  }

  // prune_at: subtrees that cannot reach a value strictly below it are cut.
  // Returns true if the visitor requested a stop.
  bool run(const std::function<Weight()>& prune_at,
           const std::function<bool(const std::vector<NodeId>&, Weight)>& on_value) {
    if (stats) ++stats->attacks_evaluated;
    if (on_value(chosen, current)) return true;  // empty attack
    for (int c = 1; c <= max_size && c <= static_cast<int>(cands.size()); ++c) {
      if (dfs(0, c, prune_at, on_value)) return true;
    }
    return false;
  }

 private:
  bool dfs(std::size_t pos, int remaining,
           const std::function<Weight()>& prune_at,
           const std::function<bool(const std::vector<NodeId>&, Weight)>& on_value) {
    if (remaining == 0) {
      if (stats) ++stats->attacks_evaluated;
      return on_value(chosen, current);
    }
    if (cands.size() - pos < static_cast<std::size_t>(remaining)) return false;
    if (bound(pos, remaining) >= prune_at()) return false;
    for (std::size_t i = pos; i + static_cast<std::size_t>(remaining) <= cands.size(); ++i) {
      NodeId v = cands[i];
      bool emptied = false;
      Weight delta = ctx.remove(v, &emptied);
      assert(!emptied);  // callers guarantee deficit-free partitions here
      (void)emptied;
      current -= delta;
      chosen.push_back(v);
      bool stop = dfs(i + 1, remaining - 1, prune_at, on_value);
      chosen.pop_back();
      current += delta;
      ctx.restore(v);
      if (stop) return true;
    }
    return false;
  }
};

}  // namespace

void enumerate_attacks(const Instance& inst, const Partition& p, int max_size,
                       const std::function<bool(const std::vector<NodeId>&, ExtendedValue)>& visit) {
  PartitionContext ctx = PartitionContext::build(inst, p);
  std::vector<NodeId> chosen;
  Weight current = ctx.base_value;
  int emptied_count = ctx.initially_empty;

  auto value_now = [&]() {
    return emptied_count > 0 ? ExtendedValue::neg_infinity() : ExtendedValue::finite(current);
  };

  if (!visit(chosen, value_now())) return;

  // Plain combination enumeration over all nodes, one cardinality at a time.
  std::function<bool(NodeId, int)> dfs = [&](NodeId first, int remaining) -> bool {
    if (remaining == 0) return visit(chosen, value_now());
    for (NodeId v = first; v + remaining - 1 <= ctx.n; ++v) {
      bool emptied = false;
      Weight delta = ctx.remove(v, &emptied);
      current -= delta;
      if (emptied) ++emptied_count;
      chosen.push_back(v);
      bool keep_going = dfs(v + 1, remaining - 1);
      chosen.pop_back();
      if (emptied) --emptied_count;
      current += delta;
      ctx.restore(v);
      if (!keep_going) return false;
    }
    return true;
  };
  for (int c = 1; c <= max_size && c <= ctx.n; ++c) {
    if (!dfs(1, c)) return;
  }
}

AttackResult best_attack_exhaustive(const Instance& inst, const Partition& p, AttackStats* stats) {
  AttackResult best;
  bool have = false;
  enumerate_attacks(inst, p, inst.m(), [&](const std::vector<NodeId>& nodes, ExtendedValue value) {
    if (stats) ++stats->attacks_evaluated;
    if (!have || value < best.value) {
      best.attack.nodes = nodes;
      best.value = value;
      have = true;
    }
    return true;
  });
  return best;
}

AttackResult best_attack_bnb(const Instance& inst, const Partition& p, AttackStats* stats) {
  PartitionContext ctx = PartitionContext::build(inst, p);
  if (ctx.initially_empty > 0) {
    return AttackResult{AttackSet{}, ExtendedValue::neg_infinity()};
  }
  if (deficit(p, inst.m()) > 0) {
    return AttackResult{emptying_attack(p, inst.m()), ExtendedValue::neg_infinity()};
  }

  FiniteSearch search(ctx, inst.m(), stats);
  AttackResult best{AttackSet{}, ExtendedValue::finite(ctx.base_value)};
  Weight best_v = ctx.base_value;
  // Layered order visits attacks in (cardinality, lex) order, so a strict
  // improvement rule keeps exactly the tie-break winner; pruning at >= best_v
  // cannot lose it because equal-value attacks in a pruned subtree come later.
  search.run([&]() { return best_v; },
             [&](const std::vector<NodeId>& nodes, Weight value) {
               if (value < best_v) {
                 best_v = value;
                 best.attack.nodes = nodes;
                 best.value = ExtendedValue::finite(value);
               }
               return false;
             });
  return best;
}

VerifyResult verify(const Instance& inst, const Partition& p, AttackStats* stats) {
  PartitionContext ctx = PartitionContext::build(inst, p);
  const Weight theta = inst.theta();

  if (ctx.initially_empty > 0) {
    return VerifyResult{false, AttackSet{}, ExtendedValue::neg_infinity()};
  }
  if (deficit(p, inst.m()) > 0) {
    return VerifyResult{false, emptying_attack(p, inst.m()), ExtendedValue::neg_infinity()};
  }

  FiniteSearch search(ctx, inst.m(), stats);
  VerifyResult result;
  result.holds = true;
  bool stopped = search.run([&]() { return theta; },
                            [&](const std::vector<NodeId>& nodes, Weight value) {
                              if (value <= theta - 1) {
                                result.holds = false;
                                result.witness.nodes = nodes;
                                result.witness_value = ExtendedValue::finite(value);
                                return true;
                              }
                              return false;
                            });
  (void)stopped;
  return result;
}

}  // namespace mmkp
