#include "mmkp/defender.hpp"

#include <algorithm>
#include <limits>

#include "mmkp/rng.hpp"

namespace mmkp {

namespace {

constexpr long long kDefaultPartitionBudget = 20'000'000;
constexpr long long kDefaultCcgRounds = 64;
constexpr int kLocalRestarts = 6;

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return a > UINT64_MAX - b ? UINT64_MAX : a + b;
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > UINT64_MAX / b) return UINT64_MAX;
  return a * b;
}

// Stirling numbers of the second kind, saturating.
std::uint64_t stirling2(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (n == 0) return 1;  // S(0,0)
  std::vector<std::uint64_t> row(static_cast<std::size_t>(k) + 1, 0);
  row[0] = 1;  // S(0,0)
  for (int i = 1; i <= n; ++i) {
    for (int j = std::min(i, k); j >= 1; --j) {
      row[static_cast<std::size_t>(j)] =
          sat_add(sat_mul(static_cast<std::uint64_t>(j), row[static_cast<std::size_t>(j)]),
                  row[static_cast<std::size_t>(j - 1)]);
    }
    row[0] = 0;
  }
  return row[static_cast<std::size_t>(k)];
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    r = sat_mul(r, static_cast<std::uint64_t>(n - k + i));
    if (r != UINT64_MAX) r /= static_cast<std::uint64_t>(i);
  }
  return r;
}

// DFS over restricted growth strings; label `used` opens a new subset, the
// sentinel -1 (tried last) leaves the node unassigned.
struct AssignmentEnumerator {
  int n, k;
  bool incomplete;
  std::vector<int> assign;  // 1..n
  const std::function<bool(const std::vector<int>&)>& visit;
  bool stopped = false;

  AssignmentEnumerator(int n_in, int k_in, bool inc,
                       const std::function<bool(const std::vector<int>&)>& fn)
      : n(n_in), k(k_in), incomplete(inc), assign(static_cast<std::size_t>(n_in) + 1, -1), visit(fn) {}

  void rec(int v, int used) {
    if (stopped) return;
    if (v > n) {
      if (used == k && !visit(assign)) stopped = true;
      return;
    }
    if (k - used > n - v + 1) return;  // cannot open the remaining subsets
    for (int b = 0; b < used && !stopped; ++b) {
      assign[static_cast<std::size_t>(v)] = b;
      rec(v + 1, used);
    }
    if (used < k && !stopped) {
      assign[static_cast<std::size_t>(v)] = used;
      rec(v + 1, used + 1);
    }
    if (incomplete && !stopped) {
      assign[static_cast<std::size_t>(v)] = -1;
      rec(v + 1, used);
    }
    assign[static_cast<std::size_t>(v)] = -1;
  }
};

Partition partition_from_assignment(const std::vector<int>& assign, int n, int k) {
  Partition p;
  p.subsets.assign(static_cast<std::size_t>(k), {});
  for (int v = 1; v <= n; ++v) {
    int b = assign[static_cast<std::size_t>(v)];
    if (b >= 0) p.subsets[static_cast<std::size_t>(b)].push_back(v);
  }
  return p;  // canonical by construction: labels ordered by first appearance
}

long long partition_budget(const SearchConfig& cfg) {
  return cfg.max_iterations > 0 ? cfg.max_iterations : kDefaultPartitionBudget;
}

void check_partition_space(const Instance& inst, const SearchConfig& cfg) {
  std::uint64_t est = count_partitions(inst.n(), inst.k(), cfg.allow_incomplete);
  std::uint64_t budget = static_cast<std::uint64_t>(partition_budget(cfg));
  if (est > budget) {
    throw refusal_error("partition space holds " +
                        (est == UINT64_MAX ? std::string(">= 2^64") : std::to_string(est)) +
                        " candidates, above the limit of " + std::to_string(budget) +
                        "; raise max_iterations to insist");
  }
}

// ---------------------------------------------------------------------------
// Pool machinery shared by the CCG masters.

ExtendedValue attacked_value(const Instance& inst, const Partition& p, const AttackSet& a) {
  return partition_value(inst, apply_attack(p, a));
}

// Minimum value of p against the pool; stops early once the running minimum
// can no longer exceed `floor` (used when only "does p beat the incumbent"
// matters).
ExtendedValue pool_min_value(const Instance& inst, const Partition& p,
                             const std::vector<AttackSet>& pool, AttackStats* stats,
                             const ExtendedValue* floor = nullptr) {
  ExtendedValue best = ExtendedValue::finite(std::numeric_limits<Weight>::max());
  bool first = true;
  for (const AttackSet& a : pool) {
    ExtendedValue v = attacked_value(inst, p, a);
    if (stats) ++stats->attacks_evaluated;
    if (first || v < best) {
      best = v;
      first = false;
    }
    if (floor && !(best > *floor)) break;
  }
  return best;
}

// Exact master: canonical-order argmax of the pool minimum over deficit-free
// partitions. Deficit-positive partitions can never be certificates, and
// skipping them keeps NO sound because their true attacked value is -inf.
struct ExactMasterResult {
  std::optional<Partition> best;
  ExtendedValue value = ExtendedValue::neg_infinity();
};

ExactMasterResult exact_master(const Instance& inst, const SearchConfig& cfg,
                               const std::vector<AttackSet>& pool, DefenderVerdict& verdict) {
  ExactMasterResult result;
  AttackStats stats;
  enumerate_partitions(inst.n(), inst.k(), cfg.allow_incomplete, [&](const Partition& p) {
    ++verdict.partitions_examined;
    if (deficit(p, inst.m()) > 0) return true;
    if (!result.best) {
      result.value = pool_min_value(inst, p, pool, &stats);
      result.best = p;
    } else {
      ExtendedValue v = pool_min_value(inst, p, pool, &stats, &result.value);
      if (v > result.value) {
        result.value = v;
        result.best = p;
      }
    }
    return true;
  });
  verdict.attacks_examined += stats.attacks_evaluated;
  return result;
}

// ---------------------------------------------------------------------------
// Local-search master: hill climbing on (pool minimum, base value) with
// single-node moves and pair swaps, seeded random restarts, and an optional
// warm start from the previous round's candidate.

struct LocalMaster {
  const Instance& inst;
  const std::vector<AttackSet>& pool;  // pool[0] must be the empty attack
  int n, k;
  bool incomplete;

  std::vector<int> assign;                  // 1..n -> subset or -1
  std::vector<std::vector<char>> in_attack; // per pool attack, 1..n
  std::vector<Weight> value_m;              // per pool attack
  std::vector<std::vector<int>> live_m;     // per pool attack, per subset

  LocalMaster(const Instance& inst_in, const std::vector<AttackSet>& pool_in, bool inc)
      : inst(inst_in), pool(pool_in), n(inst_in.n()), k(inst_in.k()), incomplete(inc) {
    in_attack.assign(pool.size(), std::vector<char>(static_cast<std::size_t>(n) + 1, 0));
    for (std::size_t mi = 0; mi < pool.size(); ++mi) {
      for (NodeId v : pool[mi].nodes) in_attack[mi][static_cast<std::size_t>(v)] = 1;
    }
  }

  void load(const std::vector<int>& a) {
    assign = a;
    value_m.assign(pool.size(), 0);
    live_m.assign(pool.size(), std::vector<int>(static_cast<std::size_t>(k), 0));
    for (std::size_t mi = 0; mi < pool.size(); ++mi) {
      for (int v = 1; v <= n; ++v) {
        int b = assign[static_cast<std::size_t>(v)];
        if (b < 0 || in_attack[mi][static_cast<std::size_t>(v)]) continue;
        ++live_m[mi][static_cast<std::size_t>(b)];
        for (const auto& [u, w] : inst.neighbors(v)) {
          if (u > v && assign[static_cast<std::size_t>(u)] == b &&
              !in_attack[mi][static_cast<std::size_t>(u)]) {
            value_m[mi] += w;
          }
        }
      }
    }
  }

  // Objective of the loaded assignment: (min over pool, base value).
  std::pair<ExtendedValue, Weight> objective() const {
    ExtendedValue mn = ExtendedValue::finite(std::numeric_limits<Weight>::max());
    for (std::size_t mi = 0; mi < pool.size(); ++mi) {
      ExtendedValue v = row_value(mi, 0, false, -1, -1);
      if (v < mn) mn = v;
    }
    return {mn, value_m[0]};
  }

  // Value of pool row mi with an optional simulated delta: adjust by `delta`
  // and, when `relabel` is set, account one node leaving subset `from` and
  // entering subset `to` (either may be -1).
  ExtendedValue row_value(std::size_t mi, Weight delta, bool relabel, int from, int to) const {
    for (int s = 0; s < k; ++s) {
      int cnt = live_m[mi][static_cast<std::size_t>(s)];
      if (relabel) {
        if (s == from) --cnt;
        if (s == to) ++cnt;
      }
      if (cnt == 0) return ExtendedValue::neg_infinity();
    }
    return ExtendedValue::finite(value_m[mi] + delta);
  }

  // Pool minimum if node u moved from its subset to `to`. The secondary key
  // is the plain weight sum of the undamaged partition (pool row 0, which is
  // always the empty attack), whether or not a subset is emptied.
  std::pair<ExtendedValue, Weight> eval_move(NodeId u, int to) const {
    int from = assign[static_cast<std::size_t>(u)];
    ExtendedValue mn = ExtendedValue::finite(std::numeric_limits<Weight>::max());
    Weight base = 0;
    for (std::size_t mi = 0; mi < pool.size(); ++mi) {
      ExtendedValue v = ExtendedValue::neg_infinity();
      if (in_attack[mi][static_cast<std::size_t>(u)]) {
        v = row_value(mi, 0, false, -1, -1);
      } else {
        Weight delta = 0;
        for (const auto& [x, w] : inst.neighbors(u)) {
          if (in_attack[mi][static_cast<std::size_t>(x)]) continue;
          int bx = assign[static_cast<std::size_t>(x)];
          if (bx == to) delta += w;
          if (bx == from) delta -= w;
        }
        if (mi == 0) base = value_m[0] + delta;
        v = row_value(mi, delta, true, from, to);
      }
      if (v < mn) {
        mn = v;
        if (!mn.is_finite()) break;
      }
    }
    return {mn, base};
  }

  // Pool minimum if nodes u and v exchange subsets.
  std::pair<ExtendedValue, Weight> eval_swap(NodeId u, NodeId v) const {
    int au = assign[static_cast<std::size_t>(u)];
    int av = assign[static_cast<std::size_t>(v)];
    ExtendedValue mn = ExtendedValue::finite(std::numeric_limits<Weight>::max());
    Weight base = 0;
    for (std::size_t mi = 0; mi < pool.size(); ++mi) {
      bool pu = !in_attack[mi][static_cast<std::size_t>(u)];
      bool pv = !in_attack[mi][static_cast<std::size_t>(v)];
      Weight delta = 0;
      if (pu) {
        for (const auto& [x, w] : inst.neighbors(u)) {
          if (x == v || in_attack[mi][static_cast<std::size_t>(x)]) continue;
          int bx = assign[static_cast<std::size_t>(x)];
          if (bx == av) delta += w;
          if (bx == au) delta -= w;
        }
      }
      if (pv) {
        for (const auto& [x, w] : inst.neighbors(v)) {
          if (x == u || in_attack[mi][static_cast<std::size_t>(x)]) continue;
          int bx = assign[static_cast<std::size_t>(x)];
          if (bx == au) delta += w;
          if (bx == av) delta -= w;
        }
      }
      // Live counts change only when exactly one endpoint is hidden by the
      // attack; with both present the exchange is size-neutral.
      ExtendedValue val = ExtendedValue::neg_infinity();
      if (pu && !pv) {
        val = row_value(mi, delta, true, au, av);
      } else if (!pu && pv) {
        val = row_value(mi, delta, true, av, au);
      } else {
        val = row_value(mi, delta, false, -1, -1);
      }
      if (mi == 0) base = value_m[0] + delta;
      if (val < mn) {
        mn = val;
        if (!mn.is_finite()) break;
      }
    }
    return {mn, base};
  }

  // Hill climb from `start` over single-node moves, falling back to pair
  // swaps on a plateau. Greedy mode takes the best improvement of the whole
  // neighborhood, which funnels toward dense in-subset weight mass; the
  // randomized mode takes the first improvement of a per-climb shuffled scan,
  // which spreads restarts over distinct local optima so the counterexample
  // loop can harvest several cuts per round. Counts applied steps into
  // verdict.partitions_examined.
  std::vector<int> climb(std::vector<int> start, bool greedy, Rng& rng,
                         DefenderVerdict& verdict) {
    std::vector<std::pair<NodeId, int>> moves;
    for (NodeId u = 1; u <= n; ++u) {
      for (int to = (incomplete ? -1 : 0); to < k; ++to) moves.emplace_back(u, to);
    }
    std::vector<std::pair<NodeId, NodeId>> swaps;
    for (NodeId u = 1; u <= n; ++u) {
      for (NodeId v = u + 1; v <= n; ++v) swaps.emplace_back(u, v);
    }
    if (!greedy) {
      rng.shuffle(moves);
      rng.shuffle(swaps);
    }

    load(start);
    auto current = objective();
    ++verdict.partitions_examined;
    for (;;) {
      NodeId best_u = 0, best_v = 0;
      int best_to = 0;
      bool best_is_swap = false;
      auto best_obj = current;
      for (const auto& [u, to] : moves) {
        int from = assign[static_cast<std::size_t>(u)];
        if (to == from || (from < 0 && to < 0)) continue;
        auto cand = eval_move(u, to);
        if (cand > best_obj) {
          best_obj = cand;
          best_u = u;
          best_to = to;
          if (!greedy) break;
        }
      }
      if (best_u == 0) {
        for (const auto& [u, v] : swaps) {
          if (assign[static_cast<std::size_t>(u)] == assign[static_cast<std::size_t>(v)]) continue;
          auto cand = eval_swap(u, v);
          if (cand > best_obj) {
            best_obj = cand;
            best_u = u;
            best_v = v;
            best_is_swap = true;
            if (!greedy) break;
          }
        }
      }
      if (best_u == 0) break;
      if (best_is_swap) {
        std::swap(assign[static_cast<std::size_t>(best_u)], assign[static_cast<std::size_t>(best_v)]);
      } else {
        assign[static_cast<std::size_t>(best_u)] = best_to;
      }
      load(assign);
      current = best_obj;
      ++verdict.partitions_examined;
    }
    return assign;
  }

  std::vector<int> random_start(Rng& rng) const {
    std::vector<NodeId> shuffled(static_cast<std::size_t>(n));
    for (int v = 1; v <= n; ++v) shuffled[static_cast<std::size_t>(v - 1)] = v;
    rng.shuffle(shuffled);
    std::vector<int> a(static_cast<std::size_t>(n) + 1, -1);
    for (int s = 0; s < k; ++s) a[static_cast<std::size_t>(shuffled[static_cast<std::size_t>(s)])] = s;
    for (int i = k; i < n; ++i) {
      int choice = incomplete ? static_cast<int>(rng.below(static_cast<std::uint64_t>(k) + 1)) - 1
                              : static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
      a[static_cast<std::size_t>(shuffled[static_cast<std::size_t>(i)])] = choice;
    }
    return a;
  }
};

// One local-search master round: a greedy climb continuing the warm chain
// (perturbed harder the longer the oracle has kept repeating pooled attacks),
// then seeded greedy restarts only while no candidate beats theta against the
// pool. The first pool-beating candidate is handed to the oracle; if none
// appears, the best local optimum is. Keeping the warm chain in charge lets
// successive cuts morph one trajectory toward a survivor instead of hopping
// between unrelated basins.
struct LocalCandidate {
  Partition partition;
  ExtendedValue pool_value = ExtendedValue::neg_infinity();
  std::vector<int> assignment;
};

LocalCandidate local_master(const Instance& inst, const SearchConfig& cfg,
                            const std::vector<AttackSet>& pool, std::uint64_t round_seed,
                            const std::optional<std::vector<int>>& warm, int stalled_rounds,
                            DefenderVerdict& verdict) {
  LocalMaster master(inst, pool, cfg.allow_incomplete);
  Rng rng(round_seed);
  LocalCandidate best;
  bool have = false;

  auto consider = [&](std::vector<int> start) {
    std::vector<int> local = master.climb(std::move(start), /*greedy=*/true, rng, verdict);
    master.load(local);
    auto obj = master.objective();
    if (!have || best.pool_value < obj.first) {
      best.partition = canonicalize(partition_from_assignment(local, inst.n(), inst.k()));
      best.pool_value = obj.first;
      best.assignment = std::move(local);
      have = true;
    }
    return best.pool_value.at_least(inst.theta());
  };

  bool done = false;
  if (warm) {
    std::vector<int> start = *warm;
    if (stalled_rounds > 0) {
      // Kick a growing share of nodes to fresh subsets so the climb leaves
      // the basin the pool has already punished.
      int strength = std::min(inst.n(), 3 + 3 * stalled_rounds);
      for (int i = 0; i < strength; ++i) {
        NodeId v = 1 + static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(inst.n())));
        int choice = cfg.allow_incomplete
                         ? static_cast<int>(rng.below(static_cast<std::uint64_t>(inst.k()) + 1)) - 1
                         : static_cast<int>(rng.below(static_cast<std::uint64_t>(inst.k())));
        start[static_cast<std::size_t>(v)] = choice;
      }
    }
    done = consider(std::move(start));
  }
  for (int r = 0; r < kLocalRestarts && !done; ++r) {
    done = consider(master.random_start(rng));
  }
  return best;
}

DefenderVerdict make_yes(const Instance& inst, Partition cert, DefenderVerdict verdict) {
  AttackStats stats;
  VerifyResult check = verify(inst, cert, &stats);
  verdict.attacks_examined += stats.attacks_evaluated;
  if (!check.holds) {
    throw std::logic_error("defender: YES certificate failed re-verification");
  }
  verdict.answer = Answer::Yes;
  verdict.certificate = std::move(cert);
  return verdict;
}

}  // namespace

bool enumerate_partitions(int n, int k, bool allow_incomplete,
                          const std::function<bool(const Partition&)>& visit) {
  if (n < 1) throw input_error("enumerate_partitions: n must be positive");
  if (k < 1 || k > n) {
    throw input_error("enumerate_partitions: need 1 <= k <= n, got k=" + std::to_string(k) +
                      ", n=" + std::to_string(n));
  }
  std::function<bool(const std::vector<int>&)> on_assign = [&](const std::vector<int>& a) {
    return visit(partition_from_assignment(a, n, k));
  };
  AssignmentEnumerator e(n, k, allow_incomplete, on_assign);
  e.rec(1, 0);
  return !e.stopped;
}

std::uint64_t count_partitions(int n, int k, bool allow_incomplete) {
  if (k < 1 || k > n) return 0;
  if (!allow_incomplete) return stirling2(n, k);
  std::uint64_t total = 0;
  for (int t = k; t <= n; ++t) {
    total = sat_add(total, sat_mul(binomial(n, t), stirling2(t, k)));
  }
  return total;
}

DefenderVerdict solve_exhaustive(const Instance& inst, const SearchConfig& cfg,
                                 std::vector<NoEvidence>* debug_no_evidence) {
  check_partition_space(inst, cfg);
  DefenderVerdict verdict;
  verdict.answer = Answer::No;
  enumerate_partitions(inst.n(), inst.k(), cfg.allow_incomplete, [&](const Partition& p) {
    ++verdict.partitions_examined;
    if (deficit(p, inst.m()) > 0) return true;  // pruned without attacker calls
    AttackStats stats;
    VerifyResult vr = verify(inst, p, &stats);
    verdict.attacks_examined += stats.attacks_evaluated;
    if (vr.holds) {
      verdict.answer = Answer::Yes;
      verdict.certificate = p;
      return false;
    }
    if (debug_no_evidence) debug_no_evidence->push_back(NoEvidence{p, vr.witness});
    return true;
  });
  return verdict;
}

DefenderVerdict solve_ccg(const Instance& inst, const SearchConfig& cfg, CcgTrace* trace) {
  DefenderVerdict verdict;
  std::vector<AttackSet> pool;
  pool.push_back(AttackSet{});  // the empty attack: screens W(p) itself

  if (cfg.master == MasterMode::Exhaustive) {
    check_partition_space(inst, cfg);
    for (;;) {
      ExactMasterResult m = exact_master(inst, cfg, pool, verdict);
      if (!m.best) {  // no deficit-free partition exists at all
        verdict.answer = Answer::No;
        break;
      }
      if (trace) trace->master_values.push_back(m.value);
      if (!m.value.at_least(inst.theta())) {
        // The pool minimum upper-bounds the true attacked value, so a master
        // optimum below theta settles the instance.
        verdict.answer = Answer::No;
        break;
      }
      AttackStats stats;
      AttackResult oracle = best_attack_bnb(inst, *m.best, &stats);
      verdict.attacks_examined += stats.attacks_evaluated;
      if (oracle.value.at_least(inst.theta())) {
        verdict = make_yes(inst, *m.best, std::move(verdict));
        break;
      }
      for (const AttackSet& a : pool) {
        if (a == oracle.attack) {
          throw std::logic_error("defender: oracle repeated a pooled attack");
        }
      }
      pool.push_back(oracle.attack);
    }
  } else {
    long long rounds = cfg.max_iterations > 0 ? cfg.max_iterations : kDefaultCcgRounds;
    std::optional<std::vector<int>> warm;
    int stalled_rounds = 0;
    verdict.answer = Answer::Unknown;
    for (long long round = 0; round < rounds; ++round) {
      LocalCandidate candidate =
          local_master(inst, cfg, pool, cfg.seed + static_cast<std::uint64_t>(round) * 0x9e3779b97f4a7c15ULL,
                       warm, stalled_rounds, verdict);
      if (trace) trace->master_values.push_back(candidate.pool_value);
      AttackStats stats;
      AttackResult oracle = best_attack_bnb(inst, candidate.partition, &stats);
      verdict.attacks_examined += stats.attacks_evaluated;
      if (oracle.value.at_least(inst.theta())) {
        verdict = make_yes(inst, candidate.partition, std::move(verdict));
        break;
      }
      bool known = false;
      for (const AttackSet& a : pool) {
        if (a == oracle.attack) { known = true; break; }
      }
      if (!known) pool.push_back(oracle.attack);
      stalled_rounds = known ? stalled_rounds + 1 : 0;
      // Warm-start the next round from this candidate: the fresh cut reshapes
      // its neighborhood rather than the whole landscape.
      warm = std::move(candidate.assignment);
    }
  }
  if (trace) trace->pool_size = pool.size();
  return verdict;
}

}  // namespace mmkp
