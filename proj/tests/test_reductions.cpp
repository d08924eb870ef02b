#include <doctest.h>

#include <map>
#include <set>

#include "mmkp/attacker.hpp"
#include "mmkp/defender.hpp"
#include "mmkp/oracles.hpp"
#include "mmkp/reductions.hpp"
#include "test_util.hpp"

using namespace mmkp;

namespace {

Partition parts(std::vector<std::vector<NodeId>> subsets) {
  Partition p;
  p.subsets = std::move(subsets);
  return p;
}

QSatInstance implication_pair() {
  // (x1 v y1 v y2) and (-x1 v -y1 v y2), variables: x={1}, y={2,3}.
  return make_qsat_instance({1}, {2, 3}, {QSatClause{{1, 2, 3}}, QSatClause{{-1, -2, 3}}});
}

QSatInstance forced_contradiction() {
  // (x1 v y1 v y1) and (x1 v -y1 v -y1): falsified exactly by x1=0.
  return make_qsat_instance({1}, {2}, {QSatClause{{1, 2, 2}}, QSatClause{{1, -2, -2}}});
}

// One clause without an X-literal plus one with: exercises the side-1
// isolation rules and the padding path (alpha grows to 4).
QSatInstance mixed_y_clause() {
  return make_qsat_instance({1}, {2, 3, 4},
                            {QSatClause{{2, 3, 4}}, QSatClause{{1, -2, 3}}});
}

}  // namespace

TEST_SUITE("reductions") {

TEST_CASE("cover reduction on the unit path, the edgeless graph and the triangle") {
  // Path 1-2-3, budget 1: cover {2} exists, so verification fails.
  VcReduction path = reduce_vc_to_attacker(make_vc_instance(3, {{1, 2}, {2, 3}}, 1));
  CHECK(path.instance.n() == 3);
  CHECK(path.instance.k() == 1);
  CHECK(path.instance.m() == 1);
  CHECK(path.instance.theta() == 1);
  CHECK(path.instance.weight(1, 2) == 1);
  CHECK(path.instance.weight(1, 3) == 0);
  VerifyResult vr = verify(path.instance, path.partition);
  CHECK(!vr.holds);
  CHECK(vr.witness == make_attack({2}));

  // Edgeless, budget 0: the empty attack already reaches value 0 <= theta-1.
  VcReduction edgeless = reduce_vc_to_attacker(make_vc_instance(3, {}, 0));
  VerifyResult ve = verify(edgeless.instance, edgeless.partition);
  CHECK(!ve.holds);
  CHECK(ve.witness.nodes.empty());

  // Triangle, budget 1: no single vertex covers all three edges.
  VcReduction tri = reduce_vc_to_attacker(make_vc_instance(3, {{1, 2}, {1, 3}, {2, 3}}, 1));
  CHECK(verify(tri.instance, tri.partition).holds);
}

TEST_CASE("f_nm values, convexity and the closed form") {
  CHECK(f_nm(4, 1, 0) == 7);
  CHECK(f_nm(4, 1, 1) == 6);
  CHECK(f_nm(4, 1, 2) == 7);
  CHECK(f_nm(2, 1, 1) == 0);
  CHECK_THROWS_AS(f_nm(3, 2, 0), input_error);   // 2m > n
  CHECK_THROWS_AS(f_nm(4, 1, 3), input_error);   // x > 2m
  for (int n = 2; n <= 12; ++n) {
    for (int m = 1; 2 * m <= n; ++m) {
      long long at_minimum = f_nm(n, m, m);
      long long constant = f_nm(n, m, 0);  // closed form: f(x) = f(0) + x(x-2m)
      for (int x = 0; x <= 2 * m; ++x) {
        long long value = f_nm(n, m, x);
        CHECK(value == constant + static_cast<long long>(x) * (x - 2 * m));
        if (x != m) CHECK(value > at_minimum);
      }
    }
  }
}

TEST_CASE("two-subset reduction: weights, threshold and both answer directions") {
  // One edge inside group (1,0), budget 1: a yes-source, so the reduced
  // two-subset question answers NO.
  MmvcInstance yes_src = make_mmvc_instance(1, 2, {{std::vector<int>{1, 2}, std::vector<int>{3, 4}}},
                                            {{1, 2}}, 1);
  Mm2pReduction yes_red = reduce_mmvc_to_mm2p(yes_src);
  CHECK(yes_red.instance.n() == 4);
  CHECK(yes_red.instance.k() == 2);
  CHECK(yes_red.instance.m() == 2);
  CHECK(yes_red.instance.theta() == 1);  // f_nm(2,1,1) + 1
  CHECK(yes_red.gadget.lambda == 16);
  CHECK(yes_red.instance.weight(1, 2) == 2);   // the source edge
  CHECK(yes_red.instance.weight(1, 3) == -16); // cross pair
  CHECK(yes_red.instance.weight(1, 4) == -16);
  CHECK(yes_red.instance.weight(3, 4) == 1);   // plain pair
  CHECK(solve_mmvc(yes_src).yes);
  SearchConfig cfg;
  cfg.allow_incomplete = true;
  CHECK(solve_exhaustive(yes_red.instance, cfg).answer == Answer::No);

  // One edge inside each side, budget 0: no cover of size 0, and the side
  // split survives the (empty) attack.
  MmvcInstance no_src = make_mmvc_instance(1, 2, {{std::vector<int>{1, 2}, std::vector<int>{3, 4}}},
                                           {{1, 2}, {3, 4}}, 0);
  Mm2pReduction no_red = reduce_mmvc_to_mm2p(no_src);
  CHECK(!solve_mmvc(no_src).yes);
  CHECK(solve_exhaustive(no_red.instance, cfg).answer == Answer::Yes);

  // Weight alphabet audit on a larger mixed example.
  MmvcInstance mixed = make_mmvc_instance(
      2, 2,
      {{std::vector<int>{1, 2}, std::vector<int>{3, 4}}, {std::vector<int>{5, 6}, std::vector<int>{7, 8}}},
      {{1, 5}, {2, 7}, {3, 8}}, 1);
  Mm2pReduction mixed_red = reduce_mmvc_to_mm2p(mixed);
  for (const auto& [i, j, w] : mixed_red.instance.pairs_sorted()) {
    (void)i;
    (void)j;
    CHECK((w == -mixed_red.gadget.lambda || w == 1 || w == 2));
  }
  for (int i = 0; i < mixed.index_count; ++i) {
    for (int a : mixed.groups[static_cast<std::size_t>(i)][0]) {
      for (int b : mixed.groups[static_cast<std::size_t>(i)][1]) {
        CHECK(mixed_red.instance.weight(a, b) == -mixed_red.gadget.lambda);
      }
    }
  }

  CHECK_THROWS_AS(
      reduce_mmvc_to_mm2p(make_mmvc_instance(
          1, 1, {{std::vector<int>{1}, std::vector<int>{2}}}, {}, 1)),
      input_error);  // 2*budget exceeds the per-side size
}

TEST_CASE("proper two-subset splits: membership and count") {
  MmvcInstance src = make_mmvc_instance(
      2, 1, {{std::vector<int>{1}, std::vector<int>{2}}, {std::vector<int>{3}, std::vector<int>{4}}},
      {}, 0);
  Mm2pReduction red = reduce_mmvc_to_mm2p(src);
  CHECK(check_proper_2partition(red.instance, red.gadget, parts({{1, 3}, {2, 4}})));
  CHECK(check_proper_2partition(red.instance, red.gadget, parts({{1, 4}, {2, 3}})));
  CHECK(!check_proper_2partition(red.instance, red.gadget, parts({{1, 2}, {3, 4}})));
  CHECK(!check_proper_2partition(red.instance, red.gadget, parts({{1}, {2, 4}})));  // incomplete
  CHECK_THROWS_AS(check_proper_2partition(red.instance, red.gadget, parts({{1, 2, 3, 4}})),
                  input_error);

  // 2^(|I|-1) proper splits, |I| up to 4 (subsets are unordered).
  for (int index_count = 1; index_count <= 4; ++index_count) {
    std::vector<std::array<std::vector<int>, 2>> groups;
    for (int i = 0; i < index_count; ++i) {
      groups.push_back({std::vector<int>{2 * i + 1}, std::vector<int>{2 * i + 2}});
    }
    Mm2pReduction r = reduce_mmvc_to_mm2p(make_mmvc_instance(index_count, 1, groups, {}, 0));
    long long proper = 0;
    enumerate_partitions(r.instance.n(), 2, false, [&](const Partition& p) {
      if (check_proper_2partition(r.instance, r.gadget, p)) ++proper;
      return true;
    });
    CHECK(proper == (1LL << (index_count - 1)));
  }
}

TEST_CASE("defeating attacks on proper splits are balanced") {
  // Per-side size 3 with budget 1 keeps the deficit at zero, so no attack can
  // fall back on emptying a side.
  MmvcInstance src = make_mmvc_instance(1, 3, {{std::vector<int>{1, 2, 3}, std::vector<int>{4, 5, 6}}},
                                        {{1, 2}}, 1);
  Mm2pReduction red = reduce_mmvc_to_mm2p(src);
  const Weight theta = red.instance.theta();
  long long defeating = 0;
  enumerate_partitions(red.instance.n(), 2, false, [&](const Partition& p) {
    if (!check_proper_2partition(red.instance, red.gadget, p)) return true;
    std::set<NodeId> side0(p.subsets[0].begin(), p.subsets[0].end());
    enumerate_attacks(red.instance, p, red.instance.m(),
                      [&](const std::vector<NodeId>& nodes, ExtendedValue value) {
                        if (value <= ExtendedValue::finite(theta - 1)) {
                          ++defeating;
                          long long in0 = 0;
                          for (NodeId v : nodes) in0 += side0.count(v) != 0;
                          CHECK(in0 == src.budget);
                          CHECK(static_cast<long long>(nodes.size()) - in0 == src.budget);
                        }
                        return true;
                      });
    return true;
  });
  CHECK(defeating > 0);
}

TEST_CASE("clause normalization") {
  QSatInstance two_x = make_qsat_instance({1, 2}, {3}, {QSatClause{{1, 2, 3}}});
  QSatInstance norm = normalize_clauses(two_x);
  REQUIRE(norm.clauses.size() == 2);
  CHECK(norm.clauses[0].lits == std::array<int, 3>{1, 4, 3});
  CHECK(norm.clauses[1].lits == std::array<int, 3>{2, -4, 3});
  CHECK(norm.y_vars == std::vector<int>{3, 4});
  CHECK(norm.x_literal_count(norm.clauses[0]) == 1);

  QSatInstance untouched = implication_pair();
  QSatInstance same = normalize_clauses(untouched);
  CHECK(same.clauses.size() == untouched.clauses.size());
  for (std::size_t i = 0; i < same.clauses.size(); ++i) {
    CHECK(same.clauses[i].lits == untouched.clauses[i].lits);
  }

  QSatInstance pure = make_qsat_instance({1, 2, 3}, {4}, {QSatClause{{1, 2, 3}}});
  CHECK(normalize_clauses(pure).pure_x_clause_count() == 1);  // preserved, flagged

  // Answer invariance on seeded random formulas.
  Rng rng(8888);
  for (int round = 0; round < 25; ++round) {
    std::vector<int> xs = {1, 2}, ys = {3, 4};
    std::vector<QSatClause> clauses;
    int count = 1 + static_cast<int>(rng.below(4));
    for (int c = 0; c < count; ++c) {
      QSatClause clause;
      for (int t = 0; t < 3; ++t) {
        int var = 1 + static_cast<int>(rng.below(4));
        clause.lits[static_cast<std::size_t>(t)] = rng.below(2) == 0 ? var : -var;
      }
      clauses.push_back(clause);
    }
    QSatInstance src = make_qsat_instance(xs, ys, clauses);
    CHECK(solve_qsat2(src).yes == solve_qsat2(normalize_clauses(src)).yes);
  }
}

TEST_CASE("three-subset reduction: structure of the smallest gadget") {
  Mm3pReduction red = reduce_qsat_to_mm3p(implication_pair());
  const Instance& inst = red.instance;
  const GadgetMap& gm = red.gadget;

  CHECK(gm.alpha == 2);
  CHECK(inst.n() == 22);
  CHECK(inst.m() == 4);
  CHECK(inst.k() == 3);
  CHECK(gm.lambda == 484);
  CHECK(gm.mu1 == 4);
  CHECK(gm.mu2 == 4);
  CHECK(inst.theta() - 1 == 48 * 484 + 8);
  CHECK(gm.padding_log.empty());

  int core = 0, tetrad = 0, halves = 0;
  for (int v = 1; v <= inst.n(); ++v) {
    switch (gm.roles[static_cast<std::size_t>(v)].kind) {
      case NodeKind::core_clique: ++core; break;
      case NodeKind::half_anchor: ++halves; break;
      case NodeKind::source_vertex: break;
      default: ++tetrad; break;
    }
  }
  CHECK(core == 4);
  CHECK(tetrad == 16);
  CHECK(halves == 2);

  // Stored weights are only lambda and lambda+1 (zeros are absent pairs).
  for (const auto& [i, j, w] : inst.pairs_sorted()) {
    (void)i;
    (void)j;
    CHECK((w == gm.lambda || w == gm.lambda + 1));
  }

  // X-scenario nodes have no one-links leaving their tetrad.
  for (const auto& [u, v] : gm.one_links) {
    const NodeRole& ru = gm.roles[static_cast<std::size_t>(u)];
    const NodeRole& rv = gm.roles[static_cast<std::size_t>(v)];
    if (ru.kind == NodeKind::tetrad_x || rv.kind == NodeKind::tetrad_x) {
      CHECK(ru.clause == rv.clause);
      CHECK(ru.side == rv.side);
    }
  }

  // Side-selection partitions: sizes, anchor containment, one-link constancy.
  for (int mask = 0; mask < 2; ++mask) {
    std::map<int, int> assign{{1, mask}};
    Partition p = proper_3partition_for(gm, assign);
    std::vector<int> which(static_cast<std::size_t>(inst.n()) + 1, -1);
    int big = -1, h1 = -1, h2 = -1;
    for (int s = 0; s < 3; ++s) {
      for (NodeId v : p.subsets[static_cast<std::size_t>(s)]) {
        which[static_cast<std::size_t>(v)] = s;
        if (v == inst.n() - 1) h1 = s;
        if (v == inst.n()) h2 = s;
      }
    }
    for (int s = 0; s < 3; ++s) {
      if (s != h1 && s != h2) big = s;
    }
    CHECK(p.subsets[static_cast<std::size_t>(big)].size() == 12);  // 3m
    CHECK(p.subsets[static_cast<std::size_t>(h1)].size() == 5);    // m+1
    CHECK(p.subsets[static_cast<std::size_t>(h2)].size() == 5);
    long long links1 = 0, links2 = 0;
    for (const auto& [u, v] : gm.one_links) {
      if (which[static_cast<std::size_t>(u)] == h1 && which[static_cast<std::size_t>(v)] == h1) ++links1;
      if (which[static_cast<std::size_t>(u)] == h2 && which[static_cast<std::size_t>(v)] == h2) ++links2;
    }
    CHECK(links1 == gm.mu1);
    CHECK(links2 == gm.mu2);
    for (int v = 1; v <= inst.n(); ++v) {
      if (gm.roles[static_cast<std::size_t>(v)].kind == NodeKind::core_clique) {
        CHECK(which[static_cast<std::size_t>(v)] == big);
      }
    }
  }

  CHECK_THROWS_AS(proper_3partition_for(gm, {}), input_error);  // partial assignment
}

TEST_CASE("three-subset reduction rejects clauses with two or more X-literals") {
  QSatInstance bad = make_qsat_instance({1, 2}, {3}, {QSatClause{{1, 2, 3}}});
  CHECK_THROWS_WITH_AS(reduce_qsat_to_mm3p(bad), doctest::Contains("X-literals"), input_error);
  QSatInstance pure = make_qsat_instance({1, 2, 5}, {3}, {QSatClause{{1, 2, 5}}});
  CHECK_THROWS_AS(reduce_qsat_to_mm3p(pure), input_error);
}

TEST_CASE("yes-formula: every side-selection partition is defeated two nodes per tetrad") {
  Mm3pReduction red = reduce_qsat_to_mm3p(implication_pair());
  const Instance& inst = red.instance;
  const GadgetMap& gm = red.gadget;
  const Weight theta = inst.theta();

  for (int mask = 0; mask < 2; ++mask) {
    std::map<int, int> assign{{1, mask}};
    Partition p = proper_3partition_for(gm, assign);
    AttackResult best = best_attack_exhaustive(inst, p);
    CHECK(best.value == ExtendedValue::finite(theta - 1));  // defeated, and exactly to theta-1

    // Selected tetrad per clause under this assignment.
    std::vector<std::set<NodeId>> selected;
    for (const auto& cg : gm.clauses) {
      int side = cg.x_lit == 0 ? 0
                 : cg.x_lit > 0 ? assign.at(cg.x_lit)
                                : 1 - assign.at(-cg.x_lit);
      const auto& nodes = cg.nodes[static_cast<std::size_t>(side)];
      selected.emplace_back(nodes.begin(), nodes.end());
    }
    long long defeating = 0;
    enumerate_attacks(inst, p, inst.m(),
                      [&](const std::vector<NodeId>& nodes, ExtendedValue value) {
                        if (!(value <= ExtendedValue::finite(theta - 1))) return true;
                        ++defeating;
                        long long covered = 0;
                        for (const auto& tetrad : selected) {
                          long long inside = 0;
                          for (NodeId v : nodes) inside += tetrad.count(v) != 0;
                          CHECK(inside == 2);
                          covered += inside;
                        }
                        CHECK(covered == static_cast<long long>(nodes.size()));
                        return true;
                      });
    CHECK(defeating > 0);
  }
}

TEST_CASE("no-formula: the falsifying side-selection partition survives") {
  Mm3pReduction red = reduce_qsat_to_mm3p(forced_contradiction());
  const GadgetMap& gm = red.gadget;

  Partition survivor = proper_3partition_for(gm, {{1, 0}});  // x1 = 0 falsifies
  CHECK(verify(red.instance, survivor).holds);

  Partition defeated = proper_3partition_for(gm, {{1, 1}});  // x1 = 1 satisfies
  AttackResult best = best_attack_exhaustive(red.instance, defeated);
  CHECK(best.value == ExtendedValue::finite(red.instance.theta() - 1));
}

TEST_CASE("clauses without X-literals: padding, isolation rules and a hand witness") {
  Mm3pReduction red = reduce_qsat_to_mm3p(mixed_y_clause());
  const Instance& inst = red.instance;
  const GadgetMap& gm = red.gadget;

  CHECK(gm.alpha == 4);  // padded from 2 clauses
  CHECK(!gm.padding_log.empty());
  CHECK(inst.n() == 42);
  CHECK(inst.m() == 8);
  CHECK(gm.lambda == 42 * 42);
  CHECK(gm.clauses[0].y_clause);   // reordered first
  CHECK(!gm.clauses[1].y_clause);
  CHECK(gm.mu1 == 8);   // 3 (triangle) + 4 (compensated tetrad) + 1 (cross pair)
  CHECK(gm.mu2 == 8);   // two compensated duplicate tetrads, no cross pair
  CHECK(inst.theta() - 1 == 192 * gm.lambda + 16);

  // Link rules around the X-less clause: its side-1 tetrad touches only its
  // own kind, the first-half X-tetrads and the first half anchor.
  const ClauseGadget& cy = gm.clauses[0];
  const ClauseGadget& cx1 = gm.clauses[1];  // first half
  const ClauseGadget& cx2 = gm.clauses[2];  // second half
  NodeId pos_y = cy.nodes[1][0];
  NodeId neg_y = cy.nodes[0][0];
  NodeId core = 0;
  for (int v = 1; v <= inst.n(); ++v) {
    if (gm.roles[static_cast<std::size_t>(v)].kind == NodeKind::core_clique) core = v;
  }
  CHECK(inst.weight(pos_y, core) == 0);
  CHECK(inst.weight(neg_y, core) == gm.lambda);
  CHECK(inst.weight(pos_y, cx1.nodes[1][3]) == gm.lambda);  // first-half X, either side
  CHECK(inst.weight(pos_y, cx1.nodes[0][0]) == gm.lambda);
  CHECK(inst.weight(pos_y, cx2.nodes[1][0]) == 0);          // second-half X
  CHECK(inst.weight(neg_y, cx2.nodes[1][0]) == gm.lambda);
  CHECK(inst.weight(pos_y, neg_y) == 0);                    // the two scenarios stay apart
  NodeId half1 = inst.n() - 1;
  CHECK(inst.weight(cy.nodes[1][3], half1) == gm.lambda);   // no bonus on the X-less z-node
  CHECK(inst.weight(neg_y, half1) == 0);
  CHECK(inst.weight(cx1.nodes[1][3], half1) == gm.lambda + 1);

  // Hand-built defeat of the x1=0 side selection: in the X-less tetrad drop
  // the false-literal nodes, in every X-clause tetrad drop the X-scenario
  // node and its first literal node (tau_y makes variable 3 true).
  Partition p = proper_3partition_for(gm, {{1, 0}});
  std::vector<NodeId> attack_nodes;
  for (const auto& cg : gm.clauses) {
    if (cg.y_clause) {
      // tau_y makes y2 (variable 3) true; variables 2 and 4 stay false.
      for (int slot = 0; slot < 3; ++slot) {
        int lit = cg.y_lits[static_cast<std::size_t>(slot)];
        bool lit_true = lit == 3 || lit == -2 || lit == -4;
        if (!lit_true) attack_nodes.push_back(cg.nodes[0][static_cast<std::size_t>(slot)]);
      }
    } else {
      attack_nodes.push_back(cg.nodes[0][0]);  // the X-scenario node
      attack_nodes.push_back(cg.nodes[0][1]);  // leaves the true literal y2
    }
  }
  REQUIRE(attack_nodes.size() == 8);
  ExtendedValue after = partition_value(inst, apply_attack(p, make_attack(attack_nodes)));
  CHECK(after == ExtendedValue::finite(inst.theta() - 1));
}

TEST_CASE("clauses without X-literals: full restricted certification of a yes-formula") {
  XcheckReport report = xcheck(mixed_y_clause(), 8, /*improper_samples=*/40, /*ccg_rounds=*/50);
  for (const auto& c : report.cases) {
    INFO(c.name, ": ", c.detail);
    CHECK(c.pass);
  }
}

}  // TEST_SUITE
