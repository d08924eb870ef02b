#include <doctest.h>

#include "mmkp/defender.hpp"
#include "test_util.hpp"

using namespace mmkp;

namespace {

Instance all_ones_k4(Weight theta) {
  return Instance::create(4, 2, 1, theta,
                          {{1, 2, 1}, {1, 3, 1}, {1, 4, 1}, {2, 3, 1}, {2, 4, 1}, {3, 4, 1}});
}

Partition parts(std::vector<std::vector<NodeId>> subsets) {
  Partition p;
  p.subsets = std::move(subsets);
  return p;
}

}  // namespace

TEST_SUITE("defender") {

TEST_CASE("enumeration counts match the labeling oracle") {
  // Spot values from the stream itself.
  long long count = 0;
  enumerate_partitions(4, 2, false, [&](const Partition&) {
    ++count;
    return true;
  });
  CHECK(count == 7);  // partitions of a 4-set into 2 nonempty subsets

  count = 0;
  Partition only;
  enumerate_partitions(3, 3, false, [&](const Partition& p) {
    ++count;
    only = p;
    return true;
  });
  CHECK(count == 1);
  CHECK(only == parts({{1}, {2}, {3}}));

  count = 0;
  enumerate_partitions(2, 2, true, [&](const Partition& p) {
    ++count;
    CHECK(p == parts({{1}, {2}}));
    return true;
  });
  CHECK(count == 1);  // leaving any node out would empty a subset

  // Full agreement with an independent enumeration for small sizes, in both
  // modes: same set of canonical partitions, each visited exactly once.
  for (int n = 1; n <= 6; ++n) {
    for (int k = 1; k <= n && k <= 4; ++k) {
      for (bool incomplete : {false, true}) {
        auto expected = test::label_oracle_partitions(n, k, incomplete);
        std::set<std::vector<std::vector<NodeId>>> seen;
        enumerate_partitions(n, k, incomplete, [&](const Partition& p) {
          CHECK(canonicalize(p) == p);
          CHECK(seen.insert(p.subsets).second);  // no duplicates
          return true;
        });
        CHECK(seen == expected);
        CHECK(count_partitions(n, k, incomplete) == expected.size());
      }
    }
  }
}

TEST_CASE("enumeration rejects bad arguments") {
  CHECK_THROWS_AS(enumerate_partitions(3, 4, false, [](const Partition&) { return true; }),
                  input_error);
}

TEST_CASE("exhaustive defender on the all-ones 4-node instance") {
  SearchConfig cfg;
  DefenderVerdict yes = solve_exhaustive(all_ones_k4(0), cfg);
  CHECK(yes.answer == Answer::Yes);
  REQUIRE(yes.certificate.has_value());
  CHECK(*yes.certificate == parts({{1, 2}, {3, 4}}));  // first balanced split in order

  DefenderVerdict no = solve_exhaustive(all_ones_k4(2), cfg);
  CHECK(no.answer == Answer::No);

  // Threshold above the sum of all positive weights: hopeless.
  DefenderVerdict hopeless = solve_exhaustive(all_ones_k4(7), cfg);
  CHECK(hopeless.answer == Answer::No);
}

TEST_CASE("exhaustive defender refuses oversized spaces explicitly") {
  Instance inst = test::random_instance(1, 12, 3, 1, 0);
  SearchConfig cfg;
  cfg.max_iterations = 100;  // far below S(12,3)
  CHECK_THROWS_AS(solve_exhaustive(inst, cfg), refusal_error);
}

TEST_CASE("debug mode hands back a failing attack per deficit-free partition") {
  Instance inst = all_ones_k4(2);
  SearchConfig cfg;
  std::vector<NoEvidence> evidence;
  DefenderVerdict verdict = solve_exhaustive(inst, cfg, &evidence);
  CHECK(verdict.answer == Answer::No);
  CHECK(!evidence.empty());
  for (const auto& e : evidence) {
    CHECK(deficit(e.partition, inst.m()) == 0);
    CHECK(static_cast<int>(e.failing_attack.nodes.size()) <= inst.m());
    CHECK(partition_value(inst, apply_attack(e.partition, e.failing_attack)) <=
          ExtendedValue::finite(inst.theta() - 1));
  }
  // Deficit-free complete 2-partitions of 4 nodes under budget 1: the three
  // balanced splits, each with its own counterexample.
  CHECK(evidence.size() == 3);
}

TEST_CASE("ccg with the exact master agrees with exhaustive search") {
  Rng rng(314159);
  int yes_seen = 0, no_seen = 0;
  for (int round = 0; round < 60; ++round) {
    int n = 4 + static_cast<int>(rng.below(5));  // up to 8
    int k = 2 + static_cast<int>(rng.below(2));
    int m = static_cast<int>(rng.below(3));
    Weight theta = static_cast<Weight>(rng.range(-2, 4));
    Instance inst = test::random_instance(120000 + static_cast<std::uint64_t>(round), n, k, m, theta);
    SearchConfig cfg;
    DefenderVerdict ex = solve_exhaustive(inst, cfg);
    cfg.algorithm = Algorithm::Ccg;
    cfg.master = MasterMode::Exhaustive;
    CcgTrace trace;
    DefenderVerdict cc = solve_ccg(inst, cfg, &trace);
    CHECK(ex.answer == cc.answer);
    if (cc.answer == Answer::Yes) {
      ++yes_seen;
      REQUIRE(cc.certificate.has_value());
      CHECK(verify(inst, *cc.certificate).holds);
    } else {
      ++no_seen;
    }
    // Pool monotonicity: the exact master's objective never increases.
    for (std::size_t i = 1; i < trace.master_values.size(); ++i) {
      CHECK(trace.master_values[i] <= trace.master_values[i - 1]);
    }
    // Termination bookkeeping: one pooled attack per non-final round.
    CHECK(trace.pool_size <= trace.master_values.size() + 1);
  }
  CHECK(yes_seen > 0);
  CHECK(no_seen > 0);
}

TEST_CASE("ccg answers yes immediately for an unreachable threshold") {
  int n = 8, k = 2, m = 1;
  long long bound = static_cast<long long>(n) * n * n * n;
  GenParams params;
  params.n = n;
  params.k = k;
  params.m = m;
  params.theta = -bound;
  params.wmin = -(static_cast<Weight>(n) * n + 1);
  params.wmax = static_cast<Weight>(n) * n + 1;
  params.density = 0.5;
  params.seed = 77;
  Instance inst = generate_instance(params);
  SearchConfig cfg;
  cfg.algorithm = Algorithm::Ccg;
  cfg.master = MasterMode::Exhaustive;
  CcgTrace trace;
  DefenderVerdict verdict = solve_ccg(inst, cfg, &trace);
  CHECK(verdict.answer == Answer::Yes);
  CHECK(trace.master_values.size() == 1);  // the first candidate already survives
  CHECK(trace.pool_size == 1);
}

TEST_CASE("ccg with the local master finds certificates and stays sound") {
  Rng rng(271828);
  for (int round = 0; round < 20; ++round) {
    int n = 5 + static_cast<int>(rng.below(4));
    int k = 2;
    int m = 1;
    Weight theta = static_cast<Weight>(rng.range(-2, 3));
    Instance inst = test::random_instance(360000 + static_cast<std::uint64_t>(round), n, k, m, theta);
    SearchConfig cfg;
    DefenderVerdict ex = solve_exhaustive(inst, cfg);
    cfg.algorithm = Algorithm::Ccg;
    cfg.master = MasterMode::LocalSearch;
    cfg.max_iterations = 40;
    cfg.seed = 5 + static_cast<std::uint64_t>(round);
    DefenderVerdict cc = solve_ccg(inst, cfg);
    if (cc.answer == Answer::Yes) {
      CHECK(ex.answer == Answer::Yes);  // YES is always sound
      REQUIRE(cc.certificate.has_value());
      CHECK(verify(inst, *cc.certificate).holds);
    } else {
      CHECK(cc.answer == Answer::Unknown);  // the local master cannot prove NO
      CHECK(ex.answer == Answer::No);       // and it only gives up on real NOs here
    }
  }
}

}  // TEST_SUITE
