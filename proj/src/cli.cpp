#include "mmkp/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "mmkp/attacker.hpp"
#include "mmkp/defender.hpp"
#include "mmkp/io.hpp"
#include "mmkp/oracles.hpp"

namespace mmkp::cli {

namespace {

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  long long elapsed_ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                 start)
        .count();
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error(path + ": cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw input_error(path + ": cannot open for writing");
  out << content;
  if (!out) throw input_error(path + ": write failed");
}

Instance load_instance(const std::string& path, std::ostream& err) {
  std::istringstream in(read_file(path));
  std::vector<std::string> warnings;
  Instance inst = parse_instance(in, path, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << '\n';
  return inst;
}

Partition load_partition(const std::string& path, const Instance& inst) {
  std::istringstream in(read_file(path));
  Partition p = parse_partition(in, path);
  if (static_cast<int>(p.subsets.size()) != inst.k()) {
    throw input_error(path + ": partition has " + std::to_string(p.subsets.size()) +
                      " subsets but the instance asks for k=" + std::to_string(inst.k()));
  }
  for (const auto& subset : p.subsets) {
    for (NodeId v : subset) {
      if (v < 1 || v > inst.n()) {
        throw input_error(path + ": node " + std::to_string(v) + " out of range 1.." +
                          std::to_string(inst.n()));
      }
    }
  }
  return canonicalize(p);
}

void emit(RunReport& report, const Timer& timer, bool timing, std::ostream& out) {
  if (timing) report.add("walltime_ms", timer.elapsed_ms());
  out << report.render();
}

// ---------------------------------------------------------------------------

struct CommonOpts {
  bool timing = false;
  int negative_exit = 1;
};

int cmd_verify(const std::string& instance_path, const std::string& partition_path,
               const CommonOpts& common, std::ostream& out, std::ostream& err) {
  Timer timer;
  Instance inst = load_instance(instance_path, err);
  Partition p = load_partition(partition_path, inst);
  AttackStats stats;
  VerifyResult result = verify(inst, p, &stats);
  RunReport report;
  report.add("command", "verify");
  report.add("instance", instance_path);
  report.add("partition", partition_path);
  report.add("theta", inst.theta());
  report.add("verdict", result.holds ? "HOLDS" : "FAILS");
  if (!result.holds) {
    report.add("witness", format_nodes(result.witness.nodes));
    report.add("witness_value", to_string(result.witness_value));
  }
  report.add("attacks_examined", stats.attacks_evaluated);
  emit(report, timer, common.timing, out);
  return result.holds ? 0 : common.negative_exit;
}

int cmd_attack(const std::string& instance_path, const std::string& partition_path,
               const CommonOpts& common, std::ostream& out, std::ostream& err) {
  Timer timer;
  Instance inst = load_instance(instance_path, err);
  Partition p = load_partition(partition_path, inst);
  AttackStats stats;
  AttackResult result = best_attack_bnb(inst, p, &stats);
  RunReport report;
  report.add("command", "attack");
  report.add("instance", instance_path);
  report.add("partition", partition_path);
  report.add("attack", format_nodes(result.attack.nodes));
  report.add("value", to_string(result.value));
  report.add("attacks_examined", stats.attacks_evaluated);
  emit(report, timer, common.timing, out);
  return 0;
}

int cmd_solve(const std::string& instance_path, const SearchConfig& cfg,
              const std::string& out_path, const CommonOpts& common, std::ostream& out,
              std::ostream& err) {
  Timer timer;
  Instance inst = load_instance(instance_path, err);
  DefenderVerdict verdict = cfg.algorithm == Algorithm::Exhaustive
                                ? solve_exhaustive(inst, cfg)
                                : solve_ccg(inst, cfg);
  RunReport report;
  report.add("command", "solve");
  report.add("instance", instance_path);
  report.add("algorithm", cfg.algorithm == Algorithm::Exhaustive ? "exhaustive" : "ccg");
  if (cfg.algorithm == Algorithm::Ccg) {
    report.add("master", cfg.master == MasterMode::Exhaustive ? "exhaustive" : "local");
    report.add("seed", static_cast<long long>(cfg.seed));
  }
  report.add("allow_incomplete", cfg.allow_incomplete ? "1" : "0");
  const char* answer = verdict.answer == Answer::Yes   ? "YES"
                       : verdict.answer == Answer::No  ? "NO"
                                                       : "UNKNOWN";
  report.add("answer", answer);
  if (verdict.certificate) {
    report.add("certificate", format_partition_inline(*verdict.certificate));
    if (!out_path.empty()) {
      write_file(out_path, serialize_partition(*verdict.certificate));
      report.add("certificate_file", out_path);
    }
  }
  report.add("partitions_examined", verdict.partitions_examined);
  report.add("attacks_examined", verdict.attacks_examined);
  emit(report, timer, common.timing, out);
  if (verdict.answer == Answer::Yes) return 0;
  if (verdict.answer == Answer::No) return common.negative_exit;
  return 2;
}

int cmd_reduce(const std::string& kind, const std::string& source_path, const std::string& out_path,
               const CommonOpts& common, std::ostream& out, std::ostream& err) {
  (void)err;
  Timer timer;
  RunReport report;
  report.add("command", "reduce");
  report.add("kind", kind);
  report.add("source", source_path);
  std::string content = read_file(source_path);
  if (kind == "vc") {
    std::istringstream in(content);
    VcInstance src = parse_vc(in, source_path);
    VcReduction red = reduce_vc_to_attacker(src);
    write_file(out_path, serialize_instance(red.instance));
    write_file(out_path + ".part", serialize_partition(red.partition));
    report.add("n", red.instance.n());
    report.add("k", red.instance.k());
    report.add("m", red.instance.m());
    report.add("theta", red.instance.theta());
    report.add("instance_file", out_path);
    report.add("partition_file", out_path + ".part");
  } else if (kind == "mmvc") {
    std::istringstream in(content);
    MmvcInstance src = parse_mmvc(in, source_path);
    Mm2pReduction red = reduce_mmvc_to_mm2p(src);
    write_file(out_path, serialize_instance(red.instance));
    write_file(out_path + ".gadget", serialize_gadget_map(red.gadget));
    report.add("n", red.instance.n());
    report.add("k", red.instance.k());
    report.add("m", red.instance.m());
    report.add("lambda", red.gadget.lambda);
    report.add("theta", red.instance.theta());
    report.add("per_side_n", red.gadget.per_side_n);
    report.add("instance_file", out_path);
    report.add("gadget_file", out_path + ".gadget");
  } else if (kind == "qsat") {
    std::istringstream in(content);
    QSatInstance src = parse_qsat(in, source_path);
    QSatInstance norm = normalize_clauses(src);
    Mm3pReduction red = reduce_qsat_to_mm3p(norm);
    write_file(out_path, serialize_instance(red.instance));
    write_file(out_path + ".gadget", serialize_gadget_map(red.gadget));
    report.add("n", red.instance.n());
    report.add("k", red.instance.k());
    report.add("m", red.instance.m());
    report.add("alpha", red.gadget.alpha);
    report.add("lambda", red.gadget.lambda);
    report.add("mu1", red.gadget.mu1);
    report.add("mu2", red.gadget.mu2);
    report.add("theta", red.instance.theta());
    report.add("padding_steps", static_cast<long long>(red.gadget.padding_log.size()));
    report.add("instance_file", out_path);
    report.add("gadget_file", out_path + ".gadget");
  } else {
    throw input_error("reduce: unknown kind '" + kind + "' (expected vc, mmvc or qsat)");
  }
  emit(report, timer, common.timing, out);
  return 0;
}

int cmd_gen(const GenParams& params, const std::string& out_path, const CommonOpts& common,
            std::ostream& out, std::ostream& err) {
  (void)err;
  Timer timer;
  Instance inst = generate_instance(params);
  std::string text = serialize_instance(inst);
  if (out_path.empty()) {
    out << text;
    return 0;
  }
  write_file(out_path, text);
  RunReport report;
  report.add("command", "gen");
  report.add("n", params.n);
  report.add("k", params.k);
  report.add("m", params.m);
  report.add("theta", params.theta);
  report.add("seed", static_cast<long long>(params.seed));
  report.add("pairs", static_cast<long long>(inst.pair_count()));
  report.add("instance_file", out_path);
  emit(report, timer, common.timing, out);
  return 0;
}

// ---------------------------------------------------------------------------
// Cross-check sweeps.

struct SweepTally {
  long long total = 0;
  long long passed = 0;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> failures;

  void absorb(const std::string& label, const XcheckReport& report) {
    ++total;
    if (report.all_pass()) {
      ++passed;
      return;
    }
    for (const auto& c : report.cases) {
      if (!c.pass) failures.push_back(label + ": " + c.name + " (" + c.detail + ")");
    }
  }
};

int finish_sweep(const std::string& kind, const SweepTally& tally, bool restricted,
                 const CommonOpts& common, const Timer& timer, std::ostream& out) {
  bool pass = tally.failures.empty() && tally.passed == tally.total;
  RunReport report;
  report.add("command", "xcheck");
  report.add("kind", kind);
  if (restricted) report.add("mode", "restricted");
  if (tally.seed) report.add("seed", static_cast<long long>(*tally.seed));
  report.add("cases_total", tally.total);
  report.add("cases_passed", tally.passed);
  for (const auto& f : tally.failures) report.add("fail", f);
  report.add("result", pass ? "PASS" : "FAIL");
  emit(report, timer, common.timing, out);
  return pass ? 0 : common.negative_exit;
}

int cmd_xcheck_vc(int vertices, int max_budget, const CommonOpts& common, std::ostream& out) {
  Timer timer;
  if (vertices < 1 || vertices > 5) {
    throw refusal_error("xcheck vc: refusing " + std::to_string(vertices) +
                        " vertices (supported range is 1..5; the sweep is exponential in pairs)");
  }
  std::vector<std::pair<int, int>> all_pairs;
  for (int i = 1; i <= vertices; ++i) {
    for (int j = i + 1; j <= vertices; ++j) all_pairs.emplace_back(i, j);
  }
  SweepTally tally;
  for (std::uint32_t mask = 0; mask < (1u << all_pairs.size()); ++mask) {
    std::vector<std::pair<int, int>> edges;
    for (std::size_t idx = 0; idx < all_pairs.size(); ++idx) {
      if ((mask >> idx) & 1u) edges.push_back(all_pairs[idx]);
    }
    for (int budget = 0; budget <= max_budget; ++budget) {
      VcInstance src = make_vc_instance(vertices, edges, budget);
      tally.absorb("graph " + std::to_string(mask) + " budget " + std::to_string(budget),
                   xcheck(src));
    }
  }
  return finish_sweep("vc", tally, false, common, timer, out);
}

int cmd_xcheck_mmvc(int max_index, int max_group, int max_edges, int max_budget,
                    const CommonOpts& common, std::ostream& out) {
  Timer timer;
  if (max_index > 2 || max_group > 2 || max_edges > 4 || max_budget > 2) {
    throw refusal_error(
        "xcheck mmvc: refusing the requested sweep (supported: index <= 2, group <= 2, "
        "edges <= 4, budget <= 2; the target side is a full two-level search)");
  }
  SweepTally tally;
  for (int index_count = 1; index_count <= max_index; ++index_count) {
    for (int group_size = 1; group_size <= max_group; ++group_size) {
      // Canonical layout: group (i, side) holds gs consecutive vertices.
      std::vector<std::array<std::vector<int>, 2>> groups(static_cast<std::size_t>(index_count));
      std::vector<std::pair<int, int>> owner;  // vertex -> (index, side)
      int n = index_count * group_size * 2;
      owner.assign(static_cast<std::size_t>(n) + 1, {0, -1});
      int next = 1;
      for (int i = 0; i < index_count; ++i) {
        for (int side = 0; side < 2; ++side) {
          for (int g = 0; g < group_size; ++g) {
            groups[static_cast<std::size_t>(i)][static_cast<std::size_t>(side)].push_back(next);
            owner[static_cast<std::size_t>(next)] = {i + 1, side};
            ++next;
          }
        }
      }
      std::vector<std::pair<int, int>> allowed;
      for (int a = 1; a <= n; ++a) {
        for (int b = a + 1; b <= n; ++b) {
          if (owner[static_cast<std::size_t>(a)].first == owner[static_cast<std::size_t>(b)].first &&
              owner[static_cast<std::size_t>(a)].second != owner[static_cast<std::size_t>(b)].second) {
            continue;  // within-index cross-side pairs never matter
          }
          allowed.emplace_back(a, b);
        }
      }
      // Every edge subset of size <= max_edges, by size then lexicographically.
      std::vector<std::size_t> chosen;
      long long case_id = 0;
      std::function<void(std::size_t, int)> enumerate = [&](std::size_t pos, int remaining) {
        if (remaining == 0) {
          std::vector<std::pair<int, int>> edges;
          for (std::size_t idx : chosen) edges.push_back(allowed[idx]);
          for (int budget = 0; budget <= max_budget; ++budget) {
            if (2 * budget > index_count * group_size) continue;
            MmvcInstance src = make_mmvc_instance(index_count, group_size, groups, edges, budget);
            tally.absorb("I=" + std::to_string(index_count) + " g=" + std::to_string(group_size) +
                             " set#" + std::to_string(case_id) + " budget=" +
                             std::to_string(budget),
                         xcheck(src));
          }
          ++case_id;
          return;
        }
        for (std::size_t i = pos; i + static_cast<std::size_t>(remaining) <= allowed.size(); ++i) {
          chosen.push_back(i);
          enumerate(i + 1, remaining - 1);
          chosen.pop_back();
        }
      };
      for (int size = 0; size <= max_edges && size <= static_cast<int>(allowed.size()); ++size) {
        enumerate(0, size);
      }
    }
  }
  return finish_sweep("mmvc", tally, false, common, timer, out);
}

int cmd_xcheck_qsat(const std::string& file, std::uint64_t seed, int samples, long long rounds,
                    const CommonOpts& common, std::ostream& out) {
  Timer timer;
  SweepTally tally;
  tally.seed.emplace(seed);
  if (!file.empty()) {
    std::istringstream in(read_file(file));
    QSatInstance src = parse_qsat(in, file);
    tally.absorb(file, xcheck(src, seed, samples, rounds));
  } else {
    for (const auto& fixture : builtin_qsat_suite()) {
      XcheckReport report = xcheck(fixture.instance, seed, samples, rounds);
      // The frozen hand-derived answer doubles as an oracle regression check.
      QSatAnswer oracle = solve_qsat2(fixture.instance);
      report.cases.push_back(XcheckCase{"expected-answer", oracle.yes == fixture.forall_exists_yes,
                                        std::string("oracle says ") + (oracle.yes ? "yes" : "no")});
      tally.absorb(fixture.name, report);
    }
  }
  return finish_sweep("qsat", tally, true, common, timer, out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact solvers and reduction toolkit for max-min k-partition"};
  app.require_subcommand(1);
  CommonOpts common;
  app.add_flag("--timing", common.timing, "append a walltime_ms field to reports");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "decide W_-m(partition) >= theta");
  std::string v_instance, v_partition;
  verify_cmd->add_option("instance", v_instance, "instance file")->required();
  verify_cmd->add_option("partition", v_partition, "partition file")->required();
  verify_cmd->add_option("--negative-exit", common.negative_exit,
                         "exit status for a FAILS/NO result");

  // attack
  auto* attack_cmd = app.add_subcommand("attack", "best attack against a partition");
  std::string a_instance, a_partition;
  attack_cmd->add_option("instance", a_instance, "instance file")->required();
  attack_cmd->add_option("partition", a_partition, "partition file")->required();

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "search for a surviving partition");
  std::string s_instance, s_algo = "exhaustive", s_master = "exhaustive", s_out;
  SearchConfig s_cfg;
  long long s_seed = 0;
  solve_cmd->add_option("instance", s_instance, "instance file")->required();
  solve_cmd->add_option("--algo", s_algo, "exhaustive | ccg")
      ->check(CLI::IsMember({"exhaustive", "ccg"}));
  solve_cmd->add_option("--master", s_master, "ccg master: exhaustive | local")
      ->check(CLI::IsMember({"exhaustive", "local"}));
  solve_cmd->add_flag("--allow-incomplete", s_cfg.allow_incomplete,
                      "search over incomplete partitions as well");
  solve_cmd->add_option("--seed", s_seed, "seed for the local-search master");
  solve_cmd->add_option("--max-iter", s_cfg.max_iterations,
                        "partition budget (exhaustive) or CCG round budget (local master)");
  solve_cmd->add_option("--out", s_out, "write the YES certificate partition here");
  solve_cmd->add_option("--negative-exit", common.negative_exit, "exit status for a NO result");

  // reduce
  auto* reduce_cmd = app.add_subcommand("reduce", "compile a source problem into an instance");
  std::string r_kind, r_source, r_out;
  reduce_cmd->add_option("--kind", r_kind, "vc | mmvc | qsat")
      ->required()
      ->check(CLI::IsMember({"vc", "mmvc", "qsat"}));
  reduce_cmd->add_option("source", r_source, "source problem file")->required();
  reduce_cmd->add_option("--out", r_out, "output instance path (sidecars derive from it)")
      ->required();

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "seeded random instance");
  GenParams g_params;
  long long g_seed = 0;
  std::string g_out;
  gen_cmd->add_option("--n", g_params.n, "node count")->required();
  gen_cmd->add_option("--k", g_params.k, "subset count")->required();
  gen_cmd->add_option("--m", g_params.m, "attack budget")->required();
  gen_cmd->add_option("--theta", g_params.theta, "threshold (default 0)");
  gen_cmd->add_option("--wmin", g_params.wmin, "minimum weight (default -1)");
  gen_cmd->add_option("--wmax", g_params.wmax, "maximum weight (default 1)");
  gen_cmd->add_option("--density", g_params.density, "pair inclusion probability (default 0.5)");
  gen_cmd->add_option("--seed", g_seed, "generator seed");
  gen_cmd->add_option("--out", g_out, "write to a file instead of stdout");

  // xcheck
  auto* xcheck_cmd = app.add_subcommand("xcheck", "certify a reduction against its oracle");
  std::string x_kind, x_file;
  int x_vertices = 4, x_max_budget = 2;
  int x_max_index = 2, x_max_group = 2, x_max_edges = 3;
  long long x_seed = 0, x_rounds = 600;
  int x_samples = 200;
  xcheck_cmd->add_option("--kind", x_kind, "vc | mmvc | qsat")
      ->required()
      ->check(CLI::IsMember({"vc", "mmvc", "qsat"}));
  xcheck_cmd->add_option("--file", x_file, "qsat: check this file instead of the built-in suite");
  xcheck_cmd->add_option("--vertices", x_vertices, "vc: sweep all labeled graphs of this order");
  xcheck_cmd->add_option("--max-budget", x_max_budget, "vc/mmvc: largest source budget");
  xcheck_cmd->add_option("--max-index", x_max_index, "mmvc: largest index count");
  xcheck_cmd->add_option("--max-group", x_max_group, "mmvc: largest group size");
  xcheck_cmd->add_option("--max-edges", x_max_edges, "mmvc: largest edge-set size");
  xcheck_cmd->add_option("--seed", x_seed, "seed for sampling and local search");
  xcheck_cmd->add_option("--samples", x_samples, "qsat: improper partitions to sample");
  xcheck_cmd->add_option("--rounds", x_rounds, "qsat: CCG round budget");
  xcheck_cmd->add_option("--negative-exit", common.negative_exit,
                         "exit status when any check fails");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 3;
  }

  try {
    if (verify_cmd->parsed()) return cmd_verify(v_instance, v_partition, common, out, err);
    if (attack_cmd->parsed()) return cmd_attack(a_instance, a_partition, common, out, err);
    if (solve_cmd->parsed()) {
      s_cfg.algorithm = s_algo == "ccg" ? Algorithm::Ccg : Algorithm::Exhaustive;
      s_cfg.master = s_master == "local" ? MasterMode::LocalSearch : MasterMode::Exhaustive;
      s_cfg.seed = static_cast<std::uint64_t>(s_seed);
      return cmd_solve(s_instance, s_cfg, s_out, common, out, err);
    }
    if (reduce_cmd->parsed()) return cmd_reduce(r_kind, r_source, r_out, common, out, err);
    if (gen_cmd->parsed()) {
      g_params.seed = static_cast<std::uint64_t>(g_seed);
      return cmd_gen(g_params, g_out, common, out, err);
    }
    if (xcheck_cmd->parsed()) {
      if (x_kind == "vc") return cmd_xcheck_vc(x_vertices, x_max_budget, common, out);
      if (x_kind == "mmvc") {
        return cmd_xcheck_mmvc(x_max_index, x_max_group, x_max_edges, x_max_budget, common, out);
      }
      return cmd_xcheck_qsat(x_file, static_cast<std::uint64_t>(x_seed), x_samples, x_rounds,
                             common, out);
    }
    err << "error: no subcommand selected\n";
    return 3;
  } catch (const refusal_error& e) {
    err << "refused: " << e.what() << '\n';
    return 2;
  } catch (const input_error& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 4;
  }
}

}  // namespace mmkp::cli
