#pragma once
// Line-oriented text formats for instances, partitions and the three source
// problems, the gadget-map sidecar writer, the structured run report, and the
// seeded instance generator. Parsing reports errors with file name and line
// number; serializers emit canonical bytes so parse-then-serialize is the
// identity on anything this tool writes.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "mmkp/oracles.hpp"
#include "mmkp/reductions.hpp"

namespace mmkp {

// Instance files:   header "mmkp 1", one "p <n> <k> <m> <theta>" line, then
//                   "w <i> <j> <weight>" lines with 1 <= i < j <= n, each
//                   pair at most once, weight != 0. '#' starts a comment.
Instance parse_instance(std::istream& in, const std::string& source_name,
                        std::vector<std::string>* warnings = nullptr);
std::string serialize_instance(const Instance& inst);

// Partition files:  header "part <k>", then "s <idx> <node>..." for idx 1..k
//                   in order. Unassigned nodes are simply not listed.
Partition parse_partition(std::istream& in, const std::string& source_name);
std::string serialize_partition(const Partition& p);

// Source files. VC: "vc 1", "v <count> <budget>", "e <i> <j>" lines.
// MMVC adds "g <index> <side> <vertex>..." group lines. QSAT: "qsat 1",
// "a <x-vars...>", "e <y-vars...>", then clause lines of three signed
// integers terminated by 0.
VcInstance parse_vc(std::istream& in, const std::string& source_name);
std::string serialize_vc(const VcInstance& src);
MmvcInstance parse_mmvc(std::istream& in, const std::string& source_name);
std::string serialize_mmvc(const MmvcInstance& src);
QSatInstance parse_qsat(std::istream& in, const std::string& source_name);
std::string serialize_qsat(const QSatInstance& src);

/// Write-only audit sidecar for reductions: parameters, padding log, node
/// roles and one-links, in a fixed order.
std::string serialize_gadget_map(const GadgetMap& gm);

/// Ordered key-value report; identical inputs, flags and seeds give identical
/// bytes (wall time is only present when explicitly requested).
struct RunReport {
  std::vector<std::pair<std::string, std::string>> fields;

  void add(std::string key, std::string value);
  void add(std::string key, long long value);
  std::string render() const;
};

std::string format_nodes(const std::vector<NodeId>& nodes);     // "1,4,7" or "-"
std::string format_partition_inline(const Partition& p);        // "{1,2}|{3}"

/// Seeded uniform instance generator: each pair appears independently with
/// the given density and carries a uniform nonzero integer weight from
/// [wmin, wmax].
struct GenParams {
  int n = 0;
  int k = 2;
  int m = 0;
  Weight theta = 0;
  Weight wmin = -1;
  Weight wmax = 1;
  double density = 0.5;
  std::uint64_t seed = 0;
};
Instance generate_instance(const GenParams& params);

}  // namespace mmkp
