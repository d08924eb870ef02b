#include "mmkp/io.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <set>
#include <sstream>

#include "mmkp/rng.hpp"

namespace mmkp {

namespace {

// Comment-stripped, tokenized lines with their 1-based numbers.
struct Line {
  int number = 0;
  std::vector<std::string> tokens;
};

std::vector<Line> read_lines(std::istream& in) {
  std::vector<Line> lines;
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ss(raw);
    Line line;
    line.number = number;
    std::string token;
    while (ss >> token) line.tokens.push_back(token);
    if (!line.tokens.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

[[noreturn]] void fail(const std::string& source, int line, const std::string& message) {
  throw input_error(source + ":" + std::to_string(line) + ": " + message);
}

long long parse_int(const std::string& source, int line, const std::string& token) {
  long long value = 0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    fail(source, line, "expected an integer, got '" + token + "'");
  }
  return value;
}

void expect_tokens(const std::string& source, const Line& line, std::size_t count) {
  if (line.tokens.size() != count) {
    fail(source, line.number, "directive '" + line.tokens[0] + "' expects " +
                                  std::to_string(count - 1) + " arguments");
  }
}

void check_header(const std::string& source, const std::vector<Line>& lines, const char* magic) {
  if (lines.empty()) throw input_error(source + ": empty file");
  const Line& first = lines.front();
  if (first.tokens.size() != 2 || first.tokens[0] != magic || first.tokens[1] != "1") {
    fail(source, first.number, std::string("expected header '") + magic + " 1'");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Instance files.

Instance parse_instance(std::istream& in, const std::string& source_name,
                        std::vector<std::string>* warnings) {
  auto lines = read_lines(in);
  check_header(source_name, lines, "mmkp");
  bool have_p = false;
  long long n = 0, k = 0, m = 0, theta = 0;
  std::vector<std::tuple<NodeId, NodeId, Weight>> pairs;
  std::set<std::pair<int, int>> seen;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const Line& line = lines[li];
    const std::string& head = line.tokens[0];
    if (head == "p") {
      expect_tokens(source_name, line, 5);
      if (have_p) fail(source_name, line.number, "duplicate 'p' line");
      n = parse_int(source_name, line.number, line.tokens[1]);
      k = parse_int(source_name, line.number, line.tokens[2]);
      m = parse_int(source_name, line.number, line.tokens[3]);
      theta = parse_int(source_name, line.number, line.tokens[4]);
      have_p = true;
    } else if (head == "w") {
      expect_tokens(source_name, line, 4);
      if (!have_p) fail(source_name, line.number, "'w' line before the 'p' line");
      long long i = parse_int(source_name, line.number, line.tokens[1]);
      long long j = parse_int(source_name, line.number, line.tokens[2]);
      long long w = parse_int(source_name, line.number, line.tokens[3]);
      if (i == j) {
        fail(source_name, line.number,
             "self-loop weight w(" + std::to_string(i) + "," + std::to_string(j) +
                 ") is not allowed: w(i,i) = 0 implicitly");
      }
      if (i < 1 || j < 1 || i > n || j > n) {
        fail(source_name, line.number, "node id out of range 1.." + std::to_string(n));
      }
      if (i > j) fail(source_name, line.number, "'w' lines require i < j");
      if (w == 0) fail(source_name, line.number, "zero weights must be omitted");
      if (!seen.insert({static_cast<int>(i), static_cast<int>(j)}).second) {
        fail(source_name, line.number, "duplicate pair {" + std::to_string(i) + "," +
                                           std::to_string(j) + "}");
      }
      pairs.emplace_back(static_cast<int>(i), static_cast<int>(j), w);
    } else {
      fail(source_name, line.number, "unknown directive '" + head + "'");
    }
  }
  if (!have_p) throw input_error(source_name + ": missing 'p' line");
  try {
    return Instance::create(static_cast<int>(n), static_cast<int>(k), static_cast<int>(m), theta,
                            pairs, warnings);
  } catch (const input_error& e) {
    throw input_error(source_name + ": " + e.what());
  }
}

std::string serialize_instance(const Instance& inst) {
  std::ostringstream out;
  out << "mmkp 1\n";
  out << "p " << inst.n() << ' ' << inst.k() << ' ' << inst.m() << ' ' << inst.theta() << '\n';
  for (const auto& [i, j, w] : inst.pairs_sorted()) {
    out << "w " << i << ' ' << j << ' ' << w << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Partition files.

Partition parse_partition(std::istream& in, const std::string& source_name) {
  auto lines = read_lines(in);
  if (lines.empty()) throw input_error(source_name + ": empty file");
  const Line& first = lines.front();
  if (first.tokens.size() != 2 || first.tokens[0] != "part") {
    fail(source_name, first.number, "expected header 'part <k>'");
  }
  long long k = parse_int(source_name, first.number, first.tokens[1]);
  if (k < 1) fail(source_name, first.number, "subset count must be positive");
  Partition p;
  p.subsets.assign(static_cast<std::size_t>(k), {});
  std::set<NodeId> seen;
  long long next_idx = 1;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const Line& line = lines[li];
    if (line.tokens[0] != "s") fail(source_name, line.number, "expected 's' lines after the header");
    if (line.tokens.size() < 2) fail(source_name, line.number, "'s' line needs a subset index");
    long long idx = parse_int(source_name, line.number, line.tokens[1]);
    if (idx != next_idx) {
      fail(source_name, line.number, "expected subset index " + std::to_string(next_idx) +
                                         ", got " + std::to_string(idx));
    }
    ++next_idx;
    for (std::size_t t = 2; t < line.tokens.size(); ++t) {
      long long v = parse_int(source_name, line.number, line.tokens[t]);
      if (v < 1) fail(source_name, line.number, "node ids must be positive");
      if (!seen.insert(static_cast<NodeId>(v)).second) {
        fail(source_name, line.number, "node " + std::to_string(v) + " listed twice");
      }
      p.subsets[static_cast<std::size_t>(idx - 1)].push_back(static_cast<NodeId>(v));
    }
  }
  if (next_idx != k + 1) {
    throw input_error(source_name + ": expected " + std::to_string(k) + " 's' lines, got " +
                      std::to_string(next_idx - 1));
  }
  for (auto& subset : p.subsets) std::sort(subset.begin(), subset.end());
  return p;
}

std::string serialize_partition(const Partition& p) {
  std::ostringstream out;
  out << "part " << p.subsets.size() << '\n';
  for (std::size_t s = 0; s < p.subsets.size(); ++s) {
    out << "s " << s + 1;
    for (NodeId v : p.subsets[s]) out << ' ' << v;
    out << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Source files.

VcInstance parse_vc(std::istream& in, const std::string& source_name) {
  auto lines = read_lines(in);
  check_header(source_name, lines, "vc");
  long long count = -1, budget = -1;
  std::vector<std::pair<int, int>> edges;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const Line& line = lines[li];
    const std::string& head = line.tokens[0];
    if (head == "v") {
      expect_tokens(source_name, line, 3);
      count = parse_int(source_name, line.number, line.tokens[1]);
      budget = parse_int(source_name, line.number, line.tokens[2]);
    } else if (head == "e") {
      expect_tokens(source_name, line, 3);
      if (count < 0) fail(source_name, line.number, "'e' line before the 'v' line");
      edges.emplace_back(static_cast<int>(parse_int(source_name, line.number, line.tokens[1])),
                         static_cast<int>(parse_int(source_name, line.number, line.tokens[2])));
    } else {
      fail(source_name, line.number, "unknown directive '" + head + "'");
    }
  }
  if (count < 0) throw input_error(source_name + ": missing 'v' line");
  try {
    return make_vc_instance(static_cast<int>(count), std::move(edges), static_cast<int>(budget));
  } catch (const input_error& e) {
    throw input_error(source_name + ": " + e.what());
  }
}

std::string serialize_vc(const VcInstance& src) {
  std::ostringstream out;
  out << "vc 1\n";
  out << "v " << src.vertex_count << ' ' << src.budget << '\n';
  for (const auto& [a, b] : src.edges) out << "e " << a << ' ' << b << '\n';
  return out.str();
}

MmvcInstance parse_mmvc(std::istream& in, const std::string& source_name) {
  auto lines = read_lines(in);
  check_header(source_name, lines, "mmvc");
  long long count = -1, budget = -1;
  std::vector<std::pair<int, int>> edges;
  std::map<std::pair<int, int>, std::vector<int>> groups;  // (index, side) -> members
  int max_index = 0;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const Line& line = lines[li];
    const std::string& head = line.tokens[0];
    if (head == "v") {
      expect_tokens(source_name, line, 3);
      count = parse_int(source_name, line.number, line.tokens[1]);
      budget = parse_int(source_name, line.number, line.tokens[2]);
    } else if (head == "g") {
      if (line.tokens.size() < 4) {
        fail(source_name, line.number, "'g' line needs an index, a side and at least one vertex");
      }
      int index = static_cast<int>(parse_int(source_name, line.number, line.tokens[1]));
      int side = static_cast<int>(parse_int(source_name, line.number, line.tokens[2]));
      if (index < 1) fail(source_name, line.number, "group index must be positive");
      if (side != 0 && side != 1) fail(source_name, line.number, "group side must be 0 or 1");
      auto key = std::make_pair(index, side);
      if (groups.count(key) != 0) {
        fail(source_name, line.number, "duplicate group (" + std::to_string(index) + "," +
                                           std::to_string(side) + ")");
      }
      std::vector<int> members;
      for (std::size_t t = 3; t < line.tokens.size(); ++t) {
        members.push_back(static_cast<int>(parse_int(source_name, line.number, line.tokens[t])));
      }
      groups[key] = std::move(members);
      max_index = std::max(max_index, index);
    } else if (head == "e") {
      expect_tokens(source_name, line, 3);
      edges.emplace_back(static_cast<int>(parse_int(source_name, line.number, line.tokens[1])),
                         static_cast<int>(parse_int(source_name, line.number, line.tokens[2])));
    } else {
      fail(source_name, line.number, "unknown directive '" + head + "'");
    }
  }
  if (count < 0) throw input_error(source_name + ": missing 'v' line");
  std::vector<std::array<std::vector<int>, 2>> group_list(static_cast<std::size_t>(max_index));
  for (int i = 1; i <= max_index; ++i) {
    for (int side = 0; side < 2; ++side) {
      auto it = groups.find({i, side});
      if (it == groups.end()) {
        throw input_error(source_name + ": missing group (" + std::to_string(i) + "," +
                          std::to_string(side) + ")");
      }
      group_list[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(side)] = it->second;
    }
  }
  int group_size = max_index > 0 ? static_cast<int>(group_list[0][0].size()) : 0;
  try {
    return make_mmvc_instance(max_index, group_size, std::move(group_list), std::move(edges),
                              static_cast<int>(budget));
  } catch (const input_error& e) {
    throw input_error(source_name + ": " + e.what());
  }
}

std::string serialize_mmvc(const MmvcInstance& src) {
  std::ostringstream out;
  out << "mmvc 1\n";
  out << "v " << src.vertex_count() << ' ' << src.budget << '\n';
  for (int i = 0; i < src.index_count; ++i) {
    for (int side = 0; side < 2; ++side) {
      out << "g " << i + 1 << ' ' << side;
      for (int v : src.groups[static_cast<std::size_t>(i)][static_cast<std::size_t>(side)]) {
        out << ' ' << v;
      }
      out << '\n';
    }
  }
  for (const auto& [a, b] : src.edges) out << "e " << a << ' ' << b << '\n';
  return out.str();
}

QSatInstance parse_qsat(std::istream& in, const std::string& source_name) {
  auto lines = read_lines(in);
  check_header(source_name, lines, "qsat");
  std::vector<int> x_vars, y_vars;
  bool have_x = false, have_y = false;
  std::vector<QSatClause> clauses;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const Line& line = lines[li];
    const std::string& head = line.tokens[0];
    if (head == "a") {
      if (have_x) fail(source_name, line.number, "duplicate 'a' line");
      for (std::size_t t = 1; t < line.tokens.size(); ++t) {
        x_vars.push_back(static_cast<int>(parse_int(source_name, line.number, line.tokens[t])));
      }
      have_x = true;
    } else if (head == "e") {
      if (have_y) fail(source_name, line.number, "duplicate 'e' line");
      for (std::size_t t = 1; t < line.tokens.size(); ++t) {
        y_vars.push_back(static_cast<int>(parse_int(source_name, line.number, line.tokens[t])));
      }
      have_y = true;
    } else {
      // Clause line: three signed literals terminated by 0.
      if (line.tokens.size() != 4) {
        fail(source_name, line.number, "clause lines hold three literals terminated by 0");
      }
      QSatClause c;
      for (int t = 0; t < 3; ++t) {
        c.lits[static_cast<std::size_t>(t)] = static_cast<int>(
            parse_int(source_name, line.number, line.tokens[static_cast<std::size_t>(t)]));
      }
      if (parse_int(source_name, line.number, line.tokens[3]) != 0) {
        fail(source_name, line.number, "clause lines must end with 0");
      }
      clauses.push_back(c);
    }
  }
  try {
    return make_qsat_instance(std::move(x_vars), std::move(y_vars), std::move(clauses));
  } catch (const input_error& e) {
    throw input_error(source_name + ": " + e.what());
  }
}

std::string serialize_qsat(const QSatInstance& src) {
  std::ostringstream out;
  out << "qsat 1\n";
  out << "a";
  for (int v : src.x_vars) out << ' ' << v;
  out << '\n';
  out << "e";
  for (int v : src.y_vars) out << ' ' << v;
  out << '\n';
  for (const auto& c : src.clauses) {
    out << c.lits[0] << ' ' << c.lits[1] << ' ' << c.lits[2] << " 0\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Gadget sidecar.

std::string serialize_gadget_map(const GadgetMap& gm) {
  std::ostringstream out;
  out << "gadget " << (gm.kind == GadgetKind::Mm2p ? "mm2p" : "mm3p") << '\n';
  if (gm.kind == GadgetKind::Mm3p) out << "alpha " << gm.alpha << '\n';
  out << "k " << gm.k << '\n';
  out << "budget " << gm.budget << '\n';
  out << "n " << gm.node_count << '\n';
  out << "lambda " << gm.lambda << '\n';
  if (gm.kind == GadgetKind::Mm3p) {
    out << "mu1 " << gm.mu1 << '\n';
    out << "mu2 " << gm.mu2 << '\n';
  } else {
    out << "per_side_n " << gm.per_side_n << '\n';
  }
  out << "theta " << gm.theta << '\n';
  for (const auto& entry : gm.padding_log) out << "pad " << entry << '\n';
  for (int v = 1; v <= gm.node_count; ++v) {
    const NodeRole& r = gm.roles[static_cast<std::size_t>(v)];
    out << "role " << v << ' ';
    switch (r.kind) {
      case NodeKind::tetrad_x:
        out << "x " << r.clause << ' ' << r.side;
        break;
      case NodeKind::tetrad_literal:
        out << "lit " << r.clause << ' ' << r.side << ' ' << r.literal;
        break;
      case NodeKind::tetrad_z:
        out << "z " << r.clause << ' ' << r.side;
        break;
      case NodeKind::core_clique:
        out << "core";
        break;
      case NodeKind::half_anchor:
        out << "half " << r.half;
        break;
      case NodeKind::source_vertex:
        out << "vertex " << r.group << ' ' << r.side;
        break;
    }
    out << '\n';
  }
  for (const auto& [a, b] : gm.one_links) out << "onelink " << a << ' ' << b << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// Run reports.

void RunReport::add(std::string key, std::string value) {
  fields.emplace_back(std::move(key), std::move(value));
}

void RunReport::add(std::string key, long long value) {
  fields.emplace_back(std::move(key), std::to_string(value));
}

std::string RunReport::render() const {
  std::ostringstream out;
  for (const auto& [key, value] : fields) out << key << ' ' << value << '\n';
  return out.str();
}

std::string format_nodes(const std::vector<NodeId>& nodes) {
  if (nodes.empty()) return "-";
  std::string s;
  for (NodeId v : nodes) {
    if (!s.empty()) s += ',';
    s += std::to_string(v);
  }
  return s;
}

std::string format_partition_inline(const Partition& p) {
  std::string s;
  for (std::size_t i = 0; i < p.subsets.size(); ++i) {
    if (i > 0) s += '|';
    s += '{';
    for (std::size_t j = 0; j < p.subsets[i].size(); ++j) {
      if (j > 0) s += ',';
      s += std::to_string(p.subsets[i][j]);
    }
    s += '}';
  }
  return s;
}

// ---------------------------------------------------------------------------
// Generator.

Instance generate_instance(const GenParams& params) {
  if (params.density < 0.0 || params.density > 1.0) {
    throw input_error("generator: density must lie in [0, 1]");
  }
  if (params.wmin > params.wmax) throw input_error("generator: need wmin <= wmax");
  if (params.wmin == 0 && params.wmax == 0) {
    throw input_error("generator: the weight range must contain a nonzero value");
  }
  Rng rng(params.seed);
  std::vector<std::tuple<NodeId, NodeId, Weight>> pairs;
  for (int i = 1; i <= params.n; ++i) {
    for (int j = i + 1; j <= params.n; ++j) {
      if (rng.unit() >= params.density) continue;
      Weight w;
      do {
        w = rng.range(params.wmin, params.wmax);
      } while (w == 0);
      pairs.emplace_back(i, j, w);
    }
  }
  return Instance::create(params.n, params.k, params.m, params.theta, pairs);
}

}  // namespace mmkp
