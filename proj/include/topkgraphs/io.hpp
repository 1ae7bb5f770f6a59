#pragma once

#include <charconv>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "affinity.hpp"
#include "errors.hpp"
#include "graph.hpp"
#include "matrix.hpp"
#include "partition.hpp"

namespace topk {

// Input file missing or unreadable, or output not writable.
class FileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open input file '" + path + "'");
  return in;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FileError("cannot open output file '" + path + "'");
  return out;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t pos = 0;
  for (;;) {
    const auto comma = line.find(',', pos);
    cells.push_back(trim(line.substr(pos, comma == std::string_view::npos ? line.npos : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return cells;
}

inline std::optional<double> parse_double(std::string_view s) {
  double v = 0.0;
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

// Shortest decimal that round-trips, '.' separator regardless of locale.
inline std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline bool blank_or_comment(std::string_view line) {
  const auto t = trim(line);
  return t.empty() || t.front() == '#';
}

}  // namespace detail

// A graph whose nodes carry external names; node i is names[i].
struct NamedGraph {
  Graph graph;
  std::vector<std::string> names;

  std::unordered_map<std::string, NodeId> index() const {
    std::unordered_map<std::string, NodeId> m;
    for (std::size_t i = 0; i < names.size(); ++i) m.emplace(names[i], static_cast<NodeId>(i));
    return m;
  }
};

struct LabeledDataset {
  Graph graph;
  std::optional<Partition> labels;
  std::vector<std::string> node_names;
};

// One edge per line, two whitespace-separated tokens; '#' starts a comment
// line. Names get dense ids in order of first appearance.
inline NamedGraph read_edge_list(std::istream& in) {
  NamedGraph out;
  std::unordered_map<std::string, NodeId> ids;
  std::vector<NodePair> edges;
  auto id_of = [&](const std::string& name) {
    auto [it, inserted] = ids.emplace(name, static_cast<NodeId>(out.names.size()));
    if (inserted) out.names.push_back(name);
    return it->second;
  };
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::blank_or_comment(line)) continue;
    std::istringstream tokens(line);
    std::vector<std::string> tok;
    for (std::string t; tokens >> t;) tok.push_back(std::move(t));
    if (tok.size() != 2) {
      throw ParseError("edge list line " + std::to_string(line_no) + ": expected 2 tokens, found " +
                           std::to_string(tok.size()),
                       line_no);
    }
    const NodeId u = id_of(tok[0]);
    const NodeId v = id_of(tok[1]);
    edges.push_back({u, v});
  }
  out.graph = Graph::from_edge_list(edges, out.names.size());
  return out;
}

inline NamedGraph read_edge_list(const std::string& path) {
  auto in = open_input(path);
  return read_edge_list(in);
}

// Canonical edges (u < v), one per line. Isolated nodes cannot be expressed.
inline void write_edge_list(std::ostream& out, const Graph& g, const std::vector<std::string>& names) {
  for (const auto& e : g.edge_list()) out << names.at(e.u) << ' ' << names.at(e.v) << '\n';
}

inline std::vector<std::string> numeric_names(std::size_t n) {
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 0; i < n; ++i) names.push_back(std::to_string(i));
  return names;
}

struct LabelData {
  Partition labels;
  std::vector<std::string> class_names;  // class id -> original label
};

// CSV `node,label`. A first row whose node is not in `names` is taken as a
// header. Class ids are dense in order of first appearance.
inline LabelData read_labels(std::istream& in, const std::vector<std::string>& names) {
  std::unordered_map<std::string, NodeId> index;
  for (std::size_t i = 0; i < names.size(); ++i) index.emplace(names[i], static_cast<NodeId>(i));
  constexpr auto unset = static_cast<std::size_t>(-1);
  LabelData out;
  out.labels.labels.assign(names.size(), unset);
  std::unordered_map<std::string, std::size_t> class_ids;
  std::string line;
  std::size_t line_no = 0;
  bool first_row = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::blank_or_comment(line)) continue;
    const auto cells = detail::split_csv(line);
    if (cells.size() != 2) {
      throw ParseError("labels line " + std::to_string(line_no) + ": expected 2 columns, found " +
                           std::to_string(cells.size()),
                       line_no);
    }
    const std::string node(cells[0]);
    const std::string label(cells[1]);
    const auto it = index.find(node);
    if (it == index.end()) {
      if (first_row) {
        first_row = false;
        continue;
      }
      throw ParseError("labels line " + std::to_string(line_no) + ": unknown node '" + node + "'",
                       line_no);
    }
    first_row = false;
    if (out.labels.labels[it->second] != unset) {
      throw ParseError("labels line " + std::to_string(line_no) + ": duplicate label for '" + node + "'",
                       line_no);
    }
    auto [cit, inserted] = class_ids.emplace(label, out.class_names.size());
    if (inserted) out.class_names.push_back(label);
    out.labels.labels[it->second] = cit->second;
  }
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (out.labels.labels[i] == unset) throw ParseError("missing label for " + names[i], 0);
  }
  return out;
}

inline LabelData read_labels(const std::string& path, const std::vector<std::string>& names) {
  auto in = open_input(path);
  return read_labels(in, names);
}

inline void write_labels(std::ostream& out, const Partition& p, const std::vector<std::string>& names,
                         const std::vector<std::string>& class_names = {}) {
  out << "node,label\n";
  for (std::size_t i = 0; i < p.size(); ++i) {
    out << names.at(i) << ',';
    if (class_names.empty()) {
      out << p.labels[i];
    } else {
      out << class_names.at(p.labels[i]);
    }
    out << '\n';
  }
}

struct FeatureTable {
  Matrix values;                   // samples x features
  std::vector<std::string> names;  // sample ids
};

// CSV: sample id, then numeric columns. A first row with any non-numeric
// feature cell is a header.
inline FeatureTable read_features(std::istream& in) {
  std::vector<std::vector<double>> rows;
  FeatureTable out;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  bool first_row = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::blank_or_comment(line)) continue;
    const auto cells = detail::split_csv(line);
    if (cells.size() < 2) {
      throw ParseError("features line " + std::to_string(line_no) + ": need an id and at least one value",
                       line_no);
    }
    std::vector<double> row;
    std::size_t bad_col = 0;
    for (std::size_t c = 1; c < cells.size(); ++c) {
      const auto v = detail::parse_double(cells[c]);
      if (!v) {
        bad_col = c + 1;
        break;
      }
      row.push_back(*v);
    }
    if (bad_col != 0) {
      if (first_row) {
        first_row = false;
        continue;
      }
      throw ParseError("features line " + std::to_string(line_no) + ", column " + std::to_string(bad_col) +
                           ": not a number",
                       line_no, bad_col);
    }
    if (rows.empty()) {
      width = row.size();
    } else if (row.size() != width) {
      throw ParseError("features line " + std::to_string(line_no) + ": expected " + std::to_string(width) +
                           " values, found " + std::to_string(row.size()),
                       line_no);
    }
    first_row = false;
    out.names.emplace_back(cells[0]);
    rows.push_back(std::move(row));
  }
  out.values = Matrix(rows.size(), width);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < width; ++c) out.values(r, c) = rows[r][c];
  return out;
}

inline FeatureTable read_features(const std::string& path) {
  auto in = open_input(path);
  return read_features(in);
}

// CSV: header `node,<name_1>,...,<name_n>`, then one row per node starting
// with its name. Values are written as shortest round-trip decimals.
inline void write_matrix(std::ostream& out, const Matrix& m, const std::vector<std::string>& names) {
  if (!m.square() || names.size() != m.rows()) {
    throw std::invalid_argument("write_matrix: need a square matrix with one name per row");
  }
  out << "node";
  for (const auto& nm : names) out << ',' << nm;
  out << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out << names[r];
    for (double v : m.row(r)) out << ',' << detail::format_double(v);
    out << '\n';
  }
}

inline void write_matrix(std::ostream& out, const AffinityMatrix& a, const std::vector<std::string>& names) {
  write_matrix(out, a.values(), names);
}

struct NamedMatrix {
  Matrix values;
  std::vector<std::string> names;
};

inline NamedMatrix read_matrix(std::istream& in) {
  NamedMatrix out;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::vector<double>> rows;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto cells = detail::split_csv(line);
    if (!have_header) {
      for (std::size_t c = 1; c < cells.size(); ++c) out.names.emplace_back(cells[c]);
      have_header = true;
      continue;
    }
    if (cells.size() != out.names.size() + 1) {
      throw ParseError("matrix line " + std::to_string(line_no) + ": expected " +
                           std::to_string(out.names.size() + 1) + " cells, found " +
                           std::to_string(cells.size()),
                       line_no);
    }
    const std::size_t r = rows.size();
    if (r >= out.names.size() || cells[0] != out.names[r]) {
      throw ParseError("matrix line " + std::to_string(line_no) + ": row name '" + std::string(cells[0]) +
                           "' does not match the header",
                       line_no, 1);
    }
    std::vector<double> row;
    for (std::size_t c = 1; c < cells.size(); ++c) {
      const auto v = detail::parse_double(cells[c]);
      if (!v) {
        throw ParseError("matrix line " + std::to_string(line_no) + ", column " + std::to_string(c + 1) +
                             ": not a number",
                         line_no, c + 1);
      }
      row.push_back(*v);
    }
    rows.push_back(std::move(row));
  }
  if (!have_header) throw ParseError("matrix: empty input", 0);
  if (rows.size() != out.names.size()) {
    throw ParseError("matrix: expected " + std::to_string(out.names.size()) + " rows, found " +
                         std::to_string(rows.size()),
                     line_no);
  }
  const std::size_t n = rows.size();
  out.values = Matrix(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) out.values(r, c) = rows[r][c];
  return out;
}

inline NamedMatrix read_matrix(const std::string& path) {
  auto in = open_input(path);
  return read_matrix(in);
}

}  // namespace topk
