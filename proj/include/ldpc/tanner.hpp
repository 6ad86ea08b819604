#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ldpc/rng.hpp"

namespace ldpc {

// Sparse bipartite code graph. Rows of H are check nodes (CNs), columns are
// variable nodes (VNs). Edge ids are assigned in CN-major adjacency order:
// edge (m, slot k) has id check_edge_offset[m] + k. The variable-side view
// carries the matching edge ids so per-edge message arrays can be indexed
// from either side.
struct TannerGraph {
  int n_vars = 0;
  int n_checks = 0;
  std::vector<std::vector<int>> check_adj;     // N(m): VN ids, file/insertion order
  std::vector<std::vector<int>> var_adj;       // M(n): CN ids, ascending
  std::vector<std::vector<int>> var_edge_ids;  // same shape as var_adj
  std::vector<int> check_edge_offset;          // size n_checks + 1
  int n_edges = 0;

  int check_degree(int m) const { return static_cast<int>(check_adj[m].size()); }
  int var_degree(int n) const { return static_cast<int>(var_adj[n].size()); }
  int edge_id(int m, int slot) const { return check_edge_offset[m] + slot; }

  bool operator==(const TannerGraph& other) const {
    return n_vars == other.n_vars && n_checks == other.n_checks && check_adj == other.check_adj;
  }
};

// Edge-perspective degree distribution: lambda[i] (rho[j]) is the fraction of
// edges incident to degree-i VNs (degree-j CNs).
struct DegreeDistribution {
  std::map<int, double> lambda;
  std::map<int, double> rho;
  int d_v = 0;
  int d_c = 0;
};

enum class AlistErrorKind {
  malformed_header,
  bad_token,
  degree_error,
  length_mismatch,
  index_out_of_range,
  duplicate_entry,
  edge_count_mismatch,
  transpose_mismatch,
  trailing_content,
  truncated,
};

class AlistError : public std::runtime_error {
 public:
  AlistError(AlistErrorKind kind, int line, const std::string& what)
      : std::runtime_error("alist parse error at line " + std::to_string(line) + ": " + what),
        kind_(kind),
        line_(line) {}
  AlistErrorKind kind() const { return kind_; }
  int line() const { return line_; }

 private:
  AlistErrorKind kind_;
  int line_;
};

// Builds the graph from per-CN variable lists, deriving the variable-side
// adjacency (CN ids ascending) and the edge id maps. Validates the structural
// invariants: indices in range, no duplicate VN within a CN, CN degree >= 2,
// VN degree >= 1.
inline TannerGraph build_from_check_lists(int n_vars, std::vector<std::vector<int>> check_lists) {
  if (n_vars < 1 || check_lists.empty()) throw std::invalid_argument("graph must have at least one VN and one CN");
  TannerGraph g;
  g.n_vars = n_vars;
  g.n_checks = static_cast<int>(check_lists.size());
  g.check_adj = std::move(check_lists);
  g.check_edge_offset.assign(g.n_checks + 1, 0);

  std::vector<char> seen(n_vars, 0);
  for (int m = 0; m < g.n_checks; ++m) {
    const auto& row = g.check_adj[m];
    if (row.size() < 2) throw std::invalid_argument("check node " + std::to_string(m) + " has degree < 2");
    for (int n : row) {
      if (n < 0 || n >= n_vars) throw std::invalid_argument("VN index out of range in check node " + std::to_string(m));
      if (seen[n]) throw std::invalid_argument("duplicate VN in check node " + std::to_string(m));
      seen[n] = 1;
    }
    for (int n : row) seen[n] = 0;
    g.check_edge_offset[m + 1] = g.check_edge_offset[m] + static_cast<int>(row.size());
  }
  g.n_edges = g.check_edge_offset[g.n_checks];

  g.var_adj.assign(n_vars, {});
  g.var_edge_ids.assign(n_vars, {});
  for (int m = 0; m < g.n_checks; ++m) {
    for (int k = 0; k < g.check_degree(m); ++k) {
      const int n = g.check_adj[m][k];
      g.var_adj[n].push_back(m);
      g.var_edge_ids[n].push_back(g.edge_id(m, k));
    }
  }
  for (int n = 0; n < n_vars; ++n) {
    if (g.var_adj[n].empty()) throw std::invalid_argument("isolated VN " + std::to_string(n));
  }
  return g;
}

namespace detail {

struct AlistLine {
  int number = 0;  // 1-based
  std::vector<long long> values;
};

inline std::vector<AlistLine> alist_lines(std::string_view text) {
  std::vector<AlistLine> lines;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    ++line_no;
    AlistLine parsed;
    parsed.number = line_no;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
      if (i >= line.size()) break;
      bool negative = false;
      if (line[i] == '-') {
        negative = true;
        ++i;
      }
      if (i >= line.size() || line[i] < '0' || line[i] > '9')
        throw AlistError(AlistErrorKind::bad_token, line_no, "non-numeric token");
      long long value = 0;
      while (i < line.size() && line[i] >= '0' && line[i] <= '9') {
        value = value * 10 + (line[i] - '0');
        if (value > (1ll << 40)) throw AlistError(AlistErrorKind::bad_token, line_no, "token out of range");
        ++i;
      }
      if (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r')
        throw AlistError(AlistErrorKind::bad_token, line_no, "non-numeric token");
      parsed.values.push_back(negative ? -value : value);
    }
    if (!parsed.values.empty()) lines.push_back(std::move(parsed));
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }
  return lines;
}

}  // namespace detail

// Parses the alist interchange format:
//   line 1: N M
//   line 2: max_col_degree max_row_degree
//   N column degrees, M row degrees (token counts fixed, line breaks free)
//   N column neighbor lists, then M row neighbor lists, one per line,
//   1-indexed, optionally zero-padded to the declared maximum degree.
// Padding zeros are stripped. Both adjacency sections must describe the same
// edge set. Degree-0 columns are rejected: the decoder has no update rule for
// isolated VNs.
inline TannerGraph parse_alist(std::string_view text) {
  auto lines = detail::alist_lines(text);
  std::size_t cursor = 0;
  const auto need_line = [&](const char* what) -> const detail::AlistLine& {
    if (cursor >= lines.size())
      throw AlistError(AlistErrorKind::truncated, lines.empty() ? 1 : lines.back().number,
                       std::string("unexpected end of input, expected ") + what);
    return lines[cursor++];
  };

  const auto& header = need_line("N M header");
  if (header.values.size() != 2 || header.values[0] < 1 || header.values[1] < 1)
    throw AlistError(AlistErrorKind::malformed_header, header.number, "expected two positive integers N M");
  const int n_vars = static_cast<int>(header.values[0]);
  const int n_checks = static_cast<int>(header.values[1]);

  const auto& maxima = need_line("max degree header");
  if (maxima.values.size() != 2 || maxima.values[0] < 1 || maxima.values[1] < 1)
    throw AlistError(AlistErrorKind::malformed_header, maxima.number, "expected two positive maximum degrees");
  const int max_col = static_cast<int>(maxima.values[0]);
  const int max_row = static_cast<int>(maxima.values[1]);

  // Degree vectors may wrap across lines; only the counts are fixed.
  const auto read_degrees = [&](int count, int max_deg, bool is_col) {
    std::vector<int> degrees;
    degrees.reserve(count);
    while (static_cast<int>(degrees.size()) < count) {
      const auto& line = need_line(is_col ? "column degrees" : "row degrees");
      for (long long v : line.values) {
        if (static_cast<int>(degrees.size()) == count)
          throw AlistError(AlistErrorKind::length_mismatch, line.number, "too many degree entries");
        if (v < 1) {
          if (is_col)
            throw AlistError(AlistErrorKind::degree_error, line.number, "degree-0 column (isolated VN)");
          throw AlistError(AlistErrorKind::degree_error, line.number, "row degree below 1");
        }
        if (!is_col && v < 2)
          throw AlistError(AlistErrorKind::degree_error, line.number, "check node of degree < 2");
        if (v > max_deg)
          throw AlistError(AlistErrorKind::degree_error, line.number, "degree exceeds declared maximum");
        degrees.push_back(static_cast<int>(v));
      }
    }
    return degrees;
  };
  const auto col_deg = read_degrees(n_vars, max_col, true);
  const int row_deg_first_line = cursor < lines.size() ? lines[cursor].number : 0;
  const auto row_deg = read_degrees(n_checks, max_row, false);

  const long long col_edges = std::accumulate(col_deg.begin(), col_deg.end(), 0ll);
  const long long row_edges = std::accumulate(row_deg.begin(), row_deg.end(), 0ll);
  if (col_edges != row_edges)
    throw AlistError(AlistErrorKind::edge_count_mismatch, row_deg_first_line,
                     "column degrees sum to " + std::to_string(col_edges) + " but row degrees sum to " +
                         std::to_string(row_edges));

  // Neighbor lists are one per line; zeros are padding and are stripped.
  const auto read_list = [&](int expected_deg, int max_deg, int index_bound, const char* what) {
    const auto& line = need_line(what);
    if (static_cast<int>(line.values.size()) > max_deg)
      throw AlistError(AlistErrorKind::length_mismatch, line.number, "more entries than the declared maximum degree");
    std::vector<int> entries;
    for (long long v : line.values) {
      if (v == 0) continue;
      if (v < 0 || v > index_bound)
        throw AlistError(AlistErrorKind::index_out_of_range, line.number, "index " + std::to_string(v) + " out of range");
      entries.push_back(static_cast<int>(v) - 1);
    }
    if (static_cast<int>(entries.size()) != expected_deg)
      throw AlistError(AlistErrorKind::length_mismatch, line.number,
                       "list has " + std::to_string(entries.size()) + " entries, declared degree is " +
                           std::to_string(expected_deg));
    std::vector<char> seen(index_bound, 0);
    for (int e : entries) {
      if (seen[e]) throw AlistError(AlistErrorKind::duplicate_entry, line.number, "duplicate index in list");
      seen[e] = 1;
    }
    return std::make_pair(entries, line.number);
  };

  std::vector<std::vector<int>> col_lists(n_vars);
  for (int n = 0; n < n_vars; ++n) col_lists[n] = read_list(col_deg[n], max_col, n_checks, "column neighbor list").first;
  std::vector<std::vector<int>> row_lists(n_checks);
  std::vector<int> row_line(n_checks);
  for (int m = 0; m < n_checks; ++m) {
    auto [entries, line_no] = read_list(row_deg[m], max_row, n_vars, "row neighbor list");
    row_lists[m] = std::move(entries);
    row_line[m] = line_no;
  }
  if (cursor != lines.size())
    throw AlistError(AlistErrorKind::trailing_content, lines[cursor].number, "trailing content after row lists");

  // Transpose consistency: the column section must induce exactly the row section.
  std::vector<std::vector<int>> rows_from_cols(n_checks);
  for (int n = 0; n < n_vars; ++n)
    for (int m : col_lists[n]) rows_from_cols[m].push_back(n);
  for (int m = 0; m < n_checks; ++m) {
    std::vector<int> sorted_row = row_lists[m];
    std::sort(sorted_row.begin(), sorted_row.end());
    std::sort(rows_from_cols[m].begin(), rows_from_cols[m].end());
    if (sorted_row != rows_from_cols[m])
      throw AlistError(AlistErrorKind::transpose_mismatch, row_line[m],
                       "row list of check " + std::to_string(m + 1) + " does not match the column lists");
  }

  try {
    return build_from_check_lists(n_vars, std::move(row_lists));
  } catch (const std::invalid_argument& e) {
    throw AlistError(AlistErrorKind::degree_error, 1, e.what());
  }
}

// Emits the padded alist form (zeros fill each list to the maximum degree).
// parse_alist(serialize_alist(g)) reproduces g exactly.
inline std::string serialize_alist(const TannerGraph& g) {
  if (g.n_vars < 1 || g.n_checks < 1) throw std::invalid_argument("cannot serialize an empty graph");
  int max_col = 0, max_row = 0;
  for (int n = 0; n < g.n_vars; ++n) max_col = std::max(max_col, g.var_degree(n));
  for (int m = 0; m < g.n_checks; ++m) max_row = std::max(max_row, g.check_degree(m));

  std::string out;
  const auto line_of = [&out](const std::vector<int>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) out += ' ';
      out += std::to_string(values[i]);
    }
    out += '\n';
  };
  line_of({g.n_vars, g.n_checks});
  line_of({max_col, max_row});
  std::vector<int> degs(g.n_vars);
  for (int n = 0; n < g.n_vars; ++n) degs[n] = g.var_degree(n);
  line_of(degs);
  degs.resize(g.n_checks);
  for (int m = 0; m < g.n_checks; ++m) degs[m] = g.check_degree(m);
  line_of(degs);

  const auto padded = [&](std::vector<int> entries, int width) {
    for (auto& e : entries) ++e;  // 1-indexed on disk
    entries.resize(width, 0);
    line_of(entries);
  };
  for (int n = 0; n < g.n_vars; ++n) padded(g.var_adj[n], max_col);
  for (int m = 0; m < g.n_checks; ++m) padded(g.check_adj[m], max_row);
  return out;
}

inline DegreeDistribution degree_distribution(const TannerGraph& g) {
  DegreeDistribution dd;
  const double edges = static_cast<double>(g.n_edges);
  for (int n = 0; n < g.n_vars; ++n) {
    const int d = g.var_degree(n);
    dd.lambda[d] += d / edges;
    dd.d_v = std::max(dd.d_v, d);
  }
  for (int m = 0; m < g.n_checks; ++m) {
    const int d = g.check_degree(m);
    dd.rho[d] += d / edges;
    dd.d_c = std::max(dd.d_c, d);
  }
  return dd;
}

inline DegreeDistribution regular_degree_distribution(int d_v, int d_c) {
  if (d_v < 1 || d_c < 2) throw std::invalid_argument("regular ensemble needs d_v >= 1 and d_c >= 2");
  DegreeDistribution dd;
  dd.lambda[d_v] = 1.0;
  dd.rho[d_c] = 1.0;
  dd.d_v = d_v;
  dd.d_c = d_c;
  return dd;
}

// Design rate 1 - (sum_j rho_j / j) / (sum_i lambda_i / i).
inline double design_rate(const DegreeDistribution& dd) {
  double v = 0.0, c = 0.0;
  for (const auto& [i, f] : dd.lambda) v += f / i;
  for (const auto& [j, f] : dd.rho) c += f / j;
  return 1.0 - c / v;
}

// Random (d_v, d_c)-regular graph by socket permutation. A draw that contains
// a duplicate edge is rejected and the permutation redrawn, so the result is
// uniform over simple configurations and deterministic for a fixed seed.
inline TannerGraph random_regular_graph(int n_vars, int d_v, int d_c, std::uint64_t seed) {
  if (n_vars < 1 || d_v < 1 || d_c < 2) throw std::invalid_argument("need n_vars >= 1, d_v >= 1, d_c >= 2");
  const long long sockets = static_cast<long long>(n_vars) * d_v;
  if (sockets % d_c != 0)
    throw std::invalid_argument("socket count " + std::to_string(sockets) + " is not divisible by d_c");
  const int n_checks = static_cast<int>(sockets / d_c);

  Rng rng(seed);
  std::vector<int> perm(sockets);
  std::iota(perm.begin(), perm.end(), 0);

  constexpr int kMaxAttempts = 20000;
  std::vector<char> seen(n_vars, 0);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    rng.shuffle(perm.begin(), perm.end());
    bool simple = true;
    for (int m = 0; m < n_checks && simple; ++m) {
      for (int k = 0; k < d_c; ++k) {
        const int vn = perm[m * d_c + k] / d_v;
        if (seen[vn]) {
          simple = false;
          break;
        }
        seen[vn] = 1;
      }
      for (int k = 0; k < d_c; ++k) seen[perm[m * d_c + k] / d_v] = 0;
    }
    if (!simple) continue;
    std::vector<std::vector<int>> rows(n_checks);
    for (int m = 0; m < n_checks; ++m) {
      rows[m].resize(d_c);
      for (int k = 0; k < d_c; ++k) rows[m][k] = perm[m * d_c + k] / d_v;
    }
    return build_from_check_lists(n_vars, std::move(rows));
  }
  throw std::runtime_error("could not draw a duplicate-free regular graph after " + std::to_string(kMaxAttempts) +
                           " attempts");
}

}  // namespace ldpc
