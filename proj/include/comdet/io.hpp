#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "comdet/community.hpp"
#include "comdet/graph.hpp"

namespace comdet {

enum class ParseErrorKind {
  malformed_header,
  malformed_entry,
  index_out_of_range,
  non_finite_weight,
  truncated,
  io,
};

inline const char* to_string(ParseErrorKind k) {
  switch (k) {
    case ParseErrorKind::malformed_header: return "malformed header";
    case ParseErrorKind::malformed_entry: return "malformed entry";
    case ParseErrorKind::index_out_of_range: return "index out of range";
    case ParseErrorKind::non_finite_weight: return "non-finite weight";
    case ParseErrorKind::truncated: return "truncated";
    case ParseErrorKind::io: return "i/o error";
  }
  return "parse error";
}

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, std::size_t line, const std::string& detail)
      : std::runtime_error("line " + std::to_string(line) + ": " + to_string(kind) +
                           (detail.empty() ? "" : ": " + detail)),
        kind_(kind),
        line_(line) {}

  ParseErrorKind kind() const { return kind_; }
  std::size_t line() const { return line_; }

 private:
  ParseErrorKind kind_;
  std::size_t line_;
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

inline bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

// Shortest decimal form that reads back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace detail

// MatrixMarket coordinate reader. Ids become 0-based; pattern entries get
// weight 1; symmetric files yield only the stored triangle.
inline EdgeList parse_matrix_market(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line))
    throw ParseError(ParseErrorKind::malformed_header, 1, "empty input");
  ++lineno;
  const auto head = detail::split_ws(line);
  if (head.size() != 5 || detail::lower(head[0]) != "%%matrixmarket" ||
      detail::lower(head[1]) != "matrix" || detail::lower(head[2]) != "coordinate")
    throw ParseError(ParseErrorKind::malformed_header, lineno,
                     "expected '%%MatrixMarket matrix coordinate <field> <symmetry>'");
  const std::string field = detail::lower(head[3]);
  const std::string symmetry = detail::lower(head[4]);
  if (field != "pattern" && field != "real" && field != "integer")
    throw ParseError(ParseErrorKind::malformed_header, lineno,
                     "unsupported field '" + field + "'");
  if (symmetry != "general" && symmetry != "symmetric")
    throw ParseError(ParseErrorKind::malformed_header, lineno,
                     "unsupported symmetry '" + symmetry + "'");
  const bool pattern = field == "pattern";

  std::size_t rows = 0, cols = 0, nnz = 0;
  bool have_size = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::is_blank(line) || line.front() == '%') continue;
    const auto tok = detail::split_ws(line);
    if (tok.size() != 3 || !detail::parse_number(tok[0], rows) ||
        !detail::parse_number(tok[1], cols) || !detail::parse_number(tok[2], nnz))
      throw ParseError(ParseErrorKind::malformed_header, lineno,
                       "expected '<rows> <cols> <entries>'");
    have_size = true;
    break;
  }
  if (!have_size)
    throw ParseError(ParseErrorKind::malformed_header, lineno, "missing size line");
  if (rows != cols)
    throw ParseError(ParseErrorKind::malformed_header, lineno, "matrix is not square");

  EdgeList out;
  out.n_declared = rows;
  out.entries.reserve(nnz);
  while (out.entries.size() < nnz && std::getline(in, line)) {
    ++lineno;
    if (detail::is_blank(line) || line.front() == '%') continue;
    const auto tok = detail::split_ws(line);
    if (tok.size() != (pattern ? 2u : 3u))
      throw ParseError(ParseErrorKind::malformed_entry, lineno,
                       pattern ? "expected '<row> <col>'" : "expected '<row> <col> <value>'");
    std::size_t i = 0, j = 0;
    if (!detail::parse_number(tok[0], i) || !detail::parse_number(tok[1], j))
      throw ParseError(ParseErrorKind::malformed_entry, lineno, "bad index");
    if (i < 1 || i > rows || j < 1 || j > cols)
      throw ParseError(ParseErrorKind::index_out_of_range, lineno,
                       "index outside 1.." + std::to_string(rows));
    double w = 1.0;
    if (!pattern) {
      if (!detail::parse_number(tok[2], w))
        throw ParseError(ParseErrorKind::malformed_entry, lineno, "bad value");
      if (!std::isfinite(w)) throw ParseError(ParseErrorKind::non_finite_weight, lineno, "");
    }
    out.entries.push_back({static_cast<VertexId>(i - 1), static_cast<VertexId>(j - 1), w});
  }
  if (out.entries.size() < nnz)
    throw ParseError(ParseErrorKind::truncated, lineno,
                     "declared " + std::to_string(nnz) + " entries, found " +
                         std::to_string(out.entries.size()));
  return out;
}

// Writes each undirected edge once as a real symmetric file (lower triangle).
// Reading it back with symmetrization reproduces the same CSR arrays.
inline void write_matrix_market(std::ostream& out, const Graph& g) {
  std::size_t count = 0;
  for (VertexId u = 0; u < g.num_vertices(); ++u)
    for (VertexId v : g.neighbors(u))
      if (v <= u) ++count;
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << g.num_vertices() << ' ' << g.num_vertices() << ' ' << count << '\n';
  for (VertexId u = 0; u < g.num_vertices(); ++u) {
    auto nbrs = g.neighbors(u);
    auto ws = g.neighbor_weights(u);
    for (std::size_t i = 0; i < nbrs.size(); ++i)
      if (nbrs[i] <= u)
        out << u + 1 << ' ' << nbrs[i] + 1 << ' ' << detail::format_double(ws[i]) << '\n';
  }
}

// Plain edge list: `u v [w]` per line, 0-based, '#' comments. A comment of the
// form `# vertices N` fixes the vertex count; otherwise it is max id + 1.
inline EdgeList parse_edge_list(std::istream& in) {
  EdgeList out;
  std::size_t declared = 0;
  std::size_t max_id_plus_one = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::is_blank(line)) continue;
    const auto tok = detail::split_ws(line);
    if (tok.front().front() == '#') {
      if (tok.size() == 3 && tok[0] == "#" && tok[1] == "vertices" &&
          !detail::parse_number(tok[2], declared))
        throw ParseError(ParseErrorKind::malformed_header, lineno, "bad vertex count");
      continue;
    }
    if (tok.size() != 2 && tok.size() != 3)
      throw ParseError(ParseErrorKind::malformed_entry, lineno, "expected 'u v [w]'");
    std::size_t u = 0, v = 0;
    if (!detail::parse_number(tok[0], u) || !detail::parse_number(tok[1], v))
      throw ParseError(ParseErrorKind::malformed_entry, lineno, "bad vertex id");
    if (u > 0xfffffffeULL || v > 0xfffffffeULL)
      throw ParseError(ParseErrorKind::index_out_of_range, lineno, "vertex id too large");
    double w = 1.0;
    if (tok.size() == 3) {
      if (!detail::parse_number(tok[2], w))
        throw ParseError(ParseErrorKind::malformed_entry, lineno, "bad weight");
      if (!std::isfinite(w)) throw ParseError(ParseErrorKind::non_finite_weight, lineno, "");
    }
    max_id_plus_one = std::max({max_id_plus_one, u + 1, v + 1});
    out.entries.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v), w});
  }
  if (declared != 0 && max_id_plus_one > declared)
    throw ParseError(ParseErrorKind::index_out_of_range, lineno,
                     "vertex id exceeds declared count " + std::to_string(declared));
  out.n_declared = declared != 0 ? declared : max_id_plus_one;
  return out;
}

inline void write_edge_list(std::ostream& out, const EdgeList& edges) {
  out << "# vertices " << edges.n_declared << '\n';
  for (const Edge& e : edges.entries) {
    out << e.u << ' ' << e.v;
    if (e.w != 1.0) out << ' ' << detail::format_double(e.w);
    out << '\n';
  }
}

enum class GraphFormat { mtx, edgelist };

inline GraphFormat guess_format(const std::string& path) {
  const auto dot = path.rfind('.');
  if (dot != std::string::npos && detail::lower(path.substr(dot)) == ".mtx")
    return GraphFormat::mtx;
  return GraphFormat::edgelist;
}

inline EdgeList read_edges(const std::string& path, GraphFormat format) {
  std::ifstream in(path);
  if (!in) throw ParseError(ParseErrorKind::io, 0, "cannot open '" + path + "'");
  return format == GraphFormat::mtx ? parse_matrix_market(in) : parse_edge_list(in);
}

// Membership file: `vertex_id community_id` per line, sorted by vertex id.
inline void write_membership(std::ostream& out, const Assignment& a) {
  for (std::size_t u = 0; u < a.size(); ++u) out << u << ' ' << a[u] << '\n';
}

// Reads a membership file back. Every vertex in [0, n) must appear exactly
// once, in order, with labels normalized to first-occurrence order.
inline Assignment parse_membership(std::istream& in, std::size_t n) {
  Assignment a;
  std::string line;
  std::size_t lineno = 0;
  CommunityId next_new = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::is_blank(line)) continue;
    const auto tok = detail::split_ws(line);
    std::size_t u = 0;
    CommunityId c = 0;
    if (tok.size() != 2 || !detail::parse_number(tok[0], u) ||
        !detail::parse_number(tok[1], c))
      throw ParseError(ParseErrorKind::malformed_entry, lineno,
                       "expected '<vertex> <community>'");
    if (u != a.size())
      throw ParseError(ParseErrorKind::malformed_entry, lineno,
                       "expected vertex " + std::to_string(a.size()));
    if (u >= n) throw ParseError(ParseErrorKind::index_out_of_range, lineno, "vertex id");
    if (c > next_new)
      throw ParseError(ParseErrorKind::malformed_entry, lineno, "labels not normalized");
    if (c == next_new) ++next_new;
    a.labels.push_back(c);
  }
  if (a.size() != n)
    throw ParseError(ParseErrorKind::truncated, lineno,
                     "expected " + std::to_string(n) + " vertices, found " +
                         std::to_string(a.size()));
  return a;
}

}  // namespace comdet
