#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ricci/error.hpp"
#include "ricci/graph.hpp"

namespace ricci {

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline bool parse_u64(std::string_view s, std::uint64_t& out) {
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && p == end;
}

inline bool parse_i64(std::string_view s, std::int64_t& out) {
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && p == end;
}

inline bool parse_f64(std::string_view s, double& out) {
  // from_chars for double is missing in some standard libraries; strtod via
  // a bounded copy keeps this locale-independent enough for "C" numerals.
  char buf[64];
  if (s.empty() || s.size() >= sizeof(buf)) return false;
  std::copy(s.begin(), s.end(), buf);
  buf[s.size()] = '\0';
  char* end = nullptr;
  out = std::strtod(buf, &end);
  return end == buf + s.size();
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace detail

/// Parses the plain edge-list format: one "u v" or "u v w" per line with
/// integer node ids and a positive real length, '#' lines and blank lines
/// ignored. Node ids are remapped to a dense 0-based range in order of
/// first appearance, so parsing is deterministic.
inline Graph parse_edge_list(std::istream& in) {
  std::unordered_map<std::uint64_t, node_id> remap;
  std::vector<Graph::Edge> edges;
  std::string line;
  std::size_t line_no = 0;

  auto intern = [&](std::uint64_t raw) {
    auto [it, inserted] = remap.emplace(raw, static_cast<node_id>(remap.size()));
    return it->second;
  };

  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto fields = detail::split_ws(body);
    if (fields.size() != 2 && fields.size() != 3)
      throw parse_error("line " + std::to_string(line_no) + ": expected 'u v' or 'u v w'");
    std::uint64_t raw_u = 0, raw_v = 0;
    if (!detail::parse_u64(fields[0], raw_u) || !detail::parse_u64(fields[1], raw_v))
      throw parse_error("line " + std::to_string(line_no) + ": malformed node id");
    double w = 1.0;
    if (fields.size() == 3) {
      if (!detail::parse_f64(fields[2], w))
        throw parse_error("line " + std::to_string(line_no) + ": malformed edge weight");
      if (!(w > 0.0) || !std::isfinite(w))
        throw parse_error("line " + std::to_string(line_no) + ": non-positive edge weight");
    }
    if (raw_u == raw_v) throw parse_error("line " + std::to_string(line_no) + ": self-loop");
    const node_id u = intern(raw_u);
    const node_id v = intern(raw_v);
    edges.push_back({std::min(u, v), std::max(u, v), w});
  }

  std::vector<Graph::Edge> sorted = edges;
  std::sort(sorted.begin(), sorted.end(), [](const Graph::Edge& a, const Graph::Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i - 1].u == sorted[i].u && sorted[i - 1].v == sorted[i].v)
      throw parse_error("duplicate edge " + std::to_string(sorted[i].u) + "-" +
                        std::to_string(sorted[i].v));
  return Graph(remap.size(), std::move(edges));
}

inline Graph load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open " + path.string());
  try {
    return parse_edge_list(in);
  } catch (const parse_error& e) {
    throw parse_error(path.string() + ": " + e.what());
  }
}

/// Writes the edge-list format read back by parse_edge_list. The header
/// comment carries provenance only; parsers ignore it.
inline void write_edge_list(std::ostream& out, const Graph& g, const std::string& comment = {}) {
  if (!comment.empty()) out << "# " << comment << "\n";
  char buf[96];
  for (const auto& e : g.edges()) {
    if (e.length == 1.0) {
      std::snprintf(buf, sizeof(buf), "%u %u\n", e.u, e.v);
    } else {
      std::snprintf(buf, sizeof(buf), "%u %u %.17g\n", e.u, e.v, e.length);
    }
    out << buf;
  }
}

/// Parses the TU benchmark layout from already-open streams.
/// adjacency: comma-separated 1-based node pairs, one directed copy per
/// line (both directions present for an undirected edge); indicator: the
/// 1-based graph id of each node; labels: one integer class per graph.
inline GraphCollection parse_tu_collection(std::istream& adjacency, std::istream& indicator,
                                           std::istream& labels, const std::string& prefix) {
  std::string line;
  std::size_t line_no = 0;

  // node -> graph assignment
  std::vector<std::uint64_t> node_graph;  // 1-based graph ids, index = node - 1
  while (std::getline(indicator, line)) {
    ++line_no;
    const auto body = detail::trim(line);
    if (body.empty()) continue;
    std::uint64_t gid = 0;
    if (!detail::parse_u64(body, gid) || gid == 0)
      throw parse_error("indicator line " + std::to_string(line_no) + ": malformed graph id");
    node_graph.push_back(gid);
  }
  if (node_graph.empty()) throw parse_error("indicator file is empty");
  std::uint64_t graph_count = 0;
  for (const auto gid : node_graph) graph_count = std::max(graph_count, gid);

  // per-graph dense node numbering in global node order
  std::vector<std::size_t> graph_size(graph_count, 0);
  std::vector<node_id> local_id(node_graph.size());
  for (std::size_t i = 0; i < node_graph.size(); ++i)
    local_id[i] = static_cast<node_id>(graph_size[node_graph[i] - 1]++);

  // adjacency, deduplicated to one undirected edge
  std::vector<std::vector<Graph::Edge>> graph_edges(graph_count);
  line_no = 0;
  while (std::getline(adjacency, line)) {
    ++line_no;
    const auto body = detail::trim(line);
    if (body.empty()) continue;
    const auto comma = body.find(',');
    if (comma == std::string_view::npos)
      throw parse_error("adjacency line " + std::to_string(line_no) + ": expected 'u, v'");
    std::uint64_t a = 0, b = 0;
    if (!detail::parse_u64(detail::trim(body.substr(0, comma)), a) ||
        !detail::parse_u64(detail::trim(body.substr(comma + 1)), b) || a == 0 || b == 0)
      throw parse_error("adjacency line " + std::to_string(line_no) + ": malformed node pair");
    if (a > node_graph.size() || b > node_graph.size())
      throw parse_error("adjacency line " + std::to_string(line_no) + ": node without graph assignment");
    if (a == b)
      throw parse_error("adjacency line " + std::to_string(line_no) + ": self-loop");
    if (node_graph[a - 1] != node_graph[b - 1])
      throw parse_error("adjacency line " + std::to_string(line_no) + ": cross-graph edge " +
                        std::to_string(a) + "," + std::to_string(b));
    if (a > b) continue;  // the file lists both directions; keep u < v
    const auto gid = node_graph[a - 1];
    graph_edges[gid - 1].push_back({local_id[a - 1], local_id[b - 1], 1.0});
  }

  GraphCollection collection;
  collection.graphs.reserve(graph_count);
  collection.names.reserve(graph_count);
  for (std::uint64_t gid = 1; gid <= graph_count; ++gid) {
    collection.graphs.emplace_back(graph_size[gid - 1], std::move(graph_edges[gid - 1]));
    collection.names.push_back(prefix + ":" + std::to_string(gid));
  }

  line_no = 0;
  while (std::getline(labels, line)) {
    ++line_no;
    const auto body = detail::trim(line);
    if (body.empty()) continue;
    std::int64_t label = 0;
    if (!detail::parse_i64(body, label))
      throw parse_error("labels line " + std::to_string(line_no) + ": malformed label");
    collection.labels.push_back(static_cast<int>(label));
  }
  if (collection.labels.size() != collection.graphs.size())
    throw parse_error("label count " + std::to_string(collection.labels.size()) +
                      " does not match graph count " + std::to_string(collection.graphs.size()));
  return collection;
}

/// Loads `<dir>/<prefix>_A.txt` and friends. Optional node/edge label files
/// in the directory are ignored; the pipeline is topology-only.
inline GraphCollection load_tu_collection(const std::filesystem::path& dir,
                                          const std::string& prefix) {
  const auto open = [&](const std::string& suffix) {
    const auto path = dir / (prefix + suffix);
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open " + path.string());
    return in;
  };
  auto adjacency = open("_A.txt");
  auto indicator = open("_graph_indicator.txt");
  auto labels = open("_graph_labels.txt");
  return parse_tu_collection(adjacency, indicator, labels, prefix);
}

/// Finds the single `<DS>_A.txt` under dir and returns DS.
inline std::string detect_tu_prefix(const std::filesystem::path& dir) {
  std::string found;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    const std::string suffix = "_A.txt";
    if (name.size() > suffix.size() && name.ends_with(suffix)) {
      if (!found.empty()) throw parse_error("multiple TU datasets under " + dir.string());
      found = name.substr(0, name.size() - suffix.size());
    }
  }
  if (found.empty()) throw parse_error("no <DS>_A.txt found under " + dir.string());
  return found;
}

/// Manifest format written by the generate command: one
/// `<relative-path>\t<class>\t<name>` line per graph. Classes are strings
/// in the file and become dense integer labels in first-appearance order.
inline GraphCollection load_manifest_collection(const std::filesystem::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw parse_error("cannot open " + manifest_path.string());
  const auto base = manifest_path.parent_path();

  GraphCollection collection;
  std::unordered_map<std::string, int> class_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto first = body.find('\t');
    const auto second = first == std::string_view::npos ? first : body.find('\t', first + 1);
    if (first == std::string_view::npos || second == std::string_view::npos)
      throw parse_error(manifest_path.string() + " line " + std::to_string(line_no) +
                        ": expected 'file<TAB>class<TAB>name'");
    const std::string file(detail::trim(body.substr(0, first)));
    const std::string cls(detail::trim(body.substr(first + 1, second - first - 1)));
    const std::string name(detail::trim(body.substr(second + 1)));
    auto [it, inserted] = class_ids.emplace(cls, static_cast<int>(class_ids.size()));
    collection.graphs.push_back(load_edge_list(base / file));
    collection.labels.push_back(it->second);
    collection.names.push_back(name);
  }
  if (collection.graphs.empty()) throw parse_error(manifest_path.string() + ": no graphs listed");
  return collection;
}

/// Collection dispatch: a file is a manifest, a directory is a TU dataset.
inline GraphCollection load_collection(const std::filesystem::path& path,
                                       const std::string& tu_prefix = {}) {
  if (std::filesystem::is_directory(path)) {
    const auto prefix = tu_prefix.empty() ? detect_tu_prefix(path) : tu_prefix;
    return load_tu_collection(path, prefix);
  }
  return load_manifest_collection(path);
}

}  // namespace ricci
