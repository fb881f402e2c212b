#include "trine/graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "json.hpp"

namespace trine {

char to_char(Color c) {
  switch (c) {
    case Color::A: return 'A';
    case Color::B: return 'B';
    case Color::C: return 'C';
  }
  return '?';
}

Color color_from_char(char ch) {
  switch (ch) {
    case 'A': return Color::A;
    case 'B': return Color::B;
    case 'C': return Color::C;
    default: throw GraphError(std::string("invalid color character '") + ch + "', expected A, B or C");
  }
}

Coloring Coloring::parse(std::string_view text) {
  std::vector<Color> colors;
  colors.reserve(text.size());
  for (char ch : text) colors.push_back(color_from_char(ch));
  return Coloring(std::move(colors));
}

std::size_t Coloring::count(Color c) const {
  return static_cast<std::size_t>(std::count(colors_.begin(), colors_.end(), c));
}

std::string Coloring::str() const {
  std::string s;
  s.reserve(colors_.size());
  for (Color c : colors_) s.push_back(to_char(c));
  return s;
}

Coloring transliterate(const Coloring& c) {
  Coloring out = c;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] == Color::B) out[i] = Color::C;
    else if (out[i] == Color::C) out[i] = Color::B;
  }
  return out;
}

Coloring complement(const Coloring& c) {
  Coloring out = c;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] == Color::A) out[i] = Color::B;
    else if (out[i] == Color::B) out[i] = Color::A;
  }
  return out;
}

namespace {

std::string edge_str(const Edge& e) {
  return "(" + std::to_string(e.first) + "," + std::to_string(e.second) + ")";
}

}  // namespace

MixedGraph::MixedGraph(std::size_t node_count, std::vector<Edge> directed, std::vector<Edge> undirected)
    : node_count_(node_count), directed_(std::move(directed)), undirected_(std::move(undirected)) {
  if (node_count_ == 0) throw GraphError("graph must have at least one node");

  auto check_ends = [&](const Edge& e) {
    if (e.first >= node_count_ || e.second >= node_count_)
      throw GraphError("edge " + edge_str(e) + " references a node outside [0," + std::to_string(node_count_) + ")");
    if (e.first == e.second) throw GraphError("loop " + edge_str(e) + " is not allowed");
  };

  for (const Edge& e : directed_) check_ends(e);
  for (Edge& e : undirected_) {
    check_ends(e);
    if (e.first > e.second) std::swap(e.first, e.second);
  }

  std::sort(directed_.begin(), directed_.end());
  if (auto it = std::adjacent_find(directed_.begin(), directed_.end()); it != directed_.end())
    throw GraphError("duplicate directed edge " + edge_str(*it));
  std::sort(undirected_.begin(), undirected_.end());
  if (auto it = std::adjacent_find(undirected_.begin(), undirected_.end()); it != undirected_.end())
    throw GraphError("duplicate undirected edge " + edge_str(*it));

  for (const Edge& e : undirected_) {
    if (std::binary_search(directed_.begin(), directed_.end(), e) ||
        std::binary_search(directed_.begin(), directed_.end(), Edge{e.second, e.first}))
      throw GraphError("pair " + edge_str(e) + " has both a directed and an undirected edge");
  }

  std::vector<std::vector<NodeId>> out(node_count_);
  for (const Edge& e : directed_) out[e.first].push_back(e.second);
  for (const Edge& e : undirected_) {
    out[e.first].push_back(e.second);
    out[e.second].push_back(e.first);
  }
  offsets_.assign(node_count_ + 1, 0);
  for (std::size_t v = 0; v < node_count_; ++v) {
    std::sort(out[v].begin(), out[v].end());
    offsets_[v + 1] = offsets_[v] + static_cast<std::uint32_t>(out[v].size());
  }
  adjacency_.reserve(offsets_.back());
  for (const auto& list : out) adjacency_.insert(adjacency_.end(), list.begin(), list.end());
}

std::string MixedGraph::to_json() const {
  nlohmann::json j;
  j["nodes"] = node_count_;
  j["directed"] = nlohmann::json::array();
  for (const Edge& e : directed_) j["directed"].push_back({e.first, e.second});
  j["undirected"] = nlohmann::json::array();
  for (const Edge& e : undirected_) j["undirected"].push_back({e.first, e.second});
  return j.dump();
}

MixedGraph MixedGraph::from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw GraphError(std::string("graph file is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("nodes") || !j["nodes"].is_number_integer())
    throw GraphError("graph file needs an integer \"nodes\" field");
  long long nodes = j["nodes"].get<long long>();
  if (nodes < 1) throw GraphError("\"nodes\" must be >= 1");

  auto read_edges = [&](const char* key) {
    std::vector<Edge> edges;
    if (!j.contains(key)) return edges;
    if (!j[key].is_array()) throw GraphError(std::string("\"") + key + "\" must be an array of [u,v] pairs");
    for (const auto& pair : j[key]) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() || !pair[1].is_number_integer())
        throw GraphError(std::string("\"") + key + "\" entries must be [u,v] integer pairs");
      long long u = pair[0].get<long long>(), v = pair[1].get<long long>();
      if (u < 0 || v < 0) throw GraphError("negative node id in edge list");
      edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
    }
    return edges;
  };
  return MixedGraph(static_cast<std::size_t>(nodes), read_edges("directed"), read_edges("undirected"));
}

std::span<const NodeId> out_neighbors(const MixedGraph& g, NodeId v) { return g.out_neighbors(v); }

namespace {

std::vector<bool> reachable(std::size_t n, NodeId from, const std::vector<std::vector<NodeId>>& adj) {
  std::vector<bool> seen(n, false);
  std::vector<NodeId> stack{from};
  seen[from] = true;
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    for (NodeId u : adj[v])
      if (!seen[u]) {
        seen[u] = true;
        stack.push_back(u);
      }
  }
  return seen;
}

bool all_true(const std::vector<bool>& v) { return std::all_of(v.begin(), v.end(), [](bool b) { return b; }); }

}  // namespace

bool super_weak_computable(const MixedGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<NodeId>> fwd(n), rev(n);
  for (NodeId v = 0; v < n; ++v)
    for (NodeId u : g.out_neighbors(v)) {
      fwd[v].push_back(u);
      rev[u].push_back(v);
    }
  // One SCC spanning V: everything reachable from node 0 both ways.
  return all_true(reachable(n, 0, fwd)) && all_true(reachable(n, 0, rev));
}

bool weak_computable(const MixedGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<NodeId>> adj(n);
  for (const Edge& e : g.undirected()) {
    adj[e.first].push_back(e.second);
    adj[e.second].push_back(e.first);
  }
  return all_true(reachable(n, 0, adj));
}

}  // namespace trine
