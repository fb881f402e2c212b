#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace trine {

using NodeId = std::uint32_t;

enum class Color : std::uint8_t { A = 0, B = 1, C = 2 };

char to_char(Color c);
Color color_from_char(char ch);

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Total assignment node -> {A,B,C}. Index is the node id.
class Coloring {
 public:
  Coloring() = default;
  explicit Coloring(std::size_t n, Color fill = Color::A) : colors_(n, fill) {}
  explicit Coloring(std::vector<Color> colors) : colors_(std::move(colors)) {}

  /// Parses a string over "ABC"; throws GraphError on any other character.
  static Coloring parse(std::string_view text);

  std::size_t size() const { return colors_.size(); }
  Color operator[](std::size_t i) const { return colors_[i]; }
  Color& operator[](std::size_t i) { return colors_[i]; }
  std::span<const Color> colors() const { return colors_; }

  std::size_t count(Color c) const;
  bool only_ab() const { return count(Color::C) == 0; }
  bool only_ac() const { return count(Color::B) == 0; }
  bool all_a() const { return count(Color::A) == size(); }

  std::string str() const;

  friend bool operator==(const Coloring&, const Coloring&) = default;
  friend auto operator<=>(const Coloring& a, const Coloring& b) { return a.colors_ <=> b.colors_; }

 private:
  std::vector<Color> colors_;
};

/// B <-> C pointwise.
Coloring transliterate(const Coloring& c);
/// A <-> B pointwise, C unchanged.
Coloring complement(const Coloring& c);

using Edge = std::pair<NodeId, NodeId>;

/// Finite mixed graph. Immutable once built; out-neighbour lists are sorted.
///
/// Construction rejects self-loops, repeated edges, and a pair bound by both a
/// directed and an undirected edge.
class MixedGraph {
 public:
  MixedGraph(std::size_t node_count, std::vector<Edge> directed, std::vector<Edge> undirected);

  std::size_t node_count() const { return node_count_; }
  /// Directed arcs, sorted.
  const std::vector<Edge>& directed() const { return directed_; }
  /// Undirected edges normalized to (min,max), sorted.
  const std::vector<Edge>& undirected() const { return undirected_; }

  std::span<const NodeId> out_neighbors(NodeId v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }

  std::string to_json() const;
  static MixedGraph from_json(std::string_view text);

 private:
  std::size_t node_count_;
  std::vector<Edge> directed_;
  std::vector<Edge> undirected_;
  std::vector<std::uint32_t> offsets_;
  std::vector<NodeId> adjacency_;
};

std::span<const NodeId> out_neighbors(const MixedGraph& g, NodeId v);

/// A closed walk through every node exists (one strongly connected component,
/// undirected edges usable both ways).
bool super_weak_computable(const MixedGraph& g);

/// The undirected edges alone connect every node.
bool weak_computable(const MixedGraph& g);

}  // namespace trine
