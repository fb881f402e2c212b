#pragma once

#include <cstdint>
#include <vector>

#include "trine/dynamics.hpp"
#include "trine/graph.hpp"

namespace trine {

/// Bit-sliced coloring for graphs of at most 64 nodes: bit v of `b`/`c` is set
/// when node v is B/C; A is the complement of both.
struct PackedState {
  std::uint64_t b = 0;
  std::uint64_t c = 0;
  friend bool operator==(const PackedState&, const PackedState&) = default;
};

/// Fast stepping kernel used by the mask search. Either a general graph
/// (one out-neighbour mask per node) or a circulant graph on a ring, where the
/// P-condition reduces to a handful of rotations.
class PackedAutomaton {
 public:
  static constexpr std::size_t kMaxNodes = 64;

  explicit PackedAutomaton(const MixedGraph& g);
  /// Arcs x -> (x + s) mod L for every shift s in [1, L).
  static PackedAutomaton circulant(std::size_t ring_size, std::vector<std::size_t> shifts);

  std::size_t node_count() const { return n_; }
  std::uint64_t full_mask() const { return full_; }

  PackedState step(PackedState s) const {
    const std::uint64_t p = c_neighbour(s.c);
    const std::uint64_t a = ~(s.b | s.c) & full_;
    return {s.c, (s.b & ~p) | (a & p)};
  }

  PackedState pack(const Coloring& c) const;
  Coloring unpack(PackedState s) const;

  static PackedState transliterate(PackedState s) { return {s.c, s.b}; }
  PackedState complement(PackedState s) const { return {~(s.b | s.c) & full_, s.c}; }

 private:
  PackedAutomaton() = default;

  std::uint64_t c_neighbour(std::uint64_t c) const {
    std::uint64_t p = 0;
    if (circulant_) {
      for (std::size_t s : shifts_) p |= (c >> s) | (c << (n_ - s));
      return p & full_;
    }
    for (std::size_t v = 0; v < n_; ++v)
      if (masks_[v] & c) p |= std::uint64_t{1} << v;
    return p;
  }

  std::size_t n_ = 0;
  std::uint64_t full_ = 0;
  bool circulant_ = false;
  std::vector<std::size_t> shifts_;
  std::vector<std::uint64_t> masks_;
};

/// Same contract as run_to_mirror; start_b has a bit per B node of the {A,B}
/// start. When `states` is non-null the trajectory G_1..G_T is appended to it.
RunStats run_packed(const PackedAutomaton& aut, std::uint64_t start_b, std::size_t max_steps = kDefaultMaxSteps,
                    std::vector<PackedState>* states = nullptr);

/// Expands a packed trajectory into a full RunRecord.
RunRecord to_run_record(const PackedAutomaton& aut, std::uint64_t start_b, const std::vector<PackedState>& states);

}  // namespace trine
