#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "trine/graph.hpp"

namespace trine {

inline constexpr std::size_t kDefaultMaxSteps = 1'000'000;

class MaxStepsExceeded : public std::runtime_error {
 public:
  explicit MaxStepsExceeded(std::size_t limit)
      : std::runtime_error("no mirror point within " + std::to_string(limit) + " steps; raise --max-steps"),
        limit(limit) {}
  std::size_t limit;
};

/// True iff some out-neighbour of v is colored C.
bool p_condition(const MixedGraph& g, const Coloring& c, NodeId v);

/// One synchronous update. Rule I (no C out-neighbour): A->A, B->C, C->B.
/// Rule II: A->C, B->A, C->B.
Coloring step(const MixedGraph& g, const Coloring& c);

/// The unique state that steps to c: transliterate, step, transliterate.
Coloring predecessor(const MixedGraph& g, const Coloring& c);

/// Per-node color tallies over t = 1..T, shared by the generic and the
/// bit-packed run paths.
struct RunStats {
  std::size_t period = 0;       // T
  Coloring last;                // G_T
  std::vector<int> n_a, n_b, n_c;

  int lambda(std::size_t v) const { return n_a[v] - n_b[v]; }
  bool degenerate() const { return period <= 2; }
  /// N_B(v) == N_C(v) for every node.
  bool bc_balanced() const { return n_b == n_c; }
  /// N_A and N_B agree across all nodes.
  bool uniform() const;
};

/// Forward trajectory from the Start Point to the Mirror Point.
///
/// states[0] is G_1, the {A,C} image of the {A,B} start G_1*; states[T-1] is
/// G_T and step(G_T) == transliterate(G_T) == mirror_state.
struct RunRecord {
  Coloring start_ab;
  std::vector<Coloring> states;
  Coloring mirror_state;
  RunStats stats;

  std::size_t period() const { return states.size(); }
  bool degenerate() const { return period() <= 2; }
  std::size_t node_count() const { return start_ab.size(); }
  /// Colors of node v at t = 1..T.
  std::vector<Color> history(NodeId v) const;
  std::vector<int> lambda_per_node() const;

  std::string to_json() const;
  /// Header `t,state`, one row per t = 1..T.
  std::string to_csv() const;
};

RunStats tally(const std::vector<Coloring>& states);

/// Runs from an {A,B} start to the Mirror Point. Throws std::invalid_argument
/// if the start contains C, MaxStepsExceeded past max_steps.
RunRecord run_to_mirror(const MixedGraph& g, const Coloring& start_ab, std::size_t max_steps = kDefaultMaxSteps);

/// The whole orbit starting at G_1, up to (excluding) the return to G_1.
/// Length is 2T for T > 2 and 1 for the all-A fixed point.
std::vector<Coloring> full_cycle(const MixedGraph& g, const Coloring& start_ab, std::size_t max_steps = kDefaultMaxSteps);

}  // namespace trine
