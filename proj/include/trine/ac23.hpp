#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "trine/dynamics.hpp"
#include "trine/graph.hpp"
#include "trine/ipf.hpp"
#include "trine/packed.hpp"

namespace trine {

/// 1D circle mask: bit i of `left` (resp. `right`) puts a mask point at offset
/// -(i+1) (resp. +(i+1)).
class Mask {
 public:
  Mask(std::uint32_t left, std::uint32_t right);

  std::uint32_t left() const { return left_; }
  std::uint32_t right() const { return right_; }
  const std::vector<int>& left_offsets() const { return left_offsets_; }
  const std::vector<int>& right_offsets() const { return right_offsets_; }
  /// Mask points including the centre.
  std::size_t N() const { return columns_.size(); }
  /// Column offsets: column 0 is the centre, then the mask points in
  /// ascending signed offset.
  const std::vector<int>& column_offsets() const { return columns_; }
  int max_offset() const;
  Mask reflected() const { return Mask(right_, left_); }
  std::string str() const { return "(" + std::to_string(left_) + "," + std::to_string(right_) + ")"; }

  friend bool operator==(const Mask& a, const Mask& b) { return a.left_ == b.left_ && a.right_ == b.right_; }

 private:
  std::uint32_t left_, right_;
  std::vector<int> left_offsets_, right_offsets_, columns_;
};

/// Mask from the "n,m" form used on the command line.
Mask parse_mask(const std::string& text);

struct BuiltGraph {
  MixedGraph graph;
  /// Some offset is 0 mod L or two mask points land on the same node.
  bool degenerate = false;
};

/// Offsets that collapse modulo L.
bool degenerate_ring(const Mask& mask, std::size_t L);

/// Ring graph of the mask: arcs x -> x-d for left offsets and x -> x+d for
/// right offsets; reciprocal arc pairs become undirected edges.
BuiltGraph build_graph(const Mask& mask, std::size_t L);

/// The same automaton as a circulant packed kernel.
PackedAutomaton build_packed(const Mask& mask, std::size_t L);

bool mask_weak_computable(const Mask& mask, std::size_t L);

enum class MaskStatus { CorrectSoFar, Incorrect };
std::string to_string(MaskStatus s);

struct SearchConfig {
  std::size_t lmin = 3;
  std::size_t lmax = 24;
  std::size_t exhaustive_cutoff = 12;
  std::size_t samples_per_L = 1000;
  std::uint64_t seed = 1;
  IpfConfig ipf;
  std::size_t max_steps = kDefaultMaxSteps;
  /// Upper bound on start pairs evaluated; 0 means unlimited.
  std::size_t budget = 0;
  /// 0 leaves the OpenMP default.
  int threads = 0;
};

struct MaskWitness {
  std::size_t L = 0;
  std::string start;  // {A,B} coloring, node 0 first
  int condition = -1;
};

/// One tested ring size.
struct TestedBlock {
  std::size_t L = 0;
  bool exhaustive = false;
  bool degenerate_ring = false;
  std::size_t starts = 0;      // start colorings evaluated
  std::size_t skipped = 0;     // T <= 2 for the start or its complement
  std::size_t failures = 0;    // counted only up to the first witness on non-degenerate rings
};

struct MaskVerdict {
  Mask mask{1, 1};
  MaskStatus status = MaskStatus::CorrectSoFar;
  std::optional<MaskWitness> witness;
  /// First failure seen on each degenerate ring; never decides the status.
  std::vector<MaskWitness> degenerate_failures;
  std::vector<TestedBlock> tested;
  bool budget_exhausted = false;

  std::string to_json() const;
};

/// Start colorings for one ring size, in evaluation order. Bit x set means
/// node x starts as B.
std::vector<std::uint64_t> start_set(const Mask& mask, std::size_t L, const SearchConfig& cfg);

/// Reflects a start through node 0: bit x moves to (L - x) mod L.
std::uint64_t reflect_start(std::uint64_t start, std::size_t L);

std::string start_string(std::uint64_t start, std::size_t L);

/// OpenMP search over ring sizes and start colorings; the first failing start
/// (smallest L, then evaluation order) becomes the witness.
MaskVerdict classify_mask(const Mask& mask, const SearchConfig& cfg);

/// Single-threaded reference on the generic graph engine. Same verdict as
/// classify_mask for every configuration.
MaskVerdict classify_mask_serial(const Mask& mask, const SearchConfig& cfg);

struct GridCell {
  MaskVerdict verdict;
  std::optional<std::size_t> cr;
};

struct VerdictGrid {
  std::uint32_t n_max = 1, m_max = 1;
  std::map<std::pair<std::uint32_t, std::uint32_t>, GridCell> cells;

  const GridCell& at(std::uint32_t n, std::uint32_t m) const { return cells.at({n, m}); }
  /// Header n,m,N,status,witnessL,witnessStart,conditionFailed.
  std::string to_csv() const;
  std::string to_json() const;
};

struct GridOptions {
  /// JSON-lines file of finished cells; cells already present are reused.
  std::string checkpoint;
  std::function<void(const MaskVerdict&)> on_cell;
};

/// Verdicts for all odd n <= n_max, odd m <= m_max.
VerdictGrid verdict_grid(std::uint32_t n_max, std::uint32_t m_max, const SearchConfig& cfg,
                         const GridOptions& options = {});

std::string config_fingerprint(const SearchConfig& cfg);

}  // namespace trine
