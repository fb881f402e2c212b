#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "trine/dynamics.hpp"

namespace trine {

class DegenerateRun : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class CheckLevel { Light, Full };

/// How "G_T = Ḡ_T̄" is read: compare G_T with the complement of the
/// complement-started run's last state, or with that state as is.
enum class Cond1Reading { Complemented, Raw };

struct IpfConfig {
  CheckLevel level = CheckLevel::Light;
  Cond1Reading cond1 = Cond1Reading::Complemented;
  /// Subtracted from event times before taking the phase parity in [8].
  int time_origin = 1;
};

std::string to_string(CheckLevel level);
CheckLevel parse_check_level(const std::string& text);
std::string to_string(Cond1Reading reading);
Cond1Reading parse_cond1_reading(const std::string& text);

/// Condition ids used in witnesses and verdicts: 0 is divisibility of T+T̄
/// by 3, 1..8 are the numbered conditions.
inline constexpr int kDiv3 = 0;

/// Per-node slot arrays of one run. Every A or C event of a node takes the
/// next slot in time order; a B shares the slot of the C right before it.
struct SlotTable {
  std::size_t K = 0;
  std::vector<std::vector<std::uint8_t>> a;  // A_v(k)
  std::vector<std::vector<std::uint8_t>> c;  // C_v(k) (== B_v(k))
  std::vector<std::vector<int>> f;           // time of the C event at slot k, -1 if none
  std::vector<std::size_t> events;           // A+C event count per node
  std::vector<int> lambda;

  std::size_t node_count() const { return a.size(); }
  const std::vector<std::uint8_t>& b(std::size_t v) const { return c[v]; }
  /// Nodes whose event count differs from K.
  std::vector<std::size_t> overflow_nodes() const;
};

/// Slot tables for a run and its complement-started run. Throws DegenerateRun
/// when either period is <= 2. K = (T + T̄) / 3 rounded down.
std::pair<SlotTable, SlotTable> build_slots(const RunRecord& run, const RunRecord& complement_run);

/// F_v(k) in {0,1,2,3}; -1 where slot k is not filled by exactly one run.
struct PhaseTable {
  std::vector<std::vector<int>> F;
};

PhaseTable integral_phase(const SlotTable& slots, const SlotTable& complement_slots, int time_origin = 0);

struct Witness {
  int condition = -1;
  int node = -1;
  int slot = -1;
  int time = -1;
  std::string detail;
};

/// Outcome of the divisibility test and conditions [1]..[3], computable from
/// run tallies alone.
struct LightResult {
  bool div3 = false;
  bool c1 = false, c1_raw = false, c1_complemented = false;
  bool c2 = false, c3 = false;
  bool ok = false;
  std::vector<Witness> witnesses;
  /// First failed condition id, -1 when ok.
  int first_failure() const { return witnesses.empty() ? -1 : witnesses.front().condition; }
};

LightResult check_light(const RunStats& run, const RunStats& complement_run, const IpfConfig& cfg = {});

struct IpfReport {
  std::size_t T = 0, Tbar = 0, K = 0;
  int lambda = 0, lambda_bar = 0;
  bool lambda_uniform = false;
  bool div3 = false;
  std::array<bool, 8> cond{};  // [1]..[8] at index 0..7
  bool c1_raw = false, c1_complemented = false;
  bool c8_origin0 = false, c8_origin1 = false;
  bool slot_overflow = false;
  bool light_ok = false;
  bool full_ok = false;
  /// Set when [4]..[7] disagree with each other, which cannot happen if slots
  /// split cleanly between the two runs.
  bool slot_inconsistency = false;
  std::vector<Witness> witnesses;

  bool ok(CheckLevel level) const { return level == CheckLevel::Light ? light_ok : full_ok; }
  int first_failure(CheckLevel level) const;
  std::string to_json() const;
};

IpfReport check_ipf(const RunRecord& run, const RunRecord& complement_run, const IpfConfig& cfg = {});

}  // namespace trine
