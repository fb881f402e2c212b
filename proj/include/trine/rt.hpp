#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "trine/ac23.hpp"
#include "trine/dynamics.hpp"
#include "trine/ipf.hpp"

namespace trine::rt {

class DimensionMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class UnconfiguredStepTable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class UnverifiedRuns : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One of 0,1,2,0̄,1̄,2̄, coded 0..5 (the barred values are also written
/// -0,-1,-2).
class Value {
 public:
  constexpr Value() = default;
  constexpr explicit Value(std::uint8_t code) : code_(code) {}
  static constexpr Value of(int digit, bool bar) { return Value(static_cast<std::uint8_t>(digit + (bar ? 3 : 0))); }
  static Value parse(std::string_view token);

  constexpr std::uint8_t code() const { return code_; }
  constexpr int digit() const { return code_ % 3; }
  constexpr bool bar() const { return code_ >= 3; }
  std::string token() const;

  friend constexpr bool operator==(Value, Value) = default;
  friend constexpr auto operator<=>(Value a, Value b) { return a.code_ <=> b.code_; }

 private:
  std::uint8_t code_ = 0;
};

using Row = std::vector<Value>;

/// One of the six subtable substitutions, named by the image of 0.
/// "=c": d -> d+c, d̄ -> (d-c)̄.  "=c̄": d -> (d+c)̄, d̄ -> d-c.
class Substitution {
 public:
  constexpr Substitution() = default;
  constexpr explicit Substitution(Value target) : target_(target) {}
  static std::array<Substitution, 6> all();

  constexpr Value target() const { return target_; }
  constexpr Value apply(Value v) const {
    const int c = target_.digit();
    const int d = v.bar() ? (v.digit() - c + 3) % 3 : (v.digit() + c) % 3;
    return Value::of(d, v.bar() != target_.bar());
  }
  Row apply(const Row& row) const;
  Substitution then(Substitution next) const;  // next ∘ this
  Substitution inverse() const;
  /// The substitution that sends v to 0.
  static Substitution normalizing(Value v);
  std::string label() const { return "=" + target_.token(); }

  friend constexpr bool operator==(Substitution, Substitution) = default;

 private:
  Value target_{};
};

/// Column 0 moved to the end, the row read as a base-6 numeral, most
/// significant digit first.
std::uint64_t canonical_key(std::span<const Value> row);
Row row_from_key(std::uint64_t key, std::size_t N);

inline constexpr std::size_t kMaxColumns = 24;

/// The "=0" subtable of a Resolution Table: a duplicate-free row set kept in
/// canonical order.
class Table {
 public:
  Table() = default;
  explicit Table(std::size_t N, std::vector<int> column_offsets = {});

  std::size_t N() const { return N_; }
  std::size_t CR() const { return keys_.size(); }
  bool empty() const { return keys_.empty(); }
  const std::vector<std::uint64_t>& keys() const { return keys_; }
  std::vector<Row> rows() const;
  Row row(std::size_t i) const { return row_from_key(keys_[i], N_); }
  bool contains(const Row& row) const;

  void insert(const Row& row);
  /// Bulk insert of keys; duplicates dropped.
  void insert_keys(std::vector<std::uint64_t> keys);

  std::optional<std::pair<std::uint32_t, std::uint32_t>> mask_tag;
  std::vector<int> column_offsets;
  /// Non-empty for tables produced by a reconstruction hypothesis.
  std::string hypothesis;

  /// Header `N=.. [mask=n,m] [columns=..] subtable==0 [hypothesis=.. [EXPERIMENTAL]]`
  /// followed by one comma-separated row per line.
  std::string to_text() const;
  static Table parse(const std::string& text);

  friend bool operator==(const Table& a, const Table& b) { return a.N_ == b.N_ && a.keys_ == b.keys_; }

 private:
  std::size_t N_ = 0;
  std::vector<std::uint64_t> keys_;
};

Table with_mask(const Mask& mask);

/// Applies `s` to every row.
Table substitute(const Table& t, Substitution s);
/// The six subtables in the order =0,=1,=2,=0̄,=1̄,=2̄.
std::array<Table, 6> expand_subtables(const Table& t);

enum class ValueClass { Small, Middle, Full };
std::string to_string(ValueClass c);
ValueClass classify(const Table& t);

/// Value tallies outside and inside column 0, indexed by value code.
struct SCounts {
  std::array<std::size_t, 6> other{};
  std::array<std::size_t, 6> zero{};
  std::size_t total() const;
};
SCounts s_counts(const Table& t);

enum class Kind { NotCompletelyCorrect, CompletelyCorrect1st, CompletelyCorrect2nd };
std::string to_string(Kind k);
Kind kind(const Table& t);

Table intersect(const Table& a, const Table& b);
Table unite(const Table& a, const Table& b);
/// a ⊇ b.
bool includes(const Table& a, const Table& b);
bool equals(const Table& a, const Table& b);

/// Row without column 0.
Row project(const Row& row);

struct Conflict {
  std::size_t table_a = 0, table_b = 0;
  Row row_a, row_b;
  std::string reason;
};

class IncompatibleTables : public std::runtime_error {
 public:
  explicit IncompatibleTables(Conflict c);
  Conflict conflict;
};

std::optional<Conflict> find_conflict(std::span<const Table> tables);

struct IntegralTable {
  Table table;
  /// Order in which the inputs were folded (largest C_R first) and the C_R
  /// after each union.
  std::vector<std::size_t> order;
  std::vector<std::size_t> steps;
};

/// Checks compatibility, then folds the unions starting from the largest C_R.
IntegralTable compatibility(std::span<const Table> tables);

struct CoincidenceCell {
  bool row_includes_col = false;  // tables[i] ⊇ tables[j]
  bool col_includes_row = false;
  std::size_t intersection = 0;
  /// Cells whose intersection tables are identical share a group id.
  std::size_t group = 0;
};

struct CoincidenceMatrix {
  std::vector<std::string> names;
  std::vector<std::vector<CoincidenceCell>> cells;
  std::string to_csv() const;
};

CoincidenceMatrix coincidence_matrix(std::span<const Table> tables, std::vector<std::string> names = {});

/// Induction data for masks (1, 2^k - 1): the k = 1 table and, for each value
/// of the last column, the ordered triple of values in the new column. The
/// zero column follows the ±1 fractal 1 -> (1,1,1̄), other values repeat.
struct StepTable {
  Table base;
  std::map<Value, std::array<Value, 3>> step;

  static StepTable parse(const std::string& text);
  std::string to_text() const;
};

Table build_1_2k1(std::size_t k, const std::optional<StepTable>& steps);

/// Re-expresses the table of `mask` on the reflected mask: the column at
/// offset x moves to the column at offset -x.
Table reflect(const Table& t, const Mask& mask);

enum class Hypothesis { NextSlot, PhaseDiff };
std::string to_string(Hypothesis h);
Hypothesis parse_hypothesis(const std::string& text);

struct RunPair {
  RunRecord run;
  RunRecord complement_run;
};

/// EXPERIMENTAL reconstruction of table rows from verified run pairs.
///
/// NextSlot: node u at slot k carries (f mod 3) when its run filled the slot
/// and ((f̄ + 1) mod 3)̄ when the complement run did; a row is the centre and
/// its mask points at slot k, normalized so the centre's slot k+1 value is 0.
/// PhaseDiff: column j carries the phase of mask point j minus the centre's
/// phase mod 3, barred when the complement run filled that slot.
Table extract_rows(const Mask& mask, std::span<const RunPair> runs, Hypothesis h = Hypothesis::NextSlot,
                   const IpfConfig& ipf = {});

/// Streams run pairs over the search envelope of `cfg` into one table.
/// Degenerate pairs are skipped; a failing pair throws UnverifiedRuns.
Table extract_table(const Mask& mask, const SearchConfig& cfg, Hypothesis h = Hypothesis::NextSlot);

}  // namespace trine::rt
