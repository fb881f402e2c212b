#include "trine/rt.hpp"

#include <omp.h>

#include <algorithm>
#include <exception>
#include <numeric>
#include <set>
#include <sstream>

#include "trine/packed.hpp"

namespace trine::rt {

// ---------------------------------------------------------------- values ---

Value Value::parse(std::string_view token) {
  static constexpr std::string_view kTokens[] = {"0", "1", "2", "-0", "-1", "-2"};
  for (std::uint8_t i = 0; i < 6; ++i)
    if (token == kTokens[i]) return Value(i);
  throw FormatError("bad table value '" + std::string(token) + "', expected one of 0,1,2,-0,-1,-2");
}

std::string Value::token() const { return (bar() ? "-" : "") + std::to_string(digit()); }

std::array<Substitution, 6> Substitution::all() {
  std::array<Substitution, 6> out;
  for (std::uint8_t i = 0; i < 6; ++i) out[i] = Substitution(Value(i));
  return out;
}

Row Substitution::apply(const Row& row) const {
  Row out(row.size());
  std::transform(row.begin(), row.end(), out.begin(), [this](Value v) { return apply(v); });
  return out;
}

Substitution Substitution::then(Substitution next) const { return Substitution(next.apply(apply(Value(0)))); }

Substitution Substitution::inverse() const {
  for (Substitution s : all())
    if (then(s) == Substitution()) return s;
  return {};
}

Substitution Substitution::normalizing(Value v) {
  for (Substitution s : all())
    if (s.apply(v) == Value(0)) return s;
  return {};
}

std::uint64_t canonical_key(std::span<const Value> row) {
  std::uint64_t key = 0;
  for (std::size_t i = 1; i < row.size(); ++i) key = key * 6 + row[i].code();
  if (!row.empty()) key = key * 6 + row[0].code();
  return key;
}

Row row_from_key(std::uint64_t key, std::size_t N) {
  Row row(N);
  if (N == 0) return row;
  row[0] = Value(static_cast<std::uint8_t>(key % 6));
  key /= 6;
  for (std::size_t i = N - 1; i >= 1; --i) {
    row[i] = Value(static_cast<std::uint8_t>(key % 6));
    key /= 6;
  }
  return row;
}

// ----------------------------------------------------------------- table ---

Table::Table(std::size_t N, std::vector<int> offsets) : column_offsets(std::move(offsets)), N_(N) {
  if (N == 0 || N > kMaxColumns) throw DimensionMismatch("table width must be in 1.." + std::to_string(kMaxColumns));
  if (!column_offsets.empty() && column_offsets.size() != N)
    throw DimensionMismatch("column offset list has " + std::to_string(column_offsets.size()) + " entries for N=" +
                            std::to_string(N));
}

Table with_mask(const Mask& mask) {
  Table t(mask.N(), mask.column_offsets());
  t.mask_tag = std::make_pair(mask.left(), mask.right());
  return t;
}

std::vector<Row> Table::rows() const {
  std::vector<Row> out;
  out.reserve(keys_.size());
  for (std::uint64_t k : keys_) out.push_back(row_from_key(k, N_));
  return out;
}

bool Table::contains(const Row& row) const {
  return row.size() == N_ && std::binary_search(keys_.begin(), keys_.end(), canonical_key(row));
}

void Table::insert(const Row& row) {
  if (row.size() != N_)
    throw DimensionMismatch("row of width " + std::to_string(row.size()) + " in a table with N=" + std::to_string(N_));
  const std::uint64_t key = canonical_key(row);
  auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
  if (it == keys_.end() || *it != key) keys_.insert(it, key);
}

void Table::insert_keys(std::vector<std::uint64_t> keys) {
  keys.insert(keys.end(), keys_.begin(), keys_.end());
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  keys_ = std::move(keys);
}

namespace {

std::string join_ints(const std::vector<int>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + std::to_string(xs[i]);
  return s;
}

std::string row_text(const Row& row) {
  std::string s;
  for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + row[i].token();
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

int parse_int(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used == s.size()) return v;
  } catch (const std::logic_error&) {
  }
  throw FormatError(std::string("bad ") + what + " '" + s + "'");
}

}  // namespace

std::string Table::to_text() const {
  std::string out = "N=" + std::to_string(N_);
  if (mask_tag) out += " mask=" + std::to_string(mask_tag->first) + "," + std::to_string(mask_tag->second);
  if (!column_offsets.empty()) out += " columns=" + join_ints(column_offsets);
  out += " subtable==0";
  if (!hypothesis.empty()) out += " hypothesis=" + hypothesis + " [EXPERIMENTAL]";
  out += "\n";
  for (std::uint64_t k : keys_) out += row_text(row_from_key(k, N_)) + "\n";
  return out;
}

Table Table::parse(const std::string& text) {
  std::istringstream in(text);
  std::string header;
  if (!std::getline(in, header)) throw FormatError("empty table file");

  std::optional<std::size_t> N;
  std::optional<std::pair<std::uint32_t, std::uint32_t>> mask;
  std::vector<int> columns;
  std::string hypothesis;
  bool subtable = false;
  std::istringstream hs(header);
  std::string tok;
  while (hs >> tok) {
    if (tok.rfind("N=", 0) == 0) {
      const int n = parse_int(tok.substr(2), "N");
      if (n < 1) throw FormatError("N must be positive");
      N = static_cast<std::size_t>(n);
    } else if (tok.rfind("mask=", 0) == 0) {
      const auto parts = split(tok.substr(5), ',');
      if (parts.size() != 2) throw FormatError("mask must be 'n,m'");
      mask = std::make_pair(static_cast<std::uint32_t>(parse_int(parts[0], "mask")),
                            static_cast<std::uint32_t>(parse_int(parts[1], "mask")));
    } else if (tok.rfind("columns=", 0) == 0) {
      for (const auto& p : split(tok.substr(8), ',')) columns.push_back(parse_int(p, "column offset"));
    } else if (tok == "subtable==0") {
      subtable = true;
    } else if (tok.rfind("hypothesis=", 0) == 0) {
      hypothesis = tok.substr(11);
    } else if (tok == "[EXPERIMENTAL]") {
      if (hypothesis.empty()) hypothesis = "unspecified";
    } else {
      throw FormatError("unknown header token '" + tok + "'");
    }
  }
  if (!N) throw FormatError("header lacks N=<int>");
  if (!subtable) throw FormatError("header lacks subtable==0");

  Table t(*N, std::move(columns));
  t.mask_tag = mask;
  t.hypothesis = std::move(hypothesis);
  std::vector<std::uint64_t> keys;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto toks = split(line, ',');
    if (toks.size() != *N)
      throw FormatError("line " + std::to_string(lineno) + " has " + std::to_string(toks.size()) + " values, expected " +
                        std::to_string(*N));
    Row row;
    for (const auto& x : toks) row.push_back(Value::parse(x));
    keys.push_back(canonical_key(row));
  }
  t.insert_keys(std::move(keys));
  return t;
}

// ------------------------------------------------------------- algebra -----

Table substitute(const Table& t, Substitution s) {
  Table out = t;
  std::vector<std::uint64_t> keys;
  keys.reserve(t.CR());
  for (const Row& r : t.rows()) keys.push_back(canonical_key(s.apply(r)));
  out.insert_keys({});
  Table fresh(t.N(), t.column_offsets);
  fresh.mask_tag = t.mask_tag;
  fresh.hypothesis = t.hypothesis;
  fresh.insert_keys(std::move(keys));
  return fresh;
}

std::array<Table, 6> expand_subtables(const Table& t) {
  std::array<Table, 6> out;
  const auto subs = Substitution::all();
  for (std::size_t i = 0; i < 6; ++i) out[i] = substitute(t, subs[i]);
  return out;
}

std::string to_string(ValueClass c) {
  switch (c) {
    case ValueClass::Small: return "Small";
    case ValueClass::Middle: return "Middle";
    case ValueClass::Full: return "Full";
  }
  return "?";
}

ValueClass classify(const Table& t) {
  std::array<bool, 6> seen{};
  for (const Row& r : t.rows())
    for (Value v : r) seen[v.code()] = true;
  if (seen[3] || seen[5]) return ValueClass::Full;
  return seen[0] ? ValueClass::Middle : ValueClass::Small;
}

std::size_t SCounts::total() const {
  return std::accumulate(other.begin(), other.end(), std::size_t{0}) +
         std::accumulate(zero.begin(), zero.end(), std::size_t{0});
}

SCounts s_counts(const Table& t) {
  SCounts s;
  for (const Row& r : t.rows()) {
    ++s.zero[r[0].code()];
    for (std::size_t i = 1; i < r.size(); ++i) ++s.other[r[i].code()];
  }
  return s;
}

std::string to_string(Kind k) {
  switch (k) {
    case Kind::NotCompletelyCorrect: return "NotCompletelyCorrect";
    case Kind::CompletelyCorrect1st: return "CompletelyCorrect1st";
    case Kind::CompletelyCorrect2nd: return "CompletelyCorrect2nd";
  }
  return "?";
}

Kind kind(const Table& t) {
  const SCounts s = s_counts(t);
  // Zero column limited to 1 and 1̄.
  if (s.zero[0] || s.zero[2] || s.zero[3] || s.zero[5]) return Kind::NotCompletelyCorrect;
  const std::size_t patterns = std::size_t{1} << (t.N() - 1);
  if (s.zero[1] != patterns) return Kind::CompletelyCorrect2nd;
  // Rows with zero column 1 must be exactly the 2^(N-1) sign patterns over {1, 1̄}.
  std::set<std::uint64_t> signs;
  for (const Row& r : t.rows()) {
    if (r[0] != Value(1)) continue;
    std::uint64_t bits = 0;
    for (std::size_t i = 1; i < r.size(); ++i) {
      if (r[i] != Value(1) && r[i] != Value(4)) return Kind::CompletelyCorrect2nd;
      bits = bits << 1 | (r[i] == Value(4));
    }
    signs.insert(bits);
  }
  return signs.size() == patterns ? Kind::CompletelyCorrect1st : Kind::CompletelyCorrect2nd;
}

namespace {

void same_width(const Table& a, const Table& b) {
  if (a.N() != b.N())
    throw DimensionMismatch("tables have different widths (N=" + std::to_string(a.N()) + " vs N=" +
                            std::to_string(b.N()) + ")");
}

Table like(const Table& a, const Table& b) {
  Table out(a.N(), a.column_offsets == b.column_offsets ? a.column_offsets : std::vector<int>{});
  if (a.mask_tag == b.mask_tag) out.mask_tag = a.mask_tag;
  if (!a.hypothesis.empty() || !b.hypothesis.empty()) out.hypothesis = a.hypothesis.empty() ? b.hypothesis : a.hypothesis;
  return out;
}

}  // namespace

Table intersect(const Table& a, const Table& b) {
  same_width(a, b);
  std::vector<std::uint64_t> keys;
  std::set_intersection(a.keys().begin(), a.keys().end(), b.keys().begin(), b.keys().end(), std::back_inserter(keys));
  Table out = like(a, b);
  out.insert_keys(std::move(keys));
  return out;
}

Table unite(const Table& a, const Table& b) {
  same_width(a, b);
  std::vector<std::uint64_t> keys;
  std::set_union(a.keys().begin(), a.keys().end(), b.keys().begin(), b.keys().end(), std::back_inserter(keys));
  Table out = like(a, b);
  out.insert_keys(std::move(keys));
  return out;
}

bool includes(const Table& a, const Table& b) {
  same_width(a, b);
  return std::includes(a.keys().begin(), a.keys().end(), b.keys().begin(), b.keys().end());
}

bool equals(const Table& a, const Table& b) {
  same_width(a, b);
  return a.keys() == b.keys();
}

Row project(const Row& row) { return Row(row.begin() + (row.empty() ? 0 : 1), row.end()); }

IncompatibleTables::IncompatibleTables(Conflict c)
    : std::runtime_error("tables " + std::to_string(c.table_a) + " and " + std::to_string(c.table_b) +
                         " are incompatible: " + c.reason + " (rows " + row_text(c.row_a) + " / " + row_text(c.row_b) +
                         ")"),
      conflict(std::move(c)) {}

std::optional<Conflict> find_conflict(std::span<const Table> tables) {
  for (std::size_t i = 1; i < tables.size(); ++i) same_width(tables[0], tables[i]);

  // A row may not reappear under another subtable label.
  const auto subs = Substitution::all();
  for (std::size_t i = 0; i < tables.size(); ++i)
    for (const Row& r : tables[i].rows())
      for (std::size_t s = 1; s < subs.size(); ++s) {
        const Row moved = subs[s].apply(r);
        for (std::size_t j = 0; j < tables.size(); ++j)
          if (tables[j].contains(moved))
            return Conflict{i, j, r, moved, "row appears in subtable " + subs[s].inverse().label()};
      }

  // With column 0 deleted, equal rows must agree on column 0.
  std::map<Row, std::pair<std::size_t, Row>> seen;
  for (std::size_t i = 0; i < tables.size(); ++i)
    for (const Row& r : tables[i].rows()) {
      auto [it, inserted] = seen.try_emplace(project(r), i, r);
      if (!inserted && it->second.second[0] != r[0])
        return Conflict{it->second.first, i, it->second.second, r, "same row without column 0, different column 0"};
    }
  return std::nullopt;
}

IntegralTable compatibility(std::span<const Table> tables) {
  IntegralTable out;
  if (tables.empty()) return out;
  if (auto c = find_conflict(tables)) throw IncompatibleTables(std::move(*c));
  out.order.resize(tables.size());
  std::iota(out.order.begin(), out.order.end(), std::size_t{0});
  std::stable_sort(out.order.begin(), out.order.end(),
                   [&](std::size_t a, std::size_t b) { return tables[a].CR() > tables[b].CR(); });
  out.table = tables[out.order.front()];
  out.steps.push_back(out.table.CR());
  for (std::size_t i = 1; i < out.order.size(); ++i) {
    out.table = unite(out.table, tables[out.order[i]]);
    out.steps.push_back(out.table.CR());
  }
  out.table.mask_tag.reset();
  return out;
}

std::string CoincidenceMatrix::to_csv() const {
  std::string out = "table";
  for (const auto& n : names) out += "," + n;
  out += "\n";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    out += names[i];
    for (std::size_t j = 0; j < cells[i].size(); ++j) {
      const auto& c = cells[i][j];
      out += ",";
      if (c.row_includes_col && c.col_includes_row) out += "equal";
      else if (c.row_includes_col) out += "includes";
      else if (c.col_includes_row) out += "included";
      else out += std::to_string(c.intersection) + "#" + std::to_string(c.group);
    }
    out += "\n";
  }
  return out;
}

CoincidenceMatrix coincidence_matrix(std::span<const Table> tables, std::vector<std::string> names) {
  for (std::size_t i = 1; i < tables.size(); ++i) same_width(tables[0], tables[i]);
  CoincidenceMatrix m;
  m.names = std::move(names);
  for (std::size_t i = m.names.size(); i < tables.size(); ++i) {
    const auto& t = tables[i];
    m.names.push_back(t.mask_tag ? "[" + std::to_string(t.mask_tag->first) + "," + std::to_string(t.mask_tag->second) + "]"
                                 : "#" + std::to_string(i));
  }
  std::map<std::vector<std::uint64_t>, std::size_t> groups;
  m.cells.assign(tables.size(), std::vector<CoincidenceCell>(tables.size()));
  for (std::size_t i = 0; i < tables.size(); ++i)
    for (std::size_t j = 0; j < tables.size(); ++j) {
      auto& c = m.cells[i][j];
      c.row_includes_col = includes(tables[i], tables[j]);
      c.col_includes_row = includes(tables[j], tables[i]);
      const Table meet = intersect(tables[i], tables[j]);
      c.intersection = meet.CR();
      c.group = groups.try_emplace(meet.keys(), groups.size() + 1).first->second;
    }
  return m;
}

// ------------------------------------------------------------- induction ---

StepTable StepTable::parse(const std::string& text) {
  StepTable st;
  std::istringstream in(text);
  std::string line, base_text;
  bool in_base = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line == "[base]") {
      in_base = true;
      continue;
    }
    if (line == "[step]") {
      in_base = false;
      continue;
    }
    if (in_base) {
      base_text += line + "\n";
      continue;
    }
    const auto arrow = line.find("->");
    if (arrow == std::string::npos) throw FormatError("step line must be '<value> -> a,b,c': " + line);
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t"));
      s.erase(s.find_last_not_of(" \t") + 1);
      return s;
    };
    const Value from = Value::parse(trim(line.substr(0, arrow)));
    const auto parts = split(trim(line.substr(arrow + 2)), ',');
    if (parts.size() != 3) throw FormatError("step line needs three new values: " + line);
    st.step[from] = {Value::parse(trim(parts[0])), Value::parse(trim(parts[1])), Value::parse(trim(parts[2]))};
  }
  if (base_text.empty()) throw FormatError("step table lacks a [base] section");
  st.base = Table::parse(base_text);
  if (st.base.N() != 3) throw FormatError("the base table must be the N=3 table of mask (1,1)");
  return st;
}

std::string StepTable::to_text() const {
  std::string out = "[base]\n" + base.to_text() + "[step]\n";
  for (const auto& [from, to] : step)
    out += from.token() + " -> " + to[0].token() + "," + to[1].token() + "," + to[2].token() + "\n";
  return out;
}

Table build_1_2k1(std::size_t k, const std::optional<StepTable>& steps) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (!steps) throw UnconfiguredStepTable("building (1, 2^k-1) tables needs a step table (--step-table FILE)");
  if (k + 2 > kMaxColumns) throw DimensionMismatch("k too large for the table width limit");
  std::vector<Row> rows = steps->base.rows();
  for (std::size_t level = 2; level <= k; ++level) {
    std::vector<Row> next;
    next.reserve(rows.size() * 3);
    for (const Row& r : rows) {
      const auto it = steps->step.find(r.back());
      if (it == steps->step.end())
        throw UnconfiguredStepTable("step table has no entry for last-column value " + r.back().token());
      for (std::size_t i = 0; i < 3; ++i) {
        Row grown = r;
        grown.push_back(it->second[i]);
        if (r[0] == Value(1) && i == 2) grown[0] = Value(4);
        next.push_back(std::move(grown));
      }
    }
    rows = std::move(next);
  }
  const std::uint32_t right = (std::uint32_t{1} << k) - 1;
  Table t = with_mask(Mask(1, right));
  std::vector<std::uint64_t> keys;
  for (const Row& r : rows) keys.push_back(canonical_key(r));
  t.insert_keys(std::move(keys));
  return t;
}

Table reflect(const Table& t, const Mask& mask) {
  if (t.N() != mask.N()) throw DimensionMismatch("table width does not match mask " + mask.str());
  const Mask mirrored = mask.reflected();
  const auto& from = mask.column_offsets();
  const auto& to = mirrored.column_offsets();
  std::vector<std::size_t> target(from.size());
  for (std::size_t j = 0; j < from.size(); ++j)
    target[j] = static_cast<std::size_t>(std::find(to.begin(), to.end(), -from[j]) - to.begin());
  Table out = with_mask(mirrored);
  out.hypothesis = t.hypothesis;
  std::vector<std::uint64_t> keys;
  for (const Row& r : t.rows()) {
    Row moved(r.size());
    for (std::size_t j = 0; j < r.size(); ++j) moved[target[j]] = r[j];
    keys.push_back(canonical_key(moved));
  }
  out.insert_keys(std::move(keys));
  return out;
}

// ------------------------------------------------------------ extraction ---

std::string to_string(Hypothesis h) { return h == Hypothesis::NextSlot ? "next-slot" : "phase-diff"; }

Hypothesis parse_hypothesis(const std::string& text) {
  if (text == "next-slot") return Hypothesis::NextSlot;
  if (text == "phase-diff") return Hypothesis::PhaseDiff;
  throw std::invalid_argument("hypothesis must be 'next-slot' or 'phase-diff', got '" + text + "'");
}

namespace {

void verify(const RunRecord& run, const RunRecord& crun, const IpfConfig& ipf) {
  const IpfReport rep = check_ipf(run, crun, ipf);
  const bool slots_ok = rep.cond[3] && rep.cond[4] && rep.cond[5] && rep.cond[6] && !rep.slot_overflow;
  if (!rep.light_ok || !slots_ok)
    throw UnverifiedRuns("run pair from start " + run.start_ab.str() + " fails IPF condition " +
                         std::to_string(rep.first_failure(CheckLevel::Full)));
}

void append_keys(const Mask& mask, const RunRecord& run, const RunRecord& crun, Hypothesis h, const IpfConfig& ipf,
                 std::vector<std::uint64_t>& keys) {
  verify(run, crun, ipf);
  const auto [slots, cslots] = build_slots(run, crun);
  const std::size_t L = run.node_count();
  const auto& offs = mask.column_offsets();
  std::vector<std::size_t> at(offs.size());
  Row row(offs.size());

  auto phase = [&](std::size_t u, std::size_t k) { return slots.c[u][k] ? slots.f[u][k] : cslots.f[u][k]; };
  auto value = [&](std::size_t u, std::size_t k) {
    return slots.c[u][k] ? Value::of(slots.f[u][k] % 3, false) : Value::of((cslots.f[u][k] + 1) % 3, true);
  };

  for (std::size_t v = 0; v < L; ++v) {
    for (std::size_t j = 0; j < offs.size(); ++j)
      at[j] = static_cast<std::size_t>(((static_cast<long long>(v) + offs[j]) % static_cast<long long>(L) +
                                        static_cast<long long>(L)) %
                                       static_cast<long long>(L));
    if (h == Hypothesis::NextSlot) {
      for (std::size_t k = 0; k + 1 < slots.K; ++k) {
        const Substitution norm = Substitution::normalizing(value(v, k + 1));
        for (std::size_t j = 0; j < offs.size(); ++j) row[j] = norm.apply(value(at[j], k));
        keys.push_back(canonical_key(row));
      }
    } else {
      for (std::size_t k = 0; k < slots.K; ++k) {
        const int centre = phase(v, k);
        for (std::size_t j = 0; j < offs.size(); ++j)
          row[j] = Value::of(((phase(at[j], k) - centre) % 3 + 3) % 3, slots.c[at[j]][k] == 0);
        keys.push_back(canonical_key(row));
      }
    }
  }
}

void compact(std::vector<std::uint64_t>& keys) {
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
}

Table empty_extracted(const Mask& mask, Hypothesis h) {
  Table t = with_mask(mask);
  t.hypothesis = to_string(h);
  return t;
}

}  // namespace

Table extract_rows(const Mask& mask, std::span<const RunPair> runs, Hypothesis h, const IpfConfig& ipf) {
  Table t = empty_extracted(mask, h);
  std::vector<std::uint64_t> keys;
  for (const RunPair& p : runs) {
    if (p.run.degenerate() || p.complement_run.degenerate()) throw UnverifiedRuns("degenerate run pair (T <= 2)");
    append_keys(mask, p.run, p.complement_run, h, ipf, keys);
  }
  t.insert_keys(std::move(keys));
  return t;
}

Table extract_table(const Mask& mask, const SearchConfig& cfg, Hypothesis h) {
  Table t = empty_extracted(mask, h);
  for (std::size_t L = cfg.lmin; L <= cfg.lmax; ++L) {
    const std::vector<std::uint64_t> starts = start_set(mask, L, cfg);
    const PackedAutomaton aut = build_packed(mask, L);
    std::vector<std::uint64_t> merged;
    std::exception_ptr error;
    const auto count = static_cast<std::int64_t>(starts.size());
    const int threads = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();
#pragma omp parallel num_threads(threads)
    {
      std::vector<std::uint64_t> local;
#pragma omp for schedule(dynamic, 32)
      for (std::int64_t i = 0; i < count; ++i) {
        try {
          std::vector<PackedState> gs, hs;
          const std::uint64_t start = starts[i], cstart = ~start & aut.full_mask();
          const RunStats g = run_packed(aut, start, cfg.max_steps, &gs);
          const RunStats hh = run_packed(aut, cstart, cfg.max_steps, &hs);
          if (g.degenerate() || hh.degenerate()) continue;
          append_keys(mask, to_run_record(aut, start, gs), to_run_record(aut, cstart, hs), h, cfg.ipf, local);
          if (local.size() > (1u << 16)) compact(local);
        } catch (...) {
#pragma omp critical(trine_extract_error)
          if (!error) error = std::current_exception();
        }
      }
      compact(local);
#pragma omp critical(trine_extract_merge)
      merged.insert(merged.end(), local.begin(), local.end());
    }
    if (error) std::rethrow_exception(error);
    t.insert_keys(std::move(merged));
  }
  return t;
}

}  // namespace trine::rt
