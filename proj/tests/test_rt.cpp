#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "trine/rt.hpp"

using namespace trine;
using namespace trine::rt;

namespace {

Value V(const char* t) { return Value::parse(t); }

Row R(std::initializer_list<const char*> toks) {
  Row r;
  for (const char* t : toks) r.push_back(V(t));
  return r;
}

StepTable shipped_steps() {
  std::ifstream in(std::string(TRINE_DATA_DIR) + "/step_table_1_2k1.txt");
  std::stringstream ss;
  ss << in.rdbuf();
  return StepTable::parse(ss.str());
}

const Table& extracted(std::uint32_t n, std::uint32_t m) {
  static std::map<std::pair<std::uint32_t, std::uint32_t>, Table> cache;
  auto it = cache.find({n, m});
  if (it == cache.end()) {
    SearchConfig cfg;
    cfg.lmax = 12;
    it = cache.emplace(std::make_pair(n, m), extract_table(Mask(n, m), cfg)).first;
  }
  return it->second;
}

Table random_table(std::mt19937_64& rng, std::size_t N, std::size_t rows) {
  Table t(N);
  std::uniform_int_distribution<int> d(0, 5);
  for (std::size_t i = 0; i < rows; ++i) {
    Row r(N);
    for (auto& v : r) v = Value(static_cast<std::uint8_t>(d(rng)));
    t.insert(r);
  }
  return t;
}

}  // namespace

TEST_CASE("values") {
  CHECK(V("-1").code() == 4);
  CHECK(V("-0").bar());
  CHECK(V("2").digit() == 2);
  CHECK(Value(5).token() == "-2");
  CHECK_THROWS_AS(V("3"), FormatError);
}

TEST_CASE("substitutions") {
  const auto all = Substitution::all();
  for (int c = 0; c < 6; ++c) CHECK(all[0].apply(Value(c)) == Value(c));

  const Substitution one(V("1"));
  CHECK(one.apply(V("0")) == V("1"));
  CHECK(one.apply(V("1")) == V("2"));
  CHECK(one.apply(V("2")) == V("0"));
  CHECK(one.apply(V("-0")) == V("-2"));
  CHECK(one.apply(V("-1")) == V("-0"));
  CHECK(one.apply(V("-2")) == V("-1"));

  const Substitution zbar(V("-0"));
  for (int c = 0; c < 6; ++c) {
    CHECK(zbar.apply(Value(c)).digit() == Value(c).digit());
    CHECK(zbar.apply(Value(c)).bar() != Value(c).bar());
  }

  // =1 twice is =2 on unbarred digits.
  for (int d = 0; d < 3; ++d) CHECK(one.apply(one.apply(Value(d))) == Substitution(V("2")).apply(Value(d)));
}

TEST_CASE("the six substitutions form a group") {
  const auto all = Substitution::all();
  auto same = [](Substitution a, auto f) {
    for (int c = 0; c < 6; ++c)
      if (a.apply(Value(c)) != f(Value(c))) return false;
    return true;
  };
  for (Substitution a : all) {
    CHECK(same(a.then(a.inverse()), [](Value v) { return v; }));
    for (Substitution b : all) {
      const Substitution ab = a.then(b);
      CHECK(std::find(all.begin(), all.end(), ab) != all.end());
      CHECK(same(ab, [&](Value v) { return b.apply(a.apply(v)); }));
      for (Substitution c : all) CHECK(ab.then(c) == a.then(b.then(c)));
    }
    // Each acts as a bijection.
    std::set<int> img;
    for (int c = 0; c < 6; ++c) img.insert(a.apply(Value(c)).code());
    CHECK(img.size() == 6);
  }
  for (int c = 0; c < 6; ++c) CHECK(Substitution::normalizing(Value(c)).apply(Value(c)) == Value(0));
}

TEST_CASE("canonical key") {
  const Row r = R({"-1", "2", "0", "-2", "1"});
  CHECK(canonical_key(r) == 2782);
  CHECK(canonical_key(Row(7, Value(0))) == 0);
  CHECK(row_from_key(2782, 5) == r);

  std::set<std::uint64_t> keys;
  for (int i = 0; i < 6 * 6 * 6; ++i) {
    const Row x = row_from_key(i, 3);
    CHECK(canonical_key(x) == static_cast<std::uint64_t>(i));
    keys.insert(canonical_key(x));
  }
  CHECK(keys.size() == 216);
}

TEST_CASE("table basics and text round trip") {
  Table t = with_mask(Mask(1, 3));
  t.insert(R({"1", "1", "1", "1"}));
  t.insert(R({"1", "1", "1", "1"}));
  t.insert(R({"-1", "2", "2", "-0"}));
  CHECK(t.CR() == 2);
  CHECK_THROWS_AS(t.insert(R({"1"})), DimensionMismatch);
  const std::string text = t.to_text();
  CHECK(text.rfind("N=4 mask=1,3 columns=0,-1,1,2 subtable==0\n", 0) == 0);
  const Table back = Table::parse(text);
  CHECK(back == t);
  CHECK(back.to_text() == text);
  CHECK(back.mask_tag == t.mask_tag);

  CHECK_THROWS_AS(Table::parse(""), FormatError);
  CHECK_THROWS_AS(Table::parse("N=2\n1,1\n"), FormatError);
  CHECK_THROWS_AS(Table::parse("N=2 subtable==0\n1,1,1\n"), FormatError);
  CHECK_THROWS_AS(Table::parse("N=2 subtable==0\n1,7\n"), FormatError);
  CHECK_THROWS_AS(Table::parse("N=2 subtable==0 colour=red\n"), FormatError);

  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    const Table x = random_table(rng, 1 + i % 8, i % 40);
    const std::string s = x.to_text();
    CHECK(Table::parse(s).to_text() == s);
  }
}

TEST_CASE("subtable expansion") {
  std::mt19937_64 rng(2);
  const Table t = random_table(rng, 5, 30);
  const auto subs = expand_subtables(t);
  for (const Table& s : subs) CHECK(s.CR() == t.CR());
  CHECK(subs[0] == t);

  Table one(3);
  one.insert(R({"1", "2", "-1"}));
  std::set<std::uint64_t> rows;
  for (const Table& s : expand_subtables(one)) rows.insert(s.keys()[0]);
  CHECK(rows.size() == 6);

  // Value sets move under the substitution.
  const auto all = Substitution::all();
  for (std::size_t i = 0; i < 6; ++i) {
    std::set<int> before, after;
    for (const Row& r : t.rows())
      for (Value v : r) before.insert(all[i].apply(v).code());
    for (const Row& r : subs[i].rows())
      for (Value v : r) after.insert(v.code());
    CHECK(before == after);
  }
}

TEST_CASE("classes and counts") {
  Table small(3), middle(3), full(3);
  small.insert(R({"1", "2", "-1"}));
  middle.insert(R({"1", "0", "-1"}));
  full.insert(R({"1", "-2", "-1"}));
  CHECK(classify(small) == ValueClass::Small);
  CHECK(classify(middle) == ValueClass::Middle);
  CHECK(classify(full) == ValueClass::Full);

  CHECK(s_counts(Table(4)).total() == 0);
  Table ones(5);
  ones.insert(Row(5, V("1")));
  const SCounts s = s_counts(ones);
  CHECK(s.zero[1] == 1);
  CHECK(s.other[1] == 4);

  std::mt19937_64 rng(3);
  const Table t = random_table(rng, 6, 50);
  CHECK(s_counts(t).total() == 6 * t.CR());

  Table bad(3);
  bad.insert(R({"0", "1", "1"}));
  CHECK(kind(bad) == Kind::NotCompletelyCorrect);
}

TEST_CASE("lattice") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 300; ++i) {
    const std::size_t N = 1 + i % 3;
    const Table a = random_table(rng, N, i % 20), b = random_table(rng, N, i % 13), c = random_table(rng, N, 7);
    CHECK(intersect(a, a) == a);
    CHECK(unite(a, a) == a);
    CHECK(intersect(a, b) == intersect(b, a));
    CHECK(unite(a, b) == unite(b, a));
    CHECK(intersect(intersect(a, b), c) == intersect(a, intersect(b, c)));
    CHECK(unite(unite(a, b), c) == unite(a, unite(b, c)));
    CHECK(unite(a, intersect(a, b)) == a);
    CHECK(intersect(a, unite(a, b)) == a);
    CHECK(includes(unite(a, b), a));
    CHECK(includes(a, intersect(a, b)));
    CHECK(equals(a, b) == (includes(a, b) && includes(b, a)));
  }
  CHECK_THROWS_AS(intersect(Table(2), Table(3)), DimensionMismatch);
  CHECK_THROWS_AS(includes(Table(2), Table(3)), DimensionMismatch);
}

TEST_CASE("extracted tables") {
  const Table& t11 = extracted(1, 1);
  const Table& t13 = extracted(1, 3);
  const Table& t31 = extracted(3, 1);
  CHECK(t11.CR() == 9);
  CHECK(classify(t11) == ValueClass::Small);
  CHECK(kind(t11) == Kind::CompletelyCorrect1st);
  CHECK(t13.CR() == 27);
  CHECK(t31.CR() == 27);
  CHECK(kind(t13) == Kind::CompletelyCorrect1st);
  CHECK(intersect(t13, t31).CR() == 17);
  CHECK(unite(t13, t31).CR() == 37);
  CHECK(kind(extracted(3, 5)) == Kind::CompletelyCorrect2nd);
  CHECK(classify(extracted(3, 3)) == ValueClass::Small);
  CHECK(classify(extracted(5, 5)) == ValueClass::Small);
  CHECK(t13.hypothesis == "next-slot");
  CHECK(t13.to_text().find("[EXPERIMENTAL]") != std::string::npos);

  // Independent of the thread count.
  SearchConfig cfg;
  cfg.lmax = 10;
  cfg.threads = 1;
  const Table one = extract_table(Mask(3, 5), cfg);
  cfg.threads = 3;
  CHECK(extract_table(Mask(3, 5), cfg) == one);

  CHECK(extract_rows(Mask(1, 3), {}).empty());
}

TEST_CASE("extraction refuses failing runs") {
  const MixedGraph g = build_graph(Mask(1, 5), 7).graph;
  const Coloring s = Coloring::parse("BABAAAA");
  const std::vector<RunPair> pairs{{run_to_mirror(g, s), run_to_mirror(g, complement(s))}};
  CHECK_THROWS_AS(extract_rows(Mask(1, 5), pairs), UnverifiedRuns);
  SearchConfig cfg;
  cfg.lmax = 8;
  CHECK_THROWS_AS(extract_table(Mask(1, 5), cfg), UnverifiedRuns);
}

TEST_CASE("reflection") {
  const Table& t13 = extracted(1, 3);
  const Table r = reflect(t13, Mask(1, 3));
  CHECK(r == extracted(3, 1));
  CHECK(r.mask_tag == std::make_pair(3u, 1u));
  CHECK(reflect(r, Mask(3, 1)) == t13);
  CHECK(reflect(extracted(3, 3), Mask(3, 3)) == extracted(3, 3));
  CHECK_THROWS_AS(reflect(t13, Mask(3, 5)), DimensionMismatch);
}

TEST_CASE("compatibility") {
  const std::vector<Table> pair{extracted(1, 3), extracted(3, 1)};
  CHECK_FALSE(find_conflict(pair));
  const IntegralTable it = compatibility(pair);
  CHECK(it.table.CR() == 37);
  CHECK(it.steps == std::vector<std::size_t>{27, 37});

  const std::vector<Table> single{extracted(1, 3)};
  CHECK(compatibility(single).table == extracted(1, 3));

  // A row that shows up in another subtable.
  const std::vector<Table> clash{extracted(1, 3), substitute(extracted(1, 3), Substitution(V("1")))};
  CHECK_THROWS_AS(compatibility(clash), IncompatibleTables);

  // Same row once column 0 is gone, different column 0.
  Table a(3), b(3);
  a.insert(R({"1", "1", "2"}));
  b.insert(R({"-1", "1", "2"}));
  const std::vector<Table> zero_clash{a, b};
  const auto c = find_conflict(zero_clash);
  REQUIRE(c);
  CHECK(c->reason.find("column 0") != std::string::npos);
}

TEST_CASE("coincidence matrix") {
  const std::vector<Table> ts{extracted(1, 3), extracted(3, 1), extracted(1, 3)};
  const CoincidenceMatrix m = coincidence_matrix(ts);
  CHECK(m.names[0] == "[1,3]");
  CHECK(m.cells[0][0].row_includes_col);
  CHECK(m.cells[0][0].col_includes_row);
  CHECK(m.cells[0][1].intersection == 17);
  CHECK(m.cells[0][1].group == m.cells[1][0].group);
  CHECK(m.cells[0][1].group == m.cells[2][1].group);
  CHECK(m.cells[0][0].group == m.cells[0][2].group);
  CHECK(m.cells[0][0].group != m.cells[0][1].group);
  CHECK(m.to_csv().rfind("table,[1,3],[3,1],[1,3]\n", 0) == 0);
}

TEST_CASE("induction builder") {
  CHECK_THROWS_AS(build_1_2k1(2, std::nullopt), UnconfiguredStepTable);
  const StepTable st = shipped_steps();
  CHECK(StepTable::parse(st.to_text()).to_text() == st.to_text());
  std::size_t prev = 0;
  for (std::size_t k = 1; k <= 5; ++k) {
    const Table t = build_1_2k1(k, st);
    CHECK(t.N() == k + 2);
    if (prev) CHECK(t.CR() == 3 * prev);
    CHECK(kind(t) == Kind::CompletelyCorrect1st);
    prev = t.CR();
  }
  CHECK(build_1_2k1(1, st) == extracted(1, 1));
  CHECK(build_1_2k1(2, st) == extracted(1, 3));
  CHECK(build_1_2k1(2, st).CR() == 27);

  StepTable partial = st;
  partial.step.erase(V("-0"));
  CHECK_THROWS_AS(build_1_2k1(3, partial), UnconfiguredStepTable);
}
