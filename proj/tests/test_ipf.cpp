#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "support.hpp"
#include "trine/ac23.hpp"
#include "trine/ipf.hpp"

using namespace trine;

namespace {

struct Pair {
  RunRecord run, crun;
};

Pair fixture() {
  const MixedGraph g = testing::ring(3);
  return {run_to_mirror(g, Coloring::parse("ABA")), run_to_mirror(g, Coloring::parse("BAB"))};
}

}  // namespace

TEST_CASE("fixture slot tables") {
  const auto [run, crun] = fixture();
  CHECK(crun.states[0].str() == "CAC");
  CHECK(crun.states[1].str() == "BCB");
  CHECK(crun.states[2].str() == "ABA");
  const auto [s, cs] = build_slots(run, crun);
  REQUIRE(s.K == 2);
  CHECK(s.a[0] == std::vector<std::uint8_t>{1, 0});
  CHECK(s.c[0] == std::vector<std::uint8_t>{0, 1});
  CHECK(s.b(0) == s.c[0]);
  CHECK(s.f[0] == std::vector<int>{-1, 2});
  CHECK(cs.c[0] == std::vector<std::uint8_t>{1, 0});
  CHECK(cs.a[0] == std::vector<std::uint8_t>{0, 1});
  CHECK(cs.f[0] == std::vector<int>{1, -1});
  CHECK(s.overflow_nodes().empty());

  const PhaseTable p0 = integral_phase(s, cs, 0);
  CHECK(p0.F[0] == std::vector<int>{3, 0});
  const PhaseTable p1 = integral_phase(s, cs, 1);
  CHECK(p1.F[0] == std::vector<int>{2, 1});
}

TEST_CASE("phase formula") {
  SlotTable s, cs;
  s.K = cs.K = 2;
  s.a = s.c = cs.a = cs.c = {{0, 0}};
  s.f = {{4, -1}};
  cs.f = {{-1, 2}};
  const PhaseTable p = integral_phase(s, cs, 0);
  CHECK(p.F[0][0] == 0);
  CHECK(p.F[0][1] == 2);
}

TEST_CASE("fixture report") {
  const auto [run, crun] = fixture();
  const IpfReport r = check_ipf(run, crun);
  CHECK(r.T == 3);
  CHECK(r.Tbar == 3);
  CHECK(r.K == 2);
  CHECK(r.lambda == 0);
  CHECK(r.lambda_bar == 0);
  CHECK(r.div3);
  CHECK(r.c1_complemented);
  CHECK_FALSE(r.c1_raw);
  for (int i = 0; i < 8; ++i) CHECK_MESSAGE(r.cond[i], "condition ", i + 1);
  CHECK(r.light_ok);
  CHECK(r.full_ok);
  CHECK_FALSE(r.c8_origin0);
  CHECK(r.c8_origin1);
  CHECK_FALSE(r.slot_inconsistency);

  IpfConfig raw;
  raw.cond1 = Cond1Reading::Raw;
  const IpfReport rr = check_ipf(run, crun, raw);
  CHECK_FALSE(rr.cond[0]);
  CHECK(rr.first_failure(CheckLevel::Light) == 1);

  IpfConfig origin0;
  origin0.time_origin = 0;
  CHECK_FALSE(check_ipf(run, crun, origin0).cond[7]);
}

TEST_CASE("degenerate runs") {
  const MixedGraph g = testing::ring(3);
  const RunRecord a = run_to_mirror(g, Coloring::parse("AAA"));
  const RunRecord b = run_to_mirror(g, Coloring::parse("BBB"));
  CHECK_THROWS_AS(check_ipf(a, b), DegenerateRun);
  CHECK_THROWS_AS(build_slots(a, b), DegenerateRun);
}

TEST_CASE("light check from tallies alone agrees with the full report") {
  const Mask mask(3, 5);
  for (std::size_t L = 7; L <= 10; ++L) {
    const MixedGraph g = build_graph(mask, L).graph;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << L); bits += 7) {
      const Coloring s = Coloring::parse(start_string(bits, L));
      const RunRecord r = run_to_mirror(g, s), c = run_to_mirror(g, complement(s));
      if (r.degenerate() || c.degenerate()) continue;
      const IpfReport rep = check_ipf(r, c);
      const LightResult light = check_light(r.stats, c.stats);
      REQUIRE(light.ok == rep.light_ok);
    }
  }
}

TEST_CASE("correct masks satisfy the full check and the K identity") {
  for (auto [n, m] : {std::pair{1u, 1u}, {1u, 3u}, {3u, 3u}, {3u, 5u}, {5u, 5u}}) {
    const Mask mask(n, m);
    for (std::size_t L = 3; L <= 10; ++L) {
      const MixedGraph g = build_graph(mask, L).graph;
      for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << L); ++bits) {
        const Coloring s = Coloring::parse(start_string(bits, L));
        const RunRecord r = run_to_mirror(g, s), c = run_to_mirror(g, complement(s));
        if (r.degenerate() || c.degenerate()) continue;
        const IpfReport rep = check_ipf(r, c);
        if (degenerate_ring(mask, L)) continue;
        INFO(mask.str(), " L=", L, " start=", s.str());
        REQUIRE(rep.light_ok);
        REQUIRE(rep.full_ok);
        for (std::size_t v = 0; v < L; ++v)
          REQUIRE(rep.K == static_cast<std::size_t>(r.stats.n_a[v] + r.stats.n_b[v]));
      }
    }
  }
}

TEST_CASE("the (1,5) witness fails") {
  const MixedGraph g = build_graph(Mask(1, 5), 7).graph;
  const Coloring s = Coloring::parse("BABAAAA");
  const IpfReport rep = check_ipf(run_to_mirror(g, s), run_to_mirror(g, complement(s)));
  CHECK_FALSE(rep.light_ok);
  CHECK(rep.first_failure(CheckLevel::Light) == kDiv3);
}

TEST_CASE("level and reading names") {
  CHECK(parse_check_level("full") == CheckLevel::Full);
  CHECK(to_string(CheckLevel::Light) == "light");
  CHECK(parse_cond1_reading("raw") == Cond1Reading::Raw);
  CHECK_THROWS_AS(parse_check_level("heavy"), std::invalid_argument);
  CHECK_THROWS_AS(parse_cond1_reading("other"), std::invalid_argument);
}
