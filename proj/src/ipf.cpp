#include "trine/ipf.hpp"

#include "json.hpp"

namespace trine {

std::string to_string(CheckLevel level) { return level == CheckLevel::Light ? "light" : "full"; }

CheckLevel parse_check_level(const std::string& text) {
  if (text == "light") return CheckLevel::Light;
  if (text == "full") return CheckLevel::Full;
  throw std::invalid_argument("check level must be 'light' or 'full', got '" + text + "'");
}

std::string to_string(Cond1Reading reading) { return reading == Cond1Reading::Raw ? "raw" : "complemented"; }

Cond1Reading parse_cond1_reading(const std::string& text) {
  if (text == "raw") return Cond1Reading::Raw;
  if (text == "complemented") return Cond1Reading::Complemented;
  throw std::invalid_argument("condition [1] reading must be 'raw' or 'complemented', got '" + text + "'");
}

std::vector<std::size_t> SlotTable::overflow_nodes() const {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < events.size(); ++v)
    if (events[v] != K) out.push_back(v);
  return out;
}

namespace {

SlotTable slots_of(const RunRecord& run, std::size_t K) {
  const std::size_t n = run.node_count();
  SlotTable s;
  s.K = K;
  s.a.assign(n, std::vector<std::uint8_t>(K, 0));
  s.c.assign(n, std::vector<std::uint8_t>(K, 0));
  s.f.assign(n, std::vector<int>(K, -1));
  s.events.assign(n, 0);
  s.lambda = run.lambda_per_node();
  for (std::size_t t = 0; t < run.states.size(); ++t) {
    const Coloring& state = run.states[t];
    for (std::size_t v = 0; v < n; ++v) {
      const Color col = state[v];
      if (col == Color::B) continue;
      const std::size_t k = s.events[v]++;
      if (k >= K) continue;
      if (col == Color::A) {
        s.a[v][k] = 1;
      } else {
        s.c[v][k] = 1;
        s.f[v][k] = static_cast<int>(t + 1);
      }
    }
  }
  return s;
}

int mod(int x, int m) { return ((x % m) + m) % m; }

bool cond8(const PhaseTable& phases, std::size_t K, std::vector<Witness>* witnesses) {
  bool ok = true;
  auto fail = [&](int node, int slot, std::string detail) {
    if (ok && witnesses) witnesses->push_back({8, node, slot, -1, std::move(detail)});
    ok = false;
  };
  const auto& F = phases.F;
  for (std::size_t v = 0; v < F.size() && ok; ++v) {
    if (K == 0) break;
    if (F[v][0] < 0 || F[v][0] % 2 != 0) {
      fail(static_cast<int>(v), 0, "F(0) = " + std::to_string(F[v][0]) + " is not even");
      break;
    }
    for (std::size_t k = 1; 2 * k < K; ++k) {
      const int lhs = F[v][2 * k - 1], rhs = F[v][2 * k];
      if (lhs < 0 || rhs < 0 || lhs % 2 != rhs % 2) {
        fail(static_cast<int>(v), static_cast<int>(2 * k),
             "F(" + std::to_string(2 * k - 1) + ") = " + std::to_string(lhs) + " and F(" + std::to_string(2 * k) +
                 ") = " + std::to_string(rhs) + " differ mod 2");
        break;
      }
    }
  }
  if (ok && K > 0 && K % 2 == 0) {
    const int ref = F.empty() ? 0 : F[0][K - 1];
    for (std::size_t v = 0; v < F.size(); ++v)
      if (F[v][K - 1] < 0 || ref < 0 || F[v][K - 1] % 2 != ref % 2) {
        fail(static_cast<int>(v), static_cast<int>(K - 1), "F(K-1) parity differs from node 0");
        break;
      }
  }
  return ok;
}

}  // namespace

std::pair<SlotTable, SlotTable> build_slots(const RunRecord& run, const RunRecord& complement_run) {
  if (run.degenerate() || complement_run.degenerate())
    throw DegenerateRun("slot tables need T > 2 for both runs (T=" + std::to_string(run.period()) +
                        ", T̄=" + std::to_string(complement_run.period()) + ")");
  const std::size_t K = (run.period() + complement_run.period()) / 3;
  return {slots_of(run, K), slots_of(complement_run, K)};
}

PhaseTable integral_phase(const SlotTable& slots, const SlotTable& complement_slots, int time_origin) {
  PhaseTable p;
  const std::size_t n = slots.node_count();
  p.F.assign(n, std::vector<int>(slots.K, -1));
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t k = 0; k < slots.K; ++k) {
      const int f = slots.f[v][k], fbar = complement_slots.f[v][k];
      if ((f != -1) == (fbar != -1)) continue;
      p.F[v][k] = f != -1 ? mod(f - time_origin, 2) : 2 + mod(fbar - time_origin, 2);
    }
  return p;
}

LightResult check_light(const RunStats& run, const RunStats& complement_run, const IpfConfig& cfg) {
  LightResult r;
  const auto T = static_cast<int>(run.period), Tbar = static_cast<int>(complement_run.period);
  r.div3 = (T + Tbar) % 3 == 0;
  if (!r.div3) r.witnesses.push_back({kDiv3, -1, -1, -1, "T+T̄ = " + std::to_string(T + Tbar) + " is not divisible by 3"});

  r.c1_raw = run.last == complement_run.last;
  r.c1_complemented = run.last == complement(complement_run.last);
  r.c1 = cfg.cond1 == Cond1Reading::Raw ? r.c1_raw : r.c1_complemented;
  if (!r.c1) {
    const Coloring expected = cfg.cond1 == Cond1Reading::Raw ? complement_run.last : complement(complement_run.last);
    int node = -1;
    for (std::size_t v = 0; v < run.last.size(); ++v)
      if (run.last[v] != expected[v]) {
        node = static_cast<int>(v);
        break;
      }
    r.witnesses.push_back({1, node, -1, T, "G_T = " + run.last.str() + " vs " + expected.str()});
  }

  r.c2 = r.c3 = true;
  for (std::size_t v = 0; v < run.n_a.size(); ++v) {
    const int lam = run.lambda(v), lam_bar = complement_run.lambda(v);
    if (r.c2 && lam != -lam_bar) {
      r.c2 = false;
      r.witnesses.push_back({2, static_cast<int>(v), -1, -1,
                             "λ = " + std::to_string(lam) + ", λ̄ = " + std::to_string(lam_bar)});
    }
    if (r.c3 && Tbar - T != lam) {
      r.c3 = false;
      r.witnesses.push_back({3, static_cast<int>(v), -1, -1,
                             "T̄ - T = " + std::to_string(Tbar - T) + ", λ = " + std::to_string(lam)});
    }
  }
  r.ok = r.div3 && r.c1 && r.c2 && r.c3;
  return r;
}

int IpfReport::first_failure(CheckLevel level) const {
  for (const Witness& w : witnesses)
    if (level == CheckLevel::Full || w.condition <= 3) return w.condition;
  return -1;
}

IpfReport check_ipf(const RunRecord& run, const RunRecord& complement_run, const IpfConfig& cfg) {
  if (run.degenerate() || complement_run.degenerate())
    throw DegenerateRun("IPF is undefined for T <= 2 (T=" + std::to_string(run.period()) +
                        ", T̄=" + std::to_string(complement_run.period()) + ")");
  IpfReport rep;
  rep.T = run.period();
  rep.Tbar = complement_run.period();
  rep.lambda = run.stats.lambda(0);
  rep.lambda_bar = complement_run.stats.lambda(0);
  rep.lambda_uniform = run.stats.uniform() && complement_run.stats.uniform();

  LightResult light = check_light(run.stats, complement_run.stats, cfg);
  rep.div3 = light.div3;
  rep.cond[0] = light.c1;
  rep.c1_raw = light.c1_raw;
  rep.c1_complemented = light.c1_complemented;
  rep.cond[1] = light.c2;
  rep.cond[2] = light.c3;
  rep.witnesses = std::move(light.witnesses);
  rep.light_ok = light.ok;

  auto [slots, cslots] = build_slots(run, complement_run);
  rep.K = slots.K;
  rep.slot_overflow = !slots.overflow_nodes().empty() || !cslots.overflow_nodes().empty();
  if (rep.slot_overflow) {
    const auto bad = slots.overflow_nodes().empty() ? cslots.overflow_nodes() : slots.overflow_nodes();
    const SlotTable& which = slots.overflow_nodes().empty() ? cslots : slots;
    rep.witnesses.push_back({4, static_cast<int>(bad.front()), -1, -1,
                             "node has " + std::to_string(which.events[bad.front()]) + " A/C events, K = " +
                                 std::to_string(slots.K)});
  }

  std::array<bool, 4> ok{true, true, true, true};
  const std::size_t n = run.node_count();
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t k = 0; k < slots.K; ++k) {
      const int c = slots.c[v][k], a = slots.a[v][k], cb = cslots.c[v][k], ab = cslots.a[v][k];
      const std::array<bool, 4> holds{c + cb == 1, a + ab == 1, ab == c, cb == a};
      if (!(holds[0] == holds[1] && holds[1] == holds[2] && holds[2] == holds[3])) rep.slot_inconsistency = true;
      for (int i = 0; i < 4; ++i) {
        if (holds[i] || !ok[i]) continue;
        ok[i] = false;
        const int time = slots.f[v][k] != -1 ? slots.f[v][k] : cslots.f[v][k];
        rep.witnesses.push_back({4 + i, static_cast<int>(v), static_cast<int>(k), time,
                                 "C=" + std::to_string(c) + " A=" + std::to_string(a) + " C̄=" + std::to_string(cb) +
                                     " Ā=" + std::to_string(ab)});
      }
    }
  for (int i = 0; i < 4; ++i) rep.cond[3 + i] = ok[i] && !rep.slot_overflow;

  rep.c8_origin0 = cond8(integral_phase(slots, cslots, 0), slots.K, nullptr);
  rep.c8_origin1 = cond8(integral_phase(slots, cslots, 1), slots.K, nullptr);
  rep.cond[7] = cond8(integral_phase(slots, cslots, cfg.time_origin), slots.K, &rep.witnesses);

  rep.full_ok = rep.light_ok;
  for (int i = 3; i < 8; ++i) rep.full_ok = rep.full_ok && rep.cond[i];
  return rep;
}

std::string IpfReport::to_json() const {
  nlohmann::ordered_json j;
  j["T"] = T;
  j["Tbar"] = Tbar;
  j["lambda"] = lambda;
  j["lambdaBar"] = lambda_bar;
  j["K"] = K;
  j["div3"] = div3;
  for (int i = 0; i < 8; ++i) j["c" + std::to_string(i + 1)] = cond[i];
  j["light"] = light_ok;
  j["full"] = full_ok;
  j["c1Raw"] = c1_raw;
  j["c1Complemented"] = c1_complemented;
  j["c8Origin0"] = c8_origin0;
  j["c8Origin1"] = c8_origin1;
  j["lambdaUniform"] = lambda_uniform;
  j["slotOverflow"] = slot_overflow;
  j["slotInconsistency"] = slot_inconsistency;
  auto& w = j["witnesses"] = nlohmann::ordered_json::array();
  for (const Witness& x : witnesses)
    w.push_back({{"condition", x.condition}, {"node", x.node}, {"slot", x.slot}, {"time", x.time}, {"detail", x.detail}});
  return j.dump(2);
}

}  // namespace trine
