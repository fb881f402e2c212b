#include "trine/ac23.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <bit>
#include <exception>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

namespace trine {

namespace {

std::vector<int> offsets_of(std::uint32_t bits) {
  std::vector<int> out;
  for (int i = 0; i < 32; ++i)
    if (bits >> i & 1u) out.push_back(i + 1);
  return out;
}

std::size_t wrap(long long x, std::size_t L) {
  const auto l = static_cast<long long>(L);
  return static_cast<std::size_t>(((x % l) + l) % l);
}

}  // namespace

Mask::Mask(std::uint32_t left, std::uint32_t right) : left_(left), right_(right) {
  if (left == 0 || right == 0) throw std::invalid_argument("mask integers must be positive, got " + str());
  left_offsets_ = offsets_of(left);
  right_offsets_ = offsets_of(right);
  columns_.push_back(0);
  for (auto it = left_offsets_.rbegin(); it != left_offsets_.rend(); ++it) columns_.push_back(-*it);
  for (int d : right_offsets_) columns_.push_back(d);
}

int Mask::max_offset() const { return std::max(left_offsets_.back(), right_offsets_.back()); }

Mask parse_mask(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw std::invalid_argument("mask must look like 'n,m', got '" + text + "'");
  try {
    std::size_t used = 0;
    const unsigned long n = std::stoul(text.substr(0, comma), &used);
    if (used != comma) throw std::invalid_argument("trailing characters");
    const std::string rest = text.substr(comma + 1);
    const unsigned long m = std::stoul(rest, &used);
    if (used != rest.size()) throw std::invalid_argument("trailing characters");
    return Mask(static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(m));
  } catch (const std::logic_error&) {
    throw std::invalid_argument("mask must look like 'n,m' with positive integers, got '" + text + "'");
  }
}

bool degenerate_ring(const Mask& mask, std::size_t L) {
  std::set<std::size_t> seen;
  for (std::size_t col = 1; col < mask.N(); ++col) {
    const std::size_t r = wrap(mask.column_offsets()[col], L);
    if (r == 0 || !seen.insert(r).second) return true;
  }
  return false;
}

BuiltGraph build_graph(const Mask& mask, std::size_t L) {
  if (L < 3) throw std::invalid_argument("ring size must be at least 3");
  std::set<Edge> arcs;
  for (std::size_t x = 0; x < L; ++x)
    for (std::size_t col = 1; col < mask.N(); ++col) {
      const std::size_t y = wrap(static_cast<long long>(x) + mask.column_offsets()[col], L);
      if (y != x) arcs.emplace(static_cast<NodeId>(x), static_cast<NodeId>(y));
    }
  std::vector<Edge> directed, undirected;
  for (const Edge& e : arcs) {
    if (arcs.count({e.second, e.first})) {
      if (e.first < e.second) undirected.push_back(e);
    } else {
      directed.push_back(e);
    }
  }
  return {MixedGraph(L, std::move(directed), std::move(undirected)), degenerate_ring(mask, L)};
}

PackedAutomaton build_packed(const Mask& mask, std::size_t L) {
  std::vector<std::size_t> shifts;
  for (std::size_t col = 1; col < mask.N(); ++col) {
    const std::size_t s = wrap(mask.column_offsets()[col], L);
    if (s != 0) shifts.push_back(s);
  }
  return PackedAutomaton::circulant(L, std::move(shifts));
}

bool mask_weak_computable(const Mask& mask, std::size_t L) { return weak_computable(build_graph(mask, L).graph); }

std::string to_string(MaskStatus s) { return s == MaskStatus::CorrectSoFar ? "CorrectSoFar" : "Incorrect"; }

std::uint64_t reflect_start(std::uint64_t start, std::size_t L) {
  std::uint64_t out = 0;
  for (std::size_t x = 0; x < L; ++x)
    if (start >> x & 1u) out |= std::uint64_t{1} << ((L - x) % L);
  return out;
}

std::string start_string(std::uint64_t start, std::size_t L) {
  std::string s(L, 'A');
  for (std::size_t x = 0; x < L; ++x)
    if (start >> x & 1u) s[x] = 'B';
  return s;
}

std::vector<std::uint64_t> start_set(const Mask& mask, std::size_t L, const SearchConfig& cfg) {
  if (L > PackedAutomaton::kMaxNodes) throw std::invalid_argument("ring size above 64 is not supported");
  std::vector<std::uint64_t> starts;
  if (L <= cfg.exhaustive_cutoff) {
    if (L > 30) throw std::invalid_argument("exhaustive enumeration above L=30 is not supported");
    starts.resize(std::size_t{1} << L);
    for (std::size_t i = 0; i < starts.size(); ++i) starts[i] = i;
  } else {
    // Keyed on the unordered mask pair so (n,m) and (m,n) see mirrored samples.
    const std::uint32_t lo = std::min(mask.left(), mask.right()), hi = std::max(mask.left(), mask.right());
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32), lo, hi,
                      static_cast<std::uint32_t>(L)};
    std::mt19937_64 rng(seq);
    const std::uint64_t full = L == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << L) - 1;
    starts.resize(cfg.samples_per_L);
    for (auto& s : starts) s = rng() & full;
  }
  if (mask.left() > mask.right())
    for (auto& s : starts) s = reflect_start(s, L);
  return starts;
}

namespace {

struct PairOutcome {
  bool skipped = false;
  int condition = -1;  // -1 when the pair passes
};

PairOutcome evaluate_packed(const PackedAutomaton& aut, std::uint64_t start, const SearchConfig& cfg) {
  const std::uint64_t cstart = ~start & aut.full_mask();
  const bool full = cfg.ipf.level == CheckLevel::Full;
  std::vector<PackedState> g_states, h_states;
  const RunStats g = run_packed(aut, start, cfg.max_steps, full ? &g_states : nullptr);
  const RunStats h = run_packed(aut, cstart, cfg.max_steps, full ? &h_states : nullptr);
  if (g.degenerate() || h.degenerate()) return {true, -1};
  const LightResult light = check_light(g, h, cfg.ipf);
  if (!light.ok) return {false, light.first_failure()};
  if (!full) return {};
  const IpfReport rep = check_ipf(to_run_record(aut, start, g_states), to_run_record(aut, cstart, h_states), cfg.ipf);
  return {false, rep.full_ok ? -1 : rep.first_failure(CheckLevel::Full)};
}

PairOutcome evaluate_generic(const MixedGraph& graph, std::uint64_t start, std::size_t L, const SearchConfig& cfg) {
  const Coloring s = Coloring::parse(start_string(start, L));
  const RunRecord g = run_to_mirror(graph, s, cfg.max_steps);
  const RunRecord h = run_to_mirror(graph, complement(s), cfg.max_steps);
  if (g.degenerate() || h.degenerate()) return {true, -1};
  if (cfg.ipf.level == CheckLevel::Light) {
    const LightResult light = check_light(g.stats, h.stats, cfg.ipf);
    return {false, light.ok ? -1 : light.first_failure()};
  }
  const IpfReport rep = check_ipf(g, h, cfg.ipf);
  return {false, rep.full_ok ? -1 : rep.first_failure(CheckLevel::Full)};
}

/// Shared driver: `evaluate_block` fills one outcome per start for a ring.
template <class EvaluateBlock>
MaskVerdict search(const Mask& mask, const SearchConfig& cfg, EvaluateBlock&& evaluate_block) {
  if (cfg.lmin < 3) throw std::invalid_argument("lmin must be at least 3");
  if (cfg.lmax < cfg.lmin) throw std::invalid_argument("lmax must be >= lmin");
  MaskVerdict verdict;
  verdict.mask = mask;
  std::size_t remaining = cfg.budget;
  for (std::size_t L = cfg.lmin; L <= cfg.lmax; ++L) {
    if (!mask_weak_computable(mask, L))
      throw std::invalid_argument("mask " + mask.str() + " is not weak computable at L=" + std::to_string(L));
    std::vector<std::uint64_t> starts = start_set(mask, L, cfg);
    if (cfg.budget != 0) {
      if (remaining == 0) {
        verdict.budget_exhausted = true;
        break;
      }
      if (starts.size() > remaining) {
        starts.resize(remaining);
        verdict.budget_exhausted = true;
      }
      remaining -= starts.size();
    }

    const std::vector<PairOutcome> outcomes = evaluate_block(L, starts);

    TestedBlock block;
    block.L = L;
    block.exhaustive = L <= cfg.exhaustive_cutoff;
    block.degenerate_ring = degenerate_ring(mask, L);
    block.starts = starts.size();
    std::optional<std::size_t> first;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      if (outcomes[i].skipped) ++block.skipped;
      else if (outcomes[i].condition >= 0) {
        ++block.failures;
        if (!first) first = i;
      }
    }
    verdict.tested.push_back(block);
    if (first) {
      MaskWitness w{L, start_string(starts[*first], L), outcomes[*first].condition};
      if (block.degenerate_ring) {
        verdict.degenerate_failures.push_back(std::move(w));
      } else {
        verdict.status = MaskStatus::Incorrect;
        verdict.witness = std::move(w);
        break;
      }
    }
    if (verdict.budget_exhausted) break;
  }
  return verdict;
}

}  // namespace

MaskVerdict classify_mask(const Mask& mask, const SearchConfig& cfg) {
  return search(mask, cfg, [&](std::size_t L, const std::vector<std::uint64_t>& starts) {
    const PackedAutomaton aut = build_packed(mask, L);
    std::vector<PairOutcome> outcomes(starts.size());
    std::exception_ptr error;
    const auto count = static_cast<std::int64_t>(starts.size());
    const int threads = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 64) num_threads(threads)
    for (std::int64_t i = 0; i < count; ++i) {
      try {
        outcomes[i] = evaluate_packed(aut, starts[i], cfg);
      } catch (...) {
#pragma omp critical(trine_search_error)
        if (!error) error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);
    return outcomes;
  });
}

MaskVerdict classify_mask_serial(const Mask& mask, const SearchConfig& cfg) {
  return search(mask, cfg, [&](std::size_t L, const std::vector<std::uint64_t>& starts) {
    const BuiltGraph built = build_graph(mask, L);
    std::vector<PairOutcome> outcomes;
    outcomes.reserve(starts.size());
    for (std::uint64_t s : starts) outcomes.push_back(evaluate_generic(built.graph, s, L, cfg));
    return outcomes;
  });
}

namespace {

nlohmann::ordered_json witness_json(const MaskWitness& w) {
  return {{"L", w.L}, {"start", w.start}, {"condition", w.condition}};
}

MaskWitness witness_from(const nlohmann::json& j) {
  return {j.at("L").get<std::size_t>(), j.at("start").get<std::string>(), j.at("condition").get<int>()};
}

nlohmann::ordered_json verdict_json(const MaskVerdict& v) {
  nlohmann::ordered_json j;
  j["mask"] = {v.mask.left(), v.mask.right()};
  j["N"] = v.mask.N();
  j["status"] = to_string(v.status);
  j["witness"] = v.witness ? witness_json(*v.witness) : nlohmann::ordered_json();
  auto& deg = j["degenerateFailures"] = nlohmann::ordered_json::array();
  for (const auto& w : v.degenerate_failures) deg.push_back(witness_json(w));
  auto& tested = j["tested"] = nlohmann::ordered_json::array();
  for (const auto& b : v.tested)
    tested.push_back({{"L", b.L},
                      {"exhaustive", b.exhaustive},
                      {"degenerateRing", b.degenerate_ring},
                      {"starts", b.starts},
                      {"skipped", b.skipped},
                      {"failures", b.failures}});
  j["budgetExhausted"] = v.budget_exhausted;
  return j;
}

MaskVerdict verdict_from(const nlohmann::json& j) {
  MaskVerdict v;
  v.mask = Mask(j.at("mask").at(0).get<std::uint32_t>(), j.at("mask").at(1).get<std::uint32_t>());
  v.status = j.at("status").get<std::string>() == "Incorrect" ? MaskStatus::Incorrect : MaskStatus::CorrectSoFar;
  if (!j.at("witness").is_null()) v.witness = witness_from(j.at("witness"));
  for (const auto& w : j.at("degenerateFailures")) v.degenerate_failures.push_back(witness_from(w));
  for (const auto& b : j.at("tested")) {
    TestedBlock t;
    t.L = b.at("L").get<std::size_t>();
    t.exhaustive = b.at("exhaustive").get<bool>();
    t.degenerate_ring = b.at("degenerateRing").get<bool>();
    t.starts = b.at("starts").get<std::size_t>();
    t.skipped = b.at("skipped").get<std::size_t>();
    t.failures = b.at("failures").get<std::size_t>();
    v.tested.push_back(t);
  }
  v.budget_exhausted = j.at("budgetExhausted").get<bool>();
  return v;
}

}  // namespace

std::string MaskVerdict::to_json() const { return verdict_json(*this).dump(2); }

std::string VerdictGrid::to_csv() const {
  std::string out = "n,m,N,status,witnessL,witnessStart,conditionFailed\n";
  for (const auto& [key, cell] : cells) {
    const MaskVerdict& v = cell.verdict;
    out += std::to_string(key.first) + "," + std::to_string(key.second) + "," + std::to_string(v.mask.N()) + "," +
           to_string(v.status) + ",";
    if (v.witness) out += std::to_string(v.witness->L) + "," + v.witness->start + "," + std::to_string(v.witness->condition);
    else out += ",,";
    out += "\n";
  }
  return out;
}

std::string VerdictGrid::to_json() const {
  nlohmann::ordered_json j;
  j["nMax"] = n_max;
  j["mMax"] = m_max;
  auto& arr = j["cells"] = nlohmann::ordered_json::array();
  for (const auto& [key, cell] : cells) {
    auto c = verdict_json(cell.verdict);
    if (cell.cr) c["CR"] = *cell.cr;
    arr.push_back(std::move(c));
  }
  return j.dump(2);
}

std::string config_fingerprint(const SearchConfig& cfg) {
  std::ostringstream os;
  os << "lmin=" << cfg.lmin << ";lmax=" << cfg.lmax << ";cutoff=" << cfg.exhaustive_cutoff
     << ";samples=" << cfg.samples_per_L << ";seed=" << cfg.seed << ";level=" << to_string(cfg.ipf.level)
     << ";cond1=" << to_string(cfg.ipf.cond1) << ";origin=" << cfg.ipf.time_origin << ";maxSteps=" << cfg.max_steps
     << ";budget=" << cfg.budget;
  return os.str();
}

VerdictGrid verdict_grid(std::uint32_t n_max, std::uint32_t m_max, const SearchConfig& cfg, const GridOptions& options) {
  if (n_max % 2 == 0 || m_max % 2 == 0) throw std::invalid_argument("grid bounds must be odd");
  VerdictGrid grid;
  grid.n_max = n_max;
  grid.m_max = m_max;
  const std::string fingerprint = config_fingerprint(cfg);

  std::map<std::pair<std::uint32_t, std::uint32_t>, MaskVerdict> done;
  if (!options.checkpoint.empty()) {
    std::ifstream in(options.checkpoint);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      try {
        const auto j = nlohmann::json::parse(line);
        if (j.at("config").get<std::string>() != fingerprint) continue;
        MaskVerdict v = verdict_from(j.at("verdict"));
        done.emplace(std::make_pair(v.mask.left(), v.mask.right()), std::move(v));
      } catch (const std::exception&) {
        // A line cut short by an interrupted run; recompute that cell.
      }
    }
  }
  std::ofstream checkpoint;
  if (!options.checkpoint.empty()) {
    bool torn = false;
    if (std::ifstream tail(options.checkpoint, std::ios::binary | std::ios::ate); tail && tail.tellg() > 0) {
      tail.seekg(-1, std::ios::end);
      torn = tail.get() != '\n';
    }
    checkpoint.open(options.checkpoint, std::ios::app);
    // Start fresh after a line cut short by an interrupted run.
    if (torn) checkpoint << "\n";
  }

  for (std::uint32_t n = 1; n <= n_max; n += 2)
    for (std::uint32_t m = 1; m <= m_max; m += 2) {
      MaskVerdict v;
      if (auto it = done.find({n, m}); it != done.end()) {
        v = it->second;
      } else {
        v = classify_mask(Mask(n, m), cfg);
        if (checkpoint.is_open()) {
          nlohmann::ordered_json line;
          line["config"] = fingerprint;
          line["verdict"] = verdict_json(v);
          checkpoint << line.dump() << "\n" << std::flush;
        }
      }
      if (options.on_cell) options.on_cell(v);
      grid.cells[{n, m}] = GridCell{std::move(v), std::nullopt};
    }
  return grid;
}

}  // namespace trine
