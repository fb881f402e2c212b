#include "trine/dynamics.hpp"

#include <algorithm>
#include <functional>

#include "json.hpp"

namespace trine {

bool p_condition(const MixedGraph& g, const Coloring& c, NodeId v) {
  for (NodeId u : g.out_neighbors(v))
    if (c[u] == Color::C) return true;
  return false;
}

Coloring step(const MixedGraph& g, const Coloring& c) {
  Coloring next(c.size());
  for (NodeId v = 0; v < c.size(); ++v) {
    const bool p = p_condition(g, c, v);
    switch (c[v]) {
      case Color::A: next[v] = p ? Color::C : Color::A; break;
      case Color::B: next[v] = p ? Color::A : Color::C; break;
      case Color::C: next[v] = Color::B; break;
    }
  }
  return next;
}

Coloring predecessor(const MixedGraph& g, const Coloring& c) { return transliterate(step(g, transliterate(c))); }

bool RunStats::uniform() const {
  auto same = [](const std::vector<int>& v) { return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end(); };
  return same(n_a) && same(n_b);
}

RunStats tally(const std::vector<Coloring>& states) {
  RunStats s;
  s.period = states.size();
  const std::size_t n = states.empty() ? 0 : states.front().size();
  s.n_a.assign(n, 0);
  s.n_b.assign(n, 0);
  s.n_c.assign(n, 0);
  for (const Coloring& state : states)
    for (std::size_t v = 0; v < n; ++v) {
      switch (state[v]) {
        case Color::A: ++s.n_a[v]; break;
        case Color::B: ++s.n_b[v]; break;
        case Color::C: ++s.n_c[v]; break;
      }
    }
  if (!states.empty()) s.last = states.back();
  return s;
}

std::vector<Color> RunRecord::history(NodeId v) const {
  std::vector<Color> h;
  h.reserve(states.size());
  for (const Coloring& s : states) h.push_back(s[v]);
  return h;
}

std::vector<int> RunRecord::lambda_per_node() const {
  std::vector<int> out(node_count());
  for (std::size_t v = 0; v < out.size(); ++v) out[v] = stats.lambda(v);
  return out;
}

std::string RunRecord::to_json() const {
  nlohmann::ordered_json j;
  j["T"] = period();
  j["degenerate"] = degenerate();
  j["start"] = start_ab.str();
  auto& arr = j["states"] = nlohmann::ordered_json::array();
  for (const Coloring& s : states) arr.push_back(s.str());
  j["mirror"] = mirror_state.str();
  j["lambda"] = lambda_per_node();
  j["bcBalanced"] = stats.bc_balanced();
  j["uniform"] = stats.uniform();
  return j.dump(2);
}

std::string RunRecord::to_csv() const {
  std::string out = "t,state\n";
  for (std::size_t t = 0; t < states.size(); ++t) out += std::to_string(t + 1) + "," + states[t].str() + "\n";
  return out;
}

RunRecord run_to_mirror(const MixedGraph& g, const Coloring& start_ab, std::size_t max_steps) {
  if (start_ab.size() != g.node_count())
    throw std::invalid_argument("start coloring has " + std::to_string(start_ab.size()) + " nodes, graph has " +
                                std::to_string(g.node_count()));
  if (!start_ab.only_ab()) throw std::invalid_argument("start coloring must use only A and B, got " + start_ab.str());

  RunRecord run;
  run.start_ab = start_ab;
  // No C at the start, so rule I applies everywhere.
  Coloring current = transliterate(start_ab);
  for (;;) {
    Coloring next = step(g, current);
    Coloring mirror = transliterate(current);
    run.states.push_back(std::move(current));
    if (next == mirror) {
      run.mirror_state = std::move(next);
      break;
    }
    if (run.states.size() >= max_steps) throw MaxStepsExceeded(max_steps);
    current = std::move(next);
  }
  run.stats = tally(run.states);
  return run;
}

std::vector<Coloring> full_cycle(const MixedGraph& g, const Coloring& start_ab, std::size_t max_steps) {
  if (!start_ab.only_ab()) throw std::invalid_argument("start coloring must use only A and B, got " + start_ab.str());
  const Coloring first = transliterate(start_ab);
  std::vector<Coloring> cycle{first};
  Coloring current = step(g, first);
  while (current != first) {
    if (cycle.size() >= max_steps) throw MaxStepsExceeded(max_steps);
    cycle.push_back(current);
    current = step(g, current);
  }
  return cycle;
}

}  // namespace trine
