#include "trine/packed.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace trine {

namespace {

std::uint64_t mask_for(std::size_t n) { return n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1; }

template <class F>
void for_each_bit(std::uint64_t bits, F&& f) {
  while (bits) {
    f(static_cast<std::size_t>(std::countr_zero(bits)));
    bits &= bits - 1;
  }
}

}  // namespace

PackedAutomaton::PackedAutomaton(const MixedGraph& g) : n_(g.node_count()), full_(mask_for(g.node_count())) {
  if (n_ > kMaxNodes) throw std::invalid_argument("packed kernel supports at most 64 nodes");
  masks_.assign(n_, 0);
  for (NodeId v = 0; v < n_; ++v)
    for (NodeId u : g.out_neighbors(v)) masks_[v] |= std::uint64_t{1} << u;
}

PackedAutomaton PackedAutomaton::circulant(std::size_t ring_size, std::vector<std::size_t> shifts) {
  if (ring_size == 0 || ring_size > kMaxNodes) throw std::invalid_argument("packed kernel supports 1..64 nodes");
  for (std::size_t s : shifts)
    if (s == 0 || s >= ring_size) throw std::invalid_argument("circulant shift out of range");
  std::sort(shifts.begin(), shifts.end());
  shifts.erase(std::unique(shifts.begin(), shifts.end()), shifts.end());
  PackedAutomaton aut;
  aut.n_ = ring_size;
  aut.full_ = mask_for(ring_size);
  aut.circulant_ = true;
  aut.shifts_ = std::move(shifts);
  return aut;
}

PackedState PackedAutomaton::pack(const Coloring& c) const {
  PackedState s;
  for (std::size_t v = 0; v < c.size(); ++v) {
    if (c[v] == Color::B) s.b |= std::uint64_t{1} << v;
    if (c[v] == Color::C) s.c |= std::uint64_t{1} << v;
  }
  return s;
}

Coloring PackedAutomaton::unpack(PackedState s) const {
  Coloring c(n_);
  for (std::size_t v = 0; v < n_; ++v) {
    if (s.b >> v & 1) c[v] = Color::B;
    else if (s.c >> v & 1) c[v] = Color::C;
  }
  return c;
}

RunStats run_packed(const PackedAutomaton& aut, std::uint64_t start_b, std::size_t max_steps,
                    std::vector<PackedState>* states) {
  const std::size_t n = aut.node_count();
  RunStats stats;
  stats.n_a.assign(n, 0);
  stats.n_b.assign(n, 0);
  stats.n_c.assign(n, 0);

  PackedState current = PackedAutomaton::transliterate({start_b & aut.full_mask(), 0});
  std::size_t t = 0;
  for (;;) {
    ++t;
    for_each_bit(current.b, [&](std::size_t v) { ++stats.n_b[v]; });
    for_each_bit(current.c, [&](std::size_t v) { ++stats.n_c[v]; });
    if (states) states->push_back(current);
    const PackedState next = aut.step(current);
    if (next == PackedAutomaton::transliterate(current)) break;
    if (t >= max_steps) throw MaxStepsExceeded(max_steps);
    current = next;
  }
  stats.period = t;
  for (std::size_t v = 0; v < n; ++v) stats.n_a[v] = static_cast<int>(t) - stats.n_b[v] - stats.n_c[v];
  stats.last = aut.unpack(current);
  return stats;
}

RunRecord to_run_record(const PackedAutomaton& aut, std::uint64_t start_b, const std::vector<PackedState>& states) {
  RunRecord run;
  run.start_ab = aut.unpack({start_b & aut.full_mask(), 0});
  run.states.reserve(states.size());
  for (const PackedState& s : states) run.states.push_back(aut.unpack(s));
  if (!states.empty()) run.mirror_state = aut.unpack(PackedAutomaton::transliterate(states.back()));
  run.stats = tally(run.states);
  return run;
}

}  // namespace trine
