#include "novak/hypergraph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include <omp.h>

#include "novak/errors.hpp"

namespace novak {

Hypergraph::Hypergraph(std::uint32_t vertices, std::uint32_t uniformity)
    : vertices_(vertices), r_(uniformity) {
  if (uniformity == 0) throw InputError("uniformity must be positive");
}

void Hypergraph::add_edge(std::span<const std::uint32_t> vertices) {
  if (vertices.size() != r_) throw InputError("edge has the wrong size");
  std::vector<std::uint32_t> e(vertices.begin(), vertices.end());
  std::sort(e.begin(), e.end());
  if (std::adjacent_find(e.begin(), e.end()) != e.end())
    throw InputError("edge repeats a vertex");
  if (e.back() >= vertices_) throw InputError("edge vertex out of range");
  flat_.insert(flat_.end(), e.begin(), e.end());
}

std::vector<std::uint32_t> Hypergraph::degrees() const {
  std::vector<std::uint32_t> deg(vertices_, 0);
  for (std::uint32_t x : flat_) ++deg[x];
  return deg;
}

std::uint32_t Hypergraph::max_degree() const {
  const auto deg = degrees();
  return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

std::vector<std::uint32_t> assign_slots(std::size_t m, std::uint32_t w, std::uint32_t s) {
  const std::uint64_t lo = static_cast<std::uint64_t>(s) * m;
  const std::uint64_t hi = static_cast<std::uint64_t>(s + 1) * m;
  if (m == 0 || lo > w || hi < w)
    throw DomainError("cannot split w = " + std::to_string(w) + " into " + std::to_string(m) +
                      " parts from {" + std::to_string(s) + "," + std::to_string(s + 1) + "}");
  std::vector<std::uint32_t> out(m, s);
  for (std::uint64_t i = 0; i < w - lo; ++i) ++out[i];
  return out;
}

AuxiliaryHypergraph::EdgeInfo AuxiliaryHypergraph::edge_info(std::size_t e) const noexcept {
  EdgeInfo info{};
  info.slot = static_cast<std::uint32_t>(e / v);
  info.translate = static_cast<Residue>(e % v);
  info.position = slot_position[info.slot];
  info.orbit = full_orbits[info.position];
  info.j = info.slot - slot_offset[info.position];
  return info;
}

AuxiliaryHypergraph build_auxiliary_hypergraph(const CyclicDesign& design) {
  AuxiliaryHypergraph g;
  const Modulus vm = design.v();
  const std::uint32_t k = design.k();
  g.v = vm.value();
  g.w = (g.v - 1) / k;
  g.s = (k - 1) / design.lambda();
  for (std::size_t i = 0; i < design.orbit_count(); ++i)
    if (design.orbits()[i].full(vm)) g.full_orbits.push_back(i);
  if (g.full_orbits.empty()) throw DomainError("design has no full orbit");
  g.slots = assign_slots(g.full_orbits.size(), g.w, g.s);

  std::uint32_t offset = 0;
  for (std::size_t pos = 0; pos < g.slots.size(); ++pos) {
    g.slot_offset.push_back(offset);
    for (std::uint32_t j = 0; j < g.slots[pos]; ++j) g.slot_position.push_back(pos);
    offset += g.slots[pos];
  }

  g.graph = Hypergraph(g.v + g.w, k + 1);
  std::vector<std::uint32_t> edge(k + 1);
  for (std::uint32_t slot = 0; slot < g.w; ++slot) {
    const std::size_t orbit = g.full_orbits[g.slot_position[slot]];
    for (Residue t = 0; t < g.v; ++t) {
      const Block b = design.block(orbit, t);
      std::copy(b.begin(), b.end(), edge.begin());
      edge[k] = g.v + slot;
      g.graph.add_edge(edge);
    }
  }

  const auto deg = g.graph.degrees();
  g.v_degree = deg[0];
  g.w_degree = g.w ? deg[g.v] : 0;
  for (std::uint32_t x = 0; x < g.v; ++x)
    if (deg[x] != k * g.w) throw InconsistencyError("point degree differs from k w");
  for (std::uint32_t x = g.v; x < g.v + g.w; ++x)
    if (deg[x] != g.v) throw InconsistencyError("slot degree differs from v");
  if (g.v_degree + k < g.v || g.v_degree >= g.v)
    throw InconsistencyError("point degree outside [v-k, v-1]");

  for (std::size_t e = 0; e < g.graph.edge_count(); ++e) {
    const auto ed = g.graph.edge(e);
    if (ed[k - 1] >= g.v || ed[k] < g.v) throw InconsistencyError("edge without one slot");
  }
  g.max_w_codegree = 0;
  g.max_vw_codegree = g.w ? k : 0;

  std::vector<std::uint64_t> codeg(g.v, 0);
  for (std::size_t pos = 0; pos < g.full_orbits.size(); ++pos) {
    const Block& base = design.orbits()[g.full_orbits[pos]].base;
    for (Residue a : base)
      for (Residue b : base)
        if (a != b) codeg[vm.sub(b, a)] += g.slots[pos];
  }
  const std::uint64_t cmax = *std::max_element(codeg.begin() + 1, codeg.end());
  if (cmax > static_cast<std::uint64_t>(design.lambda()) * (g.s + 1))
    throw InconsistencyError("point-pair codegree exceeds lambda (s+1)");
  g.max_v_codegree = static_cast<std::uint32_t>(cmax);
  return g;
}

namespace {

constexpr std::uint32_t kUncoloured = static_cast<std::uint32_t>(-1);

std::uint64_t mix(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t edge_random(std::uint64_t seed, std::uint32_t round, std::size_t e) noexcept {
  return mix(mix(mix(seed) ^ round) ^ e);
}

class Palettes {
 public:
  Palettes(std::uint32_t vertices, std::uint32_t colours)
      : colours_(colours), words_((colours + 63) / 64), bits_(vertices * words_, 0) {}

  void use(std::uint32_t x, std::uint32_t c) noexcept {
    bits_[x * words_ + c / 64] |= std::uint64_t{1} << (c % 64);
  }

  bool is_free(std::span<const std::uint32_t> edge, std::uint32_t c) const noexcept {
    for (std::uint32_t x : edge)
      if ((bits_[x * words_ + c / 64] >> (c % 64)) & 1U) return false;
    return true;
  }

  // Uniform free colour for the edge, or kUncoloured. A few rejection
  // draws first, then an exact count.
  std::uint32_t pick(std::span<const std::uint32_t> edge, std::uint64_t r) const noexcept {
    for (std::uint64_t draw = 0; draw < 8; ++draw) {
      const auto c = static_cast<std::uint32_t>(mix(r + draw) % colours_);
      if (is_free(edge, c)) return c;
    }
    std::uint64_t free_count = 0;
    for (std::size_t wd = 0; wd < words_; ++wd) free_count += std::popcount(free_word(edge, wd));
    if (free_count == 0) return kUncoloured;
    std::uint64_t target = r % free_count;
    for (std::size_t wd = 0; wd < words_; ++wd) {
      std::uint64_t f = free_word(edge, wd);
      const auto n = static_cast<std::uint64_t>(std::popcount(f));
      if (target >= n) {
        target -= n;
        continue;
      }
      for (; target > 0; --target) f &= f - 1;
      return static_cast<std::uint32_t>(wd * 64 + std::countr_zero(f));
    }
    return kUncoloured;
  }

  std::uint32_t first_free(std::span<const std::uint32_t> edge) const noexcept {
    for (std::size_t wd = 0; wd < words_; ++wd)
      if (const std::uint64_t f = free_word(edge, wd))
        return static_cast<std::uint32_t>(wd * 64 + std::countr_zero(f));
    return kUncoloured;
  }

 private:
  std::uint64_t free_word(std::span<const std::uint32_t> edge, std::size_t wd) const noexcept {
    std::uint64_t used = 0;
    for (std::uint32_t x : edge) used |= bits_[x * words_ + wd];
    std::uint64_t mask = ~std::uint64_t{0};
    if (wd + 1 == words_ && colours_ % 64) mask = (std::uint64_t{1} << (colours_ % 64)) - 1;
    return ~used & mask;
  }

  std::uint32_t colours_;
  std::size_t words_;
  std::vector<std::uint64_t> bits_;
};

void propose_serial(const Hypergraph& g, const Palettes& pal, const std::vector<std::size_t>& batch,
                    std::uint64_t seed, std::uint32_t round, std::vector<std::uint32_t>& out) {
  for (std::size_t i = 0; i < batch.size(); ++i)
    out[i] = pal.pick(g.edge(batch[i]), edge_random(seed, round, batch[i]));
}

void propose_parallel(const Hypergraph& g, const Palettes& pal,
                      const std::vector<std::size_t>& batch, std::uint64_t seed,
                      std::uint32_t round, std::vector<std::uint32_t>& out) {
  const auto n = static_cast<std::int64_t>(batch.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i)
    out[i] = pal.pick(g.edge(batch[i]), edge_random(seed, round, batch[i]));
}

}  // namespace

std::optional<Colouring> nibble_edge_colouring(const Hypergraph& graph, std::uint32_t colours,
                                               std::uint64_t seed, const NibbleParams& params,
                                               Execution exec) {
  if (colours == 0) throw InputError("need at least one colour");
  if (!(params.batch_fraction > 0.0 && params.batch_fraction <= 1.0))
    throw InputError("batch fraction must lie in (0, 1]");
  const std::size_t edges = graph.edge_count();
  if (edges >= (std::size_t{1} << 24) ||
      static_cast<std::uint64_t>(graph.vertex_count()) * colours >= (std::uint64_t{1} << 40))
    throw InputError("hypergraph too large for the nibble");
  Colouring out;
  out.colours = colours;
  out.colour_of.assign(edges, kUncoloured);
  Palettes pal(graph.vertex_count(), colours);

  std::vector<std::size_t> open(edges);
  std::iota(open.begin(), open.end(), std::size_t{0});
  std::vector<std::size_t> batch;
  std::vector<std::uint32_t> proposal;
  std::vector<std::uint64_t> keys;  // (vertex * colours + colour) << 24 | batch index
  std::vector<char> rejected;

  for (std::uint32_t round = 0; round < params.max_rounds && !open.empty(); ++round) {
    const auto size = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(params.batch_fraction * open.size())));
    // Partial Fisher-Yates on the open list, keyed on (seed, round).
    for (std::size_t i = 0; i < size; ++i) {
      const std::size_t j = i + edge_random(seed ^ 0x5bd1e995ULL, round, i) % (open.size() - i);
      std::swap(open[i], open[j]);
    }
    batch.assign(open.begin(), open.begin() + size);
    proposal.assign(size, kUncoloured);
    if (exec == Execution::parallel)
      propose_parallel(graph, pal, batch, seed, round, proposal);
    else
      propose_serial(graph, pal, batch, seed, round, proposal);

    // An edge with an empty palette stays uncoloured; the greedy pass fails on it.
    if (std::find(proposal.begin(), proposal.end(), kUncoloured) != proposal.end()) break;
    keys.clear();
    for (std::size_t i = 0; i < size; ++i) {
      for (std::uint32_t x : graph.edge(batch[i]))
        keys.push_back(((static_cast<std::uint64_t>(x) * colours + proposal[i]) << 24) | i);
    }
    std::sort(keys.begin(), keys.end());
    rejected.assign(size, 0);
    for (std::size_t a = 0; a < keys.size();) {
      std::size_t b = a + 1;
      while (b < keys.size() && (keys[b] >> 24) == (keys[a] >> 24)) ++b;
      if (b - a > 1)
        for (std::size_t c = a; c < b; ++c) rejected[keys[c] & 0xffffff] = 1;
      a = b;
    }

    std::size_t committed = 0;
    for (std::size_t i = 0; i < size; ++i) {
      if (rejected[i]) continue;
      out.colour_of[batch[i]] = proposal[i];
      for (std::uint32_t x : graph.edge(batch[i])) pal.use(x, proposal[i]);
      ++committed;
    }
    out.nibble_coloured += committed;
    out.rounds = round + 1;
    std::erase_if(open, [&](std::size_t e) { return out.colour_of[e] != kUncoloured; });
    if (committed == 0) break;
  }

  std::sort(open.begin(), open.end());
  for (std::size_t e : open) {
    const std::uint32_t c = pal.first_free(graph.edge(e));
    if (c == kUncoloured) return std::nullopt;
    out.colour_of[e] = c;
    for (std::uint32_t x : graph.edge(e)) pal.use(x, c);
    ++out.greedy_coloured;
  }
  return out;
}

bool is_proper_colouring(const Hypergraph& graph, const Colouring& colouring) {
  if (colouring.colour_of.size() != graph.edge_count()) return false;
  std::vector<std::vector<std::uint32_t>> star(graph.vertex_count());
  for (std::size_t e = 0; e < graph.edge_count(); ++e) {
    const std::uint32_t c = colouring.colour_of[e];
    if (c >= colouring.colours) return false;
    for (std::uint32_t x : graph.edge(e)) star[x].push_back(c);
  }
  for (auto& colours : star) {
    std::sort(colours.begin(), colours.end());
    if (std::adjacent_find(colours.begin(), colours.end()) != colours.end()) return false;
  }
  return true;
}

}  // namespace novak
