#include "novak/generators.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "difference_search.hpp"
#include "novak/errors.hpp"

namespace novak {

void EnumerationBudget::check() const {
  if (max_solutions && *max_solutions == 0)
    throw DomainError("max_solutions must be positive");
  if (max_nodes == 0) throw DomainError("max_nodes must be positive");
}

std::vector<Block> family_key(const std::vector<Block>& blocks, Modulus v) {
  std::vector<Block> key;
  key.reserve(blocks.size());
  for (const auto& b : blocks) key.push_back(canonical_base_block(b, v));
  std::sort(key.begin(), key.end());
  return key;
}

std::vector<Block> multiplier_key(const std::vector<Block>& blocks, Modulus v) {
  std::vector<Block> best = family_key(blocks, v);
  for (Residue u = 2; u < v.value(); ++u) {
    if (gcd(u, v.value()) != 1) continue;
    std::vector<Block> scaled;
    scaled.reserve(blocks.size());
    for (const auto& b : blocks) {
      std::vector<Residue> xs;
      for (Residue x : b)
        xs.push_back(static_cast<Residue>(static_cast<std::uint64_t>(x) * u % v.value()));
      scaled.emplace_back(std::move(xs), v);
    }
    auto key = family_key(scaled, v);
    if (key < best) best = std::move(key);
  }
  return best;
}

namespace {

void check_cdf_parameters(Modulus v, std::uint32_t k, std::uint32_t lambda) {
  if (k < 2 || k > 32) throw DomainError("block size must lie in [2, 32]");
  if (lambda < 1) throw DomainError("lambda must be positive");
  if (v.value() <= k) throw DomainError("need v > k");
  const std::uint64_t num = static_cast<std::uint64_t>(lambda) * (v.value() - 1);
  if (num % (static_cast<std::uint64_t>(k) * (k - 1)) != 0)
    throw DomainError("lambda(v-1) must be divisible by k(k-1)");
}

// Emits keyed families in order with the dedup and solution-cap policy.
class FamilyEmitter {
 public:
  FamilyEmitter(Modulus v, std::uint32_t k, std::uint32_t lambda,
                const EnumerationBudget& budget, const FamilySink& sink,
                EnumerationSummary& summary)
      : v_(v), k_(k), lambda_(lambda), budget_(budget), sink_(sink), summary_(summary) {}

  std::vector<Block> key_of(const std::vector<std::vector<Residue>>& forms) const {
    std::vector<Block> blocks;
    blocks.reserve(forms.size());
    for (const auto& f : forms) blocks.push_back(Block::from_sorted(f));
    return budget_.quotient_multipliers ? multiplier_key(blocks, v_)
                                        : family_key(blocks, v_);
  }

  // Returns false when enumeration should stop.
  bool emit(std::vector<Block> key) {
    if (budget_.canonical_only || budget_.quotient_multipliers) {
      if (!seen_.insert(key).second) return true;
    }
    DifferenceFamily f{v_, k_, lambda_, std::move(key)};
    ++summary_.solutions;
    const bool more = sink_(f);
    if (budget_.max_solutions && summary_.solutions >= *budget_.max_solutions) {
      summary_.hit_solution_cap = true;
      return false;
    }
    return more;
  }

 private:
  Modulus v_;
  std::uint32_t k_;
  std::uint32_t lambda_;
  const EnumerationBudget& budget_;
  const FamilySink& sink_;
  EnumerationSummary& summary_;
  std::set<std::vector<Block>> seen_;
};

}  // namespace

EnumerationSummary enumerate_cdfs(Modulus v, std::uint32_t k, std::uint32_t lambda,
                                  const EnumerationBudget& budget,
                                  const FamilySink& sink) {
  check_cdf_parameters(v, k, lambda);
  budget.check();
  EnumerationSummary summary;
  FamilyEmitter emitter(v, k, lambda, budget, sink, summary);

  detail::DifferenceSearch search(v, k, lambda);
  search.set_node_limit(budget.max_nodes);
  search.run([&](const std::vector<std::vector<Residue>>& forms) {
    return emitter.emit(emitter.key_of(forms));
  });
  summary.nodes = search.nodes();
  summary.hit_node_cap = search.hit_node_limit();
  return summary;
}

EnumerationSummary enumerate_cdfs_parallel(Modulus v, std::uint32_t k,
                                           std::uint32_t lambda,
                                           const EnumerationBudget& budget,
                                           const FamilySink& sink) {
  check_cdf_parameters(v, k, lambda);
  budget.check();

  const auto roots = detail::DifferenceSearch(v, k, lambda).root_branches();
  std::vector<std::vector<std::vector<Block>>> found(roots.size());
  std::vector<std::uint64_t> nodes(roots.size(), 0);
  std::vector<char> truncated(roots.size(), 0);

  // Each branch collects keys independently; caps apply per branch.
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t r = 0; r < roots.size(); ++r) {
    detail::DifferenceSearch search(v, k, lambda);
    search.set_node_limit(budget.max_nodes);
    EnumerationSummary local;
    FamilySink keep = [](const DifferenceFamily&) { return true; };
    FamilyEmitter keyer(v, k, lambda, budget, keep, local);
    search.run_branch(roots[r], [&](const std::vector<std::vector<Residue>>& forms) {
      found[r].push_back(keyer.key_of(forms));
      return !budget.max_solutions || found[r].size() < *budget.max_solutions;
    });
    nodes[r] = search.nodes();
    truncated[r] = search.hit_node_limit();
  }

  EnumerationSummary summary;
  for (std::size_t r = 0; r < roots.size(); ++r) {
    summary.nodes += nodes[r];
    summary.hit_node_cap = summary.hit_node_cap || truncated[r];
  }
  FamilyEmitter emitter(v, k, lambda, budget, sink, summary);
  for (auto& keys : found)
    for (auto& key : keys)
      if (!emitter.emit(std::move(key))) return summary;
  return summary;
}

std::vector<DifferenceFamily> collect_cdfs(Modulus v, std::uint32_t k,
                                           std::uint32_t lambda,
                                           const EnumerationBudget& budget,
                                           EnumerationSummary* summary) {
  std::vector<DifferenceFamily> out;
  auto s = enumerate_cdfs(v, k, lambda, budget, [&](const DifferenceFamily& f) {
    out.push_back(f);
    return true;
  });
  if (summary) *summary = s;
  return out;
}

EnumerationSummary enumerate_cyclic_sts(std::uint32_t v, const EnumerationBudget& budget,
                                        const DesignSink& sink) {
  budget.check();
  EnumerationSummary summary;
  if (v < 3 || (v % 6 != 1 && v % 6 != 3)) return summary;
  const Modulus mod(v);

  if (v % 6 == 1) {
    return enumerate_cdfs(mod, 3, 1, budget, [&](const DifferenceFamily& f) {
      return sink(CyclicDesign::from_base_blocks(mod, 3, 1, f.base_blocks));
    });
  }

  // v = 3 (mod 6): the differences +-v/3 belong to the short orbit.
  const Residue third = v / 3;
  const Block short_base = Block::from_sorted({0, third, 2 * third});
  std::vector<std::uint32_t> counts(v, 0);
  counts[third] = counts[2 * third] = 1;

  FamilySink to_design = [&](const DifferenceFamily& f) {
    std::vector<Orbit> orbits{Orbit{short_base, third}};
    for (const auto& b : f.base_blocks) orbits.push_back(make_orbit(b, mod));
    return sink(CyclicDesign(mod, 3, 1, std::move(orbits)));
  };
  FamilyEmitter emitter(mod, 3, 1, budget, to_design, summary);
  detail::DifferenceSearch search(mod, 3, 1, std::move(counts));
  search.set_node_limit(budget.max_nodes);
  search.run([&](const std::vector<std::vector<Residue>>& forms) {
    return emitter.emit(emitter.key_of(forms));
  });
  summary.nodes = search.nodes();
  summary.hit_node_cap = search.hit_node_limit();
  return summary;
}

std::vector<CyclicDesign> collect_cyclic_sts(std::uint32_t v,
                                             const EnumerationBudget& budget,
                                             EnumerationSummary* summary) {
  std::vector<CyclicDesign> out;
  auto s = enumerate_cyclic_sts(v, budget, [&](const CyclicDesign& d) {
    out.push_back(d);
    return true;
  });
  if (summary) *summary = s;
  return out;
}

namespace {

// Cyclic STS difference triples by hill-climbing. Classes are residues
// 1..(v-1)/2 up to sign; block {0, x, b} covers classes x, |b|, |b - x|.
// Adding a block that collides with exactly one existing block evicts it,
// so the number of covered classes never decreases.
std::optional<std::vector<Block>> hill_climb_sts(Modulus v, std::mt19937_64& rng,
                                                 std::uint64_t max_steps) {
  const Residue n = v.value();
  const Residue classes = (n - 1) / 2;
  auto cls = [n](Residue x) { return std::min(x, n - x); };

  struct Triple {
    Residue a, b;            // block {0, a, b}
    Residue c[3];            // its classes
    bool live;
  };
  std::vector<Triple> triples;
  std::vector<std::int64_t> owner(classes + 1, -1);
  std::vector<Residue> uncovered(classes);
  std::vector<std::size_t> pos(classes + 1);
  std::iota(uncovered.begin(), uncovered.end(), Residue{1});
  for (Residue c = 1; c <= classes; ++c) pos[c] = c - 1;

  auto cover = [&](Residue c, std::int64_t t) {
    owner[c] = t;
    const std::size_t p = pos[c];
    uncovered[p] = uncovered.back();
    pos[uncovered[p]] = p;
    uncovered.pop_back();
  };
  auto uncover = [&](Residue c) {
    owner[c] = -1;
    pos[c] = uncovered.size();
    uncovered.push_back(c);
  };

  std::uniform_int_distribution<Residue> any_b(1, n - 1);
  for (std::uint64_t step = 0; step < max_steps && !uncovered.empty(); ++step) {
    std::uniform_int_distribution<std::size_t> pick(0, uncovered.size() - 1);
    const Residue x = uncovered[pick(rng)];
    const Residue b = any_b(rng);
    if (b == x) continue;
    const Residue c1 = cls(b), c2 = cls(v.sub(b, x));
    if (c1 == x || c2 == x || c1 == c2) continue;
    const std::int64_t o1 = owner[c1], o2 = owner[c2];
    if (o1 >= 0 && o2 >= 0 && o1 != o2) continue;
    const std::int64_t evict = o1 >= 0 ? o1 : o2;
    if (evict >= 0) {
      auto& t = triples[static_cast<std::size_t>(evict)];
      t.live = false;
      for (Residue c : t.c) uncover(c);
    }
    const auto id = static_cast<std::int64_t>(triples.size());
    triples.push_back({x, b, {x, c1, c2}, true});
    for (Residue c : {x, c1, c2}) cover(c, id);
  }
  if (!uncovered.empty()) return std::nullopt;

  std::vector<Block> blocks;
  for (const auto& t : triples)
    if (t.live) blocks.push_back(canonical_base_block(Block({0, t.a, t.b}, v), v));
  std::sort(blocks.begin(), blocks.end());
  return blocks;
}

}  // namespace

DifferenceFamily construct_sts_cdf(std::uint32_t v, std::uint64_t seed,
                                   std::uint32_t max_restarts) {
  if (v < 7 || v % 6 != 1)
    throw DomainError("construct_sts_cdf needs v = 1 (mod 6), v >= 7");
  const Modulus mod(v);
  std::mt19937_64 rng(seed);

  for (std::uint32_t attempt = 0; attempt < max_restarts; ++attempt) {
    std::vector<Block> blocks;
    if (v < 100) {
      detail::DifferenceSearch search(mod, 3, 1);
      std::vector<Residue> order(v - 1);
      std::iota(order.begin(), order.end(), Residue{1});
      std::shuffle(order.begin(), order.end(), rng);
      search.set_candidate_order(std::move(order));
      search.set_node_limit(5'000'000);
      search.run([&](const std::vector<std::vector<Residue>>& forms) {
        for (const auto& f : forms) blocks.push_back(Block::from_sorted(f));
        return false;
      });
      if (blocks.empty()) continue;
      blocks = family_key(blocks, mod);
    } else {
      auto found = hill_climb_sts(mod, rng, 200ULL * v * v);
      if (!found) continue;
      blocks = std::move(*found);
    }
    DifferenceFamily f{mod, 3, 1, std::move(blocks)};
    if (is_cdf(f)) return f;
  }
  throw RetryExhaustedError("no (" + std::to_string(v) + ",3,1)-CDF found after " +
                            std::to_string(max_restarts) + " attempts");
}

CyclicDesign superimpose(const DifferenceFamily& family, std::uint32_t copies) {
  if (copies == 0) throw DomainError("need at least one copy");
  if (!is_cdf(family))
    throw PreconditionError("superimpose needs a cyclic difference family");
  std::vector<Orbit> orbits;
  for (std::uint32_t c = 0; c < copies; ++c)
    for (const auto& b : family.base_blocks) orbits.push_back(make_orbit(b, family.v));
  return CyclicDesign(family.v, family.k, family.lambda * copies, std::move(orbits));
}

DifferenceFamily planar_difference_set(std::uint32_t k) {
  if (k < 2) throw DomainError("block size must be at least 2");
  const Modulus v(k * (k - 1) + 1);
  EnumerationBudget budget;
  budget.max_solutions = 1;
  auto found = collect_cdfs(v, k, 1, budget);
  if (found.empty())
    throw DomainError("no cyclic (" + std::to_string(v.value()) + "," +
                      std::to_string(k) + ",1) difference set exists");
  return found.front();
}

CyclicDesign superimposed_counterexample(std::uint32_t k, std::uint32_t copies) {
  return superimpose(planar_difference_set(k), copies);
}

}  // namespace novak
