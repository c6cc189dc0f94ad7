#include "novak/search.hpp"

#include <algorithm>
#include <numeric>

#include "novak/errors.hpp"

namespace novak {

std::string to_string(SearchStatus status) {
  switch (status) {
    case SearchStatus::feasible:
      return "FEASIBLE";
    case SearchStatus::infeasible:
      return "INFEASIBLE";
    case SearchStatus::timeout:
      return "TIMEOUT";
  }
  return "UNKNOWN";
}

namespace {

// Variables with explicit candidate blocks; candidates must not share points
// (and, when classes are tracked, must not share classes {x, v-x}).
class TransversalSearch {
 public:
  struct Candidate {
    Residue tag;                   // translate reported in the witness
    std::vector<Residue> points;
    std::vector<Residue> classes;  // empty unless classes are tracked
  };

  TransversalSearch(std::uint32_t universe, std::vector<std::vector<Candidate>> vars,
                    bool track_classes, std::uint64_t max_nodes)
      : vars_(std::move(vars)),
        points_(universe),
        classes_(universe),
        track_classes_(track_classes),
        max_nodes_(max_nodes),
        assigned_(vars_.size(), kUnassigned) {}

  SearchOutcome run() {
    SearchOutcome out;
    out.orbit_order.resize(vars_.size());
    std::iota(out.orbit_order.begin(), out.orbit_order.end(), std::size_t{0});
    const Result r = dfs(0);
    out.stats = stats_;
    if (r == Result::found) {
      out.status = SearchStatus::feasible;
      RepresentativeSystem rs;
      for (std::size_t i = 0; i < vars_.size(); ++i)
        rs.translates.push_back(vars_[i][assigned_[i]].tag);
      out.witness = std::move(rs);
    } else if (r == Result::exhausted) {
      out.status = SearchStatus::infeasible;
    } else {
      out.status = SearchStatus::timeout;
    }
    return out;
  }

 private:
  enum class Result { found, exhausted, stopped };
  static constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);

  bool fits(const Candidate& c) const noexcept {
    if (points_.intersects(c.points)) return false;
    return !track_classes_ || !classes_.intersects(c.classes);
  }

  Result dfs(std::uint32_t depth) {
    stats_.max_depth = std::max(stats_.max_depth, depth);
    // Most constrained unassigned variable; ties go to the lowest index.
    std::size_t best = kUnassigned, best_count = 0;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (assigned_[i] != kUnassigned) continue;
      std::size_t live = 0;
      for (const auto& c : vars_[i])
        if (fits(c) && ++live >= best_count && best != kUnassigned) break;
      if (best == kUnassigned || live < best_count) {
        best = i;
        best_count = live;
        if (live == 0) break;
      }
    }
    if (best == kUnassigned) return Result::found;
    if (best_count == 0) {
      ++stats_.prunes;
      return Result::exhausted;
    }
    auto& cands = vars_[best];
    for (std::size_t ci = 0; ci < cands.size(); ++ci) {
      const auto& c = cands[ci];
      if (!fits(c)) continue;
      if (++stats_.nodes > max_nodes_) return Result::stopped;
      points_.insert(c.points);
      if (track_classes_) classes_.insert(c.classes);
      assigned_[best] = ci;
      const Result r = dfs(depth + 1);
      if (r == Result::found) return r;
      assigned_[best] = kUnassigned;
      points_.erase(c.points);
      if (track_classes_) classes_.erase(c.classes);
      if (r == Result::stopped) return r;
    }
    return Result::exhausted;
  }

  std::vector<std::vector<Candidate>> vars_;
  PointSet points_;
  PointSet classes_;
  bool track_classes_;
  std::uint64_t max_nodes_;
  std::vector<std::size_t> assigned_;
  SearchStats stats_;
};

}  // namespace

SearchOutcome find_disjoint_representatives(const CyclicDesign& design, SearchMode mode,
                                            const SearchBudget& budget) {
  const Modulus v = design.v();
  const bool symmetric = mode == SearchMode::symmetric;
  if (symmetric && (design.k() != 3 || design.lambda() != 1 || v.value() % 6 != 1))
    throw DomainError("symmetric mode needs k=3, lambda=1, v = 1 (mod 6)");
  check_structure(design);

  std::vector<std::vector<TransversalSearch::Candidate>> vars;
  vars.reserve(design.orbit_count());
  for (const auto& o : design.orbits()) {
    auto& cands = vars.emplace_back();
    for (Residue t = 0; t < o.length; ++t) {
      const Block b = translate(o.base, t, v);
      TransversalSearch::Candidate c{t, {b.begin(), b.end()}, {}};
      if (symmetric) {
        if (b.contains(0)) continue;
        for (Residue x : b) c.classes.push_back(std::min(x, v.neg(x)));
        std::sort(c.classes.begin(), c.classes.end());
        if (std::adjacent_find(c.classes.begin(), c.classes.end()) != c.classes.end())
          continue;
      }
      cands.push_back(std::move(c));
    }
  }
  return TransversalSearch(v.value(), std::move(vars), symmetric, budget.max_nodes).run();
}

SearchOutcome find_translate_representatives(
    const std::vector<Block>& sets, Modulus v,
    const std::vector<std::vector<Residue>>& translate_sets, const SearchBudget& budget) {
  if (sets.size() != translate_sets.size())
    throw InputError("need one translate set per set");
  std::vector<std::vector<TransversalSearch::Candidate>> vars;
  vars.reserve(sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (translate_sets[i].empty())
      throw InputError("translate set " + std::to_string(i) + " is empty");
    std::vector<Residue> ts = translate_sets[i];
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    auto& cands = vars.emplace_back();
    for (Residue t : ts) {
      const Block b = translate(sets[i], t, v);
      cands.push_back({t, {b.begin(), b.end()}, {}});
    }
  }
  return TransversalSearch(v.value(), std::move(vars), false, budget.max_nodes).run();
}

SearchOutcome find_translate_representatives(
    const DifferenceFamily& family, const std::vector<std::vector<Residue>>& translate_sets,
    const SearchBudget& budget) {
  check_family_shape(family);
  return find_translate_representatives(family.base_blocks, family.v, translate_sets,
                                        budget);
}

std::uint64_t multinomial_valuation(std::uint64_t d, std::uint64_t m, std::uint64_t p) {
  if (p < 2) throw DomainError("base must be at least 2");
  std::vector<std::uint64_t> addend;
  for (std::uint64_t x = d; x > 0; x /= p) addend.push_back(x % p);
  std::vector<std::uint64_t> acc;
  std::uint64_t carries = 0;
  for (std::uint64_t step = 0; step < m; ++step) {
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < addend.size() || carry; ++i) {
      if (i == acc.size()) acc.push_back(0);
      const std::uint64_t s = acc[i] + (i < addend.size() ? addend[i] : 0) + carry;
      acc[i] = s % p;
      carry = s / p;
      carries += carry;
    }
  }
  return carries;
}

KPReport kp_hypothesis_check(const KPInstance& inst) {
  if (!is_prime(inst.p)) throw DomainError(std::to_string(inst.p) + " is not prime");
  if (inst.d == 0) throw InputError("d must be positive");
  if (inst.sets.empty()) throw InputError("instance has no sets");
  if (inst.sets.size() != inst.translates.size())
    throw InputError("need one translate set per set");
  const Modulus p(inst.p);
  for (std::size_t i = 0; i < inst.sets.size(); ++i) {
    if (inst.sets[i].empty() || inst.translates[i].empty())
      throw InputError("set " + std::to_string(i) + " is empty");
    for (Residue x : inst.sets[i])
      if (x >= inst.p) throw InputError("element outside Z_p");
    for (Residue t : inst.translates[i])
      if (t >= inst.p) throw InputError("translate outside Z_p");
  }

  KPReport r;
  const std::uint64_t m = inst.m();
  r.multinomial_valuation = multinomial_valuation(inst.d, m, inst.p);
  r.multinomial_nonzero = r.multinomial_valuation == 0;

  r.diameter_ok = true;
  PointSet diff(inst.p);
  for (std::size_t i = 0; i < m && r.diameter_ok; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      diff.clear();
      for (Residue x : inst.sets[i])
        for (Residue y : inst.sets[j]) diff.set(p.sub(x, y));
      if (diff.count() > 2 * inst.d) {
        r.diameter_ok = false;
        break;
      }
    }
  }

  const std::uint64_t need = (m - 1) * inst.d + 1;
  r.translate_size_ok = true;
  for (const auto& ts : inst.translates) {
    std::vector<Residue> u = ts;
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
    if (u.size() < need) r.translate_size_ok = false;
  }
  r.all = r.multinomial_nonzero && r.diameter_ok && r.translate_size_ok;
  return r;
}

KPInstance prime_case_instance(const CyclicDesign& design) {
  KPInstance inst;
  inst.p = design.v().value();
  inst.d = (static_cast<std::uint64_t>(design.k()) * design.k() + 1) / 2;
  std::vector<Residue> all(inst.p);
  std::iota(all.begin(), all.end(), Residue{0});
  for (const auto& o : design.orbits()) {
    inst.sets.push_back(o.base);
    inst.translates.push_back(all);
  }
  return inst;
}

SearchOutcome prime_case_driver(const CyclicDesign& design, const SearchBudget& budget) {
  if (!is_prime(design.v().value()))
    throw DomainError("prime_case_driver needs prime v");
  if (design.lambda() != 1) throw DomainError("prime_case_driver needs lambda = 1");
  check_structure(design);
  if (design.orbit_count() == 0) {
    SearchOutcome out;
    out.status = SearchStatus::feasible;
    out.witness = RepresentativeSystem{};
    return out;
  }
  const KPInstance inst = prime_case_instance(design);
  if (!kp_hypothesis_check(inst).all)
    return find_disjoint_representatives(design, SearchMode::plain, budget);
  auto out = find_translate_representatives(inst.sets, design.v(), inst.translates, budget);
  out.used_translate_search = true;
  return out;
}

}  // namespace novak
